#include "gridlab/addr.hpp"

#include <cctype>
#include <charconv>

namespace gridlab {

Rect Rect::normalized(CellAddr a, CellAddr b) {
    Rect r;
    r.top_left = {std::min(a.col, b.col), std::min(a.row, b.row)};
    r.bottom_right = {std::max(a.col, b.col), std::max(a.row, b.row)};
    return r;
}

std::optional<int> column_from_label(std::string_view label) {
    if (label.empty() || label.size() > 2) return std::nullopt;
    int v = 0;
    for (char c : label) {
        if (c < 'A' || c > 'Z') return std::nullopt;
        v = v * 26 + (c - 'A' + 1);
    }
    return v - 1;
}

std::string column_label(int col) {
    if (col < 26) return std::string(1, char('A' + col));
    return std::string{char('A' + col / 26 - 1), char('A' + col % 26)};
}

std::optional<CellAddr> addr_from_text(std::string_view text) {
    size_t i = 0;
    while (i < text.size() && text[i] >= 'A' && text[i] <= 'Z') ++i;
    if (i == 0 || i == text.size()) return std::nullopt;
    auto col = column_from_label(text.substr(0, i));
    if (!col) return std::nullopt;
    int row1 = 0;
    auto [p, ec] = std::from_chars(text.data() + i, text.data() + text.size(), row1);
    if (ec != std::errc{} || p != text.data() + text.size() || row1 < 1) return std::nullopt;
    return CellAddr{*col, row1 - 1};
}

std::string addr_text(CellAddr a) {
    return column_label(a.col) + std::to_string(a.row + 1);
}

std::optional<Rect> rect_from_text(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        auto a = addr_from_text(text);
        if (!a) return std::nullopt;
        return Rect::cell(*a);
    }
    auto a = addr_from_text(text.substr(0, colon));
    auto b = addr_from_text(text.substr(colon + 1));
    if (!a || !b) return std::nullopt;
    return Rect::normalized(*a, *b);
}

std::string rect_text(const Rect& r) {
    if (r.top_left == r.bottom_right) return addr_text(r.top_left);
    return addr_text(r.top_left) + ":" + addr_text(r.bottom_right);
}

} // namespace gridlab
