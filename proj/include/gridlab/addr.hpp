#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace gridlab {

/// Grid limits: columns A..ZZ, rows 1..65536 (0-based internally).
struct GridBounds {
    int cols = 702;
    int rows = 65536;

    bool contains(int col, int row) const {
        return col >= 0 && row >= 0 && col < cols && row < rows;
    }
};

/// Absolute cell coordinate, 0-based. Ordering is row-major:
/// top-to-bottom, then left-to-right.
struct CellAddr {
    int col = 0;
    int row = 0;

    friend auto operator<=>(const CellAddr& a, const CellAddr& b) {
        if (auto c = a.row <=> b.row; c != 0) return c;
        return a.col <=> b.col;
    }
    friend bool operator==(const CellAddr&, const CellAddr&) = default;
};

/// Rectangular extent, inclusive corners, normalized (top_left <= bottom_right
/// on both axes). An extent with rows()==0 or cols()==0 is empty.
struct Rect {
    CellAddr top_left;
    CellAddr bottom_right;

    static Rect cell(CellAddr a) { return {a, a}; }
    static Rect normalized(CellAddr a, CellAddr b);

    int cols() const { return bottom_right.col - top_left.col + 1; }
    int rows() const { return bottom_right.row - top_left.row + 1; }
    long long cell_count() const { return (long long)cols() * rows(); }

    bool contains(CellAddr a) const {
        return a.col >= top_left.col && a.col <= bottom_right.col &&
               a.row >= top_left.row && a.row <= bottom_right.row;
    }
    bool contains(const Rect& r) const {
        return contains(r.top_left) && contains(r.bottom_right);
    }
    bool intersects(const Rect& r) const {
        return !(r.bottom_right.col < top_left.col || r.top_left.col > bottom_right.col ||
                 r.bottom_right.row < top_left.row || r.top_left.row > bottom_right.row);
    }

    friend bool operator==(const Rect&, const Rect&) = default;

    /// Visits cells in row-major order.
    template <class F>
    void for_each(F&& f) const {
        for (int r = top_left.row; r <= bottom_right.row; ++r)
            for (int c = top_left.col; c <= bottom_right.col; ++c)
                f(CellAddr{c, r});
    }
};

/// "A" -> 0, "Z" -> 25, "AA" -> 26, "ZZ" -> 701.
std::optional<int> column_from_label(std::string_view label);
std::string column_label(int col);

/// "B7" -> {1, 6}. Rejects '$' markers; use the formula parser for those.
std::optional<CellAddr> addr_from_text(std::string_view text);
std::string addr_text(CellAddr a);

/// "A1:B3" -> normalized Rect; also accepts a single address as a 1x1 rect.
std::optional<Rect> rect_from_text(std::string_view text);
std::string rect_text(const Rect& r);

} // namespace gridlab
