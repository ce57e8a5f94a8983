#include "gridlab/sheet.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "gridlab/error.hpp"
#include "gridlab/parser.hpp"

namespace gridlab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace((unsigned char)s.front())) s.remove_prefix(1);
    while (!s.empty() && std::isspace((unsigned char)s.back())) s.remove_suffix(1);
    return s;
}

Value literal_value(const Expr& e) {
    if (auto* n = std::get_if<NumberLit>(&e.node)) return n->value;
    if (auto* t = std::get_if<TextLit>(&e.node)) return t->value;
    if (auto* b = std::get_if<BoolLit>(&e.node)) return b->value;
    return Blank{};
}

} // namespace

SheetDelta Sheet::set_content(CellAddr addr, std::string_view raw_text) {
    if (!bounds_.contains(addr.col, addr.row))
        throw OutOfBounds("cell " + addr_text(addr) + " is outside the grid");
    std::string_view text = trim(raw_text);
    if (text.empty()) {
        cells_.erase(addr);
        return {addr};
    }
    Parsed p = parse(text, addr, bounds_);
    if (p.is_formula)
        cells_.insert_or_assign(addr, FormulaCell{std::move(p.expr), std::nullopt, Blank{}, false});
    else
        cells_.insert_or_assign(addr, LiteralCell{literal_value(p.expr)});
    return {addr};
}

Value Sheet::read_value(CellAddr addr) const {
    auto it = cells_.find(addr);
    if (it == cells_.end()) return Blank{};
    if (auto* lit = std::get_if<LiteralCell>(&it->second)) return lit->value;
    const auto& f = std::get<FormulaCell>(it->second);
    return f.cached.value_or(Value{Blank{}});
}

const CellContent* Sheet::cell(CellAddr addr) const {
    auto it = cells_.find(addr);
    return it == cells_.end() ? nullptr : &it->second;
}

CellContent* Sheet::cell(CellAddr addr) {
    auto it = cells_.find(addr);
    return it == cells_.end() ? nullptr : &it->second;
}

const FormulaCell* Sheet::formula(CellAddr addr) const {
    auto* c = cell(addr);
    return c ? std::get_if<FormulaCell>(c) : nullptr;
}

FormulaCell* Sheet::formula(CellAddr addr) {
    auto* c = cell(addr);
    return c ? std::get_if<FormulaCell>(c) : nullptr;
}

void Sheet::put(CellAddr addr, CellContent content) {
    cells_.insert_or_assign(addr, std::move(content));
}

void Sheet::erase(CellAddr addr) { cells_.erase(addr); }

std::string Sheet::cell_text(CellAddr addr) const {
    auto it = cells_.find(addr);
    if (it == cells_.end()) return "";
    if (auto* lit = std::get_if<LiteralCell>(&it->second)) {
        if (auto* d = std::get_if<double>(&lit->value)) return number_to_text(*d);
        if (auto* s = std::get_if<std::string>(&lit->value)) return '"' + *s + '"';
        return display_value(lit->value);
    }
    return print(std::get<FormulaCell>(it->second).expr, addr, bounds_);
}

Sheet load_sheet(std::istream& in, GridBounds bounds) {
    Sheet sheet(bounds);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        size_t sp = s.find_first_of(" \t");
        if (sp == std::string_view::npos)
            throw SyntaxError("line " + std::to_string(line_no) + ": expected `ADDR = content`", 0);
        auto addr = addr_from_text(s.substr(0, sp));
        if (!addr)
            throw SyntaxError("line " + std::to_string(line_no) + ": bad cell address '" +
                                  std::string(s.substr(0, sp)) + "'",
                              0);
        std::string_view rest = trim(s.substr(sp));
        if (rest.empty() || rest.front() != '=')
            throw SyntaxError("line " + std::to_string(line_no) + ": missing '=' separator", sp);
        rest.remove_prefix(1);
        if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        try {
            sheet.set_content(*addr, rest);
        } catch (const SyntaxError& e) {
            throw SyntaxError("line " + std::to_string(line_no) + ": " + e.what(), e.offset);
        }
    }
    return sheet;
}

Sheet load_sheet_file(const std::string& path, GridBounds bounds) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open sheet file: " + path);
    return load_sheet(in, bounds);
}

void save_sheet(const Sheet& sheet, std::ostream& out) {
    for (const auto& [addr, content] : sheet.cells())
        out << addr_text(addr) << " = " << sheet.cell_text(addr) << "\n";
}

} // namespace gridlab
