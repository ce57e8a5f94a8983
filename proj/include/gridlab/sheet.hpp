#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "gridlab/expr.hpp"
#include "gridlab/value.hpp"

namespace gridlab {

struct LiteralCell {
    Value value;
};

struct FormulaCell {
    Expr expr;
    /// Last evaluation result; nullopt before the first evaluation
    /// (reads as Blank).
    std::optional<Value> cached;
    /// Value from before the most recent re-evaluation. The Gnumeric
    /// circular policy reads it.
    Value prior = Blank{};
    /// Set only by the Excel zero-terminal circular policy.
    bool frozen = false;
};

/// Empty cells are not stored; emptiness is absence from the map.
using CellContent = std::variant<LiteralCell, FormulaCell>;

using SheetDelta = std::set<CellAddr>;

/// Sparse grid. A value type: copy it to snapshot, roll back, or run two
/// engines side by side.
class Sheet {
public:
    using CellMap = std::map<CellAddr, CellContent>;

    Sheet() = default;
    explicit Sheet(GridBounds bounds) : bounds_(bounds) {}

    const GridBounds& bounds() const { return bounds_; }

    /// Parses raw text and stores it. Empty text clears the cell. Does not
    /// evaluate; that is the engine's job. Returns the changed addresses
    /// (exactly {addr}).
    SheetDelta set_content(CellAddr addr, std::string_view raw_text);

    /// Empty -> Blank, literal -> its value, formula -> cached (Blank
    /// before first evaluation). Out-of-bounds reads are Blank; never throws.
    Value read_value(CellAddr addr) const;

    const CellContent* cell(CellAddr addr) const;
    CellContent* cell(CellAddr addr);
    const FormulaCell* formula(CellAddr addr) const;
    FormulaCell* formula(CellAddr addr);

    void put(CellAddr addr, CellContent content);
    void erase(CellAddr addr);

    /// Canonical text of the cell's content: formulas print with their "="
    /// prefix, number literals canonically, text literals quoted.
    std::string cell_text(CellAddr addr) const;

    const CellMap& cells() const { return cells_; }
    size_t size() const { return cells_.size(); }

private:
    CellMap cells_;
    GridBounds bounds_;
};

/// One cell per line: `A1 = 1`, `A2 = =A1*10`, `B1 = "label"`.
/// Lines starting with '#' are comments.
Sheet load_sheet(std::istream& in, GridBounds bounds = GridBounds{});
Sheet load_sheet_file(const std::string& path, GridBounds bounds = GridBounds{});
void save_sheet(const Sheet& sheet, std::ostream& out);

} // namespace gridlab
