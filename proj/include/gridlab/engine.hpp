#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "gridlab/depgraph.hpp"
#include "gridlab/sheet.hpp"

namespace gridlab {

enum class CircularPolicy { Strict, ExcelZero, ExcelIterate, GnumericTwoStage };
enum class FillVariant { Excel, Gnumeric };
enum class RefDisplay { ShowRefError, BlankButPoisoned };

/// Bundle of semantic switches selecting which vendor's behavior the
/// engine reproduces.
struct PolicyProfile {
    CircularPolicy circular = CircularPolicy::Strict;
    int iterate_max = 100; // ExcelIterate passes per recalc, >= 1
    FillVariant fill_variant = FillVariant::Excel;
    RefDisplay ref_display = RefDisplay::ShowRefError;
    double clock = 0; // NOW()
};

/// Evidence of what one recalculation pass did.
struct RecalcReport {
    /// Formula cells evaluated, in completion order. Literal cells never
    /// appear here.
    std::vector<CellAddr> evaluated;
    /// Old/new value per evaluated cell whose value actually changed.
    std::map<CellAddr, std::pair<Value, Value>> value_changes;
    /// AST node reductions performed (lazy branches contribute none).
    long eval_steps = 0;
    /// Distinct cells read or evaluated, in first-touch order.
    std::vector<CellAddr> visited;
};

/// Evaluates cells and propagates changes under a PolicyProfile. Owns the
/// sheet and its dependency graph; single-threaded. Run several engines on
/// independent sheet copies for side-by-side comparison; they share nothing.
class Engine {
public:
    Engine() = default;
    Engine(Sheet sheet, PolicyProfile profile);

    const Sheet& sheet() const { return sheet_; }
    Sheet& sheet() { return sheet_; }
    const DepGraph& graph() const { return graph_; }
    DepGraph& graph() { return graph_; }
    const PolicyProfile& profile() const { return profile_; }

    /// Local graph reduction of a formula cell: precedents are computed
    /// recursively where no cached value exists, each cell at most once.
    /// Cycle handling is delegated to the circular policy; never throws
    /// for cycles. Throws Error if addr does not hold a formula.
    Value evaluate_cell(CellAddr addr, RecalcReport* report = nullptr);

    /// set_content + rebuild_edges + minimum recalculation: exactly the
    /// formula cells transitively dependent on addr (plus addr itself if a
    /// formula) are re-evaluated, in topological order. Under the strict
    /// policy an edit creating a cycle throws EditRejected and leaves the
    /// sheet unchanged. SyntaxError also leaves the sheet unchanged.
    RecalcReport edit_and_propagate(CellAddr addr, std::string_view raw_text);

    /// Evaluates every formula cell once, in topological order.
    RecalcReport full_recalc();

    /// Re-evaluates everything dependent on the given changed cells.
    /// Structural edits call this after rewriting content and rebuilding
    /// the graph.
    RecalcReport propagate_from(const SheetDelta& changed);

private:
    Sheet sheet_;
    DepGraph graph_;
    PolicyProfile profile_;

    class Pass;
    RecalcReport run_pass(std::set<CellAddr> force);
    std::set<CellAddr> adjust_force_for_policy(std::set<CellAddr> force);
    void apply_excel_zero_bookkeeping(std::set<CellAddr>& force);
    void freeze_cycle_downstream(const std::set<CellAddr>& frozen_cycles, RecalcReport& report);
};

} // namespace gridlab
