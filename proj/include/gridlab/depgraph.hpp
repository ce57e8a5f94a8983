#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gridlab/sheet.hpp"

namespace gridlab {

/// Forward and reverse dependency index. Single references and range
/// references live in distinct structures: point sources in a map, range
/// extents in a rectangle list answering point-stabbing queries by linear
/// scan (O(#ranges) per lookup; plenty at desk scale). A range edge is
/// stored once, never expanded per cell; expansion happens only in queries
/// that need member granularity.
class DepGraph {
public:
    struct EdgeSummary {
        std::vector<std::pair<RefExtent, CellAddr>> added;   // extent -> dependent
        std::vector<std::pair<RefExtent, CellAddr>> removed;
    };

    /// Drops addr's old edges and re-derives them from the sheet's current
    /// content. Call after every content change at addr.
    EdgeSummary rebuild_edges(const Sheet& sheet, CellAddr addr);

    /// Rebuilds the whole graph (used after structural edits).
    void rebuild_all(const Sheet& sheet);

    /// Formula cells reading addr, via single references or containing
    /// range extents.
    std::set<CellAddr> dependents_of(CellAddr addr) const;

    /// Reverse reachability from the seed set (seeds excluded unless
    /// reachable from another seed).
    struct Propagation {
        /// Cells with purely acyclic ancestry first, in topological order
        /// (row-major tie-break), then cells on or downstream of cycles.
        std::vector<CellAddr> ordered;
        /// Exactly the cells lying on a directed cycle.
        std::set<CellAddr> on_cycle;
    };
    Propagation transitive_dependents(const std::set<CellAddr>& seeds) const;

    /// Witness path addr -> ... -> addr along read edges if addr lies on a
    /// directed cycle. Range edges count: aggregating over a range that
    /// contains the host is a self-edge.
    std::optional<std::vector<CellAddr>> find_cycle(CellAddr addr) const;

    /// Strongly-connected components of the induced subgraph, in
    /// condensation topological order (row-major tie-break); members
    /// row-major. `cyclic` marks real cycles (size > 1 or a self-loop).
    struct EvalUnit {
        std::vector<CellAddr> members;
        bool cyclic = false;
    };
    std::vector<EvalUnit> schedule(const std::set<CellAddr>& cells) const;

    /// Reference list of a formula cell (resolved extents, AST order).
    const std::vector<RefExtent>* forward(CellAddr addr) const;

    /// Distinct precedent cells of a formula (range extents expanded).
    std::vector<CellAddr> precedents_expanded(CellAddr addr) const;

    /// All cells currently lying on directed cycles.
    std::set<CellAddr> cells_on_cycles() const;

    /// Members of addr's strongly-connected component (addr included);
    /// a singleton unless addr lies on a cycle.
    std::set<CellAddr> scc_of(CellAddr addr) const;

    /// Expanded (source, dependent) pairs, deduplicated, row-major order.
    std::vector<std::pair<CellAddr, CellAddr>> expanded_edges() const;

    void clear();
    const std::map<CellAddr, std::vector<RefExtent>>& forward_index() const { return forward_; }

private:
    std::map<CellAddr, std::set<CellAddr>> single_index_;
    std::vector<std::pair<Rect, CellAddr>> range_index_;
    std::map<CellAddr, std::vector<RefExtent>> forward_;

    void drop_edges(CellAddr addr, EdgeSummary* summary);
};

} // namespace gridlab
