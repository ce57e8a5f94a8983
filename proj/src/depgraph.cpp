#include "gridlab/depgraph.hpp"

#include <algorithm>
#include <functional>

namespace gridlab {

void DepGraph::drop_edges(CellAddr addr, EdgeSummary* summary) {
    auto it = forward_.find(addr);
    if (it == forward_.end()) return;
    for (const auto& ext : it->second) {
        if (summary) summary->removed.push_back({ext, addr});
        if (ext.kind == RefExtent::Kind::Single) {
            auto si = single_index_.find(ext.extent.top_left);
            if (si != single_index_.end()) {
                si->second.erase(addr);
                if (si->second.empty()) single_index_.erase(si);
            }
        } else {
            auto ri = std::find(range_index_.begin(), range_index_.end(),
                                std::pair<Rect, CellAddr>{ext.extent, addr});
            if (ri != range_index_.end()) range_index_.erase(ri);
        }
    }
    forward_.erase(it);
}

DepGraph::EdgeSummary DepGraph::rebuild_edges(const Sheet& sheet, CellAddr addr) {
    EdgeSummary summary;
    drop_edges(addr, &summary);
    const FormulaCell* f = sheet.formula(addr);
    if (!f) return summary;
    auto refs = references(f->expr, addr, sheet.bounds());
    for (const auto& ext : refs) {
        summary.added.push_back({ext, addr});
        if (ext.kind == RefExtent::Kind::Single)
            single_index_[ext.extent.top_left].insert(addr);
        else
            range_index_.push_back({ext.extent, addr});
    }
    forward_[addr] = std::move(refs);
    return summary;
}

void DepGraph::rebuild_all(const Sheet& sheet) {
    clear();
    for (const auto& [addr, content] : sheet.cells())
        if (std::holds_alternative<FormulaCell>(content)) rebuild_edges(sheet, addr);
}

void DepGraph::clear() {
    single_index_.clear();
    range_index_.clear();
    forward_.clear();
}

std::set<CellAddr> DepGraph::dependents_of(CellAddr addr) const {
    std::set<CellAddr> out;
    auto si = single_index_.find(addr);
    if (si != single_index_.end()) out = si->second;
    for (const auto& [rect, dep] : range_index_)
        if (rect.contains(addr)) out.insert(dep);
    return out;
}

const std::vector<RefExtent>* DepGraph::forward(CellAddr addr) const {
    auto it = forward_.find(addr);
    return it == forward_.end() ? nullptr : &it->second;
}

std::vector<CellAddr> DepGraph::precedents_expanded(CellAddr addr) const {
    std::set<CellAddr> seen;
    auto it = forward_.find(addr);
    if (it != forward_.end())
        for (const auto& ext : it->second)
            ext.extent.for_each([&](CellAddr a) { seen.insert(a); });
    return {seen.begin(), seen.end()};
}

DepGraph::Propagation DepGraph::transitive_dependents(const std::set<CellAddr>& seeds) const {
    // Reverse-DDG reachability.
    std::set<CellAddr> reached;
    std::vector<CellAddr> frontier(seeds.begin(), seeds.end());
    while (!frontier.empty()) {
        CellAddr c = frontier.back();
        frontier.pop_back();
        for (CellAddr d : dependents_of(c))
            if (reached.insert(d).second) frontier.push_back(d);
    }

    Propagation out;
    auto units = schedule(reached);

    // Cells whose ancestry within the reached set touches a cycle are
    // deferred to the tail; the rest get a plain topological order up
    // front. Units arrive in condensation order, so taint propagates.
    std::set<CellAddr> tainted;
    for (const auto& u : units) {
        bool t = u.cyclic;
        if (!t)
            for (CellAddr p : precedents_expanded(u.members.front()))
                if (tainted.count(p)) {
                    t = true;
                    break;
                }
        if (u.cyclic)
            for (CellAddr m : u.members) out.on_cycle.insert(m);
        if (t)
            for (CellAddr m : u.members) tainted.insert(m);
    }

    for (const auto& u : units)
        for (CellAddr m : u.members)
            if (!tainted.count(m)) out.ordered.push_back(m);
    for (const auto& u : units)
        for (CellAddr m : u.members)
            if (tainted.count(m)) out.ordered.push_back(m);
    return out;
}

std::vector<DepGraph::EvalUnit> DepGraph::schedule(const std::set<CellAddr>& cells) const {
    // Tarjan over the subgraph induced by `cells` (read edges reversed:
    // source -> dependent), then condensation order via Kahn with
    // row-major tie-break.
    std::map<CellAddr, int> index, low, comp;
    std::vector<CellAddr> stack;
    std::set<CellAddr> on_stack;
    int next_index = 0, next_comp = 0;
    std::vector<std::vector<CellAddr>> comps;

    std::function<void(CellAddr)> strongconnect = [&](CellAddr v) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack.insert(v);
        for (CellAddr w : dependents_of(v)) {
            if (!cells.count(w)) continue;
            if (!index.count(w)) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack.count(w)) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<CellAddr> members;
            for (;;) {
                CellAddr w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                comp[w] = next_comp;
                members.push_back(w);
                if (w == v) break;
            }
            std::sort(members.begin(), members.end());
            comps.push_back(std::move(members));
            ++next_comp;
        }
    };
    for (CellAddr c : cells)
        if (!index.count(c)) strongconnect(c);

    // Condensation edges and indegrees.
    std::vector<std::set<int>> succ(comps.size());
    std::vector<int> indeg(comps.size(), 0);
    for (CellAddr v : cells)
        for (CellAddr w : dependents_of(v)) {
            if (!cells.count(w) || comp[v] == comp[w]) continue;
            if (succ[comp[v]].insert(comp[w]).second) ++indeg[comp[w]];
        }

    auto cmp = [&](int a, int b) { return comps[a].front() < comps[b].front(); };
    std::set<int, decltype(cmp)> ready(cmp);
    for (size_t i = 0; i < comps.size(); ++i)
        if (indeg[i] == 0) ready.insert((int)i);

    std::vector<EvalUnit> out;
    while (!ready.empty()) {
        int c = *ready.begin();
        ready.erase(ready.begin());
        EvalUnit u;
        u.members = comps[c];
        if (u.members.size() > 1) {
            u.cyclic = true;
        } else {
            CellAddr m = u.members.front();
            auto deps = dependents_of(m);
            u.cyclic = deps.count(m) > 0; // self-loop
        }
        out.push_back(std::move(u));
        for (int s : succ[c])
            if (--indeg[s] == 0) ready.insert(s);
    }
    return out;
}

std::optional<std::vector<CellAddr>> DepGraph::find_cycle(CellAddr addr) const {
    // DFS along read edges (cell -> its precedents) looking for a way back.
    std::set<CellAddr> visited;
    std::vector<CellAddr> path{addr};
    std::function<bool(CellAddr)> dfs = [&](CellAddr v) -> bool {
        for (CellAddr p : precedents_expanded(v)) {
            if (p == addr) {
                path.push_back(addr);
                return true;
            }
            if (visited.insert(p).second && forward_.count(p)) {
                path.push_back(p);
                if (dfs(p)) return true;
                path.pop_back();
            }
        }
        return false;
    };
    if (!forward_.count(addr)) return std::nullopt;
    if (dfs(addr)) return path;
    return std::nullopt;
}

std::set<CellAddr> DepGraph::cells_on_cycles() const {
    std::set<CellAddr> all;
    for (const auto& [addr, refs] : forward_) all.insert(addr);
    std::set<CellAddr> out;
    for (const auto& u : schedule(all))
        if (u.cyclic)
            for (CellAddr m : u.members) out.insert(m);
    return out;
}

std::set<CellAddr> DepGraph::scc_of(CellAddr addr) const {
    std::set<CellAddr> fwd{addr}, bwd{addr};
    std::vector<CellAddr> frontier{addr};
    while (!frontier.empty()) {
        CellAddr c = frontier.back();
        frontier.pop_back();
        for (CellAddr p : precedents_expanded(c))
            if (forward_.count(p) && fwd.insert(p).second) frontier.push_back(p);
    }
    frontier.push_back(addr);
    while (!frontier.empty()) {
        CellAddr c = frontier.back();
        frontier.pop_back();
        for (CellAddr d : dependents_of(c))
            if (bwd.insert(d).second) frontier.push_back(d);
    }
    std::set<CellAddr> out;
    for (CellAddr c : fwd)
        if (bwd.count(c)) out.insert(c);
    return out;
}

std::vector<std::pair<CellAddr, CellAddr>> DepGraph::expanded_edges() const {
    std::set<std::pair<CellAddr, CellAddr>> seen;
    for (const auto& [dep, refs] : forward_)
        for (const auto& ext : refs)
            ext.extent.for_each([&](CellAddr src) { seen.insert({src, dep}); });
    return {seen.begin(), seen.end()};
}

} // namespace gridlab
