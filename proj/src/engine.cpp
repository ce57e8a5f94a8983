#include "gridlab/engine.hpp"

#include <algorithm>
#include <cmath>

#include "gridlab/error.hpp"

namespace gridlab {

Engine::Engine(Sheet sheet, PolicyProfile profile)
    : sheet_(std::move(sheet)), profile_(profile) {
    graph_.rebuild_all(sheet_);
}

/// One recalculation pass. Every cell is reduced at most once per pass;
/// values computed here are memoized and committed to the sheet (the new
/// value becomes `cached`, the old one `prior`).
class Engine::Pass {
public:
    Pass(Engine& eng, std::set<CellAddr> force) : eng_(eng), force_(std::move(force)) {}

    RecalcReport run() {
        auto units = eng_.graph_.schedule(force_);
        for (const auto& u : units) {
            if (u.cyclic) {
                evaluate_cycle(u.members);
            } else {
                CellAddr m = u.members.front();
                const FormulaCell* f = eng_.sheet_.formula(m);
                if (f && !f->frozen && !memo_.count(m)) compute(m);
            }
        }
        if (eng_.profile_.circular == CircularPolicy::ExcelZero && !frozen_cycles_.empty()) {
            // Dependents were evaluated once against the terminal zeros;
            // now they freeze too.
            auto prop = eng_.graph_.transitive_dependents(frozen_cycles_);
            for (CellAddr c : prop.ordered)
                if (FormulaCell* f = eng_.sheet_.formula(c)) f->frozen = true;
        }
        return std::move(report_);
    }

private:
    Engine& eng_;
    std::set<CellAddr> force_;
    std::map<CellAddr, Value> memo_;     // values completed this pass
    std::map<CellAddr, Value> override_; // substituted reads during cycle evaluation
    std::set<CellAddr> in_progress_;
    std::set<CellAddr> visited_set_;
    std::set<CellAddr> frozen_cycles_;
    RecalcReport report_;

    const GridBounds& bounds() const { return eng_.sheet_.bounds(); }

    void visit(CellAddr a) {
        if (visited_set_.insert(a).second) report_.visited.push_back(a);
    }

    Value cell_value(CellAddr a) {
        visit(a);
        if (auto it = override_.find(a); it != override_.end()) return it->second;
        if (auto it = memo_.find(a); it != memo_.end()) return it->second;
        const CellContent* c = eng_.sheet_.cell(a);
        if (!c) return Blank{};
        if (auto* lit = std::get_if<LiteralCell>(c)) return lit->value;
        const auto& f = std::get<FormulaCell>(*c);
        if (f.frozen) return f.cached.value_or(Value{Blank{}});
        if (force_.count(a) || !f.cached) return demand(a);
        return *f.cached;
    }

    // A read hit a formula that still needs computing this pass.
    Value demand(CellAddr a) {
        if (in_progress_.count(a)) return ErrorCode::Circ; // backstop; cycles are scheduled
        auto scc = eng_.graph_.scc_of(a);
        bool cyclic = scc.size() > 1 || eng_.graph_.dependents_of(a).count(a) > 0;
        if (cyclic) {
            evaluate_cycle(std::vector<CellAddr>(scc.begin(), scc.end()));
            return memo_.at(a);
        }
        return compute(a);
    }

    Value compute(CellAddr a) {
        visit(a);
        FormulaCell* f = eng_.sheet_.formula(a);
        in_progress_.insert(a);
        Value v = reduce(f->expr, a);
        in_progress_.erase(a);
        commit(a, v);
        return v;
    }

    void commit(CellAddr a, Value v) {
        FormulaCell* f = eng_.sheet_.formula(a);
        Value old = f->cached.value_or(Value{Blank{}});
        f->prior = old;
        f->cached = v;
        memo_[a] = v;
        report_.evaluated.push_back(a);
        if (!(old == v)) report_.value_changes[a] = {old, v};
    }

    void evaluate_cycle(const std::vector<CellAddr>& members) {
        bool done = std::all_of(members.begin(), members.end(),
                                [&](CellAddr m) { return memo_.count(m) > 0; });
        if (done) return;
        bool frozen = std::all_of(members.begin(), members.end(), [&](CellAddr m) {
            const FormulaCell* f = eng_.sheet_.formula(m);
            return f && f->frozen;
        });
        if (frozen) return;

        switch (eng_.profile_.circular) {
            case CircularPolicy::Strict:
                // Reachable only when a loaded sheet already contains the
                // cycle; edits that would create one are rejected upstream.
                for (CellAddr m : members) {
                    visit(m);
                    commit(m, ErrorCode::Circ);
                }
                break;
            case CircularPolicy::ExcelZero:
                for (CellAddr m : members) {
                    visit(m);
                    commit(m, 0.0);
                    eng_.sheet_.formula(m)->frozen = true;
                    frozen_cycles_.insert(m);
                }
                break;
            case CircularPolicy::ExcelIterate: {
                auto saved = override_;
                std::map<CellAddr, Value> cur;
                for (CellAddr m : members) cur[m] = eng_.sheet_.read_value(m);
                int iters = std::max(1, eng_.profile_.iterate_max);
                for (int i = 0; i < iters; ++i) {
                    // Jacobi sweep: every member reads the previous pass's
                    // values, then all updates land at once.
                    override_ = saved;
                    for (const auto& [m, v] : cur) override_[m] = v;
                    std::map<CellAddr, Value> next;
                    for (CellAddr m : members)
                        next[m] = reduce(eng_.sheet_.formula(m)->expr, m);
                    cur = std::move(next);
                }
                override_ = saved;
                for (CellAddr m : members) {
                    visit(m);
                    commit(m, cur[m]);
                }
                break;
            }
            case CircularPolicy::GnumericTwoStage: {
                auto saved = override_;
                std::map<CellAddr, Value> snapshot;
                for (CellAddr m : members) snapshot[m] = eng_.sheet_.read_value(m);
                std::map<CellAddr, Value> result;
                for (CellAddr m : members) {
                    // Stage 1 computes with the cell's own prior value,
                    // stage 2 substitutes the stage-1 result for the
                    // self-reference. Other cycle members read priors.
                    override_ = saved;
                    for (const auto& [k, v] : snapshot) override_[k] = v;
                    Value stage1 = reduce(eng_.sheet_.formula(m)->expr, m);
                    override_[m] = stage1;
                    result[m] = reduce(eng_.sheet_.formula(m)->expr, m);
                }
                override_ = saved;
                for (CellAddr m : members) {
                    visit(m);
                    commit(m, result[m]);
                }
                break;
            }
        }
    }

    static Value finite_or_value_error(double d) {
        if (!std::isfinite(d)) return ErrorCode::ValueErr;
        if (d == 0.0) return 0.0;
        return d;
    }

    Value reduce(const Expr& e, CellAddr host) {
        ++report_.eval_steps;
        return std::visit(
            [&](const auto& n) -> Value {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, NumberLit>) {
                    return n.value;
                } else if constexpr (std::is_same_v<T, TextLit>) {
                    return n.value;
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    return n.value;
                } else if constexpr (std::is_same_v<T, SingleRef>) {
                    auto t = n.ref.try_resolve(host, bounds());
                    if (!t) return ErrorCode::Ref;
                    return cell_value(*t);
                } else if constexpr (std::is_same_v<T, RangeRef>) {
                    return ErrorCode::ValueErr; // a bare range has no scalar value
                } else if constexpr (std::is_same_v<T, BrokenRef>) {
                    return ErrorCode::Ref;
                } else if constexpr (std::is_same_v<T, EmptyRange>) {
                    return ErrorCode::ValueErr;
                } else if constexpr (std::is_same_v<T, BinOp>) {
                    Value l = reduce(*n.lhs, host);
                    Value r = reduce(*n.rhs, host);
                    return apply_binary(n.op, l, r);
                } else if constexpr (std::is_same_v<T, If>) {
                    Value c = reduce(*n.cond, host);
                    if (auto* err = std::get_if<ErrorCode>(&c)) return *err;
                    bool taken;
                    if (auto* b = std::get_if<bool>(&c)) taken = *b;
                    else if (auto* d = std::get_if<double>(&c)) taken = *d != 0.0;
                    else if (is_blank(c)) taken = false;
                    else return ErrorCode::ValueErr;
                    // Lazy: only the taken branch is reduced.
                    return reduce(taken ? *n.then_branch : *n.else_branch, host);
                } else if constexpr (std::is_same_v<T, Call>) {
                    return reduce_call(n, host);
                }
            },
            e.node);
    }

    Value reduce_call(const Call& call, CellAddr host) {
        if (call.fn == Func::Now) return eng_.profile_.clock;

        // SUM / AVG. Blank cells contribute 0; AVG divides by the count of
        // all cells in the extents (blanks included). Text or Bool anywhere
        // in an extent is #VALUE!; errors propagate, first one wins.
        double total = 0;
        long count = 0;
        for (const auto& argp : call.args) {
            const Expr& arg = *argp;
            if (auto* sr = std::get_if<SingleRef>(&arg.node)) {
                ++report_.eval_steps;
                auto t = sr->ref.try_resolve(host, bounds());
                if (!t) return ErrorCode::Ref;
                double d = 0;
                ErrorCode err{};
                if (!numeric_value(cell_value(*t), d, err)) return err;
                total += d;
                ++count;
            } else if (auto* rr = std::get_if<RangeRef>(&arg.node)) {
                ++report_.eval_steps;
                auto a = rr->first.try_resolve(host, bounds());
                auto b = rr->second.try_resolve(host, bounds());
                if (!a || !b) return ErrorCode::Ref;
                Rect rect = Rect::normalized(*a, *b);
                std::optional<ErrorCode> bad;
                rect.for_each([&](CellAddr c) {
                    if (bad) return;
                    double d = 0;
                    ErrorCode err{};
                    if (!numeric_value(cell_value(c), d, err)) {
                        bad = err;
                        return;
                    }
                    total += d;
                    ++count;
                });
                if (bad) return *bad;
            } else if (std::holds_alternative<EmptyRange>(arg.node)) {
                ++report_.eval_steps; // zero cells: nothing to add
            } else {
                Value v = reduce(arg, host);
                double d = 0;
                ErrorCode err{};
                if (!numeric_value(v, d, err)) return err;
                total += d;
                ++count;
            }
        }
        if (call.fn == Func::Avg) {
            if (count == 0) return ErrorCode::Div0;
            return finite_or_value_error(total / count);
        }
        return finite_or_value_error(total);
    }
};

RecalcReport Engine::run_pass(std::set<CellAddr> force) {
    Pass pass(*this, std::move(force));
    return pass.run();
}

std::set<CellAddr> Engine::adjust_force_for_policy(std::set<CellAddr> force) {
    if (profile_.circular == CircularPolicy::ExcelZero) {
        apply_excel_zero_bookkeeping(force);
    } else if (profile_.circular == CircularPolicy::ExcelIterate) {
        // Any edit anywhere re-triggers cycle recalculation, and with it
        // everything reading the cycles.
        auto cyc = graph_.cells_on_cycles();
        if (!cyc.empty()) {
            for (CellAddr c : cyc) force.insert(c);
            for (CellAddr c : graph_.transitive_dependents(cyc).ordered) force.insert(c);
        }
    }
    return force;
}

void Engine::apply_excel_zero_bookkeeping(std::set<CellAddr>& force) {
    // Frozen cells stay out of every dirty set until their cycle is
    // syntactically broken, at which point they thaw and recompute.
    auto cyc = graph_.cells_on_cycles();
    std::set<CellAddr> tainted = cyc;
    for (CellAddr c : graph_.transitive_dependents(cyc).ordered) tainted.insert(c);

    std::vector<CellAddr> thaw;
    for (const auto& [addr, content] : sheet_.cells()) {
        auto* f = std::get_if<FormulaCell>(&content);
        if (f && f->frozen && !tainted.count(addr)) thaw.push_back(addr);
    }
    for (CellAddr a : thaw) {
        sheet_.formula(a)->frozen = false;
        force.insert(a);
    }
    for (auto it = force.begin(); it != force.end();) {
        const FormulaCell* f = sheet_.formula(*it);
        if (f && f->frozen) it = force.erase(it);
        else ++it;
    }
}

Value Engine::evaluate_cell(CellAddr addr, RecalcReport* report) {
    const FormulaCell* f = sheet_.formula(addr);
    if (!f) throw Error("evaluate_cell: " + addr_text(addr) + " does not hold a formula");
    std::set<CellAddr> force;
    if (!f->frozen) {
        force.insert(addr);
        auto scc = graph_.scc_of(addr);
        if (scc.size() > 1 || graph_.dependents_of(addr).count(addr))
            for (CellAddr m : scc) force.insert(m);
    }
    RecalcReport r = run_pass(std::move(force));
    if (report) *report = std::move(r);
    return sheet_.read_value(addr);
}

RecalcReport Engine::edit_and_propagate(CellAddr addr, std::string_view raw_text) {
    std::optional<CellContent> old;
    if (const CellContent* c = sheet_.cell(addr)) old = *c;

    sheet_.set_content(addr, raw_text); // SyntaxError leaves the sheet unchanged
    graph_.rebuild_edges(sheet_, addr);

    if (profile_.circular == CircularPolicy::Strict && graph_.find_cycle(addr)) {
        if (old) sheet_.put(addr, *old);
        else sheet_.erase(addr);
        graph_.rebuild_edges(sheet_, addr);
        throw EditRejected("edit to " + addr_text(addr) + " would create a circular reference");
    }
    return propagate_from({addr});
}

RecalcReport Engine::full_recalc() {
    std::set<CellAddr> force;
    for (const auto& [addr, content] : sheet_.cells())
        if (std::holds_alternative<FormulaCell>(content)) force.insert(addr);
    return run_pass(adjust_force_for_policy(std::move(force)));
}

RecalcReport Engine::propagate_from(const SheetDelta& changed) {
    std::set<CellAddr> force;
    for (CellAddr a : changed)
        if (sheet_.formula(a)) force.insert(a);
    for (CellAddr c : graph_.transitive_dependents(changed).ordered) force.insert(c);
    return run_pass(adjust_force_for_policy(std::move(force)));
}

} // namespace gridlab
