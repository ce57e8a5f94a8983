#include "gridlab/expr.hpp"

#include "gridlab/error.hpp"

namespace gridlab {

const char* func_name(Func f) {
    switch (f) {
        case Func::Sum: return "SUM";
        case Func::Avg: return "AVG";
        case Func::Now: return "NOW";
    }
    return "?";
}

RangeRef normalized_range(Ref a, Ref b, CellAddr host) {
    CellAddr ra = a.resolve(host);
    CellAddr rb = b.resolve(host);
    if (ra.col > rb.col) std::swap(a.col, b.col);
    if (ra.row > rb.row) std::swap(a.row, b.row);
    return RangeRef{a, b};
}

namespace {

CellAddr resolve_checked(const Ref& r, CellAddr host, const GridBounds& bounds) {
    auto a = r.try_resolve(host, bounds);
    if (!a)
        throw RefOutOfGrid("reference resolves outside the grid at host " + addr_text(host));
    return *a;
}

void collect(const Expr& e, CellAddr host, const GridBounds& bounds,
             std::vector<RefExtent>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SingleRef>) {
                out.push_back({RefExtent::Kind::Single,
                               Rect::cell(resolve_checked(n.ref, host, bounds))});
            } else if constexpr (std::is_same_v<T, RangeRef>) {
                Rect r = Rect::normalized(resolve_checked(n.first, host, bounds),
                                          resolve_checked(n.second, host, bounds));
                out.push_back({RefExtent::Kind::Range, r});
            } else if constexpr (std::is_same_v<T, BinOp>) {
                collect(*n.lhs, host, bounds, out);
                collect(*n.rhs, host, bounds, out);
            } else if constexpr (std::is_same_v<T, If>) {
                collect(*n.cond, host, bounds, out);
                collect(*n.then_branch, host, bounds, out);
                collect(*n.else_branch, host, bounds, out);
            } else if constexpr (std::is_same_v<T, Call>) {
                for (const auto& a : n.args) collect(*a, host, bounds, out);
            }
        },
        e.node);
}

// Precedence levels for printing: comparison 1, additive 2, multiplicative 3.
int op_precedence(BinOpKind op) {
    switch (op) {
        case BinOpKind::Add:
        case BinOpKind::Sub: return 2;
        case BinOpKind::Mul:
        case BinOpKind::Div: return 3;
        default: return 1;
    }
}

std::string ref_axis_text_col(const RefAxis& ax, int host, const GridBounds& bounds) {
    int col = ax.resolve(host);
    if (col < 0 || col >= bounds.cols)
        throw RefOutOfGrid("column offset escapes the grid");
    return (ax.abs ? "$" : "") + column_label(col);
}

std::string ref_axis_text_row(const RefAxis& ax, int host, const GridBounds& bounds) {
    int row = ax.resolve(host);
    if (row < 0 || row >= bounds.rows)
        throw RefOutOfGrid("row offset escapes the grid");
    return (ax.abs ? "$" : "") + std::to_string(row + 1);
}

std::string ref_text(const Ref& r, CellAddr host, const GridBounds& bounds) {
    return ref_axis_text_col(r.col, host.col, bounds) + ref_axis_text_row(r.row, host.row, bounds);
}

void print_node(const Expr& e, CellAddr host, const GridBounds& bounds, int min_prec,
                std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NumberLit>) {
                out += number_to_text(n.value);
            } else if constexpr (std::is_same_v<T, TextLit>) {
                out += '"';
                out += n.value;
                out += '"';
            } else if constexpr (std::is_same_v<T, BoolLit>) {
                out += n.value ? "TRUE" : "FALSE";
            } else if constexpr (std::is_same_v<T, SingleRef>) {
                out += ref_text(n.ref, host, bounds);
            } else if constexpr (std::is_same_v<T, RangeRef>) {
                out += ref_text(n.first, host, bounds);
                out += ':';
                out += ref_text(n.second, host, bounds);
            } else if constexpr (std::is_same_v<T, BrokenRef>) {
                out += "#REF!";
            } else if constexpr (std::is_same_v<T, EmptyRange>) {
                out += "#REF!";
            } else if constexpr (std::is_same_v<T, BinOp>) {
                int prec = op_precedence(n.op);
                bool parens = prec < min_prec;
                if (parens) out += '(';
                print_node(*n.lhs, host, bounds, prec, out);
                out += bin_op_text(n.op);
                print_node(*n.rhs, host, bounds, prec + 1, out);
                if (parens) out += ')';
            } else if constexpr (std::is_same_v<T, If>) {
                out += "IF(";
                print_node(*n.cond, host, bounds, 0, out);
                out += ';';
                print_node(*n.then_branch, host, bounds, 0, out);
                out += ';';
                print_node(*n.else_branch, host, bounds, 0, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Call>) {
                out += func_name(n.fn);
                out += '(';
                bool sep = false;
                for (const auto& a : n.args) {
                    if (sep) out += ';';
                    sep = true;
                    print_node(*a, host, bounds, 0, out);
                }
                out += ')';
            }
        },
        e.node);
}

} // namespace

std::vector<RefExtent> references(const Expr& e, CellAddr host, const GridBounds& bounds) {
    std::vector<RefExtent> out;
    collect(e, host, bounds, out);
    return out;
}

std::string print(const Expr& e, CellAddr host, const GridBounds& bounds) {
    std::string out = "=";
    print_node(e, host, bounds, 0, out);
    return out;
}

Expr rewrite_refs(const Expr& e,
                  const std::function<Expr::Node(const SingleRef&)>& on_single,
                  const std::function<Expr::Node(const RangeRef&)>& on_range) {
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SingleRef>) {
                return Expr{on_single(n)};
            } else if constexpr (std::is_same_v<T, RangeRef>) {
                return Expr{on_range(n)};
            } else if constexpr (std::is_same_v<T, BinOp>) {
                return make_expr(BinOp{n.op, rewrite_refs(*n.lhs, on_single, on_range),
                                       rewrite_refs(*n.rhs, on_single, on_range)});
            } else if constexpr (std::is_same_v<T, If>) {
                return make_expr(If{rewrite_refs(*n.cond, on_single, on_range),
                                    rewrite_refs(*n.then_branch, on_single, on_range),
                                    rewrite_refs(*n.else_branch, on_single, on_range)});
            } else if constexpr (std::is_same_v<T, Call>) {
                Call c{n.fn, {}};
                c.args.reserve(n.args.size());
                for (const auto& a : n.args)
                    c.args.emplace_back(rewrite_refs(*a, on_single, on_range));
                return make_expr(std::move(c));
            } else {
                return make_expr(n);
            }
        },
        e.node);
}

} // namespace gridlab
