#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gridlab/addr.hpp"
#include "gridlab/value.hpp"

namespace gridlab {

/// One axis of a reference. Absolute axes store the 0-based grid index;
/// relative axes store a signed offset from the host cell, so the same
/// stored formula reads differently depending on where it lives.
struct RefAxis {
    bool abs = false;
    int value = 0;

    int resolve(int host) const { return abs ? value : host + value; }
    static RefAxis absolute(int index) { return {true, index}; }
    static RefAxis relative(int offset) { return {false, offset}; }
    /// Re-encodes this axis so it resolves to `target` from `host`.
    RefAxis rebound(int target, int host) const {
        return abs ? absolute(target) : relative(target - host);
    }
    friend bool operator==(const RefAxis&, const RefAxis&) = default;
};

struct Ref {
    RefAxis col;
    RefAxis row;

    CellAddr resolve(CellAddr host) const {
        return {col.resolve(host.col), row.resolve(host.row)};
    }
    /// nullopt when the resolved coordinate falls outside `bounds`.
    std::optional<CellAddr> try_resolve(CellAddr host, const GridBounds& bounds) const {
        CellAddr a = resolve(host);
        if (!bounds.contains(a.col, a.row)) return std::nullopt;
        return a;
    }
    static Ref to(CellAddr target, CellAddr host, bool abs_col = false, bool abs_row = false) {
        return {abs_col ? RefAxis::absolute(target.col) : RefAxis::relative(target.col - host.col),
                abs_row ? RefAxis::absolute(target.row) : RefAxis::relative(target.row - host.row)};
    }
    friend bool operator==(const Ref&, const Ref&) = default;
};

struct Expr;

/// Owning handle to a child expression with deep-copy value semantics,
/// so sheets holding formulas copy like plain values.
class ExprPtr {
public:
    ExprPtr() = default;
    ExprPtr(Expr e);
    ExprPtr(const ExprPtr& o);
    ExprPtr(ExprPtr&&) noexcept = default;
    ExprPtr& operator=(const ExprPtr& o);
    ExprPtr& operator=(ExprPtr&&) noexcept = default;
    ~ExprPtr();

    Expr& operator*() { return *p_; }
    const Expr& operator*() const { return *p_; }
    Expr* operator->() { return p_.get(); }
    const Expr* operator->() const { return p_.get(); }

    friend bool operator==(const ExprPtr& a, const ExprPtr& b);

private:
    std::unique_ptr<Expr> p_;
};

struct NumberLit {
    double value = 0;
    friend bool operator==(const NumberLit&, const NumberLit&) = default;
};
struct TextLit {
    std::string value;
    friend bool operator==(const TextLit&, const TextLit&) = default;
};
struct BoolLit {
    bool value = false;
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
};
struct SingleRef {
    Ref ref;
    friend bool operator==(const SingleRef&, const SingleRef&) = default;
};
/// Corners are kept normalized: the first corner resolves to the top-left
/// (min column, min row) of the second at the host address.
struct RangeRef {
    Ref first;
    Ref second;
    Rect resolve(CellAddr host) const {
        return Rect::normalized(first.resolve(host), second.resolve(host));
    }
    friend bool operator==(const RangeRef&, const RangeRef&) = default;
};
/// A reference whose target row/column was deleted. Prints as #REF!.
struct BrokenRef {
    friend bool operator==(const BrokenRef&, const BrokenRef&) { return true; }
};
/// A range whose whole extent was deleted; aggregates over zero cells.
struct EmptyRange {
    friend bool operator==(const EmptyRange&, const EmptyRange&) { return true; }
};
struct BinOp {
    BinOpKind op;
    ExprPtr lhs;
    ExprPtr rhs;
    friend bool operator==(const BinOp&, const BinOp&) = default;
};
struct If {
    ExprPtr cond;
    ExprPtr then_branch;
    ExprPtr else_branch;
    friend bool operator==(const If&, const If&) = default;
};
enum class Func { Sum, Avg, Now };
const char* func_name(Func f);
struct Call {
    Func fn;
    std::vector<ExprPtr> args;
    friend bool operator==(const Call&, const Call&) = default;
};

struct Expr {
    using Node = std::variant<NumberLit, TextLit, BoolLit, SingleRef, RangeRef, BrokenRef,
                              EmptyRange, BinOp, If, Call>;
    Node node;
    friend bool operator==(const Expr&, const Expr&) = default;
};

inline ExprPtr::ExprPtr(Expr e) : p_(std::make_unique<Expr>(std::move(e))) {}
inline ExprPtr::ExprPtr(const ExprPtr& o) : p_(o.p_ ? std::make_unique<Expr>(*o.p_) : nullptr) {}
inline ExprPtr& ExprPtr::operator=(const ExprPtr& o) {
    p_ = o.p_ ? std::make_unique<Expr>(*o.p_) : nullptr;
    return *this;
}
inline ExprPtr::~ExprPtr() = default;
inline bool operator==(const ExprPtr& a, const ExprPtr& b) {
    if (!a.p_ || !b.p_) return !a.p_ && !b.p_;
    return *a.p_ == *b.p_;
}

template <class T>
Expr make_expr(T node) {
    return Expr{Expr::Node{std::move(node)}};
}

/// One referenced extent, in left-to-right AST order.
struct RefExtent {
    enum class Kind { Single, Range } kind;
    Rect extent;
    friend bool operator==(const RefExtent&, const RefExtent&) = default;
};

/// All extents the expression reads when hosted at `host`.
/// Throws RefOutOfGrid if a reference resolves outside the grid.
std::vector<RefExtent> references(const Expr& e, CellAddr host,
                                  const GridBounds& bounds = GridBounds{});

/// Canonical text, "=" prefix included. parse(print(e, h), h) == e.
/// Throws RefOutOfGrid if a relative offset escapes the grid at this host.
std::string print(const Expr& e, CellAddr host, const GridBounds& bounds = GridBounds{});

/// Structural rewrite of every reference node; everything else is cloned.
/// The callbacks receive the node and return its replacement.
Expr rewrite_refs(const Expr& e,
                  const std::function<Expr::Node(const SingleRef&)>& on_single,
                  const std::function<Expr::Node(const RangeRef&)>& on_range);

/// Builds a normalized RangeRef from two corners as written, reordering
/// axes so the first corner resolves top-left of the second at `host`.
RangeRef normalized_range(Ref a, Ref b, CellAddr host);

} // namespace gridlab
