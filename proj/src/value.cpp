#include "gridlab/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace gridlab {

const char* error_code_text(ErrorCode c) {
    switch (c) {
        case ErrorCode::Ref: return "#REF!";
        case ErrorCode::Circ: return "#CIRC!";
        case ErrorCode::ValueErr: return "#VALUE!";
        case ErrorCode::Div0: return "#DIV/0!";
    }
    return "#VALUE!";
}

bool error_code_from_text(std::string_view s, ErrorCode& out) {
    for (ErrorCode c : {ErrorCode::Ref, ErrorCode::Circ, ErrorCode::ValueErr, ErrorCode::Div0}) {
        if (s == error_code_text(c)) {
            out = c;
            return true;
        }
    }
    return false;
}

const char* bin_op_text(BinOpKind op) {
    switch (op) {
        case BinOpKind::Add: return "+";
        case BinOpKind::Sub: return "-";
        case BinOpKind::Mul: return "*";
        case BinOpKind::Div: return "/";
        case BinOpKind::Eq: return "=";
        case BinOpKind::Lt: return "<";
        case BinOpKind::Gt: return ">";
        case BinOpKind::Le: return "<=";
        case BinOpKind::Ge: return ">=";
        case BinOpKind::Ne: return "<>";
    }
    return "?";
}

bool is_comparison(BinOpKind op) {
    switch (op) {
        case BinOpKind::Eq:
        case BinOpKind::Lt:
        case BinOpKind::Gt:
        case BinOpKind::Le:
        case BinOpKind::Ge:
        case BinOpKind::Ne: return true;
        default: return false;
    }
}

bool numeric_value(const Value& v, double& out, ErrorCode& err) {
    if (is_blank(v)) {
        out = 0;
        return true;
    }
    if (auto* d = std::get_if<double>(&v)) {
        out = *d;
        return true;
    }
    if (auto* e = std::get_if<ErrorCode>(&v)) {
        err = *e;
        return false;
    }
    err = ErrorCode::ValueErr;
    return false;
}

namespace {

Value finite_or_error(double d) {
    if (!std::isfinite(d)) return ErrorCode::ValueErr;
    if (d == 0.0) return 0.0; // normalize -0
    return d;
}

Value arithmetic(BinOpKind op, const Value& lhs, const Value& rhs) {
    double a = 0, b = 0;
    ErrorCode err{};
    if (!numeric_value(lhs, a, err)) return err;
    if (!numeric_value(rhs, b, err)) return err;
    switch (op) {
        case BinOpKind::Add: return finite_or_error(a + b);
        case BinOpKind::Sub: return finite_or_error(a - b);
        case BinOpKind::Mul: return finite_or_error(a * b);
        case BinOpKind::Div:
            if (b == 0.0) return ErrorCode::Div0;
            return finite_or_error(a / b);
        default: return ErrorCode::ValueErr;
    }
}

enum class Kind { Number, Text, Bool };

// Blank borrows the kind of the other side; two Blanks compare as numbers.
Kind comparison_kind(const Value& v, const Value& other) {
    if (is_text(v)) return Kind::Text;
    if (is_bool(v)) return Kind::Bool;
    if (is_blank(v) && is_text(other)) return Kind::Text;
    if (is_blank(v) && is_bool(other)) return Kind::Bool;
    return Kind::Number;
}

Value comparison(BinOpKind op, const Value& lhs, const Value& rhs) {
    Kind lk = comparison_kind(lhs, rhs);
    Kind rk = comparison_kind(rhs, lhs);
    if (lk != rk) {
        if (op == BinOpKind::Eq) return false;
        if (op == BinOpKind::Ne) return true;
        return ErrorCode::ValueErr;
    }
    int cmp = 0;
    if (lk == Kind::Number) {
        double a = 0, b = 0;
        ErrorCode err{};
        numeric_value(lhs, a, err);
        numeric_value(rhs, b, err);
        cmp = a < b ? -1 : a > b ? 1 : 0;
    } else if (lk == Kind::Text) {
        const std::string empty;
        const std::string& a = is_blank(lhs) ? empty : std::get<std::string>(lhs);
        const std::string& b = is_blank(rhs) ? empty : std::get<std::string>(rhs);
        cmp = a < b ? -1 : a > b ? 1 : 0;
    } else {
        bool a = is_blank(lhs) ? false : std::get<bool>(lhs);
        bool b = is_blank(rhs) ? false : std::get<bool>(rhs);
        cmp = a < b ? -1 : a > b ? 1 : 0;
    }
    switch (op) {
        case BinOpKind::Eq: return cmp == 0;
        case BinOpKind::Ne: return cmp != 0;
        case BinOpKind::Lt: return cmp < 0;
        case BinOpKind::Gt: return cmp > 0;
        case BinOpKind::Le: return cmp <= 0;
        case BinOpKind::Ge: return cmp >= 0;
        default: return ErrorCode::ValueErr;
    }
}

} // namespace

Value apply_binary(BinOpKind op, const Value& lhs, const Value& rhs) {
    if (auto* e = std::get_if<ErrorCode>(&lhs)) return *e;
    if (auto* e = std::get_if<ErrorCode>(&rhs)) return *e;
    if (is_comparison(op)) return comparison(op, lhs, rhs);
    return arithmetic(op, lhs, rhs);
}

std::string number_to_text(double d) {
    if (d == 0.0) d = 0.0; // drop -0 sign
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, r.ptr);
}

std::string display_number(double d) {
    if (d == 0.0) d = 0.0;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.9f", d);
    std::string s = buf;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        auto last = s.find_last_not_of('0');
        if (last == dot) last = dot - 1;
        s.erase(last + 1);
    }
    if (s == "-0") s = "0";
    return s;
}

std::string display_value(const Value& v) {
    if (is_blank(v)) return "";
    if (auto* d = std::get_if<double>(&v)) return display_number(*d);
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    if (auto* b = std::get_if<bool>(&v)) return *b ? "TRUE" : "FALSE";
    return error_code_text(std::get<ErrorCode>(v));
}

} // namespace gridlab
