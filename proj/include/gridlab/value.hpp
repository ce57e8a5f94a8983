#pragma once

#include <string>
#include <variant>

namespace gridlab {

enum class ErrorCode { Ref, Circ, ValueErr, Div0 };

const char* error_code_text(ErrorCode c);           // "#REF!", "#CIRC!", ...
bool error_code_from_text(std::string_view, ErrorCode&);

struct Blank {
    friend bool operator==(Blank, Blank) { return true; }
};

/// A cell's displayed result. Errors are values, not exceptions.
using Value = std::variant<Blank, double, std::string, bool, ErrorCode>;

inline bool is_blank(const Value& v) { return std::holds_alternative<Blank>(v); }
inline bool is_number(const Value& v) { return std::holds_alternative<double>(v); }
inline bool is_text(const Value& v) { return std::holds_alternative<std::string>(v); }
inline bool is_bool(const Value& v) { return std::holds_alternative<bool>(v); }
inline bool is_error(const Value& v) { return std::holds_alternative<ErrorCode>(v); }

enum class BinOpKind { Add, Sub, Mul, Div, Eq, Lt, Gt, Le, Ge, Ne };

const char* bin_op_text(BinOpKind op);
bool is_comparison(BinOpKind op);

/// Total coercion table. Number op Number is arithmetic, Blank coerces to 0
/// in numeric contexts, any Error propagates (left operand's error wins),
/// Text or Bool in arithmetic is #VALUE!, division by zero is #DIV/0!.
/// Comparisons: same-kind operands compare; Blank coerces to the other
/// side's neutral element; mixed kinds are unequal under =/<> and #VALUE!
/// under an ordering operator. Non-finite arithmetic results are #VALUE!.
Value apply_binary(BinOpKind op, const Value& lhs, const Value& rhs);

/// Blank -> 0; Bool/Text -> #VALUE!; used by aggregations and IF arithmetic.
/// Returns false and sets `err` if the value has no numeric reading.
bool numeric_value(const Value& v, double& out, ErrorCode& err);

/// Shortest round-trip decimal text ("4.5", "10"). Used for formula text.
std::string number_to_text(double d);

/// Up to 9 fractional digits, trailing zeros trimmed. Used for traces.
std::string display_number(double d);

/// Trace/CLI rendering: Blank -> "", text verbatim, TRUE/FALSE, error codes.
std::string display_value(const Value& v);

} // namespace gridlab
