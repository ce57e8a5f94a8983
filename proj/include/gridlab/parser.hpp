#pragma once

#include <string_view>

#include "gridlab/expr.hpp"

namespace gridlab {

/// Result of classifying raw cell text. Text starting with "=" parses as a
/// formula; anything else is a literal (numeric if it lexes as a decimal,
/// quoted text with the quotes stripped, otherwise verbatim text).
struct Parsed {
    Expr expr;
    bool is_formula = false;
};

/// Parses raw cell text against the host address (relative reference axes
/// are stored as offsets from it).
///
/// Throws SyntaxError (with a 0-based character offset), UnknownFunction,
/// or RefOutOfGrid.
Parsed parse(std::string_view text, CellAddr host, const GridBounds& bounds = GridBounds{});

} // namespace gridlab
