#include "gridlab/parser.hpp"

#include <cctype>
#include <charconv>

#include "gridlab/error.hpp"

namespace gridlab {

namespace {

bool lexes_as_number(std::string_view s, double& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

class FormulaParser {
public:
    FormulaParser(std::string_view text, CellAddr host, const GridBounds& bounds)
        : text_(text), host_(host), bounds_(bounds) {}

    Expr parse_formula() {
        pos_ = 1; // skip '='
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    CellAddr host_;
    GridBounds bounds_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!consume(c)) throw SyntaxError(std::string("expected '") + c + "' " + what, pos_);
    }

    Expr parse_expr() { return parse_comparison(); }

    Expr parse_comparison() {
        Expr lhs = parse_additive();
        for (;;) {
            skip_ws();
            BinOpKind op;
            if (match("<=")) op = BinOpKind::Le;
            else if (match(">=")) op = BinOpKind::Ge;
            else if (match("<>")) op = BinOpKind::Ne;
            else if (match("<")) op = BinOpKind::Lt;
            else if (match(">")) op = BinOpKind::Gt;
            else if (match("=")) op = BinOpKind::Eq;
            else break;
            lhs = make_expr(BinOp{op, std::move(lhs), parse_additive()});
        }
        return lhs;
    }

    Expr parse_additive() {
        Expr lhs = parse_multiplicative();
        for (;;) {
            skip_ws();
            BinOpKind op;
            if (match("+")) op = BinOpKind::Add;
            else if (match("-")) op = BinOpKind::Sub;
            else break;
            lhs = make_expr(BinOp{op, std::move(lhs), parse_multiplicative()});
        }
        return lhs;
    }

    Expr parse_multiplicative() {
        Expr lhs = parse_primary();
        for (;;) {
            skip_ws();
            BinOpKind op;
            if (match("*")) op = BinOpKind::Mul;
            else if (match("/")) op = BinOpKind::Div;
            else break;
            lhs = make_expr(BinOp{op, std::move(lhs), parse_primary()});
        }
        return lhs;
    }

    bool match(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Expr parse_primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')', "to close parenthesis");
            return e;
        }
        if (c == '"') return parse_text();
        if (std::isdigit((unsigned char)c) || c == '.') return parse_number(false);
        if (c == '-') {
            size_t save = pos_;
            ++pos_;
            char n = pos_ < text_.size() ? text_[pos_] : '\0';
            if (std::isdigit((unsigned char)n) || n == '.') return parse_number(true);
            throw SyntaxError("'-' is only allowed before a number literal", save);
        }
        if (c == '#') return parse_error_token();
        if (c == '$' || std::isalpha((unsigned char)c)) return parse_name_or_ref();
        throw SyntaxError("expected a value, reference, or function", pos_);
    }

    Expr parse_text() {
        size_t start = pos_;
        ++pos_; // opening quote
        std::string s;
        while (pos_ < text_.size() && text_[pos_] != '"') s += text_[pos_++];
        if (pos_ == text_.size()) throw SyntaxError("unterminated string literal", start);
        ++pos_;
        return make_expr(TextLit{std::move(s)});
    }

    Expr parse_number(bool negative) {
        if (negative) --pos_; // include the sign in the span
        size_t start = pos_;
        if (negative) ++pos_;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ == text_.size() || !std::isdigit((unsigned char)text_[pos_])) pos_ = mark;
            else
                while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
        }
        double v = 0;
        auto span = text_.substr(start, pos_ - start);
        if (!lexes_as_number(span, v)) throw SyntaxError("malformed number", start);
        return make_expr(NumberLit{v});
    }

    Expr parse_error_token() {
        if (match("#REF!")) return make_expr(BrokenRef{});
        throw SyntaxError("unknown error token", pos_);
    }

    Expr parse_name_or_ref() {
        skip_ws();
        size_t start = pos_;
        if (text_[pos_] == '$' || lookahead_is_ref()) {
            Ref a = parse_ref();
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ':') {
                ++pos_;
                Ref b = parse_ref();
                return make_expr(normalized_range(a, b, host_));
            }
            return make_expr(SingleRef{a});
        }
        // A name: letters (function or boolean keyword).
        size_t s = pos_;
        while (pos_ < text_.size() && std::isalpha((unsigned char)text_[pos_])) ++pos_;
        std::string name(text_.substr(s, pos_ - s));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            return parse_call(name, s);
        }
        if (name == "TRUE") return make_expr(BoolLit{true});
        if (name == "FALSE") return make_expr(BoolLit{false});
        throw SyntaxError("expected a reference, function call, or TRUE/FALSE", start);
    }

    // True when the upcoming letters+digits form an A1-style address.
    bool lookahead_is_ref() {
        size_t p = pos_;
        size_t letters = 0;
        while (p < text_.size() && text_[p] >= 'A' && text_[p] <= 'Z') {
            ++letters;
            ++p;
        }
        if (letters == 0 || letters > 2) return false;
        if (p < text_.size() && text_[p] == '$') ++p;
        return p < text_.size() && std::isdigit((unsigned char)text_[p]);
    }

    Ref parse_ref() {
        skip_ws();
        size_t start = pos_;
        bool abs_col = consume('$');
        size_t s = pos_;
        while (pos_ < text_.size() && text_[pos_] >= 'A' && text_[pos_] <= 'Z') ++pos_;
        auto col = column_from_label(text_.substr(s, pos_ - s));
        if (!col) throw SyntaxError("malformed column label", start);
        bool abs_row = pos_ < text_.size() && text_[pos_] == '$';
        if (abs_row) ++pos_;
        size_t rs = pos_;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
        int row1 = 0;
        auto span = text_.substr(rs, pos_ - rs);
        auto [p, ec] = std::from_chars(span.data(), span.data() + span.size(), row1);
        if (ec != std::errc{} || p != span.data() + span.size() || row1 < 1)
            throw SyntaxError("malformed row number", rs);
        int row = row1 - 1;
        if (*col >= bounds_.cols || row >= bounds_.rows)
            throw RefOutOfGrid("address " + text_.substr(start, pos_ - start) +
                               std::string(" exceeds the grid"));
        RefAxis cax = abs_col ? RefAxis::absolute(*col) : RefAxis::relative(*col - host_.col);
        RefAxis rax = abs_row ? RefAxis::absolute(row) : RefAxis::relative(row - host_.row);
        return Ref{cax, rax};
    }

    Expr parse_call(const std::string& name, size_t name_offset) {
        if (name == "IF") {
            Expr cond = parse_expr();
            expect(';', "between IF arguments");
            Expr then_e = parse_expr();
            expect(';', "between IF arguments");
            Expr else_e = parse_expr();
            expect(')', "to close IF");
            return make_expr(If{std::move(cond), std::move(then_e), std::move(else_e)});
        }
        Func fn;
        if (name == "SUM") fn = Func::Sum;
        else if (name == "AVG") fn = Func::Avg;
        else if (name == "NOW") fn = Func::Now;
        else throw UnknownFunction(name, name_offset);

        Call call{fn, {}};
        if (fn == Func::Now) {
            expect(')', "to close NOW");
            return make_expr(std::move(call));
        }
        for (;;) {
            size_t arg_at = pos_;
            skip_ws();
            arg_at = pos_;
            Expr arg = parse_expr();
            if (std::holds_alternative<TextLit>(arg.node) ||
                std::holds_alternative<BoolLit>(arg.node))
                throw SyntaxError(std::string(func_name(fn)) +
                                      " argument must be a reference or numeric expression",
                                  arg_at);
            call.args.emplace_back(std::move(arg));
            if (consume(';')) continue;
            if (peek() == ',')
                throw SyntaxError("arguments are separated by ';', not ','", pos_);
            expect(')', "to close argument list");
            break;
        }
        return make_expr(std::move(call));
    }
};

} // namespace

Parsed parse(std::string_view text, CellAddr host, const GridBounds& bounds) {
    if (!text.empty() && text[0] == '=') {
        FormulaParser p(text, host, bounds);
        return {p.parse_formula(), true};
    }
    double num = 0;
    if (lexes_as_number(text, num)) return {make_expr(NumberLit{num}), false};
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"')
        return {make_expr(TextLit{std::string(text.substr(1, text.size() - 2))}), false};
    return {make_expr(TextLit{std::string(text)}), false};
}

} // namespace gridlab
