#pragma once

// Parser, printer and tree-walking evaluator for the chart definition language.
//
//   chart      = "chart" ident "{" section { section } "}"
//   section    = "params" ":" param { "," param } ";"
//              | "group" ":" grouptag ";"
//              | "matrix" ":" "[" row { "," row } "]" ";"
//   param      = ident "in" "[" expr "," expr "]"
//   grouptag   = "so(2)" | "so(3)" | "o(2)" | "o(3)" | "none"
//   row        = "[" expr { "," expr } "]"
//   expr       = term { ("+" | "-") term }
//   term       = unary { ("*" | "/") unary }
//   unary      = "-" unary | power
//   power      = primary [ "^" [ "-" ] integer ]
//   primary    = number | "pi" | ident | func "(" expr ")" | "(" expr ")"
//   func       = sin | cos | tan | sqrt | arccos | arcsin
//
// Sections may appear in any order; params and matrix are mandatory. A source
// that starts directly with a section (no "chart" header) is accepted and named
// "unnamed". '#' starts a comment that runs to the end of the line.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "haar/errors.hpp"

namespace haar::dsl {

struct SourcePos {
    int line = 1;
    int column = 1;
};

enum class ErrorKind { lexical, syntax, unknown_identifier, ragged_matrix, bound_order, semantic };

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::lexical: return "lexical error";
    case ErrorKind::syntax: return "syntax error";
    case ErrorKind::unknown_identifier: return "unknown identifier";
    case ErrorKind::ragged_matrix: return "matrix shape error";
    case ErrorKind::bound_order: return "bound ordering error";
    case ErrorKind::semantic: return "chart check failed";
    }
    return "error";
}

/// Positioned diagnostic. what() reads "line:col: <kind>: <message>".
class ParseError : public InvalidArgument {
public:
    ParseError(ErrorKind kind, SourcePos pos, const std::string& message)
        : InvalidArgument(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                          std::string(to_string(kind)) + ": " + message),
          kind_(kind), pos_(pos), message_(message) {}

    ErrorKind kind() const { return kind_; }
    SourcePos position() const { return pos_; }
    const std::string& message() const { return message_; }

private:
    ErrorKind kind_;
    SourcePos pos_;
    std::string message_;
};

enum class Func { sin, cos, tan, sqrt, arccos, arcsin };

inline std::string_view to_string(Func f) {
    switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::sqrt: return "sqrt";
    case Func::arccos: return "arccos";
    case Func::arcsin: return "arcsin";
    }
    return "?";
}

inline std::optional<Func> function_from_name(std::string_view s) {
    if (s == "sin") return Func::sin;
    if (s == "cos") return Func::cos;
    if (s == "tan") return Func::tan;
    if (s == "sqrt") return Func::sqrt;
    if (s == "arccos") return Func::arccos;
    if (s == "arcsin") return Func::arcsin;
    return std::nullopt;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { number, pi, param, neg, add, sub, mul, div, pow, call };

    Kind kind = Kind::number;
    double value = 0.0;   // number
    int exponent = 0;     // pow
    int index = -1;       // param, resolved against the declaration list
    std::string name;     // param
    Func func = Func::sin; // call
    ExprPtr lhs;          // operand of neg / pow / call, left of binary ops
    ExprPtr rhs;
    SourcePos pos;
};

/// Structural equality; source positions are ignored.
inline bool equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::number: return a.value == b.value;
    case Expr::Kind::pi: return true;
    case Expr::Kind::param: return a.name == b.name;
    case Expr::Kind::neg: return equal(*a.lhs, *b.lhs);
    case Expr::Kind::pow: return a.exponent == b.exponent && equal(*a.lhs, *b.lhs);
    case Expr::Kind::call: return a.func == b.func && equal(*a.lhs, *b.lhs);
    default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
}

inline double evaluate(const Expr& e, std::span<const double> params) {
    switch (e.kind) {
    case Expr::Kind::number: return e.value;
    case Expr::Kind::pi: return 3.14159265358979323846;
    case Expr::Kind::param: return params[static_cast<std::size_t>(e.index)];
    case Expr::Kind::neg: return -evaluate(*e.lhs, params);
    case Expr::Kind::add: return evaluate(*e.lhs, params) + evaluate(*e.rhs, params);
    case Expr::Kind::sub: return evaluate(*e.lhs, params) - evaluate(*e.rhs, params);
    case Expr::Kind::mul: return evaluate(*e.lhs, params) * evaluate(*e.rhs, params);
    case Expr::Kind::div: return evaluate(*e.lhs, params) / evaluate(*e.rhs, params);
    case Expr::Kind::pow: {
        const double b = evaluate(*e.lhs, params);
        int n = e.exponent;
        // exact repeated multiplication; std::pow(double, int) is not guaranteed to be
        double r = 1.0;
        double base = n < 0 ? 1.0 / b : b;
        for (n = n < 0 ? -n : n; n > 0; --n) r *= base;
        return r;
    }
    case Expr::Kind::call: {
        const double x = evaluate(*e.lhs, params);
        switch (e.func) {
        case Func::sin: return std::sin(x);
        case Func::cos: return std::cos(x);
        case Func::tan: return std::tan(x);
        case Func::sqrt: return std::sqrt(x);
        case Func::arccos: return std::acos(x);
        case Func::arcsin: return std::asin(x);
        }
    }
    }
    return 0.0;
}

/// Declared group of a chart. `unspecified` when the source has no group section.
enum class DeclaredGroup { unspecified, none, so2, so3, o2, o3 };

inline std::string_view to_string(DeclaredGroup g) {
    switch (g) {
    case DeclaredGroup::unspecified: return "";
    case DeclaredGroup::none: return "none";
    case DeclaredGroup::so2: return "so(2)";
    case DeclaredGroup::so3: return "so(3)";
    case DeclaredGroup::o2: return "o(2)";
    case DeclaredGroup::o3: return "o(3)";
    }
    return "";
}

struct ParamDecl {
    std::string name;
    ExprPtr lower;
    ExprPtr upper;
    double lower_value = 0.0;
    double upper_value = 0.0;
    SourcePos pos;
};

struct ChartAst {
    std::string name;
    std::vector<ParamDecl> params;
    DeclaredGroup group = DeclaredGroup::unspecified;
    SourcePos group_pos;
    std::vector<std::vector<ExprPtr>> matrix;
    SourcePos matrix_pos;

    int dim() const { return static_cast<int>(matrix.size()); }
    int parameter_count() const { return static_cast<int>(params.size()); }
};

inline bool equal(const ChartAst& a, const ChartAst& b) {
    if (a.name != b.name || a.group != b.group || a.params.size() != b.params.size() ||
        a.matrix.size() != b.matrix.size())
        return false;
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        const auto& p = a.params[i];
        const auto& q = b.params[i];
        if (p.name != q.name || !equal(*p.lower, *q.lower) || !equal(*p.upper, *q.upper)) return false;
    }
    for (std::size_t i = 0; i < a.matrix.size(); ++i) {
        if (a.matrix[i].size() != b.matrix[i].size()) return false;
        for (std::size_t j = 0; j < a.matrix[i].size(); ++j)
            if (!equal(*a.matrix[i][j], *b.matrix[i][j])) return false;
    }
    return true;
}

namespace detail {

struct Token {
    enum class Kind { ident, number, punct, end };
    Kind kind = Kind::end;
    std::string text;
    double value = 0.0;
    bool integral = false;
    SourcePos pos;
};

inline std::string describe(const Token& t) {
    switch (t.kind) {
    case Token::Kind::end: return "end of input";
    case Token::Kind::number: return "number '" + t.text + "'";
    case Token::Kind::ident: return "identifier '" + t.text + "'";
    case Token::Kind::punct: return "'" + t.text + "'";
    }
    return "?";
}

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    SourcePos pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            const auto c = static_cast<unsigned char>(src[i]);
            if (c == '\n') {
                ++pos.line;
                pos.column = 1;
            } else if ((c & 0xC0) != 0x80) {
                ++pos.column;
            }
        }
    };
    while (i < src.size()) {
        const auto c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.pos = pos;
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            tok.kind = Token::Kind::ident;
            tok.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(c) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            bool integral = true;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                integral = false;
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k >= src.size() || !std::isdigit(static_cast<unsigned char>(src[k])))
                    throw ParseError(ErrorKind::lexical, pos, "malformed exponent in numeric literal");
                while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                integral = false;
                j = k;
            }
            tok.kind = Token::Kind::number;
            tok.text = std::string(src.substr(i, j - i));
            tok.value = std::strtod(tok.text.c_str(), nullptr);
            tok.integral = integral;
            advance(j - i);
        } else if (std::string_view("{}[](),;:+-*/^").find(static_cast<char>(c)) != std::string_view::npos) {
            tok.kind = Token::Kind::punct;
            tok.text = std::string(1, static_cast<char>(c));
            advance(1);
        } else {
            std::string shown;
            if (c < 0x80 && std::isprint(c)) {
                shown = "'" + std::string(1, static_cast<char>(c)) + "'";
            } else {
                char buf[8];
                std::snprintf(buf, sizeof buf, "0x%02X", c);
                shown = "byte " + std::string(buf);
            }
            throw ParseError(ErrorKind::lexical, pos, "unexpected character " + shown);
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Token::Kind::end;
    end.pos = pos;
    out.push_back(end);
    return out;
}

inline bool is_reserved(std::string_view s) {
    return s == "pi" || function_from_name(s).has_value();
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ChartAst chart() {
        ChartAst ast;
        if (peek_ident("chart")) {
            next();
            const Token& name = expect_ident("chart name");
            if (is_reserved(name.text))
                throw ParseError(ErrorKind::syntax, name.pos, "'" + name.text + "' cannot be used as a chart name");
            ast.name = name.text;
            expect_punct("{");
            sections(ast, true);
            expect_punct("}");
        } else {
            ast.name = "unnamed";
            sections(ast, false);
        }
        if (peek().kind != Token::Kind::end)
            throw ParseError(ErrorKind::syntax, peek().pos, "expected end of input, found " + describe(peek()));
        return ast;
    }

    ExprPtr standalone_expression() {
        ExprPtr e = expr();
        if (peek().kind != Token::Kind::end)
            throw ParseError(ErrorKind::syntax, peek().pos, "expected end of expression, found " + describe(peek()));
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool peek_punct(std::string_view p) const { return peek().kind == Token::Kind::punct && peek().text == p; }
    bool peek_ident(std::string_view s) const { return peek().kind == Token::Kind::ident && peek().text == s; }

    const Token& expect_punct(std::string_view p) {
        if (!peek_punct(p))
            throw ParseError(ErrorKind::syntax, peek().pos,
                             "expected '" + std::string(p) + "', found " + describe(peek()));
        return next();
    }

    const Token& expect_ident(std::string_view what) {
        if (peek().kind != Token::Kind::ident)
            throw ParseError(ErrorKind::syntax, peek().pos,
                             "expected " + std::string(what) + ", found " + describe(peek()));
        return next();
    }

    void sections(ChartAst& ast, bool braced) {
        bool have_params = false, have_group = false, have_matrix = false;
        const auto at_close = [&] {
            return braced ? peek_punct("}") : peek().kind == Token::Kind::end;
        };
        while (!at_close()) {
            const Token& kw = expect_ident("'params', 'group' or 'matrix'");
            auto duplicate = [&](bool seen) {
                if (seen) throw ParseError(ErrorKind::syntax, kw.pos, "duplicate '" + kw.text + "' section");
            };
            if (kw.text == "params") {
                duplicate(have_params);
                have_params = true;
                expect_punct(":");
                param_list(ast);
            } else if (kw.text == "group") {
                duplicate(have_group);
                have_group = true;
                expect_punct(":");
                ast.group_pos = peek().pos;
                ast.group = group_tag();
            } else if (kw.text == "matrix") {
                duplicate(have_matrix);
                have_matrix = true;
                expect_punct(":");
                ast.matrix_pos = peek().pos;
                matrix(ast);
            } else {
                throw ParseError(ErrorKind::syntax, kw.pos,
                                 "expected 'params', 'group' or 'matrix', found " + describe(kw));
            }
            expect_punct(";");
        }
        if (!have_params) throw ParseError(ErrorKind::syntax, peek().pos, "missing 'params' section");
        if (!have_matrix) throw ParseError(ErrorKind::syntax, peek().pos, "missing 'matrix' section");
    }

    void param_list(ChartAst& ast) {
        do {
            ParamDecl p;
            const Token& name = expect_ident("parameter name");
            p.pos = name.pos;
            p.name = name.text;
            if (is_reserved(p.name))
                throw ParseError(ErrorKind::syntax, name.pos, "'" + p.name + "' is reserved and cannot name a parameter");
            for (const auto& q : ast.params)
                if (q.name == p.name)
                    throw ParseError(ErrorKind::syntax, name.pos, "parameter '" + p.name + "' declared twice");
            if (!peek_ident("in"))
                throw ParseError(ErrorKind::syntax, peek().pos, "expected 'in', found " + describe(peek()));
            next();
            expect_punct("[");
            p.lower = expr();
            expect_punct(",");
            p.upper = expr();
            expect_punct("]");
            ast.params.push_back(std::move(p));
        } while (peek_punct(",") && (next(), true));
    }

    DeclaredGroup group_tag() {
        const Token& t = expect_ident("group tag");
        if (t.text == "none") return DeclaredGroup::none;
        if (t.text != "so" && t.text != "o")
            throw ParseError(ErrorKind::syntax, t.pos, "expected so(2), so(3), o(2), o(3) or none, found " + describe(t));
        expect_punct("(");
        const Token& n = peek();
        if (n.kind != Token::Kind::number || !n.integral || (n.text != "2" && n.text != "3"))
            throw ParseError(ErrorKind::syntax, n.pos, "group dimension must be 2 or 3, found " + describe(n));
        next();
        expect_punct(")");
        const bool special = t.text == "so";
        if (n.text == "2") return special ? DeclaredGroup::so2 : DeclaredGroup::o2;
        return special ? DeclaredGroup::so3 : DeclaredGroup::o3;
    }

    void matrix(ChartAst& ast) {
        expect_punct("[");
        std::vector<SourcePos> row_pos;
        do {
            row_pos.push_back(peek().pos);
            expect_punct("[");
            std::vector<ExprPtr> row;
            do {
                row.push_back(expr());
            } while (peek_punct(",") && (next(), true));
            expect_punct("]");
            ast.matrix.push_back(std::move(row));
        } while (peek_punct(",") && (next(), true));
        expect_punct("]");
        const std::size_t cols = ast.matrix.front().size();
        for (std::size_t r = 0; r < ast.matrix.size(); ++r)
            if (ast.matrix[r].size() != cols)
                throw ParseError(ErrorKind::ragged_matrix, row_pos[r],
                                 "row " + std::to_string(r + 1) + " has " + std::to_string(ast.matrix[r].size()) +
                                     " entries, expected " + std::to_string(cols));
        if (cols != ast.matrix.size())
            throw ParseError(ErrorKind::ragged_matrix, ast.matrix_pos,
                             "matrix must be square, got " + std::to_string(ast.matrix.size()) + "x" +
                                 std::to_string(cols));
    }

    static ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

    static ExprPtr binary(Expr::Kind k, ExprPtr l, ExprPtr r, SourcePos pos) {
        Expr e;
        e.kind = k;
        e.lhs = std::move(l);
        e.rhs = std::move(r);
        e.pos = pos;
        return make(std::move(e));
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (peek_punct("+") || peek_punct("-")) {
            const Token& op = next();
            lhs = binary(op.text == "+" ? Expr::Kind::add : Expr::Kind::sub, lhs, term(), op.pos);
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        while (peek_punct("*") || peek_punct("/")) {
            const Token& op = next();
            lhs = binary(op.text == "*" ? Expr::Kind::mul : Expr::Kind::div, lhs, unary(), op.pos);
        }
        return lhs;
    }

    ExprPtr unary() {
        if (peek_punct("-")) {
            Expr e;
            e.kind = Expr::Kind::neg;
            e.pos = next().pos;
            e.lhs = unary();
            return make(std::move(e));
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (!peek_punct("^")) return base;
        Expr e;
        e.kind = Expr::Kind::pow;
        e.pos = next().pos;
        bool negative = false;
        if (peek_punct("-")) {
            next();
            negative = true;
        }
        const Token& n = peek();
        if (n.kind != Token::Kind::number || !n.integral || n.text.size() > 6)
            throw ParseError(ErrorKind::syntax, n.pos, "expected integer exponent after '^', found " + describe(n));
        next();
        e.exponent = static_cast<int>(n.value) * (negative ? -1 : 1);
        e.lhs = std::move(base);
        return make(std::move(e));
    }

    ExprPtr primary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::number) {
            next();
            Expr e;
            e.kind = Expr::Kind::number;
            e.value = t.value;
            e.pos = t.pos;
            return make(std::move(e));
        }
        if (t.kind == Token::Kind::ident) {
            next();
            Expr e;
            e.pos = t.pos;
            if (t.text == "pi") {
                e.kind = Expr::Kind::pi;
                return make(std::move(e));
            }
            if (peek_punct("(")) {
                const auto f = function_from_name(t.text);
                if (!f) throw ParseError(ErrorKind::unknown_identifier, t.pos, "unknown function '" + t.text + "'");
                next();
                e.kind = Expr::Kind::call;
                e.func = *f;
                e.lhs = expr();
                expect_punct(")");
                return make(std::move(e));
            }
            if (function_from_name(t.text))
                throw ParseError(ErrorKind::syntax, peek().pos, "expected '(' after function '" + t.text + "', found " + describe(peek()));
            e.kind = Expr::Kind::param;
            e.name = t.text;
            return make(std::move(e));
        }
        if (t.kind == Token::Kind::punct && t.text == "(") {
            next();
            ExprPtr inner = expr();
            expect_punct(")");
            return inner;
        }
        throw ParseError(ErrorKind::syntax, t.pos, "expected an expression, found " + describe(t));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

/// Rebuilds `e` with parameter indices filled in from `names`.
inline ExprPtr resolve(const ExprPtr& e, const std::unordered_map<std::string, int>& names, std::string_view context) {
    if (!e) return e;
    Expr copy = *e;
    if (copy.kind == Expr::Kind::param) {
        const auto it = names.find(copy.name);
        if (it == names.end())
            throw ParseError(ErrorKind::unknown_identifier, copy.pos,
                             "'" + copy.name + "' is not " + std::string(context));
        copy.index = it->second;
    }
    copy.lhs = resolve(copy.lhs, names, context);
    copy.rhs = resolve(copy.rhs, names, context);
    return std::make_shared<const Expr>(std::move(copy));
}

} // namespace detail

/// Parses chart source text. All semantic checks that do not need numeric
/// evaluation of the matrix are done here.
inline ChartAst parse_chart(std::string_view source) {
    detail::Parser parser(detail::tokenize(source));
    ChartAst ast = parser.chart();

    const std::unordered_map<std::string, int> no_names;
    for (auto& p : ast.params) {
        p.lower = detail::resolve(p.lower, no_names, "allowed in a bound (bounds must be constant)");
        p.upper = detail::resolve(p.upper, no_names, "allowed in a bound (bounds must be constant)");
        p.lower_value = evaluate(*p.lower, {});
        p.upper_value = evaluate(*p.upper, {});
        if (!std::isfinite(p.lower_value) || !std::isfinite(p.upper_value))
            throw ParseError(ErrorKind::bound_order, p.pos, "bounds of '" + p.name + "' are not finite");
        if (!(p.lower_value < p.upper_value))
            throw ParseError(ErrorKind::bound_order, p.pos,
                             "lower bound of '" + p.name + "' must be below its upper bound");
    }

    std::unordered_map<std::string, int> names;
    for (std::size_t i = 0; i < ast.params.size(); ++i) names.emplace(ast.params[i].name, static_cast<int>(i));
    for (auto& row : ast.matrix)
        for (auto& entry : row) entry = detail::resolve(entry, names, "a declared parameter");
    return ast;
}

/// Parses a free-standing expression over the given variable names.
inline ExprPtr parse_expression(std::string_view source, const std::vector<std::string>& variables = {}) {
    detail::Parser parser(detail::tokenize(source));
    ExprPtr e = parser.standalone_expression();
    std::unordered_map<std::string, int> names;
    for (std::size_t i = 0; i < variables.size(); ++i) names.emplace(variables[i], static_cast<int>(i));
    return detail::resolve(e, names, "a known variable");
}

/// Evaluates a constant expression such as "-pi/2".
inline double evaluate_constant(std::string_view source) { return evaluate(*parse_expression(source), {}); }

namespace detail {

inline int precedence(Expr::Kind k) {
    switch (k) {
    case Expr::Kind::add:
    case Expr::Kind::sub: return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div: return 2;
    case Expr::Kind::neg: return 3;
    case Expr::Kind::pow: return 4;
    default: return 5;
    }
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // shortest form that reads back to the same double
    for (int digits = 1; digits < 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) {
            s = buf;
            break;
        }
    }
    return s;
}

inline void print(const Expr& e, std::string& out) {
    const auto child = [&](const Expr& c, bool parens) {
        if (parens) out += '(';
        print(c, out);
        if (parens) out += ')';
    };
    const int prec = precedence(e.kind);
    switch (e.kind) {
    case Expr::Kind::number: out += format_number(e.value); break;
    case Expr::Kind::pi: out += "pi"; break;
    case Expr::Kind::param: out += e.name; break;
    case Expr::Kind::neg:
        out += '-';
        child(*e.lhs, precedence(e.lhs->kind) < prec);
        break;
    case Expr::Kind::pow:
        child(*e.lhs, precedence(e.lhs->kind) <= prec);
        out += '^';
        out += std::to_string(e.exponent);
        break;
    case Expr::Kind::call:
        out += to_string(e.func);
        out += '(';
        print(*e.lhs, out);
        out += ')';
        break;
    default: {
        const char* op = e.kind == Expr::Kind::add ? " + "
                         : e.kind == Expr::Kind::sub ? " - "
                         : e.kind == Expr::Kind::mul ? " * "
                                                     : " / ";
        child(*e.lhs, precedence(e.lhs->kind) < prec);
        out += op;
        child(*e.rhs, precedence(e.rhs->kind) <= prec);
    }
    }
}

} // namespace detail

inline std::string print(const Expr& e) {
    std::string out;
    detail::print(e, out);
    return out;
}

/// Canonical source text for `ast`; parse_chart(print_chart(ast)) is equal to `ast`.
inline std::string print_chart(const ChartAst& ast) {
    std::string out = "chart " + ast.name + " {\n  params: ";
    for (std::size_t i = 0; i < ast.params.size(); ++i) {
        const auto& p = ast.params[i];
        if (i) out += ",\n          ";
        out += p.name + " in [" + print(*p.lower) + ", " + print(*p.upper) + "]";
    }
    out += ";\n";
    if (ast.group != DeclaredGroup::unspecified) out += "  group: " + std::string(to_string(ast.group)) + ";\n";
    out += "  matrix: [";
    for (std::size_t r = 0; r < ast.matrix.size(); ++r) {
        out += r ? ",\n           [" : "[";
        for (std::size_t c = 0; c < ast.matrix[r].size(); ++c) {
            if (c) out += ", ";
            out += print(*ast.matrix[r][c]);
        }
        out += "]";
    }
    out += "];\n}\n";
    return out;
}

} // namespace haar::dsl
