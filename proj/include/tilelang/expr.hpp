#pragma once

// Pure expression mini-language used for transition, chooser and property
// bodies: integers, strings, booleans, tuples, Python-style floor division
// and conditional syntax (`a if cond else b`). No loops, no recursion, no
// assignment; every evaluation terminates.

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tilelang/diag.hpp"

namespace tilelang {

// ---------------------------------------------------------------------------
// Values

struct Value;
using ValueList = std::vector<Value>;

struct Value {
    std::variant<std::int64_t, std::string, bool, ValueList> v;

    Value() : v(std::int64_t{0}) {}
    Value(std::int64_t i) : v(i) {}
    Value(int i) : v(std::int64_t{i}) {}
    Value(std::string s) : v(std::move(s)) {}
    Value(const char* s) : v(std::string(s)) {}
    Value(bool b) : v(b) {}
    Value(ValueList t) : v(std::move(t)) {}

    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_str() const { return std::holds_alternative<std::string>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_tuple() const { return std::holds_alternative<ValueList>(v); }

    std::int64_t as_int() const { return std::get<std::int64_t>(v); }
    const std::string& as_str() const { return std::get<std::string>(v); }
    bool as_bool() const { return std::get<bool>(v); }
    const ValueList& as_tuple() const { return std::get<ValueList>(v); }

    bool operator==(const Value&) const = default;
};

inline const char* type_name(const Value& v) {
    if (v.is_int()) return "int";
    if (v.is_str()) return "string";
    if (v.is_bool()) return "bool";
    return "tuple";
}

inline std::string quote_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

inline std::string to_string(const Value& v) {
    if (v.is_int()) return std::to_string(v.as_int());
    if (v.is_str()) return quote_string(v.as_str());
    if (v.is_bool()) return v.as_bool() ? "true" : "false";
    std::string out = "(";
    const auto& t = v.as_tuple();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ", ";
        out += to_string(t[i]);
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// AST

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, FloorDiv, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

inline const char* op_text(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::FloorDiv: return "//";
        case BinaryOp::Mod: return "%";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::And: return "and";
        case BinaryOp::Or: return "or";
    }
    return "?";
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { IntLit, StrLit, BoolLit, Var, Unary, Binary, Conditional, Tuple, Call };

    Kind kind;
    SourcePos pos;

    std::int64_t int_value = 0;     // IntLit
    std::string text;               // StrLit payload, Var name, Call builtin name
    bool bool_value = false;        // BoolLit
    UnaryOp unary_op = UnaryOp::Neg;
    BinaryOp binary_op = BinaryOp::Add;
    std::vector<ExprPtr> children;  // operands / condition+branches / elements / args
};

inline ExprPtr make_int(std::int64_t v, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::IntLit;
    e->int_value = v;
    e->pos = p;
    return e;
}
inline ExprPtr make_str(std::string s, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::StrLit;
    e->text = std::move(s);
    e->pos = p;
    return e;
}
inline ExprPtr make_bool(bool b, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::BoolLit;
    e->bool_value = b;
    e->pos = p;
    return e;
}
inline ExprPtr make_var(std::string name, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Var;
    e->text = std::move(name);
    e->pos = p;
    return e;
}
inline ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Unary;
    e->unary_op = op;
    e->children = {std::move(operand)};
    e->pos = p;
    return e;
}
inline ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->binary_op = op;
    e->children = {std::move(lhs), std::move(rhs)};
    e->pos = p;
    return e;
}
inline ExprPtr make_conditional(ExprPtr then_e, ExprPtr cond, ExprPtr else_e, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Conditional;
    e->children = {std::move(then_e), std::move(cond), std::move(else_e)};
    e->pos = p;
    return e;
}
inline ExprPtr make_tuple(std::vector<ExprPtr> elems, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Tuple;
    e->children = std::move(elems);
    e->pos = p;
    return e;
}
inline ExprPtr make_call(std::string builtin, std::vector<ExprPtr> args, SourcePos p = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->text = std::move(builtin);
    e->children = std::move(args);
    e->pos = p;
    return e;
}

// Structural equality ignoring source positions.
inline bool same_expr(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    if (a->int_value != b->int_value || a->text != b->text || a->bool_value != b->bool_value)
        return false;
    if (a->unary_op != b->unary_op || a->binary_op != b->binary_op) return false;
    if (a->children.size() != b->children.size()) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!same_expr(a->children[i], b->children[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Lexer

namespace expr_detail {

enum class Tok {
    End, Int, Str, Ident,
    If, Else, And, Or, Not, True, False,
    Plus, Minus, Star, SlashSlash, Percent,
    EqEq, NotEq, Lt, Le, Gt, Ge,
    LParen, RParen, Comma,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t int_value = 0;
    SourcePos pos;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

// Lexes a single-line expression. `base` locates source[0] in the original
// file so diagnostics point into the enclosing document.
inline std::vector<Token> lex(const std::string& source, SourcePos base) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto pos_at = [&](std::size_t k) {
        return SourcePos{base.line == 0 ? 1 : base.line,
                         (base.col == 0 ? 1 : base.col) + static_cast<int>(k)};
    };
    auto fail = [&](std::size_t k, const std::string& msg) {
        throw TileError("SyntaxError", msg, pos_at(k));
    };
    while (i < source.size()) {
        char c = source[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        Token t;
        t.pos = pos_at(i);
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < source.size() && std::isdigit(static_cast<unsigned char>(source[j]))) ++j;
            t.kind = Tok::Int;
            t.text = source.substr(i, j - i);
            try {
                t.int_value = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                fail(i, "integer literal out of range: " + t.text);
            }
            i = j;
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < source.size() && ident_char(source[j])) ++j;
            t.text = source.substr(i, j - i);
            i = j;
            if (t.text == "if") t.kind = Tok::If;
            else if (t.text == "else") t.kind = Tok::Else;
            else if (t.text == "and") t.kind = Tok::And;
            else if (t.text == "or") t.kind = Tok::Or;
            else if (t.text == "not") t.kind = Tok::Not;
            else if (t.text == "true") t.kind = Tok::True;
            else if (t.text == "false") t.kind = Tok::False;
            else t.kind = Tok::Ident;
        } else if (c == '"') {
            std::size_t j = i + 1;
            std::string s;
            while (true) {
                if (j >= source.size()) fail(i, "unterminated string literal");
                char d = source[j];
                if (d == '"') break;
                if (d == '\\') {
                    if (j + 1 >= source.size()) fail(j, "unterminated escape");
                    char e = source[j + 1];
                    if (e == '"') s += '"';
                    else if (e == '\\') s += '\\';
                    else if (e == 'n') s += '\n';
                    else if (e == 't') s += '\t';
                    else fail(j, std::string("unknown escape '\\") + e + "'");
                    j += 2;
                } else {
                    s += d;
                    ++j;
                }
            }
            t.kind = Tok::Str;
            t.text = s;
            i = j + 1;
        } else {
            auto two = source.substr(i, 2);
            if (two == "//") { t.kind = Tok::SlashSlash; i += 2; }
            else if (two == "==") { t.kind = Tok::EqEq; i += 2; }
            else if (two == "!=") { t.kind = Tok::NotEq; i += 2; }
            else if (two == "<=") { t.kind = Tok::Le; i += 2; }
            else if (two == ">=") { t.kind = Tok::Ge; i += 2; }
            else if (c == '+') { t.kind = Tok::Plus; ++i; }
            else if (c == '-') { t.kind = Tok::Minus; ++i; }
            else if (c == '*') { t.kind = Tok::Star; ++i; }
            else if (c == '%') { t.kind = Tok::Percent; ++i; }
            else if (c == '<') { t.kind = Tok::Lt; ++i; }
            else if (c == '>') { t.kind = Tok::Gt; ++i; }
            else if (c == '(') { t.kind = Tok::LParen; ++i; }
            else if (c == ')') { t.kind = Tok::RParen; ++i; }
            else if (c == ',') { t.kind = Tok::Comma; ++i; }
            else fail(i, std::string("unexpected character '") + c + "' in expression");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.pos = pos_at(source.size());
    out.push_back(end);
    return out;
}

inline const std::set<std::string>& builtins() {
    static const std::set<std::string> b = {"str", "abs", "min", "max"};
    return b;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ExprPtr parse() {
        ExprPtr e = conditional();
        expect(Tok::End, "end of expression");
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t at_ = 0;

    const Token& cur() const { return toks_[at_]; }
    bool accept(Tok k) {
        if (cur().kind == k) {
            ++at_;
            return true;
        }
        return false;
    }
    void expect(Tok k, const std::string& what) {
        if (!accept(k))
            throw TileError("SyntaxError", "expected " + what + describe_cur(), cur().pos);
    }
    std::string describe_cur() const {
        if (cur().kind == Tok::End) return ", got end of input";
        return ", got '" + (cur().text.empty() ? token_spelling(cur().kind) : cur().text) + "'";
    }
    static std::string token_spelling(Tok k) {
        switch (k) {
            case Tok::Plus: return "+";
            case Tok::Minus: return "-";
            case Tok::Star: return "*";
            case Tok::SlashSlash: return "//";
            case Tok::Percent: return "%";
            case Tok::EqEq: return "==";
            case Tok::NotEq: return "!=";
            case Tok::Lt: return "<";
            case Tok::Le: return "<=";
            case Tok::Gt: return ">";
            case Tok::Ge: return ">=";
            case Tok::LParen: return "(";
            case Tok::RParen: return ")";
            case Tok::Comma: return ",";
            default: return "?";
        }
    }

    // conditional := or ('if' or 'else' conditional)?
    ExprPtr conditional() {
        ExprPtr subject = or_expr();
        if (accept(Tok::If)) {
            SourcePos p = subject->pos;
            ExprPtr cond = or_expr();
            expect(Tok::Else, "'else'");
            ExprPtr other = conditional();
            return make_conditional(std::move(subject), std::move(cond), std::move(other), p);
        }
        return subject;
    }

    ExprPtr or_expr() {
        ExprPtr e = and_expr();
        while (cur().kind == Tok::Or) {
            SourcePos p = cur().pos;
            ++at_;
            e = make_binary(BinaryOp::Or, e, and_expr(), p);
        }
        return e;
    }

    ExprPtr and_expr() {
        ExprPtr e = not_expr();
        while (cur().kind == Tok::And) {
            SourcePos p = cur().pos;
            ++at_;
            e = make_binary(BinaryOp::And, e, not_expr(), p);
        }
        return e;
    }

    ExprPtr not_expr() {
        if (cur().kind == Tok::Not) {
            SourcePos p = cur().pos;
            ++at_;
            return make_unary(UnaryOp::Not, not_expr(), p);
        }
        return comparison();
    }

    std::optional<BinaryOp> cmp_op() {
        switch (cur().kind) {
            case Tok::EqEq: return BinaryOp::Eq;
            case Tok::NotEq: return BinaryOp::Ne;
            case Tok::Lt: return BinaryOp::Lt;
            case Tok::Le: return BinaryOp::Le;
            case Tok::Gt: return BinaryOp::Gt;
            case Tok::Ge: return BinaryOp::Ge;
            default: return std::nullopt;
        }
    }

    // Non-associative: a == b == c is a syntax error.
    ExprPtr comparison() {
        ExprPtr e = additive();
        if (auto op = cmp_op()) {
            SourcePos p = cur().pos;
            ++at_;
            e = make_binary(*op, e, additive(), p);
            if (cmp_op())
                throw TileError("SyntaxError", "comparison operators cannot be chained", cur().pos);
        }
        return e;
    }

    ExprPtr additive() {
        ExprPtr e = multiplicative();
        while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
            BinaryOp op = cur().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            SourcePos p = cur().pos;
            ++at_;
            e = make_binary(op, e, multiplicative(), p);
        }
        return e;
    }

    ExprPtr multiplicative() {
        ExprPtr e = unary();
        while (true) {
            BinaryOp op;
            if (cur().kind == Tok::Star) op = BinaryOp::Mul;
            else if (cur().kind == Tok::SlashSlash) op = BinaryOp::FloorDiv;
            else if (cur().kind == Tok::Percent) op = BinaryOp::Mod;
            else break;
            SourcePos p = cur().pos;
            ++at_;
            e = make_binary(op, e, unary(), p);
        }
        return e;
    }

    ExprPtr unary() {
        if (cur().kind == Tok::Minus) {
            SourcePos p = cur().pos;
            ++at_;
            return make_unary(UnaryOp::Neg, unary(), p);
        }
        return atom();
    }

    ExprPtr atom() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Int: {
                ++at_;
                return make_int(t.int_value, t.pos);
            }
            case Tok::Str: {
                ++at_;
                return make_str(t.text, t.pos);
            }
            case Tok::True:
            case Tok::False: {
                bool b = t.kind == Tok::True;
                ++at_;
                return make_bool(b, t.pos);
            }
            case Tok::Ident: {
                ++at_;
                if (cur().kind == Tok::LParen) {
                    if (!builtins().count(t.text))
                        throw TileError("SyntaxError",
                                        "unknown function '" + t.text +
                                            "' (available: abs, max, min, str)",
                                        t.pos);
                    ++at_;
                    std::vector<ExprPtr> args;
                    if (cur().kind != Tok::RParen) {
                        args.push_back(conditional());
                        while (accept(Tok::Comma)) args.push_back(conditional());
                    }
                    expect(Tok::RParen, "')'");
                    return make_call(t.text, std::move(args), t.pos);
                }
                return make_var(t.text, t.pos);
            }
            case Tok::LParen: {
                SourcePos p = t.pos;
                ++at_;
                ExprPtr first = conditional();
                if (cur().kind == Tok::Comma) {
                    std::vector<ExprPtr> elems = {first};
                    while (accept(Tok::Comma)) elems.push_back(conditional());
                    expect(Tok::RParen, "')'");
                    return make_tuple(std::move(elems), p);
                }
                expect(Tok::RParen, "')'");
                return first;
            }
            default:
                throw TileError(
                    "SyntaxError",
                    std::string("expected an integer, string, 'true', 'false', name, '-', 'not' or '('") +
                        describe_cur(),
                    t.pos);
        }
    }
};

}  // namespace expr_detail

// Parses a one-line expression. `base` positions diagnostics within the
// enclosing file; defaults to 1:1.
inline ExprPtr parse_expr(const std::string& source, SourcePos base = {1, 1}) {
    return expr_detail::Parser(expr_detail::lex(source, base)).parse();
}

// ---------------------------------------------------------------------------
// Evaluation

using Env = std::map<std::string, Value>;

// Floor division and the matching remainder: a == (a//b)*b + a%b, with the
// quotient rounded toward negative infinity.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    std::int64_t r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}
inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

inline Value eval_expr(const ExprPtr& e, const Env& env) {
    auto type_error = [&](const std::string& msg) -> TileError {
        return TileError("TypeMismatch", msg, e->pos);
    };
    auto want_int = [&](const Value& v, const char* where) -> std::int64_t {
        if (!v.is_int()) throw type_error(std::string(where) + " requires an int, got " + type_name(v));
        return v.as_int();
    };
    auto want_bool = [&](const Value& v, const char* where) -> bool {
        if (!v.is_bool())
            throw type_error(std::string(where) + " requires a bool, got " + type_name(v));
        return v.as_bool();
    };

    switch (e->kind) {
        case Expr::Kind::IntLit: return Value(e->int_value);
        case Expr::Kind::StrLit: return Value(e->text);
        case Expr::Kind::BoolLit: return Value(e->bool_value);
        case Expr::Kind::Var: {
            auto it = env.find(e->text);
            if (it == env.end())
                throw TileError("UnboundVariable", "unbound variable '" + e->text + "'", e->pos);
            return it->second;
        }
        case Expr::Kind::Unary: {
            Value v = eval_expr(e->children[0], env);
            if (e->unary_op == UnaryOp::Neg) return Value(-want_int(v, "unary '-'"));
            return Value(!want_bool(v, "'not'"));
        }
        case Expr::Kind::Binary: {
            BinaryOp op = e->binary_op;
            if (op == BinaryOp::And || op == BinaryOp::Or) {
                bool lhs = want_bool(eval_expr(e->children[0], env),
                                     op == BinaryOp::And ? "'and'" : "'or'");
                if (op == BinaryOp::And && !lhs) return Value(false);
                if (op == BinaryOp::Or && lhs) return Value(true);
                return Value(want_bool(eval_expr(e->children[1], env),
                                       op == BinaryOp::And ? "'and'" : "'or'"));
            }
            Value a = eval_expr(e->children[0], env);
            Value b = eval_expr(e->children[1], env);
            switch (op) {
                case BinaryOp::Add: return Value(want_int(a, "'+'") + want_int(b, "'+'"));
                case BinaryOp::Sub: return Value(want_int(a, "'-'") - want_int(b, "'-'"));
                case BinaryOp::Mul: return Value(want_int(a, "'*'") * want_int(b, "'*'"));
                case BinaryOp::FloorDiv:
                case BinaryOp::Mod: {
                    std::int64_t x = want_int(a, "division");
                    std::int64_t y = want_int(b, "division");
                    if (y == 0) throw TileError("DivisionByZero", "division by zero", e->pos);
                    return Value(op == BinaryOp::FloorDiv ? floor_div(x, y) : floor_mod(x, y));
                }
                case BinaryOp::Eq:
                case BinaryOp::Ne: {
                    if (a.v.index() != b.v.index() || a.is_tuple() || b.is_tuple())
                        throw type_error(std::string("'") + op_text(op) + "' requires two values of the same scalar type, got " +
                                         type_name(a) + " and " + type_name(b));
                    bool eq = a == b;
                    return Value(op == BinaryOp::Eq ? eq : !eq);
                }
                case BinaryOp::Lt:
                case BinaryOp::Le:
                case BinaryOp::Gt:
                case BinaryOp::Ge: {
                    std::int64_t x = want_int(a, "ordering comparison");
                    std::int64_t y = want_int(b, "ordering comparison");
                    switch (op) {
                        case BinaryOp::Lt: return Value(x < y);
                        case BinaryOp::Le: return Value(x <= y);
                        case BinaryOp::Gt: return Value(x > y);
                        default: return Value(x >= y);
                    }
                }
                default: break;
            }
            throw type_error("unsupported operator");
        }
        case Expr::Kind::Conditional: {
            bool c = want_bool(eval_expr(e->children[1], env), "conditional");
            return eval_expr(e->children[c ? 0 : 2], env);
        }
        case Expr::Kind::Tuple: {
            ValueList vs;
            vs.reserve(e->children.size());
            for (const auto& child : e->children) {
                Value v = eval_expr(child, env);
                if (v.is_tuple()) throw type_error("tuples cannot be nested");
                vs.push_back(std::move(v));
            }
            return Value(std::move(vs));
        }
        case Expr::Kind::Call: {
            ValueList args;
            for (const auto& child : e->children) args.push_back(eval_expr(child, env));
            const std::string& f = e->text;
            if (f == "str") {
                if (args.size() != 1) throw type_error("str() takes exactly one argument");
                const Value& v = args[0];
                if (v.is_int()) return Value(std::to_string(v.as_int()));
                if (v.is_str()) return v;
                if (v.is_bool()) return Value(std::string(v.as_bool() ? "true" : "false"));
                throw type_error("str() cannot format a tuple");
            }
            if (f == "abs") {
                if (args.size() != 1) throw type_error("abs() takes exactly one argument");
                std::int64_t x = want_int(args[0], "abs()");
                return Value(x < 0 ? -x : x);
            }
            // min / max
            if (args.size() < 2) throw type_error(f + "() takes at least two arguments");
            std::int64_t best = want_int(args[0], f.c_str());
            for (std::size_t i = 1; i < args.size(); ++i) {
                std::int64_t x = want_int(args[i], f.c_str());
                best = (f == "min") ? std::min(best, x) : std::max(best, x);
            }
            return Value(best);
        }
    }
    throw type_error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Static checking

namespace expr_detail {

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t prev = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t cur = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                               prev + (a[i - 1] == b[j - 1] ? 0 : 1)});
            prev = cur;
        }
    }
    return row[b.size()];
}

enum class SType { Int, Str, Bool, Tuple, Unknown };

inline const char* stype_name(SType t) {
    switch (t) {
        case SType::Int: return "int";
        case SType::Str: return "string";
        case SType::Bool: return "bool";
        case SType::Tuple: return "tuple";
        default: return "?";
    }
}

// Bottom-up type walk; variables are Unknown, so only literal-evident
// mistakes are reported.
inline SType check_walk(const ExprPtr& e, const std::set<std::string>& declared,
                        std::vector<Diagnostic>& out) {
    auto misuse = [&](SourcePos p, const std::string& msg) {
        out.push_back({"TypeMismatch", msg, p, Severity::Error});
    };
    auto demand = [&](const ExprPtr& child, SType want, const char* where) {
        SType got = check_walk(child, declared, out);
        if (got != SType::Unknown && got != want)
            misuse(child->pos, std::string(where) + " requires " + stype_name(want) + ", got " +
                                   stype_name(got));
        return got;
    };
    switch (e->kind) {
        case Expr::Kind::IntLit: return SType::Int;
        case Expr::Kind::StrLit: return SType::Str;
        case Expr::Kind::BoolLit: return SType::Bool;
        case Expr::Kind::Var: {
            if (!declared.count(e->text)) {
                std::string msg = "unbound variable '" + e->text + "'";
                std::string best;
                std::size_t best_d = 3;
                for (const auto& name : declared) {
                    std::size_t d = edit_distance(e->text, name);
                    if (d < best_d) {
                        best_d = d;
                        best = name;
                    }
                }
                if (!best.empty()) msg += "; did you mean '" + best + "'?";
                out.push_back({"UnboundVariable", msg, e->pos, Severity::Error});
            }
            return SType::Unknown;
        }
        case Expr::Kind::Unary:
            if (e->unary_op == UnaryOp::Neg) {
                demand(e->children[0], SType::Int, "unary '-'");
                return SType::Int;
            }
            demand(e->children[0], SType::Bool, "'not'");
            return SType::Bool;
        case Expr::Kind::Binary: {
            BinaryOp op = e->binary_op;
            switch (op) {
                case BinaryOp::Add:
                case BinaryOp::Sub:
                case BinaryOp::Mul:
                case BinaryOp::FloorDiv:
                case BinaryOp::Mod:
                    demand(e->children[0], SType::Int, op_text(op));
                    demand(e->children[1], SType::Int, op_text(op));
                    return SType::Int;
                case BinaryOp::And:
                case BinaryOp::Or:
                    demand(e->children[0], SType::Bool, op_text(op));
                    demand(e->children[1], SType::Bool, op_text(op));
                    return SType::Bool;
                case BinaryOp::Lt:
                case BinaryOp::Le:
                case BinaryOp::Gt:
                case BinaryOp::Ge:
                    demand(e->children[0], SType::Int, op_text(op));
                    demand(e->children[1], SType::Int, op_text(op));
                    return SType::Bool;
                case BinaryOp::Eq:
                case BinaryOp::Ne: {
                    SType a = check_walk(e->children[0], declared, out);
                    SType b = check_walk(e->children[1], declared, out);
                    if (a != SType::Unknown && b != SType::Unknown && a != b)
                        misuse(e->pos, std::string("'") + op_text(op) + "' compares " +
                                           stype_name(a) + " with " + stype_name(b));
                    return SType::Bool;
                }
            }
            return SType::Unknown;
        }
        case Expr::Kind::Conditional: {
            SType a = check_walk(e->children[0], declared, out);
            demand(e->children[1], SType::Bool, "conditional guard");
            SType b = check_walk(e->children[2], declared, out);
            return a == b ? a : SType::Unknown;
        }
        case Expr::Kind::Tuple:
            for (const auto& child : e->children) {
                SType t = check_walk(child, declared, out);
                if (t == SType::Tuple) misuse(child->pos, "tuples cannot be nested");
            }
            return SType::Tuple;
        case Expr::Kind::Call: {
            const std::string& f = e->text;
            if (f == "str") {
                if (e->children.size() != 1)
                    misuse(e->pos, "str() takes exactly one argument");
                for (const auto& child : e->children) check_walk(child, declared, out);
                return SType::Str;
            }
            if (f == "abs") {
                if (e->children.size() != 1)
                    misuse(e->pos, "abs() takes exactly one argument");
                for (const auto& child : e->children) demand(child, SType::Int, "abs()");
                return SType::Int;
            }
            if (e->children.size() < 2) misuse(e->pos, f + "() takes at least two arguments");
            for (const auto& child : e->children) demand(child, SType::Int, f.c_str());
            return SType::Int;
        }
    }
    return SType::Unknown;
}

}  // namespace expr_detail

// Reports unbound variables and literal-evident type errors without
// evaluating anything.
inline std::vector<Diagnostic> check_expr(const ExprPtr& e, const std::set<std::string>& declared) {
    std::vector<Diagnostic> out;
    expr_detail::check_walk(e, declared, out);
    return out;
}

inline void free_variables(const ExprPtr& e, std::set<std::string>& out) {
    if (e->kind == Expr::Kind::Var) out.insert(e->text);
    for (const auto& child : e->children) free_variables(child, out);
}

// ---------------------------------------------------------------------------
// Pretty printing (inverse of parse_expr up to positions)

namespace expr_detail {

// Binding levels, loosest first. Matches the parser's precedence ladder.
inline int level_of(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Conditional: return 0;
        case Expr::Kind::Binary:
            switch (e->binary_op) {
                case BinaryOp::Or: return 1;
                case BinaryOp::And: return 2;
                case BinaryOp::Eq:
                case BinaryOp::Ne:
                case BinaryOp::Lt:
                case BinaryOp::Le:
                case BinaryOp::Gt:
                case BinaryOp::Ge: return 4;
                case BinaryOp::Add:
                case BinaryOp::Sub: return 5;
                default: return 6;
            }
        case Expr::Kind::Unary: return e->unary_op == UnaryOp::Not ? 3 : 7;
        default: return 8;
    }
}

inline void print_walk(const ExprPtr& e, int min_level, std::string& out) {
    int lv = level_of(e);
    bool parens = lv < min_level;
    if (parens) out += '(';
    switch (e->kind) {
        case Expr::Kind::IntLit: out += std::to_string(e->int_value); break;
        case Expr::Kind::StrLit: out += quote_string(e->text); break;
        case Expr::Kind::BoolLit: out += e->bool_value ? "true" : "false"; break;
        case Expr::Kind::Var: out += e->text; break;
        case Expr::Kind::Unary:
            if (e->unary_op == UnaryOp::Not) {
                out += "not ";
                print_walk(e->children[0], 3, out);
            } else {
                out += '-';
                print_walk(e->children[0], 7, out);
            }
            break;
        case Expr::Kind::Binary: {
            // Left-associative chains reuse the level on the left; the
            // non-associative comparisons tighten both sides.
            int left_min = (lv == 4) ? lv + 1 : lv;
            print_walk(e->children[0], left_min, out);
            out += ' ';
            out += op_text(e->binary_op);
            out += ' ';
            print_walk(e->children[1], lv + 1, out);
            break;
        }
        case Expr::Kind::Conditional:
            print_walk(e->children[0], 1, out);
            out += " if ";
            print_walk(e->children[1], 1, out);
            out += " else ";
            print_walk(e->children[2], 0, out);
            break;
        case Expr::Kind::Tuple: {
            out += '(';
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                if (i) out += ", ";
                print_walk(e->children[i], 0, out);
            }
            out += ')';
            break;
        }
        case Expr::Kind::Call: {
            out += e->text;
            out += '(';
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                if (i) out += ", ";
                print_walk(e->children[i], 0, out);
            }
            out += ')';
            break;
        }
    }
    if (parens) out += ')';
}

}  // namespace expr_detail

inline std::string pretty_print(const ExprPtr& e) {
    std::string out;
    expr_detail::print_walk(e, 0, out);
    return out;
}

}  // namespace tilelang
