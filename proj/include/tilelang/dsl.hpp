#pragma once

// Textual frontend: lexer and recursive-descent parser for .tdsl programs,
// a printable Program AST, and lowering onto the template IR.
//
// Statement forms:
//   tileset <id> temperature 2;
//   tile <id> { label "<s>"; color "<s>"; textcolor "<s>"; glue <DIR> "<label>" <strength>; ... }
//   template <id> [aux <name> in {v, ...}]... ;
//   join <strength> <DIR> <from> -> <to> { <sig> = <v> | {v, ...}; ... }
//   transition <tpl> (<in, ...>) -> (<out, ...>) := <expr-to-end-of-line>
//   transition <tpl> (<in, ...>) -> (<out, ...>) table { (<vals>) -> (<vals>); ... }
//   chooser <tpl> (<in, ...>) := <expr-to-end-of-line>
//   property <tpl>.<label|color|textcolor|concentration> := <expr-to-end-of-line>
//   seed { (<x>, <y>) <tile>; ... }
// Comments run from '#' to end of line.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tilelang/expand.hpp"
#include "tilelang/expr.hpp"
#include "tilelang/ir.hpp"

namespace tilelang {

// ---------------------------------------------------------------------------
// Program AST

struct TileDecl {
    std::string name;
    std::string label;
    std::string color = "white";
    std::string textcolor = "black";
    struct ManualGlue {
        Direction side;
        std::string label;
        int strength;
    };
    std::vector<ManualGlue> glues;
    SourcePos pos;

    bool operator==(const TileDecl& o) const {
        auto key = [](const TileDecl& t) {
            return std::tie(t.name, t.label, t.color, t.textcolor);
        };
        if (key(*this) != key(o) || glues.size() != o.glues.size()) return false;
        for (std::size_t i = 0; i < glues.size(); ++i)
            if (glues[i].side != o.glues[i].side || glues[i].label != o.glues[i].label ||
                glues[i].strength != o.glues[i].strength)
                return false;
        return true;
    }
};

struct TemplateDecl {
    std::string name;
    std::vector<SignalDecl> aux;
    SourcePos pos;

    bool operator==(const TemplateDecl& o) const {
        if (name != o.name || aux.size() != o.aux.size()) return false;
        for (std::size_t i = 0; i < aux.size(); ++i)
            if (aux[i].name != o.aux[i].name || aux[i].values != o.aux[i].values) return false;
        return true;
    }
};

struct JoinDecl {
    int strength = 1;
    Direction direction = Direction::N;
    std::string from, to;
    std::map<std::string, SignalValues> signals;
    SourcePos pos;

    bool operator==(const JoinDecl& o) const {
        return strength == o.strength && direction == o.direction && from == o.from && to == o.to &&
               signals == o.signals;
    }
};

struct TransitionDecl {
    std::string tmpl;
    std::vector<std::string> inputs, outputs;
    ExprPtr expression;  // either this...
    std::map<SignalValues, SignalValues> table;  // ...or this
    bool is_table = false;
    SourcePos pos;

    bool operator==(const TransitionDecl& o) const {
        return tmpl == o.tmpl && inputs == o.inputs && outputs == o.outputs &&
               is_table == o.is_table && table == o.table && same_expr(expression, o.expression);
    }
};

struct ChooserDecl {
    std::string tmpl;
    std::vector<std::string> inputs;
    ExprPtr expression;
    SourcePos pos;

    bool operator==(const ChooserDecl& o) const {
        return tmpl == o.tmpl && inputs == o.inputs && same_expr(expression, o.expression);
    }
};

struct PropertyDecl {
    std::string tmpl;
    PropertyKind kind = PropertyKind::Label;
    ExprPtr expression;
    SourcePos pos;

    bool operator==(const PropertyDecl& o) const {
        return tmpl == o.tmpl && kind == o.kind && same_expr(expression, o.expression);
    }
};

struct SeedDecl {
    struct Placement {
        Coord at;
        std::string tile;
        SourcePos pos;
        bool operator==(const Placement& o) const { return at == o.at && tile == o.tile; }
    };
    std::vector<Placement> placements;
    SourcePos pos;

    bool operator==(const SeedDecl& o) const { return placements == o.placements; }
};

using Statement =
    std::variant<TileDecl, TemplateDecl, JoinDecl, TransitionDecl, ChooserDecl, PropertyDecl, SeedDecl>;

struct Program {
    std::string name;
    int temperature = 2;
    std::vector<Statement> statements;  // source order

    bool operator==(const Program& o) const {
        return name == o.name && temperature == o.temperature && statements == o.statements;
    }
};

// ---------------------------------------------------------------------------
// Lexer

namespace dsl_detail {

enum class Tok {
    End, Ident, Int, Str, RawExpr,
    LBrace, RBrace, LParen, RParen,
    Comma, Semi, Dot, Assign /* = */, Arrow /* -> */, Minus,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t int_value = 0;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    // After ':=' the rest of the line is handed over verbatim as one RawExpr
    // token for the expression parser.
    Token next() {
        skip_trivia();
        Token t;
        t.pos = pos();
        if (at_ >= src_.size()) return t;
        char c = src_[at_];
        if (c == ':' && at_ + 1 < src_.size() && src_[at_ + 1] == '=') {
            advance(2);
            SourcePos raw_pos = pos();
            std::size_t start = at_;
            while (at_ < src_.size() && src_[at_] != '\n' && src_[at_] != '#') advance(1);
            t.kind = Tok::RawExpr;
            t.pos = raw_pos;
            t.text = src_.substr(start, at_ - start);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = at_;
            while (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_]))) advance(1);
            t.kind = Tok::Int;
            t.text = src_.substr(start, at_ - start);
            try {
                t.int_value = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                throw TileError("SyntaxError", "integer literal out of range: " + t.text, t.pos);
            }
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = at_;
            while (at_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[at_])) || src_[at_] == '_'))
                advance(1);
            t.kind = Tok::Ident;
            t.text = src_.substr(start, at_ - start);
            return t;
        }
        if (c == '"') {
            advance(1);
            std::string s;
            while (true) {
                if (at_ >= src_.size() || src_[at_] == '\n')
                    throw TileError("SyntaxError", "unterminated string literal", t.pos);
                char d = src_[at_];
                if (d == '"') {
                    advance(1);
                    break;
                }
                if (d == '\\') {
                    if (at_ + 1 >= src_.size())
                        throw TileError("SyntaxError", "unterminated escape", pos());
                    char e = src_[at_ + 1];
                    if (e == '"') s += '"';
                    else if (e == '\\') s += '\\';
                    else if (e == 'n') s += '\n';
                    else if (e == 't') s += '\t';
                    else throw TileError("SyntaxError", std::string("unknown escape '\\") + e + "'", pos());
                    advance(2);
                } else {
                    s += d;
                    advance(1);
                }
            }
            t.kind = Tok::Str;
            t.text = s;
            return t;
        }
        if (c == '-' && at_ + 1 < src_.size() && src_[at_ + 1] == '>') {
            advance(2);
            t.kind = Tok::Arrow;
            return t;
        }
        switch (c) {
            case '{': t.kind = Tok::LBrace; break;
            case '}': t.kind = Tok::RBrace; break;
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case ',': t.kind = Tok::Comma; break;
            case ';': t.kind = Tok::Semi; break;
            case '.': t.kind = Tok::Dot; break;
            case '=': t.kind = Tok::Assign; break;
            case '-': t.kind = Tok::Minus; break;
            default:
                throw TileError("SyntaxError", std::string("unexpected character '") + c + "'", t.pos);
        }
        advance(1);
        return t;
    }

private:
    const std::string& src_;
    std::size_t at_ = 0;
    int line_ = 1, col_ = 1;

    SourcePos pos() const { return {line_, col_}; }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && at_ < src_.size(); ++i) {
            if (src_[at_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++at_;
        }
    }

    void skip_trivia() {
        while (at_ < src_.size()) {
            char c = src_[at_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance(1);
            } else if (c == '#') {
                while (at_ < src_.size() && src_[at_] != '\n') advance(1);
            } else {
                break;
            }
        }
    }
};

}  // namespace dsl_detail

// ---------------------------------------------------------------------------
// Parser

namespace dsl_detail {

class ProgramParser {
public:
    explicit ProgramParser(const std::string& src) : lexer_(src) { cur_ = lexer_.next(); }

    Program parse() {
        Program p;
        expect_keyword("tileset");
        p.name = expect_ident("tile set name");
        expect_keyword("temperature");
        p.temperature = static_cast<int>(expect_int("temperature"));
        if (p.temperature != 2)
            throw TileError("SyntaxError", "this language targets temperature 2", cur_.pos);
        expect(Tok::Semi, "';'");
        while (cur_.kind != Tok::End) p.statements.push_back(statement());
        return p;
    }

private:
    Lexer lexer_;
    Token cur_;

    static const std::set<std::string>& keywords() {
        static const std::set<std::string> k = {
            "tileset", "temperature", "tile", "template", "aux", "in", "join",
            "transition", "table", "chooser", "property", "seed",
            "label", "color", "textcolor", "glue", "concentration"};
        return k;
    }

    void bump() { cur_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& expected) {
        std::string got = cur_.kind == Tok::End ? "end of input"
                          : cur_.text.empty()   ? std::string("punctuation")
                                                : "'" + cur_.text + "'";
        if (cur_.kind != Tok::End && cur_.text.empty()) {
            const char* sp = "?";
            switch (cur_.kind) {
                case Tok::LBrace: sp = "{"; break;
                case Tok::RBrace: sp = "}"; break;
                case Tok::LParen: sp = "("; break;
                case Tok::RParen: sp = ")"; break;
                case Tok::Comma: sp = ","; break;
                case Tok::Semi: sp = ";"; break;
                case Tok::Dot: sp = "."; break;
                case Tok::Assign: sp = "="; break;
                case Tok::Arrow: sp = "->"; break;
                case Tok::Minus: sp = "-"; break;
                default: break;
            }
            got = std::string("'") + sp + "'";
        }
        throw TileError("SyntaxError", "expected " + expected + ", got " + got, cur_.pos);
    }

    void expect(Tok k, const std::string& what) {
        if (cur_.kind != k) fail(what);
        bump();
    }

    bool at_keyword(const std::string& kw) const { return cur_.kind == Tok::Ident && cur_.text == kw; }

    void expect_keyword(const std::string& kw) {
        if (!at_keyword(kw)) fail("'" + kw + "'");
        bump();
    }

    std::string expect_ident(const std::string& what) {
        if (cur_.kind != Tok::Ident) fail(what);
        if (keywords().count(cur_.text))
            throw TileError("SyntaxError", "'" + cur_.text + "' is a keyword and cannot name a " + what,
                            cur_.pos);
        std::string s = cur_.text;
        bump();
        return s;
    }

    std::int64_t expect_int(const std::string& what) {
        bool neg = false;
        if (cur_.kind == Tok::Minus) {
            neg = true;
            bump();
        }
        if (cur_.kind != Tok::Int) fail(what);
        std::int64_t v = cur_.int_value;
        bump();
        return neg ? -v : v;
    }

    Direction expect_direction() {
        if (cur_.kind == Tok::Ident && cur_.text.size() == 1) {
            char c = cur_.text[0];
            for (Direction d : all_directions)
                if (direction_letter(d) == c) {
                    bump();
                    return d;
                }
        }
        fail("a direction (N, E, S or W)");
    }

    // Quoted string, or a bare identifier for convenience in color fields.
    std::string expect_text(const std::string& what) {
        if (cur_.kind == Tok::Str || cur_.kind == Tok::Ident) {
            std::string s = cur_.text;
            bump();
            return s;
        }
        fail(what);
    }

    SignalValue expect_value() {
        if (cur_.kind == Tok::Str) {
            SignalValue v(cur_.text);
            bump();
            return v;
        }
        if (cur_.kind == Tok::Int || cur_.kind == Tok::Minus) return SignalValue(expect_int("a value"));
        fail("a signal value (integer or string)");
    }

    SignalValues expect_value_set() {
        SignalValues vs;
        if (cur_.kind == Tok::LBrace) {
            bump();
            vs.push_back(expect_value());
            while (cur_.kind == Tok::Comma) {
                bump();
                vs.push_back(expect_value());
            }
            expect(Tok::RBrace, "'}'");
        } else {
            vs.push_back(expect_value());
        }
        return canonical_values(std::move(vs));
    }

    std::vector<std::string> ident_list_parens(bool allow_empty) {
        expect(Tok::LParen, "'('");
        std::vector<std::string> names;
        if (cur_.kind != Tok::RParen) {
            names.push_back(expect_ident("signal name"));
            while (cur_.kind == Tok::Comma) {
                bump();
                names.push_back(expect_ident("signal name"));
            }
        }
        if (names.empty() && !allow_empty) fail("at least one signal name");
        expect(Tok::RParen, "')'");
        return names;
    }

    ExprPtr raw_expression() {
        if (cur_.kind != Tok::RawExpr) fail("':=' followed by an expression");
        ExprPtr e = parse_expr(cur_.text, cur_.pos);
        bump();
        return e;
    }

    Statement statement() {
        if (at_keyword("tile")) return tile_decl();
        if (at_keyword("template")) return template_decl();
        if (at_keyword("join")) return join_decl();
        if (at_keyword("transition")) return transition_decl();
        if (at_keyword("chooser")) return chooser_decl();
        if (at_keyword("property")) return property_decl();
        if (at_keyword("seed")) return seed_decl();
        fail("a statement (tile, template, join, transition, chooser, property or seed)");
    }

    Statement tile_decl() {
        TileDecl t;
        t.pos = cur_.pos;
        bump();
        t.name = expect_ident("tile name");
        expect(Tok::LBrace, "'{'");
        while (cur_.kind != Tok::RBrace) {
            if (at_keyword("label")) {
                bump();
                t.label = expect_text("a label string");
            } else if (at_keyword("color")) {
                bump();
                t.color = expect_text("a color");
            } else if (at_keyword("textcolor")) {
                bump();
                t.textcolor = expect_text("a color");
            } else if (at_keyword("glue")) {
                SourcePos gp = cur_.pos;
                bump();
                TileDecl::ManualGlue g;
                g.side = expect_direction();
                if (cur_.kind != Tok::Str) fail("a quoted glue label");
                g.label = cur_.text;
                bump();
                g.strength = static_cast<int>(expect_int("a glue strength"));
                (void)gp;
                t.glues.push_back(std::move(g));
            } else {
                fail("'label', 'color', 'textcolor', 'glue' or '}'");
            }
            expect(Tok::Semi, "';'");
        }
        bump();  // }
        declare(t.name, t.pos);
        return t;
    }

    Statement template_decl() {
        TemplateDecl t;
        t.pos = cur_.pos;
        bump();
        t.name = expect_ident("template name");
        while (at_keyword("aux")) {
            bump();
            SignalDecl aux;
            aux.name = expect_ident("aux signal name");
            expect_keyword("in");
            if (cur_.kind != Tok::LBrace) fail("'{'");
            aux.values = expect_value_set();
            t.aux.push_back(std::move(aux));
        }
        expect(Tok::Semi, "';'");
        declare(t.name, t.pos);
        return t;
    }

    Statement join_decl() {
        JoinDecl j;
        j.pos = cur_.pos;
        bump();
        j.strength = static_cast<int>(expect_int("a join strength"));
        j.direction = expect_direction();
        j.from = expect_ident("the source tile or template");
        reference(j.from);
        expect(Tok::Arrow, "'->'");
        j.to = expect_ident("the target tile or template");
        reference(j.to);
        expect(Tok::LBrace, "'{'");
        while (cur_.kind != Tok::RBrace) {
            std::string sig = expect_ident("signal name");
            expect(Tok::Assign, "'='");
            SignalValues vs = expect_value_set();
            expect(Tok::Semi, "';'");
            if (j.signals.count(sig))
                throw TileError("DuplicateName", "signal '" + sig + "' assigned twice in join", j.pos);
            j.signals.emplace(std::move(sig), std::move(vs));
        }
        bump();  // }
        return j;
    }

    Statement transition_decl() {
        TransitionDecl t;
        t.pos = cur_.pos;
        bump();
        t.tmpl = expect_ident("template name");
        reference(t.tmpl);
        t.inputs = ident_list_parens(true);
        expect(Tok::Arrow, "'->'");
        t.outputs = ident_list_parens(false);
        if (at_keyword("table")) {
            bump();
            t.is_table = true;
            expect(Tok::LBrace, "'{'");
            while (cur_.kind != Tok::RBrace) {
                SignalValues key = value_tuple(true);
                expect(Tok::Arrow, "'->'");
                SignalValues result = value_tuple(false);
                expect(Tok::Semi, "';'");
                if (t.table.count(key))
                    throw TileError("DuplicateName", "transition table lists an input tuple twice", t.pos);
                t.table.emplace(std::move(key), std::move(result));
            }
            bump();  // }
        } else {
            t.expression = raw_expression();
        }
        return t;
    }

    SignalValues value_tuple(bool allow_empty) {
        expect(Tok::LParen, "'('");
        SignalValues vs;
        if (cur_.kind != Tok::RParen) {
            vs.push_back(expect_value());
            while (cur_.kind == Tok::Comma) {
                bump();
                vs.push_back(expect_value());
            }
        }
        if (vs.empty() && !allow_empty) fail("at least one value");
        expect(Tok::RParen, "')'");
        return vs;
    }

    Statement chooser_decl() {
        ChooserDecl c;
        c.pos = cur_.pos;
        bump();
        c.tmpl = expect_ident("template name");
        reference(c.tmpl);
        c.inputs = ident_list_parens(false);
        c.expression = raw_expression();
        return c;
    }

    Statement property_decl() {
        PropertyDecl p;
        p.pos = cur_.pos;
        bump();
        p.tmpl = expect_ident("template name");
        reference(p.tmpl);
        expect(Tok::Dot, "'.'");
        if (at_keyword("label")) p.kind = PropertyKind::Label;
        else if (at_keyword("color")) p.kind = PropertyKind::TileColor;
        else if (at_keyword("textcolor")) p.kind = PropertyKind::TextColor;
        else if (at_keyword("concentration")) p.kind = PropertyKind::Concentration;
        else fail("'label', 'color', 'textcolor' or 'concentration'");
        bump();
        p.expression = raw_expression();
        return p;
    }

    Statement seed_decl() {
        SeedDecl s;
        s.pos = cur_.pos;
        bump();
        expect(Tok::LBrace, "'{'");
        while (cur_.kind != Tok::RBrace) {
            SeedDecl::Placement pl;
            pl.pos = cur_.pos;
            expect(Tok::LParen, "'('");
            pl.at.x = expect_int("an x coordinate");
            expect(Tok::Comma, "','");
            pl.at.y = expect_int("a y coordinate");
            expect(Tok::RParen, "')'");
            pl.tile = expect_ident("a tile name");
            reference(pl.tile);
            expect(Tok::Semi, "';'");
            s.placements.push_back(std::move(pl));
        }
        bump();  // }
        return s;
    }

    // Name-before-use bookkeeping.
    std::set<std::string> declared_;
    void declare(const std::string& name, SourcePos pos) {
        if (!declared_.insert(name).second)
            throw TileError("DuplicateName", "name '" + name + "' is already declared", pos);
    }
    void reference(const std::string& name) {
        if (!declared_.count(name))
            throw TileError("UnknownReference", "unknown tile or template '" + name + "'", cur_.pos);
    }
};

}  // namespace dsl_detail

inline Program parse_program(const std::string& source) {
    return dsl_detail::ProgramParser(source).parse();
}

// ---------------------------------------------------------------------------
// Pretty printing (canonical layout; parse_program is its inverse)

namespace dsl_detail {

inline std::string value_set_text(const SignalValues& vs) {
    if (vs.size() == 1) return to_string(vs[0]);
    std::string out = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ", ";
        out += to_string(vs[i]);
    }
    return out + "}";
}

inline std::string value_tuple_text(const SignalValues& vs) {
    std::string out = "(";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ", ";
        out += to_string(vs[i]);
    }
    return out + ")";
}

inline std::string ident_list_text(const std::vector<std::string>& names) {
    std::string out = "(";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out + ")";
}

}  // namespace dsl_detail

inline std::string pretty_print(const Program& p) {
    using namespace dsl_detail;
    std::string out = "tileset " + p.name + " temperature " + std::to_string(p.temperature) + ";\n\n";
    for (const auto& stmt : p.statements) {
        if (const auto* t = std::get_if<TileDecl>(&stmt)) {
            out += "tile " + t->name + " { label " + quote_string(t->label) + "; color " +
                   quote_string(t->color) + "; textcolor " + quote_string(t->textcolor) + ";";
            for (const auto& g : t->glues)
                out += std::string(" glue ") + direction_letter(g.side) + " " + quote_string(g.label) +
                       " " + std::to_string(g.strength) + ";";
            out += " }\n";
        } else if (const auto* t = std::get_if<TemplateDecl>(&stmt)) {
            out += "template " + t->name;
            for (const auto& aux : t->aux) {
                SignalValues vs = aux.values;
                std::string set = "{";
                for (std::size_t i = 0; i < vs.size(); ++i) {
                    if (i) set += ", ";
                    set += to_string(vs[i]);
                }
                out += " aux " + aux.name + " in " + set + "}";
            }
            out += ";\n";
        } else if (const auto* j = std::get_if<JoinDecl>(&stmt)) {
            out += "join " + std::to_string(j->strength) + " " + std::string(1, direction_letter(j->direction)) +
                   " " + j->from + " -> " + j->to + " {";
            for (const auto& [sig, vs] : j->signals) out += " " + sig + " = " + value_set_text(vs) + ";";
            out += " }\n";
        } else if (const auto* t = std::get_if<TransitionDecl>(&stmt)) {
            out += "transition " + t->tmpl + " " + ident_list_text(t->inputs) + " -> " +
                   ident_list_text(t->outputs);
            if (t->is_table) {
                out += " table {";
                for (const auto& [k, v] : t->table)
                    out += " " + value_tuple_text(k) + " -> " + value_tuple_text(v) + ";";
                out += " }\n";
            } else {
                out += " := " + pretty_print(t->expression) + "\n";
            }
        } else if (const auto* c = std::get_if<ChooserDecl>(&stmt)) {
            out += "chooser " + c->tmpl + " " + ident_list_text(c->inputs) + " := " +
                   pretty_print(c->expression) + "\n";
        } else if (const auto* pr = std::get_if<PropertyDecl>(&stmt)) {
            out += "property " + pr->tmpl + "." + property_name(pr->kind) + " := " +
                   pretty_print(pr->expression) + "\n";
        } else if (const auto* s = std::get_if<SeedDecl>(&stmt)) {
            out += "seed {";
            for (const auto& pl : s->placements)
                out += " (" + std::to_string(pl.at.x) + ", " + std::to_string(pl.at.y) + ") " + pl.tile + ";";
            out += " }\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lowering

// Replays the program through the IR operations. Declarations first, then
// joins, then transitions, choosers, properties and the seed, each phase in
// source order, so statements may appear in any order after the names they
// mention are declared.
inline TileSetTemplate lower(const Program& p) {
    TileSetTemplate tst;
    tst.name = p.name;
    tst.temperature = p.temperature;

    auto repositioned = [](const TileError& e, SourcePos pos) {
        Diagnostic d = e.diag();
        if (!d.pos.known()) d.pos = pos;
        return TileError(d);
    };

    for (const auto& stmt : p.statements) {
        if (const auto* t = std::get_if<TileDecl>(&stmt)) {
            HardTile h;
            h.name = t->name;
            h.display_label = t->label;
            h.tile_color = t->color;
            h.text_color = t->textcolor;
            h.pos = t->pos;
            for (const auto& g : t->glues) {
                try {
                    if (h.manual_glues.count(g.side))
                        throw TileError("DuplicateName",
                                        std::string("side ") + direction_letter(g.side) + " of tile '" +
                                            t->name + "' is glued twice");
                    h.manual_glues.emplace(g.side, Glue(g.label, g.strength));
                } catch (const TileError& e) {
                    throw repositioned(e, t->pos);
                }
            }
            tst.add_hard_tile(std::move(h));
        } else if (const auto* t = std::get_if<TemplateDecl>(&stmt)) {
            TileTemplate tt;
            tt.name = t->name;
            tt.aux_inputs = t->aux;
            tt.pos = t->pos;
            tst.add_template(std::move(tt));
        }
    }
    for (const auto& stmt : p.statements) {
        if (const auto* j = std::get_if<JoinDecl>(&stmt)) {
            Join join;
            join.strength = j->strength;
            join.direction = j->direction;
            join.from = tst.require(j->from, j->pos);
            join.to = tst.require(j->to, j->pos);
            join.signals = j->signals;
            join.pos = j->pos;
            tst.add_join(std::move(join));
        }
    }
    for (const auto& stmt : p.statements) {
        if (const auto* t = std::get_if<TransitionDecl>(&stmt)) {
            Transition tr;
            tr.inputs = t->inputs;
            tr.outputs = t->outputs;
            if (t->is_table) tr.table = t->table;
            else tr.expression = t->expression;
            tr.pos = t->pos;
            tst.add_transition(t->tmpl, std::move(tr));
        }
    }
    for (const auto& stmt : p.statements) {
        if (const auto* c = std::get_if<ChooserDecl>(&stmt)) {
            Chooser ch;
            ch.member = c->tmpl;
            ch.inputs = c->inputs;
            ch.expression = c->expression;
            ch.pos = c->pos;
            tst.set_chooser(std::move(ch));
        }
    }
    for (const auto& stmt : p.statements) {
        if (const auto* pr = std::get_if<PropertyDecl>(&stmt))
            tst.set_property(pr->tmpl, pr->kind, pr->expression, pr->pos);
    }
    for (const auto& stmt : p.statements) {
        if (const auto* s = std::get_if<SeedDecl>(&stmt))
            for (const auto& pl : s->placements) tst.add_seed_placement(pl.at, pl.tile, pl.pos);
    }
    return tst;
}

}  // namespace tilelang
