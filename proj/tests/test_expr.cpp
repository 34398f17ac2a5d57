#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tilelang/expr.hpp"

using namespace tilelang;

namespace {

Value eval_src(const std::string& src, const Env& env = {}) { return eval_expr(parse_expr(src), env); }

std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const TileError& e) {
        return e.diag().code;
    }
    return "";
}

}  // namespace

TEST_CASE("parser honors the precedence ladder") {
    ExprPtr e = parse_expr("(bit+carry) % 2");
    REQUIRE(e->kind == Expr::Kind::Binary);
    CHECK(e->binary_op == BinaryOp::Mod);
    REQUIRE(e->children[0]->kind == Expr::Kind::Binary);
    CHECK(e->children[0]->binary_op == BinaryOp::Add);
    CHECK(e->children[0]->children[0]->text == "bit");
    CHECK(e->children[1]->int_value == 2);

    CHECK(same_expr(parse_expr("1 + 2 * 3"),
                    make_binary(BinaryOp::Add, make_int(1),
                                make_binary(BinaryOp::Mul, make_int(2), make_int(3)))));
    CHECK(same_expr(parse_expr("not a == b"),
                    make_unary(UnaryOp::Not,
                               make_binary(BinaryOp::Eq, make_var("a"), make_var("b")))));
    CHECK(same_expr(parse_expr("-2 - -3"),
                    make_binary(BinaryOp::Sub, make_unary(UnaryOp::Neg, make_int(2)),
                                make_unary(UnaryOp::Neg, make_int(3)))));
}

TEST_CASE("conditional syntax is right-associative and guards are or-level") {
    ExprPtr e = parse_expr("a if c else b if d else f");
    REQUIRE(e->kind == Expr::Kind::Conditional);
    CHECK(e->children[0]->text == "a");
    CHECK(e->children[2]->kind == Expr::Kind::Conditional);

    ExprPtr chooser = parse_expr("\"grow\" if bit == 1 and carry == 1 else \"msb\"");
    REQUIRE(chooser->kind == Expr::Kind::Conditional);
    CHECK(chooser->children[0]->text == "grow");
    CHECK(chooser->children[1]->binary_op == BinaryOp::And);
}

TEST_CASE("syntax errors carry positions") {
    try {
        parse_expr("bit ==");
        FAIL("expected a syntax error");
    } catch (const TileError& e) {
        CHECK(e.diag().code == "SyntaxError");
        CHECK(e.diag().pos.known());
        CHECK(e.diag().message.find("end of input") != std::string::npos);
    }
    CHECK(code_of([] { parse_expr("a == b == c"); }) == "SyntaxError");
    CHECK(code_of([] { parse_expr("foo(1)"); }) == "SyntaxError");  // unknown function
    CHECK(code_of([] { parse_expr("(a,)"); }) == "SyntaxError");
    CHECK(code_of([] { parse_expr(""); }) == "SyntaxError");
}

TEST_CASE("tuples parse only with two or more elements") {
    CHECK(parse_expr("(a)")->kind == Expr::Kind::Var);
    ExprPtr t = parse_expr("(a, b, 3)");
    REQUIRE(t->kind == Expr::Kind::Tuple);
    CHECK(t->children.size() == 3);
}

TEST_CASE("evaluation of the counter bodies") {
    Env env{{"bit", Value(1)}, {"carry", Value(1)}};
    CHECK(eval_src("(bit+carry) % 2", env) == Value(0));
    CHECK(eval_src("(bit+carry) // 2", env) == Value(1));
    CHECK(eval_src("((bit + carry) % 2, (bit + carry) // 2)", env) ==
          Value(ValueList{Value(0), Value(1)}));

    const std::string chooser = "\"grow\" if bit == 1 and carry == 1 else \"msb\"";
    CHECK(eval_src(chooser, env) == Value("grow"));
    CHECK(eval_src(chooser, {{"bit", Value(0)}, {"carry", Value(1)}}) == Value("msb"));

    CHECK(eval_src("str(bit)", {{"bit", Value(0)}}) == Value("0"));
}

TEST_CASE("floor division pairs with its remainder") {
    CHECK(eval_src("-7 // 2") == Value(-4));
    CHECK(eval_src("-7 % 2") == Value(1));
    CHECK(eval_src("7 // -2") == Value(-4));
    CHECK(eval_src("7 % -2") == Value(-1));

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> v(-1000, 1000);
    for (int i = 0; i < 500; ++i) {
        std::int64_t a = v(rng), b = v(rng);
        if (b == 0) continue;
        CHECK(a == floor_div(a, b) * b + floor_mod(a, b));
        std::int64_t r = floor_mod(a, b);
        CHECK(((r == 0) || ((r < 0) == (b < 0))));  // remainder takes the divisor's sign
    }
}

TEST_CASE("evaluation errors") {
    CHECK(code_of([] { eval_src("1 // 0"); }) == "DivisionByZero");
    CHECK(code_of([] { eval_src("x + 1"); }) == "UnboundVariable");
    CHECK(code_of([] { eval_src("\"a\" * 2"); }) == "TypeMismatch");
    CHECK(code_of([] { eval_src("\"a\" < \"b\""); }) == "TypeMismatch");
    CHECK(code_of([] { eval_src("1 == \"1\""); }) == "TypeMismatch");
    CHECK(code_of([] { eval_src("1 if 1 else 2"); }) == "TypeMismatch");
    CHECK(code_of([] { eval_src("((1, 2), 3)"); }) == "TypeMismatch");  // no nested tuples
    CHECK(code_of([] { eval_src("min(1)"); }) == "TypeMismatch");
}

TEST_CASE("boolean operators short-circuit") {
    CHECK(eval_src("true or 1 // 0 == 0") == Value(true));
    CHECK(eval_src("false and 1 // 0 == 0") == Value(false));
    CHECK(eval_src("not false") == Value(true));
}

TEST_CASE("builtins") {
    CHECK(eval_src("abs(-4)") == Value(4));
    CHECK(eval_src("min(3, 1, 2)") == Value(1));
    CHECK(eval_src("max(3, 1, 2)") == Value(3));
    CHECK(eval_src("str(\"x\")") == Value("x"));
    CHECK(eval_src("str(true)") == Value("true"));
}

TEST_CASE("static checking finds unbound names with suggestions") {
    auto diags = check_expr(parse_expr("bit + 1"), {"bit"});
    CHECK(diags.empty());

    diags = check_expr(parse_expr("bti + 1"), {"bit", "carry"});
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "UnboundVariable");
    CHECK(diags[0].message.find("did you mean 'bit'") != std::string::npos);

    diags = check_expr(parse_expr("\"a\" * 2"), {});
    REQUIRE_FALSE(diags.empty());
    CHECK(diags[0].code == "TypeMismatch");

    diags = check_expr(parse_expr("1 if 2 else 3"), {});
    REQUIRE_FALSE(diags.empty());
    CHECK(diags[0].code == "TypeMismatch");
}

// ---------------------------------------------------------------------------
// Properties

namespace {

ExprPtr random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 4 : 10);
    static const std::vector<std::string> names = {"bit", "carry", "x", "y"};
    switch (kind(rng)) {
        case 0: return make_int(std::uniform_int_distribution<int>(0, 99)(rng));
        case 1: return make_str(std::uniform_int_distribution<int>(0, 1)(rng) ? "a" : "grow");
        case 2: return make_bool(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
        case 3:
        case 4: return make_var(names[std::uniform_int_distribution<std::size_t>(0, 3)(rng)]);
        case 5:
            return make_unary(std::uniform_int_distribution<int>(0, 1)(rng) ? UnaryOp::Neg : UnaryOp::Not,
                              random_expr(rng, depth - 1));
        case 6: {
            static const std::vector<BinaryOp> ops = {
                BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::FloorDiv, BinaryOp::Mod,
                BinaryOp::Eq,  BinaryOp::Ne,  BinaryOp::Lt,  BinaryOp::Le,       BinaryOp::Gt,
                BinaryOp::Ge,  BinaryOp::And, BinaryOp::Or};
            return make_binary(ops[std::uniform_int_distribution<std::size_t>(0, ops.size() - 1)(rng)],
                               random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        }
        case 7:
            return make_conditional(random_expr(rng, depth - 1), random_expr(rng, depth - 1),
                                    random_expr(rng, depth - 1));
        case 8: {
            std::vector<ExprPtr> elems;
            std::size_t n = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
            for (std::size_t i = 0; i < n; ++i) elems.push_back(random_expr(rng, depth - 1));
            return make_tuple(std::move(elems));
        }
        case 9: return make_call("str", {random_expr(rng, depth - 1)});
        default:
            return make_call("min", {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    }
}

}  // namespace

TEST_CASE("parse is the inverse of pretty_print") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1500; ++i) {
        ExprPtr e = random_expr(rng, 4);
        std::string text = pretty_print(e);
        INFO(text);
        ExprPtr back = parse_expr(text);
        CHECK(same_expr(e, back));
    }
}

TEST_CASE("evaluation is pure") {
    std::mt19937_64 rng(43);
    Env env{{"bit", Value(1)}, {"carry", Value(0)}, {"x", Value("a")}, {"y", Value(true)}};
    int evaluated = 0;
    for (int i = 0; i < 1500; ++i) {
        ExprPtr e = random_expr(rng, 4);
        Value first, second;
        std::string err1, err2;
        try {
            first = eval_expr(e, env);
        } catch (const TileError& ex) {
            err1 = ex.diag().code;
        }
        try {
            second = eval_expr(e, env);
        } catch (const TileError& ex) {
            err2 = ex.diag().code;
        }
        CHECK(err1 == err2);
        if (err1.empty()) {
            CHECK(first == second);
            ++evaluated;
        }
    }
    CHECK(evaluated > 100);  // the generator must produce plenty of well-typed terms
}
