#include <doctest.h>

#include <filesystem>
#include <functional>
#include <random>

#include "oracle.hpp"
#include "spmul/expr.hpp"
#include "spmul/parmul.hpp"
#include "spmul/polyfile.hpp"

using namespace spmul;
using Z = mpz_class;

namespace {

// Hand-built polynomials for comparing against the parser. Arithmetic goes
// through naive_mul only.
struct P {
    Polynomial<Z> p;
};
P operator+(const P& a, const P& b) { return {add(a.p, b.p)}; }
P operator-(const P& a, const P& b) { return {subtract(a.p, b.p)}; }
P operator*(const P& a, const P& b) { return {naive_mul(a.p, b.p)}; }
P pw(const P& a, unsigned n) {
    P r{Polynomial<Z>::constant(a.p.context_ptr(), 1)};
    for (unsigned k = 0; k < n; ++k)
        r = r * a;
    return r;
}

struct Vars {
    ContextPtr ctx;
    P x, y, z, t;
    P c(long v) const { return {Polynomial<Z>::constant(ctx, v)}; }
};

Vars make_vars() {
    auto ctx = make_context(VarTable({"x", "y", "z", "t"}));
    return {ctx,
            {Polynomial<Z>::variable(ctx, 0)},
            {Polynomial<Z>::variable(ctx, 1)},
            {Polynomial<Z>::variable(ctx, 2)},
            {Polynomial<Z>::variable(ctx, 3)}};
}

std::size_t error_position(std::string_view text, const VarTable& vars) {
    try {
        parse_expr(text, vars);
    } catch (const ParseError& e) {
        return e.position();
    }
    FAIL("no parse error for " << text);
    return 0;
}

} // namespace

TEST_CASE("parse_expr structure") {
    const VarTable vars({"x", "y"});
    CHECK(parse_expr("(1+x)^2", vars).to_string(vars) == "pow(add(1,x),2)");
    CHECK(parse_expr("1+x*y^3", vars).to_string(vars) == "add(1,mul(x,pow(y,3)))");
    CHECK(parse_expr("x-y-1", vars).to_string(vars) == "sub(sub(x,y),1)");
    CHECK(parse_expr("-x", vars).to_string(vars) == "sub(0,x)");
    CHECK(parse_expr(" x * ( y + 2 ) ", vars).to_string(vars) == "mul(x,add(y,2))");
}

TEST_CASE("parse_expr errors") {
    const VarTable vars({"x", "y"});
    CHECK_THROWS_AS(parse_expr("x^(2)", vars), ParseError);
    CHECK(error_position("x^(2)", vars) == 2);
    CHECK_THROWS_AS(parse_expr("x+q", vars), ParseError);
    CHECK(error_position("x+q", vars) == 2);
    CHECK_THROWS_AS(parse_expr("(x+y", vars), ParseError);
    CHECK_THROWS_AS(parse_expr("x+", vars), ParseError);
    CHECK_THROWS_AS(parse_expr("", vars), ParseError);
    CHECK_THROWS_AS(parse_expr("x y", vars), ParseError);
    CHECK_THROWS_AS(parse_expr("x^-1", vars), ParseError);
}

TEST_CASE("scan_identifiers") {
    CHECK(scan_identifiers("(1+x+y+2*z^2)^3 + x*t1") ==
          std::vector<std::string>{"x", "y", "z", "t1"});
}

TEST_CASE("eval_expr examples") {
    const auto ctx = make_context(VarTable({"x", "y", "z", "t"}));
    const auto f8 = parse_polynomial<Z>("(1+x+y+z+t)^8", ctx);
    CHECK(f8.size() == 495);
    CHECK(f8.size() == oracle::binomial(12, 4));

    const auto g8 = parse_polynomial<Z>("(1+x+y+z+t)^8 + 1", ctx);
    REQUIRE(g8.size() == f8.size());
    for (std::size_t i = 0; i < f8.size(); ++i) {
        CHECK(g8.exponents()[i] == f8.exponents()[i]);
        const Z expected = f8.exponents()[i] == Exponent{0} ? f8.coefficients()[i] + 1
                                                             : f8.coefficients()[i];
        CHECK(g8.coefficients()[i] == expected);
    }

    const auto f40 = parse_polynomial<Z>("(1+x+y+z+t)^40", ctx);
    CHECK(f40.size() == 135751);
}

TEST_CASE("eval_expr matches naive construction") {
    const auto v = make_vars();
    const auto& [ctx, x, y, z, t] = v;
    const std::vector<std::pair<std::string, P>> corpus = {
        {"x", x},
        {"7", v.c(7)},
        {"0", v.c(0)},
        {"x+y", x + y},
        {"x-x", v.c(0)},
        {"(1+x)^2", pw(v.c(1) + x, 2)},
        {"1+x*y^3", v.c(1) + x * pw(y, 3)},
        {"-x+y", v.c(0) - x + y},
        {"-(x+y)^2", v.c(0) - pw(x + y, 2)},
        {"(x+y)*(x-y)", (x + y) * (x - y)},
        {"x^0", v.c(1)},
        {"(x+y+z+t)^3", pw(x + y + z + t, 3)},
        {"2*x*y - 3*z^2*t + 5", v.c(2) * x * y - v.c(3) * pw(z, 2) * t + v.c(5)},
        {"(1+x+y+2*z^2+3*t^3)^2", pw(v.c(1) + x + y + v.c(2) * pw(z, 2) + v.c(3) * pw(t, 3), 2)},
        {"((x))", x},
        {"(x-1)*(x+1) - x^2", v.c(0) - v.c(1)},
        {"123456789012345678901234567890*x", P{Polynomial<Z>::constant(ctx, Z("123456789012345678901234567890"))} * x},
        {"(x*y*z*t)^4", pw(x * y * z * t, 4)},
        {"(1-x)^5*(1+x)^5", pw(v.c(1) - x, 5) * pw(v.c(1) + x, 5)},
        {"x*(y*(z*(t+1)))", x * (y * (z * (t + v.c(1))))},
        {"(1+x^2+y+z^2+t-y^2)^3 + 1", pw(v.c(1) + pw(x, 2) + y + pw(z, 2) + t - pw(y, 2), 3) + v.c(1)},
    };
    for (const auto& [text, expected] : corpus) {
        CAPTURE(text);
        CHECK(parse_polynomial<Z>(text, ctx) == expected.p);
        MulConfig cfg;
        cfg.grid.l = 3;
        cfg.threads = 2;
        CHECK(parse_polynomial<Z>(text, ctx, cfg) == expected.p);
    }
}

TEST_CASE("eval_expr reports overflow") {
    const auto ctx = make_context(VarTable({"x"}), ExponentLayout::with_widths(MonomialOrder::grlex, {4}, 5));
    CHECK_THROWS_AS(parse_polynomial<Z>("(1+x)^20", ctx), OverflowError);
}

TEST_CASE("decimal literals with double coefficients") {
    const auto ctx = make_context(VarTable({"x"}));
    const auto p = parse_polynomial<double>("0.5*x + 0.25", ctx);
    REQUIRE(p.size() == 2);
    CHECK(p.coefficients()[0] == 0.25);
    CHECK(p.coefficients()[1] == 0.5);
    CHECK_THROWS_AS(parse_polynomial<Z>("0.5*x", ctx), ParseError);
}

TEST_CASE("PolyFile format") {
    const auto ctx = make_context(VarTable({"x", "y"}));
    const auto sq = parse_polynomial<Z>("(x+y)^2", ctx);
    const std::string text = format_poly(sq);
    CHECK(text == "vars x y\n1 0 2\n2 1 1\n1 2 0\n");
    CHECK(parse_poly<Z>(text) == sq);
    const Polynomial<Z> zero(ctx);
    CHECK(format_poly(zero) == "vars x y\n");
    CHECK(parse_poly<Z>(format_poly(zero)) == zero);

    SUBCASE("duplicates are combined") {
        const auto p = parse_poly<Z>("vars x y\n1 1 0\n# comment\n\n2 1 0  # trailing\n-1 0 0\n1 0 0\n");
        REQUIRE(p.size() == 1);
        CHECK(p.coefficients()[0] == 3);
    }
    SUBCASE("errors name the line") {
        try {
            parse_poly<Z>("vars x y\n1 1 0\n2 1\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.position() == 3);
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_poly<Z>("1 0 0\n"), ParseError);
        CHECK_THROWS_AS(parse_poly<Z>(""), ParseError);
        CHECK_THROWS_AS(parse_poly<Z>("vars x x\n"), ParseError);
        CHECK_THROWS_AS(parse_poly<Z>("vars x\nabc 1\n"), ParseError);
        CHECK_THROWS_AS(parse_poly<Z>("vars x\n1 -1\n"), ParseError);
    }
}

TEST_CASE("PolyFile round trip on random polynomials") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 60; ++t) {
        const std::size_t m = 1 + rng() % 8;
        const auto ctx = random_context(m, 12);
        std::uint64_t cap = 1;
        for (std::size_t i = 0; i < m && cap < 300; ++i)
            cap *= 13;
        cap = std::min<std::uint64_t>(cap, 300);
        const auto p = random_sparse<Z>(ctx, {rng(), 1 + rng() % cap, 12});
        CHECK(parse_poly<Z>(format_poly(p), ctx->layout) == p);
        const auto d = random_sparse<double>(ctx, {rng(), 1 + rng() % cap, 12});
        CHECK(parse_poly<double>(format_poly(d), ctx->layout) == d);
    }
}

TEST_CASE("read_poly and write_poly") {
    const auto dir = std::filesystem::temp_directory_path() / "spmul_test_io";
    std::filesystem::create_directories(dir);
    const auto ctx = make_context(VarTable({"x", "y"}));
    const auto sq = parse_polynomial<Z>("(x+y)^2", ctx);
    write_poly(dir / "sq.poly", sq);
    CHECK(read_poly<Z>(dir / "sq.poly") == sq);
    CHECK_THROWS_AS(read_poly<Z>(dir / "missing.poly"), Error);
    CHECK_THROWS_AS(write_poly(dir / "no" / "such" / "dir.poly", sq), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("powers") {
    const auto ctx = make_context(VarTable({"x", "y"}));
    CHECK(parse_polynomial<Z>("(2*x*y^2)^5", ctx) == parse_polynomial<Z>("32*x^5*y^10", ctx));
    CHECK(parse_polynomial<Z>("(-3*y)^3", ctx) == parse_polynomial<Z>("-27*y^3", ctx));
    CHECK(parse_polynomial<Z>("(x+y)^0", ctx) == parse_polynomial<Z>("1", ctx));
    CHECK(parse_polynomial<Z>("(x-x)^3", ctx).empty());
    CHECK(parse_polynomial<Z>("(1+x)^3", ctx) == parse_polynomial<Z>("1+3*x+3*x^2+x^3", ctx));
    CHECK(parse_polynomial<double>("(0.5*x)^2", ctx) == parse_polynomial<double>("0.25*x^2", ctx));
    // rejected before any expansion
    CHECK_THROWS_AS(parse_polynomial<Z>("x^4000000000", ctx), OverflowError);
    CHECK_THROWS_AS(parse_polynomial<Z>("(1+x*y)^4000000000", ctx), OverflowError);
    const auto narrow = make_context(VarTable({"x", "y"}),
                                     ExponentLayout::with_widths(MonomialOrder::grlex, {4, 4}, 5));
    CHECK_NOTHROW(parse_polynomial<Z>("(x+y)^15", narrow));
    CHECK_THROWS_AS(parse_polynomial<Z>("(x+y)^16", narrow), OverflowError);
    const auto low_degree = make_context(
        VarTable({"x", "y"}), ExponentLayout::with_widths(MonomialOrder::grlex, {4, 4}, 4));
    CHECK_NOTHROW(parse_polynomial<Z>("(x*y)^7", low_degree));
    CHECK_THROWS_AS(parse_polynomial<Z>("(x*y)^8", low_degree), OverflowError);
}
