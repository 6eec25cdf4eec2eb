#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "spmul/expr.hpp"
#include "spmul/parmul.hpp"
#include "spmul/polynomial.hpp"

using namespace spmul;
using Z = mpz_class;

namespace {

ContextPtr xy_ctx() { return make_context(VarTable({"x", "y"})); }

Exponent mono(const ContextPtr& ctx, std::vector<std::uint32_t> v) { return ctx->layout.pack(v); }

Polynomial<Z> poly(const ContextPtr& ctx, std::string_view text) {
    return parse_polynomial<Z>(text, ctx);
}

} // namespace

TEST_CASE("canonicalize") {
    const auto ctx = xy_ctx();
    const Exponent x = mono(ctx, {1, 0});

    TermList<Z> dup;
    dup.push_back(x, 1);
    dup.push_back(x, 2);
    const auto p = canonicalize(ctx, dup);
    REQUIRE(p.size() == 1);
    CHECK(p.coefficients()[0] == 3);

    TermList<Z> cancel;
    cancel.push_back(x, 1);
    cancel.push_back(x, -1);
    CHECK(canonicalize(ctx, cancel).empty());

    SUBCASE("shuffles round-trip") {
        const auto ctx4 = random_context(4, 6);
        std::mt19937_64 rng(3);
        for (int t = 0; t < 50; ++t) {
            const auto q = random_sparse<Z>(ctx4, {rng(), 1 + rng() % 200, 6});
            TermList<Z> shuffled = q.terms();
            std::vector<std::size_t> idx(shuffled.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            TermList<Z> s;
            for (auto i : idx)
                s.push_back(shuffled.exps[i], shuffled.coeffs[i]);
            CHECK(canonicalize(ctx4, s) == q);
        }
    }
}

TEST_CASE("from_canonical rejects non-canonical input") {
    const auto ctx = xy_ctx();
    TermList<Z> t;
    t.push_back(mono(ctx, {1, 0}), 1);
    t.push_back(mono(ctx, {0, 1}), 1);
    CHECK_THROWS_AS(Polynomial<Z>::from_canonical(ctx, t), std::invalid_argument);
    TermList<Z> z;
    z.push_back(mono(ctx, {1, 0}), 0);
    CHECK_THROWS_AS(Polynomial<Z>::from_canonical(ctx, z), std::invalid_argument);
}

TEST_CASE("naive_mul examples") {
    const auto ctx = xy_ctx();
    CHECK(naive_mul(poly(ctx, "1+x"), poly(ctx, "1-x")) == poly(ctx, "1 - x^2"));
    const auto sq = naive_mul(poly(ctx, "x+y"), poly(ctx, "x+y"));
    CHECK(sq.size() == 3);
    CHECK(oracle::as_map(sq) == oracle::as_map(poly(ctx, "x^2 + 2*x*y + y^2")));

    SUBCASE("term count of a dense square, confirmed by brute force") {
        const auto c4 = make_context(VarTable({"x", "y", "z", "t"}));
        const auto f = parse_polynomial<Z>("(1+x+y+z+t)^8", c4);
        CHECK(f.size() == oracle::binomial(12, 4));
        const auto f2 = naive_mul(f, f);
        const auto expected = oracle::product_map(f, f);
        CHECK(expected.size() == oracle::count_monomials_up_to(4, 16));
        CHECK(f2.size() == 4845);
        CHECK(oracle::as_map(f2) == expected);
    }
}

TEST_CASE("naive_mul against the unpacked-vector oracle") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        const std::size_t m = 1 + rng() % 6;
        const auto ctx = random_context(m, 5);
        const std::uint64_t cap = std::min<std::uint64_t>(40, oracle::count_monomials_up_to(m, 5));
        const auto a = random_sparse<Z>(ctx, {rng(), 1 + rng() % cap, 5});
        const auto b = random_sparse<Z>(ctx, {rng(), 1 + rng() % cap, 5});
        const auto p = naive_mul(a, b);
        CHECK(is_canonical(p.terms()));
        CHECK(oracle::as_map(p) == oracle::product_map(a, b));
    }
}

TEST_CASE("naive_mul is commutative and distributive") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 40; ++t) {
        const auto ctx = random_context(3, 4);
        const auto a = random_sparse<Z>(ctx, {rng(), 1 + rng() % 30, 4});
        const auto b = random_sparse<Z>(ctx, {rng(), 1 + rng() % 30, 4});
        const auto c = random_sparse<Z>(ctx, {rng(), 1 + rng() % 30, 4});
        CHECK(naive_mul(a, b) == naive_mul(b, a));
        CHECK(naive_mul(a, add(b, c)) == add(naive_mul(a, b), naive_mul(a, c)));
    }
}

TEST_CASE("term count of (1+x1+...+xk)^n") {
    for (std::size_t k = 1; k <= 4; ++k) {
        std::vector<std::string> names;
        std::string text = "1";
        for (std::size_t i = 1; i <= k; ++i) {
            names.push_back("x" + std::to_string(i));
            text += "+x" + std::to_string(i);
        }
        const auto ctx = make_context(VarTable(names));
        const auto base = parse_polynomial<Z>(text, ctx);
        auto p = Polynomial<Z>::constant(ctx, 1);
        for (std::uint64_t n = 1; n <= 10; ++n) {
            p = naive_mul(p, base);
            CHECK(p.size() == oracle::binomial(n + k, k));
        }
    }
}

TEST_CASE("naive_mul propagates exponent overflow") {
    const auto ctx = make_context(VarTable({"x"}), ExponentLayout::with_widths(MonomialOrder::grlex, {4}, 5));
    const auto a = parse_polynomial<Z>("x^10", ctx);
    CHECK_THROWS_AS(naive_mul(a, a), OverflowError);
}

TEST_CASE("double coefficients") {
    const auto ctx = xy_ctx();
    const auto a = parse_polynomial<double>("1.5 + x", ctx);
    const auto b = parse_polynomial<double>("2 - x", ctx);
    const auto p = naive_mul(a, b);
    REQUIRE(p.size() == 3);
    CHECK(p.coefficients()[0] == 3.0);
    CHECK(p.coefficients()[1] == 0.5);
    CHECK(p.coefficients()[2] == -1.0);
}

TEST_CASE("add drops cancelled terms") {
    const auto ctx = xy_ctx();
    CHECK(add(poly(ctx, "1+x"), poly(ctx, "-x")) == poly(ctx, "1"));
    CHECK(subtract(poly(ctx, "x*y"), poly(ctx, "x*y")).empty());
}
