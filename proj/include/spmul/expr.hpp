#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spmul/exponent.hpp"
#include "spmul/parmul.hpp"
#include "spmul/polynomial.hpp"

namespace spmul {

// Expression tree for the input language
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | atom ('^' uint)?
//   atom   := number | identifier | '(' expr ')'
//
// Unary minus is stored as sub(0, x).
struct Expr {
    enum class Kind : std::uint8_t { number, variable, add, sub, mul, pow };

    Kind kind = Kind::number;
    std::string text;          // number literal as written
    std::size_t var = 0;       // variable index
    std::uint32_t exponent = 0;
    std::vector<Expr> args;
    std::size_t position = 0;  // offset of the node in the source

    // Prefix rendering, e.g. pow(add(1,x),2).
    std::string to_string(const VarTable& vars) const;
};

Expr parse_expr(std::string_view text, const VarTable& vars);

// Distinct identifiers in order of first appearance; used to infer a
// variable table from free-form input.
std::vector<std::string> scan_identifiers(std::string_view text);

// base^n. Throws OverflowError up front when the result cannot fit the
// layout; a single-term base is raised directly, anything else by repeated
// multiplication with `cfg` (cheaper than squaring for the small dense bases
// of the benchmarks).
template <Coefficient C>
Polynomial<C> power(const Polynomial<C>& base, std::uint32_t n, const MulConfig& cfg = {}) {
    const auto& ctx = base.context_ptr();
    if (n == 0)
        return Polynomial<C>::constant(ctx, CoeffTraits<C>::from_int(1));
    if (base.empty() || n == 1)
        return base;
    const auto& layout = base.layout();
    const std::size_t m = layout.num_vars();
    std::vector<std::uint64_t> top(m, 0);
    std::uint64_t top_degree = 0;
    for (Exponent e : base.exponents()) {
        for (std::size_t v = 0; v < m; ++v)
            top[v] = std::max<std::uint64_t>(top[v], layout.component(e, v));
        top_degree = std::max(top_degree, layout.degree(e));
    }
    for (std::size_t v = 0; v < m; ++v)
        if (top[v] != 0 && n > layout.var_max(v) / top[v])
            throw OverflowError("power " + std::to_string(n) + " overflows the exponent of variable #" +
                                std::to_string(v + 1));
    if (top_degree != 0 && n > layout.degree_max() / top_degree)
        throw OverflowError("power " + std::to_string(n) + " overflows the total degree field");

    if (base.size() == 1) {
        C c = CoeffTraits<C>::from_int(1);
        C sq = base.coefficients()[0];
        for (std::uint32_t k = n; k != 0; k >>= 1) {
            if (k & 1)
                c = c * sq;
            if (k > 1)
                sq = sq * sq;
        }
        std::vector<std::uint32_t> v = layout.unpack(base.exponents()[0]);
        for (auto& x : v)
            x *= n;
        TermList<C> t;
        t.push_back(layout.pack(v), std::move(c));
        return canonicalize(ctx, std::move(t));
    }
    auto result = base;
    for (std::uint32_t k = 1; k < n; ++k)
        result = mul(result, base, cfg);
    return result;
}

// Powers are expanded with power().
template <Coefficient C>
Polynomial<C> eval_expr(const Expr& e, const ContextPtr& ctx, const MulConfig& cfg = {}) {
    switch (e.kind) {
    case Expr::Kind::number:
        try {
            return Polynomial<C>::constant(ctx, CoeffTraits<C>::parse(e.text));
        } catch (const OverflowError&) {
            throw;
        } catch (const Error& err) {
            throw ParseError(err.what(), e.position);
        }
    case Expr::Kind::variable:
        return Polynomial<C>::variable(ctx, e.var);
    case Expr::Kind::add:
        return add(eval_expr<C>(e.args[0], ctx, cfg), eval_expr<C>(e.args[1], ctx, cfg));
    case Expr::Kind::sub:
        return subtract(eval_expr<C>(e.args[0], ctx, cfg), eval_expr<C>(e.args[1], ctx, cfg));
    case Expr::Kind::mul:
        return mul(eval_expr<C>(e.args[0], ctx, cfg), eval_expr<C>(e.args[1], ctx, cfg), cfg);
    case Expr::Kind::pow:
        return power(eval_expr<C>(e.args[0], ctx, cfg), e.exponent, cfg);
    }
    throw std::logic_error("unknown expression node");
}

template <Coefficient C>
Polynomial<C> parse_polynomial(std::string_view text, const ContextPtr& ctx,
                               const MulConfig& cfg = {}) {
    return eval_expr<C>(parse_expr(text, ctx->vars), ctx, cfg);
}

} // namespace spmul
