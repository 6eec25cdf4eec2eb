#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spmul/coefficient.hpp"
#include "spmul/error.hpp"
#include "spmul/exponent.hpp"

namespace spmul {

// Variables plus the packing layout shared by every term of a polynomial.
struct PolyContext {
    VarTable vars;
    ExponentLayout layout;

    bool operator==(const PolyContext&) const = default;
};

using ContextPtr = std::shared_ptr<const PolyContext>;

inline ContextPtr make_context(VarTable vars, std::optional<ExponentLayout> layout = std::nullopt) {
    ExponentLayout l = layout ? *layout : ExponentLayout::uniform(vars.size());
    if (l.num_vars() != vars.size())
        throw std::invalid_argument("layout and variable table disagree on variable count");
    return std::make_shared<const PolyContext>(PolyContext{std::move(vars), std::move(l)});
}

// Structure-of-arrays term storage. Exponent scans (grid selection, edge
// search) only touch `exps`.
template <Coefficient C>
struct TermList {
    std::vector<Exponent> exps;
    std::vector<C> coeffs;

    std::size_t size() const noexcept { return exps.size(); }
    bool empty() const noexcept { return exps.empty(); }

    void reserve(std::size_t n) {
        exps.reserve(n);
        coeffs.reserve(n);
    }
    void clear() noexcept {
        exps.clear();
        coeffs.clear();
    }
    void push_back(Exponent e, C c) {
        exps.push_back(e);
        coeffs.push_back(std::move(c));
    }

    bool operator==(const TermList&) const = default;
};

// Strictly ascending exponents and no zero coefficients.
template <Coefficient C>
bool is_canonical(const TermList<C>& t) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (CoeffTraits<C>::is_zero(t.coeffs[i]))
            return false;
        if (i > 0 && !(t.exps[i - 1] < t.exps[i]))
            return false;
    }
    return t.exps.size() == t.coeffs.size();
}

template <Coefficient C>
class Polynomial {
public:
    using coeff_type = C;

    explicit Polynomial(ContextPtr ctx) : ctx_(std::move(ctx)) {
        if (!ctx_)
            throw std::invalid_argument("null polynomial context");
    }

    // Takes terms that are already canonical; checked.
    static Polynomial from_canonical(ContextPtr ctx, TermList<C> terms) {
        if (!is_canonical(terms))
            throw std::invalid_argument("term list is not in canonical form");
        Polynomial p(std::move(ctx));
        p.terms_ = std::move(terms);
        return p;
    }

    static Polynomial constant(ContextPtr ctx, C c) {
        Polynomial p(std::move(ctx));
        if (!CoeffTraits<C>::is_zero(c))
            p.terms_.push_back(Exponent{0}, std::move(c));
        return p;
    }

    static Polynomial variable(ContextPtr ctx, std::size_t index) {
        std::vector<std::uint32_t> v(ctx->vars.size(), 0);
        v.at(index) = 1;
        Polynomial p(ctx);
        p.terms_.push_back(ctx->layout.pack(v), CoeffTraits<C>::from_int(1));
        return p;
    }

    const PolyContext& context() const noexcept { return *ctx_; }
    const ContextPtr& context_ptr() const noexcept { return ctx_; }
    const ExponentLayout& layout() const noexcept { return ctx_->layout; }
    const VarTable& vars() const noexcept { return ctx_->vars; }

    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    const TermList<C>& terms() const noexcept { return terms_; }
    std::span<const Exponent> exponents() const noexcept { return terms_.exps; }
    std::span<const C> coefficients() const noexcept { return terms_.coeffs; }

    bool compatible(const Polynomial& other) const noexcept {
        return ctx_ == other.ctx_ || *ctx_ == *other.ctx_;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.compatible(b) && a.terms_ == b.terms_;
    }

private:
    ContextPtr ctx_;
    TermList<C> terms_;
};

template <Coefficient C>
void require_compatible(const Polynomial<C>& a, const Polynomial<C>& b) {
    if (!a.compatible(b))
        throw std::invalid_argument("polynomials use different variables or exponent layouts");
}

// Sorts, combines equal exponents and drops zeros.
template <Coefficient C>
Polynomial<C> canonicalize(ContextPtr ctx, TermList<C> terms) {
    const std::size_t n = terms.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return terms.exps[x] < terms.exps[y];
    });
    TermList<C> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n;) {
        const Exponent e = terms.exps[order[k]];
        C acc = std::move(terms.coeffs[order[k]]);
        for (++k; k < n && terms.exps[order[k]] == e; ++k)
            acc += terms.coeffs[order[k]];
        if (!CoeffTraits<C>::is_zero(acc))
            out.push_back(e, std::move(acc));
    }
    return Polynomial<C>::from_canonical(std::move(ctx), std::move(out));
}

template <Coefficient C>
Polynomial<C> add(const Polynomial<C>& a, const Polynomial<C>& b) {
    require_compatible(a, b);
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    TermList<C> out;
    out.reserve(ta.size() + tb.size());
    std::size_t i = 0, j = 0;
    while (i < ta.size() || j < tb.size()) {
        if (j == tb.size() || (i < ta.size() && ta.exps[i] < tb.exps[j])) {
            out.push_back(ta.exps[i], ta.coeffs[i]);
            ++i;
        } else if (i == ta.size() || tb.exps[j] < ta.exps[i]) {
            out.push_back(tb.exps[j], tb.coeffs[j]);
            ++j;
        } else {
            C s = ta.coeffs[i] + tb.coeffs[j];
            if (!CoeffTraits<C>::is_zero(s))
                out.push_back(ta.exps[i], std::move(s));
            ++i;
            ++j;
        }
    }
    return Polynomial<C>::from_canonical(a.context_ptr(), std::move(out));
}

template <Coefficient C>
Polynomial<C> negate(const Polynomial<C>& a) {
    TermList<C> out = a.terms();
    for (auto& c : out.coeffs)
        c = -c;
    return Polynomial<C>::from_canonical(a.context_ptr(), std::move(out));
}

template <Coefficient C>
Polynomial<C> subtract(const Polynomial<C>& a, const Polynomial<C>& b) {
    return add(a, negate(b));
}

// Schoolbook product: every pairwise term product is formed with a checked
// exponent sum, then the whole set is sorted and combined. Reference path
// for the interval-split multiplication.
template <Coefficient C>
Polynomial<C> naive_mul(const Polynomial<C>& a, const Polynomial<C>& b) {
    require_compatible(a, b);
    const auto& layout = a.layout();
    const auto& ta = a.terms();
    const auto& tb = b.terms();

    struct Product {
        Exponent exp;
        std::uint32_t i;
        std::uint32_t j;
    };
    std::vector<Product> products;
    products.reserve(ta.size() * tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i)
        for (std::size_t j = 0; j < tb.size(); ++j)
            products.push_back({layout.add(ta.exps[i], tb.exps[j]), static_cast<std::uint32_t>(i),
                                static_cast<std::uint32_t>(j)});
    std::sort(products.begin(), products.end(), [](const Product& x, const Product& y) {
        if (x.exp != y.exp)
            return x.exp < y.exp;
        if (x.i != y.i)
            return x.i < y.i;
        return x.j < y.j;
    });

    TermList<C> out;
    for (std::size_t k = 0; k < products.size();) {
        const Exponent e = products[k].exp;
        C acc = CoeffTraits<C>::from_int(0);
        for (; k < products.size() && products[k].exp == e; ++k)
            CoeffTraits<C>::add_mul(acc, ta.coeffs[products[k].i], tb.coeffs[products[k].j]);
        if (!CoeffTraits<C>::is_zero(acc))
            out.push_back(e, std::move(acc));
    }
    return Polynomial<C>::from_canonical(a.context_ptr(), std::move(out));
}

} // namespace spmul
