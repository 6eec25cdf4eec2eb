#include "spmul/parmul.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include <omp.h>

namespace spmul {

unsigned threads_from_env(unsigned fallback) {
    const char* raw = std::getenv("POLYMUL_THREADS");
    if (raw == nullptr || *raw == '\0')
        return fallback;
    char* end = nullptr;
    const unsigned long v = std::strtoul(raw, &end, 10);
    if (*end != '\0' || v == 0 || v > 4096)
        return fallback;
    return static_cast<unsigned>(v);
}

void check_product_fits(const ExponentLayout& layout, std::span<const Exponent> a,
                        std::span<const Exponent> b) {
    if (a.empty() || b.empty())
        return;
    const std::size_t m = layout.num_vars();
    auto maxima = [&](std::span<const Exponent> terms) {
        std::vector<std::uint64_t> mx(m + 1, 0);
        for (Exponent e : terms) {
            for (std::size_t v = 0; v < m; ++v)
                mx[v] = std::max<std::uint64_t>(mx[v], layout.component(e, v));
            mx[m] = std::max(mx[m], layout.degree(e));
        }
        return mx;
    };
    const auto ma = maxima(a);
    const auto mb = maxima(b);
    for (std::size_t v = 0; v < m; ++v)
        if (ma[v] + mb[v] > layout.var_max(v))
            throw OverflowError("product degree " + std::to_string(ma[v] + mb[v]) +
                                " in variable #" + std::to_string(v + 1) +
                                " exceeds field maximum " + std::to_string(layout.var_max(v)));
    if (ma[m] + mb[m] > layout.degree_max())
        throw OverflowError("product total degree " + std::to_string(ma[m] + mb[m]) +
                            " exceeds field maximum " + std::to_string(layout.degree_max()));
}

template <Coefficient C>
std::vector<TermList<C>> multiply_intervals(const TermList<C>& a, const TermList<C>& b,
                                            const SplitSet& splits, std::size_t k_begin,
                                            std::size_t k_end, const MulConfig& cfg) {
    if (k_begin > k_end || k_end > splits.intervals())
        throw std::out_of_range("interval range outside the split set");
    const std::size_t count = k_end - k_begin;
    std::vector<TermList<C>> results(count);

    auto run = [&](MergeWorkspace<C>& ws, std::size_t r) {
        const std::size_t k = k_begin + r;
        find_edge(a.exps, b.exps, splits.lower(k), splits.upper(k), ws.edge);
        if (cfg.merger == Merger::heap)
            heap_merge(a, b, ws.edge, ws.heap, results[r]);
        else
            tree_merge(a, b, ws.edge, ws.tree, results[r]);
    };

    if (cfg.threads <= 1 || count <= 1) {
        MergeWorkspace<C> ws;
        for (std::size_t r = 0; r < count; ++r)
            run(ws, r);
        return results;
    }

    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel num_threads(static_cast<int>(cfg.threads))
    {
        MergeWorkspace<C> ws;
        // dynamic schedule: each worker claims the next unprocessed interval
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t r = 0; r < n; ++r) {
            try {
                run(ws, static_cast<std::size_t>(r));
            } catch (...) {
#pragma omp critical(spmul_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

std::vector<std::uint64_t> interval_op_counts(std::span<const Exponent> a,
                                              std::span<const Exponent> b, const SplitSet& splits,
                                              std::size_t k_begin, std::size_t k_end,
                                              unsigned threads) {
    if (k_begin > k_end || k_end > splits.intervals())
        throw std::out_of_range("interval range outside the split set");
    std::vector<std::uint64_t> ops(k_end - k_begin, 0);
    const auto n = static_cast<std::ptrdiff_t>(ops.size());
#pragma omp parallel num_threads(static_cast<int>(std::max(1u, threads))) if (threads > 1)
    {
        Edge edge;
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t r = 0; r < n; ++r) {
            const std::size_t k = k_begin + static_cast<std::size_t>(r);
            find_edge(a, b, splits.lower(k), splits.upper(k), edge);
            ops[static_cast<std::size_t>(r)] = count_ops(edge);
        }
    }
    return ops;
}

template <Coefficient C>
Polynomial<C> mul_with_splits(const Polynomial<C>& a, const Polynomial<C>& b,
                              const SplitSet& splits, const MulConfig& cfg) {
    require_compatible(a, b);
    if (cfg.threads == 0)
        throw std::invalid_argument("worker count must be at least 1");
    if (a.empty() || b.empty())
        return Polynomial<C>(a.context_ptr());
    check_product_fits(a.layout(), a.exponents(), b.exponents());
    const Exponent lowest = ExponentLayout::add_unchecked(a.exponents()[0], b.exponents()[0]);
    if (splits.size() < 2 || splits.bounds().back() != Exponent::sentinel() ||
        lowest < splits.lower(0))
        throw std::invalid_argument("split set does not cover every product");
    // rows come from the shorter operand so the merge heap stays small
    const bool swap = b.size() < a.size();
    const auto& rows = swap ? b.terms() : a.terms();
    const auto& cols = swap ? a.terms() : b.terms();
    auto parts = multiply_intervals(rows, cols, splits, 0, splits.intervals(), cfg);
    return concat(a.context_ptr(), parts);
}

template <Coefficient C>
Polynomial<C> mul(const Polynomial<C>& a, const Polynomial<C>& b, const MulConfig& cfg) {
    require_compatible(a, b);
    if (a.empty() || b.empty())
        return Polynomial<C>(a.context_ptr());
    check_product_fits(a.layout(), a.exponents(), b.exponents());
    const SplitSet splits = select_grid(a.exponents(), b.exponents(), cfg.grid);
    return mul_with_splits(a, b, splits, cfg);
}

template <Coefficient C>
std::uint64_t count_product_terms(const Polynomial<C>& a, const Polynomial<C>& b,
                                  const MulConfig& cfg) {
    require_compatible(a, b);
    if (a.empty() || b.empty())
        return 0;
    check_product_fits(a.layout(), a.exponents(), b.exponents());
    const SplitSet splits = select_grid(a.exponents(), b.exponents(), cfg.grid);
    const bool swap = b.size() < a.size();
    const auto& rows = swap ? b.terms() : a.terms();
    const auto& cols = swap ? a.terms() : b.terms();
    const std::size_t batch = 4 * std::max(1u, cfg.threads);
    std::uint64_t terms = 0;
    for (std::size_t k = 0; k < splits.intervals(); k += batch) {
        const auto parts =
            multiply_intervals(rows, cols, splits, k, std::min(k + batch, splits.intervals()), cfg);
        for (const auto& p : parts)
            terms += p.size();
    }
    return terms;
}

ContextPtr random_context(std::size_t vars, std::uint32_t max_degree, MonomialOrder order) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= vars; ++i)
        names.push_back("x" + std::to_string(i));
    const std::vector<std::uint32_t> product_max(vars, 2 * max_degree);
    return make_context(VarTable(std::move(names)),
                        ExponentLayout::for_max_degrees(order, product_max));
}

template <Coefficient C>
Polynomial<C> random_sparse(const ContextPtr& ctx, const RandomPolySpec& spec) {
    const auto& layout = ctx->layout;
    const std::size_t m = layout.num_vars();
    if (spec.terms == 0)
        throw std::invalid_argument("random polynomial needs at least one term");
    const double space = std::pow(static_cast<double>(spec.max_degree) + 1.0, static_cast<double>(m));
    if (static_cast<double>(spec.terms) > space)
        throw std::invalid_argument("cannot draw " + std::to_string(spec.terms) +
                                    " distinct exponents from " +
                                    std::to_string(static_cast<long double>(space)) +
                                    " candidates");

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::uint32_t> component(0, spec.max_degree);
    std::vector<std::uint32_t> v(m);
    std::vector<Exponent> exps;
    exps.reserve(spec.terms);

    if (2.0 * static_cast<double>(spec.terms) > space) {
        // dense request: enumerate the whole box and sample without replacement
        const auto total = static_cast<std::size_t>(space);
        std::vector<Exponent> all;
        all.reserve(total);
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rest = idx;
            for (std::size_t d = 0; d < m; ++d) {
                v[d] = static_cast<std::uint32_t>(rest % (spec.max_degree + 1));
                rest /= spec.max_degree + 1;
            }
            all.push_back(layout.pack(v));
        }
        std::shuffle(all.begin(), all.end(), rng);
        exps.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(spec.terms));
    } else {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(spec.terms * 2);
        while (exps.size() < spec.terms) {
            for (auto& x : v)
                x = component(rng);
            const Exponent e = layout.pack(v);
            if (seen.insert(e.packed).second)
                exps.push_back(e);
        }
    }
    std::sort(exps.begin(), exps.end());

    std::uniform_int_distribution<long> coeff(-100, 99);
    TermList<C> terms;
    terms.reserve(exps.size());
    for (Exponent e : exps) {
        long c = coeff(rng);
        if (c >= 0)
            ++c;
        terms.push_back(e, CoeffTraits<C>::from_int(c));
    }
    return Polynomial<C>::from_canonical(ctx, std::move(terms));
}

TuneReport summarize_tuning(std::vector<std::size_t> l_values,
                            std::vector<std::vector<double>> times_ms) {
    TuneReport report;
    for (std::size_t l : l_values)
        report.histogram[l] = 0;
    for (const auto& row : times_ms) {
        if (row.size() != l_values.size())
            throw std::invalid_argument("timing row does not match the l values");
        if (row.empty())
            continue;
        const double best = *std::min_element(row.begin(), row.end());
        for (std::size_t k = 0; k < row.size(); ++k)
            if (row[k] <= 1.1 * best)
                ++report.histogram[l_values[k]];
    }
    std::size_t best_count = 0;
    for (const auto& [l, count] : report.histogram) {
        if (report.recommended_l == 0 || count > best_count) {
            report.recommended_l = l;
            best_count = count;
        }
    }
    report.l_values = std::move(l_values);
    report.times_ms = std::move(times_ms);
    return report;
}

template <Coefficient C>
TuneReport tune_l(const TuneOptions& opts) {
    if (opts.l_values.empty())
        throw std::invalid_argument("tuning needs at least one l value");
    if (opts.min_terms == 0 || opts.min_terms > opts.max_terms || opts.min_vars == 0 ||
        opts.min_vars > opts.max_vars)
        throw std::invalid_argument("invalid tuning ranges");

    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> vars_dist(opts.min_vars, opts.max_vars);
    std::uniform_int_distribution<std::size_t> terms_dist(opts.min_terms, opts.max_terms);

    std::vector<std::vector<double>> times(opts.products);
    for (std::size_t p = 0; p < opts.products; ++p) {
        const std::size_t m = vars_dist(rng);
        const auto ctx = random_context(m, opts.max_degree);
        const auto a = random_sparse<C>(ctx, {rng(), terms_dist(rng), opts.max_degree});
        const auto b = random_sparse<C>(ctx, {rng(), terms_dist(rng), opts.max_degree});

        MulConfig cfg = opts.base;
        cfg.grid.l = opts.l_values.front();
        (void)mul(a, b, cfg); // warm-up, discarded

        for (std::size_t l : opts.l_values) {
            cfg.grid.l = l;
            const auto start = std::chrono::steady_clock::now();
            const auto product = mul(a, b, cfg);
            const auto stop = std::chrono::steady_clock::now();
            (void)product;
            times[p].push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        }
    }
    return summarize_tuning(opts.l_values, std::move(times));
}

template std::vector<TermList<mpz_class>> multiply_intervals(const TermList<mpz_class>&,
                                                             const TermList<mpz_class>&,
                                                             const SplitSet&, std::size_t,
                                                             std::size_t, const MulConfig&);
template std::vector<TermList<double>> multiply_intervals(const TermList<double>&,
                                                          const TermList<double>&,
                                                          const SplitSet&, std::size_t,
                                                          std::size_t, const MulConfig&);
template Polynomial<mpz_class> mul_with_splits(const Polynomial<mpz_class>&,
                                               const Polynomial<mpz_class>&, const SplitSet&,
                                               const MulConfig&);
template Polynomial<double> mul_with_splits(const Polynomial<double>&, const Polynomial<double>&,
                                            const SplitSet&, const MulConfig&);
template Polynomial<mpz_class> mul(const Polynomial<mpz_class>&, const Polynomial<mpz_class>&,
                                   const MulConfig&);
template Polynomial<double> mul(const Polynomial<double>&, const Polynomial<double>&,
                                const MulConfig&);
template std::uint64_t count_product_terms(const Polynomial<mpz_class>&,
                                           const Polynomial<mpz_class>&, const MulConfig&);
template std::uint64_t count_product_terms(const Polynomial<double>&, const Polynomial<double>&,
                                           const MulConfig&);
template Polynomial<mpz_class> random_sparse(const ContextPtr&, const RandomPolySpec&);
template Polynomial<double> random_sparse(const ContextPtr&, const RandomPolySpec&);
template TuneReport tune_l<mpz_class>(const TuneOptions&);
template TuneReport tune_l<double>(const TuneOptions&);

} // namespace spmul
