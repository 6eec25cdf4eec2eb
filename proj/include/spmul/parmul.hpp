#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "spmul/merge.hpp"
#include "spmul/polynomial.hpp"
#include "spmul/split.hpp"

namespace spmul {

struct MulConfig {
    GridParams grid{64};
    unsigned threads = 1;
    Merger merger = Merger::heap;
};

// Worker count from POLYMUL_THREADS, or `fallback` when unset or invalid.
unsigned threads_from_env(unsigned fallback);

// Throws OverflowError unless every pairwise exponent sum of the operands
// fits the layout, so the inner loops may add exponents unchecked.
void check_product_fits(const ExponentLayout& layout, std::span<const Exponent> a,
                        std::span<const Exponent> b);

// Merges intervals [k_begin, k_end) of `splits`; result slot r holds
// interval k_begin + r. Intervals are claimed dynamically by `cfg.threads`
// workers; a single worker runs a plain loop.
template <Coefficient C>
std::vector<TermList<C>> multiply_intervals(const TermList<C>& a, const TermList<C>& b,
                                            const SplitSet& splits, std::size_t k_begin,
                                            std::size_t k_end, const MulConfig& cfg);

// Operation counts of intervals [k_begin, k_end).
std::vector<std::uint64_t> interval_op_counts(std::span<const Exponent> a,
                                              std::span<const Exponent> b, const SplitSet& splits,
                                              std::size_t k_begin, std::size_t k_end,
                                              unsigned threads);

// Interval-split product with a caller-supplied split set. The bounds must
// be ascending, start at or below a[0]+b[0] and end with the sentinel.
template <Coefficient C>
Polynomial<C> mul_with_splits(const Polynomial<C>& a, const Polynomial<C>& b,
                              const SplitSet& splits, const MulConfig& cfg);

// Grid selection, parallel per-interval merge, concatenation.
template <Coefficient C>
Polynomial<C> mul(const Polynomial<C>& a, const Polynomial<C>& b, const MulConfig& cfg = {});

// Number of terms of a*b, computed interval by interval with the same
// kernel as mul() but discarding each batch of containers once counted, so
// the product is never held in memory.
template <Coefficient C>
std::uint64_t count_product_terms(const Polynomial<C>& a, const Polynomial<C>& b,
                                  const MulConfig& cfg = {});

struct RandomPolySpec {
    std::uint64_t seed = 0;
    std::size_t terms = 1;
    std::uint32_t max_degree = 10;
};

// Context with variables x1..x{vars} whose layout holds products of two
// random polynomials of the given max per-variable degree.
ContextPtr random_context(std::size_t vars, std::uint32_t max_degree,
                          MonomialOrder order = MonomialOrder::grlex);

// Exactly `spec.terms` distinct exponents with components uniform in
// [0, max_degree]; coefficients uniform in [-100, 100] without zero.
// Deterministic per seed. Throws std::invalid_argument when infeasible.
template <Coefficient C>
Polynomial<C> random_sparse(const ContextPtr& ctx, const RandomPolySpec& spec);

struct TuneOptions {
    std::uint64_t seed = 1;
    std::size_t products = 20;
    std::size_t min_terms = 1000;
    std::size_t max_terms = 5000;
    std::size_t min_vars = 4;
    std::size_t max_vars = 8;
    std::uint32_t max_degree = 20;
    std::vector<std::size_t> l_values{4, 8, 16, 32, 64};
    MulConfig base{};
};

struct TuneReport {
    std::vector<std::size_t> l_values;
    // times_ms[p][k]: product p with l_values[k]
    std::vector<std::vector<double>> times_ms;
    // l -> number of products whose time with l is within 10% of their best
    std::map<std::size_t, std::size_t> histogram;
    std::size_t recommended_l = 0;
};

// Histogram and argmax (ties to the smaller l) from measured times.
TuneReport summarize_tuning(std::vector<std::size_t> l_values,
                            std::vector<std::vector<double>> times_ms);

template <Coefficient C>
TuneReport tune_l(const TuneOptions& opts);

extern template std::vector<TermList<mpz_class>> multiply_intervals(
    const TermList<mpz_class>&, const TermList<mpz_class>&, const SplitSet&, std::size_t,
    std::size_t, const MulConfig&);
extern template std::vector<TermList<double>> multiply_intervals(const TermList<double>&,
                                                                 const TermList<double>&,
                                                                 const SplitSet&, std::size_t,
                                                                 std::size_t, const MulConfig&);
extern template Polynomial<mpz_class> mul_with_splits(const Polynomial<mpz_class>&,
                                                      const Polynomial<mpz_class>&,
                                                      const SplitSet&, const MulConfig&);
extern template Polynomial<double> mul_with_splits(const Polynomial<double>&,
                                                   const Polynomial<double>&, const SplitSet&,
                                                   const MulConfig&);
extern template Polynomial<mpz_class> mul(const Polynomial<mpz_class>&,
                                          const Polynomial<mpz_class>&, const MulConfig&);
extern template Polynomial<double> mul(const Polynomial<double>&, const Polynomial<double>&,
                                       const MulConfig&);
extern template std::uint64_t count_product_terms(const Polynomial<mpz_class>&,
                                                  const Polynomial<mpz_class>&, const MulConfig&);
extern template std::uint64_t count_product_terms(const Polynomial<double>&,
                                                  const Polynomial<double>&, const MulConfig&);
extern template Polynomial<mpz_class> random_sparse(const ContextPtr&, const RandomPolySpec&);
extern template Polynomial<double> random_sparse(const ContextPtr&, const RandomPolySpec&);
extern template TuneReport tune_l<mpz_class>(const TuneOptions&);
extern template TuneReport tune_l<double>(const TuneOptions&);

} // namespace spmul
