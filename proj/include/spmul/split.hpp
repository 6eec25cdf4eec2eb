#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spmul/exponent.hpp"

namespace spmul {

// Density of the sampling grid over the matrix of pairwise exponent sums.
struct GridParams {
    std::size_t l = 64;

    // Nominal number of sampled sums, (l+1)^2.
    std::size_t candidate_count() const noexcept { return (l + 1) * (l + 1); }
};

// Reduces l so that both grid strides are at least one.
std::size_t clamp_grid(std::size_t l, std::size_t na, std::size_t nb) noexcept;

// Ascending interval bounds S_0 < S_1 < ... < S_{n-1}; the last bound is
// Exponent::sentinel(). Interval k is [S_k, S_{k+1}).
class SplitSet {
public:
    SplitSet() = default;

    // Sorts, removes duplicates and appends the sentinel if missing.
    static SplitSet from_candidates(std::vector<Exponent> candidates);

    std::span<const Exponent> bounds() const noexcept { return bounds_; }
    std::size_t size() const noexcept { return bounds_.size(); }
    std::size_t intervals() const noexcept { return bounds_.empty() ? 0 : bounds_.size() - 1; }
    Exponent lower(std::size_t k) const { return bounds_.at(k); }
    Exponent upper(std::size_t k) const { return bounds_.at(k + 1); }

    bool operator==(const SplitSet&) const = default;

private:
    std::vector<Exponent> bounds_;
};

// Sampled sums before sorting and deduplication, including a[0]+b[0] and
// the sentinel.
std::vector<Exponent> grid_candidates(std::span<const Exponent> a, std::span<const Exponent> b,
                                      GridParams params);

// Both operands must be nonempty and sorted ascending.
SplitSet select_grid(std::span<const Exponent> a, std::span<const Exponent> b, GridParams params);

// Per-row column range [first[i], last[i]) of the products whose exponent
// lies in one interval. A row is empty when first[i] == last[i].
struct Edge {
    std::vector<std::uint32_t> first;
    std::vector<std::uint32_t> last;

    std::size_t rows() const noexcept { return first.size(); }
    bool empty_row(std::size_t i) const { return first[i] == last[i]; }
};

struct EdgeStats {
    // Total distance travelled by the two column pointers.
    std::uint64_t pointer_moves = 0;
    std::uint64_t comparisons = 0;
};

// Two-pointer sweep over the rows, resuming each row from the previous
// row's columns. O(na + nb). Operand sums must not overflow.
void find_edge(std::span<const Exponent> a, std::span<const Exponent> b, Exponent lo, Exponent hi,
               Edge& out, EdgeStats* stats = nullptr);

Edge find_edge(std::span<const Exponent> a, std::span<const Exponent> b, Exponent lo, Exponent hi,
               EdgeStats* stats = nullptr);

// Number of pairwise products inside the edge.
std::uint64_t count_ops(const Edge& edge) noexcept;

} // namespace spmul
