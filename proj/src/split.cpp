#include "spmul/split.hpp"

#include <algorithm>
#include <stdexcept>

namespace spmul {

std::size_t clamp_grid(std::size_t l, std::size_t na, std::size_t nb) noexcept {
    return std::max<std::size_t>(1, std::min({l, na, nb}));
}

SplitSet SplitSet::from_candidates(std::vector<Exponent> candidates) {
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty() || candidates.back() != Exponent::sentinel())
        candidates.push_back(Exponent::sentinel());
    SplitSet s;
    s.bounds_ = std::move(candidates);
    return s;
}

std::vector<Exponent> grid_candidates(std::span<const Exponent> a, std::span<const Exponent> b,
                                      GridParams params) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("grid selection needs nonempty operands");
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t l = clamp_grid(params.l, na, nb);
    const std::size_t row_step = na / l;
    const std::size_t col_step = nb / l;
    const std::size_t stagger = nb / (2 * l);

    auto sum = [&](std::size_t i, std::size_t j) {
        // 1-based grid coordinates
        return ExponentLayout::add_unchecked(a[i - 1], b[j - 1]);
    };

    std::vector<Exponent> out;
    out.reserve(params.candidate_count() + 2 * (l + 1) + 2);
    out.push_back(sum(1, 1));
    for (std::size_t i = 1; i <= na; i += row_step) {
        // alternate rows start half a stride to the right
        const std::size_t j0 = 1 + ((i / row_step) % 2) * stagger;
        for (std::size_t j = j0; j <= nb; j += col_step)
            out.push_back(sum(i, j));
    }
    for (std::size_t j = 1; j <= nb; j += col_step)
        out.push_back(sum(na, j));
    for (std::size_t i = 1; i <= na; i += row_step)
        out.push_back(sum(i, nb));
    out.push_back(Exponent::sentinel());
    return out;
}

SplitSet select_grid(std::span<const Exponent> a, std::span<const Exponent> b, GridParams params) {
    return SplitSet::from_candidates(grid_candidates(a, b, params));
}

void find_edge(std::span<const Exponent> a, std::span<const Exponent> b, Exponent lo, Exponent hi,
               Edge& out, EdgeStats* stats) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    out.first.assign(na, 0);
    out.last.assign(na, 0);

    std::uint64_t comparisons = 0;
    std::size_t pf = nb;
    std::size_t pl = nb;
    for (std::size_t i = 0; i < na; ++i) {
        const Exponent ai = a[i];
        // last: first column whose sum reaches hi
        while (pl > 0) {
            ++comparisons;
            if (ExponentLayout::add_unchecked(ai, b[pl - 1]) < hi)
                break;
            --pl;
        }
        // first <= last holds on every row
        pf = std::min(pf, pl);
        while (pf > 0) {
            ++comparisons;
            if (ExponentLayout::add_unchecked(ai, b[pf - 1]) < lo)
                break;
            --pf;
        }
        out.first[i] = static_cast<std::uint32_t>(pf);
        out.last[i] = static_cast<std::uint32_t>(pl);
        // every later row starts at or above hi
        if (pl == 0)
            break;
    }
    if (stats) {
        stats->pointer_moves += (nb - pf) + (nb - pl);
        stats->comparisons += comparisons;
    }
}

Edge find_edge(std::span<const Exponent> a, std::span<const Exponent> b, Exponent lo, Exponent hi,
               EdgeStats* stats) {
    Edge e;
    find_edge(a, b, lo, hi, e, stats);
    return e;
}

std::uint64_t count_ops(const Edge& edge) noexcept {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < edge.rows(); ++i)
        n += edge.last[i] - edge.first[i];
    return n;
}

} // namespace spmul
