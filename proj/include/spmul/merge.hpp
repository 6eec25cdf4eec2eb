#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "spmul/coefficient.hpp"
#include "spmul/polynomial.hpp"
#include "spmul/split.hpp"

namespace spmul {

enum class Merger : std::uint8_t { heap, tree };

struct MergeStats {
    std::uint64_t comparisons = 0;
};

namespace detail {

struct HeapEntry {
    Exponent exp;
    std::uint32_t row;
    std::uint32_t col;
};

// Min-heap on (exponent, row). Row breaks ties so the pop order, and with it
// the floating-point accumulation order, is fixed.
class ProductHeap {
public:
    void clear() noexcept { data_.clear(); }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t size() const noexcept { return data_.size(); }
    const HeapEntry& top() const noexcept { return data_.front(); }

    void seed(HeapEntry e) { data_.push_back(e); }

    void heapify() noexcept {
        for (std::size_t i = data_.size() / 2; i-- > 0;)
            sift_down(i);
    }

    void replace_top(HeapEntry e) noexcept {
        data_.front() = e;
        sift_down(0);
    }

    void pop() noexcept {
        data_.front() = data_.back();
        data_.pop_back();
        if (!data_.empty())
            sift_down(0);
    }

    std::uint64_t comparisons() const noexcept { return comparisons_; }
    void reset_comparisons() noexcept { comparisons_ = 0; }

private:
    bool less(const HeapEntry& x, const HeapEntry& y) noexcept {
        ++comparisons_;
        return x.exp < y.exp || (x.exp == y.exp && x.row < y.row);
    }

    void sift_down(std::size_t i) noexcept {
        const std::size_t n = data_.size();
        const HeapEntry e = data_[i];
        for (;;) {
            std::size_t child = 2 * i + 1;
            if (child >= n)
                break;
            if (child + 1 < n && less(data_[child + 1], data_[child]))
                ++child;
            if (!less(data_[child], e))
                break;
            data_[i] = data_[child];
            i = child;
        }
        data_[i] = e;
    }

    std::vector<HeapEntry> data_;
    std::uint64_t comparisons_ = 0;
};

} // namespace detail

// Sixteen-way trie keyed by the nibbles of the packed exponent, most
// significant first. Nodes live in one arena that clear() rewinds without
// releasing memory. In-order traversal yields ascending exponents.
template <Coefficient C>
class RadixTree {
public:
    static constexpr unsigned levels = 16;

    RadixTree() { clear(); }

    void clear() {
        nodes_.clear();
        nodes_.emplace_back();
        nodes_.front().fill(0);
        leaves_.clear();
        has_last_ = false;
    }

    // Accumulator for exponent e, created as zero on first use.
    C& accumulator(Exponent e) {
        unsigned level = 0;
        std::uint32_t node = 0;
        if (has_last_) {
            const std::uint64_t diff = e.packed ^ last_.packed;
            if (diff == 0)
                return leaves_[last_leaf_];
            // reuse the path shared with the previous key
            level = static_cast<unsigned>(std::countl_zero(diff)) / 4;
            node = path_[level];
        }
        for (; level < levels - 1; ++level) {
            path_[level] = node;
            const unsigned nib = nibble(e, level);
            std::uint32_t child = nodes_[node][nib];
            if (child == 0) {
                child = static_cast<std::uint32_t>(nodes_.size());
                nodes_.emplace_back().fill(0);
                nodes_[node][nib] = child;
            }
            node = child;
        }
        path_[levels - 1] = node;
        const unsigned nib = nibble(e, levels - 1);
        std::uint32_t slot = nodes_[node][nib];
        if (slot == 0) {
            leaves_.push_back(CoeffTraits<C>::from_int(0));
            slot = static_cast<std::uint32_t>(leaves_.size());
            nodes_[node][nib] = slot;
        }
        has_last_ = true;
        last_ = e;
        last_leaf_ = slot - 1;
        return leaves_[last_leaf_];
    }

    // Appends the nonzero leaves in ascending exponent order.
    void flatten(TermList<C>& out) const { walk(0, 0, 0, out); }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t leaf_count() const noexcept { return leaves_.size(); }

private:
    static unsigned nibble(Exponent e, unsigned level) noexcept {
        return static_cast<unsigned>(e.packed >> (4 * (levels - 1 - level))) & 0xF;
    }

    void walk(std::uint32_t node, unsigned level, std::uint64_t prefix, TermList<C>& out) const {
        const auto& children = nodes_[node];
        for (unsigned nib = 0; nib < 16; ++nib) {
            const std::uint32_t child = children[nib];
            if (child == 0)
                continue;
            const std::uint64_t key = (prefix << 4) | nib;
            if (level == levels - 1) {
                const C& c = leaves_[child - 1];
                if (!CoeffTraits<C>::is_zero(c))
                    out.push_back(Exponent{key}, c);
            } else {
                walk(child, level + 1, key, out);
            }
        }
    }

    std::vector<std::array<std::uint32_t, 16>> nodes_;
    std::vector<C> leaves_;
    std::array<std::uint32_t, levels> path_{};
    Exponent last_{};
    std::uint32_t last_leaf_ = 0;
    bool has_last_ = false;
};

// Per-thread scratch space reused across intervals.
template <Coefficient C>
struct MergeWorkspace {
    Edge edge;
    detail::ProductHeap heap;
    RadixTree<C> tree;
};

// Johnson-style merge: one heap entry per non-empty row, popped in
// ascending exponent order and combined on equal exponents.
template <Coefficient C>
void heap_merge(const TermList<C>& a, const TermList<C>& b, const Edge& edge,
                detail::ProductHeap& heap, TermList<C>& out, MergeStats* stats = nullptr) {
    heap.clear();
    heap.reset_comparisons();
    for (std::size_t i = 0; i < edge.rows(); ++i) {
        if (edge.empty_row(i))
            continue;
        const std::uint32_t j = edge.first[i];
        heap.seed({ExponentLayout::add_unchecked(a.exps[i], b.exps[j]),
                   static_cast<std::uint32_t>(i), j});
    }
    heap.heapify();

    C acc = CoeffTraits<C>::from_int(0);
    Exponent current{};
    bool open = false;
    while (!heap.empty()) {
        const detail::HeapEntry top = heap.top();
        if (!open || top.exp != current) {
            if (open && !CoeffTraits<C>::is_zero(acc))
                out.push_back(current, acc);
            acc = CoeffTraits<C>::from_int(0);
            current = top.exp;
            open = true;
        }
        CoeffTraits<C>::add_mul(acc, a.coeffs[top.row], b.coeffs[top.col]);
        const std::uint32_t next = top.col + 1;
        if (next < edge.last[top.row])
            heap.replace_top({ExponentLayout::add_unchecked(a.exps[top.row], b.exps[next]), top.row,
                              next});
        else
            heap.pop();
    }
    if (open && !CoeffTraits<C>::is_zero(acc))
        out.push_back(current, std::move(acc));
    if (stats)
        stats->comparisons += heap.comparisons();
}

template <Coefficient C>
TermList<C> heap_merge(const TermList<C>& a, const TermList<C>& b, const Edge& edge,
                       MergeStats* stats = nullptr) {
    detail::ProductHeap heap;
    TermList<C> out;
    heap_merge(a, b, edge, heap, out, stats);
    return out;
}

// Inserts every product of the edge into a radix tree, then flattens it.
template <Coefficient C>
void tree_merge(const TermList<C>& a, const TermList<C>& b, const Edge& edge, RadixTree<C>& tree,
                TermList<C>& out) {
    tree.clear();
    for (std::size_t i = 0; i < edge.rows(); ++i) {
        const Exponent ai = a.exps[i];
        const C& ci = a.coeffs[i];
        for (std::uint32_t j = edge.first[i]; j < edge.last[i]; ++j)
            CoeffTraits<C>::add_mul(tree.accumulator(ExponentLayout::add_unchecked(ai, b.exps[j])),
                                    ci, b.coeffs[j]);
    }
    tree.flatten(out);
}

template <Coefficient C>
TermList<C> tree_merge(const TermList<C>& a, const TermList<C>& b, const Edge& edge) {
    RadixTree<C> tree;
    TermList<C> out;
    tree_merge(a, b, edge, tree, out);
    return out;
}

// Joins per-interval results in interval order. The intervals are disjoint
// and ascending, so no sorting or combining is needed.
template <Coefficient C>
Polynomial<C> concat(ContextPtr ctx, std::vector<TermList<C>>& results) {
    std::size_t total = 0;
    for (const auto& r : results)
        total += r.size();
    TermList<C> out;
    out.reserve(total);
    for (auto& r : results) {
        out.exps.insert(out.exps.end(), r.exps.begin(), r.exps.end());
        for (auto& c : r.coeffs)
            out.coeffs.push_back(std::move(c));
        r.clear();
    }
    return Polynomial<C>::from_canonical(std::move(ctx), std::move(out));
}

} // namespace spmul
