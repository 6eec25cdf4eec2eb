#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spmul/parmul.hpp"
#include "spmul/transport.hpp"

namespace spmul {

// Half-open range of interval indices [first, last).
struct IntervalRange {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t size() const noexcept { return last - first; }
    bool operator==(const IntervalRange&) const = default;
};

// Contiguous ranges, one per node, covering every interval once. Node r
// ends at the first prefix whose operation count reaches (r+1)/N of the
// total, so each node's load is within max(ops) of total/N.
std::vector<IntervalRange> partition_by_ops(std::span<const std::uint64_t> ops, std::size_t nodes);

// Intervals whose operation counts node `node` computes.
IntervalRange opcount_slice(std::size_t intervals, std::size_t nodes, std::size_t node);

struct ClusterReport {
    std::size_t nodes = 0;
    std::vector<std::uint64_t> op_counts;      // per interval
    std::vector<std::size_t> opcount_owner;    // node that computed op_counts[k]
    std::vector<IntervalRange> ranges;         // per node
    std::vector<std::uint64_t> node_ops;       // per node, sum of op_counts over its range
    std::uint64_t messages = 0;
    std::uint64_t bytes = 0;
};

// Multiplication over `nodes` simulated nodes that talk only through
// `transport`. Node 0 runs in the calling thread and owns the operands and
// the result; the other nodes run on their own threads. Each node merges
// its intervals with `cfg.threads` local workers.
//
// Transport and protocol failures are reported as ClusterError; exponent
// overflow as OverflowError.
template <Coefficient C>
Polynomial<C> cluster_mul(const Polynomial<C>& a, const Polynomial<C>& b, const MulConfig& cfg,
                          std::size_t nodes, Transport& transport, ClusterReport* report = nullptr);

extern template Polynomial<mpz_class> cluster_mul(const Polynomial<mpz_class>&,
                                                  const Polynomial<mpz_class>&, const MulConfig&,
                                                  std::size_t, Transport&, ClusterReport*);
extern template Polynomial<double> cluster_mul(const Polynomial<double>&,
                                               const Polynomial<double>&, const MulConfig&,
                                               std::size_t, Transport&, ClusterReport*);

} // namespace spmul
