#include "spmul/cluster.hpp"

#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

namespace spmul {

std::vector<IntervalRange> partition_by_ops(std::span<const std::uint64_t> ops, std::size_t nodes) {
    if (nodes == 0)
        throw std::invalid_argument("partition needs at least one node");
    const std::size_t k = ops.size();
    std::vector<unsigned __int128> prefix(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i)
        prefix[i + 1] = prefix[i] + ops[i];
    const unsigned __int128 total = prefix[k];

    std::vector<IntervalRange> ranges(nodes);
    std::size_t begin = 0;
    for (std::size_t r = 1; r < nodes; ++r) {
        // smallest end with prefix/total >= r/nodes
        std::size_t end = begin;
        while (end < k && prefix[end] * nodes < total * r)
            ++end;
        ranges[r - 1] = {begin, end};
        begin = end;
    }
    ranges[nodes - 1] = {begin, k};
    return ranges;
}

IntervalRange opcount_slice(std::size_t intervals, std::size_t nodes, std::size_t node) {
    if (nodes == 0 || node >= nodes)
        throw std::invalid_argument("node index out of range");
    const auto bound = [&](std::size_t r) {
        return static_cast<std::size_t>(static_cast<unsigned __int128>(intervals) * r / nodes);
    };
    return {bound(node), bound(node + 1)};
}

namespace {

template <Coefficient C>
void run_worker_node(std::size_t self, std::size_t nodes, const MulConfig& cfg,
                     Transport& transport) {
    const Frame bcast = expect_frame(transport.receive(self, 0), FrameTag::bcast_operands);
    const auto operands = decode_operands<C>(bcast.payload);
    const auto& a = operands.a;
    const auto& b = operands.b;
    const SplitSet& splits = operands.splits;

    const IntervalRange slice = opcount_slice(splits.intervals(), nodes, self);
    const auto ops =
        interval_op_counts(a.exponents(), b.exponents(), splits, slice.first, slice.last, cfg.threads);
    transport.send(self, 0, encode_opcounts(slice.first, ops));

    const auto range = decode_range(expect_frame(transport.receive(self, 0), FrameTag::range).payload);
    if (range.last > splits.intervals())
        throw ClusterError("assigned range exceeds the split set");
    auto containers =
        multiply_intervals(a.terms(), b.terms(), splits, static_cast<std::size_t>(range.first),
                           static_cast<std::size_t>(range.last), cfg);
    transport.send(self, 0, encode_result(range.first, containers));
}

template <Coefficient C>
Polynomial<C> run_root_node(const Polynomial<C>& a, const Polynomial<C>& b, const MulConfig& cfg,
                            std::size_t nodes, Transport& transport, ClusterReport& report) {
    const SplitSet splits = select_grid(a.exponents(), b.exponents(), cfg.grid);
    const std::size_t intervals = splits.intervals();
    transport.broadcast(0, encode_operands(a, b, splits));

    report.op_counts.assign(intervals, 0);
    report.opcount_owner.assign(intervals, nodes);
    auto record = [&](std::size_t owner, std::uint64_t first, std::span<const std::uint64_t> ops) {
        const IntervalRange expected = opcount_slice(intervals, nodes, owner);
        if (first != expected.first || ops.size() != expected.size())
            throw ClusterError("node " + std::to_string(owner) + " reported the wrong op-count slice");
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const std::size_t k = expected.first + i;
            if (report.opcount_owner[k] != nodes)
                throw ClusterError("interval " + std::to_string(k) + " counted twice");
            report.opcount_owner[k] = owner;
            report.op_counts[k] = ops[i];
        }
    };

    const IntervalRange own = opcount_slice(intervals, nodes, 0);
    record(0, own.first,
           interval_op_counts(a.exponents(), b.exponents(), splits, own.first, own.last, cfg.threads));
    for (std::size_t r = 1; r < nodes; ++r) {
        const auto msg = decode_opcounts(expect_frame(transport.receive(0, r), FrameTag::opcounts).payload);
        record(r, static_cast<std::size_t>(msg.first), msg.ops);
    }

    report.ranges = partition_by_ops(report.op_counts, nodes);
    report.node_ops.clear();
    for (const auto& range : report.ranges)
        report.node_ops.push_back(std::accumulate(
            report.op_counts.begin() + static_cast<std::ptrdiff_t>(range.first),
            report.op_counts.begin() + static_cast<std::ptrdiff_t>(range.last), std::uint64_t{0}));
    for (std::size_t r = 1; r < nodes; ++r)
        transport.send(0, r, encode_range(report.ranges[r].first, report.ranges[r].last));

    std::vector<TermList<C>> all =
        multiply_intervals(a.terms(), b.terms(), splits, report.ranges[0].first, report.ranges[0].last, cfg);
    all.reserve(intervals);
    for (std::size_t r = 1; r < nodes; ++r) {
        auto msg = decode_result<C>(expect_frame(transport.receive(0, r), FrameTag::result).payload);
        const IntervalRange& range = report.ranges[r];
        if (msg.first != range.first || msg.containers.size() != range.size())
            throw ClusterError("node " + std::to_string(r) + " returned the wrong intervals");
        for (auto& c : msg.containers)
            all.push_back(std::move(c));
    }
    try {
        return concat(a.context_ptr(), all);
    } catch (const std::invalid_argument& e) {
        throw ClusterError(std::string("gathered result is not canonical: ") + e.what());
    }
}

} // namespace

template <Coefficient C>
Polynomial<C> cluster_mul(const Polynomial<C>& a, const Polynomial<C>& b, const MulConfig& cfg,
                          std::size_t nodes, Transport& transport, ClusterReport* report) {
    require_compatible(a, b);
    if (nodes == 0 || transport.nodes() != nodes)
        throw std::invalid_argument("node count does not match the transport");
    if (cfg.threads == 0)
        throw std::invalid_argument("worker count must be at least 1");
    ClusterReport local;
    ClusterReport& rep = report ? *report : local;
    rep = ClusterReport{};
    rep.nodes = nodes;
    if (a.empty() || b.empty())
        return Polynomial<C>(a.context_ptr());
    check_product_fits(a.layout(), a.exponents(), b.exponents());

    const std::uint64_t messages_before = transport.messages();
    const std::uint64_t bytes_before = transport.bytes();

    std::mutex failures_mutex;
    std::vector<std::pair<std::size_t, std::exception_ptr>> failures;
    auto fail = [&](std::size_t node, std::exception_ptr e) {
        {
            std::lock_guard lock(failures_mutex);
            failures.emplace_back(node, e);
        }
        transport.close();
    };

    std::optional<Polynomial<C>> result;
    {
        std::vector<std::jthread> workers;
        workers.reserve(nodes - 1);
        for (std::size_t r = 1; r < nodes; ++r)
            workers.emplace_back([&, r] {
                try {
                    run_worker_node<C>(r, nodes, cfg, transport);
                } catch (...) {
                    fail(r, std::current_exception());
                }
            });
        try {
            // rows come from the shorter operand, as in mul()
            if (b.size() < a.size())
                result = run_root_node(b, a, cfg, nodes, transport, rep);
            else
                result = run_root_node(a, b, cfg, nodes, transport, rep);
        } catch (...) {
            fail(0, std::current_exception());
        }
    }

    if (!failures.empty()) {
        // report the first failure that was not caused by closing the transport
        std::size_t pick = 0;
        for (std::size_t i = 0; i < failures.size(); ++i) {
            try {
                std::rethrow_exception(failures[i].second);
            } catch (const TransportClosedError&) {
                continue;
            } catch (...) {
                pick = i;
                break;
            }
        }
        const auto& [node, error] = failures[pick];
        try {
            std::rethrow_exception(error);
        } catch (const OverflowError&) {
            throw;
        } catch (const ClusterError& e) {
            throw ClusterError("node " + std::to_string(node) + ": " + e.what());
        } catch (const std::exception& e) {
            throw ClusterError("node " + std::to_string(node) + ": " + e.what());
        }
    }

    rep.messages = transport.messages() - messages_before;
    rep.bytes = transport.bytes() - bytes_before;
    return std::move(*result);
}

template Polynomial<mpz_class> cluster_mul(const Polynomial<mpz_class>&,
                                           const Polynomial<mpz_class>&, const MulConfig&,
                                           std::size_t, Transport&, ClusterReport*);
template Polynomial<double> cluster_mul(const Polynomial<double>&, const Polynomial<double>&,
                                        const MulConfig&, std::size_t, Transport&, ClusterReport*);

} // namespace spmul
