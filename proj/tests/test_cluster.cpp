#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "spmul/cluster.hpp"
#include "spmul/expr.hpp"
#include "spmul/wire.hpp"

using namespace spmul;
using Z = mpz_class;

namespace {

// Largest per-node load of a partition.
std::uint64_t loads_max(std::span<const std::uint64_t> ops, const std::vector<IntervalRange>& r) {
    std::uint64_t mx = 0;
    for (const auto& range : r) {
        std::uint64_t s = 0;
        for (std::size_t k = range.first; k < range.last; ++k)
            s += ops[k];
        mx = std::max(mx, s);
    }
    return mx;
}

void check_ranges(const std::vector<IntervalRange>& r, std::size_t intervals, std::size_t nodes) {
    REQUIRE(r.size() == nodes);
    CHECK(r.front().first == 0);
    CHECK(r.back().last == intervals);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(r[i].first <= r[i].last);
        if (i > 0)
            CHECK(r[i].first == r[i - 1].last);
    }
}

} // namespace

TEST_CASE("partition_by_ops examples") {
    const std::vector<std::uint64_t> ones{1, 1, 1, 1};
    const auto two = partition_by_ops(ones, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == IntervalRange{0, 2});
    CHECK(two[1] == IntervalRange{2, 4});
    const auto one = partition_by_ops(ones, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == IntervalRange{0, 4});
    const auto many = partition_by_ops(ones, 6);
    check_ranges(many, 4, 6);
    const std::vector<std::uint64_t> none;
    check_ranges(partition_by_ops(none, 3), 0, 3);
    CHECK_THROWS_AS(partition_by_ops(ones, 0), std::invalid_argument);
}

TEST_CASE("greedy partition load bound, exhaustive on small inputs") {
    // every op vector of length <= 5 with entries in 0..3
    for (std::size_t len = 0; len <= 5; ++len) {
        std::vector<std::uint64_t> ops(len, 0);
        for (;;) {
            const std::uint64_t total = std::accumulate(ops.begin(), ops.end(), std::uint64_t{0});
            const std::uint64_t mx = ops.empty() ? 0 : *std::max_element(ops.begin(), ops.end());
            for (std::size_t n = 1; n <= 6; ++n) {
                const auto r = partition_by_ops(ops, n);
                check_ranges(r, len, n);
                for (const auto& range : r) {
                    std::uint64_t s = 0;
                    for (std::size_t k = range.first; k < range.last; ++k)
                        s += ops[k];
                    // |load - total/N| <= max, scaled by N to stay integral
                    const auto diff = static_cast<long long>(s * n) - static_cast<long long>(total);
                    CHECK(static_cast<std::uint64_t>(std::llabs(diff)) <= mx * n);
                }
            }
            std::size_t i = 0;
            while (i < len && ops[i] == 3)
                ops[i++] = 0;
            if (i == len)
                break;
            ++ops[i];
        }
    }
}

TEST_CASE("greedy partition on random loads") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 500; ++t) {
        std::vector<std::uint64_t> ops(rng() % 300);
        for (auto& o : ops)
            o = rng() % 1000000;
        const std::size_t n = 1 + rng() % 16;
        const auto r = partition_by_ops(ops, n);
        check_ranges(r, ops.size(), n);
        const std::uint64_t total = std::accumulate(ops.begin(), ops.end(), std::uint64_t{0});
        const std::uint64_t mx = ops.empty() ? 0 : *std::max_element(ops.begin(), ops.end());
        CHECK(loads_max(ops, r) * n <= total + mx * n);
    }
}

TEST_CASE("opcount slices cover every interval once") {
    for (std::size_t k : {0u, 1u, 5u, 64u, 1000u})
        for (std::size_t n : {1u, 2u, 3u, 8u}) {
            std::vector<int> hits(k, 0);
            for (std::size_t r = 0; r < n; ++r) {
                const auto s = opcount_slice(k, n, r);
                for (std::size_t i = s.first; i < s.last; ++i)
                    ++hits[i];
            }
            CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
        }
}

TEST_CASE("cluster_mul matches mul for several node counts") {
    const auto ctx = make_context(VarTable({"x", "y", "z", "t"}));
    const auto f = parse_polynomial<Z>("(1+x+y+z+t)^8", ctx);
    const auto g = parse_polynomial<Z>("(1+x+y+z+t)^8 + 1", ctx);
    const auto expected = mul(f, g);
    CHECK(expected.size() == 4845);
    for (std::size_t n : {1u, 2u, 3u, 8u}) {
        CAPTURE(n);
        InProcessTransport transport(n);
        ClusterReport report;
        const auto p = cluster_mul(f, g, {{64}, 1, Merger::heap}, n, transport, &report);
        CHECK(p == expected);
        CHECK(report.messages == 1 + 3 * (n - 1));
        CHECK(report.ranges.size() == n);
        // every op count computed by exactly one node
        CHECK(std::none_of(report.opcount_owner.begin(), report.opcount_owner.end(),
                           [&](std::size_t o) { return o >= n; }));
        const std::uint64_t total =
            std::accumulate(report.op_counts.begin(), report.op_counts.end(), std::uint64_t{0});
        CHECK(total == f.size() * g.size());
        const std::uint64_t mx = *std::max_element(report.op_counts.begin(), report.op_counts.end());
        for (auto load : report.node_ops)
            CHECK(load * n <= total + mx * n);
        if (n == 1)
            CHECK(report.bytes == 0);
        else
            CHECK(report.bytes > 0);
    }
}

TEST_CASE("cluster_mul on random products") {
    std::mt19937_64 rng(62);
    for (int t = 0; t < 12; ++t) {
        const std::size_t m = 2 + rng() % 5;
        const auto ctx = random_context(m, 15);
        const std::size_t na = t == 0 ? 500 : 1 + rng() % 200;
        const std::size_t nb = t == 0 ? 500 : 1 + rng() % 200;
        const auto a = random_sparse<Z>(ctx, {rng(), na, 15});
        const auto b = random_sparse<Z>(ctx, {rng(), nb, 15});
        const auto expected = naive_mul(a, b);
        for (std::size_t n : {1u, 2u, 4u}) {
            InProcessTransport transport(n);
            const MulConfig cfg{{1 + rng() % 64}, 1 + static_cast<unsigned>(rng() % 2),
                                rng() % 2 ? Merger::heap : Merger::tree};
            CHECK(cluster_mul(a, b, cfg, n, transport) == expected);
        }
        const auto ad = random_sparse<double>(ctx, {rng(), na, 15});
        const auto bd = random_sparse<double>(ctx, {rng(), nb, 15});
        InProcessTransport t1(1), t3(3);
        CHECK(cluster_mul(ad, bd, {}, 1, t1) == mul(ad, bd));
        CHECK(cluster_mul(ad, bd, {}, 3, t3) == mul(ad, bd));
    }
}

TEST_CASE("cluster_mul argument errors") {
    const auto ctx = make_context(VarTable({"x"}));
    const auto a = parse_polynomial<Z>("1+x", ctx);
    InProcessTransport transport(2);
    CHECK_THROWS_AS(cluster_mul(a, a, {}, 3, transport), std::invalid_argument);
    CHECK(cluster_mul(a, Polynomial<Z>(ctx), {}, 2, transport).empty());
    const auto narrow = make_context(VarTable({"x"}), ExponentLayout::with_widths(MonomialOrder::grlex, {3}, 5));
    const auto big = parse_polynomial<Z>("x^6+1", narrow);
    InProcessTransport t2(2);
    CHECK_THROWS_AS(cluster_mul(big, big, {}, 2, t2), OverflowError);
}

TEST_CASE("transport failures surface as cluster errors") {
    const auto ctx = make_context(VarTable({"x", "y", "z"}));
    const auto f = parse_polynomial<Z>("(1+x+y+z)^6", ctx);
    const std::size_t n = 3;
    // fail at every point of the protocol
    for (std::uint64_t after = 0; after < 1 + 3 * (n - 1); ++after) {
        CAPTURE(after);
        InProcessTransport transport(n, std::chrono::seconds(30));
        transport.fail_after(after);
        CHECK_THROWS_AS(cluster_mul(f, f, {{8}, 1, Merger::heap}, n, transport), ClusterError);
    }
}

TEST_CASE("transport basics") {
    InProcessTransport t(3, std::chrono::milliseconds(50));
    t.send(0, 1, Bytes{1, 2});
    t.send(0, 1, Bytes{3});
    CHECK(t.receive(1, 0) == Bytes{1, 2});
    CHECK(t.receive(1, 0) == Bytes{3});
    t.broadcast(2, Bytes{9, 9, 9});
    CHECK(t.receive(0, 2) == Bytes{9, 9, 9});
    CHECK(t.receive(1, 2) == Bytes{9, 9, 9});
    CHECK(t.messages() == 3);
    CHECK(t.bytes() == 2 + 1 + 6);
    CHECK_THROWS_AS(t.receive(0, 1), TransportError);  // timeout
    CHECK_THROWS(t.send(0, 5, Bytes{}));
    t.close();
    CHECK_THROWS_AS(t.send(0, 1, Bytes{}), TransportClosedError);
    CHECK_THROWS_AS(t.receive(1, 0), TransportClosedError);
}

TEST_CASE("wire round trips") {
    std::mt19937_64 rng(63);
    for (int t = 0; t < 50; ++t) {
        const std::size_t m = 2 + rng() % 7;
        const auto ctx = random_context(m, 10, rng() % 2 ? MonomialOrder::grlex : MonomialOrder::lex);
        auto a = random_sparse<Z>(ctx, {rng(), 1 + rng() % 50, 10});
        // large and negative coefficients
        TermList<Z> big = a.terms();
        for (auto& c : big.coeffs)
            c *= Z("-123456789012345678901234567890123");
        a = Polynomial<Z>::from_canonical(ctx, big);
        const auto b = random_sparse<Z>(ctx, {rng(), 1 + rng() % 50, 10});
        const auto s = select_grid(a.exponents(), b.exponents(), {1 + rng() % 8});

        const Bytes frame = encode_operands(a, b, s);
        const auto msg = decode_operands<Z>(expect_frame(frame, FrameTag::bcast_operands).payload);
        CHECK(msg.a == a);
        CHECK(msg.b == b);
        CHECK(msg.splits == s);
        CHECK(msg.a.layout() == a.layout());

        const auto ad = random_sparse<double>(ctx, {rng(), 1 + rng() % 50, 10});
        const auto md = decode_operands<double>(expect_frame(encode_operands(ad, ad, s), FrameTag::bcast_operands).payload);
        CHECK(md.a == ad);
        CHECK_THROWS_AS(decode_operands<double>(expect_frame(frame, FrameTag::bcast_operands).payload), ClusterError);

        std::vector<std::uint64_t> ops(rng() % 20);
        for (auto& o : ops)
            o = rng();
        const auto oc = decode_opcounts(expect_frame(encode_opcounts(7, ops), FrameTag::opcounts).payload);
        CHECK(oc.first == 7);
        CHECK(oc.ops == ops);

        const auto rg = decode_range(expect_frame(encode_range(3, 11), FrameTag::range).payload);
        CHECK(rg.first == 3);
        CHECK(rg.last == 11);

        std::vector<TermList<Z>> parts{a.terms(), {}, b.terms()};
        const auto res = decode_result<Z>(expect_frame(encode_result<Z>(5, parts), FrameTag::result).payload);
        CHECK(res.first == 5);
        CHECK(res.containers == parts);
    }
}

TEST_CASE("malformed frames are rejected") {
    const auto ctx = make_context(VarTable({"x", "y"}));
    const auto a = parse_polynomial<Z>("(1+x+y)^3", ctx);
    const auto s = select_grid(a.exponents(), a.exponents(), {4});
    const Bytes frame = encode_operands(a, a, s);

    CHECK_THROWS_AS(decode_frame(Bytes{}), ClusterError);
    CHECK_THROWS_AS(decode_frame(Bytes{1, 0, 0}), ClusterError);
    CHECK_THROWS_AS(expect_frame(frame, FrameTag::range), ClusterError);
    Bytes bad_tag = frame;
    bad_tag[0] = 9;
    CHECK_THROWS_AS(decode_frame(bad_tag), ClusterError);
    Bytes truncated(frame.begin(), frame.end() - 3);
    CHECK_THROWS_AS(decode_frame(truncated), ClusterError);

    // every truncation of the payload fails cleanly
    const Bytes payload = decode_frame(frame).payload;
    for (std::size_t cut = 0; cut < payload.size(); cut += 7) {
        const std::span<const std::uint8_t> part(payload.data(), cut);
        CHECK_THROWS_AS(decode_operands<Z>(part), ClusterError);
    }
    Bytes trailing = payload;
    trailing.push_back(0);
    CHECK_THROWS_AS(decode_operands<Z>(trailing), ClusterError);

    // random corruption never crashes; it either decodes or throws
    std::mt19937_64 rng(64);
    for (int t = 0; t < 2000; ++t) {
        Bytes p = payload;
        p[rng() % p.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        try {
            (void)decode_operands<Z>(p);
        } catch (const Error&) {
        } catch (const std::invalid_argument&) {
        }
    }
    CHECK(true);
}
