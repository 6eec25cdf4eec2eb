#pragma once

// Frame format used between simulated cluster nodes. All integers are
// little-endian.
//
//   frame    := tag:u8 length:u64 payload[length]
//   tag      := 1 BCAST_OPERANDS | 2 OPCOUNTS | 3 RANGE | 4 RESULT
//
//   BCAST_OPERANDS := context coeff_kind:u8 terms(A) terms(B)
//                     n_s:u64 bound:u64[n_s]
//   OPCOUNTS       := first:u64 count:u64 ops:u64[count]
//   RANGE          := first:u64 last:u64
//   RESULT         := first:u64 count:u64 terms[count]
//
//   context := order:u8 degree_bits:u8 m:u32 (bits:u8 name:string)[m]
//   string  := length:u32 bytes
//   terms   := n:u64 (exponent:u64 coeff)[n]
//   coeff   := f64 as its IEEE-754 bit pattern in a u64, or for integers
//              sign:u8 (0 zero, 1 positive, 2 negative) length:u32
//              magnitude bytes, least significant first

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "spmul/error.hpp"
#include "spmul/polynomial.hpp"
#include "spmul/split.hpp"

namespace spmul {

using Bytes = std::vector<std::uint8_t>;

enum class FrameTag : std::uint8_t { bcast_operands = 1, opcounts = 2, range = 3, result = 4 };

const char* frame_tag_name(FrameTag tag) noexcept;

class WireWriter {
public:
    void put_u8(std::uint8_t v) { buf_.push_back(v); }
    void put_u32(std::uint32_t v);
    void put_u64(std::uint64_t v);
    void put_string(const std::string& s);
    void put_bytes(std::span<const std::uint8_t> bytes);

    void put_coeff(const mpz_class& c);
    void put_coeff(double c) { put_u64(std::bit_cast<std::uint64_t>(c)); }

    void put_context(const PolyContext& ctx);

    template <Coefficient C>
    void put_terms(const TermList<C>& t) {
        put_u64(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            put_u64(t.exps[i].packed);
            put_coeff(t.coeffs[i]);
        }
    }

    const Bytes& bytes() const noexcept { return buf_; }
    Bytes take() noexcept { return std::move(buf_); }

private:
    Bytes buf_;
};

// Bounds-checked reader; malformed input raises ClusterError.
class WireReader {
public:
    explicit WireReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t get_u8();
    std::uint32_t get_u32();
    std::uint64_t get_u64();
    std::string get_string();

    template <Coefficient C>
    C get_coeff();

    ContextPtr get_context();

    template <Coefficient C>
    TermList<C> get_terms() {
        const std::uint64_t n = get_u64();
        // each term needs at least nine bytes
        if (n > remaining() / 9)
            throw ClusterError("term count exceeds frame size");
        TermList<C> t;
        t.reserve(static_cast<std::size_t>(n));
        for (std::uint64_t i = 0; i < n; ++i) {
            const Exponent e{get_u64()};
            t.push_back(e, get_coeff<C>());
        }
        return t;
    }

    std::size_t remaining() const noexcept { return data_.size() - pos_; }
    void expect_end() const;

private:
    std::span<const std::uint8_t> need(std::size_t n);

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

template <>
mpz_class WireReader::get_coeff<mpz_class>();
template <>
double WireReader::get_coeff<double>();

struct Frame {
    FrameTag tag;
    Bytes payload;
};

Bytes encode_frame(FrameTag tag, std::span<const std::uint8_t> payload);
Frame decode_frame(std::span<const std::uint8_t> bytes);
// Decodes and checks the tag.
Frame expect_frame(std::span<const std::uint8_t> bytes, FrameTag tag);

template <Coefficient C>
struct OperandsMessage {
    Polynomial<C> a;
    Polynomial<C> b;
    SplitSet splits;
};

template <Coefficient C>
Bytes encode_operands(const Polynomial<C>& a, const Polynomial<C>& b, const SplitSet& splits) {
    WireWriter w;
    w.put_context(a.context());
    w.put_u8(CoeffTraits<C>::wire_tag);
    w.put_terms(a.terms());
    w.put_terms(b.terms());
    w.put_u64(splits.size());
    for (Exponent e : splits.bounds())
        w.put_u64(e.packed);
    return encode_frame(FrameTag::bcast_operands, w.bytes());
}

template <Coefficient C>
OperandsMessage<C> decode_operands(std::span<const std::uint8_t> payload) {
    WireReader r(payload);
    ContextPtr ctx = r.get_context();
    if (r.get_u8() != CoeffTraits<C>::wire_tag)
        throw ClusterError("operand coefficient type mismatch");
    auto ta = r.get_terms<C>();
    auto tb = r.get_terms<C>();
    const std::uint64_t ns = r.get_u64();
    if (ns > r.remaining() / 8)
        throw ClusterError("split count exceeds frame size");
    std::vector<Exponent> bounds(static_cast<std::size_t>(ns));
    for (auto& e : bounds)
        e.packed = r.get_u64();
    r.expect_end();
    for (std::size_t i = 1; i < bounds.size(); ++i)
        if (!(bounds[i - 1] < bounds[i]))
            throw ClusterError("split bounds are not ascending");
    if (bounds.empty() || bounds.back() != Exponent::sentinel())
        throw ClusterError("split bounds do not end with the sentinel");
    try {
        return {Polynomial<C>::from_canonical(ctx, std::move(ta)),
                Polynomial<C>::from_canonical(ctx, std::move(tb)),
                SplitSet::from_candidates(std::move(bounds))};
    } catch (const std::invalid_argument& e) {
        throw ClusterError(std::string("malformed operands: ") + e.what());
    }
}

struct OpCountsMessage {
    std::uint64_t first = 0;
    std::vector<std::uint64_t> ops;
};

Bytes encode_opcounts(std::uint64_t first, std::span<const std::uint64_t> ops);
OpCountsMessage decode_opcounts(std::span<const std::uint8_t> payload);

struct RangeMessage {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
};

Bytes encode_range(std::uint64_t first, std::uint64_t last);
RangeMessage decode_range(std::span<const std::uint8_t> payload);

template <Coefficient C>
struct ResultMessage {
    std::uint64_t first = 0;
    std::vector<TermList<C>> containers;
};

template <Coefficient C>
Bytes encode_result(std::uint64_t first, const std::vector<TermList<C>>& containers) {
    WireWriter w;
    w.put_u64(first);
    w.put_u64(containers.size());
    for (const auto& c : containers)
        w.put_terms(c);
    return encode_frame(FrameTag::result, w.bytes());
}

template <Coefficient C>
ResultMessage<C> decode_result(std::span<const std::uint8_t> payload) {
    WireReader r(payload);
    ResultMessage<C> msg;
    msg.first = r.get_u64();
    const std::uint64_t n = r.get_u64();
    if (n > r.remaining() / 8)
        throw ClusterError("container count exceeds frame size");
    msg.containers.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i)
        msg.containers.push_back(r.get_terms<C>());
    r.expect_end();
    return msg;
}

} // namespace spmul
