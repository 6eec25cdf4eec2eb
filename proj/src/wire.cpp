#include "spmul/wire.hpp"

#include <stdexcept>

namespace spmul {

const char* frame_tag_name(FrameTag tag) noexcept {
    switch (tag) {
    case FrameTag::bcast_operands:
        return "BCAST_OPERANDS";
    case FrameTag::opcounts:
        return "OPCOUNTS";
    case FrameTag::range:
        return "RANGE";
    case FrameTag::result:
        return "RESULT";
    }
    return "UNKNOWN";
}

void WireWriter::put_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void WireWriter::put_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void WireWriter::put_string(const std::string& s) {
    put_u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
}

void WireWriter::put_bytes(std::span<const std::uint8_t> bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

void WireWriter::put_coeff(const mpz_class& c) {
    const int sign = sgn(c);
    put_u8(sign == 0 ? 0 : sign > 0 ? 1 : 2);
    if (sign == 0) {
        put_u32(0);
        return;
    }
    const std::size_t n = (mpz_sizeinbase(c.get_mpz_t(), 2) + 7) / 8;
    put_u32(static_cast<std::uint32_t>(n));
    const std::size_t at = buf_.size();
    buf_.resize(at + n);
    std::size_t written = 0;
    mpz_export(buf_.data() + at, &written, -1, 1, 0, 0, c.get_mpz_t());
    buf_.resize(at + written);
}

void WireWriter::put_context(const PolyContext& ctx) {
    const auto& layout = ctx.layout;
    put_u8(static_cast<std::uint8_t>(layout.order()));
    put_u8(static_cast<std::uint8_t>(layout.degree_bits()));
    put_u32(static_cast<std::uint32_t>(ctx.vars.size()));
    for (std::size_t i = 0; i < ctx.vars.size(); ++i) {
        put_u8(static_cast<std::uint8_t>(layout.var_bits(i)));
        put_string(ctx.vars.name(i));
    }
}

std::span<const std::uint8_t> WireReader::need(std::size_t n) {
    if (remaining() < n)
        throw ClusterError("truncated frame");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t WireReader::get_u8() { return need(1)[0]; }

std::uint32_t WireReader::get_u32() {
    auto b = need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= std::uint32_t{b[static_cast<std::size_t>(i)]} << (8 * i);
    return v;
}

std::uint64_t WireReader::get_u64() {
    auto b = need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= std::uint64_t{b[static_cast<std::size_t>(i)]} << (8 * i);
    return v;
}

std::string WireReader::get_string() {
    const std::uint32_t n = get_u32();
    auto b = need(n);
    return std::string(b.begin(), b.end());
}

template <>
mpz_class WireReader::get_coeff<mpz_class>() {
    const std::uint8_t sign = get_u8();
    const std::uint32_t n = get_u32();
    if (sign > 2 || (sign == 0) != (n == 0))
        throw ClusterError("malformed integer coefficient");
    auto b = need(n);
    mpz_class v;
    mpz_import(v.get_mpz_t(), n, -1, 1, 0, 0, b.data());
    if (sign == 2)
        v = -v;
    return v;
}

template <>
double WireReader::get_coeff<double>() {
    return std::bit_cast<double>(get_u64());
}

ContextPtr WireReader::get_context() {
    const std::uint8_t order = get_u8();
    const unsigned degree_bits = get_u8();
    const std::uint32_t m = get_u32();
    if (order > 1 || m == 0 || m > VarTable::max_vars)
        throw ClusterError("malformed polynomial context");
    std::vector<unsigned> bits(m);
    std::vector<std::string> names(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        bits[i] = get_u8();
        names[i] = get_string();
    }
    try {
        return make_context(VarTable(std::move(names)),
                            ExponentLayout::with_widths(static_cast<MonomialOrder>(order),
                                                        std::move(bits), degree_bits));
    } catch (const std::exception& e) {
        throw ClusterError(std::string("malformed polynomial context: ") + e.what());
    }
}

void WireReader::expect_end() const {
    if (pos_ != data_.size())
        throw ClusterError("trailing bytes in frame");
}

Bytes encode_frame(FrameTag tag, std::span<const std::uint8_t> payload) {
    WireWriter w;
    w.put_u8(static_cast<std::uint8_t>(tag));
    w.put_u64(payload.size());
    w.put_bytes(payload);
    return w.take();
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
    WireReader r(bytes);
    const std::uint8_t tag = r.get_u8();
    if (tag < 1 || tag > 4)
        throw ClusterError("unknown frame tag " + std::to_string(tag));
    const std::uint64_t len = r.get_u64();
    if (len != r.remaining())
        throw ClusterError("frame length does not match payload");
    return {static_cast<FrameTag>(tag), Bytes(bytes.begin() + 9, bytes.end())};
}

Frame expect_frame(std::span<const std::uint8_t> bytes, FrameTag tag) {
    Frame f = decode_frame(bytes);
    if (f.tag != tag)
        throw ClusterError(std::string("expected ") + frame_tag_name(tag) + " frame, got " +
                           frame_tag_name(f.tag));
    return f;
}

Bytes encode_opcounts(std::uint64_t first, std::span<const std::uint64_t> ops) {
    WireWriter w;
    w.put_u64(first);
    w.put_u64(ops.size());
    for (std::uint64_t v : ops)
        w.put_u64(v);
    return encode_frame(FrameTag::opcounts, w.bytes());
}

OpCountsMessage decode_opcounts(std::span<const std::uint8_t> payload) {
    WireReader r(payload);
    OpCountsMessage msg;
    msg.first = r.get_u64();
    const std::uint64_t n = r.get_u64();
    if (n > r.remaining() / 8)
        throw ClusterError("op count length exceeds frame size");
    msg.ops.resize(static_cast<std::size_t>(n));
    for (auto& v : msg.ops)
        v = r.get_u64();
    r.expect_end();
    return msg;
}

Bytes encode_range(std::uint64_t first, std::uint64_t last) {
    WireWriter w;
    w.put_u64(first);
    w.put_u64(last);
    return encode_frame(FrameTag::range, w.bytes());
}

RangeMessage decode_range(std::span<const std::uint8_t> payload) {
    WireReader r(payload);
    RangeMessage msg;
    msg.first = r.get_u64();
    msg.last = r.get_u64();
    r.expect_end();
    if (msg.first > msg.last)
        throw ClusterError("inverted interval range");
    return msg;
}

} // namespace spmul
