#include "spmul/exponent.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "spmul/error.hpp"

namespace spmul {

namespace {

constexpr std::uint64_t low_mask(unsigned bits) noexcept {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

} // namespace

VarTable::VarTable(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty() || names_.size() > max_vars)
        throw std::invalid_argument("variable count must be between 1 and " +
                                    std::to_string(max_vars));
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names_) {
        if (n.empty())
            throw std::invalid_argument("empty variable name");
        if (!seen.insert(n).second)
            throw std::invalid_argument("duplicate variable name '" + n + "'");
    }
}

std::optional<std::size_t> VarTable::index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

ExponentLayout::ExponentLayout(MonomialOrder order, std::vector<unsigned> var_bits,
                               unsigned degree_bits)
    : order_(order), bits_(std::move(var_bits)),
      degree_bits_(order == MonomialOrder::grlex ? degree_bits : 0) {
    const std::size_t m = bits_.size();
    if (m == 0)
        throw std::invalid_argument("exponent layout needs at least one variable");
    if (order_ == MonomialOrder::grlex && degree_bits_ == 0)
        throw std::invalid_argument("grlex layout needs a degree field");
    unsigned total = degree_bits_;
    for (unsigned b : bits_) {
        if (b == 0 || b > 32)
            throw std::invalid_argument("exponent field width must be between 1 and 32 bits");
        total += b;
    }
    if (total > 64)
        throw OverflowError("exponent layout needs " + std::to_string(total) +
                            " bits, more than 64");
    total_bits_ = total;

    shifts_.resize(m);
    unsigned shift = 0;
    for (std::size_t i = m; i-- > 0;) {
        shifts_[i] = shift;
        if (shift != 0)
            carry_mask_ |= std::uint64_t{1} << shift;
        shift += bits_[i];
    }
    if (order_ == MonomialOrder::grlex) {
        degree_shift_ = shift;
        carry_mask_ |= std::uint64_t{1} << shift;
        top_shift_ = degree_shift_;
        top_bits_ = degree_bits_;
    } else {
        top_shift_ = shifts_[0];
        top_bits_ = bits_[0];
    }
    if (total_bits_ < 64)
        carry_mask_ |= std::uint64_t{1} << total_bits_;
}

ExponentLayout ExponentLayout::uniform(std::size_t vars, MonomialOrder order) {
    if (vars == 0 || vars > VarTable::max_vars)
        throw std::invalid_argument("variable count must be between 1 and " +
                                    std::to_string(VarTable::max_vars));
    if (order == MonomialOrder::grlex) {
        const auto w = static_cast<unsigned>(64 / (vars + 1));
        const auto deg = static_cast<unsigned>(64 - vars * w);
        return ExponentLayout(order, std::vector<unsigned>(vars, w), deg);
    }
    const auto w = std::min(32u, static_cast<unsigned>(64 / vars));
    std::vector<unsigned> bits(vars, w);
    bits[0] = std::min(32u, static_cast<unsigned>(bits[0] + 64 - vars * w));
    return ExponentLayout(order, std::move(bits), 0);
}

ExponentLayout ExponentLayout::with_widths(MonomialOrder order, std::vector<unsigned> var_bits,
                                           unsigned degree_bits) {
    return ExponentLayout(order, std::move(var_bits), degree_bits);
}

ExponentLayout ExponentLayout::for_max_degrees(MonomialOrder order,
                                               std::span<const std::uint32_t> max_degrees) {
    std::vector<unsigned> bits(max_degrees.size());
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < max_degrees.size(); ++i) {
        std::uint64_t v = max_degrees[i];
        // lex reserves the top value of x_1
        if (order == MonomialOrder::lex && i == 0)
            ++v;
        bits[i] = std::max(1u, static_cast<unsigned>(std::bit_width(v)));
        sum += max_degrees[i];
    }
    unsigned deg = 0;
    if (order == MonomialOrder::grlex)
        deg = std::max(1u, static_cast<unsigned>(std::bit_width(sum + 1)));
    return ExponentLayout(order, std::move(bits), deg);
}

std::uint64_t ExponentLayout::var_max(std::size_t i) const {
    const std::uint64_t full = low_mask(bits_.at(i));
    return (order_ == MonomialOrder::lex && i == 0) ? full - 1 : full;
}

std::uint64_t ExponentLayout::degree_max() const noexcept {
    if (order_ == MonomialOrder::lex)
        return std::numeric_limits<std::uint64_t>::max();
    return low_mask(degree_bits_) - 1;
}

Exponent ExponentLayout::pack(std::span<const std::uint32_t> vec) const {
    if (vec.size() != bits_.size())
        throw std::invalid_argument("exponent vector has " + std::to_string(vec.size()) +
                                    " components, layout expects " +
                                    std::to_string(bits_.size()));
    std::uint64_t word = 0;
    std::uint64_t deg = 0;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (vec[i] > var_max(i))
            throw OverflowError("exponent " + std::to_string(vec[i]) + " of variable #" +
                                std::to_string(i + 1) + " exceeds field maximum " +
                                std::to_string(var_max(i)));
        word |= std::uint64_t{vec[i]} << shifts_[i];
        deg += vec[i];
    }
    if (order_ == MonomialOrder::grlex) {
        if (deg > degree_max())
            throw OverflowError("total degree " + std::to_string(deg) +
                                " exceeds field maximum " + std::to_string(degree_max()));
        word |= deg << degree_shift_;
    }
    return {word};
}

std::uint32_t ExponentLayout::component(Exponent e, std::size_t i) const {
    return static_cast<std::uint32_t>((e.packed >> shifts_.at(i)) & low_mask(bits_[i]));
}

std::vector<std::uint32_t> ExponentLayout::unpack(Exponent e) const {
    std::vector<std::uint32_t> out(bits_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = component(e, i);
    return out;
}

std::uint64_t ExponentLayout::degree(Exponent e) const {
    if (order_ == MonomialOrder::grlex)
        return (e.packed >> degree_shift_) & low_mask(degree_bits_);
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        d += component(e, i);
    return d;
}

bool ExponentLayout::add_overflows(Exponent a, Exponent b) const noexcept {
    const std::uint64_t s = a.packed + b.packed;
    if (total_bits_ == 64 && s < a.packed)
        return true;
    // a carry into the low bit of any field means the field below overflowed
    if (((a.packed ^ b.packed ^ s) & carry_mask_) != 0)
        return true;
    const std::uint64_t top = (s >> top_shift_) & low_mask(top_bits_);
    return top == low_mask(top_bits_);
}

Exponent ExponentLayout::add(Exponent a, Exponent b) const {
    if (add_overflows(a, b))
        throw OverflowError("exponent overflow in monomial product");
    return add_unchecked(a, b);
}

} // namespace spmul
