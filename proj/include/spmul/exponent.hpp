#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spmul {

// Ordered list of variable names. Position 0 is the most significant
// variable of the monomial order.
class VarTable {
public:
    static constexpr std::size_t max_vars = 14;

    VarTable() = default;
    explicit VarTable(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    std::optional<std::size_t> index_of(std::string_view name) const;

    bool operator==(const VarTable&) const = default;

private:
    std::vector<std::string> names_;
};

enum class MonomialOrder : std::uint8_t { lex = 0, grlex = 1 };

// An exponent vector packed into one machine word. Unsigned comparison of
// `packed` is the monomial order of the layout that produced it.
struct Exponent {
    std::uint64_t packed = 0;

    friend constexpr bool operator==(Exponent, Exponent) = default;
    friend constexpr auto operator<=>(Exponent, Exponent) = default;

    // Strictly greater than anything a layout can pack; closes the last
    // split interval.
    static constexpr Exponent sentinel() noexcept { return {~std::uint64_t{0}}; }
};

// Bit-field layout of packed exponents.
//
// Fields are laid out from the low end: x_m occupies the lowest bits, then
// x_{m-1}, ..., x_1, and for grlex a total-degree field on top. The largest
// value of the topmost field is reserved so no valid exponent can equal
// Exponent::sentinel().
class ExponentLayout {
public:
    // Even split of the 64-bit word between the fields.
    static ExponentLayout uniform(std::size_t vars, MonomialOrder order = MonomialOrder::grlex);

    // `degree_bits` is ignored for lex.
    static ExponentLayout with_widths(MonomialOrder order, std::vector<unsigned> var_bits,
                                      unsigned degree_bits = 0);

    // Narrowest layout that stores every vector whose i-th component is at
    // most max_degrees[i].
    static ExponentLayout for_max_degrees(MonomialOrder order,
                                          std::span<const std::uint32_t> max_degrees);

    MonomialOrder order() const noexcept { return order_; }
    std::size_t num_vars() const noexcept { return bits_.size(); }
    unsigned var_bits(std::size_t i) const { return bits_.at(i); }
    unsigned degree_bits() const noexcept { return degree_bits_; }
    unsigned total_bits() const noexcept { return total_bits_; }

    // Largest storable component value for variable i.
    std::uint64_t var_max(std::size_t i) const;
    // Largest storable total degree (grlex only; lex has no degree field).
    std::uint64_t degree_max() const noexcept;

    Exponent pack(std::span<const std::uint32_t> vec) const;
    std::vector<std::uint32_t> unpack(Exponent e) const;
    std::uint32_t component(Exponent e, std::size_t i) const;
    std::uint64_t degree(Exponent e) const;

    // Checked sum; throws OverflowError instead of wrapping.
    Exponent add(Exponent a, Exponent b) const;
    bool add_overflows(Exponent a, Exponent b) const noexcept;

    // Valid only when the caller has established that no field overflows.
    static constexpr Exponent add_unchecked(Exponent a, Exponent b) noexcept {
        return {a.packed + b.packed};
    }

    bool operator==(const ExponentLayout&) const = default;

private:
    ExponentLayout(MonomialOrder order, std::vector<unsigned> var_bits, unsigned degree_bits);

    MonomialOrder order_ = MonomialOrder::grlex;
    std::vector<unsigned> bits_;
    std::vector<unsigned> shifts_;
    unsigned degree_bits_ = 0;
    unsigned degree_shift_ = 0;
    unsigned total_bits_ = 0;
    unsigned top_shift_ = 0;
    unsigned top_bits_ = 0;
    std::uint64_t carry_mask_ = 0;
};

} // namespace spmul
