#pragma once

#include <bit>
#include <charconv>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

#include <gmpxx.h>

#include "spmul/error.hpp"

namespace spmul {

template <class C>
struct CoeffTraits;

// Arbitrary-precision integers; every ring operation is exact.
template <>
struct CoeffTraits<mpz_class> {
    static constexpr std::string_view name = "int";
    static constexpr std::uint8_t wire_tag = 0;

    static bool is_zero(const mpz_class& c) noexcept { return sgn(c) == 0; }

    // acc += a * b
    static void add_mul(mpz_class& acc, const mpz_class& a, const mpz_class& b) {
        mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    }

    static mpz_class from_int(long v) { return mpz_class(v); }

    static std::string to_string(const mpz_class& c) { return c.get_str(10); }

    // Accepts an optional sign followed by decimal digits.
    static mpz_class parse(std::string_view text) {
        std::string_view digits = text;
        bool negative = false;
        if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
            negative = digits.front() == '-';
            digits.remove_prefix(1);
        }
        if (digits.empty())
            throw Error("empty integer literal");
        for (char ch : digits)
            if (ch < '0' || ch > '9')
                throw Error("invalid integer literal '" + std::string(text) + "'");
        mpz_class v(std::string(digits), 10);
        return negative ? mpz_class(-v) : v;
    }
};

template <>
struct CoeffTraits<double> {
    static constexpr std::string_view name = "f64";
    static constexpr std::uint8_t wire_tag = 1;

    static bool is_zero(double c) noexcept { return c == 0.0; }

    static void add_mul(double& acc, double a, double b) noexcept { acc += a * b; }

    static double from_int(long v) noexcept { return static_cast<double>(v); }

    // Shortest representation that reads back to the same value.
    static std::string to_string(double c) {
        char buf[32];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, c);
        return std::string(buf, end);
    }

    static double parse(std::string_view text) {
        std::string_view body = text;
        if (!body.empty() && body.front() == '+')
            body.remove_prefix(1);
        double v = 0.0;
        auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc{} || end != body.data() + body.size() || body.empty())
            throw Error("invalid decimal literal '" + std::string(text) + "'");
        return v;
    }
};

template <class C>
concept Coefficient = requires(C& acc, const C& a, std::string_view s) {
    { CoeffTraits<C>::is_zero(a) } -> std::same_as<bool>;
    CoeffTraits<C>::add_mul(acc, a, a);
    { CoeffTraits<C>::from_int(1L) } -> std::convertible_to<C>;
    { CoeffTraits<C>::to_string(a) } -> std::convertible_to<std::string>;
    { CoeffTraits<C>::parse(s) } -> std::convertible_to<C>;
};

} // namespace spmul
