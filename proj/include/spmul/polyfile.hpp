#pragma once

// Plain-text polynomial files:
//
//   vars x y z
//   # comment
//   3 2 0 1
//   -1 0 0 0
//
// The first significant line declares the variables; every following line
// is a coefficient and one exponent per variable. Comments run from '#' to
// the end of the line and blank lines are ignored. Terms are written in
// ascending order; reading accepts any order and combines duplicates.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spmul/error.hpp"
#include "spmul/polynomial.hpp"

namespace spmul {

namespace detail {

std::vector<std::string_view> split_fields(std::string_view line);
std::uint32_t parse_exponent_field(std::string_view field, std::size_t line_no);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace detail

template <Coefficient C>
std::string format_poly(const Polynomial<C>& p) {
    std::ostringstream os;
    os << "vars";
    for (const auto& n : p.vars().names())
        os << ' ' << n;
    os << '\n';
    const auto& layout = p.layout();
    const auto& t = p.terms();
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << CoeffTraits<C>::to_string(t.coeffs[i]);
        for (std::size_t v = 0; v < layout.num_vars(); ++v)
            os << ' ' << layout.component(t.exps[i], v);
        os << '\n';
    }
    return os.str();
}

// Variable names from the header line only.
VarTable parse_poly_header(std::string_view text);

// Uses `layout` when given, otherwise the uniform layout for the declared
// variables.
template <Coefficient C>
Polynomial<C> parse_poly(std::string_view text, std::optional<ExponentLayout> layout = std::nullopt) {
    ContextPtr ctx;
    TermList<C> terms;
    std::vector<std::uint32_t> vec;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto fields = detail::split_fields(line);
        if (fields.empty())
            continue;
        if (!ctx) {
            if (fields[0] != "vars" || fields.size() < 2)
                throw ParseError("line " + std::to_string(line_no) +
                                     ": expected header 'vars <name>...'",
                                 line_no);
            std::vector<std::string> names(fields.begin() + 1, fields.end());
            try {
                ctx = make_context(VarTable(std::move(names)), layout);
            } catch (const std::invalid_argument& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
            }
            vec.resize(ctx->vars.size());
            continue;
        }
        if (fields.size() != vec.size() + 1)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(vec.size()) + " exponents, found " +
                                 std::to_string(fields.size() - 1),
                             line_no);
        C c;
        try {
            c = CoeffTraits<C>::parse(fields[0]);
        } catch (const Error& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
        for (std::size_t v = 0; v < vec.size(); ++v)
            vec[v] = detail::parse_exponent_field(fields[v + 1], line_no);
        terms.push_back(ctx->layout.pack(vec), std::move(c));
        if (end == text.size())
            break;
    }
    if (!ctx)
        throw ParseError("missing 'vars' header", line_no);
    return canonicalize(ctx, std::move(terms));
}

template <Coefficient C>
Polynomial<C> read_poly(const std::filesystem::path& path,
                        std::optional<ExponentLayout> layout = std::nullopt) {
    return parse_poly<C>(detail::read_text_file(path), std::move(layout));
}

template <Coefficient C>
void write_poly(const std::filesystem::path& path, const Polynomial<C>& p) {
    detail::write_text_file(path, format_poly(p));
}

} // namespace spmul
