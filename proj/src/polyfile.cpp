#include "spmul/polyfile.hpp"

#include <cctype>
#include <charconv>
#include <iterator>

namespace spmul {

namespace detail {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::uint32_t parse_exponent_field(std::string_view field, std::size_t line_no) {
    std::uint32_t v = 0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || end != field.data() + field.size())
        throw ParseError("line " + std::to_string(line_no) + ": invalid exponent '" +
                             std::string(field) + "'",
                         line_no);
    return v;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "' for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw Error("error reading '" + path.string() + "'");
    return text;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw Error("error writing '" + path.string() + "'");
}

} // namespace detail

VarTable parse_poly_header(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
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
        if (fields[0] != "vars" || fields.size() < 2)
            break;
        return VarTable(std::vector<std::string>(fields.begin() + 1, fields.end()));
    }
    throw ParseError("missing 'vars' header", line_no);
}

} // namespace spmul
