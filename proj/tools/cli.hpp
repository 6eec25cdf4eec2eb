#pragma once

#include <ostream>
#include <string>

namespace spmul::cli {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;     // usage, parse, I/O, transport
inline constexpr int exit_overflow = 2;  // exponent overflow
inline constexpr int exit_mismatch = 3;  // bench result differs from the schoolbook product

// Benchmark example `id` (1, 2 or 3) at power p, as expressions.
struct Example {
    std::string f;
    std::string g;
};
Example example(int id, unsigned p);

// Full-size power of each example (40, 25, 28).
unsigned full_power(int id);

// Entry point of the polymul tool; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace spmul::cli
