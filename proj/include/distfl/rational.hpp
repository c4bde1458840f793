#pragma once

// Exact nonnegative rational cost arithmetic. All cost and dual-value logic in
// this project must stay in exact rationals; doubles are allowed only for
// human-readable approximations and statistical summaries.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace distfl {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "p", "p/q" with optional sign. Throws std::invalid_argument on
// anything else (decimals are deliberately rejected: cost files are exact).
Rat parse_rat(const std::string& token);

// Canonical token form: "p" if integral, else "p/q".
std::string format_rat(const Rat& value);

double to_double(const Rat& value);

// (1+eps)^exp by repeated squaring; exp is small in practice but exactness
// matters more than speed here.
Rat rat_pow(const Rat& base, uint64_t exp);

inline bool is_integer(const Rat& v) { return denominator(v) == 1; }

// floor(sqrt(x)) for x >= 0.
uint64_t isqrt_u64(uint64_t x);

// Smallest integer p >= 0 with base^p >= target; requires base > 1, target > 0.
// This is ceil(log_base(target)) for target >= 1.
uint64_t ceil_log(const Rat& base, const Rat& target);

}  // namespace distfl
