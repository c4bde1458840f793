#include "distfl/rational.hpp"

#include <cctype>

namespace distfl {

namespace {

bool valid_int_token(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rat parse_rat(const std::string& token) {
  auto slash = token.find('/');
  if (slash == std::string::npos) {
    if (!valid_int_token(token))
      throw std::invalid_argument("not a rational token: '" + token + "'");
    return Rat(BigInt(token));
  }
  std::string num = token.substr(0, slash);
  std::string den = token.substr(slash + 1);
  if (!valid_int_token(num) || !valid_int_token(den))
    throw std::invalid_argument("not a rational token: '" + token + "'");
  BigInt d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + token + "'");
  return Rat(BigInt(num), d);
}

std::string format_rat(const Rat& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rat& value) { return value.convert_to<double>(); }

Rat rat_pow(const Rat& base, uint64_t exp) {
  Rat result = 1;
  Rat b = base;
  while (exp > 0) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

uint64_t isqrt_u64(uint64_t x) {
  if (x == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

uint64_t ceil_log(const Rat& base, const Rat& target) {
  if (base <= 1) throw std::invalid_argument("ceil_log requires base > 1");
  if (target <= 0) throw std::invalid_argument("ceil_log requires target > 0");
  uint64_t p = 0;
  Rat acc = 1;
  while (acc < target) {
    acc *= base;
    ++p;
  }
  return p;
}

}  // namespace distfl
