#include "bcg/cost.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "bcg/errors.hpp"

namespace bcg {

namespace {
constexpr Cost kCostMax = std::numeric_limits<Cost>::max();
}

Cost checked_add(Cost a, Cost b) {
  if (a > kCostMax - b) throw ArithmeticOverflow("cost addition overflows 128 bits");
  return a + b;
}

Cost checked_mul(Cost a, Cost b) {
  if (a != 0 && b > kCostMax / a) {
    throw ArithmeticOverflow("cost multiplication overflows 128 bits");
  }
  return a * b;
}

Cost checked_pow(Cost base, int exponent) {
  if (exponent < 0) throw ArithmeticOverflow("negative exponent");
  Cost result = 1;
  for (int i = 0; i < exponent; ++i) result = checked_mul(result, base);
  return result;
}

std::string to_string(Cost value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Rational::Rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw ArithmeticOverflow("rational with zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Cost lhs = static_cast<Cost>(a.num_) * b.den_;
  const Cost rhs = static_cast<Cost>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace bcg
