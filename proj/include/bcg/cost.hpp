#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace bcg {

// Exact cost arithmetic. C^M exceeds 64 bits for congestion in the low
// thousands and M <= 8, so costs are unsigned 128-bit and every operation
// that can grow a value is checked.
using Cost = unsigned __int128;

Cost checked_add(Cost a, Cost b);
Cost checked_mul(Cost a, Cost b);
// base^exponent; exponent >= 0. Throws ArithmeticOverflow.
Cost checked_pow(Cost base, int exponent);

std::string to_string(Cost value);

// Non-negative rational kept in lowest terms. Used for price-of-anarchy
// ratios, which must compare exactly.
class Rational {
 public:
  Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace bcg
