#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace evcs {

/// Number of raw units per whole unit of money or energy.
inline constexpr std::int64_t kScale = 100;

/// Rounds half away from zero.
inline std::int64_t round_to_raw(long double value) {
  return static_cast<std::int64_t>(value < 0 ? -std::floor(-value + 0.5L)
                                             : std::floor(value + 0.5L));
}

/// Integer quantity in units of 1/kScale. Tag keeps money and energy apart.
template <typename Tag>
class Fixed {
 public:
  constexpr Fixed() = default;

  static constexpr Fixed from_raw(std::int64_t raw) {
    Fixed f;
    f.raw_ = raw;
    return f;
  }
  static Fixed from_double(double value) {
    return from_raw(round_to_raw(static_cast<long double>(value) * kScale));
  }
  static constexpr Fixed whole(std::int64_t units) { return from_raw(units * kScale); }

  constexpr std::int64_t raw() const { return raw_; }
  double to_double() const { return static_cast<double>(raw_) / kScale; }

  constexpr Fixed operator-() const { return from_raw(-raw_); }
  constexpr Fixed& operator+=(Fixed o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Fixed& operator-=(Fixed o) {
    raw_ -= o.raw_;
    return *this;
  }
  friend constexpr Fixed operator+(Fixed a, Fixed b) { return from_raw(a.raw_ + b.raw_); }
  friend constexpr Fixed operator-(Fixed a, Fixed b) { return from_raw(a.raw_ - b.raw_); }
  friend constexpr Fixed operator*(Fixed a, std::int64_t n) { return from_raw(a.raw_ * n); }
  friend constexpr Fixed operator*(std::int64_t n, Fixed a) { return from_raw(a.raw_ * n); }

  friend constexpr auto operator<=>(Fixed, Fixed) = default;
  friend constexpr bool operator==(Fixed, Fixed) = default;

  friend std::ostream& operator<<(std::ostream& os, Fixed f) { return os << to_string(f); }

  friend std::string to_string(Fixed f) {
    const std::int64_t a = f.raw_ < 0 ? -f.raw_ : f.raw_;
    std::string frac = std::to_string(a % kScale);
    while (frac.size() < 2) frac.insert(frac.begin(), '0');
    return (f.raw_ < 0 ? "-" : "") + std::to_string(a / kScale) + "." + frac;
  }

 private:
  std::int64_t raw_ = 0;
};

struct MoneyTag {};
struct EnergyTag {};

using Money = Fixed<MoneyTag>;
using Energy = Fixed<EnergyTag>;

/// Price of `amount` at `per_unit` money per energy unit, rounded to the nearest raw unit.
inline Money price_of(Energy amount, Money per_unit) {
  return Money::from_raw(
      round_to_raw(static_cast<long double>(amount.raw()) * per_unit.raw() / kScale));
}

/// Smallest n with n * step >= amount (step > 0).
inline std::int64_t slots_to_cover(Energy amount, Energy step) {
  if (step.raw() <= 0) throw std::invalid_argument("slots_to_cover: non-positive step");
  if (amount.raw() <= 0) return 0;
  return (amount.raw() + step.raw() - 1) / step.raw();
}

/// Largest n with n * step <= amount (step > 0).
inline std::int64_t slots_within(Energy amount, Energy step) {
  if (step.raw() <= 0) throw std::invalid_argument("slots_within: non-positive step");
  if (amount.raw() < 0) return -1;
  return amount.raw() / step.raw();
}

}  // namespace evcs
