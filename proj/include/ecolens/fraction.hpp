#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>

namespace ecolens {

/// Exact non-negative rational. All metric arithmetic stays in this form;
/// rounding to a printable percentage happens only at presentation time.
class Fraction {
 public:
  constexpr Fraction() = default;
  Fraction(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_one() const noexcept { return num_ == den_; }

  /// Value × 100 as a fraction (not reduced).
  Fraction as_percent() const;

  /// Value × 100 × 10^decimals, rounded half away from zero.
  std::int64_t scaled_percent(int decimals) const;

  /// Percentage rounded half away from zero to `decimals` places, rendered
  /// with a trailing ".0…" trimmed ("66.7", "100", "75").
  std::string percent_text(int decimals = 1) const;

  double to_double() const noexcept;

  friend bool operator==(const Fraction& a, const Fraction& b) noexcept;
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) noexcept;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// Unweighted arithmetic mean of several fractions, exact.
Fraction mean(std::span<const Fraction> values);

__extension__ typedef unsigned __int128 uint128_t;

/// Rounds `num/den` half away from zero for non-negative inputs.
std::int64_t round_half_away(uint128_t num, uint128_t den);

}  // namespace ecolens
