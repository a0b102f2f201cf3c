#include "ecolens/fraction.hpp"

#include <numeric>
#include <stdexcept>

namespace ecolens {

namespace {

using u128 = uint128_t;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Fraction::Fraction(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
  if (den == 0) throw std::invalid_argument("fraction with zero denominator");
}

Fraction Fraction::as_percent() const {
  std::uint64_t g = std::gcd(den_, std::uint64_t{100});
  return Fraction(num_ * (100 / g), den_ / g);
}

std::int64_t round_half_away(u128 num, u128 den) {
  u128 q = num / den;
  u128 r = num % den;
  if (2 * r >= den) ++q;
  return static_cast<std::int64_t>(q);
}

std::int64_t Fraction::scaled_percent(int decimals) const {
  u128 scale = 100;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  return round_half_away(static_cast<u128>(num_) * scale, den_);
}

std::string Fraction::percent_text(int decimals) const {
  std::int64_t scaled = scaled_percent(decimals);
  std::int64_t unit = 1;
  for (int i = 0; i < decimals; ++i) unit *= 10;
  std::string text = std::to_string(scaled / unit);
  std::int64_t frac = scaled % unit;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, static_cast<std::size_t>(decimals) - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    text += "." + digits;
  }
  return text;
}

double Fraction::to_double() const noexcept {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

bool operator==(const Fraction& a, const Fraction& b) noexcept {
  return static_cast<u128>(a.num_) * b.den_ == static_cast<u128>(b.num_) * a.den_;
}

std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) noexcept {
  return static_cast<u128>(a.num_) * b.den_ <=> static_cast<u128>(b.num_) * a.den_;
}

Fraction mean(std::span<const Fraction> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty set");
  u128 num = 0;
  u128 den = 1;
  for (const Fraction& f : values) {
    // num/den + f.num/f.den, reduced at every step
    u128 n = num * f.den() + static_cast<u128>(f.num()) * den;
    u128 d = den * f.den();
    u128 g = gcd128(n, d);
    num = n / g;
    den = d / g;
  }
  den *= values.size();
  u128 g = gcd128(num, den);
  num /= g;
  den /= g;
  if (num > UINT64_MAX || den > UINT64_MAX) throw std::overflow_error("mean does not fit in 64 bits");
  return Fraction(static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den));
}

}  // namespace ecolens
