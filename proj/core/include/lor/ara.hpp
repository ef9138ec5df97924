#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lor {

// ARA amounts are fixed point with six decimal places, stored as a signed
// count of micro-ARA. All arithmetic is exact; overflow throws. Conservation
// checks in the ledger rely on these sums never drifting.
class Ara {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Ara() = default;

  static constexpr Ara from_micro(std::int64_t micro) { return Ara(micro); }
  static constexpr Ara from_units(std::int64_t units) {
    return Ara(checked_mul(units, kScale));
  }
  static Ara zero() { return Ara(0); }

  // Parses a decimal literal such as "0.45" or "-3.2"; at most six fraction
  // digits. Throws std::invalid_argument on malformed input.
  static Ara parse(std::string_view text);

  constexpr std::int64_t micro() const { return micro_; }
  double as_double() const { return static_cast<double>(micro_) / kScale; }

  // Canonical formatting: always six fraction digits, e.g. "1.350000".
  std::string str() const;

  constexpr bool is_zero() const { return micro_ == 0; }
  constexpr bool is_positive() const { return micro_ > 0; }
  constexpr bool is_negative() const { return micro_ < 0; }

  friend constexpr Ara operator+(Ara a, Ara b) {
    return Ara(checked_add(a.micro_, b.micro_));
  }
  friend constexpr Ara operator-(Ara a, Ara b) {
    return Ara(checked_add(a.micro_, -b.micro_));
  }
  constexpr Ara operator-() const { return Ara(-micro_); }
  Ara& operator+=(Ara o) { return *this = *this + o; }
  Ara& operator-=(Ara o) { return *this = *this - o; }

  // Scale by an exact integer factor.
  friend constexpr Ara operator*(Ara a, std::int64_t k) {
    return Ara(checked_mul(a.micro_, k));
  }

  // Multiply by a parts-per-million fraction, truncating toward zero. The
  // truncated remainder stays with the payer side, so splits performed with
  // mul_ppm plus an explicit remainder term stay exact.
  Ara mul_ppm(std::int64_t ppm) const;

  // a * num / den with truncation toward zero; 128-bit intermediate.
  Ara mul_div(std::int64_t num, std::int64_t den) const;

  constexpr auto operator<=>(const Ara&) const = default;

 private:
  constexpr explicit Ara(std::int64_t micro) : micro_(micro) {}

  static constexpr std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Ara overflow");
    return r;
  }
  static constexpr std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Ara overflow");
    return r;
  }

  std::int64_t micro_ = 0;
};

}  // namespace lor
