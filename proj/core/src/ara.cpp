#include "lor/ara.hpp"

#include <cctype>
#include <cstdlib>

namespace lor {

Ara Ara::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("Ara: empty literal");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::int64_t units = 0;
  std::size_t digits = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    units = checked_add(checked_mul(units, 10), text[pos] - '0');
    ++pos;
    ++digits;
  }
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (frac_digits == 6) throw std::invalid_argument("Ara: more than 6 fraction digits");
      frac = frac * 10 + (text[pos] - '0');
      ++pos;
      ++frac_digits;
    }
    if (frac_digits == 0) throw std::invalid_argument("Ara: trailing decimal point");
  }
  if (pos != text.size() || digits == 0)
    throw std::invalid_argument("Ara: malformed literal '" + std::string(text) + "'");
  while (frac_digits < 6) {
    frac *= 10;
    ++frac_digits;
  }
  std::int64_t micro = checked_add(checked_mul(units, kScale), frac);
  return Ara(negative ? -micro : micro);
}

std::string Ara::str() const {
  std::int64_t m = micro_;
  std::string sign;
  if (m < 0) {
    sign = "-";
    m = -m;
  }
  std::string whole = std::to_string(m / kScale);
  std::string frac = std::to_string(m % kScale);
  frac.insert(0, 6 - frac.size(), '0');
  return sign + whole + "." + frac;
}

Ara Ara::mul_ppm(std::int64_t ppm) const {
  return mul_div(ppm, kScale);
}

Ara Ara::mul_div(std::int64_t num, std::int64_t den) const {
  if (den == 0) throw std::invalid_argument("Ara::mul_div: zero denominator");
  __int128 wide = static_cast<__int128>(micro_) * num / den;
  if (wide > INT64_MAX || wide < INT64_MIN) throw std::overflow_error("Ara overflow");
  return Ara(static_cast<std::int64_t>(wide));
}

}  // namespace lor
