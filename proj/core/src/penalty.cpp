#include "lor/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lor {

std::int64_t PenaltySchedule::value_ppm(std::uint32_t ring_size,
                                        std::uint32_t rounds) const {
  if (ring_size < 2) throw std::invalid_argument("penalty: ring size must be >= 2");
  if (rounds < 1) throw std::invalid_argument("penalty: rounds must be >= 1");
  std::int64_t ppm = 0;
  switch (mode) {
    case PenaltyMode::per_round_R:
      ppm = c_ppm / rounds;
      break;
    case PenaltyMode::inverse_square:
      ppm = c_ppm / (static_cast<std::int64_t>(ring_size) * ring_size);
      break;
    case PenaltyMode::constant:
      ppm = c_ppm;
      break;
  }
  return std::clamp<std::int64_t>(ppm, 0, 1'000'000);
}

double penalty_value(const PenaltySchedule& schedule, std::uint32_t ring_size,
                     std::uint32_t rounds) {
  return static_cast<double>(schedule.value_ppm(ring_size, rounds)) / 1e6;
}

std::uint32_t compute_round_count(double expected_psi, double k_regulator,
                                  double gamma) {
  if (!(expected_psi > 0) || !(k_regulator > 0) || !(gamma > 0))
    throw std::invalid_argument("compute_round_count: inputs must be positive");
  const double a = k_regulator * gamma;
  const double r = std::ceil(expected_psi / a);
  if (r < 1) return 1;
  return static_cast<std::uint32_t>(r);
}

}  // namespace lor
