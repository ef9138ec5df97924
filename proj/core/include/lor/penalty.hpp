#pragma once

#include <cstdint>
#include <string_view>

namespace lor {

// Per-round penalty fraction charged to every member of a dissatisfied ring.
//   per_round_R:    phi = c / R
//   inverse_square: phi = c / k^2   (k = ring size)
//   constant:       phi = c
enum class PenaltyMode : std::uint8_t { per_round_R, inverse_square, constant };

constexpr std::string_view to_string(PenaltyMode m) {
  switch (m) {
    case PenaltyMode::per_round_R: return "per_round_R";
    case PenaltyMode::inverse_square: return "inverse_square";
    case PenaltyMode::constant: return "constant";
  }
  return "?";
}

struct PenaltySchedule {
  PenaltyMode mode = PenaltyMode::per_round_R;
  std::int64_t c_ppm = 1'000'000;  // coefficient c as parts per million

  // Exact fraction in ppm, clamped to [0, 1e6]. Ledger arithmetic uses this.
  std::int64_t value_ppm(std::uint32_t ring_size, std::uint32_t rounds) const;
};

// Penalty fraction as a real number; thin wrapper over value_ppm used by
// analytics and reports.
double penalty_value(const PenaltySchedule& schedule, std::uint32_t ring_size,
                     std::uint32_t rounds);

// Number of rounds between checkpoints: ceil(E[psi] / (K * gamma)), at least
// one. Throws std::invalid_argument on nonpositive input.
std::uint32_t compute_round_count(double expected_psi, double k_regulator,
                                  double gamma);

}  // namespace lor
