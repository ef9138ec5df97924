#pragma once

#include <ostream>
#include <string>

#include "lor/adversary.hpp"
#include "lor/config.hpp"
#include "lor/experiment.hpp"

namespace lor::harness {

// Outcome of one attack scenario; `holds` is the scenario's required
// observable, `detail` a human-readable account of what was measured.
struct AttackReport {
  AttackScenario scenario = AttackScenario::none;
  bool holds = false;
  std::string detail;

  Ara attacker_delta;
  std::uint64_t sybil_identities = 0;
  std::uint64_t majority_captures = 0;
  std::uint64_t teams_sampled = 0;
  double predicted_capture_rate = 0.0;
  Ara conservation_residual;
};

// Configures and runs the named scenario on top of `base`, checking its
// observable:
//   double_spend         second submission of a shared ring rejected
//   sybil_flood          floor(budget / cheapest) identities, delta <= 0
//   resource_theft       no payout without a locked coin
//   long_delay           long rings settle only after their full rounds
//   centralization_probe majority-capture frequency matches the exact tail
// Throws std::invalid_argument for AttackScenario::none.
AttackReport run_attack(SimConfig base, AttackScenario scenario,
                        std::ostream* event_sink = nullptr);

}  // namespace lor::harness
