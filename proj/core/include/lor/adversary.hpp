#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "lor/ara.hpp"

namespace lor {

// Behavior knobs for wrongdoers. Probabilities are dimensionless in [0, 1].
struct AdversaryPolicy {
  double withhold_service_prob = 0.0;  // fail to serve in a round
  double false_dissent_prob = 0.0;     // complain about a good round
  double vt_misvote_prob = 0.0;        // vote against observed truth in a team
  bool attempt_double_submit = false;  // duplicate a proposed fractal
  Ara sybil_budget;                    // ARA spent on entrance flooding

  bool valid() const {
    auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
    return in01(withhold_service_prob) && in01(false_dissent_prob) &&
           in01(vt_misvote_prob) && !sybil_budget.is_negative();
  }
};

enum class AttackScenario : std::uint8_t {
  none,
  double_spend,
  sybil_flood,
  resource_theft,
  long_delay,
  centralization_probe,
};

constexpr std::string_view to_string(AttackScenario s) {
  switch (s) {
    case AttackScenario::none: return "none";
    case AttackScenario::double_spend: return "double_spend";
    case AttackScenario::sybil_flood: return "sybil_flood";
    case AttackScenario::resource_theft: return "resource_theft";
    case AttackScenario::long_delay: return "long_delay";
    case AttackScenario::centralization_probe: return "centralization_probe";
  }
  return "?";
}

std::optional<AttackScenario> parse_attack_scenario(std::string_view name);

// Per-round action of a wrongdoer ring member.
enum class WrongdoerAction : std::uint8_t { serve, withhold, false_dissent };

}  // namespace lor
