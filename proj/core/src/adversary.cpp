#include "lor/adversary.hpp"

namespace lor {

std::optional<AttackScenario> parse_attack_scenario(std::string_view name) {
  if (name == "none") return AttackScenario::none;
  if (name == "double_spend") return AttackScenario::double_spend;
  if (name == "sybil_flood") return AttackScenario::sybil_flood;
  if (name == "resource_theft") return AttackScenario::resource_theft;
  if (name == "long_delay") return AttackScenario::long_delay;
  if (name == "centralization_probe") return AttackScenario::centralization_probe;
  return std::nullopt;
}

}  // namespace lor
