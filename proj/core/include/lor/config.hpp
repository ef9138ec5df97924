#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lor/adversary.hpp"
#include "lor/ara.hpp"
#include "lor/penalty.hpp"

namespace lor {

// One admin-defined service. Ring sizes are drawn uniformly from
// [ring_min, ring_max]; rounds_factor scales how many rounds a ring of this
// service needs (rounds_factor * R), so >1 models long-running cooperation.
struct ServiceSpec {
  std::uint32_t id = 0;
  std::string name;
  Ara unit_price = Ara::from_units(1);
  std::uint32_t ring_min = 3;
  std::uint32_t ring_max = 3;
  std::uint32_t rounds_factor = 1;
};

// How cooperation rings form each checkpoint.
//   catalog:     investment coins recruit worker coins of their service.
//   permutation: every participating trader fields one coin per slice and
//                each slice's rings are the cycles of a uniform random
//                permutation; this is the configuration the closed-form
//                cycle statistics apply to.
enum class RingModel : std::uint8_t { catalog, permutation };

struct SimConfig {
  std::uint64_t trader_count = 2000;   // N
  double alpha = 0.1;                  // wrongdoer fraction, < 0.5
  std::uint32_t kappa = 25;            // verification team size, odd
  std::uint32_t ell = 3;               // max rings per trader
  std::uint32_t rounds_r = 10;         // rounds per checkpoint
  PenaltySchedule phi;
  std::uint32_t fractal_min = 5;
  std::uint32_t fractal_max = 20;
  double k_regulator = 0.0;            // K; >0 together with gamma/psi derives R
  double gamma = 0.0;                  // mean submission rate
  double expected_psi = 0.0;           // mean cooperation duration
  std::uint64_t seed = 1;
  std::uint64_t checkpoints = 5;
  std::vector<ServiceSpec> service_catalog;

  std::int64_t fee_ppm = 900'000;      // settlement fee fraction paid out
  std::int64_t bonus_ppm = 0;          // blocked-coin holder bonus (minted)
  Ara genesis_balance = Ara::from_units(100);
  RingModel ring_model = RingModel::catalog;
  AdversaryPolicy adversary;
  AttackScenario attack = AttackScenario::none;
  std::uint64_t attack_checkpoint = 1;

  // Checks every cross-field invariant; returns an empty string when valid,
  // otherwise the first problem found (key name plus reason).
  std::string validate() const;

  // Cheapest unit price across the catalog (the entrance minimum).
  Ara cheapest_price() const;

  // Canonical flat key=value rendering; equal configs render byte-identically
  // and the rendering feeds run-id derivation.
  std::string canonical() const;
};

// A config with the documented defaults and a single size-3 unit-price
// service.
SimConfig default_config();

}  // namespace lor
