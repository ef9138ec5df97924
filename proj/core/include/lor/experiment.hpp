#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lor/config.hpp"
#include "lor/engine.hpp"

namespace lor::harness {

struct MetricsReport {
  SimConfig config;
  std::string run_id;
  std::vector<CheckpointStats> series;

  // Final aggregates.
  std::uint64_t team_decisions = 0;
  std::uint64_t wrong_votes = 0;
  std::uint64_t terminations = 0;
  std::uint64_t submissions = 0;
  std::uint64_t rejections = 0;
  Ara payouts;
  Ara burned;
  double mean_degree = 0.0;                     // mean of per-checkpoint means
  std::map<std::uint64_t, std::uint64_t> degree_histogram;  // final window
  std::map<std::uint32_t, std::uint64_t> ring_sizes_started;
  // Mean per-trader, per-checkpoint penalty fraction.
  double mean_penalty_fraction = 0.0;
  Ara attacker_delta;
  std::uint64_t sybil_identities = 0;
  std::uint64_t postponements = 0;
  Ara conservation_residual;  // exactly zero on a consistent run
};

// Deterministic run id derived from the canonical config rendering.
std::string derive_run_id(const SimConfig& config);

// Runs one trial and aggregates its metrics. Events stream to `event_sink`
// when given. Throws std::logic_error if the conservation identity breaks.
MetricsReport run_experiment(const SimConfig& config,
                             std::ostream* event_sink = nullptr);

// CSV with a fixed column order: run_id,checkpoint,metric,value.
void write_metrics_csv(const MetricsReport& report, std::ostream& out);

// Flat key=value summary of the final aggregates.
void write_summary(const MetricsReport& report, std::ostream& out);

struct DeviationRow {
  std::string metric;
  double observed = 0.0;
  double predicted = 0.0;
  double z = 0.0;         // meaningless unless applicable
  bool applicable = false;
  std::string note;
};

// Observed-vs-theory bridge: wrong-vote rate against the exact binomial
// tail, per-size ring counts against lambda_i, mean degree against the
// kappa + 2 ell - 1 + E(mu) envelope, and the penalty fraction against the
// harmonic bound. Rows the run's configuration cannot support are flagged
// inapplicable with a note.
std::vector<DeviationRow> compare_to_theory(const MetricsReport& report);

void write_deviations_csv(const std::vector<DeviationRow>& rows, std::ostream& out);

}  // namespace lor::harness
