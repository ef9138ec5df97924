#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <vector>

#include "lor/adversary.hpp"
#include "lor/assemble.hpp"
#include "lor/config.hpp"
#include "lor/hash_draw.hpp"
#include "lor/tcb.hpp"

namespace lor {

struct Clock {
  std::uint64_t checkpoint_index = 0;
  std::uint32_t round_index = 0;
};

struct RoundOutcome {
  RingId ring;
  bool satisfied = true;  // ground truth: no member complained
  std::vector<TraderId> dissenters;
  bool team_decision = true;
};

// Per-round action of a wrongdoer ring member, drawn from the policy.
WrongdoerAction wrongdoer_round_action(const AdversaryPolicy& policy,
                                       rng::HashDraw& state);

// Everything measured over one checkpoint (its process plus the following
// round window).
struct CheckpointStats {
  std::uint64_t checkpoint = 0;
  std::uint64_t submissions = 0;
  std::uint64_t rejections = 0;
  std::uint64_t team_decisions = 0;  // round verdicts
  std::uint64_t wrong_votes = 0;     // round verdicts against ground truth
  std::uint64_t terminations = 0;
  std::uint64_t active_rings = 0;
  std::uint64_t active_fractals = 0;
  Ara payouts;
  Ara burned;
  // Sum over ring members of the per-round penalty fraction charged in
  // dissatisfied rounds, in ppm; feeds the penalty-decay comparison.
  std::uint64_t penalty_fraction_ppm = 0;
  std::map<std::uint32_t, std::uint64_t> ring_sizes_started;
  double mean_degree = 0.0;  // live-structure census after submissions
  std::uint64_t team_fractal_overlap = 0;  // VT members inside their own fractal
};

// Deterministic single-trial protocol engine. All randomness flows through
// one hash-draw stream in a fixed order, so a config (including its seed)
// fully determines the trace.
class Engine {
 public:
  Engine(const SimConfig& config, std::ostream* event_sink = nullptr);

  // Runs `config.checkpoints` full checkpoints plus a closing settlement
  // boundary.
  void run();

  // One checkpoint process: submissions, settlements, leftover sweep,
  // sanction bookkeeping, then next-epoch agent activity.
  void run_checkpoint_process();

  // One round process over every active ring.
  std::vector<RoundOutcome> run_round();

  const Tcb& tcb() const { return tcb_; }
  Tcb& tcb_mut() { return tcb_; }
  const Clock& clock() const { return clock_; }
  const std::vector<CheckpointStats>& stats() const { return stats_; }

  const std::set<TraderId>& attacker_identities() const { return attackers_; }
  Ara attacker_spend() const { return attacker_spend_; }
  std::uint64_t sybil_identities() const { return sybils_created_; }
  std::uint64_t postponements() const { return postponements_; }
  const std::map<std::uint64_t, std::uint64_t>& final_degree_histogram() const {
    return degree_histogram_;
  }
  // (original, clone) of the double-submission script; zero ids when unused.
  std::pair<FractalId, FractalId> double_submit_pair() const {
    return double_submit_pair_;
  }

  // Checkpoint at which a trader may create submitted fractals again;
  // zero when unbarred.
  std::uint64_t barred_until(TraderId t) const;

 private:
  void genesis();
  void inject_attack_plans();
  void submit_phase();
  void settle_phase();
  void sanction_phase();
  void agent_phase();
  void agent_phase_catalog();
  void agent_phase_permutation();
  void propose_fractals();
  void census_phase();
  bool is_wrongdoer(TraderId t) const;
  std::uint32_t rounds_for_service(const ServiceSpec& spec) const;

  SimConfig cfg_;
  Tcb tcb_;
  rng::HashDraw stream_;
  Clock clock_;
  std::vector<CheckpointStats> stats_;
  CheckpointStats* current_ = nullptr;

  // (fractal, ring) pairs still producing rounds, in deterministic order.
  std::vector<std::pair<FractalId, RingId>> active_;
  std::map<TraderId, std::uint64_t> barred_until_;
  std::set<TraderId> disagreed_this_window_;

  std::set<TraderId> attackers_;
  Ara attacker_spend_;
  std::uint64_t sybils_created_ = 0;
  std::uint64_t postponements_ = 0;
  bool double_submit_done_ = false;
  std::pair<FractalId, FractalId> double_submit_pair_{};
  std::map<std::uint64_t, std::uint64_t> degree_histogram_;
};

}  // namespace lor
