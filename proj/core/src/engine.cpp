#include "lor/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "lor/analytics.hpp"

namespace lor {

WrongdoerAction wrongdoer_round_action(const AdversaryPolicy& policy,
                                       rng::HashDraw& state) {
  if (state.bernoulli(policy.withhold_service_prob)) return WrongdoerAction::withhold;
  if (state.bernoulli(policy.false_dissent_prob)) return WrongdoerAction::false_dissent;
  return WrongdoerAction::serve;
}

Engine::Engine(const SimConfig& config, std::ostream* event_sink)
    : cfg_(config),
      tcb_(config.service_catalog),
      stream_(rng::HashDraw::from_seed(config.seed)) {
  const std::string problem = cfg_.validate();
  if (!problem.empty()) throw std::invalid_argument("SimConfig: " + problem);
  tcb_.log().attach(event_sink);
  genesis();
}

void Engine::genesis() {
  tcb_.log().set_clock(0, -1);
  for (std::uint64_t i = 0; i < cfg_.trader_count; ++i) {
    bool reliable = !stream_.bernoulli(cfg_.alpha);
    // Scenario runs pin trader 1 as the attacker-controlled identity.
    if (i == 0 && cfg_.attack != AttackScenario::none) reliable = false;
    const TraderId id = tcb_.genesis_trader(cfg_.genesis_balance, reliable);
    if (i == 0 && cfg_.attack != AttackScenario::none) attackers_.insert(id);
  }
}

bool Engine::is_wrongdoer(TraderId t) const { return !tcb_.trader(t).reliable; }

std::uint32_t Engine::rounds_for_service(const ServiceSpec& spec) const {
  return spec.rounds_factor * cfg_.rounds_r;
}

std::uint64_t Engine::barred_until(TraderId t) const {
  auto it = barred_until_.find(t);
  return it == barred_until_.end() ? 0 : it->second;
}

void Engine::run() {
  for (std::uint64_t t = 0; t < cfg_.checkpoints; ++t) {
    clock_.checkpoint_index = t;
    run_checkpoint_process();
    for (std::uint32_t r = 0; r < cfg_.rounds_r; ++r) {
      clock_.round_index = r;
      tcb_.log().set_clock(t, static_cast<std::int32_t>(r));
      run_round();
    }
  }
  if (cfg_.checkpoints == 0) return;
  // Closing boundary: settle the final window so no due coin stays Blocked.
  clock_.checkpoint_index = cfg_.checkpoints;
  tcb_.log().set_clock(cfg_.checkpoints, -1);
  current_ = &stats_.back();
  settle_phase();
}

void Engine::run_checkpoint_process() {
  const std::uint64_t t = clock_.checkpoint_index;
  tcb_.log().set_clock(t, -1);
  current_ = &stats_.emplace_back();
  current_->checkpoint = t;
  tcb_.log().emit("checkpoint", "index=" + std::to_string(t));

  submit_phase();
  settle_phase();
  sanction_phase();
  agent_phase();
  census_phase();
}

void Engine::submit_phase() {
  const std::uint64_t t = clock_.checkpoint_index;
  std::vector<FractalId> proposed;
  for (const auto& [fid, fr] : tcb_.fractals()) {
    if (fr.status == FractalStatus::Proposed) proposed.push_back(fid);
  }
  for (FractalId fid : proposed) {
    const FractalRing& fr = tcb_.fractal(fid);
    const auto bar = barred_until_.find(fr.creator);
    const bool creator_barred =
        bar != barred_until_.end() && bar->second >= t;
    const bool valid = tcb_.audit_fractal(fid, t) == RejectReason::none;

    // Submission checks audit objective table records, so every member's
    // vote reports the audit outcome; a vote contradicting a re-derivable
    // record would expose the voter. Misvoting enters through the
    // subjective per-round satisfaction verdicts instead.
    std::vector<std::pair<TraderId, bool>> votes;
    votes.reserve(fr.team.members.size());
    for (TraderId member : fr.team.members) votes.emplace_back(member, valid);

    const SubmitResult result = tcb_.submit_fractal(fid, votes, t, creator_barred);
    if (result.status == FractalStatus::Submitted) {
      ++current_->submissions;
      for (RingId rid : fr.ring_ids) {
        active_.emplace_back(fid, rid);
        ++current_->ring_sizes_started[tcb_.ring(rid).member_count];
      }
    } else {
      ++current_->rejections;
    }
  }
}

void Engine::settle_phase() {
  const std::uint64_t t = clock_.checkpoint_index;
  std::vector<FractalId> submitted;
  for (const auto& [fid, fr] : tcb_.fractals()) {
    if (fr.status == FractalStatus::Submitted) submitted.push_back(fid);
  }
  for (FractalId fid : submitted) {
    const SettleReport report = tcb_.settle_checkpoint(fid, t, cfg_.fee_ppm,
                                                       cfg_.phi, cfg_.bonus_ppm);
    current_->payouts += report.paid;
    current_->burned += report.burned;
    postponements_ += report.postponed.size();
  }
  const SettleReport leftovers = tcb_.settle_leftovers(t);
  current_->payouts += leftovers.paid;
}

void Engine::sanction_phase() {
  const std::uint64_t t = clock_.checkpoint_index;
  for (TraderId trader : disagreed_this_window_) {
    barred_until_[trader] = t + 2;
    std::ostringstream os;
    os << "trader=" << trader.value << ";until=" << (t + 2);
    tcb_.log().emit("bar_set", os.str());
  }
  disagreed_this_window_.clear();
}

void Engine::agent_phase() {
  if (clock_.checkpoint_index == cfg_.attack_checkpoint) inject_attack_plans();
  if (cfg_.ring_model == RingModel::catalog) {
    agent_phase_catalog();
  } else {
    agent_phase_permutation();
  }
  propose_fractals();
}

void Engine::inject_attack_plans() {
  const std::uint64_t t = clock_.checkpoint_index;
  if (cfg_.attack == AttackScenario::sybil_flood) {
    const Ara cheapest = tcb_.cheapest_price();
    const TraderId attacker = *attackers_.begin();
    Ara remaining = cfg_.adversary.sybil_budget;
    while (remaining >= cheapest && tcb_.trader(attacker).balance >= cheapest) {
      const auto result = tcb_.entrance(cheapest, attacker, t);
      if (!result.ok()) break;
      attackers_.insert(*result);
      remaining -= cheapest;
      attacker_spend_ += cheapest;
      ++sybils_created_;
    }
    std::ostringstream os;
    os << "scenario=sybil_flood;identities=" << sybils_created_;
    tcb_.log().emit("attack", os.str());
  }
}

void Engine::agent_phase_catalog() {
  const std::uint64_t t = clock_.checkpoint_index;

  // Coin requests: every trader tops up to ell live coins.
  for (const auto& [tid, trader] : tcb_.traders()) {
    const bool attacker = attackers_.contains(tid);
    if (attacker && (cfg_.attack == AttackScenario::resource_theft ||
                     cfg_.attack == AttackScenario::sybil_flood)) {
      continue;  // theft/flood identities never buy coins
    }
    std::uint64_t outstanding = 0;
    for (CoinId cid : trader.coins_owned) {
      if (!is_terminal(tcb_.coin(cid).status)) ++outstanding;
    }
    for (std::uint64_t k = outstanding; k < cfg_.ell; ++k) {
      ServiceSpec spec = cfg_.service_catalog[static_cast<std::size_t>(
          stream_.draw(cfg_.service_catalog.size()))];
      const double mean_size = (spec.ring_min + spec.ring_max) / 2.0;
      bool invest = stream_.bernoulli(1.0 / mean_size);
      if (attacker && cfg_.attack == AttackScenario::long_delay) {
        // The attacker pushes long cooperation: always invests in the
        // slowest service.
        for (const auto& s : cfg_.service_catalog) {
          if (s.rounds_factor > spec.rounds_factor) spec = s;
        }
        invest = true;
      }
      if (tcb_.trader(tid).balance < spec.unit_price) break;
      const auto result =
          tcb_.request_coin(tid, CoinType{spec.id, invest}, spec.unit_price, t);
      if (!result.ok()) break;
    }
  }

  // Ring assembly around each idle investment coin.
  std::set<CoinId> assigned;
  for (const auto& [rid, ring] : tcb_.rings()) {
    for (CoinId cid : ring.coin_ids) assigned.insert(cid);
  }
  std::vector<Coin> worker_pool;
  std::vector<CoinId> idle_investments;
  for (const auto& [cid, coin] : tcb_.coins()) {
    if (coin.status != CoinStatus::Run || assigned.contains(cid)) continue;
    if (coin.coin_type.is_investment) {
      idle_investments.push_back(cid);
    } else {
      worker_pool.push_back(coin);
    }
  }
  for (CoinId inv_id : idle_investments) {
    const Coin& inv = tcb_.coin(inv_id);
    const auto spec = tcb_.service(inv.coin_type.service);
    std::uint32_t size = spec->ring_min;
    if (spec->ring_max > spec->ring_min)
      size += static_cast<std::uint32_t>(
          stream_.draw(spec->ring_max - spec->ring_min + 1));
    const RingId rid = tcb_.ring_ids().next();
    auto ring = rng::assemble_cooperation_ring(rid, inv, worker_pool, size,
                                               rounds_for_service(*spec), stream_);
    if (!ring) continue;  // starved; the coin waits for a richer pool
    tcb_.register_ring(*ring);
    std::set<CoinId> used(ring->coin_ids.begin(), ring->coin_ids.end());
    std::erase_if(worker_pool, [&](const Coin& c) { return used.contains(c.id); });
  }
}

void Engine::agent_phase_permutation() {
  const std::uint64_t t = clock_.checkpoint_index;
  const ServiceSpec& spec = cfg_.service_catalog.front();
  const std::uint32_t rounds_total = rounds_for_service(spec);

  for (std::uint32_t slice = 0; slice < cfg_.ell; ++slice) {
    std::vector<TraderId> participants;
    for (const auto& [tid, trader] : tcb_.traders()) {
      if (attackers_.contains(tid) &&
          (cfg_.attack == AttackScenario::resource_theft ||
           cfg_.attack == AttackScenario::sybil_flood))
        continue;
      if (trader.balance >= spec.unit_price) participants.push_back(tid);
    }
    if (participants.size() < 2) return;
    const auto perm = analytics::random_permutation(
        static_cast<std::uint32_t>(participants.size()), stream_);

    std::vector<bool> seen(perm.size(), false);
    for (std::uint32_t start = 0; start < perm.size(); ++start) {
      if (seen[start]) continue;
      std::vector<std::uint32_t> cycle;
      std::uint32_t at = start;
      while (!seen[at]) {
        seen[at] = true;
        cycle.push_back(at);
        at = perm[at];
      }
      if (cycle.size() < 2) continue;  // fixed point: idle this slice

      CooperationRing ring;
      ring.id = tcb_.ring_ids().next();
      ring.investor = participants[cycle.front()];
      ring.rounds_total = rounds_total;
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        const TraderId member = participants[cycle[i]];
        const auto coin = tcb_.request_coin(member, CoinType{spec.id, i == 0},
                                            spec.unit_price, t);
        if (!coin.ok()) throw std::logic_error("permutation agent underfunded");
        ring.coin_ids.push_back(*coin);
        ring.weight += spec.unit_price;
      }
      ring.member_count = static_cast<std::uint32_t>(ring.coin_ids.size());
      tcb_.register_ring(ring);
    }
  }
}

void Engine::propose_fractals() {
  std::vector<TraderId> all_traders;
  for (const auto& [tid, trader] : tcb_.traders()) all_traders.push_back(tid);

  FractalId first_new{};
  while (true) {
    const std::vector<RingId> pool_ids = tcb_.pool_snapshot();
    if (pool_ids.size() < cfg_.fractal_min) break;
    std::uint32_t target =
        rng::fractal_size(stream_, cfg_.fractal_min, cfg_.fractal_max);
    target = std::min<std::uint32_t>(
        target, static_cast<std::uint32_t>(pool_ids.size()));
    std::vector<const CooperationRing*> pool;
    pool.reserve(pool_ids.size());
    for (RingId rid : pool_ids) pool.push_back(&tcb_.ring(rid));

    const auto ordered =
        rng::assemble_fractal_ring(pool_ids.front(), pool, target, stream_);
    const FractalId fid = tcb_.fractal_ids().next();
    FractalRing fr;
    fr.id = fid;
    fr.ring_ids = *ordered;
    fr.creator = tcb_.ring(pool_ids.front()).investor;
    fr.team = rng::select_verification_team(fid, all_traders, cfg_.kappa, stream_);
    tcb_.register_fractal(fr);
    if (first_new == FractalId{}) first_new = fid;
  }

  // Double-spend script: clone the first proposal of this checkpoint so the
  // same rings ride two fractals into the submission gate.
  if (cfg_.attack == AttackScenario::double_spend && !double_submit_done_ &&
      clock_.checkpoint_index >= cfg_.attack_checkpoint &&
      first_new != FractalId{}) {
    const FractalRing& original = tcb_.fractal(first_new);
    FractalRing clone;
    clone.id = tcb_.fractal_ids().next();
    clone.ring_ids = original.ring_ids;
    clone.creator = *attackers_.begin();
    clone.team =
        rng::select_verification_team(clone.id, all_traders, cfg_.kappa, stream_);
    tcb_.register_fractal(clone);
    double_submit_done_ = true;
    double_submit_pair_ = {first_new, clone.id};
    std::ostringstream os;
    os << "scenario=double_spend;original=" << original.id.value
       << ";clone=" << clone.id.value;
    tcb_.log().emit("attack", os.str());
  }
}

std::vector<RoundOutcome> Engine::run_round() {
  std::vector<RoundOutcome> outcomes;
  std::vector<std::pair<FractalId, RingId>> still_active;
  still_active.reserve(active_.size());

  for (const auto& [fid, rid] : active_) {
    const FractalRing& fr = tcb_.fractal(fid);
    const CooperationRing& ring = tcb_.ring(rid);

    std::vector<TraderId> members;
    members.reserve(ring.coin_ids.size());
    for (CoinId cid : ring.coin_ids) members.push_back(tcb_.coin(cid).owner);

    bool any_withhold = false;
    std::vector<TraderId> dissenters;
    for (TraderId member : members) {
      if (!is_wrongdoer(member)) continue;
      switch (wrongdoer_round_action(cfg_.adversary, stream_)) {
        case WrongdoerAction::withhold:
          any_withhold = true;
          break;
        case WrongdoerAction::false_dissent:
          dissenters.push_back(member);
          break;
        case WrongdoerAction::serve:
          break;
      }
    }
    if (any_withhold) {
      for (TraderId member : members) {
        if (!is_wrongdoer(member)) dissenters.push_back(member);
      }
    }
    std::sort(dissenters.begin(), dissenters.end());
    dissenters.erase(std::unique(dissenters.begin(), dissenters.end()),
                     dissenters.end());
    const bool satisfied = dissenters.empty();

    std::size_t approvals = 0;
    std::vector<std::pair<TraderId, bool>> votes;
    votes.reserve(fr.team.members.size());
    for (TraderId member : fr.team.members) {
      bool vote = satisfied;
      if (is_wrongdoer(member) && stream_.bernoulli(cfg_.adversary.vt_misvote_prob))
        vote = !satisfied;
      votes.emplace_back(member, vote);
      approvals += vote ? 1 : 0;
    }
    const bool team_decision = 2 * approvals > fr.team.members.size();
    for (const auto& [member, vote] : votes) {
      if (vote != team_decision) disagreed_this_window_.insert(member);
    }

    ++current_->team_decisions;
    if (team_decision != satisfied) ++current_->wrong_votes;

    RoundRecord record;
    record.checkpoint = clock_.checkpoint_index;
    record.round = clock_.round_index;
    record.satisfied = satisfied;
    record.team_decision = team_decision;
    record.dissenters = dissenters;

    std::ostringstream os;
    os << "ring=" << rid.value << ";satisfied=" << (satisfied ? 1 : 0)
       << ";team=" << (team_decision ? 1 : 0)
       << ";dissenters=" << dissenters.size();
    tcb_.log().emit("round_outcome", os.str());
    tcb_.record_round(fid, record, rid);

    if (!satisfied || !team_decision) {
      const std::int64_t phi_ppm =
          cfg_.phi.value_ppm(ring.member_count, ring.rounds_total);
      current_->penalty_fraction_ppm +=
          static_cast<std::uint64_t>(phi_ppm) * ring.member_count;
    }
    if (!team_decision) {
      ++current_->terminations;
    } else if (tcb_.ring(rid).rounds_completed < ring.rounds_total) {
      still_active.emplace_back(fid, rid);
    }

    outcomes.push_back(RoundOutcome{rid, satisfied, dissenters, team_decision});
  }

  active_ = std::move(still_active);
  return outcomes;
}

void Engine::census_phase() {
  // Live-structure census: degree contributions from submitted, unsettled
  // fractals and their still-active rings.
  std::map<TraderId, std::uint64_t> degree;
  std::uint64_t active_fractals = 0;

  std::map<FractalId, std::uint64_t> fractal_mass;
  std::map<TraderId, std::uint64_t> ring_memberships;
  std::map<FractalId, std::set<TraderId>> fractal_traders;
  for (const auto& [fid, rid] : active_) {
    const CooperationRing& ring = tcb_.ring(rid);
    fractal_mass[fid] += ring.member_count;
    for (CoinId cid : ring.coin_ids) {
      const TraderId owner = tcb_.coin(cid).owner;
      ++ring_memberships[owner];
      fractal_traders[fid].insert(owner);
    }
  }
  for (const auto& [tid, count] : ring_memberships) degree[tid] += 2 * count;

  for (const auto& [fid, fr] : tcb_.fractals()) {
    if (fr.status != FractalStatus::Submitted) continue;
    auto mass = fractal_mass.find(fid);
    if (mass == fractal_mass.end()) continue;  // nothing active anymore
    ++active_fractals;
    for (TraderId member : fr.team.members) {
      degree[member] += cfg_.kappa - 1 + mass->second;
      if (fractal_traders[fid].contains(member)) ++current_->team_fractal_overlap;
    }
  }

  std::uint64_t total = 0;
  degree_histogram_.clear();
  std::uint64_t nonzero = 0;
  for (const auto& [tid, d] : degree) {
    total += d;
    ++degree_histogram_[d];
    ++nonzero;
  }
  degree_histogram_[0] += tcb_.traders().size() - nonzero;
  current_->mean_degree =
      static_cast<double>(total) / static_cast<double>(cfg_.trader_count);
  current_->active_rings = active_.size();
  current_->active_fractals = active_fractals;
}

}  // namespace lor
