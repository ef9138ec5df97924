#include "lor/tcb.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lor {

std::string_view to_string(LedgerError e) {
  switch (e) {
    case LedgerError::none: return "none";
    case LedgerError::insufficient_balance: return "insufficient balance";
    case LedgerError::unknown_coin_type: return "unknown coin type";
    case LedgerError::non_multiple_amount: return "amount not a unit multiple";
    case LedgerError::below_entrance_minimum: return "below entrance minimum";
    case LedgerError::seller_underfunded: return "seller underfunded";
    case LedgerError::unknown_trader: return "unknown trader";
  }
  return "?";
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::vote_rejected: return "vote rejected";
    case RejectReason::double_submission: return "double submission";
    case RejectReason::bad_weight: return "bad weight";
    case RejectReason::coin_not_run: return "coin not run";
    case RejectReason::late_broadcast: return "late broadcast";
    case RejectReason::invalid_record: return "invalid record";
    case RejectReason::barred_creator: return "barred creator";
  }
  return "?";
}

Tcb::Tcb(std::vector<ServiceSpec> catalog) : catalog_(std::move(catalog)) {
  if (catalog_.empty()) throw std::invalid_argument("Tcb: empty service catalog");
}

TraderId Tcb::genesis_trader(Ara balance, bool reliable) {
  if (balance.is_negative()) throw std::invalid_argument("genesis: negative balance");
  const TraderId id = trader_ids_.next();
  Trader t;
  t.id = id;
  t.balance = balance;
  t.reliable = reliable;
  t.joined_at = 0;
  traders_.emplace(id, std::move(t));
  total_genesis_ += balance;
  std::ostringstream os;
  os << "trader=" << id.value << ";balance=" << balance.str()
     << ";reliable=" << (reliable ? 1 : 0);
  log_.emit("genesis", os.str());
  return id;
}

LedgerResult<TraderId> Tcb::entrance(Ara amount, TraderId seller,
                                     std::uint64_t checkpoint) {
  auto it = traders_.find(seller);
  if (it == traders_.end()) return {std::nullopt, LedgerError::unknown_trader};
  if (amount < cheapest_price())
    return {std::nullopt, LedgerError::below_entrance_minimum};
  if (it->second.balance < amount)
    return {std::nullopt, LedgerError::seller_underfunded};

  it->second.balance -= amount;
  const TraderId id = trader_ids_.next();
  Trader t;
  t.id = id;
  t.balance = amount;
  t.reliable = true;
  t.joined_at = checkpoint;
  traders_.emplace(id, std::move(t));
  std::ostringstream os;
  os << "trader=" << id.value << ";seller=" << seller.value
     << ";amount=" << amount.str();
  log_.emit("entrance", os.str());
  return {id, LedgerError::none};
}

LedgerResult<CoinId> Tcb::request_coin(TraderId trader, CoinType type,
                                       Ara amount, std::uint64_t checkpoint) {
  auto it = traders_.find(trader);
  if (it == traders_.end()) return {std::nullopt, LedgerError::unknown_trader};
  const auto spec = service(type.service);
  if (!spec) return {std::nullopt, LedgerError::unknown_coin_type};
  if (!amount.is_positive() || amount.micro() % spec->unit_price.micro() != 0)
    return {std::nullopt, LedgerError::non_multiple_amount};
  if (it->second.balance < amount)
    return {std::nullopt, LedgerError::insufficient_balance};

  it->second.balance -= amount;
  const CoinId id = coin_ids_.next();
  Coin coin;
  coin.id = id;
  coin.amount = amount;
  coin.status = CoinStatus::Run;
  coin.coin_type = type;
  coin.owner = trader;
  coin.broadcast_checkpoint = checkpoint;
  coins_.emplace(id, std::move(coin));
  it->second.coins_owned.insert(id);
  std::ostringstream os;
  os << "coin=" << id.value << ";trader=" << trader.value
     << ";service=" << type.service << ";inv=" << (type.is_investment ? 1 : 0)
     << ";amount=" << amount.str();
  log_.emit("request_coin", os.str());
  return {id, LedgerError::none};
}

void Tcb::register_ring(const CooperationRing& ring) {
  if (rings_.contains(ring.id)) throw std::logic_error("ring id reused");
  rings_.emplace(ring.id, ring);
  open_rings_.insert(ring.id);
  std::ostringstream os;
  os << "ring=" << ring.id.value << ";investor=" << ring.investor.value
     << ";size=" << ring.member_count << ";weight=" << ring.weight.str();
  log_.emit("ring_assembled", os.str());
}

void Tcb::register_fractal(const FractalRing& fractal) {
  if (fractals_.contains(fractal.id)) throw std::logic_error("fractal id reused");
  for (RingId r : fractal.ring_ids) {
    if (!rings_.contains(r)) throw std::logic_error("fractal references unknown ring");
    open_rings_.erase(r);
  }
  fractals_.emplace(fractal.id, fractal);
  std::ostringstream os;
  os << "fractal=" << fractal.id.value << ";creator=" << fractal.creator.value
     << ";rings=";
  for (std::size_t i = 0; i < fractal.ring_ids.size(); ++i)
    os << (i ? "," : "") << fractal.ring_ids[i].value;
  os << ";team=";
  for (std::size_t i = 0; i < fractal.team.members.size(); ++i)
    os << (i ? "," : "") << fractal.team.members[i].value;
  log_.emit("fractal_proposed", os.str());
}

RejectReason Tcb::audit_fractal(FractalId fractal_id,
                                std::uint64_t checkpoint) const {
  const FractalRing& fr = fractal(fractal_id);
  for (RingId ring_id : fr.ring_ids) {
    const CooperationRing& r = ring(ring_id);
    if (submitted_rings_.contains(ring_id)) return RejectReason::double_submission;
    if (r.member_count != r.coin_ids.size() || r.member_count < 2)
      return RejectReason::invalid_record;

    Ara recomputed;
    std::set<TraderId> owners;
    std::uint32_t investments = 0;
    for (CoinId cid : r.coin_ids) {
      auto it = coins_.find(cid);
      if (it == coins_.end()) return RejectReason::invalid_record;
      const Coin& c = it->second;
      if (c.status != CoinStatus::Run) return RejectReason::coin_not_run;
      if (c.broadcast_checkpoint >= checkpoint) return RejectReason::late_broadcast;
      if (validate_coin(c) != CoinViolation::none) return RejectReason::invalid_record;
      if (!trader(c.owner).coins_owned.contains(cid))
        return RejectReason::invalid_record;
      if (!owners.insert(c.owner).second) return RejectReason::invalid_record;
      investments += c.coin_type.is_investment ? 1 : 0;
      recomputed += c.amount;
    }
    if (investments != 1) return RejectReason::invalid_record;
    if (recomputed != r.weight) return RejectReason::bad_weight;
  }
  return RejectReason::none;
}

SubmitResult Tcb::submit_fractal(
    FractalId fractal_id, const std::vector<std::pair<TraderId, bool>>& votes,
    std::uint64_t checkpoint, bool creator_barred) {
  FractalRing& fr = fractals_.at(fractal_id);
  if (fr.status != FractalStatus::Proposed)
    throw std::logic_error("submit_fractal: fractal not in Proposed state");

  auto reject = [&](RejectReason reason) {
    fr.status = FractalStatus::Rejected;
    // The fractal id is dead; its rings go back to the open pool untouched.
    for (RingId r : fr.ring_ids) open_rings_.insert(r);
    std::ostringstream os;
    os << "fractal=" << fractal_id.value << ";reason=" << to_string(reason);
    log_.emit("fractal_rejected", os.str());
    return SubmitResult{FractalStatus::Rejected, reason};
  };

  if (creator_barred) return reject(RejectReason::barred_creator);

  std::size_t approvals = 0;
  for (const auto& [member, approve] : votes) approvals += approve ? 1 : 0;
  const bool majority = 2 * approvals > fr.team.members.size();

  const RejectReason audit = audit_fractal(fractal_id, checkpoint);
  if (audit != RejectReason::none) return reject(audit);
  if (!majority) return reject(RejectReason::vote_rejected);

  fr.status = FractalStatus::Submitted;
  Rcb rcb;
  rcb.fractal = fractal_id;
  for (RingId r : fr.ring_ids) {
    submitted_rings_.insert(r);
    RingRecord record;
    record.ring = r;
    rcb.rings.emplace(r, std::move(record));
  }
  rcbs_.emplace(fractal_id, std::move(rcb));
  for (RingId r : fr.ring_ids) lock_coins(r);
  std::ostringstream os;
  os << "fractal=" << fractal_id.value << ";rings=" << fr.ring_ids.size();
  log_.emit("fractal_submitted", os.str());
  return SubmitResult{FractalStatus::Submitted, RejectReason::none};
}

LockGraph Tcb::lock_coins(RingId ring_id) {
  CooperationRing& r = rings_.at(ring_id);
  for (CoinId cid : r.coin_ids) {
    if (coins_.at(cid).status != CoinStatus::Run)
      throw std::logic_error("lock_coins: coin not Run (double submission upstream)");
  }

  LockGraph delta;
  const std::size_t size = r.coin_ids.size();
  TraderId first_worker;
  for (std::size_t i = 0; i < size; ++i) {
    const Coin& c = coins_.at(r.coin_ids[i]);
    if (!c.coin_type.is_investment && first_worker == TraderId{}) {
      first_worker = c.owner;
    }
  }

  for (std::size_t i = 0; i < size; ++i) {
    Coin& c = coins_.at(r.coin_ids[i]);
    c.status = CoinStatus::Blocked;
    c.next_in_ring = r.coin_ids[(i + 1) % size];
    c.prev_in_ring = r.coin_ids[(i + size - 1) % size];
    if (c.coin_type.is_investment) {
      // The investment coin is held (conceptually partitioned) by the
      // workers; bind it to the first worker.
      c.bind_on = first_worker;
    } else {
      c.bind_on = r.investor;
      delta.edges.emplace_back(c.owner, r.investor);   // worker waits for pay
      delta.edges.emplace_back(r.investor, c.owner);   // investor waits for work
    }
    delta.custody[c.id] = *c.bind_on;
    locks_.custody[c.id] = *c.bind_on;
  }
  locks_.edges.insert(locks_.edges.end(), delta.edges.begin(), delta.edges.end());

  std::ostringstream os;
  os << "ring=" << ring_id.value << ";coins=" << size;
  log_.emit("coins_locked", os.str());
  return delta;
}

void Tcb::record_round(FractalId fractal_id, const RoundRecord& record,
                       RingId ring_id) {
  Rcb& rcb = rcbs_.at(fractal_id);
  RingRecord& rr = rcb.rings.at(ring_id);
  CooperationRing& r = rings_.at(ring_id);
  if (r.terminated || rr.done_at.has_value())
    throw std::logic_error("record_round: ring already done");

  rr.rounds.push_back(record);
  if (!record.satisfied || !record.team_decision) ++rr.dissatisfied_rounds;

  if (!record.team_decision) {
    r.terminated = true;
    rr.done_at = record.checkpoint;
    std::ostringstream os;
    os << "ring=" << ring_id.value << ";round=" << record.round;
    log_.emit("ring_terminated", os.str());
  } else {
    ++r.rounds_completed;
    if (r.rounds_completed == r.rounds_total) rr.done_at = record.checkpoint;
  }
}

SettleReport Tcb::settle_checkpoint(FractalId fractal_id, std::uint64_t checkpoint,
                                    std::int64_t fee_ppm, const PenaltySchedule& phi,
                                    std::int64_t bonus_ppm) {
  FractalRing& fr = fractals_.at(fractal_id);
  if (fr.status != FractalStatus::Submitted)
    throw std::invalid_argument("settle_checkpoint: fractal not submitted");
  Rcb& rcb = rcbs_.at(fractal_id);

  SettleReport report;
  for (RingId ring_id : fr.ring_ids) {
    RingRecord& rr = rcb.rings.at(ring_id);
    if (rr.settled) continue;
    CooperationRing& r = rings_.at(ring_id);
    if (rr.done_at.has_value() && *rr.done_at < checkpoint) {
      settle_ring(fr, r, rr, fee_ppm, phi, bonus_ppm, report);
      report.settled.push_back(ring_id);
    } else {
      // Long-term cooperation: rounds remain, payment postponed.
      report.postponed.push_back(ring_id);
      std::ostringstream os;
      os << "ring=" << ring_id.value;
      log_.emit("settlement_postponed", os.str());
    }
  }
  maybe_mark_settled(fr);
  return report;
}

void Tcb::settle_ring(FractalRing& fractal, CooperationRing& ring,
                      RingRecord& record, std::int64_t fee_ppm,
                      const PenaltySchedule& phi, std::int64_t bonus_ppm,
                      SettleReport& report) {
  const Ara weight = ring.weight;
  Ara worker_stake;
  for (CoinId cid : ring.coin_ids) {
    const Coin& c = coins_.at(cid);
    if (!c.coin_type.is_investment) worker_stake += c.amount;
  }

  const std::int64_t phi_ppm = phi.value_ppm(ring.member_count, ring.rounds_total);
  const std::int64_t penalty_ppm =
      std::min<std::int64_t>(1'000'000,
                             phi_ppm * static_cast<std::int64_t>(record.dissatisfied_rounds));

  Ara paid_total;
  Ara bonus_total;
  std::ostringstream deltas;
  for (CoinId cid : ring.coin_ids) {
    Coin& c = coins_.at(cid);
    if (c.coin_type.is_investment) {
      // The service receipt: expires into the investor's record.
      c = transition_coin(c, CoinStatus::Expired, fractal.team, fractal.id);
      locks_.custody.erase(cid);
      continue;
    }
    const Ara raw_share = weight.mul_div(c.amount.micro(), worker_stake.micro());
    const Ara entitlement = raw_share.mul_ppm(fee_ppm);
    const Ara earned = entitlement.mul_div(ring.rounds_completed, ring.rounds_total);
    const Ara penalty = entitlement.mul_ppm(penalty_ppm);
    const Ara payout = penalty < earned ? earned - penalty : Ara::zero();
    const Ara bonus = c.amount.mul_ppm(bonus_ppm);

    Trader& worker = trader_mut(c.owner);
    worker.balance += payout + bonus;
    worker.penalty_accrued += earned - payout;
    record.payouts[c.owner] = payout;
    paid_total += payout;
    bonus_total += bonus;
    c = transition_coin(c, CoinStatus::Paid, fractal.team, fractal.id);
    locks_.custody.erase(cid);
    deltas << c.owner.value << ":+" << (payout + bonus).str() << ",";
  }

  const Ara burned = weight - paid_total;
  burned_ += burned;
  minted_ += bonus_total;
  report.paid += paid_total;
  report.burned += burned;
  report.minted_bonus += bonus_total;
  record.settled = true;

  std::ostringstream os;
  os << "ring=" << ring.id.value << ";paid=" << paid_total.str()
     << ";burned=" << burned.str() << ";deltas=" << deltas.str();
  log_.emit("settle_ring", os.str());
}

SettleReport Tcb::settle_leftovers(std::uint64_t checkpoint) {
  SettleReport report;
  if (checkpoint < 2) return report;
  for (auto& [fid, fr] : fractals_) {
    if (fr.status != FractalStatus::Submitted) continue;
    Rcb& rcb = rcbs_.at(fid);
    for (RingId ring_id : fr.ring_ids) {
      RingRecord& rr = rcb.rings.at(ring_id);
      if (rr.settled || !rr.done_at.has_value()) continue;
      if (*rr.done_at >= checkpoint - 1) continue;  // not yet overdue
      // The owing team failed; pay every leftover Blocked coin at face
      // value to its owner.
      CooperationRing& r = rings_.at(ring_id);
      std::ostringstream deltas;
      for (CoinId cid : r.coin_ids) {
        Coin& c = coins_.at(cid);
        if (c.status != CoinStatus::Blocked) continue;
        c.status = CoinStatus::Paid;
        Trader& owner = trader_mut(c.owner);
        owner.balance += c.amount;
        rr.payouts[c.owner] += c.amount;
        report.paid += c.amount;
        locks_.custody.erase(cid);
        deltas << c.owner.value << ":+" << c.amount.str() << ",";
      }
      rr.settled = true;
      report.settled.push_back(ring_id);
      std::ostringstream os;
      os << "ring=" << ring_id.value << ";deltas=" << deltas.str();
      log_.emit("rule9_settle", os.str());
    }
    maybe_mark_settled(fr);
  }
  return report;
}

void Tcb::maybe_mark_settled(FractalRing& fractal) {
  if (fractal.status != FractalStatus::Submitted) return;
  const Rcb& rcb = rcbs_.at(fractal.id);
  for (const auto& [rid, rr] : rcb.rings) {
    if (!rr.settled) return;
  }
  fractal.status = FractalStatus::Settled;
  std::ostringstream os;
  os << "fractal=" << fractal.id.value;
  log_.emit("fractal_settled", os.str());
}

const Trader& Tcb::trader(TraderId id) const {
  auto it = traders_.find(id);
  if (it == traders_.end()) throw std::out_of_range("unknown trader");
  return it->second;
}

Trader& Tcb::trader_mut(TraderId id) {
  auto it = traders_.find(id);
  if (it == traders_.end()) throw std::out_of_range("unknown trader");
  return it->second;
}

const Coin& Tcb::coin(CoinId id) const {
  auto it = coins_.find(id);
  if (it == coins_.end()) throw std::out_of_range("unknown coin");
  return it->second;
}

const CooperationRing& Tcb::ring(RingId id) const {
  auto it = rings_.find(id);
  if (it == rings_.end()) throw std::out_of_range("unknown ring");
  return it->second;
}

const FractalRing& Tcb::fractal(FractalId id) const {
  auto it = fractals_.find(id);
  if (it == fractals_.end()) throw std::out_of_range("unknown fractal");
  return it->second;
}

std::optional<ServiceSpec> Tcb::service(std::uint32_t id) const {
  for (const auto& s : catalog_) {
    if (s.id == id) return s;
  }
  return std::nullopt;
}

Ara Tcb::cheapest_price() const {
  Ara cheapest = catalog_.front().unit_price;
  for (const auto& s : catalog_) cheapest = std::min(cheapest, s.unit_price);
  return cheapest;
}

Ara Tcb::conservation_residual() const {
  Ara held;
  for (const auto& [id, t] : traders_) held += t.balance;
  Ara circulating;
  for (const auto& [id, c] : coins_) {
    if (!is_terminal(c.status)) circulating += c.amount;
  }
  return held + circulating - (total_genesis_ + minted_ - burned_);
}

std::vector<RingId> Tcb::pool_snapshot() const {
  return {open_rings_.begin(), open_rings_.end()};
}

void Tcb::corrupt_ring_weight(RingId id, Ara weight) {
  rings_.at(id).weight = weight;
}

}  // namespace lor
