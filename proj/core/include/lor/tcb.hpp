#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "lor/ara.hpp"
#include "lor/coin.hpp"
#include "lor/config.hpp"
#include "lor/event_log.hpp"
#include "lor/ids.hpp"
#include "lor/penalty.hpp"
#include "lor/ring.hpp"
#include "lor/trader.hpp"

namespace lor {

// One ring's view of one round, as recorded by the verification team.
struct RoundRecord {
  std::uint64_t checkpoint = 0;
  std::uint32_t round = 0;
  bool satisfied = true;      // ground truth: nobody complained
  bool team_decision = true;  // majority verdict
  std::vector<TraderId> dissenters;
};

// Rcb cell: everything a verification team keeps about one ring.
struct RingRecord {
  RingId ring;
  std::vector<RoundRecord> rounds;
  std::uint32_t dissatisfied_rounds = 0;
  bool settled = false;
  // Window index in which the ring finished or terminated; unset while
  // running. Settlement is due at the following checkpoint.
  std::optional<std::uint64_t> done_at;
  std::map<TraderId, Ara> payouts;
};

struct Rcb {
  FractalId fractal;
  std::map<RingId, RingRecord> rings;
};

// The deliberate mutual-wait structure among a ring's members.
struct LockGraph {
  std::vector<std::pair<TraderId, TraderId>> edges;  // waiter -> waited-on
  std::map<CoinId, TraderId> custody;                // mirrors bind_on
};

enum class LedgerError : std::uint8_t {
  none,
  insufficient_balance,
  unknown_coin_type,
  non_multiple_amount,
  below_entrance_minimum,
  seller_underfunded,
  unknown_trader,
};

std::string_view to_string(LedgerError e);

template <class T>
struct LedgerResult {
  std::optional<T> value;
  LedgerError error = LedgerError::none;

  bool ok() const { return value.has_value(); }
  const T& operator*() const { return *value; }
};

enum class RejectReason : std::uint8_t {
  none,
  vote_rejected,
  double_submission,
  bad_weight,
  coin_not_run,
  late_broadcast,
  invalid_record,
  barred_creator,
};

std::string_view to_string(RejectReason r);

struct SubmitResult {
  FractalStatus status = FractalStatus::Rejected;
  RejectReason reason = RejectReason::none;
};

struct SettleReport {
  std::vector<RingId> settled;
  std::vector<RingId> postponed;
  Ara paid;
  Ara burned;
  Ara minted_bonus;
};

// The traders-control-block: every table of the system plus the submission
// gate. All mutation flows through the methods below in a single total
// order; the event log records each command.
class Tcb {
 public:
  explicit Tcb(std::vector<ServiceSpec> catalog);

  // --- genesis & entrance ---------------------------------------------

  // Mints `balance` for a brand-new trader; only used while seeding an
  // instance, counted into the genesis total.
  TraderId genesis_trader(Ara balance, bool reliable);

  // Rule-7 entrance: the newcomer buys `amount` from `seller`. Pure
  // transfer, global ARA unchanged.
  LedgerResult<TraderId> entrance(Ara amount, TraderId seller,
                                  std::uint64_t checkpoint);

  // --- coins & rings ----------------------------------------------------

  // Converts balance into a fresh Run coin; `amount` must be a positive
  // multiple of the service's unit price.
  LedgerResult<CoinId> request_coin(TraderId trader, CoinType type, Ara amount,
                                    std::uint64_t checkpoint);

  // Records an assembled (not yet proposed) ring. Coins stay Run.
  void register_ring(const CooperationRing& ring);

  // Records a proposed fractal and removes its rings from the open pool.
  void register_fractal(const FractalRing& fractal);

  // Runs the verification checks a team performs before voting: broadcast
  // before this checkpoint, coin records valid, weight recomputation, all
  // coins Run, no ring already submitted.
  RejectReason audit_fractal(FractalId fractal, std::uint64_t checkpoint) const;

  // Applies a submission decision. On majority approval with a clean audit
  // the rings enter submitted_rings atomically and their coins lock;
  // otherwise the fractal dies and its rings return to the pool.
  SubmitResult submit_fractal(FractalId fractal,
                              const std::vector<std::pair<TraderId, bool>>& votes,
                              std::uint64_t checkpoint,
                              bool creator_barred = false);

  // Locks every coin of a ring: worker coins bind to the investor, the
  // investment coin binds to the first worker, statuses go Blocked.
  // Returns the lock-graph delta. Throws std::logic_error if any coin is
  // not Run (double submission should have been caught upstream).
  LockGraph lock_coins(RingId ring);

  // Appends a team-recorded round outcome and advances the ring's counters.
  void record_round(FractalId fractal, const RoundRecord& record,
                    RingId ring_id);

  // Settles every due ring of a fractal (done before `checkpoint`),
  // postponing rings that still have rounds left. Fee and penalties burn;
  // bonus, when configured, mints.
  SettleReport settle_checkpoint(FractalId fractal, std::uint64_t checkpoint,
                                 std::int64_t fee_ppm,
                                 const PenaltySchedule& phi,
                                 std::int64_t bonus_ppm = 0);

  // Settles leftover Blocked coins of rings that were due before the
  // previous checkpoint but never settled (their team failed): each coin is
  // Paid at face value to its owner.
  SettleReport settle_leftovers(std::uint64_t checkpoint);

  // --- queries ------------------------------------------------------------

  const std::map<TraderId, Trader>& traders() const { return traders_; }
  const std::map<CoinId, Coin>& coins() const { return coins_; }
  const std::map<RingId, CooperationRing>& rings() const { return rings_; }
  const std::map<FractalId, FractalRing>& fractals() const { return fractals_; }
  const std::map<FractalId, Rcb>& rcbs() const { return rcbs_; }
  const std::set<RingId>& submitted_rings() const { return submitted_rings_; }
  const std::set<RingId>& open_rings() const { return open_rings_; }
  const LockGraph& locks() const { return locks_; }
  const std::vector<ServiceSpec>& catalog() const { return catalog_; }

  const Trader& trader(TraderId id) const;
  const Coin& coin(CoinId id) const;
  const CooperationRing& ring(RingId id) const;
  const FractalRing& fractal(FractalId id) const;

  std::optional<ServiceSpec> service(std::uint32_t id) const;
  Ara cheapest_price() const;

  Ara total_genesis() const { return total_genesis_; }
  Ara total_minted() const { return minted_; }
  Ara total_burned() const { return burned_; }

  // Sum of balances plus circulating (Run/Blocked) coin value minus
  // (genesis + minted - burned); zero whenever the ledger is consistent.
  Ara conservation_residual() const;

  // Ring ids assembled but not proposed into any live fractal.
  std::vector<RingId> pool_snapshot() const;

  IdAllocator<TraderId>& trader_ids() { return trader_ids_; }
  IdAllocator<CoinId>& coin_ids() { return coin_ids_; }
  IdAllocator<RingId>& ring_ids() { return ring_ids_; }
  IdAllocator<FractalId>& fractal_ids() { return fractal_ids_; }

  EventLog& log() { return log_; }

  // Test hook: overwrite a stored ring weight to exercise audit failures.
  void corrupt_ring_weight(RingId id, Ara weight);

 private:
  Trader& trader_mut(TraderId id);
  void settle_ring(FractalRing& fractal, CooperationRing& ring, RingRecord& record,
                   std::int64_t fee_ppm, const PenaltySchedule& phi,
                   std::int64_t bonus_ppm, SettleReport& report);
  void maybe_mark_settled(FractalRing& fractal);

  std::vector<ServiceSpec> catalog_;
  std::map<TraderId, Trader> traders_;
  std::map<CoinId, Coin> coins_;
  std::map<RingId, CooperationRing> rings_;
  std::map<FractalId, FractalRing> fractals_;
  std::map<FractalId, Rcb> rcbs_;
  std::set<RingId> submitted_rings_;
  std::set<RingId> open_rings_;  // assembled, not in a live fractal
  LockGraph locks_;

  Ara total_genesis_;
  Ara minted_;
  Ara burned_;

  IdAllocator<TraderId> trader_ids_;
  IdAllocator<CoinId> coin_ids_;
  IdAllocator<RingId> ring_ids_;
  IdAllocator<FractalId> fractal_ids_;

  EventLog log_;
};

}  // namespace lor
