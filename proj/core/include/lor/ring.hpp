#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "lor/ara.hpp"
#include "lor/coin.hpp"
#include "lor/ids.hpp"

namespace lor {

// One job: an investor coin plus worker coins assembled into a cycle.
struct CooperationRing {
  RingId id;
  std::vector<CoinId> coin_ids;  // ring order; member_count == coin_ids.size()
  std::uint32_t member_count = 0;
  Ara weight;                    // sum of member coin amounts
  TraderId investor;
  std::optional<RingId> next_in_fractal;
  std::optional<RingId> prev_in_fractal;
  std::uint32_t rounds_total = 0;
  std::uint32_t rounds_completed = 0;
  bool terminated = false;
};

enum class FractalStatus : std::uint8_t { Proposed, Submitted, Rejected, Settled };

constexpr std::string_view to_string(FractalStatus s) {
  switch (s) {
    case FractalStatus::Proposed: return "Proposed";
    case FractalStatus::Submitted: return "Submitted";
    case FractalStatus::Rejected: return "Rejected";
    case FractalStatus::Settled: return "Settled";
  }
  return "?";
}

struct VerificationTeam {
  std::vector<TraderId> members;  // distinct, odd count
  FractalId fractal;
};

// A block of cooperation rings submitted and verified as one unit.
struct FractalRing {
  FractalId id;
  std::vector<RingId> ring_ids;
  TraderId creator;
  VerificationTeam team;
  FractalStatus status = FractalStatus::Proposed;
};

// Exact fixed-point sum of the member coin amounts. `lookup` must resolve
// every member id; throws std::out_of_range otherwise.
Ara ring_weight(const CooperationRing& ring,
                const std::function<const Coin&(CoinId)>& lookup);

// Applies one edge of the coin status machine under team authority.
// `owning_fractal` is the fractal containing the coin's ring, when the coin
// is ringed; a team other than the owner may only settle Blocked coins left
// over from an earlier checkpoint (`later_checkpoint`). Blocking requires a
// bind target. Throws std::logic_error on an illegal transition and
// std::invalid_argument on an unauthorized caller or missing bind.
Coin transition_coin(const Coin& coin, CoinStatus to,
                     const VerificationTeam& authority,
                     std::optional<FractalId> owning_fractal,
                     bool later_checkpoint = false,
                     std::optional<TraderId> bind_to = {});

}  // namespace lor
