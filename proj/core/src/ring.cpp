#include "lor/ring.hpp"

#include <stdexcept>
#include <string>

namespace lor {

Ara ring_weight(const CooperationRing& ring,
                const std::function<const Coin&(CoinId)>& lookup) {
  Ara total;
  for (CoinId cid : ring.coin_ids) total += lookup(cid).amount;
  return total;
}

Coin transition_coin(const Coin& coin, CoinStatus to,
                     const VerificationTeam& authority,
                     std::optional<FractalId> owning_fractal,
                     bool later_checkpoint, std::optional<TraderId> bind_to) {
  if (!is_legal_transition(coin.status, to)) {
    throw std::logic_error("illegal coin transition " +
                           std::string(to_string(coin.status)) + " -> " +
                           std::string(to_string(to)));
  }
  if (owning_fractal && authority.fractal != *owning_fractal) {
    // A later checkpoint's team may settle leftover Blocked coins; nothing
    // else crosses team boundaries.
    const bool leftover_settlement =
        later_checkpoint && coin.status == CoinStatus::Blocked && is_terminal(to);
    if (!leftover_settlement)
      throw std::invalid_argument("coin transition by unauthorized team");
  }
  Coin updated = coin;
  updated.status = to;
  if (to == CoinStatus::Blocked) {
    if (!bind_to) throw std::invalid_argument("blocking a coin requires a bind target");
    updated.bind_on = bind_to;
  } else if (to == CoinStatus::Expired) {
    updated.bind_on.reset();
  }
  return updated;
}

}  // namespace lor
