#include "lor/coin.hpp"

namespace lor {

CoinViolation validate_coin(const Coin& coin) {
  if (!coin.amount.is_positive()) return CoinViolation::bad_amount;
  if (coin.next_in_ring.has_value() != coin.prev_in_ring.has_value())
    return CoinViolation::dangling_link;
  const bool binds = coin.bind_on.has_value();
  const bool should_bind =
      coin.status == CoinStatus::Blocked || coin.status == CoinStatus::Paid;
  if (binds != should_bind) return CoinViolation::bind_status_mismatch;
  return CoinViolation::none;
}

}  // namespace lor
