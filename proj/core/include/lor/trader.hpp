#pragma once

#include <cstdint>
#include <set>

#include "lor/ara.hpp"
#include "lor/ids.hpp"

namespace lor {

struct Trader {
  TraderId id;
  Ara balance;                 // never negative at checkpoint boundaries
  bool reliable = true;        // honest vs wrongdoer, fixed at creation
  std::uint64_t joined_at = 0; // checkpoint index of entrance (0 = genesis)
  Ara penalty_accrued;         // cumulative ARA lost to penalties
  std::set<CoinId> coins_owned;
};

}  // namespace lor
