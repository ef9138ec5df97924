#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "lor/ara.hpp"
#include "lor/ids.hpp"

namespace lor {

// Coin status machine. The only legal transitions are
//   Run -> Blocked -> (Expired | Paid);
// Expired and Paid are terminal.
enum class CoinStatus : std::uint8_t { Run, Blocked, Expired, Paid };

constexpr std::string_view to_string(CoinStatus s) {
  switch (s) {
    case CoinStatus::Run: return "Run";
    case CoinStatus::Blocked: return "Blocked";
    case CoinStatus::Expired: return "Expired";
    case CoinStatus::Paid: return "Paid";
  }
  return "?";
}

constexpr bool is_terminal(CoinStatus s) {
  return s == CoinStatus::Expired || s == CoinStatus::Paid;
}

constexpr bool is_legal_transition(CoinStatus from, CoinStatus to) {
  if (from == CoinStatus::Run) return to == CoinStatus::Blocked;
  if (from == CoinStatus::Blocked)
    return to == CoinStatus::Expired || to == CoinStatus::Paid;
  return false;
}

// Service-type tag carried by every coin. `service` indexes the instance's
// service catalog; investment coins are the coins an investor buys to open a
// ring of that service.
struct CoinType {
  std::uint32_t service = 0;
  bool is_investment = false;

  constexpr auto operator<=>(const CoinType&) const = default;
};

struct Coin {
  CoinId id;
  Ara amount;                          // strictly positive
  CoinStatus status = CoinStatus::Run;
  CoinType coin_type;
  std::optional<CoinId> next_in_ring;  // both set (cycle) or both absent
  std::optional<CoinId> prev_in_ring;
  std::optional<TraderId> bind_on;     // set iff status is Blocked or Paid
  TraderId owner;
  std::uint64_t broadcast_checkpoint = 0;  // checkpoint at which the request was made
};

enum class CoinViolation : std::uint8_t {
  none,
  bad_amount,
  dangling_link,
  bind_status_mismatch,
};

constexpr std::string_view to_string(CoinViolation v) {
  switch (v) {
    case CoinViolation::none: return "ok";
    case CoinViolation::bad_amount: return "bad amount";
    case CoinViolation::dangling_link: return "dangling link";
    case CoinViolation::bind_status_mismatch: return "bind/status mismatch";
  }
  return "?";
}

// Checks every locally decidable coin invariant and reports the first
// violation. Ring-membership consistency needs the coin table and is
// enforced by the ledger.
CoinViolation validate_coin(const Coin& coin);

}  // namespace lor
