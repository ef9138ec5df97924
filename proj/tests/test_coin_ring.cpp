#include <doctest.h>

#include <map>

#include "lor/coin.hpp"
#include "lor/ring.hpp"

using namespace lor;

namespace {

Coin fresh_coin(std::uint64_t id, const char* amount = "1.0") {
  Coin c;
  c.id = CoinId{id};
  c.amount = Ara::parse(amount);
  c.owner = TraderId{id + 100};
  return c;
}

}  // namespace

TEST_CASE("validate_coin reports the first violated invariant") {
  CHECK(validate_coin(fresh_coin(1)) == CoinViolation::none);

  Coin zero = fresh_coin(2, "1.0");
  zero.amount = Ara::zero();
  CHECK(validate_coin(zero) == CoinViolation::bad_amount);

  Coin blocked_unbound = fresh_coin(3);
  blocked_unbound.status = CoinStatus::Blocked;
  CHECK(validate_coin(blocked_unbound) == CoinViolation::bind_status_mismatch);

  Coin dangling = fresh_coin(4);
  dangling.next_in_ring = CoinId{9};
  CHECK(validate_coin(dangling) == CoinViolation::dangling_link);

  Coin run_bound = fresh_coin(5);
  run_bound.bind_on = TraderId{1};
  CHECK(validate_coin(run_bound) == CoinViolation::bind_status_mismatch);
}

TEST_CASE("status machine edges") {
  CHECK(is_legal_transition(CoinStatus::Run, CoinStatus::Blocked));
  CHECK(is_legal_transition(CoinStatus::Blocked, CoinStatus::Expired));
  CHECK(is_legal_transition(CoinStatus::Blocked, CoinStatus::Paid));
  CHECK_FALSE(is_legal_transition(CoinStatus::Run, CoinStatus::Paid));
  CHECK_FALSE(is_legal_transition(CoinStatus::Run, CoinStatus::Expired));
  CHECK_FALSE(is_legal_transition(CoinStatus::Expired, CoinStatus::Run));
  CHECK_FALSE(is_legal_transition(CoinStatus::Paid, CoinStatus::Blocked));
}

TEST_CASE("transition_coin authority and legality") {
  VerificationTeam owner_team;
  owner_team.fractal = FractalId{1};
  VerificationTeam later_team;
  later_team.fractal = FractalId{2};

  Coin coin = fresh_coin(1);
  const Coin blocked = transition_coin(coin, CoinStatus::Blocked, owner_team,
                                       FractalId{1}, false, TraderId{7});
  CHECK(blocked.status == CoinStatus::Blocked);
  CHECK(blocked.bind_on == TraderId{7});

  // Illegal machine edges throw.
  Coin expired = blocked;
  expired.status = CoinStatus::Expired;
  expired.bind_on.reset();
  CHECK_THROWS_AS(transition_coin(expired, CoinStatus::Run, owner_team, FractalId{1}),
                  std::logic_error);
  CHECK_THROWS_AS(transition_coin(coin, CoinStatus::Paid, owner_team, FractalId{1}),
                  std::logic_error);

  // Blocking without a bind target is rejected.
  CHECK_THROWS_AS(transition_coin(coin, CoinStatus::Blocked, owner_team, FractalId{1}),
                  std::invalid_argument);

  // A different team may settle leftovers from an earlier checkpoint but
  // cannot act mid-window.
  const Coin paid = transition_coin(blocked, CoinStatus::Paid, later_team,
                                    FractalId{1}, true);
  CHECK(paid.status == CoinStatus::Paid);
  CHECK(paid.bind_on == TraderId{7});
  CHECK_THROWS_AS(
      transition_coin(blocked, CoinStatus::Paid, later_team, FractalId{1}, false),
      std::invalid_argument);

  // Expiry clears the bind.
  const Coin receipt = transition_coin(blocked, CoinStatus::Expired, owner_team,
                                       FractalId{1});
  CHECK_FALSE(receipt.bind_on.has_value());
}

TEST_CASE("ring_weight sums exactly") {
  std::map<CoinId, Coin> table;
  auto add = [&](std::uint64_t id, const char* amount) {
    table.emplace(CoinId{id}, fresh_coin(id, amount));
  };
  auto lookup = [&](CoinId id) -> const Coin& { return table.at(id); };

  CooperationRing ring;
  ring.id = RingId{1};

  add(1, "1.0");
  add(2, "2.5");
  ring.coin_ids = {CoinId{1}, CoinId{2}};
  CHECK(ring_weight(ring, lookup) == Ara::parse("3.5"));

  table.clear();
  add(1, "0.45");
  add(2, "0.45");
  add(3, "0.45");
  ring.coin_ids = {CoinId{1}, CoinId{2}, CoinId{3}};
  CHECK(ring_weight(ring, lookup) == Ara::parse("1.35"));

  table.clear();
  ring.coin_ids.clear();
  for (std::uint64_t i = 1; i <= 1000; ++i) {
    add(i, "0.000001");
    ring.coin_ids.push_back(CoinId{i});
  }
  CHECK(ring_weight(ring, lookup) == Ara::parse("0.001"));

  ring.coin_ids.push_back(CoinId{5000});
  CHECK_THROWS_AS(ring_weight(ring, lookup), std::out_of_range);
}

TEST_CASE("ring links form a cycle that closes in member_count steps") {
  std::map<CoinId, Coin> table;
  const std::size_t size = 5;
  for (std::uint64_t i = 0; i < size; ++i) {
    Coin c = fresh_coin(i + 1);
    c.next_in_ring = CoinId{(i + 1) % size + 1};
    c.prev_in_ring = CoinId{(i + size - 1) % size + 1};
    table.emplace(c.id, c);
  }
  for (std::uint64_t start = 1; start <= size; ++start) {
    CoinId at{start};
    for (std::size_t step = 0; step < size; ++step) at = *table.at(at).next_in_ring;
    CHECK(at == CoinId{start});
    CoinId back{start};
    for (std::size_t step = 0; step < size; ++step) back = *table.at(back).prev_in_ring;
    CHECK(back == CoinId{start});
  }
}
