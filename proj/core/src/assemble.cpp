#include "lor/assemble.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lor::rng {

std::string canonical_serialize(const Coin& coin) {
  std::ostringstream os;
  os << "coin|" << coin.id.value << "|" << coin.amount.str() << "|"
     << to_string(coin.status) << "|" << coin.coin_type.service << "|"
     << (coin.coin_type.is_investment ? 1 : 0) << "|"
     << (coin.next_in_ring ? coin.next_in_ring->value : 0) << "|"
     << (coin.prev_in_ring ? coin.prev_in_ring->value : 0) << "|"
     << (coin.bind_on ? coin.bind_on->value : 0) << "|" << coin.owner.value
     << "|" << coin.broadcast_checkpoint;
  return os.str();
}

std::string canonical_serialize(const CooperationRing& ring) {
  std::ostringstream os;
  os << "ring|" << ring.id.value << "|";
  for (CoinId c : ring.coin_ids) os << c.value << ",";
  os << "|" << ring.weight.str() << "|" << ring.investor.value << "|"
     << ring.rounds_total;
  return os.str();
}

std::optional<CooperationRing> assemble_cooperation_ring(
    RingId ring_id, const Coin& investment_coin, std::span<const Coin> pool,
    std::uint32_t ring_size, std::uint32_t rounds_total, HashDraw& state) {
  if (!investment_coin.coin_type.is_investment)
    throw std::invalid_argument("assemble_cooperation_ring: not an investment coin");
  if (ring_size < 2)
    throw std::invalid_argument("assemble_cooperation_ring: ring size must be >= 2");

  // Type-compatible candidates, canonically ordered by coin id.
  std::vector<const Coin*> candidates;
  for (const Coin& c : pool) {
    if (c.status != CoinStatus::Run) continue;
    if (c.coin_type.is_investment) continue;
    if (c.coin_type.service != investment_coin.coin_type.service) continue;
    if (c.owner == investment_coin.owner) continue;
    candidates.push_back(&c);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Coin* a, const Coin* b) { return a->id < b->id; });

  // Draws are keyed to the investment coin's content, so the assembly is
  // re-derivable by anyone holding the same pool snapshot.
  HashDraw draw = state.fold(canonical_serialize(investment_coin));

  CooperationRing ring;
  ring.id = ring_id;
  ring.investor = investment_coin.owner;
  ring.coin_ids.push_back(investment_coin.id);
  ring.weight = investment_coin.amount;
  std::set<TraderId> owners{investment_coin.owner};

  for (std::uint32_t slot = 1; slot < ring_size; ++slot) {
    // Drop candidates owned by traders already in the ring.
    std::erase_if(candidates,
                  [&](const Coin* c) { return owners.contains(c->owner); });
    if (candidates.empty()) return std::nullopt;  // starved
    const std::size_t pick = static_cast<std::size_t>(draw.draw(candidates.size()));
    const Coin* chosen = candidates[pick];
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
    ring.coin_ids.push_back(chosen->id);
    ring.weight += chosen->amount;
    owners.insert(chosen->owner);
  }
  ring.member_count = static_cast<std::uint32_t>(ring.coin_ids.size());
  ring.rounds_total = rounds_total;
  // Keep the caller's stream moving so back-to-back assemblies differ.
  state.draw(2);
  return ring;
}

std::uint32_t fractal_size(HashDraw& state, std::uint32_t min_ec,
                           std::uint32_t max_ec) {
  if (min_ec < 1 || min_ec > max_ec)
    throw std::invalid_argument("fractal_size: need 1 <= min_ec <= max_ec");
  return min_ec + static_cast<std::uint32_t>(
                      state.draw(static_cast<std::uint64_t>(max_ec) - min_ec + 1));
}

std::optional<std::vector<RingId>> assemble_fractal_ring(
    RingId start_ring, std::span<const CooperationRing* const> pool,
    std::uint32_t size, const HashDraw& state) {
  if (size < 1) throw std::invalid_argument("assemble_fractal_ring: size must be >= 1");
  if (pool.size() < size) return std::nullopt;  // starved

  std::map<RingId, const CooperationRing*> remaining;
  const CooperationRing* start = nullptr;
  for (const CooperationRing* r : pool) {
    remaining.emplace(r->id, r);
    if (r->id == start_ring) start = r;
  }
  if (start == nullptr)
    throw std::invalid_argument("assemble_fractal_ring: start ring not in pool");

  std::vector<RingId> ordered{start_ring};
  remaining.erase(start_ring);
  const CooperationRing* prev = start;
  while (ordered.size() < size) {
    HashDraw link = state.fold(canonical_serialize(*prev));
    std::uint64_t index = link.draw(remaining.size());
    auto it = remaining.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(index));
    prev = it->second;
    ordered.push_back(it->first);
    remaining.erase(it);
  }
  return ordered;
}

VerificationTeam select_verification_team(FractalId fractal,
                                          std::span<const TraderId> traders,
                                          std::uint32_t kappa, HashDraw& state) {
  if (kappa % 2 == 0)
    throw std::invalid_argument("select_verification_team: kappa must be odd");
  if (kappa > traders.size())
    throw std::invalid_argument("select_verification_team: kappa exceeds population");

  // Partial Fisher-Yates over a canonically sorted copy: the first kappa
  // slots end up a uniform sample without replacement.
  std::vector<TraderId> ids(traders.begin(), traders.end());
  if (!std::is_sorted(ids.begin(), ids.end())) std::sort(ids.begin(), ids.end());
  VerificationTeam team;
  team.fractal = fractal;
  team.members.reserve(kappa);
  for (std::uint32_t i = 0; i < kappa; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(state.draw(ids.size() - i));
    std::swap(ids[i], ids[j]);
    team.members.push_back(ids[i]);
  }
  return team;
}

}  // namespace lor::rng
