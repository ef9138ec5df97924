#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lor/coin.hpp"
#include "lor/hash_draw.hpp"
#include "lor/ring.hpp"

namespace lor::rng {

// Canonical, deterministic renderings used as hash material. A verifier can
// re-derive every assembly below from (seed material, pool snapshot) and
// compare bit for bit.
std::string canonical_serialize(const Coin& coin);
std::string canonical_serialize(const CooperationRing& ring);

// Builds one cooperation ring around an investment coin. Workers are drawn
// uniformly via the hash stream from the type-compatible Run coins in
// `pool`, skipping coins whose owner is already in the ring. Returns nullopt
// ("starved") when the pool cannot fill the ring. The returned ring carries
// `ring_id`, ring-ordered coin ids (investment first), the exact weight and
// `rounds_total`; persisting coins and link fields is the ledger's job.
std::optional<CooperationRing> assemble_cooperation_ring(
    RingId ring_id, const Coin& investment_coin, std::span<const Coin> pool,
    std::uint32_t ring_size, std::uint32_t rounds_total, HashDraw& state);

// Uniform fractal size in [min_ec, max_ec]. Throws on invalid bounds.
std::uint32_t fractal_size(HashDraw& state, std::uint32_t min_ec,
                           std::uint32_t max_ec);

// Orders `size` distinct rings starting from `start_ring`; each subsequent
// ring is picked by folding the previous ring's canonical serialization into
// the stream, so the chain is a checkable function of ring content. Returns
// nullopt when the pool is smaller than `size`.
std::optional<std::vector<RingId>> assemble_fractal_ring(
    RingId start_ring, std::span<const CooperationRing* const> pool,
    std::uint32_t size, const HashDraw& state);

// kappa distinct traders sampled uniformly without replacement. Throws when
// kappa is even or exceeds the population.
VerificationTeam select_verification_team(FractalId fractal,
                                          std::span<const TraderId> traders,
                                          std::uint32_t kappa, HashDraw& state);

}  // namespace lor::rng
