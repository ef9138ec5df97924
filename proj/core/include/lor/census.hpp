#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lor/hash_draw.hpp"
#include "lor/ids.hpp"

namespace lor::harness {

// A framed moment of the trader multigraph: team cliques, ring cycles and
// team-to-fractal verification links, stored by component so the degree
// decomposition (kappa - 1) + 2(ell - s) + mu can be checked per node
// against raw edge counting.
struct GraphSnapshot {
  std::uint64_t trader_count = 0;
  std::uint32_t kappa = 0;
  std::uint32_t ell = 0;

  std::vector<std::vector<std::uint32_t>> teams;  // trader indices, size kappa
  // Per slice, the cycles (by trader index) of that slice's permutation;
  // singleton cycles are fixed points and carry no edges.
  std::vector<std::vector<std::vector<std::uint32_t>>> slices;
  // Per team, the sizes of the rings in the fractal it verifies.
  std::vector<std::vector<std::uint32_t>> fractal_ring_sizes;
};

struct DegreeCensus {
  double mean_degree = 0.0;
  std::map<std::uint64_t, std::uint64_t> histogram;
  // Component means across traders.
  double mean_team_component = 0.0;   // (kappa - 1) when in a team
  double mean_ring_component = 0.0;   // 2 (ell - s)
  double mean_mu_component = 0.0;     // verification links
  bool decomposition_exact = false;   // per-node identity vs edge counting
};

// Edge-counting census over a snapshot; also verifies per node that the
// counted degree equals the component decomposition.
DegreeCensus degree_census(const GraphSnapshot& snapshot);

// Samples the static model: ell independent uniform permutations over n
// traders (cycles of length >= 2 become rings), a random partition of
// traders into teams of kappa, and per team a fractal selecting each
// available size-class ring with probability xi(size). Size classes with
// fewer than two rings stay unavailable. xi defaults to the worst-case
// analysis choice.
GraphSnapshot sample_graph_snapshot(std::uint64_t n, std::uint32_t kappa,
                                    std::uint32_t ell, rng::HashDraw& state);

}  // namespace lor::harness
