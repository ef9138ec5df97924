#include "lor/census.hpp"

#include <stdexcept>

#include "lor/analytics.hpp"

namespace lor::harness {

DegreeCensus degree_census(const GraphSnapshot& snapshot) {
  const std::uint64_t n = snapshot.trader_count;
  if (n == 0) throw std::invalid_argument("degree_census: empty snapshot");

  // Raw incident-edge counts.
  std::vector<std::uint64_t> edge_degree(n, 0);
  // Component sums for the decomposition identity.
  std::vector<std::uint64_t> team_part(n, 0);
  std::vector<std::uint64_t> ring_part(n, 0);
  std::vector<std::uint64_t> mu_part(n, 0);

  for (std::size_t team_idx = 0; team_idx < snapshot.teams.size(); ++team_idx) {
    const auto& team = snapshot.teams[team_idx];
    std::uint64_t mu = 0;
    if (team_idx < snapshot.fractal_ring_sizes.size()) {
      for (std::uint32_t size : snapshot.fractal_ring_sizes[team_idx]) mu += size;
    }
    for (std::uint32_t member : team) {
      edge_degree[member] += team.size() - 1;  // clique edges
      edge_degree[member] += mu;               // links into the fractal
      team_part[member] += team.size() - 1;
      mu_part[member] += mu;
    }
  }

  for (const auto& slice : snapshot.slices) {
    for (const auto& cycle : slice) {
      if (cycle.size() < 2) continue;
      for (std::uint32_t member : cycle) {
        edge_degree[member] += 2;  // next and prev neighbors in the ring
        ring_part[member] += 2;
      }
    }
  }

  DegreeCensus census;
  census.decomposition_exact = true;
  std::uint64_t total = 0;
  std::uint64_t team_total = 0;
  std::uint64_t ring_total = 0;
  std::uint64_t mu_total = 0;
  for (std::uint64_t v = 0; v < n; ++v) {
    total += edge_degree[v];
    team_total += team_part[v];
    ring_total += ring_part[v];
    mu_total += mu_part[v];
    ++census.histogram[edge_degree[v]];
    if (edge_degree[v] != team_part[v] + ring_part[v] + mu_part[v])
      census.decomposition_exact = false;
  }
  census.mean_degree = static_cast<double>(total) / static_cast<double>(n);
  census.mean_team_component = static_cast<double>(team_total) / static_cast<double>(n);
  census.mean_ring_component = static_cast<double>(ring_total) / static_cast<double>(n);
  census.mean_mu_component = static_cast<double>(mu_total) / static_cast<double>(n);
  return census;
}

GraphSnapshot sample_graph_snapshot(std::uint64_t n, std::uint32_t kappa,
                                    std::uint32_t ell, rng::HashDraw& state) {
  if (n < kappa || kappa < 1 || ell < 1)
    throw std::invalid_argument("sample_graph_snapshot: need n >= kappa >= 1, ell >= 1");

  GraphSnapshot snapshot;
  snapshot.trader_count = n;
  snapshot.kappa = kappa;
  snapshot.ell = ell;

  // Ring slices: cycles of ell independent permutations.
  std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>>
      rings_by_size;  // size -> (slice, cycle index)
  for (std::uint32_t s = 0; s < ell; ++s) {
    const auto perm =
        analytics::random_permutation(static_cast<std::uint32_t>(n), state);
    std::vector<std::vector<std::uint32_t>> cycles;
    std::vector<bool> seen(n, false);
    for (std::uint32_t start = 0; start < n; ++start) {
      if (seen[start]) continue;
      std::vector<std::uint32_t> cycle;
      std::uint32_t at = start;
      while (!seen[at]) {
        seen[at] = true;
        cycle.push_back(at);
        at = perm[at];
      }
      if (cycle.size() >= 2) {
        rings_by_size[static_cast<std::uint32_t>(cycle.size())].emplace_back(
            s, static_cast<std::uint32_t>(cycles.size()));
      }
      cycles.push_back(std::move(cycle));
    }
    snapshot.slices.push_back(std::move(cycles));
  }

  // Random partition into teams of exactly kappa; the remainder stays
  // teamless this frame.
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  state.shuffle(order);
  const std::uint64_t team_count = n / kappa;
  for (std::uint64_t team = 0; team < team_count; ++team) {
    snapshot.teams.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(team * kappa),
                                order.begin() + static_cast<std::ptrdiff_t>((team + 1) * kappa));
  }

  // Each team picks its fractal: every ring of an available size class is
  // taken with probability xi(size); classes holding fewer than two rings
  // are not offered.
  snapshot.fractal_ring_sizes.resize(snapshot.teams.size());
  for (std::size_t team = 0; team < snapshot.teams.size(); ++team) {
    for (const auto& [size, rings] : rings_by_size) {
      if (rings.size() < 2) continue;
      const double xi = analytics::paper_xi(ell, size);
      for (std::size_t r = 0; r < rings.size(); ++r) {
        if (state.bernoulli(xi)) snapshot.fractal_ring_sizes[team].push_back(size);
      }
    }
  }
  return snapshot;
}

}  // namespace lor::harness
