#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lor/hash_draw.hpp"
#include "lor/penalty.hpp"

namespace lor::analytics {

// Standard normal CDF, absolute error below 1e-10.
double normal_cdf(double x);

// Exact P(Bin(n, p) <= k), evaluated in log space with long-double
// accumulation; stays within ~1e-12 relative error up to n ~ 501.
double binomial_cdf(std::uint32_t n, double p, std::uint32_t k);

// Exact P(Bin(n, p) >= k).
double binomial_tail(std::uint32_t n, double p, std::uint32_t k);

// Probability that a majority vote of kappa members goes wrong when each
// member is independently honest with probability 1 - alpha:
// P(Bin(kappa, 1 - alpha) <= floor(kappa / 2)). kappa must be odd.
double exact_wrong_vote_prob(std::uint32_t kappa, double alpha);

struct BerryEsseenEnvelope {
  double normal_approx;  // Phi((floor(k/2)/k - (1-a)) * sqrt(k) / sqrt(a(1-a)))
  double error_bound;    // 0.41 (a^2 + (1-a)^2) / (sqrt(a(1-a)) sqrt(k))
};

// Normal approximation of the wrong-vote probability together with its
// guaranteed envelope; requires 0 < alpha < 1.
BerryEsseenEnvelope berry_esseen_envelope(std::uint32_t kappa, double alpha);

// Mean count lambda_i = ell / i of size-i cycles in an amalgam of ell
// independent uniform permutations.
double expected_cycle_count(std::uint32_t ell, std::uint32_t i);

// Riemann zeta at integer k >= 2 (Euler-Maclaurin tail, ~1e-15).
double zeta(std::uint32_t k);

// Harmonic number H_n; exact summation for n <= 1e6, asymptotic expansion
// with correction below 1/(2n) beyond.
double harmonic(std::uint64_t n);

// Fractal selection probability per ring size used by the worst-case degree
// analysis: 1/sinh(ell/i) for 2 <= i <= ell and 1/i beyond.
double paper_xi(std::uint32_t ell, std::uint32_t i);

// Finite selection model: kappa, ell and an explicit xi table (ring size ->
// selection probability, sizes >= 2).
struct DegreeModel {
  std::uint32_t ell = 1;
  std::uint32_t kappa = 3;
  std::map<std::uint32_t, double> xi;
  std::optional<std::uint32_t> max_ring_size;  // L
};

// E(mu) = 2 ell * sum_{i>1} xi_i sinh(ell / i) over the model's xi table.
double expected_extra_degree(const DegreeModel& model);

// Same expectation under the full infinite paper_xi choice; the tail over
// i > ell is evaluated through a factorially convergent zeta series, so the
// truncation error sits below 1e-9.
double expected_extra_degree_paper(std::uint32_t ell);

// Closed-form worst-case mean degree:
//   (kappa + 2 ell - 1) + 2 ell [ (ell - 1) + ell zeta(2) + ell^3 zeta(4)/5 ].
double worst_case_degree_bound(std::uint32_t kappa, std::uint32_t ell);

// Poisson rate of cycles with i honest and j wrongdoer members, i + j = k:
// (1/k) C(k, i) (1-alpha)^i alpha^j.
double two_color_cycle_rate(std::uint32_t k, std::uint32_t i, std::uint32_t j,
                            double alpha);

struct BadRingProbability {
  double exact;  // (1 - (1-alpha)^k) / N
  double bound;  // alpha k / N, always >= exact
};
BadRingProbability bad_ring_probability(std::uint32_t k, double alpha,
                                        std::uint64_t n_traders);

// Expected per-trader penalty fraction bound.
//   L absent: requires an inverse-square schedule; (alpha c / N) H_N.
//   L set (>= 2): requires a constant schedule; factor * phi / (N^(1-1/L) - 1),
//   with factor defaulting to alpha.
double expected_penalty_bound(std::uint64_t n_traders, double alpha,
                              const PenaltySchedule& schedule,
                              std::optional<std::uint32_t> max_ring_size = {},
                              std::optional<double> factor = {});

// --- sampling oracles ------------------------------------------------------

// Uniform permutation of {0..n-1} via draw-based Fisher-Yates.
std::vector<std::uint32_t> random_permutation(std::uint32_t n,
                                              rng::HashDraw& state);

// Cycle sizes of one permutation.
std::vector<std::uint32_t> cycle_sizes(const std::vector<std::uint32_t>& perm);

struct CycleCensus {
  std::uint32_t n = 0;
  std::uint32_t ell = 1;
  std::uint64_t trials = 0;
  std::map<std::uint32_t, std::uint64_t> total_counts;  // size -> sum of C_i

  double mean_count(std::uint32_t size) const;
};

// Census of cycle sizes across `trials` amalgams of ell independent uniform
// permutations on n elements. The per-trial identity sum(i * C_i) = n * ell
// is checked internally.
CycleCensus sample_permutation_cycles(std::uint32_t n, std::uint32_t ell,
                                      std::uint64_t trials, rng::HashDraw& state);

struct TwoColorCensus {
  std::uint32_t n = 0;
  double alpha = 0.0;
  std::uint64_t trials = 0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> total_counts;

  double mean_count(std::uint32_t white, std::uint32_t black) const;
};

// Census over single permutations whose elements are independently colored
// wrongdoer with probability alpha; counts cycles by (honest, wrongdoer)
// composition.
TwoColorCensus sample_two_colored_cycles(std::uint32_t n, double alpha,
                                         std::uint64_t trials,
                                         rng::HashDraw& state);

}  // namespace lor::analytics
