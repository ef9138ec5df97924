#include "lor/analytics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lor::analytics {

namespace {

long double ln_choose(std::uint32_t n, std::uint32_t k) {
  return std::lgamma(static_cast<long double>(n) + 1) -
         std::lgamma(static_cast<long double>(k) + 1) -
         std::lgamma(static_cast<long double>(n - k) + 1);
}

}  // namespace

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double binomial_cdf(std::uint32_t n, double p, std::uint32_t k) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial_cdf: p outside [0,1]");
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;  // all n successes, n > k
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log(1.0L - static_cast<long double>(p));
  long double total = 0.0L;
  for (std::uint32_t i = 0; i <= k; ++i) {
    total += std::exp(ln_choose(n, i) + i * lp + (n - i) * lq);
  }
  if (total > 1.0L) total = 1.0L;
  return static_cast<double>(total);
}

double binomial_tail(std::uint32_t n, double p, std::uint32_t k) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial_tail: p outside [0,1]");
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log(1.0L - static_cast<long double>(p));
  long double total = 0.0L;
  for (std::uint32_t i = k; i <= n; ++i) {
    total += std::exp(ln_choose(n, i) + i * lp + (n - i) * lq);
  }
  if (total > 1.0L) total = 1.0L;
  return static_cast<double>(total);
}

double exact_wrong_vote_prob(std::uint32_t kappa, double alpha) {
  if (kappa < 1 || kappa % 2 == 0)
    throw std::invalid_argument("exact_wrong_vote_prob: kappa must be odd");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("exact_wrong_vote_prob: alpha outside [0,1]");
  return binomial_cdf(kappa, 1.0 - alpha, kappa / 2);
}

BerryEsseenEnvelope berry_esseen_envelope(std::uint32_t kappa, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("berry_esseen_envelope: alpha must lie in (0,1)");
  if (kappa < 1 || kappa % 2 == 0)
    throw std::invalid_argument("berry_esseen_envelope: kappa must be odd");
  const double q = 1.0 - alpha;
  const double sigma = std::sqrt(alpha * q);
  const double half = std::floor(kappa / 2.0) / kappa;
  const double z = (half - q) * std::sqrt(static_cast<double>(kappa)) / sigma;
  BerryEsseenEnvelope env;
  env.normal_approx = normal_cdf(z);
  env.error_bound = 0.41 * (alpha * alpha + q * q) /
                    (sigma * std::sqrt(static_cast<double>(kappa)));
  return env;
}

double expected_cycle_count(std::uint32_t ell, std::uint32_t i) {
  if (ell < 1 || i < 1)
    throw std::invalid_argument("expected_cycle_count: ell and i must be >= 1");
  return static_cast<double>(ell) / i;
}

double zeta(std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("zeta: k must be >= 2");
  if (k == 2) return std::numbers::pi * std::numbers::pi / 6.0;
  if (k == 4) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return pi2 * pi2 / 90.0;
  }
  // Direct sum with an Euler-Maclaurin tail; error far below 1e-15 at M=1000.
  constexpr std::uint32_t M = 1000;
  long double s = 0.0L;
  for (std::uint32_t i = 1; i <= M; ++i)
    s += std::pow(static_cast<long double>(i), -static_cast<long double>(k));
  const long double m = M;
  s += std::pow(m, 1.0L - k) / (k - 1) - 0.5L * std::pow(m, -static_cast<long double>(k)) +
       k / 12.0L * std::pow(m, -static_cast<long double>(k) - 1);
  return static_cast<double>(s);
}

double harmonic(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("harmonic: n must be >= 1");
  if (n <= 1'000'000) {
    long double s = 0.0L;
    for (std::uint64_t i = 1; i <= n; ++i) s += 1.0L / i;
    return static_cast<double>(s);
  }
  return std::log(static_cast<double>(n)) + std::numbers::egamma +
         0.5 / static_cast<double>(n);
}

double paper_xi(std::uint32_t ell, std::uint32_t i) {
  if (i < 2) throw std::invalid_argument("paper_xi: ring sizes start at 2");
  if (i <= ell) return 1.0 / std::sinh(static_cast<double>(ell) / i);
  return 1.0 / static_cast<double>(i);
}

double expected_extra_degree(const DegreeModel& model) {
  double sum = 0.0;
  for (const auto& [i, xi] : model.xi) {
    if (i < 2) throw std::invalid_argument("expected_extra_degree: sizes start at 2");
    if (xi < 0.0 || xi > 1.0)
      throw std::invalid_argument("expected_extra_degree: xi outside [0,1]");
    sum += xi * std::sinh(static_cast<double>(model.ell) / i);
  }
  return 2.0 * model.ell * sum;
}

double expected_extra_degree_paper(std::uint32_t ell) {
  if (ell < 1) throw std::invalid_argument("expected_extra_degree_paper: ell >= 1");
  // Head: xi_i = 1/sinh(ell/i) for 2 <= i <= ell makes each term exactly 1.
  const double head = ell >= 2 ? static_cast<double>(ell - 1) : 0.0;
  // Tail: sum_{i>ell} sinh(ell/i)/i. Expanding sinh termwise,
  //   sum_m ell^(2m+1)/(2m+1)! * sum_{i>ell} i^(-2m-2),
  // a factorially convergent series; 24 terms leave the remainder
  // below 1e-30 (bounded by the first dropped term).
  long double tail = 0.0L;
  long double ell_pow = ell;            // ell^(2m+1)
  long double factorial = 1.0L;         // (2m+1)!
  for (std::uint32_t m = 0; m < 24; ++m) {
    const std::uint32_t k = 2 * m + 2;
    long double partial = zeta(k);
    for (std::uint32_t i = 1; i <= ell; ++i)
      partial -= std::pow(static_cast<long double>(i), -static_cast<long double>(k));
    tail += ell_pow / factorial * partial;
    ell_pow *= static_cast<long double>(ell) * ell;
    factorial *= static_cast<long double>(2 * m + 2) * (2 * m + 3);
  }
  return 2.0 * ell * (head + static_cast<double>(tail));
}

double worst_case_degree_bound(std::uint32_t kappa, std::uint32_t ell) {
  if (kappa % 2 == 0)
    throw std::invalid_argument("worst_case_degree_bound: kappa must be odd");
  if (ell < 1) throw std::invalid_argument("worst_case_degree_bound: ell >= 1");
  const double l = ell;
  const double fixed_part = kappa + 2.0 * l - 1.0;
  const double mu_part = 2.0 * l * ((l - 1.0) + l * zeta(2) + l * l * l * zeta(4) / 5.0);
  return fixed_part + mu_part;
}

double two_color_cycle_rate(std::uint32_t k, std::uint32_t i, std::uint32_t j,
                            double alpha) {
  if (k < 1 || i + j != k)
    throw std::invalid_argument("two_color_cycle_rate: need i + j = k >= 1");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("two_color_cycle_rate: alpha outside [0,1]");
  // Handle the 0^0 corners exactly.
  long double term = std::exp(ln_choose(k, i)) / k;
  for (std::uint32_t t = 0; t < i; ++t) term *= (1.0L - alpha);
  for (std::uint32_t t = 0; t < j; ++t) term *= alpha;
  return static_cast<double>(term);
}

BadRingProbability bad_ring_probability(std::uint32_t k, double alpha,
                                        std::uint64_t n_traders) {
  if (k < 1 || n_traders < 1)
    throw std::invalid_argument("bad_ring_probability: need k >= 1 and N >= 1");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("bad_ring_probability: alpha outside [0,1]");
  BadRingProbability out;
  out.exact = (1.0 - std::pow(1.0 - alpha, static_cast<double>(k))) / n_traders;
  out.bound = alpha * static_cast<double>(k) / n_traders;
  return out;
}

double expected_penalty_bound(std::uint64_t n_traders, double alpha,
                              const PenaltySchedule& schedule,
                              std::optional<std::uint32_t> max_ring_size,
                              std::optional<double> factor) {
  if (n_traders < 2) throw std::invalid_argument("expected_penalty_bound: N >= 2");
  const double c = static_cast<double>(schedule.c_ppm) / 1e6;
  if (!max_ring_size) {
    if (schedule.mode != PenaltyMode::inverse_square)
      throw std::invalid_argument(
          "expected_penalty_bound: unbounded regime needs an inverse-square schedule");
    return alpha * c / static_cast<double>(n_traders) * harmonic(n_traders);
  }
  const std::uint32_t l = *max_ring_size;
  if (l < 2)
    throw std::invalid_argument("expected_penalty_bound: max ring size must be >= 2");
  if (schedule.mode != PenaltyMode::constant)
    throw std::invalid_argument(
        "expected_penalty_bound: bounded regime needs a constant schedule");
  const double f = factor.value_or(alpha);
  const double denom =
      std::pow(static_cast<double>(n_traders), 1.0 - 1.0 / static_cast<double>(l)) - 1.0;
  return f * c / denom;
}

std::vector<std::uint32_t> random_permutation(std::uint32_t n,
                                              rng::HashDraw& state) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  for (std::uint32_t i = n; i > 1; --i) {
    const auto j = static_cast<std::uint32_t>(state.draw(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::vector<std::uint32_t> cycle_sizes(const std::vector<std::uint32_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::vector<std::uint32_t> sizes;
  for (std::uint32_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    std::uint32_t len = 0;
    std::uint32_t at = start;
    while (!seen[at]) {
      seen[at] = true;
      at = perm[at];
      ++len;
    }
    sizes.push_back(len);
  }
  return sizes;
}

double CycleCensus::mean_count(std::uint32_t size) const {
  auto it = total_counts.find(size);
  if (it == total_counts.end() || trials == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(trials);
}

CycleCensus sample_permutation_cycles(std::uint32_t n, std::uint32_t ell,
                                      std::uint64_t trials,
                                      rng::HashDraw& state) {
  if (n < 1 || trials < 1 || ell < 1)
    throw std::invalid_argument("sample_permutation_cycles: n, ell, trials >= 1");
  CycleCensus census;
  census.n = n;
  census.ell = ell;
  census.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t mass = 0;
    for (std::uint32_t slice = 0; slice < ell; ++slice) {
      const auto perm = random_permutation(n, state);
      for (std::uint32_t size : cycle_sizes(perm)) {
        ++census.total_counts[size];
        mass += size;
      }
    }
    if (mass != static_cast<std::uint64_t>(n) * ell)
      throw std::logic_error("cycle census: mass identity violated");
  }
  return census;
}

double TwoColorCensus::mean_count(std::uint32_t white, std::uint32_t black) const {
  auto it = total_counts.find({white, black});
  if (it == total_counts.end() || trials == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(trials);
}

TwoColorCensus sample_two_colored_cycles(std::uint32_t n, double alpha,
                                         std::uint64_t trials,
                                         rng::HashDraw& state) {
  if (n < 1 || trials < 1)
    throw std::invalid_argument("sample_two_colored_cycles: n, trials >= 1");
  TwoColorCensus census;
  census.n = n;
  census.alpha = alpha;
  census.trials = trials;
  std::vector<bool> wrongdoer(n);
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (std::uint32_t i = 0; i < n; ++i) wrongdoer[i] = state.bernoulli(alpha);
    const auto perm = random_permutation(n, state);
    std::vector<bool> seen(n, false);
    for (std::uint32_t start = 0; start < n; ++start) {
      if (seen[start]) continue;
      std::uint32_t white = 0;
      std::uint32_t black = 0;
      std::uint32_t at = start;
      while (!seen[at]) {
        seen[at] = true;
        (wrongdoer[at] ? black : white) += 1;
        at = perm[at];
      }
      ++census.total_counts[{white, black}];
    }
  }
  return census;
}

}  // namespace lor::analytics
