#include "lor/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lor/analytics.hpp"
#include "lor/attack.hpp"
#include "lor/census.hpp"
#include "lor/config.hpp"
#include "lor/engine.hpp"
#include "lor/experiment.hpp"

namespace lor::accept {

namespace {

using SteadyClock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << "FAILED[" << what << "] ";
    }
  }
};

SimConfig soundness_config(std::uint64_t traders, std::uint64_t checkpoints,
                           std::uint64_t seed) {
  SimConfig cfg = default_config();
  cfg.trader_count = traders;
  cfg.alpha = 0.3;
  cfg.kappa = 25;
  cfg.ell = 3;
  cfg.rounds_r = 1;
  // One ring per fractal keeps every round verdict on a freshly sampled
  // team, so verdicts are independent and the binomial error bar applies.
  cfg.fractal_min = 1;
  cfg.fractal_max = 1;
  cfg.checkpoints = checkpoints;
  cfg.seed = seed;
  cfg.genesis_balance = Ara::from_units(100);
  cfg.adversary.withhold_service_prob = 1.0;
  cfg.adversary.vt_misvote_prob = 1.0;
  return cfg;
}

SimConfig penalty_config(std::uint64_t traders, std::uint64_t seed) {
  SimConfig cfg = default_config();
  cfg.trader_count = traders;
  cfg.alpha = 0.1;
  cfg.kappa = 25;
  cfg.ell = 1;
  cfg.rounds_r = 1;
  cfg.ring_model = RingModel::permutation;
  cfg.phi.mode = PenaltyMode::inverse_square;
  cfg.phi.c_ppm = 1'000'000;
  cfg.fractal_min = 1;
  cfg.fractal_max = 4;
  cfg.checkpoints = 200;
  cfg.seed = seed;
  cfg.genesis_balance = Ara::from_units(500);
  cfg.adversary.withhold_service_prob = 1.0;
  return cfg;
}

// Ledger-safety sweep shared by criterion 7: conservation, double
// submission, coin-record validity and Blocked-coin liveness over a
// finished engine.
void audit_ledger_safety(const Engine& engine, const std::string& label,
                         Check& check) {
  const Tcb& tcb = engine.tcb();
  check.require(tcb.conservation_residual().is_zero(), label + ": conservation");

  std::map<RingId, int> submitted_count;
  for (const auto& [fid, fr] : tcb.fractals()) {
    if (fr.status == FractalStatus::Submitted || fr.status == FractalStatus::Settled) {
      for (RingId rid : fr.ring_ids) ++submitted_count[rid];
    }
  }
  for (const auto& [rid, count] : submitted_count) {
    check.require(count == 1, label + ": ring submitted once");
    if (count != 1) return;
  }

  // Ring of each coin, for the liveness check.
  std::map<CoinId, RingId> ring_of;
  for (const auto& [rid, ring] : tcb.rings()) {
    for (CoinId cid : ring.coin_ids) ring_of[cid] = rid;
  }
  std::map<RingId, const RingRecord*> record_of;
  for (const auto& [fid, rcb] : tcb.rcbs()) {
    for (const auto& [rid, record] : rcb.rings) record_of[rid] = &record;
  }

  for (const auto& [cid, coin] : tcb.coins()) {
    check.require(validate_coin(coin) == CoinViolation::none,
                  label + ": coin record valid");
    if (coin.status == CoinStatus::Blocked) {
      // A Blocked coin is legal only while its ring is still working; every
      // due ring must have settled by the closing boundary.
      auto rid = ring_of.find(cid);
      check.require(rid != ring_of.end(), label + ": blocked coin has ring");
      if (rid == ring_of.end()) return;
      auto record = record_of.find(rid->second);
      check.require(record != record_of.end(), label + ": blocked coin recorded");
      if (record == record_of.end()) return;
      check.require(!record->second->done_at.has_value(),
                    label + ": blocked coin settled when due");
    }
  }
}

CriterionResult criterion_1() {
  Check check;

  // Frozen oracle: sum of C(5,i) 0.6^i 0.4^(5-i) over i = 0..2, evaluated
  // term by term.
  const double enumerated = 1.0 * std::pow(0.4, 5) +
                            5.0 * 0.6 * std::pow(0.4, 4) +
                            10.0 * 0.36 * std::pow(0.4, 3);
  const double exact = analytics::exact_wrong_vote_prob(5, 0.4);
  check.require(std::abs(exact - 0.31744) <= 1e-12, "exact(5,0.4) == 0.31744");
  check.require(std::abs(exact - enumerated) <= 1e-12, "exact matches enumeration");

  std::uint64_t points = 0;
  double worst_margin = 1.0;
  for (std::uint32_t kappa = 3; kappa <= 501; kappa += 2) {
    for (int a = 5; a <= 45; a += 5) {
      const double alpha = a / 100.0;
      const double p = analytics::exact_wrong_vote_prob(kappa, alpha);
      const auto env = analytics::berry_esseen_envelope(kappa, alpha);
      const double gap = env.error_bound - std::abs(p - env.normal_approx);
      worst_margin = std::min(worst_margin, gap);
      ++points;
      if (gap < 0) {
        check.require(false, "envelope at kappa=" + std::to_string(kappa) +
                                 " alpha=" + std::to_string(alpha));
      }
    }
  }
  check.detail << "sweep_points=" << points
               << " worst_envelope_margin=" << worst_margin << " ";
  return {1, "exact-vs-oracle", check.ok, check.detail.str(), 0.0};
}

CriterionResult criterion_2() {
  Check check;
  const SimConfig cfg = soundness_config(2000, 30, 20250);
  const harness::MetricsReport report = harness::run_experiment(cfg);

  check.require(report.team_decisions >= 10'000, ">= 1e4 team decisions");
  const double predicted = analytics::exact_wrong_vote_prob(25, 0.3);
  const double observed = static_cast<double>(report.wrong_votes) /
                          static_cast<double>(report.team_decisions);
  const double se = std::sqrt(predicted * (1.0 - predicted) /
                              static_cast<double>(report.team_decisions));
  check.require(std::abs(observed - predicted) <= 4.0 * se, "within 4 sigma");
  check.detail << "decisions=" << report.team_decisions << " observed=" << observed
               << " predicted=" << predicted << " z="
               << (observed - predicted) / se << " ";
  return {2, "simulated-team-soundness", check.ok, check.detail.str(), 0.0};
}

CriterionResult criterion_3() {
  Check check;

  // Exhaustive n = 4: census every permutation and match the cycle-type
  // enumeration exactly.
  std::vector<std::uint32_t> base{0, 1, 2, 3};
  std::map<std::vector<std::uint32_t>, std::uint64_t> type_counts;
  double c1_total = 0;
  do {
    auto sizes = analytics::cycle_sizes(base);
    std::sort(sizes.begin(), sizes.end());
    ++type_counts[sizes];
    c1_total += static_cast<double>(std::count(sizes.begin(), sizes.end(), 1u));
  } while (std::next_permutation(base.begin(), base.end()));

  const std::map<std::vector<std::uint32_t>, std::uint64_t> expected{
      {{1, 1, 1, 1}, 1}, {{1, 1, 2}, 6}, {{2, 2}, 3}, {{1, 3}, 8}, {{4}, 6}};
  check.require(type_counts == expected, "n=4 exhaustive census");
  check.require(c1_total / 24.0 == 1.0, "mean fixed points over S4 == 1");

  // Sampled amalgams: mean C_i within 4 sigma of ell / i.
  for (std::uint32_t ell : {1u, 4u}) {
    rng::HashDraw stream = rng::HashDraw::from_seed(300 + ell);
    const auto census = analytics::sample_permutation_cycles(1000, ell, 1000, stream);
    for (std::uint32_t size = 1; size <= 5; ++size) {
      const double lambda = analytics::expected_cycle_count(ell, size);
      const double se = std::sqrt(lambda / static_cast<double>(census.trials));
      const double mean = census.mean_count(size);
      check.require(std::abs(mean - lambda) <= 4.0 * se,
                    "ell=" + std::to_string(ell) + " size=" + std::to_string(size));
      if (ell == 4 && size <= 2)
        check.detail << "ell4_c" << size << "=" << mean << " ";
    }
  }
  return {3, "cycle-statistics", check.ok, check.detail.str(), 0.0};
}

CriterionResult criterion_4() {
  Check check;
  rng::HashDraw stream = rng::HashDraw::from_seed(4040);
  const auto census = analytics::sample_two_colored_cycles(1000, 0.3, 1000, stream);
  for (std::uint32_t k = 1; k <= 4; ++k) {
    for (std::uint32_t i = 0; i <= k; ++i) {
      const std::uint32_t j = k - i;
      const double lambda = analytics::two_color_cycle_rate(k, i, j, 0.3);
      const double se = std::sqrt(lambda / static_cast<double>(census.trials));
      const double mean = census.mean_count(i, j);
      check.require(std::abs(mean - lambda) <= 4.0 * se,
                    "(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  check.detail << "pairs=14 trials=" << census.trials << " alpha=0.3 ";
  return {4, "two-colored-rates", check.ok, check.detail.str(), 0.0};
}

CriterionResult criterion_5() {
  Check check;
  const std::uint32_t kappa = 25;
  const std::uint32_t ell = 3;

  std::vector<double> means;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    rng::HashDraw stream = rng::HashDraw::from_seed(5000 + seed);
    const auto snapshot = harness::sample_graph_snapshot(2000, kappa, ell, stream);
    const auto census = harness::degree_census(snapshot);
    check.require(census.decomposition_exact,
                  "decomposition identity, seed " + std::to_string(seed));
    means.push_back(census.mean_degree);
  }
  const double mean =
      std::accumulate(means.begin(), means.end(), 0.0) / means.size();
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= means.size() - 1;
  const double se = std::sqrt(var / means.size());

  const double envelope =
      kappa + 2.0 * ell - 1.0 + analytics::expected_extra_degree_paper(ell);
  const double hard_bound = analytics::worst_case_degree_bound(kappa, ell);
  check.require(mean <= envelope + 4.0 * se, "mean degree under envelope");
  check.require(mean <= hard_bound, "mean degree under worst-case bound");
  check.detail << "mean=" << mean << " se=" << se << " envelope=" << envelope
               << " bound=" << hard_bound << " ";
  return {5, "degree-bound", check.ok, check.detail.str(), 0.0};
}

CriterionResult criterion_6() {
  Check check;
  struct Point {
    std::uint64_t n;
    double observed;
    double se;
    double bound;
  };
  std::vector<Point> points;
  for (std::uint64_t n : {500u, 1000u, 2000u}) {
    const SimConfig cfg = penalty_config(n, 600 + n);
    const harness::MetricsReport report = harness::run_experiment(cfg);
    double var = 0.0;
    const double scale = 1e6 * static_cast<double>(n);
    for (const CheckpointStats& cp : report.series) {
      const double d = static_cast<double>(cp.penalty_fraction_ppm) / scale -
                       report.mean_penalty_fraction;
      var += d * d;
    }
    var /= static_cast<double>(report.series.size() - 1);
    const double se = std::sqrt(var / static_cast<double>(report.series.size()));
    const double bound =
        analytics::expected_penalty_bound(n, cfg.alpha, cfg.phi);
    points.push_back({n, report.mean_penalty_fraction, se, bound});
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    check.require(points[i].observed <= points[i].bound + 4.0 * points[i].se,
                  "below harmonic bound at N=" + std::to_string(points[i].n));
    if (i > 0) {
      check.require(points[i].observed < points[i - 1].observed,
                    "strict decrease at N=" + std::to_string(points[i].n));
    }
    check.detail << "N" << points[i].n << "=" << points[i].observed
                 << " bound=" << points[i].bound << " ";
  }
  return {6, "penalty-decay", check.ok, check.detail.str(), 0.0};
}

CriterionResult criterion_7() {
  Check check;

  {
    Engine engine(soundness_config(500, 5, 777));
    engine.run();
    audit_ledger_safety(engine, "soundness", check);
  }
  {
    Engine engine(penalty_config(500, 778));
    engine.run();
    audit_ledger_safety(engine, "penalty", check);
  }
  for (const AttackScenario scenario :
       {AttackScenario::double_spend, AttackScenario::sybil_flood,
        AttackScenario::resource_theft, AttackScenario::long_delay}) {
    SimConfig cfg = default_config();
    cfg.trader_count = 200;
    cfg.alpha = 0.2;
    cfg.kappa = 5;
    cfg.checkpoints = 6;
    cfg.seed = 7000 + static_cast<std::uint64_t>(scenario);
    cfg.fractal_min = 2;
    cfg.fractal_max = 6;
    cfg.attack = scenario;
    cfg.adversary.sybil_budget = Ara::from_units(7);
    if (scenario == AttackScenario::long_delay) {
      ServiceSpec slow{900, "slow", Ara::from_units(1), 3, 3, 3};
      cfg.service_catalog.push_back(slow);
    }
    Engine engine(cfg);
    engine.run();
    audit_ledger_safety(engine, std::string(to_string(scenario)), check);
  }
  check.detail << "runs=6 ";
  return {7, "ledger-safety", check.ok, check.detail.str(), 0.0};
}

CriterionResult criterion_8() {
  Check check;
  SimConfig base = default_config();
  base.trader_count = 400;
  base.alpha = 0.2;
  base.kappa = 5;
  base.checkpoints = 6;
  base.fractal_min = 2;
  base.fractal_max = 6;
  base.seed = 8001;

  {
    const auto report = harness::run_attack(base, AttackScenario::double_spend);
    check.require(report.holds, "double_spend: exactly one submission");
    check.detail << "double_spend{" << report.detail << "} ";
  }
  {
    SimConfig cfg = base;
    cfg.adversary.sybil_budget = Ara::parse("7.5");
    const auto report = harness::run_attack(cfg, AttackScenario::sybil_flood);
    check.require(report.holds, "sybil_flood: identities and balance");
    check.require(report.sybil_identities == 7, "sybil_flood: floor(b/cheapest)");
    check.detail << "sybil{" << report.detail << "} ";
  }
  {
    SimConfig cfg = base;
    cfg.adversary.sybil_budget = Ara::parse("0.5");
    const auto report = harness::run_attack(cfg, AttackScenario::sybil_flood);
    check.require(report.sybil_identities == 0, "sybil_flood: budget below cheapest");
  }
  {
    SimConfig cfg = base;
    cfg.trader_count = 2000;
    cfg.kappa = 25;
    const auto report =
        harness::run_attack(cfg, AttackScenario::centralization_probe);
    check.require(report.majority_captures == 0, "probe: zero captures in 1e5");
    check.require(report.predicted_capture_rate > 1.4e-7 &&
                      report.predicted_capture_rate < 1.8e-7,
                  "probe: predicted rate near 1.6e-7");
    check.detail << "probe{" << report.detail << "} ";
  }
  return {8, "attack-outcomes", check.ok, check.detail.str(), 0.0};
}

CriterionResult criterion_9() {
  Check check;
  SimConfig cfg = default_config();
  cfg.trader_count = 300;
  cfg.alpha = 0.25;
  cfg.kappa = 5;
  cfg.ell = 3;
  cfg.rounds_r = 2;
  cfg.fractal_min = 2;
  cfg.fractal_max = 6;
  cfg.checkpoints = 5;
  cfg.seed = 90042;
  cfg.adversary.withhold_service_prob = 0.3;
  cfg.adversary.false_dissent_prob = 0.1;
  cfg.adversary.vt_misvote_prob = 0.25;

  auto run_once = [&](std::string& events, std::string& metrics, std::string& summary) {
    std::ostringstream event_sink;
    const auto report = harness::run_experiment(cfg, &event_sink);
    events = event_sink.str();
    std::ostringstream metrics_sink;
    harness::write_metrics_csv(report, metrics_sink);
    metrics = metrics_sink.str();
    std::ostringstream summary_sink;
    harness::write_summary(report, summary_sink);
    summary = summary_sink.str();
  };

  std::string events_a, metrics_a, summary_a;
  std::string events_b, metrics_b, summary_b;
  run_once(events_a, metrics_a, summary_a);
  run_once(events_b, metrics_b, summary_b);

  check.require(!events_a.empty(), "event log non-empty");
  check.require(events_a == events_b, "event logs byte-identical");
  check.require(metrics_a == metrics_b, "metrics byte-identical");
  check.require(summary_a == summary_b, "summaries byte-identical");
  check.detail << "event_bytes=" << events_a.size() << " ";
  return {9, "determinism", check.ok, check.detail.str(), 0.0};
}

double limit_for(int id) {
  switch (id) {
    case 1: return 5.0;        // stated
    case 2: return 120.0;      // stated
    case 3: return 60.0;       // stated
    case 4: return 60.0;       // stated
    case 5: return 120.0;      // stated
    case 6: return 300.0;      // stated
    default: return 0.0;       // unbounded
  }
}

}  // namespace

CriterionResult run_criterion(int id) {
  const auto start = SteadyClock::now();
  CriterionResult result;
  switch (id) {
    case 1: result = criterion_1(); break;
    case 2: result = criterion_2(); break;
    case 3: result = criterion_3(); break;
    case 4: result = criterion_4(); break;
    case 5: result = criterion_5(); break;
    case 6: result = criterion_6(); break;
    case 7: result = criterion_7(); break;
    case 8: result = criterion_8(); break;
    case 9: result = criterion_9(); break;
    default:
      throw std::invalid_argument("unknown acceptance criterion " +
                                  std::to_string(id));
  }
  result.seconds =
      std::chrono::duration<double>(SteadyClock::now() - start).count();
  const double limit = limit_for(id);
  if (limit > 0 && result.seconds > limit) {
    result.passed = false;
    result.detail += "FAILED[runtime " + std::to_string(result.seconds) +
                     "s over " + std::to_string(limit) + "s] ";
  }
  return result;
}

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) results.push_back(run_criterion(id));
  return results;
}

std::string format_result(const CriterionResult& result) {
  std::ostringstream os;
  os << (result.passed ? "[PASS] " : "[FAIL] ") << result.id << " " << result.name
     << ": " << result.detail << "(" << result.seconds << "s)";
  return os.str();
}

}  // namespace lor::accept
