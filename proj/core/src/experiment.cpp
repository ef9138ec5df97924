#include "lor/experiment.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "lor/analytics.hpp"
#include "lor/hash_draw.hpp"

namespace lor::harness {

std::string derive_run_id(const SimConfig& config) {
  const rng::Digest digest = rng::sha256(config.canonical());
  static constexpr char hex[] = "0123456789abcdef";
  std::string id = "run-";
  for (int i = 0; i < 8; ++i) {
    id.push_back(hex[digest[i] >> 4]);
    id.push_back(hex[digest[i] & 0xf]);
  }
  return id;
}

MetricsReport run_experiment(const SimConfig& config, std::ostream* event_sink) {
  Engine engine(config, event_sink);
  engine.run();

  MetricsReport report;
  report.config = config;
  report.run_id = derive_run_id(config);
  report.series = engine.stats();

  double degree_sum = 0.0;
  std::uint64_t penalty_ppm = 0;
  for (const CheckpointStats& cp : report.series) {
    report.team_decisions += cp.team_decisions;
    report.wrong_votes += cp.wrong_votes;
    report.terminations += cp.terminations;
    report.submissions += cp.submissions;
    report.rejections += cp.rejections;
    report.payouts += cp.payouts;
    report.burned += cp.burned;
    degree_sum += cp.mean_degree;
    penalty_ppm += cp.penalty_fraction_ppm;
    for (const auto& [size, count] : cp.ring_sizes_started)
      report.ring_sizes_started[size] += count;
  }
  if (!report.series.empty()) {
    report.mean_degree = degree_sum / static_cast<double>(report.series.size());
    report.mean_penalty_fraction =
        static_cast<double>(penalty_ppm) / 1e6 /
        static_cast<double>(config.trader_count) /
        static_cast<double>(report.series.size());
  }
  report.degree_histogram = engine.final_degree_histogram();

  if (!engine.attacker_identities().empty()) {
    const TraderId attacker = *engine.attacker_identities().begin();
    report.attacker_delta =
        engine.tcb().trader(attacker).balance - config.genesis_balance;
  }
  report.sybil_identities = engine.sybil_identities();
  report.postponements = engine.postponements();

  report.conservation_residual = engine.tcb().conservation_residual();
  if (!report.conservation_residual.is_zero())
    throw std::logic_error("run_experiment: ARA conservation violated, residual " +
                           report.conservation_residual.str());
  return report;
}

void write_metrics_csv(const MetricsReport& report, std::ostream& out) {
  out << "run_id,checkpoint,metric,value\n";
  auto row = [&](std::uint64_t cp, std::string_view metric, const std::string& value) {
    out << report.run_id << ',' << cp << ',' << metric << ',' << value << '\n';
  };
  for (const CheckpointStats& cp : report.series) {
    row(cp.checkpoint, "submissions", std::to_string(cp.submissions));
    row(cp.checkpoint, "rejections", std::to_string(cp.rejections));
    row(cp.checkpoint, "team_decisions", std::to_string(cp.team_decisions));
    row(cp.checkpoint, "wrong_votes", std::to_string(cp.wrong_votes));
    row(cp.checkpoint, "terminations", std::to_string(cp.terminations));
    row(cp.checkpoint, "active_rings", std::to_string(cp.active_rings));
    row(cp.checkpoint, "active_fractals", std::to_string(cp.active_fractals));
    row(cp.checkpoint, "payouts", cp.payouts.str());
    row(cp.checkpoint, "burned", cp.burned.str());
    row(cp.checkpoint, "penalty_fraction_ppm", std::to_string(cp.penalty_fraction_ppm));
    {
      std::ostringstream os;
      os << std::setprecision(17) << cp.mean_degree;
      row(cp.checkpoint, "mean_degree", os.str());
    }
    row(cp.checkpoint, "team_fractal_overlap", std::to_string(cp.team_fractal_overlap));
  }
}

void write_summary(const MetricsReport& report, std::ostream& out) {
  out << "run_id=" << report.run_id << "\n";
  out << "seed=" << report.config.seed << "\n";
  out << "checkpoints=" << report.series.size() << "\n";
  out << "team_decisions=" << report.team_decisions << "\n";
  out << "wrong_votes=" << report.wrong_votes << "\n";
  out << "terminations=" << report.terminations << "\n";
  out << "submissions=" << report.submissions << "\n";
  out << "rejections=" << report.rejections << "\n";
  out << "payouts=" << report.payouts.str() << "\n";
  out << "burned=" << report.burned.str() << "\n";
  out << std::setprecision(17);
  out << "mean_degree=" << report.mean_degree << "\n";
  out << "mean_penalty_fraction=" << report.mean_penalty_fraction << "\n";
  out << "attacker_delta=" << report.attacker_delta.str() << "\n";
  out << "sybil_identities=" << report.sybil_identities << "\n";
  out << "postponements=" << report.postponements << "\n";
  out << "conservation_residual=" << report.conservation_residual.str() << "\n";
  out << "degree_histogram=";
  bool first = true;
  for (const auto& [degree, count] : report.degree_histogram) {
    out << (first ? "" : ",") << degree << ":" << count;
    first = false;
  }
  out << "\n";
  out << "ring_sizes=";
  first = true;
  for (const auto& [size, count] : report.ring_sizes_started) {
    out << (first ? "" : ",") << size << ":" << count;
    first = false;
  }
  out << "\n";
}

std::vector<DeviationRow> compare_to_theory(const MetricsReport& report) {
  const SimConfig& cfg = report.config;
  std::vector<DeviationRow> rows;

  // Wrong-vote rate vs the exact binomial tail. A team member votes against
  // ground truth only when a wrongdoer misvotes, so the effective per-member
  // error rate is alpha * misvote.
  {
    DeviationRow row;
    row.metric = "wrong_vote_rate";
    const double q = cfg.alpha * cfg.adversary.vt_misvote_prob;
    row.predicted = analytics::exact_wrong_vote_prob(cfg.kappa, q);
    if (report.team_decisions == 0) {
      row.note = "no team decisions";
    } else {
      row.observed = static_cast<double>(report.wrong_votes) /
                     static_cast<double>(report.team_decisions);
      const double se = std::sqrt(row.predicted * (1.0 - row.predicted) /
                                  static_cast<double>(report.team_decisions));
      if (se > 0) {
        row.z = (row.observed - row.predicted) / se;
        row.applicable = true;
      } else {
        row.note = "zero-variance prediction";
        row.applicable = row.observed == row.predicted;
        row.z = 0.0;
      }
    }
    rows.push_back(row);
  }

  // Ring-size census vs lambda_i = ell / i; meaningful only when rings come
  // from the permutation model.
  const std::uint64_t checkpoints = report.series.size();
  for (std::uint32_t size = 2; size <= 6; ++size) {
    DeviationRow row;
    row.metric = "ring_count_size_" + std::to_string(size);
    row.predicted = analytics::expected_cycle_count(cfg.ell, size);
    if (cfg.ring_model != RingModel::permutation) {
      row.note = "ring model is catalog";
    } else if (checkpoints == 0) {
      row.note = "no checkpoints";
    } else {
      auto it = report.ring_sizes_started.find(size);
      const double total = it == report.ring_sizes_started.end()
                               ? 0.0
                               : static_cast<double>(it->second);
      row.observed = total / static_cast<double>(checkpoints);
      const double se =
          std::sqrt(row.predicted / static_cast<double>(checkpoints));
      row.z = (row.observed - row.predicted) / se;
      row.applicable = true;
    }
    rows.push_back(row);
  }

  // Mean degree vs the kappa + 2 ell - 1 + E(mu) envelope.
  {
    DeviationRow row;
    row.metric = "mean_degree";
    row.predicted = cfg.kappa + 2.0 * cfg.ell - 1.0 +
                    analytics::expected_extra_degree_paper(cfg.ell);
    if (checkpoints < 2) {
      row.note = "need >= 2 checkpoints";
    } else {
      row.observed = report.mean_degree;
      double var = 0.0;
      for (const CheckpointStats& cp : report.series) {
        const double d = cp.mean_degree - report.mean_degree;
        var += d * d;
      }
      var /= static_cast<double>(checkpoints - 1);
      const double se = std::sqrt(var / static_cast<double>(checkpoints));
      row.z = se > 0 ? (row.observed - row.predicted) / se : 0.0;
      row.applicable = true;
      row.note = "theory value is an upper envelope";
    }
    rows.push_back(row);
  }

  // Mean penalty fraction vs the harmonic-number bound (per checkpoint the
  // engine runs ell permutation slices).
  {
    DeviationRow row;
    row.metric = "mean_penalty_fraction";
    if (cfg.phi.mode != PenaltyMode::inverse_square) {
      row.note = "needs inverse-square penalty schedule";
    } else if (cfg.ring_model != RingModel::permutation) {
      row.note = "ring model is catalog";
    } else if (checkpoints == 0) {
      row.note = "no checkpoints";
    } else {
      row.predicted = cfg.ell * analytics::expected_penalty_bound(
                                    cfg.trader_count, cfg.alpha, cfg.phi);
      row.observed = report.mean_penalty_fraction;
      double var = 0.0;
      const double scale =
          1e6 * static_cast<double>(cfg.trader_count);
      for (const CheckpointStats& cp : report.series) {
        const double d = static_cast<double>(cp.penalty_fraction_ppm) / scale -
                         report.mean_penalty_fraction;
        var += d * d;
      }
      var /= std::max<double>(1.0, static_cast<double>(checkpoints - 1));
      const double se = std::sqrt(var / static_cast<double>(checkpoints));
      row.z = se > 0 ? (row.observed - row.predicted) / se : 0.0;
      row.applicable = true;
      row.note = "theory value is an upper bound";
    }
    rows.push_back(row);
  }

  return rows;
}

void write_deviations_csv(const std::vector<DeviationRow>& rows, std::ostream& out) {
  out << "metric,observed,predicted,z,applicable,note\n";
  out << std::setprecision(12);
  for (const DeviationRow& row : rows) {
    out << row.metric << ',' << row.observed << ',' << row.predicted << ','
        << row.z << ',' << (row.applicable ? 1 : 0) << ',' << row.note << '\n';
  }
}

}  // namespace lor::harness
