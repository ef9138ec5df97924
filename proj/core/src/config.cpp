#include "lor/config.hpp"

#include <algorithm>
#include <sstream>

namespace lor {

std::string SimConfig::validate() const {
  if (trader_count < 2) return "N: need at least two traders";
  if (!(alpha >= 0.0) || alpha >= 0.5) return "alpha: must satisfy 0 <= alpha < 0.5";
  if (kappa < 3) return "kappa: must be >= 3";
  if (kappa % 2 == 0) return "kappa: must be odd";
  if (kappa > trader_count) return "kappa: must not exceed N";
  if (ell < 1) return "ell: must be >= 1";
  if (rounds_r < 1) return "rounds_R: must be >= 1";
  if (fractal_min < 1 || fractal_min > fractal_max)
    return "fractal: need 1 <= fractal_min <= fractal_max";
  if (fee_ppm < 0 || fee_ppm > 1'000'000) return "fee_percent: must be in [0, 1]";
  if (bonus_ppm < 0) return "bonus_rate: must be >= 0";
  if (phi.c_ppm < 0) return "phi.c: must be >= 0";
  if (genesis_balance.is_negative()) return "genesis_balance: must be >= 0";
  if (service_catalog.empty()) return "service_catalog: must not be empty";
  for (const auto& s : service_catalog) {
    if (!s.unit_price.is_positive()) return "service." + s.name + ": unit_price must be > 0";
    if (s.ring_min < 2 || s.ring_min > s.ring_max)
      return "service." + s.name + ": need 2 <= ring_min <= ring_max";
    if (s.rounds_factor < 1) return "service." + s.name + ": rounds_factor must be >= 1";
  }
  if (!adversary.valid()) return "adversary: probabilities must lie in [0, 1]";
  return "";
}

Ara SimConfig::cheapest_price() const {
  Ara cheapest = service_catalog.front().unit_price;
  for (const auto& s : service_catalog) cheapest = std::min(cheapest, s.unit_price);
  return cheapest;
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string SimConfig::canonical() const {
  std::ostringstream os;
  os << "N=" << trader_count << "\n";
  os << "alpha=" << fmt_double(alpha) << "\n";
  os << "kappa=" << kappa << "\n";
  os << "ell=" << ell << "\n";
  os << "rounds_R=" << rounds_r << "\n";
  os << "phi.mode=" << to_string(phi.mode) << "\n";
  os << "phi.c_ppm=" << phi.c_ppm << "\n";
  os << "fractal.min=" << fractal_min << "\n";
  os << "fractal.max=" << fractal_max << "\n";
  os << "K=" << fmt_double(k_regulator) << "\n";
  os << "gamma=" << fmt_double(gamma) << "\n";
  os << "expected_psi=" << fmt_double(expected_psi) << "\n";
  os << "seed=" << seed << "\n";
  os << "checkpoints=" << checkpoints << "\n";
  os << "fee_ppm=" << fee_ppm << "\n";
  os << "bonus_ppm=" << bonus_ppm << "\n";
  os << "genesis_balance=" << genesis_balance.str() << "\n";
  os << "ring_model=" << (ring_model == RingModel::catalog ? "catalog" : "permutation")
     << "\n";
  for (const auto& s : service_catalog) {
    os << "service." << s.id << "=" << s.name << "," << s.unit_price.str() << ","
       << s.ring_min << "," << s.ring_max << "," << s.rounds_factor << "\n";
  }
  os << "adversary.withhold=" << fmt_double(adversary.withhold_service_prob) << "\n";
  os << "adversary.false_dissent=" << fmt_double(adversary.false_dissent_prob) << "\n";
  os << "adversary.misvote=" << fmt_double(adversary.vt_misvote_prob) << "\n";
  os << "adversary.double_submit=" << (adversary.attempt_double_submit ? 1 : 0) << "\n";
  os << "adversary.sybil_budget=" << adversary.sybil_budget.str() << "\n";
  os << "attack=" << to_string(attack) << "\n";
  os << "attack_checkpoint=" << attack_checkpoint << "\n";
  return os.str();
}

SimConfig default_config() {
  SimConfig cfg;
  cfg.service_catalog.push_back(
      ServiceSpec{0, "general", Ara::from_units(1), 3, 3, 1});
  return cfg;
}

}  // namespace lor
