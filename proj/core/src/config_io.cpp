#include "lor/config_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lor/penalty.hpp"

namespace lor::harness {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::uint64_t parse_u64(std::string_view v, std::size_t line) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    fail(line, "expected an unsigned integer, got '" + std::string(v) + "'");
  return out;
}

double parse_double(std::string_view v, std::size_t line) {
  try {
    std::size_t used = 0;
    const double out = std::stod(std::string(v), &used);
    if (used != v.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + std::string(v) + "'");
  }
}

// Decimal fraction -> parts per million, exact.
std::int64_t parse_ppm(std::string_view v, std::size_t line) {
  try {
    return Ara::parse(v).micro();
  } catch (const std::exception& e) {
    fail(line, std::string("bad fraction: ") + e.what());
  }
}

Ara parse_ara(std::string_view v, std::size_t line) {
  try {
    return Ara::parse(v);
  } catch (const std::exception& e) {
    fail(line, std::string("bad amount: ") + e.what());
  }
}

bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  fail(line, "expected 0/1/true/false, got '" + std::string(v) + "'");
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig cfg = default_config();
  std::map<std::uint32_t, ServiceSpec> services;
  bool explicit_rounds = false;
  bool explicit_services = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");

    if (key == "N") {
      cfg.trader_count = parse_u64(value, line_no);
    } else if (key == "alpha") {
      cfg.alpha = parse_double(value, line_no);
    } else if (key == "kappa") {
      cfg.kappa = static_cast<std::uint32_t>(parse_u64(value, line_no));
    } else if (key == "ell") {
      cfg.ell = static_cast<std::uint32_t>(parse_u64(value, line_no));
    } else if (key == "rounds_R") {
      cfg.rounds_r = static_cast<std::uint32_t>(parse_u64(value, line_no));
      explicit_rounds = true;
    } else if (key == "phi.mode") {
      if (value == "per_round_R") cfg.phi.mode = PenaltyMode::per_round_R;
      else if (value == "inverse_square") cfg.phi.mode = PenaltyMode::inverse_square;
      else if (value == "constant") cfg.phi.mode = PenaltyMode::constant;
      else fail(line_no, "unknown phi.mode '" + std::string(value) + "'");
    } else if (key == "phi.c") {
      cfg.phi.c_ppm = parse_ppm(value, line_no);
    } else if (key == "fractal.min") {
      cfg.fractal_min = static_cast<std::uint32_t>(parse_u64(value, line_no));
    } else if (key == "fractal.max") {
      cfg.fractal_max = static_cast<std::uint32_t>(parse_u64(value, line_no));
    } else if (key == "K") {
      cfg.k_regulator = parse_double(value, line_no);
    } else if (key == "gamma") {
      cfg.gamma = parse_double(value, line_no);
    } else if (key == "expected_psi") {
      cfg.expected_psi = parse_double(value, line_no);
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, line_no);
    } else if (key == "checkpoints") {
      cfg.checkpoints = parse_u64(value, line_no);
    } else if (key == "fee_percent") {
      cfg.fee_ppm = parse_ppm(value, line_no);
    } else if (key == "bonus_rate") {
      cfg.bonus_ppm = parse_ppm(value, line_no);
    } else if (key == "genesis_balance") {
      cfg.genesis_balance = parse_ara(value, line_no);
    } else if (key == "ring_model") {
      if (value == "catalog") cfg.ring_model = RingModel::catalog;
      else if (value == "permutation") cfg.ring_model = RingModel::permutation;
      else fail(line_no, "unknown ring_model '" + std::string(value) + "'");
    } else if (key == "attack") {
      const auto scenario = parse_attack_scenario(value);
      if (!scenario) fail(line_no, "unknown attack '" + std::string(value) + "'");
      cfg.attack = *scenario;
    } else if (key == "attack_checkpoint") {
      cfg.attack_checkpoint = parse_u64(value, line_no);
    } else if (key == "adversary.withhold") {
      cfg.adversary.withhold_service_prob = parse_double(value, line_no);
    } else if (key == "adversary.false_dissent") {
      cfg.adversary.false_dissent_prob = parse_double(value, line_no);
    } else if (key == "adversary.misvote") {
      cfg.adversary.vt_misvote_prob = parse_double(value, line_no);
    } else if (key == "adversary.double_submit") {
      cfg.adversary.attempt_double_submit = parse_bool(value, line_no);
    } else if (key == "adversary.sybil_budget") {
      cfg.adversary.sybil_budget = parse_ara(value, line_no);
    } else if (key.starts_with("service.")) {
      // service.<id>.<field>
      const auto rest = key.substr(8);
      const auto dot = rest.find('.');
      if (dot == std::string::npos) fail(line_no, "expected service.<id>.<field>");
      std::uint32_t sid = 0;
      try {
        sid = static_cast<std::uint32_t>(std::stoul(rest.substr(0, dot)));
      } catch (const std::exception&) {
        fail(line_no, "bad service id in '" + key + "'");
      }
      explicit_services = true;
      auto& spec = services[sid];
      spec.id = sid;
      if (spec.name.empty()) spec.name = "service" + std::to_string(sid);
      const std::string field = rest.substr(dot + 1);
      if (field == "name") spec.name = std::string(value);
      else if (field == "unit_price") spec.unit_price = parse_ara(value, line_no);
      else if (field == "ring_min") spec.ring_min = static_cast<std::uint32_t>(parse_u64(value, line_no));
      else if (field == "ring_max") spec.ring_max = static_cast<std::uint32_t>(parse_u64(value, line_no));
      else if (field == "rounds_factor") spec.rounds_factor = static_cast<std::uint32_t>(parse_u64(value, line_no));
      else fail(line_no, "unknown service field '" + field + "'");
    } else {
      fail(line_no, "unknown key '" + key + "'");
    }
  }

  if (explicit_services) {
    cfg.service_catalog.clear();
    for (auto& [sid, spec] : services) cfg.service_catalog.push_back(spec);
  }

  const bool derive_rounds =
      cfg.expected_psi > 0 || cfg.k_regulator > 0 || cfg.gamma > 0;
  if (derive_rounds) {
    if (explicit_rounds)
      throw std::invalid_argument(
          "config: rounds_R conflicts with expected_psi/K/gamma derivation");
    cfg.rounds_r = compute_round_count(cfg.expected_psi, cfg.k_regulator, cfg.gamma);
  }

  const std::string problem = cfg.validate();
  if (!problem.empty()) throw std::invalid_argument("config: " + problem);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace lor::harness
