// Copyright 2026 The wgbragg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "wgbragg/closed_form.hpp"
#include "wgbragg/errors.hpp"
#include "wgbragg/fit.hpp"
#include "wgbragg/lindblad.hpp"
#include "wgbragg/model.hpp"
#include "wgbragg/parallel.hpp"
#include "wgbragg/scan.hpp"
#include "wgbragg/steady_state.hpp"
#include "wgbragg/version.hpp"
#include "wgbragg/voids.hpp"

namespace wgbragg::cli {
namespace {

using nlohmann::json;

constexpr double kDefaultBeta = 0.0707;
constexpr double kDefaultDirectionality = 1.0;
constexpr int kDefaultOrder = 2;
constexpr double kDefaultEta = 0.5;
constexpr long long kDefaultConfigs = 1000;

template <class T>
struct Field {
  const char* key;
  const char* flag;
  const char* help;
  std::optional<T> RunConfig::*member;
};

const Field<double> kDoubleFields[] = {
    {"a", "--a", "lattice constant (wavelengths)", &RunConfig::a},
    {"neff", "--neff", "effective index of the guided mode", &RunConfig::neff},
    {"omega", "--omega", "Rabi frequency (units of Gamma)", &RunConfig::omega},
    {"delta", "--delta", "detuning (units of Gamma)", &RunConfig::delta},
    {"beta", "--beta", "guided fraction gamma_r + gamma_l", &RunConfig::beta},
    {"d", "--d", "directionality (gamma_r - gamma_l) / beta", &RunConfig::d},
    {"gamma_r", "--gamma-r", "decay rate into the right-moving mode", &RunConfig::gamma_r},
    {"gamma_l", "--gamma-l", "decay rate into the left-moving mode", &RunConfig::gamma_l},
    {"gamma_u", "--gamma-u", "decay rate into unguided modes", &RunConfig::gamma_u},
    {"eta", "--eta", "filling fraction for arrays with voids", &RunConfig::eta},
};

const Field<long long> kIntegerFields[] = {
    {"m", "--m", "Bragg order", &RunConfig::m},
    {"seed", "--seed", "random seed", &RunConfig::seed},
    {"configs", "--configs", "number of void configurations", &RunConfig::configs},
    {"threads", "--threads", "worker threads", &RunConfig::threads},
};

const Field<std::string> kStringFields[] = {
    {"command", nullptr, nullptr, &RunConfig::command},
    {"theta", "--theta", "drive angle: radians or gb, gb+x, gb-x, mb, mb+x", &RunConfig::theta},
    {"n", "--n", "number of atoms: N or start:stop:step", &RunConfig::n},
    {"delta_grid", "--delta-grid", "detuning grid start:stop:count", &RunConfig::delta_grid},
    {"theta_grid", "--theta-grid", "angle grid start:stop:count (tokens allowed)",
     &RunConfig::theta_grid},
    {"tier", "--tier", "closed | linear | lindblad", &RunConfig::tier},
    {"policy", "--policy", "scaling policy: gb | mb | fixed", &RunConfig::policy},
    {"betas", "--betas", "comma-separated beta sweep for voids", &RunConfig::betas},
    {"output", "--output", "output path (stdout when omitted)", &RunConfig::output},
    {"format", "--format", "csv | json", &RunConfig::format},
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, std::string_view what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw ValidationError("invalid number for " + std::string(what) + ": '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& text, std::string_view what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ValidationError("invalid integer for " + std::string(what) + ": '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

void check_single_form(const RunConfig& c, std::string_view source) {
  if (c.has_beta_form() && c.has_rate_form()) {
    throw ValidationError(std::string(source) +
                          ": couplings given both as beta/d and as gamma_r/gamma_l/gamma_u");
  }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t stop = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// ---- resolution -----------------------------------------------------------

ChannelRates resolve_rates(const RunConfig& c) {
  check_single_form(c, "couplings");
  if (c.has_rate_form()) {
    return {c.gamma_r.value_or(0.0), c.gamma_l.value_or(0.0), c.gamma_u.value_or(0.0)};
  }
  return rates_from_beta(c.beta.value_or(kDefaultBeta), c.d.value_or(kDefaultDirectionality));
}

std::vector<std::size_t> resolve_n(const RunConfig& c, const std::string& fallback) {
  const std::string text = c.n.value_or(fallback);
  const auto parts = split(text, ':');
  std::vector<std::size_t> out;
  if (parts.size() == 1) {
    const long long v = parse_integer(parts[0], "--n");
    if (v < 1) throw ValidationError("--n must be at least 1");
    out.push_back(static_cast<std::size_t>(v));
    return out;
  }
  if (parts.size() != 3) throw ValidationError("--n expects N or start:stop:step, got '" + text + "'");
  const long long start = parse_integer(parts[0], "--n start");
  const long long stop = parse_integer(parts[1], "--n stop");
  const long long step = parse_integer(parts[2], "--n step");
  if (start < 1 || stop < start || step < 1) {
    throw ValidationError("--n range needs 1 <= start <= stop and step >= 1");
  }
  for (long long v = start; v <= stop; v += step) out.push_back(static_cast<std::size_t>(v));
  return out;
}

std::size_t single_n(const RunConfig& c, const std::string& fallback) {
  const auto ns = resolve_n(c, fallback);
  if (ns.size() != 1) throw ValidationError("this command takes a single --n");
  return ns.front();
}

int resolve_order(const RunConfig& c) {
  const long long m = c.m.value_or(kDefaultOrder);
  if (m < -1000 || m > 1000) throw ValidationError("--m out of range");
  return static_cast<int>(m);
}

ModelParams resolve_chain(const RunConfig& c, std::size_t n) {
  const ModelParams p =
      make_chain(n, c.a.value_or(1.0), c.neff.value_or(1.2), resolve_rates(c), c.omega.value_or(0.01));
  return p.with_drive(0.0, c.delta.value_or(0.0));
}

/// gb, mb, gb+x, gb-x, mb+x, mb-x or a plain number of radians.
double resolve_theta(const std::string& token, int m, double delta, const ModelParams& params) {
  if (token.size() >= 2 && (token.rfind("gb", 0) == 0 || token.rfind("mb", 0) == 0)) {
    const bool gb = token[0] == 'g';
    const double base = gb ? closed::geometric_bragg_angle(m, params)
                           : closed::modified_bragg_angle(m, delta, params);
    if (token.size() == 2) return base;
    if (token[2] != '+' && token[2] != '-') {
      throw ValidationError("bad angle token '" + token + "'");
    }
    const double offset = parse_double(token.substr(3), "angle offset");
    return token[2] == '+' ? base + offset : base - offset;
  }
  return parse_double(token, "angle");
}

std::vector<double> resolve_grid(const std::string& text, std::string_view what,
                                 const std::function<double(const std::string&)>& value) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw ValidationError(std::string(what) + " expects start:stop:count, got '" + text + "'");
  }
  const double start = value(parts[0]);
  const double stop = value(parts[1]);
  const long long count = parse_integer(parts[2], what);
  if (count < 1) throw ValidationError(std::string(what) + " count must be at least 1");
  if (count > 1 && !(stop > start)) {
    throw ValidationError(std::string(what) + " needs stop > start");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] =
        count == 1 ? start
                   : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

Tier resolve_tier(const RunConfig& c, const ModelParams& params) {
  if (c.tier) return parse_tier(*c.tier);
  return params.gamma_l() == 0.0 ? Tier::closed : Tier::linear;
}

std::size_t resolve_threads(const RunConfig& c) {
  if (c.threads) {
    if (*c.threads < 1) throw ValidationError("--threads must be at least 1");
    return static_cast<std::size_t>(*c.threads);
  }
  return default_thread_count();
}

// ---- tables ---------------------------------------------------------------

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::pair<std::string, json>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void add_param_metadata(Table& t, const ModelParams& p) {
  t.metadata.emplace_back("a", p.a());
  t.metadata.emplace_back("neff", p.n_eff());
  t.metadata.emplace_back("omega", p.omega());
  t.metadata.emplace_back("delta", p.delta());
  t.metadata.emplace_back("gamma_r", p.gamma_r());
  t.metadata.emplace_back("gamma_l", p.gamma_l());
  t.metadata.emplace_back("gamma_u", p.gamma_u());
}

std::string render_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

std::string render_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    return std::isfinite(*d) ? json(*d) : json(nullptr);
  }
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  return std::get<std::string>(cell);
}

std::string render(const Table& t, const RunConfig& config, bool as_json) {
  std::ostringstream out;
  if (as_json) {
    json doc;
    json meta = json::object();
    for (const auto& [k, v] : t.metadata) {
      meta[k] = (v.is_number_float() && !std::isfinite(v.get<double>())) ? json(nullptr) : v;
    }
    doc["metadata"] = meta;
    doc["config"] = to_json(config);
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (const auto& cell : row) r.push_back(cell_json(cell));
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
    return out.str();
  }
  for (const auto& [k, v] : t.metadata) out << "# " << k << ": " << render_scalar(v) << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render_cell(row[i]);
    out << '\n';
  }
  return out.str();
}

void write_output(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
  if (!path || path->empty() || *path == "-") {
    out << text;
    out.flush();
    return;
  }
  const std::filesystem::path target(*path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open '" + tmp.string() + "' for writing");
    f << text;
    f.flush();
    if (!f) throw ValidationError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ValidationError("cannot move output into place at '" + target.string() + "'");
  }
}

Table start_table(const std::string& command, std::uint64_t seed, std::optional<Tier> tier) {
  Table t;
  t.metadata.emplace_back("version", kVersion);
  t.metadata.emplace_back("command", command);
  t.metadata.emplace_back("seed", seed);
  if (tier) t.metadata.emplace_back("tier", std::string(to_string(*tier)));
  return t;
}

std::uint64_t resolve_seed(const RunConfig& c) {
  const long long s = c.seed.value_or(static_cast<long long>(kDefaultSeed));
  if (s < 0) throw ValidationError("--seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

// ---- subcommands ----------------------------------------------------------

Table cmd_spectrum(const RunConfig& c) {
  const std::size_t n = single_n(c, "144");
  const ModelParams p = resolve_chain(c, n);
  const int m = resolve_order(c);
  const double theta = resolve_theta(c.theta.value_or("gb"), m, p.delta(), p);
  const auto grid = resolve_grid(c.delta_grid.value_or("-10:10:401"), "--delta-grid",
                                 [](const std::string& s) { return parse_double(s, "--delta-grid"); });
  const Tier tier = resolve_tier(c, p);
  const ScanResult r = spectrum_scan(theta, grid, tier, p, resolve_threads(c));
  Table t = start_table("spectrum", resolve_seed(c), tier);
  t.metadata.emplace_back("n", n);
  t.metadata.emplace_back("m", m);
  t.metadata.emplace_back("theta", theta);
  add_param_metadata(t, p);
  t.columns = {"delta", "rate_r"};
  const auto& rate = r.observable("rate_r");
  for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], rate[i]});
  return t;
}

Table cmd_map(const RunConfig& c) {
  const std::size_t n = single_n(c, "100");
  const ModelParams p = resolve_chain(c, n);
  const int m = resolve_order(c);
  const auto deltas = resolve_grid(c.delta_grid.value_or("-10:10:201"), "--delta-grid",
                                   [](const std::string& s) { return parse_double(s, "--delta-grid"); });
  const auto thetas =
      resolve_grid(c.theta_grid.value_or("gb-0.1:gb+0.1:201"), "--theta-grid",
                   [&](const std::string& s) { return resolve_theta(s, m, p.delta(), p); });
  const Tier tier = resolve_tier(c, p);
  const ScanResult r = map_scan(thetas, deltas, tier, p, resolve_threads(c));
  Table t = start_table("map", resolve_seed(c), tier);
  t.metadata.emplace_back("n", n);
  t.metadata.emplace_back("m", m);
  add_param_metadata(t, p);
  t.columns = {"theta", "delta", "rate_r"};
  const auto& rate = r.observable("rate_r");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      t.rows.push_back({thetas[i], deltas[j], rate[i * deltas.size() + j]});
    }
  }
  return t;
}

Table cmd_scaling(const RunConfig& c) {
  const auto ns = resolve_n(c, "50:500:10");
  const ModelParams p = resolve_chain(c, ns.front());
  const int m = resolve_order(c);
  const std::string policy_name = c.policy.value_or("mb");
  ScalingPolicy policy;
  if (policy_name == "gb") {
    policy = ScalingPolicy::at_gb(m);
  } else if (policy_name == "mb") {
    policy = ScalingPolicy::at_mb(m);
  } else if (policy_name == "fixed") {
    policy = ScalingPolicy::fixed(resolve_theta(c.theta.value_or("gb"), m, p.delta(), p), p.delta());
  } else {
    throw ValidationError("unknown policy '" + policy_name + "' (gb, mb, fixed)");
  }
  const Tier tier = resolve_tier(c, p);
  const ScanResult r = n_scaling(policy, ns, tier, p, resolve_threads(c));
  Table t = start_table("scaling", resolve_seed(c), tier);
  t.metadata.emplace_back("policy", policy_name);
  t.metadata.emplace_back("m", m);
  if (policy.kind == ScalingPolicy::Kind::fixed) t.metadata.emplace_back("theta", policy.theta);
  add_param_metadata(t, p);

  const auto& dmax = r.observable("delta_max");
  const auto& rmax = r.observable("rate_max");
  const auto& flag = r.observable("boundary_flag");
  std::vector<double> nd, fit_n, fit_d, fit_r;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    nd.push_back(static_cast<double>(ns[i]));
    if (std::isfinite(rmax[i]) && rmax[i] > 0.0 && std::isfinite(dmax[i]) && dmax[i] != 0.0) {
      fit_n.push_back(nd.back());
      fit_d.push_back(std::abs(dmax[i]));
      fit_r.push_back(rmax[i]);
    }
  }
  if (policy.kind != ScalingPolicy::Kind::fixed && fit_n.size() >= 4) {
    const PowerLawFit fd = fit_power_law(fit_n, fit_d);
    const PowerLawFit fr = fit_power_law(fit_n, fit_r);
    t.metadata.emplace_back("delta_exponent", fd.exponent);
    t.metadata.emplace_back("delta_prefactor", fd.prefactor);
    t.metadata.emplace_back("rate_exponent", fr.exponent);
    t.metadata.emplace_back("rate_prefactor", fr.prefactor);
  }
  for (const auto& [k, v] : r.notes) t.metadata.emplace_back(k, v);
  t.columns = {"n", "delta_max", "rate_max", "boundary_flag"};
  for (std::size_t i = 0; i < ns.size(); ++i) {
    t.rows.push_back({static_cast<long long>(ns[i]), dmax[i], rmax[i],
                      static_cast<long long>(flag[i] != 0.0 ? 1 : 0)});
  }
  return t;
}

Table cmd_bragg(const RunConfig& c) {
  const std::size_t n = single_n(c, "144");
  const ModelParams p = resolve_chain(c, n);
  std::vector<int> orders;
  if (c.m) {
    orders.push_back(resolve_order(c));
  } else {
    for (const auto& o : closed::bragg_orders(p)) orders.push_back(o.m);
  }
  Table t = start_table("bragg", resolve_seed(c), std::nullopt);
  t.metadata.emplace_back("n", n);
  if (c.theta) t.metadata.emplace_back("theta", *c.theta);
  add_param_metadata(t, p);
  t.columns = {"m", "theta_gb", "cos_theta_gb", "theta_mb", "cos_theta_mb",
               "b", "b_alias", "n_p", "regime"};
  for (int m : orders) {
    const double theta = resolve_theta(c.theta.value_or("gb"), m, p.delta(), p);
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("drive angle outside [0, pi]");
    const closed::BraggSolution s = closed::bragg_solution(m, theta, p.delta(), p);
    const closed::RegimeLabel label = closed::classify_regime(n, theta, p.delta(), p);
    t.rows.push_back({static_cast<long long>(m), s.theta_gb, s.cos_theta_gb,
                      s.theta_mb.value_or(std::nan("")), s.cos_theta_mb, s.b, s.b_alias, s.period,
                      std::string(closed::to_string(label.regime))});
  }
  return t;
}

Table cmd_voids(const RunConfig& c) {
  const double eta = c.eta.value_or(kDefaultEta);
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("--eta must lie in (0, 1]");
  const long long configs = c.configs.value_or(kDefaultConfigs);
  if (configs < 1) throw ValidationError("--configs must be at least 1");
  const std::uint64_t seed = resolve_seed(c);
  const int m = resolve_order(c);
  const std::size_t threads = resolve_threads(c);

  std::vector<double> betas;
  if (c.betas) {
    if (c.has_rate_form()) throw ValidationError("--betas needs the beta/d coupling form");
    for (const auto& s : split(*c.betas, ',')) betas.push_back(parse_double(s, "--betas"));
    if (betas.empty()) throw ValidationError("--betas is empty");
  }
  const auto ns = resolve_n(c, "50");
  if (!betas.empty() && ns.size() != 1) {
    throw ValidationError("sweep either --betas or an --n range, not both");
  }

  Table t = start_table("voids", seed, std::nullopt);
  t.metadata.emplace_back("eta", eta);
  t.metadata.emplace_back("configs", configs);
  t.metadata.emplace_back("m", m);
  t.metadata.emplace_back("sweep", betas.empty() ? "n" : "beta");
  t.columns = {"beta_or_n", "mean_rate", "std_rate", "robustness_r"};

  auto one = [&](std::size_t n_atoms, const RunConfig& cfg) {
    const double sites_exact = static_cast<double>(n_atoms) / eta;
    const auto n_sites = static_cast<std::size_t>(std::llround(sites_exact));
    if (std::abs(sites_exact - static_cast<double>(n_sites)) > 1e-9 * sites_exact) {
      throw ValidationError("N / eta must be an integer number of sites");
    }
    const ModelParams lattice = resolve_chain(cfg, n_sites);
    const VoidObservable obs =
        cfg.theta ? fixed_observable(resolve_theta(*cfg.theta, m, lattice.delta(), lattice),
                                     lattice.delta())
                  : modified_bragg_observable(n_atoms, eta, m, lattice);
    const Tier tier = resolve_tier(cfg, lattice);
    return std::pair{void_ensemble(lattice, n_atoms, static_cast<std::size_t>(configs), seed, obs,
                                   tier, threads),
                     lattice};
  };

  bool first = true;
  auto record = [&](const std::pair<VoidEnsembleResult, ModelParams>& res, Cell key) {
    if (first) {
      t.metadata.emplace_back("tier", std::string(to_string(res.first.tier)));
      add_param_metadata(t, res.second);
      first = false;
    }
    t.rows.push_back({std::move(key), res.first.mean_rate, res.first.std_rate, res.first.robustness});
  };

  if (!betas.empty()) {
    for (double beta : betas) {
      RunConfig cfg = c;
      cfg.beta = beta;
      record(one(ns.front(), cfg), beta);
    }
  } else {
    for (std::size_t n : ns) record(one(n, c), static_cast<long long>(n));
  }
  return t;
}

Table cmd_oracle(const RunConfig& c) {
  const auto ns = resolve_n(c, "1:3:1");
  const int m = resolve_order(c);
  Table t = start_table("oracle-check", resolve_seed(c), std::nullopt);
  t.metadata.emplace_back("m", m);
  t.columns = {"n", "omega", "rate_linear", "rate_lindblad", "rel_gap"};
  bool first = true;
  for (std::size_t n : ns) {
    const ModelParams base = resolve_chain(c, n);
    const double theta = resolve_theta(c.theta.value_or("gb"), m, base.delta(), base);
    const ModelParams p = base.with_drive(theta, base.delta());
    if (first) {
      t.metadata.emplace_back("theta", theta);
      add_param_metadata(t, p);
      first = false;
    }
    const double linear = SteadyStateSolver(p).right_rate(theta, p.delta());
    const double exact = lindblad::right_rate_exact(p);
    const double gap = linear > 0.0 ? std::abs(exact - linear) / linear : std::abs(exact - linear);
    t.rows.push_back({static_cast<long long>(n), p.omega(), linear, exact, gap});
  }
  return t;
}

using Command = Table (*)(const RunConfig&);

struct CommandInfo {
  const char* name;
  const char* help;
  Command fn;
};

const CommandInfo kCommands[] = {
    {"spectrum", "guided rate versus detuning at one angle", &cmd_spectrum},
    {"map", "guided rate over an (angle, detuning) grid", &cmd_map},
    {"scaling", "peak detuning and rate versus N", &cmd_scaling},
    {"bragg", "Bragg angles, aliasing and regime", &cmd_bragg},
    {"voids", "ensembles of arrays with voids", &cmd_voids},
    {"oracle-check", "linear model against the full master equation", &cmd_oracle},
};

}  // namespace

// ---- config ---------------------------------------------------------------

RunConfig config_from_json(const json& input, std::string_view source) {
  const json& doc =
      (input.is_object() && input.contains("config") && input.contains("metadata")) ? input["config"]
                                                                                   : input;
  if (doc.is_null()) return {};
  if (!doc.is_object()) throw ValidationError(std::string(source) + ": config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : doc.items()) {
    const std::string where = std::string(source) + ": key '" + key + "'";
    bool known = false;
    for (const auto& f : kDoubleFields) {
      if (key != f.key) continue;
      known = true;
      if (!value.is_number()) throw ValidationError(where + " must be a number");
      c.*f.member = value.get<double>();
    }
    for (const auto& f : kIntegerFields) {
      if (key != f.key) continue;
      known = true;
      if (!value.is_number_integer()) throw ValidationError(where + " must be an integer");
      c.*f.member = value.get<long long>();
    }
    for (const auto& f : kStringFields) {
      if (key != f.key) continue;
      known = true;
      if (value.is_string()) {
        c.*f.member = value.get<std::string>();
      } else if (value.is_number_integer()) {
        c.*f.member = std::to_string(value.get<long long>());
      } else if (value.is_number()) {
        c.*f.member = format_double(value.get<double>());
      } else {
        throw ValidationError(where + " must be a string");
      }
    }
    if (!known) throw ValidationError(std::string(source) + ": unknown key '" + key + "'");
  }
  check_single_form(c, source);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); })) {
    return {};
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ValidationError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": parse error");
  }
  return config_from_json(doc, path.string());
}

json to_json(const RunConfig& c) {
  json j = json::object();
  for (const auto& f : kStringFields) {
    if (std::string_view(f.key) == "output" || std::string_view(f.key) == "format") continue;
    if (c.*f.member) j[f.key] = *(c.*f.member);
  }
  for (const auto& f : kDoubleFields) {
    if (c.*f.member) j[f.key] = *(c.*f.member);
  }
  for (const auto& f : kIntegerFields) {
    if (std::string_view(f.key) == "threads") continue;
    if (c.*f.member) j[f.key] = *(c.*f.member);
  }
  return j;
}

RunConfig merge(const RunConfig& base, const RunConfig& top) {
  RunConfig b = base;
  if (top.has_rate_form() && b.has_beta_form()) {
    const ChannelRates r =
        rates_from_beta(b.beta.value_or(kDefaultBeta), b.d.value_or(kDefaultDirectionality));
    b.gamma_r = r.gamma_r;
    b.gamma_l = r.gamma_l;
    b.gamma_u = r.gamma_u;
    b.beta.reset();
    b.d.reset();
  } else if (top.has_beta_form() && b.has_rate_form()) {
    const double gr = b.gamma_r.value_or(0.0);
    const double gl = b.gamma_l.value_or(0.0);
    const double beta = gr + gl;
    b.beta = beta;
    b.d = beta > 0.0 ? (gr - gl) / beta : kDefaultDirectionality;
    b.gamma_r.reset();
    b.gamma_l.reset();
    b.gamma_u.reset();
  }
  RunConfig out = b;
  for (const auto& f : kDoubleFields) {
    if (top.*f.member) out.*f.member = top.*f.member;
  }
  for (const auto& f : kIntegerFields) {
    if (top.*f.member) out.*f.member = top.*f.member;
  }
  for (const auto& f : kStringFields) {
    if (top.*f.member) out.*f.member = top.*f.member;
  }
  return out;
}

// ---- entry point ----------------------------------------------------------

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering of a driven atom array into a waveguide mode", "wgbragg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Bound {
    CLI::App* app;
    const CommandInfo* info;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;
    CLI::Option* config_option = nullptr;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& info : kCommands) {
    auto b = std::make_unique<Bound>();
    b->info = &info;
    b->app = app.add_subcommand(info.name, info.help);
    b->config_option = b->app->add_option("--config", b->config_path, "JSON config file");
    auto bind = [&](const char* key, const char* flag, const char* help) {
      if (flag == nullptr) return;
      b->options[key] = b->app->add_option(flag, b->values[key], help);
    };
    for (const auto& f : kDoubleFields) bind(f.key, f.flag, f.help);
    for (const auto& f : kIntegerFields) bind(f.key, f.flag, f.help);
    for (const auto& f : kStringFields) bind(f.key, f.flag, f.help);
    bound.push_back(std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  const Bound* chosen = nullptr;
  for (const auto& b : bound) {
    if (b->app->parsed()) chosen = b.get();
  }
  if (chosen == nullptr) {
    err << app.help();
    return kExitValidation;
  }

  try {
    RunConfig flags;
    flags.command = chosen->info->name;
    auto given = [&](const char* key) {
      const auto it = chosen->options.find(key);
      return it != chosen->options.end() && it->second->count() > 0;
    };
    for (const auto& f : kDoubleFields) {
      if (given(f.key)) flags.*f.member = parse_double(chosen->values.at(f.key), f.flag);
    }
    for (const auto& f : kIntegerFields) {
      if (given(f.key)) flags.*f.member = parse_integer(chosen->values.at(f.key), f.flag);
    }
    for (const auto& f : kStringFields) {
      if (f.flag != nullptr && given(f.key)) flags.*f.member = chosen->values.at(f.key);
    }
    check_single_form(flags, "command line");

    RunConfig config;
    if (chosen->config_option->count() > 0) config = load_config(chosen->config_path);
    config = merge(config, flags);

    const std::string format = config.format.value_or("csv");
    if (format != "csv" && format != "json") {
      throw ValidationError("unknown format '" + format + "' (csv, json)");
    }
    const Table table = chosen->info->fn(config);
    write_output(render(table, config, format == "json"), config.output, out);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const CapabilityError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace wgbragg::cli
