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

#pragma once

// Command-line front end: configuration, subcommand dispatch and output.
//
// Exit codes: 0 success, 1 usage/validation/config error, 2 numerical or
// capability error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wgbragg::cli {

inline constexpr std::uint64_t kDefaultSeed = 20201;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Every field is optional; unset fields take the documented defaults when
/// the run is resolved. Keys in config files match the field names.
struct RunConfig {
  std::optional<std::string> command;
  std::optional<double> a;
  std::optional<double> neff;
  std::optional<double> omega;
  std::optional<double> delta;
  /// Radians, or a token: gb, mb, gb+0.004, gb-0.05, mb+x ...
  std::optional<std::string> theta;
  std::optional<double> beta;
  std::optional<double> d;
  std::optional<double> gamma_r;
  std::optional<double> gamma_l;
  std::optional<double> gamma_u;
  /// Single N or an inclusive range start:stop:step.
  std::optional<std::string> n;
  std::optional<double> eta;
  /// start:stop:count
  std::optional<std::string> delta_grid;
  std::optional<std::string> theta_grid;
  std::optional<std::string> tier;
  std::optional<std::string> policy;
  std::optional<long long> m;
  std::optional<long long> seed;
  std::optional<long long> configs;
  /// Comma-separated beta values for void sweeps.
  std::optional<std::string> betas;
  std::optional<long long> threads;
  std::optional<std::string> output;
  std::optional<std::string> format;

  bool has_beta_form() const { return beta.has_value() || d.has_value(); }
  bool has_rate_form() const {
    return gamma_r.has_value() || gamma_l.has_value() || gamma_u.has_value();
  }
};

/// Parses a JSON config. A JSON output document of this tool is accepted
/// too (its "config" block is used). Throws ValidationError with
/// path:line:column diagnostics on malformed input; an empty file yields an
/// empty config.
RunConfig load_config(const std::filesystem::path& path);

RunConfig config_from_json(const nlohmann::json& doc, std::string_view source);

/// Run-relevant fields only (output, format and threads are left out).
nlohmann::json to_json(const RunConfig& config);

/// Field-wise merge where `top` wins. Choosing either coupling form in `top`
/// discards the other form from `base`.
RunConfig merge(const RunConfig& base, const RunConfig& top);

/// Entry point. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace wgbragg::cli
