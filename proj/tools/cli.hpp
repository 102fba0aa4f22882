// Copyright 2026 The udesign Authors
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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "udesign/ensembles.hpp"

namespace udesign::cli {

enum class Command { verify_lemmas, bracket, ensemble, ell_for_epsilon, frame_potential };
enum class OutputFormat { csv, json };

const char* to_string(Command command);

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSize = 3;

/// Largest qubit count accepted by commands that build moment maps.
inline constexpr int kMaxFullMatrixQubits = 4;

struct RunConfig {
  Command command = Command::verify_lemmas;
  int n_qubits = 2;
  int ell = 3;  // ell for verify-lemmas, ell_max for bracket / frame-potential
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  double j_star = kDefaultCouplingValue;
  EnsembleKind kind = EnsembleKind::circuit;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;  // empty: standard output
  unsigned threads = 1;
  /// Replaces every check tolerance. A negative value makes every check
  /// fail, which exercises the failure path.
  std::optional<double> tolerance;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A report cell; monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

struct Report {
  std::string command;
  std::vector<std::pair<std::string, Cell>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, double>> deviations;
  int exit_code = kExitOk;
};

/// 17 significant digits via std::to_chars, independent of the locale.
std::string format_double(double value);

Report cmd_verify_lemmas(const RunConfig& config);
Report cmd_bracket(const RunConfig& config);
Report cmd_ensemble(const RunConfig& config);
Report cmd_ell_for_epsilon(const RunConfig& config);
Report cmd_frame_potential(const RunConfig& config);

/// Dispatches on config.command. Throws UsageError, SizeError or the
/// library's domain errors.
Report build_report(const RunConfig& config);

std::string render_csv(const Report& report);
std::string render_json(const Report& report);
std::string render(const Report& report, OutputFormat format);

/// Builds, renders and writes the report; maps errors to exit codes and
/// prints their messages to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace udesign::cli
