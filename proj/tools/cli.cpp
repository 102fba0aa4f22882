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


#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "udesign/udesign.hpp"

namespace udesign::cli {

const char* to_string(Command command) {
  switch (command) {
    case Command::verify_lemmas:
      return "verify-lemmas";
    case Command::bracket:
      return "bracket";
    case Command::ensemble:
      return "ensemble";
    case Command::ell_for_epsilon:
      return "ell-for-epsilon";
    case Command::frame_potential:
      break;
  }
  return "frame-potential";
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

namespace {

using UnitList = std::vector<std::pair<std::size_t, std::size_t>>;

constexpr std::size_t kSampledOffDiagonalUnits = 768;
constexpr int kMaxEll = 60;
constexpr int kMaxFramePotentialEll = 10;

Cell optional_cell(const std::optional<double>& v) {
  return v ? Cell(*v) : Cell(std::monostate{});
}

std::vector<std::pair<std::string, Cell>> echo(const RunConfig& c, const char* ell_key) {
  std::vector<std::pair<std::string, Cell>> out;
  out.emplace_back("command", std::string(to_string(c.command)));
  out.emplace_back("n_qubits", std::int64_t{c.n_qubits});
  out.emplace_back(ell_key, std::int64_t{c.ell});
  out.emplace_back("epsilon", optional_cell(c.epsilon));
  out.emplace_back("seed", std::to_string(c.seed));
  out.emplace_back("samples", static_cast<std::int64_t>(c.samples));
  out.emplace_back("j_star", c.j_star);
  out.emplace_back("kind", std::string(udesign::to_string(c.kind)));
  out.emplace_back("tolerance", optional_cell(c.tolerance));
  return out;
}

void require_ell(const RunConfig& c, int cap) {
  if (c.ell < 1 || c.ell > cap) {
    throw UsageError("ell must lie in [1, " + std::to_string(cap) + "], got " +
                     std::to_string(c.ell));
  }
}

void require_qubits(const RunConfig& c, int max_qubits, const char* what) {
  if (c.n_qubits < 1) {
    throw UsageError("--qubits must be >= 1");
  }
  if (c.n_qubits > max_qubits) {
    throw SizeError(std::string(what) + " is limited to N <= " +
                    std::to_string(max_qubits) + ", got N = " +
                    std::to_string(c.n_qubits));
  }
}

double tolerance_for(const RunConfig& c, double fallback) {
  return c.tolerance.value_or(fallback);
}

bool within(double deviation, double tolerance) {
  return std::isfinite(deviation) && deviation <= tolerance;
}

std::string keyed(const std::string& name, int ell) {
  return ell > 0 ? name + "@ell=" + std::to_string(ell) : name;
}

// ---------------------------------------------------------------------------
// verify-lemmas

struct CheckRow {
  std::string name;
  int ell;  // 0: not ell dependent
  std::size_t units;
  double deviation;
  double tolerance;
};

UnitList all_units(Dim dim, bool diagonal, bool off_diagonal) {
  UnitList out;
  for (std::size_t p = 0; p < dim.d2(); ++p)
    for (std::size_t q = 0; q < dim.d2(); ++q)
      if ((p == q && diagonal) || (p != q && off_diagonal)) out.emplace_back(p, q);
  return out;
}

// Every pair-basis diagonal unit plus a seeded sample of off-diagonal ones.
UnitList sampled_units(Dim dim, std::uint64_t seed, bool diagonal) {
  UnitList out;
  if (diagonal) {
    for (std::size_t p = 0; p < dim.d2(); ++p) out.emplace_back(p, p);
  }
  Rng rng = Rng(seed).split(0x756e697473ULL);
  const std::uint64_t side = dim.d2();
  while (out.size() < (diagonal ? side : 0) + kSampledOffDiagonalUnits) {
    const std::size_t p = rng.uniform_below(side);
    const std::size_t q = rng.uniform_below(side);
    if (p != q) out.emplace_back(p, q);
  }
  return out;
}

MomentMap zero_map(Dim dim) {
  return MomentMap(dim, "0", [](const Operator& x) {
    return Operator(Operator::Zero(x.rows(), x.cols()));
  });
}

double rational_abs(const Rational& r) { return to_double(r < 0 ? Rational(-r) : r); }

std::vector<CheckRow> f_table_rows(Dim dim, const RunConfig& c) {
  const FCoefficientTable lit = f_coeff_literal(dim);
  const FCoefficientTable xr = f_coeff_xor(dim);
  const std::size_t n = dim.pairs();
  const Rational two_over_d(2, static_cast<long long>(dim.d()));
  Rational values = 0, symmetry = 0, rows = 0, idempotence = 0, routes = 0;
  for (std::size_t r = 0; r < n; ++r) {
    Rational row_sum = 0;
    for (std::size_t col = 0; col < n; ++col) {
      const Rational f = lit.exact(r, col);
      row_sum += f;
      const Rational to_zero = f;
      const Rational to_two = f > two_over_d ? Rational(f - two_over_d) : Rational(two_over_d - f);
      values = std::max(values, std::min(to_zero, to_two));
      const Rational sym = f - lit.exact(col, r);
      symmetry = std::max(symmetry, Rational(sym < 0 ? Rational(-sym) : sym));
      const Rational route = f - xr.exact(r, col);
      routes = std::max(routes, Rational(route < 0 ? Rational(-route) : route));
      Rational square = 0;
      for (std::size_t k : lit.support(r)) square += lit.exact(r, k) * lit.exact(k, col);
      const Rational idem = square - f;
      idempotence = std::max(idempotence, Rational(idem < 0 ? Rational(-idem) : idem));
    }
    rows = std::max(rows, Rational(row_sum > 1 ? Rational(row_sum - 1) : Rational(1 - row_sum)));
  }
  const double tol = tolerance_for(c, 0.0);
  const std::size_t entries = n * n;
  return {{"f_table.values", 0, entries, rational_abs(values), tol},
          {"f_table.symmetry", 0, entries, rational_abs(symmetry), tol},
          {"f_table.row_sums", 0, n, rational_abs(rows), tol},
          {"f_table.idempotence", 0, entries, rational_abs(idempotence), tol},
          {"f_table.literal_vs_xor", 0, entries, rational_abs(routes), tol}};
}

Report finish_checks(Report report, const std::vector<CheckRow>& checks, Dim dim) {
  report.columns = {"check", "d", "ell", "units", "max_deviation", "tolerance", "status"};
  bool ok = true;
  for (const auto& row : checks) {
    const bool pass = within(row.deviation, row.tolerance);
    ok = ok && pass;
    report.rows.push_back({row.name, static_cast<std::int64_t>(dim.d()),
                           row.ell > 0 ? Cell(std::int64_t{row.ell}) : Cell(std::monostate{}),
                           static_cast<std::int64_t>(row.units), row.deviation,
                           row.tolerance, std::string(pass ? "pass" : "fail")});
    report.deviations.emplace_back(keyed(row.name, row.ell), row.deviation);
  }
  report.exit_code = ok ? kExitOk : kExitCheckFailed;
  return report;
}

}  // namespace

Report cmd_verify_lemmas(const RunConfig& c) {
  require_qubits(c, kMaxFullMatrixQubits, "verify-lemmas");
  require_ell(c, 8);
  const Dim dim(c.n_qubits);
  const bool full = dim.d() <= kMaxMatrixDimension;
  const UnitList units = full ? all_units(dim, true, true) : sampled_units(dim, c.seed, true);
  const UnitList off_units =
      full ? all_units(dim, false, true) : sampled_units(dim, c.seed, false);

  std::vector<CheckRow> checks = f_table_rows(dim, c);

  const MomentMap r = r_map(dim);
  checks.push_back({"off_diagonal_annihilation", 0, off_units.size(),
                    max_map_deviation_on(r, zero_map(dim), off_units, UnitBasis::pair,
                                         c.threads),
                    tolerance_for(c, 1e-12)});

  for (int ell = 1; ell <= c.ell; ++ell) {
    const MomentMap closed = r_pow_closed(dim, ell);
    checks.push_back({"closed_power", ell, units.size(),
                      max_map_deviation_on(power(r, ell), closed, units, UnitBasis::pair,
                                           c.threads),
                      tolerance_for(c, 1e-10)});

    const auto iterated = recurrence_iterated(dim, ell);
    const auto closed_form = recurrence_closed_form(dim, ell);
    const double rec = std::max(
        {rational_abs(iterated.a_plus - closed_form.a_plus),
         rational_abs(iterated.b_plus - closed_form.b_plus),
         rational_abs(iterated.c_plus - closed_form.c_plus),
         rational_abs(iterated.a_minus - closed_form.a_minus),
         rational_abs(iterated.c_minus - closed_form.c_minus)});
    checks.push_back({"recurrence.closed_form", ell, 5, rec, tolerance_for(c, 1e-13)});

    const double p = p_ell(dim, ell);
    const MomentMap c_map = c_ell_map(dim, ell);
    const MomentMap mix =
        linear_combination({{1.0 - p, g_haar(dim)}, {p, c_map}}, "mix");
    checks.push_back({"decomposition", ell, units.size(),
                      max_map_deviation_on(mix, closed, units, UnitBasis::pair, c.threads),
                      tolerance_for(c, 1e-12)});

    if (dim.d() <= 4) {
      const Operator j = choi(c_map);
      const std::size_t side = dim.d2();
      checks.push_back({"cp.choi_min_eigenvalue", ell, side * side,
                        std::max(0.0, -min_eigenvalue(j)), tolerance_for(c, 1e-10)});
      const Operator input = partial_trace(j, side, side, false);
      checks.push_back({"tp.partial_trace", ell, side * side,
                        max_abs_diff(input, identity(side) / static_cast<double>(side)),
                        tolerance_for(c, 1e-12)});
    }

    checks.push_back({"certificate", ell, 1,
                      std::abs(lower_certificate(closed, dim) -
                               to_double(certificate_value_exact(dim, ell))),
                      tolerance_for(c, 1e-12)});
  }

  Report report;
  report.command = to_string(c.command);
  report.config = echo(c, "ell");
  return finish_checks(std::move(report), checks, dim);
}

Report cmd_bracket(const RunConfig& c) {
  require_ell(c, kMaxEll);
  if (c.n_qubits < 1) throw UsageError("--qubits must be >= 1");
  const Dim dim(c.n_qubits);
  const bool with_fp = dim.d() <= kMaxMatrixDimension;

  Report report;
  report.command = to_string(c.command);
  report.config = echo(c, "ell_max");
  report.columns = {"ell", "lower_theorem", "lower_exact", "upper_proof", "upper_theorem",
                    "scaled_lower_exact", "scaled_upper_proof", "frame_potential_excess"};
  Rational worst = 0;
  for (int ell = 1; ell <= c.ell; ++ell) {
    const auto [lo_t, hi_t] = design_error_bounds_exact(dim, ell);
    const Rational lo_e = certificate_value_exact(dim, ell);
    const Rational up_p = 2 * p_ell_exact(dim, ell);
    for (const Rational& gap : {Rational(lo_t - lo_e), Rational(lo_e - up_p),
                                Rational(up_p - hi_t)}) {
      worst = std::max(worst, gap);
    }
    const double scale = std::pow(static_cast<double>(dim.d()), ell);
    std::optional<double> excess;
    if (with_fp) excess = frame_potential_excess(r_pow_closed(dim, ell), c.threads);
    report.rows.push_back({std::int64_t{ell}, to_double(lo_t), to_double(lo_e), to_double(up_p),
                           to_double(hi_t), to_double(lo_e) * scale, to_double(up_p) * scale,
                           optional_cell(excess)});
  }
  const double violation = to_double(worst);
  report.deviations.emplace_back("chain_violation", violation);
  report.exit_code = within(violation, tolerance_for(c, 0.0)) ? kExitOk : kExitCheckFailed;
  return report;
}

Report cmd_ensemble(const RunConfig& c) {
  require_qubits(c, kMaxFullMatrixQubits, "ensemble");
  if (!std::isfinite(c.j_star)) throw UsageError("--j-star must be finite");
  if (c.samples != 0 && c.samples < 100) {
    throw UsageError("--samples must be 0 (exact only) or >= 100");
  }
  const Dim dim(c.n_qubits);
  const bool literal_half = c.kind == EnsembleKind::hamiltonian && c.j_star == 0.5;

  Report report;
  report.command = to_string(c.command);
  report.config = echo(c, "ell");
  report.columns = {"check", "kind", "n_qubits", "j_star", "draws", "max_deviation",
                    "std_error", "tolerance", "status", "note"};
  bool ok = true;
  auto add_row = [&](const std::string& check, std::size_t draws, double dev,
                     std::optional<double> std_error, double tol, bool diagnostic,
                     const std::string& note) {
    const bool pass = within(dev, tol);
    const std::string status = pass ? "pass" : (diagnostic ? "diagnostic" : "fail");
    if (!pass && !diagnostic) ok = false;
    report.rows.push_back({check, std::string(udesign::to_string(c.kind)),
                           std::int64_t{c.n_qubits}, c.j_star, static_cast<std::int64_t>(draws),
                           dev, optional_cell(std_error), tol, status, note});
    report.deviations.emplace_back(check, dev);
  };

  const Operator target = g_z_multiplier(dim).multiplier();
  if (c.kind == EnsembleKind::circuit) {
    add_row("exact_enumeration", z_layer_count(c.n_qubits),
            max_abs_diff(layer_twirl_exact(c.n_qubits).multiplier(), target), std::nullopt,
            tolerance_for(c, 1e-12), false, "single layer vs G_Z");
  } else if (c.kind == EnsembleKind::hamiltonian) {
    add_row("exact_enumeration", z_layer_count(c.n_qubits),
            max_abs_diff(segment_twirl_exact(c.n_qubits, c.j_star).multiplier(),
                         layer_twirl_exact(c.n_qubits).multiplier()),
            std::nullopt, tolerance_for(c, 1e-12), literal_half,
            literal_half ? "literal coupling 1/2 (documented diagnostic), see docs/hamiltonian.md"
                          : "segment vs circuit layer");
  }

  if (c.samples > 0) {
    EnsembleSpec spec;
    spec.n_qubits = c.n_qubits;
    spec.ell = c.ell;
    spec.kind = c.kind;
    spec.seed = c.seed;
    spec.samples = c.samples;
    spec.j_star = c.j_star;
    const MonteCarloTwirl mc = ensemble_moment_mc(spec, c.threads);
    const Operator reference = c.kind == EnsembleKind::hamiltonian
                                   ? segment_twirl_exact(c.n_qubits, c.j_star).multiplier()
                                   : target;
    add_row("monte_carlo", c.samples, max_abs_diff(mc.twirl.multiplier(), reference),
            mc.std_error, tolerance_for(c, 5.0 / std::sqrt(static_cast<double>(c.samples))),
            false,
            c.kind == EnsembleKind::hamiltonian ? "sample mean vs exact segment twirl"
                                                : "sample mean vs G_Z");
  }
  report.exit_code = ok ? kExitOk : kExitCheckFailed;
  return report;
}

Report cmd_ell_for_epsilon(const RunConfig& c) {
  if (!c.epsilon) throw UsageError("ell-for-epsilon requires --epsilon");
  const double eps = *c.epsilon;
  if (!(eps > 0.0 && eps < 2.0)) {
    throw UsageError("--epsilon must lie in (0, 2), got " + format_double(eps));
  }
  if (c.n_qubits < 1) throw UsageError("--qubits must be >= 1");
  const Dim dim(c.n_qubits);
  const EllChoice choice = ell_for_epsilon(dim.n_qubits(), eps);

  Report report;
  report.command = to_string(c.command);
  report.config = echo(c, "ell");
  report.columns = {"n_qubits", "epsilon", "ell", "gate_count", "z_segments",
                    "x_segments", "total_segments", "duration", "upper_bound"};
  report.rows.push_back({std::int64_t{c.n_qubits}, eps, std::int64_t{choice.ell},
                         static_cast<std::int64_t>(choice.gate_count),
                         std::int64_t{choice.schedule.z_segments},
                         std::int64_t{choice.schedule.x_segments},
                         std::int64_t{choice.schedule.total()}, choice.schedule.duration,
                         choice.upper_bound});
  report.deviations.emplace_back("bound_slack", eps - choice.upper_bound);
  return report;
}

Report cmd_frame_potential(const RunConfig& c) {
  require_qubits(c, 3, "frame-potential");
  require_ell(c, kMaxFramePotentialEll);
  const Dim dim(c.n_qubits);

  Report report;
  report.command = to_string(c.command);
  report.config = echo(c, "ell_max");
  report.columns = {"map", "ell", "frame_potential", "excess", "circuit_frame_potential"};

  const double haar = frame_potential(g_haar(dim), c.threads);
  const double haar_dev = std::abs(haar - 2.0);
  report.rows.push_back({std::string("G_H"), std::monostate{}, haar, haar - 2.0,
                         std::monostate{}});
  double monotone_violation = 0.0;
  bool strictly_decreasing = true;
  double previous = 0.0;
  for (int ell = 1; ell <= c.ell; ++ell) {
    const MomentMap r = r_pow_closed(dim, ell);
    const double fp = frame_potential(r, c.threads);
    const double excess = frame_potential_excess(r, c.threads);
    std::optional<double> circuit;
    if (dim.d() <= 4) {
      circuit = frame_potential(circuit_moment_factorized(c.n_qubits, ell), c.threads);
    }
    if (ell > 1) {
      monotone_violation = std::max(monotone_violation, excess - previous);
      strictly_decreasing = strictly_decreasing && excess < previous;
    }
    previous = excess;
    report.rows.push_back({std::string("R^ell"), std::int64_t{ell}, fp, excess,
                           optional_cell(circuit)});
  }
  report.deviations.emplace_back("haar", haar_dev);
  report.deviations.emplace_back("monotone_violation", monotone_violation);
  const bool ok = within(haar_dev, tolerance_for(c, 1e-12)) && strictly_decreasing &&
                  within(monotone_violation, tolerance_for(c, 0.0));
  report.exit_code = ok ? kExitOk : kExitCheckFailed;
  return report;
}

Report build_report(const RunConfig& config) {
  switch (config.command) {
    case Command::verify_lemmas:
      return cmd_verify_lemmas(config);
    case Command::bracket:
      return cmd_bracket(config);
    case Command::ensemble:
      return cmd_ensemble(config);
    case Command::ell_for_epsilon:
      return cmd_ell_for_epsilon(config);
    case Command::frame_potential:
      break;
  }
  return cmd_frame_potential(config);
}

// ---------------------------------------------------------------------------
// Rendering.

namespace {

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string quoted = "\"";
          for (char ch : v) {
            if (ch == '"') quoted += '"';
            quoted += ch;
          }
          return quoted + "\"";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

std::string render_csv(const Report& report) {
  std::ostringstream out;
  out << "# udesign " << kVersion << '\n';
  for (const auto& [key, value] : report.config) {
    out << "# config." << key << '=' << csv_cell(value) << '\n';
  }
  for (const auto& [key, value] : report.deviations) {
    out << "# deviation." << key << '=' << format_double(value) << '\n';
  }
  out << "# exit_code=" << report.exit_code << '\n';
  for (std::size_t k = 0; k < report.columns.size(); ++k) {
    out << (k ? "," : "") << report.columns[k];
  }
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << csv_cell(row[k]);
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Report& report) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.config) config[key] = json_cell(value);
  doc["config"] = config;
  doc["version"] = kVersion;
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json entry = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < row.size(); ++k) entry[report.columns[k]] = json_cell(row[k]);
    results.push_back(entry);
  }
  doc["results"] = results;
  nlohmann::ordered_json deviations = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.deviations) deviations[key] = json_cell(value);
  doc["deviations"] = deviations;
  doc["exit_code"] = report.exit_code;
  return doc.dump(2) + "\n";
}

std::string render(const Report& report, OutputFormat format) {
  return format == OutputFormat::json ? render_json(report) : render_csv(report);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Report report;
  try {
    report = build_report(config);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SizeError& e) {
    err << "size error: " << e.what() << '\n';
    return kExitSize;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  const std::string text = render(report, config.format);
  if (config.output_path.empty()) {
    out << text;
    out.flush();
    if (!out) {
      err << "error: failed to write report to standard output\n";
      return kExitCheckFailed;
    }
  } else {
    std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
    file << text;
    file.close();
    if (!file) {
      err << "error: cannot write " << config.output_path << '\n';
      return kExitCheckFailed;
    }
  }
  if (report.exit_code != kExitOk) {
    err << to_string(config.command) << ": one or more checks failed\n";
  }
  return report.exit_code;
}

}  // namespace udesign::cli
