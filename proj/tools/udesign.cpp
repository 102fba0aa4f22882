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


#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"
#include "udesign/parallel.hpp"
#include "udesign/version.hpp"

namespace {

using udesign::cli::Command;
using udesign::cli::OutputFormat;
using udesign::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& config, std::string& format) {
  sub->add_option("--qubits,-n", config.n_qubits, "Number of qubits N (d = 2^N)")
      ->capture_default_str();
  sub->add_option("--seed", config.seed, "Seed for sampled quantities")->capture_default_str();
  sub->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out,-o", config.output_path, "Write the report here instead of stdout");
  sub->add_option("--threads", config.threads, "Worker threads (default: all cores)")
      ->check(CLI::Range(1u, 1024u));
  sub->add_option("--tolerance", config.tolerance,
                  "Override every check tolerance (negative forces failure)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment maps and design-error brackets for alternating Z/X diagonal ensembles"};
  app.set_version_flag("--version", std::string(udesign::kVersion));
  app.require_subcommand(1);

  RunConfig config;
  config.threads = udesign::default_threads();
  std::string format = "csv";
  std::string kind = "circuit";

  auto* verify = app.add_subcommand("verify-lemmas", "Run the moment-map identity suites");
  add_common(verify, config, format);
  verify->add_option("--ell", config.ell, "Largest repetition count checked")
      ->capture_default_str();

  auto* bracket = app.add_subcommand("bracket", "Design-error bracket per repetition count");
  add_common(bracket, config, format);
  bracket->add_option("--ell-max,--ell", config.ell, "Largest repetition count")
      ->capture_default_str();

  auto* ensemble = app.add_subcommand("ensemble", "Ensemble twirls against the exact maps");
  add_common(ensemble, config, format);
  ensemble->add_option("--kind", kind, "Ensemble kind")
      ->check(CLI::IsMember({"circuit", "hamiltonian", "continuous"}))
      ->capture_default_str();
  ensemble->add_option("--samples", config.samples, "Monte-Carlo draws (0: exact only)")
      ->capture_default_str();
  ensemble->add_option("--j-star", config.j_star, "Coupling value of Hamiltonian segments")
      ->capture_default_str();
  ensemble->add_option("--ell", config.ell, "Repetition count echoed in the report")
      ->capture_default_str();

  auto* ell_eps = app.add_subcommand("ell-for-epsilon", "Smallest ell meeting a target error");
  add_common(ell_eps, config, format);
  ell_eps->add_option("--epsilon", config.epsilon, "Target design error in (0, 2)");

  auto* fp = app.add_subcommand("frame-potential", "Frame potentials of R^ell and G_H");
  add_common(fp, config, format);
  fp->add_option("--ell-max,--ell", config.ell, "Largest repetition count")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return udesign::cli::kExitUsage;
  }

  const std::map<CLI::App*, Command> commands = {
      {verify, Command::verify_lemmas},
      {bracket, Command::bracket},
      {ensemble, Command::ensemble},
      {ell_eps, Command::ell_for_epsilon},
      {fp, Command::frame_potential}};
  config.command = commands.at(app.get_subcommands().front());
  config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  config.kind = kind == "hamiltonian"  ? udesign::EnsembleKind::hamiltonian
                : kind == "continuous" ? udesign::EnsembleKind::continuous
                                       : udesign::EnsembleKind::circuit;
  return udesign::cli::run(config, std::cout, std::cerr);
}
