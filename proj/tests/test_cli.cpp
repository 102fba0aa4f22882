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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace udesign::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_config(const RunConfig& config) {
  std::ostringstream out, err;
  const int code = run(config, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(Command command, int n_qubits, int ell = 3) {
  RunConfig c;
  c.command = command;
  c.n_qubits = n_qubits;
  c.ell = ell;
  c.threads = 1;
  return c;
}

const nlohmann::json* find_row(const nlohmann::json& results, const std::string& check) {
  for (const auto& row : results)
    if (row.at("check") == check) return &row;
  return nullptr;
}

int tool(const std::string& args, const std::string& out_file = "/dev/null") {
  const std::string cmd = std::string(UDESIGN_TOOL_PATH) + " " + args + " > " + out_file +
                          " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.35), "0.34999999999999998");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-2.5e-20), "-2.4999999999999999e-20");
}

TEST(VerifyLemmas, DefaultRunPasses) {
  RunConfig c = make(Command::verify_lemmas, 2);
  c.format = OutputFormat::json;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  for (const auto& row : doc.at("results")) {
    EXPECT_EQ(row.at("status"), "pass") << row.dump();
    EXPECT_LT(row.at("max_deviation").get<double>(), 1e-10) << row.dump();
  }
  for (const char* name : {"f_table.values", "f_table.row_sums", "f_table.idempotence",
                           "off_diagonal_annihilation", "cp.choi_min_eigenvalue",
                           "tp.partial_trace", "certificate", "decomposition",
                           "recurrence.closed_form", "closed_power"}) {
    EXPECT_NE(find_row(doc.at("results"), name), nullptr) << name;
  }
  EXPECT_TRUE(doc.at("deviations").contains("closed_power@ell=3"));
}

TEST(VerifyLemmas, SingleQubitRowSums) {
  RunConfig c = make(Command::verify_lemmas, 1, 2);
  c.format = OutputFormat::json;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  const auto* row = find_row(doc.at("results"), "f_table.row_sums");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->at("units"), 1);
  EXPECT_EQ(row->at("max_deviation").get<double>(), 0.0);
}

TEST(VerifyLemmas, CorruptedToleranceFails) {
  RunConfig c = make(Command::verify_lemmas, 1, 1);
  c.tolerance = -1.0;
  const Outcome o = run_config(c);
  EXPECT_EQ(o.code, kExitCheckFailed);
  EXPECT_NE(o.out.find(",fail"), std::string::npos);
  EXPECT_NE(o.err.find("failed"), std::string::npos);
}

TEST(VerifyLemmas, SizeEnvelope) {
  EXPECT_EQ(run_config(make(Command::verify_lemmas, 5)).code, kExitSize);
  EXPECT_EQ(run_config(make(Command::verify_lemmas, 2, 0)).code, kExitUsage);
}

TEST(Bracket, ThreeRowsAndCertificateValue) {
  const Outcome o = run_config(make(Command::bracket, 2, 3));
  ASSERT_EQ(o.code, kExitOk) << o.err;
  std::istringstream lines(o.out);
  std::string line;
  std::vector<std::string> data;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#') data.push_back(line);
  ASSERT_EQ(data.size(), 4u);
  EXPECT_EQ(data[0].rfind("ell,lower_theorem,lower_exact,upper_proof", 0), 0u);
  EXPECT_EQ(data[1].rfind("1,0.33333333333333331,0.34999999999999998,0.75,", 0), 0u)
      << data[1];
}

TEST(Bracket, JsonStructure) {
  RunConfig c = make(Command::bracket, 3, 4);
  c.format = OutputFormat::json;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, kExitOk);
  const auto doc = nlohmann::json::parse(o.out);
  ASSERT_TRUE(doc.is_object());
  EXPECT_EQ(doc.at("version"), "0.1.0");
  EXPECT_EQ(doc.at("config").at("command"), "bracket");
  EXPECT_EQ(doc.at("config").at("ell_max"), 4);
  EXPECT_EQ(doc.at("results").size(), 4u);
  for (const auto& row : doc.at("results")) {
    for (const char* key : {"lower_theorem", "lower_exact", "upper_proof", "upper_theorem",
                            "frame_potential_excess"}) {
      EXPECT_TRUE(row.at(key).is_number()) << key;
    }
  }
  EXPECT_EQ(doc.at("deviations").at("chain_violation"), 0.0);
  EXPECT_EQ(doc.at("exit_code"), 0);
}

TEST(Bracket, LargeSystemsOmitFramePotential) {
  RunConfig c = make(Command::bracket, 10, 2);
  c.format = OutputFormat::json;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, kExitOk);
  const auto doc = nlohmann::json::parse(o.out);
  EXPECT_TRUE(doc.at("results")[0].at("frame_potential_excess").is_null());
}

TEST(Bracket, UsageErrors) {
  EXPECT_EQ(run_config(make(Command::bracket, 2, 0)).code, kExitUsage);
  EXPECT_EQ(run_config(make(Command::bracket, 0, 2)).code, kExitUsage);
}

TEST(Ensemble, CircuitExact) {
  RunConfig c = make(Command::ensemble, 2);
  c.samples = 0;
  c.format = OutputFormat::json;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  const auto* row = find_row(doc.at("results"), "exact_enumeration");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->at("draws"), 18);
  EXPECT_LE(row->at("max_deviation").get<double>(), 1e-12);
}

TEST(Ensemble, HamiltonianQuarterAndHalf) {
  RunConfig c = make(Command::ensemble, 2);
  c.kind = EnsembleKind::hamiltonian;
  c.samples = 0;
  c.format = OutputFormat::json;
  Outcome o = run_config(c);
  ASSERT_EQ(o.code, kExitOk);
  auto doc = nlohmann::json::parse(o.out);
  EXPECT_LE(find_row(doc.at("results"), "exact_enumeration")->at("max_deviation").get<double>(),
            1e-12);

  c.j_star = 0.5;
  o = run_config(c);
  ASSERT_EQ(o.code, kExitOk);
  doc = nlohmann::json::parse(o.out);
  const auto* row = find_row(doc.at("results"), "exact_enumeration");
  EXPECT_EQ(row->at("status"), "diagnostic");
  EXPECT_GE(row->at("max_deviation").get<double>(), 0.01);
  EXPECT_NE(row->at("note").get<std::string>().find("literal coupling"), std::string::npos);

  c.j_star = 0.3;
  EXPECT_EQ(run_config(c).code, kExitCheckFailed);
}

TEST(Ensemble, MonteCarloRows) {
  RunConfig c = make(Command::ensemble, 2);
  c.samples = 4000;
  c.seed = 11;
  c.format = OutputFormat::json;
  for (EnsembleKind kind :
       {EnsembleKind::circuit, EnsembleKind::hamiltonian, EnsembleKind::continuous}) {
    c.kind = kind;
    const Outcome o = run_config(c);
    ASSERT_EQ(o.code, kExitOk) << o.out;
    const auto doc = nlohmann::json::parse(o.out);
    const auto* row = find_row(doc.at("results"), "monte_carlo");
    ASSERT_NE(row, nullptr);
    EXPECT_TRUE(row->at("std_error").is_number());
  }
  c.samples = 50;
  EXPECT_EQ(run_config(c).code, kExitUsage);
}

TEST(Ensemble, Envelope) {
  RunConfig c = make(Command::ensemble, 5);
  const Outcome o = run_config(c);
  EXPECT_EQ(o.code, kExitSize);
  EXPECT_NE(o.err.find("size"), std::string::npos);
}

TEST(EllForEpsilon, Examples) {
  RunConfig c = make(Command::ell_for_epsilon, 10);
  c.epsilon = 1e-6;
  c.format = OutputFormat::json;
  Outcome o = run_config(c);
  ASSERT_EQ(o.code, kExitOk);
  auto row = nlohmann::json::parse(o.out).at("results")[0];
  EXPECT_EQ(row.at("ell"), 3);

  c.n_qubits = 2;
  c.epsilon = 0.9;
  o = run_config(c);
  row = nlohmann::json::parse(o.out).at("results")[0];
  EXPECT_EQ(row.at("ell"), 1);
  EXPECT_EQ(row.at("gate_count"), 15);
  EXPECT_EQ(row.at("z_segments"), 2);
  EXPECT_EQ(row.at("x_segments"), 1);

  c.epsilon = 3.0;
  EXPECT_EQ(run_config(c).code, kExitUsage);
  c.epsilon = 0.0;
  EXPECT_EQ(run_config(c).code, kExitUsage);
  c.epsilon.reset();
  EXPECT_EQ(run_config(c).code, kExitUsage);
}

TEST(FramePotential, ConvergesAndEnvelope) {
  RunConfig c = make(Command::frame_potential, 2, 6);
  c.format = OutputFormat::json;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  EXPECT_LE(doc.at("deviations").at("haar").get<double>(), 1e-12);
  const auto& last = doc.at("results").back();
  EXPECT_LE(last.at("excess").get<double>(), 1e-6);
  EXPECT_NEAR(last.at("circuit_frame_potential").get<double>(),
              last.at("frame_potential").get<double>(), 1e-12);
  EXPECT_EQ(run_config(make(Command::frame_potential, 4, 2)).code, kExitSize);
}

TEST(Reproducibility, ThreadCountsAndRepeats) {
  for (OutputFormat format : {OutputFormat::csv, OutputFormat::json}) {
    RunConfig c = make(Command::ensemble, 2);
    c.samples = 5000;
    c.seed = 99;
    c.format = format;
    const Outcome one = run_config(c);
    c.threads = 4;
    const Outcome four = run_config(c);
    const Outcome again = run_config(c);
    EXPECT_EQ(one.out, four.out);
    EXPECT_EQ(four.out, again.out);
  }
}

TEST(Tool, ExitCodes) {
  EXPECT_EQ(tool("bracket --qubits 2 --ell-max 0"), kExitUsage);
  EXPECT_EQ(tool("ell-for-epsilon --qubits 2 --epsilon 3"), kExitUsage);
  EXPECT_EQ(tool("no-such-command"), kExitUsage);
  EXPECT_EQ(tool("bracket --format xml"), kExitUsage);
  EXPECT_EQ(tool("frame-potential --qubits 4"), kExitSize);
  EXPECT_EQ(tool("verify-lemmas --qubits 1 --ell 1 --tolerance -1"), kExitCheckFailed);
  EXPECT_EQ(tool("ell-for-epsilon --qubits 2 --epsilon 0.9"), kExitOk);
}

TEST(Tool, FileOutputMatchesInProcessReport) {
  const auto dir = std::filesystem::temp_directory_path() / "udesign_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "bracket.json";
  ASSERT_EQ(tool("bracket --qubits 2 --ell-max 3 --format json --threads 2 --out " +
                 path.string()),
            kExitOk);
  RunConfig c = make(Command::bracket, 2, 3);
  c.format = OutputFormat::json;
  EXPECT_EQ(slurp(path), run_config(c).out);
  std::filesystem::remove_all(dir);
}

TEST(Tool, UnwritableOutput) {
  EXPECT_EQ(tool("bracket --out /nonexistent-dir/report.csv"), kExitCheckFailed);
}

}  // namespace
}  // namespace udesign::cli
