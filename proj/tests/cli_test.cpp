// Copyright 2026 The Amplidyne Authors.
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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "amplidyne/cli.hpp"

namespace amplidyne
{
namespace
{

namespace fs = std::filesystem;

struct CliRun
{
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args)
{
  args.insert(args.begin(), "amplidyne");
  std::vector<const char *> argv;
  for (const auto & a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), {out, err});
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
      ("amplidyne_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {fs::remove_all(dir_);}

  std::string path(const std::string & name) const {return (dir_ / name).string();}

  std::string write(const std::string & name, const std::string & text) const
  {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  std::string config(const RunConfig & cfg) const
  {
    std::ostringstream s;
    s << "# test configuration\n";
    write_config(s, cfg);
    return write("run.cfg", s.str());
  }

  static std::string slurp(const std::string & p)
  {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  }

  static SimulationTrace read_trace(const std::string & p)
  {
    std::ifstream f(p);
    return read_trace_csv(f);
  }

  fs::path dir_;
};

TEST(Config, DefaultsAndRoundTrip)
{
  const RunConfig d;
  EXPECT_EQ(d.sim.dt, 1e-3);
  EXPECT_EQ(d.sim.t_final, 20.0);
  EXPECT_EQ(d.step.open_amplitude, 30.0);
  EXPECT_EQ(d.step.reference, 220.0);
  EXPECT_EQ(d.synth.tol, 0.01);
  EXPECT_EQ(d.plant.R_L, 100.0);

  RunConfig c;
  c.plant.K_3 = 36.0;
  c.sim.dt = 2.5e-3;
  std::ostringstream s;
  write_config(s, c);
  const RunConfig back = parse_config(s.str());
  EXPECT_EQ(back.plant.K_3, 36.0);
  EXPECT_EQ(back.sim.dt, 2.5e-3);
}

TEST(Config, RejectsUnknownMissingAndMalformed)
{
  std::ostringstream s;
  write_config(s, RunConfig{});
  const std::string full = s.str();
  EXPECT_THROW(parse_config(full + "bogus = 1\n"), ParseError);
  EXPECT_THROW(parse_config(full + "N = 3\n"), ParseError);
  EXPECT_THROW(parse_config("L_m = 18\n"), ParseError);
  try {
    parse_config("L_m = 18  # comment\nR_m = 27\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError & e) {
    EXPECT_NE(std::string(e.what()).find("J_m"), std::string::npos);
  }
  std::string bad = full;
  bad.replace(bad.find("R_m = 27"), 8, "R_m = 2x7");
  EXPECT_THROW(parse_config(bad), ParseError);
  std::string zero = full;
  zero.replace(zero.find("R_m = 27"), 8, "R_m = 0");
  EXPECT_THROW(parse_config(zero), InvalidArgument);
}

TEST(TraceCsv, RoundTripIsBitExact)
{
  SimulationTrace tr;
  tr.t = {0.0, 0.1, 0.2};
  tr.y = {0.0, 1.0 / 3.0, 2.718281828459045};
  std::stringstream s;
  write_trace_csv(s, tr);
  EXPECT_EQ(s.str().substr(0, 4), "t,y\n");
  const SimulationTrace back = read_trace_csv(s);
  EXPECT_EQ(back.t, tr.t);
  EXPECT_EQ(back.y, tr.y);
  std::istringstream bad("time,value\n");
  EXPECT_THROW(read_trace_csv(bad), ParseError);
}

TEST(ControllerFile, RoundTripAndErrors)
{
  const auto [F, Gmu] = reference_controllers();
  std::stringstream s;
  write_controller(s, F);
  const TransferFunction back = read_controller(s);
  EXPECT_EQ(back.num(), F.num());
  EXPECT_EQ(back.den(), F.den());
  std::istringstream missing("num = 1\n");
  EXPECT_THROW(read_controller(missing), ParseError);
  std::istringstream improper("num = 1 0 0\nden = 1 1\n");
  EXPECT_THROW(read_controller(improper), Error);
}

TEST_F(CliTest, ModelPrintsPublishedCoefficients)
{
  const CliRun r = run_cli({"model"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("denominator: 1.0000 9.9242 16.1380 5.9529"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("numerator: 41.6667"), std::string::npos);
  EXPECT_NE(r.out.find("dc gain: 6.9994"), std::string::npos);
  EXPECT_NE(r.out.find("poles: -0.5360 -1.3882 -8.0000"), std::string::npos) << r.out;
}

TEST_F(CliTest, ModelWithDoubledGeneratorConstant)
{
  RunConfig cfg;
  cfg.plant.K_3 *= 2.0;
  const CliRun r = run_cli({"model", "--config", config(cfg)});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("numerator: 83.3333"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("poles: -0.5360 -1.3882 -8.0000"), std::string::npos);
}

TEST_F(CliTest, MissingKeyIsUsageError)
{
  const CliRun r = run_cli({"model", "--config", write("partial.cfg", "L_m = 18\nR_m = 27\n")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("J_m"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"model", "--config", path("does_not_exist.cfg")}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
}

TEST_F(CliTest, StepOpenDefaults)
{
  const std::string out = path("open.csv");
  const CliRun r = run_cli({"step-open", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const SimulationTrace tr = read_trace(out);
  ASSERT_EQ(tr.y.size(), 20001u);
  EXPECT_NEAR(tr.y.back(), 209.98, 1.0);
  EXPECT_NE(r.out.find("final value"), std::string::npos);
}

TEST_F(CliTest, StepOpenZeroAmplitude)
{
  RunConfig cfg;
  cfg.step.open_amplitude = 0.0;
  const std::string out = path("zero.csv");
  ASSERT_EQ(run_cli({"step-open", "--config", config(cfg), "--out", out}).code, 0);
  for (double y : read_trace(out).y) {
    EXPECT_EQ(y, 0.0);
  }
}

TEST_F(CliTest, StepOpenUnsettled)
{
  RunConfig cfg;
  cfg.sim.t_final = 1.0;
  const CliRun r = run_cli({"step-open", "--config", config(cfg)});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("NotSettled"), std::string::npos);
}

TEST_F(CliTest, UnwritableOutputPath)
{
  EXPECT_EQ(run_cli({"step-open", "--out", path("no/such/dir/x.csv")}).code, 2);
}

TEST_F(CliTest, StepClosedReferenceHinfController)
{
  const std::string out = path("closed.csv");
  const CliRun r = run_cli({"step-closed", "--controller", "hinf", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const StepMetrics m = step_metrics(read_trace(out), 220.0);
  EXPECT_NEAR(m.peak_value, 230.0, 0.03 * 230.0);
  EXPECT_NEAR(m.overshoot_vs_reference, 4.54, 1.5);
}

TEST_F(CliTest, StepClosedGammaControllerMatchesLibrary)
{
  const std::string out = path("closed.csv");
  ASSERT_EQ(run_cli({"step-closed", "--controller", "gamma", "--out", out}).code, 0);
  const auto [F, Gmu] = reference_controllers();
  const SimulationTrace expected =
    step_response(cli::closed_loop_tf(Gmu, amplidyne_tf({})), 220.0, 20.0, 1e-3);
  EXPECT_EQ(read_trace(out).y, expected.y);
}

TEST_F(CliTest, StepClosedUnitGainControllerFile)
{
  const std::string k = write("unit.ctl", "num = 1\nden = 1\n");
  const std::string out = path("closed.csv");
  ASSERT_EQ(run_cli({"step-closed", "--controller", k, "--out", out}).code, 0);
  const double dc = dc_gain(amplidyne_tf({}));
  EXPECT_NEAR(final_value(read_trace(out)), 220.0 * dc / (1.0 + dc), 1e-2);
  EXPECT_NEAR(final_value(read_trace(out)), 192.5, 0.1);
}

TEST_F(CliTest, StepClosedBadControllerFile)
{
  EXPECT_EQ(run_cli({"step-closed", "--controller", write("bad.ctl", "num = a b\n")}).code, 1);
  EXPECT_EQ(run_cli({"step-closed", "--controller", path("missing.ctl")}).code, 1);
}

TEST_F(CliTest, SynthDefaults)
{
  const std::string out = path("k.ctl");
  const CliRun r = run_cli({"synth", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("controller order: 4"), std::string::npos) << r.out;
  std::ifstream f(out);
  const TransferFunction k = read_controller(f);
  EXPECT_EQ(k.order(), 4u);

  // Re-derive the closed-loop norm from the printed values.
  auto value_of = [&](const std::string & key) {
      const auto pos = r.out.find(key);
      return std::stod(r.out.substr(pos + key.size()));
    };
  EXPECT_LE(value_of("closed-loop norm: "), value_of("gamma: ") * 1.01);
}

TEST_F(CliTest, SynthTighterToleranceTakesMoreIterations)
{
  auto iterations = [](const CliRun & r) {
      const std::string key = "iterations: ";
      return std::stoi(r.out.substr(r.out.find(key) + key.size()));
    };
  const CliRun coarse = run_cli({"synth"});
  const CliRun fine = run_cli({"synth", "--tol", "0.001"});
  ASSERT_EQ(coarse.code, 0);
  ASSERT_EQ(fine.code, 0);
  EXPECT_GE(iterations(fine), iterations(coarse));
  EXPECT_EQ(run_cli({"synth", "--tol", "-1"}).code, 1);
}

TEST_F(CliTest, SynthInfeasibleBracket)
{
  RunConfig cfg;
  cfg.synth.gamma_lo = 0.001;
  cfg.synth.gamma_hi = 0.002;
  const CliRun r = run_cli({"synth", "--config", config(cfg)});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("probes"), std::string::npos) << r.err;
}

TEST_F(CliTest, CompareReportShape)
{
  const std::string out = path("report.csv");
  const CliRun r = run_cli({"compare", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream report(slurp(out));
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(report, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    if (line.back() == ',') {
      cells.emplace_back();
    }
    rows.push_back(cells);
  }
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"metric", "hinf", "gamma", "published_hinf", "published_gamma"}));
  for (const auto & row : rows) {
    EXPECT_EQ(row.size(), 5u);
  }
  EXPECT_EQ(rows[6][0], "Peak value (V)");
  EXPECT_NEAR(std::stod(rows[6][1]), 230.0, 0.03 * 230.0);
  EXPECT_EQ(rows[6][3], "230");
  EXPECT_EQ(rows[6][4], "270");
  EXPECT_EQ(rows[2][0], "Per. overshoot (vs reference) (%)");
  EXPECT_NEAR(std::stod(rows[2][1]), 4.54, 1.5);
  EXPECT_EQ(rows[2][4], "22.72");
  EXPECT_EQ(r.out, slurp(out));
}

TEST_F(CliTest, OutputsAreDeterministic)
{
  for (const char * cmd : {"step-open", "step-closed", "synth", "compare"}) {
    ASSERT_EQ(run_cli({cmd, "--out", path("a.out")}).code, 0) << cmd;
    ASSERT_EQ(run_cli({cmd, "--out", path("b.out")}).code, 0) << cmd;
    EXPECT_EQ(slurp(path("a.out")), slurp(path("b.out"))) << cmd;
  }
}

int shell_exit_code(const std::string & command)
{
  const int status = std::system((command + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, BinaryExitCodes)
{
  const std::string exe = AMPLIDYNE_CLI_PATH;
  EXPECT_EQ(shell_exit_code(exe + " model"), 0);
  EXPECT_EQ(shell_exit_code(exe + " --help"), 0);
  EXPECT_EQ(shell_exit_code(exe + " model --config " + path("nope.cfg")), 1);
  EXPECT_EQ(shell_exit_code(exe + " step-open --out " + path("x/y/z.csv")), 2);
  RunConfig cfg;
  cfg.sim.t_final = 1.0;
  EXPECT_EQ(shell_exit_code(exe + " step-open --config " + config(cfg)), 3);
  EXPECT_EQ(shell_exit_code(exe + " compare --out " + path("r.csv")), 0);
  EXPECT_TRUE(fs::exists(path("r.csv")));
}

}  // namespace
}  // namespace amplidyne
