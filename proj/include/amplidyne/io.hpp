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

#ifndef AMPLIDYNE__IO_HPP_
#define AMPLIDYNE__IO_HPP_

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "amplidyne/errors.hpp"
#include "amplidyne/hinf.hpp"
#include "amplidyne/lti.hpp"
#include "amplidyne/plant.hpp"
#include "amplidyne/simulate.hpp"

namespace amplidyne
{

struct SimSettings
{
  double dt = 1e-3;
  double t_final = 20.0;
};

struct StepSettings
{
  double open_amplitude = 30.0;
  double reference = 220.0;
};

struct SynthSettings
{
  double gamma_lo = 0.1;
  double gamma_hi = 1e6;
  double tol = 0.01;
  WeightParameters weights;
};

struct RunConfig
{
  PlantParameters plant;
  SimSettings sim;
  StepSettings step;
  SynthSettings synth;

  void validate() const
  {
    plant.validate();
    if (!(sim.dt > 0.0) || !(sim.t_final > sim.dt)) {
      throw InvalidArgument("config: need t_final > dt > 0");
    }
    if (!std::isfinite(step.open_amplitude)) {
      throw InvalidArgument("config: open_amplitude must be finite");
    }
    if (!(step.reference > 0.0)) {
      throw InvalidArgument("config: reference must be positive");
    }
    if (!(synth.gamma_lo > 0.0 && synth.gamma_lo < synth.gamma_hi)) {
      throw InvalidArgument("config: need 0 < gamma_lo < gamma_hi");
    }
    if (!(synth.tol > 0.0)) {
      throw InvalidArgument("config: tol must be positive");
    }
    default_weights(synth.weights);
  }
};

/// Shortest decimal string that reads back to the same double.
inline std::string format_double(double v)
{
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view text, std::string_view what)
{
  double v = 0.0;
  const char * first = text.data();
  const char * last = text.data() + text.size();
  if (!text.empty() && *first == '+') {
    ++first;
  }
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    throw ParseError("cannot parse '" + std::string(text) + "' as a number for " + std::string(what));
  }
  return v;
}

namespace detail
{

inline std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Flat `key = value` lines with `#` comments.
inline std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream & in)
{
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    out.emplace_back(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
  }
  return out;
}

}  // namespace detail

/// Reads a run configuration. All eleven plant keys are required; simulation
/// and synthesis keys fall back to their defaults. Unknown keys are rejected.
inline RunConfig parse_config(std::istream & in)
{
  RunConfig cfg;
  std::map<std::string, double *, std::less<>> slots;
  for (const auto & [name, member] : PlantParameters::fields()) {
    slots.emplace(std::string(name), &(cfg.plant.*member));
  }
  slots.emplace("dt", &cfg.sim.dt);
  slots.emplace("t_final", &cfg.sim.t_final);
  slots.emplace("open_amplitude", &cfg.step.open_amplitude);
  slots.emplace("reference", &cfg.step.reference);
  slots.emplace("gamma_lo", &cfg.synth.gamma_lo);
  slots.emplace("gamma_hi", &cfg.synth.gamma_hi);
  slots.emplace("tol", &cfg.synth.tol);
  slots.emplace("w1_M", &cfg.synth.weights.w1_M);
  slots.emplace("w1_wb", &cfg.synth.weights.w1_wb);
  slots.emplace("w1_eps", &cfg.synth.weights.w1_eps);
  slots.emplace("w2_gain", &cfg.synth.weights.w2_gain);

  std::map<std::string, bool, std::less<>> seen;
  for (const auto & [key, value] : detail::parse_key_values(in)) {
    const auto it = slots.find(key);
    if (it == slots.end()) {
      throw ParseError("unknown config key '" + key + "'");
    }
    if (seen[key]) {
      throw ParseError("duplicate config key '" + key + "'");
    }
    seen[key] = true;
    *it->second = parse_double(value, key);
  }
  for (const auto & [name, member] : PlantParameters::fields()) {
    if (!seen.count(name)) {
      throw ParseError("missing required config key '" + std::string(name) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

inline RunConfig parse_config(const std::string & text)
{
  std::istringstream in(text);
  return parse_config(in);
}

/// Writes every key, suitable for parse_config.
inline void write_config(std::ostream & out, const RunConfig & cfg)
{
  for (const auto & [name, member] : PlantParameters::fields()) {
    out << name << " = " << format_double(cfg.plant.*member) << '\n';
  }
  out << "dt = " << format_double(cfg.sim.dt) << '\n'
      << "t_final = " << format_double(cfg.sim.t_final) << '\n'
      << "open_amplitude = " << format_double(cfg.step.open_amplitude) << '\n'
      << "reference = " << format_double(cfg.step.reference) << '\n'
      << "gamma_lo = " << format_double(cfg.synth.gamma_lo) << '\n'
      << "gamma_hi = " << format_double(cfg.synth.gamma_hi) << '\n'
      << "tol = " << format_double(cfg.synth.tol) << '\n'
      << "w1_M = " << format_double(cfg.synth.weights.w1_M) << '\n'
      << "w1_wb = " << format_double(cfg.synth.weights.w1_wb) << '\n'
      << "w1_eps = " << format_double(cfg.synth.weights.w1_eps) << '\n'
      << "w2_gain = " << format_double(cfg.synth.weights.w2_gain) << '\n';
}

/// `t,y` header then one sample per line.
inline void write_trace_csv(std::ostream & out, const SimulationTrace & tr)
{
  out << "t,y\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    out << format_double(tr.t[i]) << ',' << format_double(tr.y[i]) << '\n';
  }
}

inline SimulationTrace read_trace_csv(std::istream & in)
{
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "t,y") {
    throw ParseError("trace CSV must start with the header 't,y'");
  }
  SimulationTrace tr;
  while (std::getline(in, line)) {
    const std::string_view body = detail::trim(line);
    if (body.empty()) {
      continue;
    }
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("trace CSV row without a comma: '" + std::string(body) + "'");
    }
    tr.t.push_back(parse_double(body.substr(0, comma), "t"));
    tr.y.push_back(parse_double(body.substr(comma + 1), "y"));
  }
  if (tr.t.size() >= 2) {
    tr.dt = tr.t[1] - tr.t[0];
  }
  return tr;
}

/// Two lines, `num = c0 c1 ...` and `den = c0 c1 ...`, descending powers.
inline void write_controller(std::ostream & out, const TransferFunction & tf)
{
  auto line = [&](const char * key, const Polynomial & p) {
      out << key << " =";
      for (double c : p.coeffs()) {
        out << ' ' << format_double(c);
      }
      out << '\n';
    };
  line("num", tf.num());
  line("den", tf.den());
}

inline TransferFunction read_controller(std::istream & in)
{
  std::vector<double> num, den;
  bool have_num = false, have_den = false;
  for (const auto & [key, value] : detail::parse_key_values(in)) {
    std::vector<double> coeffs;
    std::istringstream words(value);
    std::string word;
    while (words >> word) {
      coeffs.push_back(parse_double(word, key));
    }
    if (coeffs.empty()) {
      throw ParseError("controller line '" + key + "' has no coefficients");
    }
    if (key == "num" && !have_num) {
      num = std::move(coeffs);
      have_num = true;
    } else if (key == "den" && !have_den) {
      den = std::move(coeffs);
      have_den = true;
    } else {
      throw ParseError("unexpected controller key '" + key + "'");
    }
  }
  if (!have_num || !have_den) {
    throw ParseError("controller file needs both 'num' and 'den' lines");
  }
  try {
    return {Polynomial(std::move(num)), Polynomial(std::move(den))};
  } catch (const InvalidArgument & e) {
    throw ParseError(std::string("controller file: ") + e.what());
  }
}

}  // namespace amplidyne

#endif  // AMPLIDYNE__IO_HPP_
