// Copyright 2026 The fluxccz Authors
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

// YAML run configuration. Requires yaml-cpp.
//
// Every mapping is checked against its known keys; unknown or repeated keys
// are rejected with the line number. The `device` section is mandatory and
// must be complete; all other sections are optional and default to the
// values below. Numbers are emitted in shortest round-trip form, so
// dump -> load reproduces the configuration bit for bit.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "fluxccz/common.hpp"
#include "fluxccz/composite.hpp"

namespace fluxccz {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct NumericsConfig {
  int levels = 8;                          // per subsystem
  int keep = 128;                          // dressed states for single-pulse dynamics
  int reduced_keep = 32;                   // calibration search, two-pulse, Lindblad
  double dt_ps = 0.0;                      // 0 selects the largest admissible step
  int phase_grid_points = 2001;
  double phase_grid_half_width_pi = 8.0;   // in units of pi
  int charge_cutoff = 30;
  friend bool operator==(const NumericsConfig&, const NumericsConfig&) = default;
};

struct PulseConfig {
  double amplitude_ghz = 0.0;
  double duration_ns = 0.0;
  double frequency_ghz = 0.0;
  bool specified() const { return amplitude_ghz != 0.0 && duration_ns > 0.0 && frequency_ghz > 0.0; }
  friend bool operator==(const PulseConfig&, const PulseConfig&) = default;
};

struct GateConfig {
  std::string target = "ccz";  // ccz | ccphase | ccphase_star
  double target_phase = kPi;   // for ccphase / ccphase_star
  PulseConfig pulse{};
  friend bool operator==(const GateConfig&, const GateConfig&) = default;
};

struct CalibrationConfig {
  std::vector<double> durations_ns{78.0, 195.0};  // design durations (area condition)
  std::vector<double> amplitudes_ghz{};           // explicit amplitudes; override durations
  double tau_half_width_ns = 4.0;
  double f_below_mhz = 8.0;
  double f_above_mhz = 3.0;
  double coarse_tau_step_ns = 1.0;
  double coarse_f_step_mhz = 1.0;
  double fine_tau_step_ns = 0.1;
  double fine_f_step_mhz = 0.1;
  bool refine_full_model = true;
  friend bool operator==(const CalibrationConfig&, const CalibrationConfig&) = default;
};

struct TwoPulseConfig {
  double phase = kPi / 2.0;
  double ccphase_duration_ns = 54.3;       // |1110> - |1111>
  double ccphase_star_duration_ns = 40.6;  // |0000> - |0001>
  double tau_half_width_ns = 4.0;
  double f_half_width_mhz = 8.0;
  bool joint_refine = true;
  PulseConfig ccphase{};       // used as given when fully specified
  PulseConfig ccphase_star{};
  friend bool operator==(const TwoPulseConfig&, const TwoPulseConfig&) = default;
};

struct NoiseConfig {
  double data_t1_us = 300.0;
  double data_tphi_us = 100.0;
  double coupler_t1_us = 50.0;
  double coupler_tphi_us = 50.0;
  std::string method = "first_order";  // first_order | exact
  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

struct MonteCarloConfig {
  std::vector<double> epsilons{0.005, 0.01, 0.02};
  int samples = 200;
  std::uint64_t seed = 1;
  int levels = 6;
  friend bool operator==(const MonteCarloConfig&, const MonteCarloConfig&) = default;
};

struct TwoLevelConfig {
  double duration_ns = 78.0;
  double omega_ghz = 0.0;  // 0 selects the 2 pi amplitude
  double delta_min_mhz = -60.0;
  double delta_max_mhz = 60.0;
  int points = 241;
  friend bool operator==(const TwoLevelConfig&, const TwoLevelConfig&) = default;
};

struct RunConfig {
  DeviceConfig device{};
  NumericsConfig numerics{};
  GateConfig gate{};
  CalibrationConfig calibration{};
  TwoPulseConfig two_pulse{};
  NoiseConfig noise{};
  MonteCarloConfig montecarlo{};
  TwoLevelConfig twolevel{};

  SpectrumNumerics spectrum_numerics() const {
    SpectrumNumerics n;
    n.grid.points = numerics.phase_grid_points;
    n.grid.half_width = numerics.phase_grid_half_width_pi * kPi;
    n.charge_cutoff = numerics.charge_cutoff;
    return n;
  }
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return "config";
  return "config:" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

/// Reads a mapping, tracking which keys were consumed.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.IsMap()) throw ConfigError(where(node_) + ": '" + path_ + "' must be a mapping");
    std::set<std::string> seen;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen.insert(key).second) throw ConfigError(where(kv.first) + ": duplicate key '" + key + "' in '" + path_ + "'");
    }
  }

  bool has(const std::string& key) const {
    for (const auto& kv : node_)
      if (kv.first.as<std::string>() == key) return true;
    return false;
  }

  YAML::Node child(const std::string& key) {
    used_.insert(key);
    for (const auto& kv : node_)
      if (kv.first.as<std::string>() == key) return kv.second;
    return YAML::Node();
  }

  YAML::Node required(const std::string& key) {
    if (!has(key)) throw ConfigError(where(node_) + ": missing key '" + key + "' in '" + path_ + "'");
    return child(key);
  }

  double number(const std::string& key, double fallback, bool mandatory = false) {
    if (!has(key)) {
      if (mandatory) throw ConfigError(where(node_) + ": missing key '" + key + "' in '" + path_ + "'");
      used_.insert(key);
      return fallback;
    }
    return parse_number(child(key), path_ + "." + key);
  }

  long integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    const YAML::Node v = child(key);
    const double x = parse_number(v, path_ + "." + key);
    if (x != std::floor(x) || std::abs(x) > 9.0e15)
      throw ConfigError(where(v) + ": '" + path_ + "." + key + "' must be an integer");
    return static_cast<long>(x);
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const YAML::Node v = child(key);
    const std::string text = scalar(v, path_ + "." + key);
    std::uint64_t out = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      throw ConfigError(where(v) + ": '" + path_ + "." + key + "' must be a non-negative integer");
    return out;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const YAML::Node v = child(key);
    const std::string text = scalar(v, path_ + "." + key);
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError(where(v) + ": '" + path_ + "." + key + "' must be true or false");
  }

  std::string text(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed) {
    if (!has(key)) return fallback;
    const YAML::Node v = child(key);
    const std::string s = scalar(v, path_ + "." + key);
    if (!allowed.empty() && !allowed.count(s)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(where(v) + ": '" + path_ + "." + key + "' must be one of: " + list);
    }
    return s;
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    if (!has(key)) return fallback;
    const YAML::Node v = child(key);
    if (!v.IsSequence()) throw ConfigError(where(v) + ": '" + path_ + "." + key + "' must be a list");
    std::vector<double> out;
    for (const auto& item : v) out.push_back(parse_number(item, path_ + "." + key));
    return out;
  }

  /// Throws on any key that was not consumed.
  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!used_.count(key)) throw ConfigError(where(kv.first) + ": unknown key '" + key + "' in '" + path_ + "'");
    }
  }

  static std::string scalar(const YAML::Node& v, const std::string& name) {
    if (!v.IsScalar()) throw ConfigError(where(v) + ": '" + name + "' must be a scalar");
    return v.Scalar();
  }

  static double parse_number(const YAML::Node& v, const std::string& name) {
    const std::string text = scalar(v, name);
    double out = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(out))
      throw ConfigError(where(v) + ": '" + name + "' must be a finite number, got '" + text + "'");
    return out;
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

inline const std::array<std::string, kNumSubsystems>& subsystem_keys() {
  static const std::array<std::string, kNumSubsystems> k{"f1", "f2", "f3", "t"};
  return k;
}

inline PulseConfig read_pulse(MapReader& parent, const std::string& key, const std::string& path) {
  if (!parent.has(key)) {
    parent.child(key);
    return {};
  }
  MapReader r(parent.child(key), path + "." + key);
  PulseConfig p;
  p.amplitude_ghz = r.number("amplitude_ghz", 0.0);
  p.duration_ns = r.number("duration_ns", 0.0);
  p.frequency_ghz = r.number("frequency_ghz", 0.0);
  r.finish();
  return p;
}

inline void check(bool ok, const YAML::Node& node, const std::string& message) {
  if (!ok) throw ConfigError(where(node) + ": " + message);
}

}  // namespace detail

/// Parse and validate a configuration document.
inline RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config:" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
  if (!root.IsDefined() || root.IsNull()) throw ConfigError("config: empty document");
  using detail::MapReader;
  MapReader top(root, "<root>");
  RunConfig c;

  {
    const YAML::Node dev_node = top.required("device");
    MapReader dev(dev_node, "device");
    const YAML::Node fl = dev.required("fluxoniums");
    detail::check(fl.IsSequence() && fl.size() == 3, fl, "'device.fluxoniums' must be a list of three entries");
    for (std::size_t q = 0; q < 3; ++q) {
      MapReader f(fl[q], "device.fluxoniums[" + std::to_string(q) + "]");
      c.device.fluxoniums[q].e_c = f.number("e_c", 0.0, true);
      c.device.fluxoniums[q].e_l = f.number("e_l", 0.0, true);
      c.device.fluxoniums[q].e_j = f.number("e_j", 0.0, true);
      c.device.fluxoniums[q].phi_ext = f.number("phi_ext", kPi);
      f.finish();
      try {
        c.device.fluxoniums[q].validate();
      } catch (const InvalidArgument& e) {
        throw ConfigError(detail::where(fl[q]) + ": " + e.what());
      }
    }
    const YAML::Node tr_node = dev.required("transmon");
    MapReader tr(tr_node, "device.transmon");
    c.device.transmon.e_c = tr.number("e_c", 0.0, true);
    c.device.transmon.e_j = tr.number("e_j", 0.0, true);
    tr.finish();
    try {
      c.device.transmon.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(detail::where(tr_node) + ": " + e.what());
    }
    MapReader g(dev.required("couplings_ghz"), "device.couplings_ghz");
    const auto& keys = detail::subsystem_keys();
    for (int i = 0; i < kNumSubsystems; ++i)
      for (int j = i + 1; j < kNumSubsystems; ++j) c.device.set_coupling(i, j, g.number(keys[i] + "_" + keys[j], 0.0, true));
    g.finish();
    if (dev.has("capacitances_ff")) {
      MapReader cap(dev.child("capacitances_ff"), "device.capacitances_ff");
      const auto self = cap.numbers("self", {});
      if (!self.empty()) {
        detail::check(self.size() == kNumSubsystems, dev_node, "'device.capacitances_ff.self' needs four values");
        for (int i = 0; i < kNumSubsystems; ++i) c.device.capacitances.self_fF[i] = self[i];
      }
      c.device.capacitances.fluxonium_transmon_fF =
          cap.number("fluxonium_transmon", c.device.capacitances.fluxonium_transmon_fF);
      cap.finish();
    } else {
      dev.child("capacitances_ff");
    }
    dev.finish();
  }

  if (top.has("numerics")) {
    const YAML::Node node = top.child("numerics");
    MapReader r(node, "numerics");
    auto& n = c.numerics;
    n.levels = static_cast<int>(r.integer("levels", n.levels));
    n.keep = static_cast<int>(r.integer("keep", n.keep));
    n.reduced_keep = static_cast<int>(r.integer("reduced_keep", n.reduced_keep));
    n.dt_ps = r.number("dt_ps", n.dt_ps);
    n.phase_grid_points = static_cast<int>(r.integer("phase_grid_points", n.phase_grid_points));
    n.phase_grid_half_width_pi = r.number("phase_grid_half_width_pi", n.phase_grid_half_width_pi);
    n.charge_cutoff = static_cast<int>(r.integer("charge_cutoff", n.charge_cutoff));
    r.finish();
    detail::check(n.levels >= 4 && n.levels <= 12, node, "'numerics.levels' must lie in [4, 12]");
    detail::check(n.reduced_keep >= 16 && n.keep >= n.reduced_keep, node,
                  "'numerics' needs 16 <= reduced_keep <= keep");
    detail::check(n.dt_ps >= 0.0, node, "'numerics.dt_ps' must be non-negative");
    detail::check(n.phase_grid_points >= 1001, node, "'numerics.phase_grid_points' must be at least 1001");
    detail::check(n.phase_grid_half_width_pi >= 6.0, node, "'numerics.phase_grid_half_width_pi' must be at least 6");
    detail::check(n.charge_cutoff >= 20, node, "'numerics.charge_cutoff' must be at least 20");
  }

  if (top.has("gate")) {
    const YAML::Node node = top.child("gate");
    MapReader r(node, "gate");
    c.gate.target = r.text("target", c.gate.target, {"ccz", "ccphase", "ccphase_star"});
    c.gate.target_phase = r.number("target_phase", c.gate.target_phase);
    c.gate.pulse = detail::read_pulse(r, "pulse", "gate");
    r.finish();
  }

  if (top.has("calibration")) {
    const YAML::Node node = top.child("calibration");
    MapReader r(node, "calibration");
    auto& k = c.calibration;
    k.durations_ns = r.numbers("durations_ns", k.durations_ns);
    k.amplitudes_ghz = r.numbers("amplitudes_ghz", k.amplitudes_ghz);
    k.tau_half_width_ns = r.number("tau_half_width_ns", k.tau_half_width_ns);
    k.f_below_mhz = r.number("f_below_mhz", k.f_below_mhz);
    k.f_above_mhz = r.number("f_above_mhz", k.f_above_mhz);
    k.coarse_tau_step_ns = r.number("coarse_tau_step_ns", k.coarse_tau_step_ns);
    k.coarse_f_step_mhz = r.number("coarse_f_step_mhz", k.coarse_f_step_mhz);
    k.fine_tau_step_ns = r.number("fine_tau_step_ns", k.fine_tau_step_ns);
    k.fine_f_step_mhz = r.number("fine_f_step_mhz", k.fine_f_step_mhz);
    k.refine_full_model = r.boolean("refine_full_model", k.refine_full_model);
    r.finish();
    for (double d : k.durations_ns) detail::check(d > 0.0, node, "'calibration.durations_ns' must be positive");
    for (double a : k.amplitudes_ghz) detail::check(a > 0.0, node, "'calibration.amplitudes_ghz' must be positive");
    detail::check(k.tau_half_width_ns > 0.0 && k.f_below_mhz > 0.0 && k.f_above_mhz > 0.0, node,
                  "'calibration' window sizes must be positive");
    detail::check(k.coarse_tau_step_ns > 0.0 && k.coarse_f_step_mhz > 0.0 && k.fine_tau_step_ns > 0.0 &&
                      k.fine_f_step_mhz > 0.0,
                  node, "'calibration' steps must be positive");
  }

  if (top.has("two_pulse")) {
    const YAML::Node node = top.child("two_pulse");
    MapReader r(node, "two_pulse");
    auto& t = c.two_pulse;
    t.phase = r.number("phase", t.phase);
    t.ccphase_duration_ns = r.number("ccphase_duration_ns", t.ccphase_duration_ns);
    t.ccphase_star_duration_ns = r.number("ccphase_star_duration_ns", t.ccphase_star_duration_ns);
    t.tau_half_width_ns = r.number("tau_half_width_ns", t.tau_half_width_ns);
    t.f_half_width_mhz = r.number("f_half_width_mhz", t.f_half_width_mhz);
    t.joint_refine = r.boolean("joint_refine", t.joint_refine);
    t.ccphase = detail::read_pulse(r, "ccphase", "two_pulse");
    t.ccphase_star = detail::read_pulse(r, "ccphase_star", "two_pulse");
    r.finish();
    detail::check(t.phase > 0.0 && t.phase < kPi, node, "'two_pulse.phase' must lie in (0, pi)");
    detail::check(t.ccphase_duration_ns > 0.0 && t.ccphase_star_duration_ns > 0.0, node,
                  "'two_pulse' durations must be positive");
  }

  if (top.has("noise")) {
    const YAML::Node node = top.child("noise");
    MapReader r(node, "noise");
    auto& n = c.noise;
    n.data_t1_us = r.number("data_t1_us", n.data_t1_us);
    n.data_tphi_us = r.number("data_tphi_us", n.data_tphi_us);
    n.coupler_t1_us = r.number("coupler_t1_us", n.coupler_t1_us);
    n.coupler_tphi_us = r.number("coupler_tphi_us", n.coupler_tphi_us);
    n.method = r.text("method", n.method, {"first_order", "exact"});
    r.finish();
    detail::check(n.data_t1_us > 0.0 && n.data_tphi_us > 0.0 && n.coupler_t1_us > 0.0 && n.coupler_tphi_us > 0.0,
                  node, "'noise' times must be positive");
  }

  if (top.has("montecarlo")) {
    const YAML::Node node = top.child("montecarlo");
    MapReader r(node, "montecarlo");
    auto& m = c.montecarlo;
    m.epsilons = r.numbers("epsilons", m.epsilons);
    m.samples = static_cast<int>(r.integer("samples", m.samples));
    m.seed = r.unsigned_integer("seed", m.seed);
    m.levels = static_cast<int>(r.integer("levels", m.levels));
    r.finish();
    detail::check(!m.epsilons.empty(), node, "'montecarlo.epsilons' must not be empty");
    for (double e : m.epsilons) detail::check(e >= 0.0 && e < 0.5, node, "'montecarlo.epsilons' must lie in [0, 0.5)");
    detail::check(m.samples >= 1, node, "'montecarlo.samples' must be at least 1");
    detail::check(m.levels >= 4 && m.levels <= 12, node, "'montecarlo.levels' must lie in [4, 12]");
  }

  if (top.has("twolevel")) {
    const YAML::Node node = top.child("twolevel");
    MapReader r(node, "twolevel");
    auto& t = c.twolevel;
    t.duration_ns = r.number("duration_ns", t.duration_ns);
    t.omega_ghz = r.number("omega_ghz", t.omega_ghz);
    t.delta_min_mhz = r.number("delta_min_mhz", t.delta_min_mhz);
    t.delta_max_mhz = r.number("delta_max_mhz", t.delta_max_mhz);
    t.points = static_cast<int>(r.integer("points", t.points));
    r.finish();
    detail::check(t.duration_ns > 0.0, node, "'twolevel.duration_ns' must be positive");
    detail::check(t.omega_ghz >= 0.0, node, "'twolevel.omega_ghz' must be non-negative");
    detail::check(t.delta_max_mhz >= t.delta_min_mhz && t.points >= 1, node,
                  "'twolevel' needs delta_min_mhz <= delta_max_mhz and points >= 1");
  }

  for (const char* key : {"numerics", "gate", "calibration", "two_pulse", "noise", "montecarlo", "twolevel"})
    top.child(key);
  top.finish();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace detail {

inline void emit_pulse(YAML::Emitter& out, const char* key, const PulseConfig& p) {
  out << YAML::Key << key << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "amplitude_ghz" << YAML::Value << format_double(p.amplitude_ghz);
  out << YAML::Key << "duration_ns" << YAML::Value << format_double(p.duration_ns);
  out << YAML::Key << "frequency_ghz" << YAML::Value << format_double(p.frequency_ghz);
  out << YAML::EndMap;
}

inline void emit_list(YAML::Emitter& out, const char* key, const std::vector<double>& v) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double x : v) out << format_double(x);
  out << YAML::EndSeq;
}

}  // namespace detail

/// Canonical text form of a configuration.
inline std::string dump_config(const RunConfig& c) {
  using detail::emit_list;
  using detail::emit_pulse;
  auto num = [](double v) { return format_double(v); };
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "device" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fluxoniums" << YAML::Value << YAML::BeginSeq;
  for (const auto& f : c.device.fluxoniums) {
    out << YAML::BeginMap;
    out << YAML::Key << "e_c" << YAML::Value << num(f.e_c);
    out << YAML::Key << "e_l" << YAML::Value << num(f.e_l);
    out << YAML::Key << "e_j" << YAML::Value << num(f.e_j);
    out << YAML::Key << "phi_ext" << YAML::Value << num(f.phi_ext);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "transmon" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "e_c" << YAML::Value << num(c.device.transmon.e_c);
  out << YAML::Key << "e_j" << YAML::Value << num(c.device.transmon.e_j);
  out << YAML::EndMap;
  out << YAML::Key << "couplings_ghz" << YAML::Value << YAML::BeginMap;
  const auto& keys = detail::subsystem_keys();
  for (int i = 0; i < kNumSubsystems; ++i)
    for (int j = i + 1; j < kNumSubsystems; ++j)
      out << YAML::Key << keys[i] + "_" + keys[j] << YAML::Value << num(c.device.coupling(i, j));
  out << YAML::EndMap;
  out << YAML::Key << "capacitances_ff" << YAML::Value << YAML::BeginMap;
  emit_list(out, "self", {c.device.capacitances.self_fF.begin(), c.device.capacitances.self_fF.end()});
  out << YAML::Key << "fluxonium_transmon" << YAML::Value << num(c.device.capacitances.fluxonium_transmon_fF);
  out << YAML::EndMap;
  out << YAML::EndMap;

  const auto& n = c.numerics;
  out << YAML::Key << "numerics" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "levels" << YAML::Value << n.levels;
  out << YAML::Key << "keep" << YAML::Value << n.keep;
  out << YAML::Key << "reduced_keep" << YAML::Value << n.reduced_keep;
  out << YAML::Key << "dt_ps" << YAML::Value << num(n.dt_ps);
  out << YAML::Key << "phase_grid_points" << YAML::Value << n.phase_grid_points;
  out << YAML::Key << "phase_grid_half_width_pi" << YAML::Value << num(n.phase_grid_half_width_pi);
  out << YAML::Key << "charge_cutoff" << YAML::Value << n.charge_cutoff;
  out << YAML::EndMap;

  out << YAML::Key << "gate" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "target" << YAML::Value << c.gate.target;
  out << YAML::Key << "target_phase" << YAML::Value << num(c.gate.target_phase);
  emit_pulse(out, "pulse", c.gate.pulse);
  out << YAML::EndMap;

  const auto& k = c.calibration;
  out << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
  emit_list(out, "durations_ns", k.durations_ns);
  emit_list(out, "amplitudes_ghz", k.amplitudes_ghz);
  out << YAML::Key << "tau_half_width_ns" << YAML::Value << num(k.tau_half_width_ns);
  out << YAML::Key << "f_below_mhz" << YAML::Value << num(k.f_below_mhz);
  out << YAML::Key << "f_above_mhz" << YAML::Value << num(k.f_above_mhz);
  out << YAML::Key << "coarse_tau_step_ns" << YAML::Value << num(k.coarse_tau_step_ns);
  out << YAML::Key << "coarse_f_step_mhz" << YAML::Value << num(k.coarse_f_step_mhz);
  out << YAML::Key << "fine_tau_step_ns" << YAML::Value << num(k.fine_tau_step_ns);
  out << YAML::Key << "fine_f_step_mhz" << YAML::Value << num(k.fine_f_step_mhz);
  out << YAML::Key << "refine_full_model" << YAML::Value << (k.refine_full_model ? "true" : "false");
  out << YAML::EndMap;

  const auto& t = c.two_pulse;
  out << YAML::Key << "two_pulse" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "phase" << YAML::Value << num(t.phase);
  out << YAML::Key << "ccphase_duration_ns" << YAML::Value << num(t.ccphase_duration_ns);
  out << YAML::Key << "ccphase_star_duration_ns" << YAML::Value << num(t.ccphase_star_duration_ns);
  out << YAML::Key << "tau_half_width_ns" << YAML::Value << num(t.tau_half_width_ns);
  out << YAML::Key << "f_half_width_mhz" << YAML::Value << num(t.f_half_width_mhz);
  out << YAML::Key << "joint_refine" << YAML::Value << (t.joint_refine ? "true" : "false");
  emit_pulse(out, "ccphase", t.ccphase);
  emit_pulse(out, "ccphase_star", t.ccphase_star);
  out << YAML::EndMap;

  const auto& z = c.noise;
  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "data_t1_us" << YAML::Value << num(z.data_t1_us);
  out << YAML::Key << "data_tphi_us" << YAML::Value << num(z.data_tphi_us);
  out << YAML::Key << "coupler_t1_us" << YAML::Value << num(z.coupler_t1_us);
  out << YAML::Key << "coupler_tphi_us" << YAML::Value << num(z.coupler_tphi_us);
  out << YAML::Key << "method" << YAML::Value << z.method;
  out << YAML::EndMap;

  const auto& m = c.montecarlo;
  out << YAML::Key << "montecarlo" << YAML::Value << YAML::BeginMap;
  emit_list(out, "epsilons", m.epsilons);
  out << YAML::Key << "samples" << YAML::Value << m.samples;
  out << YAML::Key << "seed" << YAML::Value << std::to_string(m.seed);
  out << YAML::Key << "levels" << YAML::Value << m.levels;
  out << YAML::EndMap;

  const auto& w = c.twolevel;
  out << YAML::Key << "twolevel" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "duration_ns" << YAML::Value << num(w.duration_ns);
  out << YAML::Key << "omega_ghz" << YAML::Value << num(w.omega_ghz);
  out << YAML::Key << "delta_min_mhz" << YAML::Value << num(w.delta_min_mhz);
  out << YAML::Key << "delta_max_mhz" << YAML::Value << num(w.delta_max_mhz);
  out << YAML::Key << "points" << YAML::Value << w.points;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
inline std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fluxccz
