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

// Command-line front end. Exit codes: 0 success, 1 usage or configuration
// error, 2 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fluxccz/calibration.hpp"
#include "fluxccz/config.hpp"
#include "fluxccz/csv.hpp"
#include "fluxccz/noise.hpp"
#include "fluxccz/robustness.hpp"
#include "fluxccz/two_level.hpp"

namespace {

using namespace fluxccz;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr const char* kOutputEnv = "FLUXCCZ_OUTPUT_DIR";

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<int> levels;
  std::optional<double> dt_ps;
  std::optional<std::uint64_t> seed;
  bool dump_config = false;
};

struct GateArgs {
  bool calibrate = false;
  bool two_pulse = false;
  std::optional<double> amplitude, duration, frequency;
};

struct CalibrateArgs {
  bool two_pulse = false;
};

struct LindbladArgs {
  bool two_pulse = false;
};

struct Context {
  RunConfig config;
  std::string command;

  double dt() const { return config.numerics.dt_ps * 1e-3; }
  CalibrationOptions calibration_options() const {
    CalibrationOptions o;
    o.coarse_tau_step = config.calibration.coarse_tau_step_ns;
    o.coarse_f_step = config.calibration.coarse_f_step_mhz * 1e-3;
    o.fine_tau_step = config.calibration.fine_tau_step_ns;
    o.fine_f_step = config.calibration.fine_f_step_mhz * 1e-3;
    o.dt = dt();
    return o;
  }
  DressedModel full_model() const { return diagonalize(config.numerics.keep); }
  DressedModel reduced_model() const { return diagonalize(config.numerics.reduced_keep); }

 private:
  DressedModel diagonalize(int keep) const {
    const CompositeModel m = build_composite(config.device, config.numerics.levels, config.spectrum_numerics());
    return diagonalize_and_label(m, std::min<int>(keep, static_cast<int>(m.dim())));
  }
};

std::filesystem::path output_dir(const CommonArgs& a) {
  if (!a.out_dir.empty()) return a.out_dir;
  if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') return env;
  return "fluxccz-out";
}

// --- tables -----------------------------------------------------------------

const char* const kStateNames[kGateDim] = {"000", "001", "010", "011", "100", "101", "110", "111"};

void add_gate_tables(OutputSet& out, const GateMatrix& gate) {
  auto& g = out.table("gate.csv", {"row", "col", "re", "im"});
  for (int i = 0; i < kGateDim; ++i)
    for (int j = 0; j < kGateDim; ++j) g.row().add(kStateNames[i]).add(kStateNames[j]).add(gate.u(i, j).real()).add(gate.u(i, j).imag());
  const PTM r = to_ptm(gate);
  auto& p = out.table("ptm.csv", {"row", "col", "value"});
  for (int i = 0; i < kPtmDim; ++i)
    for (int j = 0; j < kPtmDim; ++j) p.row().add(i).add(j).add(r.r(i, j));
}

std::vector<std::string> phase_columns() { return {"phi_011", "phi_101", "phi_110", "phi_111"}; }

void add_phases(CsvTable& t, const std::array<double, 4>& phases) {
  for (double p : phases) t.add(p);
}

// --- commands ---------------------------------------------------------------

void cmd_spectrum(const Context& ctx, OutputSet& out) {
  const auto& d = ctx.config.device;
  const auto sn = ctx.config.spectrum_numerics();
  auto& sub = out.table("subsystems.csv", {"subsystem", "f01_ghz", "anharmonicity_ghz"});
  const char* names[kNumSubsystems] = {"F1", "F2", "F3", "T"};
  for (int q = 0; q < kNumSubsystems; ++q) {
    const SubsystemSolution s = q < 3 ? solve_fluxonium(d.fluxoniums[q], 3, sn.grid)
                                      : solve_transmon(d.transmon, 3, sn.charge_cutoff);
    sub.row().add(names[q]).add(s.energies(1)).add(s.energies(2) - 2.0 * s.energies(1));
  }
  const DressedModel dm = ctx.full_model();
  const SpectrumSummary s = coupler_transition_table(dm);
  auto& tr = out.table("transitions.csv", {"state", "f_ghz", "zeta_zz_12_hz", "zeta_zz_13_hz", "zeta_zz_23_hz",
                                           "zeta_zzz_hz", "delta_ghz"});
  for (int b = 0; b < kGateDim; ++b)
    tr.row().add(kStateNames[b]).add(s.f[b]).add(s.zeta_zz[0]).add(s.zeta_zz[1]).add(s.zeta_zz[2]).add(s.zeta_zzz).add(s.delta);
}

TwoPulseSpec two_pulse_spec(const Context& ctx, const DressedModel& reduced, bool log) {
  const auto& tp = ctx.config.two_pulse;
  TwoPulseSpec spec;
  spec.phase = tp.phase;
  spec.phase_star = kPi - tp.phase;
  auto configured = [](const PulseConfig& p) {
    return DrivePulse::gaussian(p.amplitude_ghz, p.duration_ns, p.frequency_ghz);
  };
  const CalibrationOptions opts = ctx.calibration_options();
  const double f_hw = tp.f_half_width_mhz * 1e-3;
  if (tp.ccphase.specified()) {
    spec.ccphase = configured(tp.ccphase);
  } else {
    if (log) std::cerr << "calibrating CCPhase on |1110>-|1111>\n";
    spec.ccphase = recover_amplitude(reduced, Transition::kAllOne, spec.phase, tp.ccphase_duration_ns,
                                     tp.tau_half_width_ns, f_hw, opts)
                       .pulse();
  }
  if (tp.ccphase_star.specified()) {
    spec.ccphase_star = configured(tp.ccphase_star);
  } else {
    if (log) std::cerr << "calibrating CCPhase* on |0000>-|0001>\n";
    spec.ccphase_star = recover_amplitude(reduced, Transition::kAllZero, spec.phase_star,
                                          tp.ccphase_star_duration_ns, tp.tau_half_width_ns, f_hw, opts)
                            .pulse();
  }
  return spec;
}

void add_two_pulse_summary(OutputSet& out, const TwoPulseSpec& spec, const TwoPulseResult& r) {
  auto& p = out.table("pulses.csv", {"pulse", "amplitude_ghz", "duration_ns", "frequency_ghz"});
  p.row().add("ccphase").add(spec.ccphase.amplitude).add(spec.ccphase.duration).add(spec.ccphase.frequency);
  p.row().add("ccphase_star").add(spec.ccphase_star.amplitude).add(spec.ccphase_star.duration).add(spec.ccphase_star.frequency);
  auto cols = std::vector<std::string>{"fidelity", "leakage", "total_time_ns"};
  for (const auto& c : phase_columns()) cols.push_back(c);
  auto& s = out.table("summary.csv", cols);
  s.row().add(r.evaluation.fidelity).add(r.evaluation.leakage).add(r.total_time);
  add_phases(s, conditional_phases(r.evaluation.gate));
  add_gate_tables(out, r.evaluation.gate);
}

GateOperator configured_target(const GateConfig& g) {
  if (g.target == "ccphase") return ccphase_gate(g.target_phase);
  if (g.target == "ccphase_star") return ccphase_star_gate(g.target_phase);
  return ccz_gate();
}

void cmd_gate(const Context& ctx, const GateArgs& args, OutputSet& out) {
  if (args.two_pulse) {
    const DressedModel full = ctx.full_model();
    const DressedModel reduced = truncate(full, std::min<int>(ctx.config.numerics.reduced_keep, full.size()));
    TwoPulseSpec spec = two_pulse_spec(ctx, reduced, true);
    const DressedModel* final_model = ctx.config.calibration.refine_full_model ? &full : nullptr;
    TwoPulseResult r = ctx.config.two_pulse.joint_refine
                           ? refine_two_pulse(spec, reduced, ctx.calibration_options(), final_model)
                           : compose_two_pulse_ccz(spec, full, ctx.dt());
    add_two_pulse_summary(out, spec, r);
    return;
  }
  const GateOperator target = configured_target(ctx.config.gate);
  PulseConfig pc = ctx.config.gate.pulse;
  if (args.amplitude) pc.amplitude_ghz = *args.amplitude;
  if (args.duration) pc.duration_ns = *args.duration;
  if (args.frequency) pc.frequency_ghz = *args.frequency;

  const DressedModel full = ctx.full_model();
  DrivePulse pulse;
  if (args.calibrate) {
    const DressedModel reduced = truncate(full, std::min<int>(ctx.config.numerics.reduced_keep, full.size()));
    const Transition t = ctx.config.gate.target == "ccphase_star" ? Transition::kAllZero : Transition::kAllOne;
    const double duration = pc.duration_ns > 0.0 ? pc.duration_ns : ctx.config.calibration.durations_ns.at(0);
    const double amplitude = pc.amplitude_ghz != 0.0 ? pc.amplitude_ghz : area_amplitude(reduced, t, duration);
    const auto& k = ctx.config.calibration;
    const double f0 = transition_data(reduced, t).first;
    const double tau_c = std::round(area_duration(reduced, t, amplitude));
    const SearchWindow w{tau_c - k.tau_half_width_ns, tau_c + k.tau_half_width_ns, f0 - k.f_below_mhz * 1e-3,
                         f0 + k.f_above_mhz * 1e-3};
    std::cerr << "calibrating at A = " << amplitude << " GHz\n";
    pulse = calibrate_single_pulse(reduced, amplitude, w, target, ctx.calibration_options(),
                                   k.refine_full_model ? &full : nullptr)
                .pulse();
  } else {
    if (!(pc.duration_ns > 0.0 && pc.frequency_ghz > 0.0))
      throw InvalidArgument("gate: pulse needs duration and frequency (config gate.pulse or flags), or --calibrate");
    pulse = DrivePulse::gaussian(pc.amplitude_ghz, pc.duration_ns, pc.frequency_ghz);
  }
  const GateEvaluation e = evaluate_pulse(full, pulse, target, ctx.dt());
  auto& p = out.table("pulses.csv", {"pulse", "amplitude_ghz", "duration_ns", "frequency_ghz"});
  p.row().add("single").add(pulse.amplitude).add(pulse.duration).add(pulse.frequency);
  auto cols = std::vector<std::string>{"fidelity", "leakage", "total_time_ns"};
  for (const auto& c : phase_columns()) cols.push_back(c);
  auto& s = out.table("summary.csv", cols);
  s.row().add(e.fidelity).add(e.leakage).add(pulse.duration);
  add_phases(s, conditional_phases(e.gate));
  add_gate_tables(out, e.gate);
}

void cmd_calibrate(const Context& ctx, const CalibrateArgs& args, OutputSet& out) {
  const auto& k = ctx.config.calibration;
  const DressedModel full = ctx.full_model();
  const DressedModel reduced = truncate(full, std::min<int>(ctx.config.numerics.reduced_keep, full.size()));
  auto cols = std::vector<std::string>{"target", "amplitude_ghz", "tau_ns", "frequency_ghz", "fidelity", "leakage"};
  for (const auto& c : phase_columns()) cols.push_back(c);
  auto& t = out.table("calibration.csv", cols);
  auto emit = [&](const char* name, const CalibrationResult& r) {
    t.row().add(name).add(r.amplitude).add(r.tau).add(r.frequency).add(r.fidelity).add(r.leakage);
    add_phases(t, r.phases);
  };
  if (args.two_pulse) {
    const auto& tp = ctx.config.two_pulse;
    const CalibrationOptions opts = ctx.calibration_options();
    const double f_hw = tp.f_half_width_mhz * 1e-3;
    emit("ccphase", recover_amplitude(reduced, Transition::kAllOne, tp.phase, tp.ccphase_duration_ns,
                                      tp.tau_half_width_ns, f_hw, opts));
    emit("ccphase_star", recover_amplitude(reduced, Transition::kAllZero, kPi - tp.phase,
                                           tp.ccphase_star_duration_ns, tp.tau_half_width_ns, f_hw, opts));
    return;
  }
  std::vector<double> amps = k.amplitudes_ghz;
  if (amps.empty())
    for (double d : k.durations_ns) amps.push_back(area_amplitude(reduced, Transition::kAllOne, d));
  std::sort(amps.begin(), amps.end(), std::greater<>());
  amps.erase(std::unique(amps.begin(), amps.end()), amps.end());
  const double f111 = transition_data(reduced, Transition::kAllOne).first;
  auto window_for = [&](double a) {
    const double tau_c = std::round(area_duration(reduced, Transition::kAllOne, a));
    return SearchWindow{tau_c - k.tau_half_width_ns, tau_c + k.tau_half_width_ns, f111 - k.f_below_mhz * 1e-3,
                        f111 + k.f_above_mhz * 1e-3};
  };
  for (const auto& r : amplitude_sweep(reduced, amps, window_for, ccz_gate(), ctx.calibration_options(),
                                       k.refine_full_model ? &full : nullptr))
    emit("ccz", r);
}

void cmd_lindblad(const Context& ctx, const LindbladArgs& args, OutputSet& out) {
  const DressedModel reduced = ctx.reduced_model();
  std::vector<SequenceStep> steps;
  if (args.two_pulse) {
    steps = two_pulse_spec(ctx, reduced, true).sequence();
  } else {
    const PulseConfig& pc = ctx.config.gate.pulse;
    if (!(pc.duration_ns > 0.0 && pc.frequency_ghz > 0.0))
      throw InvalidArgument("lindblad: config gate.pulse must give duration and frequency");
    steps.push_back(SequenceStep::drive(DrivePulse::gaussian(pc.amplitude_ghz, pc.duration_ns, pc.frequency_ghz)));
  }
  const GateOperator target = args.two_pulse ? ccz_gate() : configured_target(ctx.config.gate);
  const auto& n = ctx.config.noise;
  const auto channels = standard_budget(n.data_t1_us, n.data_tphi_us, n.coupler_t1_us, n.coupler_tphi_us);
  const auto method = n.method == "exact" ? LindbladMethod::kExact : LindbladMethod::kFirstOrder;
  auto& t = out.table("budget.csv", {"channel", "fidelity", "delta_f", "delta_f_percent"});
  for (const auto& r : decoherence_budget(reduced, steps, target, channels, ctx.dt(), method))
    t.row().add(r.channel).add(r.fidelity).add(r.delta_f).add(100.0 * r.delta_f);
}

void cmd_montecarlo(const Context& ctx, OutputSet& out) {
  const auto& mc = ctx.config.montecarlo;
  std::vector<std::string> sample_cols{"epsilon", "sample", "ok"};
  for (const char* f : {"s_ej_f1", "s_el_f1", "s_ej_f2", "s_el_f2", "s_ej_f3", "s_el_f3", "s_ej_t"}) sample_cols.push_back(f);
  for (const auto& q : monte_carlo_quantities()) sample_cols.push_back(q.name);
  auto& samples = out.table("samples.csv", sample_cols);
  auto& cdf = out.table("cdf.csv", {"quantity", "value", "cumulative_probability", "epsilon", "designed"});
  auto& stats = out.table("failures.csv", {"epsilon", "samples", "failures"});
  for (double eps : mc.epsilons) {
    MonteCarloSpec spec;
    spec.epsilon = eps;
    spec.n_samples = mc.samples;
    spec.seed = mc.seed;
    spec.levels_per_subsystem = mc.levels;
    std::cerr << "monte carlo: epsilon = " << eps << "\n";
    const MonteCarloResult r = monte_carlo(ctx.config.device, spec, ctx.config.spectrum_numerics());
    for (std::size_t k = 0; k < r.samples.size(); ++k) {
      const auto& s = r.samples[k];
      samples.row().add(eps).add(static_cast<std::uint64_t>(k)).add(s.ok);
      for (double f : s.factors) samples.add(f);
      for (const auto& q : monte_carlo_quantities()) samples.add(s.ok ? q.get(s) : std::nan(""));
    }
    for (const auto& q : monte_carlo_quantities()) {
      cdf.row().add(q.name).add(q.designed(r.designed)).add("").add(eps).add(true);
      for (const auto& p : empirical_cdf(successful_values(r, q)))
        cdf.row().add(q.name).add(p.value).add(p.probability).add(eps).add(false);
    }
    stats.row().add(eps).add(mc.samples).add(r.failures);
  }
}

void cmd_twolevel(const Context& ctx, OutputSet& out) {
  const auto& w = ctx.config.twolevel;
  const double omega = w.omega_ghz > 0.0 ? w.omega_ghz : two_pi_amplitude(w.duration_ns);
  const DrivePulse pulse = DrivePulse::gaussian(omega, w.duration_ns, 1.0);
  std::vector<double> deltas;
  for (int i = 0; i < w.points; ++i) {
    const double x = w.points == 1 ? 0.0 : static_cast<double>(i) / (w.points - 1);
    deltas.push_back(1e-3 * (w.delta_min_mhz + x * (w.delta_max_mhz - w.delta_min_mhz)));
  }
  auto& t = out.table("twolevel.csv", {"delta_ghz", "population", "phase"});
  for (const auto& p : two_level_sweep(pulse, deltas)) t.row().add(p.delta).add(p.population).add(p.phase);
}

void add_common(CLI::App& app, CommonArgs& a) {
  app.add_option("--config", a.config_path, "YAML configuration file (built-in reference device if omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", a.out_dir, std::string("output directory (else $") + kOutputEnv + ", else ./fluxccz-out)");
  app.add_option("--levels", a.levels, "levels per subsystem")->check(CLI::Range(4, 12));
  app.add_option("--dt", a.dt_ps, "time step in ps (0 = automatic)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", a.seed, "Monte Carlo seed");
  app.add_flag("--dump-config", a.dump_config, "print the effective configuration and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-fluxonium CCZ gate simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonArgs common;
  GateArgs gate_args;
  CalibrateArgs cal_args;
  LindbladArgs lb_args;

  auto* spectrum = app.add_subcommand("spectrum", "subsystem spectra and coupler transition table");
  auto* gate = app.add_subcommand("gate", "gate matrix, PTM and fidelity of a pulse");
  auto* calibrate = app.add_subcommand("calibrate", "(tau, f) grid-search calibration");
  auto* lindblad = app.add_subcommand("lindblad", "decoherence budget");
  auto* montecarlo = app.add_subcommand("montecarlo", "fabrication-spread Monte Carlo");
  auto* twolevel = app.add_subcommand("twolevel", "two-level detuning sweep");
  for (auto* sc : {spectrum, gate, calibrate, lindblad, montecarlo, twolevel}) add_common(*sc, common);

  auto* gate_calibrate = gate->add_flag("--calibrate", gate_args.calibrate, "calibrate (tau, f) before evaluating");
  gate->add_flag("--two-pulse", gate_args.two_pulse, "two-pulse CCZ")->excludes(gate_calibrate);
  gate->add_option("--amplitude", gate_args.amplitude, "pulse amplitude, GHz");
  gate->add_option("--duration", gate_args.duration, "pulse duration, ns")->check(CLI::PositiveNumber);
  gate->add_option("--frequency", gate_args.frequency, "carrier frequency, GHz")->check(CLI::PositiveNumber);
  calibrate->add_flag("--two-pulse", cal_args.two_pulse, "calibrate the two CCPhase pulses");
  lindblad->add_flag("--two-pulse", lb_args.two_pulse, "budget of the two-pulse CCZ");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context ctx;
  ctx.command = app.get_subcommands().front()->get_name();
  try {
    ctx.config = common.config_path.empty() ? RunConfig{reference_device()} : load_config(common.config_path);
    if (common.levels) ctx.config.numerics.levels = *common.levels;
    if (common.dt_ps) ctx.config.numerics.dt_ps = *common.dt_ps;
    if (common.seed) ctx.config.montecarlo.seed = *common.seed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (common.dump_config) {
    std::cout << dump_config(ctx.config);
    return kExitOk;
  }

  OutputSet out;
  try {
    if (ctx.command == "spectrum") cmd_spectrum(ctx, out);
    else if (ctx.command == "gate") cmd_gate(ctx, gate_args, out);
    else if (ctx.command == "calibrate") cmd_calibrate(ctx, cal_args, out);
    else if (ctx.command == "lindblad") cmd_lindblad(ctx, lb_args, out);
    else if (ctx.command == "montecarlo") cmd_montecarlo(ctx, out);
    else cmd_twolevel(ctx, out);
    const std::filesystem::path dir = output_dir(common);
    out.commit(dir, {ctx.command, ctx.config.montecarlo.seed, config_hash(ctx.config)});
    for (const auto& f : out.files()) std::cout << (dir / f).string() << "\n";
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure in " << ctx.command << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    std::cerr << "error in " << ctx.command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error in " << ctx.command << ": " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
