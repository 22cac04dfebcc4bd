#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eit/analytic.hpp"
#include "eit/compare.hpp"
#include "eit/csv.hpp"
#include "eit/error.hpp"
#include "eit/fit.hpp"
#include "eit/laplace.hpp"
#include "eit/model.hpp"
#include "eit/observe.hpp"
#include "eit/rational.hpp"
#include "eit/run_spec.hpp"
#include "eit/units.hpp"
#include "eit/vector3.hpp"

namespace {

using namespace eit;

struct AxisFlags {
  std::optional<double> min, max;
  std::optional<int> count;

  void apply(Axis& axis) const {
    if (min) axis.min = *min;
    if (max) axis.max = *max;
    if (count) axis.count = *count;
  }
};

struct Flags {
  std::optional<std::string> preset, config, engine, mode;
  std::optional<double> omega1, omega2, delta1, delta2, gamma, gamma_ca, gamma_cb, gamma_ba, u,
      switch_time;
  AxisFlags time, delta2_axis;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

// Files are only written once every computation has succeeded.
using Outputs = std::vector<std::pair<std::string, std::string>>;

void add_param_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--preset", f.preset, "named preset: fig2a..fig2d, fig4a, fig4b, fig9");
  sub->add_option("--config", f.config, "key = value parameter file; flags override it");
  sub->add_option("--omega1", f.omega1, "coupling Rabi frequency (MHz)");
  sub->add_option("--omega2", f.omega2, "probe Rabi frequency (MHz)");
  sub->add_option("--delta1", f.delta1, "coupling detuning (MHz)");
  sub->add_option("--delta2", f.delta2, "probe detuning (MHz)");
  sub->add_option("--gamma", f.gamma, "excited-state decay into each ground state (MHz)");
  sub->add_option("--gamma-ca", f.gamma_ca, "decay c -> a (MHz)");
  sub->add_option("--gamma-cb", f.gamma_cb, "decay c -> b (MHz)");
  sub->add_option("--gamma-ba", f.gamma_ba, "ground-coherence dephasing (MHz)");
  sub->add_option("--u", f.u, "uncoupled absorption fraction");
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
}

void add_time_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--t-min", f.time.min, "first time (us)");
  sub->add_option("--t-max", f.time.max, "last time (us)");
  sub->add_option("--t-count", f.time.count, "number of time points");
  sub->add_option("--switch-time", f.switch_time, "coupling switch time (us)");
}

void add_delta2_axis_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--d2-min", f.delta2_axis.min, "first probe detuning (MHz)");
  sub->add_option("--d2-max", f.delta2_axis.max, "last probe detuning (MHz)");
  sub->add_option("--d2-count", f.delta2_axis.count, "number of probe detunings");
}

void add_engine_flag(CLI::App* sub, Flags& f) {
  sub->add_option("--engine", f.engine, "ode or analytic")->capture_default_str();
}

RunSpec base_spec(const std::string& subcommand) {
  RunSpec spec;
  spec.params = LambdaParams::with_equal_decay(45.0, 1.0, 0.0, 0.0, 5.68, 3.4, 0.2);
  spec.schedule = {SwitchMode::TurnOn, 0.0, 45.0};
  if (subcommand == "turnon" || subcommand == "turnoff") {
    spec.time_axis = {-0.1, 0.5, 601};
  } else if (subcommand == "pump") {
    spec.time_axis = {0.0, 10.0, 1001};
  } else if (subcommand == "spectrum") {
    spec.delta2_axis = {-80.0, 80.0, 1601};
  } else if (subcommand == "vector3") {
    spec.time_axis = {0.0, 0.2, 2001};
  } else if (subcommand == "fit") {
    spec.time_axis = {-0.05, 0.4, 451};
  }
  return spec;
}

RunSpec resolve(const std::string& subcommand, const Flags& f) {
  RunSpec spec = f.preset ? preset_spec(*f.preset) : base_spec(subcommand);
  spec.subcommand = subcommand;
  if (f.config) load_config(*f.config, spec);
  LambdaParams& p = spec.params;
  if (f.omega1) p.omega1 = spec.schedule.omega1_on = *f.omega1;
  if (f.omega2) p.omega2 = *f.omega2;
  if (f.delta1) p.delta1 = *f.delta1;
  if (f.delta2) p.delta2 = *f.delta2;
  if (f.gamma) p.gamma_ca = p.gamma_cb = *f.gamma;
  if (f.gamma_ca) p.gamma_ca = *f.gamma_ca;
  if (f.gamma_cb) p.gamma_cb = *f.gamma_cb;
  if (f.gamma_ba) p.gamma_ba = *f.gamma_ba;
  if (f.u) p.uncoupled_fraction = *f.u;
  if (f.switch_time) spec.schedule.switch_time = *f.switch_time;
  if (f.mode) spec.schedule.mode = parse_switch_mode(*f.mode);
  if (f.engine) spec.engine = parse_engine(*f.engine);
  if (f.seed) spec.seed = *f.seed;
  f.time.apply(spec.time_axis);
  f.delta2_axis.apply(spec.delta2_axis);
  spec.output_dir = f.out;

  if (subcommand == "turnon") spec.schedule.mode = SwitchMode::TurnOn;
  if (subcommand == "turnoff") spec.schedule.mode = SwitchMode::TurnOff;
  if (subcommand == "spectrum") spec.schedule.mode = SwitchMode::Steady;
  if (subcommand == "pump") p.omega1 = spec.schedule.omega1_on = 0.0;
  if (spec.time_axis.count < 1 || spec.delta2_axis.count < 1) {
    throw Error(ErrorCode::Usage, "axis counts must be at least 1");
  }
  validate(p);
  return spec;
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index row) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m(row, j);
  return out;
}

std::string csv_of(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  write_columns(os, header, columns);
  return os.str();
}

Outputs run_trace(const RunSpec& spec, std::ostream& log) {
  const std::vector<double> times = spec.time_axis.values();
  const std::vector<double> d2{spec.params.delta2};
  ScanOptions opt;
  opt.engine = spec.engine;
  opt.threads = 1;
  const ScanGrid grid = scan(spec.params, spec.schedule, d2, times, opt);
  const std::vector<double> im = column(grid.values, 0);
  std::vector<double> tr(im.size());
  for (std::size_t i = 0; i < im.size(); ++i) tr[i] = transmission(im[i], spec.params);

  const auto [lo, hi] = std::minmax_element(tr.begin(), tr.end());
  log << std::setprecision(6) << "peak_T = " << *hi << " at t = " << times[hi - tr.begin()]
      << " us\nmin_T = " << *lo << " at t = " << times[lo - tr.begin()] << " us\n";
  std::vector<double> after_t, after_v;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > spec.schedule.switch_time) {
      after_t.push_back(times[i]);
      after_v.push_back(tr[i]);
    }
  }
  try {
    const Trace post(after_t, after_v);
    log << "ringing_period_ns = " << 1e3 * ringing_period(post) << '\n';
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooFewExtrema && e.code() != ErrorCode::InvalidTrace) throw;
    log << "ringing_period_ns = n/a\n";
  }
  return {{"trace.csv", csv_of({"t_us", "im_rho_bc", "transmission"}, {times, im, tr})}};
}

Outputs run_pump(const RunSpec& spec, double rho_aa, std::ostream& log) {
  if (rho_aa < 0.0 || rho_aa > 1.0) throw Error(ErrorCode::Usage, "--rho-aa must lie in [0, 1]");
  const DensityMatrix rho0(rho_aa, 1.0 - rho_aa, 0.0);
  const ElementMap sys = pump_system(spec.params, rho0);
  const PoleExpansion aa = partial_fractions(sys.at(Element::aa));
  const PoleExpansion bb = partial_fractions(sys.at(Element::bb));
  const PoleExpansion bc = partial_fractions(sys.at(Element::bc));

  const std::vector<cplx> roots = poly_roots(pump_denominator(spec.params));
  cplx p4{};
  double smallest = std::numeric_limits<double>::infinity();
  for (cplx r : roots) {
    if (std::abs(r) > 0.0 && std::abs(r) < smallest) {
      smallest = std::abs(r);
      p4 = r;
    }
  }
  const cplx approx = p4_approx(spec.params);
  const PumpPlateau plateau = pump_intermediate(rho0, spec.params);
  log << std::setprecision(6) << "p4_exact_mhz = " << cyclic(p4.real()) << "\np4_approx_mhz = "
      << cyclic(approx.real()) << "\np4_relative_deviation = "
      << std::abs(approx - p4) / std::abs(p4) << "\nlong_time_rho_aa = "
      << long_time_limit(sys.at(Element::aa)).real() << "\nplateau_rho_aa = " << plateau.rho_aa
      << "\nplateau_rho_bb = " << plateau.rho_bb << "\nplateau_im_rho_bc = "
      << plateau.rho_bc.imag() << '\n';

  const std::vector<double> times = spec.time_axis.values();
  if (times.front() < 0.0) throw Error(ErrorCode::Usage, "pump needs --t-min >= 0");
  std::vector<double> ca, cb, cbc;
  for (double t : times) {
    ca.push_back(invert(aa, t).real());
    cb.push_back(invert(bb, t).real());
    cbc.push_back(invert(bc, t).imag());
  }
  return {{"pump.csv", csv_of({"t_us", "rho_aa", "rho_bb", "im_rho_bc"}, {times, ca, cb, cbc})}};
}

Outputs run_scan(const RunSpec& spec, const std::string& quantity, unsigned threads, int guides,
                 std::ostream& log) {
  ScanOptions opt;
  opt.engine = spec.engine;
  opt.threads = threads;
  if (quantity == "transmission") {
    opt.quantity = Quantity::Transmission;
  } else if (quantity != "im") {
    throw Error(ErrorCode::Usage, "--quantity must be im or transmission");
  }
  if (guides < 0) throw Error(ErrorCode::Usage, "--guides must be >= 0");
  const std::vector<double> d2 = spec.delta2_axis.values();
  const std::vector<double> times = spec.time_axis.values();
  const ScanGrid grid = scan(spec.params, spec.schedule, d2, times, opt);
  std::ostringstream csv, ppm;
  write_scan_csv(csv, grid);
  write_ppm(ppm, grid);
  log << "grid = " << grid.values.rows() << " x " << grid.values.cols() << "\nrange = ["
      << grid.values.minCoeff() << ", " << grid.values.maxCoeff() << "]\n";
  Outputs out{{"scan.csv", csv.str()}, {"scan.ppm", ppm.str()}};
  if (guides > 0) {
    const std::vector<double> shifted = [&] {
      std::vector<double> s(times);
      for (double& t : s) t -= spec.schedule.switch_time;
      return s;
    }();
    std::vector<std::string> header{"t_us"};
    std::vector<std::vector<double>> cols{times};
    for (const RabiCurve& c : rabi_peak_curves(spec.schedule.omega1_on, guides, shifted)) {
      header.push_back("n" + std::to_string(c.n) + (c.sign > 0 ? "_plus" : "_minus"));
      cols.push_back(c.delta2);
    }
    out.emplace_back("guides.csv", csv_of(header, cols));
  }
  return out;
}

Outputs run_spectrum(const RunSpec& spec, std::ostream& log) {
  const std::vector<double> d2 = spec.delta2_axis.values();
  LambdaParams p = spec.params;
  p.omega1 = spec.schedule.omega1_on;
  const auto curve = spectrum(p, d2);
  std::vector<double> tr;
  for (const auto& [d, t] : curve) tr.push_back(t);
  const DressedPositions dressed = dressed_state_positions(p.delta1, p.omega1);
  log << std::setprecision(6) << "dressed_major_mhz = " << dressed.major
      << "\ndressed_minor_mhz = " << dressed.minor << '\n';
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    if (tr[i] < tr[i - 1] && tr[i] <= tr[i + 1]) {
      log << "minimum_mhz = " << d2[i] << " T = " << tr[i] << '\n';
    }
  }
  return {{"spectrum.csv", csv_of({"delta2_mhz", "transmission"}, {d2, tr})}};
}

Outputs run_fit(const RunSpec& spec, const std::optional<std::string>& trace_path,
                const std::vector<std::string>& free_names, std::optional<double> guess_delta2,
                double noise, const std::string& quantity, std::ostream& log) {
  FitOptions opt;
  if (quantity == "im") {
    opt.quantity = FitQuantity::ImRhoBC;
  } else if (quantity != "transmission") {
    throw Error(ErrorCode::Usage, "--quantity must be im or transmission");
  }
  std::vector<FitParam> free;
  for (const std::string& name : free_names) free.push_back(parse_fit_param(name));
  if (free.empty()) free = default_free_set();

  Outputs out;
  Trace trace;
  if (trace_path) {
    trace = read_trace_csv_file(*trace_path);
  } else {
    if (!(noise >= 0.0)) throw Error(ErrorCode::Usage, "--noise must be >= 0");
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, noise);
    std::vector<double> times = spec.time_axis.values(), values;
    for (double t : times) values.push_back(model_turnoff(spec.params, {}, t, opt.quantity) + gauss(rng));
    trace = Trace(times, values);
    std::ostringstream os;
    write_trace_csv(os, trace);
    out.emplace_back("synthetic_trace.csv", os.str());
    log << "synthetic seed = " << spec.seed << " noise = " << noise << '\n';
  }
  LambdaParams initial = spec.params;
  if (guess_delta2) initial.delta2 = *guess_delta2;
  const FitResult result = fit_turnoff(trace, initial, {}, free, opt);
  std::ostringstream report;
  write_report(report, result);
  log << report.str();
  out.emplace_back("fit.txt", report.str());
  return out;
}

Outputs run_vector3(const RunSpec& spec) {
  const double o1 = spec.params.omega1, o2 = spec.params.omega2;
  if (!(o1 > 0.0)) throw Error(ErrorCode::Usage, "vector3 needs --omega1 > 0");
  const RabiVector rabi = RabiVector::from_fields(o1, o2);
  const double theta = std::atan2(o2, o1), big = rabi.magnitude();
  std::vector<double> times = spec.time_axis.values(), b, a, avg, first, pre;
  const StateVector3 start(0.0, 1.0, 0.0);
  for (double t : times) {
    b.push_back(im_rbc_of(case_b(theta, big, t)));
    a.push_back(im_rbc_of(case_a(theta, big, t)));
    avg.push_back(averaged_fast_oscillation(o1, o2, t));
    first.push_back(-(o2 / o1) * 0.25 * std::sin(angular(o1) * t));
    pre.push_back(im_rbc_of(precess(start, rabi, t)));
  }
  return {{"vector3.csv",
           csv_of({"t_us", "im_case_b", "im_case_a", "averaged", "first_order", "precess_from_b"},
                  {times, b, a, avg, first, pre})}};
}

Outputs run_compare(int samples, std::uint64_t seed, std::ostream& log, bool& all_pass) {
  if (samples < 1) throw Error(ErrorCode::Usage, "--samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> times(200);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i) / 199.0;
  const DensityMatrix start(0.05, 0.95, 0.0);
  constexpr double turnon_tol = 1e-6;
  std::ostringstream csv;
  csv << std::setprecision(17)
      << "omega1,omega2,delta1,delta2,gamma,gamma_ba,off_analytic_vs_ode,off_laplace_vs_ode,"
         "off_tolerance,on_laplace_vs_ode,on_tolerance\n";
  log << std::setprecision(3) << std::scientific;
  log << "  #   off analytic-ode  off laplace-ode   off tol   on laplace-ode   on tol   status\n";
  all_pass = true;
  for (int k = 0; k < samples; ++k) {
    const LambdaParams p = random_weak_probe_params(rng);
    const TurnoffComparison off = compare_turnoff(p, times);
    const double on = compare_turnon(p, start, times);
    const double tol = turnoff_tolerance(p);
    const bool pass = off.analytic_vs_ode <= tol && off.laplace_vs_ode <= tol && on <= turnon_tol;
    all_pass = all_pass && pass;
    log << std::setw(3) << k + 1 << "   " << std::setw(14) << off.analytic_vs_ode << "   "
        << std::setw(14) << off.laplace_vs_ode << "   " << std::setw(9) << tol << "   "
        << std::setw(14) << on << "   " << std::setw(6) << turnon_tol << "   "
        << (pass ? "ok" : "FAIL") << '\n';
    csv << p.omega1 << ',' << p.omega2 << ',' << p.delta1 << ',' << p.delta2 << ',' << p.gamma()
        << ',' << p.gamma_ba << ',' << off.analytic_vs_ode << ',' << off.laplace_vs_ode << ','
        << tol << ',' << on << ',' << turnon_tol << '\n';
  }
  log << std::defaultfloat;
  return {{"compare.csv", csv.str()}};
}

void write_outputs(const RunSpec& spec, const Outputs& outputs) {
  namespace fs = std::filesystem;
  const fs::path dir(spec.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::ostringstream meta;
  write_meta(meta, spec);
  Outputs all = outputs;
  all.emplace_back("run.meta", meta.str());
  for (const auto& [name, content] : all) {
    std::ofstream file(dir / name, std::ios::binary);
    file << content;
    if (!file) throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
  }
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
    case ErrorCode::ParseError:
    case ErrorCode::Io:
    case ErrorCode::NegativeRate:
    case ErrorCode::BadFraction:
    case ErrorCode::NonFinite:
    case ErrorCode::InvalidState:
    case ErrorCode::InvalidTrace:
    case ErrorCode::Unsupported:
    case ErrorCode::EngineUnsupported:
      return 1;
    default:
      return 2;
  }
}

std::string preset_help() {
  std::string text = "Presets:\n";
  for (std::string_view name : preset_names()) {
    text += "  " + std::string(name) + ": " + preset_description(name) + "\n";
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient EIT simulator for a three-level Lambda atom"};
  app.require_subcommand(1);
  app.footer(preset_help());
  Flags f;

  auto* turnon = app.add_subcommand("turnon", "Im rho_bc and T after the coupling switches on");
  auto* turnoff = app.add_subcommand("turnoff", "Im rho_bc and T after the coupling switches off");
  for (auto* sub : {turnon, turnoff}) {
    add_param_flags(sub, f);
    add_time_flags(sub, f);
    add_engine_flag(sub, f);
  }

  auto* pump = app.add_subcommand("pump", "optical pumping by the probe alone");
  double rho_aa = 0.0;
  add_param_flags(pump, f);
  add_time_flags(pump, f);
  pump->add_option("--rho-aa", rho_aa, "initial population of a (rest in b)")->capture_default_str();

  auto* scan_cmd = app.add_subcommand("scan", "Im rho_bc over probe detuning and time");
  std::string scan_quantity = "im";
  unsigned threads = 0;
  int guides = 0;
  add_param_flags(scan_cmd, f);
  add_time_flags(scan_cmd, f);
  add_delta2_axis_flags(scan_cmd, f);
  add_engine_flag(scan_cmd, f);
  scan_cmd->add_option("--mode", f.mode, "TurnOn, TurnOff, BothOn or Steady");
  scan_cmd->add_option("--quantity", scan_quantity, "im or transmission")->capture_default_str();
  scan_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  scan_cmd->add_option("--guides", guides, "write Rabi guide curves up to this order");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "steady-state probe transmission spectrum");
  add_param_flags(spectrum_cmd, f);
  add_delta2_axis_flags(spectrum_cmd, f);

  auto* fit_cmd = app.add_subcommand("fit", "fit a turn-off transmission trace");
  std::optional<std::string> trace_path;
  std::vector<std::string> free_names;
  std::optional<double> guess_delta2;
  double noise = 0.01;
  std::string fit_quantity = "transmission";
  add_param_flags(fit_cmd, f);
  add_time_flags(fit_cmd, f);
  fit_cmd->add_option("--trace", trace_path, "CSV with header t_us,transmission");
  fit_cmd->add_option("--free", free_names, "free parameters (default delta2 scale baseline t0)")
      ->delimiter(',');
  fit_cmd->add_option("--guess-delta2", guess_delta2, "initial probe detuning for the fit (MHz)");
  fit_cmd->add_option("--noise", noise, "synthetic noise standard deviation")->capture_default_str();
  fit_cmd->add_option("--seed", f.seed, "synthetic noise seed");
  fit_cmd->add_option("--quantity", fit_quantity, "transmission or im")->capture_default_str();

  auto* vector3_cmd = app.add_subcommand("vector3", "decay-free three-vector model traces");
  add_param_flags(vector3_cmd, f);
  add_time_flags(vector3_cmd, f);

  auto* compare_cmd = app.add_subcommand("compare", "ODE vs Laplace vs closed-form residuals");
  int samples = 5;
  std::uint64_t compare_seed = 7;
  compare_cmd->add_option("--samples", samples, "random parameter sets")->capture_default_str();
  compare_cmd->add_option("--seed", compare_seed, "generator seed")->capture_default_str();
  compare_cmd->add_option("--out", f.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    RunSpec spec = resolve(name, f);
    Outputs outputs;
    std::ostringstream log;
    int status = 0;
    if (name == "turnon" || name == "turnoff") {
      outputs = run_trace(spec, log);
    } else if (name == "pump") {
      outputs = run_pump(spec, rho_aa, log);
    } else if (name == "scan") {
      outputs = run_scan(spec, scan_quantity, threads, guides, log);
    } else if (name == "spectrum") {
      outputs = run_spectrum(spec, log);
    } else if (name == "fit") {
      outputs = run_fit(spec, trace_path, free_names, guess_delta2, noise, fit_quantity, log);
    } else if (name == "vector3") {
      outputs = run_vector3(spec);
    } else if (name == "compare") {
      spec.seed = compare_seed;
      bool all_pass = true;
      outputs = run_compare(samples, compare_seed, log, all_pass);
      if (!all_pass) status = 2;
    }
    write_outputs(spec, outputs);
    std::cout << log.str();
    return status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
