#include "eit/run_spec.hpp"

#include <ostream>

#include "eit/config.hpp"
#include "eit/error.hpp"

namespace eit {
namespace {

LambdaParams fig2_params(double delta1) {
  return LambdaParams::with_equal_decay(45.0, 1.0, delta1, 0.0, 5.68, 3.4, 0.0);
}

LambdaParams results_params(double omega1, double delta1, double delta2) {
  return LambdaParams::with_equal_decay(omega1, 1.0, delta1, delta2, 5.5, 0.6 * 5.5, 0.2);
}

}  // namespace

std::vector<double> Axis::values() const {
  if (count < 1) throw Error(ErrorCode::Usage, "axis needs at least one point");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] = count == 1 ? min : min + (max - min) * i / (count - 1);
  }
  return v;
}

std::vector<std::string_view> preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig2d", "fig4a", "fig4b", "fig9"};
}

std::string preset_description(std::string_view name) {
  if (name == "fig2a") return "turn-on, resonant coupling: omega1=45 omega2=1 gamma=5.68 gamma_ba=3.4 delta1=0";
  if (name == "fig2b") return "turn-on, detuned coupling: omega1=45 omega2=1 gamma=5.68 gamma_ba=3.4 delta1=-23";
  if (name == "fig2c") return "turn-off, resonant coupling: omega1=45 omega2=1 gamma=5.68 gamma_ba=3.4 delta1=0";
  if (name == "fig2d") return "turn-off, detuned coupling: omega1=45 omega2=1 gamma=5.68 gamma_ba=3.4 delta1=-23";
  if (name == "fig4a") return "steady spectrum: omega1=45 delta1=0 gamma=5.5 gamma_ba=0.6 gamma u=0.2";
  if (name == "fig4b") return "steady spectrum: omega1=45 delta1=-23 gamma=5.5 gamma_ba=0.6 gamma u=0.2";
  if (name == "fig9") return "turn-off ringing: omega1=46 delta1=-23 delta2=-40 gamma=5.5 gamma_ba=0.6 gamma u=0.2";
  throw Error(ErrorCode::Usage, "unknown preset '" + std::string(name) + "'");
}

RunSpec preset_spec(std::string_view name) {
  RunSpec spec;
  spec.preset = std::string(name);
  if (name == "fig2a" || name == "fig2b" || name == "fig2c" || name == "fig2d") {
    const bool detuned = name == "fig2b" || name == "fig2d";
    const bool on = name == "fig2a" || name == "fig2b";
    spec.params = fig2_params(detuned ? -23.0 : 0.0);
    spec.schedule = {on ? SwitchMode::TurnOn : SwitchMode::TurnOff, 0.0, 45.0};
    spec.delta2_axis = {-60.0, 60.0, 200};
    spec.time_axis = {-0.1, 0.5, 400};
  } else if (name == "fig4a" || name == "fig4b") {
    spec.params = results_params(45.0, name == "fig4b" ? -23.0 : 0.0, 0.0);
    spec.schedule = {SwitchMode::Steady, 0.0, 45.0};
    spec.delta2_axis = {-80.0, 80.0, 1601};
  } else if (name == "fig9") {
    spec.params = results_params(46.0, -23.0, -40.0);
    spec.schedule = {SwitchMode::TurnOff, 0.0, 46.0};
    spec.time_axis = {-0.05, 0.4, 451};
  } else {
    throw Error(ErrorCode::Usage, "unknown preset '" + std::string(name) + "'");
  }
  return spec;
}

void load_config(const std::string& path, RunSpec& spec) {
  const ConfigEntries entries = parse_config_file(path);
  apply_config(entries, spec.params, spec.schedule);
  const bool has_omega1 = entries.contains("omega1");
  const bool has_on = entries.contains("omega1_on");
  if (has_omega1 && !has_on) spec.schedule.omega1_on = spec.params.omega1;
  if (has_on && !has_omega1) spec.params.omega1 = spec.schedule.omega1_on;
}

void write_meta(std::ostream& out, const RunSpec& spec) {
  const auto old_precision = out.precision(17);
  const LambdaParams& p = spec.params;
  out << "subcommand = " << spec.subcommand << '\n';
  if (!spec.preset.empty()) out << "preset = " << spec.preset << '\n';
  out << "omega1 = " << p.omega1 << '\n'
      << "omega2 = " << p.omega2 << '\n'
      << "delta1 = " << p.delta1 << '\n'
      << "delta2 = " << p.delta2 << '\n'
      << "gamma_ca = " << p.gamma_ca << '\n'
      << "gamma_cb = " << p.gamma_cb << '\n'
      << "gamma_ba = " << p.gamma_ba << '\n'
      << "uncoupled_fraction = " << p.uncoupled_fraction << '\n'
      << "mode = " << to_string(spec.schedule.mode) << '\n'
      << "switch_time = " << spec.schedule.switch_time << '\n'
      << "omega1_on = " << spec.schedule.omega1_on << '\n'
      << "delta2_axis = " << spec.delta2_axis.min << ' ' << spec.delta2_axis.max << ' '
      << spec.delta2_axis.count << '\n'
      << "time_axis = " << spec.time_axis.min << ' ' << spec.time_axis.max << ' '
      << spec.time_axis.count << '\n'
      << "engine = " << to_string(spec.engine) << '\n'
      << "seed = " << spec.seed << '\n';
  out.precision(old_precision);
}

}  // namespace eit
