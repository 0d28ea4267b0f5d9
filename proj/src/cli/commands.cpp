#include "filmctl/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "filmctl/csv.hpp"
#include "filmctl/damping_fit.hpp"
#include "filmctl/dispersion.hpp"
#include "filmctl/fourier_gain.hpp"
#include "filmctl/gain_io.hpp"
#include "filmctl/linear_system.hpp"
#include "filmctl/min_actuators.hpp"
#include "filmctl/simulation.hpp"

namespace filmctl {

int exit_code_for(const Error& error) noexcept {
  const std::string_view kind = error.kind();
  if (kind == "ConfigError" || kind == "InvalidArgument") return kExitUsage;
  if (kind == "IoError") return kExitIo;
  return kExitNumerical;
}

std::string error_line(std::string_view kind, std::string_view message) {
  std::string line = "error: " + std::string(kind) + ": ";
  for (char c : message) line += (c == '\n' || c == '\r') ? ' ' : c;
  return line;
}

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RunConfig load_run_config(const std::string& config_path, const std::vector<std::string>& overrides) {
  RunConfig config;
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
  }
  if (!path.empty()) apply_config_text(config, read_text_file(path));
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError(o, "override must have the form key=value");
    apply_setting(config, o.substr(0, eq), o.substr(eq + 1));
  }
  config.validate();
  return config;
}

namespace {

// Options shared by every subcommand. Dedicated flags are turned into
// `key=value` overrides appended after --set, so they win over both the
// file and --set.
struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string output;
  bool force = false;
  std::optional<std::string> preset;
  std::optional<double> re, ca, beta, t_end, dt;
  std::optional<int> actuators, points;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "Config file (default: $FILMCTL_CONFIG)");
    app->add_option("--set", sets, "Override a config key, key=value (repeatable)");
    app->add_option("-o,--output", output, "Output file (default: standard output)");
    app->add_flag("--force", force, "Overwrite existing output files");
    app->add_option("--preset", preset, "Fluid preset (parameters.preset)");
    app->add_option("--re", re, "Reynolds number (parameters.reynolds)");
    app->add_option("--ca", ca, "Capillary number (parameters.capillary)");
    app->add_option("--beta", beta, "Cost weight (control.beta)");
    app->add_option("--actuators", actuators, "Actuator count (actuators.count)");
    app->add_option("--points", points, "Grid points (grid.points)");
    app->add_option("--t-end", t_end, "Final time (simulation.t_end)");
    app->add_option("--dt", dt, "Maximum time step (solver.dt)");
  }

  [[nodiscard]] std::vector<std::string> overrides() const {
    std::vector<std::string> o = sets;
    auto num = [](double v) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    if (preset) o.push_back("parameters.preset=" + *preset);
    if (re) o.push_back("parameters.reynolds=" + num(*re));
    if (ca) o.push_back("parameters.capillary=" + num(*ca));
    if (beta) o.push_back("control.beta=" + num(*beta));
    if (actuators) o.push_back("actuators.count=" + std::to_string(*actuators));
    if (points) o.push_back("grid.points=" + std::to_string(*points));
    if (t_end) o.push_back("simulation.t_end=" + num(*t_end));
    if (dt) o.push_back("solver.dt=" + num(*dt));
    return o;
  }
};

struct Context {
  RunConfig config;
  std::string hash;
  const CommonArgs* args = nullptr;
  std::ostream* out = nullptr;

  [[nodiscard]] std::string provenance() const { return provenance_line(hash, config.seed); }

  void check_output() const {
    if (!args->output.empty()) check_output_path(args->output, args->force);
  }
  void emit(const std::string& text) const {
    if (args->output.empty()) *out << text;
    else write_output_file(args->output, text, args->force);
  }
  // Human-readable summary line; kept off stdout when stdout carries the data.
  void note(const std::string& line) const {
    if (!args->output.empty()) *out << line << '\n';
  }
};

Context make_context(const CommonArgs& args, std::ostream& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> o = args.overrides();
  o.insert(o.end(), extra.begin(), extra.end());
  Context ctx;
  ctx.config = load_run_config(args.config_path, o);
  ctx.hash = config_hash(ctx.config);
  ctx.args = &args;
  ctx.out = &out;
  return ctx;
}

// Gain deployed by `gain` and by `simulate` without --gain-file; both call
// this so a stored gain reproduces the inline one exactly.
GainMatrix deployed_gain(const RunConfig& c, Model design, bool full) {
  const Grid grid = c.grid();
  const ActuatorConfig act = make_actuators(c.actuator_count, c.actuator_width, grid);
  const LinearSystem sys = build_linear_system(design, c.params, grid, act);
  const CostWeights w = cost_weights(c.beta, grid, c.actuator_count, fields_per_point(design));
  GainMatrix k = c.gain_method == GainMethod::Lqr ? synthesize_gain(sys, w).gain
                                                  : fourier_restricted_gain(sys, w, grid);
  if (design == Model::WeightedResidual && c.reduce_gain && !full) k = reduce_wr_gain(k);
  return k;
}

std::string model_key(Model m) { return std::string(to_string(m)); }

// ---------------------------------------------------------------- gain
struct GainArgs {
  std::optional<std::string> model;
  bool full = false;
};

int cmd_gain(const CommonArgs& args, const GainArgs& g, std::ostream& out) {
  std::vector<std::string> extra;
  if (g.model) extra.push_back("control.design_model=" + *g.model);
  const Context ctx = make_context(args, out, extra);
  ctx.check_output();
  const RunConfig& c = ctx.config;
  const GainMatrix k = deployed_gain(c, c.design_model, g.full);

  std::ostringstream text;
  write_gain(text, k, {ctx.provenance()});
  ctx.emit(text.str());

  const Grid grid = c.grid();
  const ActuatorConfig act = make_actuators(c.actuator_count, c.actuator_width, grid);
  const double design_abscissa =
      closed_loop(build_linear_system(c.design_model, c.params, grid, act), k).spectral_abscissa;
  std::ostringstream sum;
  sum << "model=" << model_key(c.design_model) << " rows=" << k.rows() << " cols=" << k.cols()
                << " reduced=" << (k.meta.reduced ? "true" : "false")
                << " lambda_star=" << format_double(design_abscissa)
                << " n_u=" << count_unstable_modes(c.params);
  ctx.note(sum.str());
  return kExitOk;
}

// ---------------------------------------------------------------- simulate
struct SimulateArgs {
  std::optional<std::string> model;
  std::optional<std::string> design;
  std::string gain_file;
  std::string snapshots;
  bool uncontrolled = false;
};

std::filesystem::path flux_snapshot_path(const std::filesystem::path& p) {
  std::filesystem::path q = p;
  q.replace_filename(p.stem().string() + "_q" + p.extension().string());
  return q;
}

int cmd_simulate(const CommonArgs& args, const SimulateArgs& s, std::ostream& out) {
  std::vector<std::string> extra;
  if (s.model) extra.push_back("control.controlled_model=" + *s.model);
  if (s.design) extra.push_back("control.design_model=" + *s.design);
  const Context ctx = make_context(args, out, extra);
  const RunConfig& c = ctx.config;
  if (!s.snapshots.empty() && !(c.every > 0.0))
    throw ConfigError("output.every", "must be > 0 when --snapshots is given");
  ctx.check_output();
  const bool wr = c.controlled_model == Model::WeightedResidual;
  if (!s.snapshots.empty()) {
    check_output_path(s.snapshots, args.force);
    if (wr) check_output_path(flux_snapshot_path(s.snapshots), args.force);
  }

  const Grid grid = c.grid();
  const ActuatorConfig act = make_actuators(c.actuator_count, c.actuator_width, grid);

  GainMatrix k;
  std::string gain_source = "none";
  if (!s.uncontrolled) {
    if (!s.gain_file.empty()) {
      k = read_gain_file(s.gain_file);
      if (k.meta.grid_points != c.grid_points)
        throw ConfigError("grid.points", "gain file was built for N = " + std::to_string(k.meta.grid_points));
      gain_source = "file";
    } else {
      k = deployed_gain(c, c.design_model, false);
      gain_source = "inline";
    }
  }

  // Developed waves: spin up without control, falling back to the
  // weighted-residual model when the Benney film blows up.
  InterfaceState start = initial_condition(c.initial_condition(), grid);
  std::string spin_model = "none";
  double spin_duration = 0.0;
  if (c.t_spin > 0.0) {
    SpinUpOptions so;
    so.t_spin = c.t_spin;
    so.solver = c.solver;
    const Model first = c.spin_model == "auto" ? c.controlled_model : parse_model(c.spin_model);
    SpinUpResult spun;
    try {
      spun = spin_up(first, c.params, grid, start, so);
      spin_model = model_key(first);
    } catch (const BlowUp&) {
      if (c.spin_model != "auto" || first == Model::WeightedResidual) throw;
      spun = spin_up(Model::WeightedResidual, c.params, grid, start, so);
      spin_model = "wr";
    }
    start = spun.state;
    spin_duration = spun.duration;
  }

  RunOptions ro;
  ro.t_end = c.t_end;
  ro.beta = c.beta;
  ro.solver = c.solver;
  ro.snapshot_every = s.snapshots.empty() ? 0.0 : c.every;
  SimulationResult r;
  if (s.uncontrolled) {
    r = run_uncontrolled(c.controlled_model, c.params, grid, start, ro);
  } else {
    const ControlPlan plan{k, act, c.controlled_model, c.activation_time};
    r = run_controlled(plan, c.params, grid, start, ro);
  }

  CsvWriter csv;
  csv.comment(ctx.provenance());
  csv.comment("controlled_model=" + model_key(c.controlled_model) + " design_model=" + model_key(c.design_model) +
              " spin_up_model=" + spin_model +
              " spin_up_duration=" + format_double(spin_duration) + " termination=" + to_string(r.termination) +
              " termination_time=" + format_double(r.termination_time));
  const int m = r.controls.empty() ? 0 : static_cast<int>(r.controls.front().size());
  std::vector<std::string> cols{"t", "deviation_norm"};
  for (int i = 1; i <= m; ++i) cols.push_back("u_" + std::to_string(i));
  cols.push_back("accumulated_cost");
  csv.header(cols);
  std::vector<double> row;
  for (std::size_t i = 0; i < r.size(); ++i) {
    row.assign({r.times[i], r.deviation_norms[i]});
    for (int j = 0; j < m; ++j) row.push_back(r.controls[i](j));
    row.push_back(r.accumulated_cost[i]);
    csv.row(row);
  }
  ctx.emit(csv.text());

  if (!s.snapshots.empty()) {
    auto snapshot_csv = [&](bool flux) {
      CsvWriter w;
      w.comment(ctx.provenance());
      w.comment(std::string("field=") + (flux ? "q (faces)" : "h (nodes)"));
      std::vector<std::string> hdr{"t"};
      for (int j = 0; j < grid.size(); ++j) hdr.push_back("x" + std::to_string(j));
      w.header(hdr);
      std::vector<double> values;
      for (const InterfaceState& st : r.snapshots) {
        values.assign(1, st.time);
        const Eigen::VectorXd& f = flux ? st.q : st.h;
        values.insert(values.end(), f.data(), f.data() + f.size());
        w.row(values);
      }
      return w.text();
    };
    write_output_file(s.snapshots, snapshot_csv(false), args.force);
    if (wr) write_output_file(flux_snapshot_path(s.snapshots), snapshot_csv(true), args.force);
  }

  std::ostringstream sum;
  sum << "gain=" << gain_source << " termination=" << to_string(r.termination) << " t=" << format_double(r.times.back())
      << " final_norm=" << format_double(r.deviation_norms.back());
  const CostReport cost = evaluate_cost(r, c.beta);
  sum << " cost=" << format_double(cost.cost) << " tail_bound=" << format_double(cost.tail_bound);
  if (!s.uncontrolled) {
    const Classification v = classify_run(r, true);
    sum << " verdict=" << to_string(v.verdict);
    try {
      sum << " fitted_rate=" << format_double(fit_damping_rate(r).rate);
    } catch (const InsufficientData&) {
    }
  }
  ctx.note(sum.str());
  return kExitOk;
}

// ---------------------------------------------------------------- dispersion
int cmd_dispersion(const CommonArgs& args, const std::optional<std::string>& model_arg, std::ostream& out) {
  const Context ctx = make_context(args, out);
  const RunConfig& c = ctx.config;
  ctx.check_output();
  Model model = Model::Benney;
  if (model_arg) {
    try {
      model = parse_model(*model_arg);
    } catch (const InvalidArgument&) {
      throw ConfigError("--model", "unknown model '" + *model_arg + "' (benney | wr)");
    }
  }
  CsvWriter csv;
  csv.comment(ctx.provenance());
  csv.comment("model=" + model_key(model) + " k0=" + format_double(critical_wavenumber(c.params)) +
              " n_u=" + std::to_string(count_unstable_modes(c.params)));
  std::vector<std::string> cols{"k", "re_lambda_1", "im_lambda_1"};
  if (model == Model::WeightedResidual) cols.insert(cols.end(), {"re_lambda_2", "im_lambda_2"});
  csv.header(cols);
  for (int i = 0; i < c.k_points; ++i) {
    const double k = c.k_max * i / (c.k_points - 1);
    if (model == Model::Benney) {
      const auto l = dispersion_benney(k, c.params);
      csv.row({k, l.real(), l.imag()});
    } else {
      const auto l = dispersion_wr(k, c.params);
      csv.row({k, l[0].real(), l[0].imag(), l[1].real(), l[1].imag()});
    }
  }
  ctx.emit(csv.text());
  return kExitOk;
}

// ---------------------------------------------------------------- min-actuators
struct MinActuatorArgs {
  int jobs = 1;
  std::optional<std::string> re_values, ca_values;
  std::optional<int> m_max;
};

int cmd_min_actuators(const CommonArgs& args, const MinActuatorArgs& a, std::ostream& out) {
  std::vector<std::string> extra;
  if (a.re_values) extra.push_back("sweep.re_values=" + *a.re_values);
  if (a.ca_values) extra.push_back("sweep.ca_values=" + *a.ca_values);
  if (a.m_max) extra.push_back("sweep.m_max=" + std::to_string(*a.m_max));
  if (a.jobs < 1) throw ConfigError("--jobs", "must be >= 1");
  const Context ctx = make_context(args, out, extra);
  const RunConfig& c = ctx.config;
  ctx.check_output();

  StabilityMapSpec spec;
  spec.re_values = c.re_values;
  spec.ca_values = c.ca_values;
  spec.m_max = c.m_max;
  spec.design = c.design_model;
  spec.controlled = c.controlled_model;
  spec.base = c.params;
  spec.protocol.grid_points = c.grid_points;
  spec.protocol.beta = c.beta;
  spec.protocol.width = c.actuator_width;
  spec.protocol.initial = c.initial_condition();
  spec.protocol.spin.t_spin = c.t_spin;
  spec.protocol.spin.solver = c.solver;
  spec.protocol.t_end = c.t_end;
  spec.protocol.solver = c.solver;
  const std::vector<MinActuatorResult> cells = run_stability_map(spec, a.jobs);

  CsvWriter csv;
  csv.comment(ctx.provenance());
  csv.comment("design_model=" + model_key(c.design_model) + " controlled_model=" + model_key(c.controlled_model));
  for (const MinActuatorResult& cell : cells) {
    for (const ActuatorTrial& t : cell.trials) {
      csv.comment("Re=" + format_double(cell.params.reynolds) + " Ca=" + format_double(cell.params.capillary) +
                  " M=" + std::to_string(t.actuators) + " verdict=" + to_string(t.verdict) +
                  " lambda_star=" + format_double(t.lambda_star) + " fitted_rate=" + format_double(t.fitted_rate) +
                  " t_reached=" + format_double(t.t_reached) + " spin_up_model=" + cell.spin_up_model +
                  " reason=" + t.reason);
    }
  }
  csv.header({"Re", "Ca", "M_min", "n_u", "verdict", "runtime"});
  for (const MinActuatorResult& cell : cells) {
    csv.row_text({format_double(cell.params.reynolds), format_double(cell.params.capillary),
                  cell.m_min ? std::to_string(*cell.m_min) : "NA", std::to_string(cell.n_u), cell.verdict(),
                  format_double(cell.runtime_seconds)});
  }
  ctx.emit(csv.text());
  return kExitOk;
}

// ---------------------------------------------------------------- preset
int cmd_preset(const CommonArgs& args, const std::optional<std::string>& name, std::ostream& out) {
  const Context ctx = make_context(args, out);
  ctx.check_output();
  if (name && !find_preset(*name)) throw ConfigError("parameters.preset", "unknown preset '" + *name + "'");
  CsvWriter csv;
  csv.comment(ctx.provenance());
  csv.header({"name", "reynolds", "capillary", "theta", "density", "viscosity", "surface_tension", "film_height"});
  for (const NamedFluid& f : fluid_presets()) {
    if (name && f.name != *name) continue;
    const FlowParameters p = from_physical(f.fluid, ctx.config.params.aspect);
    csv.row_text({std::string(f.name), format_double(p.reynolds), format_double(p.capillary), format_double(p.theta),
                  format_double(f.fluid.density), format_double(f.fluid.viscosity),
                  format_double(f.fluid.surface_tension), format_double(f.fluid.film_height)});
  }
  ctx.emit(csv.text());
  return kExitOk;
}

// ---------------------------------------------------------------- config
int cmd_config(const CommonArgs& args, std::ostream& out) {
  const Context ctx = make_context(args, out);
  ctx.check_output();
  ctx.emit(write_config(ctx.config));
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feedback control of falling liquid films: gain synthesis, simulation and sweeps", "filmctl"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonArgs common;
  GainArgs gain_args;
  SimulateArgs sim_args;
  MinActuatorArgs min_args;
  std::optional<std::string> dispersion_model, preset_name;

  auto* gain = app.add_subcommand("gain", "Synthesise and store the deployed LQR gain");
  common.attach(gain);
  gain->add_option("--model", gain_args.model, "Design model, benney | wr (control.design_model)");
  gain->add_flag("--full", gain_args.full, "Keep flux columns of a weighted-residual gain");

  auto* sim = app.add_subcommand("simulate", "Spin up, then run the controlled nonlinear model");
  common.attach(sim);
  sim->add_option("--model", sim_args.model, "Controlled model, benney | wr (control.controlled_model)");
  sim->add_option("--design", sim_args.design, "Design model, benney | wr (control.design_model)");
  sim->add_option("--gain-file", sim_args.gain_file, "Use a stored gain instead of synthesising one");
  sim->add_option("--snapshots", sim_args.snapshots, "Snapshot CSV of h (and q) every output.every time units");
  sim->add_flag("--uncontrolled", sim_args.uncontrolled, "Run without feedback");

  auto* disp = app.add_subcommand("dispersion", "Linear growth rate versus wavenumber");
  common.attach(disp);
  disp->add_option("--model", dispersion_model, "benney | wr");

  auto* mina = app.add_subcommand("min-actuators", "Minimum number of actuators over a (Re, Ca) grid");
  common.attach(mina);
  mina->add_option("-j,--jobs", min_args.jobs, "Parallel cells");
  mina->add_option("--re-values", min_args.re_values, "Reynolds list, e.g. \"[1, 5]\" (sweep.re_values)");
  mina->add_option("--ca-values", min_args.ca_values, "Capillary list (sweep.ca_values)");
  mina->add_option("--m-max", min_args.m_max, "Largest actuator count tried (sweep.m_max)");

  auto* pre = app.add_subcommand("preset", "List fluid presets and their dimensionless numbers");
  common.attach(pre);
  pre->add_option("name", preset_name, "Only this preset");

  auto* cfg = app.add_subcommand("config", "Print the merged configuration in canonical form");
  common.attach(cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_line("UsageError", e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (gain->parsed()) return cmd_gain(common, gain_args, out);
    if (sim->parsed()) return cmd_simulate(common, sim_args, out);
    if (disp->parsed()) return cmd_dispersion(common, dispersion_model, out);
    if (mina->parsed()) return cmd_min_actuators(common, min_args, out);
    if (pre->parsed()) return cmd_preset(common, preset_name, out);
    if (cfg->parsed()) return cmd_config(common, out);
  } catch (const Error& e) {
    err << error_line(e.kind(), e.what()) << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << error_line("InternalError", e.what()) << '\n';
    return kExitNumerical;
  }
  err << error_line("UsageError", "no subcommand") << '\n';
  return kExitUsage;
}

}  // namespace filmctl
