#include "rotbec/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace rotbec {

namespace {

std::int64_t step_count(double t_end, double dt) {
  if (!(t_end > 0.0)) throw ConfigError("config: time.T_end must be positive");
  return static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
}

InitialFunction gaussian_pair_1() {
  return [](const Point& x) {
    return Complex(std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])) / std::sqrt(2.0 * M_PI), 0.0);
  };
}
InitialFunction gaussian_pair_2() {
  return [](const Point& x) {
    const double amp = std::pow(1.5, 0.25) / std::sqrt(2.0 * M_PI);
    return Complex(amp * std::exp(-0.5 * (x[0] * x[0] + 1.5 * x[1] * x[1])), 0.0);
  };
}
InitialFunction central_vortex(double norm) {
  return [norm](const Point& x) {
    return Complex(x[0], x[1]) / std::sqrt(norm) *
           std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
  };
}
InitialFunction zero_function() {
  return [](const Point&) { return Complex(0.0, 0.0); };
}

}  // namespace

RunConfig build_run_config(const Config& cfg) {
  RunConfig rc;
  const int dim = cfg.get_int("dim", 2);
  if (dim != 2 && dim != 3) throw ConfigError("config: dim must be 2 or 3");
  if (dim == 2 && (cfg.has("domain.f") || cfg.has("domain.g") || cfg.has("grid.L")))
    throw ConfigError("config: 3D keys present but dim = 2");

  try {
    if (dim == 2) {
      rc.grid = GridSpec(BoxDomain::box2d(cfg.get_double("domain.a"), cfg.get_double("domain.b"),
                                          cfg.get_double("domain.c"), cfg.get_double("domain.e")),
                         cfg.get_int("grid.J"), cfg.get_int("grid.K"));
    } else {
      rc.grid = GridSpec(BoxDomain::box3d(cfg.get_double("domain.a"), cfg.get_double("domain.b"),
                                          cfg.get_double("domain.c"), cfg.get_double("domain.e"),
                                          cfg.get_double("domain.f"), cfg.get_double("domain.g")),
                         cfg.get_int("grid.J"), cfg.get_int("grid.K"), cfg.get_int("grid.L"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  rc.params.dt = cfg.get_double("time.dt");
  if (!(rc.params.dt > 0.0)) throw ConfigError("config: time.dt must be positive");
  rc.t_end = cfg.get_double("time.T_end");
  rc.params.omega = cfg.get_double("physics.omega", 0.0);
  rc.params.lambda = cfg.get_double("physics.lambda", 0.0);
  const double b11 = cfg.get_double("beta.11", 0.0);
  const double b12 = cfg.get_double("beta.12", 0.0);
  const double b22 = cfg.get_double("beta.22", 0.0);
  rc.params.beta = {{{b11, b12}, {b12, b22}}};
  for (int j = 0; j < 2; ++j) {
    const std::string base = "trap." + std::to_string(j + 1) + ".";
    HarmonicTrap trap;
    trap.gamma_x = cfg.get_double(base + "gamma_x", 1.0);
    trap.gamma_y = cfg.get_double(base + "gamma_y", 1.0);
    trap.gamma_z = cfg.get_double(base + "gamma_z", dim == 3 ? 1.0 : 0.0);
    if (!(trap.gamma_x > 0.0) || !(trap.gamma_y > 0.0))
      throw ConfigError("config: trap frequencies must be positive");
    rc.params.traps[j] = trap;
  }

  rc.init = cfg.get_string("init", "");
  if (rc.init.empty()) throw ConfigError("config: missing required key `init`");
  rc.renormalize = cfg.get_bool("init.renormalize", false);

  rc.timeseries_path = cfg.get_string("output.timeseries", "");
  rc.sample_every = cfg.get_int("output.sample_every", 100);
  if (rc.sample_every < 1) throw ConfigError("config: output.sample_every must be >= 1");
  if (cfg.has("output.frames")) rc.frame_times = cfg.get_double_list("output.frames");
  rc.frame_prefix = cfg.get_string("output.frame_prefix", "frame");

  rc.converge_levels = cfg.get_int("converge.levels", 4);
  if (rc.converge_levels < 1) throw ConfigError("config: converge.levels must be >= 1");
  rc.converge_coarsest_dt = cfg.get_double("converge.coarsest_dt", 0.0);
  rc.converge_ref_dt = cfg.get_double("converge.ref_dt", 0.0);
  rc.converge_coarsest_J = cfg.get_int("converge.coarsest_J", 0);
  rc.converge_ref_J = cfg.get_int("converge.ref_J", 0);
  rc.converge_t_end = cfg.get_double("converge.T_end", 0.0);
  return rc;
}

namespace {

CoupledState builtin_initial(const RunConfig& cfg) {
  const std::string& name = cfg.init;
  InitReport report;
  if (name == "gaussian-pair") {
    report = init_from_function(cfg.grid, gaussian_pair_1(), gaussian_pair_2());
  } else if (name == "central-vortex") {
    report = init_from_function(cfg.grid, central_vortex(M_PI), zero_function());
  } else if (name == "vortex-pair") {
    report = init_from_function(cfg.grid, central_vortex(2.0 * M_PI), central_vortex(2.0 * M_PI));
  } else {
    throw ConfigError("config: unknown initial condition `" + name +
                      "` (builtins: gaussian-pair, central-vortex, vortex-pair; or dump:<path>)");
  }
  return std::move(report.state);
}

}  // namespace

CoupledState initial_state(const RunConfig& cfg) {
  CoupledState state;
  if (cfg.init.rfind("dump:", 0) == 0) {
    GridDump dump = read_grid_dump(cfg.init.substr(5));
    if (dump.state.grid() != cfg.grid)
      throw ConfigError("config: initial dump grid does not match the configured grid");
    if (dump.state.num_components() != 2)
      throw ConfigError("config: initial dump must hold 2 components");
    state = std::move(dump.state);
    state.t = 0.0;
  } else {
    state = builtin_initial(cfg);
  }
  if (cfg.renormalize) {
    double total = 0.0;
    for (double m : component_mass(state)) total += m;
    if (!(total > 0.0)) throw std::runtime_error("initial_state: cannot renormalize zero mass");
    const double scale = 1.0 / std::sqrt(total);
    for (auto& comp : state.components)
      for (std::size_t i = 0; i < comp.size(); ++i) comp.data()[i] *= scale;
  }
  return state;
}

RunResult run_simulation(const RunConfig& cfg, std::ostream* log) {
  CgpeSolver solver(cfg.grid, cfg.params);
  RunResult result;
  result.final_state = initial_state(cfg);
  CoupledState& state = result.final_state;

  const double dt = cfg.params.dt;
  const std::int64_t n_total = step_count(cfg.t_end, dt);

  // Stops: sample steps plus the steps nearest the requested frame times.
  std::map<std::int64_t, std::vector<std::size_t>> frames_at;
  for (std::size_t i = 0; i < cfg.frame_times.size(); ++i) {
    const std::int64_t step =
        std::clamp<std::int64_t>(std::llround(cfg.frame_times[i] / dt), 0, n_total);
    frames_at[step].push_back(i);
  }
  std::set<std::int64_t> stops;
  stops.insert(0);
  for (std::int64_t s = cfg.sample_every; s < n_total; s += cfg.sample_every) stops.insert(s);
  stops.insert(n_total);
  for (const auto& [step, idx] : frames_at) stops.insert(step);

  auto emit_frame = [&](std::size_t frame_idx) {
    const CoupledState psi = eulerian_frame(state, state.t, cfg.params.omega, cfg.grid);
    char name[64];
    std::snprintf(name, sizeof(name), "_%03zu.dump", frame_idx);
    write_grid_dump(psi, cfg.params.omega, cfg.frame_prefix + name);
  };
  auto sample = [&](std::int64_t step) {
    if (!state_is_finite(state))
      throw std::runtime_error("run: non-finite field at t = " + std::to_string(state.t));
    const bool is_sample = step % cfg.sample_every == 0 || step == n_total;
    if (is_sample) {
      DiagnosticsRecord rec = sample_diagnostics(state, cfg.params);
      if (log) {
        char line[160];
        std::snprintf(line, sizeof(line), "t = %-12.6g N = %-18.12g E = %-18.12g%s\n", rec.t,
                      rec.mass_total, rec.energy, rec.tail_warning ? "  [tail-mass warning]" : "");
        (*log) << line << std::flush;
      }
      result.records.push_back(std::move(rec));
    }
    const auto fit = frames_at.find(step);
    if (fit != frames_at.end())
      for (std::size_t idx : fit->second) emit_frame(idx);
  };

  std::int64_t done = 0;
  sample(0);
  for (std::int64_t stop : stops) {
    if (stop <= done) continue;
    solver.evolve(state, stop - done, {}, 0);
    done = stop;
    sample(done);
  }

  if (!cfg.timeseries_path.empty()) write_timeseries(result.records, cfg.timeseries_path);
  return result;
}

ComplexField restrict_field(const ComplexField& fine, const GridSpec& coarse) {
  const GridSpec& fg = fine.grid();
  if (fg.dim() != coarse.dim())
    throw std::invalid_argument("restrict_field: dimension mismatch");
  std::array<int, 3> stride{1, 1, 1};
  for (int axis = 0; axis < fg.dim(); ++axis) {
    if (fg.box().lo[axis] != coarse.box().lo[axis] || fg.box().hi[axis] != coarse.box().hi[axis])
      throw std::invalid_argument("restrict_field: box mismatch");
    if (fg.size(axis) % coarse.size(axis) != 0)
      throw std::invalid_argument("restrict_field: grids are not nested");
    stride[axis] = fg.size(axis) / coarse.size(axis);
  }
  ComplexField out(coarse);
  if (coarse.dim() == 2) {
    for (int s = 0; s <= coarse.size(0); ++s)
      for (int l = 0; l <= coarse.size(1); ++l) out(s, l) = fine(s * stride[0], l * stride[1]);
  } else {
    for (int s = 0; s <= coarse.size(0); ++s)
      for (int l = 0; l <= coarse.size(1); ++l)
        for (int m = 0; m <= coarse.size(2); ++m)
          out(s, l, m) = fine(s * stride[0], l * stride[1], m * stride[2]);
  }
  return out;
}

namespace {

double squared_error_sum(const CoupledState& a, const CoupledState& b) {
  if (a.num_components() != b.num_components())
    throw std::invalid_argument("composite error: component count mismatch");
  double sum = 0.0;
  for (int j = 0; j < a.num_components(); ++j) {
    const ComplexField& aj = a.components[j];
    const ComplexField& bj = b.components[j];
    if (aj.grid() != bj.grid()) throw std::invalid_argument("composite error: grid mismatch");
    for (std::size_t i = 0; i < aj.size(); ++i) sum += std::norm(aj.data()[i] - bj.data()[i]);
  }
  return sum;
}

}  // namespace

double composite_l2_error(const CoupledState& a, const CoupledState& b) {
  double weight = 1.0;
  const GridSpec& g = a.grid();
  for (int axis = 0; axis < g.dim(); ++axis) weight *= g.spacing(axis);
  return std::sqrt(weight * squared_error_sum(a, b));
}

double displayed_l2_error(const CoupledState& a, const CoupledState& b) {
  return std::sqrt(a.grid().spacing(0) * squared_error_sum(a, b));
}

namespace {

// Land exactly on T: round the requested step to the nearest divisor count.
std::int64_t ladder_steps(double t_end, double dt) {
  const std::int64_t n = std::llround(t_end / dt);
  return std::max<std::int64_t>(n, 1);
}

CoupledState ladder_run(const RunConfig& cfg, const GridSpec& grid, double dt, double t_end,
                        std::ostream* log, const char* label) {
  RunConfig local = cfg;
  local.grid = grid;
  CgpeParams params = cfg.params;
  params.dt = dt;
  const std::int64_t n = ladder_steps(t_end, dt);
  params.dt = t_end / static_cast<double>(n);  // exact landing on t_end
  CgpeSolver solver(grid, params);
  CoupledState state = initial_state(local);
  if (log)
    (*log) << "converge: " << label << " run, J = " << grid.size(0) << ", k = " << params.dt
           << ", steps = " << n << "\n"
           << std::flush;
  solver.evolve(state, n, {}, 0);
  return state;
}

}  // namespace

ConvergeReport run_convergence(const RunConfig& cfg, ConvergeMode mode, std::ostream* log) {
  ConvergeReport report;
  report.mode = mode;
  const double t_end = cfg.converge_t_end > 0.0 ? cfg.converge_t_end : cfg.t_end;

  if (mode == ConvergeMode::kTemporal) {
    const double k0 = cfg.converge_coarsest_dt > 0.0 ? cfg.converge_coarsest_dt : cfg.params.dt;
    const double kref = cfg.converge_ref_dt > 0.0
                            ? cfg.converge_ref_dt
                            : k0 / std::pow(2.0, cfg.converge_levels + 2);
    const CoupledState ref = ladder_run(cfg, cfg.grid, kref, t_end, log, "reference");
    for (int level = 0; level < cfg.converge_levels; ++level) {
      const double k = k0 / std::pow(2.0, level);
      const CoupledState sol = ladder_run(cfg, cfg.grid, k, t_end, log, "ladder");
      report.rungs.push_back({k, displayed_l2_error(sol, ref)});
    }
  } else {
    const int j0 = cfg.converge_coarsest_J > 0 ? cfg.converge_coarsest_J : cfg.grid.size(0) / 8;
    const int jref = cfg.converge_ref_J > 0 ? cfg.converge_ref_J
                                            : j0 * (1 << (cfg.converge_levels + 1));
    auto make_grid = [&](int J) {
      const BoxDomain& box = cfg.grid.box();
      const double aspect_k = static_cast<double>(cfg.grid.size(1)) / cfg.grid.size(0);
      const int K = static_cast<int>(std::lround(J * aspect_k));
      if (cfg.grid.dim() == 2) return GridSpec(box, J, K);
      const double aspect_l = static_cast<double>(cfg.grid.size(2)) / cfg.grid.size(0);
      return GridSpec(box, J, K, static_cast<int>(std::lround(J * aspect_l)));
    };
    const GridSpec ref_grid = make_grid(jref);
    const CoupledState ref = ladder_run(cfg, ref_grid, cfg.params.dt, t_end, log, "reference");
    for (int level = 0; level < cfg.converge_levels; ++level) {
      const int J = j0 * (1 << level);
      const GridSpec grid = make_grid(J);
      const CoupledState sol = ladder_run(cfg, grid, cfg.params.dt, t_end, log, "ladder");
      CoupledState ref_restricted;
      ref_restricted.t = ref.t;
      for (const auto& comp : ref.components)
        ref_restricted.components.push_back(restrict_field(comp, grid));
      report.rungs.push_back({grid.spacing(0), displayed_l2_error(sol, ref_restricted)});
    }
  }

  for (std::size_t i = 0; i + 1 < report.rungs.size(); ++i)
    report.ratios.push_back(report.rungs[i].error / report.rungs[i + 1].error);
  if (report.rungs.size() >= 2) {
    // Least-squares slope of log(err) against log(param).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(report.rungs.size());
    for (const auto& rung : report.rungs) {
      const double x = std::log(rung.param), y = std::log(std::max(rung.error, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    report.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return report;
}

void print_report(const ConvergeReport& report, std::ostream& out) {
  const bool temporal = report.mode == ConvergeMode::kTemporal;
  out << (temporal ? "temporal" : "spatial") << " convergence (errors vs fine reference)\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%12s  %14s  %10s\n", temporal ? "k" : "h", "error", "ratio");
  out << line;
  for (std::size_t i = 0; i < report.rungs.size(); ++i) {
    if (i == 0)
      std::snprintf(line, sizeof(line), "%12.6g  %14.6e  %10s\n", report.rungs[i].param,
                    report.rungs[i].error, "-");
    else
      std::snprintf(line, sizeof(line), "%12.6g  %14.6e  %10.3f\n", report.rungs[i].param,
                    report.rungs[i].error, report.ratios[i - 1]);
    out << line;
  }
  if (report.fitted_order)
    out << "observed order: " << *report.fitted_order << "\n";
  else
    out << "observed order: n/a (single rung)\n";
}

}  // namespace rotbec
