#pragma once

// Run orchestration: single runs with per-record bound checks, epsilon and
// alpha sweeps aggregated from the per-run CSVs, oracle comparisons and
// contour extraction from snapshots.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "selfprop/config.hpp"
#include "selfprop/contour.hpp"
#include "selfprop/diagnostics.hpp"
#include "selfprop/errors.hpp"
#include "selfprop/integrator.hpp"
#include "selfprop/io.hpp"
#include "selfprop/model.hpp"
#include "selfprop/oracle.hpp"

namespace selfprop {

namespace fs = std::filesystem;

/// Tanh standing-wave disk of radius R: (1 + tanh(d / (2 sqrt2 eps))) / 2 with
/// d = R - |x - c| on the torus. STRIPE uses d = half_width - |x_axis - position|.
inline ScalarField initial_phi(const RunConfig& cfg, const Grid& g) {
  const double w = 2.0 * std::numbers::sqrt2 * cfg.model.epsilon;
  if (cfg.phi.kind == PhiInit::Kind::kDisk) {
    const Vec3 c = cfg.disk_center();
    return ScalarField::from_function(g, [&](const Vec3& x) {
      return 0.5 * (1.0 + std::tanh((cfg.phi.radius - g.distance(x, c)) / w));
    });
  }
  const int a = cfg.phi.axis;
  return ScalarField::from_function(g, [&](const Vec3& x) {
    double d = x[a] - cfg.phi.position;
    d -= g.lengths[a] * std::round(d / g.lengths[a]);
    return 0.5 * (1.0 + std::tanh((cfg.phi.half_width - std::abs(d)) / w));
  });
}

inline ScalarField initial_u(const RunConfig& cfg, const Grid& g) {
  if (cfg.u.kind == UInit::Kind::kConst) return ScalarField(g, cfg.u.value);
  const int a = cfg.u.axis;
  return ScalarField::from_function(g, [&](const Vec3& x) {
    return cfg.u.mean + cfg.u.amplitude * std::sin(2.0 * std::numbers::pi * x[a] / g.lengths[a]);
  });
}

inline SimState initial_state(const RunConfig& cfg) {
  const Grid g = cfg.grid();
  return make_state(initial_phi(cfg, g), initial_u(cfg, g), cfg.model);
}

/// Checks one record against the a-priori bounds; returns the first violation.
class BoundMonitor {
 public:
  BoundMonitor(const SimState& initial, const ModelParams& p) : p_(p), volume_(initial.phi.grid().volume()) {
    hypotheses_ = initial.phi.min() > 0.0 && initial.phi.max() < 1.0 && initial.u.min() > 0.0;
    env_ = make_envelope(initial.phi, initial.u, p);
    dissipative_ = p.variant == Variant::kConstGamma && p.gamma_const == 0.0;
  }

  std::optional<std::string> check(const SimState& s, const EnergyReport& r) {
    std::ostringstream msg;
    msg.precision(17);
    if (!E0_) {
      E0_ = r.E;
      mass0_ = r.mass_G;
    }
    if (hypotheses_) {
      const auto e = envelope_check(s, env_);
      if (!e.pass) {
        msg << "envelope violated at t = " << r.t << " (margins: upper " << e.upper_margin << ", lower "
            << e.lower_margin << ", u " << e.u_margin << ")";
        return msg.str();
      }
    }
    if (!nonlocal_bound_ok(r, volume_, p_)) {
      msg << "nonlocal bound violated at t = " << r.t << ": |S~| = " << std::abs(r.stilde);
      return msg.str();
    }
    if (!gronwall_ok(r, *E0_, p_)) {
      msg << "energy bound violated at t = " << r.t << ": E = " << r.E << ", E(0) = " << *E0_;
      return msg.str();
    }
    if (p_.alpha > 0.0 && !volume_drift_ok(r, *E0_, mass0_, p_)) {
      msg << "volume drift bound violated at t = " << r.t << ": drift " << std::abs(r.mass_G - mass0_) << " > "
          << volume_drift_bound(*E0_, r.t, p_);
      return msg.str();
    }
    if (dissipative_ && prev_E_ && r.E > *prev_E_ + kDissipationTolerance * *E0_) {
      msg << "energy increased at t = " << r.t << ": " << *prev_E_ << " -> " << r.E;
      return msg.str();
    }
    prev_E_ = r.E;
    return std::nullopt;
  }

  static constexpr double kDissipationTolerance = 1e-10;

 private:
  ModelParams p_;
  double volume_;
  bool hypotheses_ = false;
  bool dissipative_ = false;
  EnvelopeParams env_;
  std::optional<double> E0_, prev_E_;
  double mass0_ = 0.0;
};

inline SeriesRow make_row(const SimState& s, const ModelParams& p) {
  SeriesRow row;
  row.report = energy_report(s, p);
  if (s.phi.grid().ndim == 2) row.geometry = summarize(extract_contour(s.phi));
  return row;
}

struct RunOutcome {
  SimState final_state;
  std::vector<SeriesRow> rows;
  long steps = 0;
  double dt = 0.0;
};

/// Runs one configuration into out_dir: series.csv (one row per record),
/// optional VTK snapshots, the final contour and summary.txt. Throws the
/// first invariant or numerical failure after the artifacts written so far
/// have been flushed.
inline RunOutcome cmd_run(const RunConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  RunOutcome out;
  out.final_state = initial_state(cfg);
  SimState& state = out.final_state;
  const ModelParams& p = cfg.model;
  SeriesWriter series(out_dir / "series.csv");
  BoundMonitor monitor(state, p);
  long records = 0;

  auto write_summary = [&](const std::string& status) {
    std::ofstream s(out_dir / "summary.txt");
    s << std::setprecision(17);
    s << "status = " << status << "\nt = " << state.t << "\nsteps = " << out.steps << "\ndt = " << out.dt
      << "\nrecords = " << out.rows.size() << '\n';
    if (!out.rows.empty()) {
      const auto& r = out.rows.back();
      s << "E = " << r.report.E << "\nmass_G = " << r.report.mass_G << "\nstilde_l2_accum = " << r.report.stilde_l2_accum
        << "\narea = " << r.geometry.area << "\nradius = " << std::sqrt(r.geometry.area / std::numbers::pi) << '\n';
    }
  };

  auto observer = [&](const SimState& s) {
    SeriesRow row = make_row(s, p);
    series.write(row);
    out.rows.push_back(row);
    if (cfg.output.snapshot_every > 0 && records % cfg.output.snapshot_every == 0) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(6) << std::setfill('0') << records << ".vtk";
      write_vtk(out_dir / name.str(), {{"phi", &s.phi}, {"u", &s.u}});
    }
    ++records;
    if (cfg.output.check_bounds) {
      if (auto failure = monitor.check(s, row.report)) throw InvariantError(*failure);
    }
  };

  try {
    out.dt = resolve_dt(state.phi.grid(), p, cfg.policy);
    // Count steps from the state since run_until works in place.
    const long start = state.step_index;
    try {
      run_until(state, p, cfg.policy, cfg.t_end, cfg.cadence, observer);
    } catch (...) {
      out.steps = state.step_index - start;
      throw;
    }
    out.steps = state.step_index - start;
    if (cfg.output.write_contour && state.phi.grid().ndim == 2) {
      write_contour_csv(out_dir / "contour_final.csv", extract_contour(state.phi));
    }
  } catch (const Error& e) {
    write_summary(std::string("failed: ") + e.what());
    throw;
  }
  write_summary("ok");
  return out;
}

/// log(e_{i+1} / e_i) / log(p_{i+1} / p_i) for successive pairs.
inline std::vector<double> estimated_orders(const std::vector<double>& params, const std::vector<double>& errors) {
  if (params.size() != errors.size()) throw std::invalid_argument("estimated_orders: size mismatch");
  if (params.size() < 3) throw ConfigError("EOC needs at least 3 parameter values");
  std::vector<double> eoc;
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    eoc.push_back(std::log(errors[i + 1] / errors[i]) / std::log(params[i + 1] / params[i]));
  }
  return eoc;
}

struct SweepEntry {
  double value = 0.0;
  fs::path dir;
  double radius = NAN;           ///< area-equivalent radius at the final record
  double oracle_radius = NAN;
  double radius_error = NAN;
  double hausdorff = NAN;        ///< extracted interface vs oracle circle
  double max_drift = NAN;        ///< max_t |int G(phi) - int G(phi_0)|
  double max_drift_ratio = NAN;  ///< max_t drift / bound
  double stilde_l2 = NAN;        ///< int_0^T S~^2 dt
  double max_abs_stilde = NAN;
};

struct SweepVerdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct SweepReport {
  std::string parameter;
  std::vector<SweepEntry> entries;
  std::vector<double> eoc;
  std::vector<SweepVerdict> verdicts;

  bool pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const SweepVerdict& v) { return v.pass; });
  }
};

inline void write_sweep_report(const fs::path& path, const SweepReport& rep) {
  std::ofstream out(path);
  out << rep.parameter << ",radius,oracle_radius,radius_error,hausdorff,max_drift,max_drift_ratio,stilde_l2,max_abs_stilde,eoc\n";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    out << format_double(e.value) << ',' << format_double(e.radius) << ',' << format_double(e.oracle_radius) << ','
        << format_double(e.radius_error) << ',' << format_double(e.hausdorff) << ',' << format_double(e.max_drift) << ','
        << format_double(e.max_drift_ratio) << ',' << format_double(e.stilde_l2) << ','
        << format_double(e.max_abs_stilde) << ',' << (i > 0 && i - 1 < rep.eoc.size() ? format_double(rep.eoc[i - 1]) : "")
        << '\n';
  }
  for (const auto& v : rep.verdicts) out << "# " << v.name << ": " << (v.pass ? "pass" : "FAIL") << " " << v.detail << '\n';
}

/// Which sharp-interface reference a configuration is compared against.
inline OracleConfig::Kind resolve_oracle_kind(const RunConfig& cfg) {
  if (cfg.oracle.kind != OracleConfig::Kind::kAuto) return cfg.oracle.kind;
  if (cfg.model.variant == Variant::kConstGamma) {
    return cfg.model.gamma_const == 0.0 && cfg.model.alpha == 0.0 ? OracleConfig::Kind::kMcf : OracleConfig::Kind::kForced;
  }
  return OracleConfig::Kind::kCoupled;
}

/// Radius trajectory of the oracle for a radially symmetric configuration.
inline OracleTrajectory oracle_trajectory(const RunConfig& cfg, double T) {
  if (cfg.phi.kind != PhiInit::Kind::kDisk || cfg.u.kind != UInit::Kind::kConst) {
    throw ConfigError("oracle comparison needs a disk with constant u");
  }
  const int n = static_cast<int>(cfg.dims.size());
  const double R0 = cfg.phi.radius;
  OracleOptions opt;
  opt.dimension = n;
  switch (resolve_oracle_kind(cfg)) {
    case OracleConfig::Kind::kMcf: {
      OracleTrajectory tr;
      const long steps = std::max(1L, static_cast<long>(std::ceil(T / cfg.oracle.dt)));
      for (long s = 0; s <= steps; ++s) {
        const double t = T * static_cast<double>(s) / steps;
        if (R0 * R0 - 2.0 * (n - 1) * t <= 0.0) {
          tr.extinct = true;
          break;
        }
        tr.times.push_back(t);
        tr.radii.push_back(mcf_radius(R0, t, n));
      }
      return tr;
    }
    case OracleConfig::Kind::kForced: {
      const double g = cfg.model.variant == Variant::kConstGamma ? cfg.model.gamma_const
                                                                 : surface_tension(cfg.u.value, cfg.model);
      return forced_circle_trajectory(R0, g, cfg.model.alpha, cfg.oracle.dt, T, opt);
    }
    default: {
      double L = cfg.lengths[0];
      for (double l : cfg.lengths) L = std::min(L, l);
      const double r_max = cfg.oracle.r_max > 0.0 ? cfg.oracle.r_max : std::max(3.0 * R0, 0.75 * L);
      const double dr = cfg.oracle.dr > 0.0 ? cfg.oracle.dr : R0 / 100.0;
      const double u0 = cfg.u.value;
      return radial_coupled_solve(R0, [u0](double) { return u0; }, cfg.model, r_max, dr, cfg.oracle.dt, T, opt);
    }
  }
}

/// Base configuration rescaled to another epsilon with the grid refined in
/// proportion, keeping eps/h of the base configuration.
inline RunConfig config_for_epsilon(const RunConfig& base, double eps) {
  RunConfig cfg = base;
  cfg.model.epsilon = eps;
  for (auto& d : cfg.dims) d = static_cast<int>(std::lround(d * base.model.epsilon / eps));
  validate(cfg);
  const double h = cfg.grid().min_spacing();
  if (eps / h < 4.0 * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "epsilon " << eps << " under-resolved: eps/h = " << eps / h << " < 4";
    throw ConfigError(msg.str());
  }
  return cfg;
}

inline std::string value_dir_name(const std::string& prefix, double v) {
  std::ostringstream s;
  s << prefix << "_" << std::setprecision(6) << v;
  return s.str();
}

/// Aggregates an epsilon sweep from its run directories. Errors are taken at
/// the last record of each series.
inline SweepReport aggregate_epsilon(const RunConfig& base, const std::vector<double>& eps,
                                     const std::vector<fs::path>& dirs) {
  SweepReport rep;
  rep.parameter = "epsilon";
  const Vec3 c3 = base.disk_center();
  const Vec2 center{c3[0], c3[1]};
  const Vec2 lengths{base.lengths[0], base.lengths[1]};
  const OracleTrajectory oracle = oracle_trajectory(base, base.t_end);
  std::vector<double> errors;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    SweepEntry e;
    e.value = eps[i];
    e.dir = dirs[i];
    const CsvTable t = read_csv(dirs[i] / "series.csv");
    if (t.rows.empty()) throw ComparisonError(dirs[i].string() + ": empty series");
    const double T = t.rows.back()[t.column("t")];
    e.radius = std::sqrt(t.rows.back()[t.column("area")] / std::numbers::pi);
    e.oracle_radius = oracle.radius_at(T);
    e.radius_error = std::abs(e.radius - e.oracle_radius);
    const InterfaceCurve curve = read_contour_csv(dirs[i] / "contour_final.csv", lengths);
    e.hausdorff = hausdorff_to_circle(curve, center, e.oracle_radius);
    errors.push_back(e.hausdorff);
    rep.entries.push_back(e);
  }
  rep.eoc = estimated_orders(eps, errors);
  SweepVerdict mono{"hausdorff error decreasing", true, ""};
  SweepVerdict mono_r{"radius error decreasing", true, ""};
  for (std::size_t i = 0; i + 1 < rep.entries.size(); ++i) {
    // Errors must decrease as epsilon decreases; sort order follows the input.
    const bool finer = eps[i + 1] < eps[i];
    const auto& a = rep.entries[i];
    const auto& b = rep.entries[i + 1];
    if (finer ? !(b.hausdorff < a.hausdorff) : !(b.hausdorff > a.hausdorff)) mono.pass = false;
    if (finer ? !(b.radius_error < a.radius_error) : !(b.radius_error > a.radius_error)) mono_r.pass = false;
  }
  rep.verdicts = {mono, mono_r};
  return rep;
}

inline SweepReport cmd_sweep_epsilon(const RunConfig& base, const std::vector<double>& eps, const fs::path& out_dir) {
  if (eps.size() < 3) throw ConfigError("sweep-eps needs at least 3 epsilon values");
  if (base.dims.size() != 2) throw ConfigError("sweep-eps needs a 2D grid");
  std::vector<RunConfig> cfgs;
  for (double e : eps) cfgs.push_back(config_for_epsilon(base, e));
  std::vector<fs::path> dirs;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    dirs.push_back(out_dir / value_dir_name("eps", eps[i]));
    RunConfig cfg = cfgs[i];
    cfg.output.write_contour = true;
    cmd_run(cfg, dirs.back());
  }
  SweepReport rep = aggregate_epsilon(base, eps, dirs);
  write_sweep_report(out_dir / "sweep_eps.csv", rep);
  return rep;
}

/// Aggregates an alpha sweep from its run directories. alpha = 0 members skip
/// the drift checks (infinite bound) and must record S~ = 0 throughout.
inline SweepReport aggregate_alpha(const RunConfig& base, const std::vector<double>& alphas,
                                   const std::vector<fs::path>& dirs) {
  SweepReport rep;
  rep.parameter = "alpha";
  SweepVerdict bound{"volume drift within bound", true, ""};
  SweepVerdict zero{"S~ vanishes at alpha = 0", true, ""};
  std::vector<double> pos_alpha, drifts, l2;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    SweepEntry e;
    e.value = alphas[i];
    e.dir = dirs[i];
    const CsvTable t = read_csv(dirs[i] / "series.csv");
    if (t.rows.empty()) throw ComparisonError(dirs[i].string() + ": empty series");
    const auto ts = t.values("t"), mass = t.values("mass_G"), E = t.values("E"), st = t.values("stilde");
    ModelParams p = base.model;
    p.alpha = alphas[i];
    e.max_drift = 0.0;
    e.max_drift_ratio = 0.0;
    e.max_abs_stilde = 0.0;
    for (std::size_t r = 0; r < ts.size(); ++r) {
      const double d = std::abs(mass[r] - mass[0]);
      e.max_drift = std::max(e.max_drift, d);
      e.max_abs_stilde = std::max(e.max_abs_stilde, std::abs(st[r]));
      if (p.alpha > 0.0) {
        const double b = volume_drift_bound(E[0], ts[r], p);
        e.max_drift_ratio = std::max(e.max_drift_ratio, d / b);
      }
    }
    e.stilde_l2 = t.rows.back()[t.column("stilde_l2_accum")];
    if (p.alpha > 0.0) {
      if (e.max_drift_ratio > 1.0 + kBoundSlack) {
        bound.pass = false;
        bound.detail += "alpha=" + format_double(p.alpha) + " ratio " + format_double(e.max_drift_ratio) + "; ";
      }
      pos_alpha.push_back(p.alpha);
      drifts.push_back(e.max_drift);
      l2.push_back(e.stilde_l2);
    } else if (e.max_abs_stilde != 0.0 || e.stilde_l2 != 0.0) {
      zero.pass = false;
    }
    rep.entries.push_back(e);
  }
  rep.verdicts.push_back(bound);
  if (alphas.size() != pos_alpha.size()) rep.verdicts.push_back(zero);
  if (pos_alpha.size() >= 3) {
    rep.eoc = estimated_orders(pos_alpha, drifts);
    SweepVerdict eoc{"drift EOC in [-0.7, -0.3]", true, ""};
    for (double o : rep.eoc) {
      eoc.detail += format_double(o) + " ";
      if (!(o >= -0.7 && o <= -0.3)) eoc.pass = false;
    }
    rep.verdicts.push_back(eoc);
  }
  if (pos_alpha.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(l2.begin(), l2.end());
    SweepVerdict spread{"int S~^2 dt spread below 3", *hi <= 3.0 * *lo, "ratio " + format_double(*hi / *lo)};
    rep.verdicts.push_back(spread);
    SweepVerdict decreasing{"drift decreasing in alpha", true, ""};
    for (std::size_t i = 0; i + 1 < drifts.size(); ++i) {
      const bool larger = pos_alpha[i + 1] > pos_alpha[i];
      if (larger ? !(drifts[i + 1] < drifts[i]) : !(drifts[i + 1] > drifts[i])) decreasing.pass = false;
    }
    rep.verdicts.push_back(decreasing);
  }
  return rep;
}

inline SweepReport cmd_sweep_alpha(const RunConfig& base, const std::vector<double>& alphas, const fs::path& out_dir) {
  if (alphas.size() < 3) throw ConfigError("sweep-alpha needs at least 3 alpha values");
  for (double a : alphas) {
    if (!(a >= 0.0)) throw ConfigError("sweep-alpha: alpha must be nonnegative");
  }
  std::vector<fs::path> dirs;
  for (double a : alphas) {
    RunConfig cfg = base;
    cfg.model.alpha = a;
    validate(cfg);
    dirs.push_back(out_dir / value_dir_name("alpha", a));
    cmd_run(cfg, dirs.back());
  }
  SweepReport rep = aggregate_alpha(base, alphas, dirs);
  write_sweep_report(out_dir / "sweep_alpha.csv", rep);
  return rep;
}

struct ComparisonResult {
  std::vector<double> times, phase_radius, oracle_radius;
  double max_deviation = 0.0;
  double terminal_deviation = 0.0;
  bool pass = false;
};

/// Time-aligned radius comparison of stored series against an oracle
/// trajectory. Stops at the first record where either radius leaves the
/// window R <= window * L; the rows before it are kept.
inline ComparisonResult compare_radius_series(const CsvTable& series, const OracleTrajectory& oracle, double window_radius,
                                              double tolerance, std::string* window_violation = nullptr) {
  ComparisonResult res;
  const auto ts = series.values("t"), area = series.values("area");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double Rp = std::sqrt(area[i] / std::numbers::pi);
    if (oracle.extinct && ts[i] > oracle.times.back()) break;
    const double Ro = oracle.radius_at(ts[i]);
    if (Rp > window_radius || Ro > window_radius) {
      if (window_violation) {
        std::ostringstream msg;
        msg << "comparison window R <= " << window_radius << " left at t = " << ts[i];
        *window_violation = msg.str();
      }
      break;
    }
    res.times.push_back(ts[i]);
    res.phase_radius.push_back(Rp);
    res.oracle_radius.push_back(Ro);
    res.max_deviation = std::max(res.max_deviation, std::abs(Rp - Ro));
    res.terminal_deviation = std::abs(Rp - Ro);
  }
  res.pass = !res.times.empty() && res.max_deviation <= tolerance;
  return res;
}

/// Runs the phase field, the configured oracle and writes comparison.csv.
/// Throws ComparisonError on a window violation or a deviation above tolerance.
inline ComparisonResult cmd_compare_oracle(const RunConfig& cfg, const fs::path& out_dir) {
  if (cfg.dims.size() != 2) throw ConfigError("compare-oracle needs a 2D grid");
  const OracleTrajectory oracle = oracle_trajectory(cfg, cfg.t_end);
  fs::create_directories(out_dir);
  write_trajectory_csv(out_dir / "oracle.csv", oracle);
  cmd_run(cfg, out_dir / "run");
  double L = cfg.lengths[0];
  for (double l : cfg.lengths) L = std::min(L, l);
  std::string violation;
  const ComparisonResult res = compare_radius_series(read_csv(out_dir / "run" / "series.csv"), oracle,
                                                     cfg.oracle.window * L, cfg.oracle.tolerance, &violation);
  {
    std::ofstream out(out_dir / "comparison.csv");
    out << "t,R_phase,R_oracle,deviation\n";
    for (std::size_t i = 0; i < res.times.size(); ++i) {
      out << format_double(res.times[i]) << ',' << format_double(res.phase_radius[i]) << ','
          << format_double(res.oracle_radius[i]) << ',' << format_double(res.phase_radius[i] - res.oracle_radius[i])
          << '\n';
    }
  }
  {
    std::ofstream out(out_dir / "comparison_summary.txt");
    out << "max_deviation = " << format_double(res.max_deviation) << "\nterminal_deviation = "
        << format_double(res.terminal_deviation) << "\ntolerance = " << format_double(cfg.oracle.tolerance)
        << "\nwindow = " << (violation.empty() ? "ok" : violation) << "\nverdict = " << (res.pass ? "pass" : "fail")
        << '\n';
  }
  if (!violation.empty()) throw ComparisonError(violation);
  if (!res.pass) {
    std::ostringstream msg;
    msg << "max radius deviation " << res.max_deviation << " exceeds tolerance " << cfg.oracle.tolerance;
    throw ComparisonError(msg.str());
  }
  return res;
}

/// Reads the phi field of a VTK snapshot and writes its 1/2-level contour.
inline InterfaceCurve cmd_extract(const fs::path& vtk, const fs::path& out_csv, const std::string& field = "phi",
                                  double level = 0.5) {
  const auto fields = read_vtk(vtk);
  const auto it = fields.find(field);
  if (it == fields.end()) throw ConfigError(vtk.string() + " has no field '" + field + "'");
  const InterfaceCurve curve = extract_contour(it->second, level);
  write_contour_csv(out_csv, curve);
  return curve;
}

}  // namespace selfprop
