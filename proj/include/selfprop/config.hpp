#pragma once

// Run configuration: a strict "key = value" file with [section] headers and
// '#' comments. Every key must be known; lists are written as [a, b, c].
//
//   [grid]      dims, lengths
//   [model]     epsilon, tau, sigma, alpha, k, gamma0, u1, m, variant, gamma_const
//   [init]      phi (disk | stripe), center, radius, axis, position, half_width,
//               u (const | sine), u_value, u_axis, u_mean, u_amplitude
//   [stepping]  cfl_safety, u_scheme (explicit | implicit), dt, t_end, cadence,
//               check_invariants
//   [output]    directory, snapshot_every, write_contour, check_bounds
//   [oracle]    kind (auto | mcf | forced | coupled), tolerance, window, r_max, dr, dt
//   [sweep]     values

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "selfprop/errors.hpp"
#include "selfprop/grid.hpp"
#include "selfprop/integrator.hpp"
#include "selfprop/model.hpp"

namespace selfprop {

struct PhiInit {
  enum class Kind { kDisk, kStripe };
  Kind kind = Kind::kDisk;
  std::vector<double> center;  ///< empty: centre of the domain
  double radius = 0.25;
  int axis = 0;
  double position = 0.5;
  double half_width = 0.25;
};

struct UInit {
  enum class Kind { kConst, kSine };
  Kind kind = Kind::kConst;
  double value = 0.5;
  int axis = 0;
  double mean = 0.5;
  double amplitude = 0.0;
};

struct OutputConfig {
  std::string directory = "out";
  int snapshot_every = 0;  ///< VTK snapshot every N diagnostic records (0: none)
  bool write_contour = true;
  bool check_bounds = true;
};

struct OracleConfig {
  enum class Kind { kAuto, kMcf, kForced, kCoupled };
  Kind kind = Kind::kAuto;
  double tolerance = 0.01;
  double window = 0.3;  ///< comparison valid while R <= window * L
  double r_max = 0.0;   ///< 0: 3 R0
  double dr = 0.0;      ///< 0: R0 / 100
  double dt = 1e-5;
};

struct RunConfig {
  std::vector<int> dims;
  std::vector<double> lengths;
  ModelParams model;
  PhiInit phi;
  UInit u;
  StepPolicy policy;
  double t_end = 0.01;
  long cadence = 100;
  OutputConfig output;
  OracleConfig oracle;
  std::vector<double> sweep_values;

  Grid grid() const { return make_grid(dims, lengths); }

  Vec3 disk_center() const {
    Vec3 c{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < dims.size(); ++a) c[a] = phi.center.empty() ? 0.5 * lengths[a] : phi.center[a];
    return c;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct ParseContext {
  std::string key;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    if (line > 0) msg << "line " << line << ": ";
    msg << key << ": " << what;
    throw ConfigError(msg.str());
  }
};

inline double parse_double(const std::string& raw, const ParseContext& ctx) {
  double v = 0.0;
  const auto* end = raw.data() + raw.size();
  const auto res = std::from_chars(raw.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) ctx.fail("expected a number, got '" + raw + "'");
  return v;
}

inline long parse_long(const std::string& raw, const ParseContext& ctx) {
  long v = 0;
  const auto* end = raw.data() + raw.size();
  const auto res = std::from_chars(raw.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) ctx.fail("expected an integer, got '" + raw + "'");
  return v;
}

inline bool parse_bool(const std::string& raw, const ParseContext& ctx) {
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  ctx.fail("expected true or false, got '" + raw + "'");
}

inline std::vector<std::string> parse_list(const std::string& raw, const ParseContext& ctx) {
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') ctx.fail("expected a list [a, b, ...], got '" + raw + "'");
  std::vector<std::string> items;
  std::string inner = raw.substr(1, raw.size() - 2);
  if (trim(inner).empty()) return items;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) ctx.fail("empty list entry");
    items.push_back(item);
  }
  return items;
}

inline std::vector<double> parse_double_list(const std::string& raw, const ParseContext& ctx) {
  std::vector<double> out;
  for (const auto& s : parse_list(raw, ctx)) out.push_back(parse_double(s, ctx));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const ParseContext&)>;

inline const std::map<std::string, Setter>& config_keys() {
  static const std::map<std::string, Setter> keys = [] {
    std::map<std::string, Setter> k;
    k["grid.dims"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.dims.clear();
      for (const auto& s : parse_list(v, ctx)) c.dims.push_back(static_cast<int>(parse_long(s, ctx)));
    };
    k["grid.lengths"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.lengths = parse_double_list(v, ctx);
    };
    auto model_double = [](double ModelParams::*field) {
      return [field](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.model.*field = parse_double(v, ctx); };
    };
    k["model.epsilon"] = model_double(&ModelParams::epsilon);
    k["model.tau"] = model_double(&ModelParams::tau);
    k["model.sigma"] = model_double(&ModelParams::sigma);
    k["model.alpha"] = model_double(&ModelParams::alpha);
    k["model.k"] = model_double(&ModelParams::k);
    k["model.gamma0"] = model_double(&ModelParams::gamma0);
    k["model.u1"] = model_double(&ModelParams::u1);
    k["model.gamma_const"] = model_double(&ModelParams::gamma_const);
    k["model.m"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.model.m = static_cast<int>(parse_long(v, ctx));
    };
    k["model.variant"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      if (v == "stilde") c.model.variant = Variant::kStilde;
      else if (v == "s_old") c.model.variant = Variant::kSOld;
      else if (v == "const_gamma") c.model.variant = Variant::kConstGamma;
      else ctx.fail("expected stilde, s_old or const_gamma, got '" + v + "'");
    };
    k["init.phi"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      if (v == "disk") c.phi.kind = PhiInit::Kind::kDisk;
      else if (v == "stripe") c.phi.kind = PhiInit::Kind::kStripe;
      else ctx.fail("expected disk or stripe, got '" + v + "'");
    };
    k["init.center"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.phi.center = parse_double_list(v, ctx);
    };
    k["init.radius"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.phi.radius = parse_double(v, ctx); };
    k["init.axis"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.phi.axis = static_cast<int>(parse_long(v, ctx));
    };
    k["init.position"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.phi.position = parse_double(v, ctx); };
    k["init.half_width"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.phi.half_width = parse_double(v, ctx);
    };
    k["init.u"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      if (v == "const") c.u.kind = UInit::Kind::kConst;
      else if (v == "sine") c.u.kind = UInit::Kind::kSine;
      else ctx.fail("expected const or sine, got '" + v + "'");
    };
    k["init.u_value"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.u.value = parse_double(v, ctx); };
    k["init.u_axis"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.u.axis = static_cast<int>(parse_long(v, ctx));
    };
    k["init.u_mean"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.u.mean = parse_double(v, ctx); };
    k["init.u_amplitude"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.u.amplitude = parse_double(v, ctx);
    };
    k["stepping.cfl_safety"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.policy.cfl_safety = parse_double(v, ctx);
    };
    k["stepping.u_scheme"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      if (v == "explicit") c.policy.u_scheme = UScheme::kExplicit;
      else if (v == "implicit") c.policy.u_scheme = UScheme::kImplicit;
      else ctx.fail("expected explicit or implicit, got '" + v + "'");
    };
    k["stepping.dt"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.policy.dt_override = parse_double(v, ctx);
    };
    k["stepping.t_end"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.t_end = parse_double(v, ctx); };
    k["stepping.cadence"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.cadence = parse_long(v, ctx); };
    k["stepping.check_invariants"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.policy.check_invariants = parse_bool(v, ctx);
    };
    k["output.directory"] = [](RunConfig& c, const std::string& v, const ParseContext&) { c.output.directory = v; };
    k["output.snapshot_every"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.output.snapshot_every = static_cast<int>(parse_long(v, ctx));
    };
    k["output.write_contour"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.output.write_contour = parse_bool(v, ctx);
    };
    k["output.check_bounds"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.output.check_bounds = parse_bool(v, ctx);
    };
    k["oracle.kind"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      if (v == "auto") c.oracle.kind = OracleConfig::Kind::kAuto;
      else if (v == "mcf") c.oracle.kind = OracleConfig::Kind::kMcf;
      else if (v == "forced") c.oracle.kind = OracleConfig::Kind::kForced;
      else if (v == "coupled") c.oracle.kind = OracleConfig::Kind::kCoupled;
      else ctx.fail("expected auto, mcf, forced or coupled, got '" + v + "'");
    };
    k["oracle.tolerance"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.oracle.tolerance = parse_double(v, ctx);
    };
    k["oracle.window"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.oracle.window = parse_double(v, ctx); };
    k["oracle.r_max"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.oracle.r_max = parse_double(v, ctx); };
    k["oracle.dr"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.oracle.dr = parse_double(v, ctx); };
    k["oracle.dt"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) { c.oracle.dt = parse_double(v, ctx); };
    k["sweep.values"] = [](RunConfig& c, const std::string& v, const ParseContext& ctx) {
      c.sweep_values = parse_double_list(v, ctx);
    };
    return k;
  }();
  return keys;
}

}  // namespace detail

/// Sets one "section.key" to a raw value, as the file parser and --override do.
inline void apply_setting(RunConfig& cfg, const std::string& path, const std::string& raw, int line = 0) {
  const auto& keys = detail::config_keys();
  const auto it = keys.find(path);
  detail::ParseContext ctx{path, line};
  if (it == keys.end()) ctx.fail("unknown key");
  it->second(cfg, detail::trim(raw), ctx);
}

/// Checks every cross-field invariant; throws ConfigError naming the violation.
inline void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (cfg.dims.empty()) fail("grid.dims is required");
  std::vector<double> lengths = cfg.lengths;
  if (lengths.empty()) lengths.assign(cfg.dims.size(), 1.0);
  try {
    (void)make_grid(cfg.dims, lengths);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  try {
    cfg.model.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  const int n = static_cast<int>(cfg.dims.size());
  if (cfg.phi.kind == PhiInit::Kind::kDisk) {
    if (!(cfg.phi.radius > 0.0)) fail("init.radius must be positive");
    if (!cfg.phi.center.empty() && static_cast<int>(cfg.phi.center.size()) != n) fail("init.center needs one entry per axis");
  } else {
    if (cfg.phi.axis < 0 || cfg.phi.axis >= n) fail("init.axis out of range");
    if (!(cfg.phi.half_width > 0.0)) fail("init.half_width must be positive");
  }
  if (cfg.u.kind == UInit::Kind::kConst) {
    if (!(cfg.u.value > 0.0)) fail("u0 positivity violated: init.u_value must be positive");
  } else {
    if (cfg.u.axis < 0 || cfg.u.axis >= n) fail("init.u_axis out of range");
    if (!(cfg.u.mean > 0.0) || !(std::abs(cfg.u.amplitude) < cfg.u.mean)) {
      fail("u0 positivity violated: init.u_amplitude must be smaller than init.u_mean");
    }
  }
  if (!(cfg.policy.cfl_safety > 0.0 && cfg.policy.cfl_safety <= 1.0)) fail("stepping.cfl_safety must lie in (0, 1]");
  if (cfg.policy.dt_override && !(*cfg.policy.dt_override > 0.0)) fail("stepping.dt must be positive");
  if (!(cfg.t_end >= 0.0)) fail("stepping.t_end must be nonnegative");
  if (cfg.cadence < 1) fail("stepping.cadence must be at least 1");
  if (cfg.output.snapshot_every < 0) fail("output.snapshot_every must be nonnegative");
  if (!(cfg.oracle.tolerance > 0.0)) fail("oracle.tolerance must be positive");
  if (!(cfg.oracle.window > 0.0)) fail("oracle.window must be positive");
  if (!(cfg.oracle.dt > 0.0)) fail("oracle.dt must be positive");
}

/// Parses configuration text. Unknown keys, duplicate keys, keys outside a
/// section and malformed values are errors carrying the line number.
inline RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside of a [section]");
    const std::string key = section + "." + detail::trim(std::string_view(line).substr(0, eq));
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + key + " already set on line " +
                        std::to_string(prev->second));
    }
    seen[key] = line_no;
    apply_setting(cfg, key, line.substr(eq + 1), line_no);
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("--override expects key=value, got '" + ov + "'");
    apply_setting(cfg, detail::trim(std::string_view(ov).substr(0, eq)), ov.substr(eq + 1));
  }
  if (cfg.lengths.empty()) cfg.lengths.assign(cfg.dims.size(), 1.0);
  validate(cfg);
  return cfg;
}

}  // namespace selfprop
