#include "qcosym/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "qcosym/geometry.hpp"
#include "qcosym/hj.hpp"
#include "qcosym/integrability.hpp"

#ifndef QCOSYM_VERSION
#define QCOSYM_VERSION "dev"
#endif

namespace qcosym::cli {

namespace {

const std::vector<std::string> kCommon{"model", "integrator", "time", "initial"};

std::string section_name(const std::string& command) {
  std::string s = command;
  for (char& c : s)
    if (c == '-') c = '_';
  return s;
}

double running_max(double prev, double v) { return std::isnan(v) ? prev : std::max(prev, v); }

std::string format_list(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

// Attracting root of x - x^3/3 = y reached by the fast fiber through x0.
double fast_fiber_limit(double x0, double y) {
  std::vector<double> roots;
  const double disc = 9.0 * y * y / 4.0 - 1.0;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    roots.push_back(std::cbrt(-1.5 * y + s) + std::cbrt(-1.5 * y - s));
  } else {
    const double th = std::acos(std::clamp(-1.5 * y, -1.0, 1.0)) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(2.0 * std::cos(th - 2.0 * std::numbers::pi * k / 3.0));
    std::sort(roots.begin(), roots.end());
  }
  const double f = fhn::fast_f(x0, y);
  if (f > 0.0) {
    for (double r : roots)
      if (r > x0) return r;
  } else if (f < 0.0) {
    for (auto it = roots.rbegin(); it != roots.rend(); ++it)
      if (*it < x0) return *it;
  }
  return x0;
}

std::array<double, 6> parse_state(const json& init, bool need_position) {
  require_keys(init, {"x", "y", "z", "p_x", "p_y", "p_z"}, "initial");
  std::array<double, 6> s{};
  const char* names[] = {"x", "y", "z", "p_x", "p_y", "p_z"};
  for (int i = 0; i < 6; ++i)
    s[i] = (need_position && i < 3) ? get_double(init, names[i], "initial")
                                    : get_double(init, names[i], "initial", 0.0);
  return s;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate-hj", "simulate",       "reduce",
                                              "linearize",   "characteristics", "check-structure"};
  return names;
}

CsvReport cmd_validate_hj(const json& config, const RunOptions&, int& exit_code) {
  const auto prm = parse_model(section(config, "model"));
  const auto icfg = parse_integrator(section(config, "integrator"));
  const auto span = parse_time(section(config, "time"));
  const json init = section(config, "initial");
  require_keys(init, {"x", "y", "z", "p_x", "p_y", "p_z"}, "initial");
  const json opts = section(config, "validate_hj");
  require_keys(opts, {"S_t", "f_min", "threshold", "consistency_tol"}, "validate_hj");

  const double S_t = get_double(opts, "S_t", "validate_hj", 0.0);
  fhn::HjValidationOptions vo;
  vo.f_min = get_double(opts, "f_min", "validate_hj", vo.f_min);
  vo.consistency_tol = get_double(opts, "consistency_tol", "validate_hj", vo.consistency_tol);
  vo.output_times = span.outputs();
  const double threshold = get_double(opts, "threshold", "validate_hj", 1e-8);

  auto state = fhn::consistent_initial_state(
      prm, get_double(init, "x", "initial"), get_double(init, "y", "initial"),
      get_double(init, "z", "initial"), get_double(init, "p_y", "initial"),
      get_double(init, "p_z", "initial"), S_t, span.t0, vo.f_min);
  // An explicit p_x is taken as given and checked for consistency.
  if (init.contains("p_x")) state.state.px = get_double(init, "p_x", "initial");

  const auto rep = fhn::run_hj_validation(prm, state, span.t0, span.t1, icfg, vo);

  CsvReport csv;
  csv.set_header({"t", "x", "y", "z", "p_x", "p_y", "p_z", "S_x_reconstructed", "ratio", "max_dev"});
  double mx = 0.0;
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    const auto& s = rep.states[k];
    mx = running_max(mx, std::abs(rep.ratio[k] - 1.0));
    csv.add_row({rep.times[k], s[0], s[1], s[2], s[3], s[4], s[5], rep.S_x[k], rep.ratio[k], mx});
  }
  csv.add_meta("max_dev", rep.max_dev);
  csv.add_meta("threshold", threshold);
  csv.add_meta("undefined_ratios", std::to_string(rep.undefined));
  csv.add_meta("accepted_steps", std::to_string(rep.stats.accepted));
  csv.add_meta("rejected_steps", std::to_string(rep.stats.rejected));
  const bool ok = rep.max_dev <= threshold;
  csv.add_meta("verdict", ok ? "pass" : "fail");
  exit_code = ok ? kExitOk : kExitThreshold;
  return csv;
}

CsvReport cmd_simulate(const json& config, const RunOptions&, int& exit_code) {
  const auto prm = parse_model(section(config, "model"));
  const auto icfg = parse_integrator(section(config, "integrator"));
  const auto span = parse_time(section(config, "time"));
  const auto s0 = parse_state(section(config, "initial"), true);
  const json opts = section(config, "simulate");
  require_keys(opts, {"clocks"}, "simulate");
  const bool clocks = get_bool(opts, "clocks", "simulate", false);

  OdeProblem prob{fhn::full_rhs(prm), {s0.begin(), s0.end()}, span.t0, span.t1};
  const auto outs = span.outputs();
  const auto tr = integrate_dp45(prob, icfg, outs);

  CsvReport csv;
  std::vector<std::string> header{"t", "x", "y", "z", "p_x", "p_y", "p_z"};
  if (clocks) {
    header.push_back("t_f");
    header.push_back("t_i");
  }
  csv.set_header(header);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    std::vector<double> row{tr.times[k]};
    row.insert(row.end(), tr.states[k].begin(), tr.states[k].end());
    if (clocks) {
      row.push_back(tr.times[k] / prm.eps);
      row.push_back(tr.times[k] / prm.delta);
    }
    csv.add_row(row);
  }
  csv.add_meta("accepted_steps", std::to_string(tr.stats.accepted));
  csv.add_meta("rejected_steps", std::to_string(tr.stats.rejected));
  exit_code = kExitOk;
  return csv;
}

CsvReport cmd_reduce(const json& config, const RunOptions&, int& exit_code) {
  const auto prm = parse_model(section(config, "model"));
  const auto icfg = parse_integrator(section(config, "integrator"));
  const auto span = parse_time(section(config, "time"));
  const auto s0 = parse_state(section(config, "initial"), true);
  const json opts = section(config, "reduce");
  require_keys(opts, {"transient_end", "fold_guard", "max_fast", "max_int"}, "reduce");
  const double transient_end = get_double(opts, "transient_end", "reduce", span.t0);
  const double guard = get_double(opts, "fold_guard", "reduce", fhn::kDefaultFoldGuard);

  OdeProblem full{fhn::full_rhs(prm), {s0.begin(), s0.end()}, span.t0, span.t1};
  const auto tr = integrate_dp45(full, icfg, span.outputs());
  const auto metrics = fhn::reduction_error_metrics(tr, prm, transient_end);
  const auto& grid = tr.times;
  const std::size_t N = grid.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  CsvReport csv;

  // Fast-reduced run from the attracting branch under the initial point,
  // integrated segment by segment so a fold only blanks what follows it.
  std::vector<double> xf(N, nan), zf(N, nan);
  std::vector<double> w{fast_fiber_limit(s0[0], s0[1]), s0[2]};
  xf[0] = w[0];
  zf[0] = w[1];
  const auto fast = fhn::fast_reduced_rhs(prm, guard);
  for (std::size_t k = 1; k < N; ++k) {
    try {
      w = integrate_dp45(OdeProblem{fast, w, grid[k - 1], grid[k]}, icfg).back();
    } catch (const FoldError& e) {
      csv.add_meta("fast_reduced_stop", e.what());
      break;
    } catch (const IntegratorError& e) {
      csv.add_meta("fast_reduced_stop", e.what());
      break;
    }
    xf[k] = w[0];
    zf[k] = w[1];
  }

  OdeProblem inter{fhn::intermediate_reduced_rhs_tracking(prm), {s0[2], s0[5]}, span.t0, span.t1};
  const auto ti = integrate_dp45(inter, icfg, grid);

  csv.set_header({"t", "x", "y", "z", "x_fast", "y_fast", "z_fast", "x_int", "y_int", "z_int",
                  "p_z_int", "e_fast", "e_int"});
  for (std::size_t k = 0; k < N; ++k) {
    const auto& s = tr.states[k];
    const double zi = ti.states[k][0];
    const auto sl = fhn::intermediate_slaving(prm, zi);
    csv.add_row({grid[k], s[0], s[1], s[2], xf[k], std::isnan(xf[k]) ? nan : fhn::phi(xf[k]), zf[k],
                 sl[0], sl[1], zi, ti.states[k][1], metrics.e_fast[k], metrics.e_int[k]});
  }
  csv.add_meta("transient_end", transient_end);
  csv.add_meta("max_fast_post", metrics.max_fast_post);
  csv.add_meta("max_int_post", metrics.max_int_post);
  bool ok = true;
  if (opts.contains("max_fast")) ok = ok && metrics.max_fast_post <= get_double(opts, "max_fast", "reduce");
  if (opts.contains("max_int")) ok = ok && metrics.max_int_post <= get_double(opts, "max_int", "reduce");
  csv.add_meta("verdict", ok ? "pass" : "fail");
  exit_code = ok ? kExitOk : kExitThreshold;
  return csv;
}

CsvReport cmd_linearize(const json& config, const RunOptions&, int& exit_code) {
  const auto prm = parse_model(section(config, "model"));
  const auto icfg = parse_integrator(section(config, "integrator"));
  const auto span = parse_time(section(config, "time"));
  const json opts = section(config, "linearize");
  require_keys(opts, {"P0", "Q0", "R0", "u0", "drift_threshold"}, "linearize");
  const Matrix P0 = get_matrix(opts, "P0", "linearize", Matrix::identity(3));
  const auto Q0 = get_vector(opts, "Q0", "linearize", {0.0, 0.0, 0.0});
  const double R0 = get_double(opts, "R0", "linearize", 0.0);
  const auto u0 = get_vector(opts, "u0", "linearize", {0.1, 0.05, -0.05});
  const double threshold = get_double(opts, "drift_threshold", "linearize", 1e-8);
  if (u0.size() != 3) throw ConfigError("linearize.u0 needs 3 values");

  const auto outs = span.outputs();
  const auto gen = linearize_fhn(prm, P0, Q0, R0, span.t0, span.t1, icfg, outs);
  const auto drift =
      quadratic_invariant_drift(fhn_jacobian_path(prm), P0, Q0, u0, span.t0, span.t1, icfg, gen.grid);

  CsvReport csv;
  std::vector<std::string> header{"t_s", "x_e", "y_e", "z_e"};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) header.push_back("P" + std::to_string(i) + std::to_string(j));
  for (int i = 1; i <= 3; ++i) header.push_back("Q" + std::to_string(i));
  header.insert(header.end(), {"R", "uPu", "Qu"});
  csv.set_header(header);
  for (std::size_t k = 0; k < gen.grid.size(); ++k) {
    const auto eq = fhn::equilibrium(prm, gen.grid[k]);
    std::vector<double> row{gen.grid[k], eq[0], eq[1], eq[2]};
    row.insert(row.end(), gen.P[k].data.begin(), gen.P[k].data.end());
    row.insert(row.end(), gen.Q[k].begin(), gen.Q[k].end());
    row.push_back(gen.R[k]);
    row.push_back(drift.uPu[k]);
    row.push_back(drift.Qu[k]);
    csv.add_row(row);
  }
  csv.add_meta("max_uPu_drift", drift.max_uPu_drift);
  csv.add_meta("max_Qu_drift", drift.max_Qu_drift);
  csv.add_meta("drift_threshold", threshold);
  const bool ok = drift.max_uPu_drift <= threshold && drift.max_Qu_drift <= threshold;
  csv.add_meta("verdict", ok ? "pass" : "fail");
  exit_code = ok ? kExitOk : kExitThreshold;
  return csv;
}

CsvReport cmd_characteristics(const json& config, const RunOptions& opt, int& exit_code) {
  const auto prm = parse_model(section(config, "model"));
  const auto icfg = parse_integrator(section(config, "integrator"));
  const auto span = parse_time(section(config, "time"));
  const json opts = section(config, "characteristics");
  require_keys(opts, {"E", "seeds"}, "characteristics");
  const double E = get_double(opts, "E", "characteristics", 1.0);
  if (!opts.contains("seeds") || !opts.at("seeds").is_array() || opts.at("seeds").empty())
    throw ConfigError("characteristics.seeds must be a non-empty array of [x, y, z, t_s, S]");
  std::vector<CharacteristicSeed> seeds;
  for (const auto& s : opts.at("seeds")) {
    if (!s.is_array() || s.size() != 5) throw ConfigError("each seed is [x, y, z, t_s, S]");
    for (const auto& v : s)
      if (!v.is_number()) throw ConfigError("seed entries must be numbers");
    seeds.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>(), s[3].get<double>(),
                     s[4].get<double>()});
  }

  const auto fan = trace_characteristics(prm, seeds, E, span.t0, span.t1, icfg, span.outputs(),
                                         std::max(1u, opt.threads));
  CsvReport csv;
  csv.set_header({"curve", "s", "x", "y", "z", "t_s", "S"});
  double max_dev = 0.0;
  for (std::size_t c = 0; c < fan.curves.size(); ++c) {
    const auto& cv = fan.curves[c];
    if (!cv.error.empty()) {
      csv.add_meta("curve_" + std::to_string(c) + "_error", cv.error);
      continue;
    }
    max_dev = std::max(max_dev, cv.max_S_deviation);
    for (std::size_t k = 0; k < cv.s.size(); ++k) {
      const auto& p = cv.points[k];
      csv.add_row({static_cast<double>(c), cv.s[k], p[0], p[1], p[2], p[3], cv.S});
    }
  }
  csv.add_meta("curves", std::to_string(fan.curves.size()));
  csv.add_meta("failed", std::to_string(fan.failed()));
  csv.add_meta("max_S_deviation", max_dev);
  exit_code = fan.failed() == 0 ? kExitOk : kExitFailure;
  return csv;
}

namespace {

struct NamedProblem {
  HamiltonianSystem sys;
  FirstIntegralSet set;
  std::vector<double> y0;
};

ScalarField angular_momentum(int i) {
  const int j = (i + 1) % 3, k = (i + 2) % 3;
  return ScalarField::generic(7, [j, k](auto p) { return p[j] * p[3 + k] - p[k] * p[3 + j]; });
}

NamedProblem named_problem(const std::string& name, const json& config) {
  NamedProblem np;
  if (name == "fhn_hamiltonian") {
    const auto prm = parse_model(section(config, "model"));
    np.sys = fhn::hamiltonian_system(prm);
    np.set = {{np.sys.H}, 1};
    return np;
  }
  if (name == "heisenberg") {
    np.sys = {canonical_chart({1, 1}), constant_field(3, 0.0), {constant_field(3, 1.0)}};
    np.set = {{coordinate_field(3, 0), coordinate_field(3, 1), constant_field(3, 1.0)}, 3};
    np.y0 = {0.3, -0.2, 0.0};
    return np;
  }
  if (name == "so3") {
    np.sys = {canonical_chart({3, 1}), ScalarField::generic(7, [](auto p) {
                using T = typename decltype(p)::value_type;
                T s(0.0);
                for (int i = 0; i < 6; ++i) s = s + 0.5 * p[i] * p[i];
                return s;
              }),
              {constant_field(7, 1.0)}};
    np.set = {{angular_momentum(0), angular_momentum(1), angular_momentum(2)}, 3};
    np.y0 = {0.3, -0.2, 0.5, 0.1, 0.4, -0.3, 0.0};
    return np;
  }
  if (name == "abelian") {
    np.sys = {canonical_chart({2, 1}),
              ScalarField::generic(5, [](auto p) { return 0.5 * (p[2] * p[2] + p[3] * p[3]); }),
              {constant_field(5, 1.0)}};
    np.set = {{coordinate_field(5, 2), coordinate_field(5, 3)}, 2};
    np.y0 = {0.5, -0.5, 1.0, 0.25, 0.0};
    return np;
  }
  throw ConfigError("check_structure.set must be fhn_hamiltonian, heisenberg, so3 or abelian");
}

// max |lambda_i(X_H)| and max |i_X Omega - (dH - sum R_i(H) lambda_i)| over the samples.
std::array<double, 2> hamilton_identities(const HamiltonianSystem& sys, const std::vector<Point>& pts) {
  const auto& ch = sys.chart;
  const std::size_t d = ch.dim();
  double horiz = 0.0, ident = 0.0;
  for (const auto& p : pts) {
    const std::span<const double> sp(p);
    const auto X = hamiltonian_vector<double>(ch, sys.H, sp, {});
    const auto dH = gradient(sys.H, p);
    const auto W = omega_at<double>(ch, sp);
    std::vector<double> target = dH;
    for (std::size_t i = 0; i < ch.q; ++i) {
      const auto lam = ch.lambdas[i].eval<double>(sp);
      const auto R = ch.reebs[i].eval<double>(sp);
      double RH = 0.0, lX = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        RH += dH[a] * R[a];
        lX += lam[a] * X[a];
      }
      horiz = std::max(horiz, std::abs(lX));
      for (std::size_t b = 0; b < d; ++b) target[b] -= RH * lam[b];
    }
    for (std::size_t b = 0; b < d; ++b) {
      double iX = 0.0;
      for (std::size_t a = 0; a < d; ++a) iX += X[a] * W(a, b);
      ident = std::max(ident, std::abs(iX - target[b]));
    }
  }
  return {horiz, ident};
}

}  // namespace

CsvReport cmd_check_structure(const json& config, const RunOptions& opt, int& exit_code) {
  const json opts = section(config, "check_structure");
  require_keys(opts, {"set", "samples", "range", "tol", "bracket_tol", "fit_tol", "center_tol",
                      "drift_tol", "fiber_constants", "y0", "t1"},
               "check_structure");
  const std::string name = get_string(opts, "set", "check_structure", "fhn_hamiltonian");
  auto np = named_problem(name, config);
  const auto& chart = np.sys.chart;

  const std::size_t n_samples = get_size(opts, "samples", "check_structure", 100);
  const double range = get_double(opts, "range", "check_structure", 2.0);
  const double tol = get_double(opts, "tol", "check_structure", 1e-10);
  if (n_samples == 0) throw ConfigError("check_structure.samples must be positive");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-range, range);
  std::vector<Point> pts(n_samples, Point(chart.dim()));
  for (auto& p : pts)
    for (auto& x : p) x = u(rng);

  IntegrabilityOptions io;
  io.bracket_tol = get_double(opts, "bracket_tol", "check_structure", io.bracket_tol);
  io.fit_tol = get_double(opts, "fit_tol", "check_structure", io.fit_tol);
  io.center_tol = get_double(opts, "center_tol", "check_structure", io.center_tol);
  io.drift_tol = get_double(opts, "drift_tol", "check_structure", io.drift_tol);
  io.fiber_constants = get_vector(opts, "fiber_constants", "check_structure", {});
  io.y0 = get_vector(opts, "y0", "check_structure", np.y0);
  io.t1 = get_double(opts, "t1", "check_structure", io.t1);
  io.integrator = parse_integrator(section(config, "integrator"));

  const auto verdict = validate_structure(chart, pts, tol);
  const auto worst = verdict.worst();
  const auto ids = hamilton_identities(np.sys, pts);
  const auto rep = integrability_report(np.sys, np.set, pts, io);

  CsvReport csv;
  csv.set_header({"check", "value", "tol", "pass"});
  const double none = std::numeric_limits<double>::quiet_NaN();
  auto row = [&](const std::string& check, double value, double t, const std::string& pass) {
    csv.add_row({check, format_double(value), format_double(t), pass});
  };
  auto judged = [&](const std::string& check, double value, double t) {
    row(check, value, t, value <= t ? "pass" : "fail");
  };
  judged("antisymmetry", worst.antisymmetry, tol);
  judged("coframe", worst.coframe, tol);
  judged("reeb_kernel", worst.kernel, tol);
  judged("reeb_commutation", worst.commutation, tol);
  row("omega_rank", static_cast<double>(worst.rank), static_cast<double>(verdict.expected_rank),
      worst.rank == verdict.expected_rank ? "pass" : "fail");
  judged("horizontality", ids[0], tol);
  judged("hamilton_identity", ids[1], tol);
  row("commuting_brackets", rep.max_commuting_bracket, io.bracket_tol, rep.commuting_ok ? "pass" : "fail");
  if (rep.fit_error.empty()) {
    row("structure_fit_residual", rep.fit.residual, io.fit_tol, rep.fit.pass ? "pass" : "fail");
    const auto& c = rep.fit.constants;
    for (std::size_t i = 0; i < c.r; ++i)
      for (std::size_t j = i + 1; j < c.r; ++j)
        for (std::size_t k = 0; k < c.r; ++k)
          if (c(i, j, k) != 0.0)
            row("c_" + std::to_string(i + 1) + std::to_string(j + 1) + "^" + std::to_string(k + 1),
                c(i, j, k), none, "-");
    row("solvable", rep.solvability.solvable ? 1.0 : 0.0, none, "-");
    row("center_violation", rep.center.max_violation, io.center_tol, rep.center.ok ? "pass" : "fail");
    csv.add_meta("derived_dims", format_list(rep.solvability.derived_dims));
  } else {
    csv.add_meta("structure_fit_error", rep.fit_error);
  }
  for (std::size_t i = 0; i < rep.drift.size(); ++i)
    judged("drift_f" + std::to_string(i + 1), rep.drift[i], io.drift_tol);
  row("independence_rank", static_cast<double>(rep.independence), static_cast<double>(rep.m),
      rep.independent ? "pass" : "fail");
  row("dimension_condition", rep.dimension_condition ? 1.0 : 0.0, none, "-");
  row("fibers_checked", 0.0, none, "-");

  csv.add_meta("set", name);
  csv.add_meta("samples", std::to_string(n_samples));
  const bool ok = verdict.pass && ids[0] <= tol && ids[1] <= tol;
  csv.add_meta("verdict", ok ? "pass" : "fail");
  if (!verdict.failure.empty()) csv.add_meta("structure_failure", verdict.failure);
  exit_code = ok ? kExitOk : kExitThreshold;
  return csv;
}

CommandResult run_command(const std::string& name, const json& config, const RunOptions& opt) {
  CommandResult res;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto allowed = kCommon;
    allowed.push_back(section_name(name));
    require_keys(config, allowed, "config for " + name);
    int code = kExitOk;
    if (name == "validate-hj") res.report = cmd_validate_hj(config, opt, code);
    else if (name == "simulate") res.report = cmd_simulate(config, opt, code);
    else if (name == "reduce") res.report = cmd_reduce(config, opt, code);
    else if (name == "linearize") res.report = cmd_linearize(config, opt, code);
    else if (name == "characteristics") res.report = cmd_characteristics(config, opt, code);
    else if (name == "check-structure") res.report = cmd_check_structure(config, opt, code);
    else throw ConfigError("unknown command '" + name + "'");
    res.exit_code = code;
  } catch (const NullclineError& e) {
    res.exit_code = kExitNullcline;
    res.message = std::string("nullcline: ") + e.what();
    return res;
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.message = std::string("config: ") + e.what();
    return res;
  } catch (const PreconditionError& e) {
    res.exit_code = kExitConfig;
    res.message = std::string("precondition: ") + e.what();
    return res;
  } catch (const DimensionError& e) {
    res.exit_code = kExitConfig;
    res.message = std::string("dimension: ") + e.what();
    return res;
  } catch (const IntegratorError& e) {
    res.exit_code = kExitFailure;
    res.message = std::string("integrator: ") + e.what();
    return res;
  } catch (const std::exception& e) {
    res.exit_code = kExitFailure;
    res.message = std::string("error: ") + e.what();
    return res;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto summary = std::move(res.report.meta);
  res.report.meta.clear();
  res.report.add_meta("tool", std::string("qcosym ") + QCOSYM_VERSION);
  res.report.add_meta("command", name);
  res.report.add_meta("seed", std::to_string(opt.seed));
  res.report.add_meta("threads", std::to_string(opt.threads));
  res.report.add_meta("config", config.dump());
  for (auto& kv : summary) res.report.meta.push_back(std::move(kv));
  res.report.add_meta("wall_time_s", wall);
  if (res.exit_code == kExitThreshold) res.message = "threshold exceeded";
  if (res.exit_code == kExitFailure) res.message = "some curves failed; see the preamble";
  return res;
}

}  // namespace qcosym::cli
