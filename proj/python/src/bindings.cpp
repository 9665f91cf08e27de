#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcosym/cli/commands.hpp"
#include "qcosym/fhn.hpp"
#include "qcosym/hj.hpp"
#include "qcosym/integrability.hpp"

namespace py = pybind11;
using namespace qcosym;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const Matrix& M) {
  Rows r(M.rows, std::vector<double>(M.cols));
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < M.cols; ++j) r[i][j] = M(i, j);
  return r;
}

Matrix from_rows(const Rows& r) {
  Matrix M(r.size(), r.empty() ? 0 : r.front().size());
  for (std::size_t i = 0; i < M.rows; ++i) {
    if (r[i].size() != M.cols) throw DimensionError("ragged matrix");
    for (std::size_t j = 0; j < M.cols; ++j) M(i, j) = r[i][j];
  }
  return M;
}

IntegratorConfig tolerances(double rel_tol, double abs_tol) {
  IntegratorConfig c;
  c.rel_tol = rel_tol;
  c.abs_tol = abs_tol;
  return c;
}

StructureConstants constants_from(const std::vector<Rows>& c) {
  StructureConstants s(c.size());
  for (std::size_t i = 0; i < s.r; ++i) {
    if (c[i].size() != s.r) throw DimensionError("structure constants must be r x r x r");
    for (std::size_t j = 0; j < s.r; ++j) {
      if (c[i][j].size() != s.r) throw DimensionError("structure constants must be r x r x r");
      for (std::size_t k = 0; k < s.r; ++k) s(i, j, k) = c[i][j][k];
    }
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "qcosym core bindings";

  py::register_exception<Error>(m, "Error");
  py::register_exception<NullclineError>(m, "NullclineError", m.attr("Error"));
  py::register_exception<PreconditionError>(m, "PreconditionError", m.attr("Error"));
  py::register_exception<SingularError>(m, "SingularError", m.attr("Error"));
  py::register_exception<IntegratorError>(m, "IntegratorError", m.attr("Error"));

  py::class_<fhn::SlowCoefficient>(m, "SlowCoefficient")
      .def(py::init<double>())
      .def_static("linear", &fhn::SlowCoefficient::linear)
      .def_static("sine", &fhn::SlowCoefficient::sine)
      .def_static("exponential", &fhn::SlowCoefficient::exponential)
      .def("__call__", [](const fhn::SlowCoefficient& s, double t) { return s(t); });
  py::implicitly_convertible<double, fhn::SlowCoefficient>();

  py::class_<fhn::FhnParams>(m, "FhnParams")
      .def(py::init([](double eps, double delta, double a, fhn::SlowCoefficient b,
                       fhn::SlowCoefficient c) {
             fhn::FhnParams p{eps, delta, a, b, c};
             p.validate();
             return p;
           }),
           py::arg("eps") = 0.1, py::arg("delta") = 0.5, py::arg("a") = 0.5,
           py::arg("b") = fhn::SlowCoefficient(0.8), py::arg("c") = fhn::SlowCoefficient(0.7))
      .def_readwrite("eps", &fhn::FhnParams::eps)
      .def_readwrite("delta", &fhn::FhnParams::delta)
      .def_readwrite("a", &fhn::FhnParams::a)
      .def_readwrite("b", &fhn::FhnParams::b)
      .def_readwrite("c", &fhn::FhnParams::c);

  m.def("equilibrium", &fhn::equilibrium, py::arg("params"), py::arg("ts") = 0.0);
  m.def(
      "jacobian_A",
      [](const fhn::FhnParams& p, double ts) { return to_rows(fhn::jacobian_A(p, ts, fhn::equilibrium(p, ts))); },
      py::arg("params"), py::arg("ts") = 0.0);
  m.def(
      "hamiltonian",
      [](const fhn::FhnParams& p, std::vector<double> point) {
        return fhn::pontryagin_hamiltonian(p)(point);
      },
      py::arg("params"), py::arg("point"), "H~ at (x, y, z, p_x, p_y, p_z, t_f, t_i, t_s).");

  m.def(
      "simulate",
      [](const fhn::FhnParams& p, std::vector<double> y0, double t0, double t1,
         std::vector<double> output_times, double rel_tol, double abs_tol) {
        const auto tr = integrate_dp45({fhn::full_rhs(p), y0, t0, t1}, tolerances(rel_tol, abs_tol),
                                       output_times);
        return py::make_tuple(tr.times, tr.states);
      },
      py::arg("params"), py::arg("y0"), py::arg("t0"), py::arg("t1"),
      py::arg("output_times") = std::vector<double>{}, py::arg("rel_tol") = 1e-8,
      py::arg("abs_tol") = 1e-10, "Six-dimensional state/adjoint trajectory: (times, states).");

  m.def(
      "validate_hj",
      [](const fhn::FhnParams& p, double x, double y, double z, double py_, double pz, double t0,
         double t1, double S_t, double rel_tol, double abs_tol) {
        const auto init = fhn::consistent_initial_state(p, x, y, z, py_, pz, S_t, t0);
        const auto r = fhn::run_hj_validation(p, init, t0, t1, tolerances(rel_tol, abs_tol));
        py::dict d;
        d["times"] = r.times;
        d["p_x"] = r.p_x;
        d["S_x"] = r.S_x;
        d["ratio"] = r.ratio;
        d["max_dev"] = r.max_dev;
        d["undefined"] = r.undefined;
        return d;
      },
      py::arg("params"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("p_y"), py::arg("p_z"),
      py::arg("t0"), py::arg("t1"), py::arg("S_t") = 0.0, py::arg("rel_tol") = 1e-8,
      py::arg("abs_tol") = 1e-10);

  m.def(
      "linearize",
      [](const fhn::FhnParams& p, const Rows& P0, std::vector<double> Q0, double R0, double t0,
         double t1, std::vector<double> output_times, double rel_tol, double abs_tol) {
        const auto g = linearize_fhn(p, from_rows(P0), Q0, R0, t0, t1, tolerances(rel_tol, abs_tol),
                                     output_times);
        std::vector<Rows> P;
        for (const auto& M : g.P) P.push_back(to_rows(M));
        py::dict d;
        d["grid"] = g.grid;
        d["P"] = P;
        d["Q"] = g.Q;
        d["R"] = g.R;
        return d;
      },
      py::arg("params"), py::arg("P0"), py::arg("Q0"), py::arg("R0"), py::arg("t0"), py::arg("t1"),
      py::arg("output_times") = std::vector<double>{}, py::arg("rel_tol") = 1e-8,
      py::arg("abs_tol") = 1e-10);

  m.def(
      "quadratic_invariant_drift",
      [](const fhn::FhnParams& p, const Rows& P0, std::vector<double> Q0, std::vector<double> u0,
         double t0, double t1, double rel_tol, double abs_tol) {
        const auto d = quadratic_invariant_drift(fhn_jacobian_path(p), from_rows(P0), Q0, u0, t0, t1,
                                                 tolerances(rel_tol, abs_tol));
        return py::make_tuple(d.max_uPu_drift, d.max_Qu_drift);
      },
      py::arg("params"), py::arg("P0"), py::arg("Q0"), py::arg("u0"), py::arg("t0"), py::arg("t1"),
      py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12);

  m.def(
      "trace_characteristics",
      [](const fhn::FhnParams& p, const Rows& seeds, double E, double s0, double s1,
         std::vector<double> output_s, unsigned threads) {
        std::vector<CharacteristicSeed> sd;
        for (const auto& s : seeds) {
          if (s.size() != 5) throw DimensionError("each seed is [x, y, z, t_s, S]");
          sd.push_back({s[0], s[1], s[2], s[3], s[4]});
        }
        const auto fan = trace_characteristics(p, sd, E, s0, s1, {}, output_s, threads);
        py::list out;
        for (const auto& c : fan.curves) {
          py::dict d;
          d["s"] = c.s;
          d["points"] = c.points;
          d["S"] = c.S;
          d["error"] = c.error;
          out.append(d);
        }
        return out;
      },
      py::arg("params"), py::arg("seeds"), py::arg("E") = 1.0, py::arg("s0") = 0.0,
      py::arg("s1") = 1.0, py::arg("output_s") = std::vector<double>{}, py::arg("threads") = 1);

  m.def(
      "solvability_test",
      [](const std::vector<Rows>& c) {
        const auto r = solvability_test(constants_from(c));
        return py::make_tuple(r.solvable, r.derived_dims);
      },
      py::arg("c"), "c[i][j][k] = c_ij^k; returns (solvable, derived dimensions).");
  m.def(
      "check_center_condition",
      [](const std::vector<Rows>& c, std::vector<double> fiber) {
        const auto r = check_center_condition(constants_from(c), fiber);
        return py::make_tuple(r.ok, r.max_violation);
      },
      py::arg("c"), py::arg("fiber_constants"));

  m.def(
      "run_command",
      [](const std::string& name, const std::string& config, std::uint64_t seed,
         unsigned threads) -> py::tuple {
        cli::CommandResult res;
        try {
          res = cli::run_command(name, cli::parse_config(config), {seed, threads});
        } catch (const cli::ConfigError& e) {
          return py::make_tuple(static_cast<int>(cli::kExitConfig), std::string(), std::string(e.what()));
        }
        std::ostringstream os;
        if (!res.report.header().empty()) res.report.write(os);
        return py::make_tuple(res.exit_code, os.str(), res.message);
      },
      py::arg("name"), py::arg("config"), py::arg("seed") = 0, py::arg("threads") = 1);
}
