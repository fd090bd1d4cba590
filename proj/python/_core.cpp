#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "kirchhoff/cli.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/regime.hpp"
#include "kirchhoff/report.hpp"
#include "kirchhoff/variational.hpp"

namespace py = pybind11;
using namespace kirchhoff;

namespace {

py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(dump_json(j));
}

py::array_t<double> to_array(std::span<const double> v) { return py::array_t<double>(v.size(), v.data()); }

py::dict profile_dict(const RadialProfile& prof) {
  py::dict d;
  d["r"] = to_array(prof.radii());
  d["u"] = to_array(prof.values());
  d["du"] = to_array(prof.derivs());
  return d;
}

ProblemParams make_params(double a, double b, double lambda, double mu, double q, double p, int N, double R) {
  ProblemParams prm;
  prm.a = a;
  prm.b = b;
  prm.lambda = lambda;
  prm.mu = mu;
  prm.q = q;
  prm.p = p;
  prm.geom.dimension = N;
  prm.geom.radius = R;
  prm.validate();
  return prm;
}

SpectralConstants constants_of(const ProblemParams& prm) { return spectral_constants(prm.geom); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial solutions of -(a + b |grad u|^2) Lap u = lambda u^{q-1} + mu u^{p-1} on a ball";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "KirchhoffError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<UnsupportedRegime>(m, "UnsupportedRegime", base.ptr());
  py::register_exception<NoSolutionFound>(m, "NoSolutionFound", base.ptr());
  py::register_exception<ConvergenceNotReached>(m, "ConvergenceNotReached", base.ptr());
  py::register_exception<NotConverged>(m, "NotConverged", base.ptr());

  py::class_<ProblemParams>(m, "ProblemParams")
      .def(py::init(&make_params), py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("lam") = 1.0,
           py::arg("mu") = 1.0, py::arg("q") = 2.0, py::arg("p") = 4.0, py::arg("N") = 3, py::arg("R") = 1.0)
      .def_readwrite("a", &ProblemParams::a)
      .def_readwrite("b", &ProblemParams::b)
      .def_readwrite("lam", &ProblemParams::lambda)
      .def_readwrite("mu", &ProblemParams::mu)
      .def_readwrite("q", &ProblemParams::q)
      .def_readwrite("p", &ProblemParams::p)
      .def_property(
          "N", [](const ProblemParams& s) { return s.geom.dimension; },
          [](ProblemParams& s, int n) { s.geom.dimension = n; })
      .def_property(
          "R", [](const ProblemParams& s) { return s.geom.radius; },
          [](ProblemParams& s, double r) { s.geom.radius = r; })
      .def_property(
          "tol_ode", [](const ProblemParams& s) { return s.tol.odeRelative; },
          [](ProblemParams& s, double t) { s.tol.odeRelative = t; })
      .def_property(
          "tol_root", [](const ProblemParams& s) { return s.tol.root; },
          [](ProblemParams& s, double t) { s.tol.root = t; })
      .def("validate", &ProblemParams::validate)
      .def("is_critical", &ProblemParams::is_critical)
      .def("to_dict", [](const ProblemParams& s) { return to_py(to_json(s)); })
      .def("__repr__", [](const ProblemParams& s) {
        std::ostringstream os;
        os << "ProblemParams(a=" << s.a << ", b=" << s.b << ", lam=" << s.lambda << ", mu=" << s.mu
           << ", q=" << s.q << ", p=" << s.p << ", N=" << s.geom.dimension << ", R=" << s.geom.radius << ")";
        return os.str();
      });

  m.def("bessel_first_zero", &bessel_first_zero, py::arg("nu"));
  m.def(
      "first_eigenvalue",
      [](int N, double R) { return first_eigenvalue(BallGeometry{N, R}); }, py::arg("N"), py::arg("R") = 1.0);
  m.def("sobolev_constant", [](int N) { return sobolev_constant(N); }, py::arg("N"));
  m.def("critical_exponent", &critical_exponent, py::arg("N"));
  m.def(
      "spectral_constants",
      [](int N, double R) {
        BallGeometry g{N, R};
        g.validate();
        return to_py(to_json(spectral_constants(g), g));
      },
      py::arg("N"), py::arg("R") = 1.0);

  m.def(
      "solve_local",
      [](double alpha, const ProblemParams& prm) {
        LocalSolution sol;
        {
          py::gil_scoped_release release;
          sol = solve_local(alpha, prm);
        }
        py::dict d = profile_dict(sol.profile);
        d["alpha"] = sol.alpha;
        d["amplitude"] = sol.amplitude;
        d["dirichlet"] = sol.dirichletEnergy;
        d["energy"] = sol.localEnergy;
        d["lq_power"] = sol.lqPower;
        d["lp_power"] = sol.lpPower;
        d["bracket_count"] = sol.bracketCount;
        return d;
      },
      py::arg("alpha"), py::arg("params"), "u_alpha of -Lap u = alpha u^{q-1} + u^{p-1} by shooting");

  m.def("f_eval", &f_eval, py::arg("alpha"), py::arg("dirichlet"), py::arg("params"));

  m.def(
      "ground_level_m0",
      [](const ProblemParams& prm, std::size_t grid_size) {
        NehariOptions opt;
        opt.gridSize = grid_size;
        py::gil_scoped_release release;
        return ground_level_m0(prm, opt);
      },
      py::arg("params"), py::arg("grid_size") = 2000);

  m.def(
      "minimize_nehari",
      [](double alpha, const ProblemParams& prm, std::size_t grid_size) {
        NehariOptions opt;
        opt.gridSize = grid_size;
        EnergyReport rep;
        {
          py::gil_scoped_release release;
          rep = minimize_nehari(alpha, prm, opt);
        }
        return to_py(to_json(rep));
      },
      py::arg("alpha"), py::arg("params"), py::arg("grid_size") = 2000);

  m.def(
      "classify",
      [](const ProblemParams& prm, std::optional<double> m0, std::optional<double> lambda0) {
        const double m = m0 ? *m0 : (prm.is_critical() ? std::nan("") : ground_level_m0(prm));
        return to_py(to_json(classify(prm, constants_of(prm), m, lambda0)));
      },
      py::arg("params"), py::arg("m0") = py::none(), py::arg("lambda0") = py::none());

  m.def(
      "find_roots",
      [](const ProblemParams& prm, int grid_points, std::optional<double> alpha_min, std::optional<double> alpha_max,
         std::optional<double> m0, std::optional<double> lambda0, int workers, bool profiles) {
        RootReport rep;
        {
          py::gil_scoped_release release;
          const auto consts = constants_of(prm);
          const double m = m0 ? *m0 : (prm.is_critical() ? std::nan("") : ground_level_m0(prm));
          LocalSolver solver(prm);
          RootSearchOptions opt;
          opt.gridPoints = grid_points;
          opt.alphaMin = alpha_min;
          opt.alphaMax = alpha_max;
          opt.lambda0 = lambda0;
          opt.workers = workers;
          rep = find_roots(solver, prm, consts, m, opt);
        }
        py::dict out = to_py(to_json(rep));
        if (profiles) {
          py::list list;
          for (const auto& s : rep.solutions) list.append(profile_dict(s.profile));
          out["profiles"] = list;
        }
        return out;
      },
      py::arg("params"), py::arg("grid_points") = 200, py::arg("alpha_min") = py::none(),
      py::arg("alpha_max") = py::none(), py::arg("m0") = py::none(), py::arg("lambda0") = py::none(),
      py::arg("workers") = 1, py::arg("profiles") = false);

  m.def(
      "verify_limits",
      [](const ProblemParams& prm, const std::string& endpoint, std::optional<double> m0, int workers) {
        if (endpoint != "lower" && endpoint != "upper") {
          throw InvalidArgument("endpoint must be 'lower' or 'upper'");
        }
        LimitReport rep;
        {
          py::gil_scoped_release release;
          const double m = m0 ? *m0 : (prm.is_critical() ? std::nan("") : ground_level_m0(prm));
          LocalSolver solver(prm);
          LimitOptions opt;
          opt.workers = workers;
          rep = verify_limits(solver, endpoint == "lower" ? Endpoint::Lower : Endpoint::Upper, prm,
                              constants_of(prm), m, opt);
        }
        return to_py(to_json(rep));
      },
      py::arg("params"), py::arg("endpoint"), py::arg("m0") = py::none(), py::arg("workers") = 1);

  m.def(
      "run",
      [](const std::string& subcommand, const std::map<std::string, std::string>& settings,
         const std::filesystem::path& out, int workers) {
        const auto cmd = parse_subcommand(subcommand);
        if (!cmd) throw InvalidArgument("unknown subcommand '" + subcommand + "'");
        std::ostringstream text;
        for (const auto& [k, v] : settings) text << k << " = " << v << "\n";
        std::istringstream in(text.str());
        RunConfig cfg = config_from_settings(*cmd, parse_key_value(in));
        cfg.outDir = out;
        cfg.workers = workers;
        std::ostringstream log;
        RunResult res;
        {
          py::gil_scoped_release release;
          res = kirchhoff::run(cfg, log);
        }
        py::dict d;
        d["exit_code"] = res.exitCode;
        d["message"] = res.message;
        d["log"] = log.str();
        py::list files;
        for (const auto& f : res.written) files.append(f.string());
        d["written"] = files;
        return d;
      },
      py::arg("subcommand"), py::arg("settings"), py::arg("out"), py::arg("workers") = 1,
      "Same as the command-line tool; settings use the config-file keys.");
}
