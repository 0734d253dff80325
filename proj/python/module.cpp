// Python bindings for the Harris random self-decomposability toolkit.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "hrsd/decompose.hpp"
#include "hrsd/expr.hpp"
#include "hrsd/processes.hpp"
#include "hrsd/samplers.hpp"
#include "hrsd/verify.hpp"

namespace py = pybind11;
using namespace hrsd;

namespace {

// Expression trees are immutable and shared through shared_ptr<const Expr>;
// expose them behind a small value wrapper so Python sees one handle type.
struct PyExpr {
  ExprPtr ptr;
};

ModelConfig make_config(const std::string& family, int k, double c, double p,
                        double lambda, long horizon, long burn_in,
                        long replicates, std::uint64_t seed,
                        const std::string& init) {
  ModelConfig cfg;
  cfg.family = family_from_string(family);
  cfg.k = k;
  cfg.c = c;
  cfg.p = p;
  cfg.lambda = lambda;
  cfg.horizon = horizon;
  cfg.burn_in = burn_in;
  cfg.replicates = replicates;
  cfg.seed = seed;
  cfg.init = init_from_string(init);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_hrsd, m) {
  m.doc() =
      "Harris random self-decomposability: transform factorizations, exact "
      "samplers, AR(1)/INAR(1) simulation and numerical verification";

  py::class_<PyExpr>(m, "Expr")
      .def_static("gamma_cf",
                  [](double shape, double scale) {
                    return PyExpr{Expr::gamma_cf(shape, scale)};
                  },
                  py::arg("shape"), py::arg("scale"))
      .def_static("stable_sym_cf",
                  [](double alpha) { return PyExpr{Expr::stable_sym_cf(alpha)}; },
                  py::arg("alpha"))
      .def_static("negbin_pgf",
                  [](double shape, double scale) {
                    return PyExpr{Expr::negbin_pgf(shape, scale)};
                  },
                  py::arg("shape"), py::arg("scale"))
      .def_static("poisson_pgf",
                  [](double mean) { return PyExpr{Expr::poisson_pgf(mean)}; },
                  py::arg("mean"))
      .def_static("geometric_pgf",
                  [](double q) { return PyExpr{Expr::geometric_pgf(q)}; },
                  py::arg("q"))
      .def_static("harris_pgf",
                  [](double a, int k) { return PyExpr{Expr::harris_pgf(a, k)}; },
                  py::arg("a"), py::arg("k"))
      .def_static("scale_arg",
                  [](double c, const PyExpr& e) {
                    return PyExpr{Expr::scale_arg(c, e.ptr)};
                  },
                  py::arg("c"), py::arg("child"))
      .def_static("thin",
                  [](double c, const PyExpr& e) {
                    return PyExpr{Expr::thin(c, e.ptr)};
                  },
                  py::arg("c"), py::arg("child"))
      .def_static("power",
                  [](double r, const PyExpr& e) {
                    return PyExpr{Expr::power(r, e.ptr)};
                  },
                  py::arg("r"), py::arg("child"))
      .def_static("product",
                  [](const std::vector<PyExpr>& children) {
                    std::vector<ExprPtr> xs;
                    for (const auto& c : children) xs.push_back(c.ptr);
                    return PyExpr{Expr::product(std::move(xs))};
                  },
                  py::arg("children"))
      .def_static("ratio",
                  [](const PyExpr& num, const PyExpr& den) {
                    return PyExpr{Expr::ratio(num.ptr, den.ptr)};
                  },
                  py::arg("num"), py::arg("den"))
      .def_static("from_json",
                  [](const std::string& text) {
                    return PyExpr{Expr::from_json_string(text)};
                  },
                  py::arg("text"))
      .def("to_json", [](const PyExpr& e) { return e.ptr->to_json_string(); })
      .def("is_cf",
           [](const PyExpr& e) { return e.ptr->kind() == TransformKind::CF; })
      .def("__repr__", [](const PyExpr& e) {
        return "<hrsd.Expr " + e.ptr->to_json_string() + ">";
      });

  m.def(
      "cf_eval",
      [](const PyExpr& expr, const std::vector<double>& points) {
        EvalGrid grid;
        grid.points = points;
        return cf_eval(expr.ptr, grid);
      },
      py::arg("expr"), py::arg("points"),
      "Branch-continuous CF values along an ordered real grid containing 0.");
  m.def(
      "pgf_eval",
      [](const PyExpr& expr, const std::vector<Complex>& points) {
        return pgf_eval(expr.ptr, points);
      },
      py::arg("expr"), py::arg("points"),
      "PGF values at points of the closed unit disk.");
  m.def(
      "cf_eval_at",
      [](const PyExpr& expr, double t) { return cf_eval_at(expr.ptr, t); },
      py::arg("expr"), py::arg("t"));
  m.def(
      "pgf_eval_at",
      [](const PyExpr& expr, Complex s) { return pgf_eval_at(expr.ptr, s); },
      py::arg("expr"), py::arg("s"));

  m.def(
      "sd_factor",
      [](const PyExpr& psi, double c) { return PyExpr{sd_factor(psi.ptr, c)}; },
      py::arg("psi"), py::arg("c"));
  m.def(
      "hid_factor",
      [](const PyExpr& psi, double p, int k) {
        return PyExpr{hid_factor(psi.ptr, p, k)};
      },
      py::arg("psi"), py::arg("p"), py::arg("k"));
  m.def(
      "hrsd_innovation",
      [](const PyExpr& psi, double c, double p, int k) {
        return PyExpr{hrsd_innovation(psi.ptr, {c, p, k})};
      },
      py::arg("psi"), py::arg("c"), py::arg("p"), py::arg("k"));
  m.def(
      "blend",
      [](const PyExpr& e, double c, double p, int k) {
        return PyExpr{blend(e.ptr, c, p, k)};
      },
      py::arg("expr"), py::arg("c"), py::arg("p"), py::arg("k"));
  m.def(
      "harris_compose",
      [](const PyExpr& e, double a, int k) {
        return PyExpr{harris_compose(e.ptr, a, k)};
      },
      py::arg("expr"), py::arg("a"), py::arg("k"));
  m.def(
      "linnik_cf",
      [](double alpha, int k) { return PyExpr{linnik_cf(alpha, k)}; },
      py::arg("alpha"), py::arg("k"));
  m.def("harris_stable_scale", &harris_stable_scale, py::arg("c"),
        py::arg("alpha"));

  m.def(
      "sample",
      [](const std::string& law, py::kwargs kwargs) {
        SamplerSpec spec;
        spec.law = law_tag_from_string(law);
        std::uint64_t seed = 0, stream = 0;
        long n = 1;
        for (auto item : kwargs) {
          auto key = item.first.cast<std::string>();
          if (key == "seed") seed = item.second.cast<std::uint64_t>();
          else if (key == "stream") stream = item.second.cast<std::uint64_t>();
          else if (key == "n") n = item.second.cast<long>();
          else if (key == "shape") spec.shape = item.second.cast<double>();
          else if (key == "scale") spec.scale = item.second.cast<double>();
          else if (key == "mean") spec.mean = item.second.cast<double>();
          else if (key == "q") spec.q = item.second.cast<double>();
          else if (key == "a") spec.a = item.second.cast<double>();
          else if (key == "alpha") spec.alpha = item.second.cast<double>();
          else if (key == "k") spec.k = item.second.cast<int>();
          else if (key == "lam") spec.lambda = item.second.cast<double>();
          else if (key == "c") spec.c = item.second.cast<double>();
          else if (key == "p") spec.p = item.second.cast<double>();
          else
            throw std::invalid_argument("unknown sampler argument '" + key +
                                        "'");
        }
        RngStream rng(seed, stream);
        std::vector<double> out(static_cast<std::size_t>(n));
        for (auto& x : out) x = sample(spec, rng);
        return out;
      },
      py::arg("law"),
      "Draw n variates of a named law; deterministic in (seed, stream).");

  m.def(
      "simulate",
      [](const std::string& family, int k, double c, double p, double lambda,
         long horizon, long burn_in, std::uint64_t seed,
         const std::string& init) {
        Trajectory traj = simulate(
            make_config(family, k, c, p, lambda, horizon, burn_in, 1, seed,
                        init));
        py::dict out;
        out["y"] = traj.y;
        out["x"] = traj.x;
        out["b"] = traj.b;
        return out;
      },
      py::arg("family"), py::arg("k") = 1, py::arg("c") = 0.5,
      py::arg("p") = 0.0, py::arg("lam") = 1.0, py::arg("horizon") = 100,
      py::arg("burn_in") = 0, py::arg("seed") = 0,
      py::arg("init") = "stationary",
      "One AR(1)/INAR(1) chain run; returns components y, aggregate x and "
      "the shared renewal selectors b.");

  m.def(
      "replicate",
      [](const std::string& family, int k, double c, double p, double lambda,
         long horizon, long burn_in, long replicates, std::uint64_t seed,
         const std::string& init, long observe_time) {
        ModelConfig cfg = make_config(family, k, c, p, lambda, horizon,
                                      burn_in, replicates, seed, init);
        return replicate_marginal(cfg,
                                  observe_time >= 0 ? observe_time : horizon);
      },
      py::arg("family"), py::arg("k") = 1, py::arg("c") = 0.5,
      py::arg("p") = 0.0, py::arg("lam") = 1.0, py::arg("horizon") = 100,
      py::arg("burn_in") = 0, py::arg("replicates") = 1, py::arg("seed") = 0,
      py::arg("init") = "stationary", py::arg("observe_time") = -1,
      "Aggregate snapshots of independent replicate chains.");

  m.def(
      "extract_pgf_coeffs",
      [](const PyExpr& expr, std::size_t n, double radius) {
        return extract_pgf_coeffs(expr.ptr, n, radius).coeffs;
      },
      py::arg("expr"), py::arg("n") = 4096, py::arg("radius") = 1.0,
      "PGF mass coefficients by inverse DFT on a circle walk.");

  m.def(
      "check_psd",
      [](const PyExpr& expr, const std::vector<double>& grid) {
        PsdResult r = check_psd(expr.ptr, grid);
        return py::make_tuple(r.pass, r.min_eigenvalue);
      },
      py::arg("expr"), py::arg("t_grid"),
      "Bochner Gram-matrix spot check; returns (pass, min_eigenvalue).");

  m.def(
      "identity_residual",
      [](const PyExpr& lhs, const PyExpr& rhs,
         const std::vector<double>& points) {
        EvalGrid grid;
        grid.points = points;
        return identity_residual(lhs.ptr, rhs.ptr, grid);
      },
      py::arg("lhs"), py::arg("rhs"), py::arg("points"),
      "Max pointwise |lhs - rhs| over the grid.");

  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed, std::size_t mc_samples,
         long replicates) {
        SuiteOptions options;
        options.mc_samples = mc_samples;
        options.replicates = replicates;
        VerificationReport report = run_suite(name, seed, options);
        py::list entries;
        for (const auto& e : report.entries) {
          py::dict d;
          d["name"] = e.name;
          d["ref"] = e.ref;
          d["statistic"] = e.statistic;
          d["tolerance"] = e.tolerance;
          d["pass"] = e.pass;
          entries.append(d);
        }
        py::dict out;
        out["suite"] = report.suite;
        out["seed"] = report.seed;
        out["pass"] = report.pass;
        out["entries"] = entries;
        return out;
      },
      py::arg("name"), py::arg("seed"), py::arg("mc_samples") = 1000000,
      py::arg("replicates") = 100000,
      "Run a named verification suite and return its report as a dict.");

  m.def("suite_names", &suite_names);
  m.def("standard_cf_points", &standard_cf_points);
  m.def("standard_pgf_points", &standard_pgf_points);

  py::register_exception<EvalError>(m, "EvalError");
}
