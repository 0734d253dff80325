// hrsd command-line front end: sampling, simulation, decomposition,
// coefficient extraction and verification as deterministic batch commands.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hrsd/decompose.hpp"
#include "hrsd/expr.hpp"
#include "hrsd/processes.hpp"
#include "hrsd/samplers.hpp"
#include "hrsd/verify.hpp"

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_value(double v, bool discrete) {
  if (discrete) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return buf;
  }
  return fmt_double(v);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
}

hrsd::ExprPtr load_expr(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expression file '" + path + "'");
  json j;
  in >> j;
  return hrsd::Expr::from_json(j);
}

// --- sample -----------------------------------------------------------------

struct SampleArgs {
  std::string law;
  hrsd::SamplerSpec spec;
  std::string expr_path;  // from_coeffs source
  std::size_t coeff_n = 4096;
  long n = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string out;
};

int run_sample(const SampleArgs& args) {
  hrsd::SamplerSpec spec = args.spec;
  spec.law = hrsd::law_tag_from_string(args.law);
  if (spec.law == hrsd::LawTag::FromCoeffs) {
    if (args.expr_path.empty())
      throw CLI::ValidationError("--law from_coeffs requires --expr");
    spec.coeffs =
        hrsd::extract_pgf_coeffs(load_expr(args.expr_path), args.coeff_n, 1.0);
  }
  hrsd::RngStream rng(args.seed, args.stream);
  std::ostringstream os;
  const bool discrete = spec.discrete();
  for (long i = 0; i < args.n; ++i)
    os << fmt_value(hrsd::sample(spec, rng), discrete) << "\n";
  write_text(args.out, os.str());
  return 0;
}

// --- simulate / replicate ------------------------------------------------------

struct SimArgs {
  hrsd::ModelConfig cfg;
  std::string family = "gamma";
  std::string init = "stationary";
  std::string config_path;
  long observe_time = -1;
  std::string out;
};

void apply_config_file(CLI::App* cmd, SimArgs& args) {
  if (args.config_path.empty()) return;
  std::ifstream in(args.config_path);
  if (!in)
    throw std::runtime_error("cannot open config file '" + args.config_path +
                             "'");
  json j;
  in >> j;
  // Flags take precedence over config-file values.
  auto set_if_default = [&](const char* flag, auto&& assign) {
    if (cmd->count(flag) == 0 && j.contains(flag + 2)) assign(j.at(flag + 2));
  };
  set_if_default("--family", [&](const json& v) { args.family = v.get<std::string>(); });
  set_if_default("--init", [&](const json& v) { args.init = v.get<std::string>(); });
  set_if_default("--k", [&](const json& v) { args.cfg.k = v.get<int>(); });
  set_if_default("--c", [&](const json& v) { args.cfg.c = v.get<double>(); });
  set_if_default("--p", [&](const json& v) { args.cfg.p = v.get<double>(); });
  set_if_default("--lambda", [&](const json& v) { args.cfg.lambda = v.get<double>(); });
  set_if_default("--T", [&](const json& v) { args.cfg.horizon = v.get<long>(); });
  set_if_default("--burn-in", [&](const json& v) { args.cfg.burn_in = v.get<long>(); });
  set_if_default("--R", [&](const json& v) { args.cfg.replicates = v.get<long>(); });
  set_if_default("--seed", [&](const json& v) { args.cfg.seed = v.get<std::uint64_t>(); });
  set_if_default("--observe-time", [&](const json& v) { args.observe_time = v.get<long>(); });
}

int run_simulate(CLI::App* cmd, SimArgs& args) {
  apply_config_file(cmd, args);
  args.cfg.family = hrsd::family_from_string(args.family);
  args.cfg.init = hrsd::init_from_string(args.init);
  hrsd::Trajectory traj = hrsd::simulate(args.cfg);

  const bool discrete = args.cfg.family == hrsd::Family::NegBin;
  std::ostringstream os;
  os << "n,b";
  for (int i = 1; i <= args.cfg.k; ++i) os << ",Y_" << i;
  os << ",X\n";
  for (std::size_t n = 0; n < traj.x.size(); ++n) {
    os << n << "," << traj.b[n];
    for (double y : traj.y[n]) os << "," << fmt_value(y, discrete);
    os << "," << fmt_value(traj.x[n], discrete) << "\n";
  }
  write_text(args.out, os.str());
  return 0;
}

int run_replicate(CLI::App* cmd, SimArgs& args) {
  apply_config_file(cmd, args);
  args.cfg.family = hrsd::family_from_string(args.family);
  args.cfg.init = hrsd::init_from_string(args.init);
  long observe = args.observe_time >= 0 ? args.observe_time : args.cfg.horizon;
  std::vector<double> xs = hrsd::replicate_marginal(args.cfg, observe);

  const bool discrete = args.cfg.family == hrsd::Family::NegBin;
  std::ostringstream os;
  for (double x : xs) os << fmt_value(x, discrete) << "\n";
  write_text(args.out, os.str());
  return 0;
}

// --- decompose -------------------------------------------------------------------

struct DecomposeArgs {
  std::string family = "gamma";
  std::string expr_path;
  double lambda = 1.0;
  double c = 0.5;
  double p = 0.2;
  int k = 1;
  long grid_points = 0;  // 0: family default
  std::string out;
  std::string json_out;
};

int run_decompose(const DecomposeArgs& args) {
  hrsd::ExprPtr psi;
  if (!args.expr_path.empty()) {
    psi = load_expr(args.expr_path);
  } else if (args.family == "gamma") {
    psi = hrsd::Expr::gamma_cf(1.0 / args.k, args.lambda);
  } else if (args.family == "negbin") {
    psi = hrsd::Expr::negbin_pgf(1.0 / args.k, args.lambda);
  } else {
    throw CLI::ValidationError("--family must be gamma or negbin");
  }

  hrsd::FactorizationParams params{args.c, args.p, args.k};
  hrsd::ExprPtr sd = hrsd::sd_factor(psi, params.c);
  hrsd::ExprPtr hid = hrsd::hid_factor(psi, params.p, params.k);
  hrsd::ExprPtr innov = hrsd::hrsd_innovation(psi, params);

  if (!args.json_out.empty()) {
    json j;
    j["law"] = psi->to_json();
    j["sd_factor"] = sd->to_json();
    j["hid_factor"] = hid->to_json();
    j["innovation"] = innov->to_json();
    write_text(args.json_out, j.dump(2) + "\n");
  }

  const bool is_cf = psi->kind() == hrsd::TransformKind::CF;
  hrsd::EvalGrid grid =
      is_cf ? (args.grid_points > 0
                   ? hrsd::EvalGrid::linspace(-10.0, 10.0,
                                              static_cast<std::size_t>(args.grid_points))
                   : hrsd::standard_cf_grid())
            : (args.grid_points > 0
                   ? hrsd::EvalGrid::linspace(0.0, 1.0,
                                              static_cast<std::size_t>(args.grid_points))
                   : hrsd::standard_pgf_grid());
  auto vl = hrsd::eval_on_grid(psi, grid);
  auto vs = hrsd::eval_on_grid(sd, grid);
  auto vh = hrsd::eval_on_grid(hid, grid);
  auto vi = hrsd::eval_on_grid(innov, grid);

  std::ostringstream os;
  os << "t_or_s,law_re,law_im,sd_re,sd_im,hid_re,hid_im,innovation_re,"
        "innovation_im\n";
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    os << fmt_double(grid.points[i]);
    for (const auto* v : {&vl, &vs, &vh, &vi})
      os << "," << fmt_double((*v)[i].real()) << ","
         << fmt_double((*v)[i].imag());
    os << "\n";
  }
  write_text(args.out, os.str());
  return 0;
}

// --- coeffs ---------------------------------------------------------------------

struct CoeffsArgs {
  std::string pgf = "harris";
  std::string expr_path;
  double a = 2.0;
  int k = 1;
  double shape = 1.0;
  double scale = 1.0;
  double mean = 1.0;
  double q = 0.5;
  std::size_t n = 4096;
  double radius = 1.0;
  int precision = 6;
  std::string out;
};

int run_coeffs(const CoeffsArgs& args) {
  hrsd::ExprPtr expr;
  if (!args.expr_path.empty()) {
    expr = load_expr(args.expr_path);
  } else if (args.pgf == "harris") {
    expr = hrsd::Expr::harris_pgf(args.a, args.k);
  } else if (args.pgf == "negbin") {
    expr = hrsd::Expr::negbin_pgf(args.shape, args.scale);
  } else if (args.pgf == "poisson") {
    expr = hrsd::Expr::poisson_pgf(args.mean);
  } else if (args.pgf == "geometric") {
    expr = hrsd::Expr::geometric_pgf(args.q);
  } else {
    throw CLI::ValidationError(
        "--pgf must be harris, negbin, poisson or geometric");
  }
  hrsd::CoefficientSeries series =
      hrsd::extract_pgf_coeffs(expr, args.n, args.radius);
  std::ostringstream os;
  char buf[64];
  for (std::size_t i = 0; i < series.coeffs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.*f", i, args.precision,
                  series.coeffs[i]);
    os << buf << "\n";
  }
  write_text(args.out, os.str());
  return 0;
}

// --- verify ---------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 0;
  std::string json_out;
  hrsd::SuiteOptions options;
};

int run_verify(const VerifyArgs& args) {
  hrsd::VerificationReport report =
      hrsd::run_suite(args.suite, args.seed, args.options);
  for (const auto& e : report.entries)
    std::cout << (e.pass ? "PASS" : "FAIL") << " " << e.name
              << " statistic=" << fmt_double(e.statistic)
              << " tolerance=" << fmt_double(e.tolerance) << "\n";
  std::cout << (report.pass ? "PASS" : "FAIL") << " suite " << report.suite
            << "\n";
  if (!args.json_out.empty())
    write_text(args.json_out, report.to_json().dump(2) + "\n");
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Harris random self-decomposability toolkit: transform factorizations, "
      "exact samplers, AR(1)/INAR(1) simulation and numerical verification"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  auto* sample_cmd =
      app.add_subcommand("sample", "draw variates, one value per line");
  sample_cmd->add_option("--law", sample_args.law,
                         "gamma|poisson|negbin|geometric|harris|stable_sym|"
                         "linnik|gamma_sd_innov|nb_dsd_innov|gamma_hrsd_innov|"
                         "nb_dhrsd_innov|from_coeffs")
      ->required();
  sample_cmd->add_option("--shape", sample_args.spec.shape, "gamma/negbin shape");
  sample_cmd->add_option("--scale", sample_args.spec.scale, "gamma/negbin scale");
  sample_cmd->add_option("--mean", sample_args.spec.mean, "poisson mean");
  sample_cmd->add_option("--q", sample_args.spec.q, "geometric success prob");
  sample_cmd->add_option("--a", sample_args.spec.a, "harris index a > 1");
  sample_cmd->add_option("--alpha", sample_args.spec.alpha,
                         "stable/linnik exponent in (0,2]");
  sample_cmd->add_option("--k", sample_args.spec.k, "component count k >= 1");
  sample_cmd->add_option("--lambda", sample_args.spec.lambda,
                         "innovation base-law scale");
  sample_cmd->add_option("--c", sample_args.spec.c, "contraction in (0,1]");
  sample_cmd->add_option("--p", sample_args.spec.p, "renewal prob in [0,1)");
  sample_cmd->add_option("--expr", sample_args.expr_path,
                         "PGF expression JSON (from_coeffs)");
  sample_cmd->add_option("--N", sample_args.coeff_n,
                         "coefficient count for from_coeffs (power of two)");
  sample_cmd->add_option("--n", sample_args.n, "number of draws")->required();
  sample_cmd->add_option("--seed", sample_args.seed, "RNG seed")->required();
  sample_cmd->add_option("--stream", sample_args.stream, "RNG stream id");
  sample_cmd->add_option("-o,--out", sample_args.out, "output path (default stdout)");

  SimArgs sim_args;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "run one AR(1)/INAR(1) chain, CSV n,b,Y_1..Y_k,X");
  SimArgs rep_args;
  auto* rep_cmd = app.add_subcommand(
      "replicate", "independent replicate snapshots, one aggregate per line");
  for (auto [cmd, args] : {std::pair{sim_cmd, &sim_args},
                           std::pair{rep_cmd, &rep_args}}) {
    cmd->add_option("--family", args->family, "gamma|negbin");
    cmd->add_option("--k", args->cfg.k, "components");
    cmd->add_option("--c", args->cfg.c, "contraction in (0,1]");
    cmd->add_option("--p", args->cfg.p, "renewal prob in [0,1)");
    cmd->add_option("--lambda", args->cfg.lambda, "marginal scale");
    cmd->add_option("--T", args->cfg.horizon, "recorded horizon");
    cmd->add_option("--burn-in", args->cfg.burn_in, "unrecorded steps");
    cmd->add_option("--init", args->init, "stationary|zero");
    cmd->add_option("--seed", args->cfg.seed, "RNG seed");
    cmd->add_option("--config", args->config_path,
                    "JSON config file (flags take precedence)");
    cmd->add_option("-o,--out", args->out, "output path (default stdout)");
  }
  rep_cmd->add_option("--R", rep_args.cfg.replicates, "replicate count");
  rep_cmd->add_option("--observe-time", rep_args.observe_time,
                      "snapshot time (default T)");

  DecomposeArgs dec_args;
  auto* dec_cmd = app.add_subcommand(
      "decompose", "emit SD/HID factors and innovation of a law");
  dec_cmd->add_option("--family", dec_args.family, "gamma|negbin");
  dec_cmd->add_option("--expr", dec_args.expr_path, "expression JSON file");
  dec_cmd->add_option("--lambda", dec_args.lambda, "law scale");
  dec_cmd->add_option("--c", dec_args.c, "contraction in (0,1]");
  dec_cmd->add_option("--p", dec_args.p, "renewal prob in [0,1)");
  dec_cmd->add_option("--k", dec_args.k, "components");
  dec_cmd->add_option("--grid-points", dec_args.grid_points,
                      "evaluation grid size (default 201 CF / 101 PGF)");
  dec_cmd->add_option("-o,--out", dec_args.out, "CSV output (default stdout)");
  dec_cmd->add_option("--json-out", dec_args.json_out,
                      "factor trees as JSON");

  CoeffsArgs coeffs_args;
  auto* coeffs_cmd = app.add_subcommand(
      "coeffs", "extract PGF mass coefficients, lines n,coeff");
  coeffs_cmd->add_option("--pgf", coeffs_args.pgf,
                         "harris|negbin|poisson|geometric");
  coeffs_cmd->add_option("--expr", coeffs_args.expr_path,
                         "expression JSON file (overrides --pgf)");
  coeffs_cmd->add_option("--a", coeffs_args.a, "harris index");
  coeffs_cmd->add_option("--k", coeffs_args.k, "harris k");
  coeffs_cmd->add_option("--shape", coeffs_args.shape, "negbin shape");
  coeffs_cmd->add_option("--scale", coeffs_args.scale, "negbin scale");
  coeffs_cmd->add_option("--mean", coeffs_args.mean, "poisson mean");
  coeffs_cmd->add_option("--q", coeffs_args.q, "geometric success prob");
  coeffs_cmd->add_option("--N", coeffs_args.n, "coefficient count (power of two)");
  coeffs_cmd->add_option("--radius", coeffs_args.radius, "extraction radius");
  coeffs_cmd->add_option("--precision", coeffs_args.precision,
                         "printed decimals");
  coeffs_cmd->add_option("-o,--out", coeffs_args.out,
                         "output path (default stdout)");

  VerifyArgs verify_args;
  auto* verify_cmd =
      app.add_subcommand("verify", "run a named verification suite");
  verify_cmd->add_option("--suite", verify_args.suite,
                         "algebra|factorization|samplers|stationarity|"
                         "negative-controls")
      ->required();
  verify_cmd->add_option("--seed", verify_args.seed, "RNG seed")->required();
  verify_cmd->add_option("--json", verify_args.json_out, "JSON report path");
  verify_cmd->add_option("--mc-samples", verify_args.options.mc_samples,
                         "Monte Carlo draws per sampler check");
  verify_cmd->add_option("--replicates", verify_args.options.replicates,
                         "stationarity replicate count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sample_cmd->parsed()) return run_sample(sample_args);
    if (sim_cmd->parsed()) return run_simulate(sim_cmd, sim_args);
    if (rep_cmd->parsed()) return run_replicate(rep_cmd, rep_args);
    if (dec_cmd->parsed()) return run_decompose(dec_args);
    if (coeffs_cmd->parsed()) return run_coeffs(coeffs_args);
    if (verify_cmd->parsed()) return run_verify(verify_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
