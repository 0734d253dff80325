#include "hrsd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "hrsd/decompose.hpp"
#include "hrsd/processes.hpp"
#include "hrsd/samplers.hpp"

namespace hrsd {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT with kernel exp(-2*pi*i*jk/n).
void fft_forward(std::vector<Complex>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w = 1.0;
      for (std::size_t j = 0; j < len / 2; ++j) {
        Complex u = a[i + j];
        Complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
  double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficient extraction

CoefficientSeries extract_pgf_coeffs(const ExprPtr& expr, std::size_t n,
                                     double radius) {
  require(expr != nullptr, "extract_pgf_coeffs: null expression");
  require(expr->kind() == TransformKind::PGF,
          "extract_pgf_coeffs: expression must be a PGF");
  require(is_power_of_two(n), "extract_pgf_coeffs: n must be a power of two");
  require(radius > 0.0 && radius <= 1.0,
          "extract_pgf_coeffs: radius must be in (0,1]");

  // Walk the circle branch-continuously starting from the anchor s=1.
  std::vector<Complex> values(n);
  PathEvaluator ev(expr, 40);
  ev.start(1.0);
  for (std::size_t j = 0; j < n; ++j) {
    double ang = 2.0 * std::numbers::pi * static_cast<double>(j) /
                 static_cast<double>(n);
    Complex s = radius * Complex(std::cos(ang), std::sin(ang));
    values[j] = j == 0 && radius == 1.0 ? ev.start(1.0) : ev.advance(s);
  }

  fft_forward(values);
  CoefficientSeries series;
  series.size = n;
  series.radius = radius;
  series.coeffs.resize(n);
  double scale = 1.0;
  for (std::size_t m = 0; m < n; ++m) {
    series.coeffs[m] = values[m].real() / (static_cast<double>(n) * scale);
    scale *= radius;
  }
  return series;
}

ValidityResult check_pgf_validity(const CoefficientSeries& series) {
  require(series.radius == 1.0,
          "check_pgf_validity: series must be extracted at radius 1");
  ValidityResult r;
  r.min_coeff = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < series.coeffs.size(); ++i) {
    r.mass += series.coeffs[i];
    if (series.coeffs[i] < r.min_coeff) {
      r.min_coeff = series.coeffs[i];
      r.min_index = i;
    }
  }
  r.pass = r.min_coeff >= -1e-9 && std::abs(r.mass - 1.0) <= 1e-8;
  return r;
}

// ---------------------------------------------------------------------------
// PSD check

PsdResult check_psd(const ExprPtr& expr, const std::vector<double>& t_grid) {
  require(expr != nullptr, "check_psd: null expression");
  require(expr->kind() == TransformKind::CF, "check_psd: expression must be a CF");
  require(!t_grid.empty() && t_grid.size() <= 64,
          "check_psd: grid size must be in [1,64]");

  // Evaluate psi at all pairwise differences in one branch-continuous pass.
  std::vector<double> diffs;
  diffs.reserve(t_grid.size() * t_grid.size());
  for (double ti : t_grid)
    for (double tj : t_grid) diffs.push_back(ti - tj);
  diffs.push_back(0.0);
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  EvalGrid grid{diffs, 40};
  std::vector<Complex> vals = cf_eval(expr, grid);
  auto value_at = [&](double d) {
    auto it = std::lower_bound(diffs.begin(), diffs.end(), d);
    return vals[static_cast<std::size_t>(it - diffs.begin())];
  };

  const auto n = static_cast<Eigen::Index>(t_grid.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = value_at(0.0).real();  // real diagonal
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Complex v = value_at(t_grid[static_cast<std::size_t>(i)] -
                           t_grid[static_cast<std::size_t>(j)]);
      m(i, j) = v;
      m(j, i) = std::conj(v);  // Hermitian by construction
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m,
                                                         Eigen::EigenvaluesOnly);
  PsdResult r;
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.pass = r.min_eigenvalue >= -1e-8 * static_cast<double>(n);
  return r;
}

// ---------------------------------------------------------------------------
// Grid evaluation and residuals

std::vector<Complex> eval_on_grid(const ExprPtr& expr, const EvalGrid& grid) {
  require(expr != nullptr, "eval_on_grid: null expression");
  if (expr->kind() == TransformKind::CF) return cf_eval(expr, grid);

  grid.validate(TransformKind::PGF);
  const auto& pts = grid.points;
  auto anchor_it = std::find(pts.begin(), pts.end(), 1.0);
  std::size_t a = static_cast<std::size_t>(anchor_it - pts.begin());
  std::vector<Complex> out(pts.size());
  PathEvaluator ev(expr, grid.refinement_limit);
  out[a] = ev.start(1.0);
  for (std::size_t i = a; i-- > 0;) out[i] = ev.advance(pts[i]);
  // PGF grids lie in [0,1]; nothing above the anchor.
  for (std::size_t i = a + 1; i < pts.size(); ++i) out[i] = ev.advance(pts[i]);
  return out;
}

double identity_residual(const ExprPtr& lhs, const ExprPtr& rhs,
                         const EvalGrid& grid) {
  require(lhs != nullptr && rhs != nullptr, "identity_residual: null expression");
  require(lhs->kind() == rhs->kind(),
          "identity_residual: expressions must be the same kind");
  std::vector<Complex> lv = eval_on_grid(lhs, grid);
  std::vector<Complex> rv = eval_on_grid(rhs, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < lv.size(); ++i)
    worst = std::max(worst, std::abs(lv[i] - rv[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// Empirical comparisons

CheckEntry compare_empirical_cf(const std::vector<double>& samples,
                                const ExprPtr& expr,
                                const std::vector<double>& t_grid,
                                const std::string& name) {
  require(!samples.empty(), "compare_empirical_cf: empty sample set");
  const double n = static_cast<double>(samples.size());
  CheckEntry entry;
  entry.name = name;
  entry.ref = "empirical CF vs transform";
  entry.tolerance = 4.0 / std::sqrt(n);
  double worst = 0.0;
  for (double t : t_grid) {
    Complex acc = 0.0;
    for (double x : samples) acc += Complex(std::cos(t * x), std::sin(t * x));
    acc /= n;
    worst = std::max(worst, std::abs(acc - cf_eval_at(expr, t)));
  }
  entry.statistic = worst;
  entry.pass = worst < entry.tolerance;
  return entry;
}

CheckEntry compare_empirical_pgf(const std::vector<double>& samples,
                                 const ExprPtr& expr,
                                 const std::vector<double>& s_grid,
                                 const std::string& name) {
  require(!samples.empty(), "compare_empirical_pgf: empty sample set");
  const double n = static_cast<double>(samples.size());
  CheckEntry entry;
  entry.name = name;
  entry.ref = "empirical PGF vs transform";
  entry.tolerance = 4.0 / std::sqrt(n);
  double worst = 0.0;
  for (double s : s_grid) {
    double acc = 0.0;
    for (double x : samples) acc += std::pow(s, x);
    acc /= n;
    worst = std::max(worst,
                     std::abs(acc - pgf_eval_at(expr, Complex(s, 0.0)).real()));
  }
  entry.statistic = worst;
  entry.pass = worst < entry.tolerance;
  return entry;
}

// ---------------------------------------------------------------------------
// Reports

void VerificationReport::add(CheckEntry entry) {
  entries.push_back(std::move(entry));
}

void VerificationReport::finalize() {
  std::sort(entries.begin(), entries.end(),
            [](const CheckEntry& a, const CheckEntry& b) {
              return a.name < b.name;
            });
  pass = std::all_of(entries.begin(), entries.end(),
                     [](const CheckEntry& e) { return e.pass; });
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["pass"] = pass;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"name", e.name},
                   {"ref", e.ref},
                   {"statistic", e.statistic},
                   {"tolerance", e.tolerance},
                   {"pass", e.pass}});
  }
  j["entries"] = arr;
  return j;
}

// ---------------------------------------------------------------------------
// Standard grids

std::vector<double> standard_cf_points() {
  return {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0};
}

std::vector<double> standard_pgf_points() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

EvalGrid standard_cf_grid() { return EvalGrid::linspace(-10.0, 10.0, 201); }

EvalGrid standard_pgf_grid() { return EvalGrid::linspace(0.0, 1.0, 101); }

// ---------------------------------------------------------------------------
// Suites

namespace {

CheckEntry residual_entry(const std::string& name, const std::string& ref,
                          double residual, double tol) {
  return CheckEntry{name, ref, residual, tol, residual < tol};
}

std::vector<ExprPtr> cf_battery() {
  return {
      Expr::gamma_cf(1.0, 1.0),
      Expr::gamma_cf(0.5, 2.0),
      Expr::stable_sym_cf(0.7),
      Expr::stable_sym_cf(1.0),
      Expr::stable_sym_cf(2.0),
      linnik_cf(1.0, 2),
      linnik_cf(0.5, 1),
      sd_factor(Expr::gamma_cf(0.5, 1.0), 0.5),
      hid_factor(Expr::gamma_cf(0.5, 1.0), 0.3, 2),
      hrsd_innovation(Expr::gamma_cf(1.0 / 3.0, 1.0), {0.5, 0.2, 3}),
  };
}

std::vector<ExprPtr> pgf_battery() {
  return {
      Expr::negbin_pgf(0.5, 1.0),
      Expr::poisson_pgf(1.3),
      Expr::geometric_pgf(0.4),
      Expr::harris_pgf(2.0, 2),
      Expr::harris_pgf(3.0, 1),
      Expr::hid_from_id(2, Expr::poisson_pgf(0.7)),
      hrsd_innovation(Expr::negbin_pgf(0.5, 1.0), {0.7, 0.3, 2}),
  };
}

void suite_algebra(VerificationReport& report) {
  auto abs_err = [](Complex v, Complex want) { return std::abs(v - want); };

  report.add(residual_entry("algebra/gamma_cf_value", "1/(1-it) at t=1",
                            abs_err(cf_eval_at(Expr::gamma_cf(1, 1), 1.0),
                                    Complex(0.5, 0.5)),
                            1e-12));
  report.add(residual_entry(
      "algebra/harris_pgf_value", "Harris(3,2) at s=0.5",
      abs_err(pgf_eval_at(Expr::harris_pgf(3, 2), 0.5), 0.5 / std::sqrt(2.5)),
      1e-12));
  report.add(residual_entry(
      "algebra/harris_pgf_geometric_value", "Harris(2,1) at s=0.5",
      abs_err(pgf_eval_at(Expr::harris_pgf(2, 1), 0.5), 1.0 / 3.0), 1e-12));
  report.add(residual_entry(
      "algebra/hid_stable_value", "(1+t^2)^-1 at t=1",
      abs_err(cf_eval_at(hid_from_id(Expr::stable_sym_cf(2.0), 1), 1.0), 0.5),
      1e-12));
  report.add(residual_entry(
      "algebra/blend_value", "blend of 1/(1-it), c=1 p=0.5 k=1, t=1",
      abs_err(cf_eval_at(Expr::blend(1.0, 0.5, 1, Expr::gamma_cf(1, 1)), 1.0),
              Complex(0.75, 0.25)),
      1e-12));

  // Anchor normalization is exact, not approximate.
  double anchor_err = 0.0;
  for (const auto& e : cf_battery())
    anchor_err = std::max(anchor_err, std::abs(cf_eval_at(e, 0.0) - 1.0));
  for (const auto& e : pgf_battery())
    anchor_err = std::max(anchor_err,
                          std::abs(pgf_eval_at(e, Complex(1.0, 0.0)) - 1.0));
  report.add(CheckEntry{"algebra/anchor_normalization",
                        "transform equals 1 at the anchor", anchor_err, 0.0,
                        anchor_err == 0.0});

  double herm = 0.0;
  double modulus_excess = 0.0;
  double grid_stability = 0.0;
  EvalGrid coarse = standard_cf_grid();
  EvalGrid fine = EvalGrid::linspace(-10.0, 10.0, 401);
  for (const auto& e : cf_battery()) {
    std::vector<Complex> vc = cf_eval(e, coarse);
    std::vector<Complex> vf = cf_eval(e, fine);
    for (std::size_t i = 0; i < vc.size(); ++i) {
      herm = std::max(herm, std::abs(vc[i] - std::conj(vc[vc.size() - 1 - i])));
      modulus_excess = std::max(modulus_excess, std::abs(vc[i]) - 1.0);
      grid_stability = std::max(grid_stability, std::abs(vc[i] - vf[2 * i]));
    }
  }
  report.add(residual_entry("algebra/hermitian_symmetry",
                            "psi(-t) = conj(psi(t))", herm, 1e-12));
  EvalGrid sgrid = standard_pgf_grid();
  for (const auto& e : pgf_battery())
    for (Complex v : eval_on_grid(e, sgrid))
      modulus_excess = std::max(modulus_excess, std::abs(v) - 1.0);
  report.add(residual_entry("algebra/modulus_bound",
                            "|transform| <= 1 on the natural domain",
                            modulus_excess, 1e-9));
  report.add(residual_entry("algebra/branch_grid_stability",
                            "halving grid spacing leaves values fixed",
                            grid_stability, 1e-9));

  // hid_factor then Harris composition with a = 1/p reproduces psi.
  double roundtrip = 0.0;
  for (double p : {0.2, 0.5}) {
    for (int k : {1, 2, 3}) {
      ExprPtr psi = Expr::gamma_cf(1.0 / k, 1.0);
      roundtrip = std::max(
          roundtrip,
          identity_residual(harris_compose(hid_factor(psi, p, k), 1.0 / p, k),
                            psi, coarse));
      ExprPtr pgf = Expr::negbin_pgf(1.0 / k, 1.0);
      roundtrip = std::max(
          roundtrip,
          identity_residual(harris_compose(hid_factor(pgf, p, k), 1.0 / p, k),
                            pgf, sgrid));
    }
  }
  report.add(residual_entry("algebra/hid_roundtrip",
                            "harris_compose(hid_factor) recovers the law",
                            roundtrip, 1e-10));

  ExprPtr nb = Expr::negbin_pgf(0.5, 1.0);
  report.add(residual_entry("algebra/thin_identity",
                            "thinning by c=1 is the identity",
                            identity_residual(thin_substitute(nb, 1.0), nb, sgrid),
                            1e-12));
  report.add(residual_entry(
      "algebra/thin_closed_form", "thinned NB(1/k,l) is NB(1/k,cl)",
      identity_residual(thin_substitute(Expr::negbin_pgf(0.5, 1.0), 0.4),
                        Expr::negbin_pgf(0.5, 0.4), sgrid),
      1e-12));
}

void suite_factorization(VerificationReport& report) {
  EvalGrid tgrid = standard_cf_grid();
  EvalGrid sgrid = standard_pgf_grid();
  const double cs[] = {0.3, 0.7, 1.0};
  const double ps[] = {0.0, 0.2, 0.5};
  const int ks[] = {1, 2, 3};

  double gamma_res = 0.0, nb_res = 0.0;
  for (double c : cs) {
    for (double p : ps) {
      for (int k : ks) {
        FactorizationParams params{c, p, k};
        ExprPtr psi = Expr::gamma_cf(1.0 / k, 1.0);
        ExprPtr rhs = Expr::product(
            {hrsd_innovation(psi, params), Expr::blend(c, p, k, psi)});
        gamma_res = std::max(gamma_res, identity_residual(psi, rhs, tgrid));

        ExprPtr pgf = Expr::negbin_pgf(1.0 / k, 1.0);
        ExprPtr rhs_d = Expr::product(
            {hrsd_innovation(pgf, params), Expr::blend(c, p, k, pgf)});
        nb_res = std::max(nb_res, identity_residual(pgf, rhs_d, sgrid));
      }
    }
  }
  report.add(residual_entry("factorization/gamma_identity_lattice",
                            "psi = psi_{c,p} {p+(1-p)psi^k(ct)}^{1/k}",
                            gamma_res, 1e-10));
  report.add(residual_entry("factorization/negbin_identity_lattice",
                            "P = P_{c,p} {p+(1-p)P^k(1-c+cs)}^{1/k}", nb_res,
                            1e-10));

  double closed = 0.0;
  for (double p : {0.2, 0.5}) {
    for (int k : ks) {
      closed = std::max(
          closed, identity_residual(hid_factor(Expr::gamma_cf(1.0 / k, 1.0), p, k),
                                    Expr::gamma_cf(1.0 / k, p), tgrid));
      closed = std::max(
          closed,
          identity_residual(hid_factor(Expr::negbin_pgf(1.0 / k, 1.0), p, k),
                            Expr::negbin_pgf(1.0 / k, p), sgrid));
    }
  }
  report.add(residual_entry("factorization/hid_closed_forms",
                            "hid_factor(gamma)=gamma(1/k,pl), NB likewise",
                            closed, 1e-12));

  report.add(residual_entry(
      "factorization/gamma_sd_value", "(1-0.5i)/(1-i) at t=1",
      std::abs(cf_eval_at(sd_factor(Expr::gamma_cf(1, 1), 0.5), 1.0) -
               Complex(0.75, 0.25)),
      1e-12));
  report.add(residual_entry(
      "factorization/negbin_sd_value", "1.5/2 at s=0",
      std::abs(pgf_eval_at(sd_factor(Expr::negbin_pgf(1, 1), 0.5),
                           Complex(0.0, 0.0)) -
               0.75),
      1e-12));

  double linnik_res = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double c : {0.3, 0.7}) {
      for (int k : {1, 2}) {
        ExprPtr psi = linnik_cf(alpha, k);
        double a = harris_stable_scale(c, alpha);
        ExprPtr rhs = harris_compose(Expr::scale_arg(c, psi), a, k);
        linnik_res = std::max(linnik_res, identity_residual(psi, rhs, tgrid));
      }
    }
  }
  report.add(residual_entry("factorization/linnik_harris_sum_stable",
                            "Linnik is a Harris sum of its scaled copy",
                            linnik_res, 1e-10));

  // k=1: the root-free geometric-RSD identity computed without Blend nodes.
  double grsd = 0.0;
  for (double c : {0.3, 0.7}) {
    for (double p : {0.0, 0.2, 0.5}) {
      ExprPtr psi = Expr::gamma_cf(1.0, 1.0);
      ExprPtr innov = hrsd_innovation(psi, {c, p, 1});
      std::vector<Complex> vp = cf_eval(psi, tgrid);
      std::vector<Complex> vi = cf_eval(innov, tgrid);
      ExprPtr scaled = Expr::scale_arg(c, psi);
      std::vector<Complex> vs = cf_eval(scaled, tgrid);
      for (std::size_t i = 0; i < vp.size(); ++i)
        grsd = std::max(grsd,
                        std::abs(vp[i] - vi[i] * (p + (1.0 - p) * vs[i])));
    }
  }
  report.add(residual_entry("factorization/k1_grsd_reduction",
                            "k=1 matches the geometric-RSD factorization",
                            grsd, 1e-12));
}

void suite_samplers(VerificationReport& report, std::uint64_t seed,
                    const SuiteOptions& options) {
  const std::size_t n = options.mc_samples;
  std::uint64_t stream = 0;
  auto draws = [&](auto&& fn) {
    RngStream rng(seed, stream++);
    std::vector<double> xs(n);
    for (auto& x : xs) x = fn(rng);
    return xs;
  };
  auto mean_entry = [&](const std::string& name, const std::string& ref,
                        const std::vector<double>& xs, double want) {
    double m = sample_mean(xs);
    double tol = 4.0 * sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
    return CheckEntry{name, ref, std::abs(m - want), tol,
                      std::abs(m - want) < tol};
  };

  {
    auto xs = draws([](RngStream& r) { return sample_gamma(1.0, 1.0, r); });
    report.add(mean_entry("samplers/gamma_mean", "E gamma(1,l) = l", xs, 1.0));
  }
  {
    auto xs = draws([](RngStream& r) {
      return static_cast<double>(sample_negbin(0.5, 2.0, r));
    });
    report.add(mean_entry("samplers/negbin_mean", "P'(1) = r*theta", xs, 1.0));
  }
  {
    RngStream rng(seed, stream++);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
      worst = std::max(worst,
                       static_cast<double>(sample_poisson(0.0, rng)));
    report.add(CheckEntry{"samplers/poisson_zero", "Poisson(0) is degenerate",
                          worst, 0.0, worst == 0.0});
  }
  {
    RngStream rng(seed, stream++);
    std::vector<double> xs(n);
    long bad_support = 0;
    for (auto& x : xs) {
      long v = sample_harris(3.0, 2, rng);
      if ((v - 1) % 2 != 0) ++bad_support;
      x = static_cast<double>(v);
    }
    report.add(CheckEntry{"samplers/harris_support",
                          "Harris(a,k) support is {1, 1+k, ...}",
                          static_cast<double>(bad_support), 0.0,
                          bad_support == 0});
    double tol = 4.0 * std::sqrt(12.0 / static_cast<double>(n));
    double err = std::abs(sample_mean(xs) - 3.0);
    report.add(CheckEntry{"samplers/harris_mean", "E Harris(a,k) = a", err, tol,
                          err < tol});
  }
  {
    RngStream rng(seed, stream++);
    long ones = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (sample_harris(2.0, 1, rng) == 1) ++ones;
    double phat = static_cast<double>(ones) / static_cast<double>(n);
    double tol = 4.0 * 0.5 / std::sqrt(static_cast<double>(n));
    report.add(CheckEntry{"samplers/harris_geometric_p1",
                          "Harris(2,1) is geometric(1/2)",
                          std::abs(phat - 0.5), tol,
                          std::abs(phat - 0.5) < tol});
  }
  for (double alpha : {0.7, 1.5}) {
    auto xs = draws(
        [alpha](RngStream& r) { return sample_stable_sym(alpha, r); });
    long pos = 0;
    for (double x : xs)
      if (x > 0) ++pos;
    double phat = static_cast<double>(pos) / static_cast<double>(n);
    double tol = 4.0 * 0.5 / std::sqrt(static_cast<double>(n));
    std::string tag = alpha < 1.0 ? "0.7" : "1.5";
    report.add(CheckEntry{"samplers/stable_symmetry_a" + tag,
                          "symmetric law: P(X>0) = 1/2", std::abs(phat - 0.5),
                          tol, std::abs(phat - 0.5) < tol});
    report.add(compare_empirical_cf(xs, Expr::stable_sym_cf(alpha),
                                    {0.5, 1.0, 2.0},
                                    "samplers/stable_cf_a" + tag));
  }
  {
    auto xs =
        draws([](RngStream& r) { return sample_stable_sym(2.0, r); });
    double var = sample_sd(xs);
    var *= var;
    report.add(CheckEntry{"samplers/stable_alpha2_variance",
                          "exp(-t^2) is Normal(0,2)", std::abs(var - 2.0) / 2.0,
                          0.02, std::abs(var - 2.0) / 2.0 < 0.02});
  }
  {
    auto xs = draws([](RngStream& r) { return sample_linnik(1.0, 2, r); });
    report.add(compare_empirical_cf(xs, linnik_cf(1.0, 2), {0.5, 1.0, 2.0},
                                    "samplers/linnik_cf"));
  }
  {
    auto xs = draws([](RngStream& r) { return sample_linnik(2.0, 1, r); });
    double var = sample_sd(xs);
    var *= var;
    report.add(CheckEntry{"samplers/linnik_alpha2_variance",
                          "CF 1/(1+t^2) has variance 2",
                          std::abs(var - 2.0) / 2.0, 0.02,
                          std::abs(var - 2.0) / 2.0 < 0.02});
  }

  const int k = 2;
  const double lambda = 1.0, c = 0.5, p = 0.3;
  {
    auto xs = draws([&](RngStream& r) {
      return sample_gamma_sd_innovation(k, lambda, c, r);
    });
    report.add(mean_entry("samplers/gamma_sd_innov_mean",
                          "E = lambda(1-c)/k", xs, lambda * (1 - c) / k));
    report.add(compare_empirical_cf(
        xs, sd_factor(Expr::gamma_cf(1.0 / k, lambda), c),
        standard_cf_points(), "samplers/gamma_sd_innov_cf"));
  }
  {
    RngStream rng(seed, stream++);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
      worst = std::max(worst, sample_gamma_sd_innovation(k, lambda, 1.0, rng));
    report.add(CheckEntry{"samplers/gamma_sd_innov_c1",
                          "c=1 innovation is 0", worst, 0.0, worst == 0.0});
  }
  {
    auto xs = draws([&](RngStream& r) {
      return static_cast<double>(sample_nb_dsd_innovation(k, lambda, c, r));
    });
    report.add(mean_entry("samplers/nb_dsd_innov_mean", "E = lambda(1-c)/k",
                          xs, lambda * (1 - c) / k));
    report.add(compare_empirical_pgf(
        xs, sd_factor(Expr::negbin_pgf(1.0 / k, lambda), c),
        {0.0, 0.25, 0.5, 0.75}, "samplers/nb_dsd_innov_pgf"));
  }
  {
    auto xs = draws([&](RngStream& r) {
      return sample_gamma_hrsd_innovation(k, lambda, c, p, r);
    });
    report.add(mean_entry("samplers/gamma_hrsd_innov_mean",
                          "E = lambda(1-c(1-p))/k", xs,
                          lambda * (1 - c * (1 - p)) / k));
    report.add(compare_empirical_cf(
        xs, hrsd_innovation(Expr::gamma_cf(1.0 / k, lambda), {c, p, k}),
        standard_cf_points(), "samplers/gamma_hrsd_innov_cf"));
  }
  {
    auto xs = draws([&](RngStream& r) {
      return static_cast<double>(sample_nb_dhrsd_innovation(k, lambda, c, p, r));
    });
    report.add(mean_entry("samplers/nb_dhrsd_innov_mean",
                          "E = lambda(1-c(1-p))/k", xs,
                          lambda * (1 - c * (1 - p)) / k));
    report.add(compare_empirical_pgf(
        xs, hrsd_innovation(Expr::negbin_pgf(1.0 / k, lambda), {c, p, k}),
        {0.0, 0.25, 0.5, 0.75}, "samplers/nb_dhrsd_innov_pgf"));
  }
  {
    auto xs = draws([](RngStream& r) {
      long y = sample_negbin(1.0, 1.0, r);
      return static_cast<double>(binomial_thin(y, 0.6, r));
    });
    report.add(compare_empirical_pgf(xs, Expr::negbin_pgf(1.0, 0.6),
                                     standard_pgf_points(),
                                     "samplers/binomial_thin_pgf"));
  }
  {
    CoefficientSeries series;
    series.size = 64;
    series.radius = 1.0;
    series.coeffs.resize(64);
    for (std::size_t i = 0; i < 64; ++i)
      series.coeffs[i] = std::pow(2.0, -static_cast<double>(i) - 1.0);
    auto xs = draws([&](RngStream& r) {
      return static_cast<double>(sample_from_coeffs(series, r));
    });
    report.add(mean_entry("samplers/from_coeffs_geometric_mean",
                          "geometric(1/2) on {0,1,...} has mean 1", xs, 1.0));
  }
  {
    RngStream a(seed, 7), b(seed, 7);
    double diff = 0.0;
    for (int i = 0; i < 1000; ++i)
      diff = std::max(diff, std::abs(sample_gamma_hrsd_innovation(k, lambda, c,
                                                                  p, a) -
                                     sample_gamma_hrsd_innovation(k, lambda, c,
                                                                  p, b)));
    report.add(CheckEntry{"samplers/determinism",
                          "same (seed, stream) gives the same sequence", diff,
                          0.0, diff == 0.0});
  }
}

void suite_stationarity(VerificationReport& report, std::uint64_t seed,
                        const SuiteOptions& options) {
  const long reps = options.replicates;
  std::uint64_t scramble = 1;

  for (Family family : {Family::Gamma, Family::NegBin}) {
    for (double c : {0.3, 0.7}) {
      for (double p : {0.1, 0.5}) {
        for (int k : {1, 2}) {
          for (Init init : {Init::Stationary, Init::Zero}) {
            ModelConfig cfg;
            cfg.family = family;
            cfg.k = k;
            cfg.c = c;
            cfg.p = p;
            cfg.lambda = 1.0;
            cfg.horizon = 50;
            cfg.burn_in = init == Init::Zero ? 200 : 0;
            cfg.replicates = reps;
            cfg.seed = seed + scramble++;
            cfg.init = init;
            std::vector<double> xs = replicate_marginal(cfg, 50);


            std::string name =
                std::string("stationarity/") +
                (family == Family::Gamma ? "gamma" : "negbin") + "_c" +
                (c < 0.5 ? "0.3" : "0.7") + "_p" + (p < 0.3 ? "0.1" : "0.5") +
                "_k" + std::to_string(k) +
                (init == Init::Stationary ? "_stationary" : "_burnin");
            if (family == Family::Gamma) {
              // Aggregate CF psi^k = (1 - i*lambda*t)^{-1}.
              report.add(compare_empirical_cf(xs, Expr::gamma_cf(1.0, 1.0),
                                              standard_cf_points(), name));
            } else {
              report.add(compare_empirical_pgf(xs, Expr::negbin_pgf(1.0, 1.0),
                                               standard_pgf_points(), name));
            }
          }
        }
      }
    }
  }
}

void suite_negative_controls(VerificationReport& report, std::uint64_t seed) {
  // Bernoulli(1/2) is not GID: its hid factor has a negative coefficient.
  ExprPtr bernoulli = Expr::thin(0.5, Expr::degenerate_one_pgf());
  ExprPtr factor = hid_factor(bernoulli, 0.5, 1);
  CoefficientSeries series = extract_pgf_coeffs(factor, 256, 1.0);
  double coeff2 = series.coeffs[2];
  double err = std::abs(coeff2 - (-4.0 / 27.0));
  report.add(CheckEntry{"negative-controls/bernoulli_hid_coeff",
                        "hid factor coeff at index 2 is -4/27", err, 1e-9,
                        err < 1e-9});
  ValidityResult validity = check_pgf_validity(series);
  report.add(CheckEntry{"negative-controls/bernoulli_hid_invalid",
                        "non-GID input must fail the validity check",
                        validity.min_coeff, -1e-9, !validity.pass});

  // Rectangle function is not a CF: its 3x3 Gram matrix is indefinite.
  PsdResult psd = check_psd(Expr::indicator_cf(1.0), {0.0, 0.8, 1.6});
  double eig_err = std::abs(psd.min_eigenvalue - (1.0 - std::sqrt(2.0)));
  report.add(CheckEntry{"negative-controls/rectangle_gram_eigenvalue",
                        "min eigenvalue is 1 - sqrt(2)", eig_err, 1e-9,
                        eig_err < 1e-9});
  report.add(CheckEntry{"negative-controls/rectangle_psd_fails",
                        "indicator must fail the PSD check",
                        psd.min_eigenvalue, -1e-8 * 3, !psd.pass});

  // Deliberate CF mismatch must be detected by the empirical comparison.
  RngStream rng(seed, 0);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = sample_gamma(1.0, 1.0, rng);
  CheckEntry cmp = compare_empirical_cf(xs, Expr::gamma_cf(1.0, 2.0), {1.0},
                                        "negative-controls/cf_mismatch");
  cmp.ref = "gamma(1,1) samples vs gamma(1,2) CF must fail";
  cmp.pass = !cmp.pass;
  report.add(cmp);

  // The checker itself passes genuine transforms.
  PsdResult gid = check_psd(hid_factor(Expr::gamma_cf(0.5, 1.0), 0.3, 1),
                            [] {
                              std::vector<double> g(32);
                              for (int i = 0; i < 32; ++i)
                                g[static_cast<std::size_t>(i)] =
                                    -8.0 + 16.0 * i / 31.0;
                              return g;
                            }());
  report.add(CheckEntry{"negative-controls/gamma_gid_psd_passes",
                        "gamma alpha<=1 hid factor is PSD on the grid",
                        gid.min_eigenvalue, -1e-8 * 32, gid.pass});
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"algebra", "factorization", "samplers", "stationarity",
          "negative-controls"};
}

VerificationReport run_suite(const std::string& name, std::uint64_t seed,
                             const SuiteOptions& options) {
  VerificationReport report;
  report.suite = name;
  report.seed = seed;
  if (name == "algebra") {
    suite_algebra(report);
  } else if (name == "factorization") {
    suite_factorization(report);
  } else if (name == "samplers") {
    suite_samplers(report, seed, options);
  } else if (name == "stationarity") {
    suite_stationarity(report, seed, options);
  } else if (name == "negative-controls") {
    suite_negative_controls(report, seed);
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  report.finalize();
  return report;
}

}  // namespace hrsd
