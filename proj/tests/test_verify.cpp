#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "hrsd/decompose.hpp"
#include "hrsd/samplers.hpp"
#include "hrsd/verify.hpp"

using namespace hrsd;

TEST_CASE("coefficient extraction is exact for polynomial PGFs") {
  // P(s) = s
  auto series = extract_pgf_coeffs(Expr::degenerate_one_pgf(), 32, 1.0);
  for (std::size_t i = 0; i < 32; ++i)
    CHECK(std::abs(series.coeffs[i] - (i == 1 ? 1.0 : 0.0)) < 1e-12);
  // Bernoulli(1/2): (1+s)/2
  auto b = extract_pgf_coeffs(Expr::thin(0.5, Expr::degenerate_one_pgf()), 16);
  CHECK(std::abs(b.coeffs[0] - 0.5) < 1e-12);
  CHECK(std::abs(b.coeffs[1] - 0.5) < 1e-12);
  for (std::size_t i = 2; i < 16; ++i) CHECK(std::abs(b.coeffs[i]) < 1e-12);
}

TEST_CASE("Harris(2,1) coefficients are the geometric series") {
  auto series = extract_pgf_coeffs(Expr::harris_pgf(2, 1), 64, 1.0);
  CHECK(std::abs(series.coeffs[0]) < 1e-12);
  for (std::size_t n = 1; n < 40; ++n)
    CHECK(std::abs(series.coeffs[n] - std::pow(2.0, -static_cast<double>(n))) <
          1e-12);
}

TEST_CASE("Harris(2,2) coefficients match the series expansion") {
  // s*2^{-1/2}(1-s^2/2)^{-1/2} = sum C(2n,n) 2^{-3n-1/2} s^{2n+1}
  auto series = extract_pgf_coeffs(Expr::harris_pgf(2, 2), 4096, 1.0);
  CHECK(std::abs(series.coeffs[1] - 0.7071067811865475) < 1e-9);
  CHECK(std::abs(series.coeffs[3] - 0.17677669529663687) < 1e-9);
  CHECK(std::abs(series.coeffs[5] - 0.06629126073623882) < 1e-9);
  for (std::size_t n = 0; n < 64; n += 2) CHECK(std::abs(series.coeffs[n]) < 1e-10);
}

TEST_CASE("doubling N leaves shipped-atom coefficients fixed") {
  auto exprs = {Expr::negbin_pgf(0.5, 1.0), Expr::harris_pgf(2.0, 2),
                Expr::poisson_pgf(1.3)};
  for (const auto& e : exprs) {
    auto small = extract_pgf_coeffs(e, 2048, 1.0);
    auto big = extract_pgf_coeffs(e, 4096, 1.0);
    for (std::size_t i = 0; i < 2048; ++i)
      CHECK(std::abs(small.coeffs[i] - big.coeffs[i]) < 1e-10);
  }
}

TEST_CASE("extraction input validation") {
  CHECK_THROWS_AS(extract_pgf_coeffs(Expr::harris_pgf(2, 1), 100, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(extract_pgf_coeffs(Expr::harris_pgf(2, 1), 64, 1.5),
                  std::invalid_argument);
}

TEST_CASE("PGF validity check") {
  for (const auto& e : {Expr::negbin_pgf(0.5, 1.0), Expr::poisson_pgf(2.0),
                        Expr::geometric_pgf(0.3), Expr::harris_pgf(3.0, 2)})
    CHECK(check_pgf_validity(extract_pgf_coeffs(e, 4096, 1.0)).pass);

  // hid factor of a Bernoulli(1/2) PGF is not a PGF: coeff 2 is -4/27
  auto bernoulli = Expr::thin(0.5, Expr::degenerate_one_pgf());
  auto factor = hid_factor(bernoulli, 0.5, 1);
  auto result = check_pgf_validity(extract_pgf_coeffs(factor, 256, 1.0));
  CHECK_FALSE(result.pass);
  CHECK(result.min_index == 2);
  CHECK(std::abs(result.min_coeff - (-4.0 / 27.0)) < 1e-9);

  // a DSD factor is a genuine PGF (compound Poisson)
  auto dsd = sd_factor(Expr::negbin_pgf(0.5, 1.0), 0.5);
  CHECK(check_pgf_validity(extract_pgf_coeffs(dsd, 4096, 1.0)).pass);
}

TEST_CASE("PSD check") {
  // constant 1 on any grid: eigenvalues {n, 0, ..., 0}
  auto one = check_psd(Expr::constant_one(TransformKind::CF), {0.0, 1.0, 2.0});
  CHECK(one.pass);
  CHECK(std::abs(one.min_eigenvalue) < 1e-12);

  // rectangle 1_{|t|<1} on {0, 0.8, 1.6}: min eigenvalue 1 - sqrt(2)
  auto rect = check_psd(Expr::indicator_cf(1.0), {0.0, 0.8, 1.6});
  CHECK_FALSE(rect.pass);
  CHECK(std::abs(rect.min_eigenvalue - (1.0 - std::sqrt(2.0))) < 1e-9);

  // gamma with shape <= 1 is GID: its hid factor passes on a 32-point grid
  std::vector<double> grid(32);
  for (int i = 0; i < 32; ++i)
    grid[static_cast<std::size_t>(i)] = -8.0 + 16.0 * i / 31.0;
  CHECK(check_psd(hid_factor(Expr::gamma_cf(0.5, 1.0), 0.3, 1), grid).pass);
}

TEST_CASE("identity_residual") {
  auto psi = Expr::gamma_cf(0.5, 1.0);
  CHECK(identity_residual(psi, psi, standard_cf_grid()) == 0.0);
  CHECK(identity_residual(Expr::gamma_cf(1, 1), Expr::gamma_cf(1, 2),
                          standard_cf_grid()) > 0.1);
  CHECK_THROWS_AS(identity_residual(psi, Expr::poisson_pgf(1.0),
                                    standard_cf_grid()),
                  std::invalid_argument);
}

TEST_CASE("empirical comparison basics") {
  std::vector<double> zeros(20000, 0.0);
  auto entry = compare_empirical_cf(zeros, Expr::constant_one(TransformKind::CF),
                                    {0.5, 1.0}, "zeros");
  CHECK(entry.pass);
  CHECK(entry.statistic == 0.0);

  RngStream rng(2, 0);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = sample_gamma(1.0, 1.0, rng);
  CHECK(compare_empirical_cf(xs, Expr::gamma_cf(1.0, 1.0),
                             standard_cf_points(), "match")
            .pass);
  CHECK_FALSE(compare_empirical_cf(xs, Expr::gamma_cf(1.0, 2.0), {1.0},
                                   "mismatch")
                  .pass);
  CHECK_THROWS_AS(compare_empirical_cf({}, Expr::gamma_cf(1, 1), {1.0}, "x"),
                  std::invalid_argument);
}

TEST_CASE("fast suites pass and report shape is sane") {
  for (const char* name : {"algebra", "factorization", "negative-controls"}) {
    VerificationReport report = run_suite(name, 123);
    CHECK(report.pass);
    CHECK(!report.entries.empty());
    for (std::size_t i = 1; i < report.entries.size(); ++i)
      CHECK(report.entries[i - 1].name <= report.entries[i].name);  // sorted
    nlohmann::json j = report.to_json();
    CHECK(j["suite"] == name);
    CHECK(j["pass"] == true);
    CHECK(j["entries"].size() == report.entries.size());
  }
  CHECK_THROWS_AS(run_suite("bogus", 1), std::invalid_argument);
}

TEST_CASE("sampler suite passes at reduced size") {
  SuiteOptions options;
  options.mc_samples = 100000;
  VerificationReport report = run_suite("samplers", 2024, options);
  for (const auto& e : report.entries) {
    INFO(e.name, " statistic=", e.statistic, " tol=", e.tolerance);
    CHECK(e.pass);
  }
}

TEST_CASE("stationarity suite passes at reduced size") {
  SuiteOptions options;
  options.replicates = 4000;
  VerificationReport report = run_suite("stationarity", 2025, options);
  for (const auto& e : report.entries) {
    INFO(e.name, " statistic=", e.statistic, " tol=", e.tolerance);
    CHECK(e.pass);
  }
}
