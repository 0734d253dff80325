#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <nlohmann/json.hpp>

#include "hrsd/decompose.hpp"
#include "hrsd/expr.hpp"

using namespace hrsd;

namespace {

double cdist(Complex a, Complex b) { return std::abs(a - b); }

}  // namespace

TEST_CASE("gamma CF frozen value") {
  // 1/(1-i) = 0.5 + 0.5i
  CHECK(cdist(cf_eval_at(Expr::gamma_cf(1, 1), 1.0), Complex(0.5, 0.5)) < 1e-15);
}

TEST_CASE("CF normalization at t=0 is exact") {
  auto exprs = {
      Expr::gamma_cf(0.5, 2.0),
      Expr::stable_sym_cf(1.3),
      linnik_cf(0.7, 2),
      hrsd_innovation(Expr::gamma_cf(0.5, 1.0), {0.4, 0.3, 2}),
  };
  for (const auto& e : exprs) CHECK(cf_eval_at(e, 0.0) == Complex(1.0, 0.0));
}

TEST_CASE("PGF normalization at s=1 is exact") {
  auto exprs = {
      Expr::negbin_pgf(0.5, 1.0),
      Expr::harris_pgf(2.0, 2),
      Expr::poisson_pgf(1.0),
      hrsd_innovation(Expr::negbin_pgf(1.0 / 3.0, 1.0), {0.4, 0.3, 3}),
  };
  for (const auto& e : exprs)
    CHECK(pgf_eval_at(e, Complex(1.0, 0.0)) == Complex(1.0, 0.0));
}

TEST_CASE("Harris PGF frozen values") {
  CHECK(std::abs(pgf_eval_at(Expr::harris_pgf(3, 2), 0.5).real() -
                 0.5 / std::sqrt(2.5)) < 1e-15);
  // k=1 reduces to geometric: s/(2-s) at s=0.5 is 1/3
  CHECK(std::abs(pgf_eval_at(Expr::harris_pgf(2, 1), 0.5).real() - 1.0 / 3.0) <
        1e-15);
}

TEST_CASE("hid_from_id of a stable seed is the generalized Linnik CF") {
  // (1+|t|^2)^{-1} at t=1 is 0.5
  CHECK(cdist(cf_eval_at(hid_from_id(Expr::stable_sym_cf(2.0), 1), 1.0),
              Complex(0.5, 0.0)) < 1e-15);
  // pointwise against the closed form for a few (alpha, k)
  EvalGrid grid = EvalGrid::linspace(-8.0, 8.0, 81);
  for (double alpha : {0.5, 1.0, 1.7}) {
    for (int k : {1, 3}) {
      auto vals = cf_eval(linnik_cf(alpha, k), grid);
      for (std::size_t i = 0; i < grid.points.size(); ++i) {
        double t = grid.points[i];
        double want = std::pow(1.0 + std::pow(std::abs(t), alpha), -1.0 / k);
        CHECK(cdist(vals[i], Complex(want, 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("hid_from_id of a Poisson seed reproduces the negative binomial") {
  // (1 + l(1-s))^{-1/k}
  for (int k : {1, 2, 4}) {
    auto lhs = hid_from_id(Expr::poisson_pgf(1.5), k);
    auto rhs = Expr::negbin_pgf(1.0 / k, 1.5);
    EvalGrid grid = EvalGrid::linspace(0.0, 1.0, 51);
    for (double s : grid.points)
      CHECK(cdist(pgf_eval_at(lhs, s), pgf_eval_at(rhs, s)) < 1e-12);
  }
}

TEST_CASE("hid_from_id of the constant seed is constant") {
  auto e = hid_from_id(Expr::constant_one(TransformKind::CF), 3);
  for (double t : {0.0, 1.0, 5.0})
    CHECK(cdist(cf_eval_at(e, t), Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("harris_compose frozen values") {
  // inner value 0.5 with a=2, k=1 gives 0.5/(2-0.5) = 1/3
  auto inner = Expr::degenerate_one_pgf();  // P(s) = s, value 0.5 at s=0.5
  auto composed = harris_compose(inner, 2.0, 1);
  CHECK(std::abs(pgf_eval_at(composed, 0.5).real() - 1.0 / 3.0) < 1e-15);
  // degenerate summand: inner identically 1
  auto one = harris_compose(Expr::constant_one(TransformKind::PGF), 3.0, 2);
  CHECK(cdist(pgf_eval_at(one, Complex(0.3, 0.1)), Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("blend frozen value and limits") {
  auto g = Expr::gamma_cf(1, 1);
  CHECK(cdist(cf_eval_at(Expr::blend(1.0, 0.5, 1, g), 1.0),
              Complex(0.75, 0.25)) < 1e-15);
  // p=0 reduces to the scaled argument
  auto b = Expr::blend(0.4, 0.0, 1, g);
  auto s = Expr::scale_arg(0.4, g);
  for (double t : {0.0, 0.7, 3.0})
    CHECK(cdist(cf_eval_at(b, t), cf_eval_at(s, t)) < 1e-15);
}

TEST_CASE("thin substitution") {
  auto nb = Expr::negbin_pgf(0.5, 1.0);
  // c = 1 is the identity
  auto id = thin_substitute(nb, 1.0);
  for (double s : {0.0, 0.3, 1.0})
    CHECK(cdist(pgf_eval_at(id, s), pgf_eval_at(nb, s)) < 1e-15);
  // value 1 at s = 1 for any c
  CHECK(pgf_eval_at(thin_substitute(nb, 0.2), Complex(1, 0)) ==
        Complex(1.0, 0.0));
  // NB(1/k, l) thins to NB(1/k, cl)
  auto thinned = thin_substitute(nb, 0.3);
  auto closed = Expr::negbin_pgf(0.5, 0.3);
  for (double s : {0.0, 0.5, 0.9})
    CHECK(cdist(pgf_eval_at(thinned, s), pgf_eval_at(closed, s)) < 1e-15);
}

TEST_CASE("Hermitian symmetry of CF evaluation") {
  EvalGrid grid = EvalGrid::linspace(-6.0, 6.0, 121);
  auto exprs = {
      Expr::gamma_cf(1.0 / 3.0, 2.0),
      Expr::stable_sym_cf(0.8),
      linnik_cf(1.2, 2),
      hrsd_innovation(Expr::gamma_cf(0.5, 1.0), {0.3, 0.4, 2}),
  };
  for (const auto& e : exprs) {
    auto vals = cf_eval(e, grid);
    for (std::size_t i = 0; i < vals.size(); ++i)
      CHECK(cdist(vals[i], std::conj(vals[vals.size() - 1 - i])) < 1e-12);
  }
}

TEST_CASE("branch continuity: fractional power of a winding base") {
  // (1-5it)^{-3} raised to 1/3 must reproduce (1-5it)^{-1}; the base winds
  // through more than a half-turn on [0,10], so unwrapping is exercised.
  auto wound = Expr::power(1.0 / 3.0, Expr::gamma_cf(3.0, 5.0));
  auto flat = Expr::gamma_cf(1.0, 5.0);
  EvalGrid grid = EvalGrid::linspace(-10.0, 10.0, 41);
  auto got = cf_eval(wound, grid);
  auto want = cf_eval(flat, grid);
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(cdist(got[i], want[i]) < 1e-12);
}

TEST_CASE("refinement limit exceeded is reported") {
  auto wound = Expr::power(1.0 / 3.0, Expr::gamma_cf(3.0, 5.0));
  EvalGrid grid{{0.0, 10.0}, 1};
  CHECK_THROWS_AS(cf_eval(wound, grid), EvalError);
}

TEST_CASE("grid refinement does not change values") {
  auto e = hrsd_innovation(Expr::gamma_cf(0.5, 1.0), {0.3, 0.2, 2});
  EvalGrid coarse = EvalGrid::linspace(-10.0, 10.0, 101);
  EvalGrid fine = EvalGrid::linspace(-10.0, 10.0, 201);
  auto vc = cf_eval(e, coarse);
  auto vf = cf_eval(e, fine);
  for (std::size_t i = 0; i < vc.size(); ++i)
    CHECK(cdist(vc[i], vf[2 * i]) < 1e-9);
}

TEST_CASE("grid validation") {
  auto g = Expr::gamma_cf(1, 1);
  CHECK_THROWS_AS(cf_eval(g, EvalGrid{{1.0, 2.0}, 40}), std::invalid_argument);
  CHECK_THROWS_AS(cf_eval(g, EvalGrid{{0.0, 0.0, 1.0}, 40}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pgf_eval(Expr::poisson_pgf(1.0), {Complex(2.0, 0.0)}),
                  std::invalid_argument);
}

TEST_CASE("parameter domains are enforced") {
  CHECK_THROWS_AS(Expr::gamma_cf(-1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Expr::stable_sym_cf(2.5), std::invalid_argument);
  CHECK_THROWS_AS(Expr::harris_pgf(1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(Expr::harris_pgf(2.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Expr::blend(0.0, 0.5, 1, Expr::gamma_cf(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Expr::blend(0.5, 1.0, 1, Expr::gamma_cf(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Expr::scale_arg(0.5, Expr::poisson_pgf(1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Expr::thin(0.5, Expr::gamma_cf(1, 1)), std::invalid_argument);
}

TEST_CASE("JSON round trip preserves evaluations") {
  auto exprs = {
      hrsd_innovation(Expr::gamma_cf(0.5, 1.5), {0.4, 0.2, 2}),
      harris_compose(Expr::scale_arg(0.5, linnik_cf(1.0, 2)), 2.0, 2),
  };
  for (const auto& e : exprs) {
    auto back = Expr::from_json_string(e->to_json_string());
    for (double t : {0.0, 0.5, 2.0, 7.0})
      CHECK(cdist(cf_eval_at(e, t), cf_eval_at(back, t)) == 0.0);
  }
  auto p = hrsd_innovation(Expr::negbin_pgf(0.5, 1.0), {0.6, 0.3, 2});
  auto back = Expr::from_json_string(p->to_json_string());
  for (double s : {0.0, 0.4, 1.0})
    CHECK(cdist(pgf_eval_at(p, s), pgf_eval_at(back, s)) == 0.0);
}

TEST_CASE("JSON rejects malformed trees") {
  CHECK_THROWS(Expr::from_json_string(R"({"kind":"nope"})"));
  CHECK_THROWS(Expr::from_json_string(
      R"({"kind":"ratio","params":{},"children":[]})"));
}
