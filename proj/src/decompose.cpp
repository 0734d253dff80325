#include "hrsd/decompose.hpp"

#include <cmath>
#include <stdexcept>

namespace hrsd {

double FactorizationParams::a() const {
  if (p <= 0.0)
    throw std::invalid_argument("FactorizationParams: a = 1/p needs p > 0");
  return 1.0 / p;
}

void FactorizationParams::validate() const {
  if (!(c > 0.0 && c <= 1.0))
    throw std::invalid_argument("FactorizationParams: c must be in (0,1]");
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("FactorizationParams: p must be in [0,1)");
  if (k < 1)
    throw std::invalid_argument("FactorizationParams: k must be >= 1");
}

namespace {

ExprPtr scaled(const ExprPtr& e, double c) {
  return e->kind() == TransformKind::CF ? Expr::scale_arg(c, e)
                                        : Expr::thin(c, e);
}

}  // namespace

ExprPtr sd_factor(const ExprPtr& psi, double c) {
  if (!psi) throw std::invalid_argument("sd_factor: null expression");
  return Expr::ratio(psi, scaled(psi, c));
}

ExprPtr hid_factor(const ExprPtr& psi, double p, int k) {
  if (!psi) throw std::invalid_argument("hid_factor: null expression");
  return Expr::ratio(psi, Expr::blend(1.0, p, k, psi));
}

ExprPtr hrsd_innovation(const ExprPtr& psi, const FactorizationParams& params) {
  if (!psi) throw std::invalid_argument("hrsd_innovation: null expression");
  params.validate();
  return Expr::product(
      {sd_factor(psi, params.c),
       scaled(hid_factor(psi, params.p, params.k), params.c)});
}

double harris_stable_scale(double c, double alpha) {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("harris_stable_scale: c must be in (0,1)");
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("harris_stable_scale: alpha must be in (0,2]");
  return std::pow(c, -alpha);
}

ExprPtr linnik_cf(double alpha, int k) {
  return Expr::hid_from_id(k, Expr::stable_sym_cf(alpha));
}

}  // namespace hrsd
