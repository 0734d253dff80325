#ifndef HRSD_DECOMPOSE_HPP
#define HRSD_DECOMPOSE_HPP

#include "hrsd/expr.hpp"

namespace hrsd {

/// Parameters of one factorization psi(t) = psi_{c,p}(t) {p+(1-p)psi^k(ct)}^{1/k}.
struct FactorizationParams {
  double c = 1.0;   // (0,1]
  double p = 0.0;   // [0,1)
  int k = 1;        // >= 1

  /// Harris index a = 1/p, defined for p > 0.
  double a() const;
  void validate() const;
};

/// SD factor psi(t)/psi(ct) (discrete: P(s)/P(1-c+cs)).
ExprPtr sd_factor(const ExprPtr& psi, double c);

/// HID factor psi(t)/{p+(1-p)psi^k(t)}^{1/k}.
ExprPtr hid_factor(const ExprPtr& psi, double p, int k);

/// Innovation psi_{c,p}(t) = psi_c(t) * psi_p(ct)
/// (discrete: P_c(s) * P_p(1-c+cs)).
ExprPtr hrsd_innovation(const ExprPtr& psi, const FactorizationParams& params);

/// The Harris index a = c^{-alpha} making the generalized-Linnik CF
/// (1+|t|^alpha)^{-1/k} a Harris sum of its own c-scaled copy.
double harris_stable_scale(double c, double alpha);

/// Generalized-Linnik CF (1+|t|^alpha)^{-1/k}, built from a stable seed.
ExprPtr linnik_cf(double alpha, int k);

}  // namespace hrsd

#endif  // HRSD_DECOMPOSE_HPP
