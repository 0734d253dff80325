#ifndef HRSD_COEFFS_HPP
#define HRSD_COEFFS_HPP

#include <cstddef>
#include <vector>

namespace hrsd {

/// Probability-mass coefficients of a PGF on {0,1,...,size-1}, extracted by
/// inverse DFT on a circle of the given radius.
struct CoefficientSeries {
  std::vector<double> coeffs;
  std::size_t size = 0;            // power of two
  double radius = 1.0;             // (0,1]
  double negativity_tol = 1e-9;
};

}  // namespace hrsd

#endif  // HRSD_COEFFS_HPP
