#ifndef HRSD_VERIFY_HPP
#define HRSD_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hrsd/coeffs.hpp"
#include "hrsd/expr.hpp"

namespace hrsd {

// Coefficient extraction ------------------------------------------------------

/// PGF mass coefficients by inverse DFT over n (power of two) points on the
/// circle of the given radius, walked branch-continuously from the anchor.
/// Aliasing error is the tail mass beyond index n at that radius.
CoefficientSeries extract_pgf_coeffs(const ExprPtr& expr, std::size_t n,
                                     double radius = 1.0);

struct ValidityResult {
  bool pass = false;
  double min_coeff = 0.0;
  std::size_t min_index = 0;
  double mass = 0.0;
};

/// Valid PGF iff every coefficient >= -1e-9 and the total mass is within
/// 1e-8 of the transform value at s=1. Series must be extracted at radius 1.
ValidityResult check_pgf_validity(const CoefficientSeries& series);

// Positive semidefiniteness ----------------------------------------------------

struct PsdResult {
  bool pass = false;
  double min_eigenvalue = 0.0;
};

/// Bochner spot check: Gram matrix M[i][j] = psi(t_i - t_j), Hermitian by
/// construction; passes iff the smallest eigenvalue >= -1e-8 * n.
PsdResult check_psd(const ExprPtr& expr, const std::vector<double>& t_grid);

// Identity residuals ------------------------------------------------------------

/// Max |lhs - rhs| over the grid, branch-tracked evaluation on both sides.
/// The grid is a CF grid (contains 0) or a PGF grid in [0,1] (contains 1)
/// according to the expressions' kind.
double identity_residual(const ExprPtr& lhs, const ExprPtr& rhs,
                         const EvalGrid& grid);

/// Grid evaluation dispatching on kind (cf_eval, or a real-axis PGF walk).
std::vector<Complex> eval_on_grid(const ExprPtr& expr, const EvalGrid& grid);

// Empirical comparisons ----------------------------------------------------------

struct CheckEntry {
  std::string name;
  std::string ref;
  double statistic = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Empirical CF (1/n) sum exp(i t X_j) against the tree, pass iff every
/// pointwise deviation < 4/sqrt(n).
CheckEntry compare_empirical_cf(const std::vector<double>& samples,
                                const ExprPtr& expr,
                                const std::vector<double>& t_grid,
                                const std::string& name);

/// Empirical PGF (1/n) sum s^{X_j} at real s in [0,1], same band.
CheckEntry compare_empirical_pgf(const std::vector<double>& samples,
                                 const ExprPtr& expr,
                                 const std::vector<double>& s_grid,
                                 const std::string& name);

// Reports and suites -------------------------------------------------------------

struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckEntry> entries;
  bool pass = false;

  void add(CheckEntry entry);
  void finalize();  // sorts entries by name, recomputes the overall flag
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  std::size_t mc_samples = 1'000'000;  // per-sampler draws
  long replicates = 100'000;           // stationarity snapshots
};

/// Named batteries: algebra, factorization, samplers, stationarity,
/// negative-controls. Deterministic given the seed.
VerificationReport run_suite(const std::string& name, std::uint64_t seed,
                             const SuiteOptions& options = {});

std::vector<std::string> suite_names();

/// Standard verification grids.
std::vector<double> standard_cf_points();   // sparse, for empirical CFs
std::vector<double> standard_pgf_points();  // {0, 0.25, 0.5, 0.75, 1}
EvalGrid standard_cf_grid();                // 201 points on [-10,10]
EvalGrid standard_pgf_grid();               // 101 points on [0,1]

}  // namespace hrsd

#endif  // HRSD_VERIFY_HPP
