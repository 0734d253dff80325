#ifndef HRSD_EXPR_HPP
#define HRSD_EXPR_HPP

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hrsd {

using Complex = std::complex<double>;

/// Thrown when a path evaluation cannot be completed (log singularity,
/// phase winding faster than the refinement limit allows).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TransformKind { CF, PGF };

enum class NodeKind {
  ConstantOne,
  // CF atoms
  GammaCF,        // (1 - i*scale*t)^(-shape)
  StableSymCF,    // exp(-|t|^alpha)
  IndicatorCF,    // 1 if |t| < half_width else 0 (negative-control atom)
  // PGF atoms
  NegBinPGF,      // (1 + scale*(1-s))^(-shape)
  PoissonPGF,     // exp(mean*(s-1))
  GeometricPGF,   // q*s / (1 - (1-q)*s), support {1,2,...}
  HarrisPGF,      // s / (a - (a-1)*s^k)^(1/k)
  DegenerateOnePGF,  // s  (unit mass at 1)
  // combinators
  ScaleArg,       // CF: child(c*t)
  Thin,           // PGF: child(1-c+c*s)
  Power,          // child^r, branch-tracked for fractional r
  Product,
  Ratio,
  HarrisCompose,  // child / (a - (a-1)*child^k)^(1/k)
  Blend,          // {p + (1-p)*child(scaled arg)^k}^(1/k)
  HidFromId,      // (1 - log child)^(-1/k)
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable transform-expression node. Trees are shared freely; evaluation
/// never mutates a node, so concurrent readers are safe.
class Expr {
 public:
  // CF atoms
  static ExprPtr gamma_cf(double shape, double scale);
  static ExprPtr stable_sym_cf(double alpha);
  static ExprPtr indicator_cf(double half_width);
  // PGF atoms
  static ExprPtr negbin_pgf(double shape, double scale);
  static ExprPtr poisson_pgf(double mean);
  static ExprPtr geometric_pgf(double q);
  static ExprPtr harris_pgf(double a, int k);
  static ExprPtr degenerate_one_pgf();
  static ExprPtr constant_one(TransformKind kind);
  // combinators
  static ExprPtr scale_arg(double c, ExprPtr child);
  static ExprPtr thin(double c, ExprPtr child);
  static ExprPtr power(double r, ExprPtr child);
  static ExprPtr product(std::vector<ExprPtr> children);
  static ExprPtr ratio(ExprPtr num, ExprPtr den);
  static ExprPtr harris_compose(double a, int k, ExprPtr child);
  static ExprPtr blend(double c, double p, int k, ExprPtr child);
  static ExprPtr hid_from_id(int k, ExprPtr seed);

  NodeKind node_kind() const { return node_kind_; }
  TransformKind kind() const { return kind_; }
  const std::vector<ExprPtr>& children() const { return children_; }

  double p0() const { return p0_; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }
  int k() const { return k_; }

  nlohmann::json to_json() const;
  static ExprPtr from_json(const nlohmann::json& j);
  static ExprPtr from_json_string(const std::string& text);
  std::string to_json_string() const;

 protected:
  Expr(NodeKind nk, TransformKind tk) : node_kind_(nk), kind_(tk) {}

  NodeKind node_kind_;
  TransformKind kind_;
  std::vector<ExprPtr> children_;
  double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0;
  int k_ = 1;
};

/// Ordered abscissae for path-based evaluation. CF grids live on the real
/// line and must contain 0; PGF grids live in [0,1] and must contain 1.
struct EvalGrid {
  std::vector<double> points;
  int refinement_limit = 40;

  static EvalGrid linspace(double lo, double hi, std::size_t n,
                           int refinement_limit = 40);
  void validate(TransformKind kind) const;
};

/// Branch-continuous evaluation of a CF tree along a real grid containing 0.
/// The value at t=0 is exactly 1 and fractional powers/logs are continued
/// from there by phase unwrapping, bisecting any segment whose phase jump
/// exceeds pi/2 (up to grid.refinement_limit doublings).
std::vector<Complex> cf_eval(const ExprPtr& expr, const EvalGrid& grid);

/// Evaluation of a PGF tree at points of the closed unit disk. Each point is
/// reached along the straight path from the anchor s=1, with the same
/// unwrapping rule as cf_eval.
std::vector<Complex> pgf_eval(const ExprPtr& expr,
                              const std::vector<Complex>& points,
                              int refinement_limit = 40);

/// Single-point conveniences (pay for a path from the anchor internally).
Complex cf_eval_at(const ExprPtr& expr, double t, int refinement_limit = 40);
Complex pgf_eval_at(const ExprPtr& expr, Complex s, int refinement_limit = 40);

/// Incremental path evaluator: feed a contiguous path of arguments starting
/// at the anchor, get branch-continuous values. Used for circle walks in
/// coefficient extraction.
class PathEvaluator {
 public:
  PathEvaluator(ExprPtr expr, int refinement_limit = 40);
  ~PathEvaluator();
  PathEvaluator(PathEvaluator&&) noexcept;
  PathEvaluator& operator=(PathEvaluator&&) noexcept;

  /// First call must be the anchor (0 for CF, 1 for PGF).
  Complex start(Complex anchor);
  Complex advance(Complex arg);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// P(1-c+cs): binomial-thinning substitution, c in (0,1].
ExprPtr thin_substitute(const ExprPtr& expr, double c);

/// {p + (1-p)*expr(c*arg)^k}^(1/k) with the argument scaled (CF) or
/// thinned (PGF) by c.
ExprPtr blend(const ExprPtr& expr, double c, double p, int k);

/// expr / (a - (a-1)*expr^k)^(1/k): PGF/CF of a Harris(a,k) random sum of
/// iid summands with transform expr.
ExprPtr harris_compose(const ExprPtr& inner, double a, int k);

/// (1 - log seed)^(-1/k), log continued from the anchor value 1.
ExprPtr hid_from_id(const ExprPtr& seed, int k);

}  // namespace hrsd

#endif  // HRSD_EXPR_HPP
