#include "hrsd/expr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <nlohmann/json.hpp>

namespace hrsd {

namespace {

constexpr double kMaxPhaseStep = std::numbers::pi / 2.0;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool is_integer(double r) { return r == std::floor(r) && std::abs(r) < 1e15; }

Complex pow_int(Complex z, int n) {
  if (n < 0) return 1.0 / pow_int(z, -n);
  Complex r = 1.0;
  while (n) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

// Principal power, safe only when the base stays off the negative real axis.
Complex pow_principal(Complex z, double r) { return std::pow(z, r); }

TransformKind child_kind(const std::vector<ExprPtr>& children) {
  TransformKind k = children.front()->kind();
  for (const auto& c : children)
    require(c->kind() == k, "mixed CF/PGF children in one expression");
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

struct ExprAccess : Expr {
  static std::shared_ptr<Expr> make(NodeKind nk, TransformKind tk) {
    return std::shared_ptr<Expr>(new ExprAccess(nk, tk));
  }
  ExprAccess(NodeKind nk, TransformKind tk) : Expr(nk, tk) {}
  using Expr::children_;
  using Expr::k_;
  using Expr::p0_;
  using Expr::p1_;
  using Expr::p2_;
};

static std::shared_ptr<ExprAccess> make_node(NodeKind nk, TransformKind tk) {
  return std::static_pointer_cast<ExprAccess>(ExprAccess::make(nk, tk));
}

ExprPtr Expr::gamma_cf(double shape, double scale) {
  require(shape > 0 && scale > 0, "gamma_cf: shape and scale must be > 0");
  auto e = make_node(NodeKind::GammaCF, TransformKind::CF);
  e->p0_ = shape;
  e->p1_ = scale;
  return e;
}

ExprPtr Expr::stable_sym_cf(double alpha) {
  require(alpha > 0 && alpha <= 2, "stable_sym_cf: alpha must be in (0,2]");
  auto e = make_node(NodeKind::StableSymCF, TransformKind::CF);
  e->p0_ = alpha;
  return e;
}

ExprPtr Expr::indicator_cf(double half_width) {
  require(half_width > 0, "indicator_cf: half_width must be > 0");
  auto e = make_node(NodeKind::IndicatorCF, TransformKind::CF);
  e->p0_ = half_width;
  return e;
}

ExprPtr Expr::negbin_pgf(double shape, double scale) {
  require(shape > 0 && scale > 0, "negbin_pgf: shape and scale must be > 0");
  auto e = make_node(NodeKind::NegBinPGF, TransformKind::PGF);
  e->p0_ = shape;
  e->p1_ = scale;
  return e;
}

ExprPtr Expr::poisson_pgf(double mean) {
  require(mean > 0, "poisson_pgf: mean must be > 0");
  auto e = make_node(NodeKind::PoissonPGF, TransformKind::PGF);
  e->p0_ = mean;
  return e;
}

ExprPtr Expr::geometric_pgf(double q) {
  require(q > 0 && q < 1, "geometric_pgf: q must be in (0,1)");
  auto e = make_node(NodeKind::GeometricPGF, TransformKind::PGF);
  e->p0_ = q;
  return e;
}

ExprPtr Expr::harris_pgf(double a, int k) {
  require(a > 1, "harris_pgf: a must be > 1");
  require(k >= 1, "harris_pgf: k must be >= 1");
  auto e = make_node(NodeKind::HarrisPGF, TransformKind::PGF);
  e->p0_ = a;
  e->k_ = k;
  return e;
}

ExprPtr Expr::degenerate_one_pgf() {
  return make_node(NodeKind::DegenerateOnePGF, TransformKind::PGF);
}

ExprPtr Expr::constant_one(TransformKind kind) {
  return make_node(NodeKind::ConstantOne, kind);
}

ExprPtr Expr::scale_arg(double c, ExprPtr child) {
  require(c > 0 && c <= 1, "scale_arg: c must be in (0,1]");
  require(child != nullptr, "scale_arg: null child");
  require(child->kind() == TransformKind::CF, "scale_arg applies to CF trees");
  auto e = make_node(NodeKind::ScaleArg, TransformKind::CF);
  e->p0_ = c;
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr Expr::thin(double c, ExprPtr child) {
  require(c > 0 && c <= 1, "thin: c must be in (0,1]");
  require(child != nullptr, "thin: null child");
  require(child->kind() == TransformKind::PGF, "thin applies to PGF trees");
  auto e = make_node(NodeKind::Thin, TransformKind::PGF);
  e->p0_ = c;
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr Expr::power(double r, ExprPtr child) {
  require(std::isfinite(r), "power: exponent must be finite");
  require(child != nullptr, "power: null child");
  auto e = make_node(NodeKind::Power, child->kind());
  e->p0_ = r;
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr Expr::product(std::vector<ExprPtr> children) {
  require(!children.empty(), "product: needs at least one factor");
  for (const auto& c : children) require(c != nullptr, "product: null child");
  auto e = make_node(NodeKind::Product, child_kind(children));
  e->children_ = std::move(children);
  return e;
}

ExprPtr Expr::ratio(ExprPtr num, ExprPtr den) {
  require(num != nullptr && den != nullptr, "ratio: null child");
  require(num->kind() == den->kind(), "ratio: mixed CF/PGF children");
  auto e = make_node(NodeKind::Ratio, num->kind());
  e->children_ = {std::move(num), std::move(den)};
  return e;
}

ExprPtr Expr::harris_compose(double a, int k, ExprPtr child) {
  require(a > 1, "harris_compose: a must be > 1");
  require(k >= 1, "harris_compose: k must be >= 1");
  require(child != nullptr, "harris_compose: null child");
  auto e = make_node(NodeKind::HarrisCompose, child->kind());
  e->p0_ = a;
  e->k_ = k;
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr Expr::blend(double c, double p, int k, ExprPtr child) {
  require(c > 0 && c <= 1, "blend: c must be in (0,1]");
  require(p >= 0 && p < 1, "blend: p must be in [0,1)");
  require(k >= 1, "blend: k must be >= 1");
  require(child != nullptr, "blend: null child");
  auto e = make_node(NodeKind::Blend, child->kind());
  e->p0_ = c;
  e->p1_ = p;
  e->k_ = k;
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr Expr::hid_from_id(int k, ExprPtr seed) {
  require(k >= 1, "hid_from_id: k must be >= 1");
  require(seed != nullptr, "hid_from_id: null seed");
  auto e = make_node(NodeKind::HidFromId, seed->kind());
  e->k_ = k;
  e->children_ = {std::move(seed)};
  return e;
}

ExprPtr thin_substitute(const ExprPtr& expr, double c) {
  return Expr::thin(c, expr);
}

ExprPtr blend(const ExprPtr& expr, double c, double p, int k) {
  return Expr::blend(c, p, k, expr);
}

ExprPtr harris_compose(const ExprPtr& inner, double a, int k) {
  return Expr::harris_compose(a, k, inner);
}

ExprPtr hid_from_id(const ExprPtr& seed, int k) {
  return Expr::hid_from_id(k, seed);
}

// ---------------------------------------------------------------------------
// Path evaluation

namespace {

// One unwrapped-phase record per branch-sensitive tree position. Evaluation
// visits tree positions in a fixed recursion order, so slots are addressed by
// a running cursor rather than by node pointer (the same subtree pointer may
// be shared at several positions).
struct Slot {
  Complex value{1.0, 0.0};
  double phase = 0.0;
};

struct EvalCtx {
  const std::vector<Slot>* prev = nullptr;  // null on the anchor step
  std::vector<Slot>* next = nullptr;
  std::size_t cursor = 0;
  double max_jump = 0.0;
};

// Unwrapped complex log continued from the previous path point.
Complex tracked_log(Complex v, EvalCtx& ctx) {
  const std::size_t i = ctx.cursor++;
  double mag = std::abs(v);
  if (mag == 0.0) throw EvalError("log singularity: base vanished on the path");
  double phase;
  if (ctx.prev == nullptr) {
    phase = std::arg(v);
  } else {
    const Slot& prev = (*ctx.prev)[i];
    double delta = std::arg(v / prev.value);
    phase = prev.phase + delta;
    ctx.max_jump = std::max(ctx.max_jump, std::abs(delta));
  }
  if (ctx.next->size() <= i) ctx.next->resize(i + 1);
  (*ctx.next)[i] = Slot{v, phase};
  return {std::log(mag), phase};
}

Complex eval_node(const Expr& e, Complex arg, EvalCtx& ctx) {
  switch (e.node_kind()) {
    case NodeKind::ConstantOne:
      return 1.0;
    case NodeKind::GammaCF: {
      // base 1 - i*scale*t has positive real part for real t: principal log.
      Complex base = 1.0 - Complex(0.0, 1.0) * e.p1() * arg;
      return pow_principal(base, -e.p0());
    }
    case NodeKind::StableSymCF: {
      double t = arg.real();
      if (t == 0.0) return 1.0;
      return std::exp(-std::pow(std::abs(t), e.p0()));
    }
    case NodeKind::IndicatorCF:
      return std::abs(arg.real()) < e.p0() ? 1.0 : 0.0;
    case NodeKind::NegBinPGF: {
      // Re(1 + scale*(1-s)) >= 1 on the closed unit disk: principal log.
      Complex base = 1.0 + e.p1() * (1.0 - arg);
      return pow_principal(base, -e.p0());
    }
    case NodeKind::PoissonPGF:
      return std::exp(e.p0() * (arg - 1.0));
    case NodeKind::GeometricPGF: {
      Complex den = 1.0 - (1.0 - e.p0()) * arg;
      if (den == 0.0) throw EvalError("geometric PGF pole on the path");
      return e.p0() * arg / den;
    }
    case NodeKind::HarrisPGF: {
      // Re(a - (a-1)*s^k) >= 1 on the closed unit disk: principal log.
      Complex base = e.p0() - (e.p0() - 1.0) * pow_int(arg, e.k());
      return arg * pow_principal(base, -1.0 / e.k());
    }
    case NodeKind::DegenerateOnePGF:
      return arg;
    case NodeKind::ScaleArg:
      return eval_node(*e.children()[0], e.p0() * arg, ctx);
    case NodeKind::Thin:
      return eval_node(*e.children()[0], 1.0 - e.p0() + e.p0() * arg, ctx);
    case NodeKind::Power: {
      Complex v = eval_node(*e.children()[0], arg, ctx);
      if (is_integer(e.p0())) return pow_int(v, static_cast<int>(e.p0()));
      return std::exp(e.p0() * tracked_log(v, ctx));
    }
    case NodeKind::Product: {
      Complex r = 1.0;
      for (const auto& c : e.children()) r *= eval_node(*c, arg, ctx);
      return r;
    }
    case NodeKind::Ratio: {
      Complex num = eval_node(*e.children()[0], arg, ctx);
      Complex den = eval_node(*e.children()[1], arg, ctx);
      if (den == 0.0) throw EvalError("ratio denominator vanished on the path");
      return num / den;
    }
    case NodeKind::HarrisCompose: {
      Complex phi = eval_node(*e.children()[0], arg, ctx);
      Complex base = e.p0() - (e.p0() - 1.0) * pow_int(phi, e.k());
      if (e.k() == 1) {
        if (base == 0.0) throw EvalError("harris_compose base vanished");
        return phi / base;
      }
      return phi * std::exp((-1.0 / e.k()) * tracked_log(base, ctx));
    }
    case NodeKind::Blend: {
      Complex inner_arg = e.kind() == TransformKind::CF
                              ? e.p0() * arg
                              : 1.0 - e.p0() + e.p0() * arg;
      Complex phi = eval_node(*e.children()[0], inner_arg, ctx);
      Complex base = e.p1() + (1.0 - e.p1()) * pow_int(phi, e.k());
      if (e.k() == 1) return base;
      return std::exp((1.0 / e.k()) * tracked_log(base, ctx));
    }
    case NodeKind::HidFromId: {
      Complex h = eval_node(*e.children()[0], arg, ctx);
      Complex lh = tracked_log(h, ctx);
      // Re(1 - log h) >= 1 - log|h|, positive whenever |h| stays below e.
      Complex base = 1.0 - lh;
      return pow_principal(base, -1.0 / e.k());
    }
  }
  throw std::logic_error("unhandled node kind");
}

}  // namespace

struct PathEvaluator::Impl {
  ExprPtr expr;
  int refinement_limit;
  std::vector<Slot> state;
  Complex last_arg{0.0, 0.0};
  bool started = false;

  Complex eval_at(Complex arg, const std::vector<Slot>* prev,
                  std::vector<Slot>& next, double& max_jump) {
    EvalCtx ctx;
    ctx.prev = prev;
    ctx.next = &next;
    Complex v = eval_node(*expr, arg, ctx);
    max_jump = ctx.max_jump;
    return v;
  }

  Complex advance_segment(Complex from, Complex to, int depth) {
    std::vector<Slot> next;
    double jump = 0.0;
    Complex v = eval_at(to, &state, next, jump);
    if (jump > kMaxPhaseStep) {
      if (depth >= refinement_limit)
        throw EvalError(
            "refinement limit exceeded: phase winds too fast for the grid");
      Complex mid = 0.5 * (from + to);
      advance_segment(from, mid, depth + 1);
      return advance_segment(mid, to, depth + 1);
    }
    state = std::move(next);
    last_arg = to;
    return v;
  }
};

PathEvaluator::PathEvaluator(ExprPtr expr, int refinement_limit)
    : impl_(std::make_unique<Impl>()) {
  if (!expr) throw std::invalid_argument("PathEvaluator: null expression");
  impl_->expr = std::move(expr);
  impl_->refinement_limit = refinement_limit;
}

PathEvaluator::~PathEvaluator() = default;
PathEvaluator::PathEvaluator(PathEvaluator&&) noexcept = default;
PathEvaluator& PathEvaluator::operator=(PathEvaluator&&) noexcept = default;

Complex PathEvaluator::start(Complex anchor) {
  std::vector<Slot> next;
  double jump = 0.0;
  Complex v = impl_->eval_at(anchor, nullptr, next, jump);
  impl_->state = std::move(next);
  impl_->last_arg = anchor;
  impl_->started = true;
  return v;
}

Complex PathEvaluator::advance(Complex arg) {
  if (!impl_->started) throw std::logic_error("PathEvaluator: start() first");
  return impl_->advance_segment(impl_->last_arg, arg, 0);
}

// ---------------------------------------------------------------------------
// Grid evaluation

EvalGrid EvalGrid::linspace(double lo, double hi, std::size_t n,
                            int refinement_limit) {
  require(n >= 2 && hi > lo, "EvalGrid::linspace: need n >= 2 and hi > lo");
  EvalGrid g;
  g.refinement_limit = refinement_limit;
  g.points.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    g.points[i] = lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(n - 1);
  return g;
}

void EvalGrid::validate(TransformKind kind) const {
  require(!points.empty(), "EvalGrid: empty grid");
  require(refinement_limit > 0, "EvalGrid: refinement limit must be positive");
  for (std::size_t i = 1; i < points.size(); ++i)
    require(points[i] > points[i - 1], "EvalGrid: points must be increasing");
  const double anchor = kind == TransformKind::CF ? 0.0 : 1.0;
  bool has_anchor = false;
  for (double t : points) {
    if (t == anchor) has_anchor = true;
    if (kind == TransformKind::PGF)
      require(t >= 0.0 && t <= 1.0, "EvalGrid: PGF grid must lie in [0,1]");
  }
  require(has_anchor, "EvalGrid: grid must contain the anchor point");
}

std::vector<Complex> cf_eval(const ExprPtr& expr, const EvalGrid& grid) {
  require(expr != nullptr, "cf_eval: null expression");
  require(expr->kind() == TransformKind::CF, "cf_eval: expression is a PGF");
  grid.validate(TransformKind::CF);

  const auto& pts = grid.points;
  std::vector<Complex> out(pts.size());
  auto anchor_it = std::find(pts.begin(), pts.end(), 0.0);
  std::size_t a = static_cast<std::size_t>(anchor_it - pts.begin());

  // Walk up from the anchor, then down; each walk is one continuous path.
  {
    PathEvaluator ev(expr, grid.refinement_limit);
    out[a] = ev.start(0.0);
    for (std::size_t i = a + 1; i < pts.size(); ++i)
      out[i] = ev.advance(pts[i]);
  }
  if (a > 0) {
    PathEvaluator ev(expr, grid.refinement_limit);
    ev.start(0.0);
    for (std::size_t i = a; i-- > 0;) out[i] = ev.advance(pts[i]);
  }
  return out;
}

std::vector<Complex> pgf_eval(const ExprPtr& expr,
                              const std::vector<Complex>& points,
                              int refinement_limit) {
  require(expr != nullptr, "pgf_eval: null expression");
  require(expr->kind() == TransformKind::PGF, "pgf_eval: expression is a CF");
  std::vector<Complex> out;
  out.reserve(points.size());
  for (Complex s : points) {
    require(std::abs(s) <= 1.0 + 1e-12, "pgf_eval: |s| must be <= 1");
    PathEvaluator ev(expr, refinement_limit);
    Complex anchor = ev.start(1.0);
    out.push_back(s == Complex(1.0, 0.0) ? anchor : ev.advance(s));
  }
  return out;
}

Complex cf_eval_at(const ExprPtr& expr, double t, int refinement_limit) {
  require(expr != nullptr, "cf_eval_at: null expression");
  PathEvaluator ev(expr, refinement_limit);
  Complex v = ev.start(0.0);
  return t == 0.0 ? v : ev.advance(t);
}

Complex pgf_eval_at(const ExprPtr& expr, Complex s, int refinement_limit) {
  return pgf_eval(expr, {s}, refinement_limit)[0];
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::ConstantOne: return "constant_one";
    case NodeKind::GammaCF: return "gamma_cf";
    case NodeKind::StableSymCF: return "stable_sym_cf";
    case NodeKind::IndicatorCF: return "indicator_cf";
    case NodeKind::NegBinPGF: return "negbin_pgf";
    case NodeKind::PoissonPGF: return "poisson_pgf";
    case NodeKind::GeometricPGF: return "geometric_pgf";
    case NodeKind::HarrisPGF: return "harris_pgf";
    case NodeKind::DegenerateOnePGF: return "degenerate_one_pgf";
    case NodeKind::ScaleArg: return "scale_arg";
    case NodeKind::Thin: return "thin";
    case NodeKind::Power: return "power";
    case NodeKind::Product: return "product";
    case NodeKind::Ratio: return "ratio";
    case NodeKind::HarrisCompose: return "harris_compose";
    case NodeKind::Blend: return "blend";
    case NodeKind::HidFromId: return "hid_from_id";
  }
  return "?";
}

}  // namespace

nlohmann::json Expr::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_name(node_kind_);
  nlohmann::json params = nlohmann::json::object();
  switch (node_kind_) {
    case NodeKind::ConstantOne:
      params["transform"] = kind_ == TransformKind::CF ? "cf" : "pgf";
      break;
    case NodeKind::GammaCF:
    case NodeKind::NegBinPGF:
      params["shape"] = p0_;
      params["scale"] = p1_;
      break;
    case NodeKind::StableSymCF:
      params["alpha"] = p0_;
      break;
    case NodeKind::IndicatorCF:
      params["half_width"] = p0_;
      break;
    case NodeKind::PoissonPGF:
      params["mean"] = p0_;
      break;
    case NodeKind::GeometricPGF:
      params["q"] = p0_;
      break;
    case NodeKind::HarrisPGF:
    case NodeKind::HarrisCompose:
      params["a"] = p0_;
      params["k"] = k_;
      break;
    case NodeKind::DegenerateOnePGF:
    case NodeKind::Product:
    case NodeKind::Ratio:
      break;
    case NodeKind::ScaleArg:
    case NodeKind::Thin:
      params["c"] = p0_;
      break;
    case NodeKind::Power:
      params["r"] = p0_;
      break;
    case NodeKind::Blend:
      params["c"] = p0_;
      params["p"] = p1_;
      params["k"] = k_;
      break;
    case NodeKind::HidFromId:
      params["k"] = k_;
      break;
  }
  j["params"] = params;
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : children_) children.push_back(c->to_json());
  j["children"] = children;
  return j;
}

ExprPtr Expr::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json params =
      j.contains("params") ? j.at("params") : nlohmann::json::object();
  std::vector<ExprPtr> children;
  if (j.contains("children"))
    for (const auto& c : j.at("children")) children.push_back(from_json(c));

  auto need = [&](std::size_t n) {
    require(children.size() == n, "expression JSON: wrong child count");
  };
  auto d = [&](const char* name) { return params.at(name).get<double>(); };
  auto i = [&](const char* name) { return params.at(name).get<int>(); };

  if (kind == "constant_one") {
    need(0);
    std::string t = params.value("transform", "cf");
    return constant_one(t == "pgf" ? TransformKind::PGF : TransformKind::CF);
  }
  if (kind == "gamma_cf") { need(0); return gamma_cf(d("shape"), d("scale")); }
  if (kind == "stable_sym_cf") { need(0); return stable_sym_cf(d("alpha")); }
  if (kind == "indicator_cf") { need(0); return indicator_cf(d("half_width")); }
  if (kind == "negbin_pgf") { need(0); return negbin_pgf(d("shape"), d("scale")); }
  if (kind == "poisson_pgf") { need(0); return poisson_pgf(d("mean")); }
  if (kind == "geometric_pgf") { need(0); return geometric_pgf(d("q")); }
  if (kind == "harris_pgf") { need(0); return harris_pgf(d("a"), i("k")); }
  if (kind == "degenerate_one_pgf") { need(0); return degenerate_one_pgf(); }
  if (kind == "scale_arg") { need(1); return scale_arg(d("c"), children[0]); }
  if (kind == "thin") { need(1); return thin(d("c"), children[0]); }
  if (kind == "power") { need(1); return power(d("r"), children[0]); }
  if (kind == "product") {
    require(!children.empty(), "expression JSON: product needs children");
    return product(std::move(children));
  }
  if (kind == "ratio") { need(2); return ratio(children[0], children[1]); }
  if (kind == "harris_compose") {
    need(1);
    return harris_compose(d("a"), i("k"), children[0]);
  }
  if (kind == "blend") {
    need(1);
    return blend(d("c"), d("p"), i("k"), children[0]);
  }
  if (kind == "hid_from_id") { need(1); return hid_from_id(i("k"), children[0]); }
  throw std::invalid_argument("expression JSON: unknown kind '" + kind + "'");
}

ExprPtr Expr::from_json_string(const std::string& text) {
  return from_json(nlohmann::json::parse(text));
}

std::string Expr::to_json_string() const { return to_json().dump(); }

}  // namespace hrsd
