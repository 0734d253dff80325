#include "hrsd/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hrsd {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double sample_exponential(double mean, RngStream& rng) {
  require(mean >= 0, "sample_exponential: mean must be >= 0");
  return -mean * std::log(rng.next_open_double());
}

double sample_normal(RngStream& rng) {
  double u1 = rng.next_open_double();
  double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(double shape, double scale, RngStream& rng) {
  require(shape > 0 && scale > 0, "sample_gamma: shape and scale must be > 0");
  if (shape < 1.0) {
    double boost = std::pow(rng.next_open_double(), 1.0 / shape);
    return boost * sample_gamma(shape + 1.0, scale, rng);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.next_open_double();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return scale * d * v;
  }
}

long sample_poisson(double mean, RngStream& rng) {
  require(mean >= 0, "sample_poisson: mean must be >= 0");
  long n = 0;
  // Chunk large means so the product method never underflows.
  while (mean > 500.0) {
    double chunk = 500.0;
    double l = std::exp(-chunk);
    double prod = rng.next_open_double();
    while (prod > l) {
      ++n;
      prod *= rng.next_open_double();
    }
    mean -= chunk;
  }
  if (mean == 0.0) return n;
  double l = std::exp(-mean);
  double prod = rng.next_open_double();
  while (prod > l) {
    ++n;
    prod *= rng.next_open_double();
  }
  return n;
}

long sample_negbin(double r, double theta, RngStream& rng) {
  require(r > 0 && theta > 0, "sample_negbin: r and theta must be > 0");
  return sample_poisson(sample_gamma(r, theta, rng), rng);
}

long sample_geometric(double q, RngStream& rng) {
  require(q > 0 && q < 1, "sample_geometric: q must be in (0,1)");
  // Inverse CDF on {1,2,...}.
  double u = rng.next_open_double();
  return 1 + static_cast<long>(std::floor(std::log(u) / std::log(1.0 - q)));
}

long sample_harris(double a, int k, RngStream& rng) {
  require(a > 1, "sample_harris: a must be > 1");
  require(k >= 1, "sample_harris: k must be >= 1");
  return 1 + static_cast<long>(k) * sample_negbin(1.0 / k, a - 1.0, rng);
}

double sample_stable_sym(double alpha, RngStream& rng) {
  require(alpha > 0 && alpha <= 2, "sample_stable_sym: alpha must be in (0,2]");
  const double v = std::numbers::pi * (rng.next_open_double() - 0.5);
  if (alpha == 1.0) return std::tan(v);  // symmetric Cauchy
  const double w = sample_exponential(1.0, rng);
  const double s = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
  return s * std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double sample_linnik(double alpha, int k, RngStream& rng) {
  require(alpha > 0 && alpha <= 2, "sample_linnik: alpha must be in (0,2]");
  require(k >= 1, "sample_linnik: k must be >= 1");
  double g = sample_gamma(1.0 / k, 1.0, rng);
  return std::pow(g, 1.0 / alpha) * sample_stable_sym(alpha, rng);
}

double sample_gamma_sd_innovation(int k, double lambda, double c,
                                  RngStream& rng) {
  require(k >= 1, "sample_gamma_sd_innovation: k must be >= 1");
  require(lambda > 0, "sample_gamma_sd_innovation: lambda must be > 0");
  require(c > 0 && c <= 1, "sample_gamma_sd_innovation: c must be in (0,1]");
  if (c == 1.0) return 0.0;
  long n = sample_poisson(std::log(1.0 / c) / k, rng);
  double sum = 0.0;
  for (long j = 0; j < n; ++j) {
    double e = sample_exponential(1.0, rng);
    double u = rng.next_double();
    sum += e * lambda * std::pow(c, u);
  }
  return sum;
}

long sample_nb_dsd_innovation(int k, double lambda, double c, RngStream& rng) {
  require(k >= 1, "sample_nb_dsd_innovation: k must be >= 1");
  require(lambda > 0, "sample_nb_dsd_innovation: lambda must be > 0");
  require(c > 0 && c <= 1, "sample_nb_dsd_innovation: c must be in (0,1]");
  if (c == 1.0) return 0;
  const double q = lambda / (1.0 + lambda);
  const double qc = c * lambda / (1.0 + c * lambda);
  long n = sample_poisson(std::log((1.0 + lambda) / (1.0 + c * lambda)) / k, rng);
  long sum = 0;
  for (long j = 0; j < n; ++j) {
    // Jump J = 1 + failures of a geometric whose failure probability x is
    // log-uniform between qc and q: 1-x = (1-qc)^{1-W} (1-q)^W.
    double w = rng.next_double();
    double one_minus_x =
        std::pow(1.0 - qc, 1.0 - w) * std::pow(1.0 - q, w);
    double x = 1.0 - one_minus_x;
    long failures = 0;
    if (x > 0.0) {
      double u = rng.next_open_double();
      failures = static_cast<long>(std::floor(std::log(u) / std::log(x)));
    }
    sum += 1 + failures;
  }
  return sum;
}

double sample_gamma_hrsd_innovation(int k, double lambda, double c, double p,
                                    RngStream& rng) {
  require(p >= 0 && p < 1, "sample_gamma_hrsd_innovation: p must be in [0,1)");
  double sd = sample_gamma_sd_innovation(k, lambda, c, rng);
  if (p == 0.0) return sd;
  return sd + sample_gamma(1.0 / k, p * c * lambda, rng);
}

long sample_nb_dhrsd_innovation(int k, double lambda, double c, double p,
                                RngStream& rng) {
  require(p >= 0 && p < 1, "sample_nb_dhrsd_innovation: p must be in [0,1)");
  long sd = sample_nb_dsd_innovation(k, lambda, c, rng);
  if (p == 0.0) return sd;
  return sd + sample_negbin(1.0 / k, p * c * lambda, rng);
}

long binomial_thin(long y, double c, RngStream& rng) {
  require(y >= 0, "binomial_thin: y must be >= 0");
  require(c >= 0 && c <= 1, "binomial_thin: c must be in [0,1]");
  if (c == 1.0) return y;
  if (c == 0.0) return 0;
  long kept = 0;
  for (long j = 0; j < y; ++j)
    if (rng.next_double() < c) ++kept;
  return kept;
}

CoeffSampler::CoeffSampler(const CoefficientSeries& series) {
  double mass = 0.0;
  for (double c : series.coeffs) {
    if (c < -series.negativity_tol)
      throw std::invalid_argument(
          "CoeffSampler: coefficient series has a negative coefficient");
    mass += std::max(c, 0.0);
  }
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument(
        "CoeffSampler: truncated mass deviates from 1 by more than 1e-9");
  cdf_.reserve(series.coeffs.size());
  double acc = 0.0;
  for (double c : series.coeffs) {
    acc += std::max(c, 0.0) / mass;
    cdf_.push_back(acc);
  }
}

long CoeffSampler::draw(RngStream& rng) const {
  double u = rng.next_double();
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return static_cast<long>(cdf_.size()) - 1;
  return static_cast<long>(it - cdf_.begin());
}

long sample_from_coeffs(const CoefficientSeries& series, RngStream& rng) {
  return CoeffSampler(series).draw(rng);
}

bool SamplerSpec::discrete() const {
  switch (law) {
    case LawTag::Poisson:
    case LawTag::NegBin:
    case LawTag::Geometric:
    case LawTag::Harris:
    case LawTag::NbDsdInnov:
    case LawTag::NbDhrsdInnov:
    case LawTag::FromCoeffs:
      return true;
    default:
      return false;
  }
}

LawTag law_tag_from_string(const std::string& name) {
  if (name == "gamma") return LawTag::Gamma;
  if (name == "poisson") return LawTag::Poisson;
  if (name == "negbin") return LawTag::NegBin;
  if (name == "geometric") return LawTag::Geometric;
  if (name == "harris") return LawTag::Harris;
  if (name == "stable_sym") return LawTag::StableSym;
  if (name == "linnik") return LawTag::Linnik;
  if (name == "gamma_sd_innov") return LawTag::GammaSdInnov;
  if (name == "nb_dsd_innov") return LawTag::NbDsdInnov;
  if (name == "gamma_hrsd_innov") return LawTag::GammaHrsdInnov;
  if (name == "nb_dhrsd_innov") return LawTag::NbDhrsdInnov;
  if (name == "from_coeffs") return LawTag::FromCoeffs;
  throw std::invalid_argument("unknown law tag '" + name + "'");
}

double sample(const SamplerSpec& spec, RngStream& rng) {
  switch (spec.law) {
    case LawTag::Gamma:
      return sample_gamma(spec.shape, spec.scale, rng);
    case LawTag::Poisson:
      return static_cast<double>(sample_poisson(spec.mean, rng));
    case LawTag::NegBin:
      return static_cast<double>(sample_negbin(spec.shape, spec.scale, rng));
    case LawTag::Geometric:
      return static_cast<double>(sample_geometric(spec.q, rng));
    case LawTag::Harris:
      return static_cast<double>(sample_harris(spec.a, spec.k, rng));
    case LawTag::StableSym:
      return sample_stable_sym(spec.alpha, rng);
    case LawTag::Linnik:
      return sample_linnik(spec.alpha, spec.k, rng);
    case LawTag::GammaSdInnov:
      return sample_gamma_sd_innovation(spec.k, spec.lambda, spec.c, rng);
    case LawTag::NbDsdInnov:
      return static_cast<double>(
          sample_nb_dsd_innovation(spec.k, spec.lambda, spec.c, rng));
    case LawTag::GammaHrsdInnov:
      return sample_gamma_hrsd_innovation(spec.k, spec.lambda, spec.c, spec.p,
                                          rng);
    case LawTag::NbDhrsdInnov:
      return static_cast<double>(
          sample_nb_dhrsd_innovation(spec.k, spec.lambda, spec.c, spec.p, rng));
    case LawTag::FromCoeffs:
      return static_cast<double>(sample_from_coeffs(spec.coeffs, rng));
  }
  throw std::logic_error("unhandled law tag");
}

}  // namespace hrsd
