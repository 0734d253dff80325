#ifndef HRSD_SAMPLERS_HPP
#define HRSD_SAMPLERS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hrsd/coeffs.hpp"
#include "hrsd/rng.hpp"

namespace hrsd {

// Basic building blocks ------------------------------------------------------

/// Gamma(shape, scale); mean = shape*scale. Marsaglia-Tsang, with the
/// U^{1/shape} boost for shape < 1 (shapes 1/k occur throughout).
double sample_gamma(double shape, double scale, RngStream& rng);

/// Poisson(mean), mean >= 0.
long sample_poisson(double mean, RngStream& rng);

/// Negative binomial with PGF (1+theta(1-s))^{-r}, realized as a Poisson
/// mixed over Gamma(r, theta).
long sample_negbin(double r, double theta, RngStream& rng);

/// Geometric on {1,2,...} with success probability q; PGF qs/(1-(1-q)s).
long sample_geometric(double q, RngStream& rng);

double sample_exponential(double mean, RngStream& rng);
double sample_normal(RngStream& rng);

// Harris-family laws ------------------------------------------------------------

/// Harris(a,k) on {1, 1+k, 1+2k, ...}: N = 1 + k*M, M ~ negbin(1/k, a-1).
long sample_harris(double a, int k, RngStream& rng);

/// Symmetric stable with CF exp(-|t|^alpha) (Chambers-Mallows-Stuck).
double sample_stable_sym(double alpha, RngStream& rng);

/// Generalized Linnik with CF (1+|t|^alpha)^{-1/k}:
/// X = G^{1/alpha} * S, G ~ Gamma(1/k,1), S ~ stable_sym(alpha).
double sample_linnik(double alpha, int k, RngStream& rng);

// Innovations -----------------------------------------------------------------

/// SD innovation of Gamma(1/k, lambda): compound Poisson with rate
/// ln(1/c)/k and jumps E*lambda*c^U; CF ((1-ic*lambda*t)/(1-i*lambda*t))^{1/k}.
double sample_gamma_sd_innovation(int k, double lambda, double c,
                                  RngStream& rng);

/// DSD innovation of NB(1/k, lambda): compound Poisson on Z+ with rate
/// ln((1+lambda)/(1+c*lambda))/k; jumps 1 + geometric failure counts with a
/// log-uniform mixing of the failure probability between the thinned and
/// unthinned odds. PGF ((1+c*lambda*(1-s))/(1+lambda*(1-s)))^{1/k}.
long sample_nb_dsd_innovation(int k, double lambda, double c, RngStream& rng);

/// HRSD innovation of Gamma(1/k, lambda): SD innovation + Gamma(1/k, p*c*lambda).
double sample_gamma_hrsd_innovation(int k, double lambda, double c, double p,
                                    RngStream& rng);

/// DHRSD innovation of NB(1/k, lambda): DSD innovation + NB(1/k, p*c*lambda).
long sample_nb_dhrsd_innovation(int k, double lambda, double c, double p,
                                RngStream& rng);

/// Binomial(y, c) thinning draw.
long binomial_thin(long y, double c, RngStream& rng);

// Generic coefficient sampler -------------------------------------------------

/// Inverse-CDF sampler over an extracted coefficient series. The series must
/// be nonnegative within its tolerance and carry total mass within 1e-9 of 1.
class CoeffSampler {
 public:
  explicit CoeffSampler(const CoefficientSeries& series);
  long draw(RngStream& rng) const;

 private:
  std::vector<double> cdf_;
};

long sample_from_coeffs(const CoefficientSeries& series, RngStream& rng);

// Declarative spec (CLI surface) ----------------------------------------------

enum class LawTag {
  Gamma, Poisson, NegBin, Geometric, Harris, StableSym, Linnik,
  GammaSdInnov, NbDsdInnov, GammaHrsdInnov, NbDhrsdInnov, FromCoeffs,
};

struct SamplerSpec {
  LawTag law = LawTag::Gamma;
  double shape = 1.0;    // gamma shape / negbin r
  double scale = 1.0;    // gamma scale / negbin theta
  double mean = 1.0;     // poisson
  double q = 0.5;        // geometric
  double a = 2.0;        // harris
  double alpha = 1.0;    // stable / linnik
  int k = 1;
  double lambda = 1.0;   // innovations
  double c = 0.5;
  double p = 0.0;
  CoefficientSeries coeffs;  // FromCoeffs

  bool discrete() const;
};

LawTag law_tag_from_string(const std::string& name);

/// One draw per spec; integer laws come back as exact integral doubles.
double sample(const SamplerSpec& spec, RngStream& rng);

}  // namespace hrsd

#endif  // HRSD_SAMPLERS_HPP
