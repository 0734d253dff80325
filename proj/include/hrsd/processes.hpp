#ifndef HRSD_PROCESSES_HPP
#define HRSD_PROCESSES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hrsd/rng.hpp"

namespace hrsd {

enum class Family { Gamma, NegBin };
enum class Init { Stationary, Zero };

Family family_from_string(const std::string& name);
Init init_from_string(const std::string& name);

/// One AR(1)/INAR(1) experiment. Gamma family runs the real-valued chain,
/// NegBin the integer-valued chain with binomial thinning.
struct ModelConfig {
  Family family = Family::Gamma;
  int k = 1;
  double c = 0.5;
  double p = 0.0;
  double lambda = 1.0;
  long horizon = 100;     // T: recorded steps after index 0
  long burn_in = 0;       // unrecorded steps before index 0
  long replicates = 1;
  std::uint64_t seed = 0;
  Init init = Init::Stationary;

  void validate() const;
};

struct Trajectory {
  // y[n][i], n = 0..T, i = 0..k-1; x[n] = row sum; b[n] in {0,1} is the
  // shared renewal selector used to produce step n (b[0] = 0 by convention).
  std::vector<std::vector<double>> y;
  std::vector<double> x;
  std::vector<int> b;
};

/// k-component generalized AR(1): with probability p the whole state renews
/// from the innovations alone, otherwise every component contracts by c and
/// adds its innovation. One selector per step, shared across components.
Trajectory simulate_ar(const ModelConfig& config);

/// Integer-valued analogue with c*y replaced by binomial thinning.
Trajectory simulate_inar(const ModelConfig& config);

/// Dispatch on config.family.
Trajectory simulate(const ModelConfig& config);

/// R independent chain runs (stream ids 0..R-1); returns the aggregate value
/// X[observe_time] of each.
std::vector<double> replicate_marginal(const ModelConfig& config,
                                       long observe_time);

/// Pure single-step advance of a chain state; returns the selector drawn.
/// Exposed so scheduling layers can drive the chain themselves.
int chain_step(const ModelConfig& config, std::vector<double>& state,
               RngStream& rng);

}  // namespace hrsd

#endif  // HRSD_PROCESSES_HPP
