#include "hrsd/processes.hpp"

#include <numeric>
#include <stdexcept>

#include "hrsd/samplers.hpp"

namespace hrsd {

Family family_from_string(const std::string& name) {
  if (name == "gamma") return Family::Gamma;
  if (name == "negbin") return Family::NegBin;
  throw std::invalid_argument("unknown family '" + name + "'");
}

Init init_from_string(const std::string& name) {
  if (name == "stationary") return Init::Stationary;
  if (name == "zero") return Init::Zero;
  throw std::invalid_argument("unknown init '" + name + "'");
}

void ModelConfig::validate() const {
  if (k < 1) throw std::invalid_argument("ModelConfig: k must be >= 1");
  if (!(c > 0.0 && c <= 1.0))
    throw std::invalid_argument("ModelConfig: c must be in (0,1]");
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("ModelConfig: p must be in [0,1)");
  if (!(lambda > 0.0))
    throw std::invalid_argument("ModelConfig: lambda must be > 0");
  if (horizon < 1)
    throw std::invalid_argument("ModelConfig: horizon must be >= 1");
  if (burn_in < 0)
    throw std::invalid_argument("ModelConfig: burn_in must be >= 0");
  if (replicates < 1)
    throw std::invalid_argument("ModelConfig: replicates must be >= 1");
}

namespace {

double draw_innovation(const ModelConfig& cfg, RngStream& rng) {
  if (cfg.family == Family::Gamma)
    return sample_gamma_hrsd_innovation(cfg.k, cfg.lambda, cfg.c, cfg.p, rng);
  return static_cast<double>(
      sample_nb_dhrsd_innovation(cfg.k, cfg.lambda, cfg.c, cfg.p, rng));
}

void init_state(const ModelConfig& cfg, std::vector<double>& state,
                RngStream& rng) {
  state.assign(static_cast<std::size_t>(cfg.k), 0.0);
  if (cfg.init == Init::Zero) return;
  for (auto& y : state)
    y = cfg.family == Family::Gamma
            ? sample_gamma(1.0 / cfg.k, cfg.lambda, rng)
            : static_cast<double>(
                  sample_negbin(1.0 / cfg.k, cfg.lambda, rng));
}

}  // namespace

int chain_step(const ModelConfig& cfg, std::vector<double>& state,
               RngStream& rng) {
  const int renew = rng.next_double() < cfg.p ? 1 : 0;
  for (auto& y : state) {
    double carried = 0.0;
    if (!renew) {
      carried = cfg.family == Family::Gamma
                    ? cfg.c * y
                    : static_cast<double>(binomial_thin(
                          static_cast<long>(y), cfg.c, rng));
    }
    y = carried + draw_innovation(cfg, rng);
  }
  return renew;
}

namespace {

Trajectory run_chain(const ModelConfig& cfg, RngStream& rng) {
  Trajectory traj;
  const std::size_t n = static_cast<std::size_t>(cfg.horizon) + 1;
  traj.y.reserve(n);
  traj.x.reserve(n);
  traj.b.reserve(n);

  std::vector<double> state;
  init_state(cfg, state, rng);
  for (long s = 0; s < cfg.burn_in; ++s) chain_step(cfg, state, rng);

  auto record = [&](int b) {
    traj.y.push_back(state);
    traj.x.push_back(std::accumulate(state.begin(), state.end(), 0.0));
    traj.b.push_back(b);
  };
  record(0);
  for (long s = 0; s < cfg.horizon; ++s) record(chain_step(cfg, state, rng));
  return traj;
}

}  // namespace

Trajectory simulate(const ModelConfig& config) {
  config.validate();
  RngStream rng(config.seed, 0);
  return run_chain(config, rng);
}

Trajectory simulate_ar(const ModelConfig& config) {
  if (config.family != Family::Gamma)
    throw std::invalid_argument("simulate_ar: family must be gamma");
  return simulate(config);
}

Trajectory simulate_inar(const ModelConfig& config) {
  if (config.family != Family::NegBin)
    throw std::invalid_argument("simulate_inar: family must be negbin");
  return simulate(config);
}

std::vector<double> replicate_marginal(const ModelConfig& config,
                                       long observe_time) {
  config.validate();
  if (observe_time < 0 || observe_time > config.horizon)
    throw std::invalid_argument(
        "replicate_marginal: observe_time must be in [0, horizon]");

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(config.replicates));
  for (long r = 0; r < config.replicates; ++r) {
    RngStream rng(config.seed, static_cast<std::uint64_t>(r));
    std::vector<double> state;
    init_state(config, state, rng);
    for (long s = 0; s < config.burn_in; ++s) chain_step(config, state, rng);
    for (long s = 0; s < observe_time; ++s) chain_step(config, state, rng);
    out.push_back(std::accumulate(state.begin(), state.end(), 0.0));
  }
  return out;
}

}  // namespace hrsd
