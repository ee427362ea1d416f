#include "cavt/edm.hpp"

#include <cmath>
#include <utility>

#include "cavt/errors.hpp"
#include "cavt/rng.hpp"

namespace cavt {

EdmCoefficients edm_coeffs(double sigma, double sigma_data) {
  if (!(sigma > 0.0)) {
    throw InvalidSigma("edm_coeffs: sigma must be > 0");
  }
  if (!(sigma_data > 0.0)) {
    throw InvalidArgument("edm_coeffs: sigma_data must be > 0");
  }
  const double var_sum = sigma * sigma + sigma_data * sigma_data;
  const double root = std::sqrt(var_sum);
  return EdmCoefficients{sigma_data * sigma_data / var_sum,
                         sigma * sigma_data / root, 1.0 / root,
                         std::log(sigma) / 4.0};
}

SigmaSchedule sigma_schedule(int n_steps, double sigma_min, double sigma_max,
                             double rho) {
  if (n_steps < 2) {
    throw InvalidSchedule("sigma_schedule: need at least 2 steps");
  }
  if (!(sigma_min > 0.0) || !(sigma_min < sigma_max)) {
    throw InvalidSchedule("sigma_schedule: need 0 < sigma_min < sigma_max");
  }
  if (!(rho > 0.0)) {
    throw InvalidSchedule("sigma_schedule: rho must be > 0");
  }

  SigmaSchedule schedule;
  schedule.sigma_min = sigma_min;
  schedule.sigma_max = sigma_max;
  schedule.rho = rho;
  schedule.n_steps = n_steps;
  schedule.sigmas.reserve(static_cast<std::size_t>(n_steps) + 1);

  const double inv_rho = 1.0 / rho;
  const double hi = std::pow(sigma_max, inv_rho);
  const double lo = std::pow(sigma_min, inv_rho);
  for (int i = 0; i < n_steps; ++i) {
    if (i == 0) {
      schedule.sigmas.push_back(sigma_max);
    } else if (i == n_steps - 1) {
      schedule.sigmas.push_back(sigma_min);
    } else {
      const double frac = static_cast<double>(i) / (n_steps - 1);
      schedule.sigmas.push_back(std::pow(hi + frac * (lo - hi), rho));
    }
  }
  schedule.sigmas.push_back(0.0);

  for (std::size_t i = 1; i < schedule.sigmas.size(); ++i) {
    if (!(schedule.sigmas[i] < schedule.sigmas[i - 1])) {
      throw InvalidSchedule("sigma_schedule: sigmas not strictly decreasing");
    }
  }
  return schedule;
}

Denoiser make_denoiser(std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> fn) {
  return [fn = std::move(fn)](const Eigen::VectorXd& x, double sigma,
                              const Conditioning&) { return fn(x, sigma); };
}

Eigen::VectorXd score(const Denoiser& denoiser, const Eigen::VectorXd& x,
                      double sigma, const Conditioning& cond) {
  if (!(sigma > 0.0)) {
    throw InvalidSigma("score: sigma must be > 0");
  }
  return (denoiser(x, sigma, cond) - x) / (sigma * sigma);
}

Eigen::VectorXd pf_ode_sample(const Denoiser& denoiser, const Eigen::VectorXd& x_init,
                              const SigmaSchedule& schedule, OdeMethod method,
                              const Conditioning& cond) {
  return pf_ode_sample(denoiser, x_init, schedule, method, cond, {});
}

Eigen::VectorXd pf_ode_sample(
    const Denoiser& denoiser, const Eigen::VectorXd& x_init,
    const SigmaSchedule& schedule, OdeMethod method, const Conditioning& cond,
    const std::function<void(int, double, const Eigen::VectorXd&)>& on_step) {
  if (schedule.sigmas.size() < 2) {
    throw InvalidSchedule("pf_ode_sample: schedule has no steps");
  }
  Eigen::VectorXd x = x_init;
  if (on_step) {
    on_step(0, schedule.sigmas[0], x);
  }
  for (std::size_t i = 0; i + 1 < schedule.sigmas.size(); ++i) {
    const double sigma = schedule.sigmas[i];
    const double sigma_next = schedule.sigmas[i + 1];
    if (!(sigma > 0.0)) {
      throw InvalidSigma("pf_ode_sample: non-positive sigma inside schedule");
    }
    const double dt = sigma_next - sigma;

    const Eigen::VectorXd drift = (x - denoiser(x, sigma, cond)) / sigma;
    if (method == OdeMethod::heun && sigma_next > 0.0) {
      const Eigen::VectorXd predicted = x + dt * drift;
      const Eigen::VectorXd drift_next =
          (predicted - denoiser(predicted, sigma_next, cond)) / sigma_next;
      x += dt * 0.5 * (drift + drift_next);
    } else {
      // Final step into sigma = 0 is always Euler; the corrector would
      // evaluate the denoiser outside its domain.
      x += dt * drift;
    }
    if (on_step) {
      on_step(static_cast<int>(i) + 1, sigma_next, x);
    }
  }
  return x;
}

double dsm_loss(const Denoiser& denoiser, const std::vector<Eigen::VectorXd>& clean_samples,
                double sigma, const Conditioning& cond, std::uint64_t rng_seed,
                int shards) {
  if (!(sigma > 0.0)) {
    throw InvalidSigma("dsm_loss: sigma must be > 0");
  }
  if (clean_samples.empty()) {
    throw EmptyInput("dsm_loss: need at least one clean sample");
  }
  if (shards < 1) {
    throw InvalidArgument("dsm_loss: shards must be >= 1");
  }

  const std::size_t n = clean_samples.size();
  const std::size_t per_shard = (n + shards - 1) / shards;
  double total = 0.0;
  for (int shard = 0; shard < shards; ++shard) {
    const std::size_t begin = static_cast<std::size_t>(shard) * per_shard;
    const std::size_t end = std::min(n, begin + per_shard);
    if (begin >= end) break;
    Rng rng(shards == 1 ? rng_seed
                        : Rng::derive_seed(rng_seed, static_cast<std::uint64_t>(shard)));
    for (std::size_t i = begin; i < end; ++i) {
      const Eigen::VectorXd& x0 = clean_samples[i];
      Eigen::VectorXd noisy = x0;
      for (Eigen::Index d = 0; d < noisy.size(); ++d) {
        noisy[d] += sigma * rng.normal();
      }
      total += (denoiser(noisy, sigma, cond) - x0).squaredNorm();
    }
  }
  return total / static_cast<double>(n);
}

Denoiser gaussian_posterior_denoiser(const Eigen::VectorXd& mu, double s) {
  if (!(s > 0.0)) {
    throw InvalidArgument("gaussian_posterior_denoiser: s must be > 0");
  }
  return [mu, s](const Eigen::VectorXd& x, double sigma, const Conditioning&) {
    const double s2 = s * s;
    const double sig2 = sigma * sigma;
    return Eigen::VectorXd((s2 * x + sig2 * mu) / (s2 + sig2));
  };
}

Denoiser gaussian_mixture_denoiser(std::vector<MixtureComponent> components) {
  if (components.empty()) {
    throw EmptyInput("gaussian_mixture_denoiser: no components");
  }
  double weight_sum = 0.0;
  for (const MixtureComponent& comp : components) {
    if (!(comp.weight > 0.0) || !(comp.s > 0.0)) {
      throw InvalidArgument("gaussian_mixture_denoiser: weights and s must be > 0");
    }
    if (comp.mu.size() != components.front().mu.size()) {
      throw DimensionMismatch("gaussian_mixture_denoiser: component dims differ");
    }
    weight_sum += comp.weight;
  }
  for (MixtureComponent& comp : components) {
    comp.weight /= weight_sum;
  }

  return [components = std::move(components)](const Eigen::VectorXd& x, double sigma,
                                              const Conditioning&) {
    // Responsibilities under sigma-smoothed likelihoods, in log space.
    const std::size_t k = components.size();
    std::vector<double> log_resp(k);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      const MixtureComponent& comp = components[i];
      const double var = comp.s * comp.s + sigma * sigma;
      const double sq = (x - comp.mu).squaredNorm();
      log_resp[i] = std::log(comp.weight) - 0.5 * sq / var -
                    0.5 * static_cast<double>(x.size()) * std::log(var);
      max_log = std::max(max_log, log_resp[i]);
    }
    double denom = 0.0;
    for (double& lr : log_resp) {
      lr = std::exp(lr - max_log);
      denom += lr;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    for (std::size_t i = 0; i < k; ++i) {
      const MixtureComponent& comp = components[i];
      const double s2 = comp.s * comp.s;
      const double var = s2 + sigma * sigma;
      out += (log_resp[i] / denom) *
             ((s2 * x + sigma * sigma * comp.mu) / var);
    }
    return out;
  };
}

}  // namespace cavt
