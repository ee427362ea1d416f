#pragma once

#include <Eigen/Core>
#include <any>
#include <cstdint>
#include <functional>
#include <vector>

namespace cavt {

/// Default noise-schedule constants. Only the step count is pinned by the
/// reference configuration; the rest follow the preconditioning framework's
/// usual choices.
inline constexpr double kDefaultSigmaData = 0.5;
inline constexpr double kDefaultSigmaMin = 0.002;
inline constexpr double kDefaultSigmaMax = 80.0;
inline constexpr double kDefaultRho = 7.0;
inline constexpr int kDefaultSampleSteps = 25;

/// Preconditioning scalars for one noise level:
/// D(x) = c_skip * x + c_out * F(c_in * x; c_noise).
struct EdmCoefficients {
  double c_skip;
  double c_out;
  double c_in;
  double c_noise;
};

/// c_skip = s_d^2/(s^2+s_d^2), c_out = s*s_d/sqrt(s^2+s_d^2),
/// c_in = 1/sqrt(s^2+s_d^2), c_noise = ln(s)/4.
EdmCoefficients edm_coeffs(double sigma, double sigma_data = kDefaultSigmaData);

/// Strictly decreasing noise levels with an appended terminal zero.
struct SigmaSchedule {
  std::vector<double> sigmas;  // sigma_max ... sigma_min, 0
  double sigma_min;
  double sigma_max;
  double rho;
  int n_steps;
};

/// rho-spaced schedule: sigma_i = (smax^(1/rho) + i/(n-1)*(smin^(1/rho) -
/// smax^(1/rho)))^rho, endpoints exact, terminal zero appended.
SigmaSchedule sigma_schedule(int n_steps, double sigma_min = kDefaultSigmaMin,
                             double sigma_max = kDefaultSigmaMax,
                             double rho = kDefaultRho);

/// Opaque conditioning payload, threaded to the denoiser untouched.
using Conditioning = std::any;

/// Evaluation contract: (state, sigma, conditioning) -> denoised state of
/// equal dimension, finite for finite inputs and sigma > 0.
using Denoiser =
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double, const Conditioning&)>;

/// Wraps a callable that ignores conditioning.
Denoiser make_denoiser(std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> fn);

/// Score estimate (D(x; sigma) - x) / sigma^2.
Eigen::VectorXd score(const Denoiser& denoiser, const Eigen::VectorXd& x,
                      double sigma, const Conditioning& cond = {});

enum class OdeMethod { euler, heun };

/// Deterministic probability-flow ODE integration of dx/dsigma =
/// (x - D(x; sigma)) / sigma from sigma_max down to 0. Heun adds a
/// trapezoidal corrector except on the final step into sigma = 0.
Eigen::VectorXd pf_ode_sample(const Denoiser& denoiser, const Eigen::VectorXd& x_init,
                              const SigmaSchedule& schedule,
                              OdeMethod method = OdeMethod::heun,
                              const Conditioning& cond = {});

/// Per-step observer variant; `on_step` sees the state at every sigma in the
/// schedule, including the initial one.
Eigen::VectorXd pf_ode_sample(
    const Denoiser& denoiser, const Eigen::VectorXd& x_init,
    const SigmaSchedule& schedule, OdeMethod method, const Conditioning& cond,
    const std::function<void(int step, double sigma, const Eigen::VectorXd&)>& on_step);

/// Monte Carlo denoising score matching loss: mean over clean samples of
/// ||D(x0 + sigma*eps; sigma, cond) - x0||^2 with one standard-normal draw
/// per sample, deterministic per seed. `shards` > 1 splits the samples into
/// that many contiguous shards with independently derived noise streams;
/// the result is reproducible for a fixed shard count.
double dsm_loss(const Denoiser& denoiser, const std::vector<Eigen::VectorXd>& clean_samples,
                double sigma, const Conditioning& cond, std::uint64_t rng_seed,
                int shards = 1);

/// Closed-form posterior mean for data ~ N(mu, s^2 I):
/// D(x; sigma) = (s^2 x + sigma^2 mu) / (s^2 + sigma^2).
Denoiser gaussian_posterior_denoiser(const Eigen::VectorXd& mu, double s);

/// One isotropic Gaussian mixture component.
struct MixtureComponent {
  double weight;
  Eigen::VectorXd mu;
  double s;
};

/// Analytic posterior mean for an isotropic Gaussian mixture: responsi-
/// bilities under sigma-smoothed likelihoods blend the per-component
/// posterior means. Weights are normalized internally.
Denoiser gaussian_mixture_denoiser(std::vector<MixtureComponent> components);

}  // namespace cavt
