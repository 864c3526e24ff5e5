#pragma once

#include "driftbench/kalman.hpp"
#include "driftbench/random.hpp"
#include "driftbench/statespace.hpp"

#include <cstdint>
#include <vector>

namespace driftbench {

/// N particles stored one per row (N x d).
struct ParticleEnsemble {
    Matrix particles;

    Eigen::Index size() const { return particles.rows(); }
    Eigen::Index dim() const { return particles.cols(); }
};

/// Gaussian prior g(x) = N(mu, Sigma1) fitted to an ensemble.
struct PriorSpec {
    Vector mu;
    Matrix Sigma1;
};

/// Gaussian likelihood h(x) = N(m, Sigma2).
struct LikelihoodSpec {
    Vector m;
    Matrix Sigma2;
};

enum class FlowScheme { explicit_euler, implicit_euler };

struct FlowConfig {
    std::size_t n_particles = 1000;
    double d_lambda = 0.01;
    FlowScheme scheme = FlowScheme::implicit_euler;
    bool diffusion = true;
    double sigma2_scale = 4.0;  ///< likelihood covariance is sigma2_scale * V^2
    std::uint64_t seed = 0;
};

/// Throws ConfigError unless n_particles >= 2, d_lambda in (0, 1] with
/// 1/d_lambda an integer, and sigma2_scale > 0.
void validate(const FlowConfig& cfg);

/// Number of pseudo-time steps, round(1 / d_lambda).
std::size_t lambda_steps(const FlowConfig& cfg);

/// Sample mean and unbiased sample covariance. Throws ConfigError for N < 2.
PriorSpec estimate_prior(const ParticleEnsemble& ensemble);

/// Linear part of the drift, f(x, lambda) = -A(lambda) (x - m), with
///   A = [Sigma1^-1 + lambda Sigma2^-1]^-1 Sigma2^-1 = Sigma1 (Sigma2 + lambda Sigma1)^-1.
/// The right-hand form needs no inverse of Sigma1, so singular priors work.
Matrix drift_matrix(double lambda, const PriorSpec& prior, const LikelihoodSpec& lik);

Vector drift(const Vector& x, double lambda, const PriorSpec& prior, const LikelihoodSpec& lik);

/// Q = B R^-1 B with B = P - lambda P (R + lambda P)^-1 P (observation matrix
/// is the identity), symmetrized.
Matrix diffusion_cov(double lambda, const Matrix& P, const Matrix& R);

/// Same with R = V^2 of the model.
Matrix diffusion_cov(double lambda, const Matrix& P, const SystemMatrices& m);

/// Advances every particle from lambda_next - d_lambda to lambda_next.
///
/// Explicit:  x' = x + f(x, lambda_prev) dl + L dW
/// Implicit:  x' = (I + dl A(lambda_next))^-1 (x - m + L dW) + m
///
/// L = chol(Q) with Q = diffusion_cov(lambda_prev, P, lik.Sigma2), and
/// dW ~ N(0, dl I) drawn from `rng` particle by particle. Without diffusion
/// no draws are made.
ParticleEnsemble flow_step(const ParticleEnsemble& ensemble, double lambda_next,
                           const PriorSpec& prior, const LikelihoodSpec& lik, const Matrix& P,
                           const FlowConfig& cfg, NormalSource& rng);

/// Fits the prior to the ensemble, then sweeps lambda over {dl, 2 dl, ..., 1}.
/// Step k of the sweep draws from substream (pff_diffusion, record, k).
/// The flow is model-free: no yield floor is applied here.
ParticleEnsemble pff_assimilate(const ParticleEnsemble& ensemble, const LikelihoodSpec& lik,
                                const Matrix& P, const FlowConfig& cfg,
                                std::uint64_t record = 0);

/// Ensemble mean and sample covariance.
GaussianBelief summarize(const ParticleEnsemble& ensemble);

/// Particle flow filter over a series, one summary per observation.
///
/// The initial ensemble holds N draws from N(first observation, V^2) and is
/// assimilated against the first observation directly. Every later
/// observation first propagates each particle through step_state (substream
/// (pff_propagation, n)), then sets the diffusion prior covariance
///   P- = Phi P+ Phi^T + X-hat CCt
/// from the previous ensemble summary. Yields are floored at kYieldFloor
/// after every assimilation.
std::vector<GaussianBelief> pff_run(const SystemMatrices& m,
                                    const std::vector<Observation>& observations,
                                    const FlowConfig& cfg);

}  // namespace driftbench
