#pragma once

#include "driftbench/numerics.hpp"
#include "driftbench/statespace.hpp"

#include <optional>
#include <vector>

namespace driftbench {

/// Mean and covariance of a Gaussian state estimate.
struct GaussianBelief {
    Vector mean;
    Matrix cov;
};

struct KalmanGain {
    Matrix gain;
};

/// Prior, gain and posterior produced by one filter step.
struct KalmanRecord {
    GaussianBelief prior;
    KalmanGain gain;
    GaussianBelief posterior;
};

/// Textbook linear step:
///   P- = Phi P+ Phi^T + Q,  K = P- H^T (H P- H^T + R)^-1,  P+ = (I - K H) P-,
///   x- = Phi x+,            x+ = x- + K (z - H x-).
KalmanRecord generic_lkf_step(const Matrix& Phi, const Matrix& Q, const Matrix& H,
                              const Matrix& R, const GaussianBelief& belief, const Vector& z);

/// Prior of the yield/return model. The state-dependent process noise is
/// scaled by X-hat = filter_noise_level(m, post.mean(0)).
GaussianBelief kf_predict(const SystemMatrices& m, const GaussianBelief& post);

KalmanGain kf_gain(const SystemMatrices& m, const GaussianBelief& prior);

/// Posterior from the short-form covariance update (I - K H) P-.
/// Throws NumericalError if the result is not positive semidefinite.
GaussianBelief kf_update(const SystemMatrices& m, const GaussianBelief& prior,
                         const KalmanGain& K, const Observation& y);

/// Initial belief used by kf_run when none is supplied: mean at the first
/// observation, zero covariance.
GaussianBelief default_kalman_init(const Observation& first);

/// Runs the filter over `observations`, one record per observation. `init`
/// is the prior of the first observation (no prediction is applied to it);
/// every later record predicts from the previous posterior.
std::vector<KalmanRecord> kf_run(const SystemMatrices& m,
                                 const std::vector<Observation>& observations,
                                 std::optional<GaussianBelief> init = std::nullopt);

}  // namespace driftbench
