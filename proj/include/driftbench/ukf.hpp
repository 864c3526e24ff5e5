#pragma once

#include "driftbench/kalman.hpp"
#include "driftbench/random.hpp"
#include "driftbench/statespace.hpp"

#include <cstdint>
#include <vector>

namespace driftbench {

/// Weighted sigma points: point 0 is the mean, points 1..Nx sit at
/// mean + offset_i and points Nx+1..2Nx at mean - offset_i.
struct SigmaSet {
    std::vector<Vector> points;
    std::vector<double> weights;
    std::size_t Nx = 0;
};

struct UkfConfig {
    double W0 = 1.0 / 3.0;          ///< weight of the central point, in (-1, 1)
    std::size_t Nx = 2;             ///< points per side; 2 Nx + 1 points in total
    bool noise_injection = false;   ///< push each point through the noisy plant
    std::uint64_t seed = 0;
    double P0_jitter = 1e-6;        ///< initial covariance is P0_jitter * I
};

/// Throws ConfigError if W0 is outside (-1, 1), Nx is zero, or P0_jitter < 0.
void validate(const UkfConfig& cfg);

/// Offsets are columns of chol(s Sigma) with s = Nx / (1 - W0). When Nx
/// exceeds the state dimension d, offset i uses column (i-1) mod d and each
/// column is rescaled by 1/sqrt(c_j), c_j being the number of times column j
/// is used, so the set still reproduces the mean and covariance exactly.
SigmaSet generate_sigma_points(const GaussianBelief& belief, const UkfConfig& cfg);

/// Weighted mean and weighted covariance of a point set.
GaussianBelief unscented_transform(const std::vector<Vector>& points,
                                   const std::vector<double>& weights);

/// Propagated sigma set of one step, before the measurement update.
struct UkfPrediction {
    std::vector<Vector> points;
    std::vector<double> weights;
    GaussianBelief belief;
};

/// Propagates the sigma set of `belief` through step_state. With noise
/// injection each point gets its own noise draw from `rng` (in point order);
/// otherwise points move noise-free, X-hat CCt is added to the covariance and
/// the returned points are redrawn from the resulting belief.
UkfPrediction ukf_predict(const SystemMatrices& m, const GaussianBelief& belief,
                          const UkfConfig& cfg, NormalSource& rng);

/// Measurement update of a propagated set against `y`.
GaussianBelief ukf_correct(const SystemMatrices& m, const UkfPrediction& predicted,
                           const Observation& y);

GaussianBelief ukf_step(const SystemMatrices& m, const GaussianBelief& belief,
                        const Observation& y, const UkfConfig& cfg, NormalSource& rng);

/// One posterior per observation. The first observation updates the initial
/// belief (mean = first observation, cov = P0_jitter I) without prediction;
/// step n draws its injection noise from substream (ukf_injection, n).
std::vector<GaussianBelief> ukf_run(const SystemMatrices& m,
                                    const std::vector<Observation>& observations,
                                    const UkfConfig& cfg);

}  // namespace driftbench
