#include "driftbench/kalman.hpp"

#include "driftbench/errors.hpp"

#include <sstream>

namespace driftbench {

namespace {

constexpr double kPsdTol = 1e-8;

Matrix optimal_gain(const Matrix& P, const Matrix& H, const Matrix& R)
{
    const Matrix S = symmetrize(H * P * H.transpose() + R);
    // K S = P H^T  <=>  S K^T = H P
    Eigen::LDLT<Matrix> ldlt(S);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
        throw NumericalError("innovation covariance is singular or indefinite");
    }
    Matrix K = ldlt.solve(H * P.transpose()).transpose();
    require_finite(K, "kalman gain");
    return K;
}

void check_posterior(const Matrix& cov)
{
    if (!is_psd(cov, kPsdTol)) {
        std::ostringstream msg;
        msg << "posterior covariance is not positive semidefinite (smallest eigenvalue "
            << min_eigenvalue(cov) << ")";
        throw NumericalError(msg.str());
    }
}

}  // namespace

KalmanRecord generic_lkf_step(const Matrix& Phi, const Matrix& Q, const Matrix& H,
                              const Matrix& R, const GaussianBelief& belief, const Vector& z)
{
    const Eigen::Index n = Phi.rows();
    if (Phi.cols() != n || Q.rows() != n || Q.cols() != n || H.cols() != n ||
        R.rows() != H.rows() || R.cols() != H.rows() || belief.mean.size() != n ||
        belief.cov.rows() != n || belief.cov.cols() != n || z.size() != H.rows()) {
        throw DimensionError("generic_lkf_step: inconsistent dimensions");
    }

    KalmanRecord rec;
    rec.prior.mean = Phi * belief.mean;
    rec.prior.cov = symmetrize(Phi * belief.cov * Phi.transpose() + Q);
    rec.gain.gain = optimal_gain(rec.prior.cov, H, R);
    const Matrix I = Matrix::Identity(n, n);
    rec.posterior.mean = rec.prior.mean + rec.gain.gain * (z - H * rec.prior.mean);
    rec.posterior.cov = symmetrize((I - rec.gain.gain * H) * rec.prior.cov);
    return rec;
}

GaussianBelief kf_predict(const SystemMatrices& m, const GaussianBelief& post)
{
    const double level = filter_noise_level(m, post.mean(0));
    GaussianBelief prior;
    prior.mean = m.Phi * post.mean + m.D;
    prior.cov = symmetrize(m.Phi * post.cov * m.Phi.transpose() + level * m.CCt);
    return prior;
}

KalmanGain kf_gain(const SystemMatrices& m, const GaussianBelief& prior)
{
    return {optimal_gain(prior.cov, m.H, m.V2)};
}

GaussianBelief kf_update(const SystemMatrices& m, const GaussianBelief& prior,
                         const KalmanGain& K, const Observation& y)
{
    const Eigen::Index n = prior.mean.size();
    GaussianBelief post;
    post.mean = prior.mean + K.gain * (y.vec() - m.H * prior.mean);
    post.cov = symmetrize((Matrix::Identity(n, n) - K.gain * m.H) * prior.cov);
    require_finite(post.mean, "posterior mean");
    check_posterior(post.cov);
    return post;
}

GaussianBelief default_kalman_init(const Observation& first)
{
    return {first.vec(), Matrix::Zero(2, 2)};
}

std::vector<KalmanRecord> kf_run(const SystemMatrices& m,
                                 const std::vector<Observation>& observations,
                                 std::optional<GaussianBelief> init)
{
    if (observations.empty()) {
        throw ConfigError("kf_run: at least one observation is required");
    }
    std::vector<KalmanRecord> out;
    out.reserve(observations.size());
    GaussianBelief prior = init ? *init : default_kalman_init(observations.front());
    for (std::size_t n = 0; n < observations.size(); ++n) {
        try {
            if (n > 0) {
                prior = kf_predict(m, out.back().posterior);
            }
            KalmanRecord rec;
            rec.prior = prior;
            rec.gain = kf_gain(m, prior);
            rec.posterior = kf_update(m, prior, rec.gain, observations[n]);
            out.push_back(std::move(rec));
        } catch (const NumericalError& e) {
            throw NumericalError("kf step " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace driftbench
