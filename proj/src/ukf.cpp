#include "driftbench/ukf.hpp"

#include "driftbench/errors.hpp"

#include <cmath>
#include <sstream>

namespace driftbench {

void validate(const UkfConfig& cfg)
{
    if (!(cfg.W0 > -1.0 && cfg.W0 < 1.0)) {
        throw ConfigError("ukf.w0 must lie in (-1, 1)");
    }
    if (cfg.Nx == 0) {
        throw ConfigError("ukf sigma count must be positive");
    }
    if (!(cfg.P0_jitter >= 0.0)) {
        throw ConfigError("ukf.p0_jitter must be >= 0");
    }
}

SigmaSet generate_sigma_points(const GaussianBelief& belief, const UkfConfig& cfg)
{
    validate(cfg);
    const Eigen::Index d = belief.mean.size();
    const std::size_t Nx = cfg.Nx;
    const double s = static_cast<double>(Nx) / (1.0 - cfg.W0);
    const Matrix L = cholesky_psd(s * belief.cov);

    std::vector<std::size_t> uses(static_cast<std::size_t>(d), 0);
    for (std::size_t i = 0; i < Nx; ++i) {
        ++uses[i % static_cast<std::size_t>(d)];
    }

    SigmaSet set;
    set.Nx = Nx;
    set.points.resize(2 * Nx + 1);
    set.weights.assign(2 * Nx + 1, (1.0 - cfg.W0) / (2.0 * static_cast<double>(Nx)));
    set.points[0] = belief.mean;
    set.weights[0] = cfg.W0;
    for (std::size_t i = 0; i < Nx; ++i) {
        const std::size_t col = i % static_cast<std::size_t>(d);
        const Vector offset =
            L.col(static_cast<Eigen::Index>(col)) / std::sqrt(static_cast<double>(uses[col]));
        set.points[1 + i] = belief.mean + offset;
        set.points[1 + Nx + i] = belief.mean - offset;
    }
    return set;
}

GaussianBelief unscented_transform(const std::vector<Vector>& points,
                                   const std::vector<double>& weights)
{
    if (points.empty() || points.size() != weights.size()) {
        throw DimensionError("unscented_transform: point and weight counts differ");
    }
    const Eigen::Index d = points.front().size();
    GaussianBelief out{Vector::Zero(d), Matrix::Zero(d, d)};
    for (std::size_t i = 0; i < points.size(); ++i) {
        out.mean += weights[i] * points[i];
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vector dev = points[i] - out.mean;
        out.cov += weights[i] * dev * dev.transpose();
    }
    out.cov = symmetrize(out.cov);
    return out;
}

UkfPrediction ukf_predict(const SystemMatrices& m, const GaussianBelief& belief,
                          const UkfConfig& cfg, NormalSource& rng)
{
    const SigmaSet sigma = generate_sigma_points(belief, cfg);
    UkfPrediction out;
    out.weights = sigma.weights;
    out.points.reserve(sigma.points.size());
    const Vector no_noise = Vector::Zero(2);
    for (const Vector& p : sigma.points) {
        const Vector noise = cfg.noise_injection ? rng.vector(2) : no_noise;
        out.points.push_back(step_state(m, State::from(p), noise).vec());
    }
    out.belief = unscented_transform(out.points, out.weights);
    if (!cfg.noise_injection) {
        out.belief.cov = symmetrize(out.belief.cov +
                                    filter_noise_level(m, belief.mean(0)) * m.CCt);
        // the measurement update must see the added noise, so redraw
        SigmaSet redrawn = generate_sigma_points(out.belief, cfg);
        out.points = std::move(redrawn.points);
    }
    return out;
}

GaussianBelief ukf_correct(const SystemMatrices& m, const UkfPrediction& predicted,
                           const Observation& y)
{
    const Vector no_noise = Vector::Zero(2);
    std::vector<Vector> obs_points;
    obs_points.reserve(predicted.points.size());
    for (const Vector& p : predicted.points) {
        obs_points.push_back(observe(m, State::from(p), no_noise).vec());
    }
    GaussianBelief obs = unscented_transform(obs_points, predicted.weights);
    const Matrix S = symmetrize(obs.cov + m.V2);

    const Vector& mu = predicted.belief.mean;
    Matrix cross = Matrix::Zero(mu.size(), obs.mean.size());
    for (std::size_t i = 0; i < obs_points.size(); ++i) {
        cross += predicted.weights[i] * (predicted.points[i] - mu) *
                 (obs_points[i] - obs.mean).transpose();
    }

    Eigen::LDLT<Matrix> ldlt(S);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
        throw NumericalError("ukf: observation covariance is singular or indefinite");
    }
    const Matrix W = ldlt.solve(cross.transpose()).transpose();

    GaussianBelief post;
    post.mean = mu + W * (y.vec() - obs.mean);
    post.cov = symmetrize(predicted.belief.cov - W * S * W.transpose());
    require_finite(post.mean, "ukf posterior mean");
    if (!is_psd(post.cov, 1e-8)) {
        std::ostringstream msg;
        msg << "ukf posterior covariance is not positive semidefinite (smallest eigenvalue "
            << min_eigenvalue(post.cov) << ")";
        throw NumericalError(msg.str());
    }
    return post;
}

GaussianBelief ukf_step(const SystemMatrices& m, const GaussianBelief& belief,
                        const Observation& y, const UkfConfig& cfg, NormalSource& rng)
{
    return ukf_correct(m, ukf_predict(m, belief, cfg, rng), y);
}

std::vector<GaussianBelief> ukf_run(const SystemMatrices& m,
                                    const std::vector<Observation>& observations,
                                    const UkfConfig& cfg)
{
    validate(cfg);
    if (observations.empty()) {
        throw ConfigError("ukf_run: at least one observation is required");
    }
    std::vector<GaussianBelief> out;
    out.reserve(observations.size());
    const GaussianBelief init{observations.front().vec(),
                              cfg.P0_jitter * Matrix::Identity(2, 2)};
    for (std::size_t n = 0; n < observations.size(); ++n) {
        try {
            if (n == 0) {
                const SigmaSet sigma = generate_sigma_points(init, cfg);
                UkfPrediction unmoved{sigma.points, sigma.weights,
                                      unscented_transform(sigma.points, sigma.weights)};
                out.push_back(ukf_correct(m, unmoved, observations[n]));
            } else {
                NormalSource rng(cfg.seed, Stream::ukf_injection, n);
                out.push_back(ukf_step(m, out.back(), observations[n], cfg, rng));
            }
        } catch (const NumericalError& e) {
            throw NumericalError("ukf step " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace driftbench
