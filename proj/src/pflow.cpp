#include "driftbench/pflow.hpp"

#include "driftbench/errors.hpp"

#include <cmath>

namespace driftbench {

namespace {

Matrix centered(const Matrix& particles, const Vector& center)
{
    return particles.rowwise() - center.transpose();
}

void floor_yields(ParticleEnsemble& ensemble)
{
    ensemble.particles.col(0) = ensemble.particles.col(0).cwiseMax(kYieldFloor);
}

}  // namespace

void validate(const FlowConfig& cfg)
{
    if (cfg.n_particles < 2) {
        throw ConfigError("pff.particles must be >= 2");
    }
    if (!(cfg.d_lambda > 0.0 && cfg.d_lambda <= 1.0)) {
        throw ConfigError("pff.dlambda must lie in (0, 1]");
    }
    const double steps = 1.0 / cfg.d_lambda;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) {
        throw ConfigError("pff.dlambda must divide 1 into an integer number of steps");
    }
    if (!(cfg.sigma2_scale > 0.0) || !std::isfinite(cfg.sigma2_scale)) {
        throw ConfigError("pff.sigma2_scale must be positive");
    }
}

std::size_t lambda_steps(const FlowConfig& cfg)
{
    return static_cast<std::size_t>(std::llround(1.0 / cfg.d_lambda));
}

PriorSpec estimate_prior(const ParticleEnsemble& ensemble)
{
    const Eigen::Index n = ensemble.size();
    if (n < 2) {
        throw ConfigError("estimate_prior: at least two particles are required");
    }
    PriorSpec prior;
    prior.mu = ensemble.particles.colwise().mean().transpose();
    const Matrix dev = centered(ensemble.particles, prior.mu);
    prior.Sigma1 = symmetrize(dev.transpose() * dev / static_cast<double>(n - 1));
    const double lowest = min_eigenvalue(prior.Sigma1);
    if (lowest < 0.0) {
        prior.Sigma1 += (-lowest + 1e-12) * Matrix::Identity(ensemble.dim(), ensemble.dim());
    }
    return prior;
}

Matrix drift_matrix(double lambda, const PriorSpec& prior, const LikelihoodSpec& lik)
{
    const Matrix A = prior.Sigma1 * sym_inverse(symmetrize(lik.Sigma2 + lambda * prior.Sigma1));
    require_finite(A, "drift");
    return A;
}

Vector drift(const Vector& x, double lambda, const PriorSpec& prior, const LikelihoodSpec& lik)
{
    return -drift_matrix(lambda, prior, lik) * (x - lik.m);
}

Matrix diffusion_cov(double lambda, const Matrix& P, const Matrix& R)
{
    const Matrix B = P - lambda * P * sym_inverse(symmetrize(R + lambda * P)) * P;
    const Matrix Q = symmetrize(B * sym_inverse(R) * B.transpose());
    require_finite(Q, "diffusion covariance");
    return Q;
}

Matrix diffusion_cov(double lambda, const Matrix& P, const SystemMatrices& m)
{
    return diffusion_cov(lambda, P, m.V2);
}

ParticleEnsemble flow_step(const ParticleEnsemble& ensemble, double lambda_next,
                           const PriorSpec& prior, const LikelihoodSpec& lik, const Matrix& P,
                           const FlowConfig& cfg, NormalSource& rng)
{
    const double dl = cfg.d_lambda;
    const double lambda_prev = std::max(0.0, lambda_next - dl);
    const Eigen::Index d = ensemble.dim();
    const Matrix I = Matrix::Identity(d, d);

    Matrix kick = Matrix::Zero(ensemble.size(), d);
    if (cfg.diffusion) {
        const Matrix L = cholesky_psd(diffusion_cov(lambda_prev, P, lik.Sigma2));
        kick = std::sqrt(dl) * rng.matrix(ensemble.size(), d) * L.transpose();
    }

    const Matrix offset = centered(ensemble.particles, lik.m);
    ParticleEnsemble next;
    if (cfg.scheme == FlowScheme::explicit_euler) {
        const Matrix A = drift_matrix(lambda_prev, prior, lik);
        next.particles = ensemble.particles - dl * offset * A.transpose() + kick;
    } else {
        const Matrix A = drift_matrix(lambda_next, prior, lik);
        Eigen::FullPivLU<Matrix> lu(I + dl * A);
        if (!lu.isInvertible()) {
            throw NumericalError("flow_step: implicit resolvent is singular");
        }
        const Matrix resolvent = lu.inverse();
        next.particles = ((offset + kick) * resolvent.transpose()).rowwise() + lik.m.transpose();
    }
    require_finite(next.particles, "flow_step particles");
    return next;
}

ParticleEnsemble pff_assimilate(const ParticleEnsemble& ensemble, const LikelihoodSpec& lik,
                                const Matrix& P, const FlowConfig& cfg, std::uint64_t record)
{
    validate(cfg);
    const PriorSpec prior = estimate_prior(ensemble);
    const std::size_t steps = lambda_steps(cfg);
    ParticleEnsemble current = ensemble;
    for (std::size_t k = 1; k <= steps; ++k) {
        NormalSource rng(cfg.seed, Stream::pff_diffusion, record, k);
        const double lambda_next = static_cast<double>(k) / static_cast<double>(steps);
        current = flow_step(current, lambda_next, prior, lik, P, cfg, rng);
    }
    return current;
}

GaussianBelief summarize(const ParticleEnsemble& ensemble)
{
    GaussianBelief out;
    out.mean = ensemble.particles.colwise().mean().transpose();
    const Matrix dev = centered(ensemble.particles, out.mean);
    const double denom = std::max<double>(1.0, static_cast<double>(ensemble.size() - 1));
    out.cov = symmetrize(dev.transpose() * dev / denom);
    return out;
}

std::vector<GaussianBelief> pff_run(const SystemMatrices& m,
                                    const std::vector<Observation>& observations,
                                    const FlowConfig& cfg)
{
    validate(cfg);
    if (observations.empty()) {
        throw ConfigError("pff_run: at least one observation is required");
    }
    const auto N = static_cast<Eigen::Index>(cfg.n_particles);

    ParticleEnsemble ensemble;
    {
        NormalSource rng(cfg.seed, Stream::pff_init, 0);
        const Matrix draws = rng.matrix(N, 2);
        ensemble.particles = (draws * m.V.transpose()).rowwise() + observations.front().vec().transpose();
        floor_yields(ensemble);
    }

    std::vector<GaussianBelief> out;
    out.reserve(observations.size());
    for (std::size_t n = 0; n < observations.size(); ++n) {
        try {
            Matrix P;
            if (n == 0) {
                P = summarize(ensemble).cov;
            } else {
                NormalSource rng(cfg.seed, Stream::pff_propagation, n);
                for (Eigen::Index i = 0; i < N; ++i) {
                    const State moved = step_state(m, State::from(ensemble.particles.row(i).transpose()),
                                                   rng.vector(2));
                    ensemble.particles.row(i) = moved.vec().transpose();
                }
                const GaussianBelief& last = out.back();
                P = symmetrize(m.Phi * last.cov * m.Phi.transpose() +
                               filter_noise_level(m, last.mean(0)) * m.CCt);
            }
            const LikelihoodSpec lik{observations[n].vec(), cfg.sigma2_scale * m.V2};
            ensemble = pff_assimilate(ensemble, lik, P, cfg, n);
            floor_yields(ensemble);
            out.push_back(summarize(ensemble));
        } catch (const NumericalError& e) {
            throw NumericalError("pff step " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace driftbench
