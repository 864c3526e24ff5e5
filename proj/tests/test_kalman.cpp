#include "doctest.h"
#include "support.hpp"

#include "driftbench/errors.hpp"
#include "driftbench/kalman.hpp"

using namespace driftbench;
using driftbench::testing::max_abs;

namespace {

SystemMatrices substitute_model()
{
    return build_matrices(substitute_params());
}

Matrix diag2(double a, double b)
{
    return Vector{{a, b}}.asDiagonal();
}

SystemMatrices identity_noise_model()
{
    SystemMatrices m = substitute_model();
    m.V = Matrix::Identity(2, 2);
    m.V2 = Matrix::Identity(2, 2);
    return m;
}

}  // namespace

TEST_CASE("generic_lkf_step scalar algebra")
{
    const Matrix I = Matrix::Identity(2, 2);
    const GaussianBelief belief{Vector{{1.0, -2.0}}, I};
    const KalmanRecord r = generic_lkf_step(I, Matrix::Zero(2, 2), I, I, belief, Vector{{3.0, 0.0}});
    CHECK(max_abs(r.gain.gain - 0.5 * I) < 1e-15);
    CHECK(max_abs(r.posterior.cov - 0.5 * I) < 1e-15);
    CHECK(max_abs(r.posterior.mean - Vector{{2.0, -1.0}}) < 1e-15);
}

TEST_CASE("generic_lkf_step with zero prior uncertainty ignores the measurement")
{
    Matrix H(2, 2), R(2, 2);
    H << 1, 0.5, -0.2, 2;
    R << 2, 0.3, 0.3, 1;
    const GaussianBelief belief{Vector{{0.4, 0.1}}, Matrix::Zero(2, 2)};
    const KalmanRecord r =
        generic_lkf_step(Matrix::Identity(2, 2), Matrix::Zero(2, 2), H, R, belief, Vector{{9.0, 9.0}});
    CHECK(r.gain.gain.isZero(0.0));
    CHECK(r.posterior.mean == r.prior.mean);
}

TEST_CASE("generic_lkf_step with a huge measurement variance keeps the prior")
{
    const Matrix I = Matrix::Identity(2, 2);
    Matrix Phi(2, 2);
    Phi << 0.9, 0.1, 0.0, 0.5;
    const GaussianBelief belief{Vector{{1.0, 2.0}}, diag2(0.3, 0.7)};
    const Vector z{{10.0, -10.0}};
    const KalmanRecord r = generic_lkf_step(Phi, 0.1 * I, I, 1e12 * I, belief, z);
    const double moved = (r.posterior.mean - r.prior.mean).norm();
    CHECK(moved <= 1e-6 * (z - r.prior.mean).norm());
}

TEST_CASE("generic_lkf_step rejects inconsistent shapes and singular innovations")
{
    const Matrix I = Matrix::Identity(2, 2);
    const GaussianBelief belief{Vector::Zero(2), Matrix::Zero(2, 2)};
    CHECK_THROWS_AS(generic_lkf_step(I, I, I, I, belief, Vector::Zero(3)), DimensionError);
    CHECK_THROWS_AS(generic_lkf_step(I, Matrix::Zero(2, 2), I, Matrix::Zero(2, 2), belief,
                                     Vector::Zero(2)),
                    NumericalError);
}

TEST_CASE("kf_predict")
{
    const SystemMatrices m = substitute_model();

    SUBCASE("zero covariance at unit yield gives CCt")
    {
        const GaussianBelief prior = kf_predict(m, {Vector{{1.0, 0.0}}, Matrix::Zero(2, 2)});
        CHECK(prior.cov == m.CCt);
        CHECK(max_abs(prior.mean - (m.Phi * Vector{{1.0, 0.0}} + m.D)) == 0.0);
    }
    SUBCASE("negative yield estimate is floored")
    {
        const Matrix P = diag2(0.4, 0.2);
        const GaussianBelief prior = kf_predict(m, {Vector{{-0.5, 1.0}}, P});
        CHECK(max_abs(prior.cov - m.Phi * P * m.Phi.transpose()) <= 1.01 * kYieldFloor * max_abs(m.CCt));
    }
    SUBCASE("unit covariance against element-wise arithmetic")
    {
        const double X = 1.8;
        const GaussianBelief prior = kf_predict(m, {Vector{{X, 0.3}}, Matrix::Identity(2, 2)});
        const double p00 = m.Phi(0, 0), p10 = m.Phi(1, 0);
        CHECK(prior.cov(0, 0) == doctest::Approx(p00 * p00 + X * m.CCt(0, 0)));
        CHECK(prior.cov(0, 1) == doctest::Approx(p00 * p10 + X * m.CCt(0, 1)));
        CHECK(prior.cov(1, 1) == doctest::Approx(p10 * p10 + X * m.CCt(1, 1)));
        CHECK(prior.cov(1, 0) == prior.cov(0, 1));
    }
}

TEST_CASE("kf_gain")
{
    const SystemMatrices m = identity_noise_model();
    const Matrix I = Matrix::Identity(2, 2);
    CHECK(max_abs(kf_gain(m, {Vector::Zero(2), I}).gain - 0.5 * I) < 1e-15);
    CHECK(max_abs(kf_gain(m, {Vector::Zero(2), diag2(2, 1)}).gain - diag2(2.0 / 3.0, 0.5)) < 1e-15);
    CHECK(kf_gain(m, {Vector::Zero(2), Matrix::Zero(2, 2)}).gain.isZero(0.0));
}

TEST_CASE("kf_update")
{
    const SystemMatrices m = identity_noise_model();
    const GaussianBelief prior{Vector{{2.0, 1.0}}, Matrix::Identity(2, 2)};
    const KalmanGain K = kf_gain(m, prior);

    const GaussianBelief same = kf_update(m, prior, K, Observation{2.0, 1.0});
    CHECK(same.mean == prior.mean);
    CHECK(max_abs(same.cov - 0.5 * Matrix::Identity(2, 2)) < 1e-15);

    const GaussianBelief untouched = kf_update(m, prior, KalmanGain{Matrix::Zero(2, 2)},
                                               Observation{5.0, -5.0});
    CHECK(untouched.mean == prior.mean);
    CHECK(untouched.cov == prior.cov);
}

TEST_CASE("kf_run shape and defaults")
{
    const SystemMatrices m = substitute_model();
    const auto obs = observations_of(simulate(m, State{2.0, 0.0}, 65, 3));
    const auto recs = kf_run(m, obs);
    CHECK(recs.size() == 65);
    CHECK(recs[0].prior.cov.isZero(0.0));
    CHECK(recs[0].gain.gain.isZero(0.0));
    CHECK(recs[0].posterior.mean == obs[0].vec());
    CHECK_THROWS_AS(kf_run(m, {}), ConfigError);
}

TEST_CASE("kf_run single observation with zero covariance returns the init mean")
{
    const SystemMatrices m = substitute_model();
    const GaussianBelief init{Vector{{2.1, 0.4}}, Matrix::Zero(2, 2)};
    const auto recs = kf_run(m, {Observation{2.5, -1.0}}, init);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].posterior.mean == init.mean);
    // same through the generic step (Phi = I, Q = 0 applies no prediction)
    const KalmanRecord g = generic_lkf_step(Matrix::Identity(2, 2), Matrix::Zero(2, 2), m.H, m.V2,
                                            init, Vector{{2.5, -1.0}});
    CHECK(max_abs(g.posterior.mean - recs[0].posterior.mean) == 0.0);
}

TEST_CASE("kf_run tracks a noise-free series when started at the truth")
{
    ModelParams p = substitute_params();
    SystemMatrices m = build_matrices(p);
    m.frozen_noise_level = 0.0;
    const Trajectory t = simulate(m, State{0.7, 1.5}, 65, 1);
    // observation noise still present in t; rebuild exact observations
    std::vector<Observation> obs;
    for (const auto& r : t) obs.push_back({r.state.X, r.state.dR});
    const auto recs = kf_run(m, obs, GaussianBelief{t[0].state.vec(), Matrix::Zero(2, 2)});
    for (std::size_t n = 0; n < t.size(); ++n) {
        CHECK(max_abs(recs[n].posterior.mean - t[n].state.vec()) < 1e-8);
    }
}

TEST_CASE("kf identities hold on every step of a simulated run")
{
    const SystemMatrices m = substitute_model();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto obs = observations_of(simulate(m, State{2.0, 0.0}, 65, seed));
        for (const auto& r : kf_run(m, obs)) {
            const Matrix& P = r.prior.cov;
            const Matrix& K = r.gain.gain;
            const Matrix I = Matrix::Identity(2, 2);
            CHECK(max_abs(K * (m.H * P * m.H.transpose() + m.V2) - P * m.H.transpose()) < 1e-10);
            const Matrix joseph =
                (I - K * m.H) * P * (I - K * m.H).transpose() + K * m.V2 * K.transpose();
            CHECK(max_abs(joseph - r.posterior.cov) < 1e-9);
            CHECK(r.posterior.cov == r.posterior.cov.transpose());
            CHECK(is_psd(r.posterior.cov, 1e-8));
        }
    }
}

TEST_CASE("specialized steps compose to the generic step")
{
    const SystemMatrices m = substitute_model();
    std::mt19937_64 gen(21);
    for (int i = 0; i < 100; ++i) {
        GaussianBelief post{Vector{{1.0, 0.0}} + driftbench::testing::random_vector(gen, 2),
                            driftbench::testing::random_spd(gen, 2)};
        post.mean(0) = std::abs(post.mean(0)) + 0.1;
        const Vector y = driftbench::testing::random_vector(gen, 2, 3.0);

        const GaussianBelief prior = kf_predict(m, post);
        const KalmanGain K = kf_gain(m, prior);
        const GaussianBelief special = kf_update(m, prior, K, Observation::from(y));

        // the generic step has no drift: compare in coordinates shifted by D
        const Matrix Q = post.mean(0) * m.CCt;
        const KalmanRecord g = generic_lkf_step(m.Phi, Q, m.H, m.V2, post, y - m.H * m.D);
        CHECK(max_abs(g.prior.mean + m.D - prior.mean) < 1e-12);
        CHECK(max_abs(g.prior.cov - prior.cov) < 1e-12);
        CHECK(max_abs(g.gain.gain - K.gain) < 1e-12);
        CHECK(max_abs(g.posterior.mean + m.D - special.mean) < 1e-12);
        CHECK(max_abs(g.posterior.cov - special.cov) < 1e-12);
    }
}
