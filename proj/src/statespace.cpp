#include "driftbench/statespace.hpp"

#include "driftbench/errors.hpp"
#include "driftbench/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace driftbench {

namespace {

constexpr std::array<const char*, 8> kParamNames = {"k", "theta", "sigma", "mu",
                                                    "a", "rho",   "Q1",    "Q2"};

double& field(ModelParams& p, std::string_view name)
{
    if (name == "k") return p.k;
    if (name == "theta") return p.theta;
    if (name == "sigma") return p.sigma;
    if (name == "mu") return p.mu;
    if (name == "a") return p.a;
    if (name == "rho") return p.rho;
    if (name == "Q1") return p.Q1;
    return p.Q2;
}

// Entries of C C^T written out so they stay real for any rho.
Matrix process_noise_shape(const ModelParams& p)
{
    const double c11 = p.sigma / (1.0 + p.k);
    const double c21 = p.mu * p.sigma / (1.0 + p.k) + p.a * p.rho;
    Matrix CCt(2, 2);
    CCt << c11 * c11, c11 * c21,
           c11 * c21, c21 * c21 + p.a * p.a * (1.0 - p.rho * p.rho);
    return CCt;
}

}  // namespace

ModelParams published_params()
{
    return {2.0714, 2.0451, 0.3003, 0.1907, 0.9197, 1.6309, 0.0310, -0.8857};
}

ModelParams substitute_params()
{
    ModelParams p = published_params();
    p.rho = 0.6309;
    return p;
}

std::map<std::string, double> to_map(const ModelParams& p)
{
    ModelParams copy = p;
    std::map<std::string, double> out;
    for (const char* name : kParamNames) {
        out[name] = field(copy, name);
    }
    return out;
}

LoadedParams load_params(const std::map<std::string, double>& raw, RhoPolicy policy)
{
    LoadedParams out;
    for (const char* name : kParamNames) {
        const auto it = raw.find(name);
        if (it == raw.end()) {
            throw ConfigError(std::string("model parameter '") + name + "' is missing");
        }
        if (!std::isfinite(it->second)) {
            throw ParameterError(std::string("model parameter '") + name + "' is not finite");
        }
        field(out.params, name) = it->second;
    }
    ModelParams& p = out.params;

    if (1.0 + p.k == 0.0) {
        throw ParameterError("model parameter k = -1 makes 1+k vanish");
    }
    if (!(p.sigma > 0.0)) {
        throw ParameterError("model parameter sigma must be > 0");
    }
    if (p.a < 0.0) {
        throw ParameterError("model parameter a must be >= 0");
    }

    if (std::abs(p.rho) > 1.0) {
        const Matrix CCt = process_noise_shape(p);
        std::ostringstream msg;
        msg << "rho=" << p.rho << " lies outside [-1, 1]: sqrt(1-rho^2) is imaginary and the "
            << "process-noise matrix CC^T is indefinite (det = " << CCt.determinant() << " < 0)";
        if (policy == RhoPolicy::reject) {
            throw ParameterError(msg.str() + "; use --rho-policy clamp or supply |rho| <= 1");
        }
        p.rho = std::copysign(1.0, p.rho);
        out.warnings.push_back(msg.str() + "; clamped to rho=" + std::to_string(p.rho));
    }

    if (!is_psd(process_noise_shape(p), 1e-12)) {
        throw ParameterError("process-noise matrix CC^T is not positive semidefinite");
    }
    return out;
}

SystemMatrices build_matrices(const ModelParams& p)
{
    const double inv = 1.0 / (1.0 + p.k);
    SystemMatrices m;
    m.Phi.resize(2, 2);
    m.Phi << inv, 0.0,
             p.mu * inv, 0.0;
    m.D.resize(2);
    m.D << p.k * p.theta * inv, p.mu * p.k * p.theta * inv;
    m.CCt = process_noise_shape(p);
    if (!is_psd(m.CCt, 1e-12)) {
        std::ostringstream msg;
        msg << "process-noise matrix CC^T is indefinite (smallest eigenvalue "
            << min_eigenvalue(m.CCt) << ", rho=" << p.rho << ")";
        throw ParameterError(msg.str());
    }
    m.Lc = cholesky_psd(m.CCt, 0.0);
    m.H = Matrix::Identity(2, 2);
    m.V = Vector{{p.Q1, p.Q2}}.asDiagonal();
    m.V2 = Vector{{p.Q1 * p.Q1, p.Q2 * p.Q2}}.asDiagonal();
    return m;
}

double filter_noise_level(const SystemMatrices& m, double yield_estimate)
{
    if (m.frozen_noise_level) {
        return *m.frozen_noise_level;
    }
    return std::max(yield_estimate, kYieldFloor);
}

State step_state(const SystemMatrices& m, const State& prev, const Vector& noise)
{
    const double level = m.frozen_noise_level ? *m.frozen_noise_level : std::max(prev.X, 0.0);
    Vector z = m.Phi * prev.vec() + m.D + std::sqrt(level) * (m.Lc * noise);
    State next = State::from(z);
    next.X = std::max(next.X, kYieldFloor);
    return next;
}

Observation observe(const SystemMatrices& m, const State& z, const Vector& noise)
{
    return Observation::from(m.H * z.vec() + m.V * noise);
}

Trajectory simulate(const SystemMatrices& m, const State& z0, std::size_t n_steps,
                    std::uint64_t seed)
{
    if (n_steps < 1) {
        throw ConfigError("simulate: n_steps must be >= 1");
    }
    if (z0.X < 0.0) {
        throw ConfigError("simulate: initial yield must be >= 0");
    }
    Trajectory out;
    out.reserve(n_steps);
    State z = z0;
    for (std::size_t n = 0; n < n_steps; ++n) {
        if (n > 0) {
            NormalSource process(seed, Stream::simulation_process, n);
            z = step_state(m, z, process.vector(2));
        }
        NormalSource measurement(seed, Stream::simulation_observation, n);
        out.push_back({n, z, observe(m, z, measurement.vector(2))});
    }
    return out;
}

std::vector<Observation> observations_of(const Trajectory& t)
{
    std::vector<Observation> out;
    out.reserve(t.size());
    for (const auto& r : t) {
        out.push_back(r.observation);
    }
    return out;
}

}  // namespace driftbench
