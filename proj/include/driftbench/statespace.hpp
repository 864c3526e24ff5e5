#pragma once

#include "driftbench/numerics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace driftbench {

/// Floor applied to the dividend yield so the sqrt(X) noise scale stays real.
inline constexpr double kYieldFloor = 1e-8;

/// Constants of the dividend-yield / real-return model (annual frequency).
struct ModelParams {
    double k = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
    double mu = 0.0;
    double a = 0.0;
    double rho = 0.0;
    double Q1 = 0.0;
    double Q2 = 0.0;
};

/// The published parameter table, verbatim. Its rho lies outside [-1, 1],
/// so load_params rejects it under RhoPolicy::reject.
ModelParams published_params();

/// Same as published_params() with rho = 0.6309, the substitute used for
/// validated runs.
ModelParams substitute_params();

std::map<std::string, double> to_map(const ModelParams& p);

enum class RhoPolicy { reject, clamp };

struct LoadedParams {
    ModelParams params;
    std::vector<std::string> warnings;
};

/// Validates a name -> value table holding k, theta, sigma, mu, a, rho, Q1, Q2.
/// Throws ConfigError for a missing name and ParameterError for values that
/// do not describe a valid process.
LoadedParams load_params(const std::map<std::string, double>& raw, RhoPolicy policy);

/// Linear skeleton and noise shapes of the model:
///   Z_n = Phi Z_{n-1} + D + sqrt(X_{n-1}) C W_n,   Y_n = H Z_n + V B_n,
/// with the process noise carried as CCt = C C^T.
struct SystemMatrices {
    Matrix Phi;
    Vector D;
    Matrix CCt;
    Matrix Lc;
    Matrix H;
    Matrix V;
    Matrix V2;
    /// When set, replaces X_{n-1} as the noise level in both the simulator
    /// and the filters, making the model linear-Gaussian.
    std::optional<double> frozen_noise_level;
};

/// Throws ParameterError if the derived CCt is not positive semidefinite.
SystemMatrices build_matrices(const ModelParams& p);

struct State {
    double X = 0.0;   ///< dividend yield
    double dR = 0.0;  ///< real return

    Vector vec() const { return Vector{{X, dR}}; }
    static State from(const Vector& v) { return {v(0), v(1)}; }
};

struct Observation {
    double Y1 = 0.0;  ///< observed yield
    double Y2 = 0.0;  ///< observed return

    Vector vec() const { return Vector{{Y1, Y2}}; }
    static Observation from(const Vector& v) { return {v(0), v(1)}; }
};

struct TrajectoryRecord {
    std::size_t index = 0;
    State state;
    Observation observation;
};

using Trajectory = std::vector<TrajectoryRecord>;

/// Process-noise level X-hat a filter uses when its yield estimate is
/// `yield_estimate`: the frozen level if set, else max(estimate, kYieldFloor).
double filter_noise_level(const SystemMatrices& m, double yield_estimate);

/// One plant transition; `noise` holds two standard normals. The yield of
/// the result is clamped to at least kYieldFloor.
State step_state(const SystemMatrices& m, const State& prev, const Vector& noise);

Observation observe(const SystemMatrices& m, const State& z, const Vector& noise);

/// Record 0 observes z0 itself; record n > 0 observes step_state of record
/// n-1. Record n draws its process noise from substream
/// (simulation_process, n) and its observation noise from
/// (simulation_observation, n).
Trajectory simulate(const SystemMatrices& m, const State& z0, std::size_t n_steps,
                    std::uint64_t seed);

std::vector<Observation> observations_of(const Trajectory& t);

}  // namespace driftbench
