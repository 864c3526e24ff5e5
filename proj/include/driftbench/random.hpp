#pragma once

#include "driftbench/numerics.hpp"

#include <cstdint>
#include <random>

namespace driftbench {

/// Named consumers of randomness. Each consumer draws from its own
/// substreams, so switching one off never shifts another's draws.
enum class Stream : std::uint64_t {
    simulation_process = 1,
    simulation_observation = 2,
    ukf_injection = 3,
    pff_init = 4,
    pff_propagation = 5,
    pff_diffusion = 6,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of substream (role, major, minor) under the run seed. `major` is
/// normally the record index, `minor` an inner counter (e.g. lambda step).
std::uint64_t substream_seed(std::uint64_t seed, Stream role, std::uint64_t major,
                             std::uint64_t minor = 0);

/// Standard-normal source over one substream.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t stream_seed) : engine_(stream_seed) {}

    NormalSource(std::uint64_t seed, Stream role, std::uint64_t major, std::uint64_t minor = 0)
        : NormalSource(substream_seed(seed, role, major, minor))
    {
    }

    double operator()() { return normal_(engine_); }

    Vector vector(Eigen::Index n)
    {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = normal_(engine_);
        }
        return v;
    }

    /// rows x cols draws, filled row by row.
    Matrix matrix(Eigen::Index rows, Eigen::Index cols)
    {
        Matrix m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                m(r, c) = normal_(engine_);
            }
        }
        return m;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace driftbench
