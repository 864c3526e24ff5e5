#pragma once

#include "driftbench/numerics.hpp"

#include <cstdint>
#include <random>

namespace driftbench::testing {

/// Random SPD matrix A A^T + floor I with A entries uniform in [-1, 1].
inline Matrix random_spd(std::mt19937_64& gen, Eigen::Index n, double floor = 0.1)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = u(gen);
    return A * A.transpose() + floor * Matrix::Identity(n, n);
}

inline Vector random_vector(std::mt19937_64& gen, Eigen::Index n, double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = u(gen);
    return v;
}

inline double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace driftbench::testing

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace driftbench::testing {

/// Fresh scratch directory under DRIFTBENCH_TEST_TMP (or the system temp dir).
inline std::filesystem::path scratch_dir(const std::string& name)
{
    const char* base = std::getenv("DRIFTBENCH_TEST_TMP");
    std::filesystem::path dir =
        (base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "driftbench") /
        name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream(path) << text;
}

inline std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace driftbench::testing
