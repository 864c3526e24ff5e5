#pragma once

#include "driftbench/data.hpp"
#include "driftbench/kalman.hpp"
#include "driftbench/pflow.hpp"
#include "driftbench/statespace.hpp"
#include "driftbench/ukf.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace driftbench::cli {

enum class FilterKind { kf, ukf, pff };

std::string to_string(FilterKind kind);

struct SimulationSpec {
    std::optional<State> z0;
    std::size_t n_steps = 65;
};

/// Everything a command needs. Built from the JSON config file, then
/// overridden by command-line flags.
struct RunConfig {
    std::map<std::string, double> params = to_map(published_params());
    RhoPolicy rho_policy = RhoPolicy::reject;
    FilterKind filter = FilterKind::kf;
    UkfConfig ukf;
    FlowConfig pff;
    std::optional<GaussianBelief> kalman_init;
    std::uint64_t seed = 0;
    bool seed_configured = false;  ///< seed came from the config file
    std::optional<std::filesystem::path> input;
    std::optional<std::filesystem::path> truth;
    std::optional<SimulationSpec> simulation;
    std::filesystem::path out = "out";
};

/// Applies a JSON config document onto `cfg`. Malformed JSON, unknown keys
/// and ill-typed values raise ConfigError naming the field path
/// (e.g. `simulation.z0`).
void apply_json(RunConfig& cfg, const std::string& json_text);

/// Root-mean-square difference. Throws ConfigError on empty or unequal inputs.
double rmse(std::span<const double> estimates, std::span<const double> reference);

/// Series a filter runs on, with the true states when they are known.
struct Dataset {
    std::vector<long> years;
    std::vector<Observation> observations;
    std::optional<std::vector<State>> truth;
};

/// Simulates or loads the configured data source. Exactly one of
/// `input` / `simulation` must be set.
Dataset resolve_dataset(const RunConfig& cfg, const SystemMatrices& m);

/// Validated model matrices; rho warnings are written to `log`.
SystemMatrices model_from(const RunConfig& cfg, std::ostream& log);

/// Runs one filter and returns its rows of the result frame.
ResultFrame run_filter(FilterKind kind, const SystemMatrices& m, const Dataset& data,
                       const RunConfig& cfg);

struct MetricRow {
    std::string filter;
    std::string variable;   ///< "yield" or "return"
    std::string reference;  ///< "truth" or "observation"
    double rmse = 0.0;
};

/// Per-filter, per-variable RMSE. Uses the true states when every row has
/// them, and otherwise the observations (labelled "observation").
std::vector<MetricRow> compute_metrics(const ResultFrame& frame);

void write_metrics(const std::vector<MetricRow>& metrics, const std::filesystem::path& path);

void cmd_simulate(const RunConfig& cfg, std::ostream& out);
void cmd_filter(const RunConfig& cfg, std::ostream& out);
void cmd_compare(const RunConfig& cfg, std::ostream& out);

/// Exit codes of `run`.
enum ExitCode : int { ok = 0, config_error = 2, data_error = 3, numerical_error = 4 };

/// Entry point of the command-line tool; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace driftbench::cli
