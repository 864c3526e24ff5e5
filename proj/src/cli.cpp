#include "driftbench/cli.hpp"

#include "driftbench/errors.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace driftbench::cli {

using nlohmann::json;

namespace {

// --- JSON helpers ----------------------------------------------------------

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> known)
{
    if (!obj.is_object()) {
        throw ConfigError("config field '" + (path.empty() ? std::string("<root>") : path) +
                          "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (const char* k : known) {
            found = found || key == k;
        }
        if (!found) {
            throw ConfigError("config field '" + join(path, key) + "' is not recognised");
        }
    }
}

double get_real(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        throw ConfigError("config field '" + path + "' must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError("config field '" + path + "' must be finite");
    }
    return x;
}

std::uint64_t get_count(const json& v, const std::string& path)
{
    if (!v.is_number_unsigned()) {
        throw ConfigError("config field '" + path + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

bool get_bool(const json& v, const std::string& path)
{
    if (!v.is_boolean()) {
        throw ConfigError("config field '" + path + "' must be true or false");
    }
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path)
{
    if (!v.is_string()) {
        throw ConfigError("config field '" + path + "' must be a string");
    }
    return v.get<std::string>();
}

Vector get_vector(const json& v, const std::string& path, Eigen::Index n)
{
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n) {
        throw ConfigError("config field '" + path + "' must be an array of " + std::to_string(n) +
                          " numbers");
    }
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i) = get_real(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
    }
    return out;
}

Matrix get_matrix(const json& v, const std::string& path, Eigen::Index n)
{
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n) {
        throw ConfigError("config field '" + path + "' must be a " + std::to_string(n) + "x" +
                          std::to_string(n) + " array");
    }
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.row(i) = get_vector(v[static_cast<std::size_t>(i)],
                                path + "[" + std::to_string(i) + "]", n)
                         .transpose();
    }
    return out;
}

RhoPolicy parse_rho_policy(const std::string& s, const std::string& path)
{
    if (s == "reject") return RhoPolicy::reject;
    if (s == "clamp") return RhoPolicy::clamp;
    throw ConfigError("config field '" + path + "' must be 'reject' or 'clamp'");
}

FilterKind parse_filter(const std::string& s, const std::string& path)
{
    if (s == "kf") return FilterKind::kf;
    if (s == "ukf") return FilterKind::ukf;
    if (s == "pff") return FilterKind::pff;
    throw ConfigError("config field '" + path + "' must be 'kf', 'ukf' or 'pff'");
}

FlowScheme parse_scheme(const std::string& s, const std::string& path)
{
    if (s == "explicit") return FlowScheme::explicit_euler;
    if (s == "implicit") return FlowScheme::implicit_euler;
    throw ConfigError("config field '" + path + "' must be 'explicit' or 'implicit'");
}

void set_sigma_count(UkfConfig& ukf, std::uint64_t count, const std::string& path)
{
    if (count < 2 || count % 2 != 0) {
        throw ConfigError("config field '" + path + "' must be a positive even number (2 Nx)");
    }
    ukf.Nx = count / 2;
}

// --- datasets and output ---------------------------------------------------

std::vector<State> load_truth(const std::filesystem::path& path, const std::vector<long>& years)
{
    const SeriesFrame frame = load_series(path);
    if (frame.rows.size() != years.size()) {
        throw DataError("truth file '" + path.string() + "' has " +
                        std::to_string(frame.rows.size()) + " rows, the input has " +
                        std::to_string(years.size()));
    }
    std::vector<State> truth;
    for (std::size_t i = 0; i < frame.rows.size(); ++i) {
        if (frame.rows[i].year != years[i]) {
            throw DataError("truth file '" + path.string() + "' row " + std::to_string(i + 1) +
                            " has year " + std::to_string(frame.rows[i].year) +
                            ", the input has " + std::to_string(years[i]));
        }
        truth.push_back({frame.rows[i].yield, frame.rows[i].ret});
    }
    return truth;
}

void print_metrics(const std::vector<MetricRow>& metrics, std::ostream& out)
{
    out << "filter  variable  reference    rmse\n";
    for (const auto& m : metrics) {
        out << std::left << std::setw(8) << m.filter << std::setw(10) << m.variable
            << std::setw(13) << m.reference << format_number(m.rmse) << '\n';
    }
}

void write_plot_script(const std::filesystem::path& path, const std::string& results_file)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << "# gnuplot script for " << results_file << "\n"
        << "# usage: gnuplot " << path.filename().string() << "\n"
        << "set datafile separator ','\n"
        << "set terminal pngcairo size 1000,600\n"
        << "set key outside\n"
        << "set xlabel 'step'\n";
    const char* filters[] = {"kf", "ukf", "pff"};
    const struct {
        const char* name;
        int obs_col;
        int est_col;
        int true_col;
    } variables[] = {{"yield", 3, 5, 7}, {"return", 4, 6, 8}};
    for (const auto& v : variables) {
        out << "\nset output '" << v.name << ".png'\n"
            << "set title 'Estimated " << v.name << "'\n"
            << "plot '" << results_file << "' using 1:(strcol(2) eq 'kf' ? $" << v.obs_col
            << " : 1/0) every ::1 with points pt 7 ps 0.5 title 'observed', \\\n"
            << "     '' using 1:(strcol(2) eq 'kf' && strcol(" << v.true_col << ") ne '' ? $"
            << v.true_col << " : 1/0) every ::1 with lines dt 2 title 'true'";
        for (const char* f : filters) {
            out << ", \\\n     '' using 1:(strcol(2) eq '" << f << "' ? $" << v.est_col
                << " : 1/0) every ::1 with lines title '" << f << "'";
        }
        out << "\n";
    }
    if (!out) {
        throw DataError("write to '" + path.string() + "' failed");
    }
}

}  // namespace

std::string to_string(FilterKind kind)
{
    switch (kind) {
    case FilterKind::kf: return "kf";
    case FilterKind::ukf: return "ukf";
    case FilterKind::pff: return "pff";
    }
    return "?";
}

void apply_json(RunConfig& cfg, const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(doc, "",
                   {"params", "rho_policy", "filter", "ukf", "pff", "kalman", "seed", "input",
                    "truth", "simulation", "out"});

    if (doc.contains("params")) {
        const json& p = doc["params"];
        reject_unknown(p, "params", {"k", "theta", "sigma", "mu", "a", "rho", "Q1", "Q2"});
        cfg.params.clear();
        for (const auto& [key, value] : p.items()) {
            cfg.params[key] = get_real(value, "params." + key);
        }
    }
    if (doc.contains("rho_policy")) {
        cfg.rho_policy = parse_rho_policy(get_string(doc["rho_policy"], "rho_policy"), "rho_policy");
    }
    if (doc.contains("filter")) {
        cfg.filter = parse_filter(get_string(doc["filter"], "filter"), "filter");
    }
    if (doc.contains("ukf")) {
        const json& u = doc["ukf"];
        reject_unknown(u, "ukf", {"w0", "sigma_count", "noise_injection", "p0_jitter"});
        if (u.contains("w0")) cfg.ukf.W0 = get_real(u["w0"], "ukf.w0");
        if (u.contains("sigma_count")) {
            set_sigma_count(cfg.ukf, get_count(u["sigma_count"], "ukf.sigma_count"),
                            "ukf.sigma_count");
        }
        if (u.contains("noise_injection")) {
            cfg.ukf.noise_injection = get_bool(u["noise_injection"], "ukf.noise_injection");
        }
        if (u.contains("p0_jitter")) cfg.ukf.P0_jitter = get_real(u["p0_jitter"], "ukf.p0_jitter");
    }
    if (doc.contains("pff")) {
        const json& f = doc["pff"];
        reject_unknown(f, "pff", {"particles", "dlambda", "scheme", "diffusion", "sigma2_scale"});
        if (f.contains("particles")) cfg.pff.n_particles = get_count(f["particles"], "pff.particles");
        if (f.contains("dlambda")) cfg.pff.d_lambda = get_real(f["dlambda"], "pff.dlambda");
        if (f.contains("scheme")) {
            cfg.pff.scheme = parse_scheme(get_string(f["scheme"], "pff.scheme"), "pff.scheme");
        }
        if (f.contains("diffusion")) cfg.pff.diffusion = get_bool(f["diffusion"], "pff.diffusion");
        if (f.contains("sigma2_scale")) {
            cfg.pff.sigma2_scale = get_real(f["sigma2_scale"], "pff.sigma2_scale");
        }
    }
    if (doc.contains("kalman")) {
        const json& k = doc["kalman"];
        reject_unknown(k, "kalman", {"init_mean", "init_cov"});
        if (!k.contains("init_mean")) {
            throw ConfigError("config field 'kalman.init_mean' is missing");
        }
        GaussianBelief init{get_vector(k["init_mean"], "kalman.init_mean", 2), Matrix::Zero(2, 2)};
        if (k.contains("init_cov")) init.cov = get_matrix(k["init_cov"], "kalman.init_cov", 2);
        if (!is_psd(init.cov, 1e-12) || (init.cov - init.cov.transpose()).norm() > 1e-12) {
            throw ConfigError("config field 'kalman.init_cov' must be symmetric PSD");
        }
        cfg.kalman_init = init;
    }
    if (doc.contains("seed")) {
        cfg.seed = get_count(doc["seed"], "seed");
        cfg.seed_configured = true;
    }
    if (doc.contains("input")) cfg.input = get_string(doc["input"], "input");
    if (doc.contains("truth")) cfg.truth = get_string(doc["truth"], "truth");
    if (doc.contains("simulation")) {
        const json& s = doc["simulation"];
        reject_unknown(s, "simulation", {"z0", "n_steps"});
        SimulationSpec spec;
        if (s.contains("z0")) spec.z0 = State::from(get_vector(s["z0"], "simulation.z0", 2));
        if (s.contains("n_steps")) spec.n_steps = get_count(s["n_steps"], "simulation.n_steps");
        cfg.simulation = spec;
    }
    if (doc.contains("out")) cfg.out = get_string(doc["out"], "out");
}

double rmse(std::span<const double> estimates, std::span<const double> reference)
{
    if (estimates.empty() || estimates.size() != reference.size()) {
        throw ConfigError("rmse: sequences must be non-empty and of equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const double d = estimates[i] - reference[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(estimates.size()));
}

SystemMatrices model_from(const RunConfig& cfg, std::ostream& log)
{
    const LoadedParams loaded = load_params(cfg.params, cfg.rho_policy);
    for (const auto& w : loaded.warnings) {
        log << "warning: " << w << '\n';
    }
    return build_matrices(loaded.params);
}

Dataset resolve_dataset(const RunConfig& cfg, const SystemMatrices& m)
{
    if (cfg.input && cfg.simulation) {
        throw ConfigError("config fields 'input' and 'simulation' are mutually exclusive");
    }
    Dataset data;
    if (cfg.input) {
        const SeriesFrame frame = load_series(*cfg.input);
        for (const auto& r : frame.rows) {
            data.years.push_back(r.year);
            data.observations.push_back({r.yield, r.ret});
        }
        if (cfg.truth) {
            data.truth = load_truth(*cfg.truth, data.years);
        }
        return data;
    }
    if (!cfg.simulation) {
        throw ConfigError("no data source: set 'input' or 'simulation'");
    }
    if (cfg.truth) {
        throw ConfigError("config field 'truth' needs 'input'; simulations carry their own truth");
    }
    if (!cfg.simulation->z0) {
        throw ConfigError("config field 'simulation.z0' is missing");
    }
    if (cfg.simulation->n_steps < 1) {
        throw ConfigError("config field 'simulation.n_steps' must be >= 1");
    }
    if (cfg.simulation->z0->X < 0.0) {
        throw ConfigError("config field 'simulation.z0' must have a non-negative yield");
    }
    const Trajectory traj = simulate(m, *cfg.simulation->z0, cfg.simulation->n_steps, cfg.seed);
    data.truth.emplace();
    for (const auto& r : traj) {
        data.years.push_back(static_cast<long>(r.index));
        data.observations.push_back(r.observation);
        data.truth->push_back(r.state);
    }
    return data;
}

ResultFrame run_filter(FilterKind kind, const SystemMatrices& m, const Dataset& data,
                       const RunConfig& cfg)
{
    std::vector<Vector> estimates;
    switch (kind) {
    case FilterKind::kf:
        for (const auto& rec : kf_run(m, data.observations, cfg.kalman_init)) {
            estimates.push_back(rec.posterior.mean);
        }
        break;
    case FilterKind::ukf: {
        UkfConfig ukf = cfg.ukf;
        ukf.seed = cfg.seed;
        for (const auto& b : ukf_run(m, data.observations, ukf)) {
            estimates.push_back(b.mean);
        }
        break;
    }
    case FilterKind::pff: {
        FlowConfig pff = cfg.pff;
        pff.seed = cfg.seed;
        for (const auto& b : pff_run(m, data.observations, pff)) {
            estimates.push_back(b.mean);
        }
        break;
    }
    }

    ResultFrame frame;
    for (std::size_t n = 0; n < estimates.size(); ++n) {
        ResultRow row;
        row.step = n;
        row.filter = to_string(kind);
        row.obs_yield = data.observations[n].Y1;
        row.obs_return = data.observations[n].Y2;
        row.est_yield = estimates[n](0);
        row.est_return = estimates[n](1);
        if (data.truth) {
            row.true_yield = (*data.truth)[n].X;
            row.true_return = (*data.truth)[n].dR;
        }
        frame.rows.push_back(std::move(row));
    }
    return frame;
}

std::vector<MetricRow> compute_metrics(const ResultFrame& frame)
{
    std::vector<std::string> filters;
    for (const auto& r : frame.rows) {
        if (std::find(filters.begin(), filters.end(), r.filter) == filters.end()) {
            filters.push_back(r.filter);
        }
    }
    std::vector<MetricRow> out;
    for (const auto& f : filters) {
        std::vector<double> est_y, est_r, ref_y, ref_r;
        bool have_truth = true;
        for (const auto& r : frame.rows) {
            have_truth = have_truth && (r.filter != f || (r.true_yield && r.true_return));
        }
        for (const auto& r : frame.rows) {
            if (r.filter != f) continue;
            est_y.push_back(r.est_yield);
            est_r.push_back(r.est_return);
            ref_y.push_back(have_truth ? *r.true_yield : r.obs_yield);
            ref_r.push_back(have_truth ? *r.true_return : r.obs_return);
        }
        const std::string reference = have_truth ? "truth" : "observation";
        out.push_back({f, "yield", reference, rmse(est_y, ref_y)});
        out.push_back({f, "return", reference, rmse(est_r, ref_r)});
    }
    return out;
}

void write_metrics(const std::vector<MetricRow>& metrics, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << "filter,variable,reference,rmse\n";
    for (const auto& m : metrics) {
        out << m.filter << ',' << m.variable << ',' << m.reference << ','
            << format_number(m.rmse) << '\n';
    }
    if (!out) {
        throw DataError("write to '" + path.string() + "' failed");
    }
}

namespace {

void ensure_out_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
}

}  // namespace

void cmd_simulate(const RunConfig& cfg, std::ostream& out)
{
    if (!cfg.simulation) {
        throw ConfigError("config field 'simulation' is missing");
    }
    if (cfg.input) {
        throw ConfigError("simulate takes no 'input'");
    }
    const SystemMatrices m = model_from(cfg, out);
    const Dataset data = resolve_dataset(cfg, m);

    SeriesFrame series, truth;
    for (std::size_t i = 0; i < data.observations.size(); ++i) {
        series.rows.push_back({data.years[i], data.observations[i].Y1, data.observations[i].Y2});
        truth.rows.push_back({data.years[i], (*data.truth)[i].X, (*data.truth)[i].dR});
    }
    ensure_out_dir(cfg.out);
    write_series(series, cfg.out / "series.csv");
    write_series(truth, cfg.out / "truth.csv");
    out << "seed " << cfg.seed << ", " << series.rows.size() << " rows -> "
        << (cfg.out / "series.csv").string() << ", " << (cfg.out / "truth.csv").string() << '\n';
}

void cmd_filter(const RunConfig& cfg, std::ostream& out)
{
    const SystemMatrices m = model_from(cfg, out);
    const Dataset data = resolve_dataset(cfg, m);
    const ResultFrame frame = run_filter(cfg.filter, m, data, cfg);
    const auto metrics = compute_metrics(frame);

    ensure_out_dir(cfg.out);
    const std::string tag = to_string(cfg.filter);
    write_results(frame, cfg.out / ("results_" + tag + ".csv"));
    write_metrics(metrics, cfg.out / ("metrics_" + tag + ".csv"));
    out << tag << ": " << frame.rows.size() << " steps, seed " << cfg.seed << '\n';
    print_metrics(metrics, out);
}

void cmd_compare(const RunConfig& cfg, std::ostream& out)
{
    const SystemMatrices m = model_from(cfg, out);
    const Dataset data = resolve_dataset(cfg, m);
    ResultFrame combined;
    for (FilterKind kind : {FilterKind::kf, FilterKind::ukf, FilterKind::pff}) {
        ResultFrame frame = run_filter(kind, m, data, cfg);
        combined.rows.insert(combined.rows.end(), frame.rows.begin(), frame.rows.end());
    }
    const auto metrics = compute_metrics(combined);

    ensure_out_dir(cfg.out);
    write_results(combined, cfg.out / "results.csv");
    write_metrics(metrics, cfg.out / "metrics.csv");
    write_plot_script(cfg.out / "plot.gp", "results.csv");
    out << "compare: " << combined.rows.size() << " rows, seed " << cfg.seed << '\n';
    print_metrics(metrics, out);
}

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> input;
    std::optional<std::string> truth;
    std::optional<std::string> filter;
    std::optional<double> w0;
    std::optional<std::uint64_t> sigma_count;
    std::optional<bool> noise_injection;
    std::optional<std::uint64_t> particles;
    std::optional<double> dlambda;
    std::optional<std::string> scheme;
    std::optional<bool> diffusion;
    std::optional<double> sigma2_scale;
    std::optional<std::string> rho_policy;
    std::optional<double> rho;
    std::optional<std::vector<double>> z0;
    std::optional<std::uint64_t> steps;
};

void add_shared_options(CLI::App* sub, Overrides& o)
{
    sub->add_option("--config", o.config, "JSON config file");
    sub->add_option("--seed", o.seed, "Run seed (falls back to DRIFTBENCH_SEED)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--input", o.input, "Input series CSV (year,yield,return)");
    sub->add_option("--truth", o.truth, "True-state CSV matching --input");
    sub->add_option("--filter", o.filter, "kf|ukf|pff");
    sub->add_option("--w0", o.w0, "UKF central weight");
    sub->add_option("--sigma-count", o.sigma_count, "UKF non-central sigma points (2 Nx)");
    sub->add_option("--noise-injection", o.noise_injection, "UKF: propagate through noisy plant");
    sub->add_option("--particles", o.particles, "PFF particle count");
    sub->add_option("--dlambda", o.dlambda, "PFF pseudo-time step");
    sub->add_option("--scheme", o.scheme, "PFF Euler scheme: explicit|implicit");
    sub->add_option("--diffusion", o.diffusion, "PFF diffusion on/off");
    sub->add_option("--sigma2-scale", o.sigma2_scale, "PFF likelihood covariance scale on V^2");
    sub->add_option("--rho-policy", o.rho_policy, "reject|clamp");
    sub->add_option("--rho", o.rho, "Override model parameter rho");
    sub->add_option("--z0", o.z0, "Simulation initial state: yield return")->expected(2);
    sub->add_option("--steps", o.steps, "Simulation length");
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig build_config(const Overrides& o)
{
    RunConfig cfg;
    if (!o.config.empty()) {
        apply_json(cfg, read_file(o.config));
    }
    if (o.seed) {
        cfg.seed = *o.seed;
    } else if (!cfg.seed_configured) {
        if (const char* env = std::getenv("DRIFTBENCH_SEED"); env && *env) {
            const std::string_view s(env);
            std::uint64_t v = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size()) {
                throw ConfigError("DRIFTBENCH_SEED is not an unsigned integer");
            }
            cfg.seed = v;
        }
    }
    if (o.out) cfg.out = *o.out;
    if (o.input) cfg.input = *o.input;
    if (o.truth) cfg.truth = *o.truth;
    if (o.filter) cfg.filter = parse_filter(*o.filter, "--filter");
    if (o.w0) cfg.ukf.W0 = *o.w0;
    if (o.sigma_count) set_sigma_count(cfg.ukf, *o.sigma_count, "--sigma-count");
    if (o.noise_injection) cfg.ukf.noise_injection = *o.noise_injection;
    if (o.particles) cfg.pff.n_particles = *o.particles;
    if (o.dlambda) cfg.pff.d_lambda = *o.dlambda;
    if (o.scheme) cfg.pff.scheme = parse_scheme(*o.scheme, "--scheme");
    if (o.diffusion) cfg.pff.diffusion = *o.diffusion;
    if (o.sigma2_scale) cfg.pff.sigma2_scale = *o.sigma2_scale;
    if (o.rho_policy) cfg.rho_policy = parse_rho_policy(*o.rho_policy, "--rho-policy");
    if (o.rho) cfg.params["rho"] = *o.rho;
    if (o.z0 || o.steps) {
        if (!cfg.simulation) cfg.simulation.emplace();
        if (o.z0) cfg.simulation->z0 = State{(*o.z0)[0], (*o.z0)[1]};
        if (o.steps) cfg.simulation->n_steps = *o.steps;
    }
    // a file input on the command line replaces a configured simulation
    if (o.input && !o.z0 && !o.steps) cfg.simulation.reset();

    validate(cfg.ukf);
    validate(cfg.pff);
    return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"State estimation on the dividend-yield / real-return model", "driftbench"};
    app.require_subcommand(1);
    Overrides o;
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Simulate a series and its truth");
    CLI::App* filter_cmd = app.add_subcommand("filter", "Run one filter");
    CLI::App* compare_cmd = app.add_subcommand("compare", "Run kf, ukf and pff side by side");
    for (CLI::App* sub : {simulate_cmd, filter_cmd, compare_cmd}) {
        add_shared_options(sub, o);
    }

    std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(reversed.begin(), reversed.end());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::ok : ExitCode::config_error;
    }

    try {
        const RunConfig cfg = build_config(o);
        if (simulate_cmd->parsed()) {
            cmd_simulate(cfg, out);
        } else if (filter_cmd->parsed()) {
            cmd_filter(cfg, out);
        } else {
            cmd_compare(cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return ExitCode::data_error;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return ExitCode::numerical_error;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "data error: " << e.what() << '\n';
        return ExitCode::data_error;
    }
    return ExitCode::ok;
}

}  // namespace driftbench::cli
