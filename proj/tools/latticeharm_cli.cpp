// latticeharm command-line front end: every subcommand maps onto one
// library operation, reads/writes JSON, and echoes its resolved
// configuration for reproducibility.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "latticeharm/heat.hpp"
#include "latticeharm/io.hpp"
#include "latticeharm/parallel.hpp"
#include "latticeharm/regularity.hpp"
#include "latticeharm/spaces.hpp"
#include "latticeharm/stft.hpp"
#include "latticeharm/version.hpp"

namespace lh = latticeharm;
using lh::Json;

namespace {

/// Failed numeric check (exit code 3, distinct from bad input).
struct ToleranceFailure : lh::Error {
    Json details;
    ToleranceFailure(const std::string& msg, Json d) : Error(msg), details(std::move(d)) {}
};

lh::LatticeBasis parse_basis_arg(const std::string& arg) {
    auto identity_scaled = [](int d, double scale) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d) * scale;
        return lh::LatticeBasis(m);
    };
    if (arg.rfind("id", 0) == 0 && arg.size() > 2) {
        return identity_scaled(std::stoi(arg.substr(2)), 1.0);
    }
    if (arg.rfind("twopi", 0) == 0 && arg.size() > 5) {
        return identity_scaled(std::stoi(arg.substr(5)), lh::kTwoPi);
    }
    if (!arg.empty() && arg.front() == '{') {
        return lh::basis_from_json(Json::parse(arg));
    }
    return lh::basis_from_json(lh::load_json_file(arg));
}

lh::WeightSpec parse_weight_arg(const std::string& arg) {
    if (arg == "one") return lh::WeightSpec::polynomial(0.0);
    if (arg.rfind("polynomial:", 0) == 0) {
        return lh::WeightSpec::polynomial(std::stod(arg.substr(11)));
    }
    if (arg.rfind("subexponential:", 0) == 0) {
        const std::string rest = arg.substr(15);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) {
            throw lh::ValidationError("subexponential weight needs \"r,s\"");
        }
        return lh::WeightSpec::sub_exponential(std::stod(rest.substr(0, comma)),
                                               std::stod(rest.substr(comma + 1)));
    }
    if (!arg.empty() && arg.front() == '{') return lh::weight_from_json(Json::parse(arg));
    return lh::weight_from_json(lh::load_json_file(arg));
}

std::vector<double> parse_exponents(const std::string& arg) {
    std::vector<double> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        out.push_back(tok == "inf" ? lh::kInfExponent : std::stod(tok));
    }
    return out;
}

template <class T>
std::vector<T> parse_int_list(const std::string& arg) {
    std::vector<T> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(static_cast<T>(std::stoll(tok)));
    return out;
}

std::vector<double> parse_double_list(const std::string& arg) {
    std::vector<double> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

lh::MixedNormSpec parse_norm_spec(int dim, const std::string& q_arg, const std::string& tau_arg) {
    lh::MixedNormSpec spec;
    spec.q = parse_exponents(q_arg);
    if (spec.q.size() == 1 && dim > 1) spec.q.assign(static_cast<std::size_t>(dim), spec.q[0]);
    if (tau_arg.empty()) {
        spec.tau.resize(static_cast<std::size_t>(dim));
        for (std::size_t k = 0; k < spec.tau.size(); ++k) spec.tau[k] = k;
    } else {
        spec.tau = parse_int_list<std::size_t>(tau_arg);
    }
    spec.validate(dim);
    return spec;
}

Json q_to_json(const std::vector<double>& q) {
    Json out = Json::array();
    for (const double v : q) {
        if (std::isinf(v)) {
            out.push_back("inf");
        } else {
            out.push_back(v);
        }
    }
    return out;
}

void emit(const std::string& out_path, const std::string& command, const Json& config,
          Json payload) {
    Json envelope;
    envelope["version"] = lh::kVersion;
    envelope["command"] = command;
    envelope["config"] = config;
    for (auto& [key, value] : payload.items()) envelope[key] = std::move(value);
    const std::string text = lh::dump_deterministic(envelope);
    if (out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw lh::ValidationError("cannot write to " + out_path);
        f << text;
    }
}

struct CommonOpts {
    std::string out = "-";
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out, "Output path, or - for stdout")->capture_default_str();
    cmd->add_option("--threads", opts.threads,
                    "Worker threads (0 = LATTICEHARM_THREADS env or all cores)");
}

void apply_threads(const CommonOpts& opts) {
    int n = opts.threads;
    if (n == 0) {
        if (const char* env = std::getenv("LATTICEHARM_THREADS")) n = std::atoi(env);
    }
    lh::set_max_threads(n);
}

int run(int argc, char** argv) {
    CLI::App app{"latticeharm: Fourier analysis of periodic distributions on parallelepiped "
                 "lattices (series, STFT identities, regularity fits, mixed/modulation norms, "
                 "duality, heat flow)"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON file whose keys mirror the subcommand's long options");

    // ---- lattice ----
    auto* lattice_cmd = app.add_subcommand("lattice", "Dual basis and lattice geometry");
    struct {
        std::string basis = "id2";
        double radius = -1.0;
        CommonOpts common;
    } lattice_opts;
    lattice_cmd->add_option("--basis", lattice_opts.basis,
                            "Basis: id<d>, twopi<d>, inline JSON or file")
        ->capture_default_str();
    lattice_cmd->add_option("--radius", lattice_opts.radius,
                            "Also enumerate dual indices with |point| <= radius");
    add_common(lattice_cmd, lattice_opts.common);

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "Seed-stable random series with planted decay");
    struct {
        std::string kind = "gevrey";
        double s = 1.0;
        double r = 1.0;
        double radius = 40.0;
        std::uint64_t seed = 0;
        std::string basis = "twopi1";
        CommonOpts common;
    } gen_opts;
    gen_cmd->add_option("--kind", gen_opts.kind, "Generator kind (gevrey)")->capture_default_str();
    gen_cmd->add_option("--s", gen_opts.s, "Gevrey order of the planted decay")
        ->capture_default_str();
    gen_cmd->add_option("--r", gen_opts.r, "Planted rate (0 = bounded, < 0 = growth)")
        ->capture_default_str();
    gen_cmd->add_option("--radius", gen_opts.radius, "Support radius in dual space")
        ->capture_default_str();
    gen_cmd->add_option("--seed", gen_opts.seed, "PRNG seed")->capture_default_str();
    gen_cmd->add_option("--basis", gen_opts.basis, "Lattice basis")->capture_default_str();
    add_common(gen_cmd, gen_opts.common);

    // ---- analyze ----
    auto* analyze_cmd = app.add_subcommand("analyze", "Fourier coefficients from samples");
    struct {
        std::string samples;
        double max_radius = 0.0;
        CommonOpts common;
    } analyze_opts;
    analyze_cmd->add_option("--samples", analyze_opts.samples, "Samples JSON file")->required();
    analyze_cmd->add_option("--max-radius", analyze_opts.max_radius,
                            "Largest dual-point radius to recover")
        ->required();
    add_common(analyze_cmd, analyze_opts.common);

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "Evaluate a series on a grid or point list");
    struct {
        std::string series;
        int grid_n = 0;
        std::string points;
        CommonOpts common;
    } synth_opts;
    synth_cmd->add_option("--series", synth_opts.series, "Series JSON file")->required();
    synth_cmd->add_option("--grid", synth_opts.grid_n, "Sample on an n-per-axis grid over E");
    synth_cmd->add_option("--points", synth_opts.points,
                          "JSON file {\"points\": [[coords], ...]} to evaluate at");
    add_common(synth_cmd, synth_opts.common);

    // ---- stft ----
    auto* stft_cmd = app.add_subcommand("stft", "Dump the STFT table on the documented grids");
    struct {
        std::string series;
        double sigma = 1.0;
        double tol = 1e-9;
        int x_points = 0;
        double xi_radius = 0.0;
        double xi_spacing = 0.0;
        CommonOpts common;
    } stft_opts;
    stft_cmd->add_option("--series", stft_opts.series, "Series JSON file")->required();
    stft_cmd->add_option("--sigma", stft_opts.sigma, "Gaussian window width")
        ->capture_default_str();
    stft_cmd->add_option("--tol", stft_opts.tol, "Tail tolerance for the default grids")
        ->capture_default_str();
    stft_cmd->add_option("--x-points", stft_opts.x_points, "Override x nodes per axis");
    stft_cmd->add_option("--xi-radius", stft_opts.xi_radius, "Override xi box radius");
    stft_cmd->add_option("--xi-spacing", stft_opts.xi_spacing, "Override xi spacing");
    add_common(stft_cmd, stft_opts.common);

    // ---- coeff-stft ----
    auto* coeff_cmd =
        app.add_subcommand("coeff-stft", "Recover coefficients through the STFT formula");
    struct {
        std::string series;
        double sigma = 1.0;
        double tol = 1e-9;
        std::string alpha;
        double check_tol = 1e-6;
        CommonOpts common;
    } coeff_opts;
    coeff_cmd->add_option("--series", coeff_opts.series, "Series JSON file")->required();
    coeff_cmd->add_option("--sigma", coeff_opts.sigma, "Gaussian window width")
        ->capture_default_str();
    coeff_cmd->add_option("--tol", coeff_opts.tol, "Grid tail tolerance")->capture_default_str();
    coeff_cmd->add_option("--alpha", coeff_opts.alpha,
                          "Comma-separated index to query (default: whole support)");
    coeff_cmd->add_option("--check-tol", coeff_opts.check_tol,
                          "Exit 3 when max |via-STFT - direct| exceeds this")
        ->capture_default_str();
    add_common(coeff_cmd, coeff_opts.common);

    // ---- parseval-check ----
    auto* parseval_cmd = app.add_subcommand(
        "parseval-check", "STFT double integral against the coefficient pairing");
    struct {
        std::string series;
        std::string series2;
        double sigma = 1.0;
        double tol = 1e-9;
        double check_tol = 1e-6;
        CommonOpts common;
    } parseval_opts;
    parseval_cmd->add_option("--series", parseval_opts.series, "First series")->required();
    parseval_cmd->add_option("--series2", parseval_opts.series2, "Second series")->required();
    parseval_cmd->add_option("--sigma", parseval_opts.sigma, "Gaussian window width")
        ->capture_default_str();
    parseval_cmd->add_option("--tol", parseval_opts.tol, "Grid tail tolerance")
        ->capture_default_str();
    parseval_cmd->add_option("--check-tol", parseval_opts.check_tol,
                             "Exit 3 when the relative error exceeds this")
        ->capture_default_str();
    add_common(parseval_cmd, parseval_opts.common);

    // ---- classify ----
    auto* classify_cmd = app.add_subcommand("classify", "Fit and classify coefficient decay");
    struct {
        std::string series;
        std::size_t min_shells = 8;
        double residual_threshold = 0.5;
        CommonOpts common;
    } classify_opts;
    classify_cmd->add_option("--series", classify_opts.series, "Series JSON file")->required();
    classify_cmd->add_option("--min-shells", classify_opts.min_shells,
                             "Shell count below which the series is a trig polynomial")
        ->capture_default_str();
    classify_cmd->add_option("--residual-threshold", classify_opts.residual_threshold,
                             "Exponential-family acceptance threshold")
        ->capture_default_str();
    add_common(classify_cmd, classify_opts.common);

    // ---- norm ----
    auto* norm_cmd = app.add_subcommand("norm", "Periodic-space and modulation norms");
    struct {
        std::string series;
        std::string omega = "one";
        std::string q = "inf";
        std::string tau;
        double sigma = 1.0;
        double tol = 1e-9;
        CommonOpts common;
    } norm_opts;
    norm_cmd->add_option("--series", norm_opts.series, "Series JSON file")->required();
    norm_cmd->add_option("--omega", norm_opts.omega,
                         "Weight: one, polynomial:t, subexponential:r,s, JSON or file")
        ->capture_default_str();
    norm_cmd->add_option("--q", norm_opts.q, "Exponents, e.g. 2 or 1,inf")->capture_default_str();
    norm_cmd->add_option("--tau", norm_opts.tau, "Axis permutation (0-based, comma-separated)");
    norm_cmd->add_option("--sigma", norm_opts.sigma, "Gaussian window width")
        ->capture_default_str();
    norm_cmd->add_option("--tol", norm_opts.tol, "Grid tail tolerance")->capture_default_str();
    add_common(norm_cmd, norm_opts.common);

    // ---- pairing ----
    auto* pairing_cmd = app.add_subcommand("pairing", "Coefficient pairing of two series");
    struct {
        std::string series;
        std::string series2;
        bool bilinear = false;
        CommonOpts common;
    } pairing_opts;
    pairing_cmd->add_option("--series", pairing_opts.series, "First series")->required();
    pairing_cmd->add_option("--series2", pairing_opts.series2, "Second series")->required();
    pairing_cmd->add_flag("--bilinear", pairing_opts.bilinear,
                          "Use <f,g>_E instead of the sesquilinear (f,g)_E");
    add_common(pairing_cmd, pairing_opts.common);

    // ---- duality ----
    auto* duality_cmd =
        app.add_subcommand("duality", "Hoelder duality gap, with an extremal witness by default");
    struct {
        std::string series;
        std::string series2;
        std::string omega = "one";
        double q = 2.0;
        CommonOpts common;
    } duality_opts;
    duality_cmd->add_option("--series", duality_opts.series, "Series JSON file")->required();
    duality_cmd->add_option("--series2", duality_opts.series2,
                            "Partner series (default: the dual witness of --series)");
    duality_cmd->add_option("--omega", duality_opts.omega, "Weight")->capture_default_str();
    duality_cmd->add_option("--q", duality_opts.q, "Exponent in [1, inf)")->capture_default_str();
    add_common(duality_cmd, duality_opts.common);

    // ---- heat ----
    auto* heat_cmd = app.add_subcommand("heat", "Spectral heat flow trajectory");
    struct {
        std::string series;
        std::string times = "0,0.1";
        bool classify_states = false;
        CommonOpts common;
    } heat_opts;
    heat_cmd->add_option("--series", heat_opts.series, "Initial data series")->required();
    heat_cmd->add_option("--times", heat_opts.times, "Comma-separated times")
        ->capture_default_str();
    heat_cmd->add_flag("--classify", heat_opts.classify_states, "Attach a report per state");
    add_common(heat_cmd, heat_opts.common);

    // ---- moderate-check ----
    auto* moderate_cmd = app.add_subcommand("moderate-check", "Monte Carlo moderate-weight check");
    struct {
        std::string omega = "polynomial:2";
        std::string v;
        int dim = 1;
        double radius = 20.0;
        std::size_t samples = 20000;
        std::uint64_t seed = 0;
        CommonOpts common;
    } moderate_opts;
    moderate_cmd->add_option("--omega", moderate_opts.omega, "Weight to test")
        ->capture_default_str();
    moderate_cmd->add_option("--v", moderate_opts.v,
                             "Submultiplicative companion (default: omega's own)");
    moderate_cmd->add_option("--dim", moderate_opts.dim, "Dimension")->capture_default_str();
    moderate_cmd->add_option("--radius", moderate_opts.radius, "Sampling ball radius")
        ->capture_default_str();
    moderate_cmd->add_option("--samples", moderate_opts.samples, "Sample count")
        ->capture_default_str();
    moderate_cmd->add_option("--seed", moderate_opts.seed, "PRNG seed")->capture_default_str();
    add_common(moderate_cmd, moderate_opts.common);

    // --config: translate a JSON object into argv for the chosen subcommand,
    // rejecting keys that do not name one of its options
    std::vector<std::string> argv_vec(argv + 1, argv + argc);
    auto config_pos = std::find(argv_vec.begin(), argv_vec.end(), "--config");
    if (config_pos != argv_vec.end() && config_pos + 1 != argv_vec.end() &&
        config_pos + 2 != argv_vec.end()) {
        const std::string path = *(config_pos + 1);
        const std::string sub = *(config_pos + 2);
        CLI::App* target = app.get_subcommand_no_throw(sub);
        if (target == nullptr) throw lh::ValidationError("unknown subcommand: " + sub);
        const Json cfg = lh::load_json_file(path);
        if (!cfg.is_object()) throw lh::ValidationError("--config file must hold a JSON object");
        std::vector<std::string> extra;
        for (const auto& [key, value] : cfg.items()) {
            const std::string opt_name = "--" + key;
            if (target->get_option_no_throw(opt_name) == nullptr) {
                throw lh::ValidationError("config key \"" + key + "\" is not an option of " + sub);
            }
            if (value.is_boolean()) {
                if (value.get<bool>()) extra.push_back(opt_name);
            } else {
                extra.push_back(opt_name);
                extra.push_back(value.is_string() ? value.get<std::string>() : value.dump());
            }
        }
        argv_vec.erase(config_pos, config_pos + 2);
        argv_vec.insert(std::find(argv_vec.begin(), argv_vec.end(), sub) + 1, extra.begin(),
                        extra.end());
    }
    {
        std::vector<const char*> raw;
        raw.push_back(argv[0]);
        for (const auto& s : argv_vec) raw.push_back(s.c_str());
        app.parse(static_cast<int>(raw.size()), raw.data());
    }

    if (lattice_cmd->parsed()) {
        apply_threads(lattice_opts.common);
        const lh::LatticeBasis basis = parse_basis_arg(lattice_opts.basis);
        Json config{{"basis", lattice_opts.basis}};
        Json payload;
        payload["dim"] = basis.dim();
        payload["volume"] = basis.volume();
        payload["condition"] = basis.condition();
        payload["dual"] = lh::basis_to_json(lh::LatticeBasis(lh::dual_basis(basis).matrix()));
        if (lattice_opts.radius >= 0.0) {
            config["radius"] = lattice_opts.radius;
            Json indices = Json::array();
            for (const auto& j : lh::enumerate_dual_lattice(basis, lattice_opts.radius)) {
                Json idx = Json::array();
                for (const auto v : j) idx.push_back(v);
                indices.push_back(std::move(idx));
            }
            payload["indices"] = std::move(indices);
        }
        emit(lattice_opts.common.out, "lattice", config, payload);
        return 0;
    }

    if (gen_cmd->parsed()) {
        apply_threads(gen_opts.common);
        if (gen_opts.kind != "gevrey") {
            throw lh::ValidationError("unknown generator kind: " + gen_opts.kind);
        }
        const lh::LatticeBasis basis = parse_basis_arg(gen_opts.basis);
        const lh::FourierSeries series =
            lh::make_gevrey_series(basis, gen_opts.s, gen_opts.r, gen_opts.radius, gen_opts.seed);
        Json config{{"kind", gen_opts.kind}, {"s", gen_opts.s},       {"r", gen_opts.r},
                    {"radius", gen_opts.radius}, {"seed", gen_opts.seed}, {"basis", gen_opts.basis}};
        emit(gen_opts.common.out, "gen", config, lh::series_to_json(series));
        return 0;
    }

    if (analyze_cmd->parsed()) {
        apply_threads(analyze_opts.common);
        const lh::PeriodicSamples samples =
            lh::samples_from_json(lh::load_json_file(analyze_opts.samples));
        const lh::FourierSeries series = lh::analyze(samples, analyze_opts.max_radius);
        Json config{{"samples", analyze_opts.samples}, {"max-radius", analyze_opts.max_radius}};
        emit(analyze_opts.common.out, "analyze", config, lh::series_to_json(series));
        return 0;
    }

    if (synth_cmd->parsed()) {
        apply_threads(synth_opts.common);
        const lh::FourierSeries series =
            lh::series_from_json(lh::load_json_file(synth_opts.series));
        Json config{{"series", synth_opts.series}};
        if (synth_opts.grid_n > 0) {
            config["grid"] = synth_opts.grid_n;
            const lh::PeriodicSamples samples = lh::synthesize_on_grid(series, synth_opts.grid_n);
            emit(synth_opts.common.out, "synth", config, lh::samples_to_json(samples));
            return 0;
        }
        if (synth_opts.points.empty()) {
            throw lh::ValidationError("synth needs --grid or --points");
        }
        config["points"] = synth_opts.points;
        const Json pts_json = lh::load_json_file(synth_opts.points);
        const Json& pts = pts_json.contains("points") ? pts_json["points"] : pts_json;
        std::vector<Eigen::VectorXd> points;
        for (const Json& p : pts) {
            Eigen::VectorXd x(p.size());
            for (std::size_t k = 0; k < p.size(); ++k) x[static_cast<Eigen::Index>(k)] = p[k];
            points.push_back(std::move(x));
        }
        const std::vector<lh::Complex> values = lh::synthesize(series, points);
        Json payload;
        payload["points"] = pts;
        Json vals = Json::array();
        for (const auto& z : values) vals.push_back(Json::array({z.real(), z.imag()}));
        payload["values"] = std::move(vals);
        emit(synth_opts.common.out, "synth", config, payload);
        return 0;
    }

    if (stft_cmd->parsed()) {
        apply_threads(stft_opts.common);
        const lh::FourierSeries series = lh::series_from_json(lh::load_json_file(stft_opts.series));
        const lh::GaussianWindow window(stft_opts.sigma, series.lattice().dim());
        lh::StftGridSpec spec = lh::suggest_stft_grid(series, nullptr, window, stft_opts.tol);
        if (stft_opts.x_points > 0) spec.x_points = stft_opts.x_points;
        if (stft_opts.xi_radius > 0.0) spec.xi_radius = stft_opts.xi_radius;
        if (stft_opts.xi_spacing > 0.0) spec.xi_spacing = stft_opts.xi_spacing;
        Json config{{"series", stft_opts.series},   {"sigma", stft_opts.sigma},
                    {"tol", stft_opts.tol},         {"x-points", spec.x_points},
                    {"xi-radius", spec.xi_radius},  {"xi-spacing", spec.xi_spacing}};
        const lh::StftTable table = lh::compute_stft_table(series, window, spec);
        emit(stft_opts.common.out, "stft", config, lh::stft_table_to_json(window, table));
        return 0;
    }

    if (coeff_cmd->parsed()) {
        apply_threads(coeff_opts.common);
        const lh::FourierSeries series =
            lh::series_from_json(lh::load_json_file(coeff_opts.series));
        const lh::GaussianWindow window(coeff_opts.sigma, series.lattice().dim());
        const lh::StftGridSpec spec = lh::suggest_stft_grid(series, nullptr, window, coeff_opts.tol);
        std::vector<lh::IndexVec> queries;
        if (coeff_opts.alpha.empty()) {
            for (const auto& [alpha, c] : series.coeffs()) queries.push_back(alpha);
        } else {
            queries.push_back(parse_int_list<std::int64_t>(coeff_opts.alpha));
        }
        Json entries = Json::array();
        double max_err = 0.0;
        for (const auto& alpha : queries) {
            const lh::Complex direct = series.at(alpha);
            const lh::Complex recovered = lh::coefficient_via_stft(series, window, alpha, spec);
            const double err = std::abs(recovered - direct);
            max_err = std::max(max_err, err);
            Json idx = Json::array();
            for (const auto v : alpha) idx.push_back(v);
            entries.push_back(Json{{"index", std::move(idx)},
                                   {"direct", Json::array({direct.real(), direct.imag()})},
                                   {"viaStft", Json::array({recovered.real(), recovered.imag()})},
                                   {"absError", err}});
        }
        Json config{{"series", coeff_opts.series},
                    {"sigma", coeff_opts.sigma},
                    {"tol", coeff_opts.tol},
                    {"alpha", coeff_opts.alpha},
                    {"check-tol", coeff_opts.check_tol}};
        Json payload{{"entries", std::move(entries)}, {"maxAbsError", max_err}};
        emit(coeff_opts.common.out, "coeff-stft", config, payload);
        if (max_err > coeff_opts.check_tol) {
            throw ToleranceFailure("coefficient recovery error exceeds tolerance",
                                   Json{{"maxAbsError", max_err}});
        }
        return 0;
    }

    if (parseval_cmd->parsed()) {
        apply_threads(parseval_opts.common);
        const lh::FourierSeries f = lh::series_from_json(lh::load_json_file(parseval_opts.series));
        const lh::FourierSeries g = lh::series_from_json(lh::load_json_file(parseval_opts.series2));
        const lh::GaussianWindow window(parseval_opts.sigma, f.lattice().dim());
        const lh::StftGridSpec spec = lh::suggest_stft_grid(f, &g, window, parseval_opts.tol);
        const lh::Complex direct = lh::pairing_E(f, g, /*conjugate=*/true);
        const lh::ParsevalResult via = lh::parseval_stft(f, g, window, spec);
        const double scale = std::max(1.0, std::abs(direct));
        const double rel = std::abs(via.value - direct) / scale;
        Json config{{"series", parseval_opts.series},
                    {"series2", parseval_opts.series2},
                    {"sigma", parseval_opts.sigma},
                    {"tol", parseval_opts.tol},
                    {"check-tol", parseval_opts.check_tol}};
        Json payload{{"pairing", Json::array({direct.real(), direct.imag()})},
                     {"stft", Json::array({via.value.real(), via.value.imag()})},
                     {"l1Mass", via.l1_mass},
                     {"relError", rel}};
        emit(parseval_opts.common.out, "parseval-check", config, payload);
        if (rel > parseval_opts.check_tol) {
            throw ToleranceFailure("STFT Parseval identity misses the pairing",
                                   Json{{"relError", rel}});
        }
        return 0;
    }

    if (classify_cmd->parsed()) {
        apply_threads(classify_opts.common);
        const lh::FourierSeries series =
            lh::series_from_json(lh::load_json_file(classify_opts.series));
        lh::ClassifyThresholds thresholds;
        thresholds.min_shells = classify_opts.min_shells;
        thresholds.residual_threshold = classify_opts.residual_threshold;
        const lh::RegularityReport report = lh::classify(series, thresholds);
        Json config{{"series", classify_opts.series},
                    {"min-shells", classify_opts.min_shells},
                    {"residual-threshold", classify_opts.residual_threshold}};
        emit(classify_opts.common.out, "classify", config, lh::report_to_json(report));
        return 0;
    }

    if (norm_cmd->parsed()) {
        apply_threads(norm_opts.common);
        const lh::FourierSeries series = lh::series_from_json(lh::load_json_file(norm_opts.series));
        const lh::WeightSpec omega = parse_weight_arg(norm_opts.omega);
        const int dim = series.lattice().dim();
        const lh::MixedNormSpec spec = parse_norm_spec(dim, norm_opts.q, norm_opts.tau);
        const lh::GaussianWindow window(norm_opts.sigma, dim);
        const lh::StftGridSpec grid = lh::suggest_stft_grid(series, nullptr, window, norm_opts.tol);
        const double periodic = lh::periodic_space_norm(series, omega, spec);
        const double m_norm = lh::modulation_norm_M(series, omega, spec, window, grid);
        const double w_norm = lh::modulation_norm_W(series, omega, spec, window, grid);
        Json tau = Json::array();
        for (const auto a : spec.tau) tau.push_back(a);
        Json config{{"series", norm_opts.series}, {"omega", lh::weight_to_json(omega)},
                    {"q", q_to_json(spec.q)},     {"tau", std::move(tau)},
                    {"sigma", norm_opts.sigma},   {"tol", norm_opts.tol}};
        Json payload{{"periodicSpaceNorm", periodic},
                     {"mNorm", m_norm},
                     {"wNorm", w_norm},
                     {"ratios", Json{{"mOverPeriodic", periodic > 0.0 ? m_norm / periodic : 0.0},
                                     {"wOverM", m_norm > 0.0 ? w_norm / m_norm : 0.0}}}};
        emit(norm_opts.common.out, "norm", config, payload);
        return 0;
    }

    if (pairing_cmd->parsed()) {
        apply_threads(pairing_opts.common);
        const lh::FourierSeries f = lh::series_from_json(lh::load_json_file(pairing_opts.series));
        const lh::FourierSeries g = lh::series_from_json(lh::load_json_file(pairing_opts.series2));
        const lh::Complex value = lh::pairing_E(f, g, !pairing_opts.bilinear);
        Json config{{"series", pairing_opts.series},
                    {"series2", pairing_opts.series2},
                    {"bilinear", pairing_opts.bilinear}};
        Json payload{{"pairing", Json::array({value.real(), value.imag()})},
                     {"normF", lh::norm_E(f)},
                     {"normG", lh::norm_E(g)}};
        emit(pairing_opts.common.out, "pairing", config, payload);
        return 0;
    }

    if (duality_cmd->parsed()) {
        apply_threads(duality_opts.common);
        const lh::FourierSeries f = lh::series_from_json(lh::load_json_file(duality_opts.series));
        const lh::WeightSpec omega = parse_weight_arg(duality_opts.omega);
        Json config{{"series", duality_opts.series},
                    {"series2", duality_opts.series2},
                    {"omega", lh::weight_to_json(omega)},
                    {"q", duality_opts.q}};
        Json payload;
        lh::DualityReport report;
        if (duality_opts.series2.empty()) {
            const lh::FourierSeries witness = lh::dual_witness(f, omega, duality_opts.q);
            report = lh::duality_gap(f, witness, omega, duality_opts.q);
            payload["witness"] = lh::series_to_json(witness);
        } else {
            const lh::FourierSeries g =
                lh::series_from_json(lh::load_json_file(duality_opts.series2));
            report = lh::duality_gap(f, g, omega, duality_opts.q);
        }
        payload["pairing"] = Json::array({report.pairing.real(), report.pairing.imag()});
        payload["bound"] = report.bound;
        payload["ratio"] = report.ratio;
        emit(duality_opts.common.out, "duality", config, payload);
        if (report.ratio > 1.0 + 1e-12) {
            throw ToleranceFailure("duality ratio exceeds the Hoelder bound",
                                   Json{{"ratio", report.ratio}});
        }
        return 0;
    }

    if (heat_cmd->parsed()) {
        apply_threads(heat_opts.common);
        const lh::FourierSeries f0 = lh::series_from_json(lh::load_json_file(heat_opts.series));
        const std::vector<double> times = parse_double_list(heat_opts.times);
        const lh::HeatTrajectory traj = lh::evolve_trajectory(f0, times);
        Json config{{"series", heat_opts.series},
                    {"times", heat_opts.times},
                    {"classify", heat_opts.classify_states}};
        Json payload = lh::trajectory_to_json(traj);
        if (heat_opts.classify_states) {
            Json reports = Json::array();
            for (const auto& state : traj.states) {
                reports.push_back(lh::report_to_json(lh::classify(state)));
            }
            payload["reports"] = std::move(reports);
        }
        emit(heat_opts.common.out, "heat", config, payload);
        return 0;
    }

    if (moderate_cmd->parsed()) {
        apply_threads(moderate_opts.common);
        const lh::WeightSpec omega = parse_weight_arg(moderate_opts.omega);
        const lh::WeightSpec v =
            moderate_opts.v.empty() ? omega.companion() : parse_weight_arg(moderate_opts.v);
        const lh::ModerateReport report =
            lh::moderate_check(omega, v, moderate_opts.dim, moderate_opts.radius,
                               moderate_opts.samples, moderate_opts.seed);
        Json config{{"omega", lh::weight_to_json(omega)},
                    {"v", lh::weight_to_json(v)},
                    {"dim", moderate_opts.dim},
                    {"radius", moderate_opts.radius},
                    {"samples", moderate_opts.samples},
                    {"seed", moderate_opts.seed}};
        Json payload{{"ok", report.ok},
                     {"worstConstant", report.worst_constant},
                     {"declaredConstant", omega.moderate_constant()}};
        emit(moderate_opts.common.out, "moderate-check", config, payload);
        if (!report.ok) {
            throw ToleranceFailure("weight is not moderate against the declared constant",
                                   Json{{"worstConstant", report.worst_constant}});
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ToleranceFailure& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return 3;
    } catch (const lh::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const lh::TailTooLarge& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return 3;
    } catch (const lh::InsufficientSupport& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return 3;
    } catch (const lh::DegenerateFit& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return 3;
    } catch (const lh::BackwardBlowup& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return 3;
    } catch (const lh::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
