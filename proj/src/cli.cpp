#include "qgt/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "qgt/experiments.hpp"
#include "qgt/io.hpp"
#include "qgt/prng.hpp"
#include "qgt/theory.hpp"

namespace qgt::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": bad integer '" + s + "'");
    }
    if (pos != s.size())
        throw UsageError(std::string(what) + ": bad integer '" + s + "'");
    return v;
}

std::vector<std::uint32_t> parse_u32_list(const std::string& s, const char* what) {
    std::vector<std::uint32_t> out;
    for (const std::string& item : split(s, ','))
        out.push_back(static_cast<std::uint32_t>(parse_u64(item, what)));
    if (out.empty()) throw UsageError(std::string(what) + ": empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const std::string& item : split(s, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": bad number '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + ": empty list");
    return out;
}

// "lo:hi:step" grid or a comma-separated list.
std::vector<std::uint32_t> parse_m_grid(const std::string& s) {
    if (s.find(':') != std::string::npos) {
        auto parts = split(s, ':');
        if (parts.size() != 3)
            throw UsageError("--m: grid must be lo:hi:step");
        const auto lo = static_cast<std::uint32_t>(parse_u64(parts[0], "--m"));
        const auto hi = static_cast<std::uint32_t>(parse_u64(parts[1], "--m"));
        const auto step = static_cast<std::uint32_t>(parse_u64(parts[2], "--m"));
        if (step == 0 || hi < lo) throw UsageError("--m: bad grid bounds");
        std::vector<std::uint32_t> out;
        for (std::uint64_t v = lo; v <= hi; v += step)
            out.push_back(static_cast<std::uint32_t>(v));
        return out;
    }
    return parse_u32_list(s, "--m");
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "gnuplot") return Format::gnuplot;
    throw UsageError("--format: expected csv, json, or gnuplot");
}

// Flat key=value file; '#' starts a comment. Returned as option/value
// pairs to be injected before the explicit flags.
std::vector<std::string> config_file_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    std::vector<std::string> args;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config file: expected key=value, got '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
            key.pop_back();
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
            value.erase(value.begin());
        if (key.empty()) throw UsageError("config file: empty key");
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

struct RawOptions {
    std::string theta_list;
    std::string n_list;
    std::string m_grid;
    std::string ell_list;
    std::string format;
};

} // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    // Extract --config and splice its keys in front of the explicit flags,
    // which therefore win under the take-last policy.
    std::vector<std::string> argv;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config: missing path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            argv.push_back(args[i]);
        }
    }
    if (!config_path.empty()) {
        if (argv.empty())
            throw UsageError("a subcommand is required before --config");
        auto injected = config_file_args(config_path);
        argv.insert(argv.begin() + 1, injected.begin(), injected.end());
    }

    RunConfig cfg;
    RawOptions raw;

    CLI::App app{"quantitative group testing toolkit"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto add_common = [&](CLI::App* sub) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--seed", cfg.seed,
                        "master seed (default 0x514754, fixed for reproducibility)");
        sub->add_option("--output,-o", cfg.output_path,
                        "artifact path (default: stdout)");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a pooling graph and dump it");
    add_common(gen);
    gen->add_option("--n", cfg.n, "population size")->required();
    gen->add_option("--theta", cfg.theta, "sparsity exponent in (0,1)");
    gen->add_option("--m", cfg.m, "number of tests");
    gen->add_option("--dump", cfg.output_path, "dump path (alias of --output)");

    CLI::App* run = app.add_subcommand("run", "run one planted trial");
    add_common(run);
    run->add_option("--n", cfg.n, "population size")->required();
    run->add_option("--theta", cfg.theta, "sparsity exponent");
    run->add_option("--m", cfg.m, "number of tests");
    run->add_option("--decoder", cfg.decoder, "mn or exhaustive");
    run->add_option("--cap", cfg.cap, "exhaustive enumeration cap");

    CLI::App* sweep = app.add_subcommand("sweep", "success rate versus m");
    add_common(sweep);
    sweep->add_option("--n", cfg.n, "population size")->required();
    sweep->add_option("--theta", raw.theta_list,
                      "sparsity exponent(s), comma separated");
    sweep->add_option("--m", raw.m_grid, "m grid as lo:hi:step or comma list")
        ->required();
    sweep->add_option("--trials", cfg.trials, "trials per grid point");
    sweep->add_option("--decoder", cfg.decoder, "mn or exhaustive");
    sweep->add_option("--cap", cfg.cap, "exhaustive enumeration cap");
    sweep->add_option("--workers", cfg.workers, "worker threads");
    sweep->add_option("--format", raw.format, "csv or gnuplot");

    CLI::App* mint = app.add_subcommand(
        "min-tests", "smallest m reaching a target success rate");
    add_common(mint);
    mint->add_option("--n", raw.n_list, "population size(s), comma separated")
        ->required();
    mint->add_option("--theta", raw.theta_list,
                     "sparsity exponent(s), comma separated");
    mint->add_option("--trials", cfg.trials, "trials per probe");
    mint->add_option("--target-rate", cfg.target_rate, "required success rate");
    mint->add_option("--ceiling-factor", cfg.ceiling_factor,
                     "search ceiling as a multiple of m_greedy");
    mint->add_option("--workers", cfg.workers, "worker threads");
    mint->add_option("--format", raw.format, "csv or gnuplot");

    CLI::App* verify = app.add_subcommand(
        "verify", "brute-force solution listing and MN result");
    add_common(verify);
    verify->add_option("--n", cfg.n, "population size");
    verify->add_option("--k", cfg.k, "number of infected (overrides theta)");
    verify->add_option("--theta", cfg.theta, "sparsity exponent");
    verify->add_option("--m", cfg.m, "number of tests");
    verify->add_option("--cap", cfg.cap, "enumeration cap");
    verify->add_option("--fixture", cfg.fixture, "built-in instance (fig1)");

    CLI::App* thresholds =
        app.add_subcommand("thresholds", "closed-form test-count thresholds");
    add_common(thresholds);
    thresholds->add_option("--n", cfg.n, "population size")->required();
    thresholds->add_option("--theta", cfg.theta, "sparsity exponent");
    thresholds->add_option("--format", raw.format, "json or csv");

    CLI::App* analyze =
        app.add_subcommand("analyze", "rate-function tables for plotting");
    add_common(analyze);
    analyze->add_flag("--rate-f", cfg.rate_f_table,
                      "emit (ell, f, f') over the overlap domain");
    analyze->add_option("--n", cfg.n, "population size")->required();
    analyze->add_option("--k", cfg.k, "number of infected")->required();
    analyze->add_option("--c", cfg.c, "tests parameter c");
    analyze->add_option("--points", cfg.points, "grid points");

    CLI::App* zest = app.add_subcommand(
        "z-estimate", "Monte Carlo overlap-spectrum means versus the bound");
    add_common(zest);
    zest->add_option("--n", cfg.n, "population size")->required();
    zest->add_option("--k", cfg.k, "number of infected")->required();
    zest->add_option("--m", cfg.m, "number of tests");
    zest->add_option("--ell", raw.ell_list, "overlap value(s), comma separated")
        ->required();
    zest->add_option("--trials", cfg.trials, "Monte Carlo instances");
    zest->add_option("--cap", cfg.cap, "enumeration cap");
    zest->add_option("--workers", cfg.workers, "worker threads");

    std::vector<const char*> cargv;
    cargv.push_back("qgt");
    for (const std::string& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (gen->parsed()) cfg.subcommand = Subcommand::gen;
    if (run->parsed()) cfg.subcommand = Subcommand::run;
    if (sweep->parsed()) cfg.subcommand = Subcommand::sweep;
    if (mint->parsed()) cfg.subcommand = Subcommand::min_tests;
    if (verify->parsed()) cfg.subcommand = Subcommand::verify;
    if (thresholds->parsed()) cfg.subcommand = Subcommand::thresholds;
    if (analyze->parsed()) cfg.subcommand = Subcommand::analyze;
    if (zest->parsed()) cfg.subcommand = Subcommand::z_estimate;

    if (!raw.theta_list.empty())
        cfg.theta_values = parse_double_list(raw.theta_list, "--theta");
    else
        cfg.theta_values = {cfg.theta};
    if (!raw.n_list.empty()) cfg.n_values = parse_u32_list(raw.n_list, "--n");
    if (!raw.m_grid.empty()) cfg.m_values = parse_m_grid(raw.m_grid);
    if (!raw.ell_list.empty())
        cfg.ell_values = parse_u32_list(raw.ell_list, "--ell");
    if (!raw.format.empty()) {
        cfg.format = parse_format(raw.format);
        cfg.format_given = true;
    }
    if (cfg.decoder != "mn" && cfg.decoder != "exhaustive")
        throw UsageError("--decoder: expected mn or exhaustive");
    for (double th : cfg.theta_values)
        if (!(th > 0.0 && th < 1.0))
            throw UsageError("--theta: values must lie in (0, 1)");
    return cfg;
}

namespace {

void emit(const RunConfig& cfg, std::ostream& out, const std::string& artifact) {
    if (cfg.output_path.empty())
        out << artifact;
    else
        io::atomic_write(cfg.output_path, artifact);
}

int execute_gen(const RunConfig& cfg, std::ostream& out) {
    ProblemParams params = derive_params(cfg.n, cfg.theta, cfg.m);
    emit(cfg, out, dump_graph(generate(params, cfg.seed)));
    return 0;
}

int execute_run(const RunConfig& cfg, std::ostream& out) {
    ProblemParams params = derive_params(cfg.n, cfg.theta, cfg.m);
    const Decoder decoder =
        cfg.decoder == "mn" ? Decoder::mn : Decoder::exhaustive;
    TrialRecord rec =
        run_trial(params, trial_seed(cfg.seed, cfg.m, 0), decoder, cfg.cap);
    emit(cfg, out, io::to_json(rec, params).dump(2) + "\n");
    return 0;
}

int execute_sweep(const RunConfig& cfg, std::ostream& out) {
    if (cfg.format_given && cfg.format == Format::json)
        throw UsageError("sweep: --format must be csv or gnuplot");
    std::vector<SweepResult> sweeps;
    for (double theta : cfg.theta_values) {
        SweepSpec spec;
        spec.n = cfg.n;
        spec.theta = theta;
        spec.m_values = cfg.m_values;
        spec.trials = cfg.trials;
        spec.seed = cfg.seed;
        spec.decoder = cfg.decoder == "mn" ? Decoder::mn : Decoder::exhaustive;
        spec.cap = cfg.cap;
        sweeps.push_back(success_sweep(spec, cfg.workers));
    }
    emit(cfg, out,
         cfg.format == Format::gnuplot ? io::sweep_gnuplot(sweeps)
                                       : io::sweep_csv(sweeps));
    return 0;
}

int execute_min_tests(const RunConfig& cfg, std::ostream& out) {
    if (cfg.format_given && cfg.format == Format::json)
        throw UsageError("min-tests: --format must be csv or gnuplot");
    std::vector<MinTestsResult> rows;
    for (double theta : cfg.theta_values)
        for (std::uint32_t n : cfg.n_values)
            rows.push_back(min_tests(n, theta, cfg.trials, cfg.target_rate,
                                     cfg.seed, cfg.workers, cfg.ceiling_factor));
    emit(cfg, out,
         cfg.format == Format::gnuplot ? io::min_tests_gnuplot(rows)
                                       : io::min_tests_csv(rows));
    return 0;
}

int execute_verify(const RunConfig& cfg, std::ostream& out) {
    PoolingGraph graph;
    Configuration truth;
    if (cfg.fixture == "fig1") {
        Fig1Instance inst = fig1_instance();
        graph = std::move(inst.graph);
        truth = std::move(inst.truth);
    } else if (cfg.fixture.empty()) {
        ProblemParams params = cfg.k > 0
                                   ? params_from_counts(cfg.n, cfg.k, cfg.m)
                                   : derive_params(cfg.n, cfg.theta, cfg.m);
        const std::uint64_t ts = trial_seed(cfg.seed, cfg.m, 0);
        SplitMix64 truth_rng(derive_seed(ts, kTruthStreamKey));
        truth = Configuration::from_support(
            params.n, sample_subset(params.n, params.k, truth_rng));
        graph = generate(params, derive_seed(ts, kGraphStreamKey));
    } else {
        throw UsageError("verify: unknown fixture '" + cfg.fixture + "'");
    }

    TestResults y = encode(graph, truth);
    auto solutions = exhaustive_solutions(graph, y, truth.weight(), cfg.cap);
    auto spectrum = overlap_spectrum(graph, y, truth, cfg.cap);
    DecodeResult mn = mn_decode(graph, y, truth.weight(), &truth);

    nlohmann::ordered_json j{
        {"n", graph.n},
        {"m", graph.m},
        {"k", truth.weight()},
        {"truth", truth.to_string()},
        {"y", y.to_csv()},
        {"solution_count", solutions.size()},
    };
    auto sols = nlohmann::ordered_json::array();
    for (const Configuration& s : solutions) sols.push_back(s.to_string());
    j["solutions"] = sols;
    j["z_spectrum"] = spectrum;
    j["mn"] = io::to_json(mn);
    emit(cfg, out, j.dump(2) + "\n");
    return 0;
}

int execute_thresholds(const RunConfig& cfg, std::ostream& out) {
    ThresholdReport report = compute_thresholds(cfg.n, cfg.theta);
    if (cfg.format_given && cfg.format == Format::csv)
        emit(cfg, out, io::thresholds_csv(report));
    else if (!cfg.format_given || cfg.format == Format::json)
        emit(cfg, out, io::to_json(report).dump(2) + "\n");
    else
        throw UsageError("thresholds: --format must be json or csv");
    return 0;
}

int execute_analyze(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.rate_f_table)
        throw UsageError("analyze: --rate-f is the only analysis mode");
    emit(cfg, out, io::rate_table_csv(cfg.n, cfg.k, cfg.c, cfg.points));
    return 0;
}

int execute_z_estimate(const RunConfig& cfg, std::ostream& out) {
    for (std::uint32_t ell : cfg.ell_values)
        if (ell > cfg.k) throw UsageError("--ell: values must be <= k");
    ZSpectrumEstimate est = estimate_z_spectrum(cfg.n, cfg.k, cfg.m, cfg.trials,
                                                cfg.seed, cfg.cap, cfg.workers);
    emit(cfg, out, io::z_estimate_csv(est, cfg.ell_values));
    return 0;
}

} // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    (void)err;
    switch (cfg.subcommand) {
        case Subcommand::gen: return execute_gen(cfg, out);
        case Subcommand::run: return execute_run(cfg, out);
        case Subcommand::sweep: return execute_sweep(cfg, out);
        case Subcommand::min_tests: return execute_min_tests(cfg, out);
        case Subcommand::verify: return execute_verify(cfg, out);
        case Subcommand::thresholds: return execute_thresholds(cfg, out);
        case Subcommand::analyze: return execute_analyze(cfg, out);
        case Subcommand::z_estimate: return execute_z_estimate(cfg, out);
        case Subcommand::none: break;
    }
    throw UsageError("a subcommand is required (see --help)");
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        RunConfig cfg = parse_config(args);
        return execute(cfg, out, err);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const EnumerationCapExceeded& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const SearchCeilingExceeded& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return 1;
    }
}

} // namespace qgt::cli
