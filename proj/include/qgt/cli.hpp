#pragma once
// Command-line front door. parse_config turns argv (plus an optional
// key=value config file) into a RunConfig; execute runs it and writes the
// declared artifacts atomically. Flags override config-file keys override
// defaults; unknown keys are rejected.
//
// Exit codes: 0 success, 1 usage error, 2 runtime guard (enumeration cap,
// search ceiling).

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgt::cli {

// "QGT" in ASCII; a fixed default keeps bare invocations reproducible.
inline constexpr std::uint64_t kDefaultSeed = 0x514754;

enum class Subcommand {
    none, gen, run, sweep, min_tests, verify, thresholds, analyze, z_estimate
};
enum class Format { csv, json, gnuplot };

struct RunConfig {
    Subcommand subcommand = Subcommand::none;

    std::uint32_t n = 1000;
    std::vector<std::uint32_t> n_values;   // min-tests
    double theta = 0.3;
    std::vector<double> theta_values;      // sweep, min-tests
    std::uint32_t m = 100;
    std::vector<std::uint32_t> m_values;   // sweep grid
    std::uint32_t k = 0;                   // 0 = derive from theta
    std::vector<std::uint32_t> ell_values; // z-estimate
    std::uint32_t trials = 100;
    double target_rate = 0.95;
    double ceiling_factor = 64.0;
    double c = 2.5;
    std::uint32_t points = 50;
    std::uint64_t cap = 10'000'000;
    std::string fixture;                   // "fig1"
    bool rate_f_table = false;
    std::string decoder = "mn";
    std::uint64_t seed = kDefaultSeed;
    std::uint32_t workers = 1;
    Format format = Format::csv;
    bool format_given = false;
    std::string output_path;               // empty = stdout
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by --help/--version; carries the text to print on stdout.
struct HelpRequested {
    std::string text;
};

RunConfig parse_config(const std::vector<std::string>& args);

int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse + execute + error-to-exit-code mapping; the main() body.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace qgt::cli
