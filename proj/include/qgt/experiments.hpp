#pragma once
// Seeded Monte Carlo harness: single trials, success-rate sweeps over m,
// minimum-tests search over n, and empirical overlap-spectrum estimation.
//
// Everything is a pure function of its spec. Per-trial streams are derived
// from (master seed, m, trial index) through SplitMix64 remixing, so trials
// can run on any number of workers in any order and aggregate identically.

#include <cstdint>
#include <optional>
#include <vector>

#include "qgt/decoders.hpp"
#include "qgt/model.hpp"
#include "qgt/pooling.hpp"

namespace qgt {

enum class Decoder { mn, exhaustive };

// Stream keys for the two random draws inside one trial.
inline constexpr std::uint64_t kTruthStreamKey = 1;
inline constexpr std::uint64_t kGraphStreamKey = 2;

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t m,
                         std::uint64_t trial_index);

struct TrialRecord {
    std::uint32_t trial_index = 0;
    bool success = false;
    bool skipped = false; // exhaustive decoder refused by the cap
    std::vector<std::uint32_t> estimate_support; // declared-infected indices
    std::optional<double> score_margin;
    RDiagnostics r_diag;
    double wall_time_seconds = 0.0; // diagnostic only, never serialized
};

// Plants a uniform weight-k truth from the trial stream, generates the
// pooling graph, encodes, decodes, and compares; success means exact
// recovery. The MN path streams the graph without materializing it and is
// bit-identical to decoding the materialized graph.
TrialRecord run_trial(const ProblemParams& params, std::uint64_t trial_seed,
                      Decoder decoder,
                      std::uint64_t cap = kDefaultEnumerationCap);

struct SweepSpec {
    std::uint32_t n = 0;
    double theta = 0.0;
    std::vector<std::uint32_t> m_values; // strictly increasing
    std::uint32_t trials = 0;
    std::uint64_t seed = 0;
    Decoder decoder = Decoder::mn;
    std::uint64_t cap = kDefaultEnumerationCap;
};

struct SweepPoint {
    std::uint32_t m = 0;
    std::uint32_t trials = 0;
    std::uint32_t successes = 0;
    std::uint32_t skipped = 0;
    double rate = 0.0;
    double stderr_ = 0.0; // binomial standard error sqrt(r(1-r)/trials)
    double cond_i_rate = 0.0;
    double cond_ii_rate = 0.0;
    double cond_iii_rate = 0.0;
};

struct SweepResult {
    SweepSpec spec;
    std::uint32_t k = 0;
    std::vector<SweepPoint> points;
};

SweepResult success_sweep(const SweepSpec& spec, std::uint32_t workers = 1);

struct MinTestsResult {
    std::uint32_t n = 0;
    double theta = 0.0;
    std::uint32_t k = 0;
    double target_rate = 0.0;
    std::uint32_t trials = 0;
    std::uint32_t m_required = 0;
    double m_greedy = 0.0;
    double ratio = 0.0; // m_required / m_greedy
    std::uint64_t seed = 0;
};

struct SearchCeilingExceeded : std::runtime_error {
    explicit SearchCeilingExceeded(const std::string& what)
        : std::runtime_error(what) {}
};

// Smallest m whose empirical success rate over `trials` fresh trials
// reaches target_rate, located by exponential bracketing plus bisection
// under the monotonicity assumption. Search stops at ceiling_factor *
// m_greedy. Deterministic given the seed.
MinTestsResult min_tests(std::uint32_t n, double theta, std::uint32_t trials,
                         double target_rate, std::uint64_t seed,
                         std::uint32_t workers = 1,
                         double ceiling_factor = 64.0);

struct ZSpectrumEstimate {
    std::uint32_t n = 0, k = 0, m = 0, trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> mean;       // index l = 0..k
    std::vector<double> stderr_;    //
    std::vector<double> bound_mean; // per-instance first-moment bound, averaged
};

// Monte Carlo mean of the overlap spectrum over independent planted
// instances, with the matching first-moment bound.
ZSpectrumEstimate estimate_z_spectrum(std::uint32_t n, std::uint32_t k,
                                      std::uint32_t m, std::uint32_t trials,
                                      std::uint64_t seed,
                                      std::uint64_t cap = kDefaultEnumerationCap,
                                      std::uint32_t workers = 1);

struct ZEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    double bound_mean = 0.0;
};

ZEstimate estimate_expected_z(std::uint32_t n, std::uint32_t k, std::uint32_t m,
                              std::uint32_t ell, std::uint32_t trials,
                              std::uint64_t seed,
                              std::uint64_t cap = kDefaultEnumerationCap);

} // namespace qgt
