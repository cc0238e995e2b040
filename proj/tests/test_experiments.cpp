#include <cmath>

#include <stdexcept>

#include "doctest.h"

#include "qgt/experiments.hpp"
#include "qgt/io.hpp"
#include "qgt/prng.hpp"
#include "qgt/theory.hpp"

using namespace qgt;

namespace {

// Reference trial that materializes the graph and uses the module-level
// operations end to end.
TrialRecord reference_trial(const ProblemParams& params, std::uint64_t seed) {
    SplitMix64 truth_rng(derive_seed(seed, kTruthStreamKey));
    Configuration truth = Configuration::from_support(
        params.n, sample_subset(params.n, params.k, truth_rng));
    PoolingGraph graph = generate(params, derive_seed(seed, kGraphStreamKey));
    TestResults y = encode(graph, truth);
    DecodeResult decoded = mn_decode(graph, y, params.k, &truth);
    TrialRecord rec;
    rec.success = *decoded.success;
    rec.score_margin = decoded.score_margin;
    rec.r_diag = check_event_r(graph, truth);
    return rec;
}

} // namespace

TEST_CASE("run_trial is deterministic") {
    ProblemParams params = derive_params(300, 0.4, 60);
    TrialRecord a = run_trial(params, 12345, Decoder::mn);
    TrialRecord b = run_trial(params, 12345, Decoder::mn);
    CHECK(a.success == b.success);
    CHECK(a.score_margin == b.score_margin);
    CHECK(a.r_diag.delta_min == b.r_diag.delta_min);
    CHECK(a.r_diag.delta_inf_star == b.r_diag.delta_inf_star);
}

TEST_CASE("streaming trial matches the materialized-graph pipeline") {
    SplitMix64 seeder(5150);
    for (int rep = 0; rep < 15; ++rep) {
        const std::uint32_t n = 20 + seeder.next_index(200);
        const std::uint32_t m = 1 + seeder.next_index(40);
        ProblemParams params = derive_params(n, 0.45, m);
        const std::uint64_t seed = seeder.next();

        TrialRecord fast = run_trial(params, seed, Decoder::mn);
        TrialRecord slow = reference_trial(params, seed);

        CHECK(fast.success == slow.success);
        REQUIRE(fast.score_margin.has_value());
        REQUIRE(slow.score_margin.has_value());
        CHECK(*fast.score_margin == *slow.score_margin);
        CHECK(fast.r_diag.delta_min == slow.r_diag.delta_min);
        CHECK(fast.r_diag.delta_max == slow.r_diag.delta_max);
        CHECK(fast.r_diag.k_min == slow.r_diag.k_min);
        CHECK(fast.r_diag.k_max == slow.r_diag.k_max);
        CHECK(fast.r_diag.delta_inf_star == slow.r_diag.delta_inf_star);
        CHECK(fast.r_diag.distinct_min == slow.r_diag.distinct_min);
        CHECK(fast.r_diag.cond_i == slow.r_diag.cond_i);
        CHECK(fast.r_diag.cond_ii == slow.r_diag.cond_ii);
        CHECK(fast.r_diag.cond_iii == slow.r_diag.cond_iii);
    }
}

TEST_CASE("m = 0 trial succeeds only when the truth is the tie-rule prefix") {
    ProblemParams params = derive_params(12, 0.5, 0); // k = 3
    std::uint32_t successes = 0;
    const std::uint32_t trials = 4000;
    for (std::uint32_t t = 0; t < trials; ++t) {
        const std::uint64_t seed = trial_seed(9, 0, t);
        TrialRecord rec = run_trial(params, seed, Decoder::mn);
        SplitMix64 truth_rng(derive_seed(seed, kTruthStreamKey));
        auto support = sample_subset(12, 3, truth_rng);
        const bool is_prefix = support == std::vector<std::uint32_t>{0, 1, 2};
        CHECK(rec.success == is_prefix);
        successes += rec.success;
    }
    // success probability 1/C(12,3) = 1/220; loose 5-sigma band
    const double expect = trials / 220.0;
    CHECK(successes < expect + 5 * std::sqrt(expect) + 1);
}

TEST_CASE("exhaustive decoder trial recovers small planted instances") {
    ProblemParams params = params_from_counts(14, 2, 30);
    std::uint32_t successes = 0;
    for (std::uint32_t t = 0; t < 20; ++t) {
        TrialRecord rec = run_trial(params, trial_seed(4, 30, t), Decoder::exhaustive);
        CHECK_FALSE(rec.skipped);
        successes += rec.success;
    }
    CHECK(successes >= 18); // at m = 30 the solution is essentially always unique
}

TEST_CASE("exhaustive decoder over the cap is skipped, not failed") {
    ProblemParams params = derive_params(50, 0.5, 5); // C(50,7) ~ 1e8
    TrialRecord rec = run_trial(params, 1, Decoder::exhaustive, 1000);
    CHECK(rec.skipped);
    CHECK_FALSE(rec.success);
}

TEST_CASE("success_sweep validates input and aggregates exactly") {
    SweepSpec spec;
    spec.n = 60;
    spec.theta = 0.4;
    spec.m_values = {0, 10, 40};
    spec.trials = 50;
    spec.seed = 77;
    SweepResult r = success_sweep(spec);
    CHECK(r.k == derive_params(60, 0.4, 0).k);
    REQUIRE(r.points.size() == 3);
    for (const SweepPoint& pt : r.points) {
        CHECK(pt.trials == 50);
        CHECK(pt.rate == doctest::Approx(pt.successes / 50.0));
        CHECK(pt.stderr_ ==
              doctest::Approx(std::sqrt(pt.rate * (1 - pt.rate) / 50.0)));
        CHECK(pt.rate >= 0.0);
        CHECK(pt.rate <= 1.0);
    }
    // more tests only helps in this range
    CHECK(r.points.front().rate <= r.points.back().rate);

    SweepSpec bad = spec;
    bad.m_values = {10, 10};
    CHECK_THROWS_AS(success_sweep(bad), std::invalid_argument);
    bad.m_values = {10};
    bad.trials = 0;
    CHECK_THROWS_AS(success_sweep(bad), std::invalid_argument);
}

TEST_CASE("sweep aggregates are identical at any worker count") {
    SweepSpec spec;
    spec.n = 80;
    spec.theta = 0.35;
    spec.m_values = {5, 15, 25, 35};
    spec.trials = 40;
    spec.seed = 2718;
    SweepResult w1 = success_sweep(spec, 1);
    SweepResult w4 = success_sweep(spec, 4);
    CHECK(io::sweep_csv({w1}) == io::sweep_csv({w4}));

    // byte-identical CSV across repeated runs
    CHECK(io::sweep_csv({success_sweep(spec, 3)}) == io::sweep_csv({w1}));
}

TEST_CASE("trials with one trial give 0/1 rates") {
    SweepSpec spec;
    spec.n = 40;
    spec.theta = 0.3;
    spec.m_values = {2, 20};
    spec.trials = 1;
    spec.seed = 5;
    SweepResult r = success_sweep(spec);
    for (const SweepPoint& pt : r.points)
        CHECK((pt.rate == 0.0 || pt.rate == 1.0));
}

TEST_CASE("min_tests basics") {
    MinTestsResult zero = min_tests(100, 0.3, 20, 0.0, 42);
    CHECK(zero.m_required == 0);

    MinTestsResult a = min_tests(100, 0.3, 30, 0.9, 42);
    MinTestsResult b = min_tests(100, 0.3, 30, 0.9, 42);
    CHECK(a.m_required == b.m_required);
    CHECK(a.m_required > 0);
    CHECK(a.m_greedy == doctest::Approx(compute_thresholds(100, 0.3).m_greedy));
    CHECK(a.ratio == doctest::Approx(a.m_required / a.m_greedy));

    // worker count must not change the answer
    MinTestsResult c = min_tests(100, 0.3, 30, 0.9, 42, 3);
    CHECK(c.m_required == a.m_required);

    // the empirical rate at the returned m clears the target, and the
    // bisection predecessor does not
    ProblemParams params = derive_params(100, 0.3, a.m_required);
    std::uint32_t hits = 0;
    for (std::uint32_t t = 0; t < 30; ++t)
        hits += run_trial(derive_params(100, 0.3, a.m_required),
                          trial_seed(42, a.m_required, t), Decoder::mn)
                    .success;
    CHECK(hits >= 27); // ceil(0.9 * 30)
    (void)params;
}

TEST_CASE("min_tests throws past the search ceiling") {
    // target rate 1.0 with many trials at tiny ceiling cannot be met
    CHECK_THROWS_AS(min_tests(200, 0.3, 50, 1.0, 7, 1, 0.01),
                    SearchCeilingExceeded);
}

TEST_CASE("z spectrum estimate at m=0 matches the combinatorial count") {
    // every weight-k labeling is consistent when there are no tests
    ZSpectrumEstimate est = estimate_z_spectrum(10, 2, 0, 40, 99);
    CHECK(est.mean[0] == doctest::Approx(std::exp(log_binomial(8, 2))));
    CHECK(est.mean[1] == doctest::Approx(2.0 * 8.0));
    CHECK(est.mean[2] == 0.0); // planted configuration excluded
    CHECK(est.stderr_[0] == 0.0);

    ZEstimate one = estimate_expected_z(10, 2, 0, 1, 40, 99);
    CHECK(one.mean == doctest::Approx(16.0));
}

TEST_CASE("z spectrum estimate is deterministic and worker-invariant") {
    ZSpectrumEstimate a = estimate_z_spectrum(20, 2, 6, 200, 31);
    ZSpectrumEstimate b = estimate_z_spectrum(20, 2, 6, 200, 31, kDefaultEnumerationCap, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.bound_mean == b.bound_mean);
}

TEST_CASE("z estimate rejects oversized instances") {
    CHECK_THROWS_AS(estimate_z_spectrum(50, 10, 5, 10, 1),
                    EnumerationCapExceeded);
}
