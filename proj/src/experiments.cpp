#include "qgt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "qgt/prng.hpp"
#include "qgt/theory.hpp"

namespace qgt {

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t m,
                         std::uint64_t trial_index) {
    return derive_seed(master, m, trial_index);
}

namespace {

// Per-individual tallies packed together so one random access per slot
// touches one cache line; the psi accumulation in the second pass then
// lands on lines already warmed by the first.
struct alignas(8) IndividualCell {
    std::uint64_t psi = 0;
    std::uint32_t degree = 0;
    std::uint32_t distinct = 0;
    std::uint32_t last_test = 0; // 1-based id of the last test seen
    std::uint32_t pad = 0;
};

// Scratch buffers reused across the trials of one worker.
struct TrialScratch {
    std::vector<std::uint8_t> sigma;  // planted labels
    std::vector<std::uint32_t> slots; // one test's slots
    std::vector<IndividualCell> cells;
    std::vector<std::uint64_t> psi;      // copied out for ranking
    std::vector<std::uint32_t> degrees;  //
    std::vector<std::uint32_t> distinct; //
    std::vector<std::uint32_t> y;
};

// One MN trial without materializing the graph: slots are streamed test by
// test in the exact order generate() would draw them, so y, degrees and psi
// match the materialized path slot for slot. diagnostics=false skips the
// distinct-test tracking and score margin (the decode result is unchanged).
TrialRecord run_trial_mn_streaming(const ProblemParams& params,
                                   std::uint64_t seed, TrialScratch& s,
                                   bool diagnostics = true) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint32_t n = params.n;
    const std::uint32_t m = params.m;

    SplitMix64 truth_rng(derive_seed(seed, kTruthStreamKey));
    std::vector<std::uint32_t> support = sample_subset(n, params.k, truth_rng);
    s.sigma.assign(n, 0);
    for (std::uint32_t i : support) s.sigma[i] = 1;

    s.cells.assign(n, IndividualCell{});
    s.y.assign(m, 0);
    s.slots.resize(params.gamma);

    SplitMix64 graph_rng(derive_seed(seed, kGraphStreamKey));
    std::uint64_t delta_inf_star = 0;
    for (std::uint32_t j = 0; j < m; ++j) {
        std::uint32_t yj = 0;
        if (diagnostics) {
            for (std::uint32_t slot = 0; slot < params.gamma; ++slot) {
                const std::uint32_t i = graph_rng.next_index(n);
                s.slots[slot] = i;
                yj += s.sigma[i];
                IndividualCell& cell = s.cells[i];
                ++cell.degree;
                if (cell.last_test != j + 1) {
                    cell.last_test = j + 1;
                    ++cell.distinct;
                }
            }
        } else {
            for (std::uint32_t slot = 0; slot < params.gamma; ++slot) {
                const std::uint32_t i = graph_rng.next_index(n);
                s.slots[slot] = i;
                yj += s.sigma[i];
                ++s.cells[i].degree;
            }
        }
        s.y[j] = yj;
        delta_inf_star += yj;
        for (std::uint32_t slot = 0; slot < params.gamma; ++slot)
            s.cells[s.slots[slot]].psi += yj;
    }

    s.psi.resize(n);
    s.degrees.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        s.psi[i] = s.cells[i].psi;
        s.degrees[i] = s.cells[i].degree;
    }

    TrialRecord rec;
    if (diagnostics) {
        s.distinct.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) s.distinct[i] = s.cells[i].distinct;
        rec.r_diag = r_diagnostics_from_tallies(n, m, params.k, s.degrees,
                                                s.distinct, s.y, delta_inf_star);
    }

    std::vector<std::uint32_t> chosen = mn_select(s.psi, s.degrees, params.k);
    rec.success = std::equal(chosen.begin(), chosen.end(), support.begin(),
                             support.end());
    rec.estimate_support = chosen;

    if (diagnostics && params.k > 0 && params.k < n) {
        const double half_m = m / 2.0;
        std::vector<std::uint8_t> in_estimate(n, 0);
        for (std::uint32_t i : chosen) in_estimate[i] = 1;
        double min_in = std::numeric_limits<double>::infinity();
        double max_out = -std::numeric_limits<double>::infinity();
        for (std::uint32_t i = 0; i < n; ++i) {
            const double pn = s.degrees[i] == 0
                                  ? 0.0
                                  : static_cast<double>(s.psi[i]) * half_m /
                                        s.degrees[i];
            if (in_estimate[i])
                min_in = std::min(min_in, pn);
            else
                max_out = std::max(max_out, pn);
        }
        rec.score_margin = min_in - max_out;
    }
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rec;
}

TrialRecord run_trial_exhaustive(const ProblemParams& params, std::uint64_t seed,
                                 std::uint64_t cap) {
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 truth_rng(derive_seed(seed, kTruthStreamKey));
    Configuration truth = Configuration::from_support(
        params.n, sample_subset(params.n, params.k, truth_rng));
    PoolingGraph graph = generate(params, derive_seed(seed, kGraphStreamKey));
    TestResults y = encode(graph, truth);

    TrialRecord rec;
    rec.r_diag = check_event_r(graph, truth);
    try {
        auto solutions = exhaustive_solutions(graph, y, params.k, cap);
        rec.success = solutions.size() == 1 && solutions.front() == truth;
        if (!solutions.empty())
            rec.estimate_support = solutions.front().support();
    } catch (const EnumerationCapExceeded&) {
        rec.skipped = true;
    }
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rec;
}

// Runs `count` jobs on `workers` threads. Jobs may finish in any order;
// callers store results by index so aggregation stays deterministic.
void parallel_for(std::uint32_t count, std::uint32_t workers,
                  const std::function<void(std::uint32_t, std::uint32_t)>& job) {
    workers = std::max<std::uint32_t>(1, workers);
    if (workers == 1 || count <= 1) {
        for (std::uint32_t i = 0; i < count; ++i) job(i, 0);
        return;
    }
    std::atomic<std::uint32_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::uint32_t spawned = std::min(workers, count);
    pool.reserve(spawned);
    for (std::uint32_t w = 0; w < spawned; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint32_t i = next.fetch_add(1); i < count;
                     i = next.fetch_add(1))
                    job(i, w);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

TrialRecord run_trial(const ProblemParams& params, std::uint64_t seed,
                      Decoder decoder, std::uint64_t cap) {
    if (decoder == Decoder::exhaustive)
        return run_trial_exhaustive(params, seed, cap);
    TrialScratch scratch;
    return run_trial_mn_streaming(params, seed, scratch);
}

SweepResult success_sweep(const SweepSpec& spec, std::uint32_t workers) {
    if (spec.trials < 1)
        throw std::invalid_argument("success_sweep: trials must be >= 1");
    for (std::size_t i = 1; i < spec.m_values.size(); ++i)
        if (spec.m_values[i] <= spec.m_values[i - 1])
            throw std::invalid_argument(
                "success_sweep: m_values must be strictly increasing");

    SweepResult result;
    result.spec = spec;
    result.k = derive_params(spec.n, spec.theta, 0).k;

    const auto points = static_cast<std::uint32_t>(spec.m_values.size());
    const std::uint32_t jobs = points * spec.trials;
    std::vector<TrialRecord> records(jobs);
    std::vector<TrialScratch> scratch(std::max<std::uint32_t>(1, workers));

    parallel_for(jobs, workers, [&](std::uint32_t idx, std::uint32_t worker) {
        const std::uint32_t pi = idx / spec.trials;
        const std::uint32_t t = idx % spec.trials;
        const std::uint32_t m = spec.m_values[pi];
        ProblemParams params = derive_params(spec.n, spec.theta, m);
        const std::uint64_t seed = trial_seed(spec.seed, m, t);
        records[idx] = spec.decoder == Decoder::mn
                           ? run_trial_mn_streaming(params, seed, scratch[worker])
                           : run_trial_exhaustive(params, seed, spec.cap);
        records[idx].trial_index = t;
    });

    result.points.resize(points);
    for (std::uint32_t pi = 0; pi < points; ++pi) {
        SweepPoint& pt = result.points[pi];
        pt.m = spec.m_values[pi];
        pt.trials = spec.trials;
        std::uint32_t cond_i = 0, cond_ii = 0, cond_iii = 0;
        for (std::uint32_t t = 0; t < spec.trials; ++t) {
            const TrialRecord& rec = records[pi * spec.trials + t];
            pt.successes += rec.success ? 1 : 0;
            pt.skipped += rec.skipped ? 1 : 0;
            cond_i += rec.r_diag.cond_i ? 1 : 0;
            cond_ii += rec.r_diag.cond_ii ? 1 : 0;
            cond_iii += rec.r_diag.cond_iii ? 1 : 0;
        }
        const double trials = pt.trials;
        pt.rate = pt.successes / trials;
        pt.stderr_ = std::sqrt(pt.rate * (1.0 - pt.rate) / trials);
        pt.cond_i_rate = cond_i / trials;
        pt.cond_ii_rate = cond_ii / trials;
        pt.cond_iii_rate = cond_iii / trials;
    }
    return result;
}

namespace {

// Empirical success count at a fixed m; seeds depend only on (master, m, t).
std::uint32_t successes_at(std::uint32_t n, double theta, std::uint32_t m,
                           std::uint32_t trials, std::uint64_t master,
                           std::uint32_t workers,
                           std::vector<TrialScratch>& scratch) {
    ProblemParams params = derive_params(n, theta, m);
    std::vector<std::uint8_t> ok(trials, 0);
    parallel_for(trials, workers, [&](std::uint32_t t, std::uint32_t worker) {
        ok[t] = run_trial_mn_streaming(params, trial_seed(master, m, t),
                                       scratch[worker], false)
                    .success;
    });
    std::uint32_t total = 0;
    for (std::uint8_t v : ok) total += v;
    return total;
}

} // namespace

MinTestsResult min_tests(std::uint32_t n, double theta, std::uint32_t trials,
                         double target_rate, std::uint64_t seed,
                         std::uint32_t workers, double ceiling_factor) {
    if (!(target_rate >= 0.0 && target_rate <= 1.0))
        throw std::invalid_argument("min_tests: target_rate must be in [0, 1]");
    if (trials < 1) throw std::invalid_argument("min_tests: trials must be >= 1");

    MinTestsResult out;
    out.n = n;
    out.theta = theta;
    out.k = derive_params(n, theta, 0).k;
    out.target_rate = target_rate;
    out.trials = trials;
    out.seed = seed;
    out.m_greedy = compute_thresholds(n, theta).m_greedy;

    // smallest success count that reaches the target
    const auto needed = static_cast<std::uint32_t>(
        std::ceil(target_rate * trials - 1e-9));
    std::vector<TrialScratch> scratch(std::max<std::uint32_t>(1, workers));
    auto reaches = [&](std::uint32_t m) {
        return successes_at(n, theta, m, trials, seed, workers, scratch) >= needed;
    };

    const auto ceiling = static_cast<std::uint64_t>(
        std::ceil(ceiling_factor * std::max(1.0, out.m_greedy)));
    if (needed == 0 || reaches(0)) {
        out.m_required = 0;
        out.ratio = 0.0;
        return out;
    }
    std::uint64_t lo = 0, hi = 1;
    while (!reaches(static_cast<std::uint32_t>(hi))) {
        lo = hi;
        hi *= 2;
        if (hi > ceiling)
            throw SearchCeilingExceeded(
                "min_tests: no m below the search ceiling reaches the target rate");
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (reaches(static_cast<std::uint32_t>(mid)))
            hi = mid;
        else
            lo = mid;
    }
    out.m_required = static_cast<std::uint32_t>(hi);
    out.ratio = out.m_required / out.m_greedy;
    return out;
}

ZSpectrumEstimate estimate_z_spectrum(std::uint32_t n, std::uint32_t k,
                                      std::uint32_t m, std::uint32_t trials,
                                      std::uint64_t seed, std::uint64_t cap,
                                      std::uint32_t workers) {
    if (trials < 1)
        throw std::invalid_argument("estimate_z_spectrum: trials must be >= 1");
    ProblemParams params = params_from_counts(n, k, m);
    if (log_binomial(n, k) > std::log(static_cast<double>(cap)) + 1e-9)
        throw EnumerationCapExceeded(
            "instance too large: C(n, k) exceeds cap");

    std::vector<std::vector<std::uint64_t>> spectra(trials);
    std::vector<std::vector<double>> bounds(trials);
    parallel_for(trials, workers, [&](std::uint32_t t, std::uint32_t) {
        const std::uint64_t ts = trial_seed(seed, m, t);
        SplitMix64 truth_rng(derive_seed(ts, kTruthStreamKey));
        Configuration truth =
            Configuration::from_support(n, sample_subset(n, k, truth_rng));
        PoolingGraph graph = generate(params, derive_seed(ts, kGraphStreamKey));
        TestResults y = encode(graph, truth);
        spectra[t] = overlap_spectrum(graph, y, truth, cap);
        bounds[t].resize(k + 1);
        for (std::uint32_t ell = 0; ell <= k; ++ell)
            bounds[t][ell] = std::exp(
                log_expected_z_bound(params, ell, y.results,
                                     ZBoundMode::exact_pairing));
    });

    ZSpectrumEstimate est;
    est.n = n;
    est.k = k;
    est.m = m;
    est.trials = trials;
    est.seed = seed;
    est.mean.assign(k + 1, 0.0);
    est.stderr_.assign(k + 1, 0.0);
    est.bound_mean.assign(k + 1, 0.0);
    for (std::uint32_t ell = 0; ell <= k; ++ell) {
        double sum = 0.0, sumsq = 0.0, bsum = 0.0;
        for (std::uint32_t t = 0; t < trials; ++t) {
            const double v = static_cast<double>(spectra[t][ell]);
            sum += v;
            sumsq += v * v;
            bsum += bounds[t][ell];
        }
        const double mean = sum / trials;
        est.mean[ell] = mean;
        est.bound_mean[ell] = bsum / trials;
        if (trials > 1) {
            const double var =
                std::max(0.0, (sumsq - trials * mean * mean) / (trials - 1.0));
            est.stderr_[ell] = std::sqrt(var / trials);
        }
    }
    return est;
}

ZEstimate estimate_expected_z(std::uint32_t n, std::uint32_t k, std::uint32_t m,
                              std::uint32_t ell, std::uint32_t trials,
                              std::uint64_t seed, std::uint64_t cap) {
    if (ell > k) throw std::invalid_argument("estimate_expected_z: ell > k");
    ZSpectrumEstimate spec = estimate_z_spectrum(n, k, m, trials, seed, cap);
    return {spec.mean[ell], spec.stderr_[ell], spec.bound_mean[ell]};
}

} // namespace qgt
