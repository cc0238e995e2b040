#include "qgt/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qgt::io {

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string f6(double v) { return fmt("%.6f", v); }   // rates, ratios
std::string g10(double v) { return fmt("%.10g", v); } // thresholds, params
std::string e9(double v) { return fmt("%.9e", v); }   // small magnitudes

} // namespace

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string sweep_csv(const std::vector<SweepResult>& sweeps) {
    std::string out =
        "n,theta,k,m,trials,successes,rate,stderr,cond_i_rate,cond_ii_rate,"
        "cond_iii_rate,seed\n";
    for (const SweepResult& sweep : sweeps) {
        for (const SweepPoint& pt : sweep.points) {
            out += std::to_string(sweep.spec.n) + ',' + g10(sweep.spec.theta) +
                   ',' + std::to_string(sweep.k) + ',' + std::to_string(pt.m) +
                   ',' + std::to_string(pt.trials) + ',' +
                   std::to_string(pt.successes) + ',' + f6(pt.rate) + ',' +
                   f6(pt.stderr_) + ',' + f6(pt.cond_i_rate) + ',' +
                   f6(pt.cond_ii_rate) + ',' + f6(pt.cond_iii_rate) + ',' +
                   std::to_string(sweep.spec.seed) + '\n';
        }
    }
    return out;
}

std::string sweep_gnuplot(const std::vector<SweepResult>& sweeps) {
    std::string out;
    for (std::size_t s = 0; s < sweeps.size(); ++s) {
        const SweepResult& sweep = sweeps[s];
        if (s) out += '\n';
        out += "# theta = " + g10(sweep.spec.theta) +
               "  n = " + std::to_string(sweep.spec.n) +
               "  k = " + std::to_string(sweep.k) + "\n# m rate\n";
        for (const SweepPoint& pt : sweep.points)
            out += std::to_string(pt.m) + ' ' + f6(pt.rate) + '\n';
    }
    return out;
}

std::string min_tests_csv(const std::vector<MinTestsResult>& rows) {
    std::string out =
        "n,theta,k,target_rate,trials,m_required,m_greedy,ratio,seed\n";
    for (const MinTestsResult& r : rows) {
        out += std::to_string(r.n) + ',' + g10(r.theta) + ',' +
               std::to_string(r.k) + ',' + g10(r.target_rate) + ',' +
               std::to_string(r.trials) + ',' + std::to_string(r.m_required) +
               ',' + f6(r.m_greedy) + ',' + f6(r.ratio) + ',' +
               std::to_string(r.seed) + '\n';
    }
    return out;
}

std::string min_tests_gnuplot(const std::vector<MinTestsResult>& rows) {
    std::string out;
    bool first_block = true;
    double current_theta = 0.0;
    bool open = false;
    for (const MinTestsResult& r : rows) {
        if (!open || r.theta != current_theta) {
            if (!first_block) out += '\n';
            out += "# theta = " + g10(r.theta) + "\n# n m_required\n";
            current_theta = r.theta;
            open = true;
            first_block = false;
        }
        out += std::to_string(r.n) + ' ' + std::to_string(r.m_required) + '\n';
    }
    return out;
}

std::string z_estimate_csv(const ZSpectrumEstimate& est,
                           const std::vector<std::uint32_t>& ells) {
    std::string out = "n,k,m,ell,trials,z_mean,z_stderr,bound_mean,seed\n";
    for (std::uint32_t ell : ells) {
        out += std::to_string(est.n) + ',' + std::to_string(est.k) + ',' +
               std::to_string(est.m) + ',' + std::to_string(ell) + ',' +
               std::to_string(est.trials) + ',' + e9(est.mean[ell]) + ',' +
               e9(est.stderr_[ell]) + ',' + e9(est.bound_mean[ell]) + ',' +
               std::to_string(est.seed) + '\n';
    }
    return out;
}

std::string thresholds_csv(const ThresholdReport& r) {
    std::string out =
        "n,theta,k,m_inf,m_greedy,m_adapt,m_alg,c_bch,dyachkov_lower,"
        "bch_crossover\n";
    out += std::to_string(r.n) + ',' + g10(r.theta) + ',' + std::to_string(r.k) +
           ',' + g10(r.m_inf) + ',' + g10(r.m_greedy) + ',' + g10(r.m_adapt) +
           ',' + g10(r.m_alg) + ',' + g10(r.c_bch) + ',' +
           g10(r.dyachkov_lower) + ',' + g10(r.bch_crossover) + '\n';
    return out;
}

std::string rate_table_csv(std::uint32_t n, std::uint32_t k, double c,
                           std::uint32_t points) {
    if (points < 2) throw std::invalid_argument("rate_table_csv: points < 2");
    std::string out = "ell,f,f_prime\n";
    const double ell_max =
        static_cast<double>(k) - std::log(static_cast<double>(k));
    for (std::uint32_t i = 0; i < points; ++i) {
        const double ell = ell_max * i / (points - 1);
        RateEvaluation ev = rate_f(n, k, c, ell);
        out += g10(ell) + ',' + e9(ev.value) + ',' + e9(ev.derivative) + '\n';
    }
    return out;
}

nlohmann::ordered_json to_json(const ThresholdReport& r) {
    return nlohmann::ordered_json{
        {"n", r.n},
        {"theta", r.theta},
        {"k", r.k},
        {"m_inf", r.m_inf},
        {"m_greedy", r.m_greedy},
        {"m_adapt", r.m_adapt},
        {"m_alg", r.m_alg},
        {"c_bch", r.c_bch},
        {"dyachkov_lower", r.dyachkov_lower},
        {"bch_crossover", r.bch_crossover},
    };
}

nlohmann::ordered_json to_json(const RDiagnostics& d) {
    return nlohmann::ordered_json{
        {"delta_min", d.delta_min},
        {"delta_max", d.delta_max},
        {"k_min", d.k_min},
        {"k_max", d.k_max},
        {"delta_inf_star", d.delta_inf_star},
        {"distinct_min", d.distinct_min},
        {"cond_i", d.cond_i},
        {"cond_ii", d.cond_ii},
        {"cond_iii", d.cond_iii},
        {"k_zero_vacuous", d.k_zero_vacuous},
    };
}

nlohmann::ordered_json to_json(const TrialRecord& rec,
                               const ProblemParams& params) {
    nlohmann::ordered_json j{
        {"n", params.n},      {"theta", params.theta},
        {"k", params.k},      {"gamma", params.gamma},
        {"m", params.m},      {"trial_index", rec.trial_index},
        {"success", rec.success}, {"skipped", rec.skipped},
    };
    std::string estimate(params.n, '0');
    for (std::uint32_t i : rec.estimate_support) estimate[i] = '1';
    j["estimate"] = estimate;
    j["score_margin"] = rec.score_margin
                            ? nlohmann::ordered_json(*rec.score_margin)
                            : nlohmann::ordered_json(nullptr);
    j["r_diag"] = to_json(rec.r_diag);
    return j;
}

nlohmann::ordered_json to_json(const DecodeResult& result) {
    nlohmann::ordered_json j{{"estimate", result.estimate.to_string()}};
    j["success"] = result.success ? nlohmann::ordered_json(*result.success)
                                  : nlohmann::ordered_json(nullptr);
    j["score_margin"] = result.score_margin
                            ? nlohmann::ordered_json(*result.score_margin)
                            : nlohmann::ordered_json(nullptr);
    return j;
}

} // namespace qgt::io
