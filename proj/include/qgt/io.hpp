#pragma once
// Artifact serialization: CSV schemas, gnuplot data blocks, JSON records,
// and atomic file writes. Output is byte-stable for a given input: all
// floating-point fields go through fixed printf formats.

#include <string>
#include <vector>

#include "json.hpp"

#include "qgt/decoders.hpp"
#include "qgt/experiments.hpp"
#include "qgt/theory.hpp"

namespace qgt::io {

// Writes via a temp file in the same directory followed by rename.
void atomic_write(const std::string& path, const std::string& content);

// n,theta,k,m,trials,successes,rate,stderr,cond_i_rate,cond_ii_rate,cond_iii_rate,seed
std::string sweep_csv(const std::vector<SweepResult>& sweeps);
// one (m, rate) block per theta, blank-line separated
std::string sweep_gnuplot(const std::vector<SweepResult>& sweeps);

// n,theta,k,target_rate,trials,m_required,m_greedy,ratio,seed
std::string min_tests_csv(const std::vector<MinTestsResult>& rows);
// one (n, m_required) block per theta
std::string min_tests_gnuplot(const std::vector<MinTestsResult>& rows);

// n,k,m,ell,trials,z_mean,z_stderr,bound_mean,seed
std::string z_estimate_csv(const ZSpectrumEstimate& est,
                           const std::vector<std::uint32_t>& ells);

// n,theta,k,m_inf,m_greedy,m_adapt,m_alg,c_bch,dyachkov_lower,bch_crossover
std::string thresholds_csv(const ThresholdReport& report);

// ell,f,f_prime rows over the rate-function domain
std::string rate_table_csv(std::uint32_t n, std::uint32_t k, double c,
                           std::uint32_t points);

nlohmann::ordered_json to_json(const ThresholdReport& report);
nlohmann::ordered_json to_json(const TrialRecord& record,
                               const ProblemParams& params);
nlohmann::ordered_json to_json(const DecodeResult& result);
nlohmann::ordered_json to_json(const RDiagnostics& diag);

} // namespace qgt::io
