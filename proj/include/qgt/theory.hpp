#pragma once
// Closed-form thresholds and the numeric side of the analysis: entropy and
// KL helpers, exact binomial tails, the first-moment bound on the overlap
// spectrum, the rate function controlling its sign, random-walk return
// asymptotics, and the tail exponents of the greedy separation argument.
//
// Combinatorial quantities are evaluated in log space throughout
// (C(10^4, 100)-scale factors overflow doubles), with 0 log 0 := 0.

#include <cstdint>
#include <vector>

#include "qgt/model.hpp"

namespace qgt {

inline constexpr double kBchConstant = 1.72; // published to two decimals

// --- entropy / KL / tails -------------------------------------------------

// Bernoulli entropy in nats, H(0) = H(1) = 0.
double entropy(double a);

// KL divergence D(p||q) of Bernoulli(p) from Bernoulli(q); +infinity when
// q in {0,1} and p != q.
double kl_divergence(double p, double q);

struct EntropyKl {
    double entropy = 0.0;
    double kl = 0.0;
};
EntropyKl entropy_and_kl(double a, double p, double q);

double log_binomial(std::uint64_t n, std::uint64_t k); // log C(n, k)

// Exact log Pr[X >= t] and log Pr[X <= t] for X ~ Bin(n, p).
double log_binomial_tail_geq(std::uint32_t n, double p, std::uint32_t t);
double log_binomial_tail_leq(std::uint32_t n, double p, std::uint32_t t);

// Chernoff-KL bounds: Pr[X > n(p+eps)] <= exp(-D(p+eps||p) n) and the
// mirrored lower tail.
double chernoff_kl_upper(std::uint32_t n, double p, double eps);
double chernoff_kl_lower(std::uint32_t n, double p, double eps);

// Weaker standard forms: exp(-min(eps, eps^2) np / 3), exp(-delta^2 np / 2).
double chernoff_upper(std::uint32_t n, double p, double eps);
double chernoff_lower(std::uint32_t n, double p, double delta);

// Mean of Bin(n, p) conditioned on being >= 1, and the exact value of
// E[X^{-1/2}] under the same law.
double binmin1_mean(std::uint32_t n, double p);
double binmin1_inv_sqrt_mean(std::uint32_t n, double p);

// --- thresholds -------------------------------------------------------------

struct ThresholdReport {
    std::uint32_t n = 0;
    double theta = 0.0;
    std::uint32_t k = 0;
    double m_inf = 0.0;        // 2 k log(n/k) / log k
    double m_greedy = 0.0;     // (1+sqrt(theta))/(1-sqrt(theta)) k log(n/k)
    double m_adapt = 0.0;      // k log(n/k) / log k
    double m_alg = 0.0;        // min(greedy ratio, c_bch) k log(n/k)
    double c_bch = kBchConstant;
    double dyachkov_lower = 0.0; // 2 k log(n/k) / log k
    double bch_crossover = 0.0;  // theta where the greedy ratio meets c_bch
};

double greedy_ratio(double theta);   // (1+sqrt(theta))/(1-sqrt(theta))
double bch_crossover_theta();        // ((c_bch-1)/(c_bch+1))^2

ThresholdReport compute_thresholds(std::uint32_t n, double theta);

// --- rate function ----------------------------------------------------------

// f(n, k, l) = (k/n) H(l/k) + (1 - k/n) H((k-l)/(n-k)) - c (k/n) log(n/k) / 2.
//
// The entropy part is exact; the test-count penalty enters in its large-k
// form, which is constant in l. That keeps the structure the analysis runs
// on: f' vanishes exactly at l = k^2/n, the unique maximum sits there, and
// f(k^2/n) changes sign exactly at c_star(n, k).
struct RateEvaluation {
    double ell = 0.0;
    double value = 0.0;
    double derivative = 0.0;
    bool at_max = false;
};

// Domain: 0 <= ell <= k - log k, with 2 <= k and 2k < n.
RateEvaluation rate_f(std::uint32_t n, std::uint32_t k, double c, double ell);

// Negativity threshold at l = k^2/n: c_star = -2 H(k/n) / ((k/n) log(k/n)).
double c_star(std::uint32_t n, std::uint32_t k);

// Integer argmax of the rate function over 0 <= l <= floor(k - log k).
std::uint32_t rate_f_integer_argmax(std::uint32_t n, std::uint32_t k, double c);

// --- first-moment bound on E[Z_{k,l}] ----------------------------------------

enum class ZBoundMode {
    // Product over tests of the full slot-pairing probability
    //   sum_{j>=0} multinom(Gamma; j, j, Gamma-2j) p^{2j} (1-2p)^{Gamma-2j},
    // p = (1 - l/k) k/n. This is the exact first moment of the overlap
    // spectrum for l < k, hence a genuine upper bound at every scale; it
    // does not depend on the per-test infected counts. l = k maps to -inf
    // (the planted configuration is excluded from the spectrum).
    exact_pairing,
    // The printed initial term: per test i the sum truncated to
    // 1 <= j <= k_i. Valid asymptotically; at desk scale the discarded
    // j = 0 mass dominates, so this is a diagnostic, not a bound.
    initial_term,
    // C(k,l) C(n-k,k-l) (2 pi E[X])^{-m/2} with X ~ Bin>=1(Gamma, 2p).
    asymptotic,
};

// Returns the log of the bound; -infinity when a factor vanishes.
double log_expected_z_bound(const ProblemParams& params, std::uint32_t ell,
                            const std::vector<std::uint32_t>& k_per_test,
                            ZBoundMode mode = ZBoundMode::exact_pairing);

// --- random-walk return / half-binomial sums ---------------------------------

struct RwReturn {
    double exact = 0.0;      // C(2j, j) 2^{-2j}
    double asymptotic = 0.0; // (pi j)^{-1/2}
};
RwReturn rw_return(std::uint64_t j);

struct HalfBinomialSides {
    double lhs = 0.0;      // sum over even counts of pmf(2j) j^{-1/2}
    double rhs_main = 0.0; // 2^{-1/2} sum over all counts of pmf(j) j^{-1/2}
};
HalfBinomialSides half_binomial_sides(std::uint32_t n, double p);

// --- greedy separation exponents ---------------------------------------------

// healthy_tail = exp(-c alpha^2 (1-theta)/theta)
// infected_tail = exp(-c (1-alpha)^2 (1-theta)/theta)
// alpha_opt = 1/(1+sqrt(theta)) equalizes the two union-bound requirements;
// c_n_opt is the matching coefficient of log k.
struct SeparationTails {
    double healthy_tail = 0.0;
    double infected_tail = 0.0;
    double c_n_opt = 0.0;
    double alpha_opt = 0.0;
};
SeparationTails separation_tails(double alpha, double c, double theta);

} // namespace qgt
