#include "qgt/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qgt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double logsumexp(const std::vector<double>& terms) {
    double hi = kNegInf;
    for (double t : terms) hi = std::max(hi, t);
    if (hi == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - hi);
    return hi + std::log(acc);
}

// log multinomial coefficient (gamma; j, j, gamma - 2j)
double log_pair_multinomial(std::uint64_t gamma, std::uint64_t j) {
    return std::lgamma(static_cast<double>(gamma) + 1.0) -
           2.0 * std::lgamma(static_cast<double>(j) + 1.0) -
           std::lgamma(static_cast<double>(gamma - 2 * j) + 1.0);
}

// log of sum_{j in [j_lo, j_hi]} (gamma; j, j, gamma-2j) p^(2j) (1-2p)^(gamma-2j)
double log_pairing_sum(std::uint32_t gamma, double p, std::uint64_t j_lo,
                       std::uint64_t j_hi) {
    if (j_lo > j_hi) return kNegInf;
    const double one_minus = 1.0 - 2.0 * p;
    if (p < 0.0 || one_minus < 0.0)
        throw std::invalid_argument("log_pairing_sum: flip probability out of range");
    if (p == 0.0) return j_lo == 0 ? 0.0 : kNegInf;
    if (one_minus == 0.0) {
        // all slots must pair up; only j = gamma/2 contributes
        if (gamma % 2 != 0) return kNegInf;
        const std::uint64_t j = gamma / 2;
        if (j < j_lo || j > j_hi) return kNegInf;
        return log_pair_multinomial(gamma, j) + 2.0 * j * std::log(p);
    }
    const double lp = std::log(p);
    const double lq = std::log(one_minus);
    std::vector<double> terms;
    terms.reserve(j_hi - j_lo + 1);
    for (std::uint64_t j = j_lo; j <= j_hi; ++j)
        terms.push_back(log_pair_multinomial(gamma, j) + 2.0 * j * lp +
                        static_cast<double>(gamma - 2 * j) * lq);
    return logsumexp(terms);
}

std::vector<double> log_binomial_pmf(std::uint32_t n, double p) {
    std::vector<double> lpmf(n + 1);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (std::uint32_t j = 0; j <= n; ++j)
        lpmf[j] = log_binomial(n, j) + j * lp + (n - j) * lq;
    return lpmf;
}

} // namespace

double entropy(double a) {
    if (!(a >= 0.0 && a <= 1.0))
        throw std::invalid_argument("entropy: argument must be in [0, 1]");
    return -xlogx(a) - xlogx(1.0 - a);
}

double kl_divergence(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("kl_divergence: arguments must be in [0, 1]");
    if (q == 0.0) return p == 0.0 ? 0.0 : kInf;
    if (q == 1.0) return p == 1.0 ? 0.0 : kInf;
    double d = 0.0;
    if (p > 0.0) d += p * std::log(p / q);
    if (p < 1.0) d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return d;
}

EntropyKl entropy_and_kl(double a, double p, double q) {
    return {entropy(a), kl_divergence(p, q)};
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return kNegInf;
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double log_binomial_tail_geq(std::uint32_t n, double p, std::uint32_t t) {
    if (t == 0) return 0.0;
    if (t > n) return kNegInf;
    auto lpmf = log_binomial_pmf(n, p);
    return logsumexp({lpmf.begin() + t, lpmf.end()});
}

double log_binomial_tail_leq(std::uint32_t n, double p, std::uint32_t t) {
    if (t >= n) return 0.0;
    auto lpmf = log_binomial_pmf(n, p);
    return logsumexp({lpmf.begin(), lpmf.begin() + t + 1});
}

double chernoff_kl_upper(std::uint32_t n, double p, double eps) {
    return std::exp(-kl_divergence(p + eps, p) * n);
}

double chernoff_kl_lower(std::uint32_t n, double p, double eps) {
    return std::exp(-kl_divergence(p - eps, p) * n);
}

double chernoff_upper(std::uint32_t n, double p, double eps) {
    return std::exp(-std::min(eps, eps * eps) * n * p / 3.0);
}

double chernoff_lower(std::uint32_t n, double p, double delta) {
    return std::exp(-delta * delta * n * p / 2.0);
}

double binmin1_mean(std::uint32_t n, double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("binmin1_mean: p must be in (0, 1]");
    const double log_p0 = n * std::log1p(-p);
    return n * p / (-std::expm1(log_p0));
}

double binmin1_inv_sqrt_mean(std::uint32_t n, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("binmin1_inv_sqrt_mean: p must be in (0, 1)");
    auto lpmf = log_binomial_pmf(n, p);
    std::vector<double> terms(n);
    for (std::uint32_t j = 1; j <= n; ++j)
        terms[j - 1] = lpmf[j] - 0.5 * std::log(static_cast<double>(j));
    const double log_p0 = n * std::log1p(-p);
    return std::exp(logsumexp(terms)) / (-std::expm1(log_p0));
}

double greedy_ratio(double theta) {
    const double r = std::sqrt(theta);
    return (1.0 + r) / (1.0 - r);
}

double bch_crossover_theta() {
    const double r = (kBchConstant - 1.0) / (kBchConstant + 1.0);
    return r * r;
}

ThresholdReport compute_thresholds(std::uint32_t n, double theta) {
    ProblemParams p = derive_params(n, theta, 0);
    ThresholdReport r;
    r.n = n;
    r.theta = theta;
    r.k = p.k;
    const double k = p.k;
    const double log_ratio = std::log(static_cast<double>(n) / k);
    const double log_k = std::log(k);
    r.m_inf = 2.0 * k * log_ratio / log_k;
    r.m_adapt = k * log_ratio / log_k;
    r.dyachkov_lower = 2.0 * k * log_ratio / log_k;
    r.m_greedy = greedy_ratio(theta) * k * log_ratio;
    r.m_alg = std::min(greedy_ratio(theta), kBchConstant) * k * log_ratio;
    r.c_bch = kBchConstant;
    r.bch_crossover = bch_crossover_theta();
    return r;
}

double c_star(std::uint32_t n, std::uint32_t k) {
    const double a = static_cast<double>(k) / n;
    return -2.0 * entropy(a) / (a * std::log(a));
}

RateEvaluation rate_f(std::uint32_t n, std::uint32_t k, double c, double ell) {
    if (k < 2 || 2ull * k >= n)
        throw std::invalid_argument("rate_f: requires 2 <= k < n/2");
    if (!(c > 0.0)) throw std::invalid_argument("rate_f: c must be positive");
    const double kd = k;
    const double nd = n;
    const double ell_max = kd - std::log(kd);
    if (!(ell >= 0.0 && ell <= ell_max + 1e-9))
        throw std::invalid_argument("rate_f: ell outside [0, k - log k]");

    auto value_at = [&](double l) {
        return (kd / nd) * entropy(l / kd) +
               (1.0 - kd / nd) * entropy((kd - l) / (nd - kd)) -
               c * (kd / nd) * std::log(nd / kd) / 2.0;
    };

    RateEvaluation ev;
    ev.ell = ell;
    ev.value = value_at(ell);
    if (ell == 0.0) {
        ev.derivative = kInf;
        ev.at_max = false;
        return ev;
    }
    ev.derivative = (-std::log(ell / kd) + std::log(1.0 - ell / kd) +
                     std::log((kd - ell) / (nd - kd)) -
                     std::log(1.0 - (kd - ell) / (nd - kd))) /
                    nd;
    const double h = 1e-4 * kd;
    if (std::abs(ev.derivative) <= 1e-9 && ell - h > 0.0 && ell + h < ell_max) {
        const double second =
            value_at(ell + h) - 2.0 * value_at(ell) + value_at(ell - h);
        ev.at_max = second < 0.0;
    }
    return ev;
}

std::uint32_t rate_f_integer_argmax(std::uint32_t n, std::uint32_t k, double c) {
    const auto ell_max = static_cast<std::uint32_t>(
        std::floor(static_cast<double>(k) - std::log(static_cast<double>(k))));
    std::uint32_t best = 0;
    double best_value = rate_f(n, k, c, 0.0).value;
    for (std::uint32_t ell = 1; ell <= ell_max; ++ell) {
        const double v = rate_f(n, k, c, ell).value;
        if (v > best_value) {
            best_value = v;
            best = ell;
        }
    }
    return best;
}

double log_expected_z_bound(const ProblemParams& params, std::uint32_t ell,
                            const std::vector<std::uint32_t>& k_per_test,
                            ZBoundMode mode) {
    const std::uint32_t n = params.n;
    const std::uint32_t k = params.k;
    const std::uint32_t gamma = params.gamma;
    const std::uint32_t m = params.m;
    if (ell > k) throw std::invalid_argument("log_expected_z_bound: ell > k");
    if (k_per_test.size() != m)
        throw std::invalid_argument("log_expected_z_bound: k_per_test length != m");

    const double log_configs = log_binomial(k, ell) + log_binomial(n - k, k - ell);
    if (m == 0) return log_configs;

    const double p = static_cast<double>(k - ell) / n; // per-slot flip probability
    switch (mode) {
        case ZBoundMode::exact_pairing: {
            if (ell == k) return kNegInf; // planted configuration excluded
            const double log_q = log_pairing_sum(gamma, p, 0, gamma / 2);
            return log_configs + m * log_q;
        }
        case ZBoundMode::initial_term: {
            double acc = log_configs;
            for (std::uint32_t ki : k_per_test) {
                const std::uint64_t j_hi = std::min<std::uint64_t>(ki, gamma / 2);
                const double f = log_pairing_sum(gamma, p, 1, j_hi);
                if (f == kNegInf) return kNegInf;
                acc += f;
            }
            return acc;
        }
        case ZBoundMode::asymptotic: {
            if (ell == k) return kNegInf;
            if (2.0 * p > 1.0)
                throw std::invalid_argument(
                    "log_expected_z_bound: 2(k - ell) exceeds n");
            const double mean = binmin1_mean(gamma, 2.0 * p);
            return log_configs -
                   0.5 * m * std::log(2.0 * std::acos(-1.0) * mean);
        }
    }
    throw std::logic_error("log_expected_z_bound: unknown mode");
}

RwReturn rw_return(std::uint64_t j) {
    if (j == 0) throw std::invalid_argument("rw_return: j must be >= 1");
    RwReturn r;
    r.exact = std::exp(log_binomial(2 * j, j) -
                       2.0 * static_cast<double>(j) * std::log(2.0));
    r.asymptotic = 1.0 / std::sqrt(std::acos(-1.0) * static_cast<double>(j));
    return r;
}

HalfBinomialSides half_binomial_sides(std::uint32_t n, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("half_binomial_sides: p must be in (0, 1)");
    auto lpmf = log_binomial_pmf(n, p);
    std::vector<double> even, all;
    for (std::uint32_t j = 1; j <= n; ++j)
        all.push_back(lpmf[j] - 0.5 * std::log(static_cast<double>(j)));
    for (std::uint32_t j = 1; 2 * j <= n; ++j)
        even.push_back(lpmf[2 * j] - 0.5 * std::log(static_cast<double>(j)));
    HalfBinomialSides s;
    s.lhs = std::exp(logsumexp(even));
    s.rhs_main = std::exp(logsumexp(all)) / std::sqrt(2.0);
    return s;
}

SeparationTails separation_tails(double alpha, double c, double theta) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("separation_tails: alpha must be in (0, 1)");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("separation_tails: theta must be in (0, 1)");
    if (!(c > 0.0)) throw std::invalid_argument("separation_tails: c must be > 0");
    SeparationTails t;
    const double ratio = (1.0 - theta) / theta;
    t.healthy_tail = std::exp(-c * alpha * alpha * ratio);
    t.infected_tail = std::exp(-c * (1.0 - alpha) * (1.0 - alpha) * ratio);
    t.alpha_opt = 1.0 / (1.0 + std::sqrt(theta));
    t.c_n_opt = greedy_ratio(theta);
    return t;
}

} // namespace qgt
