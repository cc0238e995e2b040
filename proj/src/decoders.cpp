#include "qgt/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgt/theory.hpp"

namespace qgt {

namespace {

// Ranking key psi_i / degree_i as an exact rational; untested individuals
// get 0/1. Exactness keeps the estimate invariant under positive rescaling
// of psi and makes ties well defined.
inline bool ranks_before(std::uint64_t psi_a, std::uint64_t deg_a, std::uint32_t a,
                         std::uint64_t psi_b, std::uint64_t deg_b, std::uint32_t b) {
    if (deg_a == 0) deg_a = 1, psi_a = 0;
    if (deg_b == 0) deg_b = 1, psi_b = 0;
    const auto lhs = static_cast<unsigned __int128>(psi_a) * deg_b;
    const auto rhs = static_cast<unsigned __int128>(psi_b) * deg_a;
    if (lhs != rhs) return lhs > rhs;
    return a < b;
}

} // namespace

ScoreVector compute_scores(const PoolingGraph& graph, const TestResults& y,
                           const Configuration* truth, bool distinct_tests) {
    if (y.size() != graph.m)
        throw std::invalid_argument("compute_scores: result length mismatch");
    if (truth && truth->size() != graph.n)
        throw std::invalid_argument("compute_scores: truth length mismatch");
    ScoreVector s;
    s.psi.assign(graph.n, 0);
    s.psi_norm.assign(graph.n, 0.0);
    const double half_m = graph.m / 2.0;
    for (std::uint32_t i = 0; i < graph.n; ++i) {
        std::uint64_t acc = 0;
        for (auto [test, mult] : graph.adjacency[i])
            acc += static_cast<std::uint64_t>(distinct_tests ? 1 : mult) *
                   y.results[test];
        s.psi[i] = acc;
        s.psi_norm[i] = graph.degrees[i] == 0
                            ? 0.0
                            : static_cast<double>(acc) * half_m / graph.degrees[i];
    }
    if (truth) {
        std::vector<std::uint64_t> phi(graph.n);
        for (std::uint32_t i = 0; i < graph.n; ++i)
            phi[i] = s.psi[i] -
                     (truth->infected(i) ? static_cast<std::uint64_t>(graph.degrees[i])
                                         : 0);
        s.phi = std::move(phi);
    }
    return s;
}

std::vector<std::uint32_t> mn_select(const std::vector<std::uint64_t>& psi,
                                     const std::vector<std::uint32_t>& degrees,
                                     std::uint32_t k) {
    const std::uint32_t n = static_cast<std::uint32_t>(psi.size());
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    auto cmp = [&](std::uint32_t a, std::uint32_t b) {
        return ranks_before(psi[a], degrees[a], a, psi[b], degrees[b], b);
    };
    if (k < n) {
        std::nth_element(order.begin(), order.begin() + k, order.end(), cmp);
        order.resize(k);
    }
    std::sort(order.begin(), order.end());
    return order;
}

DecodeResult mn_decode(const PoolingGraph& graph, const TestResults& y,
                       std::uint32_t k, const Configuration* truth) {
    if (k > graph.n) throw std::invalid_argument("mn_decode: k > n");
    ScoreVector scores = compute_scores(graph, y);
    std::vector<std::uint32_t> chosen = mn_select(scores.psi, graph.degrees, k);

    DecodeResult result;
    result.estimate = Configuration::from_support(graph.n, chosen);
    if (truth) result.success = (result.estimate == *truth);
    if (k > 0 && k < graph.n) {
        double min_in = std::numeric_limits<double>::infinity();
        double max_out = -std::numeric_limits<double>::infinity();
        for (std::uint32_t i = 0; i < graph.n; ++i) {
            if (result.estimate.infected(i))
                min_in = std::min(min_in, scores.psi_norm[i]);
            else
                max_out = std::max(max_out, scores.psi_norm[i]);
        }
        result.score_margin = min_in - max_out;
    }
    return result;
}

std::vector<Configuration> exhaustive_solutions(const PoolingGraph& graph,
                                                const TestResults& y,
                                                std::uint32_t k,
                                                std::uint64_t cap) {
    if (y.size() != graph.m)
        throw std::invalid_argument("exhaustive_solutions: result length mismatch");
    if (k > graph.n) throw std::invalid_argument("exhaustive_solutions: k > n");
    if (log_binomial(graph.n, k) > std::log(static_cast<double>(cap)) + 1e-9)
        throw EnumerationCapExceeded("instance too large: C(n, k) exceeds cap");

    const std::uint32_t n = graph.n;
    const std::uint32_t m = graph.m;

    for (std::uint32_t j = 0; j < m; ++j)
        if (graph.gamma != 0 && y.results[j] > graph.gamma) return {};

    // Iterative DFS over positions, label 0 tried before label 1, which
    // yields lexicographic order of the emitted label strings. partial[j]
    // tracks the committed contribution to test j; remaining[j] the
    // contribution still available from undecided positions. A branch dies
    // when some adjacent test overshoots y or can no longer reach it.
    std::vector<std::uint32_t> partial(m, 0);
    std::vector<std::uint64_t> remaining(m, 0);
    for (std::uint32_t i = 0; i < n; ++i)
        for (auto [test, mult] : graph.adjacency[i]) remaining[test] += mult;

    std::vector<Configuration> out;
    std::vector<std::uint8_t> labels(n, 0);
    // state per depth: 0 = try 0-branch, 1 = try 1-branch, 2 = exhausted
    std::vector<std::uint8_t> stage(n + 1, 0);
    std::uint32_t weight = 0;
    std::uint32_t depth = 0;

    auto feasible_here = [&](std::uint32_t pos) {
        for (auto [test, mult] : graph.adjacency[pos]) {
            (void)mult;
            if (partial[test] > y.results[test]) return false;
            if (partial[test] + remaining[test] < y.results[test]) return false;
        }
        return true;
    };

    auto take_position = [&](std::uint32_t pos, bool infect) {
        for (auto [test, mult] : graph.adjacency[pos]) {
            remaining[test] -= mult;
            if (infect) partial[test] += mult;
        }
        labels[pos] = infect ? 1 : 0;
        weight += infect ? 1 : 0;
    };

    auto drop_position = [&](std::uint32_t pos) {
        const bool infect = labels[pos] != 0;
        for (auto [test, mult] : graph.adjacency[pos]) {
            remaining[test] += mult;
            if (infect) partial[test] -= mult;
        }
        weight -= infect ? 1 : 0;
        labels[pos] = 0;
    };

    while (true) {
        if (depth == n) {
            if (weight == k && std::equal(partial.begin(), partial.end(),
                                          y.results.begin()))
                out.emplace_back(labels);
            if (depth == 0) break;
            --depth;
            drop_position(depth);
            continue;
        }
        bool advanced = false;
        while (stage[depth] < 2) {
            const bool infect = stage[depth] == 1;
            ++stage[depth];
            if (infect && weight + 1 > k) continue;
            if (!infect && weight + (n - depth - 1) < k) continue;
            take_position(depth, infect);
            if (feasible_here(depth)) {
                ++depth;
                stage[depth] = 0;
                advanced = true;
                break;
            }
            drop_position(depth);
        }
        if (!advanced) {
            if (depth == 0) break;
            --depth;
            drop_position(depth);
        }
    }
    return out;
}

std::vector<std::uint64_t> overlap_spectrum(const PoolingGraph& graph,
                                            const TestResults& y,
                                            const Configuration& truth,
                                            std::uint64_t cap) {
    const std::uint32_t k = truth.weight();
    if (!is_consistent(graph, truth, y))
        throw std::invalid_argument("overlap_spectrum: truth is not consistent with y");
    std::vector<std::uint64_t> z(k + 1, 0);
    for (const Configuration& sigma : exhaustive_solutions(graph, y, k, cap)) {
        if (sigma == truth) continue;
        ++z[overlap(sigma, truth)];
    }
    return z;
}

} // namespace qgt
