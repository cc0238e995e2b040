#include "qgt/pooling.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qgt/prng.hpp"

namespace qgt {

std::uint64_t PoolingGraph::total_slots() const {
    std::uint64_t total = 0;
    for (const auto& t : tests) total += t.size();
    return total;
}

PoolingGraph PoolingGraph::from_tests(std::uint32_t n,
                                      std::vector<std::vector<std::uint32_t>> tests,
                                      std::uint32_t gamma, std::uint64_t seed) {
    PoolingGraph g;
    g.n = n;
    g.m = static_cast<std::uint32_t>(tests.size());
    g.gamma = gamma;
    g.seed = seed;
    g.tests = std::move(tests);
    g.degrees.assign(n, 0);
    g.adjacency.assign(n, {});
    for (std::uint32_t j = 0; j < g.m; ++j) {
        for (std::uint32_t slot : g.tests[j]) {
            if (slot >= n)
                throw std::invalid_argument("PoolingGraph: slot index out of range");
            ++g.degrees[slot];
            auto& adj = g.adjacency[slot];
            if (!adj.empty() && adj.back().first == j)
                ++adj.back().second;
            else
                adj.emplace_back(j, 1u);
        }
    }
    return g;
}

PoolingGraph generate(const ProblemParams& params, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::vector<std::uint32_t>> tests(params.m);
    for (std::uint32_t j = 0; j < params.m; ++j) {
        auto& t = tests[j];
        t.resize(params.gamma);
        for (std::uint32_t s = 0; s < params.gamma; ++s)
            t[s] = rng.next_index(params.n);
    }
    return PoolingGraph::from_tests(params.n, std::move(tests), params.gamma, seed);
}

std::uint32_t distinct_test_count(const PoolingGraph& graph, std::uint32_t i) {
    if (i >= graph.n)
        throw std::invalid_argument("distinct_test_count: index out of range");
    return static_cast<std::uint32_t>(graph.adjacency[i].size());
}

RDiagnostics r_diagnostics_from_tallies(std::uint32_t n, std::uint32_t m,
                                        std::uint32_t k,
                                        const std::vector<std::uint32_t>& degrees,
                                        const std::vector<std::uint32_t>& distinct,
                                        const std::vector<std::uint32_t>& y,
                                        std::uint64_t delta_inf_star) {
    RDiagnostics d;
    d.delta_inf_star = delta_inf_star;
    d.delta_min = degrees.empty() ? 0 : degrees[0];
    d.delta_max = d.delta_min;
    for (std::uint32_t v : degrees) {
        d.delta_min = std::min(d.delta_min, v);
        d.delta_max = std::max(d.delta_max, v);
    }
    d.distinct_min = distinct.empty() ? 0 : distinct[0];
    for (std::uint32_t v : distinct) d.distinct_min = std::min(d.distinct_min, v);
    d.k_min = y.empty() ? 0 : y[0];
    d.k_max = d.k_min;
    for (std::uint32_t v : y) {
        d.k_min = std::min(d.k_min, v);
        d.k_max = std::max(d.k_max, v);
    }

    const double slack = 1.0 / std::log(static_cast<double>(n));
    const double half_m = m / 2.0;
    const double half_k = k / 2.0;
    d.cond_i = (1.0 - slack) * half_m <= d.delta_min &&
               d.delta_max <= (1.0 + slack) * half_m;
    if (k == 0) {
        d.k_zero_vacuous = true;
        d.cond_ii = true;
        d.cond_iii = true;
    } else {
        d.cond_ii = (1.0 - slack) * half_k <= d.k_min &&
                    d.k_max <= (1.0 + slack) * half_k;
        d.cond_iii =
            (1.0 - slack) * k * half_m <= static_cast<double>(d.delta_inf_star) &&
            static_cast<double>(d.delta_inf_star) <= (1.0 + slack) * k * half_m;
    }
    return d;
}

RDiagnostics check_event_r(const PoolingGraph& graph, const Configuration& truth) {
    if (graph.n != truth.size())
        throw std::invalid_argument("check_event_r: dimension mismatch");
    TestResults y = encode(graph, truth);
    std::uint64_t dis = 0;
    for (std::uint32_t i = 0; i < graph.n; ++i)
        if (truth.infected(i)) dis += graph.degrees[i];
    std::vector<std::uint32_t> distinct(graph.n);
    for (std::uint32_t i = 0; i < graph.n; ++i)
        distinct[i] = static_cast<std::uint32_t>(graph.adjacency[i].size());
    return r_diagnostics_from_tallies(graph.n, graph.m, truth.weight(),
                                      graph.degrees, distinct, y.results, dis);
}

void dump_graph(const PoolingGraph& graph, std::ostream& out) {
    out << graph.n << ' ' << graph.m << ' ' << graph.gamma << ' ' << graph.seed
        << '\n';
    for (const auto& t : graph.tests) {
        for (std::size_t s = 0; s < t.size(); ++s) {
            if (s) out << ' ';
            out << t[s];
        }
        out << '\n';
    }
}

std::string dump_graph(const PoolingGraph& graph) {
    std::ostringstream ss;
    dump_graph(graph, ss);
    return ss.str();
}

PoolingGraph parse_graph(std::istream& in) {
    std::uint32_t n = 0, m = 0, gamma = 0;
    std::uint64_t seed = 0;
    if (!(in >> n >> m >> gamma >> seed))
        throw std::invalid_argument("parse_graph: bad header");
    std::string rest;
    std::getline(in, rest);
    std::vector<std::vector<std::uint32_t>> tests(m);
    for (std::uint32_t j = 0; j < m; ++j) {
        std::string line;
        if (!std::getline(in, line))
            throw std::invalid_argument("parse_graph: missing test line");
        std::istringstream ls(line);
        std::uint32_t slot;
        while (ls >> slot) tests[j].push_back(slot);
    }
    return PoolingGraph::from_tests(n, std::move(tests), gamma, seed);
}

Fig1Instance fig1_instance() {
    Fig1Instance inst;
    inst.graph = PoolingGraph::from_tests(7, {
                                                 {0, 1, 2},
                                                 {0, 2, 4, 5},
                                                 {0, 1, 1, 2, 3, 6},
                                                 {3, 4, 5, 5, 6},
                                                 {3, 4, 6},
                                             });
    inst.truth = Configuration::parse("1100100");
    inst.y = encode(inst.graph, inst.truth);
    return inst;
}

} // namespace qgt
