#pragma once
// Random pooling design: the bipartite multigraph connecting individuals to
// tests, its generation from a seed, and the structural diagnostics behind
// the concentration event R.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qgt/model.hpp"

namespace qgt {

// Bipartite multigraph. tests[j] holds the slots of test j in draw order;
// a slot is an individual index, repeats are multiedges. degrees[i] counts
// slots of individual i (multiplicity-weighted); adjacency[i] lists
// (test, multiplicity) pairs with tests ascending.
//
// Graphs produced by generate() have exactly gamma slots per test; the
// structure also admits ragged fixtures (gamma then records the design
// value 0 when unspecified).
struct PoolingGraph {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::uint32_t gamma = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::uint32_t>> tests;
    std::vector<std::uint32_t> degrees;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adjacency;

    std::uint64_t total_slots() const;

    // Built from raw slot lists; derives degrees and adjacency.
    static PoolingGraph from_tests(std::uint32_t n,
                                   std::vector<std::vector<std::uint32_t>> tests,
                                   std::uint32_t gamma = 0, std::uint64_t seed = 0);
};

// Each of the m*gamma slots is an independent uniform draw from [0, n),
// consumed from SplitMix64(seed) in test-major, slot-minor order.
PoolingGraph generate(const ProblemParams& params, std::uint64_t seed);

// Number of distinct tests adjacent to individual i (multiplicity ignored).
std::uint32_t distinct_test_count(const PoolingGraph& graph, std::uint32_t i);

// Diagnostics for the regularity event R, evaluated with natural logs:
//   (i)   (1 - 1/log n) m/2 <= delta_min <= delta_max <= (1 + 1/log n) m/2
//   (ii)  (1 - 1/log n) k/2 <= k_min <= k_max <= (1 + 1/log n) k/2
//   (iii) (1 - 1/log n) k m/2 <= delta_inf_star <= (1 + 1/log n) k m/2
// The conditions are asymptotic; each is reported separately and none is
// asserted here. k = 0 leaves (ii)/(iii) vacuous: they report true with
// k_zero_vacuous set.
struct RDiagnostics {
    std::uint32_t delta_min = 0;
    std::uint32_t delta_max = 0;
    std::uint32_t k_min = 0;
    std::uint32_t k_max = 0;
    std::uint64_t delta_inf_star = 0;
    std::uint32_t distinct_min = 0;
    bool cond_i = false;
    bool cond_ii = false;
    bool cond_iii = false;
    bool k_zero_vacuous = false;
};

RDiagnostics check_event_r(const PoolingGraph& graph, const Configuration& truth);

// Same evaluation from precomputed per-individual/per-test tallies; shared
// with the streaming trial kernel.
RDiagnostics r_diagnostics_from_tallies(std::uint32_t n, std::uint32_t m,
                                        std::uint32_t k,
                                        const std::vector<std::uint32_t>& degrees,
                                        const std::vector<std::uint32_t>& distinct,
                                        const std::vector<std::uint32_t>& y,
                                        std::uint64_t delta_inf_star);

// Dump format: header "n m gamma seed", then one line per test with the
// slot indices space-separated, zero based. Bit-exact for a given graph.
void dump_graph(const PoolingGraph& graph, std::ostream& out);
std::string dump_graph(const PoolingGraph& graph);
PoolingGraph parse_graph(std::istream& in);

// The worked toy instance used in documentation and fixture tests:
// 7 individuals, 5 ragged tests, two double edges, truth {x1, x2, x5},
// y = (2, 2, 3, 1, 1).
struct Fig1Instance {
    PoolingGraph graph;
    Configuration truth;
    TestResults y;
};
Fig1Instance fig1_instance();

} // namespace qgt
