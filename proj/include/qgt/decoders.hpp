#pragma once
// Decoders: the Maximum Neighborhood greedy decoder, the exhaustive
// search over weight-k configurations, and the overlap spectrum counter.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qgt/model.hpp"
#include "qgt/pooling.hpp"

namespace qgt {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Per-individual decoder statistics.
//   psi[i]      = multiset sum of y over the tests adjacent to i
//   psi_norm[i] = psi[i] * (m/2) / degree[i]   (0 when degree[i] = 0)
//   phi[i]      = psi[i] - 1{truth infected} * degree[i]   (needs truth)
struct ScoreVector {
    std::vector<std::uint64_t> psi;
    std::vector<double> psi_norm;
    std::optional<std::vector<std::uint64_t>> phi;
};

// distinct_tests sums each adjacent test result once instead of per
// multiedge (ablation switch; the multiset sum is the decoder's statistic).
ScoreVector compute_scores(const PoolingGraph& graph, const TestResults& y,
                           const Configuration* truth = nullptr,
                           bool distinct_tests = false);

struct DecodeResult {
    Configuration estimate;
    std::optional<bool> success;            // set when truth was supplied
    std::optional<double> score_margin;     // set when 0 < k < n
};

// Declares the k individuals with the largest psi' infected; ties broken by
// ascending index. Ranking compares psi/degree as exact rationals, so the
// estimate is invariant under positive rescaling of psi. Untested
// individuals score 0. Pass truth to fill in the success flag.
DecodeResult mn_decode(const PoolingGraph& graph, const TestResults& y,
                       std::uint32_t k, const Configuration* truth = nullptr);

// The same ranking from raw tallies (no materialized graph): indices of
// the k top-ranked individuals, sorted ascending.
std::vector<std::uint32_t> mn_select(const std::vector<std::uint64_t>& psi,
                                     const std::vector<std::uint32_t>& degrees,
                                     std::uint32_t k);

// Thrown when an enumeration would visit more than `cap` candidates.
struct EnumerationCapExceeded : std::runtime_error {
    explicit EnumerationCapExceeded(const std::string& what)
        : std::runtime_error(what) {}
};

// All weight-k configurations consistent with y, in lexicographic order of
// their label strings. DFS with partial-sum pruning; requires
// C(n, k) <= cap. An empty result is valid (y unreachable at weight k).
std::vector<Configuration> exhaustive_solutions(const PoolingGraph& graph,
                                                const TestResults& y,
                                                std::uint32_t k,
                                                std::uint64_t cap = kDefaultEnumerationCap);

// Z[l] = number of consistent weight-k configurations with overlap l against
// truth, excluding truth itself (so Z[k] = 0). Requires truth consistent.
std::vector<std::uint64_t> overlap_spectrum(const PoolingGraph& graph,
                                            const TestResults& y,
                                            const Configuration& truth,
                                            std::uint64_t cap = kDefaultEnumerationCap);

} // namespace qgt
