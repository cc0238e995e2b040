#pragma once
// Core model vocabulary: problem parameters, infection configurations and
// test-result vectors, plus the encode/overlap/consistency operations every
// other component builds on.

#include <cstdint>
#include <string>
#include <vector>

namespace qgt {

struct PoolingGraph;

// Instance parameters. k and gamma are derived from (n, theta):
// k = round(n^theta) clamped to [1, n-1], gamma = floor(n/2).
struct ProblemParams {
    std::uint32_t n = 0;
    double theta = 0.0;
    std::uint32_t k = 0;
    std::uint32_t gamma = 0;
    std::uint32_t m = 0;
    double eps = 0.0;
};

ProblemParams derive_params(std::uint32_t n, double theta, std::uint32_t m,
                            double eps = 0.0);

// Instance with k given directly; theta is back-filled as log k / log n.
ProblemParams params_from_counts(std::uint32_t n, std::uint32_t k,
                                 std::uint32_t m);

// A 0/1 labeling of the population. Immutable after construction.
class Configuration {
  public:
    Configuration() = default;
    explicit Configuration(std::vector<std::uint8_t> labels);
    // From sorted (or unsorted) infected indices.
    static Configuration from_support(std::uint32_t n,
                                      const std::vector<std::uint32_t>& infected);
    static Configuration parse(const std::string& zero_one_string);

    std::uint32_t size() const { return static_cast<std::uint32_t>(labels_.size()); }
    std::uint32_t weight() const { return weight_; }
    bool infected(std::uint32_t i) const { return labels_[i] != 0; }
    const std::vector<std::uint8_t>& labels() const { return labels_; }
    std::vector<std::uint32_t> support() const;

    std::string to_string() const; // "0110..." serialization

    bool operator==(const Configuration& o) const { return labels_ == o.labels_; }
    bool operator!=(const Configuration& o) const { return !(*this == o); }

  private:
    std::vector<std::uint8_t> labels_;
    std::uint32_t weight_ = 0;
};

// Test results y, one multiplicity-weighted infected count per test.
struct TestResults {
    std::vector<std::uint32_t> results;

    std::uint32_t size() const { return static_cast<std::uint32_t>(results.size()); }
    std::uint64_t total() const;
    std::string to_csv() const; // comma separated counts
    static TestResults parse_csv(const std::string& text);

    bool operator==(const TestResults& o) const { return results == o.results; }
};

// y_j = multiset sum of labels over the slots of test j; an individual
// occurring t times in a test contributes t when infected.
TestResults encode(const PoolingGraph& graph, const Configuration& config);

// Inner product <a, b> of the label vectors.
std::uint32_t overlap(const Configuration& a, const Configuration& b);

// True iff encode(graph, config) == y entrywise.
bool is_consistent(const PoolingGraph& graph, const Configuration& config,
                   const TestResults& y);

} // namespace qgt
