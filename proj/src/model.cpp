#include "qgt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qgt/pooling.hpp"
#include "qgt/prng.hpp"

namespace qgt {

std::vector<std::uint32_t> sample_subset(std::uint32_t n, std::uint32_t k,
                                         SplitMix64& rng) {
    if (k > n) throw std::invalid_argument("sample_subset: k > n");
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t j = i + rng.next_index(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

ProblemParams derive_params(std::uint32_t n, double theta, std::uint32_t m,
                            double eps) {
    if (n < 4) throw std::invalid_argument("derive_params: n must be >= 4");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("derive_params: theta must be in (0, 1)");
    if (eps < 0.0) throw std::invalid_argument("derive_params: eps must be >= 0");
    ProblemParams p;
    p.n = n;
    p.theta = theta;
    p.m = m;
    p.eps = eps;
    double raw = std::pow(static_cast<double>(n), theta);
    auto k = static_cast<std::uint64_t>(std::llround(raw));
    k = std::max<std::uint64_t>(1, std::min<std::uint64_t>(k, n - 1));
    p.k = static_cast<std::uint32_t>(k);
    p.gamma = n / 2;
    return p;
}

ProblemParams params_from_counts(std::uint32_t n, std::uint32_t k,
                                 std::uint32_t m) {
    if (n < 2) throw std::invalid_argument("params_from_counts: n must be >= 2");
    if (k < 1 || k >= n)
        throw std::invalid_argument("params_from_counts: k must be in [1, n-1]");
    ProblemParams p;
    p.n = n;
    p.k = k;
    p.m = m;
    p.gamma = n / 2;
    p.theta = std::log(static_cast<double>(k)) / std::log(static_cast<double>(n));
    return p;
}

Configuration::Configuration(std::vector<std::uint8_t> labels)
    : labels_(std::move(labels)) {
    for (std::uint8_t b : labels_) {
        if (b > 1) throw std::invalid_argument("Configuration: labels must be 0/1");
        weight_ += b;
    }
}

Configuration Configuration::from_support(std::uint32_t n,
                                          const std::vector<std::uint32_t>& infected) {
    std::vector<std::uint8_t> labels(n, 0);
    for (std::uint32_t i : infected) {
        if (i >= n) throw std::invalid_argument("Configuration: index out of range");
        labels[i] = 1;
    }
    return Configuration(std::move(labels));
}

Configuration Configuration::parse(const std::string& s) {
    std::vector<std::uint8_t> labels;
    labels.reserve(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1')
            throw std::invalid_argument("Configuration: expected a 0/1 string");
        labels.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return Configuration(std::move(labels));
}

std::vector<std::uint32_t> Configuration::support() const {
    std::vector<std::uint32_t> out;
    out.reserve(weight_);
    for (std::uint32_t i = 0; i < labels_.size(); ++i)
        if (labels_[i]) out.push_back(i);
    return out;
}

std::string Configuration::to_string() const {
    std::string s(labels_.size(), '0');
    for (std::uint32_t i = 0; i < labels_.size(); ++i)
        if (labels_[i]) s[i] = '1';
    return s;
}

std::uint64_t TestResults::total() const {
    return std::accumulate(results.begin(), results.end(), std::uint64_t{0});
}

std::string TestResults::to_csv() const {
    std::string out;
    for (std::uint32_t j = 0; j < results.size(); ++j) {
        if (j) out += ',';
        out += std::to_string(results[j]);
    }
    return out;
}

TestResults TestResults::parse_csv(const std::string& text) {
    TestResults y;
    if (text.empty()) return y;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        std::size_t pos = 0;
        long long v = std::stoll(field, &pos);
        if (pos != field.size() || v < 0)
            throw std::invalid_argument("TestResults: bad count '" + field + "'");
        y.results.push_back(static_cast<std::uint32_t>(v));
    }
    return y;
}

TestResults encode(const PoolingGraph& graph, const Configuration& config) {
    if (graph.n != config.size())
        throw std::invalid_argument("encode: graph and configuration disagree on n");
    TestResults y;
    y.results.resize(graph.m, 0);
    for (std::uint32_t j = 0; j < graph.m; ++j) {
        std::uint32_t sum = 0;
        for (std::uint32_t slot : graph.tests[j]) sum += config.infected(slot);
        y.results[j] = sum;
    }
    return y;
}

std::uint32_t overlap(const Configuration& a, const Configuration& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("overlap: length mismatch");
    std::uint32_t count = 0;
    const auto& la = a.labels();
    const auto& lb = b.labels();
    for (std::uint32_t i = 0; i < la.size(); ++i) count += la[i] & lb[i];
    return count;
}

bool is_consistent(const PoolingGraph& graph, const Configuration& config,
                   const TestResults& y) {
    if (y.size() != graph.m)
        throw std::invalid_argument("is_consistent: result length mismatch");
    return encode(graph, config) == y;
}

} // namespace qgt
