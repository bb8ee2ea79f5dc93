#include "hypodist/classifier.hpp"

#include "hypodist/error.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace hypodist {

LabeledSample::LabeledSample(std::vector<GridFunction> functions, std::vector<int> labels,
                             std::vector<std::string> ids)
    : functions_(std::move(functions)), labels_(std::move(labels)), ids_(std::move(ids)) {
    if (functions_.size() != labels_.size())
        throw DataError("sample has " + std::to_string(functions_.size()) + " functions but " +
                        std::to_string(labels_.size()) + " labels");
    if (ids_.empty()) {
        ids_.reserve(functions_.size());
        for (std::size_t i = 0; i < functions_.size(); ++i)
            ids_.push_back(std::to_string(i));
    } else if (ids_.size() != functions_.size()) {
        throw DataError("sample ids do not match the number of functions");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] != 0 && labels_[i] != 1)
            throw DataError("label of '" + ids_[i] + "' must be 0 or 1");
        if (i > 0 && !functions_[i].shares_grid_with(functions_[0]))
            throw GridMismatch();
    }
}

DistanceMatrix distance_matrix(std::span<const GridFunction> a, std::span<const GridFunction> b,
                               MetricKind metric, Parallelism par) {
    if (!a.empty() && !b.empty()) {
        for (const auto& f : a)
            require_shared_grid(f, b.front());
        for (const auto& g : b)
            require_shared_grid(g, b.front());
    }
    DistanceMatrix out(a.size(), b.size(), metric);
    const bool self = a.data() == b.data() && a.size() == b.size();
    parallel_for(a.size(), par, [&](std::size_t i) {
        for (std::size_t j = self ? i + 1 : 0; j < b.size(); ++j)
            out(i, j) = distance(metric, a[i], b[j]);
    });
    if (self) {
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                out(i, j) = out(j, i);
    }
    return out;
}

int knn_vote(std::span<const double> distances, std::span<const int> labels, std::size_t k, Rng& rng,
             std::size_t skip) {
    if (distances.size() != labels.size())
        throw std::invalid_argument("distances and labels differ in length");
    const std::size_t available = distances.size() - (skip < distances.size() ? 1 : 0);
    if (k < 1)
        throw std::invalid_argument("k must be at least 1");
    if (k > available)
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " +
                                    std::to_string(available) + " available neighbours");

    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(available);
    for (std::size_t i = 0; i < distances.size(); ++i)
        if (i != skip)
            order.emplace_back(distances[i], i);
    // Lexicographic on (distance, index): equal distances resolve to the lower index.
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end());

    std::size_t ones = 0;
    for (std::size_t r = 0; r < k; ++r)
        ones += labels[order[r].second] == 1 ? 1 : 0;
    const std::size_t zeros = k - ones;
    if (ones != zeros)
        return ones > zeros ? 1 : 0;
    return rng.coin() ? 1 : 0;
}

int knn_classify(const LabeledSample& train, const GridFunction& query, std::size_t k,
                 MetricKind metric, RngSeed seed) {
    if (train.empty())
        throw std::invalid_argument("empty training sample");
    std::vector<double> d(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        d[i] = distance(metric, train[i], query);
    Rng rng(derive_stream(seed, {}));
    return knn_vote(d, train.labels(), k, rng);
}

double loocv_error(const DistanceMatrix& self_distances, std::span<const int> labels, std::size_t k,
                   RngSeed seed) {
    const std::size_t n = labels.size();
    if (self_distances.rows() != n || self_distances.cols() != n)
        throw std::invalid_argument("distance matrix must be square and match the labels");
    if (n < k + 1)
        throw DataError("sample too small: leave-one-out with k = " + std::to_string(k) + " needs at least " +
                        std::to_string(k + 1) + " functions");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_stream(seed, {i}));
        if (knn_vote(self_distances.row(i), labels, k, rng, i) != labels[i])
            ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(n);
}

double loocv_error(const LabeledSample& sample, std::size_t k, MetricKind metric, RngSeed seed,
                   Parallelism par) {
    if (sample.size() < k + 1)
        throw DataError("sample too small: leave-one-out with k = " + std::to_string(k) + " needs at least " +
                        std::to_string(k + 1) + " functions");
    const auto m = distance_matrix(sample.functions(), sample.functions(), metric, par);
    return loocv_error(m, sample.labels(), k, seed);
}

double test_error(const DistanceMatrix& test_to_train, std::span<const int> train_labels,
                  std::span<const int> test_labels, std::size_t k, RngSeed seed) {
    if (test_to_train.rows() != test_labels.size() || test_to_train.cols() != train_labels.size())
        throw std::invalid_argument("distance matrix shape does not match the samples");
    if (test_labels.empty())
        throw std::invalid_argument("empty test sample");
    std::size_t wrong = 0;
    for (std::size_t j = 0; j < test_labels.size(); ++j) {
        Rng rng(derive_stream(seed, {j}));
        if (knn_vote(test_to_train.row(j), train_labels, k, rng) != test_labels[j])
            ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(test_labels.size());
}

double test_error(const LabeledSample& train, const LabeledSample& test, std::size_t k,
                  MetricKind metric, RngSeed seed, Parallelism par) {
    const auto m = distance_matrix(test.functions(), train.functions(), metric, par);
    return test_error(m, train.labels(), test.labels(), k, seed);
}

} // namespace hypodist
