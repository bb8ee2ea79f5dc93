#pragma once

#include "hypodist/grid_function.hpp"
#include "hypodist/metric.hpp"
#include "hypodist/parallel.hpp"
#include "hypodist/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hypodist {

/// Functions on one shared grid with 0/1 labels. Ids are optional names used in
/// reports; when absent they default to the positional index.
class LabeledSample {
public:
    LabeledSample() = default;
    LabeledSample(std::vector<GridFunction> functions, std::vector<int> labels,
                  std::vector<std::string> ids = {});

    std::size_t size() const noexcept { return functions_.size(); }
    bool empty() const noexcept { return functions_.empty(); }
    const std::vector<GridFunction>& functions() const noexcept { return functions_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const GridFunction& operator[](std::size_t i) const noexcept { return functions_[i]; }

private:
    std::vector<GridFunction> functions_;
    std::vector<int> labels_;
    std::vector<std::string> ids_;
};

class DistanceMatrix {
public:
    DistanceMatrix(std::size_t rows, std::size_t cols, MetricKind metric)
        : rows_(rows), cols_(cols), metric_(metric), entries_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    MetricKind metric() const noexcept { return metric_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(entries_).subspan(i * cols_, cols_);
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    MetricKind metric_;
    std::vector<double> entries_;
};

/// entries(i, j) = metric(a_i, b_j). Rows are computed in parallel. When a and b
/// are the same span only the upper triangle is evaluated and mirrored.
DistanceMatrix distance_matrix(std::span<const GridFunction> a, std::span<const GridFunction> b,
                               MetricKind metric, Parallelism par = {});

/// Majority label among the k smallest distances. Distance ties at the k-th
/// position go to the smaller training index; a split vote (even k only) is
/// settled by rng.coin(). `skip` excludes one training index (leave-one-out).
int knn_vote(std::span<const double> distances, std::span<const int> labels, std::size_t k, Rng& rng,
             std::size_t skip = static_cast<std::size_t>(-1));

int knn_classify(const LabeledSample& train, const GridFunction& query, std::size_t k,
                 MetricKind metric, RngSeed seed);

/// Leave-one-out error. Fold i draws its tie-break coin from
/// derive_stream(seed, {i}).
double loocv_error(const DistanceMatrix& self_distances, std::span<const int> labels, std::size_t k,
                   RngSeed seed);
double loocv_error(const LabeledSample& sample, std::size_t k, MetricKind metric, RngSeed seed,
                   Parallelism par = {});

/// Fraction of test items misclassified. `test_to_train` has one row per test
/// item. Test item j draws its coin from derive_stream(seed, {j}).
double test_error(const DistanceMatrix& test_to_train, std::span<const int> train_labels,
                  std::span<const int> test_labels, std::size_t k, RngSeed seed);
double test_error(const LabeledSample& train, const LabeledSample& test, std::size_t k,
                  MetricKind metric, RngSeed seed, Parallelism par = {});

} // namespace hypodist
