#pragma once

#include "hypodist/metric.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace hypodist {

/// Misclassification rates indexed by (k, metric), one value per replication.
class ErrorTable {
public:
    ErrorTable(std::vector<std::size_t> ks, std::vector<MetricKind> metrics, std::size_t replications);

    const std::vector<std::size_t>& ks() const noexcept { return ks_; }
    const std::vector<MetricKind>& metrics() const noexcept { return metrics_; }
    std::size_t replications() const noexcept { return replications_; }

    void set(std::size_t k_index, std::size_t metric_index, std::size_t replication, double rate);
    double rate(std::size_t k_index, std::size_t metric_index, std::size_t replication) const;
    double mean(std::size_t k_index, std::size_t metric_index) const;

    /// Lookup by value; throws std::out_of_range when absent.
    double mean_for(std::size_t k, MetricKind metric) const;

    /// Long format: `k,metric,mean_rate,replication,rate`, one row per
    /// (k, metric, replication). Doubles use shortest round-trip formatting.
    void write_csv(std::ostream& os) const;
    std::string csv() const;

    /// k down the side, one column per metric, three decimals.
    void write_aligned(std::ostream& os) const;

private:
    std::size_t slot(std::size_t ki, std::size_t mi, std::size_t r) const;

    std::vector<std::size_t> ks_;
    std::vector<MetricKind> metrics_;
    std::size_t replications_;
    std::vector<double> rates_;
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

} // namespace hypodist
