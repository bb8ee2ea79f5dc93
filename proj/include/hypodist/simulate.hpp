#pragma once

#include "hypodist/classifier.hpp"
#include "hypodist/error_table.hpp"
#include "hypodist/grid_function.hpp"
#include "hypodist/parallel.hpp"
#include "hypodist/rng.hpp"

#include <cstddef>
#include <vector>

namespace hypodist {

/// Class 0 peaks are centred in [0, a1], class 1 peaks in [a2, 1].
struct SimModel {
    double a1 = 0.5;
    double a2 = 0.5;
    double peak_base = 0.04;
    /// 0 is accepted and yields two identically distributed classes.
    double peak_height = 1.0;
    std::size_t grid_size = 100;

    static SimModel model1() { return {}; }
    static SimModel model2() { return {1.0 / 3.0, 2.0 / 3.0}; }

    /// Throws std::invalid_argument unless 0 < a1 <= 1/2 <= a2 < 1, 0 < base < 1,
    /// height >= 0 and grid_size >= 2.
    void validate() const;
};

struct ExperimentConfig {
    SimModel model;
    std::size_t train_per_class = 50;
    std::size_t test_per_class = 50;
    std::vector<std::size_t> ks{3, 5, 7, 9};
    std::vector<MetricKind> metrics{MetricKind::HypoHausdorff, MetricKind::L2, MetricKind::Sup};
    std::size_t replications = 5;
    RngSeed seed{};
    /// false keeps replication 0's training sample for every replication.
    bool redraw_train = true;

    void validate() const;
};

/// |W(t) - t W(1)| on t_i = i / (grid_size - 1), W built from independent
/// N(0, dt) increments. Both endpoints are exactly 0.
GridFunction brownian_bridge_abs(const GridPtr& grid, Rng& rng);
GridFunction brownian_bridge_abs(std::size_t grid_size, RngSeed stream);

/// height * max(0, 1 - |t - center| / (base / 2)), sampled on grid.
GridFunction triangular_peak(double center, double base, double height, const GridPtr& grid);

struct Trajectory {
    GridFunction function;
    double peak_center;
};

/// Draw order from rng: the peak centre (one uniform), then grid_size - 1
/// normals for the bridge.
Trajectory draw_trajectory(int cls, const SimModel& model, const GridPtr& grid, Rng& rng);

/// Sample of `per_class` class-0 trajectories followed by `per_class` class-1
/// trajectories. Trajectory i uses stream derive_stream(seed, {replication, role, i}).
LabeledSample draw_sample(const SimModel& model, const GridPtr& grid, std::size_t per_class, RngSeed seed,
                          std::uint64_t replication, std::uint64_t role);

inline constexpr std::uint64_t kTrainRole = 0;
inline constexpr std::uint64_t kTestRole = 1;
inline constexpr std::uint64_t kVoteRole = 2;

/// For each replication r: fresh train and test samples, then test_error for
/// every (k, metric) with tie-break seed derive_stream(seed, {r, 2, k, metric}).
/// Replications run in parallel; the table does not depend on the thread count.
ErrorTable run_experiment(const ExperimentConfig& config, Parallelism par = {});

} // namespace hypodist
