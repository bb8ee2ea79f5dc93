#include "hypodist/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hypodist {

void SimModel::validate() const {
    if (!(a1 > 0.0 && a1 <= 0.5))
        throw std::invalid_argument("a1 must lie in (0, 1/2]");
    if (!(a2 >= 0.5 && a2 < 1.0))
        throw std::invalid_argument("a2 must lie in [1/2, 1)");
    if (!(peak_base > 0.0 && peak_base < 1.0))
        throw std::invalid_argument("peak base must lie in (0, 1)");
    if (!(peak_height >= 0.0) || !std::isfinite(peak_height))
        throw std::invalid_argument("peak height must be finite and >= 0");
    if (grid_size < 2)
        throw std::invalid_argument("grid_size must be at least 2");
}

void ExperimentConfig::validate() const {
    model.validate();
    if (train_per_class == 0 || test_per_class == 0)
        throw std::invalid_argument("sample sizes must be positive");
    if (replications == 0)
        throw std::invalid_argument("replications must be positive");
    if (ks.empty() || metrics.empty())
        throw std::invalid_argument("need at least one k and one metric");
    for (std::size_t k : ks)
        if (k == 0 || k > 2 * train_per_class)
            throw std::invalid_argument("k = " + std::to_string(k) + " outside [1, 2 * train_per_class]");
}

GridFunction brownian_bridge_abs(const GridPtr& grid, Rng& rng) {
    const std::size_t n = grid->size();
    if (n < 2)
        throw std::invalid_argument("brownian bridge needs grid_size >= 2");
    const auto t = grid->values();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        w[i] = w[i - 1] + std::sqrt(t[i] - t[i - 1]) * rng.normal();
    const double t0 = t.front();
    const double len = t.back() - t0;
    const double end = w.back();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::abs(w[i] - ((t[i] - t0) / len) * end);
    return GridFunction(grid, std::move(v));
}

GridFunction brownian_bridge_abs(std::size_t grid_size, RngSeed stream) {
    if (grid_size < 2)
        throw std::invalid_argument("brownian bridge needs grid_size >= 2");
    Rng rng(stream.value);
    return brownian_bridge_abs(make_uniform_grid(0.0, 1.0, grid_size), rng);
}

GridFunction triangular_peak(double center, double base, double height, const GridPtr& grid) {
    if (!(base > 0.0) || !(height > 0.0))
        throw std::invalid_argument("triangular peak needs base > 0 and height > 0");
    const double half = base / 2.0;
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = height * std::max(0.0, 1.0 - std::abs((*grid)[i] - center) / half);
    return GridFunction(grid, std::move(v));
}

Trajectory draw_trajectory(int cls, const SimModel& model, const GridPtr& grid, Rng& rng) {
    if (cls != 0 && cls != 1)
        throw std::invalid_argument("class must be 0 or 1");
    const double center = cls == 0 ? rng.uniform(0.0, model.a1) : rng.uniform(model.a2, 1.0);
    GridFunction bridge = brownian_bridge_abs(grid, rng);
    if (!(model.peak_height > 0.0))
        return {std::move(bridge), center};
    const GridFunction peak = triangular_peak(center, model.peak_base, model.peak_height, grid);
    std::vector<double> v(bridge.values().begin(), bridge.values().end());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] += peak[i];
    return {GridFunction(grid, std::move(v)), center};
}

LabeledSample draw_sample(const SimModel& model, const GridPtr& grid, std::size_t per_class, RngSeed seed,
                          std::uint64_t replication, std::uint64_t role) {
    std::vector<GridFunction> fs;
    std::vector<int> labels;
    fs.reserve(2 * per_class);
    labels.reserve(2 * per_class);
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const int cls = i < per_class ? 0 : 1;
        Rng rng(derive_stream(seed, {replication, role, i}));
        fs.push_back(draw_trajectory(cls, model, grid, rng).function);
        labels.push_back(cls);
    }
    return LabeledSample(std::move(fs), std::move(labels));
}

ErrorTable run_experiment(const ExperimentConfig& config, Parallelism par) {
    config.validate();
    const GridPtr grid = make_uniform_grid(0.0, 1.0, config.model.grid_size);
    ErrorTable table(config.ks, config.metrics, config.replications);

    parallel_for(config.replications, par, [&](std::size_t r) {
        const std::uint64_t train_rep = config.redraw_train ? r : 0;
        const LabeledSample train =
            draw_sample(config.model, grid, config.train_per_class, config.seed, train_rep, kTrainRole);
        const LabeledSample test =
            draw_sample(config.model, grid, config.test_per_class, config.seed, r, kTestRole);
        for (std::size_t mi = 0; mi < config.metrics.size(); ++mi) {
            const MetricKind metric = config.metrics[mi];
            const DistanceMatrix m =
                distance_matrix(test.functions(), train.functions(), metric, Parallelism{1});
            for (std::size_t ki = 0; ki < config.ks.size(); ++ki) {
                const RngSeed vote{derive_stream(
                    config.seed, {r, kVoteRole, config.ks[ki], static_cast<std::uint64_t>(metric)})};
                table.set(ki, mi, r, test_error(m, train.labels(), test.labels(), config.ks[ki], vote));
            }
        }
    });
    return table;
}

} // namespace hypodist
