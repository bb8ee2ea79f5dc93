#pragma once

#include "hypodist/grid_function.hpp"
#include "hypodist/rng.hpp"
#include "hypodist/simulate.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace hypodist::testing {

/// One of: scaled |bridge|, a tent at a random spot, a random step function,
/// or a bridge plus tent. Values are non-negative.
inline GridFunction random_function(const GridPtr& grid, Rng& rng) {
    const std::size_t n = grid->size();
    const int kind = static_cast<int>(rng.uniform() * 4.0);
    std::vector<double> v(n, 0.0);
    auto add_tent = [&] {
        const double c = rng.uniform();
        const double base = 0.02 + 0.3 * rng.uniform();
        const double h = 0.2 + rng.uniform();
        for (std::size_t i = 0; i < n; ++i)
            v[i] += h * std::max(0.0, 1.0 - std::abs((*grid)[i] - c) / (base / 2));
    };
    auto add_bridge = [&] {
        if (n < 2) {
            v[0] += rng.uniform();
            return;
        }
        const double scale = 0.2 + rng.uniform();
        const GridFunction b = brownian_bridge_abs(grid, rng);
        for (std::size_t i = 0; i < n; ++i)
            v[i] += scale * b[i];
    };
    switch (kind) {
    case 0: add_bridge(); break;
    case 1: add_tent(); break;
    case 2: {
        const int steps = 1 + static_cast<int>(rng.uniform() * 6);
        double level = rng.uniform();
        std::size_t next_cut = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == next_cut) {
                level = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
                next_cut = i + 1 + static_cast<std::size_t>(rng.uniform() * double(n) / steps);
            }
            v[i] = level;
        }
        break;
    }
    default:
        add_bridge();
        add_tent();
        break;
    }
    return GridFunction(grid, std::move(v));
}

inline std::size_t random_size(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.uniform() * double(hi - lo + 1));
}

} // namespace hypodist::testing
