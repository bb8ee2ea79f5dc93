#include "hypodist/metric.hpp"

#include "hypodist/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypodist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared distance between (t_i, top) and graph point j of `other`. Both
// kernels go through this so their per-pair arithmetic is identical.
inline double pair_sq(std::span<const double> t, std::size_t i, double top,
                      std::span<const double> other, std::size_t j) noexcept {
    const double dx = t[j] - t[i];
    const double dy = other[j] - top;
    return dx * dx + dy * dy;
}

// max over {i : above_i > below_i} of min_j |(t_i, above_i) - (t_j, below_j)|^2
double directed_naive_sq(std::span<const double> t, std::span<const double> above,
                         std::span<const double> below) {
    double worst = 0.0;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(above[i] > below[i]))
            continue;
        double best = kInf;
        for (std::size_t j = 0; j < n; ++j)
            best = std::min(best, pair_sq(t, i, above[i], below, j));
        worst = std::max(worst, best);
    }
    return worst;
}

struct Candidate {
    double gap_sq;     // squared vertical gap: an upper bound on the candidate's distance
    std::size_t index;
    bool f_on_top;
};

// Outward scan from j = i. Returns a value <= floor as soon as the candidate is
// known not to raise the maximum, otherwise the exact minimum.
double nearest_sq_pruned(std::span<const double> t, std::size_t i, double top,
                         std::span<const double> other, double floor) noexcept {
    const std::size_t n = t.size();
    double best = pair_sq(t, i, top, other, i);
    if (best <= floor)
        return best;
    bool left_open = i > 0;
    bool right_open = i + 1 < n;
    for (std::size_t step = 1; left_open || right_open; ++step) {
        if (left_open) {
            const std::size_t j = i - step;
            const double dx = t[j] - t[i];
            if (dx * dx >= best) {
                left_open = false;
            } else {
                best = std::min(best, pair_sq(t, i, top, other, j));
                if (best <= floor)
                    return best;
                left_open = j > 0;
            }
        }
        if (right_open) {
            const std::size_t j = i + step;
            const double dx = t[j] - t[i];
            if (dx * dx >= best) {
                right_open = false;
            } else {
                best = std::min(best, pair_sq(t, i, top, other, j));
                if (best <= floor)
                    return best;
                right_open = j + 1 < n;
            }
        }
    }
    return best;
}

// Nearest ordinate to y within the raster column {k*res <= top} U {top}.
double nearest_in_column(double y, double top, double res) noexcept {
    if (y >= top)
        return top;
    const double k = std::floor(y / res);
    double best = top;
    for (double c : {k - 1.0, k, k + 1.0}) {
        if (c < 0.0)
            continue;
        const double level = c * res;
        if (level > top)
            continue;
        if (std::abs(y - level) < std::abs(y - best))
            best = level;
    }
    return best;
}

// Largest k with k*res <= top.
std::size_t raster_rows(double top, double res) noexcept {
    auto k = static_cast<std::size_t>(std::floor(top / res));
    while (static_cast<double>(k + 1) * res <= top)
        ++k;
    while (k > 0 && static_cast<double>(k) * res > top)
        --k;
    return k;
}

double oracle_point_sq(std::span<const double> t, std::size_t i, double y,
                       std::span<const double> other, double res) noexcept {
    const std::size_t n = t.size();
    double best = kInf;
    auto visit = [&](std::size_t j) {
        const double dx = t[j] - t[i];
        if (dx * dx >= best)
            return false;
        const double dy = nearest_in_column(y, other[j], res) - y;
        best = std::min(best, dx * dx + dy * dy);
        return true;
    };
    visit(i);
    for (std::size_t j = i; j-- > 0;)
        if (!visit(j))
            break;
    for (std::size_t j = i + 1; j < n; ++j)
        if (!visit(j))
            break;
    return best;
}

double oracle_directed_sq(std::span<const double> t, std::span<const double> from,
                          std::span<const double> to, double res) {
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::size_t rows = raster_rows(from[i], res);
        for (std::size_t k = 0; k <= rows; ++k)
            worst = std::max(worst, oracle_point_sq(t, i, static_cast<double>(k) * res, to, res));
        worst = std::max(worst, oracle_point_sq(t, i, from[i], to, res));
    }
    return worst;
}

} // namespace

std::string_view to_string(MetricKind kind) noexcept {
    switch (kind) {
    case MetricKind::HypoHausdorff: return "hausdorff";
    case MetricKind::L2: return "l2";
    case MetricKind::Sup: return "sup";
    }
    return "unknown";
}

MetricKind parse_metric(std::string_view name) {
    if (name == "hausdorff" || name == "H" || name == "h")
        return MetricKind::HypoHausdorff;
    if (name == "l2" || name == "L2" || name == "d2")
        return MetricKind::L2;
    if (name == "sup" || name == "linf" || name == "dinf")
        return MetricKind::Sup;
    throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

double point_to_set_distance(Point2D p, std::span<const Point2D> pts) {
    if (pts.empty())
        throw std::invalid_argument("empty point set");
    double best = kInf;
    for (const Point2D& q : pts)
        best = std::min(best, std::hypot(q.x - p.x, q.y - p.y));
    return best;
}

double hypo_hausdorff(const GridFunction& f, const GridFunction& g) {
    require_shared_grid(f, g);
    const auto t = f.grid().values();
    const double sq = std::max(directed_naive_sq(t, g.values(), f.values()),
                               directed_naive_sq(t, f.values(), g.values()));
    return std::sqrt(sq);
}

double hypo_hausdorff_pruned(const GridFunction& f, const GridFunction& g) {
    require_shared_grid(f, g);
    const auto t = f.grid().values();
    const auto fv = f.values();
    const auto gv = g.values();

    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (fv[i] > gv[i] || gv[i] > fv[i]) {
            const bool f_top = fv[i] > gv[i];
            // Same arithmetic as pair_sq at j == i.
            const double dy = f_top ? gv[i] - fv[i] : fv[i] - gv[i];
            candidates.push_back({0.0 * 0.0 + dy * dy, i, f_top});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.gap_sq > b.gap_sq || (a.gap_sq == b.gap_sq && a.index < b.index);
    });

    double worst = 0.0;
    for (const Candidate& c : candidates) {
        if (c.gap_sq <= worst)
            break;
        const double d = c.f_on_top ? nearest_sq_pruned(t, c.index, fv[c.index], gv, worst)
                                    : nearest_sq_pruned(t, c.index, gv[c.index], fv, worst);
        worst = std::max(worst, d);
    }
    return std::sqrt(worst);
}

double oracle_hausdorff(const GridFunction& f, const GridFunction& g, double resolution) {
    if (!(resolution > 0.0) || !std::isfinite(resolution))
        throw std::invalid_argument("oracle resolution must be positive");
    require_shared_grid(f, g);
    const auto t = f.grid().values();
    const double sq = std::max(oracle_directed_sq(t, f.values(), g.values(), resolution),
                               oracle_directed_sq(t, g.values(), f.values(), resolution));
    return std::sqrt(sq);
}

double l2_distance(const GridFunction& f, const GridFunction& g) {
    require_shared_grid(f, g);
    if (f.size() < 2)
        throw std::invalid_argument("l2_distance needs at least 2 grid points");
    const auto t = f.grid().values();
    double acc = 0.0;
    double prev = (f[0] - g[0]) * (f[0] - g[0]);
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double cur = (f[i] - g[i]) * (f[i] - g[i]);
        acc += 0.5 * (prev + cur) * (t[i] - t[i - 1]);
        prev = cur;
    }
    return std::sqrt(acc);
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
    require_shared_grid(f, g);
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        m = std::max(m, std::abs(f[i] - g[i]));
    return m;
}

double max_value(const GridFunction& f) {
    const auto v = f.values();
    return *std::max_element(v.begin(), v.end());
}

double distance(MetricKind kind, const GridFunction& f, const GridFunction& g, bool pruned) {
    switch (kind) {
    case MetricKind::HypoHausdorff:
        return pruned ? hypo_hausdorff_pruned(f, g) : hypo_hausdorff(f, g);
    case MetricKind::L2: return l2_distance(f, g);
    case MetricKind::Sup: return sup_distance(f, g);
    }
    throw std::invalid_argument("unknown metric kind");
}

} // namespace hypodist
