#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace hypodist {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

/// Strictly increasing, finite abscissae shared by many functions.
class Grid {
public:
    explicit Grid(std::vector<double> abscissae);

    /// t_i = lo + i (hi - lo) / (n - 1) with both endpoints exact.
    static Grid uniform(double lo, double hi, std::size_t n);

    std::size_t size() const noexcept { return t_.size(); }
    double operator[](std::size_t i) const noexcept { return t_[i]; }
    std::span<const double> values() const noexcept { return t_; }
    double front() const noexcept { return t_.front(); }
    double back() const noexcept { return t_.back(); }

    /// Largest gap between consecutive abscissae (0 for a single point).
    double mesh() const noexcept;

    friend bool operator==(const Grid& a, const Grid& b) { return a.t_ == b.t_; }

private:
    std::vector<double> t_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(std::vector<double> abscissae) {
    return std::make_shared<const Grid>(std::move(abscissae));
}

inline GridPtr make_uniform_grid(double lo, double hi, std::size_t n) {
    return std::make_shared<const Grid>(Grid::uniform(lo, hi, n));
}

/// A non-negative function sampled on a grid. Immutable once built; copies
/// share the grid.
class GridFunction {
public:
    GridFunction(GridPtr grid, std::vector<double> values);
    GridFunction(std::vector<double> grid, std::vector<double> values)
        : GridFunction(make_grid(std::move(grid)), std::move(values)) {}

    std::size_t size() const noexcept { return v_.size(); }
    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return v_; }
    double t(std::size_t i) const noexcept { return (*grid_)[i]; }
    double operator[](std::size_t i) const noexcept { return v_[i]; }
    Point2D point(std::size_t i) const noexcept { return {t(i), v_[i]}; }

    /// Bitwise-identical abscissae (pointer equality is the fast path).
    bool shares_grid_with(const GridFunction& other) const noexcept;

private:
    GridPtr grid_;
    std::vector<double> v_;
};

/// Throws GridMismatch unless a and b share an identical grid.
void require_shared_grid(const GridFunction& a, const GridFunction& b);

} // namespace hypodist
