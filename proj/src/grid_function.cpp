#include "hypodist/grid_function.hpp"

#include "hypodist/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hypodist {

Grid::Grid(std::vector<double> abscissae) : t_(std::move(abscissae)) {
    if (t_.empty())
        throw DataError("grid must contain at least one abscissa");
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i]))
            throw DataError("non-finite abscissa at index " + std::to_string(i));
        if (i > 0 && !(t_[i - 1] < t_[i]))
            throw DataError("grid not strictly increasing at index " + std::to_string(i));
    }
}

Grid Grid::uniform(double lo, double hi, std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("uniform grid needs n >= 1");
    if (n == 1)
        return Grid({lo});
    if (!(lo < hi))
        throw std::invalid_argument("uniform grid needs lo < hi");
    std::vector<double> t(n);
    const double span = hi - lo;
    const double last = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = lo + span * (static_cast<double>(i) / last);
    t.back() = hi;
    return Grid(std::move(t));
}

double Grid::mesh() const noexcept {
    double m = 0.0;
    for (std::size_t i = 1; i < t_.size(); ++i)
        m = std::max(m, t_[i] - t_[i - 1]);
    return m;
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
    if (!grid_)
        throw std::invalid_argument("null grid");
    if (v_.size() != grid_->size())
        throw DataError("grid has " + std::to_string(grid_->size()) + " abscissae but " +
                        std::to_string(v_.size()) + " values were given");
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (!std::isfinite(v_[i]) || v_[i] < 0.0)
            throw DataError("value at index " + std::to_string(i) + " must be finite and >= 0");
    }
}

bool GridFunction::shares_grid_with(const GridFunction& other) const noexcept {
    return grid_ == other.grid_ || *grid_ == *other.grid_;
}

void require_shared_grid(const GridFunction& a, const GridFunction& b) {
    if (!a.shares_grid_with(b))
        throw GridMismatch();
}

} // namespace hypodist
