#pragma once

#include "hypodist/grid_function.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace hypodist {

enum class MetricKind { HypoHausdorff, L2, Sup };

std::string_view to_string(MetricKind kind) noexcept;
/// Accepts "hausdorff" (or "H"), "l2", "sup". Throws std::invalid_argument otherwise.
MetricKind parse_metric(std::string_view name);

/// Euclidean distance from p to the nearest point of pts.
double point_to_set_distance(Point2D p, std::span<const Point2D> pts);

/// Grid approximation of the Hausdorff distance between hypographs.
///
/// Candidate points are the graph points (t_i, f_i) lying strictly above the
/// other function at t_i; each is measured against the other function's graph
/// points. Equality indices contribute 0, so using a strict comparison on both
/// sides gives the same value as the (>=, >) split. O(n^2).
double hypo_hausdorff(const GridFunction& f, const GridFunction& g);

/// Same value as hypo_hausdorff, bit for bit. The inner nearest-point scan runs
/// outward from j = i and stops once |t_j - t_i|^2 reaches the best squared
/// distance; candidates whose vertical gap cannot beat the running maximum are
/// skipped, and a scan is abandoned as soon as it drops to that maximum.
double hypo_hausdorff_pruned(const GridFunction& f, const GridFunction& g);

/// Two-sided discrete Hausdorff distance between rasterised hypographs. Column
/// i holds {(t_i, k*resolution) : k*resolution <= v_i} plus the top point
/// (t_i, v_i). Intended as a reference for hypo_hausdorff.
double oracle_hausdorff(const GridFunction& f, const GridFunction& g, double resolution);

/// Trapezoid-rule L2 distance over [t_0, t_{n-1}]. Needs n >= 2.
double l2_distance(const GridFunction& f, const GridFunction& g);

double sup_distance(const GridFunction& f, const GridFunction& g);

double max_value(const GridFunction& f);

/// Dispatch on kind. `pruned` selects the pruned Hausdorff kernel.
double distance(MetricKind kind, const GridFunction& f, const GridFunction& g, bool pruned = true);

} // namespace hypodist
