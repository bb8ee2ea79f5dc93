#pragma once

#include "hypodist/classifier.hpp"
#include "hypodist/grid_function.hpp"
#include "hypodist/parallel.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hypodist {

/// A raw intensity profile on its own, possibly irregular, abscissae.
struct RawSpectrum {
    std::vector<double> t;
    std::vector<double> y;
    std::string id;
    std::optional<int> label;

    std::size_t size() const noexcept { return t.size(); }
    /// Strictly increasing finite t, finite y >= 0, equal lengths.
    void validate() const;
};

enum class Normalization { Max, UnitSquare, None };

std::string_view to_string(Normalization n) noexcept;
Normalization parse_normalization(std::string_view name);

struct PipelineConfig {
    /// Restriction is skipped when either bound is missing.
    std::optional<double> lo;
    std::optional<double> hi;
    double threshold = 0.0;
    std::size_t target_grid_size = 0;
    /// Without a bandwidth smoothing is skipped; spectra must then already share
    /// one grid of target_grid_size points.
    std::optional<double> bandwidth;
    Normalization normalization = Normalization::Max;

    void validate() const;
};

/// key=value lines (lo, hi, threshold, grid, bandwidth, normalization); `#`
/// starts a comment. Unknown keys are errors.
PipelineConfig parse_pipeline_config(std::istream& in, const std::string& source = "<config>");
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void write_pipeline_config(std::ostream& out, const PipelineConfig& config);

/// One spectrum per CSV with header `t,value`. Rows are sorted by t; repeated
/// t is an error naming the line.
RawSpectrum read_spectrum_csv(std::istream& in, const std::string& source, std::string id);
RawSpectrum load_spectrum_csv(const std::filesystem::path& path);

/// `path` is a CSV file or a directory of *.csv files (read in file-name
/// order, id = file stem). Labels come from an `id,label` CSV; a label for an
/// id that was not loaded is an error.
std::vector<RawSpectrum> load_spectra(const std::filesystem::path& path,
                                      const std::optional<std::filesystem::path>& labels_path = std::nullopt);

GridFunction load_function_csv(const std::filesystem::path& path);
void write_function_csv(std::ostream& out, const GridFunction& f);

/// Keeps points with lo <= t <= hi.
RawSpectrum restrict_domain(const RawSpectrum& s, double lo, double hi);

/// Intensities strictly below tau become 0.
RawSpectrum threshold_denoise(const RawSpectrum& s, double tau);

/// Gaussian-kernel Nadaraya-Watson estimate at each target abscissa. Terms with
/// |u - t_i| > 40 h underflow to exactly 0 and are skipped. Where the weight
/// sum underflows the nearest input value is used (the mean of two at a tie).
GridFunction nw_smooth(const RawSpectrum& s, const GridPtr& target, double bandwidth);
/// Target grid uniform over [min t, max t].
GridFunction nw_smooth(const RawSpectrum& s, std::size_t target_grid_size, double bandwidth);

GridFunction max_normalize(const GridFunction& f);

/// Affine map of t onto [0, 1] and y onto [0, 1].
GridFunction rescale_unit_square(const RawSpectrum& s);
GridFunction rescale_unit_square(const GridFunction& f);

struct PipelineResult {
    std::vector<GridFunction> functions;
    std::vector<std::string> ids;
    std::vector<std::optional<int>> labels;
    /// One tab-separated line per stage per spectrum: id, stage, detail.
    std::vector<std::string> provenance;

    /// Throws DataError naming the first unlabeled spectrum.
    LabeledSample to_labeled_sample() const;
};

/// restrict -> denoise -> smooth -> normalize. With smoothing, every output is on
/// the uniform grid over [lo, hi] (or, without restriction, over the
/// intersection of the input ranges). Errors carry the spectrum id.
PipelineResult run_pipeline(const std::vector<RawSpectrum>& spectra, const PipelineConfig& config,
                            Parallelism par = {});

} // namespace hypodist
