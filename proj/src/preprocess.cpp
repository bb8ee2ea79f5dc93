#include "hypodist/preprocess.hpp"

#include "hypodist/error.hpp"
#include "hypodist/error_table.hpp"
#include "hypodist/metric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hypodist {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

double parse_number(std::string_view field, const std::string& source, std::size_t line) {
    if (!field.empty() && field.front() == '+')
        field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, value);
    if (field.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(value))
        throw DataError(where(source, line) + "non-numeric field '" + std::string(field) + "'");
    return value;
}

// Calls row(fields, line_no) for each non-empty data line after checking the header.
template <class Row>
void read_csv(std::istream& in, const std::string& source, std::string_view expected_header, Row&& row) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF"))
            view.remove_prefix(3);
        view = trim(view);
        if (view.empty())
            continue;
        if (!have_header) {
            std::string normalized;
            for (auto f : split_fields(view)) {
                if (!normalized.empty())
                    normalized += ',';
                normalized += f;
            }
            if (normalized != expected_header)
                throw DataError(where(source, line_no) + "expected header '" + std::string(expected_header) + "'");
            have_header = true;
            continue;
        }
        const auto fields = split_fields(view);
        if (fields.size() != 2)
            throw DataError(where(source, line_no) + "expected 2 fields, found " + std::to_string(fields.size()));
        row(fields, line_no);
    }
    if (!have_header)
        throw DataError(source + ": missing header '" + std::string(expected_header) + "'");
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path.string() + "'");
    return in;
}

std::string with_id(const std::string& id, const std::string& msg) { return "spectrum '" + id + "': " + msg; }

std::string bounds_text(double lo, double hi) {
    return "[" + format_double(lo) + "," + format_double(hi) + "]";
}

} // namespace

void RawSpectrum::validate() const {
    if (t.size() != y.size())
        throw DataError(with_id(id, "abscissae and intensities differ in length"));
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(y[i]))
            throw DataError(with_id(id, "non-finite entry at index " + std::to_string(i)));
        if (y[i] < 0.0)
            throw DataError(with_id(id, "negative intensity at index " + std::to_string(i)));
        if (i > 0 && !(t[i - 1] < t[i]))
            throw DataError(with_id(id, "abscissae not strictly increasing at index " + std::to_string(i)));
    }
    if (label && *label != 0 && *label != 1)
        throw DataError(with_id(id, "label must be 0 or 1"));
}

std::string_view to_string(Normalization n) noexcept {
    switch (n) {
    case Normalization::Max: return "max";
    case Normalization::UnitSquare: return "unit-square";
    case Normalization::None: return "none";
    }
    return "unknown";
}

Normalization parse_normalization(std::string_view name) {
    if (name == "max")
        return Normalization::Max;
    if (name == "unit-square" || name == "unit_square")
        return Normalization::UnitSquare;
    if (name == "none")
        return Normalization::None;
    throw std::invalid_argument("unknown normalization '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
    if (lo.has_value() != hi.has_value())
        throw std::invalid_argument("restriction needs both lo and hi");
    if (lo && !(*lo < *hi))
        throw std::invalid_argument("restriction needs lo < hi");
    if (!(threshold >= 0.0) || !std::isfinite(threshold))
        throw std::invalid_argument("threshold must be finite and >= 0");
    if (target_grid_size < 2)
        throw std::invalid_argument("target grid size must be at least 2");
    if (bandwidth && (!(*bandwidth > 0.0) || !std::isfinite(*bandwidth)))
        throw std::invalid_argument("bandwidth must be positive");
}

PipelineConfig parse_pipeline_config(std::istream& in, const std::string& source) {
    PipelineConfig c;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw DataError(where(source, line_no) + "expected key=value");
        const auto key = trim(view.substr(0, eq));
        const auto value = trim(view.substr(eq + 1));
        if (key == "lo") {
            c.lo = parse_number(value, source, line_no);
        } else if (key == "hi") {
            c.hi = parse_number(value, source, line_no);
        } else if (key == "threshold") {
            c.threshold = parse_number(value, source, line_no);
        } else if (key == "grid" || key == "target_grid_size") {
            const double g = parse_number(value, source, line_no);
            if (g < 0 || g != std::floor(g))
                throw DataError(where(source, line_no) + "grid size must be a non-negative integer");
            c.target_grid_size = static_cast<std::size_t>(g);
        } else if (key == "bandwidth") {
            if (value != "none")
                c.bandwidth = parse_number(value, source, line_no);
        } else if (key == "normalization") {
            try {
                c.normalization = parse_normalization(value);
            } catch (const std::invalid_argument& e) {
                throw DataError(where(source, line_no) + e.what());
            }
        } else {
            throw DataError(where(source, line_no) + "unknown key '" + std::string(key) + "'");
        }
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(source + ": " + e.what());
    }
    return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    auto in = open_input(path);
    return parse_pipeline_config(in, path.string());
}

void write_pipeline_config(std::ostream& out, const PipelineConfig& c) {
    if (c.lo)
        out << "lo=" << format_double(*c.lo) << '\n' << "hi=" << format_double(*c.hi) << '\n';
    out << "threshold=" << format_double(c.threshold) << '\n';
    out << "grid=" << c.target_grid_size << '\n';
    out << "bandwidth=" << (c.bandwidth ? format_double(*c.bandwidth) : std::string("none")) << '\n';
    out << "normalization=" << to_string(c.normalization) << '\n';
}

RawSpectrum read_spectrum_csv(std::istream& in, const std::string& source, std::string id) {
    struct Row {
        double t;
        double y;
        std::size_t line;
    };
    std::vector<Row> rows;
    read_csv(in, source, "t,value", [&](const std::vector<std::string_view>& f, std::size_t line) {
        const double t = parse_number(f[0], source, line);
        const double y = parse_number(f[1], source, line);
        if (y < 0.0)
            throw DataError(where(source, line) + "negative intensity");
        rows.push_back({t, y, line});
    });
    if (rows.empty())
        throw DataError(source + ": no data rows");
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
    RawSpectrum s;
    s.id = std::move(id);
    s.t.reserve(rows.size());
    s.y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].t == rows[i - 1].t)
            throw DataError(where(source, std::max(rows[i].line, rows[i - 1].line)) + "duplicate abscissa " +
                            format_double(rows[i].t));
        s.t.push_back(rows[i].t);
        s.y.push_back(rows[i].y);
    }
    return s;
}

RawSpectrum load_spectrum_csv(const fs::path& path) {
    auto in = open_input(path);
    return read_spectrum_csv(in, path.string(), path.stem().string());
}

std::vector<RawSpectrum> load_spectra(const fs::path& path, const std::optional<fs::path>& labels_path) {
    std::vector<RawSpectrum> out;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.empty())
            throw DataError("no .csv spectra in '" + path.string() + "'");
        for (const auto& f : files)
            out.push_back(load_spectrum_csv(f));
    } else {
        out.push_back(load_spectrum_csv(path));
    }

    if (labels_path) {
        std::map<std::string, std::size_t> by_id;
        for (std::size_t i = 0; i < out.size(); ++i)
            by_id.emplace(out[i].id, i);
        auto in = open_input(*labels_path);
        const std::string source = labels_path->string();
        read_csv(in, source, "id,label", [&](const std::vector<std::string_view>& f, std::size_t line) {
            const auto it = by_id.find(std::string(f[0]));
            if (it == by_id.end())
                throw DataError(where(source, line) + "unknown label id '" + std::string(f[0]) + "'");
            if (f[1] != "0" && f[1] != "1")
                throw DataError(where(source, line) + "label must be 0 or 1");
            out[it->second].label = f[1] == "1" ? 1 : 0;
        });
    }
    return out;
}

GridFunction load_function_csv(const fs::path& path) {
    const RawSpectrum s = load_spectrum_csv(path);
    return GridFunction(s.t, s.y);
}

void write_function_csv(std::ostream& out, const GridFunction& f) {
    out << "t,value\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        out << format_double(f.t(i)) << ',' << format_double(f[i]) << '\n';
}

RawSpectrum restrict_domain(const RawSpectrum& s, double lo, double hi) {
    if (!(lo < hi))
        throw std::invalid_argument("restriction needs lo < hi");
    RawSpectrum out;
    out.id = s.id;
    out.label = s.label;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.t[i] >= lo && s.t[i] <= hi) {
            out.t.push_back(s.t[i]);
            out.y.push_back(s.y[i]);
        }
    }
    if (out.t.empty())
        throw DataError(with_id(s.id, "empty restriction"));
    return out;
}

RawSpectrum threshold_denoise(const RawSpectrum& s, double tau) {
    if (!(tau >= 0.0))
        throw std::invalid_argument("threshold must be >= 0");
    RawSpectrum out = s;
    for (double& y : out.y)
        if (y < tau)
            y = 0.0;
    return out;
}

GridFunction nw_smooth(const RawSpectrum& s, const GridPtr& target, double bandwidth) {
    if (s.t.empty())
        throw DataError(with_id(s.id, "cannot smooth an empty spectrum"));
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw std::invalid_argument("bandwidth must be positive");
    const double reach = 40.0 * bandwidth;
    std::vector<double> v(target->size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double u = (*target)[j];
        const auto first = std::lower_bound(s.t.begin(), s.t.end(), u - reach);
        const auto last = std::upper_bound(first, s.t.end(), u + reach);
        double num = 0.0;
        double den = 0.0;
        for (auto it = first; it != last; ++it) {
            const double z = (u - *it) / bandwidth;
            const double w = std::exp(-0.5 * z * z);
            num += w * s.y[static_cast<std::size_t>(it - s.t.begin())];
            den += w;
        }
        if (den > 0.0) {
            v[j] = std::max(0.0, num / den);
        } else {
            // Nearest input point; an exact tie averages the two neighbours.
            const auto hi = std::lower_bound(s.t.begin(), s.t.end(), u);
            const auto right = static_cast<std::size_t>(hi - s.t.begin());
            if (hi == s.t.end()) {
                v[j] = s.y.back();
            } else if (hi == s.t.begin()) {
                v[j] = s.y.front();
            } else {
                const double dl = u - s.t[right - 1];
                const double dr = s.t[right] - u;
                v[j] = dl < dr ? s.y[right - 1] : dr < dl ? s.y[right] : 0.5 * (s.y[right - 1] + s.y[right]);
            }
        }
    }
    return GridFunction(target, std::move(v));
}

GridFunction nw_smooth(const RawSpectrum& s, std::size_t target_grid_size, double bandwidth) {
    if (s.t.empty())
        throw DataError(with_id(s.id, "cannot smooth an empty spectrum"));
    if (target_grid_size == 0)
        throw std::invalid_argument("target grid size must be positive");
    return nw_smooth(s, make_uniform_grid(s.t.front(), s.t.back(), target_grid_size), bandwidth);
}

GridFunction max_normalize(const GridFunction& f) {
    const double m = max_value(f);
    if (!(m > 0.0))
        throw DataError("cannot normalize zero spectrum");
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v)
        x /= m;
    return GridFunction(f.grid_ptr(), std::move(v));
}

GridFunction rescale_unit_square(const RawSpectrum& s) {
    if (s.size() < 2)
        throw DataError(with_id(s.id, "unit-square rescaling needs at least 2 points"));
    const double t0 = s.t.front();
    const double width = s.t.back() - t0;
    std::vector<double> t(s.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = (s.t[i] - t0) / width;
    t.front() = 0.0;
    t.back() = 1.0;

    const auto [ymin_it, ymax_it] = std::minmax_element(s.y.begin(), s.y.end());
    const double shift = *ymin_it < 0.0 ? -*ymin_it : 0.0;
    const double top = *ymax_it + shift;
    if (!(top > 0.0))
        throw DataError(with_id(s.id, "cannot rescale a constant-zero spectrum"));
    std::vector<double> y(s.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = (s.y[i] + shift) / top;
    return GridFunction(std::move(t), std::move(y));
}

GridFunction rescale_unit_square(const GridFunction& f) {
    RawSpectrum s;
    s.t.assign(f.grid().values().begin(), f.grid().values().end());
    s.y.assign(f.values().begin(), f.values().end());
    return rescale_unit_square(s);
}

LabeledSample PipelineResult::to_labeled_sample() const {
    std::vector<int> l;
    l.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i])
            throw DataError(with_id(ids[i], "no label"));
        l.push_back(*labels[i]);
    }
    return LabeledSample(functions, std::move(l), ids);
}

PipelineResult run_pipeline(const std::vector<RawSpectrum>& spectra, const PipelineConfig& config,
                            Parallelism par) {
    config.validate();
    if (spectra.empty())
        throw DataError("no spectra to process");
    for (const auto& s : spectra)
        s.validate();

    GridPtr target;
    if (config.bandwidth) {
        double lo = 0.0;
        double hi = 0.0;
        if (config.lo) {
            lo = *config.lo;
            hi = *config.hi;
        } else {
            lo = spectra.front().t.front();
            hi = spectra.front().t.back();
            for (const auto& s : spectra) {
                lo = std::max(lo, s.t.front());
                hi = std::min(hi, s.t.back());
            }
            if (!(lo < hi))
                throw DataError("spectra abscissa ranges do not overlap");
        }
        target = make_uniform_grid(lo, hi, config.target_grid_size);
    }

    const std::size_t n = spectra.size();
    std::vector<std::optional<GridFunction>> outputs(n);
    std::vector<std::vector<std::string>> logs(n);

    parallel_for(n, par, [&](std::size_t i) {
        const RawSpectrum& raw = spectra[i];
        auto& log = logs[i];
        auto note = [&](std::string_view stage, const std::string& detail) {
            log.push_back(raw.id + "\t" + std::string(stage) + "\t" + detail);
        };
        try {
            RawSpectrum s = raw;
            if (config.lo) {
                const std::size_t before = s.size();
                s = restrict_domain(s, *config.lo, *config.hi);
                note("restrict", bounds_text(*config.lo, *config.hi) + " kept " + std::to_string(s.size()) + " of " +
                                     std::to_string(before) + " points");
            }
            if (config.threshold > 0.0) {
                const auto zeroed = static_cast<std::size_t>(
                    std::count_if(s.y.begin(), s.y.end(), [&](double y) { return y > 0.0 && y < config.threshold; }));
                s = threshold_denoise(s, config.threshold);
                note("denoise", "tau=" + format_double(config.threshold) + " zeroed " + std::to_string(zeroed) +
                                    " points");
            }
            std::optional<GridFunction> f;
            if (config.bandwidth) {
                f = nw_smooth(s, target, *config.bandwidth);
                note("smooth", "gaussian h=" + format_double(*config.bandwidth) + " onto " +
                                   std::to_string(target->size()) + " points over " +
                                   bounds_text(target->front(), target->back()));
            } else {
                if (s.size() != config.target_grid_size)
                    throw DataError("has " + std::to_string(s.size()) + " points but the target grid size is " +
                                    std::to_string(config.target_grid_size) + " and smoothing is off");
                f = GridFunction(s.t, s.y);
            }
            switch (config.normalization) {
            case Normalization::Max:
                f = max_normalize(*f);
                note("normalize", "max");
                break;
            case Normalization::UnitSquare:
                f = rescale_unit_square(*f);
                note("normalize", "unit-square");
                break;
            case Normalization::None:
                break;
            }
            outputs[i] = std::move(f);
        } catch (const std::exception& e) {
            const std::string msg = e.what();
            if (msg.starts_with("spectrum '"))
                throw DataError(msg);
            throw DataError(with_id(raw.id, msg));
        }
    });

    PipelineResult result;
    result.functions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.functions.push_back(std::move(*outputs[i]));
        result.ids.push_back(spectra[i].id);
        result.labels.push_back(spectra[i].label);
        for (auto& line : logs[i])
            result.provenance.push_back(std::move(line));
    }
    // Unsmoothed outputs each carry their own grid object; share the first one
    // so downstream distance matrices hit the pointer fast path.
    for (std::size_t i = 1; i < n; ++i) {
        if (!result.functions[i].shares_grid_with(result.functions[0]))
            throw DataError(with_id(result.ids[i], "grid differs from '" + result.ids[0] + "' after preprocessing"));
        std::vector<double> v(result.functions[i].values().begin(), result.functions[i].values().end());
        result.functions[i] = GridFunction(result.functions[0].grid_ptr(), std::move(v));
    }
    return result;
}

} // namespace hypodist
