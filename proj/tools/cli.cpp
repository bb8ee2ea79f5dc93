#include "cli.hpp"

#include "manifest.hpp"

#include "hypodist/classifier.hpp"
#include "hypodist/error.hpp"
#include "hypodist/error_table.hpp"
#include "hypodist/metric.hpp"
#include "hypodist/preprocess.hpp"
#include "hypodist/simulate.hpp"
#include "hypodist/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace hypodist::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kMetricNames{"hausdorff", "l2", "sup"};

struct Common {
    unsigned threads = 0;
    std::string manifest;
    bool no_manifest = false;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_manifest) {
    cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
    c.manifest = default_manifest;
    cmd->add_option("--manifest", c.manifest, "Where to write the run manifest")->capture_default_str();
    cmd->add_flag("--no-manifest", c.no_manifest, "Skip writing the run manifest");
}

std::vector<MetricKind> to_metrics(const std::vector<std::string>& names) {
    std::vector<MetricKind> out;
    for (const auto& n : names)
        out.push_back(parse_metric(n));
    return out;
}

nlohmann::ordered_json metric_names(const std::vector<MetricKind>& ms) {
    auto j = nlohmann::ordered_json::array();
    for (MetricKind m : ms)
        j.push_back(std::string(to_string(m)));
    return j;
}

void warn_even_ks(const std::vector<std::size_t>& ks, std::ostream& err) {
    for (std::size_t k : ks)
        if (k % 2 == 0)
            err << "warning: even k = " << k << " can split the vote; ties are broken by the seeded coin\n";
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw DataError("failed writing '" + path.string() + "'");
}

void finish_manifest(RunManifest& m, const Common& c) {
    if (c.no_manifest)
        return;
    m.finish();
    m.write(c.manifest);
}

std::uint64_t checksum(const std::vector<double>& values) {
    std::uint64_t h = mix64(values.size());
    for (double v : values)
        h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
    return h;
}

std::string hex64(std::uint64_t x) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << x;
    return os.str();
}

// ---- dist ------------------------------------------------------------------

struct DistArgs {
    std::string a, b;
    std::string metric = "hausdorff";
    bool pruned = false;
    std::optional<double> oracle;
    Common common;
};

int cmd_dist(const DistArgs& args, const std::vector<std::string>& argv, std::ostream& out) {
    RunManifest manifest("dist", argv);
    const GridFunction f = load_function_csv(args.a);
    const GridFunction g = load_function_csv(args.b);
    manifest.add_input(args.a);
    manifest.add_input(args.b);
    const MetricKind kind = parse_metric(args.metric);
    require_shared_grid(f, g);
    const double value = distance(kind, f, g, args.pruned);
    out << "metric,value\n" << to_string(kind) << ',' << format_double(value) << '\n';
    nlohmann::ordered_json cfg{{"a", args.a}, {"b", args.b}, {"metric", std::string(to_string(kind))},
                               {"pruned", args.pruned}};
    if (args.oracle) {
        const double o = oracle_hausdorff(f, g, *args.oracle);
        const double h = kind == MetricKind::HypoHausdorff ? value : hypo_hausdorff(f, g);
        out << "oracle," << format_double(o) << '\n' << "gap," << format_double(std::abs(o - h)) << '\n';
        cfg["oracle_resolution"] = *args.oracle;
    }
    manifest.set_config(cfg);
    finish_manifest(manifest, args.common);
    return kExitOk;
}

// ---- knn-cv ----------------------------------------------------------------

struct KnnCvArgs {
    std::string data, labels;
    std::vector<std::size_t> ks;
    std::vector<std::string> metrics;
    std::uint64_t seed = 0;
    std::string pipeline;
    std::string out;
    std::string export_dir;
    Common common;
};

LabeledSample sample_from_raw(const std::vector<RawSpectrum>& spectra) {
    std::vector<GridFunction> fs;
    std::vector<int> labels;
    std::vector<std::string> ids;
    for (const auto& s : spectra) {
        if (!s.label)
            throw DataError("spectrum '" + s.id + "': no label");
        if (fs.empty())
            fs.emplace_back(s.t, s.y);
        else if (std::equal(s.t.begin(), s.t.end(), fs.front().grid().values().begin(),
                            fs.front().grid().values().end()))
            fs.emplace_back(fs.front().grid_ptr(), s.y);
        else
            throw DataError("spectrum '" + s.id + "': grid mismatch (use --pipeline to resample)");
        labels.push_back(*s.label);
        ids.push_back(s.id);
    }
    return LabeledSample(std::move(fs), std::move(labels), std::move(ids));
}

int cmd_knn_cv(const KnnCvArgs& args, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    RunManifest manifest("knn-cv", argv);
    manifest.set_seed(args.seed);
    const auto metrics = to_metrics(args.metrics);
    warn_even_ks(args.ks, err);

    if (!fs::exists(args.labels))
        throw DataError("labels file '" + args.labels + "' does not exist");
    const auto spectra = load_spectra(args.data, fs::path(args.labels));
    manifest.add_input(args.data);
    manifest.add_input(args.labels);

    nlohmann::ordered_json cfg{{"data", args.data},   {"labels", args.labels}, {"k", args.ks},
                               {"metric", metric_names(metrics)}, {"seed", args.seed}};

    LabeledSample sample;
    std::vector<std::string> provenance;
    if (!args.pipeline.empty()) {
        const PipelineConfig pc = load_pipeline_config(args.pipeline);
        manifest.add_input(args.pipeline);
        std::ostringstream pc_text;
        write_pipeline_config(pc_text, pc);
        cfg["pipeline"] = pc_text.str();
        PipelineResult result = run_pipeline(spectra, pc, Parallelism{args.common.threads});
        sample = result.to_labeled_sample();
        provenance = std::move(result.provenance);
    } else {
        sample = sample_from_raw(spectra);
    }

    if (!args.export_dir.empty()) {
        fs::create_directories(args.export_dir);
        for (std::size_t i = 0; i < sample.size(); ++i) {
            std::ostringstream os;
            write_function_csv(os, sample[i]);
            write_text_file(fs::path(args.export_dir) / (sample.ids()[i] + ".csv"), os.str());
        }
        std::string log;
        for (const auto& line : provenance)
            log += line + '\n';
        write_text_file(fs::path(args.export_dir) / "provenance.log", log);
    }

    ErrorTable table(args.ks, metrics, 1);
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
        const auto m = distance_matrix(sample.functions(), sample.functions(), metrics[mi],
                                       Parallelism{args.common.threads});
        for (std::size_t ki = 0; ki < args.ks.size(); ++ki) {
            const RngSeed vote{derive_stream(RngSeed{args.seed},
                                             {args.ks[ki], static_cast<std::uint64_t>(metrics[mi])})};
            table.set(ki, mi, 0, loocv_error(m, sample.labels(), args.ks[ki], vote));
        }
    }

    manifest.set_config(cfg);
    if (args.out.empty()) {
        table.write_csv(out);
    } else {
        write_text_file(args.out, table.csv());
        manifest.add_output(args.out);
        table.write_aligned(out);
    }
    finish_manifest(manifest, args.common);
    return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
    int model = 1;
    std::size_t reps = 5;
    std::uint64_t seed = 0;
    std::size_t grid = 100;
    std::size_t train = 50;
    std::size_t test = 50;
    std::vector<std::size_t> ks{3, 5, 7, 9};
    std::vector<std::string> metrics{"hausdorff", "l2", "sup"};
    std::optional<double> a1, a2;
    double peak_base = 0.04;
    double peak_height = 1.0;
    bool fixed_train = false;
    std::string out = "simulation.csv";
    Common common;
};

int cmd_simulate(const SimulateArgs& args, const std::vector<std::string>& argv, std::ostream& out,
                 std::ostream& err) {
    RunManifest manifest("simulate", argv);
    manifest.set_seed(args.seed);
    warn_even_ks(args.ks, err);

    ExperimentConfig cfg;
    cfg.model = args.model == 1 ? SimModel::model1() : SimModel::model2();
    if (args.a1)
        cfg.model.a1 = *args.a1;
    if (args.a2)
        cfg.model.a2 = *args.a2;
    cfg.model.peak_base = args.peak_base;
    cfg.model.peak_height = args.peak_height;
    cfg.model.grid_size = args.grid;
    cfg.train_per_class = args.train;
    cfg.test_per_class = args.test;
    cfg.ks = args.ks;
    cfg.metrics = to_metrics(args.metrics);
    cfg.replications = args.reps;
    cfg.seed = RngSeed{args.seed};
    cfg.redraw_train = !args.fixed_train;
    cfg.validate();

    const ErrorTable table = run_experiment(cfg, Parallelism{args.common.threads});
    write_text_file(args.out, table.csv());

    manifest.set_config({{"model", args.model},
                         {"a1", cfg.model.a1},
                         {"a2", cfg.model.a2},
                         {"peak_base", cfg.model.peak_base},
                         {"peak_height", cfg.model.peak_height},
                         {"grid", cfg.model.grid_size},
                         {"train_per_class", cfg.train_per_class},
                         {"test_per_class", cfg.test_per_class},
                         {"k", cfg.ks},
                         {"metric", metric_names(cfg.metrics)},
                         {"replications", cfg.replications},
                         {"redraw_train", cfg.redraw_train},
                         {"out", args.out}});
    manifest.add_output(args.out);
    out << "Model " << args.model << " (a1=" << format_double(cfg.model.a1) << ", a2=" << format_double(cfg.model.a2)
        << "), " << cfg.replications << " replications, " << cfg.replications * 2 * cfg.test_per_class
        << " test trajectories\n";
    table.write_aligned(out);
    finish_manifest(manifest, args.common);
    return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
    std::vector<std::size_t> sizes;
    std::uint64_t seed = 0;
    std::size_t pairs = 3;
    std::string out;
    Common common;
};

int cmd_bench(const BenchArgs& args, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    RunManifest manifest("bench", argv);
    manifest.set_seed(args.seed);
    std::ostringstream csv;
    csv << "size,kernel,seconds,checksum\n";
    bool diverged = false;
    const SimModel model = SimModel::model1();
    for (std::size_t n : args.sizes) {
        if (n < 2)
            throw std::invalid_argument("bench sizes must be at least 2");
        const GridPtr grid = make_uniform_grid(0.0, 1.0, n);
        std::vector<GridFunction> fs, gs;
        for (std::size_t p = 0; p < args.pairs; ++p) {
            Rng rf(derive_stream(RngSeed{args.seed}, {n, p, 0}));
            Rng rg(derive_stream(RngSeed{args.seed}, {n, p, 1}));
            fs.push_back(draw_trajectory(0, model, grid, rf).function);
            gs.push_back(draw_trajectory(1, model, grid, rg).function);
        }
        std::uint64_t sums[2] = {0, 0};
        const char* names[2] = {"naive", "pruned"};
        for (int kernel = 0; kernel < 2; ++kernel) {
            std::vector<double> values(args.pairs);
            const auto start = std::chrono::steady_clock::now();
            for (std::size_t p = 0; p < args.pairs; ++p)
                values[p] = kernel == 0 ? hypo_hausdorff(fs[p], gs[p]) : hypo_hausdorff_pruned(fs[p], gs[p]);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            sums[kernel] = checksum(values);
            csv << n << ',' << names[kernel] << ',' << format_double(secs) << ',' << hex64(sums[kernel]) << '\n';
        }
        if (sums[0] != sums[1]) {
            err << "error: naive and pruned kernels disagree at size " << n << '\n';
            diverged = true;
        }
    }
    if (args.out.empty()) {
        out << csv.str();
    } else {
        write_text_file(args.out, csv.str());
        manifest.add_output(args.out);
        out << csv.str();
    }
    manifest.set_config({{"sizes", args.sizes}, {"pairs", args.pairs}, {"generator", "model1 class0 vs class1"}});
    finish_manifest(manifest, args.common);
    return diverged ? kExitDataError : kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hypograph-Hausdorff distances, k-NN classification and simulations", "hypodist"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersionString()));

    std::vector<std::string> argv{"hypodist"};
    argv.insert(argv.end(), args.begin(), args.end());

    DistArgs dist;
    auto* c_dist = app.add_subcommand("dist", "Distance between two functions on one grid");
    c_dist->add_option("--a", dist.a, "First function (t,value CSV)")->required();
    c_dist->add_option("--b", dist.b, "Second function (t,value CSV)")->required();
    c_dist->add_option("--metric", dist.metric)->check(CLI::IsMember(kMetricNames))->capture_default_str();
    c_dist->add_flag("--pruned", dist.pruned, "Use the pruned Hausdorff kernel");
    c_dist->add_option("--oracle", dist.oracle, "Also report the raster oracle at this resolution")
        ->check(CLI::PositiveNumber);
    add_common(c_dist, dist.common, "dist.manifest.json");

    KnnCvArgs knn;
    auto* c_knn = app.add_subcommand("knn-cv", "Leave-one-out k-NN error on a spectrum collection");
    c_knn->add_option("--data", knn.data, "Directory of t,value CSV spectra")->required();
    c_knn->add_option("--labels", knn.labels, "id,label CSV")->required();
    c_knn->add_option("--k", knn.ks, "Comma-separated k values")->delimiter(',')->required()->check(
        CLI::PositiveNumber);
    c_knn->add_option("--metric", knn.metrics, "Comma-separated metrics")
        ->delimiter(',')
        ->required()
        ->check(CLI::IsMember(kMetricNames));
    c_knn->add_option("--seed", knn.seed)->required();
    c_knn->add_option("--pipeline", knn.pipeline, "Preprocessing config (key=value)");
    c_knn->add_option("--out", knn.out, "Write the error table CSV here instead of standard output");
    c_knn->add_option("--export", knn.export_dir, "Write processed spectra and provenance.log here");
    add_common(c_knn, knn.common, "knn-cv.manifest.json");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Brownian-bridge-plus-peak misclassification experiment");
    c_sim->add_option("--model", sim.model)->required()->check(CLI::IsMember({1, 2}));
    c_sim->add_option("--reps", sim.reps)->required()->check(CLI::PositiveNumber);
    c_sim->add_option("--seed", sim.seed)->required();
    c_sim->add_option("--grid", sim.grid)->capture_default_str();
    c_sim->add_option("--train", sim.train, "Training trajectories per class")->capture_default_str();
    c_sim->add_option("--test", sim.test, "Test trajectories per class")->capture_default_str();
    c_sim->add_option("--k", sim.ks)->delimiter(',')->check(CLI::PositiveNumber);
    c_sim->add_option("--metric", sim.metrics)->delimiter(',')->check(CLI::IsMember(kMetricNames));
    c_sim->add_option("--a1", sim.a1, "Override the class-0 centre bound");
    c_sim->add_option("--a2", sim.a2, "Override the class-1 centre bound");
    c_sim->add_option("--peak-base", sim.peak_base)->capture_default_str();
    c_sim->add_option("--peak-height", sim.peak_height)->capture_default_str();
    c_sim->add_flag("--fixed-train", sim.fixed_train, "Reuse replication 0's training sample");
    c_sim->add_option("--out", sim.out, "Error table CSV")->capture_default_str();
    add_common(c_sim, sim.common, "");

    BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Time naive vs pruned Hausdorff kernels");
    c_bench->add_option("--sizes", bench.sizes)->delimiter(',')->required()->check(CLI::PositiveNumber);
    c_bench->add_option("--seed", bench.seed)->required();
    c_bench->add_option("--pairs", bench.pairs, "Random pairs per size")->capture_default_str()->check(
        CLI::PositiveNumber);
    c_bench->add_option("--out", bench.out, "Also write the CSV here");
    add_common(c_bench, bench.common, "bench.manifest.json");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersionString() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (c_dist->parsed())
            return cmd_dist(dist, argv, out);
        if (c_knn->parsed())
            return cmd_knn_cv(knn, argv, out, err);
        if (c_sim->parsed()) {
            if (sim.common.manifest.empty())
                sim.common.manifest = sim.out + ".manifest.json";
            return cmd_simulate(sim, argv, out, err);
        }
        if (c_bench->parsed())
            return cmd_bench(bench, argv, out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
    return kExitUsage;
}

} // namespace hypodist::cli
