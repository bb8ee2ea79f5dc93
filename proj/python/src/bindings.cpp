#include "hypodist/classifier.hpp"
#include "hypodist/error.hpp"
#include "hypodist/metric.hpp"
#include "hypodist/preprocess.hpp"
#include "hypodist/simulate.hpp"
#include "hypodist/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace hypodist;

namespace {

RngSeed seed_of(std::uint64_t s) { return RngSeed{s}; }
Parallelism threads_of(unsigned t) { return Parallelism{t}; }

} // namespace

PYBIND11_MODULE(_hypodist, m) {
    m.attr("__version__") = std::string(kVersion);

    auto data_error = py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<GridMismatch>(m, "GridMismatch", data_error);

    py::enum_<MetricKind>(m, "Metric")
        .value("HYPO_HAUSDORFF", MetricKind::HypoHausdorff)
        .value("L2", MetricKind::L2)
        .value("SUP", MetricKind::Sup);
    m.def("parse_metric", [](const std::string& s) { return parse_metric(s); });

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init([](std::vector<double> t, std::vector<double> v) {
                 return GridFunction(std::move(t), std::move(v));
             }),
             py::arg("t"), py::arg("values"))
        .def_property_readonly("t", [](const GridFunction& f) { auto t = f.grid().values();
                                                          return std::vector<double>(t.begin(), t.end()); })
        .def_property_readonly("values", [](const GridFunction& f) {
            return std::vector<double>(f.values().begin(), f.values().end());
        })
        .def("__len__", &GridFunction::size)
        .def("shares_grid_with", &GridFunction::shares_grid_with);

    m.def("hypo_hausdorff",
          [](const GridFunction& f, const GridFunction& g, bool pruned) {
              return pruned ? hypo_hausdorff_pruned(f, g) : hypo_hausdorff(f, g);
          },
          py::arg("f"), py::arg("g"), py::arg("pruned") = true);
    m.def("oracle_hausdorff", &oracle_hausdorff, py::arg("f"), py::arg("g"), py::arg("resolution"));
    m.def("l2_distance", &l2_distance);
    m.def("sup_distance", &sup_distance);
    m.def("max_value", &max_value);
    m.def("distance", &distance, py::arg("metric"), py::arg("f"), py::arg("g"), py::arg("pruned") = true);

    py::class_<LabeledSample>(m, "LabeledSample")
        .def(py::init<std::vector<GridFunction>, std::vector<int>, std::vector<std::string>>(), py::arg("functions"),
             py::arg("labels"), py::arg("ids") = std::vector<std::string>{})
        .def("__len__", &LabeledSample::size)
        .def_property_readonly("functions", &LabeledSample::functions)
        .def_property_readonly("labels", &LabeledSample::labels)
        .def_property_readonly("ids", &LabeledSample::ids);

    m.def("knn_classify",
          [](const LabeledSample& train, const GridFunction& q, std::size_t k, MetricKind metric, std::uint64_t seed) {
              return knn_classify(train, q, k, metric, seed_of(seed));
          },
          py::arg("train"), py::arg("query"), py::arg("k"), py::arg("metric"), py::arg("seed") = 0);
    m.def("loocv_error",
          [](const LabeledSample& s, std::size_t k, MetricKind metric, std::uint64_t seed, unsigned threads) {
              py::gil_scoped_release release;
              return loocv_error(s, k, metric, seed_of(seed), threads_of(threads));
          },
          py::arg("sample"), py::arg("k"), py::arg("metric"), py::arg("seed") = 0, py::arg("threads") = 0);
    m.def("test_error",
          [](const LabeledSample& train, const LabeledSample& test, std::size_t k, MetricKind metric,
             std::uint64_t seed, unsigned threads) {
              py::gil_scoped_release release;
              return test_error(train, test, k, metric, seed_of(seed), threads_of(threads));
          },
          py::arg("train"), py::arg("test"), py::arg("k"), py::arg("metric"), py::arg("seed") = 0,
          py::arg("threads") = 0);

    py::class_<SimModel>(m, "SimModel")
        .def(py::init<>())
        .def_static("model1", &SimModel::model1)
        .def_static("model2", &SimModel::model2)
        .def_readwrite("a1", &SimModel::a1)
        .def_readwrite("a2", &SimModel::a2)
        .def_readwrite("peak_base", &SimModel::peak_base)
        .def_readwrite("peak_height", &SimModel::peak_height)
        .def_readwrite("grid_size", &SimModel::grid_size);

    py::class_<ErrorTable>(m, "ErrorTable")
        .def("mean_for", &ErrorTable::mean_for, py::arg("k"), py::arg("metric"))
        .def("csv", &ErrorTable::csv);

    m.def("run_experiment",
          [](const SimModel& model, std::uint64_t seed, std::size_t replications, std::size_t train_per_class,
             std::size_t test_per_class, std::vector<std::size_t> ks, std::vector<MetricKind> metrics,
             bool redraw_train, unsigned threads) {
              ExperimentConfig c;
              c.model = model;
              c.seed = seed_of(seed);
              c.replications = replications;
              c.train_per_class = train_per_class;
              c.test_per_class = test_per_class;
              c.ks = std::move(ks);
              c.metrics = std::move(metrics);
              c.redraw_train = redraw_train;
              py::gil_scoped_release release;
              return run_experiment(c, threads_of(threads));
          },
          py::arg("model"), py::arg("seed"), py::arg("replications") = 5, py::arg("train_per_class") = 50,
          py::arg("test_per_class") = 50, py::arg("ks") = std::vector<std::size_t>{3, 5, 7, 9},
          py::arg("metrics") = std::vector<MetricKind>{MetricKind::HypoHausdorff, MetricKind::L2, MetricKind::Sup},
          py::arg("redraw_train") = true, py::arg("threads") = 0);
    m.def("brownian_bridge_abs",
          [](std::size_t n, std::uint64_t stream) { return brownian_bridge_abs(n, seed_of(stream)); },
          py::arg("grid_size"), py::arg("stream"));

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_static("load", &load_pipeline_config)
        .def_readwrite("lo", &PipelineConfig::lo)
        .def_readwrite("hi", &PipelineConfig::hi)
        .def_readwrite("threshold", &PipelineConfig::threshold)
        .def_readwrite("target_grid_size", &PipelineConfig::target_grid_size)
        .def_readwrite("bandwidth", &PipelineConfig::bandwidth);

    py::class_<RawSpectrum>(m, "RawSpectrum")
        .def_readonly("t", &RawSpectrum::t)
        .def_readonly("y", &RawSpectrum::y)
        .def_readonly("id", &RawSpectrum::id)
        .def_readonly("label", &RawSpectrum::label);
    m.def("load_spectra", &load_spectra, py::arg("path"), py::arg("labels") = std::nullopt);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("functions", &PipelineResult::functions)
        .def_readonly("ids", &PipelineResult::ids)
        .def_readonly("labels", &PipelineResult::labels)
        .def_readonly("provenance", &PipelineResult::provenance)
        .def("to_labeled_sample", &PipelineResult::to_labeled_sample);
    m.def("run_pipeline",
          [](const std::vector<RawSpectrum>& spectra, const PipelineConfig& cfg, unsigned threads) {
              py::gil_scoped_release release;
              return run_pipeline(spectra, cfg, threads_of(threads));
          },
          py::arg("spectra"), py::arg("config"), py::arg("threads") = 0);
}
