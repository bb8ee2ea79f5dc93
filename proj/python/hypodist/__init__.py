"""Hypograph-based distances and k-NN classification for functional data."""

from ._hypodist import (
    DataError,
    ErrorTable,
    GridFunction,
    GridMismatch,
    LabeledSample,
    Metric,
    PipelineConfig,
    PipelineResult,
    RawSpectrum,
    SimModel,
    __version__,
    brownian_bridge_abs,
    distance,
    hypo_hausdorff,
    knn_classify,
    l2_distance,
    load_spectra,
    loocv_error,
    max_value,
    oracle_hausdorff,
    parse_metric,
    run_experiment,
    run_pipeline,
    sup_distance,
    test_error,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
