"""fairmet: gap analysis, gap filling and a FAIR metadata catalog for
micrometeorological station networks."""

from .bench import (BenchGrid, DataContext, MetricSet, ResultRow, aggregate,
                    enumerate_grid, run_benchmark, score)
from .debias import DebiasTable, debias_model, fit_debias
from .features import DesignMatrix, build_features
from .filling import FillContext, FillResult, fill_gaps
from .interp import (Knots1D, RbfKernel, ScatterND, interp1d,
                     interp_linear_2d, interp_nearest_nd, interp_rbf)
from .masking import (MaskPlan, apply_mask, make_coverage_masks,
                      plan_for_series)
from .qc import (FaultSpec, QcConfig, QcFlag, default_qc_config,
                 inject_faults, run_qc)
from .regressors import GapFillModel, fit, linear_baseline_model, predict
from .timeseries import (GapProfile, GapRecord, ObservationFormat, TimeSeries,
                         VariableKind, convert_dp_rh, detect_gaps,
                         parse_observations, profile_gaps,
                         serialize_observations)

__version__ = "0.1.0"

__all__ = [
    "BenchGrid", "DataContext", "MetricSet", "ResultRow", "aggregate",
    "enumerate_grid", "run_benchmark", "score",
    "DebiasTable", "debias_model", "fit_debias",
    "DesignMatrix", "build_features",
    "FillContext", "FillResult", "fill_gaps",
    "Knots1D", "RbfKernel", "ScatterND", "interp1d", "interp_linear_2d",
    "interp_nearest_nd", "interp_rbf",
    "MaskPlan", "apply_mask", "make_coverage_masks", "plan_for_series",
    "FaultSpec", "QcConfig", "QcFlag", "default_qc_config", "inject_faults",
    "run_qc",
    "GapFillModel", "fit", "linear_baseline_model", "predict",
    "GapProfile", "GapRecord", "ObservationFormat", "TimeSeries",
    "VariableKind", "convert_dp_rh", "detect_gaps", "parse_observations",
    "profile_gaps", "serialize_observations",
]
