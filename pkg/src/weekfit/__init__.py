"""Weekly network-traffic forecasting from Gaussian activity components."""

from .baselines import BaselineKind, BaselinePredictor, baseline_predict
from .dataio import (
    RawRecord,
    SplitSpec,
    aggregate_hourly,
    bundled_model,
    load_csv,
    load_model,
    save_model,
    split,
    write_series_csv,
    write_timestamp_csv,
)
from .errors import (
    ConstantActualError,
    CsvFormatError,
    GapError,
    ModelFormatError,
    SeriesTooShortError,
    WeekfitError,
)
from .estimator import (
    FitConfig,
    FitReport,
    ModelPredictor,
    fit,
    gradient,
    init_heuristic,
    objective,
    write_trace_csv,
)
from .metrics import EvalReport, mae, mse, r2, rmse, time_evaluation
from .model import (
    ComponentId,
    ComponentParams,
    DayCategory,
    DayPeriod,
    HOURS_PER_DAY,
    HOURS_PER_WEEK,
    TrafficSeries,
    WeekClock,
    WeeklyModel,
    component_value,
    generate_synthetic,
    predict_series,
    sigma_interval,
    week_clock_at,
    weekly_value,
)

__all__ = [
    "BaselineKind",
    "BaselinePredictor",
    "ComponentId",
    "ComponentParams",
    "ConstantActualError",
    "CsvFormatError",
    "DayCategory",
    "DayPeriod",
    "EvalReport",
    "FitConfig",
    "FitReport",
    "GapError",
    "HOURS_PER_DAY",
    "HOURS_PER_WEEK",
    "ModelFormatError",
    "ModelPredictor",
    "RawRecord",
    "SeriesTooShortError",
    "SplitSpec",
    "TrafficSeries",
    "WeekClock",
    "WeekfitError",
    "WeeklyModel",
    "aggregate_hourly",
    "baseline_predict",
    "bundled_model",
    "component_value",
    "fit",
    "generate_synthetic",
    "gradient",
    "init_heuristic",
    "load_csv",
    "load_model",
    "mae",
    "mse",
    "objective",
    "predict_series",
    "r2",
    "rmse",
    "save_model",
    "sigma_interval",
    "split",
    "time_evaluation",
    "week_clock_at",
    "weekly_value",
    "write_series_csv",
    "write_timestamp_csv",
    "write_trace_csv",
]

__version__ = "0.1.0"
