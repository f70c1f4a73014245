"""Least-squares fitting of the weekly component model by gradient descent.

The objective is the plain sum of squared residuals between modeled and
measured hourly traffic.  Descent runs on a transformed parameter vector:
amplitudes are scaled by the data maximum and projected onto [0, inf),
variances are optimized as log-variance, and peak times move unconstrained
and are wrapped into [0, 24) only on output.  A backtracking line search
keeps the objective non-increasing at every accepted step.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SeriesTooShortError
from .model import (
    _SLOT_BASE,
    _TERM_COMPONENT,
    _TERM_SEGMENTS,
    _gaussian_terms,
    _model_arrays,
    ComponentId,
    ComponentParams,
    DayCategory,
    DayPeriod,
    HOURS_PER_DAY,
    HOURS_PER_WEEK,
    TrafficSeries,
    WeeklyModel,
    predict_series,
    week_clock_at,
)

N_PARAMETERS = 3 * len(ComponentId)

# Armijo sufficient-decrease slope and the floor used in the relative
# objective-change stop test (normalized units).
_ARMIJO_SLOPE = 1e-4
_STOP_FLOOR = 1e-12
_MIN_STEP = 1e-20
_MAX_STEP = 1e10
# Log-variance is clamped to keep 1/variance**2 finite in the gradient.
_LOG_VARIANCE_BOUND = 20.0

# Hour windows searched for each period's initial peak; the evening window
# runs past midnight into the next day.
_PERIOD_WINDOWS = {
    DayPeriod.MORNING: (6, 14),
    DayPeriod.AFTERNOON: (14, 19),
    DayPeriod.EVENING: (19, 30),
}


@dataclass(frozen=True)
class FitConfig:
    """Optimizer settings.

    ``relative_tolerance`` applies to the per-iteration objective drop
    |dJ| / max(J, 1e-12); ``initial_step`` is the first trial step in
    normalized units.  With ``normalize`` on, data and amplitudes are
    divided by the data maximum before fitting so one step size serves
    traffic rates of any magnitude.
    """

    max_iterations: int = 5000
    relative_tolerance: float = 1e-8
    initial_step: float = 1.0
    backtracking_factor: float = 0.5
    normalize: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.relative_tolerance > 0.0:
            raise ValueError(f"relative_tolerance must be > 0, got {self.relative_tolerance}")
        if not self.initial_step > 0.0:
            raise ValueError(f"initial_step must be > 0, got {self.initial_step}")
        if not 0.0 < self.backtracking_factor < 1.0:
            raise ValueError(
                f"backtracking_factor must lie in (0, 1), got {self.backtracking_factor}"
            )


@dataclass(frozen=True)
class FitReport:
    """Outcome of one fit: the model plus the convergence record."""

    model: WeeklyModel
    objective_trace: np.ndarray
    iterations: int
    elapsed_seconds: float
    converged: bool

    def __post_init__(self):
        trace = np.array(self.objective_trace, dtype=float)
        if trace.ndim != 1 or trace.size == 0:
            raise ValueError("objective_trace must be a non-empty 1-D sequence")
        if np.any(np.diff(trace) > 0.0):
            raise ValueError("objective_trace must be non-increasing")
        trace.setflags(write=False)
        object.__setattr__(self, "objective_trace", trace)


# A series samples at most the 168 distinct week positions, so the model
# is evaluated once per slot and gathered per sample; residuals are folded
# back per slot (bincount) before the gradient contractions.
def _series_slots(data: TrafficSeries) -> np.ndarray:
    return data.hour_counters() % HOURS_PER_WEEK


def _residual(
    amplitudes: np.ndarray,
    times: np.ndarray,
    variances: np.ndarray,
    slots: np.ndarray,
    targets: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    offsets, factors = _gaussian_terms(times, variances, _SLOT_BASE)
    per_slot = factors @ amplitudes[_TERM_COMPONENT]
    resid = per_slot[slots] - targets
    return offsets, factors, resid


def _gradient_pieces(offsets, factors, resid, slots, amplitudes, variances):
    """Partials of the summed squared residual w.r.t. amplitude, peak time, variance.

    Residual r_i and Gaussian factors E_ij give, per component c,
        dJ/dA_c   = 2 sum_i r_i sum_{j in c} E_ij
        dJ/dt_c   = 2 A_c / var_c * sum_i r_i sum_{j in c} E_ij u_ij
        dJ/dvar_c = A_c / var_c^2 * sum_i r_i sum_{j in c} E_ij u_ij^2
    with u_ij the signed offset of term j at sample i.
    """
    folded = np.bincount(slots, weights=resid, minlength=HOURS_PER_WEEK)
    weighted = factors * offsets
    per_term = factors.T @ folded
    per_term_u = weighted.T @ folded
    per_term_uu = (weighted * offsets).T @ folded
    sum_e = np.add.reduceat(per_term, _TERM_SEGMENTS)
    sum_eu = np.add.reduceat(per_term_u, _TERM_SEGMENTS)
    sum_euu = np.add.reduceat(per_term_uu, _TERM_SEGMENTS)
    grad_rate = 2.0 * sum_e
    grad_time = 2.0 * amplitudes * sum_eu / variances
    grad_var = amplitudes * sum_euu / np.square(variances)
    return grad_rate, grad_time, grad_var


def objective(model: WeeklyModel, data: TrafficSeries) -> float:
    """Sum of squared residuals between the model and the measurements."""
    rates, times, variances = _model_arrays(model)
    _, _, resid = _residual(rates, times, variances, _series_slots(data), data.values)
    return float(resid @ resid)


def gradient(model: WeeklyModel, data: TrafficSeries) -> np.ndarray:
    """Analytic gradient of ``objective`` w.r.t. the 27 parameters.

    Order: canonical component order, (peak_rate, peak_time, variance)
    within each component.
    """
    rates, times, variances = _model_arrays(model)
    slots = _series_slots(data)
    offsets, factors, resid = _residual(rates, times, variances, slots, data.values)
    grad_rate, grad_time, grad_var = _gradient_pieces(
        offsets, factors, resid, slots, rates, variances
    )
    out = np.empty(N_PARAMETERS)
    out[0::3] = grad_rate
    out[1::3] = grad_time
    out[2::3] = grad_var
    return out


def init_heuristic(data: TrafficSeries) -> WeeklyModel:
    """Starting point from per-category day profiles.

    Each category's 24-hour mean profile is scanned over the period's hour
    window; the argmax hour (earliest on ties) seeds peak_time and
    peak_rate, and every variance starts at 4 h^2.
    """
    if len(data) < HOURS_PER_WEEK:
        raise SeriesTooShortError(
            f"need at least one full week (168 samples), got {len(data)}"
        )
    days = data.day_indices()
    hours = data.hour_indices()
    profiles = {}
    for category in DayCategory:
        in_category = np.isin(days, category.day_numbers)
        profiles[category] = np.array(
            [data.values[in_category & (hours == h)].mean() for h in range(HOURS_PER_DAY)]
        )
    components = {}
    for comp in ComponentId:
        lo, hi = _PERIOD_WINDOWS[comp.period]
        window = np.arange(lo, hi)
        levels = profiles[comp.category][window % HOURS_PER_DAY]
        best = int(window[np.argmax(levels)])
        components[comp] = ComponentParams(
            peak_rate=float(levels[best - lo]),
            peak_time=float(best % HOURS_PER_DAY),
            variance=4.0,
        )
    return WeeklyModel(components)


def _wrap_hours(values: np.ndarray) -> np.ndarray:
    wrapped = np.mod(values, HOURS_PER_DAY)
    wrapped[wrapped >= HOURS_PER_DAY] = 0.0  # mod can round up to exactly 24
    return wrapped


def _project(x: np.ndarray) -> np.ndarray:
    projected = x.copy()
    projected[0::3] = np.maximum(projected[0::3], 0.0)
    projected[2::3] = np.clip(projected[2::3], -_LOG_VARIANCE_BOUND, _LOG_VARIANCE_BOUND)
    return projected


def fit(
    data: TrafficSeries,
    config: FitConfig | None = None,
    init: WeeklyModel | None = None,
) -> FitReport:
    """Fit all 27 parameters to hourly measurements.

    Requires at least one full week of data.  The objective trace is
    reported in measurement units and is non-increasing; non-convergence
    within ``max_iterations`` is reported via ``converged=False`` rather
    than raised.
    """
    if config is None:
        config = FitConfig()
    if len(data) < HOURS_PER_WEEK:
        raise SeriesTooShortError(
            f"need at least one full week (168 samples), got {len(data)}"
        )
    started = time.perf_counter()
    start_model = init if init is not None else init_heuristic(data)

    scale = float(np.max(data.values)) if config.normalize else 1.0
    if scale <= 0.0:
        scale = 1.0
    targets = data.values / scale
    slots = _series_slots(data)

    rates, times, variances = _model_arrays(start_model)
    x = np.empty(N_PARAMETERS)
    x[0::3] = rates / scale
    x[1::3] = times
    x[2::3] = np.log(variances)
    x = _project(x)

    def split(vec):
        return vec[0::3], vec[1::3], np.exp(vec[2::3])

    def evaluate(vec):
        amp, tp, var = split(vec)
        offsets, factors, resid = _residual(amp, tp, var, slots, targets)
        return float(resid @ resid), (offsets, factors, resid, amp, var)

    def gradient_from(cache):
        offsets, factors, resid, amp, var = cache
        grad_rate, grad_time, grad_var = _gradient_pieces(
            offsets, factors, resid, slots, amp, var
        )
        grad = np.empty(N_PARAMETERS)
        grad[0::3] = grad_rate
        grad[1::3] = grad_time
        grad[2::3] = grad_var * var  # chain rule for log-variance
        return grad

    current, cache = evaluate(x)
    trace = [current]
    iterations = 0
    converged = False
    step = config.initial_step
    previous: tuple[np.ndarray, np.ndarray] | None = None
    for _ in range(config.max_iterations):
        grad = gradient_from(cache)
        if previous is not None:
            # Barzilai-Borwein trial step; the Armijo backtracking below
            # still guarantees a monotone objective trace.
            dx = x - previous[0]
            dg = grad - previous[1]
            curvature = float(dx @ dg)
            if curvature > 0.0:
                step = min(max(float(dx @ dx) / curvature, _MIN_STEP * 1e2), _MAX_STEP)
            else:
                step *= 2.0
        accepted = False
        while step >= _MIN_STEP:
            trial = _project(x - step * grad)
            trial_value, trial_cache = evaluate(trial)
            decrease = _ARMIJO_SLOPE * float(grad @ (trial - x))
            if trial_value <= current + decrease:  # NaN trial values fail here
                accepted = True
                break
            step *= config.backtracking_factor
        if not accepted:
            break
        previous = (x, grad)
        drop = (current - trial_value) / max(current, _STOP_FLOOR)
        x = trial
        current = trial_value
        cache = trial_cache
        trace.append(current)
        iterations += 1
        if drop < config.relative_tolerance:
            converged = True
            break

    amp, tp, var = split(x)
    wrapped = _wrap_hours(tp)
    fitted = WeeklyModel(
        {
            comp: ComponentParams(
                peak_rate=float(amp[i] * scale),
                peak_time=float(wrapped[i]),
                variance=float(var[i]),
            )
            for i, comp in enumerate(ComponentId)
        }
    )
    return FitReport(
        model=fitted,
        objective_trace=np.asarray(trace) * scale * scale,
        iterations=iterations,
        elapsed_seconds=time.perf_counter() - started,
        converged=converged,
    )


def write_trace_csv(trace: Sequence[float], path) -> None:
    """Write the objective trajectory as a two-column CSV (iteration, J)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "J"])
        for i, value in enumerate(trace):
            writer.writerow([i, repr(float(value))])


class ModelPredictor:
    """Fit-then-extrapolate adapter around :func:`fit` and :func:`predict_series`."""

    def __init__(self, config: FitConfig | None = None, init: WeeklyModel | None = None):
        self.config = config
        self.init = init
        self.report: FitReport | None = None
        self._origin: int | None = None

    def fit(self, train: TrafficSeries) -> None:
        self.report = fit(train, self.config, self.init)
        self._origin = train.end

    def predict(self, n_hours: int) -> TrafficSeries:
        if self.report is None or self._origin is None:
            raise RuntimeError("predict() called before fit()")
        week, clock = week_clock_at(self._origin)
        return predict_series(self.report.model, n_hours, week, clock)
