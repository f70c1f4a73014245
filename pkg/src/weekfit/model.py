"""Weekly traffic as a superposition of Gaussian activity components.

Hourly demand over a week is modeled by nine bell-shaped components: three
daily periods (morning, afternoon, evening) for each of three day
categories (weekday, Saturday, Sunday).  Weekday components repeat on all
five weekdays.  Mass spilling across week boundaries is kept by evaluating
one wrapped copy of the week on either side, so the profile is exactly
168-hour periodic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

HOURS_PER_DAY = 24
DAYS_PER_WEEK = 7
HOURS_PER_WEEK = HOURS_PER_DAY * DAYS_PER_WEEK


class DayCategory(enum.Enum):
    """Day-of-week class sharing one set of component parameters."""

    WEEKDAY = "weekday"
    SATURDAY = "saturday"
    SUNDAY = "sunday"

    @property
    def day_numbers(self) -> tuple[int, ...]:
        """Day indices covered by this category (Monday = 1 .. Sunday = 7)."""
        return _CATEGORY_DAYS[self]


_CATEGORY_DAYS = {
    DayCategory.WEEKDAY: (1, 2, 3, 4, 5),
    DayCategory.SATURDAY: (6,),
    DayCategory.SUNDAY: (7,),
}


class DayPeriod(enum.Enum):
    """Daily activity period a component belongs to."""

    MORNING = "morning"
    AFTERNOON = "afternoon"
    EVENING = "evening"


class ComponentId(enum.Enum):
    """The nine traffic components, one per (day category, period) pair.

    Iteration order is the canonical parameter order used everywhere:
    weekday components first, then Saturday, then Sunday, each in
    morning/afternoon/evening order.
    """

    MW = "mw"
    AW = "aw"
    EW = "ew"
    MSA = "msa"
    ASA = "asa"
    ESA = "esa"
    MSU = "msu"
    ASU = "asu"
    ESU = "esu"

    @property
    def category(self) -> DayCategory:
        return _COMPONENT_CATEGORY[self]

    @property
    def period(self) -> DayPeriod:
        return _COMPONENT_PERIOD[self]


_COMPONENT_CATEGORY = {
    ComponentId.MW: DayCategory.WEEKDAY,
    ComponentId.AW: DayCategory.WEEKDAY,
    ComponentId.EW: DayCategory.WEEKDAY,
    ComponentId.MSA: DayCategory.SATURDAY,
    ComponentId.ASA: DayCategory.SATURDAY,
    ComponentId.ESA: DayCategory.SATURDAY,
    ComponentId.MSU: DayCategory.SUNDAY,
    ComponentId.ASU: DayCategory.SUNDAY,
    ComponentId.ESU: DayCategory.SUNDAY,
}

_COMPONENT_PERIOD = {
    ComponentId.MW: DayPeriod.MORNING,
    ComponentId.AW: DayPeriod.AFTERNOON,
    ComponentId.EW: DayPeriod.EVENING,
    ComponentId.MSA: DayPeriod.MORNING,
    ComponentId.ASA: DayPeriod.AFTERNOON,
    ComponentId.ESA: DayPeriod.EVENING,
    ComponentId.MSU: DayPeriod.MORNING,
    ComponentId.ASU: DayPeriod.AFTERNOON,
    ComponentId.ESU: DayPeriod.EVENING,
}


@dataclass(frozen=True)
class ComponentParams:
    """Shape of one traffic component.

    peak_rate is the component maximum in messages/hour, peak_time the
    hour of day at which it occurs, and variance (hours^2) controls how
    widely users spread their activity around that preference.
    """

    peak_rate: float
    peak_time: float
    variance: float

    def __post_init__(self):
        rate = float(self.peak_rate)
        time_ = float(self.peak_time)
        var = float(self.variance)
        if not math.isfinite(rate) or rate < 0.0:
            raise ValueError(f"peak_rate must be finite and >= 0, got {self.peak_rate!r}")
        if not math.isfinite(time_) or not 0.0 <= time_ < HOURS_PER_DAY:
            raise ValueError(f"peak_time must lie in [0, 24), got {self.peak_time!r}")
        if not math.isfinite(var) or var <= 0.0:
            raise ValueError(f"variance must be finite and > 0, got {self.variance!r}")
        object.__setattr__(self, "peak_rate", rate)
        object.__setattr__(self, "peak_time", time_)
        object.__setattr__(self, "variance", var)


@dataclass(frozen=True, eq=False)
class WeeklyModel:
    """Complete parameter set: one ComponentParams per ComponentId."""

    components: Mapping[ComponentId, ComponentParams]

    def __post_init__(self):
        unknown = [key for key in self.components if not isinstance(key, ComponentId)]
        if unknown:
            raise ValueError(f"unknown component keys: {unknown!r}")
        missing = [c.value for c in ComponentId if c not in self.components]
        if missing:
            raise ValueError(f"missing components: {', '.join(missing)}")
        ordered = {c: self.components[c] for c in ComponentId}
        object.__setattr__(self, "components", MappingProxyType(ordered))

    def __getitem__(self, component: ComponentId) -> ComponentParams:
        return self.components[component]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeeklyModel):
            return NotImplemented
        return dict(self.components) == dict(other.components)

    def __hash__(self):
        return hash(tuple(self.components[c] for c in ComponentId))


@dataclass(frozen=True)
class WeekClock:
    """Position within a week: day index (1 = Monday .. 7 = Sunday) and hour of day."""

    day: int
    hour: float

    def __post_init__(self):
        if int(self.day) != self.day or not 1 <= self.day <= DAYS_PER_WEEK:
            raise ValueError(f"day must be an integer in [1, 7], got {self.day!r}")
        hour = float(self.hour)
        if not math.isfinite(hour) or not 0.0 <= hour < HOURS_PER_DAY:
            raise ValueError(f"hour must lie in [0, 24), got {self.hour!r}")
        object.__setattr__(self, "day", int(self.day))
        object.__setattr__(self, "hour", hour)


def week_clock_at(hour_index: int) -> tuple[int, WeekClock]:
    """Week number and clock for an absolute hour counter (0 = Monday 00:00 of week 0)."""
    week, in_week = divmod(int(hour_index), HOURS_PER_WEEK)
    day, hour = divmod(in_week, HOURS_PER_DAY)
    return week, WeekClock(day + 1, float(hour))


@dataclass(frozen=True, eq=False)
class TrafficSeries:
    """Gap-free hourly samples addressed by an absolute hour counter.

    ``start`` counts hours from Monday 00:00 of week 0.  Day and hour
    indices derive from position alone, so consecutive samples are exactly
    one hour apart by construction and the series can never contain gaps.
    """

    values: np.ndarray
    start: int = 0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must all be finite")
        if np.any(values < 0.0):
            raise ValueError("values must all be >= 0")
        if int(self.start) != self.start or self.start < 0:
            raise ValueError(f"start must be a non-negative integer, got {self.start!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "start", int(self.start))

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrafficSeries):
            return NotImplemented
        return self.start == other.start and np.array_equal(self.values, other.values)

    @property
    def end(self) -> int:
        """Absolute hour one past the last sample."""
        return self.start + len(self)

    def hour_counters(self) -> np.ndarray:
        return self.start + np.arange(len(self))

    def week_indices(self) -> np.ndarray:
        return self.hour_counters() // HOURS_PER_WEEK

    def day_indices(self) -> np.ndarray:
        return (self.hour_counters() % HOURS_PER_WEEK) // HOURS_PER_DAY + 1

    def hour_indices(self) -> np.ndarray:
        return self.hour_counters() % HOURS_PER_DAY

    def clock_at(self, i: int) -> tuple[int, WeekClock]:
        """Week number and clock of sample ``i``."""
        if not 0 <= i < len(self):
            raise IndexError(f"sample index {i} out of range")
        return week_clock_at(self.start + i)

    def window(self, i: int, j: int) -> "TrafficSeries":
        """Sub-series covering samples [i, j)."""
        if not 0 <= i < j <= len(self):
            raise ValueError(f"invalid window [{i}, {j}) for series of length {len(self)}")
        return TrafficSeries(self.values[i:j], self.start + i)


# One Gaussian term is evaluated per (component, covered day, week copy).
# Weekday components cover days 1-5, Saturday/Sunday components one day
# each, and every copy is repeated at -1/0/+1 weeks: 63 terms in total,
# laid out in canonical component order with day then week ascending so
# summation order is fixed.
def _term_geometry() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    component, shift = [], []
    for index, comp in enumerate(ComponentId):
        for day in comp.category.day_numbers:
            for week in (-1, 0, 1):
                component.append(index)
                shift.append(float(HOURS_PER_DAY * day + HOURS_PER_WEEK * week))
    component = np.asarray(component, dtype=np.intp)
    segments = np.searchsorted(component, np.arange(len(ComponentId)))
    return component, np.asarray(shift), segments


_TERM_COMPONENT, _TERM_SHIFT, _TERM_SEGMENTS = _term_geometry()

# Exponents below this put exp() on a scalar slow path (results heading
# into the subnormal range) at ~10x the cost; clamping far-tail terms here
# changes only values below 1e-304.
_EXP_FLOOR = -700.0


def _model_arrays(model: WeeklyModel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Peak rates, peak times and variances in canonical component order."""
    rates = np.array([model[c].peak_rate for c in ComponentId])
    times = np.array([model[c].peak_time for c in ComponentId])
    variances = np.array([model[c].variance for c in ComponentId])
    return rates, times, variances


def _gaussian_terms(
    times: np.ndarray, variances: np.ndarray, base: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-term offsets and Gaussian factors.

    ``base`` holds ``hour - 24*day`` per sample; the returned arrays have
    shape (n_samples, 63).
    """
    offsets = base[:, None] + _TERM_SHIFT[None, :] - times[_TERM_COMPONENT]
    exponents = -(offsets * offsets) / (2.0 * variances[_TERM_COMPONENT])
    factors = np.exp(np.maximum(exponents, _EXP_FLOOR, out=exponents))
    return offsets, factors


def _weekly_values(
    rates: np.ndarray,
    times: np.ndarray,
    variances: np.ndarray,
    days: np.ndarray,
    hours: np.ndarray,
) -> np.ndarray:
    base = np.asarray(hours, dtype=float) - HOURS_PER_DAY * np.asarray(days, dtype=float)
    _, factors = _gaussian_terms(times, variances, base)
    return factors @ rates[_TERM_COMPONENT]


# ``base`` for the 168 distinct week positions: hourly series only ever
# sample these, so grid evaluation works on one week and gathers by slot.
_SLOT_BASE = (
    np.arange(HOURS_PER_WEEK, dtype=float) % HOURS_PER_DAY
    - HOURS_PER_DAY * (np.arange(HOURS_PER_WEEK) // HOURS_PER_DAY + 1)
)


def _slot_values(rates: np.ndarray, times: np.ndarray, variances: np.ndarray) -> np.ndarray:
    """Model values at each of the 168 week slots (Monday 00:00 first)."""
    _, factors = _gaussian_terms(times, variances, _SLOT_BASE)
    return factors @ rates[_TERM_COMPONENT]


def component_value(params: ComponentParams, offset: float) -> float:
    """One component evaluated at a signed distance (hours) from its peak.

    The caller supplies the already-shifted argument; the result lies in
    [0, peak_rate].
    """
    return params.peak_rate * math.exp(-(offset * offset) / (2.0 * params.variance))


def weekly_value(model: WeeklyModel, clock: WeekClock) -> float:
    """Modeled traffic rate at one position in the week (sum of all 63 terms)."""
    rates, times, variances = _model_arrays(model)
    result = _weekly_values(
        rates, times, variances, np.array([clock.day]), np.array([clock.hour])
    )
    return float(result[0])


def predict_series(
    model: WeeklyModel,
    n_hours: int,
    start_week: int = 0,
    start_clock: WeekClock = WeekClock(1, 0.0),
) -> TrafficSeries:
    """Hourly predictions over a horizon, rolling day and week indices.

    The start must fall on an exact hour; the output repeats with a
    168-hour period because the model depends on time only through the
    week clock.
    """
    if n_hours < 1:
        raise ValueError(f"n_hours must be >= 1, got {n_hours}")
    if start_clock.hour != int(start_clock.hour):
        raise ValueError(f"start hour must be integral, got {start_clock.hour!r}")
    first = (
        start_week * HOURS_PER_WEEK
        + (start_clock.day - 1) * HOURS_PER_DAY
        + int(start_clock.hour)
    )
    counters = first + np.arange(n_hours)
    rates, times, variances = _model_arrays(model)
    per_slot = _slot_values(rates, times, variances)
    return TrafficSeries(per_slot[counters % HOURS_PER_WEEK], first)


def sigma_interval(params: ComponentParams) -> tuple[float, float]:
    """(peak_time - sigma, peak_time + sigma): the ~68% activity window.

    Endpoints may fall outside [0, 24); callers render those as previous-
    or next-day times.
    """
    sigma = math.sqrt(params.variance)
    return params.peak_time - sigma, params.peak_time + sigma


def generate_synthetic(
    model: WeeklyModel, n_weeks: int, noise_std: float, seed: int
) -> TrafficSeries:
    """Model predictions plus i.i.d. Gaussian noise, clamped at zero.

    Deterministic for a fixed seed; with noise_std = 0 the output equals
    ``predict_series`` over the same horizon exactly.
    """
    if n_weeks < 1:
        raise ValueError(f"n_weeks must be >= 1, got {n_weeks}")
    if not math.isfinite(noise_std) or noise_std < 0.0:
        raise ValueError(f"noise_std must be finite and >= 0, got {noise_std!r}")
    clean = predict_series(model, n_weeks * HOURS_PER_WEEK)
    rng = np.random.default_rng(seed)
    noisy = clean.values + rng.normal(0.0, noise_std, len(clean))
    return TrafficSeries(np.maximum(noisy, 0.0), clean.start)
