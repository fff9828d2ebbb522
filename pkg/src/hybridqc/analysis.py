"""Transport-exponent fitting and regime classification.

The exponent is the slope of log m2 against log t over a chosen window,
by ordinary least squares.  Classification combines the fitted slope with
a plateau test comparing the final decade of m2 against the run before it,
since boundedness for all times cannot be observed in a finite run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import MomentSeries
from .errors import InsufficientDataError, ValidationError

MIN_FIT_POINTS = 8


@dataclass(frozen=True)
class TransportFit:
    """Power-law fit m2 ~ C t^beta over [t_min, t_max] in log-log space."""

    beta: float
    log_c: float
    residual: float
    t_window: tuple[float, float]
    n_points: int
    n_excluded: int


@dataclass(frozen=True)
class RegimeThresholds:
    """Classification knobs; overridable through experiment configuration."""

    beta_localized: float = 0.2
    plateau_ratio: float = 1.25
    beta_ballistic: float = 1.9


@dataclass(frozen=True)
class RegimeLabel:
    label: str  # localized | anomalous | near_ballistic
    thresholds: RegimeThresholds
    plateau_ratio: float


def fit_beta(series: MomentSeries, t_min: float, t_max: float) -> TransportFit:
    """Least-squares slope of log m2 vs log t inside [t_min, t_max].

    Samples with non-positive m2 are dropped (their count is reported);
    at least 8 usable samples are required.
    """
    if not t_min < t_max:
        raise ValidationError("need t_min < t_max")
    window = (series.t >= t_min) & (series.t <= t_max)
    usable = window & (series.m2 > 0)
    n_excluded = int(window.sum() - usable.sum())
    n_points = int(usable.sum())
    if n_points < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"only {n_points} usable samples in [{t_min:g}, {t_max:g}]; "
            f"need >= {MIN_FIT_POINTS}"
        )
    x = np.log(series.t[usable])
    y = np.log(series.m2[usable])
    beta, log_c = np.polyfit(x, y, 1)
    resid = y - (beta * x + log_c)
    rms = float(np.sqrt(np.mean(resid**2)))
    return TransportFit(
        beta=float(beta),
        log_c=float(log_c),
        residual=rms,
        t_window=(t_min, t_max),
        n_points=n_points,
        n_excluded=n_excluded,
    )


def last_decade(series: MomentSeries) -> tuple[float, float]:
    """Default fit window: the final factor-of-10 span of sampled times."""
    t_max = float(series.t[-1])
    if t_max <= 0:
        raise ValidationError("series must extend to positive times")
    return (t_max / 10.0, t_max)


def classify(
    series: MomentSeries,
    fit: TransportFit,
    thresholds: RegimeThresholds = RegimeThresholds(),
) -> RegimeLabel:
    """Label a run localized, anomalous, or near-ballistic.

    Localized means a small fitted slope together with a plateau: the peak
    m2 of the final decade exceeds the peak of the earlier samples by less
    than the plateau ratio.  A slope above the ballistic threshold is
    near-ballistic; everything else is anomalous transport.
    """
    t_lo = float(series.t[-1]) / 10.0
    late = series.m2[series.t >= t_lo]
    early = series.m2[(series.t < t_lo) & (series.t > 0)]
    if len(late) == 0:
        raise ValidationError("no samples in the final decade")
    if len(early) == 0 or float(np.max(early)) <= 0.0:
        ratio = math.inf
    else:
        ratio = float(np.max(late)) / float(np.max(early))
    if fit.beta > thresholds.beta_ballistic:
        label = "near_ballistic"
    elif fit.beta < thresholds.beta_localized and ratio < thresholds.plateau_ratio:
        label = "localized"
    else:
        label = "anomalous"
    return RegimeLabel(label=label, thresholds=thresholds, plateau_ratio=ratio)
