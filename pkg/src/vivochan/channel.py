"""Stochastic channel realizations and summary statistics.

A realization combines a log-normal shadowing draw with a tapped delay
profile whose dB gains follow the convex template

    g(t) = P0 - D (1 - exp(-t / gamma))

sampled every ``tap_spacing_ns`` up to ``max_excess_delay_ns`` (10 ns in the
torso). The template shape and its defaults (D = 30 dB, gamma = 3 ns, 1 ns
spacing) are modelling choices, not fitted values.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .datasets import MAX_EXCESS_DELAY_NS
from .errors import DomainError, ParseError, ValidationError


@dataclass(frozen=True)
class PdpShape:
    first_tap_gain_db: float = 0.0
    decay_depth_db: float = 30.0
    time_constant_ns: float = 3.0
    max_excess_delay_ns: float = MAX_EXCESS_DELAY_NS
    tap_spacing_ns: float = 1.0

    def __post_init__(self):
        if not self.decay_depth_db > 0:
            raise ValidationError(f"decay_depth_db must be > 0, got {self.decay_depth_db}")
        if not self.time_constant_ns > 0:
            raise ValidationError(f"time_constant_ns must be > 0, got {self.time_constant_ns}")
        if not 0 < self.tap_spacing_ns <= self.max_excess_delay_ns:
            raise ValidationError(
                f"tap_spacing_ns must lie in (0, max_excess_delay_ns], got {self.tap_spacing_ns}"
            )

    def delays(self) -> np.ndarray:
        n = int(math.floor(self.max_excess_delay_ns / self.tap_spacing_ns + 1e-9))
        return np.arange(n + 1) * self.tap_spacing_ns

    def template_db(self) -> np.ndarray:
        t = self.delays()
        if math.isinf(self.time_constant_ns):
            return np.full(t.shape, self.first_tap_gain_db)
        return self.first_tap_gain_db - self.decay_depth_db * -np.expm1(-t / self.time_constant_ns)


@dataclass(frozen=True)
class Tap:
    delay_ns: float
    gain_db: float


@dataclass(frozen=True)
class ChannelRealization:
    taps: tuple[Tap, ...]
    shadowing_db: float
    seed: int | None
    total_path_loss_db: float            # mean path loss + shadowing
    template_db: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def delays_ns(self) -> np.ndarray:
        return np.array([t.delay_ns for t in self.taps])

    @property
    def gains_db(self) -> np.ndarray:
        return np.array([t.gain_db for t in self.taps])

    @property
    def total_tap_power(self) -> float:
        """Summed linear tap power, relative to unit transmit power."""
        return float(np.sum(10.0 ** (self.gains_db / 10.0)))

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "total_path_loss_db": self.total_path_loss_db,
            "shadowing_db": self.shadowing_db,
            "taps": [asdict(t) for t in self.taps],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["delay_ns", "gain_db"])
        for t in self.taps:
            w.writerow([repr(t.delay_ns), repr(t.gain_db)])
        return out.getvalue()

    @classmethod
    def from_dict(cls, data: dict) -> "ChannelRealization":
        try:
            taps = tuple(Tap(float(t["delay_ns"]), float(t["gain_db"])) for t in data["taps"])
            return cls(taps, float(data["shadowing_db"]), data.get("seed"),
                       float(data["total_path_loss_db"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad realization record: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "ChannelRealization":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None


def realize_channel(mean_pl_db: float, sigma_db: float, shape: PdpShape | None = None,
                    rng=None, tap_jitter_db: float = 1.0, renormalize: bool = True) -> ChannelRealization:
    """Draw one channel realization.

    Parameters
    ----------
    mean_pl_db : float
        Mean path loss in dB.
    sigma_db : float
        Shadowing standard deviation in dB.
    shape : PdpShape, optional
    rng : int, numpy.random.Generator or None
        Seed or caller-owned generator. An int is recorded as the seed.
    tap_jitter_db : float
        Standard deviation of the independent per-tap dB perturbation.
    renormalize : bool
        Rescale after jitter so the taps carry exactly the shadowed path-loss
        budget. With ``False`` the template is scaled to the budget and the
        jitter is left to change the total.
    """
    shape = shape or PdpShape()
    if not sigma_db >= 0:
        raise ValidationError(f"sigma_db must be >= 0, got {sigma_db}")
    if not tap_jitter_db >= 0:
        raise ValidationError(f"tap_jitter_db must be >= 0, got {tap_jitter_db}")
    seed = int(rng) if isinstance(rng, (int, np.integer)) else None
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)

    shadow = float(gen.normal(0.0, sigma_db)) if sigma_db > 0 else 0.0
    total_pl = mean_pl_db + shadow
    budget_db = -total_pl

    template = shape.template_db()
    delays = shape.delays()
    scale_db = budget_db - _power_db(template)
    gains = template + scale_db
    if tap_jitter_db > 0:
        gains = gains + gen.normal(0.0, tap_jitter_db, size=gains.shape)
        # first arrival stays the strongest tap
        gains[1:] = np.minimum(gains[1:], gains[0])
        if renormalize:
            gains = gains + (budget_db - _power_db(gains))

    taps = tuple(Tap(float(t), float(g)) for t, g in zip(delays, gains))
    return ChannelRealization(taps, shadow, seed, total_pl, template_db=template)


def _power_db(gains_db: np.ndarray) -> float:
    g = np.asarray(gains_db, dtype=float)
    peak = float(np.max(g))
    return peak + 10.0 * math.log10(float(np.sum(10.0 ** ((g - peak) / 10.0))))


# -- frequency trend and angular statistics -----------------------------------

@dataclass(frozen=True)
class FrequencyTrend:
    slope_db_per_ghz: float
    intercept_db: float
    r_squared: float

    def predict(self, freq_ghz):
        return self.intercept_db + self.slope_db_per_ghz * np.asarray(freq_ghz, dtype=float)


def _pairs(points, keys):
    out = []
    for p in points:
        if isinstance(p, dict):
            out.append((float(p[keys[0]]), float(p[keys[1]])))
        else:
            a, b = p
            out.append((float(a), float(b)))
    return np.array(out, dtype=float).reshape(-1, 2)


def fit_frequency_trend(points: Iterable) -> FrequencyTrend:
    """Ordinary least-squares line through ``(freq_ghz, pl_db)`` points."""
    xy = _pairs(points, ("freq_ghz", "pl_db"))
    x, y = xy[:, 0], xy[:, 1]
    if len(np.unique(x)) < 2:
        raise DomainError("degenerate fit: need at least 2 distinct frequencies")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    ss_tot = np.sum((y - ym) ** 2)
    ss_res = np.sum((y - (intercept + slope * x)) ** 2)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return FrequencyTrend(float(slope), float(intercept), float(min(1.0, max(0.0, r2))))


@dataclass(frozen=True)
class AngularSummary:
    average_db: float
    max_difference_db: float
    peak_to_average_ratio: float


def angular_summary(samples: Iterable) -> AngularSummary:
    """Summary statistics of path-loss samples in dB over angle.

    The peak-to-average ratio is a ratio of dB values.
    """
    xy = _pairs(samples, ("angle_deg", "pl_db"))
    if len(xy) == 0:
        raise ValidationError("angular_summary needs at least one sample")
    ang, pl = xy[:, 0], xy[:, 1]
    if np.any((ang < 0) | (ang >= 360)):
        raise ValidationError("angles must lie in [0, 360)")
    avg = float(np.mean(pl))
    if avg <= 0:
        raise ValidationError("peak-to-average ratio needs a positive average path loss")
    return AngularSummary(avg, float(pl.max() - pl.min()), float(pl.max() / avg))
