"""Analytical and statistical in-vivo path-loss models.

Analytical variants (all powers in watts, distances in metres)::

    Fspl              Pr = Pt Gt Gr (lambda / 4 pi R)^2
    FsplWithRl        Pr = Pt Gt (1-|S11|^2) Gr (1-|S22|^2) (lambda / 4 pi R)^2
    FsplRlAbsorption  ... * exp(-a R)^2
    PmbaNearField     Pr = 16 delta (Pt - P_NF) Ae / (pi L^2)
    PmbaFarField      Pr = (Pt - P_NF - P_FF) lambda^2 / (4 pi R^2) Gt Gr

Statistical variants (depth ``d`` in millimetres, dB)::

    StatisticalA      PL(d) = PL0 + m (d/d0) + S
    StatisticalB      PL(d) = PL(d0) + 10 n log10(d/d0) + S

with shadowing ``S ~ Normal(0, sigma_db^2)`` in dB. ``sigma_db`` is a
standard deviation in dB.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from . import datasets
from .constants import C0
from .errors import DomainError, ParseError, UnknownLabelError, ValidationError


@dataclass(frozen=True)
class AntennaPort:
    """Antenna seen only through its linear gain and port reflection |S|."""

    gain_linear: float = 1.0
    reflection_mag: float = 0.0

    def __post_init__(self):
        if not self.gain_linear > 0:
            raise ValidationError(f"gain_linear must be > 0, got {self.gain_linear}")
        if not 0 <= self.reflection_mag <= 1:
            raise ValidationError(f"reflection_mag must lie in [0, 1], got {self.reflection_mag}")

    @classmethod
    def from_db(cls, gain_dbi: float, return_loss_db: float | None = None):
        refl = 0.0 if return_loss_db is None else 10 ** (-abs(return_loss_db) / 20)
        return cls(10 ** (gain_dbi / 10), refl)

    @property
    def mismatch_efficiency(self) -> float:
        return 1.0 - self.reflection_mag ** 2


def _check_wavelength(wl):
    if not wl > 0:
        raise ValidationError(f"wavelength must be > 0, got {wl}")


@dataclass(frozen=True)
class Fspl:
    tx: AntennaPort
    rx: AntennaPort
    wavelength: float

    def __post_init__(self):
        _check_wavelength(self.wavelength)


@dataclass(frozen=True)
class FsplWithRl:
    tx: AntennaPort
    rx: AntennaPort
    wavelength: float

    def __post_init__(self):
        _check_wavelength(self.wavelength)


@dataclass(frozen=True)
class FsplRlAbsorption:
    tx: AntennaPort
    rx: AntennaPort
    wavelength: float
    attenuation_constant: float = 0.0   # Np/m

    def __post_init__(self):
        _check_wavelength(self.wavelength)
        if not self.attenuation_constant >= 0:
            raise ValidationError(f"attenuation_constant must be >= 0, got {self.attenuation_constant}")


@dataclass(frozen=True)
class PmbaNearField:
    delta: float                 # Ae / A
    p_nf: float                  # W
    largest_dim: float           # m
    effective_aperture: float    # m^2

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValidationError(f"delta must lie in (0, 1], got {self.delta}")
        if not self.p_nf >= 0:
            raise ValidationError(f"p_nf must be >= 0, got {self.p_nf}")
        if not (self.largest_dim > 0 and self.effective_aperture > 0):
            raise ValidationError("largest_dim and effective_aperture must be > 0")


@dataclass(frozen=True)
class PmbaFarField:
    p_nf: float
    p_ff: float
    wavelength: float
    tx_gain: float = 1.0
    rx_gain: float = 1.0

    def __post_init__(self):
        _check_wavelength(self.wavelength)
        if not (self.p_nf >= 0 and self.p_ff >= 0):
            raise ValidationError("p_nf and p_ff must be >= 0")
        if not (self.tx_gain > 0 and self.rx_gain > 0):
            raise ValidationError("gains must be > 0")


def _check_statistical(d0, sigma_db):
    if not d0 > 0:
        raise ValidationError(f"d0 must be > 0, got {d0}")
    if not sigma_db >= 0:
        raise ValidationError(f"sigma_db must be >= 0, got {sigma_db}")


@dataclass(frozen=True)
class StatisticalA:
    """Linear-in-depth model ``PL0 + slope * d/d0 + S``."""

    pl0_db: float
    slope: float
    d0: float = datasets.REFERENCE_DEPTH_MM
    sigma_db: float = 0.0
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        _check_statistical(self.d0, self.sigma_db)


@dataclass(frozen=True)
class StatisticalB:
    """Log-distance model ``PL(d0) + 10 n log10(d/d0) + S``."""

    pl_d0_db: float
    exponent: float
    d0: float = datasets.REFERENCE_DEPTH_MM
    sigma_db: float = 0.0
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        _check_statistical(self.d0, self.sigma_db)


AnalyticalModel = Union[Fspl, FsplWithRl, FsplRlAbsorption, PmbaNearField, PmbaFarField]
StatisticalModel = Union[StatisticalA, StatisticalB]
PathLossModel = Union[AnalyticalModel, StatisticalModel]

ANALYTICAL_TYPES = (Fspl, FsplWithRl, FsplRlAbsorption, PmbaNearField, PmbaFarField)
STATISTICAL_TYPES = (StatisticalA, StatisticalB)


def free_space_wavelength(frequency: float) -> float:
    if not frequency > 0:
        raise DomainError(f"frequency must be > 0, got {frequency}")
    return C0 / frequency


def received_power(model: PathLossModel, tx_power: float, distance: float) -> float:
    """Received power in W for ``tx_power`` W at ``distance`` metres.

    Statistical models return the shadowing-free mean, with ``distance``
    converted to a depth in millimetres.
    """
    if not tx_power >= 0:
        raise DomainError(f"tx_power must be >= 0, got {tx_power}")

    if isinstance(model, PmbaNearField):
        if not tx_power > model.p_nf:
            raise DomainError("near-field loss exceeds transmit power")
        return 16.0 * model.delta * (tx_power - model.p_nf) / (math.pi * model.largest_dim ** 2) \
            * model.effective_aperture

    if not distance > 0:
        raise DomainError(f"distance must be > 0, got {distance}")

    if isinstance(model, STATISTICAL_TYPES):
        return tx_power * 10.0 ** (-mean_path_loss_db(model, distance * 1e3) / 10.0)

    if isinstance(model, PmbaFarField):
        if not tx_power > model.p_nf + model.p_ff:
            raise DomainError("near-field loss exceeds transmit power")
        return (tx_power - model.p_nf - model.p_ff) * model.wavelength ** 2 \
            / (4.0 * math.pi * distance ** 2) * model.tx_gain * model.rx_gain

    friis = tx_power * model.tx.gain_linear * model.rx.gain_linear \
        * (model.wavelength / (4.0 * math.pi * distance)) ** 2
    if isinstance(model, Fspl):
        return friis
    if isinstance(model, (FsplWithRl, FsplRlAbsorption)):
        pr = friis * model.tx.mismatch_efficiency * model.rx.mismatch_efficiency
        if isinstance(model, FsplRlAbsorption):
            pr = pr * math.exp(-model.attenuation_constant * distance) ** 2
        return pr
    raise ValidationError(f"unsupported model {type(model).__name__}")


def path_loss_db(model: PathLossModel, distance: float, tx_power: float = 1.0) -> float:
    """``10 log10(Pt / Pr)``; gains of analytical models are included."""
    pr = received_power(model, tx_power, distance)
    if pr <= 0:
        return math.inf
    return 10.0 * math.log10(tx_power / pr)


def mean_path_loss_db(model: StatisticalModel, depth) -> float | np.ndarray:
    """Shadowing-free path loss at ``depth`` mm (scalar or array)."""
    d = np.asarray(depth, dtype=float)
    if np.any(~(d >= model.d0)):
        raise DomainError(f"depth {depth} mm below reference depth d0 = {model.d0} mm")
    if isinstance(model, StatisticalA):
        pl = model.pl0_db + model.slope * (d / model.d0)
    elif isinstance(model, StatisticalB):
        pl = model.pl_d0_db + 10.0 * model.exponent * np.log10(d / model.d0)
    else:
        raise ValidationError(f"mean_path_loss_db needs a statistical model, got {type(model).__name__}")
    return float(pl) if pl.ndim == 0 else pl


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample_path_loss_db(model: StatisticalModel, depth, rng=None, size=None):
    """Mean path loss plus Normal(0, sigma_db^2) shadowing in dB.

    ``rng`` is a seed or a :class:`numpy.random.Generator` owned by the caller.
    With ``sigma_db == 0`` the mean is returned unchanged.
    """
    mean = mean_path_loss_db(model, depth)
    gen = _generator(rng)
    if size is None:
        size = np.shape(mean) or None
    if model.sigma_db == 0:
        return mean if size is None else np.broadcast_to(mean, size).astype(float)
    return mean + gen.normal(0.0, model.sigma_db, size=size)


# -- fitted parameter sets -----------------------------------------------------

@dataclass(frozen=True)
class FittedParameterSet:
    label: str
    pl0_db: float
    slope: float
    sigma_db: float
    catalog: str | None = None

    def model(self, d0: float = datasets.REFERENCE_DEPTH_MM) -> StatisticalA:
        return StatisticalA(self.pl0_db, self.slope, d0, self.sigma_db, label=self.label)


CATALOGS = {
    "region": datasets.REGION_PARAMETERS,
    "side": datasets.SIDE_PARAMETERS,
}


def _normalize(label: str) -> str:
    return re.sub(r"[\s_\-\u2013\u2014]+", " ", label.strip().lower())


def builtin_parameters(catalog: str, label: str) -> FittedParameterSet:
    """Look up a published parameter row.

    ``catalog`` is ``"region"`` or ``"side"``. ``label`` matches exactly,
    then case/dash-insensitively, then as a unique prefix (``"overall"``).
    """
    try:
        table = CATALOGS[catalog]
    except KeyError:
        raise UnknownLabelError("catalog", catalog, CATALOGS) from None
    if label in table:
        key = label
    else:
        norm = _normalize(label)
        exact = [k for k in table if _normalize(k) == norm]
        prefix = [k for k in table if _normalize(k).startswith(norm)] if norm else []
        if exact:
            key = exact[0]
        elif len(prefix) == 1:
            key = prefix[0]
        else:
            raise UnknownLabelError(f"{catalog} label", label, table)
    pl0, m, sigma = table[key]
    return FittedParameterSet(key, pl0, m, sigma, catalog)


def parse_preset(text: str) -> FittedParameterSet:
    """``"region:heart"`` / ``"side:posterior"`` -> parameter set."""
    catalog, sep, label = text.partition(":")
    if not sep:
        raise UnknownLabelError("preset", text, [f"{c}:{k}" for c, t in CATALOGS.items() for k in t])
    try:
        return builtin_parameters(catalog.strip().lower(), label)
    except UnknownLabelError:
        raise UnknownLabelError("preset", text, [f"{c}:{k}" for c, t in CATALOGS.items() for k in t]) from None


# -- validation against measurements -----------------------------------------

@dataclass(frozen=True)
class Measurement:
    label: str
    depth_mm: float
    pl_db: float


@dataclass(frozen=True)
class Residual:
    label: str
    depth_mm: float
    measured_db: float
    predicted_db: float | None
    residual_db: float | None
    error: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[Residual, ...]
    mean_residual_db: float
    mean_abs_residual_db: float
    max_abs_residual_db: float
    n_used: int

    def row(self, label: str) -> Residual:
        for r in self.rows:
            if r.label == label:
                return r
        raise UnknownLabelError("measurement", label, [r.label for r in self.rows])

    def flagged(self, threshold_db: float = 10.0) -> list[Residual]:
        return [r for r in self.rows if r.residual_db is not None and abs(r.residual_db) > threshold_db]


def builtin_measurements() -> list[Measurement]:
    return [Measurement(*row) for row in datasets.CADAVER_MEASUREMENTS]


def _as_measurement(m) -> Measurement:
    if isinstance(m, Measurement):
        return m
    if isinstance(m, dict):
        return Measurement(str(m["label"]), float(m["depth_mm"]), float(m["pl_db"]))
    label, depth, pl = m
    return Measurement(str(label), float(depth), float(pl))


def validate_against_measurements(model: StatisticalModel,
                                  measurements: Iterable | None = None) -> ValidationReport:
    """Residual = measured - predicted mean, per measurement.

    Rows below the model's reference depth get an error entry and are left
    out of the summary statistics. Defaults to the embedded cadaver set.
    """
    ms = [_as_measurement(m) for m in (builtin_measurements() if measurements is None else measurements)]
    if not ms:
        raise ValidationError("measurement list is empty")
    rows = []
    used = []
    for m in ms:
        try:
            pred = mean_path_loss_db(model, m.depth_mm)
        except DomainError as exc:
            rows.append(Residual(m.label, m.depth_mm, m.pl_db, None, None, str(exc)))
            continue
        r = m.pl_db - pred
        rows.append(Residual(m.label, m.depth_mm, m.pl_db, pred, r))
        used.append(r)
    if used:
        arr = np.array(used)
        summary = (float(arr.mean()), float(np.abs(arr).mean()), float(np.abs(arr).max()))
    else:
        summary = (math.nan, math.nan, math.nan)
    return ValidationReport(tuple(rows), *summary, n_used=len(used))


def load_measurements(source) -> list[Measurement]:
    """Parse ``label,depth_mm,pl_db`` CSV (header required, ``#`` comments allowed)."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8-sig")
    lines = [(n, line) for n, line in enumerate(source.splitlines(), 1)
             if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        return []
    header = [h.strip() for h in next(csv.reader([lines[0][1]]))]
    if header != ["label", "depth_mm", "pl_db"]:
        raise ParseError(f"expected header label,depth_mm,pl_db, got {','.join(header)}", lines[0][0])
    out = []
    for n, line in lines[1:]:
        row = next(csv.reader(io.StringIO(line)))
        if len(row) != 3:
            raise ParseError(f"expected 3 columns, got {len(row)}", n)
        try:
            out.append(Measurement(row[0].strip(), float(row[1]), float(row[2])))
        except ValueError as exc:
            raise ParseError(str(exc), n) from None
    return out


# -- (de)serialisation -------------------------------------------------------

VARIANTS = {
    "fspl": Fspl,
    "fspl_rl": FsplWithRl,
    "fspl_rl_absorption": FsplRlAbsorption,
    "pmba_near": PmbaNearField,
    "pmba_far": PmbaFarField,
    "statistical_a": StatisticalA,
    "statistical_b": StatisticalB,
}
_VARIANT_NAMES = {cls: name for name, cls in VARIANTS.items()}


def _port(params, side):
    return AntennaPort(float(params.get(f"gain_{side}", 1.0)),
                       float(params.get("s11" if side == "tx" else "s22", 0.0)))


def _wavelength(params):
    if "wavelength_m" in params:
        return float(params["wavelength_m"])
    if "frequency_hz" in params:
        return free_space_wavelength(float(params["frequency_hz"]))
    raise ParseError("model needs wavelength_m or frequency_hz")


def model_from_dict(data: dict) -> PathLossModel:
    """Build a model from ``{"variant": name, ...params}``.

    Statistical variants accept ``preset`` (e.g. ``"region:heart"``) in place
    of explicit ``pl0_db``/``slope``/``sigma_db``.
    """
    try:
        variant = str(data["variant"]).lower()
    except (KeyError, TypeError):
        raise ParseError("model needs a 'variant' field") from None
    if variant not in VARIANTS:
        raise UnknownLabelError("model variant", variant, VARIANTS)
    p = data
    try:
        if variant in ("fspl", "fspl_rl"):
            return VARIANTS[variant](_port(p, "tx"), _port(p, "rx"), _wavelength(p))
        if variant == "fspl_rl_absorption":
            return FsplRlAbsorption(_port(p, "tx"), _port(p, "rx"), _wavelength(p),
                                    float(p.get("attenuation_np_per_m", 0.0)))
        if variant == "pmba_near":
            return PmbaNearField(float(p["delta"]), float(p["p_nf_w"]), float(p["largest_dim_m"]),
                                 float(p["effective_aperture_m2"]))
        if variant == "pmba_far":
            return PmbaFarField(float(p["p_nf_w"]), float(p["p_ff_w"]), _wavelength(p),
                                float(p.get("gain_tx", 1.0)), float(p.get("gain_rx", 1.0)))
        d0 = float(p.get("d0_mm", datasets.REFERENCE_DEPTH_MM))
        if "preset" in p:
            fitted = parse_preset(str(p["preset"]))
            base = (fitted.pl0_db, fitted.slope, fitted.sigma_db, fitted.label)
        else:
            key, slope_key = ("pl0_db", "slope") if variant == "statistical_a" else ("pl_d0_db", "exponent")
            base = (float(p[key]), float(p[slope_key]), float(p.get("sigma_db", 0.0)), p.get("label"))
        sigma = float(p["sigma_db"]) if "sigma_db" in p else base[2]
        return VARIANTS[variant](base[0], base[1], d0, sigma, label=base[3])
    except KeyError as exc:
        raise ParseError(f"model {variant!r} missing parameter {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (ValidationError, ParseError)):
            raise
        raise ParseError(f"model {variant!r}: {exc}") from None


def model_to_dict(model: PathLossModel) -> dict:
    variant = _VARIANT_NAMES[type(model)]
    out: dict = {"variant": variant}
    if isinstance(model, (Fspl, FsplWithRl, FsplRlAbsorption)):
        out.update(gain_tx=model.tx.gain_linear, gain_rx=model.rx.gain_linear,
                   s11=model.tx.reflection_mag, s22=model.rx.reflection_mag,
                   wavelength_m=model.wavelength)
        if isinstance(model, FsplRlAbsorption):
            out["attenuation_np_per_m"] = model.attenuation_constant
    elif isinstance(model, PmbaNearField):
        out.update(delta=model.delta, p_nf_w=model.p_nf, largest_dim_m=model.largest_dim,
                   effective_aperture_m2=model.effective_aperture)
    elif isinstance(model, PmbaFarField):
        out.update(p_nf_w=model.p_nf, p_ff_w=model.p_ff, wavelength_m=model.wavelength,
                   gain_tx=model.tx_gain, gain_rx=model.rx_gain)
    elif isinstance(model, StatisticalA):
        out.update(pl0_db=model.pl0_db, slope=model.slope, d0_mm=model.d0, sigma_db=model.sigma_db)
    else:
        out.update(pl_d0_db=model.pl_d0_db, exponent=model.exponent, d0_mm=model.d0,
                   sigma_db=model.sigma_db)
    if isinstance(model, STATISTICAL_TYPES) and model.label:
        out["label"] = model.label
    return out
