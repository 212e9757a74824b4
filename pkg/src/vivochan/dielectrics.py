"""Frequency-dependent tissue dielectrics from the four-pole Cole-Cole model.

The complex relative permittivity is

    eps(w) = eps_inf + sum_m d_m / (1 + (j w tau_m)**(1 - a_m)) + sigma / (j w eps0)

with the e^{+jwt} time convention, so lossy media have Im(eps) <= 0.
Tissue parameter sets are never hardcoded here; they come from a database
file (see :func:`load_tissue_database`), and the package ships one in
``vivochan/data/tissues.csv``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

import numpy as np

from .constants import C0, EPS0
from .errors import (
    DomainError,
    FrequencyRangeError,
    ParseError,
    UnknownLabelError,
    ValidationError,
)

F_MIN_DEFAULT = 10.0        # Hz
F_MAX_DEFAULT = 20e9        # Hz
N_POLES = 4

CSV_FIELDS = (
    "tissue", "eps_inf",
    "d1", "tau1", "a1", "d2", "tau2", "a2",
    "d3", "tau3", "a3", "d4", "tau4", "a4",
    "sigma", "fmin", "fmax",
)
OPTIONAL_FIELDS = ("fmin", "fmax", "rho")


@dataclass(frozen=True)
class ColeColePole:
    delta_eps: float
    tau: float
    alpha: float

    def __post_init__(self):
        if not self.delta_eps >= 0:
            raise ValidationError(f"delta_eps must be >= 0, got {self.delta_eps}")
        if not self.tau > 0:
            raise ValidationError(f"tau must be > 0, got {self.tau}")
        if not 0 <= self.alpha < 1:
            raise ValidationError(f"alpha must lie in [0, 1), got {self.alpha}")


@dataclass(frozen=True)
class TissueDielectricSpec:
    """Four-pole Cole-Cole parameter set for one tissue.

    Parameters
    ----------
    tissue_name : str
    eps_inf : float
        High-frequency (optical) relative permittivity, >= 1.
    poles : sequence of ColeColePole
        Exactly four dispersion poles. Disable a pole with ``delta_eps = 0``.
    sigma_ionic : float
        Static ionic conductivity in S/m.
    valid_range : (float, float)
        Frequency interval in Hz inside which the fit may be evaluated.
    density : float or None
        Mass density in kg/m^3, needed only for SAR profiles.
    """

    tissue_name: str
    eps_inf: float
    poles: tuple[ColeColePole, ...]
    sigma_ionic: float
    valid_range: tuple[float, float] = (F_MIN_DEFAULT, F_MAX_DEFAULT)
    density: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(self.poles))
        object.__setattr__(self, "valid_range", tuple(float(v) for v in self.valid_range))
        if not self.tissue_name:
            raise ValidationError("tissue_name must be non-empty")
        if len(self.poles) != N_POLES:
            raise ValidationError(
                f"{self.tissue_name}: poles must have exactly {N_POLES} entries, got {len(self.poles)}"
            )
        if not self.eps_inf >= 1:
            raise ValidationError(f"{self.tissue_name}: eps_inf must be >= 1, got {self.eps_inf}")
        if not self.sigma_ionic >= 0:
            raise ValidationError(f"{self.tissue_name}: sigma must be >= 0, got {self.sigma_ionic}")
        lo, hi = self.valid_range
        if not (F_MIN_DEFAULT <= lo < hi <= F_MAX_DEFAULT):
            raise ValidationError(
                f"{self.tissue_name}: valid_range {self.valid_range} must satisfy "
                f"{F_MIN_DEFAULT:g} <= fmin < fmax <= {F_MAX_DEFAULT:g}"
            )
        if self.density is not None and not self.density > 0:
            raise ValidationError(f"{self.tissue_name}: rho must be > 0, got {self.density}")

    @classmethod
    def from_arrays(cls, name, eps_inf, delta_eps, tau, alpha, sigma, **kwargs):
        poles = [ColeColePole(float(d), float(t), float(a)) for d, t, a in zip(delta_eps, tau, alpha)]
        return cls(name, float(eps_inf), tuple(poles), float(sigma), **kwargs)

    def check_frequency(self, frequency):
        f = np.asarray(frequency, dtype=float)
        if np.any(~(f > 0)):
            raise DomainError(f"frequency must be > 0, got {frequency}")
        lo, hi = self.valid_range
        if np.any(f < lo):
            raise FrequencyRangeError(self.tissue_name, float(np.min(f)), "fmin", lo)
        if np.any(f > hi):
            raise FrequencyRangeError(self.tissue_name, float(np.max(f)), "fmax", hi)


def cole_cole(spec: TissueDielectricSpec, frequency) -> np.ndarray | complex:
    """Complex relative permittivity at ``frequency`` (Hz, scalar or array).

    ``(j w tau)**(1 - a)`` uses the principal branch; ``j w tau`` sits on the
    positive imaginary axis, so this is ``(w tau)**(1-a) * exp(j pi (1-a) / 2)``.
    """
    spec.check_frequency(frequency)
    f = np.asarray(frequency, dtype=float)
    w = 2.0 * np.pi * f
    eps = np.full(f.shape, spec.eps_inf, dtype=complex)
    for pole in spec.poles:
        if pole.delta_eps == 0.0:
            continue
        eps = eps + pole.delta_eps / (1.0 + (1j * w * pole.tau) ** (1.0 - pole.alpha))
    eps = eps + spec.sigma_ionic / (1j * w * EPS0)
    return eps[()] if eps.ndim == 0 else eps


@dataclass(frozen=True)
class DielectricSample:
    """Dielectric state of a medium at one frequency.

    All derived quantities come from the exact complex propagation constant
    ``k = (w/c) sqrt(eps)``; no low-loss or good-conductor approximation.
    """

    frequency: float
    eps_complex: complex
    eps_real: float = field(init=False)
    conductivity_effective: float = field(init=False)
    loss_tangent: float = field(init=False)
    penetration_depth: float = field(init=False)
    wavelength_in_tissue: float = field(init=False)

    def __post_init__(self):
        if not self.frequency > 0:
            raise DomainError(f"frequency must be > 0, got {self.frequency}")
        eps = complex(self.eps_complex)
        if eps.imag > 0:
            raise ValidationError(f"Im(eps) must be <= 0 for a passive medium, got {eps}")
        w = 2.0 * math.pi * self.frequency
        k = propagation_constant(eps, self.frequency)
        att = -k.imag
        object.__setattr__(self, "eps_complex", eps)
        object.__setattr__(self, "eps_real", eps.real)
        object.__setattr__(self, "conductivity_effective", -w * EPS0 * eps.imag)
        object.__setattr__(self, "loss_tangent", -eps.imag / eps.real if eps.real else math.inf)
        object.__setattr__(self, "penetration_depth", 1.0 / att if att > 0 else math.inf)
        object.__setattr__(self, "wavelength_in_tissue", 2.0 * math.pi / k.real)

    @property
    def attenuation_constant(self) -> float:
        """Field attenuation constant in Np/m."""
        return -propagation_constant(self.eps_complex, self.frequency).imag

    @property
    def wavenumber(self) -> complex:
        return propagation_constant(self.eps_complex, self.frequency)

    @classmethod
    def from_conductivity(cls, eps_real, sigma, frequency):
        """Build a sample from relative permittivity and conductivity (S/m)."""
        w = 2.0 * math.pi * frequency
        return cls(frequency, complex(eps_real, -sigma / (w * EPS0)))


def propagation_constant(eps, frequency):
    """Complex wavenumber in rad/m; ``Im(k) <= 0`` for passive media."""
    k = 2.0 * np.pi * np.asarray(frequency, dtype=float) / C0 * np.sqrt(np.asarray(eps, dtype=complex))
    return complex(k) if k.ndim == 0 else k


def evaluate_permittivity(spec: TissueDielectricSpec, frequency: float) -> DielectricSample:
    """Evaluate a tissue at a single frequency."""
    if np.ndim(frequency) != 0:
        raise ValidationError("evaluate_permittivity takes a scalar frequency; use sweep() for arrays")
    eps = complex(cole_cole(spec, frequency))
    return DielectricSample(float(frequency), eps)


def sweep(spec: TissueDielectricSpec, frequencies: Iterable[float]) -> list[DielectricSample]:
    freqs = np.asarray(list(frequencies), dtype=float)
    eps = np.atleast_1d(cole_cole(spec, freqs))
    return [DielectricSample(float(f), complex(e)) for f, e in zip(freqs, eps)]


def wavelength_in_tissue(eps_real: float, frequency: float) -> float:
    """Lossless in-tissue wavelength ``c / (sqrt(eps_real) f)`` in metres."""
    if not eps_real >= 1:
        raise DomainError(f"eps_real must be >= 1, got {eps_real}")
    if not frequency > 0:
        raise DomainError(f"frequency must be > 0, got {frequency}")
    return C0 / (math.sqrt(eps_real) * frequency)


# -- database -----------------------------------------------------------------

def _number(value, name, record):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ParseError(f"field {name!r}: not a number: {value!r}", record) from None


def _spec_from_mapping(rec: Mapping, record) -> TissueDielectricSpec:
    missing = [k for k in CSV_FIELDS if k not in rec and k not in OPTIONAL_FIELDS]
    if missing:
        raise ParseError(f"missing fields {missing}", record)
    name = str(rec["tissue"]).strip()
    if not name:
        raise ParseError("empty tissue name", record)

    def opt(key, default):
        v = rec.get(key)
        if v is None or (isinstance(v, str) and not v.strip()):
            return default
        return _number(v, key, record)

    poles = []
    for m in range(1, N_POLES + 1):
        d, t, a = (_number(rec[f"{p}{m}"], f"{p}{m}", record) for p in ("d", "tau", "a"))
        try:
            poles.append(ColeColePole(d, t, a))
        except ValidationError as exc:
            raise ValidationError(f"record {record} ({name}), pole {m}: {exc}") from None
    try:
        return TissueDielectricSpec(
            tissue_name=name,
            eps_inf=_number(rec["eps_inf"], "eps_inf", record),
            poles=tuple(poles),
            sigma_ionic=_number(rec["sigma"], "sigma", record),
            valid_range=(opt("fmin", F_MIN_DEFAULT), opt("fmax", F_MAX_DEFAULT)),
            density=opt("rho", None),
        )
    except ValidationError as exc:
        raise ValidationError(f"record {record}: {exc}") from None


def load_tissue_database(source) -> dict[str, TissueDielectricSpec]:
    """Parse a tissue database.

    ``source`` is bytes, text, or a binary/text file object holding either the
    CSV layout (header ``tissue,eps_inf,d1,tau1,a1,...,sigma,fmin,fmax`` with
    optional ``rho``; ``#`` lines are comments) or a JSON array of objects with
    the same field names. Returns specs keyed by tissue name, in file order.
    Records are numbered by their 1-based line (CSV) or array index (JSON).
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    text = source
    if text.lstrip().startswith("["):
        return _load_json(text)
    return _load_csv(text)


def _collect(specs, spec, record):
    if spec.tissue_name in specs:
        raise ValidationError(f"record {record}: duplicate tissue {spec.tissue_name!r}")
    specs[spec.tissue_name] = spec


def _load_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    specs: dict[str, TissueDielectricSpec] = {}
    for i, rec in enumerate(data):
        if not isinstance(rec, dict):
            raise ParseError("expected an object", i)
        _collect(specs, _spec_from_mapping(rec, i), i)
    return specs


def _load_csv(text):
    lines = [(n, line) for n, line in enumerate(text.splitlines(), start=1)
             if line.strip() and not line.lstrip().startswith("#")]
    specs: dict[str, TissueDielectricSpec] = {}
    if not lines:
        return specs
    header_line, header = lines[0]
    fields = [h.strip() for h in next(csv.reader([header]))]
    absent = [k for k in CSV_FIELDS if k not in fields and k not in OPTIONAL_FIELDS]
    if absent:
        raise ParseError(f"header missing columns {absent}", header_line)
    for lineno, line in lines[1:]:
        values = next(csv.reader([line]))
        if len(values) != len(fields):
            raise ParseError(f"expected {len(fields)} columns, got {len(values)}", lineno)
        rec = {k: v.strip() for k, v in zip(fields, values)}
        _collect(specs, _spec_from_mapping(rec, lineno), lineno)
    return specs


def load_tissue_file(path) -> dict[str, TissueDielectricSpec]:
    try:
        with open(path, "rb") as fh:
            return load_tissue_database(fh)
    except OSError as exc:
        raise ParseError(f"cannot read tissue database {path}: {exc}") from None


def default_database_path():
    return resources.files("vivochan") / "data" / "tissues.csv"


def load_default_database(path=None) -> dict[str, TissueDielectricSpec]:
    """Load ``path``, else ``$VIVOCHAN_TISSUE_DB``, else the bundled database."""
    path = path or os.environ.get("VIVOCHAN_TISSUE_DB")
    if path:
        return load_tissue_file(path)
    return load_tissue_database(default_database_path().read_bytes())


def get_tissue(database: Mapping[str, TissueDielectricSpec], name: str) -> TissueDielectricSpec:
    try:
        return database[name]
    except KeyError:
        raise UnknownLabelError("tissue", name, database) from None


def dump_csv(specs: Sequence[TissueDielectricSpec]) -> str:
    """Serialize specs back to the CSV layout (with ``rho``)."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_FIELDS + ("rho",))
    for s in specs:
        row = [s.tissue_name, repr(s.eps_inf)]
        for p in s.poles:
            row += [repr(p.delta_eps), repr(p.tau), repr(p.alpha)]
        row += [repr(s.sigma_ionic), repr(s.valid_range[0]), repr(s.valid_range[1])]
        row.append("" if s.density is None else repr(s.density))
        w.writerow(row)
    return out.getvalue()
