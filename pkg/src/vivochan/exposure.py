"""Specific absorption rate and exposure-limit checks.

Only point SAR is computed. Mass-averaged SAR over 1 g or 10 g cubes needs
3-D geometry; :class:`ExposureLimit` records the averaging mass as metadata
and the check compares it against point (or peak) SAR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError
from .layers import LayerStack, PlaneWaveSolution


@dataclass(frozen=True)
class SarQuery:
    conductivity: float      # S/m
    e_field_rms: float       # V/m
    mass_density: float      # kg/m^3

    def __post_init__(self):
        if not self.conductivity >= 0:
            raise ValidationError(f"conductivity must be >= 0, got {self.conductivity}")
        if not self.e_field_rms >= 0:
            raise ValidationError(f"e_field_rms must be >= 0, got {self.e_field_rms}")
        if not self.mass_density > 0:
            raise ValidationError(f"mass_density must be > 0, got {self.mass_density}")


@dataclass(frozen=True)
class ExposureLimit:
    limit_w_per_kg: float
    averaging_mass_g: float
    authority: str

    def __post_init__(self):
        if not (self.limit_w_per_kg > 0 and self.averaging_mass_g > 0):
            raise ValidationError("limit and averaging mass must both be positive")


FCC_1G = ExposureLimit(1.6, 1.0, "FCC")


@dataclass(frozen=True)
class ExposureVerdict:
    compliant: bool
    margin_db: float         # +inf when sar == 0
    sar: float
    limit: ExposureLimit

    @property
    def status(self) -> str:
        return "compliant" if self.compliant else "exceeds"


def compute_sar(query: SarQuery | float, e_field_rms: float | None = None,
                mass_density: float | None = None) -> float:
    """SAR = sigma |E|^2 / rho in W/kg.

    Accepts a :class:`SarQuery` or the three values positionally.
    """
    if not isinstance(query, SarQuery):
        query = SarQuery(float(query), float(e_field_rms), float(mass_density))
    return query.conductivity * query.e_field_rms ** 2 / query.mass_density


def check_exposure(sar: float, limit: ExposureLimit = FCC_1G) -> ExposureVerdict:
    if not sar >= 0:
        raise ValidationError(f"sar must be >= 0, got {sar}")
    margin = math.inf if sar == 0 else 10.0 * math.log10(limit.limit_w_per_kg / sar)
    return ExposureVerdict(sar <= limit.limit_w_per_kg, margin, sar, limit)


@dataclass(frozen=True)
class SarProfile:
    z: np.ndarray            # m
    sar: np.ndarray          # W/kg
    layer_index: np.ndarray
    density: np.ndarray      # kg/m^3 per sample; 0 where a layer is lossless
    incident_power_density: float

    @property
    def peak(self) -> float:
        return float(np.max(self.sar))

    def layer_absorbed_power(self, layer_index: int) -> float:
        """Integral of SAR * rho across one layer in W/m^2 (trapezoid rule)."""
        m = self.layer_index == layer_index
        return float(_trapezoid(self.sar[m] * self.density[m], self.z[m]))


_trapezoid = getattr(np, "trapezoid", None) or np.trapz


def incident_rms_field(solution: PlaneWaveSolution, incident_power_density: float) -> float:
    """RMS incident field (V/m) carrying ``incident_power_density`` W/m^2 in layer 0."""
    # incident_flux is for a unit *peak* amplitude: S = |E_pk|^2 Re(1/eta*) / 2 = |E_rms|^2 Re(1/eta*)
    return math.sqrt(incident_power_density / (2.0 * solution.incident_flux))


def sar_profile(solution: PlaneWaveSolution, stack: LayerStack,
                incident_power_density: float) -> SarProfile:
    """Pointwise SAR along the sampled field profile of a solved stack.

    The conductivity used is the effective one, ``w eps0 |Im eps|``, so the
    profile accounts for dielectric as well as ionic loss.
    """
    if not incident_power_density >= 0:
        raise ValidationError(f"incident_power_density must be >= 0, got {incident_power_density}")
    prof = solution.field_profile
    if prof is None or len(prof.z) == 0:
        raise ValidationError("solution carries no field profile")
    e0 = incident_rms_field(solution, incident_power_density)
    sar = np.zeros(prof.z.shape)
    density = np.zeros(prof.z.shape)
    for i, layer in enumerate(stack.layers):
        sigma = solution.samples[i].conductivity_effective
        if sigma == 0:
            continue
        rho = layer.mass_density
        if rho is None:
            raise ConfigurationError(f"no mass density for tissue {layer.label!r} (layer {i})")
        m = prof.layer_index == i
        density[m] = rho
        sar[m] = sigma * (e0 * np.abs(prof.e_field[m])) ** 2 / rho
    return SarProfile(prof.z.copy(), sar, prof.layer_index.copy(), density, incident_power_density)
