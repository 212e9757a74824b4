"""Normal-incidence plane waves through planar tissue stacks.

The stack is solved with a wave-impedance transfer recursion. In every layer
the field is ``E(u) = A exp(-j k u) + B exp(+j k u)`` with ``u`` the distance
from the layer's left boundary, ``k = (w/c) sqrt(eps)`` and wave impedance
``eta = eta0 / sqrt(eps)`` (mu = mu0 everywhere). Tangential E and H are
matched at every interface, starting from a purely outgoing wave in the
terminal layer and normalising to a unit incident amplitude in the source
layer.

The first layer is the source-side half-space and the last layer is the
termination half-space. Their thicknesses only set how much of each is
sampled in the field profile; a ``None`` thickness on the last layer samples
one in-layer wavelength.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .constants import C0, ETA0, NEPER_TO_DB
from .dielectrics import DielectricSample, TissueDielectricSpec, evaluate_permittivity, get_tissue
from .errors import DomainError, ParseError, ValidationError

DEFAULT_POINTS_PER_LAYER = 64


@dataclass(frozen=True)
class Layer:
    """One planar layer.

    ``medium`` is either a Cole-Cole tissue spec (evaluated at the stack
    frequency) or a fixed :class:`DielectricSample`. ``thickness`` is in metres.
    """

    medium: TissueDielectricSpec | DielectricSample
    thickness: float | None
    name: str | None = None
    density: float | None = None

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if isinstance(self.medium, TissueDielectricSpec):
            return self.medium.tissue_name
        return f"eps={self.medium.eps_complex:.4g}"

    @property
    def mass_density(self) -> float | None:
        if self.density is not None:
            return self.density
        if isinstance(self.medium, TissueDielectricSpec):
            return self.medium.density
        return None

    def sample(self, frequency: float) -> DielectricSample:
        if isinstance(self.medium, DielectricSample):
            if not math.isclose(self.medium.frequency, frequency, rel_tol=1e-12):
                raise ValidationError(
                    f"layer {self.label!r}: fixed sample is at {self.medium.frequency:g} Hz, "
                    f"stack is at {frequency:g} Hz"
                )
            return self.medium
        return evaluate_permittivity(self.medium, frequency)


@dataclass(frozen=True)
class LayerStack:
    layers: tuple[Layer, ...]
    frequency: float

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.frequency > 0:
            raise DomainError(f"frequency must be > 0, got {self.frequency}")
        if len(self.layers) < 2:
            raise ValidationError("a stack needs at least 2 layers")
        for i, layer in enumerate(self.layers):
            last = i == len(self.layers) - 1
            if layer.thickness is None:
                if not last:
                    raise ValidationError(f"layer {i} ({layer.label}): only the last layer may be semi-infinite")
            elif not layer.thickness > 0:
                raise ValidationError(f"layer {i} ({layer.label}): thickness must be > 0, got {layer.thickness}")

    def reversed(self, last_thickness: float | None = None) -> "LayerStack":
        """The same stack illuminated from the other side."""
        layers = list(self.layers[::-1])
        first = layers[0]
        if first.thickness is None:
            if last_thickness is None:
                raise ValidationError("reversing a stack with a semi-infinite end needs last_thickness")
            layers[0] = Layer(first.medium, last_thickness, first.name, first.density)
        return LayerStack(tuple(layers), self.frequency)


@dataclass(frozen=True)
class InterfaceResult:
    """Single-interface quantities, each interface treated between half-spaces."""

    gamma: complex
    power_transmission_factor: float
    position: float              # m, global z of the interface
    effective_reflection: complex  # B/A just left of the interface, with all multiple reflections


@dataclass(frozen=True)
class FieldProfile:
    z: np.ndarray                # m, interface 0 at z = 0
    e_field: np.ndarray          # complex, relative to the incident amplitude
    layer_index: np.ndarray

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.e_field)


@dataclass(frozen=True)
class PlaneWaveSolution:
    frequency: float
    samples: tuple[DielectricSample, ...]
    input_reflection: complex
    per_interface: tuple[InterfaceResult, ...]
    layer_attenuation_db: tuple[float, ...]
    field_profile: FieldProfile
    # amplitudes of the forward/backward waves, per layer, at u = 0
    forward: np.ndarray
    backward: np.ndarray
    wavenumbers: np.ndarray
    impedances: np.ndarray
    bounds: tuple[tuple[float, float], ...]   # global z extent of each sampled layer
    # time-averaged power flux per unit area for a unit incident peak field
    incident_flux: float
    net_input_flux: float
    transmitted_flux: float
    absorbed_flux: tuple[float, ...]
    labels: tuple[str, ...] = field(default=())

    @property
    def reflected_flux(self) -> float:
        return self.incident_flux - self.net_input_flux

    @property
    def transmittance(self) -> float:
        return self.transmitted_flux / self.incident_flux

    @property
    def energy_residual(self) -> float:
        """Relative mismatch of incident = reflected + transmitted + absorbed."""
        total = self.reflected_flux + self.transmitted_flux + sum(self.absorbed_flux)
        return abs(self.incident_flux - total) / self.incident_flux

    def field_at(self, z) -> np.ndarray:
        """Complex E at global positions ``z`` (m), inside the sampled extent."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.empty(z.shape, dtype=complex)
        starts = np.array([b[0] for b in self.bounds])
        idx = np.clip(np.searchsorted(starts, z, side="right") - 1, 0, len(self.bounds) - 1)
        for i in np.unique(idx):
            m = idx == i
            out[m] = _layer_field(self, i, z[m])
        return out


def _origin(sol: PlaneWaveSolution, i: int) -> float:
    # layer 0 amplitudes are referenced to the first interface (its right end)
    return sol.bounds[0][1] if i == 0 else sol.bounds[i][0]


def _layer_field(sol: PlaneWaveSolution, i: int, z: np.ndarray) -> np.ndarray:
    u = z - _origin(sol, i)
    k = sol.wavenumbers[i]
    return sol.forward[i] * np.exp(-1j * k * u) + sol.backward[i] * np.exp(1j * k * u)


def _flux(e, h) -> float:
    return 0.5 * float(np.real(e * np.conj(h)))


def interface_reflection(eta_1: complex, eta_2: complex) -> complex:
    """Normal-incidence Fresnel coefficient going from medium 1 into medium 2."""
    return (eta_2 - eta_1) / (eta_2 + eta_1)


def solve_stack(stack: LayerStack, points_per_layer: int = DEFAULT_POINTS_PER_LAYER) -> PlaneWaveSolution:
    """Solve a stack for a unit-amplitude plane wave incident from layer 0."""
    if points_per_layer < 2:
        raise ValidationError("points_per_layer must be >= 2")
    f = stack.frequency
    samples = tuple(layer.sample(f) for layer in stack.layers)
    n = len(samples)
    eps = np.array([s.eps_complex for s in samples], dtype=complex)
    root = np.sqrt(eps)
    k = 2.0 * np.pi * f / C0 * root
    eta = ETA0 / root

    thick = [layer.thickness for layer in stack.layers]
    d = np.array([0.0] + [t for t in thick[1:-1]] + [0.0])

    # backward recursion from an outgoing-only terminal wave
    A = np.zeros(n, dtype=complex)
    B = np.zeros(n, dtype=complex)
    A[-1] = 1.0
    for i in range(n - 2, -1, -1):
        e_r = A[i + 1] + B[i + 1]
        h_r = (A[i + 1] - B[i + 1]) / eta[i + 1]
        fwd = 0.5 * (e_r + eta[i] * h_r)
        bwd = 0.5 * (e_r - eta[i] * h_r)
        phase = np.exp(1j * k[i] * d[i])
        A[i] = fwd * phase
        B[i] = bwd / phase
        scale = abs(A[i])
        if scale > 1e150:  # keep thick lossy stacks in range
            A /= scale
            B /= scale
    A, B = A / A[0], B / A[0]

    # geometry: interface 0 at z = 0
    interfaces = np.concatenate([[0.0], np.cumsum(d[1:-1])])
    ext_first = thick[0]
    ext_last = thick[-1] if thick[-1] is not None else 2.0 * np.pi / k[-1].real
    bounds = [(-ext_first, 0.0)]
    for i in range(1, n - 1):
        bounds.append((interfaces[i - 1], interfaces[i]))
    bounds.append((interfaces[-1], interfaces[-1] + ext_last))

    def e_h(i, u):
        fw = A[i] * np.exp(-1j * k[i] * u)
        bw = B[i] * np.exp(1j * k[i] * u)
        return fw + bw, (fw - bw) / eta[i]

    incident = _flux(1.0, 1.0 / eta[0])
    net_in = _flux(*e_h(0, 0.0))
    transmitted = _flux(A[-1], A[-1] / eta[-1])
    absorbed = [0.0]
    for i in range(1, n - 1):
        absorbed.append(_flux(*e_h(i, 0.0)) - _flux(*e_h(i, d[i])))
    absorbed.append(0.0)

    per_interface = []
    for i in range(n - 1):
        g = interface_reflection(eta[i], eta[i + 1])
        u_right = 0.0 if i == 0 else d[i]
        fw = A[i] * np.exp(-1j * k[i] * u_right)
        bw = B[i] * np.exp(1j * k[i] * u_right)
        per_interface.append(InterfaceResult(
            gamma=complex(g),
            power_transmission_factor=float(min(1.0, max(0.0, 1.0 - abs(g) ** 2))),
            position=float(interfaces[i]),
            effective_reflection=complex(bw / fw) if fw != 0 else complex("nan"),
        ))

    att = [0.0]
    for i in range(1, n):
        alpha = -k[i].imag
        if i == n - 1 and thick[-1] is None:
            att.append(math.inf if alpha > 0 else 0.0)
        else:
            att.append(NEPER_TO_DB * alpha * thick[i])

    zs, es, idx = [], [], []
    for i, (z0, z1) in enumerate(bounds):
        z = np.linspace(z0, z1, points_per_layer)
        origin = bounds[0][1] if i == 0 else z0
        zs.append(z)
        es.append(e_h(i, z - origin)[0])
        idx.append(np.full(points_per_layer, i))
    profile = FieldProfile(np.concatenate(zs), np.concatenate(es), np.concatenate(idx))

    return PlaneWaveSolution(
        frequency=f,
        samples=samples,
        input_reflection=complex(B[0]),
        per_interface=tuple(per_interface),
        layer_attenuation_db=tuple(float(a) for a in att),
        field_profile=profile,
        forward=A,
        backward=B,
        wavenumbers=k,
        impedances=eta,
        bounds=tuple((float(a), float(b)) for a, b in bounds),
        incident_flux=incident,
        net_input_flux=net_in,
        transmitted_flux=transmitted,
        absorbed_flux=tuple(absorbed),
        labels=tuple(layer.label for layer in stack.layers),
    )


def standing_wave_ratio(solution: PlaneWaveSolution, layer_index: int) -> float:
    """max|E| / min|E| inside one layer.

    Uses the sampled profile plus the analytic turning points of the
    interference term, so extrema between samples are not missed.
    """
    n = len(solution.bounds)
    if not -n <= layer_index < n:
        raise ValidationError(f"layer_index {layer_index} out of range for {n} layers")
    i = layer_index % n
    if solution.backward[i] == 0:
        return 1.0
    prof = solution.field_profile
    mags = list(np.abs(prof.e_field[prof.layer_index == i]))
    z0, z1 = solution.bounds[i]
    beta = solution.wavenumbers[i].real
    a, b = solution.forward[i], solution.backward[i]
    if beta > 0 and a != 0:
        # interference term ~ cos(2 beta u + arg(b/a)); extrema at 2 beta u + phi = m pi
        phi = np.angle(b / a)
        origin = _origin(solution, i)
        u0, u1 = z0 - origin, z1 - origin
        m_lo = math.ceil((2 * beta * u0 + phi) / math.pi)
        m_hi = math.floor((2 * beta * u1 + phi) / math.pi)
        if m_hi - m_lo < 10000:
            u = (np.arange(m_lo, m_hi + 1) * math.pi - phi) / (2 * beta)
            mags.extend(np.abs(_layer_field(solution, i, u + origin)))
    lo, hi = min(mags), max(mags)
    if lo == 0:
        return math.inf
    return float(max(1.0, hi / lo))


def absorption_loss_db(medium, frequency: float, distance: float) -> float:
    """Absorption loss ``20 log10(e) * a * R`` of a travelling wave over ``distance`` m.

    ``medium`` is a tissue spec, a :class:`DielectricSample`, or directly a
    field attenuation constant in Np/m.
    """
    if not distance >= 0:
        raise DomainError(f"distance must be >= 0, got {distance}")
    if isinstance(medium, TissueDielectricSpec):
        alpha = evaluate_permittivity(medium, frequency).attenuation_constant
    elif isinstance(medium, DielectricSample):
        alpha = medium.attenuation_constant
    else:
        alpha = float(medium)
        if not alpha >= 0:
            raise DomainError(f"attenuation constant must be >= 0, got {alpha}")
    return NEPER_TO_DB * alpha * distance


# -- stack files --------------------------------------------------------------

def stack_from_dict(data: Mapping, database: Mapping[str, TissueDielectricSpec]) -> LayerStack:
    """Build a stack from the JSON description.

    ``{"frequency_hz": f, "layers": [{"tissue": name, "thickness_mm": t|null}, ...]}``.
    A layer may instead give ``eps_real`` plus ``sigma`` (S/m) for a fixed
    medium, in which case ``tissue`` is only a label; ``rho`` (kg/m^3)
    overrides the database density.
    """
    try:
        f = float(data["frequency_hz"])
        entries = list(data["layers"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"stack needs frequency_hz and layers: {exc}") from None
    layers = []
    for i, e in enumerate(entries):
        if not isinstance(e, Mapping) or "tissue" not in e:
            raise ParseError("layer needs a 'tissue' field", i)
        t = e.get("thickness_mm")
        if t is None and i != len(entries) - 1:
            raise ValidationError(f"layer {i}: null thickness allowed only on the last layer")
        thickness = None if t is None else float(t) * 1e-3
        if "eps_real" in e:
            medium = DielectricSample.from_conductivity(float(e["eps_real"]), float(e.get("sigma", 0.0)), f)
        else:
            medium = get_tissue(database, e["tissue"])
        rho = e.get("rho")
        layers.append(Layer(medium, thickness, name=str(e["tissue"]),
                            density=None if rho is None else float(rho)))
    return LayerStack(tuple(layers), f)


def stack_to_dict(stack: LayerStack) -> dict:
    out = []
    for layer in stack.layers:
        entry = {"tissue": layer.label,
                 "thickness_mm": None if layer.thickness is None else layer.thickness * 1e3}
        if isinstance(layer.medium, DielectricSample):
            entry["eps_real"] = layer.medium.eps_real
            entry["sigma"] = layer.medium.conductivity_effective
        if layer.density is not None:
            entry["rho"] = layer.density
        out.append(entry)
    return {"frequency_hz": stack.frequency, "layers": out}


def load_stack(source, database: Mapping[str, TissueDielectricSpec]) -> LayerStack:
    if hasattr(source, "read"):
        source = source.read()
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid stack JSON: {exc}") from None
    return stack_from_dict(data, database)


def simple_stack(frequency: float, layers: Sequence[tuple]) -> LayerStack:
    """Convenience builder from ``(eps_complex, thickness_m)`` pairs."""
    return LayerStack(
        tuple(Layer(DielectricSample(frequency, complex(eps)), t) for eps, t in layers),
        frequency,
    )
