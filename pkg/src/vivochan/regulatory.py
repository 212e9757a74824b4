"""IEEE 802.15.6 band catalog with EIRP checks, plus end-to-end link budgets."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Mapping

from .errors import DomainError, ParseError, UnknownLabelError, ValidationError
from .exposure import FCC_1G, ExposureLimit, ExposureVerdict, check_exposure
from .pathloss import (
    ANALYTICAL_TYPES,
    STATISTICAL_TYPES,
    Fspl,
    FsplRlAbsorption,
    FsplWithRl,
    PathLossModel,
    PmbaFarField,
    mean_path_loss_db,
    model_from_dict,
    path_loss_db,
)

NARROWBAND = "NarrowBand"
UWB = "UWB"
HBC = "HBC"


@dataclass(frozen=True)
class EirpLimit:
    value: float
    unit: str                  # "dBm/MHz" (spectral density) or "W" (total)
    authority: str
    as_printed_flag: bool = False
    note: str = ""


@dataclass(frozen=True)
class BandSpec:
    band_id: str
    method: str
    f_low: float               # Hz
    f_high: float              # Hz
    channel_bw: float          # Hz
    label: str                 # band as written in the standard's table
    eirp_limit: EirpLimit | None = None

    def __post_init__(self):
        if not self.f_low < self.f_high:
            raise ValidationError(f"{self.band_id}: f_low must be < f_high")
        if not self.channel_bw > 0:
            raise ValidationError(f"{self.band_id}: channel_bw must be > 0")

    def contains(self, f: float) -> bool:
        return self.f_low <= f <= self.f_high


_UWB_MASK = EirpLimit(-41.3, "dBm/MHz", "FCC")
_MICS_PRINTED = EirpLimit(
    25.0, "W", "FCC", as_printed_flag=True,
    note="25 W EIRP (FCC) / 25 W ERP (ETSI); likely a typo for a uW-scale limit",
)

# HBC entries are single centre frequencies; stored as centre +/- bw/2
_CATALOG = (
    BandSpec("nb-402", NARROWBAND, 402e6, 405e6, 300e3, "402–405 MHz", _MICS_PRINTED),
    BandSpec("nb-420", NARROWBAND, 420e6, 450e6, 300e3, "420–450 MHz"),
    BandSpec("nb-863", NARROWBAND, 863e6, 870e6, 400e3, "863–870 MHz"),
    BandSpec("nb-902", NARROWBAND, 902e6, 928e6, 500e3, "902–928 MHz"),
    BandSpec("nb-950", NARROWBAND, 950e6, 956e6, 400e3, "950–956 MHz"),
    BandSpec("nb-2360", NARROWBAND, 2360e6, 2400e6, 1e6, "2360–2400 MHz"),
    BandSpec("nb-2400", NARROWBAND, 2400e6, 2438.5e6, 1e6, "2400–2438.5 MHz"),
    BandSpec("uwb-low", UWB, 3.2e9, 4.7e9, 499e6, "3.2–4.7 GHz", _UWB_MASK),
    BandSpec("uwb-high", UWB, 6.2e9, 10.3e9, 499e6, "6.2–10.3 GHz", _UWB_MASK),
    BandSpec("hbc-16", HBC, 14e6, 18e6, 4e6, "16 MHz"),
    BandSpec("hbc-27", HBC, 25e6, 29e6, 4e6, "27 MHz"),
)


def band_catalog() -> list[BandSpec]:
    return list(_CATALOG)


def get_band(band_id: str) -> BandSpec:
    for b in _CATALOG:
        if b.band_id == band_id:
            return b
    raise UnknownLabelError("band", band_id, [b.band_id for b in _CATALOG])


def catalog_records() -> list[dict]:
    return [asdict(b) for b in _CATALOG]


def catalog_json() -> str:
    """Canonical JSON dump of the catalog (stable key order, 2-space indent)."""
    return json.dumps(catalog_records(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def classify_frequency(f: float) -> list[BandSpec]:
    """All catalog bands whose closed interval contains ``f`` Hz."""
    if not f > 0:
        raise DomainError(f"frequency must be > 0, got {f}")
    return [b for b in _CATALOG if b.contains(f)]


@dataclass(frozen=True)
class EirpVerdict:
    status: str                      # "compliant" | "exceeds" | "not-regulated"
    margin_db: float | None = None   # limit - measured, positive = headroom
    measured: float | None = None    # dBm or dBm/MHz, matching the limit's unit
    limit: EirpLimit | None = None
    warning: str | None = None

    @property
    def compliant(self) -> bool:
        return self.status != "exceeds"


def check_eirp(eirp_dbm: float, band: BandSpec, bandwidth_hz: float | None = None) -> EirpVerdict:
    """Compare an EIRP against the band's limit.

    Spectral-density limits (UWB, dBm/MHz) need the occupied ``bandwidth_hz``.
    Limits stored as printed emit a :class:`UserWarning` and carry it on the
    verdict.
    """
    lim = band.eirp_limit
    if lim is None:
        return EirpVerdict("not-regulated")
    warning = None
    if lim.unit == "dBm/MHz":
        if bandwidth_hz is None:
            raise ValidationError(f"band {band.band_id}: density limit needs bandwidth_hz")
        if not bandwidth_hz > 0:
            raise DomainError(f"bandwidth_hz must be > 0, got {bandwidth_hz}")
        measured = eirp_dbm - 10.0 * math.log10(bandwidth_hz / 1e6)
        limit_value = lim.value
    elif lim.unit == "W":
        measured = eirp_dbm
        limit_value = 10.0 * math.log10(lim.value) + 30.0
    else:
        raise ValidationError(f"unsupported limit unit {lim.unit!r}")
    if lim.as_printed_flag:
        warning = f"band {band.band_id}: limit {lim.value:g} {lim.unit} used as printed; {lim.note}"
        warnings.warn(warning, UserWarning, stacklevel=2)
    margin = limit_value - measured
    return EirpVerdict("compliant" if margin >= 0 else "exceeds", margin, measured, lim, warning)


# -- link budget --------------------------------------------------------------

def dbm_to_watt(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watt_to_dbm(p_w: float) -> float:
    if not p_w > 0:
        raise DomainError(f"power must be > 0 W, got {p_w}")
    return 10.0 * math.log10(p_w) + 30.0


@dataclass(frozen=True)
class LinkBudgetReport:
    tx_power_dbm: float
    tx_gain_db: float
    rx_gain_db: float
    eirp_dbm: float
    path_loss_db: float
    rx_power_dbm: float
    sensitivity_dbm: float
    link_margin_db: float
    gains_model_internal: bool
    compliance: tuple = field(default=())

    @property
    def feasible(self) -> bool:
        return self.link_margin_db >= 0


def _model_tx_gain(model) -> float:
    if isinstance(model, (Fspl, FsplWithRl, FsplRlAbsorption)):
        return model.tx.gain_linear
    if isinstance(model, PmbaFarField):
        return model.tx_gain
    return 1.0


def link_budget(tx_power_dbm: float, model: PathLossModel, sensitivity_dbm: float, *,
                distance_m: float | None = None, depth_mm: float | None = None,
                tx_gain_db: float = 0.0, rx_gain_db: float = 0.0,
                band: BandSpec | None = None, bandwidth_hz: float | None = None,
                sar: float | None = None, sar_limit: ExposureLimit = FCC_1G) -> LinkBudgetReport:
    """End-to-end budget ``rx = tx + Gt + Gr - PL`` and ``margin = rx - sensitivity``.

    Analytical models already contain the antenna gains, so ``tx_gain_db`` and
    ``rx_gain_db`` default to 0 dB and the report is marked
    ``gains_model_internal``; any value passed is added on top. Statistical
    models take the depth in mm (``depth_mm`` or ``distance_m * 1000``).
    """
    if distance_m is None and depth_mm is None:
        raise ValidationError("link_budget needs distance_m or depth_mm")
    internal = isinstance(model, ANALYTICAL_TYPES)
    try:
        if isinstance(model, STATISTICAL_TYPES):
            depth = depth_mm if depth_mm is not None else distance_m * 1e3
            pl = float(mean_path_loss_db(model, depth))
        else:
            dist = distance_m if distance_m is not None else depth_mm * 1e-3
            pl = path_loss_db(model, dist, dbm_to_watt(tx_power_dbm))
    except DomainError as exc:
        raise DomainError(f"link budget ({type(model).__name__}): {exc}") from exc
    rx = tx_power_dbm + tx_gain_db + rx_gain_db - pl
    eirp = tx_power_dbm + tx_gain_db + 10.0 * math.log10(_model_tx_gain(model))
    compliance = []
    if band is not None:
        compliance.append(("eirp", band.band_id, check_eirp(eirp, band, bandwidth_hz)))
    if sar is not None:
        compliance.append(("sar", sar_limit.authority, check_exposure(sar, sar_limit)))
    return LinkBudgetReport(tx_power_dbm, tx_gain_db, rx_gain_db, eirp, pl, rx,
                            sensitivity_dbm, rx - sensitivity_dbm, internal, tuple(compliance))


def link_budget_from_scenario(scenario: Mapping) -> LinkBudgetReport:
    """Evaluate a JSON-style scenario.

    ``{tx_power_dbm, model: {variant, ...}, distance_mm | distance_m,
    sensitivity_dbm, band?, bandwidth_hz?, tx_gain_db?, rx_gain_db?, sar?}``
    """
    try:
        model = model_from_dict(scenario["model"])
        kwargs = dict(
            distance_m=scenario.get("distance_m"),
            depth_mm=scenario.get("distance_mm", scenario.get("depth_mm")),
            tx_gain_db=float(scenario.get("tx_gain_db", 0.0)),
            rx_gain_db=float(scenario.get("rx_gain_db", 0.0)),
            bandwidth_hz=scenario.get("bandwidth_hz"),
            sar=scenario.get("sar"),
        )
        if scenario.get("band"):
            kwargs["band"] = get_band(str(scenario["band"]))
        return link_budget(float(scenario["tx_power_dbm"]), model, float(scenario["sensitivity_dbm"]),
                           **kwargs)
    except KeyError as exc:
        raise ParseError(f"scenario missing field {exc}") from None


def report_to_dict(report: LinkBudgetReport) -> dict:
    out = asdict(report)
    out["feasible"] = report.feasible
    out["compliance"] = [
        {"check": kind, "against": ref, **_verdict_dict(v)} for kind, ref, v in report.compliance
    ]
    return out


def _verdict_dict(v) -> dict:
    if isinstance(v, ExposureVerdict):
        return {"status": v.status, "margin_db": v.margin_db}
    return {"status": v.status, "margin_db": v.margin_db, "warning": v.warning}
