"""Command-line front end.

Every subcommand writes one table (CSV or JSON) with a metadata header.
Exit codes: 0 success, 2 validation/usage error, 3 runtime/data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import secrets
import shlex
import sys
import warnings

import numpy as np

from . import __version__, datasets
from .channel import PdpShape, realize_channel
from .dielectrics import cole_cole, get_tissue, load_default_database
from .errors import DataError, ValidationError
from .exposure import ExposureLimit, check_exposure, compute_sar, sar_profile
from .layers import DEFAULT_POINTS_PER_LAYER, Layer, LayerStack, load_stack, solve_stack, standing_wave_ratio
from .pathloss import (
    AntennaPort,
    Fspl,
    FsplRlAbsorption,
    FsplWithRl,
    PmbaFarField,
    PmbaNearField,
    StatisticalA,
    StatisticalB,
    STATISTICAL_TYPES,
    builtin_measurements,
    free_space_wavelength,
    load_measurements,
    mean_path_loss_db,
    parse_preset,
    path_loss_db,
    sample_path_loss_db,
    validate_against_measurements,
)
from .regulatory import (
    band_catalog,
    catalog_records,
    check_eirp,
    classify_frequency,
    get_band,
    link_budget,
    link_budget_from_scenario,
    report_to_dict,
)

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 2, 3
JSON_DIGITS = 12
CSV_DIGITS = 6
BUILTIN_MEASUREMENTS = ("builtin:cadaver", "builtin:table7.5")


# -- output -------------------------------------------------------------------

def _round(x, digits):
    if isinstance(x, (bool, np.bool_)) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{digits}g}")


def _csv_cell(x, digits):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{digits}g}"
    return str(x)


class Table:
    def __init__(self, columns, rows, metadata=None, body=None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.metadata = dict(metadata or {})
        self.body = body   # optional extra JSON payload merged at top level


def render(table: Table, fmt: str, base_meta: dict, csv_digits: int = CSV_DIGITS) -> str:
    meta = {**base_meta, **table.metadata}
    if fmt == "json":
        doc = {"metadata": _jsonable(meta)}
        if table.body is not None:
            doc.update(_jsonable(table.body))
        if table.columns:
            doc["columns"] = table.columns
            doc["data"] = [{c: _round(v, JSON_DIGITS) for c, v in zip(table.columns, r)} for r in table.rows]
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    out = io.StringIO()
    for k, v in meta.items():
        out.write(f"# {k}: {_csv_cell(_round(v, JSON_DIGITS), JSON_DIGITS) if not isinstance(v, (dict, list)) else json.dumps(_jsonable(v))}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_csv_cell(v, csv_digits) for v in r])
    return out.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [_round(obj.real, JSON_DIGITS), _round(obj.imag, JSON_DIGITS)]
    return _round(obj, JSON_DIGITS)


# -- argument helpers ----------------------------------------------------------

def parse_sweep(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive) or a single number."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) != 3:
            raise ValueError
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValidationError(f"bad sweep {text!r}; expected start:stop:count or a number") from None
    if count < 1:
        raise ValidationError(f"sweep count must be >= 1, got {count}")
    if count == 1 and start != stop:
        raise ValidationError("a 1-point sweep needs start == stop")
    return np.linspace(start, stop, count)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
    print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _database(args):
    return load_default_database(args.tissue_db)


def _add_model_args(p):
    p.add_argument("--model", default="statA",
                   choices=["statA", "statB", "fspl", "fsplrl", "fsplrla", "pmba-nf", "pmba-ff"])
    p.add_argument("--preset", help="fitted parameters, e.g. region:heart or side:posterior")
    p.add_argument("--pl0", type=float, help="PL0 (statA) or PL(d0) (statB), dB")
    p.add_argument("--slope", type=float, help="statA slope m, dB")
    p.add_argument("--exponent", type=float, help="statB path-loss exponent n")
    p.add_argument("--d0", type=float, default=datasets.REFERENCE_DEPTH_MM, help="reference depth, mm")
    p.add_argument("--sigma", type=float, help="shadowing std, dB")
    p.add_argument("--freq", type=float, help="frequency, Hz (analytical models)")
    p.add_argument("--gain-tx", type=float, default=1.0, help="linear tx gain")
    p.add_argument("--gain-rx", type=float, default=1.0, help="linear rx gain")
    p.add_argument("--s11", type=float, default=0.0)
    p.add_argument("--s22", type=float, default=0.0)
    p.add_argument("--atten", type=float, default=0.0, help="attenuation constant, Np/m")
    p.add_argument("--delta", type=float, help="PMBA Ae/A")
    p.add_argument("--p-nf", type=float, default=0.0, help="near-field loss, W")
    p.add_argument("--p-ff", type=float, default=0.0, help="far-field loss, W")
    p.add_argument("--largest-dim", type=float, help="largest antenna dimension, m")
    p.add_argument("--aperture", type=float, help="effective aperture, m^2")


def build_model(args):
    kind = args.model
    if kind in ("statA", "statB"):
        label = None
        if args.preset:
            fitted = parse_preset(args.preset)
            pl0, slope, sigma, label = fitted.pl0_db, fitted.slope, fitted.sigma_db, fitted.label
            if kind == "statB":
                raise ValidationError("presets are fitted for statA (linear-in-depth) only")
        else:
            pl0, sigma = args.pl0, 0.0
            slope = args.slope if kind == "statA" else args.exponent
            if pl0 is None or slope is None:
                need = "--slope" if kind == "statA" else "--exponent"
                raise ValidationError(f"{kind} needs --preset or --pl0 and {need}")
        if args.sigma is not None:
            sigma = args.sigma
        cls = StatisticalA if kind == "statA" else StatisticalB
        return cls(pl0, slope, args.d0, sigma, label=label)
    if kind == "pmba-nf":
        if None in (args.delta, args.largest_dim, args.aperture):
            raise ValidationError("pmba-nf needs --delta, --largest-dim and --aperture")
        return PmbaNearField(args.delta, args.p_nf, args.largest_dim, args.aperture)
    if args.freq is None:
        raise ValidationError(f"{kind} needs --freq")
    wl = free_space_wavelength(args.freq)
    if kind == "pmba-ff":
        return PmbaFarField(args.p_nf, args.p_ff, wl, args.gain_tx, args.gain_rx)
    tx = AntennaPort(args.gain_tx, args.s11)
    rx = AntennaPort(args.gain_rx, args.s22)
    if kind == "fspl":
        return Fspl(tx, rx, wl)
    if kind == "fsplrl":
        return FsplWithRl(tx, rx, wl)
    return FsplRlAbsorption(tx, rx, wl, args.atten)


def _stack(args, db) -> LayerStack:
    if args.file:
        try:
            with open(args.file, "rb") as fh:
                return load_stack(fh, db)
        except OSError as exc:
            raise DataError(f"cannot read stack file: {exc}") from None
    if not args.layers or args.freq is None:
        raise ValidationError("give --file, or --layers with --freq")
    layers = []
    items = args.layers.split(",")
    for i, item in enumerate(items):
        name, _, thick = item.partition(":")
        if thick.strip():
            t = float(thick) * 1e-3
        elif i == len(items) - 1:
            t = None
        else:
            raise ValidationError(f"layer {name!r}: thickness (mm) required except on the last layer")
        layers.append(Layer(get_tissue(db, name.strip()), t))
    return LayerStack(tuple(layers), args.freq)


# -- subcommands ---------------------------------------------------------------

def cmd_tissue(args) -> Table:
    spec = get_tissue(_database(args), args.name)
    if args.points < 1:
        raise ValidationError("--points must be >= 1")
    if args.points == 1 and args.f_start != args.f_stop:
        raise ValidationError("--points 1 needs --from == --to")
    spec.check_frequency([args.f_start, args.f_stop])
    freqs = np.geomspace(args.f_start, args.f_stop, args.points)
    eps = np.atleast_1d(cole_cole(spec, freqs))
    k = 2 * np.pi * freqs / 299792458.0 * np.sqrt(eps)
    w = 2 * np.pi * freqs
    from .constants import EPS0
    sigma = -w * EPS0 * eps.imag
    att = -k.imag
    rows = [
        [f, e.real, e.imag, s, -e.imag / e.real, (1 / a if a > 0 else math.inf), 2 * np.pi / kk.real]
        for f, e, s, a, kk in zip(freqs, eps, sigma, att, k)
    ]
    cols = ["freq_hz", "eps_real", "eps_imag", "sigma_eff", "loss_tan", "pen_depth_m", "wavelength_m"]
    return Table(cols, rows, {"tissue": spec.tissue_name})


def cmd_stack(args) -> Table:
    db = _database(args)
    stack = _stack(args, db)
    sol = solve_stack(stack, args.points)
    meta = {
        "frequency_hz": stack.frequency,
        "input_reflection_re": sol.input_reflection.real,
        "input_reflection_im": sol.input_reflection.imag,
        "input_reflection_mag": abs(sol.input_reflection),
        "transmittance": sol.transmittance,
        "energy_residual": sol.energy_residual,
    }
    if args.profile:
        prof = sol.field_profile
        rows = [[z, int(i), sol.labels[int(i)], abs(e)] for z, i, e in zip(prof.z, prof.layer_index, prof.e_field)]
        return Table(["z_m", "layer", "tissue", "e_rel"], rows, meta)
    rows = []
    for i, layer in enumerate(stack.layers):
        s = sol.samples[i]
        iface = sol.per_interface[i - 1] if i > 0 else None
        rows.append([
            i, layer.label,
            None if layer.thickness is None else layer.thickness * 1e3,
            s.eps_real, s.conductivity_effective,
            None if iface is None else iface.gamma.real,
            None if iface is None else iface.gamma.imag,
            None if iface is None else iface.power_transmission_factor,
            sol.layer_attenuation_db[i],
            standing_wave_ratio(sol, i),
            sol.absorbed_flux[i] / sol.incident_flux,
        ])
    cols = ["layer", "tissue", "thickness_mm", "eps_real", "sigma_eff", "gamma_re", "gamma_im",
            "p_tau", "attenuation_db", "swr", "absorbed_fraction"]
    return Table(cols, rows, meta)


def cmd_sar(args) -> Table:
    limit = ExposureLimit(args.limit, args.averaging_mass, args.authority)
    if args.sigma is not None or args.efield is not None:
        if None in (args.sigma, args.efield, args.rho):
            raise ValidationError("point SAR needs --sigma, --efield and --rho")
        sar = compute_sar(args.sigma, args.efield, args.rho)
        v = check_exposure(sar, limit)
        return Table(["sar_w_per_kg", "compliant", "margin_db", "limit_w_per_kg", "averaging_mass_g"],
                     [[sar, v.compliant, v.margin_db, limit.limit_w_per_kg, limit.averaging_mass_g]])
    db = _database(args)
    stack = _stack(args, db)
    sol = solve_stack(stack, args.points)
    prof = sar_profile(sol, stack, args.power_density)
    v = check_exposure(prof.peak, limit)
    rows = [[z, int(i), sol.labels[int(i)], s] for z, i, s in zip(prof.z, prof.layer_index, prof.sar)]
    meta = {"incident_power_density_w_m2": args.power_density, "peak_sar_w_per_kg": prof.peak,
            "compliant": v.compliant, "margin_db": v.margin_db}
    return Table(["z_m", "layer", "tissue", "sar_w_per_kg"], rows, meta)


def cmd_pathloss(args) -> Table:
    model = build_model(args)
    meta = {"model": type(model).__name__}
    if isinstance(model, STATISTICAL_TYPES):
        if args.dist is not None:
            raise ValidationError("statistical models take --depth (mm), not --dist")
        depths = parse_sweep(args.depth or "10:100:10")
        mean = np.atleast_1d(mean_path_loss_db(model, depths))
        cols, rows = ["depth_mm", "mean_pl_db"], [[d, m] for d, m in zip(depths, mean)]
        if model.label:
            meta["preset"] = model.label
        if args.samples:
            seed = _seed(args)
            meta["seed"] = seed
            rng = np.random.default_rng(seed)
            draws = np.stack([sample_path_loss_db(model, depths, rng) for _ in range(args.samples)], axis=1)
            if args.summary:
                q = np.quantile(draws, [0.05, 0.5, 0.95], axis=1)
                cols += ["p05_db", "p50_db", "p95_db"]
                rows = [r + list(q[:, j]) for j, r in enumerate(rows)]
            else:
                cols += [f"sample_{k + 1}_db" for k in range(args.samples)]
                rows = [r + list(draws[j]) for j, r in enumerate(rows)]
        return Table(cols, rows, meta)
    if args.depth is not None:
        raise ValidationError("analytical models take --dist (m), not --depth")
    dists = parse_sweep(args.dist or "1")
    rows = [[d, path_loss_db(model, d, args.tx_power)] for d in dists]
    return Table(["dist_m", "mean_pl_db"], rows, meta)


def cmd_channel(args) -> Table:
    seed = _seed(args)
    if args.mean_pl is None:
        if not args.preset:
            raise ValidationError("give --mean-pl, or --preset with --depth")
        model = parse_preset(args.preset).model()
        mean_pl = float(mean_path_loss_db(model, args.depth))
        sigma = model.sigma_db if args.sigma is None else args.sigma
    else:
        mean_pl = args.mean_pl
        sigma = 0.0 if args.sigma is None else args.sigma
    shape = PdpShape(args.first_tap, args.decay_depth, args.time_constant, args.max_delay, args.spacing)
    real = realize_channel(mean_pl, sigma, shape, seed, tap_jitter_db=args.jitter,
                           renormalize=not args.no_renormalize)
    meta = {"seed": seed, "mean_pl_db": mean_pl, "sigma_db": sigma,
            "shadowing_db": real.shadowing_db, "total_path_loss_db": real.total_path_loss_db}
    body = real.to_dict()
    return Table(["delay_ns", "gain_db"], [[t.delay_ns, t.gain_db] for t in real.taps], meta, body=body)


def cmd_linkbudget(args) -> Table:
    if args.scenario:
        try:
            with open(args.scenario, encoding="utf-8") as fh:
                scenario = json.load(fh)
        except OSError as exc:
            raise DataError(f"cannot read scenario: {exc}") from None
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid scenario JSON: {exc}") from None
        report = link_budget_from_scenario(scenario)
    else:
        if args.tx_power_dbm is None or args.sensitivity is None:
            raise ValidationError("give --scenario, or --tx-power-dbm and --sensitivity")
        model = build_model(args)
        band = get_band(args.band) if args.band else None
        report = link_budget(args.tx_power_dbm, model, args.sensitivity,
                             distance_m=args.dist, depth_mm=args.depth,
                             tx_gain_db=args.tx_gain_db, rx_gain_db=args.rx_gain_db,
                             band=band, bandwidth_hz=args.bandwidth)
    d = report_to_dict(report)
    compliance = d.pop("compliance")
    cols = list(d)
    return Table(cols, [[d[c] for c in cols]], {"compliance": compliance})


def _band_row(b):
    lim = b.eirp_limit
    return [b.band_id, b.method, b.label, b.f_low, b.f_high, b.channel_bw,
            None if lim is None else lim.value, None if lim is None else lim.unit,
            None if lim is None else lim.as_printed_flag]


BAND_COLUMNS = ["band_id", "method", "label", "f_low_hz", "f_high_hz", "channel_bw_hz",
                "eirp_limit", "eirp_unit", "as_printed"]


def cmd_bands(args) -> Table:
    if args.check_eirp is not None:
        if not args.band:
            raise ValidationError("--check-eirp needs --band")
        band = get_band(args.band)
        v = check_eirp(args.check_eirp, band, args.bandwidth)
        return Table(["band_id", "status", "measured", "margin_db", "warning"],
                     [[band.band_id, v.status, v.measured, v.margin_db, v.warning]])
    bands = classify_frequency(args.classify) if args.classify is not None else band_catalog()
    meta = {} if args.classify is None else {"classify_hz": args.classify}
    return Table(BAND_COLUMNS, [_band_row(b) for b in bands], meta)


def cmd_validate(args) -> Table:
    if args.measurements in BUILTIN_MEASUREMENTS:
        ms = builtin_measurements()
    else:
        try:
            with open(args.measurements, "rb") as fh:
                ms = load_measurements(fh)
        except OSError as exc:
            raise DataError(f"cannot read measurements: {exc}") from None
    if not args.preset and args.pl0 is None:
        args.preset = "region:overall"
    model = build_model(args)
    if not isinstance(model, STATISTICAL_TYPES):
        raise ValidationError("validate needs a statistical model")
    rep = validate_against_measurements(model, ms)
    rows = [[r.label, r.depth_mm, r.measured_db, r.predicted_db, r.residual_db, r.error] for r in rep.rows]
    meta = {"model": model.label or type(model).__name__,
            "mean_residual_db": rep.mean_residual_db,
            "mean_abs_residual_db": rep.mean_abs_residual_db,
            "max_abs_residual_db": rep.max_abs_residual_db}
    return Table(["label", "depth_mm", "measured_db", "predicted_db", "residual_db", "error"], rows, meta)


def dataset_dump() -> dict:
    def params(table):
        return [{"label": k, "pl0_db": v[0], "slope": v[1], "sigma_db": v[2]} for k, v in table.items()]

    return {
        "bands": catalog_records(),
        "region_parameters": params(datasets.REGION_PARAMETERS),
        "side_parameters": params(datasets.SIDE_PARAMETERS),
        "reference_depth_mm": datasets.REFERENCE_DEPTH_MM,
        "cadaver_measurements": [
            {"label": l, "depth_mm": d, "pl_db": p} for l, d, p in datasets.CADAVER_MEASUREMENTS
        ],
        "angular_statistics": {k: list(v) for k, v in datasets.ANGULAR_STATISTICS.items()},
        "max_excess_delay_ns": datasets.MAX_EXCESS_DELAY_NS,
    }


def cmd_dump_datasets(args) -> Table:
    args.format = "json"
    return Table([], [], body=dataset_dump())


# -- parser -----------------------------------------------------------------------

def _global_options(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--format", choices=["csv", "json"],
                        default=argparse.SUPPRESS if suppress else "csv")
    parser.add_argument("--output", metavar="PATH", default=default)
    parser.add_argument("--tissue-db", metavar="PATH", default=default,
                        help="tissue database (default: $VIVOCHAN_TISSUE_DB or bundled)")
    parser.add_argument("--seed", type=int, default=default)
    parser.add_argument("--csv-digits", type=int,
                        default=argparse.SUPPRESS if suppress else CSV_DIGITS,
                        help="significant digits in CSV output")


def _stack_args(p):
    p.add_argument("--file", help="stack JSON file")
    p.add_argument("--layers", help="e.g. skin_dry:2,fat:5,muscle:30,stomach (mm; last may omit)")
    p.add_argument("--freq", type=float, help="Hz")
    p.add_argument("--points", type=int, default=DEFAULT_POINTS_PER_LAYER, help="samples per layer")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vivochan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        _global_options(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("tissue", cmd_tissue, "Cole-Cole dielectric sweep of one tissue")
    p.add_argument("--name", required=True)
    p.add_argument("--from", dest="f_start", type=float, required=True, help="Hz")
    p.add_argument("--to", dest="f_stop", type=float, required=True, help="Hz")
    p.add_argument("--points", type=int, default=50)

    p = add("stack", cmd_stack, "plane-wave solution of a layered tissue stack")
    _stack_args(p)
    p.add_argument("--profile", action="store_true", help="emit the sampled |E| profile")

    p = add("sar", cmd_sar, "point SAR or SAR profile through a stack")
    _stack_args(p)
    p.add_argument("--sigma", type=float, help="S/m (point mode)")
    p.add_argument("--efield", type=float, help="V/m rms (point mode)")
    p.add_argument("--rho", type=float, help="kg/m^3 (point mode)")
    p.add_argument("--power-density", type=float, default=1.0, help="incident W/m^2")
    p.add_argument("--limit", type=float, default=1.6, help="W/kg")
    p.add_argument("--averaging-mass", type=float, default=1.0, help="g")
    p.add_argument("--authority", default="FCC")

    p = add("pathloss", cmd_pathloss, "path loss versus depth or distance")
    _add_model_args(p)
    p.add_argument("--depth", help="mm, start:stop:count or value")
    p.add_argument("--dist", help="m, start:stop:count or value")
    p.add_argument("--tx-power", type=float, default=1.0, help="W (PMBA models)")
    p.add_argument("--samples", type=int, default=0, help="shadowed draws per depth")
    p.add_argument("--summary", action="store_true", help="quantiles instead of raw draws")

    p = add("channel", cmd_channel, "one stochastic channel realization")
    p.add_argument("--mean-pl", type=float, help="mean path loss, dB")
    p.add_argument("--sigma", type=float, help="shadowing std, dB")
    p.add_argument("--preset", help="derive mean/sigma from a fitted preset at --depth")
    p.add_argument("--depth", type=float, default=50.0, help="mm, with --preset")
    p.add_argument("--jitter", type=float, default=1.0, help="per-tap std, dB")
    p.add_argument("--decay-depth", type=float, default=30.0, help="dB")
    p.add_argument("--time-constant", type=float, default=3.0, help="ns")
    p.add_argument("--spacing", type=float, default=1.0, help="ns")
    p.add_argument("--max-delay", type=float, default=datasets.MAX_EXCESS_DELAY_NS, help="ns")
    p.add_argument("--first-tap", type=float, default=0.0, help="dB")
    p.add_argument("--no-renormalize", action="store_true")

    p = add("linkbudget", cmd_linkbudget, "end-to-end link budget")
    p.add_argument("--scenario", help="scenario JSON file")
    _add_model_args(p)
    p.add_argument("--tx-power-dbm", type=float)
    p.add_argument("--sensitivity", type=float, help="dBm")
    p.add_argument("--depth", type=float, help="mm (statistical models)")
    p.add_argument("--dist", type=float, help="m (analytical models)")
    p.add_argument("--tx-gain-db", type=float, default=0.0)
    p.add_argument("--rx-gain-db", type=float, default=0.0)
    p.add_argument("--band", help="band id for the EIRP check")
    p.add_argument("--bandwidth", type=float, help="occupied bandwidth, Hz")

    p = add("bands", cmd_bands, "IEEE 802.15.6 band catalog")
    p.add_argument("--classify", type=float, help="list bands containing this frequency (Hz)")
    p.add_argument("--check-eirp", type=float, help="EIRP in dBm to check against --band")
    p.add_argument("--band")
    p.add_argument("--bandwidth", type=float, help="Hz")

    p = add("validate", cmd_validate, "residuals of a model against measurements")
    _add_model_args(p)
    p.add_argument("--measurements", default="builtin:cadaver",
                   help="builtin:cadaver (alias builtin:table7.5) or a label,depth_mm,pl_db CSV")

    add("dump-datasets", cmd_dump_datasets, "embedded datasets as JSON")
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tissue_db is None:
        args.tissue_db = os.environ.get("VIVOCHAN_TISSUE_DB")
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = lambda message, *_a, **_k: print(f"warning: {message}", file=sys.stderr)
        return _run(args, argv)


def _run(args, argv) -> int:
    try:
        table = args.func(args)
        base = {"tool_version": __version__, "command_line": "vivochan " + shlex.join(argv)}
        if args.seed is not None:
            base["seed"] = args.seed
        text = render(table, args.format, base, args.csv_digits)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
