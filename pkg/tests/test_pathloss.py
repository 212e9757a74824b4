import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from vivochan import (
    AntennaPort,
    Fspl,
    FsplRlAbsorption,
    FsplWithRl,
    PmbaFarField,
    PmbaNearField,
    StatisticalA,
    StatisticalB,
    builtin_measurements,
    builtin_parameters,
    mean_path_loss_db,
    model_from_dict,
    model_to_dict,
    path_loss_db,
    received_power,
    sample_path_loss_db,
    validate_against_measurements,
)
from vivochan.constants import C0
from vivochan.errors import DomainError, ParseError, UnknownLabelError, ValidationError
from vivochan.pathloss import CATALOGS, load_measurements, parse_preset

# independent transcription of the fitted parameter tables: (PL0, m, sigma)
REGIONS = {
    "Above heart": (24.75, 2.30, 3.73),
    "Heart": (22.70, 1.96, 2.38),
    "Stomach–kidneys": (22.56, 2.55, 1.79),
    "Intestine": (24.23, 2.31, 3.47),
    "Overall torso area": (23.56, 2.28, 3.38),
}
SIDES = {
    "Anterior": (23.83, 2.46, 3.51),
    "Posterior": (23.76, 2.21, 1.92),
    "Left lateral": (23.34, 2.28, 3.67),
    "Right lateral": (23.22, 2.27, 3.51),
    "Overall torso area": (23.56, 2.28, 3.38),
}


def overall():
    return builtin_parameters("region", "Overall torso area").model()


def test_overall_torso_mean_path_loss():
    m = overall()
    assert abs(mean_path_loss_db(m, 10) - 25.84) < 1e-9
    assert abs(mean_path_loss_db(m, 100) - 46.36) < 1e-9
    np.testing.assert_allclose(mean_path_loss_db(m, [10, 100]), [25.84, 46.36], atol=1e-9)


@pytest.mark.parametrize("catalog,table", [("region", REGIONS), ("side", SIDES)])
def test_fitted_tables_round_trip_exactly(catalog, table):
    assert set(CATALOGS[catalog]) == set(table)
    for label, (pl0, m, sigma) in table.items():
        p = builtin_parameters(catalog, label)
        assert (p.label, p.pl0_db, p.slope, p.sigma_db) == (label, pl0, m, sigma)


def test_preset_lookup_is_forgiving_but_strict_on_unknowns():
    assert parse_preset("region:heart").label == "Heart"
    assert parse_preset("region:stomach-kidneys").label == "Stomach–kidneys"
    assert parse_preset("side:left").label == "Left lateral"
    assert parse_preset("region:overall").label == "Overall torso area"
    with pytest.raises(UnknownLabelError):
        parse_preset("region:liver")
    with pytest.raises(UnknownLabelError):
        parse_preset("heart")


def test_statistical_b_log_distance():
    m = StatisticalB(30.0, 3.0, 10.0)
    assert mean_path_loss_db(m, 10.0) == 30.0
    assert mean_path_loss_db(m, 100.0) == pytest.approx(60.0, abs=1e-12)


def test_depth_below_reference_is_rejected():
    with pytest.raises(DomainError, match="reference depth"):
        mean_path_loss_db(overall(), 5.0)


def test_friis_at_915_mhz():
    lam = C0 / 915e6
    model = Fspl(AntennaPort(), AntennaPort(), lam)
    oracle = 20 * math.log10(4 * math.pi * 1.0 / lam)
    assert path_loss_db(model, 1.0) == pytest.approx(oracle, abs=1e-12)
    assert path_loss_db(model, 1.0) == pytest.approx(31.68, abs=0.01)


ports = st.tuples(st.floats(0.01, 100), st.floats(0.01, 100))


@settings(max_examples=1000, deadline=None)
@given(ports, st.floats(1e-3, 10), st.floats(1e-3, 100))
def test_family_nesting_is_exact(gains, wl, d):
    tx, rx = AntennaPort(gains[0]), AntennaPort(gains[1])
    base = received_power(Fspl(tx, rx, wl), 1.0, d)
    assert received_power(FsplWithRl(tx, rx, wl), 1.0, d) == base
    assert received_power(FsplRlAbsorption(tx, rx, wl, 0.0), 1.0, d) == base


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 0.99), st.floats(0, 0.99), st.floats(0, 50), st.floats(1e-3, 1))
def test_return_loss_and_absorption_terms(s11, s22, alpha, d):
    wl = 0.3
    plain = path_loss_db(Fspl(AntennaPort(), AntennaPort(), wl), d)
    rl = path_loss_db(FsplWithRl(AntennaPort(1, s11), AntennaPort(1, s22), wl), d)
    ab = path_loss_db(FsplRlAbsorption(AntennaPort(1, s11), AntennaPort(1, s22), wl, alpha), d)
    mismatch = -10 * math.log10((1 - s11 ** 2) * (1 - s22 ** 2))
    assert rl - plain == pytest.approx(mismatch, abs=1e-9)
    assert ab - rl == pytest.approx(20 * math.log10(math.e) * alpha * d, abs=1e-9)


def test_pmba_models():
    nf = PmbaNearField(0.5, 0.1, 0.05, 1e-3)
    want = 16 * 0.5 * 0.9 / (math.pi * 0.05 ** 2) * 1e-3
    assert received_power(nf, 1.0, 0.01) == pytest.approx(want, rel=1e-12)
    with pytest.raises(DomainError, match="near-field loss exceeds"):
        received_power(nf, 0.05, 0.01)
    ff = PmbaFarField(0.1, 0.2, 0.3, 2.0, 3.0)
    assert received_power(ff, 1.0, 2.0) == pytest.approx(0.7 * 0.09 / (4 * math.pi * 4) * 6, rel=1e-12)


def test_received_power_for_statistical_models_uses_mm():
    m = overall()
    assert received_power(m, 1.0, 0.1) == pytest.approx(10 ** (-4.636), rel=1e-12)


@pytest.mark.parametrize("label", list(REGIONS))
def test_shadowing_sampler_statistics(label):
    m = builtin_parameters("region", label).model()
    draws = sample_path_loss_db(m, 50.0, rng=np.random.default_rng(12345), size=100_000)
    mu = mean_path_loss_db(m, 50.0)
    assert abs(draws.mean() - mu) < 0.1
    assert abs(draws.std(ddof=1) / m.sigma_db - 1) < 0.02
    assert stats.kstest(draws, "norm", args=(mu, m.sigma_db)).pvalue > 0.01


def test_sampler_reproducible_and_zero_sigma():
    m = overall()
    a = sample_path_loss_db(m, [20, 40], rng=3)
    b = sample_path_loss_db(m, [20, 40], rng=3)
    np.testing.assert_array_equal(a, b)
    flat = StatisticalA(20, 2)
    assert sample_path_loss_db(flat, 30, rng=1) == mean_path_loss_db(flat, 30)


def test_validation_against_cadaver_set():
    rep = validate_against_measurements(overall(), builtin_measurements())
    assert rep.row("Above intestine").residual_db == pytest.approx(1.83, abs=0.01)
    assert rep.row("Above heart").residual_db > 10
    assert "Above heart" in [r.label for r in rep.flagged(10)]
    assert rep.n_used == 6


def test_validation_reports_out_of_domain_rows():
    rep = validate_against_measurements(overall(), [("shallow", 5.0, 20.0), ("ok", 20.0, 30.0)])
    assert rep.row("shallow").residual_db is None and rep.row("shallow").error
    assert rep.n_used == 1
    with pytest.raises(ValidationError):
        validate_against_measurements(overall(), [])


def test_measurement_csv_loader():
    ms = load_measurements("label,depth_mm,pl_db\na,20,30.5\nb,40,35\n")
    assert [(m.label, m.depth_mm, m.pl_db) for m in ms] == [("a", 20.0, 30.5), ("b", 40.0, 35.0)]
    with pytest.raises(ParseError):
        load_measurements("name,depth,pl\na,1,2\n")
    with pytest.raises(ParseError, match="record 3"):
        load_measurements("label,depth_mm,pl_db\na,20,30\nb,x,1\n")


@pytest.mark.parametrize("model", [
    Fspl(AntennaPort(2.0, 0.1), AntennaPort(1.5, 0.2), 0.33),
    FsplRlAbsorption(AntennaPort(), AntennaPort(), 0.1, 4.0),
    PmbaNearField(0.5, 0.1, 0.05, 1e-3),
    PmbaFarField(0.1, 0.2, 0.3, 2.0, 3.0),
    StatisticalA(23.56, 2.28, 10.0, 3.38),
    StatisticalB(30.0, 3.0, 10.0, 2.0),
])
def test_model_dict_round_trip(model):
    assert model_from_dict(model_to_dict(model)) == model


def test_model_dict_errors():
    with pytest.raises(ParseError):
        model_from_dict({"gain_tx": 1})
    with pytest.raises(UnknownLabelError):
        model_from_dict({"variant": "two_ray"})
    with pytest.raises(ParseError):
        model_from_dict({"variant": "fspl"})
    assert model_from_dict({"variant": "statistical_a", "preset": "region:heart"}).pl0_db == 22.70
