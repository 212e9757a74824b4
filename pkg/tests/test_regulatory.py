import json
import math
import warnings
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from vivochan import (
    AntennaPort,
    Fspl,
    band_catalog,
    builtin_parameters,
    check_eirp,
    classify_frequency,
    get_band,
    link_budget,
    link_budget_from_scenario,
)
from vivochan.errors import DomainError, ParseError, UnknownLabelError, ValidationError
from vivochan.regulatory import catalog_json, dbm_to_watt, report_to_dict, watt_to_dbm

GOLDEN = Path(__file__).parent / "golden" / "band_catalog.json"


def test_catalog_matches_golden_transcription():
    assert catalog_json() == GOLDEN.read_text(encoding="utf-8")
    assert json.loads(catalog_json()) == json.loads(GOLDEN.read_text(encoding="utf-8"))


def test_catalog_shape():
    bands = band_catalog()
    assert len(bands) == 11
    assert [b.method for b in bands].count("NarrowBand") == 7
    assert all(b.channel_bw == 499e6 and b.eirp_limit.value == -41.3 for b in bands if b.method == "UWB")
    assert max(b.channel_bw for b in bands if b.method == "NarrowBand") == 1e6


def test_classify_uses_closed_intervals():
    assert [b.band_id for b in classify_frequency(915e6)] == ["nb-902"]
    assert [b.band_id for b in classify_frequency(402e6)] == ["nb-402"]
    assert [b.band_id for b in classify_frequency(405e6)] == ["nb-402"]
    assert [b.band_id for b in classify_frequency(2.4e9)] == ["nb-2360", "nb-2400"]
    assert classify_frequency(1e9) == []
    assert [b.band_id for b in classify_frequency(16e6)] == ["hbc-16"]
    with pytest.raises(DomainError):
        classify_frequency(0)


def test_uwb_density_check():
    band = get_band("uwb-high")
    v = check_eirp(-10.0, band, 499e6)
    assert v.status == "exceeds"
    assert v.margin_db == pytest.approx(-41.3 - (-10 - 10 * math.log10(499)), abs=1e-12)
    ok = check_eirp(-41.3 + 10 * math.log10(499), band, 499e6)
    assert ok.status == "compliant" and ok.margin_db == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValidationError):
        check_eirp(-10, band)


def test_as_printed_limit_warns():
    with pytest.warns(UserWarning, match="as printed"):
        v = check_eirp(50.0, get_band("nb-402"))
    assert v.status == "exceeds"
    assert v.margin_db == pytest.approx(10 * math.log10(25) + 30 - 50)
    assert v.warning


def test_unregulated_band():
    assert check_eirp(100.0, get_band("nb-902")).status == "not-regulated"
    with pytest.raises(UnknownLabelError, match="nb-902"):
        get_band("wifi")


@settings(max_examples=100, deadline=None)
@given(st.floats(-80, 60))
def test_dbm_watt_round_trip(p):
    assert watt_to_dbm(dbm_to_watt(p)) == pytest.approx(p, abs=1e-9)


def test_statistical_link_budget():
    model = builtin_parameters("region", "overall").model()
    r = link_budget(0.0, model, -90.0, depth_mm=100)
    assert r.path_loss_db == pytest.approx(46.36, abs=1e-9)
    assert r.link_margin_db == pytest.approx(43.64, abs=1e-9)
    assert r.feasible and not r.gains_model_internal
    assert link_budget(0.0, model, -90.0, distance_m=0.1).link_margin_db == pytest.approx(43.64)


def test_analytical_link_budget_carries_gains_internally():
    model = Fspl(AntennaPort(2.0), AntennaPort(1.0), 0.3276)
    r = link_budget(10.0, model, -60.0, distance_m=1.0)
    assert r.gains_model_internal
    assert r.eirp_dbm == pytest.approx(10 + 10 * math.log10(2))
    assert r.rx_power_dbm == pytest.approx(10 - r.path_loss_db)


def test_link_budget_compliance_and_errors():
    model = builtin_parameters("side", "posterior").model()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = link_budget(-16.0, model, -95.0, depth_mm=60, band=get_band("nb-402"), sar=0.4)
    kinds = [c[0] for c in r.compliance]
    assert kinds == ["eirp", "sar"]
    assert report_to_dict(r)["compliance"][1]["status"] == "compliant"
    with pytest.raises(ValidationError):
        link_budget(0.0, model, -90.0)
    with pytest.raises(DomainError, match="StatisticalA"):
        link_budget(0.0, model, -90.0, depth_mm=1)


def test_scenario_evaluation():
    scenario = {"tx_power_dbm": 0, "sensitivity_dbm": -90, "distance_mm": 100,
                "model": {"variant": "statistical_a", "preset": "region:overall"}}
    assert link_budget_from_scenario(scenario).link_margin_db == pytest.approx(43.64)
    del scenario["sensitivity_dbm"]
    with pytest.raises(ParseError, match="sensitivity_dbm"):
        link_budget_from_scenario(scenario)
