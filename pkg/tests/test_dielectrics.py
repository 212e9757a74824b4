import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vivochan import (
    ColeColePole,
    DielectricSample,
    TissueDielectricSpec,
    cole_cole,
    evaluate_permittivity,
    get_tissue,
    load_tissue_database,
    sweep,
    wavelength_in_tissue,
)
from vivochan.constants import C0, EPS0, NEPER_TO_DB
from vivochan.dielectrics import dump_csv
from vivochan.errors import FrequencyRangeError, ParseError, UnknownLabelError, ValidationError
from vivochan.layers import absorption_loss_db

# muscle, typed in from the published parameter table (not read from the package CSV)
MUSCLE = dict(eps_inf=4.0, d=(50.0, 7000.0, 1.2e6, 2.5e7),
              tau=(7.234e-12, 353.678e-9, 318.31e-6, 2.274e-3),
              a=(0.1, 0.1, 0.1, 0.0), sigma=0.2)


def mp_cole_cole(p, f):
    mpmath.mp.dps = 40
    w = 2 * mpmath.pi * mpmath.mpf(f)
    eps = mpmath.mpf(p["eps_inf"])
    for d, tau, a in zip(p["d"], p["tau"], p["a"]):
        eps += mpmath.mpf(d) / (1 + (1j * w * mpmath.mpf(tau)) ** (1 - mpmath.mpf(a)))
    eps += mpmath.mpf(p["sigma"]) / (1j * w * mpmath.mpf(EPS0))
    return complex(eps)


def spec_from(p, name="t"):
    return TissueDielectricSpec.from_arrays(name, p["eps_inf"], p["d"], p["tau"], p["a"], p["sigma"])


@pytest.mark.parametrize("f", [1e3, 1e6, 403e6, 915e6, 2.45e9, 10e9])
def test_muscle_matches_high_precision_oracle(db, f):
    got = complex(cole_cole(get_tissue(db, "muscle"), f))
    want = mp_cole_cole(MUSCLE, f)
    assert abs(got - want) / abs(want) < 1e-10


def test_muscle_915_against_published_values(db):
    # widely tabulated 915 MHz muscle values: eps_r 55.0, sigma 0.948 S/m
    s = evaluate_permittivity(get_tissue(db, "muscle"), 915e6)
    assert s.eps_real == pytest.approx(55.0, abs=0.01)
    assert s.conductivity_effective == pytest.approx(0.948, abs=0.001)


pole_st = st.tuples(
    st.floats(0.0, 1e4), st.floats(1e-13, 1e-3), st.floats(0.0, 0.9),
)
freq_st = st.floats(10.0, 20e9)


@settings(max_examples=100, deadline=None)
@given(st.floats(1.0, 100.0), st.floats(0.0, 1e4), st.floats(1e-13, 1e-3), st.floats(0.0, 5.0), freq_st)
def test_single_debye_pole_reduces_to_closed_form(eps_inf, d, tau, sigma, f):
    spec = TissueDielectricSpec.from_arrays("debye", eps_inf, [d, 0, 0, 0], [tau, 1, 1, 1], [0, 0, 0, 0], sigma)
    w = 2 * math.pi * f
    want = eps_inf + d * (1 - 1j * w * tau) / (1 + (w * tau) ** 2) - 1j * sigma / (w * EPS0)
    got = complex(cole_cole(spec, f))
    assert abs(got - want) <= 1e-12 * abs(want)


@settings(max_examples=200, deadline=None)
@given(st.floats(1.0, 100.0), st.lists(pole_st, min_size=4, max_size=4), st.floats(0.0, 5.0), freq_st)
def test_passive_medium_has_nonpositive_imaginary_part(eps_inf, poles, sigma, f):
    spec = TissueDielectricSpec(
        "r", eps_inf, [ColeColePole(*p) for p in poles], sigma
    )
    eps = complex(cole_cole(spec, f))
    assert eps.imag <= 0
    assert eps.real >= eps_inf - 1e-9 * eps_inf


def test_high_frequency_limit_is_eps_inf():
    spec = TissueDielectricSpec.from_arrays("hf", 4.0, [50, 1e3, 0, 0], [1e-6, 1e-4, 1, 1], [0.1, 0.0, 0, 0], 0.0)
    f = np.geomspace(1e6, 20e9, 30)
    dev = np.abs(cole_cole(spec, f) - 4.0)
    assert np.all(np.diff(dev) < 0)
    assert dev[-1] / 4.0 < 1e-3


def test_vectorised_sweep_matches_scalar(db):
    spec = get_tissue(db, "fat")
    f = np.geomspace(1e5, 1e10, 17)
    arr = cole_cole(spec, f)
    for fi, e in zip(f, arr):
        assert abs(e - complex(cole_cole(spec, fi))) <= 1e-14 * abs(e)
    assert [s.frequency for s in sweep(spec, f)] == list(f)


@pytest.mark.parametrize("tissue", ["muscle", "fat", "skin_dry", "blood", "bone_cortical"])
def test_absorption_over_one_penetration_depth(db, tissue):
    s = evaluate_permittivity(get_tissue(db, tissue), 2.45e9)
    assert absorption_loss_db(s, s.frequency, s.penetration_depth) == pytest.approx(8.6859, abs=1e-4)
    assert absorption_loss_db(s, s.frequency, s.penetration_depth) == pytest.approx(NEPER_TO_DB, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(2.0, 80.0), st.floats(1e-3, 5.0), st.floats(1e6, 1e10))
def test_penetration_depth_decreases_with_conductivity(eps_r, sigma, f):
    a = DielectricSample.from_conductivity(eps_r, sigma, f)
    b = DielectricSample.from_conductivity(eps_r, sigma * 1.5, f)
    assert b.penetration_depth < a.penetration_depth


def test_lossless_sample_has_infinite_penetration_and_plain_wavelength():
    s = DielectricSample(1e9, 9.0 + 0j)
    assert s.penetration_depth == math.inf
    assert s.wavelength_in_tissue == pytest.approx(C0 / 3e9, rel=1e-15)
    assert s.loss_tangent == 0


def test_wavelength_shortening_for_eps_35():
    ratio = (C0 / 2.4e9) / wavelength_in_tissue(35.0, 2.4e9)
    assert ratio == pytest.approx(5.916, abs=1e-3)


def test_out_of_range_frequency_names_tissue_and_bound(db):
    with pytest.raises(FrequencyRangeError) as ei:
        cole_cole(get_tissue(db, "muscle"), 5.0)
    assert "muscle" in str(ei.value) and "fmin" in str(ei.value)
    with pytest.raises(FrequencyRangeError, match="fmax"):
        cole_cole(get_tissue(db, "muscle"), 30e9)


def test_unknown_tissue_lists_valid_names(db):
    with pytest.raises(UnknownLabelError, match="muscle"):
        get_tissue(db, "mucsle")


HEADER = "tissue,eps_inf,d1,tau1,a1,d2,tau2,a2,d3,tau3,a3,d4,tau4,a4,sigma,fmin,fmax"
ROW_A = "a,4,50,7e-12,0.1,7000,3.5e-7,0.1,1.2e6,3.2e-4,0.1,2.5e7,2.3e-3,0,0.2,,"
ROW_B = "b,2.5,9,7.96e-12,0.2,35,15.9e-9,0.1,3.3e4,159e-6,0.05,1e7,15.9e-3,0.01,0.035,1e3,1e10"


def test_loader_two_tissues_csv():
    db = load_tissue_database(f"# comment\n{HEADER}\n{ROW_A}\n{ROW_B}\n")
    assert list(db) == ["a", "b"]
    assert db["b"].valid_range == (1e3, 1e10)
    assert db["a"].valid_range == (10.0, 20e9)


def test_loader_rejects_alpha_one_with_record_number():
    bad = ROW_A.replace(",0.1,7000", ",1.0,7000")
    with pytest.raises(ValidationError, match="record 3"):
        load_tissue_database(f"{HEADER}\n{ROW_B}\n{bad}\n")


def test_loader_empty_file_gives_empty_db():
    assert load_tissue_database("") == {}
    assert load_tissue_database(b"# only comments\n") == {}


def test_loader_json_equivalent_to_csv():
    csv_db = load_tissue_database(f"{HEADER}\n{ROW_B}\n")
    fields = HEADER.split(",")
    values = ROW_B.split(",")
    rec = {k: (v if k == "tissue" else float(v)) for k, v in zip(fields, values)}
    import json
    json_db = load_tissue_database(json.dumps([rec]))
    assert json_db == csv_db


def test_loader_rejects_duplicates_and_garbage():
    with pytest.raises(ValidationError, match="duplicate"):
        load_tissue_database(f"{HEADER}\n{ROW_A}\n{ROW_A}\n")
    with pytest.raises(ParseError, match="record 2"):
        load_tissue_database(f"{HEADER}\n{ROW_A.replace('50', 'fifty', 1)}\n")
    with pytest.raises(ParseError):
        load_tissue_database("[not json")


def test_dump_and_reload_round_trip(db):
    again = load_tissue_database(dump_csv(list(db.values())))
    assert again == db


def test_bundled_database_has_densities(db):
    assert len(db) >= 8
    assert all(s.density and 800 < s.density < 2000 for s in db.values())
