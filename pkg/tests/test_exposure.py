import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.constants import epsilon_0
from scipy.signal import argrelmax

from vivochan import (
    ExposureLimit,
    FCC_1G,
    Layer,
    LayerStack,
    SarQuery,
    check_exposure,
    compute_sar,
    get_tissue,
    sar_profile,
    simple_stack,
    solve_stack,
)
from vivochan.constants import C0, ETA0
from vivochan.dielectrics import DielectricSample
from vivochan.errors import ConfigurationError, ValidationError


def test_point_sar_exact():
    assert compute_sar(0.5, 10, 1000) == 0.05
    assert compute_sar(SarQuery(0.5, 10, 1000)) == 0.05


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 10), st.floats(0, 1e3), st.floats(500, 2500), st.floats(0.1, 10))
def test_point_sar_scales(sigma, e, rho, k):
    base = compute_sar(sigma, e, rho)
    assert compute_sar(sigma * k, e, rho) == pytest.approx(base * k, rel=1e-12, abs=1e-300)
    assert compute_sar(sigma, e * k, rho) == pytest.approx(base * k * k, rel=1e-12, abs=1e-300)


def test_fcc_boundary_is_inclusive():
    assert check_exposure(1.6).compliant
    assert check_exposure(1.6).margin_db == 0.0
    assert not check_exposure(math.nextafter(1.6, 2)).compliant
    assert check_exposure(0.0).margin_db == math.inf
    assert check_exposure(0.16).margin_db == pytest.approx(10.0)
    assert FCC_1G.averaging_mass_g == 1.0


def test_invalid_inputs():
    with pytest.raises(ValidationError):
        compute_sar(-1, 1, 1000)
    with pytest.raises(ValidationError):
        compute_sar(1, 1, 0)
    with pytest.raises(ValidationError):
        ExposureLimit(0, 1, "x")


def test_lossless_stack_has_zero_sar():
    stack = simple_stack(1e9, [(1.0, 0.05), (4.0, 0.02), (9.0, None)])
    prof = sar_profile(solve_stack(stack), stack, 10.0)
    assert np.all(prof.sar == 0)


def _slab_stack(eps, f, thickness=0.2, rho=1000.0):
    return LayerStack((
        Layer(DielectricSample(f, 1.0), 0.05),
        Layer(DielectricSample(f, eps), thickness, density=rho),
        Layer(DielectricSample(f, 1.0), None),
    ), f)


def test_standing_wave_peaks_are_half_a_wavelength_apart():
    f, eps = 2.45e9, complex(40.0, -0.5)
    stack = _slab_stack(eps, f)
    sol = solve_stack(stack, points_per_layer=20001)
    prof = sar_profile(sol, stack, 1.0)
    m = prof.layer_index == 1
    z, sar = prof.z[m], prof.sar[m]
    peaks = z[argrelmax(sar)[0]]
    spacing = np.mean(np.diff(peaks))
    # independent wavelength from the complex refractive index
    n = np.sqrt(eps)
    assert spacing == pytest.approx(C0 / (f * n.real) / 2, rel=1e-3)


def test_sar_is_linear_in_incident_power(db):
    stack = LayerStack((Layer(get_tissue(db, "fat"), 0.01), Layer(get_tissue(db, "muscle"), 0.03),
                        Layer(get_tissue(db, "bone_cortical"), None)), 915e6)
    sol = solve_stack(stack)
    one = sar_profile(sol, stack, 1.0)
    ten = sar_profile(sol, stack, 10.0)
    np.testing.assert_allclose(ten.sar, 10 * one.sar, rtol=1e-12)


def test_single_interface_sar_matches_closed_form():
    # field just inside a lossy half-space is t = 2 eta2 / (eta1 + eta2) times the incident field
    f, eps, rho, s = 1e9, complex(50, -20), 1050.0, 5.0
    stack = LayerStack((Layer(DielectricSample(f, 1.0), 0.1),
                        Layer(DielectricSample(f, eps), None, density=rho)), f)
    prof = sar_profile(solve_stack(stack), stack, s)
    eta2 = ETA0 / np.sqrt(eps)
    t = 2 * eta2 / (ETA0 + eta2)
    e_rms = math.sqrt(s * ETA0)
    sigma = 2 * math.pi * f * epsilon_0 * 20
    first = np.flatnonzero(prof.layer_index == 1)[0]
    assert prof.sar[first] == pytest.approx(sigma * abs(t * e_rms) ** 2 / rho, rel=1e-9)


def test_integrated_sar_matches_absorbed_power(db):
    stack = LayerStack((Layer(get_tissue(db, "skin_dry"), 0.01), Layer(get_tissue(db, "fat"), 0.005),
                        Layer(get_tissue(db, "muscle"), 0.02), Layer(get_tissue(db, "stomach"), None)), 403e6)
    sol = solve_stack(stack, points_per_layer=400)
    s_inc = 2.0
    prof = sar_profile(sol, stack, s_inc)
    for i in (1, 2):
        want = sol.absorbed_flux[i] / sol.incident_flux * s_inc
        assert prof.layer_absorbed_power(i) == pytest.approx(want, rel=0.02)


def test_missing_density_names_tissue():
    f = 1e9
    stack = LayerStack((Layer(DielectricSample(f, 1.0), 0.1),
                        Layer(DielectricSample(f, complex(50, -20)), None, name="goo")), f)
    with pytest.raises(ConfigurationError, match="goo"):
        sar_profile(solve_stack(stack), stack, 1.0)
