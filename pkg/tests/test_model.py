import math

import pytest
from hypothesis import given, settings, strategies as st

from qdapulse.model import DegenerateSystemError, SiteSystem, diagonalize, laser_detunings

from conftest import make_frame

coupling = st.floats(0.01, 50.0)
site_detuning = st.floats(-50.0, 50.0)
rate = st.floats(0.05, 20.0)


@settings(max_examples=300, deadline=None)
@given(j=coupling, dab=site_detuning, ga=rate, gb=rate)
def test_frame_invariants(j, dab, ga, gb):
    f = diagonalize(SiteSystem(dab / 2, -dab / 2, j, ga, gb))
    assert f.u_plus ** 2 + f.u_minus ** 2 == pytest.approx(1.0, abs=1e-14)
    assert f.omega_gap == pytest.approx(math.sqrt(4 * j * j + dab * dab), rel=1e-14)
    assert f.omega_plus - f.omega_minus == pytest.approx(f.omega_gap, rel=1e-12, abs=1e-12)
    assert f.v_plus == f.u_minus and f.v_minus == -f.u_plus
    assert f.gamma_pp + f.gamma_mm == pytest.approx(ga + gb, rel=1e-13)
    assert f.gamma_a_plus + f.gamma_a_minus == pytest.approx(ga, rel=1e-13)
    assert f.gamma_b_plus + f.gamma_b_minus == pytest.approx(gb, rel=1e-13)
    assert f.gamma_cross == pytest.approx((ga - gb) * f.u_plus * f.u_minus, rel=1e-13, abs=1e-300)
    # mixing amplitude from the eigenvector form J^2 / (J^2 + (omega_+ - omega_a)^2)
    ref = j * j / (j * j + (f.omega_plus - dab / 2) ** 2)
    assert f.u_plus ** 2 == pytest.approx(ref, rel=1e-9, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(j=coupling, dab=site_detuning)
def test_sign_of_coupling_is_a_gauge(j, dab):
    a = diagonalize(SiteSystem(dab / 2, -dab / 2, j, 1.0, 1.0))
    b = diagonalize(SiteSystem(dab / 2, -dab / 2, -j, 1.0, 1.0))
    assert (a.u_plus, a.u_minus, a.gamma_pp) == (b.u_plus, b.u_minus, b.gamma_pp)


def test_symmetric_system_mixes_equally():
    f = make_frame(0.5)
    assert f.u_plus == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert f.gamma_pp == pytest.approx(1.0) and f.gamma_mm == pytest.approx(1.0)
    assert f.gamma_cross == 0.0
    assert f.omega_gap == pytest.approx(1.0)


def test_uncoupled_sites_stay_bare():
    f = diagonalize(SiteSystem(1.0, -1.0, 0.0, 1.0, 2.0))
    assert (f.u_plus, f.u_minus) == (1.0, 0.0)
    assert f.gamma_b_plus == 0.0 and f.gamma_a_minus == 0.0


def test_extreme_detuning_is_stable():
    f = diagonalize(SiteSystem(1e8, -1e8, 1e-3, 1.0, 1.0))
    # u_-^2 ~ J^2 / dab^2 = 2.5e-23, not lost to cancellation
    assert f.u_minus ** 2 == pytest.approx(2.5e-23, rel=1e-6)


def test_validation():
    with pytest.raises(DegenerateSystemError):
        SiteSystem(1.0, 1.0, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        SiteSystem(0.0, 0.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        SiteSystem(0.0, 0.0, float("nan"), 1.0, 1.0)


def test_qda_regime_threshold():
    assert SiteSystem(0, 0, 1, 1.0, 1.2).qda_regime()
    assert not SiteSystem(0, 0, 1, 1.0, 1.3).qda_regime()


def test_laser_detunings():
    f = make_frame(0.5, omega_bar=100.0)
    dm, dp = laser_detunings(f, f.omega_minus + 0.3)
    assert dm == pytest.approx(0.3) and dp == pytest.approx(0.3 - 1.0)
    assert f.branch("+")[2] == f.gamma_pp
    with pytest.raises(ValueError):
        f.branch("x")


def test_detuned_example():
    f = diagonalize(SiteSystem(2.0, -2.0, 3.0, 1.0, 1.0))
    assert f.omega_gap == pytest.approx(math.sqrt(52.0))
    assert f.u_plus == pytest.approx(0.8817, abs=1e-4)
    assert f.u_minus == pytest.approx(0.4719, abs=1e-4)


def test_strong_coupling_example():
    f = make_frame(5.0)
    assert f.omega_gap == pytest.approx(10.0)
    assert f.gamma_a_plus == pytest.approx(0.5) and f.gamma_pp == pytest.approx(1.0)


@settings(max_examples=200, deadline=None)
@given(j=coupling, dab=site_detuning)
def test_orthonormal_mixing(j, dab):
    f = diagonalize(SiteSystem(dab / 2, -dab / 2, j, 1.0, 1.0))
    assert f.u_plus * f.u_minus + f.v_plus * f.v_minus == pytest.approx(0.0, abs=1e-15)
    assert f.v_plus ** 2 + f.v_minus ** 2 == pytest.approx(1.0, abs=1e-14)


def test_mixing_approaches_equal_weights_monotonically():
    path = [diagonalize(SiteSystem(d / 2, -d / 2, 1.0, 1.0, 1.0)).u_plus
            for d in (4.0, 2.0, 1.0, 0.5, 0.1, 0.0)]
    assert all(b < a for a, b in zip(path, path[1:]))
    assert path[-1] == pytest.approx(1 / math.sqrt(2), abs=1e-15)


@pytest.mark.parametrize("offset,expected", [("minus", (0.0, -1.0)), ("plus", (1.0, 0.0)),
                                             ("bar", (0.5, -0.5))])
def test_laser_detuning_examples(offset, expected):
    f = make_frame(0.5, omega_bar=10.0)
    wl = {"minus": f.omega_minus, "plus": f.omega_plus, "bar": f.omega_bar}[offset]
    assert laser_detunings(f, wl) == pytest.approx(expected, abs=1e-12)
