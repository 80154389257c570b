import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import integrate

from qdapulse import analytic
from qdapulse.analytic import (EnergeticsReport, evaluate, lorentz, p_lambda_appendix,
                               p_total_direct, psi_amplitude, psi_rotating, rho_pm_appendix,
                               w_abs_appendix)
from qdapulse.pulse import ExpPulse

from conftest import make_frame, make_pulse

params = dict(
    j=st.floats(0.05, 20.0), dab=st.floats(-10.0, 10.0), gb=st.floats(0.8, 1.25),
    d=st.floats(1e-4, 5.0), dl=st.floats(-20.0, 20.0),
)


def _solve_ivp_reference(frame, pulse):
    """Independent reference: scipy LSODA/DOP853 on the amplitude equations with
    the time integrals appended as extra states."""
    dm = pulse.omega_l - frame.omega_minus
    dp = pulse.omega_l - frame.omega_plus
    d = pulse.linewidth
    sga = math.sqrt(frame.gamma_a)

    def rhs(t, y):
        p = y[0] + 1j * y[1]
        m = y[2] + 1j * y[3]
        f = math.sqrt(d) * math.exp(-0.5 * d * t)
        dpp = -(0.5 * frame.gamma_pp - 1j * dp) * p - frame.u_plus * sga * f
        dmm = -(0.5 * frame.gamma_mm - 1j * dm) * m - frame.u_minus * sga * f
        b = frame.v_plus * p + frame.v_minus * m
        return [dpp.real, dpp.imag, dmm.real, dmm.imag,
                abs(p) ** 2, abs(m) ** 2, (p.conjugate() * m).real, abs(b) ** 2]

    t_end = 60.0 / min(d, frame.gamma_pp, frame.gamma_mm)
    sol = integrate.solve_ivp(rhs, (0, t_end), np.zeros(8), method="DOP853",
                              rtol=1e-11, atol=1e-13)
    ipp, imm, cre, ib = sol.y[4:, -1]
    return {
        "p_lambda_plus": frame.gamma_b_plus * ipp,
        "p_lambda_minus": frame.gamma_b_minus * imm,
        "rho_pm": 2 * frame.u_plus * frame.u_minus * frame.gamma_b * cre,
        "p_total": frame.gamma_b * ib,
        "w_abs": frame.gamma_pp * ipp + frame.gamma_mm * imm,
    }


@pytest.mark.parametrize("j,dab,gb,d,dl", [
    (0.5, 0.0, 1.0, 1.0, 0.0),     # Gamma_ss = Delta on resonance
    (0.5, 0.0, 1.0, 0.3, 0.7),
    (2.0, 1.5, 0.9, 0.5, -0.4),
    (1.0, -3.0, 1.2, 2.0, 3.0),
    (5.0, 0.0, 1.0, 0.05, 10.0),
])
def test_closed_forms_match_independent_integration(j, dab, gb, d, dl):
    frame = make_frame(j, gb, dab)
    pulse = make_pulse(frame, dl, d)
    rep = evaluate(frame, pulse)
    ref = _solve_ivp_reference(frame, pulse)
    for k, v in ref.items():
        assert getattr(rep, k) == pytest.approx(v, rel=1e-7, abs=1e-11), k


def test_monochromatic_headline_values():
    frame = make_frame(0.5)
    r0 = evaluate(frame, make_pulse(frame, 0.0, 1e-10))
    assert (r0.p_total, r0.w_abs, r0.rho_pm) == pytest.approx((0.8, 2.4, 0.4), abs=1e-12)
    assert r0.w_coh == pytest.approx(0.8, abs=1e-12)
    r1 = evaluate(frame, make_pulse(frame, 0.5, 1e-10))
    assert (r1.p_total, r1.w_abs) == pytest.approx((1.0, 2.0), abs=1e-12)
    assert abs(r1.rho_pm) < 1e-12


def test_strong_coupling_resonance():
    # J = 5, on the lower resonance: off-resonant branch sits 10 linewidths away
    frame = make_frame(5.0)
    r = evaluate(frame, make_pulse(frame, 0.0, 1e-10))
    p_plus, p_minus = 0.25 / 100.25, 1.0
    rho = 0.5 * (2 + 0.5 / 100.25 - 100 / 100.25) / 101
    assert r.w_abs == pytest.approx(2.0 + 0.5 / 100.25, rel=1e-12)
    assert r.p_lambda_plus == pytest.approx(p_plus, rel=1e-12)
    assert r.p_lambda_minus == pytest.approx(p_minus, rel=1e-12)
    assert r.rho_pm == pytest.approx(rho, rel=1e-12)
    assert r.p_total == pytest.approx(p_plus + p_minus - rho, rel=1e-12)


def test_lorentz():
    assert lorentz(2.0, 0.0) == 1.0
    assert lorentz(2.0, 1.0) == pytest.approx(1 / (1 + 1j))


@settings(max_examples=300, deadline=None)
@given(**params)
def test_identities_hold(j, dab, gb, d, dl):
    frame = make_frame(j, gb, dab)
    r = evaluate(frame, make_pulse(frame, dl, d))
    scale = max(r.p_lambda_plus, r.p_lambda_minus, abs(r.rho_pm), 1e-300)
    assert abs(r.residual_sum) <= 1e-10 * scale
    assert abs(r.residual_qda) <= 1e-10 * max(r.w_abs, 1e-300)
    assert -1e-12 <= r.p_total <= 1 + 1e-12
    assert r.w_abs >= 0 and r.p_lambda_plus >= 0 and r.p_lambda_minus >= 0
    assert r.w_reac is None


@settings(max_examples=200, deadline=None)
@given(**params)
def test_reduced_forms_equal_published_forms(j, dab, gb, d, dl):
    frame = make_frame(j, gb, dab)
    pulse = make_pulse(frame, dl, d)
    # the published forms lose accuracy near Gamma_ss = Delta; stay clear of it
    assume(min(abs(frame.gamma_pp - d), abs(frame.gamma_mm - d)) > 0.05)
    assume(d > 1e-3)
    scale = max(analytic.p_lambda_closed(frame, pulse, "+"),
                analytic.p_lambda_closed(frame, pulse, "-"), 1e-12)
    assert w_abs_appendix(frame, pulse) == pytest.approx(
        analytic.w_abs_closed(frame, pulse), rel=1e-7, abs=1e-12)
    for b in "+-":
        assert abs(p_lambda_appendix(frame, pulse, b)
                   - analytic.p_lambda_closed(frame, pulse, b)) <= 1e-7 * scale + 1e-12
    assert abs(rho_pm_appendix(frame, pulse) - analytic.rho_pm_closed(frame, pulse)) <= (
        1e-7 * scale + 1e-12)


def test_published_forms_break_down_where_reduced_do_not():
    frame = make_frame(0.5)
    pulse = make_pulse(frame, 0.0, 1.0)  # Gamma_-- = Delta, on resonance
    good = analytic.w_abs_closed(frame, pulse)
    assert good == pytest.approx(_solve_ivp_reference(frame, pulse)["w_abs"], rel=1e-7)
    assert abs(w_abs_appendix(frame, pulse) - good) > 0.1
    assert math.isfinite(analytic.w_abs_closed(frame, pulse))


@settings(max_examples=100, deadline=None)
@given(j=st.floats(0.1, 5.0), dl=st.floats(-3.0, 13.0))
def test_monochromatic_limit_is_linear_in_linewidth(j, dl):
    frame = make_frame(j)
    for d in (1e-4, 1e-6):
        pulse = make_pulse(frame, dl, d)
        for closed, mono in ((analytic.w_abs_closed, analytic.w_abs_mono),
                             (analytic.rho_pm_closed, analytic.rho_pm_mono)):
            assert abs(closed(frame, pulse) - mono(frame, pulse)) <= 10 * d * max(
                1.0, abs(mono(frame, pulse)))


def test_mono_switch():
    frame = make_frame(0.5)
    tiny = make_pulse(frame, 0.2, 1e-12)
    assert analytic.w_abs_closed(frame, tiny) == analytic.w_abs_mono(frame, tiny)


@settings(max_examples=100, deadline=None)
@given(j=st.floats(0.1, 10.0), d=st.floats(1e-4, 3.0), dl=st.floats(-5.0, 25.0))
def test_mirror_symmetry(j, d, dl):
    frame = make_frame(j)
    a = evaluate(frame, make_pulse(frame, dl, d))
    b = evaluate(frame, make_pulse(frame, frame.omega_gap - dl, d))
    assert a.p_total == pytest.approx(b.p_total, rel=1e-10, abs=1e-15)
    assert a.w_abs == pytest.approx(b.w_abs, rel=1e-10, abs=1e-15)
    assert a.rho_pm == pytest.approx(b.rho_pm, rel=1e-9, abs=1e-15)


@pytest.mark.parametrize("branch", "+-")
@pytest.mark.parametrize("d", [1.0, 0.2, 1e-3])
def test_branch_probability_is_integral_of_profile(branch, d):
    frame = make_frame(0.7, 1.1, 0.4)
    pulse = make_pulse(frame, 0.3, d)
    _, gb_s, _ = frame.branch(branch)
    f = lambda t: abs(psi_rotating(frame, pulse, branch, t)) ** 2
    edges = [0.0, 5.0, 50.0, 60.0 / min(d, 1.0)]
    total = sum(integrate.quad(f, a, b, limit=400, epsabs=1e-14, epsrel=1e-11)[0]
                for a, b in zip(edges, edges[1:]))
    assert gb_s * total == pytest.approx(analytic.p_lambda_closed(frame, pulse, branch), rel=1e-7)


def test_profile_properties():
    frame = make_frame(0.5, omega_bar=3.0)
    pulse = make_pulse(frame, 0.5, 1.0)
    assert psi_rotating(frame, pulse, "+", 0.0) == 0
    # removable singularity at Gamma_ss = Delta on resonance is smooth
    p2 = make_pulse(frame, 0.0, 1.0)
    a = psi_rotating(frame, p2, "-", 2.0)
    b = psi_rotating(frame, make_pulse(frame, 1e-7, 1.0), "-", 2.0)
    assert a == pytest.approx(b, abs=1e-6)
    assert abs(psi_amplitude(frame, pulse, "+", 1.3)) == pytest.approx(
        abs(psi_rotating(frame, pulse, "+", 1.3)))
    with pytest.raises(ValueError):
        psi_rotating(frame, pulse, "+", -1.0)


def test_report_dict_keys():
    frame = make_frame(0.5)
    d = evaluate(frame, make_pulse(frame, 0.1, 0.1)).as_dict()
    assert set(d) == {f for f in EnergeticsReport.__dataclass_fields__}


def test_direct_probability_at_uncoupled_limit():
    frame = make_frame(1e-6, 1.0, 4.0)
    assert p_total_direct(frame, make_pulse(frame, 0.0, 0.5)) < 1e-10
