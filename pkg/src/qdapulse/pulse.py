"""Single-photon pulse envelopes.

All envelopes are stored in the frame rotating at the carrier omega_l and are
rescaled so that the amplitude-equation drive reads ``-u * sqrt(Gamma_a) * f(t)``
with ``int_0^inf |f|^2 dt = 1``. Mode density and dipole couplings therefore
never appear on their own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from scipy import integrate

NORM_TOL = 1e-6
EPS_ENV_REL = 1e-8


@dataclass(frozen=True)
class ExpPulse:
    """Exponentially decaying wavepacket emitted by a source of linewidth Delta."""

    linewidth: float
    omega_l: float

    def __post_init__(self):
        if not (self.linewidth > 0 and math.isfinite(self.linewidth)):
            raise ValueError("linewidth must be positive and finite")
        if not math.isfinite(self.omega_l):
            raise ValueError("omega_l must be finite")

    @classmethod
    def at_detuning(cls, frame, delta_l_minus: float, linewidth: float) -> "ExpPulse":
        """Pulse whose carrier sits ``delta_l_minus`` above the lower eigenfrequency."""
        return cls(linewidth=linewidth, omega_l=frame.omega_minus + delta_l_minus)


@dataclass(frozen=True)
class Envelope:
    """Rotating-frame source amplitude f(t) for t >= 0.

    ``support`` is the time after which |f| stays below ``eps``. ``derivative``
    (df/dt for t > 0) is only needed for the reactive work. ``kind`` and
    ``linewidth`` let the compiled integrator evaluate the exponential case
    natively instead of calling back into Python.
    """

    amplitude: Callable[[float], complex]
    support: float
    omega_l: float
    derivative: Optional[Callable[[float], complex]] = None
    eps: float = 0.0
    kind: str = "generic"
    linewidth: Optional[float] = None
    norm: float = field(default=float("nan"), compare=False)

    def __post_init__(self):
        if not (self.support > 0 and math.isfinite(self.support)):
            raise ValueError("support must be positive and finite")
        norm = _norm_numeric(self.amplitude, self.support)
        object.__setattr__(self, "norm", norm)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"envelope is not normalized: int |f|^2 dt = {norm:.9g}")

    def __call__(self, t: float) -> complex:
        return self.amplitude(t)


def _norm_numeric(f, support: float) -> float:
    head, _ = integrate.quad(lambda t: abs(f(t)) ** 2, 0.0, support,
                             limit=500, epsabs=1e-12, epsrel=1e-10)
    tail, _ = integrate.quad(lambda t: abs(f(t)) ** 2, support, math.inf,
                             limit=200, epsabs=1e-14)
    return head + tail


def exp_envelope(pulse: ExpPulse) -> Envelope:
    """f(t) = sqrt(Delta) exp(-Delta t / 2); the step at t = 0 is implicit."""
    d = pulse.linewidth
    amp0 = math.sqrt(d)
    eps = EPS_ENV_REL * amp0
    support = -2.0 * math.log(eps / amp0) / d

    def f(t):
        return amp0 * math.exp(-0.5 * d * t)

    def df(t):
        return -0.5 * d * amp0 * math.exp(-0.5 * d * t)

    return Envelope(amplitude=f, derivative=df, support=support, eps=eps,
                    omega_l=pulse.omega_l, kind="exp", linewidth=d)


def gaussian_envelope(omega_l: float, width: float, center: float) -> Envelope:
    """Gaussian intensity profile of rms duration ``width`` peaked at ``center``.

    Truncated to t >= 0 and renormalized there. There is no closed form for the
    energetics of this shape; it exists to exercise the oracle on a smooth pulse.
    """
    if width <= 0 or center < 0:
        raise ValueError("width must be positive and center non-negative")
    # int_0^inf exp(-(t-c)^2 / (2 w^2)) dt
    mass = width * math.sqrt(math.pi / 2.0) * (1.0 + math.erf(center / (math.sqrt(2.0) * width)))
    amp0 = 1.0 / math.sqrt(mass)
    eps = EPS_ENV_REL * amp0
    support = center + 2.0 * width * math.sqrt(-math.log(EPS_ENV_REL))

    def f(t):
        x = (t - center) / width
        return amp0 * math.exp(-0.25 * x * x)

    def df(t):
        x = (t - center) / width
        return -0.5 * x / width * amp0 * math.exp(-0.25 * x * x)

    return Envelope(amplitude=f, derivative=df, support=support, eps=eps,
                    omega_l=omega_l, kind="generic")


def zero_envelope(omega_l: float = 0.0, support: float = 1.0) -> Envelope:
    """No photon at all. Bypasses the normalization check; only useful as a
    control in tests of the integrator."""
    env = object.__new__(Envelope)
    for k, v in dict(amplitude=lambda t: 0.0, derivative=lambda t: 0.0,
                     support=support, omega_l=omega_l, eps=0.0, kind="generic",
                     linewidth=None, norm=0.0).items():
        object.__setattr__(env, k, v)
    return env


def source_amplitude(env: Envelope, t: float) -> complex:
    if t < 0:
        raise ValueError("source amplitude is defined for t >= 0 only")
    return env.amplitude(t)
