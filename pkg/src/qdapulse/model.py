"""Bare two-site parameters and the dressed (eigen) frame of the excited manifold.

Units: hbar = c = 1. Frequencies in rad/time, rates in 1/time. Nothing here
cares about the absolute time unit; the CLI expresses everything in units of
the bare rate of site a.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


class DegenerateSystemError(ValueError):
    """Raised for J = 0 with equal site frequencies (no preferred eigenbasis)."""


@dataclass(frozen=True)
class SiteSystem:
    omega_a: float
    omega_b: float
    coupling_j: float
    gamma_a: float
    gamma_b: float

    def __post_init__(self):
        for name in ("omega_a", "omega_b", "coupling_j", "gamma_a", "gamma_b"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma_a <= 0 or self.gamma_b <= 0:
            raise ValueError("decay rates must be strictly positive")
        if self.coupling_j == 0 and self.omega_a == self.omega_b:
            raise DegenerateSystemError(
                "J = 0 with omega_a == omega_b leaves the eigenbasis undefined")

    @property
    def delta_ab(self) -> float:
        return self.omega_a - self.omega_b

    def qda_regime(self, threshold: float = 0.1) -> bool:
        """True when |Ga - Gb| / (Ga + Gb) <= threshold, i.e. the cross rates
        coupling the two dressed branches are negligible."""
        return abs(self.gamma_a - self.gamma_b) / (self.gamma_a + self.gamma_b) <= threshold

    @classmethod
    def from_ratios(cls, j_ratio: float, gamma_b_ratio: float = 1.0,
                    delta_ab_ratio: float = 0.0, omega_bar: float = 0.0,
                    gamma_a: float = 1.0) -> "SiteSystem":
        """Build a system with every quantity given in units of ``gamma_a``."""
        half = 0.5 * delta_ab_ratio * gamma_a
        return cls(omega_a=omega_bar + half, omega_b=omega_bar - half,
                   coupling_j=j_ratio * gamma_a, gamma_a=gamma_a,
                   gamma_b=gamma_b_ratio * gamma_a)


@dataclass(frozen=True)
class DressedFrame:
    system: SiteSystem
    omega_bar: float
    delta_ab: float
    omega_gap: float
    omega_plus: float
    omega_minus: float
    u_plus: float
    u_minus: float
    v_plus: float
    v_minus: float
    gamma_a_plus: float
    gamma_a_minus: float
    gamma_b_plus: float
    gamma_b_minus: float
    gamma_pp: float
    gamma_mm: float
    gamma_cross: float

    @property
    def gamma_a(self) -> float:
        return self.system.gamma_a

    @property
    def gamma_b(self) -> float:
        return self.system.gamma_b

    def branch(self, sign: str):
        """(u, Gamma_b^(s), Gamma_ss) for branch ``'+'`` or ``'-'``."""
        if sign == "+":
            return self.u_plus, self.gamma_b_plus, self.gamma_pp
        if sign == "-":
            return self.u_minus, self.gamma_b_minus, self.gamma_mm
        raise ValueError(f"branch must be '+' or '-', got {sign!r}")


def diagonalize(system: SiteSystem) -> DressedFrame:
    """Eigenfrequencies, mixing amplitudes and dressed rates of the excited pair.

    The mixing amplitudes use the closed forms

        u_+^2 = (gap + delta_ab) / (2 gap),   u_-^2 = (gap - delta_ab) / (2 gap),

    which equal J^2 / (J^2 + (omega_pm - omega_a)^2) for J > 0 but stay finite
    at J = 0 and are insensitive to the sign of J (a gauge choice for e_b).
    """
    j = system.coupling_j
    delta = system.delta_ab
    if j == 0 and delta == 0:
        raise DegenerateSystemError("J = 0 and delta_ab = 0")
    gap = math.hypot(2.0 * j, delta)
    # gap -/+ delta without cancellation: (gap - |d|)(gap + |d|) = 4 J^2
    big = gap + abs(delta)
    small = 4.0 * j * j / big
    if delta >= 0:
        gp, gm = big, small
    else:
        gp, gm = small, big
    u_plus = math.sqrt(gp / (2.0 * gap))
    u_minus = math.sqrt(gm / (2.0 * gap))

    omega_bar = 0.5 * (system.omega_a + system.omega_b)
    ga, gb = system.gamma_a, system.gamma_b
    ga_p, ga_m = ga * u_plus ** 2, ga * u_minus ** 2
    gb_p, gb_m = gb * u_minus ** 2, gb * u_plus ** 2
    return DressedFrame(
        system=system,
        omega_bar=omega_bar,
        delta_ab=delta,
        omega_gap=gap,
        omega_plus=omega_bar + 0.5 * gap,
        omega_minus=omega_bar - 0.5 * gap,
        u_plus=u_plus,
        u_minus=u_minus,
        v_plus=u_minus,
        v_minus=-u_plus,
        gamma_a_plus=ga_p,
        gamma_a_minus=ga_m,
        gamma_b_plus=gb_p,
        gamma_b_minus=gb_m,
        gamma_pp=ga_p + gb_p,
        gamma_mm=ga_m + gb_m,
        gamma_cross=(ga - gb) * u_plus * u_minus,
    )


def laser_detunings(frame: DressedFrame, omega_l: float) -> tuple[float, float]:
    """Return ``(omega_l - omega_minus, omega_l - omega_plus)``."""
    dm = omega_l - frame.omega_minus
    return dm, dm - frame.omega_gap
