"""Single-photon driven energetics of a coupled two-site system.

Closed-form transfer probabilities and absorbed work for exponential pulses
(``analytic``), a numerical reference integrating the amplitude equations for
arbitrary envelopes (``oracle``), the adaptation relations tying the two
together (``adaptation``), and sweep/CLI plumbing.
"""
from .adaptation import (CascadeResult, QdaBreakdown, cascade, generalized_qda_rhs,
                         qda_breakdown, standard_qda_check, work_decomposition)
from .analytic import EnergeticsReport
from .model import DressedFrame, SiteSystem, diagonalize
from .pulse import Envelope, ExpPulse, exp_envelope, gaussian_envelope

__version__ = "0.1.0"

__all__ = [
    "SiteSystem", "DressedFrame", "diagonalize", "ExpPulse", "Envelope", "exp_envelope",
    "gaussian_envelope", "EnergeticsReport", "QdaBreakdown", "CascadeResult", "cascade",
    "generalized_qda_rhs", "qda_breakdown", "standard_qda_check", "work_decomposition",
]
