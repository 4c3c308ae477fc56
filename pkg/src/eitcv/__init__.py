"""Continuous-variable moments for light stored in atomic media via dark-state polaritons."""

from .atomic import BECMedium, CoherentMedium, FockMedium, SpinMoments, exact_bec_moments, spin_moments
from .cloning import CloneReport, clone, fidelity
from .gaussian import GaussianState, ModeMap, ValidationError, apply_map, compose, make_vacuum
from .qnd import PolaritonAngle, closed_form_coefficients, correlation_report, storage_map

__version__ = "0.1.0"

__all__ = [
    "BECMedium",
    "CloneReport",
    "CoherentMedium",
    "FockMedium",
    "GaussianState",
    "ModeMap",
    "PolaritonAngle",
    "SpinMoments",
    "ValidationError",
    "apply_map",
    "clone",
    "closed_form_coefficients",
    "compose",
    "correlation_report",
    "exact_bec_moments",
    "fidelity",
    "make_vacuum",
    "spin_moments",
    "storage_map",
]
