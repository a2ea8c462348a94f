"""States on free groups built from word length and sign switches."""

from ._backend import backend_name
from .errors import FreeStatesError
from .words import ReducedWord, WordStats, enumerate_sphere, format_word, parse_word, stats
from .algebra import AlgebraElement, L2Vector, HalfSpace, verify_obs_identities
from .states import (
    StateKind,
    StateSpec,
    StateMixture,
    chi_z,
    classify,
    evaluate,
    growth_series_brute,
    growth_series_closed_form,
    phi_a,
    psi_ab,
    sqrt_n_eigen,
    u1_length_state,
)
from .gram import GramMatrix, PsdCertificate, psd_check
from .boundary import AlphaParams, Cocycle, CylinderMeasure, boundary_state, measure_experiment

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "FreeStatesError",
    "ReducedWord",
    "WordStats",
    "enumerate_sphere",
    "format_word",
    "parse_word",
    "stats",
    "AlgebraElement",
    "L2Vector",
    "HalfSpace",
    "verify_obs_identities",
    "StateKind",
    "StateSpec",
    "StateMixture",
    "chi_z",
    "classify",
    "evaluate",
    "growth_series_brute",
    "growth_series_closed_form",
    "phi_a",
    "psi_ab",
    "sqrt_n_eigen",
    "u1_length_state",
    "GramMatrix",
    "PsdCertificate",
    "psd_check",
    "AlphaParams",
    "Cocycle",
    "CylinderMeasure",
    "boundary_state",
    "measure_experiment",
]
