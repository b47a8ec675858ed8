"""Non-Hermitian SSH cavity arrays: spectra, PT phases and breaking thresholds."""

from .classify import (
    Counts,
    EigClass,
    PairingReport,
    Phase,
    Spectrum,
    classify_spectrum,
    count_zero_modes,
    pairing_structure,
)
from .eigen import EigenReport, NotConvergedError, eigenvalues, eigvals, validate_spectrum
from .model import (
    GainLossLayout,
    Hamiltonian,
    InvalidParameters,
    ModelParams,
    build_hamiltonian,
    pt_residual,
)
from .sweep import (
    CriticalCurve,
    Status,
    SweepTable,
    Threshold,
    Transition,
    critical_curve,
    first_transition,
    odd_chain_events,
    second_transition,
    sweep_kappa,
    sweep_phi,
)

__version__ = "0.1.0"

__all__ = [
    "Counts",
    "CriticalCurve",
    "EigClass",
    "EigenReport",
    "GainLossLayout",
    "Hamiltonian",
    "InvalidParameters",
    "ModelParams",
    "NotConvergedError",
    "PairingReport",
    "Phase",
    "Spectrum",
    "Status",
    "SweepTable",
    "Threshold",
    "Transition",
    "build_hamiltonian",
    "classify_spectrum",
    "count_zero_modes",
    "critical_curve",
    "eigenvalues",
    "eigvals",
    "first_transition",
    "odd_chain_events",
    "pairing_structure",
    "pt_residual",
    "second_transition",
    "sweep_kappa",
    "sweep_phi",
    "validate_spectrum",
]
