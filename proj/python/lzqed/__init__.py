"""Landau-Zener sweeps in a modulated qubit-cavity system."""

from ._core import (
    ConfigError,
    LabelAmbiguity,
    OutOfRegime,
    TruncationError,
    Label,
    SystemParams,
    Trajectory,
    bloch_siegert_energies,
    build_effective,
    derive,
    evolve_bare,
    exact_energies,
    jc_energies,
    lz_probability,
    mandel_q_from_distribution,
    resolve_config,
    resonance_eta,
    run_config,
)

__all__ = [
    "ConfigError",
    "LabelAmbiguity",
    "OutOfRegime",
    "TruncationError",
    "Label",
    "SystemParams",
    "Trajectory",
    "bloch_siegert_energies",
    "build_effective",
    "derive",
    "evolve_bare",
    "exact_energies",
    "jc_energies",
    "lz_probability",
    "mandel_q_from_distribution",
    "resolve_config",
    "resonance_eta",
    "run_config",
]
