"""Shortcuts-to-adiabaticity lab for the driven two-level (Landau-Zener) system.

Design substitute add-on Hamiltonians (Hermitian or with gain/loss) that
cancel the nonadiabatic coupling of a swept two-level drive, propagate
the resulting dynamics, cross-check against closed-form eigen-frame
solutions, and reproduce the reference figure datasets as CSVs.
"""

from .designer import AddParams, Direction, SolvedAdd, solve_add
from .frame import Frame, FramePath, build_frame, cd_term, nonadiabatic_term
from .lz import AngleState, LZSchedule, angle, h0, h_cd
from .propagate import (
    IntegratorConfig,
    Trajectory,
    evolve_density,
    evolve_state,
    oracle_nonhermitian,
    oracle_state,
)

__version__ = "0.1.0"

__all__ = [
    "AddParams",
    "AngleState",
    "Direction",
    "Frame",
    "FramePath",
    "IntegratorConfig",
    "LZSchedule",
    "SolvedAdd",
    "Trajectory",
    "angle",
    "build_frame",
    "cd_term",
    "evolve_density",
    "evolve_state",
    "h0",
    "h_cd",
    "nonadiabatic_term",
    "oracle_nonhermitian",
    "oracle_state",
    "solve_add",
]
