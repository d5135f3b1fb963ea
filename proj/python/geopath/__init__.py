"""Geometric gate synthesis, simulation and planning."""

from ._core import (
    Curve,
    GeopathError,
    Plan,
    __version__,
    gate_fidelity,
    gate_matrix,
    ion_check,
    parse_angle,
    plan_min_circle,
    plan_orange_slice,
    plan_three_segment,
    simulate,
)

__all__ = [
    "Curve",
    "GeopathError",
    "Plan",
    "__version__",
    "gate_fidelity",
    "gate_matrix",
    "ion_check",
    "parse_angle",
    "plan_min_circle",
    "plan_orange_slice",
    "plan_three_segment",
    "simulate",
]
