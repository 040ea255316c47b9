"""Manufactured displacement fields and their consistent transverse forcings.

Case "v1" is a clamped-clamped sextic whose value and slope vanish at both
ends; case "v2" is a simply-supported sextic with zero end deflection and
zero end moment.  Both displacement fields are independent of the fractional
parameters; the forcing consequently depends on them, and at ``alpha = 1``
its nonlocal term vanishes exactly so the forcing reduces to the classical
``EI * w''''`` of the exact field (unit-width convention, EI = E h^3 / 12).
"""

from __future__ import annotations

import numpy as np

from .beam import BeamSpec

__all__ = [
    "CASES",
    "displacement_poly",
    "exact_displacement",
    "forcing",
    "normalization",
]

CASES = ("v1", "v2")


def _check_case(case: str) -> None:
    if case not in CASES:
        raise ValueError(f"unknown manufactured case {case!r}; expected one of {CASES}")


def displacement_poly(case: str, L: float) -> np.ndarray:
    """Coefficients (low-to-high powers of x) of the exact transverse field."""
    _check_case(case)
    if case == "v1":
        # L * xi^3 (1 - xi)^3
        a = np.array([0.0, 0.0, 0.0, 1.0, -3.0, 3.0, -1.0])
        scale = 1.0
    else:
        # (L/100) * (7/2 xi - 2 xi^3 - 4 xi^4 + 3/2 xi^5 + xi^6)
        a = np.array([0.0, 3.5, 0.0, -2.0, -4.0, 1.5, 1.0])
        scale = 0.01
    k = np.arange(a.size)
    return scale * a * L ** (1.0 - k)


def exact_displacement(case: str, x, L: float):
    """Exact transverse displacement at ``x`` (scalar or array)."""
    return np.polynomial.polynomial.polyval(x, displacement_poly(case, L))


def forcing(case: str, x, spec: BeamSpec):
    """Consistent transverse load for the manufactured case at ``x``."""
    _check_case(case)
    E, h, L = spec.E, spec.h, spec.L
    alpha, lf = spec.frac.alpha, spec.frac.l_f
    xi = np.asarray(x, dtype=float) / L
    nonlocal_term = (lf / L) ** 2 * (1.0 - alpha) / (3.0 - alpha)
    if case == "v1":
        bracket = 1.0 - 5.0 * xi + 5.0 * xi**2 + 10.0 * nonlocal_term
        return -(6.0 * E * h**3 / L**3) * bracket
    bracket = 360.0 * xi**2 + 180.0 * xi - 96.0 + 720.0 * nonlocal_term
    return (E * h**3 / (1200.0 * L**3)) * bracket


def normalization(case: str, L: float) -> float:
    """Scale that maps the exact field to the published normalized profile."""
    _check_case(case)
    return 64.0 / L if case == "v1" else 16.0 / (21.0 * L)
