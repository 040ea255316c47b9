"""Problem definition: geometry, material, fractional parameters, boundary
conditions, load cases, and the per-point horizon truncation rule."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .fracops import Horizon, validate_order

__all__ = [
    "BC_KINDS",
    "BeamSpec",
    "BendingRigidity",
    "FractionalParams",
    "LoadCase",
    "resolve_horizon",
    "rigidity",
]

BC_KINDS = ("clamped-clamped", "simply-supported", "cantilever")

SLENDERNESS_WARNING = 20.0


@dataclass(frozen=True)
class FractionalParams:
    """Fractional order and nominal symmetric horizon half-width.

    Interior points carry the full symmetric horizon ``l_a = l_b = l_f``;
    near the beam ends the extents truncate per :func:`resolve_horizon`.
    """

    alpha: float
    l_f: float

    def __post_init__(self) -> None:
        validate_order(self.alpha)
        if self.l_f <= 0.0:
            raise ValueError(f"horizon length must be positive, got {self.l_f}")


@dataclass(frozen=True)
class LoadCase:
    """Applied loading.  ``kind`` is one of 'udl', 'tip-point', 'axial-udl',
    'manufactured-v1', 'manufactured-v2'.

    The manufactured cases carry no free magnitude: their forcing follows
    from the beam and fractional parameters alone.
    """

    kind: str
    q0: float = 0.0
    p: float = 0.0
    f0: float = 0.0

    KINDS = ("udl", "tip-point", "axial-udl", "manufactured-v1", "manufactured-v2")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown load kind {self.kind!r}; expected one of {self.KINDS}")

    @classmethod
    def udl(cls, q0: float) -> "LoadCase":
        return cls(kind="udl", q0=q0)

    @classmethod
    def tip_point(cls, p: float) -> "LoadCase":
        return cls(kind="tip-point", p=p)

    @classmethod
    def axial_udl(cls, f0: float) -> "LoadCase":
        return cls(kind="axial-udl", f0=f0)

    @classmethod
    def manufactured(cls, case: str) -> "LoadCase":
        if case not in ("v1", "v2"):
            raise ValueError(f"manufactured case must be 'v1' or 'v2', got {case!r}")
        return cls(kind=f"manufactured-{case}")


@dataclass(frozen=True)
class BeamSpec:
    """Geometry, material, boundary condition, load, and fractional parameters
    of one beam problem.  Immutable; freely shareable across threads."""

    L: float
    h: float
    b: float
    E: float
    bc: str
    load: LoadCase
    frac: FractionalParams

    def __post_init__(self) -> None:
        if self.L <= 0.0 or self.h <= 0.0 or self.b <= 0.0:
            raise ValueError("beam dimensions must be positive")
        if self.E <= 0.0:
            raise ValueError("elastic modulus must be positive")
        if self.bc not in BC_KINDS:
            raise ValueError(f"unknown boundary condition {self.bc!r}; expected one of {BC_KINDS}")
        if self.frac.l_f > self.L:
            raise ValueError("horizon length cannot exceed the beam length")
        if self.L / self.h < SLENDERNESS_WARNING:
            warnings.warn(
                f"aspect ratio L/h = {self.L / self.h:.3g} is below {SLENDERNESS_WARNING:g}; "
                "the slender-beam kinematics may be inaccurate",
                stacklevel=2,
            )


@dataclass(frozen=True)
class BendingRigidity:
    """Axial rigidity E*b*h and bending rigidity E*b*h^3/12."""

    EA: float
    EI: float

    def __post_init__(self) -> None:
        if self.EA <= 0.0 or self.EI <= 0.0:
            raise ValueError("rigidities must be positive")


def rigidity(spec: BeamSpec) -> BendingRigidity:
    """Thickness-integrated section rigidities of the rectangular section."""
    return BendingRigidity(
        EA=spec.E * spec.b * spec.h,
        EI=spec.E * spec.b * spec.h**3 / 12.0,
    )


def resolve_horizon(x: float, spec: BeamSpec) -> Horizon:
    """Boundary-truncated horizon at ``x``: ``l_a = min(l_f, x)`` and
    ``l_b = min(l_f, L - x)``."""
    if not (0.0 <= x <= spec.L):
        raise ValueError(f"evaluation point {x} outside the beam [0, {spec.L}]")
    return Horizon(l_a=min(spec.frac.l_f, x), l_b=min(spec.frac.l_f, spec.L - x))
