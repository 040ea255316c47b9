"""Nonlocal strain-displacement rows and global stiffness/load assembly.

At every outer Gauss point the strain-displacement row is the convolution of
the element B-matrices against the attenuation kernel over the horizon.  For
the power-law kernel each horizon sub-interval reduces to signed power-law
moments of the B polynomials re-expanded about the Gauss point, so the two
singular sub-intervals adjacent to the point are always integrated in closed
form.  The remaining sub-intervals are integrated either in closed form as
well (the default, which is exact for the piecewise-polynomial integrand) or
by per-interval Gauss-Legendre quadrature (compatibility option).

The connectivity matrix that formally scatters element contributions into
global columns is never materialized: horizon elements are contiguous on a
1D mesh, so each row is kept as a dense block plus a column offset.

Stiffness integration runs one deterministic element/Gauss-point loop with
contributions accumulated in index order, which keeps assembled matrices
independent of any outer parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .beam import BeamSpec, rigidity
from .fracops import gauss_rule
from .manufactured import forcing as manufactured_forcing
from .mesh import Mesh

__all__ = [
    "BtildeRow",
    "HorizonElements",
    "NonlocalSystem",
    "QuadratureProfile",
    "Segment",
    "assemble_load",
    "assemble_stiffness",
    "btilde_at",
    "build_system",
    "horizon_elements",
]

MODES = ("fractional", "eringen-exponential", "local")

_BINOM = np.array([[math.comb(m, j) if m >= j else 0 for j in range(8)] for m in range(8)], dtype=float)


@dataclass(frozen=True)
class QuadratureProfile:
    """Quadrature controls for assembly.

    ``n_gp`` is the Gauss order per interval (outer element loop and, in
    'gauss' mode, the horizon sub-intervals).  ``btilde`` selects closed-form
    ('analytic') or per-interval Gauss ('gauss') integration of the non-
    singular horizon segments.  ``partial_horizon`` chooses between exact
    integration of partially covered far elements and whole-element
    ceil/floor rounding.  ``outer_panels > 1`` subdivides each element of the
    outer stiffness loop into that many panels graded toward the element ends
    with ratio ``outer_grading``.
    """

    n_gp: int = 4
    btilde: str = "analytic"
    partial_horizon: str = "exact"
    outer_panels: int = 1
    outer_grading: float = 0.3

    def __post_init__(self) -> None:
        if not 2 <= self.n_gp <= 16:
            raise ValueError(f"n_gp must be in [2, 16], got {self.n_gp}")
        if self.btilde not in ("analytic", "gauss"):
            raise ValueError(f"btilde must be 'analytic' or 'gauss', got {self.btilde!r}")
        if self.partial_horizon not in ("exact", "rounded"):
            raise ValueError(
                f"partial_horizon must be 'exact' or 'rounded', got {self.partial_horizon!r}"
            )
        if self.outer_panels < 1:
            raise ValueError("outer_panels must be >= 1")


DEFAULT_QUAD = QuadratureProfile()


class Segment(NamedTuple):
    """One horizon sub-interval inside a single element."""

    element: int
    s0: float
    s1: float
    side: int       # -1 left of the Gauss point, +1 right
    singular: bool  # adjacent to the Gauss point


@dataclass(frozen=True)
class HorizonElements:
    """Horizon decomposition at one Gauss point."""

    element: int
    n_left: int
    n_right: int
    l_a: float
    l_b: float
    segments: tuple[Segment, ...]

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(sorted({s.element for s in self.segments}))


@dataclass(frozen=True)
class BtildeRow:
    """Nonlocal strain-displacement row stored as a contiguous column block."""

    col_start: int
    block: np.ndarray  # (2, width)
    n_dofs: int

    def dot(self, x: np.ndarray) -> np.ndarray:
        return self.block @ x[self.col_start : self.col_start + self.block.shape[1]]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((2, self.n_dofs))
        out[:, self.col_start : self.col_start + self.block.shape[1]] = self.block
        return out


def horizon_elements(x_g: float, mesh: Mesh, frac, partial_horizon: str = "exact") -> HorizonElements:
    """Split the horizon of ``x_g`` into per-element integration segments.

    ``frac`` provides the nominal horizon half-width; truncation at the beam
    ends uses the resolved extents and keeps all element indices valid.
    """
    le = mesh.l_e
    tol = 1e-12 * mesh.L
    i = mesh.element_of(x_g)
    l_a = min(frac.l_f, x_g)
    l_b = min(frac.l_f, mesh.L - x_g)
    x0, x1 = mesh.element_span(i)

    segs: list[Segment] = []
    lo = max(x0, x_g - l_a)
    if x_g - lo > tol:
        segs.append(Segment(i, lo, x_g, -1, True))
    hi = min(x1, x_g + l_b)
    if hi - x_g > tol:
        segs.append(Segment(i, x_g, hi, +1, True))

    if partial_horizon == "exact":
        p = i - 1
        while p >= 0 and (p + 1) * le > x_g - l_a + tol:
            segs.append(Segment(p, max(p * le, x_g - l_a), (p + 1) * le, -1, False))
            p -= 1
        p = i + 1
        while p < mesh.n_elements and p * le < x_g + l_b - tol:
            segs.append(Segment(p, p * le, min((p + 1) * le, x_g + l_b), +1, False))
            p += 1
    else:
        # 'rounded': whole-element ceil/floor counting keeps only elements
        # fully inside the horizon, slightly truncating it; the lost kernel
        # mass vanishes as elements-per-horizon grows
        p = i - 1
        while p >= 0 and p * le >= x_g - l_a - tol:
            segs.append(Segment(p, p * le, (p + 1) * le, -1, False))
            p -= 1
        p = i + 1
        while p < mesh.n_elements and (p + 1) * le <= x_g + l_b + tol:
            segs.append(Segment(p, p * le, (p + 1) * le, +1, False))
            p += 1

    elems = sorted({s.element for s in segs})
    return HorizonElements(
        element=i,
        n_left=i - elems[0],
        n_right=elems[-1] - i,
        l_a=l_a,
        l_b=l_b,
        segments=tuple(segs),
    )


def _shift_matrix(width: int, d0: float) -> np.ndarray:
    """Matrix S with p(d0 + v) coefficients given by ``c @ S``."""
    powers = d0 ** np.arange(width)
    S = np.zeros((width, width))
    for j in range(width):
        S[j:, j] = _BINOM[j : width, j] * powers[: width - j]
    return S


def _moment_vec(width: int, alpha: float, t0: float, t1: float) -> np.ndarray:
    p = np.arange(width) + 1.0 - alpha
    return (t1**p - t0**p) / p


def _fractional_block(
    basis_poly: np.ndarray,
    seg: Segment,
    x_g: float,
    le: float,
    alpha: float,
    pref: float,
    quad: QuadratureProfile,
) -> np.ndarray:
    """Integral of kernel * B over one segment, as a (2, ndof) block."""
    width = basis_poly.shape[2]
    # B is stored in the element offset t = s - x_left; re-expanding about the
    # Gauss point substitutes t = (x_g - x_left) + v with v = s - x_g
    d0 = x_g - seg.element * le
    if quad.btilde == "analytic" or seg.singular:
        q = basis_poly @ _shift_matrix(width, d0)
        if seg.side < 0:
            t0, t1 = x_g - seg.s1, x_g - seg.s0
        else:
            t0, t1 = seg.s0 - x_g, seg.s1 - x_g
        mom = _moment_vec(width, alpha, max(t0, 0.0), t1)
        signs = np.where(np.arange(width) % 2 == 0, 1.0, float(seg.side))
        return pref * (q @ (signs * mom))
    rule = gauss_rule(quad.n_gp)
    pts, wts = rule.mapped(seg.s0, seg.s1)
    bvals = np.polynomial.polynomial.polyval(pts - seg.element * le, basis_poly.transpose(2, 0, 1))
    kern = pref * np.abs(x_g - pts) ** (-alpha)
    return np.einsum("ijn,n->ij", bvals, wts * kern)


def btilde_at(
    x_g: float,
    mesh: Mesh,
    frac,
    mode: str = "fractional",
    quad: QuadratureProfile = DEFAULT_QUAD,
) -> BtildeRow:
    """Nonlocal strain-displacement row at an interior point ``x_g``.

    In fractional mode the row spans the elements intersecting the truncated
    horizon; in Eringen mode the exponential kernel is convolved over the
    whole beam; in local mode (and at ``alpha = 1``) the row is the local
    B-matrix scattered to its element columns.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    basis = mesh.basis
    if mode == "local" or (mode == "fractional" and frac.alpha == 1.0):
        e = mesh.element_of(x_g)
        block = basis.b_matrix(x_g - e * mesh.l_e)
        return BtildeRow(col_start=mesh.dof_start(e), block=block, n_dofs=mesh.n_dofs)

    if mode == "eringen-exponential":
        return _eringen_row(x_g, mesh, frac.l_f, quad)

    alpha = frac.alpha
    he = horizon_elements(x_g, mesh, frac, quad.partial_horizon)
    pref_left = 0.5 * (1.0 - alpha) * he.l_a ** (alpha - 1.0) if he.l_a > 0 else 0.0
    pref_right = 0.5 * (1.0 - alpha) * he.l_b ** (alpha - 1.0) if he.l_b > 0 else 0.0
    e_lo = he.element - he.n_left
    e_hi = he.element + he.n_right
    col_start = mesh.dof_start(e_lo)
    width = mesh.dof_start(e_hi) + basis.ndof - col_start
    block = np.zeros((2, width))
    for seg in he.segments:
        pref = pref_left if seg.side < 0 else pref_right
        contrib = _fractional_block(basis.b_poly, seg, x_g, mesh.l_e, alpha, pref, quad)
        c0 = mesh.dof_start(seg.element) - col_start
        block[:, c0 : c0 + basis.ndof] += contrib
    return BtildeRow(col_start=col_start, block=block, n_dofs=mesh.n_dofs)


def _eringen_row(x_g: float, mesh: Mesh, l_f: float, quad: QuadratureProfile) -> BtildeRow:
    """Exponential-kernel row over the full beam (no singularity, but the
    kernel has a slope break at the Gauss point and a width that may be much
    smaller than the element, so elements subdivide into panels as needed)."""
    basis = mesh.basis
    le = mesh.l_e
    n_panels = min(max(1, math.ceil(le / l_f)), 12)
    rule = gauss_rule(quad.n_gp)
    block = np.zeros((2, mesh.n_dofs))
    i = mesh.element_of(x_g)
    for e in range(mesh.n_elements):
        a, b = mesh.element_span(e)
        cuts = np.linspace(a, b, n_panels + 1)
        if e == i:
            cuts = np.unique(np.concatenate([cuts, [x_g]]))
        pts = []
        wts = []
        for p0, p1 in zip(cuts[:-1], cuts[1:]):
            pp, ww = rule.mapped(p0, p1)
            pts.append(pp)
            wts.append(ww)
        pts = np.concatenate(pts)
        wts = np.concatenate(wts)
        kern = np.exp(-np.abs(x_g - pts) / l_f) / (2.0 * l_f)
        bvals = np.polynomial.polynomial.polyval(pts - a, basis.b_poly.transpose(2, 0, 1))
        c0 = mesh.dof_start(e)
        block[:, c0 : c0 + basis.ndof] += np.einsum("ijn,n->ij", bvals, wts * kern)
    return BtildeRow(col_start=0, block=block, n_dofs=mesh.n_dofs)


def _outer_points(mesh: Mesh, quad: QuadratureProfile) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and weights of the stiffness quadrature within one element.

    With ``outer_panels > 1`` the element splits into panels geometrically
    graded toward both ends, where the nonlocal row has weakly singular
    derivatives in the Gauss-point position.
    """
    rule = gauss_rule(quad.n_gp)
    if quad.outer_panels == 1:
        return rule.mapped(0.0, mesh.l_e)
    k = max(1, quad.outer_panels // 2)
    half = 0.5 * mesh.l_e
    left = half * quad.outer_grading ** np.arange(k - 1, -1, -1)
    knots = np.concatenate([[0.0], left, mesh.l_e - left[::-1][1:], [mesh.l_e]])
    ts, ws = [], []
    for a, b in zip(knots[:-1], knots[1:]):
        tt, ww = rule.mapped(a, b)
        ts.append(tt)
        ws.append(ww)
    return np.concatenate(ts), np.concatenate(ws)


def assemble_stiffness(
    mesh: Mesh,
    spec: BeamSpec,
    mode: str = "fractional",
    quad: QuadratureProfile = DEFAULT_QUAD,
    max_dofs: int = 20000,
) -> np.ndarray:
    """Global stiffness matrix for the requested mode.

    Fractional and local modes produce a symmetric matrix by construction;
    the Eringen variant pairs the nonlocal row with the local B-matrix and is
    returned unsymmetrized.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if mesh.n_dofs > max_dofs:
        raise MemoryError(
            f"dense storage for {mesh.n_dofs} DOFs exceeds the configured cap {max_dofs}"
        )
    rig = rigidity(spec)
    D = np.diag([rig.EA, rig.EI])
    n = mesh.n_dofs
    K = np.zeros((n, n))
    offsets, wts = _outer_points(mesh, quad)
    basis = mesh.basis
    local = mode == "local" or (mode == "fractional" and spec.frac.alpha == 1.0)

    # template rows for untruncated interior points; the uniform mesh makes
    # the row pattern a function of the within-element offset only
    cache: list[tuple[int, np.ndarray] | None] = [None] * offsets.size

    for e in range(mesh.n_elements):
        xe = e * mesh.l_e
        for j, (t, w) in enumerate(zip(offsets, wts)):
            x_g = xe + t
            if local:
                b = basis.b_matrix(t)
                c0 = mesh.dof_start(e)
                K[c0 : c0 + basis.ndof, c0 : c0 + basis.ndof] += w * (b.T @ D @ b)
                continue
            if mode == "fractional":
                interior = (x_g - spec.frac.l_f >= -1e-12 * mesh.L) and (
                    x_g + spec.frac.l_f <= mesh.L * (1 + 1e-12)
                )
                if interior and cache[j] is not None:
                    rel, block = cache[j]
                    c0 = mesh.dof_start(e) + rel
                else:
                    row = btilde_at(x_g, mesh, spec.frac, mode, quad)
                    block = row.block
                    c0 = row.col_start
                    if interior:
                        cache[j] = (c0 - mesh.dof_start(e), block)
                K[c0 : c0 + block.shape[1], c0 : c0 + block.shape[1]] += w * (block.T @ D @ block)
            else:
                row = btilde_at(x_g, mesh, spec.frac, mode, quad)
                bloc = basis.b_matrix(t)
                c0 = mesh.dof_start(e)
                K[:, c0 : c0 + basis.ndof] += w * (row.block.T @ D @ bloc)
    return K


def assemble_load(mesh: Mesh, spec: BeamSpec, n_gp: int = 6) -> np.ndarray:
    """Consistent global load array for the spec's load case."""
    F = np.zeros(mesh.n_dofs)
    load = spec.load
    basis = mesh.basis
    if load.kind == "tip-point":
        F[mesh.n_dofs - 2] = load.p  # w-DOF of the last node
        return F

    rule = gauss_rule(n_gp)
    t, w = rule.mapped(0.0, mesh.l_e)
    nvals = np.polynomial.polynomial.polyval(t, basis.n_poly.transpose(2, 0, 1))  # (3, ndof, n)
    if load.kind == "udl":
        fe = np.einsum("jn,n->j", nvals[1], w) * load.q0
    elif load.kind == "axial-udl":
        fe = np.einsum("jn,n->j", nvals[0], w) * load.f0
    elif load.kind in ("manufactured-v1", "manufactured-v2"):
        case = load.kind.split("-")[1]
        fe = None
    else:  # pragma: no cover - LoadCase validates kinds
        raise ValueError(f"unknown load kind {load.kind!r}")

    for e in range(mesh.n_elements):
        dofs = mesh.element_dofs(e)
        if fe is None:
            ft = manufactured_forcing(case, e * mesh.l_e + t, spec)
            F[dofs] += np.einsum("jn,n->j", nvals[1], w * ft)
        else:
            F[dofs] += fe
    return F


@dataclass(frozen=True)
class NonlocalSystem:
    """Assembled global system with its provenance."""

    K: np.ndarray
    F: np.ndarray
    mode: str
    mesh: Mesh
    spec: BeamSpec
    quad: QuadratureProfile

    @property
    def symmetry_residual(self) -> float:
        scale = np.max(np.abs(self.K))
        return float(np.max(np.abs(self.K - self.K.T)) / scale) if scale > 0 else 0.0


def build_system(
    mesh: Mesh,
    spec: BeamSpec,
    mode: str = "fractional",
    quad: QuadratureProfile = DEFAULT_QUAD,
    max_dofs: int = 20000,
) -> NonlocalSystem:
    """Assemble stiffness and load for one problem."""
    K = assemble_stiffness(mesh, spec, mode, quad, max_dofs)
    F = assemble_load(mesh, spec, n_gp=max(4, quad.n_gp))
    return NonlocalSystem(K=K, F=F, mode=mode, mesh=mesh, spec=spec, quad=quad)
