"""Uniform 1D mesh, DOF numbering, and C1 element bases.

Two element families are provided:

* two-noded C1: linear Lagrange for the axial displacement, cubic Hermite
  (value + slope per node) for the transverse displacement; 6 DOFs.
* three-noded C1: quadratic Lagrange for the axial displacement and the
  quintic Hermite built from value + slope at the end and mid nodes; 9 DOFs.

Shape polynomials are stored as coefficient arrays in the physical offset
``t = s - x_left`` of the containing element, so Jacobians stay explicit and
the sparse scatter of element blocks into global columns is plain index
arithmetic.  Every node carries three DOFs ``(u0, w0, dw0/dx)``; element ``e``
therefore occupies the contiguous global columns
``3 * e * (nodes_per_element - 1) .. + 3 * nodes_per_element``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["ELEMENT_KINDS", "ElementBasis", "Mesh", "build_mesh", "dof_map"]

ELEMENT_KINDS = ("two-noded-C1", "three-noded-C1")

P = np.polynomial.polynomial


def _polyder(rows: np.ndarray, m: int = 1) -> np.ndarray:
    """Row-wise derivative of a stack of coefficient rows, width preserved."""
    out = np.zeros_like(rows)
    for i, row in enumerate(rows):
        d = P.polyder(row, m)
        out[i, : d.size] = d
    return out


def _two_noded_polys(le: float) -> tuple[np.ndarray, np.ndarray]:
    u = np.zeros((2, 6))
    u[0, :2] = [1.0, -1.0 / le]
    u[1, :2] = [0.0, 1.0 / le]
    w = np.zeros((4, 6))
    w[0, :4] = [1.0, 0.0, -3.0 / le**2, 2.0 / le**3]
    w[1, :4] = [0.0, 1.0, -2.0 / le, 1.0 / le**2]
    w[2, :4] = [0.0, 0.0, 3.0 / le**2, -2.0 / le**3]
    w[3, :4] = [0.0, 0.0, -1.0 / le, 1.0 / le**2]
    return u, w


def _three_noded_polys(le: float) -> tuple[np.ndarray, np.ndarray]:
    # quadratic Lagrange at t/le in {0, 1/2, 1}
    u = np.zeros((3, 6))
    u[0, :3] = [1.0, -3.0 / le, 2.0 / le**2]
    u[1, :3] = [0.0, 4.0 / le, -4.0 / le**2]
    u[2, :3] = [0.0, -1.0 / le, 2.0 / le**2]
    # quintic Hermite: value and slope at xi in {0, 1/2, 1} on the reference
    # element, solved from the interpolation conditions
    xi = np.array([0.0, 0.5, 1.0])
    cond = np.zeros((6, 6))
    for j, x0 in enumerate(xi):
        cond[2 * j] = [x0**k for k in range(6)]
        cond[2 * j + 1] = [k * x0 ** (k - 1) if k >= 1 else 0.0 for k in range(6)]
    ref = np.linalg.solve(cond, np.eye(6)).T  # row i: coeffs of basis i in xi
    w = np.zeros((6, 6))
    k = np.arange(6)
    for j in range(3):
        w[2 * j] = ref[2 * j] / le**k          # value DOF
        w[2 * j + 1] = ref[2 * j + 1] * le ** (1 - k)  # slope DOF
    return u, w


@dataclass(frozen=True)
class ElementBasis:
    """Shape polynomials of one element family on elements of length ``le``.

    ``n_poly`` stacks the rows needed for interpolation (u, w, dw/dt) and
    ``b_poly`` the strain rows (du/dt, d2w/dt2), both as coefficient arrays in
    the physical element offset, one column per element DOF.
    """

    kind: str
    length: float
    ndof: int
    u_cols: np.ndarray
    w_cols: np.ndarray
    n_poly: np.ndarray = field(repr=False)  # (3, ndof, width)
    b_poly: np.ndarray = field(repr=False)  # (2, ndof, width)

    @classmethod
    def create(cls, kind: str, le: float) -> "ElementBasis":
        if kind == "two-noded-C1":
            u, w = _two_noded_polys(le)
            u_cols = np.array([0, 3])
            w_cols = np.array([1, 2, 4, 5])
            ndof = 6
        elif kind == "three-noded-C1":
            u, w = _three_noded_polys(le)
            u_cols = np.array([0, 3, 6])
            w_cols = np.array([1, 2, 4, 5, 7, 8])
            ndof = 9
        else:
            raise ValueError(f"unknown element kind {kind!r}; expected one of {ELEMENT_KINDS}")
        width = u.shape[1]
        n_poly = np.zeros((3, ndof, width))
        n_poly[0, u_cols] = u
        n_poly[1, w_cols] = w
        n_poly[2, w_cols] = _polyder(w)
        b_poly = np.zeros((2, ndof, width))
        b_poly[0, u_cols] = _polyder(u)
        b_poly[1, w_cols] = _polyder(w, 2)
        return cls(kind=kind, length=le, ndof=ndof, u_cols=u_cols, w_cols=w_cols,
                   n_poly=n_poly, b_poly=b_poly)

    def b_matrix(self, t) -> np.ndarray:
        """Strain-displacement matrix at offset(s) ``t`` inside the element.

        Row 0 holds the axial du/ds entries, row 1 the curvature d2w/ds2
        entries.  Returns shape (2, ndof) for scalar ``t`` and
        (2, ndof, len(t)) for arrays.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t < -1e-12 * self.length) or np.any(t > self.length * (1 + 1e-12)):
            raise ValueError("evaluation offset outside the element")
        return P.polyval(t, self.b_poly.transpose(2, 0, 1))

    def interpolate(self, dofs: np.ndarray, t) -> tuple:
        """(u0, w0, dw0/dx) at offset(s) ``t`` from element DOF values."""
        t = np.asarray(t, dtype=float)
        if np.any(t < -1e-12 * self.length) or np.any(t > self.length * (1 + 1e-12)):
            raise ValueError("evaluation offset outside the element")
        vals = P.polyval(t, self.n_poly.transpose(2, 0, 1))
        out = np.tensordot(np.asarray(dofs, dtype=float), vals, axes=([0], [1]))
        return out[0], out[1], out[2]


@dataclass(frozen=True)
class Mesh:
    """Uniform partition of [0, L] into ``n_elements`` C1 elements."""

    L: float
    n_elements: int
    element_kind: str
    l_e: float
    nodes: np.ndarray
    basis: ElementBasis

    def __post_init__(self) -> None:
        self.nodes.setflags(write=False)

    @property
    def nodes_per_element(self) -> int:
        return 2 if self.element_kind == "two-noded-C1" else 3

    @property
    def n_nodes(self) -> int:
        return self.nodes.size

    @property
    def n_dofs(self) -> int:
        return 3 * self.n_nodes

    def element_span(self, e: int) -> tuple[float, float]:
        return e * self.l_e, (e + 1) * self.l_e

    def element_of(self, x: float) -> int:
        """Index of the element containing ``x`` (right-closed at x = L)."""
        if not (0.0 <= x <= self.L * (1 + 1e-12)):
            raise ValueError(f"point {x} outside the mesh [0, {self.L}]")
        return min(int(x / self.l_e), self.n_elements - 1)

    def element_dofs(self, e: int) -> np.ndarray:
        start = 3 * e * (self.nodes_per_element - 1)
        return np.arange(start, start + 3 * self.nodes_per_element)

    def element_nodes(self, e: int) -> np.ndarray:
        start = e * (self.nodes_per_element - 1)
        return np.arange(start, start + self.nodes_per_element)

    def dof_start(self, e: int) -> int:
        return 3 * e * (self.nodes_per_element - 1)

    def interpolate_field(self, dofs: np.ndarray, x):
        """(u0, w0, dw0/dx) of a global DOF vector at point(s) ``x``."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        u = np.empty_like(xs)
        w = np.empty_like(xs)
        dw = np.empty_like(xs)
        for i, xi in enumerate(xs):
            e = self.element_of(xi)
            t = xi - e * self.l_e
            ue, we, dwe = self.basis.interpolate(dofs[self.element_dofs(e)], t)
            u[i], w[i], dw[i] = ue, we, dwe
        if np.isscalar(x) or np.ndim(x) == 0:
            return u[0], w[0], dw[0]
        return u, w, dw


def build_mesh(L: float, n_elements: int, kind: str = "two-noded-C1") -> Mesh:
    """Uniform mesh with ``n_elements`` elements of the requested family."""
    if n_elements < 2:
        raise ValueError(f"need at least 2 elements, got {n_elements}")
    if kind not in ELEMENT_KINDS:
        raise ValueError(f"unknown element kind {kind!r}; expected one of {ELEMENT_KINDS}")
    le = L / n_elements
    per = 2 if kind == "two-noded-C1" else 3
    n_nodes = n_elements * (per - 1) + 1
    nodes = np.linspace(0.0, L, n_nodes)
    return Mesh(L=L, n_elements=n_elements, element_kind=kind, l_e=le,
                nodes=nodes, basis=ElementBasis.create(kind, le))


def dof_map(mesh: Mesh) -> np.ndarray:
    """Per-element global DOF indices, one row per element."""
    return np.vstack([mesh.element_dofs(e) for e in range(mesh.n_elements)])
