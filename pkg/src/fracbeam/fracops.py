"""Fractional-order kernels, power-law moments, Gauss rules, and a reference
Riesz-Caputo derivative evaluator.

The Riesz-Caputo (RC) derivative of order ``alpha`` over an asymmetric horizon
``(x - l_A, x + l_B)`` is

    D^a f(x) = (1-a)/2 * [ l_A^(a-1) * I_left + l_B^(a-1) * I_right ]

with the one-sided convolutions of the first derivative

    I_left  = int_0^{l_A} f'(x - t) t^(-a) dt
    I_right = int_0^{l_B} f'(x + t) t^(-a) dt

For ``alpha = 1`` the operator is the classical first derivative and every
routine here dispatches to it explicitly; the degenerate kernel is never
evaluated at the integer limit.

Everything in this module is a pure function of its arguments and safe to
call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Horizon",
    "GaussRule",
    "validate_order",
    "kernel_attenuation",
    "power_law_moment",
    "gauss_rule",
    "rc_derivative",
    "rc_boundary_limit",
]

_NEWTON_TOL = 1e-15


def validate_order(alpha: float, *, allow_local: bool = True) -> float:
    """Check a fractional order, returning it unchanged.

    Orders live in (0, 1]; ``alpha = 1`` is the exact local limit and is only
    accepted where the caller dispatches to integer-order formulas.
    """
    upper_ok = (alpha <= 1.0) if allow_local else (alpha < 1.0)
    if not (0.0 < alpha and upper_ok):
        rng = "(0, 1]" if allow_local else "(0, 1)"
        raise ValueError(f"fractional order must lie in {rng}, got {alpha}")
    return float(alpha)


@dataclass(frozen=True)
class Horizon:
    """Left/right extent of the nonlocal horizon at an evaluation point.

    Both extents are non-negative and at least one must be positive.  At a
    point ``x`` of a domain ``[0, L]`` the extents are the boundary-truncated
    values ``l_a = min(l_f, x)`` and ``l_b = min(l_f, L - x)``.
    """

    l_a: float
    l_b: float

    def __post_init__(self) -> None:
        if self.l_a < 0.0 or self.l_b < 0.0:
            raise ValueError(f"horizon extents must be non-negative: {self}")
        if self.l_a + self.l_b <= 0.0:
            raise ValueError("horizon is degenerate on both sides")

    @property
    def one_sided(self) -> bool:
        return self.l_a == 0.0 or self.l_b == 0.0


@dataclass(frozen=True)
class GaussRule:
    """Gauss-Legendre nodes/weights on the reference interval [-1, 1]."""

    points: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self) -> None:
        self.points.setflags(write=False)
        self.weights.setflags(write=False)

    def mapped(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights transported to the interval ``[a, b]``."""
        half = 0.5 * (b - a)
        return a + half * (self.points + 1.0), half * self.weights


@lru_cache(maxsize=None)
def gauss_rule(order: int) -> GaussRule:
    """Gauss-Legendre rule by Newton iteration on the Legendre polynomial.

    Seeds are the Chebyshev-type estimates; iteration is run to 1e-15 on the
    node update.  Integrates polynomials up to degree ``2*order - 1`` exactly.
    """
    if not (isinstance(order, int) and 2 <= order <= 16):
        raise ValueError(f"Gauss rule order must be an integer in [2, 16], got {order}")
    k = np.arange(order)
    x = np.cos(np.pi * (4.0 * k + 3.0) / (4.0 * order + 2.0))
    dp = np.empty_like(x)
    for _ in range(64):
        p_prev = np.ones_like(x)
        p = x.copy()
        for n in range(2, order + 1):
            p_prev, p = p, ((2.0 * n - 1.0) * x * p - (n - 1.0) * p_prev) / n
        dp = order * (x * p - p_prev) / (x * x - 1.0)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    idx = np.argsort(x)
    x = x[idx]
    w = (2.0 / ((1.0 - x * x) * dp[idx] ** 2))
    # enforce the symmetry the analytic rule has
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return GaussRule(points=x, weights=w, order=order)


def kernel_attenuation(x: float, s: float, l: float, alpha: float, side: str) -> float:
    """Power-law attenuation kernel ``(1-a)/2 * l^(a-1) * |x-s|^(-a)``.

    ``side`` selects which horizon extent ``l`` refers to and is validated
    against the location of ``s`` relative to ``x``.  The kernel is singular
    at ``s = x``; callers integrate through that point with the analytic
    moments of :func:`power_law_moment` instead.
    """
    validate_order(alpha, allow_local=False)
    if l <= 0.0:
        raise ValueError(f"horizon extent must be positive, got {l}")
    if s == x:
        raise ValueError("attenuation kernel is singular at s = x")
    if side == "left":
        if not (x - l <= s < x):
            raise ValueError(f"left-side point must satisfy x-l <= s < x, got s={s}")
    elif side == "right":
        if not (x < s <= x + l):
            raise ValueError(f"right-side point must satisfy x < s <= x+l, got s={s}")
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return 0.5 * (1.0 - alpha) * l ** (alpha - 1.0) * abs(x - s) ** (-alpha)


def power_law_moment(m: int, alpha: float, tau0: float, tau1: float) -> float:
    """Closed form of ``int_tau0^tau1 t^(m - alpha) dt`` for integer m >= 0.

    Finite even for ``tau0 = 0`` since ``m + 1 - alpha > 0``; this is what
    makes the end-point singular sub-intervals analytically integrable.
    """
    if m < 0 or m != int(m):
        raise ValueError(f"moment degree must be a non-negative integer, got {m}")
    validate_order(alpha, allow_local=False)
    if tau0 < 0.0 or tau1 <= tau0:
        raise ValueError(f"need 0 <= tau0 < tau1, got [{tau0}, {tau1}]")
    p = m + 1.0 - alpha
    return (tau1**p - tau0**p) / p


def _moments(kmax: int, alpha: float, tau0: float, tau1: float) -> np.ndarray:
    """Vector of power-law moments for k = 0..kmax (no validation)."""
    p = np.arange(kmax + 1) + 1.0 - alpha
    return (tau1**p - tau0**p) / p


def _poly_shift(coeffs: np.ndarray, t0: float) -> np.ndarray:
    """Coefficients of ``p(t0 + t)`` in powers of ``t`` (exact Taylor shift)."""
    c = np.asarray(coeffs, dtype=float)
    out = np.empty_like(c)
    fact = 1.0
    for k in range(c.size):
        out[k] = np.polynomial.polynomial.polyval(t0, c) / fact
        c = np.polynomial.polynomial.polyder(c)
        fact *= k + 1.0
    return out


def _fd_derivative(f: Callable[[float], float], x: float, h: float = 1e-6) -> float:
    # 5-point central difference, O(h^4)
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def _side_tau_breaks(x: float, ell: float, sign: int, breakpoints: Sequence[float]) -> list[float]:
    """Breakpoints mapped to the tau = |s - x| coordinate of one side."""
    taus = []
    for b in breakpoints:
        t = sign * (b - x)
        if 1e-14 * max(1.0, ell) < t < ell:
            taus.append(t)
    return sorted(taus)


def _side_convolution(
    df: Callable[[float], float],
    x: float,
    ell: float,
    alpha: float,
    sign: int,
    breakpoints: Sequence[float],
    order: int,
    singular_degree: int,
) -> float:
    """``int_0^ell df(x + sign*t) t^(-alpha) dt`` with the end-point singularity
    handled by a local polynomial expansion of ``df`` integrated term-by-term.
    """
    taus = _side_tau_breaks(x, ell, sign, breakpoints)
    delta = min(taus[0] if taus else ell, ell / 4.0)

    def g(t: np.ndarray) -> np.ndarray:
        return np.asarray([df(x + sign * ti) for ti in np.atleast_1d(t)], dtype=float)

    # singular piece [0, delta]: fit g on Chebyshev nodes of the scaled segment
    deg = singular_degree
    tcheb = 0.5 * delta * (1.0 + np.cos(np.pi * (2 * np.arange(deg + 1) + 1) / (2 * (deg + 1))))
    a = np.polynomial.polynomial.polyfit(tcheb / delta, g(tcheb), deg)
    powers = np.arange(deg + 1) + 1.0 - alpha
    total = delta ** (1.0 - alpha) * float(np.sum(a / powers))

    # regular remainder: panels geometric away from the singular end, split at
    # breakpoints where df may lose smoothness
    knots = {delta, ell}
    t = delta
    while t < ell:
        t *= 3.0
        if t < ell:
            knots.add(t)
    knots.update(taus)
    knots = sorted(knots)
    rule = gauss_rule(min(max(order, 2), 16))
    for a0, b0 in zip(knots[:-1], knots[1:]):
        pts, wts = rule.mapped(a0, b0)
        total += float(np.sum(wts * g(pts) * pts ** (-alpha)))
    return total


def _poly_side_sum(q: np.ndarray, alpha: float, ell: float, sign: int) -> float:
    """One-sided convolution of a polynomial derivative expanded about x.

    ``q`` are the Taylor coefficients of f' about x; the side integral is the
    exact sum of signed power-law moments.
    """
    k = np.arange(q.size)
    signs = np.where(k % 2 == 0, 1.0, float(sign))
    return float(np.sum(q * signs * _moments(q.size - 1, alpha, 0.0, ell)))


def rc_derivative(
    f: Callable[[float], float] | Sequence[float] | np.ndarray,
    x: float,
    horizon: Horizon,
    alpha: float,
    *,
    df: Callable[[float], float] | None = None,
    breakpoints: Sequence[float] = (),
    order: int = 12,
    singular_degree: int = 4,
) -> float:
    """Reference evaluator of the Riesz-Caputo derivative at ``x``.

    ``f`` is either an array of polynomial coefficients (low-to-high powers
    of the global coordinate; evaluated in closed form) or a callable.  For a
    callable, ``df`` supplies its first derivative (finite differences are
    used if omitted); ``breakpoints`` lists coordinates where ``df`` may be
    non-smooth so quadrature panels can be split there.

    This routine is deliberately independent of the finite-element assembly
    path: it serves as the oracle the assembly is tested against.
    """
    validate_order(alpha)
    is_poly = not callable(f)
    if alpha == 1.0:
        if is_poly:
            dc = np.polynomial.polynomial.polyder(np.asarray(f, dtype=float))
            return float(np.polynomial.polynomial.polyval(x, dc))
        return float(df(x)) if df is not None else _fd_derivative(f, x)

    if horizon.one_sided:
        return rc_boundary_limit(
            f, x, horizon, alpha,
            df=df, breakpoints=breakpoints, order=order, singular_degree=singular_degree,
        )

    la, lb = horizon.l_a, horizon.l_b
    if is_poly:
        dc = np.polynomial.polynomial.polyder(np.asarray(f, dtype=float))
        q = _poly_shift(dc, x)
        left = _poly_side_sum(q, alpha, la, -1)
        right = _poly_side_sum(q, alpha, lb, +1)
    else:
        dfn = df if df is not None else (lambda s: _fd_derivative(f, s))
        left = _side_convolution(dfn, x, la, alpha, -1, breakpoints, order, singular_degree)
        right = _side_convolution(dfn, x, lb, alpha, +1, breakpoints, order, singular_degree)
    return 0.5 * (1.0 - alpha) * (la ** (alpha - 1.0) * left + lb ** (alpha - 1.0) * right)


def rc_boundary_limit(
    f: Callable[[float], float] | Sequence[float] | np.ndarray,
    x: float,
    horizon: Horizon,
    alpha: float,
    *,
    df: Callable[[float], float] | None = None,
    breakpoints: Sequence[float] = (),
    order: int = 12,
    singular_degree: int = 4,
) -> float:
    """Boundary-point limit of the RC derivative when one horizon side vanishes.

    The vanishing side collapses onto the classical derivative, so the value
    is ``(f'(x) + (1-a) l^(a-1) * surviving one-sided convolution) / 2``.
    This is the continuous limit of :func:`rc_derivative` as the truncated
    extent goes to zero.
    """
    validate_order(alpha)
    if not horizon.one_sided:
        raise ValueError("boundary limit requires exactly one vanishing horizon side")
    is_poly = not callable(f)
    if is_poly:
        dc = np.polynomial.polynomial.polyder(np.asarray(f, dtype=float))
        dval = float(np.polynomial.polynomial.polyval(x, dc))
    else:
        dval = float(df(x)) if df is not None else _fd_derivative(f, x)
    if alpha == 1.0:
        return dval

    if horizon.l_a == 0.0:
        ell, sign = horizon.l_b, +1
    else:
        ell, sign = horizon.l_a, -1
    if is_poly:
        q = _poly_shift(dc, x)
        conv = _poly_side_sum(q, alpha, ell, sign)
    else:
        dfn = df if df is not None else (lambda s: _fd_derivative(f, s))
        conv = _side_convolution(dfn, x, ell, alpha, sign, breakpoints, order, singular_degree)
    return 0.5 * (dval + (1.0 - alpha) * ell ** (alpha - 1.0) * conv)
