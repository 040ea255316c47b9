"""Benchmark drivers: manufactured-solution validation, the exponential-kernel
comparison, mesh-convergence tables, and parametric softening sweeps.

All drivers default to the beam of the validation studies: unit length,
slenderness L/h = 100, elastic modulus 30 GPa, and unit width for the
manufactured cases (whose forcing is written for EI = E h^3 / 12).
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import manufactured
from .assembly import QuadratureProfile, build_system
from .beam import BeamSpec, FractionalParams, LoadCase
from .fracops import Horizon, rc_derivative
from .mesh import build_mesh
from .solve import apply_bcs, deflection_scale, recover_strain_stress, solve

__all__ = [
    "BenchReport",
    "BenchRow",
    "ERINGEN_BENCHMARK_POISSON",
    "ERINGEN_TIP_REFERENCE",
    "ManufacturedCase",
    "default_spec",
    "manufactured_exact",
    "manufactured_forcing",
    "run_convergence",
    "run_eringen",
    "run_sweep",
    "run_validation",
]

DEFAULT_E = 30.0e9
DEFAULT_L = 1.0
DEFAULT_SLENDERNESS = 100.0

VALIDATED_ALPHA_MIN = 0.3

# Published tip deflections w0*EI/(q0*L^4) for the exponential-kernel
# cantilever benchmark (aspect ratio 25, h/l_f = 5, 10, 15, 20).  Their
# local limit is (1 - nu^2)/8 with nu = 1/3, i.e. the beam modulus of the
# reference studies is the plate-like E/(1 - nu^2).
ERINGEN_TIP_REFERENCE = {5: 0.1169, 10: 0.1131, 15: 0.1119, 20: 0.1113}
ERINGEN_BENCHMARK_POISSON = 1.0 / 3.0

# Table-reproduction runs use the whole-element horizon rounding: published
# convergence tables reflect that truncation at coarse elements-per-horizon
TABLE_QUAD = QuadratureProfile(partial_horizon="rounded")


@dataclass(frozen=True)
class ManufacturedCase:
    """One manufactured validation case with its exact field and forcing."""

    case: str
    bc: str
    scale_kind: str

    @classmethod
    def get(cls, case: str) -> "ManufacturedCase":
        if case == "v1":
            return cls(case="v1", bc="clamped-clamped", scale_kind="mms-v1")
        if case == "v2":
            return cls(case="v2", bc="simply-supported", scale_kind="mms-v2")
        raise ValueError(f"unknown manufactured case {case!r}")


@dataclass
class BenchRow:
    """One benchmark result row (CSV schema of the batch front-end)."""

    alpha: float
    lf: float
    ne: int
    element: str
    w_max_norm: float
    err_rel: float = float("nan")
    runtime_s: float = 0.0
    err_w: float = float("nan")
    err_sigma: float = float("nan")
    label: str = ""


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def extend(self, rows) -> None:
        self.rows.extend(rows)


def manufactured_exact(case: str, x1, spec: BeamSpec):
    """Exact transverse displacement of the manufactured case."""
    return manufactured.exact_displacement(case, x1, spec.L)


def manufactured_forcing(case: str, x1, spec: BeamSpec):
    """Consistent transverse forcing of the manufactured case."""
    return manufactured.forcing(case, x1, spec)


def default_spec(
    alpha: float,
    l_f: float,
    bc: str = "clamped-clamped",
    load: LoadCase | None = None,
    *,
    L: float = DEFAULT_L,
    E: float = DEFAULT_E,
    slenderness: float = DEFAULT_SLENDERNESS,
    b: float = 1.0,
) -> BeamSpec:
    """Validation-study beam: L = 1, L/h = 100, E = 30 GPa, unit width."""
    if load is None:
        load = LoadCase.udl(1.0)
    return BeamSpec(
        L=L, h=L / slenderness, b=b, E=E, bc=bc, load=load,
        frac=FractionalParams(alpha=alpha, l_f=l_f),
    )


def _flag_regime(alpha: float) -> bool:
    if alpha < VALIDATED_ALPHA_MIN:
        warnings.warn(
            f"alpha = {alpha} lies outside the validated regime (alpha >= "
            f"{VALIDATED_ALPHA_MIN}); strongly nonlocal orders approach the "
            "breakdown of the constitutive interpolation",
            stacklevel=3,
        )
        return True
    return False


def run_validation(
    case: str,
    alpha: float,
    l_f: float,
    *,
    n_e: int | None = None,
    element: str = "two-noded-C1",
    quad: QuadratureProfile | None = None,
    n_thickness: int = 21,
) -> BenchRow:
    """Solve one manufactured case and report max-norm errors vs the exact
    solution.

    The deflection error is the relative max-norm over the nodes; the stress
    error compares the midspan thickness profile against the exact fractional
    strain evaluated by the reference derivative oracle.  The element count
    defaults to ten elements per horizon length.
    """
    mc = ManufacturedCase.get(case)
    spec = default_spec(alpha, l_f, bc=mc.bc, load=LoadCase.manufactured(case))
    if n_e is None:
        n_e = int(round(10.0 * spec.L / l_f))
    quad = quad or QuadratureProfile()
    t0 = time.perf_counter()
    mesh = build_mesh(spec.L, n_e, element)
    field_ = solve(apply_bcs(build_system(mesh, spec, "fractional", quad)))

    w_fem = field_.dofs[1::3] if element == "two-noded-C1" else field_.w(mesh.nodes)
    w_exact = manufactured_exact(case, mesh.nodes, spec)
    err_w = float(np.max(np.abs(w_fem - w_exact)) / np.max(np.abs(w_exact)))

    # midspan stress profile; the exact counterpart follows from the exact
    # field through the reference RC-derivative evaluator
    x_mid = spec.L / 2.0
    x3 = np.linspace(-spec.h / 2, spec.h / 2, n_thickness)
    _, sig_fem = recover_strain_stress(field_, x_mid, x3)
    wpoly = manufactured.displacement_poly(case, spec.L)
    slope_poly = np.polynomial.polynomial.polyder(wpoly)
    hor = Horizon(min(l_f, x_mid), min(l_f, spec.L - x_mid))
    dth = rc_derivative(slope_poly, x_mid, hor, alpha)
    sig_exact = spec.E * (-x3 * dth)
    err_sigma = float(np.max(np.abs(sig_fem - sig_exact)) / np.max(np.abs(sig_exact)))

    scale = deflection_scale(spec, mc.scale_kind)
    return BenchRow(
        alpha=alpha, lf=l_f, ne=n_e, element=element,
        w_max_norm=float(np.max(np.abs(w_fem)) * scale),
        err_rel=max(err_w, err_sigma),
        runtime_s=time.perf_counter() - t0,
        err_w=err_w, err_sigma=err_sigma,
        label=f"validation-{case}",
    )


def run_eringen(
    ratios: tuple[int, ...] = (5, 10, 15, 20),
    *,
    n_e: int = 300,
    quad: QuadratureProfile | None = None,
    aspect_ratio: float = 25.0,
) -> BenchReport:
    """Exponential-kernel cantilever benchmark: UDL, full-domain horizon.

    ``ratios`` are thickness-to-kernel-length values h/l_f.  The beam uses
    the effective modulus E/(1 - nu^2) with nu = 1/3 so the normalized tip
    deflection reproduces the published reference scale, whose local limit
    is (1 - nu^2)/8.  Reported ``err_rel`` is the deviation from the
    published values in :data:`ERINGEN_TIP_REFERENCE`.
    """
    quad = quad or QuadratureProfile()
    L = DEFAULT_L
    h = L / aspect_ratio
    report = BenchReport()
    for r in ratios:
        l_f = h / r
        t0 = time.perf_counter()
        spec = BeamSpec(
            L=L, h=h, b=h, E=DEFAULT_E, bc="cantilever", load=LoadCase.udl(1.0),
            frac=FractionalParams(alpha=0.5, l_f=l_f),
        )
        mesh = build_mesh(L, n_e)
        field_ = solve(apply_bcs(build_system(mesh, spec, "eringen-exponential", quad)))
        # the reference beams are stiffer by 1/(1 - nu^2) than the nominal EI
        # used in the normalization (plate-modulus convention)
        w_tip = float(field_.w(L)) * deflection_scale(spec, "eringen-udl") * (
            1.0 - ERINGEN_BENCHMARK_POISSON**2
        )
        ref = ERINGEN_TIP_REFERENCE.get(r)
        err = abs(w_tip - ref) / ref if ref else float("nan")
        report.rows.append(
            BenchRow(
                alpha=1.0, lf=l_f, ne=n_e, element="two-noded-C1",
                w_max_norm=w_tip, err_rel=err,
                runtime_s=time.perf_counter() - t0, label=f"eringen-h/lf={r}",
            )
        )
    return report


def run_convergence(
    alpha: float,
    l_f: float,
    element: str = "two-noded-C1",
    n_inf: tuple[int, ...] = (2, 5, 10, 20),
    *,
    quad: QuadratureProfile | None = None,
) -> BenchReport:
    """Elements-per-horizon refinement of the clamped UDL beam.

    Reports the normalized midspan deflection for each refinement level with
    the element count tied to the horizon: N_e = N_inf * (L / l_f).  Uses the
    whole-element horizon rounding so coarse levels land on the published
    convergence behaviour.
    """
    quad = quad or TABLE_QUAD
    report = BenchReport()
    _flag_regime(alpha)
    for ninf in n_inf:
        n_e = int(round(ninf * DEFAULT_L / l_f))
        t0 = time.perf_counter()
        spec = default_spec(alpha, l_f, bc="clamped-clamped", load=LoadCase.udl(1.0))
        mesh = build_mesh(spec.L, n_e, element)
        field_ = solve(apply_bcs(build_system(mesh, spec, "fractional", quad)))
        w_norm = float(field_.w(spec.L / 2.0)) * deflection_scale(spec, "udl-clamped")
        report.rows.append(
            BenchRow(
                alpha=alpha, lf=l_f, ne=n_e, element=element,
                w_max_norm=w_norm, runtime_s=time.perf_counter() - t0,
                label=f"converge-Ninf={ninf}",
            )
        )
    return report


def _sweep_cell(args):
    bc, load, alpha, l_f, ninf, element, quad, n_profile = args
    spec = default_spec(alpha, l_f, bc=bc, load=load)
    n_e = int(round(ninf * spec.L / l_f))
    t0 = time.perf_counter()
    mesh = build_mesh(spec.L, n_e, element)
    field_ = solve(apply_bcs(build_system(mesh, spec, "fractional", quad)))
    xs = np.linspace(0.0, spec.L, n_profile)
    w_norm = field_.w(xs) * deflection_scale(spec)
    row = BenchRow(
        alpha=alpha, lf=l_f, ne=n_e, element=element,
        w_max_norm=float(np.max(np.abs(w_norm))),
        runtime_s=time.perf_counter() - t0,
        label=f"sweep-{bc}",
    )
    return row, (xs, w_norm)


def run_sweep(
    bc: str,
    load: LoadCase,
    alphas: tuple[float, ...],
    lfs: tuple[float, ...],
    *,
    n_inf: int = 10,
    element: str = "two-noded-C1",
    quad: QuadratureProfile | None = None,
    threads: int = 1,
    n_profile: int = 201,
) -> tuple[BenchReport, dict]:
    """Parametric grid over fractional order and horizon length.

    Returns the report plus normalized deflection profiles keyed by
    ``(alpha, l_f)``, in deterministic parameter order regardless of the
    worker count.
    """
    quad = quad or QuadratureProfile()
    for a in alphas:
        _flag_regime(a)
    cells = [(bc, load, a, lf, n_inf, element, quad, n_profile) for a in alphas for lf in lfs]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sweep_cell, cells))
    else:
        results = [_sweep_cell(c) for c in cells]
    report = BenchReport()
    curves = {}
    for (cell, (row, curve)) in zip(cells, results):
        report.rows.append(row)
        curves[(cell[2], cell[3])] = curve
    return report, curves
