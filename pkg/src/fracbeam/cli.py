"""Batch front-end: parse a run configuration, dispatch the requested study,
and emit CSV results plus gnuplot-style plot-data files.

Exit codes: 0 on success, 1 on numerical failure (singular or indefinite
system), 2 on configuration errors.  Outputs are deterministic for a fixed
configuration in single-threaded mode.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bench
from .assembly import QuadratureProfile, build_system
from .beam import BeamSpec, FractionalParams, LoadCase
from .config import ConfigError, RunConfig, parse_config, render_config
from .mesh import build_mesh
from .solve import (
    SolverError,
    apply_bcs,
    deflection_scale,
    recover_strain_stress,
    resultants,
    solve,
    stress_scale,
)

FIELD_HEADER = "x,w,w_norm,dwdx,u,N,M"
STRESS_HEADER = "x3,sigma11_norm"
REPORT_HEADER = "alpha,lf,Ne,element,w_max_norm,err_rel,runtime_s"


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _load_case(cfg: RunConfig) -> LoadCase:
    if cfg.load == "udl":
        return LoadCase.udl(cfg.q0)
    if cfg.load == "tip":
        return LoadCase.tip_point(cfg.p)
    if cfg.load == "axial-udl":
        return LoadCase.axial_udl(cfg.f0)
    if cfg.load == "mms-v1":
        return LoadCase.manufactured("v1")
    return LoadCase.manufactured("v2")


def _quad(cfg: RunConfig) -> QuadratureProfile:
    return QuadratureProfile(
        n_gp=cfg.ngp, btilde=cfg.btilde, partial_horizon=cfg.partial_horizon
    )


def _spec(cfg: RunConfig, alpha: float, lf: float) -> BeamSpec:
    return BeamSpec(
        L=cfg.L, h=cfg.h, b=cfg.b, E=cfg.E, bc=cfg.bc, load=_load_case(cfg),
        frac=FractionalParams(alpha=alpha, l_f=lf),
    )


def _n_elements(cfg: RunConfig, lf: float) -> int:
    return cfg.ne if cfg.ne > 0 else max(2, int(round(cfg.ninf * cfg.L / lf)))


def _write(path: Path, lines) -> None:
    path.write_text("\n".join(lines) + "\n")


def _report_lines(rows) -> list[str]:
    lines = [REPORT_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.alpha), _fmt(r.lf), str(r.ne), r.element,
                    _fmt(r.w_max_norm), _fmt(r.err_rel), _fmt(r.runtime_s),
                ]
            )
        )
    return lines


def _profile_blocks(curves: dict) -> list[str]:
    # gnuplot convention: two-column blocks separated by blank lines
    lines: list[str] = []
    for key in curves:
        xs, ws = curves[key]
        lines.append(f"# alpha={key[0]:g} lf={key[1]:g}")
        lines.extend(f"{_fmt(x)} {_fmt(w)}" for x, w in zip(xs, ws))
        lines.append("")
    return lines[:-1] if lines else lines


def _cmd_solve(cfg: RunConfig, out: Path) -> None:
    curves = {}
    for alpha in cfg.alpha:
        for lf in cfg.lf:
            spec = _spec(cfg, alpha, lf)
            mesh = build_mesh(cfg.L, _n_elements(cfg, lf), cfg.element)
            field = solve(apply_bcs(build_system(mesh, spec, cfg.mode, _quad(cfg))))
            try:
                scale = deflection_scale(spec)
            except ValueError:
                scale = float("nan")
            xs = mesh.nodes
            u, w, dw = mesh.interpolate_field(field.dofs, xs)
            lines = [FIELD_HEADER]
            for x, wi, dwi, ui in zip(xs, w, dw, u):
                n_res, m_res = resultants(field, float(x))
                lines.append(
                    ",".join(_fmt(v) for v in (x, wi, wi * scale, dwi, ui, n_res, m_res))
                )
            tag = f"a{alpha:g}_lf{lf:g}"
            _write(out / f"field_{tag}.csv", lines)
            if spec.load.q0 != 0.0:
                x3 = np.linspace(-spec.h / 2, spec.h / 2, 41)
                _, sig = recover_strain_stress(field, spec.L / 2, x3)
                s_lines = [STRESS_HEADER]
                s_lines += [
                    ",".join((_fmt(z), _fmt(s * stress_scale(spec))))
                    for z, s in zip(x3, sig)
                ]
                _write(out / f"stress_{tag}.csv", s_lines)
            curves[(alpha, lf)] = (xs, w * scale)
    _write(out / "w_profiles.dat", _profile_blocks(curves))


def _cmd_validate(cfg: RunConfig, out: Path) -> None:
    rows = []
    for alpha in cfg.alpha:
        for lf in cfg.lf:
            rows.append(
                bench.run_validation(
                    cfg.case, alpha, lf,
                    n_e=cfg.ne if cfg.ne > 0 else None,
                    element=cfg.element, quad=_quad(cfg),
                )
            )
    _write(out / "report.csv", _report_lines(rows))


def _cmd_converge(cfg: RunConfig, out: Path) -> None:
    rows = []
    for alpha in cfg.alpha:
        for lf in cfg.lf:
            rep = bench.run_convergence(alpha, lf, cfg.element, quad=_quad(cfg))
            rows.extend(rep.rows)
    _write(out / "report.csv", _report_lines(rows))


def _cmd_sweep(cfg: RunConfig, out: Path) -> None:
    rep, curves = bench.run_sweep(
        cfg.bc, _load_case(cfg), cfg.alpha, cfg.lf,
        n_inf=cfg.ninf, element=cfg.element, quad=_quad(cfg), threads=cfg.threads,
    )
    _write(out / "report.csv", _report_lines(rep.rows))
    _write(out / "w_profiles.dat", _profile_blocks(curves))


def _cmd_eringen(cfg: RunConfig, out: Path) -> None:
    rep = bench.run_eringen(n_e=cfg.ne if cfg.ne > 0 else 300, quad=_quad(cfg))
    _write(out / "report.csv", _report_lines(rep.rows))


def run(cfg: RunConfig) -> int:
    """Execute a parsed configuration; returns the process exit code."""
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        dispatch = {
            "solve": _cmd_solve,
            "validate": _cmd_validate,
            "converge": _cmd_converge,
            "sweep": _cmd_sweep,
            "eringen": _cmd_eringen,
        }
        dispatch[cfg.command](cfg, out)
        print(f"{cfg.command}: done in {time.perf_counter() - t0:.2f}s -> {out}")
        return 0
    except (SolverError, MemoryError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fracbeam",
        description="Nonlocal fractional-order beam solver (batch front-end)",
    )
    parser.add_argument("config", nargs="?", help="path to a key=value run configuration")
    parser.add_argument(
        "--print-defaults", action="store_true",
        help="print the effective configuration (defaults merged) and exit",
    )
    parser.add_argument("--version", action="version", version=f"fracbeam {__version__}")
    args = parser.parse_args(argv)

    try:
        if args.config is None:
            cfg = RunConfig()
            if not args.print_defaults:
                parser.error("a configuration path is required unless --print-defaults is given")
        else:
            cfg = parse_config(Path(args.config).read_text())
        if args.print_defaults:
            print(render_config(cfg), end="")
            return 0
        return run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read configuration: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
