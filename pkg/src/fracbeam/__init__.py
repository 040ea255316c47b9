"""Finite elements for fractional-order nonlocal Euler-Bernoulli beams.

The package assembles the nonlocal stiffness system arising from
Riesz-Caputo fractional kinematics, solves static bending/axial problems
under the standard boundary conditions, and ships benchmark drivers for
manufactured-solution validation, the exponential-kernel comparison, mesh
convergence, and parametric softening studies.
"""

from .assembly import (
    BtildeRow,
    HorizonElements,
    NonlocalSystem,
    QuadratureProfile,
    assemble_load,
    assemble_stiffness,
    btilde_at,
    build_system,
    horizon_elements,
)
from .beam import (
    BC_KINDS,
    BeamSpec,
    BendingRigidity,
    FractionalParams,
    LoadCase,
    resolve_horizon,
    rigidity,
)
from .fracops import (
    GaussRule,
    Horizon,
    gauss_rule,
    kernel_attenuation,
    power_law_moment,
    rc_boundary_limit,
    rc_derivative,
)
from .mesh import ElementBasis, Mesh, build_mesh, dof_map
from .solve import (
    ConstraintSet,
    SolutionField,
    SolverError,
    apply_bcs,
    constraints_for,
    deflection_scale,
    normalize,
    recover_strain_stress,
    resultants,
    solve,
    stress_scale,
)

__version__ = "0.1.0"

__all__ = [
    "BC_KINDS",
    "BeamSpec",
    "BendingRigidity",
    "BtildeRow",
    "ConstraintSet",
    "ElementBasis",
    "FractionalParams",
    "GaussRule",
    "Horizon",
    "HorizonElements",
    "LoadCase",
    "Mesh",
    "NonlocalSystem",
    "QuadratureProfile",
    "SolutionField",
    "SolverError",
    "apply_bcs",
    "assemble_load",
    "assemble_stiffness",
    "btilde_at",
    "build_mesh",
    "build_system",
    "constraints_for",
    "deflection_scale",
    "dof_map",
    "gauss_rule",
    "horizon_elements",
    "kernel_attenuation",
    "normalize",
    "power_law_moment",
    "rc_boundary_limit",
    "rc_derivative",
    "recover_strain_stress",
    "resolve_horizon",
    "resultants",
    "rigidity",
    "solve",
    "stress_scale",
    "__version__",
]
