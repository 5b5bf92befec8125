"""FFT solvers for periodic linear-elastic homogenization on voxel grids."""

from .elastic import (IsotropicModuli, LoadingSpec, apply_isotropic_elasticity,
                      frobenius_norm, matrix_moduli, phase_moduli)
from .grid import (GridSpec, PhaseGrid, backward_transform, dump_field,
                   forward_transform, load_field, mean_tensor)
from .green import (FrequencyRule, GreenPlan, Scheme, apply_green, green_tensor,
                    k_vector, special_frequency_rule)
from .homog import EffectiveEntry, effective_modulus, size_convergence_study
from .micro import (boolean_spheres, cube_inclusion_3d, load_phase_grid,
                    save_phase_grid, sphere_array, square_inclusion_2d)
from .oracle import dense_solve
from .refopt import DescentTrace, optimize_reference, scan_reference
from .solve import (Algorithm, SolveConfig, SolveReport, SolverDivergence,
                    StopCause, UndefinedResidual, accelerated_solve,
                    default_reference, direct_solve, equilibrium_residual, solve)

__all__ = [
    "Algorithm", "DescentTrace", "EffectiveEntry", "FrequencyRule", "GreenPlan",
    "GridSpec", "IsotropicModuli", "LoadingSpec", "PhaseGrid", "Scheme",
    "SolveConfig", "SolveReport", "SolverDivergence", "StopCause",
    "UndefinedResidual", "accelerated_solve", "apply_green",
    "apply_isotropic_elasticity", "backward_transform", "boolean_spheres",
    "cube_inclusion_3d", "default_reference", "dense_solve", "direct_solve",
    "dump_field", "effective_modulus", "equilibrium_residual",
    "forward_transform", "frobenius_norm", "green_tensor", "k_vector",
    "load_field", "load_phase_grid", "matrix_moduli", "mean_tensor",
    "optimize_reference", "phase_moduli", "save_phase_grid", "scan_reference",
    "size_convergence_study", "solve", "special_frequency_rule", "sphere_array",
    "square_inclusion_2d",
]
