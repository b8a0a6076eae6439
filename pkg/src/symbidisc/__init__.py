"""Function theory and interpolation screening on the symmetrised bidisc.

The package provides membership tests for the symmetrised bidisc, rational
inner maps into it and their royal-node structure, the pencil conditions
that screen interpolation data for solvability, classification of rational
inner maps by auxiliary/target degree, a constructive generator separating
consecutive pencil conditions, and the 2x2 spectral reduction.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .cnu import (CnuReport, GammaData, auxiliary_extremal, check_cnu,
                  dense_constant_scan, flat_case_decision, pencil_matrix,
                  x_norm)
from .config import RunConfig
from .counterexample import CounterexampleReport, generate, verify
from .eclass import (EClassReport, cancellation_points, classify,
                     degree_bound_check, in_Enuk, phi_compose)
from .errors import (NotExtremalError, PolePointError, RootFindingError,
                     ScalarMatrixError, SearchBudgetError, SpectralRadiusError,
                     SymbidiscError, ValidationError)
from .gamma import (GammaMap, GammaPoint, InnerCheck, Membership, RoyalNode,
                    caratheodory_distance, is_full, is_superficial,
                    is_symmetrization, kobayashi_defect, membership, phi,
                    pseudohyperbolic, royal_nodes, structural_form,
                    verify_gamma_inner)
from .pick import NPData, NPStatus, np_status, pick_matrix, schur_reduce, solve_extremal
from .ratfun import (BlaschkeProduct, Poly, RationalFn, classify_inner,
                     mobius_from_boundary_triple, phasar_derivative,
                     reduce_rational, same_cyclic_order)
from .spectral import SpectralNPProblem, companion, screen, to_gamma_data

__version__ = "0.1.0"
