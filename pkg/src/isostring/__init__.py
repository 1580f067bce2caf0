"""Isospectral deformations of discrete strings.

Forward spectral problem, deformation fields, flow integration, the exact
inverse-spectral solution and the line picture, over exact rationals or
floats.
"""

from .errors import (BetaZero, DegenerateBC, DegenerateSpectrum, DomainError, IsostringError,
                     LengthOverflow, MassCollapse, NonPositiveMass, NotAStieltjesFraction,
                     OrderingViolation, PoleAtZ, ValidationError)
from .fields import (BetaFunction, FieldSet, FlowSpec, beta, beta_closed_form, bc_residuals, build_fields,
                     endpoint_brackets, green_sum_b0, k_diagnostic, omega, zs_matrix_entries)
from .flow import FlowState, Trajectory, flow_rhs, flow_rhs_float, integrate, invariants, lax_residuals
from .inverse import EvolvedMeasure, euclidean_cf, evolve_measure, exact_solution, exact_state, reassemble
from .liouville import LineState, inverse_point, line_residuals, map_point, map_state
from .piecewise import PiecewisePoly
from .poly import Poly
from .string_core import (DIRICHLET, BoundaryConditions, DiscreteString, PropagatedSolution, char_poly,
                          eigenvalues, greens_function, new_string, propagate)
from .weyl_cf import ContinuedFraction, SpectralData, cf_expand, partial_fractions, weyl_eval

__version__ = "0.1.0"
