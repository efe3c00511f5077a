"""Exact-arithmetic obstruction engine for sections of Stiefel varieties."""

from .lattice import IntMatrix, NoSolution, SnfDecomposition, Solution, smith_normal_form, solve_diophantine
from .ktheory import KClass, TruncProjKGroup, adams_matrix, adams_on_monomial, restriction_matrix
from .retract_solver import Exists, Impossible, RetractProblem, closed_form_constraints, decide_retract
from .cohomology import derive_join_coefficients, intrinsic_join_pullback, splitting_chase
from .connectivity import ConnFact, ProofTrace, derive_connectivity, replay_proof, revalidate
from .verdict import (
    FieldDescriptor,
    SectionQuery,
    SectionVerdict,
    decide_section,
    reduce_query,
    sweep,
    to_stably_free,
    verify_verdict,
)

__version__ = "0.1.0"
