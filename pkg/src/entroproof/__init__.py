"""Exact prover for linear information inequalities over the s-variables of an information diagram."""

from .algebra import JordanForm, LinPoly, dimension_reduce, gauss_jordan, reduce_poly, solve_linear_system
from .atoms import (
    MeasureTerm,
    SVar,
    atom_from_svar,
    elemental_inequalities,
    expand_measure,
    joint_entropy_vector,
    svar_from_atom,
    svar_sequence,
)
from .lp import LPError, LPResult, cone_positive, direct_lp_prove, feasible
from .parser import ExprAST, Query, QueryError, format_expression, lower, parse_expression, parse_query
from .prover import (
    ProofCertificate,
    Verdict,
    check_certificate,
    prove_identity,
    prove_inequality,
    stats,
    verify_certificate,
)
from .simplify import (
    InequalitySet,
    implied_equalities,
    minimal_characterization,
    reduced_minimal_characterization,
)
from .types import LPStatus, ProblemStats, StatementKind, VerdictStatus

__version__ = "0.1.0"
