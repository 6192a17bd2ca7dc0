"""Schur stability of real monic polynomials through the iterated l1 test."""

from .cases import (
    CournotParams,
    RickerOutcome,
    RickerParams,
    cournot_closed_form,
    cournot_polys,
    cournot_verify,
    ricker_conditions,
    ricker_grid_spec,
    ricker_quadratic,
    ricker_verdict,
)
from .engine import (
    AlgoConfig,
    Certificate,
    SignPattern,
    StageTrace,
    Verdict,
    check_l1,
    degree2_st,
    iterate_stage,
    necessary_checks,
    run_algorithm,
    sign_pattern,
    sign_pattern_exact,
    stage_traces,
    substitute_general,
)
from .errors import BackendMismatch, InvalidCell, InvalidInput, RootFindingError, SchurError, UnknownMapping
from .jury import JuryTable, JuryVerdict, jury_table, jury_verdict
from .poly import GeneralPolynomial, MonicPolynomial, evaluate, l1_norm, mod_reduce, mul, normalize
from .regions import Axis, GridSpec, RegionGrid, c2_membership, c3_membership, scan_region
from .roots import RootSet, SchurClass, classify_roots, find_roots, is_schur_numeric
from .scalar import Backend, Scalar, parse_scalar

__version__ = "0.1.0"


def main() -> None:
    from .cli import main as cli_main

    raise SystemExit(cli_main())
