from typing import Any, Dict

from app.algebra.koszul import (
    FreeModuleComplex,
    graded_cohomology,
    harrison_1_2,
    hkr_cohomology_complex,
    hkr_homology_complex,
    tjurina_algebra,
)
from app.commands.common import CUTOFF, P_MAX, RELATIONS, VARIABLES, WEIGHTS, complete_intersection, degree_rows, totals
from app.core.exceptions import PreconditionError
from app.core.logging import logger
from app.core.routing import CommandRouter
from app.models.models import JobConfig

router = CommandRouter(options=(RELATIONS, VARIABLES, WEIGHTS, CUTOFF))


def _structure_checks(cx: FreeModuleComplex) -> Dict[str, bool]:
    square_zero = cx.verify_square_zero()
    hodge = cx.verify_hodge_preserving()
    if not (square_zero and hodge):
        raise PreconditionError(
            f"{cx.name} failed its structure checks", extra={"square_zero": square_zero, "hodge_preserving": hodge}
        )
    return {"square_zero": square_zero, "hodge_preserving": hodge}


@router.command("hkr-cohomology", help="Hochschild cohomology through the small complex A[eta; b]", options=(P_MAX,))
def hkr_cohomology(config: JobConfig) -> Dict[str, Any]:
    """H^{p} split by Hodge degree and internal degree."""
    ci = complete_intersection(config)
    logger.info("hkr-cohomology | ci=%r p_max=%s cutoff=%s", ci, config.p_max, config.cutoff)
    cx = hkr_cohomology_complex(ci, config.p_max)
    checks = _structure_checks(cx)
    table = graded_cohomology(cx, config.cutoff)
    results = {
        "graded": ci.graded,
        "weights": list(ci.weights.weights),
        "checks": checks,
        "totals": totals(table, range(0, config.p_max + 1)),
    }
    return {"results": results, "degrees": degree_rows(table), "stable": table.stable()}


@router.command("hkr-homology", help="Hochschild homology through the small complex A[xi; a]", options=(P_MAX,))
def hkr_homology(config: JobConfig) -> Dict[str, Any]:
    """HH_l = H^{-l} split by Hodge degree and internal degree."""
    ci = complete_intersection(config)
    logger.info("hkr-homology | ci=%r l_max=%s cutoff=%s", ci, config.p_max, config.cutoff)
    cx = hkr_homology_complex(ci, config.p_max)
    checks = _structure_checks(cx)
    table = graded_cohomology(cx, config.cutoff)
    results = {
        "graded": ci.graded,
        "weights": list(ci.weights.weights),
        "checks": checks,
        "totals": totals(table, range(-config.p_max, 1)),
    }
    return {"results": results, "degrees": degree_rows(table), "stable": table.stable()}


@router.command("tjurina", help="Harrison H^2: cokernel of the Jacobian map")
def tjurina(config: JobConfig) -> Dict[str, Any]:
    """Monomial basis of the Tjurina algebra, or its Hilbert series when infinite."""
    ci = complete_intersection(config)
    logger.info("tjurina | ci=%r cutoff=%s", ci, config.cutoff)
    presentation = harrison_1_2(ci, config.cutoff)
    results: Dict[str, Any] = {
        "finite": presentation.finite,
        "dim": presentation.cokernel_dim,
        "basis": [_vector_text(v) for v in presentation.cokernel_basis],
        "kernel_series": {str(s): d for s, d in sorted(presentation.kernel_series.items())},
    }
    if ci.m == 1:
        results["groebner"] = [str(g) for g in tjurina_algebra(ci).groebner]
    if not presentation.finite:
        results["hilbert_series"] = list(presentation.hilbert_series)
    return {"results": results}


def _vector_text(v) -> str:
    if len(v) == 1:
        return str(v[0])
    return "(" + ", ".join(str(p) for p in v) + ")"
