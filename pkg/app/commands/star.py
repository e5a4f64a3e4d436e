import re
from typing import Any, Dict, List

from app.algebra.parser import parse_polynomial
from app.algebra.starprod import (
    StarProduct,
    cochain_table,
    miniversal_family,
    star_multiply,
    triviality_solve,
    verify_obstruction_vanishing,
)
from app.commands.common import CUTOFF, RELATION, RELATIONS, VARIABLES, WEIGHTS, complete_intersection, relations
from app.core.exceptions import UsageError
from app.core.logging import logger
from app.core.routing import CommandRouter, Option
from app.models.models import JobConfig

router = CommandRouter()

Q1 = Option.of("--q1", help="first-order correction Q_1")

_STAR = re.compile(r"[⋆@]")


def _plane_relation(config: JobConfig):
    rels = relations(config)
    if len(rels) != 1:
        raise UsageError("give exactly one --relation")
    return rels[0]


@router.command(
    "star",
    help="star product from the deformed relation R - hbar Q_1 - hbar^2 Q_2 - ...",
    options=(
        RELATION,
        VARIABLES,
        Q1,
        Option.of("--q", action="append", metavar="EXPR", help="next correction Q_2, Q_3, ... (repeatable)"),
        Option.of("--order", type=int, help="truncation order N of hbar"),
        Option.of("--eval", dest="eval_expr", metavar="'F ⋆ G'", help="evaluate one product"),
        Option.of("--table-degree", type=int, help="PBW degree cap for the C_i tables"),
        Option.of("--samples", type=int, help="random triples for the associativity check"),
    ),
)
def star(config: JobConfig) -> Dict[str, Any]:
    """C_i tables, one evaluated product and the associativity check."""
    r = _plane_relation(config)
    variables = r.variables
    corrections = [parse_polynomial(text, variables) for text in ([config.q1] if config.q1 else []) + config.q]
    sp = StarProduct(r, corrections, order=max(config.order, len(corrections)))
    logger.info("star | sp=%r table_degree=%s", sp, config.table_degree)
    results: Dict[str, Any] = {
        "relation": str(sp.relation),
        "variable": sp.variable,
        "order": sp.order,
        "corrections": [str(q) for q in sp.deformation.corrections],
    }
    if config.eval_expr:
        parts = _STAR.split(config.eval_expr)
        if len(parts) != 2:
            raise UsageError("--eval expects 'F ⋆ G' (or 'F @ G')")
        f, g = (sp.normal_form(parse_polynomial(p.strip(), variables)) for p in parts)
        product = star_multiply(sp, f, g)
        results["eval"] = {
            "f": str(f),
            "g": str(g),
            "product": str(product),
            "coefficients": [str(c) for c in product.coefficients],
        }
    tables: Dict[str, List[Dict[str, str]]] = {}
    for i in range(1, sp.order + 1):
        entries = cochain_table(sp, i, config.table_degree)
        tables[f"C_{i}"] = [
            {"f": str(a), "g": str(b), "value": str(v)} for (a, b), v in entries.items() if v
        ]
    results["tables"] = tables
    report = verify_obstruction_vanishing(sp, sp.order, samples=config.samples, seed=config.seed)
    results["associativity"] = {"passed": report.passed, "samples": report.samples, "failures": len(report.failures)}
    return {"results": results, "ok": report.passed}


@router.command(
    "trivial",
    help="is the first-order deformation R - hbar Q_1 trivial?",
    options=(
        RELATION,
        VARIABLES,
        Q1,
        Option.of("--degree-bound", type=int, help="degree bound for the derivation coefficients"),
    ),
)
def trivial(config: JobConfig) -> Dict[str, Any]:
    """Witness derivation E with E(R) = Q_1 mod R, or an obstruction certificate."""
    r = _plane_relation(config)
    if not config.q1:
        raise UsageError("trivial needs --q1")
    q1 = parse_polynomial(config.q1, r.variables)
    result = triviality_solve(r, q1, config.degree_bound)
    logger.info("trivial | R=%s Q1=%s status=%s", r, q1, result.status)
    return {
        "results": {
            "status": result.status,
            "degree_bound": result.degree_bound,
            "witness": str(result.witness) if result.witness else None,
            "certificate": str(result.certificate) if result.certificate is not None else None,
            "detail": result.detail,
        }
    }


@router.command(
    "miniversal",
    help="miniversal commutative deformation over the Harrison-2 basis",
    options=(RELATIONS, VARIABLES, WEIGHTS, CUTOFF),
)
def miniversal(config: JobConfig) -> Dict[str, Any]:
    """f~_j = f_j - sum_k t_k v_k[j]."""
    ci = complete_intersection(config)
    family = miniversal_family(ci, config.cutoff)
    return {
        "results": {
            "parameters": list(family.parameters),
            "relations": [str(f) for f in family.relations],
            "classes": [[str(p) for p in v] for v in family.classes],
        }
    }
