from typing import Any, Dict, List

from app.algebra.barcomplex import bgs_homology_dimensions, homology_dimensions, xn_bgs_homology, xn_cohomology
from app.commands.common import P_MAX, RELATIONS, VARIABLES, WEIGHTS, algebra, string_map
from app.core.logging import logger
from app.core.routing import CommandRouter, Option
from app.models.models import DegreeRow, JobConfig

router = CommandRouter()


@router.command(
    "bar-homology",
    help="brute-force Hochschild homology of the bar complex of A_+",
    options=(
        RELATIONS,
        VARIABLES,
        WEIGHTS,
        P_MAX,
        Option.of("--max-degree", type=int, help="largest internal degree"),
        Option.of("--hodge", action="store_true", help="split by Eulerian idempotents"),
    ),
)
def bar_homology(config: JobConfig) -> Dict[str, Any]:
    """Dimensions per (p, internal degree), optionally per Hodge component."""
    alg = algebra(config)
    logger.info("bar-homology | algebra=%r p_max=%s max_degree=%s", alg, config.p_max, config.max_degree)
    table = homology_dimensions(alg, config.p_max, config.max_degree)
    results: Dict[str, Any] = {
        "weights": list(alg.weights.weights),
        "totals": string_map({p: table.total(p=p) for p in range(1, config.p_max + 1)}),
    }
    rows: List[DegreeRow] = []
    if config.hodge:
        bgs = bgs_homology_dimensions(alg, config.p_max, config.max_degree)
        results["hodge"] = string_map(
            {p: string_map({k: bgs.total(p=p, k=k) for k in range(1, p + 1)}) for p in range(1, config.p_max + 1)}
        )
        rows = [DegreeRow(p=p, hodge=k, internal=d, dim=v) for (p, k, d), v in bgs.support().items()]
    else:
        rows = [DegreeRow(p=p, internal=d, dim=v) for (p, d), v in table.support().items()]
    return {"results": results, "degrees": rows}


@router.command(
    "xn-cohomology",
    help="cochain cohomology of Q[z]/(z^n) with Hodge parts",
    options=(
        Option.of("--n", type=int, required=True, help="truncation exponent n >= 2"),
        P_MAX,
        Option.of("--no-hodge", dest="skip_hodge", action="store_true", help="totals only"),
        Option.of("--with-homology", action="store_true", help="add bar homology with Hodge parts"),
        Option.of("--k-max", type=int, help="homology up to p = 2*k_max+1"),
    ),
)
def xn_cohomology_command(config: JobConfig) -> Dict[str, Any]:
    """H^p and H^{p,k} of Q[z]/(z^n) for p <= p_max."""
    logger.info("xn-cohomology | n=%s p_max=%s", config.n, config.p_max)
    table = xn_cohomology(config.n, config.p_max, hodge=not config.skip_hodge)
    results: Dict[str, Any] = {"n": config.n, "dimensions": string_map(dict(table.dimensions))}
    if table.hodge:
        results["hodge"] = string_map({p: string_map(dict(parts)) for p, parts in table.hodge.items()})
    rows = [
        DegreeRow(p=p, hodge=k or None, internal=s, dim=v)
        for (p, k, s), v in table.by_weight.support().items()
        if k or p == 0 or not table.hodge
    ]
    if config.with_homology:
        homology = xn_bgs_homology(config.n, config.k_max)
        results["homology"] = {
            "hodge": string_map(
                {f"{p},{k}": v for (p, k), v in homology.table.entries.items() if v}
            ),
            "representatives": string_map(dict(homology.representatives)),
        }
    return {"results": results, "degrees": rows}
