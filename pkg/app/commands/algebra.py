from typing import Any, Dict

from app.algebra.symgroup import GroupAlgebraElement, eulerian_idempotents, sign_average
from app.core.logging import logger
from app.core.routing import CommandRouter, Option
from app.models.models import JobConfig

router = CommandRouter()


@router.command(
    "idempotents",
    help="Eulerian idempotents e_n(1..n) in QQ[S_n]",
    options=(
        Option.of("--n", type=int, required=True, help="degree of the symmetric group"),
        Option.of("--verify", action="store_true", help="also check idempotence and orthogonality"),
    ),
)
def idempotents(config: JobConfig) -> Dict[str, Any]:
    """List e_n(k) with exact rational coefficients."""
    n = config.n
    logger.info("idempotents | n=%s verify=%s", n, config.verify)
    es = eulerian_idempotents(n)
    results: Dict[str, Any] = {
        "n": n,
        "idempotents": {f"e_{n}({k})": e.to_dict() for k, e in enumerate(es, start=1)},
        "top_is_sign_average": es[-1] == sign_average(n),
    }
    if config.verify:
        total = es[0]
        for e in es[1:]:
            total = total + e
        results["complete"] = total == GroupAlgebraElement.identity(n)
        results["idempotent"] = all(e * e == e for e in es)
        results["orthogonal"] = all((a * b).is_zero() for i, a in enumerate(es) for j, b in enumerate(es) if i != j)
    return {"results": results}
