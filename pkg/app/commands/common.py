from typing import Any, Dict, List, Optional, Sequence

from app.algebra.koszul import CompleteIntersection, GradedDimensionTable
from app.algebra.parser import parse_relations
from app.algebra.polycore import Polynomial, QuotientAlgebra, WeightSystem
from app.core.exceptions import UsageError
from app.core.routing import Option
from app.models.models import DegreeRow, JobConfig

RELATIONS = Option.of("--relations", nargs="+", metavar="EXPR", help="defining relations, e.g. 'y^2-x^3'")
RELATION = Option.of("--relation", dest="relations", action="append", metavar="EXPR", help="plane-curve relation")
VARIABLES = Option.of("--variables", nargs="+", metavar="NAME", help="variable order (default: sorted names)")
WEIGHTS = Option.of("--weights", nargs="+", type=int, metavar="W", help="positive weight per variable")
P_MAX = Option.of("--p-max", type=int, help="largest (co)homological degree")
CUTOFF = Option.of("--cutoff", type=int, help="internal-degree cutoff")


def relations(config: JobConfig) -> List[Polynomial]:
    if not config.relations:
        raise UsageError(f"{config.command.value} needs --relations")
    return parse_relations(config.relations, config.variables)


def weights(config: JobConfig) -> Optional[WeightSystem]:
    return WeightSystem(tuple(config.weights)) if config.weights else None


def algebra(config: JobConfig) -> QuotientAlgebra:
    rels = relations(config)
    return QuotientAlgebra(rels[0].variables, rels, weights=weights(config))


def complete_intersection(config: JobConfig) -> CompleteIntersection:
    return CompleteIntersection(relations(config), weights=weights(config))


def degree_rows(table: GradedDimensionTable) -> List[DegreeRow]:
    rows = [
        DegreeRow(p=e.p, hodge=e.hodge, internal=e.internal, dim=e.dim, stable=e.stable)
        for e in table.entries
        if e.dim or not e.stable
    ]
    return sorted(rows, key=lambda r: (r.p, r.hodge, r.internal if r.internal is not None else 0))


def totals(table: GradedDimensionTable, degrees: Sequence[int]) -> Dict[str, Dict[str, int]]:
    out: Dict[str, Dict[str, int]] = {}
    for p in degrees:
        hodges = sorted({e.hodge for e in table.entries if e.p == p})
        out[str(p)] = {str(h): table.total(p, h) for h in hodges}
    return out


def string_map(values: Dict[Any, Any]) -> Dict[str, Any]:
    return {str(k): v for k, v in sorted(values.items())}
