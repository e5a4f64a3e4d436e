"""Exact sparse linear maps over QQ backed by sympy's DomainMatrix."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

Column = Dict[int, Fraction]


def to_fraction(v) -> Fraction:
    # v is a QQ element: PythonMPQ, or gmpy2.mpq when gmpy2 is installed
    return Fraction(int(v.numerator), int(v.denominator))


def to_qq(v):
    v = Fraction(v)
    return QQ(v.numerator, v.denominator)


class LinearMap:
    """Matrix stored by sparse columns; column j is the image of source basis vector j."""

    __slots__ = ("source_dim", "target_dim", "columns")

    def __init__(self, source_dim: int, target_dim: int, columns: Sequence[Column]):
        if len(columns) != source_dim:
            raise ValueError(f"expected {source_dim} columns, got {len(columns)}")
        self.source_dim = source_dim
        self.target_dim = target_dim
        self.columns: List[Column] = [{r: Fraction(v) for r, v in col.items() if v} for col in columns]

    @classmethod
    def zero(cls, source_dim: int, target_dim: int) -> "LinearMap":
        return cls(source_dim, target_dim, [{} for _ in range(source_dim)])

    def is_zero(self) -> bool:
        return not any(self.columns)

    def _rows(self) -> Dict[int, Dict[int, Fraction]]:
        rows: Dict[int, Dict[int, Fraction]] = {}
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                rows.setdefault(r, {})[c] = v
        return rows

    def _qq_matrix(self, extra: Optional[Column] = None) -> DomainMatrix:
        rows = self._rows()
        width = self.source_dim
        if extra is not None:
            for r, v in extra.items():
                if v:
                    rows.setdefault(r, {})[width] = Fraction(v)
            width += 1
        data = {
            r: {c: to_qq(v) for c, v in row.items()}
            for r, row in rows.items()
        }
        return DomainMatrix(data, (self.target_dim, width), QQ)

    def rank(self) -> int:
        if self.is_zero():
            return 0
        # scale rows to integers and eliminate fraction-free
        data = {}
        for r, row in self._rows().items():
            scale = lcm(*(v.denominator for v in row.values()))
            data[r] = {c: ZZ(int(v * scale)) for c, v in row.items()}
        matrix = DomainMatrix(data, (self.target_dim, self.source_dim), ZZ)
        _, _, pivots = matrix.rref_den(method="FF")
        return len(pivots)

    def nullspace(self) -> List[Column]:
        if self.source_dim == 0:
            return []
        if self.is_zero():
            return [{j: Fraction(1)} for j in range(self.source_dim)]
        kernel = self._qq_matrix().nullspace()
        vectors: List[Column] = [{} for _ in range(kernel.shape[0])]
        for (i, j), v in kernel.to_dok().items():
            if v:
                vectors[i][j] = to_fraction(v)
        return vectors

    def solve(self, rhs: Column) -> Optional[Column]:
        """A particular x with self(x) = rhs, or None when rhs is outside the image."""
        rhs = {r: Fraction(v) for r, v in rhs.items() if v}
        if not rhs:
            return {}
        if self.is_zero():
            return None
        reduced, pivots = self._qq_matrix(rhs).rref()
        if self.source_dim in pivots:
            return None
        entries = reduced.to_dok()
        solution: Column = {}
        for row, col in enumerate(pivots):
            v = entries.get((row, self.source_dim))
            if v:
                solution[col] = to_fraction(v)
        return solution

    def apply(self, vector: Column) -> Column:
        out: Column = {}
        for j, a in vector.items():
            if not a:
                continue
            for r, v in self.columns[j].items():
                s = out.get(r, 0) + a * v
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        if other.target_dim != self.source_dim:
            raise ValueError("dimension mismatch in composition")
        return LinearMap(other.source_dim, self.target_dim, [self.apply(col) for col in other.columns])

    def hstack(self, extra: Sequence[Column]) -> "LinearMap":
        return LinearMap(self.source_dim + len(extra), self.target_dim, list(self.columns) + list(extra))

    def __repr__(self) -> str:
        return f"LinearMap({self.source_dim} -> {self.target_dim}, nnz={sum(map(len, self.columns))})"
