"""Group algebras QQ[S_n], Eulerian idempotents and place-permutation actions on tensors."""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial, lcm
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from app.core.config import settings
from app.core.exceptions import PreconditionError, ResourceLimitError
from app.core.logging import logger

Permutation = Tuple[int, ...]
Scalar = Union[int, Fraction]
Tensor = Tuple
TensorSum = Mapping[Tensor, Scalar]

# composition tables beyond this degree cost more than they save
_TABLE_LIMIT = 6


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def is_permutation(sigma: Sequence[int]) -> bool:
    return sorted(sigma) == list(range(1, len(sigma) + 1))


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    """(sigma tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t - 1] for t in tau)


def inverse(sigma: Permutation) -> Permutation:
    out = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        out[s - 1] = i
    return tuple(out)


def sign(sigma: Permutation) -> int:
    inversions = sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma)) if sigma[i] > sigma[j])
    return -1 if inversions % 2 else 1


def descent_count(sigma: Permutation) -> int:
    return sum(1 for a, b in zip(sigma, sigma[1:]) if a > b)


def format_permutation(sigma: Permutation) -> str:
    if len(sigma) < 10:
        return "".join(map(str, sigma))
    return ",".join(map(str, sigma))


class SymmetricGroup:
    def __init__(self, n: int):
        self.n = n
        self.elements: List[Permutation] = list(permutations(range(1, n + 1)))
        self.index: Dict[Permutation, int] = {p: i for i, p in enumerate(self.elements)}
        self._table: Optional[List[List[int]]] = None

    def table(self) -> List[List[int]]:
        if self._table is None:
            idx = self.index
            self._table = [[idx[compose(s, t)] for t in self.elements] for s in self.elements]
        return self._table


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> SymmetricGroup:
    return SymmetricGroup(n)


class GroupAlgebraElement:
    """Finite QQ-combination of permutations of {1..n}; product is composition."""

    __slots__ = ("degree", "_terms")

    def __init__(self, degree: int, terms: Optional[Mapping[Permutation, Scalar]] = None):
        self.degree = degree
        clean: Dict[Permutation, Fraction] = {}
        for sigma, c in (terms or {}).items():
            sigma = tuple(sigma)
            if len(sigma) != degree or not is_permutation(sigma):
                raise PreconditionError(f"{sigma} is not a permutation of 1..{degree}")
            c = Fraction(c)
            if c:
                clean[sigma] = c
        self._terms = clean

    @classmethod
    def _wrap(cls, degree: int, terms: Dict[Permutation, Fraction]) -> "GroupAlgebraElement":
        el = object.__new__(cls)
        el.degree = degree
        el._terms = terms
        return el

    @classmethod
    def identity(cls, n: int) -> "GroupAlgebraElement":
        return cls._wrap(n, {identity(n): Fraction(1)})

    @property
    def terms(self) -> Mapping[Permutation, Fraction]:
        return dict(self._terms)

    def coefficient(self, sigma: Permutation) -> Fraction:
        return self._terms.get(tuple(sigma), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "GroupAlgebraElement"):
        if other.degree != self.degree:
            raise PreconditionError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        terms = dict(self._terms)
        for s, c in other._terms.items():
            v = terms.get(s, 0) + c
            if v:
                terms[s] = v
            else:
                terms.pop(s, None)
        return GroupAlgebraElement._wrap(self.degree, terms)

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement._wrap(self.degree, {s: -c for s, c in self._terms.items()})

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "GroupAlgebraElement":
        c = Fraction(c)
        if not c:
            return GroupAlgebraElement._wrap(self.degree, {})
        return GroupAlgebraElement._wrap(self.degree, {s: v * c for s, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        self._check(other)
        n = self.degree
        if not self._terms or not other._terms:
            return GroupAlgebraElement._wrap(n, {})
        group = symmetric_group(n)
        # integer numerators over a common denominator keep the inner loop cheap
        da = lcm(*(c.denominator for c in self._terms.values()))
        db = lcm(*(c.denominator for c in other._terms.values()))
        left = {group.index[s]: int(c * da) for s, c in self._terms.items()}
        right = {group.index[s]: int(c * db) for s, c in other._terms.items()}
        acc: Dict[int, int] = defaultdict(int)
        if n <= _TABLE_LIMIT:
            table = group.table()
            for i, a in left.items():
                row = table[i]
                for j, b in right.items():
                    acc[row[j]] += a * b
        else:
            els, idx = group.elements, group.index
            for i, a in left.items():
                for j, b in right.items():
                    acc[idx[compose(els[i], els[j])]] += a * b
        den = da * db
        terms = {group.elements[k]: Fraction(v, den) for k, v in acc.items() if v}
        return GroupAlgebraElement._wrap(n, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.degree == other.degree and self._terms == other._terms

    __hash__ = None

    def to_dict(self) -> Dict[str, str]:
        return {format_permutation(s): str(c) for s, c in sorted(self._terms.items())}

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for s, c in sorted(self._terms.items()):
            body = f"[{format_permutation(s)}]" if abs(c) == 1 else f"{abs(c)}*[{format_permutation(s)}]"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"GroupAlgebraElement({self.degree}, {self})"


def _garsia_coefficients(n: int) -> Dict[int, List[Fraction]]:
    """d -> coefficients of x^0..x^n in (1/n!) prod_{j<n} (x - d + j)."""
    out: Dict[int, List[Fraction]] = {}
    nf = factorial(n)
    for d in range(n):
        poly = [1]
        for j in range(n):
            shift = j - d
            nxt = [0] * (len(poly) + 1)
            for k, c in enumerate(poly):
                nxt[k + 1] += c
                nxt[k] += shift * c
            poly = nxt
        out[d] = [Fraction(c, nf) for c in poly]
    return out


@lru_cache(maxsize=None)
def _eulerian(n: int) -> Tuple[GroupAlgebraElement, ...]:
    coeffs = _garsia_coefficients(n)
    parts: List[Dict[Permutation, Fraction]] = [{} for _ in range(n)]
    for sigma in symmetric_group(n).elements:
        row = coeffs[descent_count(sigma)]
        sgn = sign(sigma)
        for k in range(1, n + 1):
            if row[k]:
                parts[k - 1][sigma] = row[k] * sgn
    logger.debug("eulerian_idempotents | n=%s computed", n)
    return tuple(GroupAlgebraElement._wrap(n, p) for p in parts)


def eulerian_idempotents(n: int) -> Tuple[GroupAlgebraElement, ...]:
    """(e_n(1), ..., e_n(n)) read off Garsia's generating function."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    cap = settings.max_idempotent_degree
    if n > cap:
        raise ResourceLimitError(f"n={n} exceeds the idempotent cap {cap}", extra={"cap": cap})
    return _eulerian(n)


def sign_average(n: int) -> GroupAlgebraElement:
    nf = factorial(n)
    return GroupAlgebraElement._wrap(
        n, {s: Fraction(sign(s), nf) for s in symmetric_group(n).elements}
    )


def permute_tensor(sigma: Permutation, t: Tensor) -> Tensor:
    """Place the i-th factor at position sigma(i)."""
    out = [None] * len(t)
    for i, s in enumerate(sigma):
        out[s - 1] = t[i]
    return tuple(out)


def act_on_tensor(g: GroupAlgebraElement, tensors: TensorSum) -> Dict[Tensor, Fraction]:
    out: Dict[Tensor, Fraction] = {}
    for t, c in tensors.items():
        if len(t) != g.degree:
            raise PreconditionError(f"tensor length {len(t)} does not match degree {g.degree}")
        if not c:
            continue
        for sigma, a in g._terms.items():
            u = permute_tensor(sigma, t)
            v = out.get(u, 0) + a * c
            if v:
                out[u] = v
            else:
                out.pop(u, None)
    return out


def shuffle_product(a: TensorSum, b: TensorSum) -> Dict[Tensor, Fraction]:
    """Signed shuffle: sum over (p,q)-shuffles of sgn(sigma) sigma.(a (x) b)."""
    out: Dict[Tensor, Fraction] = {}
    for s, cs in a.items():
        for t, ct in b.items():
            p, q = len(s), len(t)
            for slots in combinations(range(p + q), p):
                inversions = sum(pos - i for i, pos in enumerate(slots))
                word = [None] * (p + q)
                for pos, factor in zip(slots, s):
                    word[pos] = factor
                rest = iter(t)
                for pos in range(p + q):
                    if word[pos] is None:
                        word[pos] = next(rest)
                key = tuple(word)
                v = out.get(key, 0) + (-1 if inversions % 2 else 1) * cs * ct
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out
