"""Brute-force Hochschild chains on A_+ and cochains valued in A, sliced by internal degree."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from app.algebra.linalg import Column, LinearMap
from app.algebra.polycore import Monomial, Polynomial, QuotientAlgebra, WeightSystem
from app.algebra.symgroup import (
    eulerian_idempotents,
    inverse,
    permute_tensor,
    shuffle_product,
    symmetric_group,
)
from app.core.config import settings
from app.core.exceptions import PreconditionError, ResourceLimitError
from app.core.logging import logger
from app.core.workers import map_slices

Chain = Tuple[Monomial, ...]


# chains


class ChainVector:
    """Rational combination of tensors a_1 (x) ... (x) a_p of standard monomials of A_+."""

    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: QuotientAlgebra, terms: Optional[Mapping[Chain, Fraction]] = None):
        self.algebra = algebra
        clean: Dict[Chain, Fraction] = {}
        lengths = set()
        for t, c in (terms or {}).items():
            c = Fraction(c)
            if not c:
                continue
            for m in t:
                if not any(m) or not algebra.is_standard(m):
                    raise PreconditionError(f"factor {m} is not a standard monomial of A_+")
            lengths.add(len(t))
            clean[tuple(t)] = clean.get(tuple(t), Fraction(0)) + c
        if len(lengths) > 1:
            raise PreconditionError("all tensors of a chain must share one length")
        self._terms = {t: c for t, c in clean.items() if c}

    @classmethod
    def _wrap(cls, algebra: QuotientAlgebra, terms: Dict[Chain, Fraction]) -> "ChainVector":
        chain = object.__new__(cls)
        chain.algebra = algebra
        chain._terms = terms
        return chain

    @classmethod
    def from_factors(cls, algebra: QuotientAlgebra, factors: Sequence[Polynomial], coeff=1) -> "ChainVector":
        """Multilinear expansion of f_1 (x) ... (x) f_p after normal-forming each factor."""
        expanded: List[List[Tuple[Monomial, Fraction]]] = []
        for f in factors:
            nf = algebra.normal_form(f)
            if nf.constant_term():
                raise PreconditionError(f"factor {f} has a constant term and is not in A_+")
            expanded.append(list(nf.terms.items()))
        terms: Dict[Chain, Fraction] = {}
        for combo in product(*expanded):
            c = Fraction(coeff)
            for _, a in combo:
                c *= a
            key = tuple(m for m, _ in combo)
            v = terms.get(key, 0) + c
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
        return cls._wrap(algebra, terms)

    @property
    def terms(self) -> Mapping[Chain, Fraction]:
        return dict(self._terms)

    @property
    def length(self) -> Optional[int]:
        return len(next(iter(self._terms))) if self._terms else None

    def degrees(self) -> set:
        return {sum(self.algebra.degree(m) for m in t) for t in self._terms}

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "ChainVector") -> "ChainVector":
        terms = dict(self._terms)
        for t, c in other._terms.items():
            v = terms.get(t, 0) + c
            if v:
                terms[t] = v
            else:
                terms.pop(t, None)
        return ChainVector._wrap(self.algebra, terms)

    def __neg__(self) -> "ChainVector":
        return ChainVector._wrap(self.algebra, {t: -c for t, c in self._terms.items()})

    def __sub__(self, other: "ChainVector") -> "ChainVector":
        return self + (-other)

    def scale(self, c) -> "ChainVector":
        c = Fraction(c)
        return ChainVector._wrap(self.algebra, {t: v * c for t, v in self._terms.items()} if c else {})

    def tensor(self, f: Polynomial) -> "ChainVector":
        """self (x) f, expanded over the normal form of f."""
        nf = self.algebra.normal_form(f)
        if nf.constant_term():
            raise PreconditionError(f"factor {f} has a constant term and is not in A_+")
        terms: Dict[Chain, Fraction] = {}
        for t, c in self._terms.items():
            for m, a in nf.terms.items():
                key = t + (m,)
                v = terms.get(key, 0) + c * a
                if v:
                    terms[key] = v
                else:
                    terms.pop(key, None)
        return ChainVector._wrap(self.algebra, terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainVector):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = self.algebra.variables
        parts = []
        for t, c in sorted(self._terms.items()):
            word = " ⊗ ".join(Polynomial.monomial(names, m).to_string() for m in t)
            coeff = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("- " if c < 0 else "+ ") + coeff + word)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _boundary_terms(algebra: QuotientAlgebra, t: Chain) -> Iterator[Tuple[Chain, Fraction]]:
    for i in range(len(t) - 1):
        sign = -1 if i % 2 else 1
        for m, c in algebra.multiply_monomials(t[i], t[i + 1]).terms.items():
            yield t[:i] + (m,) + t[i + 2:], sign * c


def bar_differential(c: ChainVector) -> ChainVector:
    if c.is_zero():
        return c
    if c.length < 2:
        raise PreconditionError("the bar differential needs chains of length at least 2")
    terms: Dict[Chain, Fraction] = {}
    for t, a in c._terms.items():
        for u, s in _boundary_terms(c.algebra, t):
            v = terms.get(u, 0) + a * s
            if v:
                terms[u] = v
            else:
                terms.pop(u, None)
    return ChainVector._wrap(c.algebra, terms)


def positive_basis_by_degree(algebra: QuotientAlgebra, upto: int) -> Dict[int, List[Monomial]]:
    return {d: algebra.basis_of_degree(d) for d in range(1, upto + 1) if algebra.basis_of_degree(d)}


def chain_basis(algebra: QuotientAlgebra, p: int, degree: int) -> List[Chain]:
    """Standard-monomial tensors of length p and total internal degree `degree`."""
    by_degree = positive_basis_by_degree(algebra, degree)
    counts: Dict[Tuple[int, int], int] = {}

    def count(q: int, left: int) -> int:
        if q == 0:
            return 1 if left == 0 else 0
        if (q, left) not in counts:
            counts[q, left] = sum(len(b) * count(q - 1, left - d) for d, b in by_degree.items() if d <= left)
        return counts[q, left]

    size = count(p, degree)
    if size > settings.max_slice_dim:
        raise ResourceLimitError(
            f"chain slice (p={p}, degree={degree}) has {size} basis elements, cap is {settings.max_slice_dim}",
            extra={"p": p, "degree": degree, "size": size},
        )
    out: List[Chain] = []

    def extend(prefix: Chain, q: int, left: int):
        if q == 0:
            if left == 0:
                out.append(prefix)
            return
        for d, monos in by_degree.items():
            if d > left or not count(q - 1, left - d):
                continue
            for m in monos:
                extend(prefix + (m,), q - 1, left - d)

    extend((), p, degree)
    return out


def _idempotent_columns(
    basis: List[Chain], index: Dict[Chain, int], p: int, transform
) -> List[LinearMap]:
    """Matrices of e_p(1..p) on a tensor basis; `transform(sigma, t)` is the basis image of sigma."""
    idems = eulerian_idempotents(p)
    weights = [(sigma, [e.coefficient(sigma) for e in idems]) for sigma in symmetric_group(p).elements]
    columns: List[List[Column]] = [[{} for _ in basis] for _ in range(p)]
    for j, t in enumerate(basis):
        for sigma, coeffs in weights:
            row = index[transform(sigma, t)]
            for k, a in enumerate(coeffs):
                if a:
                    col = columns[k][j]
                    v = col.get(row, 0) + a
                    if v:
                        col[row] = v
                    else:
                        col.pop(row, None)
    return [LinearMap(len(basis), len(basis), cols) for cols in columns]


class DegreeSliceComplex:
    """Chain spaces C_{p,D} for p = 1..p_max at one internal degree D, with d and e_p(k)."""

    def __init__(self, algebra: QuotientAlgebra, degree: int, p_max: int):
        self.algebra = algebra
        self.degree = degree
        self.p_max = p_max
        self.bases: Dict[int, List[Chain]] = {p: chain_basis(algebra, p, degree) for p in range(1, p_max + 1)}
        self.index: Dict[int, Dict[Chain, int]] = {p: {t: i for i, t in enumerate(b)} for p, b in self.bases.items()}
        self._differentials: Dict[int, LinearMap] = {}
        self._idempotents: Dict[int, List[LinearMap]] = {}
        self._ranks: Dict[Tuple, int] = {}

    def dim(self, p: int) -> int:
        return len(self.bases.get(p, ()))

    def vector(self, c: ChainVector) -> Column:
        p = c.length
        idx = self.index[p]
        return {idx[t]: a for t, a in c.terms.items()}

    def chain(self, p: int, column: Column) -> ChainVector:
        return ChainVector._wrap(self.algebra, {self.bases[p][i]: a for i, a in column.items() if a})

    def differential(self, p: int) -> LinearMap:
        """d_p: C_p -> C_{p-1}; zero for p = 1."""
        if p not in self._differentials:
            if p <= 1:
                self._differentials[p] = LinearMap.zero(self.dim(p), 0)
            else:
                target = self.index[p - 1]
                cols = []
                for t in self.bases[p]:
                    col: Column = {}
                    for u, s in _boundary_terms(self.algebra, t):
                        r = target[u]
                        v = col.get(r, 0) + s
                        if v:
                            col[r] = v
                        else:
                            col.pop(r, None)
                    cols.append(col)
                self._differentials[p] = LinearMap(self.dim(p), self.dim(p - 1), cols)
        return self._differentials[p]

    def idempotent(self, p: int, k: int) -> LinearMap:
        if p not in self._idempotents:
            self._idempotents[p] = _idempotent_columns(self.bases[p], self.index[p], p, permute_tensor)
        return self._idempotents[p][k - 1]

    def verify_square_zero(self) -> bool:
        return all(self.differential(p - 1).compose(self.differential(p)).is_zero() for p in range(3, self.p_max + 1))

    def _rank(self, key: Tuple, build) -> int:
        if key not in self._ranks:
            self._ranks[key] = build().rank()
        return self._ranks[key]

    def homology_dimension(self, p: int) -> int:
        if p + 1 > self.p_max:
            raise PreconditionError(f"slice built to p={self.p_max}; homology at p={p} needs p+1")
        rank_out = self._rank(("d", p), lambda: self.differential(p))
        rank_in = self._rank(("d", p + 1), lambda: self.differential(p + 1))
        return self.dim(p) - rank_out - rank_in

    def bgs_dimension(self, p: int, k: int) -> int:
        if p + 1 > self.p_max:
            raise PreconditionError(f"slice built to p={self.p_max}; homology at p={p} needs p+1")
        if not self.dim(p):
            return 0
        rank_e = self._rank(("e", p, k), lambda: self.idempotent(p, k))
        rank_out = 0 if p == 1 else self._rank(("de", p, k), lambda: self.differential(p).compose(self.idempotent(p, k)))
        rank_in = 0
        if self.dim(p + 1):
            rank_in = self._rank(
                ("de", p + 1, k), lambda: self.differential(p + 1).compose(self.idempotent(p + 1, k))
            )
        return rank_e - rank_out - rank_in

    def boundaries(self, p: int) -> List[Column]:
        return list(self.differential(p + 1).columns)


@dataclass(frozen=True)
class HomologyTable:
    """Dimensions keyed by tuples named in `axes`, e.g. ("p", "degree") or ("p", "k", "degree")."""

    axes: Tuple[str, ...]
    entries: Mapping[Tuple[int, ...], int] = field(default_factory=dict)

    def total(self, **fixed: int) -> int:
        pos = {a: i for i, a in enumerate(self.axes)}
        return sum(
            v for key, v in self.entries.items() if all(key[pos[a]] == want for a, want in fixed.items())
        )

    def support(self, **fixed: int) -> Dict[Tuple[int, ...], int]:
        pos = {a: i for i, a in enumerate(self.axes)}
        return {
            key: v
            for key, v in sorted(self.entries.items())
            if v and all(key[pos[a]] == want for a, want in fixed.items())
        }

    def rows(self) -> List[Dict[str, int]]:
        return [dict(zip(self.axes + ("dim",), key + (v,))) for key, v in sorted(self.entries.items())]


def _require_graded(algebra: QuotientAlgebra, degree_max: int):
    if not algebra.is_graded:
        raise PreconditionError(
            "relations are not quasi-homogeneous; the brute-force route would truncate an ungraded "
            "complex. Use the Koszul route (hkr-homology / hkr-cohomology) instead."
        )
    top = max((algebra.weights.degree(m) for f in algebra.relations for m in f.terms), default=0)
    if degree_max < top:
        raise PreconditionError(f"degree_max={degree_max} is below the relation degree {top}")


def homology_dimensions(algebra: QuotientAlgebra, p_max: int, degree_max: int) -> HomologyTable:
    _require_graded(algebra, degree_max)
    logger.info("homology_dimensions | algebra=%r p_max=%s degree_max=%s", algebra, p_max, degree_max)

    def one(degree: int) -> Dict[Tuple[int, int], int]:
        sl = DegreeSliceComplex(algebra, degree, p_max + 1)
        return {(p, degree): sl.homology_dimension(p) for p in range(1, p_max + 1)}

    entries: Dict[Tuple[int, int], int] = {}
    for part in map_slices(one, range(1, degree_max + 1)):
        entries.update(part)
    return HomologyTable(("p", "degree"), entries)


def bgs_homology_dimensions(algebra: QuotientAlgebra, p_max: int, degree_max: int) -> HomologyTable:
    _require_graded(algebra, degree_max)
    if p_max + 1 > settings.max_idempotent_degree:
        raise ResourceLimitError(
            f"p_max={p_max} needs e_{p_max + 1}, above the idempotent cap {settings.max_idempotent_degree}"
        )
    logger.info("bgs_homology_dimensions | algebra=%r p_max=%s degree_max=%s", algebra, p_max, degree_max)

    def one(degree: int) -> Dict[Tuple[int, int, int], int]:
        sl = DegreeSliceComplex(algebra, degree, p_max + 1)
        return {
            (p, k, degree): sl.bgs_dimension(p, k)
            for p in range(1, p_max + 1)
            for k in range(1, p + 1)
        }

    entries: Dict[Tuple[int, int, int], int] = {}
    for part in map_slices(one, range(1, degree_max + 1)):
        entries.update(part)
    return HomologyTable(("p", "k", "degree"), entries)


def homology_class_rank(algebra: QuotientAlgebra, chains: Sequence[ChainVector]) -> int:
    """Dimension of the span of the classes of `chains` (cycles of one length and degree)."""
    chains = [c for c in chains if not c.is_zero()]
    if not chains:
        return 0
    lengths = {c.length for c in chains}
    degrees = set().union(*(c.degrees() for c in chains))
    if len(lengths) != 1 or len(degrees) != 1:
        raise PreconditionError("chains must share one length and one internal degree")
    p, degree = lengths.pop(), degrees.pop()
    for c in chains:
        if p > 1 and not bar_differential(c).is_zero():
            raise PreconditionError(f"{c} is not a cycle")
    sl = DegreeSliceComplex(algebra, degree, p + 1)
    boundaries = sl.boundaries(p)
    base = LinearMap(len(boundaries), sl.dim(p), boundaries)
    return base.hstack([sl.vector(c) for c in chains]).rank() - base.rank()


# plane-curve cycles


def relation_components(relation: Polynomial) -> Tuple[Polynomial, Polynomial]:
    """(R_1, R_2) with R = x_1 R_1 + x_2 R_2; terms divisible by x_1 go to R_1."""
    if len(relation.variables) != 2:
        raise PreconditionError("a plane curve needs exactly two variables")
    if relation.constant_term():
        raise PreconditionError("the curve must pass through the origin")
    r1: Dict[Monomial, Fraction] = {}
    r2: Dict[Monomial, Fraction] = {}
    for (a, b), c in relation.terms.items():
        if a:
            r1[(a - 1, b)] = c
        else:
            r2[(a, b - 1)] = c
    return Polynomial(relation.variables, r1), Polynomial(relation.variables, r2)


def _transfer_matrix(relation: Polynomial, step: int) -> List[List[Polynomial]]:
    x1, x2 = (Polynomial.variable(relation.variables, v) for v in relation.variables)
    r1, r2 = relation_components(relation)
    if step % 2:
        return [[r1, -x2], [r2, x1]]
    return [[x1, x2], [-r2, r1]]


def _periodic_chains(ring: QuotientAlgebra, relation: Polynomial, p: int) -> Tuple[ChainVector, ChainVector]:
    x1, x2 = (Polynomial.variable(relation.variables, v) for v in relation.variables)
    for r in relation_components(relation):
        if r.constant_term():
            raise PreconditionError("the relation must have no linear terms for its cycles to lie in A_+")
    rows = [ChainVector.from_factors(ring, [x1]), ChainVector.from_factors(ring, [x2])]
    for step in range(1, p):
        m = _transfer_matrix(relation, step)
        zero = ChainVector._wrap(ring, {})
        nxt = []
        for j in range(2):
            acc = zero
            for i in range(2):
                if m[i][j]:
                    acc = acc + rows[i].tensor(m[i][j])
            nxt.append(acc)
        rows = nxt
    return rows[0], rows[1]


def cycle_basis_Pn(algebra: QuotientAlgebra, p: int) -> Tuple[ChainVector, ChainVector]:
    """Rows of P^p = P^1 (x) M_1 (x) ... (x) M_{p-1} for a plane curve algebra."""
    if p < 1:
        raise PreconditionError("p must be at least 1")
    if len(algebra.relations) != 1 or len(algebra.variables) != 2:
        raise PreconditionError("cycle_basis_Pn needs a plane curve with one relation")
    rows = _periodic_chains(algebra, algebra.relations[0], p)
    logger.debug("cycle_basis_Pn | p=%s sizes=%s", p, [len(r.terms) for r in rows])
    return rows


def lifted_boundary_identity(relation: Polynomial, p: int) -> bool:
    """In the polynomial ring: d P^2 = (R, 0) and d P^{p+1} = R shuffled into P^{p-1} for p >= 2."""
    ring = QuotientAlgebra.polynomial_ring(relation.variables)
    top = _periodic_chains(ring, relation, p + 1)
    boundary = [bar_differential(c) for c in top]
    r_chain = {(m,): c for m, c in relation.terms.items()}
    if p == 1:
        expected = [ChainVector._wrap(ring, dict(r_chain)), ChainVector._wrap(ring, {})]
    else:
        low = _periodic_chains(ring, relation, p - 1)
        expected = [ChainVector._wrap(ring, shuffle_product(r_chain, c.terms)) for c in low]
    return all(b == e for b, e in zip(boundary, expected))


# truncated polynomial rings Q[z]/(z^n)


def truncated_algebra(n: int, variable: str = "z") -> QuotientAlgebra:
    if n < 2:
        raise PreconditionError("n must be at least 2")
    z = Polynomial.variable((variable,), variable)
    return QuotientAlgebra((variable,), [z ** n], weights=WeightSystem((1,)))


def phi_psi_chains(k: int, m: int, n: int, kind: str = "phi") -> ChainVector:
    """phi^m (length 2k+1) or psi^m (length 2k) in the bar complex of Q[z]/(z^n)."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    alpha = k * (n - 2) + 1
    if not 1 <= m <= alpha:
        raise PreconditionError(f"m={m} outside 1..{alpha}")
    if kind not in ("phi", "psi"):
        raise PreconditionError(f"unknown family {kind!r}")
    algebra = truncated_algebra(n)
    terms: Dict[Chain, Fraction] = {}

    def compositions(parts: int, total: int) -> Iterator[Tuple[int, ...]]:
        if parts == 1:
            if 1 <= total <= m:
                yield (total,)
            return
        for first in range(1, min(m, total - parts + 1) + 1):
            for rest in compositions(parts - 1, total - first):
                yield (first,) + rest

    for comp in compositions(k, k + m - 1):
        if any(e >= n for e in comp):
            continue
        word: List[Monomial] = []
        for e in comp:
            word.extend([(1,), (e,)])
        if kind == "phi":
            word.append((1,))
        terms[tuple(word)] = terms.get(tuple(word), Fraction(0)) + 1
    return ChainVector._wrap(algebra, {t: c for t, c in terms.items() if c})


@dataclass(frozen=True)
class XnHomology:
    table: HomologyTable
    representatives: Mapping[int, bool]


def xn_bgs_homology(n: int, k_max: int) -> XnHomology:
    algebra = truncated_algebra(n)
    p_max = 2 * k_max + 1
    full = bgs_homology_dimensions(algebra, p_max, p_max * (n - 1))
    totals: Dict[Tuple[int, int], int] = {}
    for (p, k, _), v in full.entries.items():
        totals[p, k] = totals.get((p, k), 0) + v
    reps: Dict[int, bool] = {}
    for q in range(1, k_max + 1):
        even: Chain = ((1,), (n - 1,)) * q
        for word in (even, even + ((1,),)):
            rep = ChainVector._wrap(algebra, {word: Fraction(1)})
            reps[len(word)] = homology_class_rank(algebra, [rep]) == 1
    logger.info("xn_bgs_homology | n=%s k_max=%s representatives=%s", n, k_max, reps)
    return XnHomology(HomologyTable(("p", "k"), totals), reps)


# cochains of finite-dimensional graded algebras

Cochain = Tuple[Chain, Monomial]


class CochainSliceComplex:
    """Cochains A_+^{(x)p} -> A of weight s = deg(value) - deg(arguments), for p = 0..p_max."""

    def __init__(self, algebra: QuotientAlgebra, weight: int, p_max: int):
        self.algebra = algebra
        self.weight = weight
        self.p_max = p_max
        monos = algebra.standard_monomials()
        self.values: Dict[int, List[Monomial]] = {}
        for m in monos:
            self.values.setdefault(algebra.degree(m), []).append(m)
        self.positive = [m for m in monos if algebra.degree(m) > 0]
        self.bases: Dict[int, List[Cochain]] = {}
        for p in range(p_max + 1):
            basis = []
            for t in product(self.positive, repeat=p):
                for m in self.values.get(weight + sum(algebra.degree(a) for a in t), ()):
                    basis.append((t, m))
            if len(basis) > settings.max_slice_dim:
                raise ResourceLimitError(
                    f"cochain slice (p={p}, weight={weight}) has {len(basis)} elements",
                    extra={"p": p, "weight": weight},
                )
            self.bases[p] = basis
        self.index = {p: {c: i for i, c in enumerate(b)} for p, b in self.bases.items()}
        self._splits: Dict[Monomial, List[Tuple[Monomial, Monomial, Fraction]]] = {}
        for a in self.positive:
            for b in self.positive:
                for m, c in algebra.multiply_monomials(a, b).terms.items():
                    self._splits.setdefault(m, []).append((a, b, c))
        self._differentials: Dict[int, LinearMap] = {}
        self._idempotents: Dict[int, List[LinearMap]] = {}

    def dim(self, p: int) -> int:
        return len(self.bases.get(p, ()))

    def differential(self, p: int) -> LinearMap:
        """delta_p: C^p -> C^{p+1}."""
        if p not in self._differentials:
            if p + 1 > self.p_max:
                raise PreconditionError(f"slice built to p={self.p_max}")
            target = self.index[p + 1]
            alg = self.algebra
            cols = []
            for t, m in self.bases[p]:
                col: Column = {}

                def add(u: Chain, poly: Polynomial, s):
                    for mm, c in poly.terms.items():
                        r = target[(u, mm)]
                        v = col.get(r, 0) + s * c
                        if v:
                            col[r] = v
                        else:
                            col.pop(r, None)

                last = -1 if p % 2 else 1
                for a in self.positive:
                    add((a,) + t, alg.multiply_monomials(a, m), 1)
                    add(t + (a,), alg.multiply_monomials(m, a), -last)
                unit = Polynomial.monomial(alg.variables, m)
                for i, ti in enumerate(t):
                    sign = -1 if i % 2 else 1
                    for a, b, c in self._splits.get(ti, ()):
                        add(t[:i] + (a, b) + t[i + 1:], unit, -sign * c)
                cols.append(col)
            self._differentials[p] = LinearMap(self.dim(p), self.dim(p + 1), cols)
        return self._differentials[p]

    def idempotent(self, p: int, k: int) -> LinearMap:
        """Right action C -> C . e_p(k); on basis cochains C_{t,m} . sigma = C_{sigma^-1 t, m}."""
        if p not in self._idempotents:
            self._idempotents[p] = _idempotent_columns(
                self.bases[p],
                self.index[p],
                p,
                lambda sigma, c: (permute_tensor(inverse(sigma), c[0]), c[1]),
            )
        return self._idempotents[p][k - 1]

    def verify_square_zero(self) -> bool:
        return all(
            self.differential(p + 1).compose(self.differential(p)).is_zero() for p in range(0, self.p_max - 1)
        )

    def cohomology_dimension(self, p: int) -> int:
        rank_out = self.differential(p).rank()
        rank_in = self.differential(p - 1).rank() if p >= 1 else 0
        return self.dim(p) - rank_out - rank_in

    def hodge_dimension(self, p: int, k: int) -> int:
        if p < 1 or not self.dim(p):
            return 0
        rank_e = self.idempotent(p, k).rank()
        rank_out = self.differential(p).compose(self.idempotent(p, k)).rank()
        rank_in = 0
        if p - 1 >= k:
            rank_in = self.differential(p - 1).compose(self.idempotent(p - 1, k)).rank()
        return rank_e - rank_out - rank_in


@dataclass(frozen=True)
class CohomologyTable:
    dimensions: Mapping[int, int]
    hodge: Mapping[int, Mapping[int, int]]
    by_weight: HomologyTable


def cochain_cohomology(algebra: QuotientAlgebra, p_max: int, hodge: bool = True) -> CohomologyTable:
    if not algebra.is_graded or not algebra.is_finite_dimensional():
        raise PreconditionError("brute-force cochains need a finite-dimensional graded algebra")
    if hodge and p_max > settings.max_idempotent_degree:
        raise ResourceLimitError(f"p_max={p_max} above the idempotent cap {settings.max_idempotent_degree}")
    monos = algebra.standard_monomials()
    top = max(algebra.degree(m) for m in monos)
    weights = range(-(p_max + 1) * top, top + 1)
    logger.info("cochain_cohomology | algebra=%r p_max=%s", algebra, p_max)

    def one(s: int) -> Dict[Tuple[int, int, int], int]:
        sl = CochainSliceComplex(algebra, s, p_max + 1)
        out = {(p, 0, s): sl.cohomology_dimension(p) for p in range(p_max + 1)}
        if hodge:
            for p in range(1, p_max + 1):
                for k in range(1, p + 1):
                    out[p, k, s] = sl.hodge_dimension(p, k)
        return out

    entries: Dict[Tuple[int, int, int], int] = {}
    for part in map_slices(one, weights):
        entries.update(part)
    table = HomologyTable(("p", "k", "weight"), entries)
    dims = {p: table.total(p=p, k=0) for p in range(p_max + 1)}
    parts = {p: {k: table.total(p=p, k=k) for k in range(1, p + 1)} for p in range(1, p_max + 1)} if hodge else {}
    return CohomologyTable(dims, parts, table)


def xn_cohomology(n: int, p_max: int, hodge: bool = True) -> CohomologyTable:
    return cochain_cohomology(truncated_algebra(n), p_max, hodge)
