"""Exact polynomials over QQ on sympy's sparse rings, weighted gradings, Groebner bases and quotient algebras."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from types import MappingProxyType
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import QQ, Symbol
from sympy.polys import orderings
from sympy.polys.groebnertools import groebner as _groebner
from sympy.polys.monomials import monomial_divides, monomial_mul
from sympy.polys.rings import PolyElement, PolyRing

from app.algebra.linalg import LinearMap, to_fraction, to_qq
from app.core.config import settings
from app.core.exceptions import PreconditionError, ResourceLimitError
from app.core.logging import logger

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]
OrderKey = Callable[[Monomial], tuple]


def format_monomial(variables: Sequence[str], m: Monomial) -> str:
    parts = []
    for name, e in zip(variables, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


class WeightedReverseOrder(orderings.MonomialOrder):
    """Weighted degree first, then the smaller exponent of the earliest variable.

    y^2 leads x^3 for variables (x, y) with weights (2, 3).
    """

    alias = "wgrevlex"
    is_global = True

    def __init__(self, weights: Sequence[int]):
        self.weights = tuple(weights)

    def __call__(self, monomial: Monomial) -> tuple:
        return (sum(w * e for w, e in zip(self.weights, monomial)), tuple(-e for e in monomial))

    def __repr__(self) -> str:
        return f"WeightedReverseOrder({self.weights})"

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightedReverseOrder) and self.weights == other.weights

    def __hash__(self) -> int:
        return hash((WeightedReverseOrder, self.weights))


@lru_cache(maxsize=None)
def polynomial_ring(variables: Tuple[str, ...], order: orderings.MonomialOrder = orderings.lex) -> PolyRing:
    return PolyRing([Symbol(v) for v in variables], QQ, order)


class Polynomial:
    """Immutable polynomial over QQ; a PolyElement of the lex ring on `variables`.

    `terms` exposes the same data as exponent tuples mapped to Fractions.
    """

    __slots__ = ("variables", "_element", "_terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Monomial, Scalar]] = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m} for variables {self.variables}")
            clean[m] = clean.get(m, Fraction(0)) + Fraction(c)
        ring = polynomial_ring(self.variables)
        self._element = ring.from_dict({m: to_qq(c) for m, c in clean.items() if c})
        self._terms: Optional[Dict[Monomial, Fraction]] = None

    @classmethod
    def from_element(cls, variables: Sequence[str], element: PolyElement) -> "Polynomial":
        poly = object.__new__(cls)
        poly.variables = tuple(variables)
        poly._element = element.set_ring(polynomial_ring(poly.variables))
        poly._terms = None
        return poly

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        return cls.from_element(variables, polynomial_ring(variables).zero)

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "Polynomial":
        variables = tuple(variables)
        return cls.from_element(variables, polynomial_ring(variables).ground_new(to_qq(c)))

    @classmethod
    def monomial(cls, variables: Sequence[str], exponents: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls(variables, {tuple(exponents): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return cls.from_element(variables, polynomial_ring(variables).gens[variables.index(name)])

    @property
    def element(self) -> PolyElement:
        return self._element

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        if self._terms is None:
            self._terms = {m: to_fraction(c) for m, c in self._element.items()}
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._element

    def __bool__(self) -> bool:
        return bool(self._element)

    def __len__(self) -> int:
        return len(self._element)

    def is_constant(self) -> bool:
        return self._element.is_ground

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * len(self.variables))

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def _new(self, element: PolyElement) -> "Polynomial":
        return Polynomial.from_element(self.variables, element)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self._element + other._element)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return self._new(-self._element)

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self._element - other._element)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c: Scalar) -> "Polynomial":
        return self._new(self._element.mul_ground(to_qq(c)))

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self._element * other._element)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        if k == 0:
            return Polynomial.constant(self.variables, 1)
        return self._new(self._element**k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and dict.__eq__(self._element, other._element)

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # structure

    def index(self, variable: str) -> int:
        try:
            return self.variables.index(variable)
        except ValueError:
            raise ValueError(f"unknown variable {variable!r}") from None

    def derivative(self, variable: str) -> "Polynomial":
        return self._new(self._element.diff(self.index(variable)))

    def degree(self, weights: Optional["WeightSystem"] = None) -> int:
        """Maximal weighted degree of a term; -1 for the zero polynomial."""
        w = weights.weights if weights else (1,) * len(self.variables)
        return max((sum(a * b for a, b in zip(w, m)) for m in self._element), default=-1)

    def degree_in(self, variable: str) -> int:
        i = self.index(variable)
        return max((m[i] for m in self._element), default=-1)

    def embed(self, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise ValueError(f"cannot embed: {missing[0]!r} missing from {variables}")
        return Polynomial.from_element(variables, self._element.set_ring(polynomial_ring(variables)))

    def restrict(self, variables: Sequence[str]) -> "Polynomial":
        """Drop variables that do not occur; error if a dropped one does."""
        variables = tuple(variables)
        keep = [self.index(v) for v in variables]
        terms: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            if sum(m) != sum(m[i] for i in keep):
                raise ValueError(f"polynomial depends on variables outside {variables}")
            terms[tuple(m[i] for i in keep)] = c
        return Polynomial(variables, terms)

    def sorted_terms(self, key: Optional[OrderKey] = None) -> List[Tuple[Monomial, Fraction]]:
        key = key or _default_display_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def to_string(self, key: Optional[OrderKey] = None) -> str:
        if not self._element:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms(key)):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = format_monomial(self.variables, m)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if i == 0:
                out.append(f"-{body}" if sign == "-" else body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()!r}, variables={self.variables})"


def _default_display_key(m: Monomial) -> tuple:
    return (sum(m), tuple(-e for e in m))


@dataclass(frozen=True)
class WeightSystem:
    weights: Tuple[int, ...]

    def __post_init__(self):
        if not self.weights or any(not isinstance(w, int) or w <= 0 for w in self.weights):
            raise PreconditionError(f"weights must be positive integers, got {self.weights}")

    @classmethod
    def standard(cls, n: int) -> "WeightSystem":
        return cls((1,) * n)

    def degree(self, m: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, m))

    def is_quasi_homogeneous(self, f: Polynomial) -> bool:
        return len({self.degree(m) for m in f.terms}) <= 1


class MonomialOrder(str, Enum):
    WGREVLEX = "wgrevlex"
    LEX = "lex"


def order_key(order: MonomialOrder, weights: WeightSystem) -> orderings.MonomialOrder:
    """The sympy monomial order for `order`; as a sort key, larger means leading."""
    if order == MonomialOrder.LEX:
        return orderings.lex
    return WeightedReverseOrder(weights.weights)


# Groebner bases


def _check_terms(polys: Iterable[PolyElement], cap: int, stage: str) -> None:
    for p in polys:
        if len(p) > cap:
            raise ResourceLimitError(f"term count {len(p)} exceeds cap {cap} during {stage}", extra={"cap": cap})


def groebner_basis(
    generators: Sequence[Polynomial],
    order: MonomialOrder = MonomialOrder.WGREVLEX,
    weights: Optional[WeightSystem] = None,
    *,
    max_terms: Optional[int] = None,
) -> List[Polynomial]:
    """Reduced, monic Groebner basis, leading elements first, by sympy's Buchberger."""
    gens = [g for g in generators if g]
    if not gens:
        return []
    variables = gens[0].variables
    for g in gens:
        if g.variables != variables:
            raise ValueError("generators must share one variable list")
    weights = weights or WeightSystem.standard(len(variables))
    cap = max_terms or settings.max_groebner_terms
    ring = polynomial_ring(variables, order_key(order, weights))
    seq = [g.element.set_ring(ring) for g in gens]
    _check_terms(seq, cap, "input")
    basis = _groebner(seq, ring, method="buchberger")
    _check_terms(basis, cap, "Buchberger")
    logger.debug("groebner | generators=%s basis=%s", len(gens), len(basis))
    return [Polynomial.from_element(variables, g) for g in basis]


def infer_weights(relations: Sequence[Polynomial]) -> Optional[WeightSystem]:
    """Positive integer weights making every relation quasi-homogeneous, if any exist."""
    relations = [f for f in relations if f]
    if not relations:
        return None
    n = len(relations[0].variables)
    ones = WeightSystem.standard(n)
    if all(ones.is_quasi_homogeneous(f) for f in relations):
        return ones
    rows: List[Dict[int, Fraction]] = []
    for f in relations:
        monos = sorted(f.terms)
        base = monos[0]
        for m in monos[1:]:
            rows.append({i: Fraction(a - b) for i, (a, b) in enumerate(zip(m, base)) if a != b})
    # kernel of v -> (row . v) for every row
    columns = [{r: row[i] for r, row in enumerate(rows) if i in row} for i in range(n)]
    kernel = LinearMap(n, len(rows), columns).nullspace()
    candidates: Iterable[Tuple[int, ...]]
    if len(kernel) == 1:
        candidates = [(1,)]
    else:
        span = range(-2, 3)
        candidates = sorted(product(span, repeat=len(kernel)), key=lambda c: (sum(map(abs, c)), c))
    for coeffs in candidates:
        v = [sum(c * vec.get(i, Fraction(0)) for c, vec in zip(coeffs, kernel)) for i in range(n)]
        if all(x < 0 for x in v):
            v = [-x for x in v]
        if all(x > 0 for x in v):
            scale = lcm(*(x.denominator for x in v))
            ints = [int(x * scale) for x in v]
            g = gcd(*ints)
            return WeightSystem(tuple(i // g for i in ints))
    return None


class QuotientAlgebra:
    """P/(relations) with its reduced Groebner basis and normal-form map.

    `weights` is always populated: inferred when the relations admit a
    quasi-homogeneous grading, standard otherwise (`is_graded` tells which).
    """

    def __init__(
        self,
        variables: Sequence[str],
        relations: Sequence[Polynomial] = (),
        *,
        order: MonomialOrder = MonomialOrder.WGREVLEX,
        weights: Optional[WeightSystem] = None,
    ):
        self.variables = tuple(variables)
        self.relations = tuple(f.embed(self.variables) for f in relations if f)
        self.order = order
        if weights is None:
            weights = infer_weights(self.relations) if self.relations else None
        self.weights = weights or WeightSystem.standard(len(self.variables))
        if len(self.weights.weights) != len(self.variables):
            raise PreconditionError("one weight per variable is required")
        self.is_graded = all(self.weights.is_quasi_homogeneous(f) for f in self.relations)
        self.key = order_key(order, self.weights)
        self.groebner = tuple(groebner_basis(self.relations, order, self.weights))
        self._ring = polynomial_ring(self.variables, self.key)
        self._divisors = [g.element.set_ring(self._ring) for g in self.groebner]
        self.leading_monomials = tuple(g.LM for g in self._divisors)
        self._products: Dict[Tuple[Monomial, Monomial], Polynomial] = {}
        self._monomials: Dict[int, List[Monomial]] = {}
        self._basis: Dict[int, List[Monomial]] = {}

    @classmethod
    def polynomial_ring(cls, variables: Sequence[str], weights: Optional[WeightSystem] = None) -> "QuotientAlgebra":
        return cls(variables, (), weights=weights)

    def __repr__(self) -> str:
        rels = ", ".join(str(f) for f in self.relations)
        return f"QuotientAlgebra({self.variables}, [{rels}], weights={self.weights.weights})"

    def polynomial(self, terms: Optional[Mapping[Monomial, Scalar]] = None) -> Polynomial:
        return Polynomial(self.variables, terms)

    def generator(self, name: str) -> Polynomial:
        return Polynomial.variable(self.variables, name)

    def is_standard(self, m: Monomial) -> bool:
        return not any(monomial_divides(lm, m) for lm in self.leading_monomials)

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.variables != self.variables:
            raise ValueError(f"variable mismatch: {f.variables} vs {self.variables}")
        if not self._divisors:
            return f
        remainder = f.element.set_ring(self._ring).rem(self._divisors)
        _check_terms([remainder], settings.max_groebner_terms, "reduction")
        return Polynomial.from_element(self.variables, remainder)

    def multiply(self, f: Polynomial, g: Polynomial) -> Polynomial:
        return self.normal_form(f * g)

    def multiply_monomials(self, a: Monomial, b: Monomial) -> Polynomial:
        cache_key = (a, b) if a <= b else (b, a)
        cached = self._products.get(cache_key)
        if cached is None:
            m = monomial_mul(a, b)
            if self.is_standard(m):
                cached = Polynomial.monomial(self.variables, m)
            else:
                cached = self.normal_form(Polynomial.monomial(self.variables, m))
            self._products[cache_key] = cached
        return cached

    def degree(self, m: Monomial) -> int:
        return self.weights.degree(m)

    def monomials_of_degree(self, d: int) -> List[Monomial]:
        """Every monomial of weighted degree d, standard or not."""
        if d < 0:
            return []
        cached = self._monomials.get(d)
        if cached is None:
            w = self.weights.weights
            out: List[Monomial] = []

            def extend(prefix: Tuple[int, ...], i: int, left: int):
                if i == len(w) - 1:
                    if left % w[i] == 0:
                        out.append(prefix + (left // w[i],))
                    return
                for e in range(left // w[i], -1, -1):
                    extend(prefix + (e,), i + 1, left - e * w[i])

            extend((), 0, d)
            cached = sorted(out, key=self.key, reverse=True)
            self._monomials[d] = cached
        return cached

    def basis_of_degree(self, d: int) -> List[Monomial]:
        cached = self._basis.get(d)
        if cached is None:
            cached = [m for m in self.monomials_of_degree(d) if self.is_standard(m)]
            self._basis[d] = cached
        return cached

    def hilbert_function(self, upto: int) -> List[int]:
        return [len(self.basis_of_degree(d)) for d in range(upto + 1)]

    def is_finite_dimensional(self) -> bool:
        n = len(self.variables)
        if any(not any(lm) for lm in self.leading_monomials):
            return True
        return all(
            any(lm[i] > 0 and sum(lm) == lm[i] for lm in self.leading_monomials)
            for i in range(n)
        )

    def standard_monomials(self) -> List[Monomial]:
        """The full monomial basis of a finite-dimensional quotient."""
        if not self.is_finite_dimensional():
            raise PreconditionError("quotient is infinite-dimensional")
        n = len(self.variables)
        seen = {(0,) * n} if self.is_standard((0,) * n) else set()
        frontier = list(seen)
        while frontier:
            nxt = []
            for m in frontier:
                for i in range(n):
                    t = m[:i] + (m[i] + 1,) + m[i + 1:]
                    if t not in seen and self.is_standard(t):
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        return sorted(seen, key=self.key)

    def dimension(self) -> int:
        return len(self.standard_monomials())


def normal_form(f: Polynomial, algebra: QuotientAlgebra) -> Polynomial:
    return algebra.normal_form(f)


def monomial_basis_of_degree(algebra: QuotientAlgebra, d: int) -> List[Monomial]:
    return list(algebra.basis_of_degree(d))


def partial_derivative(f: Polynomial, variable: str) -> Polynomial:
    return f.derivative(variable)


def leading_coefficient_in(f: Polynomial, variable: str) -> Tuple[int, Polynomial]:
    """(n, c) with f = c*v^n + lower terms in v; c is a polynomial in the other variables."""
    i = f.index(variable)
    n = f.degree_in(variable)
    coeff = {m[:i] + (0,) + m[i + 1:]: c for m, c in f.terms.items() if m[i] == n}
    return n, Polynomial(f.variables, coeff)


def monic_degree(f: Polynomial, variable: str) -> int:
    n, lc = leading_coefficient_in(f, variable)
    if n <= 0 or lc != 1:
        raise PreconditionError(f"relation {f} is not monic in {variable}")
    return n


def split_by_variable(f: Polynomial, variable: str, n: int) -> List[Polynomial]:
    """Components f_j free of `variable` with f = sum_j variable^j * f_j, j < n."""
    i = f.index(variable)
    parts: List[Dict[Monomial, Fraction]] = [{} for _ in range(n)]
    for m, c in f.terms.items():
        if m[i] >= n:
            raise PreconditionError(f"{f} is not in normal form: {variable}-degree {m[i]} >= {n}")
        parts[m[i]][m[:i] + (0,) + m[i + 1:]] = c
    return [Polynomial(f.variables, p) for p in parts]


def default_split_variable(variables: Sequence[str]) -> str:
    return "y" if "y" in variables else variables[-1]


def y_split(f: Polynomial, algebra: QuotientAlgebra, variable: Optional[str] = None) -> List[Polynomial]:
    if len(algebra.relations) != 1:
        raise PreconditionError("y_split needs a single defining relation")
    var = variable or default_split_variable(algebra.variables)
    n = monic_degree(algebra.relations[0], var)
    if algebra.normal_form(f) != f:
        raise PreconditionError(f"{f} is not in normal form")
    return split_by_variable(f, var, n)
