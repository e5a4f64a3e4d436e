"""Abelian star products on plane curves realized by deforming the defining relation."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from app.algebra.koszul import CompleteIntersection, harrison_1_2, tjurina_algebra
from app.algebra.linalg import LinearMap
from app.algebra.polycore import (
    Monomial,
    Polynomial,
    QuotientAlgebra,
    default_split_variable,
    leading_coefficient_in,
)
from app.core.config import settings
from app.core.exceptions import NonIsolatedError, ObstructionError, PreconditionError, ResourceLimitError
from app.core.logging import logger

Bilinear = Callable[[Polynomial, Polynomial], Polynomial]


@dataclass(frozen=True)
class NormalizedRelation:
    relation: Polynomial
    variable: str
    degree: int


def normalize_relation(relation: Polynomial) -> NormalizedRelation:
    """Make R monic in y (or in x when y fails) by scaling with its constant leading coefficient."""
    if len(relation.variables) != 2:
        raise PreconditionError("star products are built here for plane curves in two variables")
    first = default_split_variable(relation.variables)
    candidates = [first] + [v for v in relation.variables if v != first]
    for var in candidates:
        n, lc = leading_coefficient_in(relation, var)
        if n > 0 and lc.is_constant() and lc:
            return NormalizedRelation(relation.scale(1 / lc.constant_term()), var, n)
    raise PreconditionError(f"relation {relation} is monic in neither variable")


def pbw_normal_form(f: Polynomial, rel: NormalizedRelation) -> Polynomial:
    """Remainder of f under division by R as a monic polynomial in the split variable."""
    i = f.index(rel.variable)
    n = rel.degree
    tail = -(rel.relation - Polynomial.variable(f.variables, rel.variable) ** n)
    terms = dict(f.terms)
    while True:
        high = [m for m in terms if m[i] >= n]
        if not high:
            return Polynomial(f.variables, terms)
        m = max(high, key=lambda t: t[i])
        c = terms.pop(m)
        rest = Polynomial.monomial(f.variables, m[:i] + (m[i] - n,) + m[i + 1:], c) * tail
        for mm, v in rest.terms.items():
            s = terms.get(mm, 0) + v
            if s:
                terms[mm] = s
            else:
                terms.pop(mm, None)


def pbw_basis(rel: NormalizedRelation, degree_cap: int) -> List[Polynomial]:
    """x^i y^j with j < n and i + j <= degree_cap, in increasing total degree."""
    i = rel.relation.index(rel.variable)
    out = []
    for total in range(degree_cap + 1):
        for j in range(min(total, rel.degree - 1) + 1):
            exps = [0, 0]
            exps[i] = j
            exps[1 - i] = total - j
            out.append(Polynomial.monomial(rel.relation.variables, tuple(exps)))
    return out


class HbarSeries:
    """sum_{i<=order} hbar^i P_i with polynomial coefficients, truncated at hbar^(order+1)."""

    __slots__ = ("variables", "order", "coefficients")

    def __init__(self, variables: Sequence[str], order: int, coefficients: Sequence[Polynomial] = ()):
        self.variables = tuple(variables)
        self.order = order
        zero = Polynomial.zero(self.variables)
        coeffs = list(coefficients)[: order + 1]
        self.coefficients: Tuple[Polynomial, ...] = tuple(coeffs + [zero] * (order + 1 - len(coeffs)))

    @classmethod
    def lift(cls, f: Polynomial, order: int) -> "HbarSeries":
        return cls(f.variables, order, [f])

    def __getitem__(self, i: int) -> Polynomial:
        if 0 <= i <= self.order:
            return self.coefficients[i]
        return Polynomial.zero(self.variables)

    def __add__(self, other: "HbarSeries") -> "HbarSeries":
        return HbarSeries(self.variables, self.order, [a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other: "HbarSeries") -> "HbarSeries":
        return HbarSeries(self.variables, self.order, [a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __mul__(self, other: "HbarSeries") -> "HbarSeries":
        out = [Polynomial.zero(self.variables) for _ in range(self.order + 1)]
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j in range(self.order + 1 - i):
                b = other.coefficients[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return HbarSeries(self.variables, self.order, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HbarSeries):
            return NotImplemented
        return self.order == other.order and self.coefficients == other.coefficients

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                power = "hbar" if i == 1 else f"hbar^{i}"
                parts.append(f"{power}*({c})")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class DeformedRelation:
    """R_hbar = R - sum_i hbar^i Q_i, monic in the split variable."""

    base: NormalizedRelation
    corrections: Tuple[Polynomial, ...]
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise PreconditionError("the hbar order must be at least 1")
        if len(self.corrections) > self.order:
            raise PreconditionError(f"{len(self.corrections)} corrections exceed order {self.order}")
        for q in self.corrections:
            if q.degree_in(self.base.variable) >= self.base.degree:
                raise PreconditionError(
                    f"correction {q} has {self.base.variable}-degree >= {self.base.degree}"
                )

    def correction(self, i: int) -> Polynomial:
        if 1 <= i <= len(self.corrections):
            return self.corrections[i - 1]
        return Polynomial.zero(self.base.relation.variables)

    def as_series(self) -> HbarSeries:
        r = self.base.relation
        return HbarSeries(r.variables, self.order, [r] + [-self.correction(i) for i in range(1, self.order + 1)])


class StarProduct:
    """f * g as the normal form of fg in QQ[x,y][hbar]/(R_hbar, hbar^(N+1))."""

    def __init__(self, relation: Polynomial, corrections: Sequence[Polynomial] = (), order: Optional[int] = None):
        base = normalize_relation(relation)
        variables = base.relation.variables
        corrections = tuple(q.embed(variables) for q in corrections)
        order = order if order is not None else max(settings.default_hbar_order, len(corrections))
        self.deformation = DeformedRelation(base, corrections, order)
        self.relation = base.relation
        self.variable = base.variable
        self.variables = variables
        self.order = order
        self._i = self.relation.index(self.variable)
        self._tail = -(self.relation - Polynomial.variable(variables, self.variable) ** base.degree)
        self._cache: Dict[Tuple[Polynomial, Polynomial], HbarSeries] = {}

    @property
    def degree(self) -> int:
        return self.deformation.base.degree

    def normal_form(self, f: Polynomial) -> Polynomial:
        return pbw_normal_form(f.embed(self.variables), self.deformation.base)

    def reduce(self, series: HbarSeries) -> HbarSeries:
        """Rewrite y^n as (y^n - R) + sum_l hbar^l Q_l, lowest hbar order first."""
        i, n = self._i, self.degree
        work = [dict(c.terms) for c in series.coefficients]
        for k in range(self.order + 1):
            terms = work[k]
            while True:
                high = [m for m in terms if m[i] >= n]
                if not high:
                    break
                m = max(high, key=lambda t: t[i])
                c = terms.pop(m)
                lower = Polynomial.monomial(self.variables, m[:i] + (m[i] - n,) + m[i + 1:], c)
                _accumulate(terms, lower * self._tail)
                for l in range(1, self.order - k + 1):
                    q = self.deformation.correction(l)
                    if q:
                        _accumulate(work[k + l], lower * q)
        return HbarSeries(self.variables, self.order, [Polynomial(self.variables, t) for t in work])

    def multiply(self, f: Union[Polynomial, HbarSeries], g: Union[Polynomial, HbarSeries]) -> HbarSeries:
        if isinstance(f, Polynomial) and isinstance(g, Polynomial):
            key = (f, g)
            cached = self._cache.get(key)
            if cached is None:
                cached = self.reduce(HbarSeries.lift(f, self.order) * HbarSeries.lift(g, self.order))
                self._cache[key] = cached
            return cached
        f = f if isinstance(f, HbarSeries) else HbarSeries.lift(f, self.order)
        g = g if isinstance(g, HbarSeries) else HbarSeries.lift(g, self.order)
        return self.reduce(f * g)

    def cochain(self, i: int, f: Polynomial, g: Polynomial) -> Polynomial:
        """C_i(f, g): the hbar^i coefficient of f * g."""
        if not 0 <= i <= self.order:
            raise PreconditionError(f"C_{i} is outside the truncation order {self.order}")
        return self.multiply(f, g)[i]

    def __repr__(self) -> str:
        qs = ", ".join(str(q) for q in self.deformation.corrections)
        return f"StarProduct(R={self.relation}, Q=[{qs}], order={self.order})"


def _accumulate(terms: Dict[Monomial, Fraction], poly: Polynomial):
    for m, v in poly.terms.items():
        s = terms.get(m, 0) + v
        if s:
            terms[m] = s
        else:
            terms.pop(m, None)


def star_multiply(sp: StarProduct, f: Polynomial, g: Polynomial) -> HbarSeries:
    result = sp.multiply(f, g)
    logger.debug("star_multiply | f=%s g=%s result=%s", f, g, result)
    return result


def first_order_cochain(sp: StarProduct, degree_cap: int = 3) -> Dict[Tuple[Polynomial, Polynomial], Polynomial]:
    """C_1 on pairs of PBW basis monomials up to total degree `degree_cap`."""
    return cochain_table(sp, 1, degree_cap)


def cochain_table(sp: StarProduct, i: int, degree_cap: int) -> Dict[Tuple[Polynomial, Polynomial], Polynomial]:
    basis = pbw_basis(sp.deformation.base, degree_cap)
    return {(a, b): sp.cochain(i, a, b) for a in basis for b in basis}


def closedness_defect(sp: StarProduct, f: Polynomial, g: Polynomial, h: Polynomial) -> Polynomial:
    """f C_1(g,h) - C_1(fg,h) + C_1(f,gh) - C_1(f,g) h, computed in A."""
    c0 = lambda u, v: sp.cochain(0, u, v)
    c1 = lambda u, v: sp.cochain(1, u, v)
    return c0(f, c1(g, h)) - c1(c0(f, g), h) + c1(f, c0(g, h)) - c0(c1(f, g), h)


def _cochain_with_fault(sp: StarProduct, fault: Optional[Bilinear]) -> Callable[[int, Polynomial, Polynomial], Polynomial]:
    def cochain(i: int, f: Polynomial, g: Polynomial) -> Polynomial:
        value = sp.cochain(i, f, g)
        if fault is not None and i == 2:
            value = value + sp.normal_form(fault(f, g))
        return value

    return cochain


def associator(sp: StarProduct, k: int, f: Polynomial, g: Polynomial, h: Polynomial, fault: Optional[Bilinear] = None) -> Polynomial:
    """sum_{i+j=k} C_i(C_j(f,g),h) - C_i(f,C_j(g,h)); zero for an associative product."""
    c = _cochain_with_fault(sp, fault)
    total = Polynomial.zero(sp.variables)
    for i in range(k + 1):
        j = k - i
        total = total + c(i, c(j, f, g), h) - c(i, f, c(j, g, h))
    return total


def obstruction_cochain(sp: StarProduct, p: int, f: Polynomial, g: Polynomial, h: Polynomial, fault: Optional[Bilinear] = None) -> Polynomial:
    """The part of the order-(p+1) associator built from C_1..C_p only."""
    c = _cochain_with_fault(sp, fault)
    total = Polynomial.zero(sp.variables)
    for i in range(1, p + 1):
        j = p + 1 - i
        if 1 <= j <= p:
            total = total + c(i, c(j, f, g), h) - c(i, f, c(j, g, h))
    return total


def coboundary(sp: StarProduct, k: int, f: Polynomial, g: Polynomial, h: Polynomial, fault: Optional[Bilinear] = None) -> Polynomial:
    c = _cochain_with_fault(sp, fault)
    c0 = lambda u, v: sp.cochain(0, u, v)
    return c0(f, c(k, g, h)) - c(k, c0(f, g), h) + c(k, f, c0(g, h)) - c0(c(k, f, g), h)


def augmentation_fault(f: Polynomial, g: Polynomial) -> Polynomial:
    """(f, g) -> f(0) g(0): a symmetric bilinear map that is not a cocycle perturbation of C_2."""
    return Polynomial.constant(f.variables, f.constant_term() * g.constant_term())


def random_pbw_polynomial(sp: StarProduct, rng: random.Random, max_degree: int) -> Polynomial:
    terms: Dict[Monomial, int] = {}
    for b in pbw_basis(sp.deformation.base, max_degree):
        if rng.random() < 0.5:
            (m,) = b.terms
            terms[m] = rng.randint(-3, 3)
    return Polynomial(sp.variables, terms)


@dataclass(frozen=True)
class ObstructionFailure:
    order: int
    f: str
    g: str
    h: str
    defect: str


@dataclass(frozen=True)
class ObstructionReport:
    order: int
    samples: int
    seed: int
    failures: Tuple[ObstructionFailure, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_obstruction_vanishing(
    sp: StarProduct,
    order: int,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    max_degree: int = 5,
    fault: Optional[Bilinear] = None,
    strict: bool = False,
) -> ObstructionReport:
    """Check the associativity identity at every hbar order k <= `order` on random triples.

    At order k the identity reads obstruction_cochain(k-1) = coboundary(k).
    """
    if not 1 <= order <= sp.order:
        raise PreconditionError(f"order {order} must lie in 1..{sp.order}")
    samples = samples or settings.random_samples
    seed = settings.default_seed if seed is None else seed
    rng = random.Random(seed)
    failures: List[ObstructionFailure] = []
    for _ in range(samples):
        f, g, h = (random_pbw_polynomial(sp, rng, max_degree) for _ in range(3))
        for k in range(1, order + 1):
            defect = obstruction_cochain(sp, k - 1, f, g, h, fault) - coboundary(sp, k, f, g, h, fault)
            if defect:
                failures.append(ObstructionFailure(k, str(f), str(g), str(h), str(defect)))
    report = ObstructionReport(order, samples, seed, tuple(failures))
    logger.info(
        "verify_obstruction_vanishing | sp=%r order=%s samples=%s seed=%s failures=%s",
        sp, order, samples, seed, len(failures),
    )
    if strict and failures:
        first = failures[0]
        raise ObstructionError(
            f"associativity fails at hbar^{first.order}",
            extra={"order": first.order, "f": first.f, "g": first.g, "h": first.h},
        )
    return report


# first-order triviality and Harrison-2


@dataclass(frozen=True)
class DerivationCandidate:
    """E = sum_i E_i d/dz_i with polynomial coefficients."""

    variables: Tuple[str, ...]
    coefficients: Tuple[Polynomial, ...]

    def apply(self, f: Polynomial) -> Polynomial:
        total = Polynomial.zero(self.variables)
        for v, e in zip(self.variables, self.coefficients):
            if e:
                total = total + e * f.derivative(v)
        return total

    def __str__(self) -> str:
        parts = [f"({e})*d/d{v}" for v, e in zip(self.variables, self.coefficients) if e]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class TrivialityResult:
    status: str
    degree_bound: int
    witness: Optional[DerivationCandidate] = None
    certificate: Optional[Polynomial] = None
    detail: str = ""

    @property
    def trivial(self) -> bool:
        return self.status == "trivial"


def _derivation_system(algebra: QuotientAlgebra, relation: Polynomial, bound: int):
    unknowns: List[Tuple[int, Monomial]] = []
    images: List[Polynomial] = []
    partials = [algebra.normal_form(relation.derivative(v)) for v in algebra.variables]
    for d in range(bound + 1):
        for m in algebra.basis_of_degree(d):
            for i, p in enumerate(partials):
                unknowns.append((i, m))
                images.append(algebra.multiply(Polynomial.monomial(algebra.variables, m), p))
    return unknowns, images


def triviality_solve(relation: Polynomial, q1: Polynomial, degree_bound: Optional[int] = None) -> TrivialityResult:
    """Find E with E(R) = Q1 mod R, or certify that Q1 is nonzero in A/(dR)."""
    variables = relation.variables
    q1 = q1.embed(variables)
    algebra = QuotientAlgebra(variables, [relation])
    target = algebra.normal_form(q1)
    bound = degree_bound if degree_bound is not None else target.degree(algebra.weights) + relation.degree(algebra.weights)
    bound = max(bound, 0)
    logger.info("triviality_solve | R=%s Q1=%s bound=%s", relation, q1, bound)
    if not target:
        zero = Polynomial.zero(variables)
        return TrivialityResult("trivial", bound, DerivationCandidate(variables, (zero,) * len(variables)))
    unknowns, images = _derivation_system(algebra, relation, bound)
    rows = sorted({m for img in images for m in img.terms} | set(target.terms))
    index = {m: r for r, m in enumerate(rows)}
    cols = [{index[m]: c for m, c in img.terms.items()} for img in images]
    solution = LinearMap(len(cols), len(rows), cols).solve({index[m]: c for m, c in target.terms.items()})
    if solution is not None:
        parts: List[Dict[Monomial, Fraction]] = [{} for _ in variables]
        for j, c in solution.items():
            i, m = unknowns[j]
            parts[i][m] = c
        witness = DerivationCandidate(variables, tuple(Polynomial(variables, p) for p in parts))
        if algebra.normal_form(witness.apply(relation) - q1):
            raise RuntimeError(f"derivation {witness} failed substitution for Q1={q1}")
        return TrivialityResult("trivial", bound, witness)
    try:
        gradient = QuotientAlgebra(variables, [relation] + [relation.derivative(v) for v in variables], weights=algebra.weights)
        certificate = gradient.normal_form(q1)
    except ResourceLimitError as exc:
        return TrivialityResult("inconclusive", bound, detail=f"no witness up to degree {bound}; {exc.message}")
    if certificate:
        return TrivialityResult(
            "obstructed", bound, certificate=certificate,
            detail="Q1 is nonzero modulo (R, dR/dx, dR/dy)",
        )
    return TrivialityResult(
        "inconclusive", bound,
        detail=f"Q1 lies in the gradient ideal but no witness exists up to degree {bound}; raise the bound",
    )


@dataclass(frozen=True)
class TjurinaReport:
    representatives: Tuple[Polynomial, ...]
    finite: bool
    hilbert_series: Tuple[int, ...]

    @property
    def dimension(self) -> Optional[int]:
        return len(self.representatives) if self.finite else None


def harr2_representatives(relation: Polynomial, degree_cutoff: Optional[int] = None) -> TjurinaReport:
    """Monomial basis of QQ[x,y]/(R, dR/dx, dR/dy), or its Hilbert series when infinite."""
    cutoff = degree_cutoff or settings.default_cutoff
    normalize_relation(relation)
    tj = tjurina_algebra(CompleteIntersection([relation]))
    hilbert = tuple(tj.hilbert_function(cutoff))
    if not tj.is_finite_dimensional():
        logger.info("harr2_representatives | R=%s non-isolated hilbert=%s", relation, hilbert)
        return TjurinaReport((), False, hilbert)
    reps = tuple(Polynomial.monomial(relation.variables, m) for m in tj.standard_monomials())
    logger.info("harr2_representatives | R=%s reps=%s", relation, [str(r) for r in reps])
    return TjurinaReport(reps, True, hilbert)


@dataclass(frozen=True)
class MiniversalFamily:
    parameters: Tuple[str, ...]
    relations: Tuple[Polynomial, ...]
    classes: Tuple[Tuple[Polynomial, ...], ...] = field(default_factory=tuple)


def miniversal_family(ci: CompleteIntersection, degree_cutoff: Optional[int] = None) -> MiniversalFamily:
    """f~_j = f_j - sum_k t_k v_k[j] over a basis v_k of the Jacobian cokernel."""
    cutoff = degree_cutoff or settings.default_cutoff
    presentation = harrison_1_2(ci, cutoff)
    if not presentation.finite:
        raise NonIsolatedError(
            "the Jacobian cokernel is infinite; no finite miniversal family exists",
            hilbert_series=list(presentation.hilbert_series),
        )
    classes = presentation.cokernel_basis
    params = tuple(f"t{k + 1}" for k in range(len(classes)))
    variables = ci.variables + params
    deformed = []
    for j, f in enumerate(ci.relations):
        g = f.embed(variables)
        for t, v in zip(params, classes):
            g = g - Polynomial.variable(variables, t) * v[j].embed(variables)
        deformed.append(g)
    logger.info("miniversal_family | ci=%r parameters=%s", ci, len(params))
    return MiniversalFamily(params, tuple(deformed), tuple(classes))
