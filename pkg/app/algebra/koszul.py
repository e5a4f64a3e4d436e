"""Koszul resolution and the small HKR complexes of a complete intersection."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.algebra.linalg import Column, LinearMap
from app.algebra.polycore import Monomial, Polynomial, QuotientAlgebra, WeightSystem, format_monomial
from app.core.config import settings
from app.core.exceptions import PreconditionError, RegularSequenceError
from app.core.logging import logger
from app.core.workers import map_slices

SuperMonomial = Tuple[int, ...]
Basis = List[Tuple[int, Monomial]]


class CompleteIntersection:
    """Relations f_1..f_m in QQ[z_1..z_n] together with their quotient and ambient ring."""

    def __init__(
        self,
        relations: Sequence[Polynomial],
        variables: Optional[Sequence[str]] = None,
        weights: Optional[WeightSystem] = None,
    ):
        relations = [f for f in relations if f]
        if not relations:
            raise PreconditionError("at least one nonzero relation is required")
        self.variables = tuple(variables or relations[0].variables)
        self.relations = tuple(f.embed(self.variables) for f in relations)
        self.algebra = QuotientAlgebra(self.variables, self.relations, weights=weights)
        self.weights = self.algebra.weights
        self.graded = self.algebra.is_graded
        self.ring = QuotientAlgebra.polynomial_ring(self.variables, self.weights)
        self.relation_degrees = tuple(f.degree(self.weights) for f in self.relations)
        # jacobian[i][j] = d f_j / d z_i
        self.jacobian = tuple(tuple(f.derivative(v) for f in self.relations) for v in self.variables)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.relations)

    def __repr__(self) -> str:
        rels = ", ".join(str(f) for f in self.relations)
        return f"CompleteIntersection([{rels}], weights={self.weights.weights}, graded={self.graded})"


@dataclass(frozen=True)
class SuperGenerator:
    name: str
    odd: bool
    degree: int
    weight: int


@dataclass(frozen=True)
class Summand:
    label: str
    shift: int
    hodge: int
    exponents: SuperMonomial = ()


# (coefficient index, generator multiplied in or None, generator differentiated)
_DerivationTerm = Tuple[Tuple[int, int], Optional[int], int]


class FreeModuleComplex:
    """Free modules over `base` per cohomological degree; d_p maps degree p into p+1.

    `differential[p][(a, b)]` is the entry from summand a of degree p to summand b of
    degree p+1, a polynomial in normal form over `base`.
    """

    def __init__(
        self,
        name: str,
        base: QuotientAlgebra,
        summands: Mapping[int, Sequence[Summand]],
        differential: Mapping[int, Mapping[Tuple[int, int], Polynomial]],
        complete_degrees: Sequence[int],
        graded: bool,
    ):
        self.name = name
        self.base = base
        self.summands = {p: list(s) for p, s in summands.items()}
        self.differential = {p: dict(d) for p, d in differential.items()}
        self.complete_degrees = tuple(sorted(complete_degrees))
        self.graded = graded
        self._outgoing: Dict[int, Dict[int, List[Tuple[int, Polynomial]]]] = {}
        for p, entries in self.differential.items():
            out: Dict[int, List[Tuple[int, Polynomial]]] = {}
            for (a, b), e in sorted(entries.items()):
                if e:
                    out.setdefault(a, []).append((b, e))
            self._outgoing[p] = out

    def degrees(self) -> List[int]:
        return sorted(self.summands)

    def hodge_degrees(self, p: int) -> List[int]:
        return sorted({s.hodge for s in self.summands.get(p, ())})

    def matrix(self, p: int) -> List[List[Polynomial]]:
        """Rows indexed by degree-(p+1) summands, columns by degree-p summands."""
        src = self.summands.get(p, [])
        tgt = self.summands.get(p + 1, [])
        zero = Polynomial.zero(self.base.variables)
        d = self.differential.get(p, {})
        return [[d.get((a, b), zero) for a in range(len(src))] for b in range(len(tgt))]

    def verify_square_zero(self) -> bool:
        for p in self.degrees():
            first = self.differential.get(p, {})
            second = self.differential.get(p + 1, {})
            acc: Dict[Tuple[int, int], Polynomial] = {}
            for (a, b), e in first.items():
                for (b2, c), e2 in second.items():
                    if b2 == b:
                        acc[a, c] = acc.get((a, c), Polynomial.zero(self.base.variables)) + e * e2
            if any(self.base.normal_form(v) for v in acc.values()):
                return False
        return True

    def verify_hodge_preserving(self) -> bool:
        return all(
            self.summands[p][a].hodge == self.summands[p + 1][b].hodge
            for p, entries in self.differential.items()
            for (a, b), e in entries.items()
            if e
        )

    def verify_homogeneous(self) -> bool:
        w = self.base.weights
        for p, entries in self.differential.items():
            for (a, b), e in entries.items():
                gap = self.summands[p][a].shift - self.summands[p + 1][b].shift
                if any(w.degree(m) != gap for m in e.terms):
                    return False
        return True

    # slices

    def slice_basis(self, p: int, hodge: int, s: int) -> Basis:
        out: Basis = []
        for idx, sm in enumerate(self.summands.get(p, ())):
            if sm.hodge == hodge:
                out.extend((idx, m) for m in self.base.basis_of_degree(s - sm.shift))
        return out

    def filtration_basis(self, p: int, hodge: int, level: int) -> Basis:
        out: Basis = []
        for idx, sm in enumerate(self.summands.get(p, ())):
            if sm.hodge == hodge:
                for d in range(0, level - sm.shift + 1):
                    out.extend((idx, m) for m in self.base.basis_of_degree(d))
        return out

    def slice_map(self, p: int, source: Basis, target: Basis, truncate: bool = False) -> LinearMap:
        index = {b: i for i, b in enumerate(target)}
        outgoing = self._outgoing.get(p, {})
        cols: List[Column] = []
        for a, m in source:
            col: Column = {}
            for b, e in outgoing.get(a, ()):
                for me, c in e.terms.items():
                    for mm, v in self.base.multiply_monomials(me, m).terms.items():
                        r = index.get((b, mm))
                        if r is None:
                            if truncate:
                                continue
                            raise PreconditionError(f"{self.name}: d_{p} is not homogeneous on slice")
                        x = col.get(r, 0) + c * v
                        if x:
                            col[r] = x
                        else:
                            col.pop(r, None)
            cols.append(col)
        return LinearMap(len(source), len(target), cols)

    def describe(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "summands": {
                str(p): [{"label": s.label, "shift": s.shift, "hodge": s.hodge} for s in sms]
                for p, sms in sorted(self.summands.items())
            },
            "differential": {
                str(p): [[str(e) for e in row] for row in self.matrix(p)]
                for p in sorted(self.differential)
                if self.summands.get(p + 1)
            },
        }


def _super_monomials(generators: Sequence[SuperGenerator], degree: int) -> List[SuperMonomial]:
    out: List[SuperMonomial] = []

    def extend(prefix: Tuple[int, ...], i: int, left: int):
        if i == len(generators):
            if left == 0:
                out.append(prefix)
            return
        g = generators[i]
        top = left // g.degree if left * g.degree >= 0 else 0
        if g.odd:
            top = min(top, 1)
        for e in range(top, -1, -1):
            extend(prefix + (e,), i + 1, left - e * g.degree)

    extend((), 0, degree)
    return out


def _label(generators: Sequence[SuperGenerator], mu: SuperMonomial) -> str:
    return format_monomial([g.name for g in generators], mu)


def _apply_derivation(
    generators: Sequence[SuperGenerator], mu: SuperMonomial, mult: Optional[int], deriv: int
) -> Optional[Tuple[SuperMonomial, int]]:
    """(mult) . d/d(deriv) on mu, with left Koszul signs; None when the result vanishes."""
    e = mu[deriv]
    if not e:
        return None
    new = list(mu)
    if generators[deriv].odd:
        before = sum(1 for i in range(deriv) if generators[i].odd and new[i])
        sign, factor = (-1) ** before, 1
    else:
        sign, factor = 1, e
    new[deriv] -= 1
    if mult is not None:
        if generators[mult].odd:
            if new[mult]:
                return None
            sign *= (-1) ** sum(1 for i in range(mult) if generators[i].odd and new[i])
        new[mult] += 1
    return tuple(new), sign * factor


def _build_complex(
    name: str,
    base: QuotientAlgebra,
    generators: Sequence[SuperGenerator],
    terms: Sequence[Tuple[Polynomial, Optional[int], int]],
    degrees: Sequence[int],
    complete: Sequence[int],
    graded: bool,
    hodge: bool = True,
) -> FreeModuleComplex:
    summands: Dict[int, List[Summand]] = {}
    lookup: Dict[int, Dict[SuperMonomial, int]] = {}
    for p in degrees:
        mus = _super_monomials(generators, p)
        summands[p] = [
            Summand(
                _label(generators, mu),
                sum(e * g.weight for e, g in zip(mu, generators)),
                sum(mu) if hodge else 0,
                mu,
            )
            for mu in mus
        ]
        lookup[p] = {mu: i for i, mu in enumerate(mus)}
    coeffs = [(base.normal_form(c), mult, deriv) for c, mult, deriv in terms]
    differential: Dict[int, Dict[Tuple[int, int], Polynomial]] = {}
    for p in degrees:
        if p + 1 not in lookup:
            continue
        entries: Dict[Tuple[int, int], Polynomial] = {}
        for a, sm in enumerate(summands[p]):
            for c, mult, deriv in coeffs:
                if not c:
                    continue
                hit = _apply_derivation(generators, sm.exponents, mult, deriv)
                if hit is None:
                    continue
                mu, sign = hit
                b = lookup[p + 1][mu]
                entries[a, b] = entries.get((a, b), Polynomial.zero(base.variables)) + c.scale(sign)
        differential[p] = {k: v for k, v in entries.items() if v}
    cx = FreeModuleComplex(name, base, summands, differential, complete, graded)
    logger.debug("%s | degrees=%s sizes=%s", name, list(degrees), [len(summands[p]) for p in degrees])
    return cx


@dataclass(frozen=True)
class RegularSequenceReport:
    ok: bool
    exact: bool
    failures: Tuple[Tuple[int, int], ...] = ()


def regular_sequence_check(ci: CompleteIntersection, degree_cutoff: int) -> RegularSequenceReport:
    """Degreewise injectivity of multiplication by f_k on P/(f_1..f_{k-1})."""
    failures: List[Tuple[int, int]] = []
    for k, f in enumerate(ci.relations, start=1):
        quotient = QuotientAlgebra(ci.variables, ci.relations[: k - 1], weights=ci.weights)
        g = quotient.normal_form(f)
        if not g:
            failures.append((k, 0))
            continue
        shift = ci.relation_degrees[k - 1]
        for s in range(0, degree_cutoff + 1):
            if ci.graded:
                source = quotient.basis_of_degree(s)
            else:
                source = [m for d in range(s + 1) for m in quotient.basis_of_degree(d)]
            if not source:
                continue
            images = [quotient.multiply(g, Polynomial.monomial(ci.variables, m)) for m in source]
            if ci.graded:
                target = quotient.basis_of_degree(s + shift)
            else:
                target = sorted({t for img in images for t in img.terms})
            index = {t: i for i, t in enumerate(target)}
            cols = [{index[t]: c for t, c in img.terms.items()} for img in images]
            if LinearMap(len(source), len(target), cols).rank() < len(source):
                failures.append((k, s))
                break
    report = RegularSequenceReport(not failures, ci.graded, tuple(failures))
    logger.info("regular_sequence_check | ci=%r cutoff=%s ok=%s failures=%s", ci, degree_cutoff, report.ok, failures)
    return report


def koszul_resolution(ci: CompleteIntersection, degree_cutoff: Optional[int] = None) -> FreeModuleComplex:
    cutoff = degree_cutoff or settings.default_cutoff
    report = regular_sequence_check(ci, cutoff)
    if not report.ok:
        k, degree = report.failures[0]
        raise RegularSequenceError(
            f"f_{k} is a zero divisor modulo the previous relations in degree {degree}", k=k, degree=degree
        )
    gens = [SuperGenerator(f"alpha{j + 1}", True, -1, ci.relation_degrees[j]) for j in range(ci.m)]
    terms = [(ci.relations[j], None, j) for j in range(ci.m)]
    degrees = list(range(-ci.m, 1))
    return _build_complex("koszul", ci.ring, gens, terms, degrees, degrees, ci.graded, hodge=False)


def hkr_cohomology_complex(ci: CompleteIntersection, p_max: int = 4) -> FreeModuleComplex:
    """A[eta_1..eta_n; b_1..b_m] with d = sum (d f_j / d z_i) b_j d/d eta_i, degrees 0..p_max+1."""
    eta = [SuperGenerator(f"eta{i + 1}", True, 1, -ci.weights.weights[i]) for i in range(ci.n)]
    b = [SuperGenerator(f"b{j + 1}", False, 2, -ci.relation_degrees[j]) for j in range(ci.m)]
    gens = eta + b
    terms = [(ci.jacobian[i][j], ci.n + j, i) for i in range(ci.n) for j in range(ci.m)]
    degrees = list(range(0, p_max + 2))
    return _build_complex("hkr-cohomology", ci.algebra, gens, terms, degrees, degrees[:-1], ci.graded)


def hkr_homology_complex(ci: CompleteIntersection, l_max: int = 4) -> FreeModuleComplex:
    """A[xi_1..xi_n; a_1..a_m] with d = sum (d f_j / d z_i) xi_i d/d a_j, degrees -(l_max+1)..0."""
    xi = [SuperGenerator(f"xi{i + 1}", True, -1, ci.weights.weights[i]) for i in range(ci.n)]
    a = [SuperGenerator(f"a{j + 1}", False, -2, ci.relation_degrees[j]) for j in range(ci.m)]
    gens = xi + a
    terms = [(ci.jacobian[i][j], i, ci.n + j) for i in range(ci.n) for j in range(ci.m)]
    degrees = list(range(-(l_max + 1), 1))
    return _build_complex("hkr-homology", ci.algebra, gens, terms, degrees, degrees[1:], ci.graded)


def jacobian_complex(ci: CompleteIntersection) -> FreeModuleComplex:
    """A^n -> A^m, u -> (sum_i u_i d f_j / d z_i)_j, placed in degrees 1 and 2 with HKR shifts."""
    summands = {
        1: [Summand(f"eta{i + 1}", -ci.weights.weights[i], 1) for i in range(ci.n)],
        2: [Summand(f"b{j + 1}", -ci.relation_degrees[j], 1) for j in range(ci.m)],
    }
    entries = {
        (i, j): ci.algebra.normal_form(ci.jacobian[i][j]) for i in range(ci.n) for j in range(ci.m)
    }
    return FreeModuleComplex("jacobian", ci.algebra, summands, {1: {k: v for k, v in entries.items() if v}}, (1, 2), ci.graded)


# cohomology tables


@dataclass(frozen=True)
class DimensionEntry:
    p: int
    hodge: int
    internal: Optional[int]
    dim: int
    stable: bool = True


@dataclass(frozen=True)
class GradedDimensionTable:
    entries: Tuple[DimensionEntry, ...]
    graded: bool
    cutoff: int

    def dim(self, p: int, hodge: Optional[int] = None, internal: Optional[int] = None) -> int:
        return sum(
            e.dim
            for e in self.entries
            if e.p == p and (hodge is None or e.hodge == hodge) and (internal is None or e.internal == internal)
        )

    def total(self, p: int, hodge: Optional[int] = None) -> int:
        return self.dim(p, hodge)

    def series(self, p: int, hodge: int) -> Dict[int, int]:
        return {e.internal: e.dim for e in self.entries if e.p == p and e.hodge == hodge and e.internal is not None}

    def stable(self) -> bool:
        return all(e.stable for e in self.entries)

    def nonzero(self) -> List[DimensionEntry]:
        return [e for e in self.entries if e.dim]


def _check_cutoff(complex: FreeModuleComplex, degree_cutoff: int):
    if degree_cutoff < min(complex.base.weights.weights):
        raise PreconditionError(
            f"cutoff {degree_cutoff} is below every generator degree {complex.base.weights.weights}"
        )


def graded_cohomology(complex: FreeModuleComplex, degree_cutoff: int) -> GradedDimensionTable:
    """dim ker - dim im per (degree, Hodge degree, internal degree) up to the cutoff."""
    _check_cutoff(complex, degree_cutoff)
    logger.info("graded_cohomology | complex=%s cutoff=%s graded=%s", complex.name, degree_cutoff, complex.graded)
    if complex.graded:
        return _graded_table(complex, degree_cutoff)
    return _filtered_table(complex, degree_cutoff)


def _graded_table(complex: FreeModuleComplex, cutoff: int) -> GradedDimensionTable:
    cells: List[Tuple[int, int, int]] = []
    for p in complex.complete_degrees:
        for h in complex.hodge_degrees(p):
            low = min(sm.shift for sm in complex.summands[p] if sm.hodge == h)
            cells.extend((p, h, s) for s in range(low, cutoff + 1))

    def rank_out(p: int, h: int, s: int) -> int:
        if p + 1 not in complex.summands or p not in complex.differential:
            return 0
        source = complex.slice_basis(p, h, s)
        if not source:
            return 0
        return complex.slice_map(p, source, complex.slice_basis(p + 1, h, s)).rank()

    def one(cell: Tuple[int, int, int]) -> DimensionEntry:
        p, h, s = cell
        dim = len(complex.slice_basis(p, h, s))
        if dim:
            dim -= rank_out(p, h, s) + rank_out(p - 1, h, s)
        return DimensionEntry(p, h, s, dim, True)

    return GradedDimensionTable(tuple(map_slices(one, cells)), True, cutoff)


def _filtered_table(complex: FreeModuleComplex, cutoff: int) -> GradedDimensionTable:
    window = settings.stability_window

    def at_level(p: int, h: int, level: int) -> int:
        source = complex.filtration_basis(p, h, level)
        dim = len(source)
        if not dim:
            return 0
        if p + 1 in complex.summands and p in complex.differential:
            dim -= complex.slice_map(p, source, complex.filtration_basis(p + 1, h, level), truncate=True).rank()
        if p - 1 in complex.summands and p - 1 in complex.differential:
            prev = complex.filtration_basis(p - 1, h, level)
            if prev:
                dim -= complex.slice_map(p - 1, prev, source, truncate=True).rank()
        return dim

    def one(cell: Tuple[int, int]) -> DimensionEntry:
        p, h = cell
        dims = [at_level(p, h, cutoff + i) for i in range(window + 1)]
        return DimensionEntry(p, h, None, dims[0], len(set(dims)) == 1)

    cells = [(p, h) for p in complex.complete_degrees for h in complex.hodge_degrees(p)]
    return GradedDimensionTable(tuple(map_slices(one, cells)), False, cutoff)


# Harrison H^1 / H^2


def tjurina_algebra(ci: CompleteIntersection) -> QuotientAlgebra:
    """P/(f, df/dz_1, ..., df/dz_n) for a hypersurface."""
    if ci.m != 1:
        raise PreconditionError("the Tjurina algebra is defined here for a single relation")
    f = ci.relations[0]
    return QuotientAlgebra(ci.variables, [f] + [f.derivative(v) for v in ci.variables], weights=ci.weights)


@dataclass(frozen=True)
class HarrisonPresentation:
    kernel_series: Mapping[int, int]
    kernel_basis: Mapping[int, Tuple[Tuple[Polynomial, ...], ...]]
    cokernel_basis: Tuple[Tuple[Polynomial, ...], ...]
    cokernel_dim: Optional[int]
    finite: bool
    hilbert_series: Tuple[int, ...]
    graded: bool

    def cokernel_polynomials(self) -> List[Polynomial]:
        return [v[0] for v in self.cokernel_basis]


def _vector(ci: CompleteIntersection, slots: int, column: Column, basis: Basis) -> Tuple[Polynomial, ...]:
    parts: List[Dict[Monomial, Fraction]] = [{} for _ in range(slots)]
    for r, c in column.items():
        idx, m = basis[r]
        parts[idx][m] = c
    return tuple(Polynomial(ci.variables, p) for p in parts)


def _complement(image: LinearMap, target: Basis) -> List[int]:
    """Indices of target basis vectors completing the image to a spanning set."""
    chosen: List[int] = []
    current = image
    rank = current.rank()
    for i in range(len(target)):
        trial = current.hstack([{i: Fraction(1)}])
        r = trial.rank()
        if r > rank:
            chosen.append(i)
            current, rank = trial, r
        if rank == len(target):
            break
    return chosen


def harrison_1_2(ci: CompleteIntersection, degree_cutoff: int) -> HarrisonPresentation:
    cx = jacobian_complex(ci)
    _check_cutoff(cx, degree_cutoff)
    kernel_series: Dict[int, int] = {}
    kernel_basis: Dict[int, Tuple[Tuple[Polynomial, ...], ...]] = {}
    coker_basis: List[Tuple[Polynomial, ...]] = []
    coker_series: Dict[int, int] = {}
    if ci.graded:
        low = -max(max(ci.weights.weights), max(ci.relation_degrees))
        for s in range(low, degree_cutoff + 1):
            source = cx.slice_basis(1, 1, s)
            target = cx.slice_basis(2, 1, s)
            jac = cx.slice_map(1, source, target)
            kernel = jac.nullspace() if source else []
            if kernel:
                kernel_series[s] = len(kernel)
                kernel_basis[s] = tuple(_vector(ci, ci.n, v, source) for v in kernel)
            if target and ci.m > 1:
                picks = _complement(jac, target)
                if picks:
                    coker_series[s] = len(picks)
                    coker_basis.extend(_vector(ci, ci.m, {i: Fraction(1)}, target) for i in picks)
    else:
        # filtration levels with untruncated images: kernels are exact for bounded degree
        for level in range(0, degree_cutoff + 1):
            source = cx.filtration_basis(1, 1, level)
            images = cx.slice_map(1, source, _all_targets(cx, source), truncate=False)
            kernel = images.nullspace() if source else []
            kernel_series[level] = len(kernel)
            if level == degree_cutoff:
                kernel_basis[level] = tuple(_vector(ci, ci.n, v, source) for v in kernel)
    if ci.m == 1:
        tj = tjurina_algebra(ci)
        finite = tj.is_finite_dimensional()
        hilbert = tuple(tj.hilbert_function(degree_cutoff))
        if finite:
            coker_basis = [(Polynomial.monomial(ci.variables, m),) for m in tj.standard_monomials()]
        else:
            coker_basis = []
        dim = len(coker_basis) if finite else None
    else:
        top = max(ci.relation_degrees)
        finite = ci.graded and not any(coker_series.get(s) for s in range(degree_cutoff - top, degree_cutoff + 1))
        hilbert = tuple(coker_series.get(s, 0) for s in sorted(coker_series))
        dim = len(coker_basis) if finite else None
    result = HarrisonPresentation(
        kernel_series, kernel_basis, tuple(coker_basis), dim, finite, hilbert, ci.graded
    )
    logger.info("harrison_1_2 | ci=%r cokernel_dim=%s finite=%s", ci, dim, finite)
    return result


def _all_targets(cx: FreeModuleComplex, source: Basis) -> Basis:
    seen = set()
    for a, m in source:
        for b, e in cx._outgoing.get(1, {}).get(a, ()):
            for me in e.terms:
                for mm in cx.base.multiply_monomials(me, m).terms:
                    seen.add((b, mm))
    return sorted(seen)


# the 2-periodic block of a plane curve


def periodic_block_complex(ci: CompleteIntersection, k_max: int) -> FreeModuleComplex:
    """A -> A+A -> A with a -> (a f_1, a f_2) and (u, v) -> u f_2 - v f_1, repeated for k = 1..k_max."""
    if ci.n != 2 or ci.m != 1:
        raise PreconditionError("the periodic block needs a plane curve (n = 2, m = 1)")
    w1, w2 = ci.weights.weights
    d = ci.relation_degrees[0]
    f1, f2 = (ci.algebra.normal_form(g[0]) for g in ci.jacobian)
    summands: Dict[int, List[Summand]] = {}
    differential: Dict[int, Dict[Tuple[int, int], Polynomial]] = {}
    for k in range(1, k_max + 1):
        h = k + 1
        start = {
            2 * k: [Summand(_label_block("eta1*eta2", k - 1), -w1 - w2 - (k - 1) * d, h)],
            2 * k + 1: [
                Summand(_label_block("eta2", k), -w2 - k * d, h),
                Summand(_label_block("eta1", k), -w1 - k * d, h),
            ],
            2 * k + 2: [Summand(_label_block("", k + 1), -(k + 1) * d, h)],
        }
        offsets = {}
        for p, sms in start.items():
            offsets[p] = len(summands.setdefault(p, []))
            summands[p].extend(sms)
        a0 = offsets[2 * k]
        u, v = offsets[2 * k + 1], offsets[2 * k + 1] + 1
        c0 = offsets[2 * k + 2]
        first = differential.setdefault(2 * k, {})
        first[a0, u] = f1
        first[a0, v] = f2
        second = differential.setdefault(2 * k + 1, {})
        second[u, c0] = f2
        second[v, c0] = -f1
    for p in differential:
        differential[p] = {key: e for key, e in differential[p].items() if e}
    return FreeModuleComplex("periodic-block", ci.algebra, summands, differential, sorted(summands), ci.graded)


def _label_block(eta: str, power: int) -> str:
    b = "" if power == 0 else ("b1" if power == 1 else f"b1^{power}")
    return "*".join(x for x in (eta, b) if x) or "1"


def periodic_block(ci: CompleteIntersection, k_max: int, degree_cutoff: int) -> GradedDimensionTable:
    return graded_cohomology(periodic_block_complex(ci, k_max), degree_cutoff)


def annihilator_series(ci: CompleteIntersection, degree_cutoff: int) -> Dict[int, List[Polynomial]]:
    """{a in A : a d_1 R = a d_2 R = 0} per degree: the end-slot kernel of the periodic block."""
    cx = periodic_block_complex(ci, 1)
    out: Dict[int, List[Polynomial]] = {}
    low = min(sm.shift for sm in cx.summands[2])
    for s in range(low, degree_cutoff + 1):
        source = cx.slice_basis(2, 2, s)
        if not source:
            continue
        kernel = cx.slice_map(2, source, cx.slice_basis(3, 2, s)).nullspace()
        if kernel:
            out[s] = [_vector(ci, 1, v, source)[0] for v in kernel]
    return out
