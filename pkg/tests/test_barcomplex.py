import random
from fractions import Fraction

import pytest

from app.algebra.barcomplex import (
    ChainVector,
    CochainSliceComplex,
    DegreeSliceComplex,
    bar_differential,
    bgs_homology_dimensions,
    chain_basis,
    cochain_cohomology,
    cycle_basis_Pn,
    homology_class_rank,
    homology_dimensions,
    lifted_boundary_identity,
    phi_psi_chains,
    relation_components,
    xn_bgs_homology,
    xn_cohomology,
)
from app.algebra.parser import parse_polynomial
from app.algebra.polycore import QuotientAlgebra
from app.core.config import settings
from app.core.exceptions import PreconditionError, ResourceLimitError


def chain(algebra, *factors):
    return ChainVector.from_factors(algebra, list(factors))


# the differential


def test_two_chain_boundary(cusp, xy):
    assert bar_differential(chain(cusp, xy("x"), xy("y"))) == chain(cusp, xy("x*y"))


def test_boundary_of_phi_one(truncated):
    z3 = truncated(3)
    z = parse_polynomial("z")
    phi = chain(z3, z, z, z)
    assert bar_differential(phi) == chain(z3, z**2, z) - chain(z3, z, z**2)


def test_wedge_is_a_cycle(cusp, xy):
    wedge = chain(cusp, xy("x"), xy("y")) - chain(cusp, xy("y"), xy("x"))
    assert bar_differential(wedge).is_zero()


def test_products_reduce_in_the_algebra(cusp, xy):
    # y * y = x^3 in A
    assert bar_differential(chain(cusp, xy("y"), xy("y"))) == chain(cusp, xy("x^3"))


def test_boundary_needs_two_factors(cusp, xy):
    with pytest.raises(PreconditionError):
        bar_differential(chain(cusp, xy("x")))


def test_chains_live_in_the_augmentation_ideal(cusp, xy):
    with pytest.raises(PreconditionError):
        chain(cusp, xy("1 + x"), xy("y"))


def test_chain_basis_counts(cusp):
    # degree 5 = 2 + 3 = 3 + 2 with the standard monomials x (2) and y (3)
    assert sorted(chain_basis(cusp, 2, 5)) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]
    assert chain_basis(cusp, 3, 5) == []


def test_slice_cap(cusp, monkeypatch):
    monkeypatch.setattr(settings, "max_slice_dim", 3)
    with pytest.raises(ResourceLimitError):
        chain_basis(cusp, 3, 9)


@pytest.mark.parametrize("degree", [6, 9, 12])
def test_square_zero_on_slices(cusp, degree):
    assert DegreeSliceComplex(cusp, degree, 5).verify_square_zero()


@pytest.mark.parametrize("name, degree", [("cusp", 9), ("cusp", 11), ("z3", 5)])
def test_differential_commutes_with_idempotents(name, degree, cusp, truncated):
    algebra = cusp if name == "cusp" else truncated(3)
    sl = DegreeSliceComplex(algebra, degree, 5)
    for p in range(2, 6):
        if not sl.dim(p):
            continue
        d = sl.differential(p)
        for k in range(1, p + 1):
            left = d.compose(sl.idempotent(p, k))
            if k < p:
                assert left.columns == sl.idempotent(p - 1, k).compose(d).columns
            else:
                assert left.is_zero()


def test_differential_commutes_with_idempotents_on_random_chains(truncated):
    z3 = truncated(3)
    rng = random.Random(settings.default_seed)
    sl = DegreeSliceComplex(z3, 6, 5)
    for _ in range(20):
        p = rng.randint(2, 5)
        if not sl.dim(p):
            continue
        v = {rng.randrange(sl.dim(p)): Fraction(rng.randint(-3, 3)) for _ in range(3)}
        k = rng.randint(1, p - 1)
        d = sl.differential(p)
        assert d.apply(sl.idempotent(p, k).apply(v)) == sl.idempotent(p - 1, k).apply(d.apply(v))


# homology tables


def test_cusp_homology_totals(cusp):
    table = homology_dimensions(cusp, 3, 9)
    assert [table.total(p=p) for p in (1, 2, 3)] == [2, 2, 2]
    assert table.support(p=1) == {(1, 2): 1, (1, 3): 1}


def test_cusp_hodge_split(cusp):
    table = bgs_homology_dimensions(cusp, 3, 9)
    assert [table.total(p=2, k=k) for k in (1, 2)] == [1, 1]
    assert [table.total(p=3, k=k) for k in (1, 2, 3)] == [0, 2, 0]
    assert table.total(p=1, k=1) == 2


def test_node_hodge_split(node):
    table = bgs_homology_dimensions(node, 4, 4)
    assert [table.total(p=p) for p in (1, 2, 3, 4)] == [2, 2, 2, 2]
    assert [table.total(p=4, k=k) for k in (2, 3)] == [1, 1]
    assert [table.total(p=3, k=k) for k in (1, 2, 3)] == [0, 2, 0]


@pytest.mark.slow
def test_plane_curve_homology_through_p5(cusp, node):
    for algebra, degree_max in ((cusp, 15), (node, 5)):
        table = bgs_homology_dimensions(algebra, 5, degree_max)
        for k in (1, 2):
            assert table.total(p=2 * k - 1) == table.total(p=2 * k - 1, k=k) == 2
            assert table.total(p=2 * k, k=k) == table.total(p=2 * k, k=k + 1) == 1


def test_hodge_parts_sum_to_totals(cusp):
    totals = homology_dimensions(cusp, 3, 9)
    parts = bgs_homology_dimensions(cusp, 3, 9)
    for p in (1, 2, 3):
        for degree in range(1, 10):
            assert sum(parts.total(p=p, k=k, degree=degree) for k in range(1, p + 1)) == totals.total(
                p=p, degree=degree
            )


def test_brute_force_refuses_ungraded_input(conic):
    with pytest.raises(PreconditionError, match="Koszul route"):
        homology_dimensions(conic, 2, 6)


def test_degree_max_below_relation_degree(cusp):
    with pytest.raises(PreconditionError):
        homology_dimensions(cusp, 2, 4)


# periodic cycles of plane curves


def test_relation_components(xy):
    r1, r2 = relation_components(xy("y^2 - x^3"))
    assert (r1, r2) == (xy("-x^2"), xy("y"))


def test_first_cycle_row(cusp, xy):
    assert cycle_basis_Pn(cusp, 1) == (chain(cusp, xy("x")), chain(cusp, xy("y")))


def test_node_cycles_in_light_cone_coordinates():
    u, v = parse_polynomial("u", ("u", "v")), parse_polynomial("v", ("u", "v"))
    algebra = QuotientAlgebra(("u", "v"), [u * v])
    assert cycle_basis_Pn(algebra, 3) == (chain(algebra, u, v, u), chain(algebra, v, u, v))


@pytest.mark.parametrize("p", [2, 3, 4])
def test_periodic_rows_are_independent_cycles(cusp, p):
    rows = cycle_basis_Pn(cusp, p)
    for row in rows:
        assert bar_differential(row).is_zero()
        assert homology_class_rank(cusp, [row]) == 1


def test_periodic_row_degrees(cusp):
    first, second = cycle_basis_Pn(cusp, 2)
    assert first.degrees() == {6}
    assert second.degrees() == {5}


def test_boundary_is_not_a_class(cusp, xy):
    boundary = bar_differential(chain(cusp, xy("x"), xy("x"), xy("y")))
    assert homology_class_rank(cusp, [boundary]) == 0


@pytest.mark.parametrize("p", [1, 2, 3])
def test_lifted_boundary_identity(xy, p):
    assert lifted_boundary_identity(xy("y^2 - x^3"), p)
    assert lifted_boundary_identity(xy("y^2 - x^2"), p)


def test_cycles_need_a_singular_point(conic):
    with pytest.raises(PreconditionError):
        cycle_basis_Pn(conic, 2)


# Q[z]/(z^n)


def test_phi_psi_chains(truncated):
    z3 = truncated(3)
    z = parse_polynomial("z")
    assert phi_psi_chains(1, 1, 3) == chain(z3, z, z, z)
    assert phi_psi_chains(1, 2, 3) == chain(z3, z, z**2, z)
    assert phi_psi_chains(1, 1, 3, "psi") == chain(z3, z, z)


def test_phi_range():
    with pytest.raises(PreconditionError):
        phi_psi_chains(1, 3, 3)


def test_phi_top_is_a_cycle():
    # m = k(n-2)+1 is the top of the family
    assert bar_differential(phi_psi_chains(1, 2, 3)).is_zero()


def test_xn_bgs_homology():
    h3 = xn_bgs_homology(3, 1)
    assert h3.table.entries[2, 1] == 1
    assert h3.table.entries[3, 2] == 1
    assert h3.table.total(p=2) == h3.table.total(p=3) == 1
    assert h3.representatives == {2: True, 3: True}
    h2 = xn_bgs_homology(2, 2)
    assert h2.table.entries[4, 2] == 1
    assert h2.table.entries[5, 3] == 1
    assert all(h2.representatives.values())


def _bgs_column(p: int) -> int:
    return p // 2 if p % 2 == 0 else (p + 1) // 2


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4])
def test_xn_bgs_homology_through_p5(n):
    h = xn_bgs_homology(n, 2)
    for p in range(1, 6):
        assert h.table.total(p=p) == 1
        assert h.table.entries[p, _bgs_column(p)] == 1
    assert h.representatives == {2: True, 3: True, 4: True, 5: True}


@pytest.mark.parametrize("n", [2, 3])
def test_xn_cohomology(n):
    table = xn_cohomology(n, 4)
    assert table.dimensions[0] == n
    assert [table.dimensions[p] for p in (1, 2, 3, 4)] == [n - 1] * 4
    for p in (1, 2, 3, 4):
        assert sum(table.hodge[p].values()) == table.dimensions[p]


@pytest.mark.slow
def test_xn_cohomology_n4():
    table = xn_cohomology(4, 4, hodge=False)
    assert table.dimensions == {0: 4, 1: 3, 2: 3, 3: 3, 4: 3}


def test_cochain_square_zero(truncated):
    for weight in (-4, -2, 0, 1):
        assert CochainSliceComplex(truncated(3), weight, 4).verify_square_zero()


def test_cochain_differential_commutes_with_idempotents(truncated):
    sl = CochainSliceComplex(truncated(3), -2, 5)
    for p in range(1, 5):
        delta = sl.differential(p)
        for k in range(1, p + 1):
            assert delta.compose(sl.idempotent(p, k)).columns == sl.idempotent(p + 1, k).compose(delta).columns


def test_cochains_need_finite_algebra(cusp):
    with pytest.raises(PreconditionError):
        xn_cohomology(1, 2)
    with pytest.raises(PreconditionError):
        cochain_cohomology(cusp, 2)
