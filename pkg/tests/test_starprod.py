import random

import pytest

from app.algebra.koszul import CompleteIntersection
from app.algebra.parser import parse_polynomial
from app.algebra.polycore import split_by_variable
from app.algebra.starprod import (
    DerivationCandidate,
    HbarSeries,
    StarProduct,
    augmentation_fault,
    closedness_defect,
    cochain_table,
    coboundary,
    first_order_cochain,
    harr2_representatives,
    miniversal_family,
    normalize_relation,
    obstruction_cochain,
    pbw_basis,
    pbw_normal_form,
    random_pbw_polynomial,
    star_multiply,
    triviality_solve,
    verify_obstruction_vanishing,
)
from app.core.config import settings
from app.core.exceptions import NonIsolatedError, ObstructionError, PreconditionError

XY = ("x", "y")


@pytest.fixture
def cusp_relation(xy):
    return xy("y^2 - x^3")


@pytest.fixture
def cusp_star(cusp_relation, xy):
    return StarProduct(cusp_relation, [xy("x")], order=2)


# relation handling


def test_relation_is_made_monic_in_y(xy):
    rel = normalize_relation(xy("2*y^2 - x^3"))
    assert rel.variable == "y"
    assert rel.degree == 2
    assert rel.relation == xy("y^2 - 1/2*x^3")


def test_falls_back_to_x_when_y_is_not_monic(xy):
    rel = normalize_relation(xy("x*y^2 + x^2"))
    assert rel.variable == "x"
    assert rel.degree == 2


def test_relation_monic_in_neither_variable(xy):
    with pytest.raises(PreconditionError, match="monic"):
        normalize_relation(xy("x*y^2 + x^2*y"))


def test_plane_curves_only():
    with pytest.raises(PreconditionError):
        normalize_relation(parse_polynomial("z^2 - x*y", ("x", "y", "z")))


def test_pbw_normal_form_lowers_y_degree(cusp_relation, xy):
    rel = normalize_relation(cusp_relation)
    assert pbw_normal_form(xy("y^3"), rel) == xy("x^3*y")
    assert pbw_normal_form(xy("x*y^2 + y"), rel) == xy("x^4 + y")


def test_pbw_basis_order(cusp_relation):
    basis = pbw_basis(normalize_relation(cusp_relation), 2)
    assert [next(iter(b.terms)) for b in basis] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1)]


# hbar series


def test_hbar_series_truncates(xy):
    one_plus = HbarSeries(XY, 1, [xy("1"), xy("1")])
    assert (one_plus * one_plus).coefficients == (xy("1"), xy("2"))
    assert (one_plus - one_plus).is_zero()
    assert one_plus[5] == xy("0")


def test_hbar_series_string(xy):
    assert str(HbarSeries(XY, 1, [xy("x^3"), xy("x")])) == "x^3 + hbar*(x)"
    assert str(HbarSeries(XY, 2)) == "0"


def test_lift_pads_with_zeros(xy):
    s = HbarSeries.lift(xy("x"), 3)
    assert s.order == 3
    assert s[0] == xy("x")
    assert not any(s.coefficients[1:])


# products


def test_square_of_y_picks_up_the_correction(cusp_star, xy):
    assert star_multiply(cusp_star, xy("y"), xy("y")) == HbarSeries(XY, 2, [xy("x^3"), xy("x")])
    assert cusp_star.cochain(1, xy("y"), xy("y")) == xy("x")
    assert cusp_star.cochain(2, xy("y"), xy("y")) == xy("0")


def test_products_without_reduction_are_undeformed(cusp_star, xy):
    product = star_multiply(cusp_star, xy("x"), xy("y"))
    assert product[0] == xy("x*y")
    assert product[1] == xy("0")


def test_reduction_multiplies_corrections(cusp_star, xy):
    product = star_multiply(cusp_star, xy("y"), xy("x*y"))
    assert product == HbarSeries(XY, 2, [xy("x^4"), xy("x^2")])


def test_second_order_correction(xy):
    sp = StarProduct(xy("y^2 - x^2"), [xy("x"), xy("1")], order=2)
    assert star_multiply(sp, xy("y"), xy("y")) == HbarSeries(XY, 2, [xy("x^2"), xy("x"), xy("1")])


def test_corrections_feed_back_into_reduction(xy):
    sp = StarProduct(xy("y^2 - x^3"), [xy("y")], order=2)
    square = sp.multiply(xy("y"), xy("y"))
    assert square == HbarSeries(XY, 2, [xy("x^3"), xy("y")])
    assert sp.multiply(square, xy("y")) == HbarSeries(XY, 2, [xy("x^3*y"), xy("x^3"), xy("y")])


def test_product_is_commutative(cusp_star):
    rng = random.Random(3)
    for _ in range(5):
        f, g = (random_pbw_polynomial(cusp_star, rng, 4) for _ in range(2))
        assert cusp_star.multiply(f, g) == cusp_star.multiply(g, f)


def test_default_order_comes_from_settings(cusp_relation):
    assert StarProduct(cusp_relation).order == settings.default_hbar_order


@pytest.mark.parametrize(
    "corrections, order",
    [
        (["y^2"], 2),
        (["x", "x"], 1),
        ([], 0),
    ],
)
def test_invalid_deformations(cusp_relation, xy, corrections, order):
    with pytest.raises(PreconditionError):
        StarProduct(cusp_relation, [xy(q) for q in corrections], order=order)


def test_cochain_outside_order(cusp_star, xy):
    with pytest.raises(PreconditionError):
        cusp_star.cochain(3, xy("x"), xy("y"))


# cochains and the associativity identity


def test_first_order_table(cusp_star, xy):
    table = first_order_cochain(cusp_star, 2)
    assert len(table) == 25
    assert table[xy("y"), xy("y")] == xy("x")
    assert table[xy("x"), xy("y")] == xy("0")
    assert cochain_table(cusp_star, 1, 2) == table


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_first_cochain_is_closed(cusp_star, seed):
    rng = random.Random(seed)
    f, g, h = (random_pbw_polynomial(cusp_star, rng, 4) for _ in range(3))
    assert not closedness_defect(cusp_star, f, g, h)
    assert not coboundary(cusp_star, 1, f, g, h)


def test_obstruction_matches_coboundary(cusp_star):
    rng = random.Random(11)
    f, g, h = (random_pbw_polynomial(cusp_star, rng, 4) for _ in range(3))
    assert obstruction_cochain(cusp_star, 1, f, g, h) == coboundary(cusp_star, 2, f, g, h)


@pytest.mark.parametrize("relation, corrections", [("y^2 - x^3", ["x", "x*y"]), ("y^2 - x^2", ["y", "x^2"])])
def test_associativity_holds_through_order_two(xy, relation, corrections):
    sp = StarProduct(xy(relation), [xy(q) for q in corrections], order=2)
    report = verify_obstruction_vanishing(sp, 2, samples=4, seed=7, max_degree=4)
    assert report.passed
    assert report.samples == 4
    assert report.seed == 7


@pytest.fixture
def affine_star(cusp_relation, xy):
    return StarProduct(cusp_relation, [xy("x + 2")], order=3)


def test_first_cochain_is_affine_times_y_parts(affine_star, xy):
    rng = random.Random(settings.default_seed)
    for _ in range(100):
        f, g = (random_pbw_polynomial(affine_star, rng, 6) for _ in range(2))
        (_, f_minus), (_, g_minus) = split_by_variable(f, "y", 2), split_by_variable(g, "y", 2)
        assert affine_star.cochain(1, f, g) == xy("x + 2") * f_minus * g_minus


@pytest.mark.slow
def test_associativity_holds_through_order_three(affine_star):
    report = verify_obstruction_vanishing(affine_star, 3, samples=100, seed=settings.default_seed, max_degree=4)
    assert report.passed
    assert report.samples == 100
    assert report.failures == ()


def test_perturbed_second_cochain_is_caught(cusp_star):
    report = verify_obstruction_vanishing(cusp_star, 2, samples=20, seed=5, max_degree=3, fault=augmentation_fault)
    assert not report.passed
    assert {f.order for f in report.failures} == {2}


def test_strict_mode_raises(cusp_star):
    with pytest.raises(ObstructionError) as info:
        verify_obstruction_vanishing(cusp_star, 2, samples=20, seed=5, max_degree=3, fault=augmentation_fault, strict=True)
    assert info.value.extra["order"] == 2


def test_verification_order_is_bounded(cusp_star):
    with pytest.raises(PreconditionError):
        verify_obstruction_vanishing(cusp_star, 3)


# first-order triviality


def test_derivation_candidate(cusp_relation, xy):
    euler = DerivationCandidate(XY, (xy("2*x"), xy("3*y")))
    assert euler.apply(cusp_relation) == cusp_relation.scale(6)
    assert str(DerivationCandidate(XY, (xy("x"), xy("0")))) == "(x)*d/dx"


@pytest.mark.parametrize("q1", ["y", "x^2", "x^2 + y", "y^2 - x^3", "0"])
def test_trivial_first_order_terms(cusp_relation, xy, q1):
    result = triviality_solve(cusp_relation, xy(q1))
    assert result.trivial
    assert result.witness is not None
    residue = result.witness.apply(cusp_relation) - xy(q1)
    assert not pbw_normal_form(residue, normalize_relation(cusp_relation))


@pytest.mark.parametrize("q1, certificate", [("1", "1"), ("x", "x"), ("x + 1", "x + 1")])
def test_obstructed_first_order_terms(cusp_relation, xy, q1, certificate):
    result = triviality_solve(cusp_relation, xy(q1))
    assert result.status == "obstructed"
    assert not result.trivial
    assert result.certificate == xy(certificate)


def test_small_bound_is_inconclusive(cusp_relation, xy):
    result = triviality_solve(cusp_relation, xy("x^3*y"), degree_bound=0)
    assert result.status == "inconclusive"
    assert "raise the bound" in result.detail
    assert triviality_solve(cusp_relation, xy("x^3*y")).trivial


# Harrison-2 and miniversal families


def test_cusp_tjurina_representatives(cusp_relation):
    report = harr2_representatives(cusp_relation, 8)
    assert report.finite
    assert report.dimension == 2
    assert {next(iter(r.terms)) for r in report.representatives} == {(0, 0), (1, 0)}


def test_smooth_conic_has_no_representatives(xy):
    report = harr2_representatives(xy("y^2 - x^2 - 1"), 4)
    assert report.finite
    assert report.dimension == 0


def test_double_line_reports_hilbert_series(xy):
    report = harr2_representatives(xy("y^2"), 6)
    assert not report.finite
    assert report.dimension is None
    assert len(report.hilbert_series) == 7


def test_cusp_miniversal_family(cusp_relation):
    family = miniversal_family(CompleteIntersection([cusp_relation]), 8)
    assert family.parameters == ("t1", "t2")
    (g,) = family.relations
    assert g.variables == ("x", "y", "t1", "t2")
    deformation = {m[:2]: c for m, c in g.terms.items() if any(m[2:])}
    assert set(deformation) == {(0, 0), (1, 0)}
    assert set(deformation.values()) == {-1}


def test_two_relation_miniversal_family(xy):
    ci = CompleteIntersection([xy("x^2"), xy("y^3")])
    family = miniversal_family(ci, 6)
    assert len(family.parameters) == 7
    assert len(family.relations) == 2


def test_non_isolated_miniversal_is_refused(xy):
    with pytest.raises(NonIsolatedError) as info:
        miniversal_family(CompleteIntersection([xy("x^2*y^3")]), 6)
    assert len(info.value.hilbert_series) == 7
