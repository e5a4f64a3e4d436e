from fractions import Fraction

import pytest
from hypothesis import given

from app.algebra.symgroup import (
    GroupAlgebraElement,
    act_on_tensor,
    compose,
    descent_count,
    eulerian_idempotents,
    identity,
    inverse,
    permute_tensor,
    shuffle_product,
    sign,
    sign_average,
)
from app.core.exceptions import PreconditionError, ResourceLimitError
from tests.strategies import group_elements, permutations_of

half = Fraction(1, 2)
sixth = Fraction(1, 6)


def test_descent_count():
    assert descent_count(identity(5)) == 0
    assert descent_count((5, 4, 3, 2, 1)) == 4
    assert descent_count((3, 1, 4, 2)) == 2


@given(permutations_of(5), permutations_of(5))
def test_sign_is_multiplicative(s, t):
    assert sign(compose(s, t)) == sign(s) * sign(t)
    assert compose(s, inverse(s)) == identity(5)


def test_e2():
    e1, e2 = eulerian_idempotents(2)
    assert e1 == GroupAlgebraElement(2, {(1, 2): half, (2, 1): half})
    assert e2 == GroupAlgebraElement(2, {(1, 2): half, (2, 1): -half})


def test_e3_explicit_formulas():
    e1, e2, e3 = eulerian_idempotents(3)
    assert e1 == GroupAlgebraElement(
        3,
        {
            (1, 2, 3): 2 * sixth,
            (3, 2, 1): -2 * sixth,
            (1, 3, 2): sixth,
            (2, 3, 1): -sixth,
            (2, 1, 3): sixth,
            (3, 1, 2): -sixth,
        },
    )
    assert e2 == GroupAlgebraElement(3, {(1, 2, 3): half, (3, 2, 1): half})
    assert e3 == sign_average(3)


@pytest.mark.parametrize("n", [2, 3, 4, 5, pytest.param(6, marks=pytest.mark.slow)])
def test_idempotents_resolve_the_identity(n):
    es = eulerian_idempotents(n)
    total = es[0]
    for e in es[1:]:
        total = total + e
    assert total == GroupAlgebraElement.identity(n)
    for i, a in enumerate(es):
        for j, b in enumerate(es):
            if i == j:
                assert a * b == a
            else:
                assert (a * b).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_top_idempotent_is_signed_average(n):
    assert eulerian_idempotents(n)[-1] == sign_average(n)


def test_idempotent_cap():
    with pytest.raises(ResourceLimitError):
        eulerian_idempotents(8)
    with pytest.raises(PreconditionError):
        eulerian_idempotents(0)


@given(group_elements(3), group_elements(3), group_elements(3))
def test_group_algebra_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_products_with_zero():
    zero = GroupAlgebraElement(3)
    e = GroupAlgebraElement(3, {(2, 1, 3): Fraction(1, 2)})
    assert (zero * e).is_zero()
    assert (e * zero).is_zero()
    assert (zero * zero).degree == 3


def test_rejects_non_permutations():
    with pytest.raises(PreconditionError):
        GroupAlgebraElement(3, {(1, 1, 2): 1})


def test_place_permutation():
    assert permute_tensor((2, 3, 1), ("a", "b", "c")) == ("c", "a", "b")


def test_action_of_e2():
    e1 = eulerian_idempotents(2)[0]
    assert act_on_tensor(e1, {("x", "y"): 1}) == {("x", "y"): half, ("y", "x"): half}


def test_identity_acts_trivially():
    t = {("x", "y", "x"): Fraction(3), ("y", "y", "x"): Fraction(-1)}
    assert act_on_tensor(GroupAlgebraElement.identity(3), t) == t


def test_antisymmetrizer_kills_repeated_slots():
    assert act_on_tensor(eulerian_idempotents(3)[2], {("x", "x", "y"): 1}) == {}


def test_action_degree_mismatch():
    with pytest.raises(PreconditionError):
        act_on_tensor(eulerian_idempotents(2)[0], {("x", "y", "z"): 1})


@given(group_elements(3), group_elements(3))
def test_action_is_a_left_module(a, b):
    t = {("x", "y", "z"): 1, ("y", "x", "x"): 2}
    assert act_on_tensor(a * b, t) == act_on_tensor(a, act_on_tensor(b, t))


def test_shuffle_product():
    assert shuffle_product({("a",): 1}, {("b",): 1}) == {("a", "b"): 1, ("b", "a"): -1}
    assert shuffle_product({("a",): 1}, {("b", "c"): 1}) == {
        ("a", "b", "c"): 1,
        ("b", "a", "c"): -1,
        ("b", "c", "a"): 1,
    }


def test_str():
    e1 = eulerian_idempotents(2)[0]
    assert str(e1) == "1/2*[12] + 1/2*[21]"
    assert e1.to_dict() == {"12": "1/2", "21": "1/2"}
