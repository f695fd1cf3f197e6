from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasscodim.gf import make_field
from grasscodim.grassmann import (Canonical, GrassmannElement, Infinity, K, KStar,
                                  blade_mul, blade_to_mask, grade, homogeneous_part,
                                  mask_to_blade, parse_grading, random_graded_element,
                                  support_wt_dom)

F3 = make_field(3)
F9 = make_field(3, 2)
SPECS = [Canonical(), Infinity(), KStar(0), KStar(2), K(1), K(3)]
E = GrassmannElement


def blades(n):
    return st.lists(st.integers(1, n), unique=True, max_size=4).map(lambda b: tuple(sorted(b)))


def elements(field, n):
    return st.dictionaries(blades(n), st.integers(1, field.q - 1), max_size=5).map(
        lambda d: E.from_blades(field, n, d))


def test_defining_relations():
    e1, e2 = E.generator(F3, 4, 1), E.generator(F3, 4, 2)
    assert e1 * e2 == E.from_blades(F3, 4, {(1, 2): 1})
    assert e2 * e1 == E.from_blades(F3, 4, {(1, 2): -1})
    assert (E.from_blades(F3, 4, {(1, 2): 1}) * E.from_blades(F3, 4, {(2, 3): 1})).is_zero()


def test_unit_plus_nilpotent_cubed():
    u = E.scalar(F3, 4, 1) + E.from_blades(F3, 4, {(1, 2): 1})
    assert u * u * u == E.scalar(F3, 4, 1)


def test_support_weight_dominant():
    assert support_wt_dom(E.scalar(F3, 4, 1)) == (frozenset(), 0, E.scalar(F3, 4, 1))
    g = E.from_blades(F3, 4, {(1,): 1, (2, 3): 2})
    assert support_wt_dom(g) == (frozenset({1, 2, 3}), 2, E.from_blades(F3, 4, {(2, 3): 2}))
    h = E.from_blades(F3, 4, {(1, 2): 1, (3, 4): 1})
    assert support_wt_dom(h) == (frozenset({1, 2, 3, 4}), 2, h)


def test_grades_of_blades():
    assert grade((1, 2), Canonical()) == 0
    assert grade((1, 3), Infinity()) == 0
    assert grade((1, 2), KStar(1)) == 1
    assert grade((2,), K(1)) == 1
    assert grade((1,), K(1)) == 0


def test_homogeneous_parts():
    g = E.from_blades(F3, 4, {(1,): 1, (1, 2): 1})
    assert homogeneous_part(g, Canonical(), 1) == E.generator(F3, 4, 1)
    assert homogeneous_part(E.generator(F3, 4, 2), K(1), 1) == E.generator(F3, 4, 2)


def test_blade_masks_round_trip_and_sign():
    assert mask_to_blade(blade_to_mask((1, 3, 5))) == (1, 3, 5)
    assert blade_mul(blade_to_mask((2,)), blade_to_mask((1,))) == (-1, blade_to_mask((1, 2)))
    assert blade_mul(blade_to_mask((1,)), blade_to_mask((1, 2)))[0] == 0


def test_parse_and_str():
    g = E.parse(F3, 4, "2*e[2,3] + 1*e[1]")
    assert str(g) == "1*e[1] + 2*e[2,3]"
    assert E.parse(F3, 4, str(g)) == g


def test_parse_grading_labels():
    assert parse_grading("kstar2") == KStar(2)
    assert parse_grading("k", 3) == K(3)
    assert parse_grading("Canonical") == Canonical()
    with pytest.raises(ValueError):
        parse_grading("k")
    with pytest.raises(ValueError):
        K(0)


def test_out_of_range_blade_rejected():
    with pytest.raises(ValueError):
        E.generator(F3, 3, 4)


@pytest.mark.parametrize("spec", SPECS, ids=str)
@pytest.mark.parametrize("d", [0, 1])
def test_random_graded_elements_are_homogeneous(spec, d):
    rng = np.random.default_rng(5)
    for _ in range(200):
        g = random_graded_element(spec, d, 10, 3, rng, F3)
        assert homogeneous_part(g, spec, d) == g
    a = random_graded_element(spec, d, 10, 3, 11, F3)
    b = random_graded_element(spec, d, 10, 3, 11, F3)
    assert a == b


@given(st.sampled_from([F3, F9]), st.data())
@settings(max_examples=150, deadline=None)
def test_ring_axioms(field, data):
    a, b, c = (data.draw(elements(field, 6)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_supercommutative_for_length_parity(data):
    # the canonical grading (blade length mod 2) makes E supercommutative
    spec = Canonical()
    a, b = (data.draw(elements(F3, 6)) for _ in range(2))
    for da in (0, 1):
        for db in (0, 1):
            x, y = homogeneous_part(a, spec, da), homogeneous_part(b, spec, db)
            assert x * y == (y * x).scale(-1 if da and db else 1)
    odd = homogeneous_part(a, spec, 1)
    assert (odd * odd).is_zero()


def test_other_gradings_are_not_supercommutative():
    e1, e2 = E.generator(F3, 4, 1), E.generator(F3, 4, 2)
    # e2 is even under Infinity yet anticommutes with e1
    assert grade((2,), Infinity()) == 0
    assert e1 * e2 != e2 * e1


@given(st.sampled_from(SPECS), st.data())
@settings(max_examples=100, deadline=None)
def test_parts_sum_to_element(spec, data):
    g = data.draw(elements(F9, 6))
    assert homogeneous_part(g, spec, 0) + homogeneous_part(g, spec, 1) == g
