from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasscodim.batch import Batch
from grasscodim.gf import FieldElement, make_field
from grasscodim.grassmann import GrassmannElement, gmul

F3 = make_field(3)
F9 = make_field(3, 2)
N = 8


def element_lists(field, size):
    blade = st.lists(st.integers(1, N), unique=True, max_size=4).map(lambda b: tuple(sorted(b)))
    elem = st.dictionaries(blade, st.integers(1, field.q - 1), max_size=4).map(
        lambda d: GrassmannElement.from_blades(field, N, d))
    return st.lists(elem, min_size=size, max_size=size)


@given(st.sampled_from([F3, F9]), st.data())
@settings(max_examples=120, deadline=None)
def test_batch_matches_scalar_arithmetic(field, data):
    a = data.draw(element_lists(field, 5))
    b = data.draw(element_lists(field, 5))
    c = data.draw(st.lists(st.integers(0, field.q - 1), min_size=5, max_size=5))
    ba, bb = Batch.from_elements(a), Batch.from_elements(b)
    assert (ba * bb).to_elements() == [gmul(x, y) for x, y in zip(a, b)]
    assert (ba + bb).to_elements() == [x + y for x, y in zip(a, b)]
    assert (ba - bb).to_elements() == [x - y for x, y in zip(a, b)]
    assert ba.commutator(bb).to_elements() == [x * y - y * x for x, y in zip(a, b)]
    assert ba.scale(np.array(c)).to_elements() == [x.scale(FieldElement(field, k))
                                                   for x, k in zip(a, c)]
    assert list((ba * bb).is_zero()) == [gmul(x, y).is_zero() for x, y in zip(a, b)]
    assert (ba ** 3).to_elements() == [x * x * x for x in a]


def test_unmerged_products_merge_on_demand():
    one_plus = GrassmannElement.from_blades(F3, N, {(): 1, (1, 2): 1, (3, 4): 1})
    b = Batch.from_elements([one_plus] * 3)
    sq = b * b
    assert sq.to_elements() == [one_plus * one_plus] * 3
    assert sq.merged


def test_zero_rows_and_select():
    z = GrassmannElement.zero(F3, N)
    e1 = GrassmannElement.generator(F3, N, 1)
    b = Batch.from_elements([z, e1, z])
    assert list(b.is_zero()) == [True, False, True]
    assert b.select([1]).to_elements() == [e1]
    assert not b.all_zero()
    assert (b * b).all_zero()


def test_incompatible_batches_rejected():
    a = Batch.zeros(F3, N, 2)
    with pytest.raises(ValueError):
        a + Batch.zeros(F3, N, 3)
    with pytest.raises(ValueError):
        Batch.zeros(F3, 64, 1)
