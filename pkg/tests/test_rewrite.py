from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasscodim.freealg import parse, random_polynomial
from grasscodim.gf import make_field
from grasscodim.grassmann import Canonical, Infinity, K, KStar
from grasscodim.rewrite import (check_family, normal_form, pr_to_polynomial, residual_check,
                                to_pr)
from grasscodim.structure import PPolyMonomial, PrTerm

F3 = make_field(3)
F9 = make_field(3, 2)
SPECS = [Canonical(), Infinity(), KStar(0), KStar(1), KStar(2), K(1), K(2)]


def t(text, l, m):  # noqa: E741
    return PrTerm.parse(text, l, m)


def test_to_pr_examples():
    assert to_pr(parse("y2*y1", F3)) == {t("y1*y2", 2, 0): 1, t("[y1,y2]", 2, 0): 2}
    assert to_pr(parse("[y1,[y2,y3]]", F3)) == {}
    assert to_pr(parse("[y2,y1]", F3)) == {t("[y1,y2]", 2, 0): 2}


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_frobenius_reduction(spec):
    nf = normal_form(parse("y1^9", F3), spec)
    assert [(f, u, c) for f, u, c in nf.summands] == [(PPolyMonomial((3,)), t("1", 1, 0), 1)]
    assert str(nf) == "1 * y1^3"


def test_canonical_collapse_examples():
    assert normal_form(parse("z1*z2 + z2*z1", F3), Canonical()).is_zero()
    nf = normal_form(parse("z1*z2", F3), Canonical())
    assert nf.summands == [(PPolyMonomial(()), t("z1*z2", 0, 2), 1)]
    assert str(normal_form(parse("z2*z1", F3), Canonical())) == "-1 * z1*z2"


def test_odd_power_vanishes():
    for spec in SPECS:
        assert normal_form(parse("z1^3", F3), spec).is_zero()
    assert normal_form(parse("z1", F3), KStar(0)).is_zero()


def test_k_normal_form_reports_dependencies():
    nf = normal_form(parse("z1*[y1,z2] + z2*[y1,z1]", F3), K(1))
    assert nf.is_zero()
    assert nf.deficits == {"a=(1,),b=(1, 1)": (4, 3)}


def test_json_and_string_forms():
    nf = normal_form(parse("2*z2*z1*y1", F3), KStar(2))
    assert nf.to_json_obj() and all(set(d) == {"ppoly", "term", "coeff"} for d in nf.to_json_obj())
    assert str(normal_form(parse("0", F3), Infinity())) == "0"
    nf9 = normal_form(parse("#12*y1", F9), Infinity())
    assert str(nf9) == "#12 * y1"


def test_residual_detects_corruption():
    f = parse("y1*z1*y2 + 2*z2*y1", F3)
    spec = Infinity()
    nf = normal_form(f, spec)
    assert residual_check(f, nf, spec)["violations"] == 0
    bad = nf.to_polynomial() + parse("y1*z1", F3)
    assert residual_check(f, bad, spec)["violations"] > 0
    assert residual_check(parse("z1^3", F3), parse("0", F3), Canonical())["violations"] == 0


@given(st.sampled_from(SPECS), st.sampled_from([F3, F9]), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_normal_form_sound_and_idempotent(spec, field, seed):
    f = random_polynomial(field, 2, 2, (4, 3), np.random.default_rng(seed))
    nf = normal_form(f, spec, l=2, m=2)
    assert residual_check(f, nf, spec, trials=40, seed=seed)["violations"] == 0
    assert check_family(nf)
    again = normal_form(nf.to_polynomial(), spec, l=2, m=2)
    assert again.summands == nf.summands


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_pr_expansion_is_equal_modulo_triple_commutators(seed):
    f = random_polynomial(F9, 2, 2, (3, 3), np.random.default_rng(seed))
    g = pr_to_polynomial(to_pr(f), F9)
    for spec in (Canonical(), Infinity(), K(1)):
        assert residual_check(f, g, spec, trials=40, seed=seed)["violations"] == 0
