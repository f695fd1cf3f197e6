from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasscodim.freealg import Multidegree, y, z
from grasscodim.gf import make_field
from grasscodim.structure import (FAMILIES, PPolyMonomial, PrTerm, bad_terms, classify,
                                  compare_lex_rig, compare_ss, enumerate_family,
                                  enumerate_family_md, enumerate_ppoly, enumerate_pr,
                                  enumerate_pr_md, is_member, lbt, leading_term, multidegrees)

F3 = make_field(3)


def term(text, l, m):  # noqa: E741
    return PrTerm.parse(text, l, m)


def test_classify():
    c = classify(term("y1^2*[y2,z1]", 2, 1))
    assert c["Yyn"] == {y(1)} and c["Yny"] == {y(2)} and c["Zny"] == {z(1)}
    assert not (c["Yyy"] or c["Zyn"] or c["Zyy"])
    c = classify(term("z1*[z1,z2]", 1, 2))
    assert c["Zyy"] == {z(1)} and c["Zny"] == {z(2)}
    c = classify(term("y1^3", 1, 1))
    assert c["Yyn"] == {y(1)} and not any(v for k, v in c.items() if k != "Yyn")


def test_membership_examples():
    assert not is_member(term("y1^3", 1, 1), "SS", 3)
    assert is_member(term("z1*z2", 1, 2), "SS", 3)
    assert not is_member(term("z1*z2", 1, 2), "SS1", 3, 1)
    t = term("z1*[y1,z1]", 1, 1)
    assert is_member(t, "SS2", 3, 1)
    assert not is_member(t, "SS3", 3, 1)


def test_family_enumeration_examples():
    assert enumerate_family("SS0", (1, 1), 1, 1, 3) == [term("y1*z1", 1, 1)]
    assert enumerate_family("SS0", (0, 2), 1, 2, 3) == [term("z1*z2", 1, 2)]
    assert enumerate_family("SS1", (0, 2), 2, 2, 3, 1) == []


def test_ppoly_enumeration():
    assert enumerate_ppoly(3, 2, 3, 3) == [PPolyMonomial((3, 0)), PPolyMonomial((0, 3))]
    assert enumerate_ppoly(0, 2, 3, 3) == [PPolyMonomial((0, 0))]
    assert enumerate_ppoly(4, 2, 3, 3) == []


@pytest.mark.parametrize("l,p,q", [(1, 3, 3), (2, 3, 3), (2, 3, 9), (1, 5, 5)])
def test_ppoly_space_has_q_to_the_l_monomials(l, p, q):  # noqa: E741
    total = sum(len(enumerate_ppoly(s, l, p, q)) for s in range(0, (q - 1) * p * l + 1))
    assert total == q**l


def test_lex_rig_order():
    u, v, w = term("y1^2", 2, 1), term("y2^2", 2, 1), term("y1*y2", 2, 1)
    assert compare_lex_rig(u, v) == -1
    assert compare_lex_rig(w, v) == -1
    assert compare_lex_rig(u, u) == 0


def test_leading_term_degree_first():
    s, t = term("y1*z1", 1, 1), term("z1*[y1,z1]", 1, 1)
    assert leading_term([s, t]) == t  # degree 3 beats degree 2
    c = term("[y1,z1]", 1, 1)
    assert leading_term([c, s]) == s  # equal degree: larger power-product prefix wins
    assert bad_terms([s], s) == [] and lbt([s], s) is None


def test_pr_term_polynomial():
    assert str(term("y1*[y2,z1]", 2, 1).to_polynomial(F3)) == "y1*y2*z1 - y1*z1*y2"
    with pytest.raises(ValueError):
        term("z1*[z1,y1]", 1, 1)  # tails are written in increasing order


pr_terms = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(1, 2),
                     st.integers(1, 2)).flatmap(
    lambda t: st.sampled_from(enumerate_pr((t[0], t[1]), t[2], t[3]) or [None]))


@given(pr_terms, st.integers(0, 2))
@settings(max_examples=300, deadline=None)
def test_family_inclusions(u, k):
    if u is None:
        return
    p = 3
    ss = is_member(u, "SS", p)
    if is_member(u, "SS0", p):
        assert ss
    if is_member(u, "SS1", p, k):
        assert ss
    if is_member(u, "SS3", p, k):
        assert is_member(u, "SS2", p, k)


@given(st.lists(pr_terms, min_size=1, max_size=6))
@settings(max_examples=200, deadline=None)
def test_leading_term_is_maximal_and_bad_terms_below(ts):
    ts = [t for t in ts if t is not None]
    if not ts:
        return
    l = max(t.l for t in ts)  # noqa: E741
    m = max(t.m for t in ts)
    ts = list({t.with_ambient(l, m) for t in ts})
    lt = leading_term(ts)
    assert all(compare_ss(t, lt) <= 0 for t in ts)
    assert all(compare_ss(b, lt) < 0 for b in bad_terms(ts, lt))


@pytest.mark.parametrize("fam", FAMILIES)
def test_family_enumeration_is_filtered_pr(fam):
    k = 1 if fam in ("SS1", "SS2", "SS3") else None
    for md in multidegrees(2, 2, 2, 2):
        fam_terms = enumerate_family_md(fam, md, 3, k)
        assert fam_terms == [u for u in enumerate_pr_md(md) if is_member(u, fam, 3, k)]
        assert all(u.multidegree == md for u in fam_terms)


def test_multidegrees_cover_bidegree():
    mds = multidegrees(2, 1, 2, 1)
    assert Multidegree((2, 0), (1,)) in mds and len(mds) == 3
