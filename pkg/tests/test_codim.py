from __future__ import annotations

import pytest

from grasscodim.codim import (MultifreeBasis, codim_report, compositions_box,
                              default_truncation, exact_codim, formula_ledger,
                              independence_certificate, multifree_basis, oracle_bidegree,
                              oracle_dim, w_bounds)
from grasscodim.counting import CountParams
from grasscodim.freealg import Multidegree
from grasscodim.grassmann import Canonical, Infinity, K, KStar
from grasscodim.structure import PPolyMonomial, enumerate_family, is_member

P = Q = 3


def md(a, b):
    return Multidegree(tuple(a), tuple(b))


def test_basis_examples_canonical():
    assert multifree_basis(md([1], []), Canonical(), P, Q).labels() == ["y1"]
    assert multifree_basis(md([3], []), Canonical(), P, Q).labels() == ["y1^3"]
    assert multifree_basis(md([], [1, 1]), Canonical(), P, Q).labels() == ["z1*z2"]


@pytest.mark.parametrize("spec", [Canonical(), Infinity(), KStar(1), K(1), K(2)], ids=str)
def test_basis_elements_have_the_multidegree_and_family(spec):
    for a in range(0, 7):
        for b in range(0, 3):
            basis = multifree_basis(md([a], [b]), spec, P, Q)
            for f, u in basis.elements:
                assert tuple(x + e for x, e in zip(u.multidegree.a, f.exps)) == (a,)
                assert u.multidegree.b == (b,)
                assert is_member(u, spec.family, P, spec.k)
                assert all(e % P == 0 and e < P * Q for e in f.exps)
            us = [u for _, u in basis.elements]
            assert len(us) == len(set(us))


def test_compositions_box():
    assert compositions_box((7, 2), 3, 3) == [(0, 0), (1, 0), (2, 0)]


def test_default_truncation():
    assert default_truncation(1, 1, 3, 3) == 2 * (9 + 3) + 4
    assert default_truncation(2, 2, 3, 3, k=2) == 2 * (18 + 6) + 2 + 4
    assert default_truncation(1, 1, 3, 9) == 59


def test_exact_codim_examples():
    pr = CountParams(P, Q, 1, 1)
    assert exact_codim(0, 1, Canonical(), pr) == 1
    assert exact_codim(1, 4, Canonical(), pr) == 0
    for n2 in (1, 2, 3):
        assert exact_codim(2, n2, KStar(0), CountParams(P, Q, 1, 1, 0)) == 0


def test_codim_report_agrees_with_itself():
    rep = codim_report(2, 2, Infinity(), CountParams(P, Q, 2, 2))
    assert rep["exact"] == rep["sum_of_bases"] == sum(rep["per_multidegree"].values())


def test_oracle_small_certificates():
    cert = oracle_dim(md([1], []), Canonical(), P, Q)
    assert (cert.predicted, cert.rank, cert.stable, cert.ok) == (1, 1, True, True)
    zero = oracle_dim(md([1], [4]), Canonical(), P, Q)
    assert zero.rank == 0 and zero.rank_augmented == 0
    assert cert.rank_at_N_plus_4 == cert.rank


def test_independence_certificates():
    for a in range(3):
        for b in range(2):
            basis = multifree_basis(md([a], [b]), Canonical(), P, Q)
            assert independence_certificate(basis).independent
    basis = multifree_basis(md([1], [1]), K(1), P, Q)
    assert independence_certificate(basis).independent


def test_duplicated_column_is_detected():
    basis = multifree_basis(md([1], [1]), Infinity(), P, Q)
    doubled = MultifreeBasis(basis.multidegree, basis.grading, P, Q,
                             basis.elements + basis.elements[:1])
    cert = independence_certificate(doubled)
    assert cert.rank == len(basis) < cert.predicted
    assert cert.gap == "rank below predicted"


def test_ss3_dependency_is_certified():
    # z1[y1,z2] + z2[y1,z1] vanishes on E_1, so the K(1) basis of y1 z1 z2 loses one
    basis = multifree_basis(md([1], [1, 1]), K(1), P, Q)
    cert = oracle_dim(md([1], [1, 1]), K(1), P, Q)
    assert len(basis) == 4 and cert.rank == 3 and cert.spanning and cert.stable


def test_w_bounds():
    pr = CountParams(P, Q, 1, 1)
    lo, hi = w_bounds(2, 1, 1, Canonical(), pr)
    assert lo == 1 and hi >= lo
    with pytest.raises(ValueError):
        w_bounds(3, 1, 1, Canonical(), pr)


def test_bidegree_oracle_inside_bounds():
    pr = CountParams(P, Q, 1, 1)
    lo, hi = w_bounds(2, 1, 1, Canonical(), pr)
    cert = oracle_bidegree(1, 1, 1, 1, Canonical(), P, Q)
    assert lo <= cert.rank <= hi and cert.stable


def test_formula_ledger_records_degenerate_bidegree():
    rows = formula_ledger(["SS"], P, Q, [1], [1], [0], 0)
    assert rows == [{"family": "SS", "p": 3, "q": 3, "l": 1, "m": 1, "k": None, "n1": 0,
                     "n2": 0, "formula": 2, "enumeration": 1}]


def test_ppoly_unit_in_basis():
    basis = multifree_basis(md([0], [1]), Canonical(), P, Q)
    assert basis.elements[0][0] == PPolyMonomial((0,))
    assert [u for _, u in basis.elements] == enumerate_family("SS0", (0, 1), 1, 1, P)
