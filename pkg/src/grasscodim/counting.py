"""Closed-form counts of structured terms and their enumeration shadows.

Each ``c_family`` value exists in two readings:

* ``formula``: the closed expression evaluated as printed, with every binomial
  whose arguments are out of range taken to be 0;
* ``enumeration``: the number of family members actually generated by
  :func:`grasscodim.structure.enumerate_family`.

The enumeration is normative; formula values are kept for auditing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import lru_cache
from math import comb

from .structure import FAMILIES, enumerate_family

__all__ = [
    "CountParams",
    "binom",
    "kappa",
    "kappa_bruteforce",
    "p_count",
    "c_family_formula",
    "c_family_enum",
    "c_family",
    "c_star",
    "c_circ",
    "u_dim_bound",
    "READINGS",
]

READINGS = ("enumeration", "formula")


@dataclass(frozen=True)
class CountParams:
    p: int
    q: int
    l: int  # noqa: E741
    m: int
    k: int | None = None
    n1: int = 0
    n2: int = 0
    mode: str = "psi"

    def __post_init__(self) -> None:
        from .gf import is_prime

        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        e, qq = 0, self.q
        while qq % self.p == 0 and qq > 1:
            qq //= self.p
            e += 1
        if qq != 1 or e < 1:
            raise ValueError(f"q={self.q} is not a power of p={self.p}")
        if self.l < 1 or self.m < 1:
            raise ValueError("l and m must be at least 1")
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("degrees must be nonnegative")

    def at(self, n1: int, n2: int) -> CountParams:
        return replace(self, n1=n1, n2=n2)


def binom(n: int, r: int) -> int:
    """Binomial coefficient, 0 whenever an argument is out of range."""
    if n < 0 or r < 0 or r > n:
        return 0
    return comb(n, r)


@lru_cache(maxsize=None)
def kappa(n: int, j: int, k: int) -> int:
    """Number of exponent vectors in [0, j)^k with coordinate sum n."""
    if n < 0:
        return 0
    if k == 0:
        return 1 if n == 0 else 0
    total = 0
    s = 0
    while s * j <= n:
        r = n - s * j
        total += (-1) ** s * binom(k + r - 1, r) * binom(k, s)
        s += 1
    return total


def kappa_bruteforce(n: int, j: int, k: int) -> int:
    return sum(1 for v in itertools.product(range(j), repeat=k) if sum(v) == n)


def p_count(s: int, l: int, p: int, q: int) -> tuple[int, int]:  # noqa: E741
    """(number of p-polynomial monomials of degree s, the q^kappa value used by c_circ)."""
    if s % p:
        return 0, 1
    t = kappa(s // p, q, l)
    return t, q**t


def _bracket(n1: int, n2: int, pr: CountParams) -> int:
    return kappa(n1, pr.p, pr.l) * kappa(n2, pr.p, pr.m)


def c_family_formula(family: str, n1: int, n2: int, pr: CountParams) -> int:
    """Closed-form count of ``family`` members of bidegree (n1, n2), as printed."""
    if n1 < 0 or n2 < 0:
        return 0
    l, m, k = pr.l, pr.m, pr.k  # noqa: E741
    if family == "SS0":
        return kappa(n1, pr.p, l) * kappa(n2, 2, m)
    if family == "SS":
        n = n1 + n2
        return sum(binom(n, 2 * s) for s in range(n // 2 + 1)) + _bracket(n1, n2, pr)
    if k is None:
        raise ValueError(f"family {family} needs k")
    n = n1 + n2
    total = 0
    if family == "SS1":
        if n2 > k:
            return 0
        for s in range(n // 2 + 1):
            for beta in range(0, min(k, 2 * s) + 1):
                total += (binom(m, beta) * binom(l, 2 * s - beta) * binom(m - beta, n2 - beta)
                          * binom(l - 2 * s + beta, n1 - 2 * s + beta))
        return total + _bracket(n1, n2, pr)
    if family in ("SS2", "SS3"):
        for s in range(n // 2 + 1):
            # 2*beta compared with k+1+2s-n2 to keep the bound exact
            lim = k + 1 + 2 * s - n2
            for beta in range(0, min(k, 2 * s) + 1):
                main = (binom(l, beta) * binom(m, 2 * s - beta) * binom(l - beta, n1 - beta)
                        * binom(m - 2 * s + beta, n2 - 2 * s + beta))
                edge = (binom(l, beta) * binom(m - 1, 2 * s - beta) * binom(l - beta, n1 - beta)
                        * binom(m - 2 * s + beta, n2 - 2 * s + beta))
                if family == "SS2":
                    if 2 * beta <= lim:
                        total += main
                elif 2 * beta < lim:
                    total += main
                elif 2 * beta == lim:
                    total += edge
        if n2 <= k + 1:
            total += _bracket(n1, n2, pr)
        return total
    raise ValueError(f"unknown family {family!r}")


@lru_cache(maxsize=None)
def _c_enum(family: str, n1: int, n2: int, l: int, m: int, p: int, k, mode: str) -> int:  # noqa: E741
    return len(enumerate_family(family, (n1, n2), l, m, p, k, mode))


def c_family_enum(family: str, n1: int, n2: int, pr: CountParams) -> int:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if n1 < 0 or n2 < 0:
        return 0
    return _c_enum(family, n1, n2, pr.l, pr.m, pr.p, pr.k, pr.mode)


def c_family(family: str, pr: CountParams, reading: str = "enumeration") -> int:
    """Count of ``family`` members of bidegree (pr.n1, pr.n2)."""
    if reading == "enumeration":
        return c_family_enum(family, pr.n1, pr.n2, pr)
    if reading == "formula":
        return c_family_formula(family, pr.n1, pr.n2, pr)
    raise ValueError(f"unknown reading {reading!r}")


def c_star(family: str, pr: CountParams, reading: str = "enumeration") -> int:
    """Sum over s in [0, q-1]^l with p*|s| <= n1 of c_(n1 - p|s|, n2).

    Vectors s with the same |s| = t contribute equally; there are kappa(t, q, l)
    of them.
    """
    total = 0
    t = 0
    while pr.p * t <= pr.n1:
        mult = kappa(t, pr.q, pr.l)
        if mult:
            total += mult * c_family(family, pr.at(pr.n1 - pr.p * t, pr.n2), reading)
        t += 1
    return total


def c_circ(family: str, pr: CountParams, reading: str = "enumeration",
           ppoly: str = "polynomial") -> int:
    """Sum over s <= n1 of p(s) * c_(n1 - s, n2).

    ``ppoly="polynomial"`` uses p(s) = q^kappa(s/p, q, l) (and 1 when p does not divide s);
    ``ppoly="monomial"`` uses the monomial count kappa(s/p, q, l) (and 0).
    """
    if ppoly not in ("polynomial", "monomial"):
        raise ValueError(f"unknown p(s) reading {ppoly!r}")
    total = 0
    for s in range(pr.n1 + 1):
        mono, poly = p_count(s, pr.l, pr.p, pr.q)
        w = poly if ppoly == "polynomial" else mono
        if w:
            total += w * c_family(family, pr.at(pr.n1 - s, pr.n2), reading)
    return total


def u_dim_bound(l: int, m: int, p: int, q: int) -> int:  # noqa: E741
    """((l+m)^(pql+pm+1) - 1) / (l+m-1), the size of all words of length <= pql+pm."""
    if l < 0 or m < 0 or l + m < 2:
        raise ValueError("the bound needs l + m >= 2")
    n = p * q * l + p * m
    b = l + m
    return (b ** (n + 1) - 1) // (b - 1)
