"""Finite fields GF(p^m) for odd primes p.

Elements are stored as integer codes ``c = d_0 + d_1 p + ... + d_{m-1} p^{m-1}``
where ``d_i`` are the coordinates in the polynomial basis ``1, x, ..., x^{m-1}``.
Hot paths work on raw codes through the :class:`FieldSpec` methods (scalar and
numpy-vectorized); :class:`FieldElement` is the user-facing wrapper.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "FieldSpec",
    "FieldElement",
    "make_field",
    "is_prime",
    "least_irreducible",
    "arith",
]

# add/sub tables are materialised up to this field size
_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    """Remainder of ``a`` by the monic ``mod`` (coefficients low to high)."""
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    out = [x % p for x in a[:dm]]
    return out + [0] * (dm - len(out))


def _divides(d: list[int], f: list[int], p: int) -> bool:
    return not any(_poly_mod(f, d, p))


def _is_irreducible(f: list[int], p: int) -> bool:
    """Trial division of the monic ``f`` by every monic polynomial of degree <= deg(f)/2."""
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _divides(list(low) + [1], f, p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Least monic irreducible polynomial of degree ``m`` over GF(p).

    Candidates are ordered by the integer ``sum c_i p^i`` of their lower
    coefficients, i.e. lexicographically from the coefficient of ``x^{m-1}`` down.
    Returned as coefficients low to high, including the leading 1.
    """
    if m == 1:
        return (0, 1)
    for code in range(p**m):
        low = [(code // p**i) % p for i in range(m)]
        if low[0] == 0:
            continue
        f = low + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m) with a fixed reduction polynomial."""

    p: int
    m: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    # -- digit conversions -------------------------------------------------
    def digits(self, code: int) -> tuple[int, ...]:
        p = self.p
        return tuple((code // p**i) % p for i in range(self.m))

    def from_digits(self, ds) -> int:
        p = self.p
        return sum((int(d) % p) * p**i for i, d in enumerate(ds))

    def to_str(self, code: int) -> str:
        return "".join(str(d) for d in self.digits(code))

    def parse(self, s: str) -> int:
        s = s.strip()
        if len(s) != self.m or not all(ch.isdigit() and int(ch) < self.p for ch in s):
            raise ValueError(f"{s!r} is not an element of {self!r}")
        return self.from_digits(int(ch) for ch in s)

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime subfield."""
        return n % self.p

    def to_signed_int(self, code: int) -> int | None:
        """Symmetric integer representative if ``code`` lies in the prime subfield."""
        if code >= self.p:
            return None
        return code if code <= self.p // 2 else code - self.p

    # -- tables -------------------------------------------------------------
    @cached_property
    def _digit_matrix(self) -> np.ndarray:
        q, p = self.q, self.p
        codes = np.arange(q, dtype=np.int64)
        return np.stack([(codes // p**i) % p for i in range(self.m)], axis=1)

    @cached_property
    def _powers(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.m)], dtype=np.int64)

    def _poly_mul_code(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self.from_digits(_poly_mod(prod, list(self.modulus), p))

    @cached_property
    def _exp_log(self) -> tuple[list[int], list[int]]:
        q = self.q
        if self.m == 1:
            def mul(a: int, b: int) -> int:
                return a * b % q
        else:
            mul = self._poly_mul_code
        g = None
        for cand in range(2, q):
            x, order = cand, 1
            while x != 1:
                x = mul(x, cand)
                order += 1
            if order == q - 1:
                g = cand
                break
        assert g is not None
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = mul(exp[i - 1], g)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        return exp, log

    @cached_property
    def _add_table(self) -> list[list[int]] | None:
        if self.m == 1 or self.q > _TABLE_LIMIT:
            return None
        q = self.q
        return [[self._add_digits(a, b) for b in range(q)] for a in range(q)]

    @cached_property
    def _neg_list(self) -> list[int]:
        p = self.p
        return [self.from_digits((-d) % p for d in self.digits(c)) for c in range(self.q)]

    @cached_property
    def np_tables(self) -> dict[str, np.ndarray]:
        """Dense numpy tables used by the vectorized kernels (non-prime fields)."""
        q = self.q
        exp, log = self._exp_log
        mul = np.zeros((q, q), dtype=np.int64)
        la = np.array(log, dtype=np.int64)
        ex = np.array(exp + exp, dtype=np.int64)
        nz = np.arange(1, q)
        mul[1:, 1:] = ex[la[nz][:, None] + la[nz][None, :]]
        dm = self._digit_matrix
        add = ((dm[:, None, :] + dm[None, :, :]) % self.p) @ self._powers
        neg = np.array(self._neg_list, dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = ex[(q - 1 - la[1:]) % (q - 1)]
        return {"mul": mul, "add": add, "neg": neg, "inv": inv}

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out, w = 0, 1
        for _ in range(self.m):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    # -- scalar arithmetic on codes ----------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        t = self._add_table
        return t[a][b] if t is not None else self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self._neg_list[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log = self._exp_log
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.m == 1:
            return pow(a, -1, self.p)
        exp, log = self._exp_log
        return exp[(-log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        if self.m == 1:
            return pow(a, k, self.p)
        exp, log = self._exp_log
        return exp[(log[a] * k) % (self.q - 1)]

    def scalar(self, n: int) -> int:
        """Code of the integer ``n`` times the unit."""
        return n % self.p

    # -- vectorized arithmetic on code arrays --------------------------------
    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (a + b) % self.p
        return self.np_tables["add"][a, b]

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (-a) % self.p
        return self.np_tables["neg"][a]

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (a * b) % self.p
        return self.np_tables["mul"][a, b]

    def vinv(self, a: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return np.array([pow(int(x), -1, self.p) if x else 0 for x in np.ravel(a)],
                            dtype=np.int64).reshape(np.shape(a))
        return self.np_tables["inv"][a]

    def vsum_groups(self, codes: np.ndarray, starts: np.ndarray) -> np.ndarray:
        """Field sums of consecutive groups of ``codes`` beginning at ``starts``."""
        if self.m == 1:
            return np.add.reduceat(codes, starts) % self.p
        dm = self._digit_matrix[codes]
        sums = np.add.reduceat(dm, starts, axis=0) % self.p
        return sums @ self._powers

    # -- element construction ----------------------------------------------
    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, str):
            return FieldElement(self, self.parse(value))
        return FieldElement(self, self.from_int(int(value)))

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElement(self, code)

    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.q)]


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    code: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixed-field arithmetic")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(self.code, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(o, self.code))

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, k: int) -> FieldElement:
        return FieldElement(self.field, self.field.pow(self.code, k))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.m, self.code))

    def digits(self) -> tuple[int, ...]:
        return self.field.digits(self.code)

    def __str__(self) -> str:
        return self.field.to_str(self.code)

    def __repr__(self) -> str:
        return f"{self.field!r}({self})"


@lru_cache(maxsize=None)
def make_field(p: int, m: int = 1) -> FieldSpec:
    """GF(p^m) for an odd prime ``p`` with the least irreducible reduction polynomial."""
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p!r}")
    if p == 2:
        raise ValueError("characteristic 2 is not supported")
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"extension degree must be a positive integer, got {m!r}")
    return FieldSpec(p, m, least_irreducible(p, m))


def arith(a: FieldElement, b: FieldElement | int, op: str) -> FieldElement:
    """Dispatch ``op`` in {add, sub, mul, div, pow_k}; for pow_k ``b`` is the integer exponent."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow_k":
        if not isinstance(b, int):
            raise TypeError("pow_k expects an integer exponent")
        return a**b
    raise ValueError(f"unknown operation {op!r}")
