"""The free Z2-graded algebra F<Y u Z>: words, polynomials, commutators, evaluation.

Variables ``y_i`` have Z2-degree 0 and ``z_j`` degree 1.  Variables are ordered
``y1 < y2 < ... < z1 < z2 < ...``, which is exactly the tuple order of
:class:`Variable`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .gf import FieldElement, FieldSpec
from .grassmann import GradingSpec, GrassmannElement, homogeneous_part

__all__ = [
    "Variable",
    "y",
    "z",
    "Word",
    "FreePolynomial",
    "Multidegree",
    "commutator",
    "long_commutator",
    "g_m",
    "multidegree_of",
    "bidegree_of",
    "is_multihomogeneous",
    "random_polynomial",
    "evaluate",
    "evaluate_batch",
    "parse",
    "format_poly",
]


class Variable(NamedTuple):
    sort: str  # "y" or "z"
    index: int

    @property
    def degree(self) -> int:
        return 0 if self.sort == "y" else 1

    def __str__(self) -> str:
        return f"{self.sort}{self.index}"

    @classmethod
    def parse(cls, text: str) -> Variable:
        m = re.fullmatch(r"\s*([yz])(\d+)\s*", text)
        if not m or int(m.group(2)) < 1:
            raise ValueError(f"not a variable: {text!r}")
        return cls(m.group(1), int(m.group(2)))


def y(i: int) -> Variable:
    return Variable("y", i)


def z(i: int) -> Variable:
    return Variable("z", i)


Word = tuple  # tuple[Variable, ...]


def word_str(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    for v, grp in itertools.groupby(w):
        k = len(list(grp))
        parts.append(str(v) if k == 1 else f"{v}^{k}")
    return "*".join(parts)


def word_key(w: Word) -> tuple:
    return (len(w), w)


@dataclass(frozen=True)
class Multidegree:
    """Per-variable degrees: ``a`` for y1..yl, ``b`` for z1..zm."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.a)

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def bidegree(self) -> tuple[int, int]:
        return sum(self.a), sum(self.b)

    @property
    def total(self) -> int:
        return sum(self.a) + sum(self.b)

    def degree_of(self, v: Variable) -> int:
        seq = self.a if v.sort == "y" else self.b
        return seq[v.index - 1] if v.index <= len(seq) else 0

    def variables(self) -> list[Variable]:
        return [y(i + 1) for i in range(self.l)] + [z(j + 1) for j in range(self.m)]

    def __str__(self) -> str:
        return f"a={self.a},b={self.b}"


class FreePolynomial:
    """Finite GF(q)-combination of words; stored as word -> nonzero field code."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: Mapping[Word, int] | None = None):
        self.field = field
        self.terms: dict[Word, int] = {w: c for w, c in (terms or {}).items() if c}

    # constructors
    @classmethod
    def zero(cls, field: FieldSpec) -> FreePolynomial:
        return cls(field)

    @classmethod
    def constant(cls, field: FieldSpec, c: int | FieldElement = 1) -> FreePolynomial:
        code = c.code if isinstance(c, FieldElement) else field.from_int(c)
        return cls(field, {(): code})

    @classmethod
    def var(cls, field: FieldSpec, v: Variable | str) -> FreePolynomial:
        if isinstance(v, str):
            v = Variable.parse(v)
        return cls(field, {(v,): 1})

    @classmethod
    def word(cls, field: FieldSpec, w: Iterable[Variable], c: int = 1) -> FreePolynomial:
        return cls(field, {tuple(w): field.from_int(c)})

    def _coerce(self, other) -> FreePolynomial | None:
        if isinstance(other, FreePolynomial):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, (int, FieldElement)):
            return FreePolynomial.constant(self.field, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        out = dict(self.terms)
        for w, c in o.terms.items():
            out[w] = f.add(out.get(w, 0), c)
        return FreePolynomial(f, out)

    __radd__ = __add__

    def __neg__(self) -> FreePolynomial:
        f = self.field
        return FreePolynomial(f, {w: f.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c: int | FieldElement) -> FreePolynomial:
        f = self.field
        code = c.code if isinstance(c, FieldElement) else f.from_int(c)
        return FreePolynomial(f, {w: f.mul(v, code) for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        out: dict[Word, int] = {}
        for wa, ca in self.terms.items():
            for wb, cb in o.terms.items():
                w = wa + wb
                out[w] = f.add(out.get(w, 0), f.mul(ca, cb))
        return FreePolynomial(f, out)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> FreePolynomial:
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = FreePolynomial.constant(self.field, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, FreePolynomial):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items(), key=lambda t: word_key(t[0]))))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, w: Iterable[Variable]) -> FieldElement:
        return FieldElement(self.field, self.terms.get(tuple(w), 0))

    def sorted_terms(self) -> list[tuple[Word, int]]:
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

    def variables(self) -> list[Variable]:
        return sorted({v for w in self.terms for v in w})

    def dims(self) -> tuple[int, int]:
        """Smallest (l, m) whose variable sets contain every occurring variable."""
        l = max((v.index for w in self.terms for v in w if v.sort == "y"), default=0)  # noqa: E741
        m = max((v.index for w in self.terms for v in w if v.sort == "z"), default=0)
        return l, m

    def max_degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"FreePolynomial({format_poly(self)!r})"


def commutator(f: FreePolynomial, g: FreePolynomial) -> FreePolynomial:
    return f * g - g * f


def _as_poly(x, field: FieldSpec | None) -> FreePolynomial:
    if isinstance(x, FreePolynomial):
        return x
    if field is None:
        raise ValueError("a field is required to build polynomials from variables")
    return FreePolynomial.var(field, x)


def long_commutator(xs: Sequence, field: FieldSpec | None = None) -> FreePolynomial:
    """Left-normed commutator [x1, x2, ..., xn] = [[x1, x2], ..., xn]."""
    if not xs:
        raise ValueError("empty commutator")
    if field is None:
        field = next((x.field for x in xs if isinstance(x, FreePolynomial)), None)
    out = _as_poly(xs[0], field)
    for x in xs[1:]:
        out = commutator(out, _as_poly(x, field))
    return out


def g_m(zs: Sequence[Variable], field: FieldSpec) -> FreePolynomial:
    """Sum over even position sets T of (-2)^(-|T|/2) f_T(z_1, ..., z_h).

    f_T is the product of the variables outside T (in the given order) followed
    by the commutators pairing consecutive elements of T.
    """
    h = len(zs)
    if h == 0:
        raise ValueError("g_m needs at least one variable")
    half_inv = field.inv(field.neg(field.scalar(2)))  # (-2)^(-1)
    out = FreePolynomial.zero(field)
    for size in range(0, h + 1, 2):
        coef = field.pow(half_inv, size // 2)
        for tset in itertools.combinations(range(h), size):
            rest = [zs[i] for i in range(h) if i not in tset]
            term = FreePolynomial.word(field, rest)
            for j in range(0, size, 2):
                term = term * long_commutator([zs[tset[j]], zs[tset[j + 1]]], field)
            out = out + term.scale(FieldElement(field, coef))
    return out


def multidegree_of(w: Word, l: int, m: int) -> Multidegree:  # noqa: E741
    a = [0] * l
    b = [0] * m
    for v in w:
        if v.sort == "y":
            if v.index > l:
                raise ValueError(f"{v} outside y1..y{l}")
            a[v.index - 1] += 1
        else:
            if v.index > m:
                raise ValueError(f"{v} outside z1..z{m}")
            b[v.index - 1] += 1
    return Multidegree(tuple(a), tuple(b))


def bidegree_of(w: Word) -> tuple[int, int]:
    ny = sum(1 for v in w if v.sort == "y")
    return ny, len(w) - ny


def is_multihomogeneous(f: FreePolynomial) -> bool:
    l, m = f.dims()  # noqa: E741
    degs = {multidegree_of(w, l, m) for w in f.terms}
    return len(degs) <= 1


# -- evaluation -------------------------------------------------------------------

def random_polynomial(field: FieldSpec, l: int, m: int, max_bidegree: tuple[int, int],  # noqa: E741
                      rng, max_terms: int = 4) -> FreePolynomial:
    """Sum of 1..max_terms random words in y1..yl, z1..zm with nonzero random coefficients.

    Each word has y-length at most max_bidegree[0] and z-length at most
    max_bidegree[1]; its letters are shuffled uniformly.
    """
    ys = [y(i + 1) for i in range(l)]
    zs = [z(j + 1) for j in range(m)]
    out = FreePolynomial.zero(field)
    for _ in range(int(rng.integers(1, max_terms + 1))):
        n1 = int(rng.integers(max_bidegree[0] + 1)) if ys else 0
        n2 = int(rng.integers(max_bidegree[1] + 1)) if zs else 0
        letters = ([ys[int(i)] for i in rng.integers(len(ys), size=n1)] if n1 else []) + \
                  ([zs[int(j)] for j in rng.integers(len(zs), size=n2)] if n2 else [])
        w = tuple(letters[int(i)] for i in rng.permutation(len(letters)))
        out = out + FreePolynomial(field, {w: int(rng.integers(1, field.q))})
    return out


def _trie(f: FreePolynomial) -> dict:
    root: dict = {}
    for w, c in f.terms.items():
        node = root
        for v in w:
            node = node.setdefault(v, {})
        node[None] = c
    return root


def evaluate(f: FreePolynomial, assign: Mapping[Variable, GrassmannElement],
             spec: GradingSpec) -> GrassmannElement:
    """Image of ``f`` under the graded homomorphism given by ``assign``.

    Every variable of ``f`` must be assigned a homogeneous element of its own
    Z2-degree; anything else raises ValueError.
    """
    needed = f.variables()
    if not assign and not needed:
        raise ValueError("cannot infer the target algebra from an empty assignment")
    for v in needed:
        if v not in assign:
            raise ValueError(f"variable {v} is not assigned")
    any_img = next(iter(assign.values()))
    field, n = any_img.field, any_img.n
    if field != f.field:
        raise ValueError("assignment and polynomial live over different fields")
    for v, img in assign.items():
        if img.field != field or img.n != n:
            raise ValueError("assigned elements live in different algebras")
        if homogeneous_part(img, spec, v.degree) != img:
            raise ValueError(f"image of {v} is not homogeneous of degree {v.degree} under {spec}")
    result = GrassmannElement.zero(field, n)
    stack = [(_trie(f), GrassmannElement.scalar(field, n, 1))]
    while stack:
        node, val = stack.pop()
        for key, child in node.items():
            if key is None:
                result = result + val.scale(FieldElement(field, child))
            elif not val.is_zero():
                stack.append((child, val * assign[key]))
    return result


def evaluate_batch(f: FreePolynomial, images: Mapping[Variable, "Batch"]):
    """Evaluate ``f`` on a batch of substitutions (no grading checks)."""
    from .batch import Batch

    first = next(iter(images.values()))
    field, n, t = first.field, first.n, first.trials
    pieces: list[Batch] = []
    acc = Batch.zeros(field, n, t)
    stack = [(_trie(f), Batch.scalar(field, n, t, 1))]
    while stack:
        node, val = stack.pop()
        for key, child in node.items():
            if key is None:
                pieces.append(val.scale(child))
                if len(pieces) >= 32:
                    acc = Batch.sum([acc] + pieces)
                    pieces = []
            else:
                if key not in images:
                    raise ValueError(f"variable {key} is not assigned")
                if val.width:
                    stack.append((child, val * images[key]))
    return Batch.sum([acc] + pieces) if pieces else acc


# -- text ------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([yz])(\d+)|(\d+)|#(\d+)|(.))")


class _Parser:
    def __init__(self, text: str, field: FieldSpec):
        self.field = field
        self.toks: list[tuple[str, object]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if not mt or mt.end() == pos:
                raise ValueError(f"unexpected input at {text[pos:]!r}")
            pos = mt.end()
            if mt.group(1):
                idx = int(mt.group(2))
                if idx < 1:
                    raise ValueError("variable indices start at 1")
                self.toks.append(("var", Variable(mt.group(1), idx)))
            elif mt.group(3):
                self.toks.append(("int", int(mt.group(3))))
            elif mt.group(4):
                self.toks.append(("elt", field.parse(mt.group(4))))
            else:
                ch = mt.group(5)
                if ch.isspace():
                    continue
                if ch not in "+-*^()[],":
                    raise ValueError(f"unexpected character {ch!r}")
                self.toks.append((ch, None))
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind: str):
        if self.peek() != kind:
            got = self.peek() or "end of input"
            raise ValueError(f"expected {kind!r}, got {got!r}")
        tok = self.toks[self.i]
        self.i += 1
        return tok[1]

    def expr(self) -> FreePolynomial:
        if self.peek() == "+":
            self.take("+")
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.take(op)
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> FreePolynomial:
        out = self.factor()
        while self.peek() == "*":
            self.take("*")
            out = out * self.factor()
        return out

    def factor(self) -> FreePolynomial:
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            base = base ** self.take("int")
        return base

    def atom(self) -> FreePolynomial:
        kind = self.peek()
        f = self.field
        if kind == "var":
            return FreePolynomial.var(f, self.take("var"))
        if kind == "int":
            return FreePolynomial.constant(f, self.take("int"))
        if kind == "elt":
            return FreePolynomial.constant(f, FieldElement(f, self.take("elt")))
        if kind == "-":
            self.take("-")
            return -self.factor()
        if kind == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        if kind == "[":
            self.take("[")
            items = [self.expr()]
            while self.peek() == ",":
                self.take(",")
                items.append(self.expr())
            self.take("]")
            if len(items) < 2:
                raise ValueError("a commutator needs at least two entries")
            return long_commutator(items)
        raise ValueError(f"unexpected token {kind or 'end of input'!r}")


def parse(text: str, field: FieldSpec) -> FreePolynomial:
    """Parse the polynomial grammar: y<i>, z<j>, integers, #digits, + - * ^, [a,b,...]."""
    ps = _Parser(text, field)
    if ps.peek() is None:
        raise ValueError("empty polynomial")
    out = ps.expr()
    if ps.peek() is not None:
        raise ValueError(f"trailing input starting with {ps.peek()!r}")
    return out


def coeff_str(field: FieldSpec, code: int) -> tuple[str, str]:
    """(sign, magnitude) rendering of a coefficient; magnitude '' means 1."""
    s = field.to_signed_int(code)
    if s is None:
        return "+", "#" + field.to_str(code)
    sign = "-" if s < 0 else "+"
    mag = abs(s)
    return sign, "" if mag == 1 else str(mag)


def format_poly(f: FreePolynomial) -> str:
    if f.is_zero():
        return "0"
    out = []
    for w, c in f.sorted_terms():
        sign, mag = coeff_str(f.field, c)
        ws = word_str(w)
        if not w:
            body = mag or "1"
        else:
            body = f"{mag}*{ws}" if mag else ws
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)
