"""Generating sets of the graded identities of E, and a verifier over E_N.

Vanishing on a truncated E_N is a necessary condition only: E_N satisfies
identities that E does not (for example any product of more than N odd
elements).  Sufficiency is carried by the rank certificates of ``codim``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .batch import Batch
from .freealg import (FreePolynomial, Variable, evaluate_batch, g_m, long_commutator,
                      format_poly, y, z)
from .gf import FieldSpec, make_field
from .grassmann import Canonical, GradingSpec, GrassmannElement, Infinity, KStar, K, grade
from .sampling import derive_seed, uniform_images

__all__ = [
    "Generator",
    "IdentityBasis",
    "identity_basis",
    "is_multilinear",
    "verify",
    "consequence_spot_checks",
    "mutations",
    "mutation_check",
]


@dataclass(frozen=True)
class Generator:
    label: str
    poly: FreePolynomial

    def to_dict(self) -> dict:
        return {"label": self.label, "polynomial": format_poly(self.poly)}


@dataclass(frozen=True)
class IdentityBasis:
    grading: GradingSpec
    field: FieldSpec
    generators: tuple[Generator, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("an identity basis needs at least one generator")

    def labels(self) -> list[str]:
        return [g.label for g in self.generators]


def _vars(sorts: str) -> list[Variable]:
    """Fresh variables for a sort pattern such as 'yzy' -> y1, z1, y2."""
    count = {"y": 0, "z": 0}
    out = []
    for s in sorts:
        count[s] += 1
        out.append(Variable(s, count[s]))
    return out


def _comm_product(pairs: Sequence[tuple], field: FieldSpec) -> FreePolynomial:
    out = FreePolynomial.constant(field, 1)
    for a, b in pairs:
        out = out * long_commutator([a, b], field)
    return out


def _triple_commutators(field: FieldSpec) -> list[Generator]:
    out = []
    for sorts in itertools.product("yz", repeat=3):
        vs = _vars("".join(sorts))
        out.append(Generator(f"[x1,x2,x3] ({','.join(map(str, vs))})",
                             long_commutator(vs, field)))
    return out


def _frobenius(field: FieldSpec) -> Generator:
    p, q = field.p, field.q
    y1 = FreePolynomial.var(field, y(1))
    return Generator(f"y1^{p * q} - y1^{p}", y1 ** (p * q) - y1 ** p)


def _z_power(field: FieldSpec) -> Generator:
    return Generator(f"z1^{field.p}", FreePolynomial.var(field, z(1)) ** field.p)


def _k_generators(k: int, field: FieldSpec) -> list[Generator]:
    ys = [y(i) for i in range(1, 2 * k + 4)]
    out: list[Generator] = []
    if k % 2:
        pairs = [(ys[i], ys[i + 1]) for i in range(0, k + 1, 2)]
        out.append(Generator("(1) " + "".join(f"[{a},{b}]" for a, b in pairs),
                             _comm_product(pairs, field)))
    else:
        head = [(ys[i], ys[i + 1]) for i in range(0, k, 2)]
        for x in (ys[k + 1], z(1)):
            pairs = head + [(ys[k], x)]
            out.append(Generator("(2) " + "".join(f"[{a},{b}]" for a, b in pairs),
                                 _comm_product(pairs, field)))
    out += [Generator("(3) " + g.label, g.poly) for g in _triple_commutators(field)]
    for l in range(0, k + 1):  # noqa: E741
        h = k - l + 2
        zs = [z(j) for j in range(1, h + 1)]
        gz = g_m(zs, field)
        name = f"g_{h}(z1..z{h})"
        if l % 2 == 0:
            pairs = [(ys[i], ys[i + 1]) for i in range(0, l, 2)]
            out.append(Generator(f"(4) l={l}: {name}" + "".join(f"[{a},{b}]" for a, b in pairs),
                                 gz * _comm_product(pairs, field)))
        else:
            tail = [(ys[i], ys[i + 1]) for i in range(1, l, 2)]
            tail_s = "".join(f"[{a},{b}]" for a, b in tail)
            first = [(z(h + 1), ys[0])]
            out.append(Generator(f"(5) l={l}: {name}[{z(h + 1)},y1]" + tail_s,
                                 gz * _comm_product(first + tail, field)))
            out.append(Generator(f"(6) l={l}: [{name},y1]" + tail_s,
                                 long_commutator([gz, FreePolynomial.var(field, ys[0])], field)
                                 * _comm_product(tail, field)))
    out.append(Generator("(7) " + _z_power(field).label, _z_power(field).poly))
    fr = _frobenius(field)
    out.append(Generator("(8) " + fr.label, fr.poly))
    return out


def identity_basis(spec: GradingSpec, field: FieldSpec | None = None, p: int = 3,
                   q: int | None = None) -> IdentityBasis:
    """The generating set of the graded identities of E under ``spec``."""
    if field is None:
        q = p if q is None else q
        m = round(np.log(q) / np.log(p))
        if p**m != q:
            raise ValueError(f"q={q} is not a power of p={p}")
        field = make_field(p, m)
    y1, y2, z1, z2 = (FreePolynomial.var(field, v) for v in (y(1), y(2), z(1), z(2)))
    if spec.kind == "can":
        gens = [Generator("y1*y2 - y2*y1", y1 * y2 - y2 * y1),
                Generator("z1*z2 + z2*z1", z1 * z2 + z2 * z1),
                Generator("y1*z2 - z2*y1", y1 * z2 - z2 * y1),
                _frobenius(field)]
    elif spec.kind == "inf":
        gens = _triple_commutators(field) + [_z_power(field), _frobenius(field)]
    elif spec.kind == "kstar":
        if spec.k == 0:
            gens = [Generator("[y1,y2,y3]", long_commutator([y(1), y(2), y(3)], field)),
                    _frobenius(field), Generator("z1", z1)]
        else:
            zs = [z(j) for j in range(1, spec.k + 2)]
            gens = _triple_commutators(field) + [
                _z_power(field),
                Generator("*".join(map(str, zs)), FreePolynomial.word(field, zs)),
                _frobenius(field)]
    elif spec.kind == "k":
        if spec.k < 1:
            raise ValueError("K(k) needs k >= 1")
        gens = _k_generators(spec.k, field)
    else:
        raise ValueError(f"unsupported grading {spec}")
    return IdentityBasis(spec, field, tuple(gens))


def is_multilinear(f: FreePolynomial) -> bool:
    """Every word contains each variable of f exactly once."""
    vs = set(f.variables())
    return all(len(w) == len(vs) and set(w) == vs for w in f.terms)


# -- verification -------------------------------------------------------------------------

def _counterexample(images: dict[Variable, Batch], i: int) -> dict[str, str]:
    return {str(v): str(b.element(i)) for v, b in sorted(images.items())}


def _eval_chunks(f: FreePolynomial, images_fn, total: int, chunk: int):
    """Yield (images, nonzero flags) over ``total`` trials in chunks."""
    done = 0
    while done < total:
        t = min(chunk, total - done)
        images = images_fn(done, t)
        yield images, ~evaluate_batch(f, images).is_zero()
        done += t


def _verify_random(gen: Generator, spec: GradingSpec, field: FieldSpec, n: int, samples: int,
                   seed: int, chunk: int = 2500) -> dict:
    vs = gen.poly.variables()
    violations, first = 0, None

    def images_fn(start: int, t: int):
        rng = np.random.default_rng(derive_seed(seed, "verify", spec.label, gen.label, start))
        return uniform_images(vs, spec, field, n, t, rng, terms=2, max_len=3)

    for images, bad in _eval_chunks(gen.poly, images_fn, samples, chunk):
        if bad.any() and first is None:
            first = _counterexample(images, int(np.flatnonzero(bad)[0]))
        violations += int(bad.sum())
    return {"generator_label": gen.label, "strategy": "random", "N": n, "trials": samples,
            "violations": violations, "first_counterexample": first}


def _graded_blades(spec: GradingSpec, d: int, n: int) -> np.ndarray:
    return np.array([mk for mk in range(1 << n) if grade(mk, spec) == d], np.uint64)


def _disjoint_tuples(vs: Sequence[Variable], spec: GradingSpec, n: int) -> np.ndarray:
    """All tuples of graded blades (one per variable) with pairwise disjoint supports."""
    used = np.zeros(1, np.uint64)
    cols = np.zeros((1, 0), np.uint64)
    for v in vs:
        cand = _graded_blades(spec, v.degree, n)
        ok = (used[:, None] & cand[None, :]) == 0
        ri, ci = np.nonzero(ok)
        used = used[ri] | cand[ci]
        cols = np.concatenate([cols[ri], cand[ci][:, None]], axis=1)
    return cols


def _verify_exhaustive(gen: Generator, spec: GradingSpec, field: FieldSpec, n: int,
                       bound: int, chunk: int = 50000) -> dict:
    vs = gen.poly.variables()
    q = field.q
    if is_multilinear(gen.poly):
        # f is linear in each argument, so its value on images with <= bound blades is a
        # combination of its values on single blades; tuples with overlapping blades vanish.
        tuples = _disjoint_tuples(vs, spec, n)
        total = tuples.shape[0]
        skipped = math.prod(len(_graded_blades(spec, v.degree, n)) for v in vs) - total
        cols = {v: tuples[:, i] for i, v in enumerate(vs)}

        def images_fn(start: int, t: int):
            return {v: Batch.from_arrays(field, n, cols[v][start:start + t, None],
                                         np.ones((t, 1), np.int64)) for v in vs}
        mode = "multilinear"
    else:
        if len(vs) != 1:
            raise ValueError("exhaustive check of a non-multilinear generator in several variables")
        v = vs[0]
        blades = _graded_blades(spec, v.degree, n)
        masks, coeffs = [], []
        for size in range(1, bound + 1):
            for combo in itertools.combinations(blades.tolist(), size):
                for cs in itertools.product(range(1, q), repeat=size):
                    masks.append(list(combo) + [0] * (bound - size))
                    coeffs.append(list(cs) + [0] * (bound - size))
        skipped = 0
        m_arr = np.array(masks, np.uint64)
        c_arr = np.array(coeffs, np.int64)
        total = m_arr.shape[0]

        def images_fn(start: int, t: int):
            return {v: Batch.from_arrays(field, n, m_arr[start:start + t],
                                         c_arr[start:start + t])}
        mode = "all images"
    violations, first = 0, None
    for images, bad in _eval_chunks(gen.poly, images_fn, total, chunk):
        if bad.any() and first is None:
            first = _counterexample(images, int(np.flatnonzero(bad)[0]))
        violations += int(bad.sum())
    return {"generator_label": gen.label, "strategy": f"exhaustive ({mode})", "N": n,
            "trials": total, "violations": violations, "first_counterexample": first,
            "vanishing_by_overlap": skipped,
            "empty_degree": any(len(_graded_blades(spec, v.degree, n)) == 0 for v in vs)}


def verify(basis: IdentityBasis, n: int = 40, strategy: str = "random", samples: int = 10000,
           seed: int = 0, bound: int = 2) -> list[dict]:
    """Per-generator count of substitutions into E_n where the generator is nonzero."""
    out = []
    for gen in basis.generators:
        if strategy == "random":
            out.append(_verify_random(gen, basis.grading, basis.field, n, samples, seed))
        elif strategy == "exhaustive":
            if n > 8:
                raise ValueError("exhaustive verification is meant for N <= 8")
            out.append(_verify_exhaustive(gen, basis.grading, basis.field, n, bound))
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
    return out


# -- consequences and mutation controls ----------------------------------------------------

ALL_GRADINGS = (Canonical(), Infinity(), KStar(0), KStar(1), KStar(2), K(1), K(2), K(3))


def _check_zero(label: str, f: FreePolynomial, spec: GradingSpec, n: int, samples: int,
                seed: int) -> dict:
    rep = _verify_random(Generator(label, f), spec, f.field, n, samples, seed)
    rep["grading"] = spec.label
    return rep


def consequence_spot_checks(field: FieldSpec | None = None, n: int = 24, samples: int = 500,
                            seed: int = 0) -> list[dict]:
    """Consequences of the generating sets, checked for vanishing.

    Each entry carries ``expected_zero``; the sign-flipped product swap
    ``[x1,x2][x3,x4] - [x1,x3][x2,x4]`` is included as a control that must NOT vanish.
    """
    field = field or make_field(3)
    p = field.p
    out = []
    for sorts in itertools.product("yz", repeat=2):
        a, b = _vars("".join(sorts))
        f = long_commutator([FreePolynomial.var(field, a) ** p, FreePolynomial.var(field, b)],
                            field)
        for spec in ALL_GRADINGS:
            rep = _check_zero(f"[{a}^{p},{b}]", f, spec, n, samples, seed)
            rep["expected_zero"] = True
            out.append(rep)
    for sorts in ("yyyy", "zzzz", "yzyz", "zyzy"):
        vs = _vars(sorts)
        swap_plus = (_comm_product([(vs[0], vs[1]), (vs[2], vs[3])], field)
                     + _comm_product([(vs[0], vs[2]), (vs[1], vs[3])], field))
        swap_minus = (_comm_product([(vs[0], vs[1]), (vs[2], vs[3])], field)
                      - _comm_product([(vs[0], vs[2]), (vs[1], vs[3])], field))
        names = ",".join(map(str, vs))
        for spec in ALL_GRADINGS:
            rep = _check_zero(f"[x1,x2][x3,x4] + [x1,x3][x2,x4] ({names})", swap_plus, spec, n,
                              samples, seed)
            rep["expected_zero"] = True
            out.append(rep)
        rep = _check_zero(f"[x1,x2][x3,x4] - [x1,x3][x2,x4] ({names})", swap_minus, Infinity(),
                          n, samples, seed)
        rep["expected_zero"] = False
        out.append(rep)
    z1, z2 = FreePolynomial.var(field, z(1)), FreePolynomial.var(field, z(2))
    rep = _check_zero("2*z1*z2 - [z1,z2]", z1 * z2 * 2 - long_commutator([z1, z2], field),
                      Canonical(), n, samples, seed)
    rep["expected_zero"] = True
    out.append(rep)
    for k in range(1, p):
        rep = _check_zero(f"z1^{p}", z1 ** p, KStar(k), n, samples, seed)
        rep["expected_zero"] = True
        out.append(rep)
    return out


def mutations(f: FreePolynomial) -> list[tuple[str, FreePolynomial]]:
    """f with the sign of one word's coefficient flipped, for every word."""
    out = []
    field = f.field
    for w, c in f.sorted_terms():
        terms = dict(f.terms)
        terms[w] = field.neg(c)
        out.append((format_poly(FreePolynomial(field, {w: 1})), FreePolynomial(field, terms)))
    return out


def mutation_check(basis: IdentityBasis, n: int = 24, samples: int = 1000, seed: int = 0,
                   max_words: int | None = None) -> list[dict]:
    """Every single-sign mutation of every generator; reports whether a violation was found.

    A mutation of a one-word generator is the negated generator, still an identity; those
    are marked ``whitelisted``.
    """
    out = []
    for gen in basis.generators:
        muts = mutations(gen.poly)
        if max_words is not None:
            muts = muts[:max_words]
        for word, mf in muts:
            entry = {"generator_label": gen.label, "flipped_word": word}
            if len(gen.poly.terms) == 1:
                entry.update(whitelisted=True, detected=False, violations=0)
            else:
                rep = _verify_random(Generator(gen.label, mf), basis.grading, basis.field, n,
                                     samples, seed)
                entry.update(whitelisted=False, detected=rep["violations"] > 0,
                             violations=rep["violations"])
            out.append(entry)
    return out


def evaluate_generator(gen: Generator, images: dict[Variable, GrassmannElement],
                       spec: GradingSpec) -> GrassmannElement:
    from .freealg import evaluate

    return evaluate(gen.poly, images, spec)
