"""Random graded substitutions, produced as :class:`Batch` images of variables."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .batch import MAX_GENERATORS, Batch
from .freealg import Variable
from .gf import FieldSpec
from .grassmann import GradingSpec

__all__ = ["uniform_images", "disjoint_images", "derive_seed"]


def derive_seed(master: int, *labels) -> int:
    """Deterministic child seed from a master seed and a tuple of labels."""
    text = "/".join(str(x) for x in labels)
    ss = np.random.SeedSequence([master & 0xFFFFFFFF, *[ord(c) for c in text]])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _options(spec: GradingSpec, d: int, n: int, max_len: int):
    odd = np.array([i for i in range(1, n + 1) if spec.gen_degree(i)], dtype=np.int64)
    even = np.array([i for i in range(1, n + 1) if not spec.gen_degree(i)], dtype=np.int64)
    opts = [(length, j) for length in range(1, min(max_len, n) + 1)
            for j in range(d & 1, min(length, len(odd)) + 1, 2) if length - j <= len(even)]
    return odd, even, opts


def _pick(pool: np.ndarray, counts: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """For each row choose ``counts[row]`` distinct entries of ``pool``; OR their bits."""
    size = counts.shape[0]
    out = np.zeros(size, np.uint64)
    if pool.size == 0 or not counts.any():
        return out
    keys = rng.random((size, pool.size))
    ranks = np.argsort(np.argsort(keys, axis=1), axis=1)
    chosen = ranks < counts[:, None]
    bits = np.left_shift(np.uint64(1), (pool - 1).astype(np.uint64))
    return np.bitwise_or.reduce(np.where(chosen, bits[None, :], np.uint64(0)), axis=1)


def _random_masks(spec: GradingSpec, d: int, n: int, size: int, rng: np.random.Generator,
                  max_len: int) -> np.ndarray | None:
    odd, even, opts = _options(spec, d, n, max_len)
    if not opts:
        return None
    choice = rng.integers(len(opts), size=size)
    arr = np.array(opts, dtype=np.int64)[choice]
    return _pick(odd, arr[:, 1], rng) | _pick(even, arr[:, 0] - arr[:, 1], rng)


def uniform_images(variables: Sequence[Variable], spec: GradingSpec, field: FieldSpec, n: int,
                   trials: int, rng: np.random.Generator, terms: int | Mapping[Variable, int] = 2,
                   max_len: int = 3, scalar: bool = True) -> dict[Variable, Batch]:
    """Each variable maps to (a random scalar, for y) + ``terms`` random graded blades."""
    out = {}
    q = field.q
    for v in variables:
        t = terms[v] if isinstance(terms, Mapping) else terms
        masks, coeffs = [], []
        if v.degree == 0 and scalar:
            masks.append(np.zeros(trials, np.uint64))
            coeffs.append(rng.integers(q, size=trials))
        for _ in range(t):
            mk = _random_masks(spec, v.degree, n, trials, rng, max_len)
            if mk is None:
                continue
            masks.append(mk)
            coeffs.append(rng.integers(1, q, size=trials))
        if masks:
            out[v] = Batch.from_arrays(field, n, np.stack(masks, axis=1), np.stack(coeffs, axis=1))
        else:
            out[v] = Batch.zeros(field, n, trials)
    return out


def disjoint_images(variables: Sequence[Variable], terms: Mapping[Variable, int],
                    spec: GradingSpec, field: FieldSpec, n: int, trials: int,
                    rng: np.random.Generator, max_len: int = 3) -> dict[Variable, Batch]:
    """Images built from fresh blades within each trial.

    y's get a random scalar plus ``terms[y]`` even blades, z's get ``terms[z]`` odd
    blades; blade lengths are random in [1, max_len].  Generators are handed out
    without repetition while they last; a generator class that runs out (for
    instance the k even generators of K(k)) is then sampled with replacement.
    Variables are served in a random order per trial.
    """
    if n > MAX_GENERATORS:
        raise ValueError(f"N={n} exceeds the {MAX_GENERATORS}-generator kernel")
    q = field.q
    odd_all = [i for i in range(1, n + 1) if spec.gen_degree(i)]
    even_all = [i for i in range(1, n + 1) if not spec.gen_degree(i)]
    width = {v: terms.get(v, 0) + (1 if v.degree == 0 else 0) for v in variables}
    masks = {v: np.zeros((trials, max(1, width[v])), np.uint64) for v in variables}
    coeffs = {v: np.zeros((trials, max(1, width[v])), np.int64) for v in variables}

    def draw(pool: list[int], full: list[int], count: int) -> list[int]:
        if len(pool) >= count:
            return [pool.pop() for _ in range(count)]
        pool.clear()
        return [full[i] for i in rng.choice(len(full), size=count, replace=False)]

    for t in range(trials):
        odd = [int(g) for g in rng.permutation(odd_all)] if odd_all else []
        even = [int(g) for g in rng.permutation(even_all)] if even_all else []
        for vi in rng.permutation(len(variables)):
            v = variables[int(vi)]
            col = 0
            if v.degree == 0:
                coeffs[v][t, 0] = int(rng.integers(q))
                col = 1
            for _ in range(terms.get(v, 0)):
                opts = [(length, j) for length in range(1, max_len + 1)
                        for j in range(v.degree, min(length, len(odd_all)) + 1, 2)
                        if length - j <= len(even_all)]
                if not opts:
                    break
                length, j = opts[int(rng.integers(len(opts)))]
                gens = draw(odd, odd_all, j) + draw(even, even_all, length - j)
                mask = 0
                for g in gens:
                    mask |= 1 << (g - 1)
                masks[v][t, col] = mask
                coeffs[v][t, col] = int(rng.integers(1, q))
                col += 1
    return {v: Batch.from_arrays(field, n, masks[v], coeffs[v]) for v in variables}
