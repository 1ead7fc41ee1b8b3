"""Brute-force reference implementations, written straight from the definitions.

Everything here works on coordinate tuples with plain Python arithmetic and
shares no code with the package except the element ordering (lexicographic,
matching ``itertools.product``).
"""
from __future__ import annotations

import itertools
from math import gcd

import numpy as np


class Sys:
    """A matrix endomorphism on Z_n1 x ... x Z_nk, evaluated by hand."""

    def __init__(self, moduli, matrix):
        self.moduli = tuple(moduli)
        self.matrix = [list(r) for r in matrix]
        self.elems = list(itertools.product(*[range(n) for n in self.moduli]))
        self.index = {x: i for i, x in enumerate(self.elems)}
        self.order = len(self.elems)
        self.fmap = [self.index[self.apply(x)] for x in self.elems]

    def apply(self, x):
        k = len(self.moduli)
        return tuple(sum(self.matrix[i][j] * x[j] for j in range(k)) % self.moduli[i] for i in range(k))

    def add(self, x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, self.moduli))

    def sub(self, x, y):
        return tuple((a - b) % n for a, b, n in zip(x, y, self.moduli))

    @property
    def e(self):
        return tuple(0 for _ in self.moduli)

    def ball(self, radii):
        if isinstance(radii, int):
            radii = [radii] * len(self.moduli)
        return {x for x in self.elems if all(min(c, n - c) <= r for c, n, r in zip(x, self.moduli, radii))}

    def iterate(self, i, n):
        for _ in range(n):
            i = self.fmap[i]
        return i


def random_matrix(rng, moduli):
    k = len(moduli)
    A = []
    for i in range(k):
        row = []
        for j in range(k):
            g = gcd(moduli[i], moduli[j])
            row.append(int(rng.integers(g)) * (moduli[i] // g))
        A.append(row)
    return A


def random_moduli(rng, max_order, max_rank=3):
    while True:
        k = int(rng.integers(1, max_rank + 1))
        mods = [int(rng.integers(2, 31)) for _ in range(k)]
        if np.prod(mods) <= max_order:
            return mods


def random_symmetric_set(rng, s: Sys, size):
    pick = {s.e}
    while len(pick) < min(size, s.order):
        x = s.elems[int(rng.integers(s.order))]
        pick.add(x)
        pick.add(s.sub(s.e, x))
    return pick


# -- recurrent sets ------------------------------------------------------------------


def fix(s: Sys):
    return [i for i in range(s.order) if s.fmap[i] == i]


def per(s: Sys, m):
    return [i for i in range(s.order) if s.iterate(i, m) == i]


def per_all(s: Sys):
    # x is periodic iff it returns within |G| steps
    out = []
    for i in range(s.order):
        j = s.fmap[i]
        for _ in range(s.order):
            if j == i:
                out.append(i)
                break
            j = s.fmap[j]
    return out


def eper(s: Sys, m):
    target = set(per(s, m))
    out = []
    for i in range(s.order):
        j = i
        for _ in range(s.order + 1):
            if j in target:
                out.append(i)
                break
            j = s.fmap[j]
    return out


def _closure(adj: np.ndarray) -> np.ndarray:
    """Reachability by paths of length >= 1."""
    r = adj.astype(np.float32)
    while True:
        nxt = ((r + r @ r) > 0).astype(np.float32)
        if np.array_equal(nxt, r):
            return r > 0
        r = nxt


def chain_adjacency(s: Sys, E: set) -> np.ndarray:
    adj = np.zeros((s.order, s.order), dtype=bool)
    for i, x in enumerate(s.elems):
        fx = s.apply(x)
        for j, y in enumerate(s.elems):
            if s.sub(fx, y) in E:
                adj[i, j] = True
    return adj


def cr(s: Sys, E: set, reach=None):
    R = _closure(chain_adjacency(s, E)) if reach is None else reach
    return [i for i in range(s.order) if R[i, i]]


def cc(s: Sys, E: set, reach=None):
    R = _closure(chain_adjacency(s, E)) if reach is None else reach
    e = s.index[s.e]
    return [i for i in range(s.order) if R[i, e] and R[e, i]]


def omega(s: Sys, E: set):
    F = np.zeros((s.order, s.order), dtype=bool)
    F[np.arange(s.order), s.fmap] = True
    R = _closure(F)  # R[u, v]: f^n(u) = v for some n >= 1
    out = []
    for i, x in enumerate(s.elems):
        nb = [s.index[s.add(d, x)] for d in E]
        if R[np.ix_(nb, nb)].any():
            out.append(i)
    return out


# -- shadowing -------------------------------------------------------------------------


def shadowing_fails_within(s: Sys, D: set, E: set, length: int) -> bool:
    """True iff some D-pseudo-orbit of at most ``length`` points has no E-shadow.

    Depth-first over all pseudo-orbits; the candidate shadow points are
    tracked as a bitmask over start points.
    """
    n = s.order
    # images[k][x] = f^k(x) as index, grown on demand
    images = [list(range(n))]
    close = [[s.sub(s.elems[a], s.elems[b]) in E for b in range(n)] for a in range(n)]
    dsucc = [[s.index[s.sub(s.elems[s.fmap[a]], d)] for d in D] for a in range(n)]

    def ok_mask(k, xk):
        while len(images) <= k:
            images.append([s.fmap[v] for v in images[-1]])
        img = images[k]
        m = 0
        for x in range(n):
            if close[img[x]][xk]:
                m |= 1 << x
        return m

    masks = {}

    def mask(k, xk):
        key = (k, xk)
        if key not in masks:
            masks[key] = ok_mask(k, xk)
        return masks[key]

    stack = [(x, 0, mask(0, x)) for x in range(n)]
    seen = set()  # identical (x, k, alive) states have identical futures
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        x, k, alive = state
        if alive == 0:
            return True
        if k + 1 >= length:
            continue
        for y in set(dsucc[x]):
            stack.append((y, k + 1, alive & mask(k + 1, y)))
    return False


def brute_shadow_exists(s: Sys, seq, E: set) -> bool:
    return any(
        all(s.sub(s.elems[s.iterate(x, k)], s.elems[xk]) in E for k, xk in enumerate(seq))
        for x in range(s.order)
    )


# -- entropy ------------------------------------------------------------------------------


def bowen(s: Sys, n, E: set):
    return {x for x in s.elems if all(s.elems[s.iterate(s.index[x], i)] in E for i in range(n))}


def _subset_masks(size):
    return np.arange(1 << size, dtype=np.int64)


def brute_sep_span(s: Sys, n, E: set, K):
    """Exact (max separated, min spanning) over all subsets of K (|K| <= 20)."""
    B = bowen(s, n, E)
    K = list(K)
    size = len(K)
    near = [[s.sub(s.elems[K[i]], s.elems[K[j]]) in B for j in range(size)] for i in range(size)]
    adj = [sum(1 << j for j in range(size) if j != i and near[i][j]) for i in range(size)]
    cover = [sum(1 << j for j in range(size) if near[i][j]) for i in range(size)]
    S = _subset_masks(size)
    pop = np.zeros_like(S)
    bad = np.zeros(S.shape, dtype=bool)
    cov = np.zeros_like(S)
    for i in range(size):
        has = (S >> i) & 1
        pop += has
        bad |= (has == 1) & ((S & adj[i]) != 0)
        cov |= np.where(has == 1, cover[i], 0)
    sep = int(pop[~bad].max())
    span = int(pop[cov == (1 << size) - 1].min())
    return sep, span
