"""Finite abelian groups Z_{n1} x ... x Z_{nk}, subgroups, cosets and quotients.

Elements are addressed two ways.  A *GroupElement* is a tuple of reduced
residues; an *index* is its mixed-radix number with the first coordinate most
significant, so sorting indices sorts elements lexicographically.  Every
set-valued result in the package is a sorted ``int64`` array of indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceCapError, ValidationError

DEFAULT_CAP = 1_000_000

# Below this order solve_linear filters all elements directly.
BRUTE_FORCE_THRESHOLD = 4096

GroupElement = tuple


def _frozen(arr) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


class FiniteAbelianGroup:
    """The group Z_{n1} x ... x Z_{nk} with coordinatewise addition."""

    def __init__(self, moduli: Iterable[int], cap: int = DEFAULT_CAP):
        moduli = tuple(int(n) for n in moduli)
        if not moduli:
            raise ValidationError("a group needs at least one cyclic factor")
        bad = [f"modulus #{i} = {n} is < 1" for i, n in enumerate(moduli) if n < 1]
        if bad:
            raise ValidationError("invalid moduli", bad)
        self.moduli = moduli
        self.cap = int(cap)
        self.order = prod(moduli)
        self.rank = len(moduli)
        strides = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * moduli[i + 1]
        self._moduli = _frozen(moduli)
        self._strides = _frozen(strides)

    identity = 0

    def __repr__(self):
        return "FiniteAbelianGroup(" + " x ".join(f"Z_{n}" for n in self.moduli) + ")"

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and other.moduli == self.moduli

    def __hash__(self):
        return hash(("G", self.moduli))

    def check_cap(self, what="group enumeration"):
        if self.order > self.cap:
            raise ResourceCapError(what, self.order, self.cap, "raise --cap or use a smaller group")

    # -- conversions -------------------------------------------------------

    def element(self, coords: Sequence[int]) -> GroupElement:
        """Reduce ``coords`` into canonical range."""
        if len(coords) != self.rank:
            raise ValidationError(
                f"element {tuple(coords)} has {len(coords)} coordinates, group has {self.rank}"
            )
        return tuple(int(c) % n for c, n in zip(coords, self.moduli))

    def index(self, coords: Sequence[int]) -> int:
        return int(sum(c * s for c, s in zip(self.element(coords), self._strides.tolist())))

    def to_index(self, x) -> int:
        """Accept an index or a coordinate tuple."""
        if isinstance(x, (tuple, list, np.ndarray)):
            return self.index(x)
        x = int(x)
        if not 0 <= x < self.order:
            raise ValidationError(f"index {x} outside group of order {self.order}")
        return x

    def coords(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._strides) % self._moduli

    def label(self, idx) -> GroupElement:
        return tuple(int(c) for c in self.coords(int(idx)))

    def labels(self, idx) -> list:
        return [tuple(row) for row in self.coords(idx).tolist()]

    def from_coords(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64) % self._moduli
        return coords @ self._strides

    # -- arithmetic on indices (vectorized) ---------------------------------

    def add(self, a, b):
        return self.from_coords(self.coords(a) + self.coords(b))

    def sub(self, a, b):
        return self.from_coords(self.coords(a) - self.coords(b))

    def neg(self, a):
        return self.from_coords(-self.coords(a))

    @cached_property
    def all_coords(self) -> np.ndarray:
        self.check_cap()
        return _frozen(self.coords(np.arange(self.order, dtype=np.int64)))

    def translation_data(self):
        """Arrays the compiled kernels use to translate elements.

        Returns ``(rep, moduli, strides, proj)`` such that the translate of
        element ``x`` by parent offset ``o`` is ``proj[((rep[x] + o) % moduli) @ strides]``.
        """
        return self.all_coords, self._moduli, self._strides, _frozen(np.arange(self.order))

    def offset_coords(self, members) -> np.ndarray:
        return self.coords(np.asarray(members, dtype=np.int64)).reshape(-1, self.rank)


def element_op(G: FiniteAbelianGroup, a: Sequence[int], b: Sequence[int], sign: int = 1) -> GroupElement:
    """``a*b`` (sign=+1) or ``a*b^-1`` (sign=-1), reduced."""
    if sign not in (1, -1):
        raise ValidationError(f"sign must be +1 or -1, got {sign}")
    if len(a) != G.rank or len(b) != G.rank:
        raise ValidationError(
            f"coordinate length mismatch: {len(a)} and {len(b)} for a rank-{G.rank} group"
        )
    return tuple((x + sign * y) % n for x, y, n in zip(a, b, G.moduli))


def enumerate_group(G: FiniteAbelianGroup, cap: int | None = None) -> list:
    cap = G.cap if cap is None else cap
    if G.order > cap:
        raise ResourceCapError("group enumeration", G.order, cap)
    return G.labels(np.arange(G.order))


# -- linear congruences ------------------------------------------------------


def _matrix(G: FiniteAbelianGroup, M) -> list:
    M = [[int(v) for v in row] for row in M]
    if len(M) != G.rank or any(len(row) != G.rank for row in M):
        raise ValidationError(f"matrix must be {G.rank}x{G.rank} for {G!r}")
    return M


def is_hom_compatible(G: FiniteAbelianGroup, M) -> bool:
    n = G.moduli
    return all(
        M[i][j] % (n[i] // gcd(n[i], n[j])) == 0 for i in range(G.rank) for j in range(G.rank)
    )


def _solve_brute(G, M, b) -> np.ndarray:
    A = np.array([[v % G.moduli[i] for v in row] for i, row in enumerate(M)], dtype=np.int64)
    image = (G.all_coords @ A.T) % G._moduli
    return np.flatnonzero(np.all(image == np.asarray(b, dtype=np.int64), axis=1)).astype(np.int64)


def _column_echelon(C: list) -> tuple[list, list]:
    """Unimodular column reduction ``C U = [L | 0]`` with ``L`` lower triangular."""
    rows, cols = len(C), len(C[0])
    C = [row[:] for row in C]
    U = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def colop(p, q, a, b, c, d):
        # (col p, col q) <- (a*p + b*q, c*p + d*q)
        for mat in (C, U):
            for row in mat:
                x, y = row[p], row[q]
                row[p], row[q] = a * x + b * y, c * x + d * y

    for i in range(rows):
        for j in range(i + 1, cols):
            x, y = C[i][i], C[i][j]
            if y == 0:
                continue
            # extended gcd: s*x + t*y = g
            g, s, t = _xgcd(x, y)
            colop(i, j, s, t, -y // g, x // g)
    return C, U


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _solve_lattice(G, M, b) -> np.ndarray:
    k = G.rank
    C = [M[i] + [-G.moduli[i] if j == i else 0 for j in range(k)] for i in range(k)]
    L, U = _column_echelon(C)
    w = []
    for i in range(k):
        rhs = b[i] - sum(L[i][j] * w[j] for j in range(i))
        if rhs % L[i][i]:
            return np.empty(0, dtype=np.int64)
        w.append(rhs // L[i][i])
    x0 = G.element([sum(U[r][j] * w[j] for j in range(k)) for r in range(k)])
    gens = [G.element([U[r][k + c] for r in range(k)]) for c in range(k)]
    H = subgroup_closure(G, gens)
    return np.sort(G.add(H.indices, G.index(x0)))


def solve_linear(G: FiniteAbelianGroup, M, b=None, method: str = "auto") -> np.ndarray:
    """All ``x`` with ``M x == b`` coordinatewise mod the moduli.

    ``method`` is ``"brute"`` (filter every element), ``"lattice"`` (integer
    column reduction of ``[M | -diag(n)]``; needs a hom-compatible ``M``) or
    ``"auto"``.
    """
    M = _matrix(G, M)
    b = G.element(b if b is not None else (0,) * G.rank)
    if method == "auto":
        method = "lattice" if G.order > BRUTE_FORCE_THRESHOLD and is_hom_compatible(G, M) else "brute"
    if method == "brute":
        return _solve_brute(G, M, b)
    if method == "lattice":
        if not is_hom_compatible(G, M):
            raise ValidationError("lattice solving needs a hom-compatible matrix")
        return _solve_lattice(G, M, b)
    raise ValidationError(f"unknown method {method!r}")


# -- subgroups and quotients -------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteAbelianGroup
    indices: np.ndarray

    def __len__(self):
        return len(self.indices)

    def __contains__(self, x):
        x = self.parent.to_index(x)
        i = np.searchsorted(self.indices, x)
        return i < len(self.indices) and self.indices[i] == x

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.parent == self.parent
            and np.array_equal(other.indices, self.indices)
        )

    @property
    def elements(self) -> list:
        return self.parent.labels(self.indices)


def _adjoin(G, mask, members, g):
    """Add the cosets ``members + k*g`` to ``mask``; return the enlarged member array."""
    t, parts = g, [members]
    while not mask[t]:
        coset = G.add(members, t)
        mask[coset] = True
        parts.append(coset)
        t = int(G.add(t, g))
    return np.concatenate(parts)


def subgroup_closure(G: FiniteAbelianGroup, gens) -> Subgroup:
    """Smallest subgroup containing ``gens`` (indices or coordinate tuples)."""
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    members = np.zeros(1, dtype=np.int64)
    for g in gens:
        members = _adjoin(G, mask, members, G.to_index(g))
    return Subgroup(G, _frozen(np.flatnonzero(mask)))


def as_subgroup(G: FiniteAbelianGroup, elements) -> Subgroup:
    """Validate that ``elements`` form a subgroup and wrap them."""
    if isinstance(elements, np.ndarray):
        idx = np.unique(elements.astype(np.int64))
    else:
        idx = np.unique(np.asarray([G.to_index(x) for x in elements], dtype=np.int64))
    if idx.size == 0 or idx[0] != 0:
        raise ValidationError("set is not a subgroup", ["identity missing"])
    inside = np.zeros(G.order, dtype=bool)
    inside[idx] = True
    # Grow the closure one generator at a time; it must never leave the set.
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    members = np.zeros(1, dtype=np.int64)
    for h in idx.tolist():
        if mask[h]:
            continue
        members = _adjoin(G, mask, members, h)
        outside = np.flatnonzero(mask & ~inside)
        if outside.size:
            raise ValidationError(
                "set is not a subgroup",
                [f"not closed: generates {G.label(outside[0])} outside the set"],
            )
    return Subgroup(G, _frozen(idx))


class QuotientGroup:
    """Cosets ``x + H`` with the least member as representative."""

    identity = 0

    def __init__(self, parent: FiniteAbelianGroup, subgroup: Subgroup, reps, proj):
        self.parent = parent
        self.subgroup = subgroup
        self.reps = _frozen(reps)
        self.proj = _frozen(proj)
        self.order = len(self.reps)
        self.cap = parent.cap

    def __repr__(self):
        return f"QuotientGroup({self.parent!r} / <{len(self.subgroup)} elements>, {self.order} cosets)"

    def check_cap(self, what="quotient enumeration"):
        if self.order > self.cap:
            raise ResourceCapError(what, self.order, self.cap)

    def coset(self, i) -> np.ndarray:
        return np.sort(self.parent.add(self.subgroup.indices, self.reps[int(i)]))

    def to_index(self, x) -> int:
        if isinstance(x, (tuple, list, np.ndarray)):
            return int(self.proj[self.parent.index(x)])
        x = int(x)
        if not 0 <= x < self.order:
            raise ValidationError(f"coset index {x} outside quotient of order {self.order}")
        return x

    def label(self, i):
        return self.parent.label(self.reps[int(i)])

    def labels(self, idx) -> list:
        return self.parent.labels(self.reps[np.asarray(idx, dtype=np.int64)])

    def add(self, a, b):
        return self.proj[self.parent.add(self.reps[a], self.reps[b])]

    def sub(self, a, b):
        return self.proj[self.parent.sub(self.reps[a], self.reps[b])]

    def neg(self, a):
        return self.proj[self.parent.neg(self.reps[a])]

    def translation_data(self):
        rep, moduli, strides, _ = self.parent.translation_data()
        return rep[self.reps], moduli, strides, self.proj

    def offset_coords(self, members) -> np.ndarray:
        return self.parent.offset_coords(self.reps[np.asarray(members, dtype=np.int64)])


def quotient_group(G: FiniteAbelianGroup, H: Subgroup) -> QuotientGroup:
    if H.parent != G:
        raise ValidationError("subgroup belongs to a different group")
    H = as_subgroup(G, H.indices)
    G.check_cap()
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if proj[g] >= 0:
            continue
        proj[G.add(H.indices, g)] = len(reps)
        reps.append(g)
    return QuotientGroup(G, H, np.asarray(reps, dtype=np.int64), proj)
