"""Symmetric identity neighbourhoods (entourages) and bases of them.

An entourage ``E`` stands for the relation ``x ~ y  iff  x*y^-1 in E``.  Two
forms exist: balls by per-coordinate circular radius, and explicit member
sets (needed for images under maps and for quotients).
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ValidationError
from .group import FiniteAbelianGroup, QuotientGroup, _frozen


class Entourage:
    def __init__(self, space, members, radii=None):
        self.space = space
        self.members = _frozen(np.unique(np.asarray(members, dtype=np.int64)))
        self.radii = None if radii is None else tuple(int(r) for r in radii)
        self._mask = None

    @classmethod
    def ball(cls, G: FiniteAbelianGroup, radii) -> "Entourage":
        if isinstance(radii, int):
            radii = (radii,) * G.rank
        radii = tuple(int(r) for r in radii)
        if len(radii) != G.rank:
            raise ValidationError(f"ball needs {G.rank} radii, got {len(radii)}")
        if any(r < 0 for r in radii):
            raise ValidationError(f"radii must be >= 0, got {radii}")
        radii = tuple(min(r, n // 2) for r, n in zip(radii, G.moduli))
        axes = [np.arange(-r, r + 1) for r in radii]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, G.rank)
        return cls(G, G.from_coords(grid), radii)

    @classmethod
    def explicit(cls, space, members) -> "Entourage":
        idx = [space.to_index(x) for x in members] if not isinstance(members, np.ndarray) else members
        E = cls(space, idx)
        problems = []
        if not E.contains_index(space.identity):
            problems.append("identity missing")
        inv = np.unique(space.neg(E.members))
        if not np.array_equal(inv, E.members):
            missing = np.setdiff1d(inv, E.members)
            problems.append(f"not symmetric: inverse {space.label(missing[0])} missing")
        if problems:
            raise ValidationError("invalid entourage", problems)
        return E

    @classmethod
    def identity(cls, space) -> "Entourage":
        if isinstance(space, FiniteAbelianGroup):
            return cls.ball(space, 0)
        return cls(space, [space.identity])

    @classmethod
    def whole(cls, space) -> "Entourage":
        return cls(space, np.arange(space.order))

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        if self.radii is not None:
            return f"ball{self.radii}"
        return f"Entourage(<{len(self)} members>)"

    def __eq__(self, other):
        return (
            isinstance(other, Entourage)
            and other.space == self.space
            and np.array_equal(other.members, self.members)
        )

    __hash__ = None

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.space.order, dtype=bool)
            m[self.members] = True
            self._mask = m
        return self._mask

    def contains_index(self, x) -> bool:
        i = np.searchsorted(self.members, x)
        return bool(i < len(self.members) and self.members[i] == x)

    def __contains__(self, x):
        return self.contains_index(self.space.to_index(x))

    def issubset(self, other: "Entourage") -> bool:
        return bool(np.all(other.mask[self.members]))

    def offsets(self) -> np.ndarray:
        """Member coordinates in the parent group, for the translation kernels."""
        return np.ascontiguousarray(self.space.offset_coords(self.members))

    def elements(self) -> list:
        return self.space.labels(self.members)


def _same_space(E, W):
    if E.space != W.space:
        raise ValidationError("entourages live on different groups")


def entourage_product(E: Entourage, W: Entourage) -> Entourage:
    """``E*W = {a*b}``; radii add (clamped) for balls."""
    _same_space(E, W)
    if E.radii is not None and W.radii is not None:
        return Entourage.ball(E.space, [a + b for a, b in zip(E.radii, W.radii)])
    sums = E.space.add(E.members[:, None], W.members[None, :])
    return Entourage(E.space, sums.ravel())


def entourage_image_bound(f, E: Entourage) -> Entourage:
    """An entourage containing ``f(E)``: the exact image for explicit sets,
    the smallest enclosing ball for balls."""
    if f.space != E.space:
        raise ValidationError("map and entourage live on different groups")
    image = f.image(E.members)
    if E.radii is None or not isinstance(E.space, FiniteAbelianGroup):
        return Entourage(E.space, image)
    G = E.space
    c = G.coords(image)
    dist = np.minimum(c, G._moduli - c)
    return Entourage.ball(G, dist.max(axis=0).tolist())


def entourage_translate(E: Entourage, x) -> np.ndarray:
    x = E.space.to_index(x)
    return np.sort(E.space.add(E.members, x))


def largest_ball_inside(E: Entourage) -> Entourage:
    G = E.space
    if not isinstance(G, FiniteAbelianGroup):
        raise ValidationError("balls exist only on coordinate groups")
    r = 0
    while True:
        nxt = Entourage.ball(G, r + 1)
        if nxt == Entourage.ball(G, r) or not nxt.issubset(E):
            return Entourage.ball(G, r)
        r += 1


def refine_for_closure(E: Entourage) -> Entourage:
    """A ball ``W`` with ``W*W`` inside ``E`` (per-coordinate halving)."""
    if E.radii is None:
        E = largest_ball_inside(E)
    return Entourage.ball(E.space, [r // 2 for r in E.radii])


def map_entourage(phi, E: Entourage) -> Entourage:
    """``phi(E)`` as an explicit entourage."""
    return Entourage(E.space, phi.image(E.members))


def push_forward(E: Entourage, Q: QuotientGroup) -> Entourage:
    """``pi(E)`` on the quotient."""
    if E.space != Q.parent:
        raise ValidationError("entourage does not live on the quotient's parent group")
    return Entourage(Q, np.unique(Q.proj[E.members]))


def preimage_entourage(f, E: Entourage) -> Entourage:
    """``f^-1(E)``; symmetric and contains the identity whenever ``E`` does."""
    return Entourage(E.space, np.flatnonzero(E.mask[f.table]))


def intersect_entourages(E: Entourage, W: Entourage) -> Entourage:
    _same_space(E, W)
    return Entourage(E.space, np.intersect1d(E.members, W.members))


class EntourageBase:
    """Entourages ordered coarsest to finest, each containing the next."""

    def __init__(self, entries: Sequence[Entourage]):
        entries = tuple(entries)
        if not entries:
            raise ValidationError("an entourage base needs at least one entourage")
        problems = [
            f"level {i + 1} is not contained in level {i}"
            for i in range(len(entries) - 1)
            if not entries[i + 1].issubset(entries[i])
        ]
        if any(e.space != entries[0].space for e in entries):
            problems.append("levels live on different groups")
        if problems:
            raise ValidationError("invalid entourage base", problems)
        self.entries = entries

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def finest(self) -> Entourage:
        return self.entries[-1]

    def __repr__(self):
        return f"EntourageBase({list(self.entries)!r})"


def halving_base(G: FiniteAbelianGroup, top_radii, depth: int | None = None) -> EntourageBase:
    """Balls of radii r, r//2, r//4, ..., 0 (or ``depth`` levels)."""
    if isinstance(top_radii, int):
        top_radii = (top_radii,) * G.rank
    radii = [min(int(r), n // 2) for r, n in zip(top_radii, G.moduli)]
    levels = [Entourage.ball(G, radii)]
    while any(radii) and (depth is None or len(levels) < depth):
        radii = [r // 2 for r in radii]
        levels.append(Entourage.ball(G, radii))
    return EntourageBase(levels)
