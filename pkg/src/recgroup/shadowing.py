"""Pseudo-orbits and the shadowing property.

A D-pseudo-orbit satisfies ``f(x_n)*x_{n+1}^-1 in D``; it is E-shadowed by
``x`` when ``f^n(x)*x_n^-1 in E`` for every n.  The infinite-horizon
property is decided on a finite automaton whose states are pairs
``(x, V)``: the current pseudo-orbit point and the set of n-th images of
start points that still shadow it.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .endo import Endomorphism, induced_quotient_map
from .errors import ResourceCapError, TheoremViolation, ValidationError
from .group import Subgroup, quotient_group
from .uniformity import Entourage, push_forward

DEFAULT_STATE_CAP = 2_000_000


@dataclass
class PseudoOrbit:
    points: list  # element indices
    slack: Entourage

    def __len__(self):
        return len(self.points)

    def labels(self) -> list:
        return self.slack.space.labels(self.points)


def _indices(space, seq) -> list:
    return [space.to_index(x) for x in seq]


def first_chain_break(seq, f: Endomorphism, D: Entourage):
    """Index n of the first step with ``f(x_n)*x_{n+1}^-1`` outside D, or None."""
    space = f.space
    xs = _indices(space, seq)
    for n in range(len(xs) - 1):
        if not D.mask[space.sub(f.table[xs[n]], xs[n + 1])]:
            return n
    return None


def check_pseudo_orbit(seq, f: Endomorphism, D: Entourage) -> bool:
    if len(seq) == 0:
        raise ValidationError("pseudo-orbit must be nonempty")
    return first_chain_break(seq, f, D) is None


def make_pseudo_orbit(seq, f: Endomorphism, D: Entourage) -> PseudoOrbit:
    if len(seq) == 0:
        raise ValidationError("pseudo-orbit must be nonempty")
    n = first_chain_break(seq, f, D)
    if n is not None:
        raise ValidationError(f"not a D-pseudo-orbit: step {n} -> {n + 1} leaves D")
    return PseudoOrbit(_indices(f.space, seq), D)


@dataclass
class ShadowResult:
    final: np.ndarray  # V_L, the L-th images of all shadowing points
    shadowed: bool
    witness: int | None = None
    empty_step: int | None = None  # first n with V_n empty


def shadow_set(seq, f: Endomorphism, E: Entourage) -> ShadowResult:
    """Forward propagation ``V_0 = E*x_0``, ``V_{n+1} = f(V_n) & E*x_{n+1}``."""
    space = f.space
    xs = _indices(space, seq.points if isinstance(seq, PseudoOrbit) else seq)
    if not xs:
        raise ValidationError("pseudo-orbit must be nonempty")
    table = f.table
    V = np.unique(space.add(E.members, xs[0]))
    parents = []  # parents[n][k]: a point of V_n mapping onto the k-th point of V_{n+1}
    layers = [V]
    for n in range(1, len(xs)):
        inside = E.mask[space.sub(table[V], xs[n])]
        images = table[V][inside]
        nxt, first = np.unique(images, return_index=True)
        parents.append(V[inside][first])
        V = nxt
        layers.append(V)
        if V.size == 0:
            return ShadowResult(V, False, None, n)
    x = int(V[0])
    for n in range(len(parents) - 1, -1, -1):
        x = int(parents[n][np.searchsorted(layers[n + 1], x)])
    return ShadowResult(V, True, x, None)


@dataclass
class ShadowingVerdict:
    holds: bool
    counterexample: PseudoOrbit | None = None
    empty_step: int | None = None
    states: int = 0
    horizon: int = 0  # longest BFS depth reached, plus one
    stats: dict = field(default_factory=dict)


def decide_shadowing(f: Endomorphism, D: Entourage, E: Entourage, state_cap: int = DEFAULT_STATE_CAP,
                     order: str = "small-first") -> ShadowingVerdict:
    """Exact decision over all infinite D-pseudo-orbits.

    Search over states ``(x, V)`` from every ``(x_0, E*x_0)``; the property
    fails iff some transition empties V.  A new state ``(x, V)`` is dropped
    when an already-kept ``(x, W)`` has ``W <= V``, since whatever empties V
    empties W too.  The verdict does not depend on the exploration order:

    * ``"small-first"`` (default) expands states with the fewest shadow
      candidates first, which makes the pruning bite early;
    * ``"bfs"`` expands by depth, so the counterexample has minimal length.

    Ties are broken by depth, then discovery order, so output is deterministic.
    """
    if order not in ("small-first", "bfs"):
        raise ValidationError(f"unknown search order {order!r}")
    space = f.space
    if not (space == D.space == E.space):
        raise ValidationError("map and entourages live on different groups")
    if not D.contains_index(space.identity) or not E.contains_index(space.identity):
        raise ValidationError("entourages must contain the identity")
    n = space.order
    if len(E) == n:  # every point shadows everything
        return ShadowingVerdict(True, None, None, 0, 0)
    table = f.table.tolist()
    ar = np.arange(n)
    e_nbhd = [frozenset(r) for r in space.add(E.members[None, :], ar[:, None]).tolist()]
    d_succ = np.sort(space.add(D.members[None, :], f.table[:, None]), axis=1).tolist()
    bfs = order == "bfs"

    minimal = [[] for _ in range(n)]  # per x: antichain of kept V sets
    parent = []
    key_x = []
    heap = []

    def push(x, V, d, pid):
        sid = len(parent)
        parent.append(pid)
        key_x.append(x)
        heapq.heappush(heap, ((d, sid) if bfs else (len(V), d, sid), x, V, d))

    for x in range(n):
        minimal[x].append(e_nbhd[x])
        push(x, e_nbhd[x], 0, -1)
    depth = 0
    while heap:
        key, x, V, d = heapq.heappop(heap)
        sid = key[-1]
        depth = max(depth, d)
        fV = frozenset(table[v] for v in V)
        for x2 in d_succ[x]:
            V2 = fV & e_nbhd[x2]
            if not V2:
                path = [x2]
                i = sid
                while i != -1:
                    path.append(key_x[i])
                    i = parent[i]
                path.reverse()
                return ShadowingVerdict(False, PseudoOrbit(path, D), len(path) - 1, len(parent), max(depth, d + 1) + 1)
            if any(W <= V2 for W in minimal[x2]):
                continue
            if len(parent) >= state_cap:
                raise ResourceCapError("shadowing automaton states", len(parent) + 1, state_cap,
                                       "use a smaller entourage E or group")
            # keep the per-x list an antichain; dropped supersets stay queued
            kept = minimal[x2]
            if any(V2 < W for W in kept):
                kept = minimal[x2] = [W for W in kept if not V2 < W]
            kept.append(V2)
            push(x2, V2, d + 1, sid)
    return ShadowingVerdict(True, None, None, len(parent), depth + 1)


# -- quotient lifting ------------------------------------------------------------


@dataclass
class LiftResult:
    corrections: list  # h'_n
    lifted: PseudoOrbit  # x_n = y_n * h'_n
    steps: list  # (d_n, h_n) with f(y_n)*y_{n+1}^-1 = d_n*h_n
    witness: int | None  # y with f^n(y)*y_n^-1 in E*H, if one was found


def lift_quotient_pseudo_orbit(seqH, f: Endomorphism, H: Subgroup, D: Entourage, E: Entourage) -> LiftResult:
    """Turn a D*H-pseudo-orbit into a D-pseudo-orbit by right corrections in H."""
    G = f.space
    ys = _indices(G, seqH)
    if not ys:
        raise ValidationError("pseudo-orbit must be nonempty")
    if not np.all(np.isin(f.table[H.indices], H.indices)):
        raise ValidationError("subgroup is not f-invariant")
    in_h = np.zeros(G.order, dtype=bool)
    in_h[H.indices] = True
    steps = []
    for n in range(len(ys) - 1):
        g = int(G.sub(f.table[ys[n]], ys[n + 1]))
        ok = in_h[G.sub(g, D.members)]
        if not ok.any():
            raise ValidationError(f"not a D*H-pseudo-orbit: step {n} -> {n + 1} leaves D*H")
        d = int(D.members[np.argmax(ok)])
        steps.append((d, int(G.sub(g, d))))
    corr = [G.identity]
    for _, h in steps:
        corr.append(int(G.add(f.table[corr[-1]], h)))
    xs = [int(G.add(y, c)) for y, c in zip(ys, corr)]
    lifted = PseudoOrbit(xs, D)
    res = shadow_set(lifted, f, E)
    return LiftResult(corr, lifted, steps, res.witness if res.shadowed else None)


@dataclass
class QuotientShadowing:
    base: ShadowingVerdict
    quotient: ShadowingVerdict
    quotient_order: int

    @property
    def consistent(self) -> bool:
        return self.quotient.holds or not self.base.holds


def check_quotient_shadowing(f: Endomorphism, H: Subgroup, D: Entourage, E: Entourage,
                             state_cap: int = DEFAULT_STATE_CAP, strict: bool = True) -> QuotientShadowing:
    """Decide shadowing for f and for the induced map on G/H.

    With ``strict`` a base-holds/quotient-fails pair raises TheoremViolation.
    """
    Q = quotient_group(f.space, H)
    ft = induced_quotient_map(f, H, Q)
    base = decide_shadowing(f, D, E, state_cap)
    quot = decide_shadowing(ft, push_forward(D, Q), push_forward(E, Q), state_cap)
    out = QuotientShadowing(base, quot, Q.order)
    if strict and not out.consistent:
        raise TheoremViolation(
            f"shadowing holds for f but fails on G/H ({Q.order} cosets); "
            f"counterexample {Q.labels(quot.counterexample.points)}"
        )
    return out
