"""Entropy estimates from (n,E)-separated and (n,E)-spanning counts.

For a group endomorphism the Bowen ball around ``x`` is ``x + B_n`` with
``B_n = {d : f^i(d) in E, 0 <= i < n}``, so separation of ``x`` and ``y``
depends only on ``x - y``.  Separated sets are independent sets and
spanning sets are covers in the Cayley graph of ``B_n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .endo import Endomorphism, induced_quotient_map
from .errors import EntropyError, ValidationError
from .group import Subgroup, quotient_group
from .uniformity import Entourage, push_forward

DEFAULT_EXACT_CAP = 24


def bowen_set(f: Endomorphism, n: int, E: Entourage) -> np.ndarray:
    """``B_n`` as sorted indices."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    alive = E.mask.copy()
    t = np.arange(f.space.order)
    for _ in range(n - 1):
        t = f.table[t]
        alive &= E.mask[t]
    return np.flatnonzero(alive).astype(np.int64)


def _kernel_data(space, B):
    rep, moduli, strides, proj = space.translation_data()
    return rep, np.ascontiguousarray(space.offset_coords(B)), moduli, strides, proj


def _as_set(space, K) -> np.ndarray:
    if K is None:
        return np.arange(space.order, dtype=np.int64)
    if isinstance(K, Subgroup):
        return K.indices
    K = np.unique(np.asarray([space.to_index(x) for x in K] if not isinstance(K, np.ndarray) else K, dtype=np.int64))
    if K.size == 0:
        raise ValidationError("K must be nonempty")
    return K


def _conflict_masks(space, K, B) -> list:
    """Bit j of masks[i] set when K[i] - K[j] lies in B (i != j)."""
    inB = np.zeros(space.order, dtype=bool)
    inB[B] = True
    diff = inB[space.sub(K[:, None], K[None, :])]
    np.fill_diagonal(diff, False)
    return [int(sum(1 << int(j) for j in np.flatnonzero(row))) for row in diff]


def _exact_independent(adj: list) -> list:
    """Maximum independent set by branch and bound; returns positions."""
    best = [0]
    best_sol = [[]]

    def grow(avail: int, chosen: list):
        if avail == 0:
            if len(chosen) > best[0]:
                best[0] = len(chosen)
                best_sol[0] = list(chosen)
            return
        if len(chosen) + bin(avail).count("1") <= best[0]:
            return
        v = (avail & -avail).bit_length() - 1
        chosen.append(v)
        grow(avail & ~adj[v] & ~(1 << v), chosen)
        chosen.pop()
        if adj[v] & avail:  # excluding v only helps when it has neighbours left
            grow(avail & ~(1 << v), chosen)

    grow((1 << len(adj)) - 1, [])
    return sorted(best_sol[0])


def _exact_cover(sets: list, size: int, upper: list) -> list:
    """Minimum cover of ``size`` bits by ``sets``; ``upper`` is a known cover."""
    best = [list(upper)]
    biggest = max(bin(s).count("1") for s in sets)
    by_elem = [sorted((i for i, s in enumerate(sets) if s >> u & 1), key=lambda i: -bin(sets[i]).count("1"))
               for u in range(size)]

    def search(uncovered: int, chosen: list):
        if uncovered == 0:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        left = bin(uncovered).count("1")
        if len(chosen) + -(-left // biggest) >= len(best[0]):
            return
        u = (uncovered & -uncovered).bit_length() - 1
        for i in by_elem[u]:
            chosen.append(i)
            search(uncovered & ~sets[i], chosen)
            chosen.pop()

    search((1 << size) - 1, [])
    return sorted(best[0])


@dataclass
class Count:
    value: int
    exact: bool
    witness: np.ndarray


def max_separated(f: Endomorphism, n: int, E: Entourage, K=None, exact_cap: int = DEFAULT_EXACT_CAP,
                  seeds=None) -> Count:
    """Largest (n,E)-separated subset of K found; exact when ``|K| <= exact_cap``.

    ``seeds`` must be pairwise separated; the greedy search extends them.
    """
    space = f.space
    K = _as_set(space, K)
    B = bowen_set(f, n, E)
    if len(K) <= exact_cap:
        pos = _exact_independent(_conflict_masks(space, K, B))
        return Count(len(pos), True, K[pos])
    seeds = np.empty(0, dtype=np.int64) if seeds is None else np.asarray(seeds, dtype=np.int64)
    sel = kernels.greedy_separated(*_kernel_data(space, B), K, seeds)
    return Count(len(sel), False, sel)


def min_spanning(f: Endomorphism, n: int, E: Entourage, K=None, exact_cap: int = DEFAULT_EXACT_CAP) -> Count:
    """Smallest set of centres in K whose Bowen balls cover K found."""
    space = f.space
    K = _as_set(space, K)
    B = bowen_set(f, n, E)
    centers = kernels.greedy_cover(*_kernel_data(space, B), K)
    if len(K) <= exact_cap:
        masks = _conflict_masks(space, K, B)
        sets = [m | (1 << i) for i, m in enumerate(masks)]
        pos_of = {int(x): i for i, x in enumerate(K)}
        pos = _exact_cover(sets, len(K), [pos_of[int(c)] for c in centers])
        return Count(len(pos), True, K[pos])
    return Count(len(centers), False, np.sort(centers))


def is_separated(f: Endomorphism, n: int, E: Entourage, A) -> bool:
    A = np.asarray(A, dtype=np.int64)
    inB = np.zeros(f.space.order, dtype=bool)
    inB[bowen_set(f, n, E)] = True
    d = inB[f.space.sub(A[:, None], A[None, :])]
    np.fill_diagonal(d, False)
    return not d.any()


def is_spanning(f: Endomorphism, n: int, E: Entourage, A, K=None) -> bool:
    space = f.space
    K = _as_set(space, K)
    B = bowen_set(f, n, E)
    covered = np.zeros(space.order, dtype=bool)
    covered[space.add(np.asarray(A, dtype=np.int64)[:, None], B[None, :]).ravel()] = True
    return bool(covered[K].all())


@dataclass
class EntropyRow:
    n: int
    sep: int
    sep_exact: bool
    span: int
    span_exact: bool


@dataclass
class EntropyTable:
    rows: list
    entourage: Entourage
    K: np.ndarray
    sep_witness: dict = field(default_factory=dict)
    span_witness: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.K)

    def csv(self) -> str:
        lines = ["n,sep,sep_exact,span,span_exact"]
        lines += [f"{r.n},{r.sep},{str(r.sep_exact).lower()},{r.span},{str(r.span_exact).lower()}" for r in self.rows]
        return "\n".join(lines) + "\n"


def entropy_table(f: Endomorphism, E: Entourage, K=None, n_range=range(1, 7),
                  exact_cap: int = DEFAULT_EXACT_CAP) -> EntropyTable:
    """Counts for each n.

    Greedy separated sets are seeded by the witness for the previous n, and
    greedy spanning counts take a running minimum from the right (a cover
    at n+1 is also a cover at n), so both columns are monotone in n.
    """
    space = f.space
    K = _as_set(space, K)
    ns = sorted(set(int(n) for n in n_range))
    if not ns:
        raise ValidationError("n_range is empty")
    if ns[0] < 1:
        raise ValidationError(f"n must be >= 1, got {ns[0]}")
    table = EntropyTable([], E, K)
    seps, spans = {}, {}
    prev = None
    for n in ns:
        s = max_separated(f, n, E, K, exact_cap, seeds=prev)
        seps[n] = s
        prev = s.witness
        spans[n] = min_spanning(f, n, E, K, exact_cap)
    best = None
    for n in reversed(ns):
        if best is None or spans[n].value <= best.value:
            best = spans[n]
        spans[n] = best
    for n in ns:
        table.rows.append(EntropyRow(n, seps[n].value, seps[n].exact, spans[n].value, spans[n].exact))
        table.sep_witness[n] = seps[n].witness
        table.span_witness[n] = spans[n].witness
    return table


def _slope(ns, counts) -> float:
    x = np.asarray(ns, dtype=float)
    y = np.log(np.asarray(counts, dtype=float))
    xc = x - x.mean()
    return float((xc * (y - y.mean())).sum() / (xc * xc).sum())


@dataclass
class EntropyEstimate:
    slope: float  # from separated counts
    span_slope: float | None
    window: tuple  # (first n, last n) of the fit
    residuals: dict
    saturation: int | None  # first n with sep == |K|
    table: EntropyTable


def estimate_from_table(table: EntropyTable) -> EntropyEstimate:
    size = table.size
    sat = next((r.n for r in table.rows if r.sep >= size), None)
    if size == 1:
        n0, n1 = table.rows[0].n, table.rows[-1].n
        return EntropyEstimate(0.0, 0.0, (n0, n1), {r.n: 0.0 for r in table.rows}, sat, table)
    rows = [r for r in table.rows if r.sep < size]
    if len(rows) < 2:
        raise EntropyError(
            f"only {len(rows)} of {len(table.rows)} rows lie below the ceiling |K| = {size} "
            f"(saturated from n = {sat}); use a finer entourage, a larger group or smaller n"
        )
    ns = [r.n for r in rows]
    slope = _slope(ns, [r.sep for r in rows])
    span_rows = [r for r in rows if r.span < size]
    span_slope = _slope([r.n for r in span_rows], [r.span for r in span_rows]) if len(span_rows) >= 2 else None
    y = np.log([r.sep for r in rows])
    fit = y.mean() + slope * (np.asarray(ns) - np.mean(ns))
    residuals = {n: float(v) for n, v in zip(ns, y - fit)}
    return EntropyEstimate(max(slope, 0.0), span_slope, (ns[0], ns[-1]), residuals, sat, table)


def entropy_estimate(f: Endomorphism, E: Entourage, K=None, n_range=range(1, 7),
                     exact_cap: int = DEFAULT_EXACT_CAP) -> EntropyEstimate:
    return estimate_from_table(entropy_table(f, E, K, n_range, exact_cap))


def restricted_entropy(f: Endomorphism, E: Entourage, R, n_range=range(1, 7),
                       exact_cap: int = DEFAULT_EXACT_CAP) -> EntropyEstimate:
    """Estimate for ``f`` restricted to a forward-invariant set R."""
    space = f.space
    R = _as_set(space, R)
    inside = np.zeros(space.order, dtype=bool)
    inside[R] = True
    bad = R[~inside[f.table[R]]]
    if bad.size:
        raise ValidationError(
            "set is not forward invariant",
            [f"f({space.label(bad[0])}) = {space.label(f.table[bad[0]])} leaves it"],
        )
    return entropy_estimate(f, E, R, n_range, exact_cap)


@dataclass
class AdditionReport:
    total: EntropyEstimate
    quotient: EntropyEstimate
    restricted: EntropyEstimate
    quotient_order: int
    subgroup_order: int

    @property
    def margin(self) -> float:
        return self.total.slope - self.quotient.slope - self.restricted.slope


def addition_report(f: Endomorphism, H: Subgroup, E: Entourage, n_range=range(1, 7),
                    exact_cap: int = DEFAULT_EXACT_CAP) -> AdditionReport:
    """h(f), h(f~) on G/H with pi(E), and h(f|H)."""
    Q = quotient_group(f.space, H)
    ft = induced_quotient_map(f, H, Q)
    total = entropy_estimate(f, E, None, n_range, exact_cap)
    quot = entropy_estimate(ft, push_forward(E, Q), None, n_range, exact_cap)
    restricted = restricted_entropy(f, E, H.indices, n_range, exact_cap)
    return AdditionReport(total, quot, restricted, Q.order, len(H))


def relative_difference(a: float, b: float) -> float:
    """Relative difference ``|a - b| / |b|`` (inf when b is zero and a is not)."""
    if b == 0:
        return 0.0 if a == 0 else math.inf
    return abs(a - b) / abs(b)
