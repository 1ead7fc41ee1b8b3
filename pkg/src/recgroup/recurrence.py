"""Recurrent sets of an endomorphism and the recurrent-subgroup verifier.

Per-entourage sets are written with a subscript in the docs: ``CR_E`` is the
set of points lying on a cycle of the E-chain graph, ``CC_E`` the strongly
connected component of the identity, ``Omega_E`` the points whose
neighbourhood ``E*x`` returns to itself under some iterate.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import reduce
from math import lcm

import numpy as np

from . import kernels
from .endo import (
    Endomorphism,
    conjugate_system,
    cycle_lengths,
    induced_quotient_map,
    is_automorphism,
    make_conjugacy,
    matrix_power,
)
from .errors import ResourceCapError, ValidationError
from .group import FiniteAbelianGroup, QuotientGroup, as_subgroup, quotient_group, solve_linear
from .uniformity import (
    Entourage,
    EntourageBase,
    intersect_entourages,
    map_entourage,
    preimage_entourage,
    push_forward,
    refine_for_closure,
)

DEFAULT_EDGE_CAP = 50_000_000

# verify_recurrent_subgroup skips pairwise product checks above this many pairs
PAIR_CHECK_CAP = 4_000_000


def _sorted(idx) -> np.ndarray:
    return np.unique(np.asarray(idx, dtype=np.int64))


# -- algebraic recurrent sets -------------------------------------------------


def _shifted(G: FiniteAbelianGroup, A):
    return [[A[i][j] - (i == j) for j in range(G.rank)] for i in range(G.rank)]


def fixed_points(f: Endomorphism) -> np.ndarray:
    if f.matrix is not None and isinstance(f.space, FiniteAbelianGroup):
        return solve_linear(f.space, _shifted(f.space, f.matrix))
    return np.flatnonzero(f.table == np.arange(f.space.order)).astype(np.int64)


def periodic_points(f: Endomorphism, m: int) -> np.ndarray:
    if int(m) < 1:
        raise ValidationError(f"period must be >= 1, got {m}")
    if f.matrix is not None and isinstance(f.space, FiniteAbelianGroup):
        return solve_linear(f.space, _shifted(f.space, matrix_power(f.space, f.matrix, m)))
    return np.flatnonzero(f.power_table(m) == np.arange(f.space.order)).astype(np.int64)


def period_lcm(f: Endomorphism) -> int:
    return lcm(*cycle_lengths(f.table))


def periodic_set(f: Endomorphism) -> np.ndarray:
    """Per(f): every cycle length divides the lcm, so Per = Per_lcm."""
    return periodic_points(f, period_lcm(f))


def eventually_periodic(f: Endomorphism, m: int) -> np.ndarray:
    """Points whose orbit enters Per_m(f), by backward BFS layers from Per_m."""
    reached = np.zeros(f.space.order, dtype=bool)
    reached[periodic_points(f, m)] = True
    while True:
        layer = ~reached & reached[f.table]
        if not layer.any():
            return np.flatnonzero(reached).astype(np.int64)
        reached |= layer


def eventually_periodic_set(f: Endomorphism) -> np.ndarray:
    return eventually_periodic(f, period_lcm(f))


def nonwandering_set(f: Endomorphism, E: Entourage) -> np.ndarray:
    """Points ``x`` with ``f^n(E*x)`` meeting ``E*x`` for some ``n >= 1``.

    The sequence of image sets is followed until it repeats, which it must
    over a finite universe.
    """
    space = f.space
    table = f.table.tolist()
    nbhd = space.add(E.members[None, :], np.arange(space.order)[:, None]).tolist()
    out = []
    for x, u in enumerate(nbhd):
        target = frozenset(u)
        s = target
        seen = set()
        while True:
            s = frozenset(table[y] for y in s)
            if not s.isdisjoint(target):
                out.append(x)
                break
            if s in seen:
                break
            seen.add(s)
    return np.asarray(out, dtype=np.int64)


# -- chain graph ---------------------------------------------------------------


class ChainGraph:
    """Edges ``x -> y`` iff ``f(x)*y^-1`` in E; successors of x are ``E*f(x)``.

    Successors are generated from ``E`` on demand; :meth:`successor_table`
    materializes them as an ``|G| x |E|`` array.
    """

    def __init__(self, f: Endomorphism, E: Entourage):
        self.f = f
        self.entourage = E
        self.space = f.space

    @property
    def order(self):
        return self.space.order

    @property
    def out_degree(self):
        return len(self.entourage)

    def kernel_args(self):
        rep, moduli, strides, proj = self.space.translation_data()
        return self.f.table, rep, self.entourage.offsets(), moduli, strides, proj

    def successors(self, x) -> np.ndarray:
        x = self.space.to_index(x)
        return np.sort(self.space.add(self.entourage.members, self.f.table[x]))

    def has_edge(self, x, y) -> bool:
        x, y = self.space.to_index(x), self.space.to_index(y)
        return self.entourage.contains_index(int(self.space.sub(self.f.table[x], y)))

    def successor_table(self) -> np.ndarray:
        return np.sort(kernels.successor_table(*self.kernel_args()), axis=1)

    def components(self):
        """``(labels, cyclic)`` from the SCC kernel."""
        return kernels.strongly_connected(*self.kernel_args())


def build_chain_graph(f: Endomorphism, E: Entourage, cap: int = DEFAULT_EDGE_CAP) -> ChainGraph:
    if f.space != E.space:
        raise ValidationError("map and entourage live on different groups")
    edges = f.space.order * len(E)
    if edges > cap:
        raise ResourceCapError("chain graph edges", edges, cap, "use a smaller group or entourage")
    f.space.check_cap("chain graph vertices")
    return ChainGraph(f, E)


def chain_recurrent_set(f: Endomorphism, E: Entourage, cap: int = DEFAULT_EDGE_CAP) -> np.ndarray:
    """Points on a cycle (length >= 1) of the E-chain graph."""
    labels, cyclic = build_chain_graph(f, E, cap).components()
    return np.flatnonzero(cyclic[labels]).astype(np.int64)


def chain_component_identity(f: Endomorphism, E: Entourage, cap: int = DEFAULT_EDGE_CAP) -> np.ndarray:
    """``{x : x ~> e and e ~> x}``; the identity always carries a self-loop."""
    labels, _ = build_chain_graph(f, E, cap).components()
    return np.flatnonzero(labels == labels[f.space.identity]).astype(np.int64)


_PER_ENTOURAGE = {
    "cr": chain_recurrent_set,
    "cc": chain_component_identity,
    "omega": nonwandering_set,
}


@dataclass
class OverBase:
    kind: str
    levels: list
    intersection: np.ndarray


def over_base(kind: str, f: Endomorphism, base: EntourageBase) -> OverBase:
    """Per-level sets for ``kind`` in {"cr", "cc", "omega"} and their intersection."""
    try:
        compute = _PER_ENTOURAGE[kind]
    except KeyError:
        raise ValidationError(f"unknown set kind {kind!r}; expected one of {sorted(_PER_ENTOURAGE)}") from None
    levels = [compute(f, E) for E in base]
    return OverBase(kind, levels, reduce(np.intersect1d, levels))


# -- report ---------------------------------------------------------------------


@dataclass
class RecurrenceReport:
    """Named element sets; keys like ``Fix``, ``Per_2``, ``CR_E[1]``, ``CR``."""

    sets: dict = field(default_factory=dict)
    entourages: dict = field(default_factory=dict)

    def inclusion_failures(self) -> list:
        """Check Fix <= Per_m <= Per <= Omega_E for every level."""
        def sub(a, b):
            return bool(np.all(np.isin(self.sets[a], self.sets[b])))

        chain = ["Fix"] + sorted(k for k in self.sets if k.startswith("Per_")) + ["Per"]
        bad = [(a, "Per") for a in chain[:-1] if not sub(a, "Per")]
        bad += [("Fix", a) for a in chain[1:] if not sub("Fix", a)]
        for name in self.sets:
            if name.startswith("Omega_E["):
                if not sub("Per", name):
                    bad.append(("Per", name))
        return bad


def recurrence_report(f: Endomorphism, base: EntourageBase, periods=(1,)) -> RecurrenceReport:
    rep = RecurrenceReport()
    s = rep.sets
    s["Fix"] = fixed_points(f)
    for m in periods:
        s[f"Per_{m}"] = periodic_points(f, m)
    s["Per"] = periodic_set(f)
    s["EFix"] = eventually_periodic(f, 1)
    for m in periods:
        s[f"EPer_{m}"] = eventually_periodic(f, m)
    s["EPer"] = eventually_periodic_set(f)
    for kind, label in (("omega", "Omega"), ("cr", "CR"), ("cc", "CC")):
        res = over_base(kind, f, base)
        for i, level in enumerate(res.levels):
            s[f"{label}_E[{i}]"] = level
            rep.entourages[f"{label}_E[{i}]"] = base[i]
        s[label] = res.intersection
    return rep


# -- recurrent-subgroup verification ----------------------------------------------


@dataclass(frozen=True)
class SetKind:
    """Recipe for recomputing a recurrent set on another system.

    ``name`` is one of fix, per, efix, eper, per-all, eper-all, cr, cc,
    cr-base, cc-base.
    """

    name: str
    m: int | None = None
    entourage: Entourage | None = None
    base: EntourageBase | None = None

    def __post_init__(self):
        if self.name not in _KINDS:
            raise ValidationError(f"unknown set kind {self.name!r}")
        if self.name in ("per", "eper") and not self.m:
            raise ValidationError(f"kind {self.name!r} needs a period m")
        if self.name in ("cr", "cc") and self.entourage is None:
            raise ValidationError(f"kind {self.name!r} needs an entourage")
        if self.name in ("cr-base", "cc-base") and self.base is None:
            raise ValidationError(f"kind {self.name!r} needs an entourage base")

    @property
    def label(self) -> str:
        return {
            "fix": "Fix",
            "per": f"Per_{self.m}",
            "efix": "EFix",
            "eper": f"EPer_{self.m}",
            "per-all": "Per",
            "eper-all": "EPer",
            "cr": "CR_E",
            "cc": "CC_E",
            "cr-base": "CR",
            "cc-base": "CC",
        }[self.name]

    def compute(self, f: Endomorphism) -> np.ndarray:
        n = self.name
        if n == "fix":
            return fixed_points(f)
        if n == "per":
            return periodic_points(f, self.m)
        if n == "efix":
            return eventually_periodic(f, 1)
        if n == "eper":
            return eventually_periodic(f, self.m)
        if n == "per-all":
            return periodic_set(f)
        if n == "eper-all":
            return eventually_periodic_set(f)
        if n in ("cr", "cc"):
            return _PER_ENTOURAGE[n](f, self.entourage)
        return over_base(n[:2], f, self.base).intersection

    def transport(self, phi: Endomorphism) -> "SetKind":
        """Same recipe with entourages replaced by their images under ``phi``."""
        if self.entourage is not None:
            return replace(self, entourage=map_entourage(phi, self.entourage))
        if self.base is not None:
            return replace(self, base=EntourageBase([map_entourage(phi, E) for E in self.base]))
        return self

    def push(self, Q: QuotientGroup) -> "SetKind":
        if self.entourage is not None:
            return replace(self, entourage=push_forward(self.entourage, Q))
        if self.base is not None:
            return replace(self, base=EntourageBase([push_forward(E, Q) for E in self.base]))
        return self


_KINDS = {"fix", "per", "efix", "eper", "per-all", "eper-all", "cr", "cc", "cr-base", "cc-base"}
_QUOTIENTABLE = {"fix", "per", "cc", "cc-base"}


@dataclass
class AxiomResult:
    status: str  # pass | fail | trivial | not applicable | skipped
    detail: str = ""
    claimed: bool = True  # a failure contradicts a stated theorem

    @property
    def violated(self) -> bool:
        return self.status == "fail" and self.claimed


@dataclass
class SubgroupVerdict:
    label: str
    size: int
    axioms: dict

    @property
    def violations(self) -> list:
        return [name for name, r in self.axioms.items() if r.violated]

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.axioms.values())


def _mask(order, idx):
    m = np.zeros(order, dtype=bool)
    m[idx] = True
    return m


def _forward_witness(f, S):
    inside = _mask(f.space.order, S)
    bad = S[~inside[f.table[S]]]
    return None if bad.size == 0 else int(bad[0])


def _closure_witness(space, S, target, op):
    """First pair ``(x, y)`` of ``S`` with ``op(x, y)`` outside ``target``."""
    inside = _mask(space.order, target)
    for start in range(0, len(S), max(1, 200_000 // max(1, len(S)))):
        xs = S[start:start + max(1, 200_000 // max(1, len(S)))]
        vals = op(xs[:, None], S[None, :])
        bad = np.argwhere(~inside[vals])
        if bad.size:
            i, j = bad[0]
            return int(xs[i]), int(S[j])
    return None


def _subgroup_status(space, S):
    if not isinstance(space, FiniteAbelianGroup):
        # quotient spaces: pairwise check
        w = _closure_witness(space, S, S, space.sub) if len(S) else None
        ok = len(S) > 0 and S[0] == space.identity and w is None
        return ok, "" if ok else "not closed under x*y^-1"
    try:
        as_subgroup(space, S)
    except ValidationError as exc:
        return False, "; ".join(exc.violations) or str(exc)
    return True, ""


def graded_product_check(kind: SetKind, f: Endomorphism) -> AxiomResult:
    """CR_W * CR_W inside CR_{W*W}; CC_W^-1 * CC_W inside CC_{W*W}."""
    from .uniformity import entourage_product

    space = f.space
    W = kind.entourage
    S = kind.compute(f)
    if len(S) ** 2 > PAIR_CHECK_CAP:
        return AxiomResult("skipped", f"{len(S)}^2 pairs exceed {PAIR_CHECK_CAP}", claimed=False)
    WW = entourage_product(W, W)
    target = replace(kind, entourage=WW).compute(f)
    op = space.add if kind.name == "cr" else space.sub
    inv_bad = np.setdiff1d(np.unique(space.neg(S)), S)
    if inv_bad.size:
        return AxiomResult("fail", f"inverse of {space.label(space.neg(inv_bad[0]))} missing at E")
    w = _closure_witness(space, S, target, op)
    if w is not None:
        sym = "*" if kind.name == "cr" else "^-1*"
        return AxiomResult("fail", f"{space.label(w[0])}{sym}{space.label(w[1])} not in {kind.label} at E*E")
    return AxiomResult("pass", "graded: inverse-closed at E, products land in the set at E*E")


def graded_forward_check(kind: SetKind, f: Endomorphism) -> AxiomResult:
    """f(S_V) inside S_E for V = W & f^-1(W), W*W inside E."""
    W = refine_for_closure(kind.entourage)
    V = intersect_entourages(W, preimage_entourage(f, W))
    S_V = replace(kind, entourage=V).compute(f)
    S_E = kind.compute(f)
    bad = np.setdiff1d(np.unique(f.table[S_V]), S_E)
    if bad.size:
        return AxiomResult("fail", f"f maps a point of {kind.label} at V outside the set at E")
    return AxiomResult("pass", "graded: f(S at V) inside S at E, V = W & f^-1(W), W*W inside E")


def verify_recurrent_subgroup(S, f: Endomorphism, kind: SetKind | None = None, phi: Endomorphism | None = None) -> SubgroupVerdict:
    """Check the recurrent-subgroup axioms R1-R5 for ``S``.

    R1 subgroup, R2 forward invariance, R3 closedness (trivial on a finite
    discrete group), R4 conjugacy invariance under ``phi``, R5 invariance
    under the canonical map to ``G/S``.  R4 and R5 need ``kind`` to
    recompute the set on the transformed system.  Chain sets at a single
    entourage are checked in graded form (see :func:`graded_product_check`).
    """
    space = f.space
    S = _sorted([space.to_index(x) for x in S] if not isinstance(S, np.ndarray) else S)
    if S.size and (S[0] < 0 or S[-1] >= space.order):
        raise ValidationError("set contains elements outside the group")
    label = kind.label if kind else "S"
    ax = {}
    graded = kind is not None and kind.name in ("cr", "cc")
    claimed_exact = not (kind is not None and kind.name in ("cr-base", "cc-base") and len(kind.base.finest) > 1)

    # R1
    ok, why = _subgroup_status(space, S)
    if graded:
        ax["R1"] = graded_product_check(kind, f)
        ax["R1"].detail += f"; exact subgroup at E: {'yes' if ok else 'no'}"
    else:
        ax["R1"] = AxiomResult("pass" if ok else "fail", why, claimed=kind is not None and claimed_exact)

    # R2
    if graded:
        ax["R2"] = graded_forward_check(kind, f)
    else:
        w = _forward_witness(f, S)
        ax["R2"] = AxiomResult(
            "pass" if w is None else "fail",
            "" if w is None else f"f({space.label(w)}) = {space.label(f.table[w])} leaves the set",
            claimed=kind is not None and claimed_exact,
        )

    ax["R3"] = AxiomResult("trivial", "every subset of a finite discrete group is closed")

    # R4
    if phi is None or kind is None:
        ax["R4"] = AxiomResult("not applicable", "needs a set kind and a conjugating automorphism", claimed=False)
    elif not is_automorphism(phi):
        ax["R4"] = AxiomResult("not applicable", "conjugating map is not an automorphism", claimed=False)
    else:
        conj = make_conjugacy(phi)
        g = conjugate_system(f, conj)
        lhs = np.unique(phi.table[kind.compute(f)])
        rhs = kind.transport(phi).compute(g)
        same = np.array_equal(lhs, rhs)
        ax["R4"] = AxiomResult(
            "pass" if same else "fail",
            f"phi({label}(f)) vs {label}(phi f phi^-1)" + ("" if same else f": sizes {len(lhs)} vs {len(rhs)}"),
        )

    # R5
    if kind is None or kind.name not in _QUOTIENTABLE:
        ax["R5"] = AxiomResult("not applicable", "set kind has no quotient statement", claimed=False)
    elif ax["R1"].status != "pass" or _forward_witness(f, S) is not None:
        ax["R5"] = AxiomResult("not applicable", "induced map undefined: set is not an f-invariant subgroup", claimed=False)
    elif kind.name in ("cc", "cc-base") and not is_automorphism(f):
        ax["R5"] = AxiomResult("not applicable", "stated for automorphisms only", claimed=False)
    else:
        ax["R5"] = quotient_invariance(kind, f, S)
        ax["R5"].claimed = claimed_exact
    return SubgroupVerdict(label, len(S), ax)


def quotient_invariance(kind: SetKind, f: Endomorphism, S) -> AxiomResult:
    """Does the induced map on ``G/S`` have ``{S}`` as its whole set of this kind?"""
    G = f.space
    H = as_subgroup(G, np.asarray(S, dtype=np.int64))
    Q = quotient_group(G, H)
    ft = induced_quotient_map(f, H, Q)
    got = kind.push(Q).compute(ft)
    if np.array_equal(got, [Q.identity]):
        return AxiomResult("pass", f"{kind.label}(f~) = {{H}} on {Q.order} cosets")
    extra = [Q.label(c) for c in got if c != Q.identity][:3]
    return AxiomResult(
        "fail",
        f"{kind.label}(f~) has {len(got)} cosets, not just H; e.g. coset of {extra[0] if extra else '?'}",
    )
