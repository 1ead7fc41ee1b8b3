"""Endomorphisms given by integer matrices or by function tables.

Every :class:`Endomorphism` carries a total table (``table[x] = f(x)`` on
element indices); a matrix is kept alongside when one is known.  Downstream
modules only read the table, which is what lets quotient maps, inverses and
conjugates flow through the same code.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from .errors import ValidationError
from .group import FiniteAbelianGroup, QuotientGroup, Subgroup, _frozen, quotient_group, solve_linear

# apply() switches from step-by-step iteration to matrix powering above this.
DOUBLING_THRESHOLD = 16


class Endomorphism:
    def __init__(self, space, table, matrix=None):
        self.space = space
        self.table = _frozen(table)
        self.matrix = None if matrix is None else tuple(tuple(int(v) for v in row) for row in matrix)
        if self.table.shape != (space.order,):
            raise ValidationError(f"table has shape {self.table.shape}, expected ({space.order},)")

    def __call__(self, x):
        return self.table[x]

    def __repr__(self):
        if self.matrix is not None:
            return f"Endomorphism({self.space!r}, matrix={[list(r) for r in self.matrix]})"
        return f"Endomorphism({self.space!r}, table)"

    def __eq__(self, other):
        return (
            isinstance(other, Endomorphism)
            and other.space == self.space
            and np.array_equal(other.table, self.table)
        )

    __hash__ = None

    def power_table(self, n: int) -> np.ndarray:
        """Table of ``f^n`` by repeated squaring of the table."""
        if n < 0:
            raise ValidationError(f"iteration count must be >= 0, got {n}")
        result = np.arange(self.space.order, dtype=np.int64)
        base = self.table
        while n:
            if n & 1:
                result = base[result]
            base = base[base]
            n >>= 1
        return result

    def image(self, idx) -> np.ndarray:
        return np.unique(self.table[np.asarray(idx, dtype=np.int64)])


def hom_violations(G: FiniteAbelianGroup, A) -> list:
    n = G.moduli
    out = []
    for i in range(G.rank):
        for j in range(G.rank):
            need = n[i] // gcd(n[i], n[j])
            if A[i][j] % need:
                out.append(
                    f"entry ({i + 1},{j + 1}) = {A[i][j]} maps Z_{n[j]} -> Z_{n[i]}; "
                    f"needs a multiple of {need}"
                )
    return out


def _reduce_rows(G, A):
    return tuple(tuple(int(v) % G.moduli[i] for v in row) for i, row in enumerate(A))


def validate_endomorphism(G: FiniteAbelianGroup, A) -> Endomorphism:
    """Check square shape and the divisibility a_ij == 0 mod n_i/gcd(n_i, n_j)."""
    try:
        A = [[int(v) for v in row] for row in A]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix entries must be integers: {exc}") from None
    if len(A) != G.rank or any(len(row) != G.rank for row in A):
        raise ValidationError(
            f"matrix must be {G.rank}x{G.rank}, got {len(A)} rows of lengths {[len(r) for r in A]}"
        )
    bad = hom_violations(G, A)
    if bad:
        raise ValidationError("matrix does not define an endomorphism", bad)
    A = _reduce_rows(G, A)
    M = np.array(A, dtype=np.int64)
    table = G.from_coords(G.all_coords @ M.T)
    return Endomorphism(G, table, A)


def identity_map(space) -> Endomorphism:
    matrix = None
    if isinstance(space, FiniteAbelianGroup):
        matrix = [[int(i == j) for j in range(space.rank)] for i in range(space.rank)]
    return Endomorphism(space, np.arange(space.order), matrix)


def matrix_product(G: FiniteAbelianGroup, A, B):
    k = G.rank
    return _reduce_rows(G, [[sum(A[i][l] * B[l][j] for l in range(k)) for j in range(k)] for i in range(k)])


def matrix_power(G: FiniteAbelianGroup, A, n: int):
    result = _reduce_rows(G, [[int(i == j) for j in range(G.rank)] for i in range(G.rank)])
    base = _reduce_rows(G, A)
    while n:
        if n & 1:
            result = matrix_product(G, base, result)
        base = matrix_product(G, base, base)
        n >>= 1
    return result


def apply(f: Endomorphism, x, n: int = 1):
    """``f^n(x)`` for an index or coordinate tuple; returns the same kind."""
    if n < 0:
        raise ValidationError(f"iteration count must be >= 0, got {n}")
    space = f.space
    as_tuple = isinstance(x, (tuple, list))
    i = space.to_index(x)
    if n > DOUBLING_THRESHOLD and f.matrix is not None:
        M = np.array(matrix_power(space, f.matrix, n), dtype=np.int64)
        i = int(space.from_coords(M @ space.coords(i)))
    elif n > DOUBLING_THRESHOLD:
        i = int(f.power_table(n)[i])
    else:
        for _ in range(n):
            i = int(f.table[i])
    return space.label(i) if as_tuple else i


def compose_maps(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """``f o g``."""
    if f.space != g.space:
        raise ValidationError("cannot compose maps on different groups")
    matrix = None
    if f.matrix is not None and g.matrix is not None:
        matrix = matrix_product(f.space, f.matrix, g.matrix)
    return Endomorphism(f.space, f.table[g.table], matrix)


def power_map(f: Endomorphism, n: int) -> Endomorphism:
    matrix = matrix_power(f.space, f.matrix, n) if f.matrix is not None else None
    return Endomorphism(f.space, f.power_table(n), matrix)


def cycle_lengths(table: np.ndarray) -> list:
    """Distinct cycle lengths of the functional graph of ``table``."""
    n = len(table)
    state = np.zeros(n, dtype=np.int8)  # 0 new, 1 on current walk, 2 done
    t = table.tolist()
    lengths = set()
    for start in range(n):
        if state[start]:
            continue
        path = []
        x = start
        while not state[x]:
            state[x] = 1
            path.append(x)
            x = t[x]
        if state[x] == 1:
            lengths.add(len(path) - path.index(x))
        for y in path:
            state[y] = 2
    return sorted(lengths)


def is_automorphism(f: Endomorphism) -> bool:
    if f.matrix is not None and isinstance(f.space, FiniteAbelianGroup):
        return len(solve_linear(f.space, f.matrix)) == 1
    return len(np.unique(f.table)) == f.space.order


def automorphism_inverse(f: Endomorphism) -> Endomorphism | None:
    """Inverse map as a permutation table (and matrix when ``f`` has one), or None."""
    if not is_automorphism(f):
        return None
    inv = np.empty_like(f.table)
    inv[f.table] = np.arange(f.space.order, dtype=np.int64)
    matrix = None
    if f.matrix is not None:
        order = lcm(*cycle_lengths(f.table))
        matrix = matrix_power(f.space, f.matrix, order - 1)
    return Endomorphism(f.space, inv, matrix)


@dataclass(frozen=True)
class SystemConjugacy:
    phi: Endomorphism
    inverse: Endomorphism


def make_conjugacy(phi: Endomorphism) -> SystemConjugacy:
    inv = automorphism_inverse(phi)
    if inv is None:
        raise ValidationError("conjugacy map is not an automorphism")
    return SystemConjugacy(phi, inv)


def conjugate_system(f: Endomorphism, conj: SystemConjugacy | Endomorphism) -> Endomorphism:
    """``g = phi o f o phi^-1``, so that ``phi o f = g o phi``."""
    if isinstance(conj, Endomorphism):
        conj = make_conjugacy(conj)
    phi, inv = conj.phi, conj.inverse
    if phi.space != f.space:
        raise ValidationError("conjugacy map acts on a different group")
    matrix = None
    if f.matrix is not None and phi.matrix is not None and inv.matrix is not None:
        G = f.space
        matrix = matrix_product(G, phi.matrix, matrix_product(G, f.matrix, inv.matrix))
    return Endomorphism(f.space, phi.table[f.table[inv.table]], matrix)


def invariance_witness(f: Endomorphism, H: Subgroup):
    """First ``h`` in ``H`` with ``f(h)`` outside ``H``, or None."""
    inside = np.zeros(f.space.order, dtype=bool)
    inside[H.indices] = True
    bad = H.indices[~inside[f.table[H.indices]]]
    return None if bad.size == 0 else int(bad[0])


def induced_quotient_map(f: Endomorphism, H: Subgroup, quotient: QuotientGroup | None = None) -> Endomorphism:
    """Canonical map ``xH -> f(x)H`` on ``G/H``; requires ``f(H)`` inside ``H``."""
    G = f.space
    h = invariance_witness(f, H)
    if h is not None:
        raise ValidationError(
            "subgroup is not f-invariant",
            [f"h = {G.label(h)} in H but f(h) = {G.label(f.table[h])} is not"],
        )
    Q = quotient if quotient is not None else quotient_group(G, H)
    table = Q.proj[f.table[Q.reps]]
    # commutation pi o f == f~ o pi, exhaustively
    if not np.array_equal(Q.proj[f.table], table[Q.proj]):
        raise ValidationError("induced map is not well defined on cosets")
    return Endomorphism(Q, table)
