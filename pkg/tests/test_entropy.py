import itertools

import numpy as np
import pytest

import oracles
from recgroup.endo import identity_map, validate_endomorphism
from recgroup.entropy import (
    addition_report,
    bowen_set,
    entropy_estimate,
    entropy_table,
    is_separated,
    is_spanning,
    max_separated,
    min_spanning,
    restricted_entropy,
)
from recgroup.errors import EntropyError, ValidationError
from recgroup.group import FiniteAbelianGroup, as_subgroup, subgroup_closure
from recgroup.uniformity import Entourage, entourage_product

Z10 = FiniteAbelianGroup([10])


def test_separated_examples():
    d = validate_endomorphism(Z10, [[2]])
    assert max_separated(d, 1, Entourage.ball(Z10, 1)).value == 5
    assert max_separated(d, 1, Entourage.identity(Z10)).value == 10
    idm = identity_map(Z10)
    E = Entourage.ball(Z10, 1)
    assert {max_separated(idm, n, E).value for n in range(1, 5)} == {5}


def test_spanning_examples():
    d = validate_endomorphism(Z10, [[2]])
    assert min_spanning(d, 1, Entourage.ball(Z10, 1)).value == 4
    assert min_spanning(d, 3, Entourage.whole(Z10)).value == 1
    assert min_spanning(d, 1, Entourage.identity(Z10)).value == 10


def test_exact_matches_subset_brute_force():
    cases = [([20], [[3]], 2), ([4, 5], [[1, 0], [0, 2]], 1), ([18], [[5]], 3), ([12], [[7]], 1), ([3, 6], [[2, 0], [2, 1]], 1)]
    for mods, A, r in cases:
        G = FiniteAbelianGroup(mods)
        f = validate_endomorphism(G, A)
        s = oracles.Sys(mods, A)
        E = Entourage.ball(G, r)
        for n in (1, 2, 3, 4):
            sep, span = oracles.brute_sep_span(s, n, s.ball(r), range(s.order))
            a = max_separated(f, n, E)
            b = min_spanning(f, n, E)
            assert a.exact and b.exact
            assert (a.value, b.value) == (sep, span), (mods, A, n)
            assert is_separated(f, n, E, a.witness)
            assert is_spanning(f, n, E, b.witness)


def test_greedy_witnesses_and_brackets():
    G = FiniteAbelianGroup([9, 9])
    f = validate_endomorphism(G, [[2, 1], [1, 1]])
    E = Entourage.ball(G, 1)
    t = entropy_table(f, E, n_range=range(1, 5), exact_cap=0)
    for r in t.rows:
        assert is_separated(f, r.n, E, t.sep_witness[r.n])
        assert is_spanning(f, r.n, E, t.span_witness[r.n])
    assert [r.sep for r in t.rows] == sorted(r.sep for r in t.rows)
    assert [r.span for r in t.rows] == sorted(r.span for r in t.rows)
    # bracketing against exact values on a subset small enough for branch and bound
    K = np.arange(0, G.order, 4)[:20]
    for n in (1, 2):
        g_sep = max_separated(f, n, E, K, exact_cap=0).value
        g_span = min_spanning(f, n, E, K, exact_cap=0).value
        x_sep = max_separated(f, n, E, K).value
        x_span = min_spanning(f, n, E, K).value
        assert g_sep <= x_sep and x_span <= g_span
        assert x_span <= x_sep
        assert max_separated(f, n, entourage_product(E, E), K).value <= x_span


def test_counts_antitone_in_entourage():
    G = FiniteAbelianGroup([15])
    f = validate_endomorphism(G, [[2]])
    for n in (1, 2, 3):
        seps = [max_separated(f, n, Entourage.ball(G, r)).value for r in range(4)]
        assert seps == sorted(seps, reverse=True)


def test_bowen_set():
    G = FiniteAbelianGroup([16])
    d = validate_endomorphism(G, [[2]])
    assert bowen_set(d, 1, Entourage.ball(G, 4)).tolist() == [0, 1, 2, 3, 4, 12, 13, 14, 15]
    assert bowen_set(d, 2, Entourage.ball(G, 4)).tolist() == [0, 1, 2, 14, 15]
    with pytest.raises(ValidationError):
        bowen_set(d, 0, Entourage.ball(G, 1))


def test_estimate_identity_is_zero():
    G = FiniteAbelianGroup([200])
    est = entropy_estimate(identity_map(G), Entourage.ball(G, 2), n_range=range(1, 7))
    assert est.slope == 0.0
    assert est.saturation is None


def test_estimate_saturation_error():
    G = FiniteAbelianGroup([64])
    with pytest.raises(EntropyError, match="finer entourage"):
        entropy_estimate(validate_endomorphism(G, [[2]]), Entourage.ball(G, 1), n_range=range(1, 7))


def test_estimate_doubling_coarse():
    G = FiniteAbelianGroup([2187])
    est = entropy_estimate(validate_endomorphism(G, [[2]]), Entourage.ball(G, 128), n_range=range(1, 7))
    assert abs(est.slope - np.log(2)) / np.log(2) < 0.15
    assert est.window == (1, 6)


def test_restricted_examples():
    G = FiniteAbelianGroup([300])
    f = validate_endomorphism(G, [[7]])
    E = Entourage.ball(G, 20)
    ns = range(1, 5)
    full = entropy_estimate(f, E, n_range=ns)
    assert restricted_entropy(f, E, np.arange(300), ns).slope == full.slope
    assert restricted_entropy(f, E, [0], ns).slope == 0.0
    with pytest.raises(ValidationError, match="forward invariant"):
        restricted_entropy(f, E, [0, 1], ns)


def test_addition_examples():
    G = FiniteAbelianGroup([300])
    f = validate_endomorphism(G, [[7]])
    E = Entourage.ball(G, 20)
    ns = range(1, 5)
    triv = addition_report(f, subgroup_closure(G, []), E, ns)
    assert triv.quotient.slope == triv.total.slope
    assert triv.margin == 0.0
    full = addition_report(f, subgroup_closure(G, [1]), E, ns)
    assert full.quotient.slope == 0.0
    assert full.margin == 0.0
    with pytest.raises(ValidationError):
        addition_report(validate_endomorphism(FiniteAbelianGroup([4, 2]), [[1, 2], [1, 1]]),
                        subgroup_closure(FiniteAbelianGroup([4, 2]), [(0, 1)]), Entourage.ball(FiniteAbelianGroup([4, 2]), 1), ns)


def test_csv_columns():
    G = FiniteAbelianGroup([30])
    t = entropy_table(validate_endomorphism(G, [[2]]), Entourage.ball(G, 2), n_range=range(1, 3))
    assert t.csv().splitlines()[0] == "n,sep,sep_exact,span,span_exact"
