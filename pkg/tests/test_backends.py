import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from recgroup import kernels
from recgroup.endo import validate_endomorphism
from recgroup.entropy import max_separated, min_spanning, is_separated, is_spanning
from recgroup.group import FiniteAbelianGroup
from recgroup.recurrence import build_chain_graph, chain_component_identity, chain_recurrent_set
from recgroup.shadowing import check_pseudo_orbit, decide_shadowing, shadow_set
from recgroup.uniformity import Entourage, entourage_product


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    prev = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_backends_agree(backend):
    rng = np.random.default_rng(21)
    for _ in range(20):
        mods = oracles.random_moduli(rng, 300)
        s = oracles.Sys(mods, oracles.random_matrix(rng, mods))
        G = FiniteAbelianGroup(mods)
        f = validate_endomorphism(G, s.matrix)
        r = int(rng.integers(0, 3))
        E = Entourage.ball(G, r)
        Eo = s.ball(r)
        assert chain_recurrent_set(f, E).tolist() == oracles.cr(s, Eo)
        assert chain_component_identity(f, E).tolist() == oracles.cc(s, Eo)
        g = build_chain_graph(f, E)
        assert g.successor_table().shape == (G.order, len(E))
        K = np.arange(min(G.order, 60))
        a = max_separated(f, 2, E, K, exact_cap=0)
        b = min_spanning(f, 2, E, K, exact_cap=0)
        assert is_separated(f, 2, E, a.witness) and is_spanning(f, 2, E, b.witness, K)


# -- property tests ------------------------------------------------------------------

@st.composite
def systems(draw, max_order=60):
    mods = draw(st.lists(st.integers(1, 12), min_size=1, max_size=2).filter(lambda m: np.prod(m) <= max_order))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    A = oracles.random_matrix(rng, mods)
    G = FiniteAbelianGroup(mods)
    return G, validate_endomorphism(G, A)


@settings(max_examples=60, deadline=None)
@given(systems(), st.integers(0, 2), st.integers(0, 2))
def test_cr_monotone_and_contains_periodic(sys_, r1, r2):
    G, f = sys_
    lo, hi = sorted((r1, r2))
    small = set(chain_recurrent_set(f, Entourage.ball(G, lo)).tolist())
    big = set(chain_recurrent_set(f, Entourage.ball(G, hi)).tolist())
    assert small <= big
    cc = set(chain_component_identity(f, Entourage.ball(G, lo)).tolist())
    assert 0 in cc and cc <= small


@settings(max_examples=40, deadline=None)
@given(systems(max_order=30), st.integers(0, 1), st.integers(0, 2), st.data())
def test_shadowing_counterexample_or_random_orbits_shadowed(sys_, dr, er, data):
    G, f = sys_
    D, E = Entourage.ball(G, dr), Entourage.ball(G, er)
    v = decide_shadowing(f, D, E)
    if not v.holds:
        assert check_pseudo_orbit(v.counterexample.points, f, D)
        assert not shadow_set(v.counterexample, f, E).shadowed
    else:
        seq = [data.draw(st.integers(0, G.order - 1))]
        for _ in range(data.draw(st.integers(0, 10))):
            seq.append(int(G.sub(f.table[seq[-1]], D.members[data.draw(st.integers(0, len(D) - 1))])))
        assert shadow_set(seq, f, E).shadowed


@settings(max_examples=40, deadline=None)
@given(systems(max_order=24), st.integers(1, 3), st.integers(0, 2))
def test_span_sep_bracket(sys_, n, r):
    G, f = sys_
    E = Entourage.ball(G, r)
    span = min_spanning(f, n, E).value
    assert span <= max_separated(f, n, E).value
    assert max_separated(f, n, entourage_product(E, E)).value <= span
