import numpy as np
import pytest

import oracles
from recgroup.endo import identity_map, is_automorphism, validate_endomorphism
from recgroup.errors import ResourceCapError, ValidationError
from recgroup.group import FiniteAbelianGroup, QuotientGroup, quotient_group, as_subgroup
from recgroup.endo import induced_quotient_map
from recgroup.recurrence import (
    SetKind,
    build_chain_graph,
    chain_component_identity,
    chain_recurrent_set,
    eventually_periodic,
    fixed_points,
    nonwandering_set,
    over_base,
    periodic_points,
    periodic_set,
    recurrence_report,
    verify_recurrent_subgroup,
)
from recgroup.uniformity import Entourage, EntourageBase, halving_base


def sys_(mods, A):
    G = FiniteAbelianGroup(mods)
    return G, validate_endomorphism(G, A)


def test_fixed_examples():
    G, f = sys_([8], [[3]])
    assert fixed_points(f).tolist() == [0, 4]
    assert fixed_points(identity_map(G)).tolist() == list(range(8))
    assert fixed_points(sys_([5], [[2]])[1]).tolist() == [0]


def test_periodic_examples():
    G, f = sys_([15], [[2]])
    assert periodic_points(f, 2).tolist() == [0, 5, 10]
    assert periodic_points(f, 1).tolist() == fixed_points(f).tolist()
    assert len(periodic_points(identity_map(G), 7)) == 15
    with pytest.raises(ValidationError):
        periodic_points(f, 0)


def test_eventually_periodic_examples():
    G, f = sys_([8], [[2]])
    assert eventually_periodic(f, 1).tolist() == list(range(8))
    G, a = sys_([9, 3], [[2, 3], [1, 1]])
    assert is_automorphism(a)
    for m in (1, 2, 3, 6):
        assert eventually_periodic(a, m).tolist() == periodic_points(a, m).tolist()
    assert len(eventually_periodic(identity_map(G), 1)) == G.order


def test_nonwandering_examples():
    G, f = sys_([5], [[2]])
    assert nonwandering_set(identity_map(G), Entourage.ball(G, 1)).tolist() == list(range(5))
    assert nonwandering_set(f, Entourage.identity(G)).tolist() == list(range(5))
    G, d = sys_([8], [[2]])
    assert nonwandering_set(d, Entourage.identity(G)).tolist() == [0]


def test_chain_graph_examples():
    G, d = sys_([8], [[2]])
    g = build_chain_graph(d, Entourage.ball(G, 1))
    assert g.successors(3).tolist() == [5, 6, 7]
    assert g.successor_table().shape == (8, 3)
    assert g.has_edge(3, 5) and not g.has_edge(3, 4)
    f1 = build_chain_graph(d, Entourage.identity(G)).successor_table()
    assert f1[:, 0].tolist() == d.table.tolist()
    with pytest.raises(ResourceCapError):
        build_chain_graph(d, Entourage.ball(G, 1), cap=10)


def test_chain_sets_examples():
    G, d = sys_([64], [[2]])
    E = Entourage.ball(G, 1)
    assert len(chain_recurrent_set(d, E)) == 64
    assert len(chain_component_identity(d, E)) == 64
    G, f = sys_([12], [[5]])
    assert chain_recurrent_set(f, Entourage.identity(G)).tolist() == periodic_set(f).tolist()
    assert len(chain_recurrent_set(identity_map(G), Entourage.ball(G, 2))) == 12
    assert chain_component_identity(identity_map(G), Entourage.identity(G)).tolist() == [0]


def test_over_base_examples():
    G, d = sys_([8], [[2]])
    base = EntourageBase([Entourage.ball(G, r) for r in (2, 1, 0)])
    res = over_base("cr", d, base)
    assert res.intersection.tolist() == periodic_set(d).tolist() == [0]
    assert len(res.levels) == 3
    single = EntourageBase([Entourage.ball(G, 1)])
    assert over_base("cc", d, single).intersection.tolist() == chain_component_identity(d, Entourage.ball(G, 1)).tolist()
    assert len(over_base("cr", identity_map(G), base).intersection) == 8
    with pytest.raises(ValidationError):
        over_base("xx", d, base)


def test_report_inclusions():
    G, f = sys_([12, 4], [[5, 3], [1, 1]])
    rep = recurrence_report(f, halving_base(G, 3), periods=(1, 2, 4))
    assert rep.inclusion_failures() == []
    assert rep.sets["CR"].tolist() == rep.sets["CR_E[2]"].tolist()


def test_quotient_space_matches_oracle():
    # chain sets on a quotient agree with a hand computation on G/H
    G, f = sys_([12], [[5]])
    H = as_subgroup(G, [0, 6])
    Q = quotient_group(G, H)
    ft = induced_quotient_map(f, H, Q)
    s = oracles.Sys([6], [[5]])  # Z_12/{0,6} = Z_6 with reps 0..5
    assert Q.reps.tolist() == list(range(6))
    for r in range(3):
        E = Entourage(Q, np.unique(Q.proj[Entourage.ball(G, r).members]))
        Eo = {s.elems[i] for i in E.members.tolist()}
        assert chain_recurrent_set(ft, E).tolist() == oracles.cr(s, Eo)
        assert chain_component_identity(ft, E).tolist() == oracles.cc(s, Eo)
        assert nonwandering_set(ft, E).tolist() == oracles.omega(s, Eo)


def test_verify_examples():
    G, f = sys_([8], [[3]])
    phi = validate_endomorphism(G, [[5]])
    v = verify_recurrent_subgroup(fixed_points(f), f, SetKind("fix"), phi=phi)
    for ax in ("R1", "R2", "R4"):
        assert v.axioms[ax].status == "pass"
    assert v.axioms["R3"].status == "trivial"
    # R5 fails here: f~ = 3x on Z_8/{0,4} fixes the coset {2,6} as well
    assert v.axioms["R5"].status == "fail"
    assert v.violations == ["R5"]

    v = verify_recurrent_subgroup(np.arange(8), f)
    assert v.axioms["R1"].status == "pass" and v.axioms["R2"].status == "pass"

    G5, d5 = sys_([5], [[2]])
    v = verify_recurrent_subgroup([1], d5)
    assert v.axioms["R1"].status == "fail"
    assert v.axioms["R5"].status == "not applicable"
    with pytest.raises(ValidationError):
        verify_recurrent_subgroup(np.array([9]), d5)


def test_verify_graded_chain_sets():
    G, f = sys_([16, 4], [[3, 4], [1, 1]])
    for name in ("cr", "cc"):
        kind = SetKind(name, entourage=Entourage.ball(G, 2))
        v = verify_recurrent_subgroup(kind.compute(f), f, kind, phi=validate_endomorphism(G, [[5, 0], [0, 3]]))
        assert v.axioms["R1"].status == "pass", v.axioms["R1"].detail
        assert v.axioms["R2"].status == "pass"
        assert v.axioms["R4"].status == "pass"


def test_verify_cc_base_automorphism_quotient():
    G, f = sys_([13, 13], [[2, 1], [1, 1]])
    kind = SetKind("cc-base", base=halving_base(G, 2))
    v = verify_recurrent_subgroup(kind.compute(f), f, kind)
    assert v.axioms["R5"].status == "pass"


def test_automorphism_cc_forward_invariant():
    G, f = sys_([9, 9], [[2, 1], [1, 1]])
    assert is_automorphism(f)
    cc = over_base("cc", f, halving_base(G, 4)).intersection
    assert np.unique(f.table[cc]).tolist() == cc.tolist()


def test_setkind_requirements():
    with pytest.raises(ValidationError):
        SetKind("per")
    with pytest.raises(ValidationError):
        SetKind("cr")
    with pytest.raises(ValidationError):
        SetKind("nope")
