import json

import numpy as np
import pytest

from ccifc import dmc
from ccifc.dmc import (ChannelError, ConditionRefused, DistGrid, FiniteChannel, InputFamily, JointPmf,
                       binary_fixture, capacity_degraded, capacity_degraded_cor, capacity_semidet,
                       capacity_values, check_conditions, degraded_assignment, entropy,
                       mutual_information, scheme_terms, semidet_fixture, useless_channel)
from ccifc.region import region_dominates

COARSE = DistGrid(atom_q=3, weight_q=4)


def h2(p):
    return 0.0 if p in (0, 1) else -p * np.log2(p) - (1 - p) * np.log2(1 - p)


def direct_cmi(p, a, b, c):
    """I(A;B|C) by summing p log p(abc)p(c) / (p(ac)p(bc)) over the support."""
    axes = range(p.ndim)
    keep = lambda g: p.sum(axis=tuple(i for i in axes if i not in g), keepdims=True)
    pabc, pac, pbc, pc = keep(a | b | c), keep(a | c), keep(b | c), keep(c)
    pabc = np.broadcast_to(pabc, p.shape)
    m = pabc > 0
    num = np.broadcast_to(pabc * pc, p.shape)[m]
    den = np.broadcast_to(pac * pbc, p.shape)[m]
    # weighting by the full joint sums each (a, b, c) cell with its total mass
    w = p[m]
    ratio = np.log2(num / den)
    return float(np.sum(w * ratio))


def test_mi_examples():
    u = np.full((2, 2), 0.25)
    assert mutual_information(JointPmf(u, ("a", "b")), ["a"], ["b"]) == pytest.approx(0.0, abs=1e-15)
    same = JointPmf(np.eye(2) / 2, ("a", "b"))
    assert mutual_information(same, ["a"], ["b"]) == pytest.approx(1.0)
    eps = 0.11
    bsc = JointPmf(np.array([[1 - eps, eps], [eps, 1 - eps]]) / 2, ("x", "y"))
    assert mutual_information(bsc, ["x"], ["y"]) == pytest.approx(1 - h2(eps), abs=1e-14)
    assert entropy(bsc, ["x"], ["y"]) == pytest.approx(h2(eps), abs=1e-14)
    # zero-probability cells contribute nothing
    z = JointPmf(np.array([[0.5, 0.0], [0.0, 0.5]]), ("x", "y"))
    assert entropy(z, ["x", "y"]) == pytest.approx(1.0)


def test_mi_matches_direct_summation():
    rng = np.random.default_rng(8)
    names = ("a", "b", "c", "d")
    worst = 0.0
    for _ in range(50):
        shape = tuple(rng.integers(1, 4, size=4))
        p = rng.dirichlet(np.full(int(np.prod(shape)), 0.4)).reshape(shape)
        p[p < 0.02] = 0.0
        p /= p.sum()
        J = JointPmf(p, names)
        for A, B, C in (({0}, {1}, set()), ({0}, {1, 2}, {3}), ({0, 3}, {2}, {1})):
            got = mutual_information(J, [names[i] for i in A], [names[i] for i in B],
                                     [names[i] for i in C])
            worst = max(worst, abs(got - direct_cmi(p, A, B, C)))
    assert worst < 1e-10


def test_mi_chain_rule_and_batching():
    rng = np.random.default_rng(9)
    p = rng.dirichlet(np.ones(24), size=5).reshape(5, 2, 3, 4)
    J = JointPmf(p, ("x", "y", "z"))
    lhs = mutual_information(J, ["x"], ["y", "z"])
    rhs = mutual_information(J, ["x"], ["y"]) + mutual_information(J, ["x"], ["z"], ["y"])
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)
    for i in range(5):
        single = JointPmf(p[i], ("x", "y", "z"))
        assert mutual_information(single, ["x"], ["z"], ["y"]) == pytest.approx(
            mutual_information(J, ["x"], ["z"], ["y"])[i], abs=1e-14)


def test_joint_validation():
    with pytest.raises(ValueError):
        JointPmf(np.full((2, 2), 0.3), ("a", "b"))
    with pytest.raises(ValueError):
        JointPmf(np.full((2, 2), 0.25), ("a", "a"))
    with pytest.raises(ValueError):
        mutual_information(JointPmf(np.full((2, 2), 0.25), ("a", "b")), ["a"], ["q"])


def test_fixture_conditions():
    r = check_conditions(binary_fixture())
    assert r.degraded and not r.semidet
    assert r.strong_rx1 and r.strong_rx2 and r.strong_sum
    s = check_conditions(semidet_fixture())
    assert s.semidet and s.degraded and s.semidet_extra
    n = check_conditions(binary_fixture(degraded=False))
    assert not n.degraded
    d = r.to_dict()
    assert "no counterexample" in d["note"] and d["samples"] == r.samples


def _weak_rx4_channel():
    W = binary_fixture().W.sum(axis=4, keepdims=True)
    return FiniteChannel(np.concatenate([W, W], axis=4) / 2)      # Y4 carries nothing


def test_refusals():
    with pytest.raises(ConditionRefused, match="degradedness fails"):
        capacity_degraded(binary_fixture(degraded=False), tmax=1, grid=COARSE)
    with pytest.raises(ConditionRefused, match="semi-determinism fails"):
        capacity_semidet(binary_fixture(), tmax=1, grid=COARSE)
    ch = _weak_rx4_channel()
    r = check_conditions(ch)
    assert not r.strong_rx2 and "strong_rx2" in r.witnesses
    with pytest.raises(ConditionRefused, match="receiver 4 fails"):
        capacity_degraded(ch, tmax=1, grid=COARSE, report=r)


def test_channel_json_roundtrip(tmp_path):
    ch = binary_fixture()
    text = ch.to_json()
    d = json.loads(text)
    assert d["sizes"] == {"X1": 2, "X2": 2, "Y2": 2, "Y3": 2, "Y4": 2}
    assert len(d["transition"]) == 32
    # flat order is row-major over (x1, x2, y2, y3, y4)
    i = np.ravel_multi_index((1, 0, 1, 1, 0), (2,) * 5)
    assert d["transition"][i] == ch.W[1, 0, 1, 1, 0]
    p = tmp_path / "c.json"
    p.write_text(text)
    np.testing.assert_array_equal(dmc.load_channel(p).W, ch.W)


def test_channel_validation():
    with pytest.raises(ChannelError, match="sum to 1"):
        FiniteChannel(np.full((2,) * 5, 0.5))
    with pytest.raises(ChannelError, match="5 axes"):
        FiniteChannel(np.ones((2, 2)))
    with pytest.raises(ChannelError, match="entries"):
        FiniteChannel.from_json(json.dumps({"sizes": dict(X1=2, X2=2, Y2=2, Y3=2, Y4=2),
                                            "transition": [1.0]}))
    with pytest.raises(ChannelError, match="malformed"):
        FiniteChannel.from_json("{}")
    sizes = dict(X1=1, X2=1, Y2=1, Y3=1, Y4=2)
    with pytest.raises(ChannelError, match="integers"):
        FiniteChannel.from_json(json.dumps({"sizes": dict(sizes, Y4=2.0), "transition": [0.5, 0.5]}))
    with pytest.raises(ChannelError, match="flat array"):
        FiniteChannel.from_json(json.dumps({"sizes": sizes, "transition": [[0.5, 0.5]]}))
    ok = FiniteChannel.from_json(json.dumps({"sizes": sizes, "transition": [0, 1], "note": "x"}))
    assert ok.W.shape == (1, 1, 1, 1, 2)


def test_useless_channel_gives_origin():
    fr = capacity_degraded(useless_channel(), tmax=2, grid=COARSE)
    assert fr.max_r1 == pytest.approx(0.0, abs=1e-12) and fr.max_r2 == pytest.approx(0.0, abs=1e-12)


def test_fast_path_matches_generic_path():
    ch = binary_fixture()
    tab = dmc._AtomTable(ch, COARSE)
    a1, a2 = dmc._atoms(ch, COARSE)
    worst = 0.0
    for idx, w in dmc.iter_family_indices(ch, 3, COARSE):
        fast = tab.values(idx, w)
        slow = capacity_values(ch, InputFamily(w, a1[idx], a2[idx]))
        worst = max(worst, max(np.max(np.abs(fast[k] - slow[k])) for k in fast))
    assert worst < 1e-12


def test_family_enumeration_is_nested_and_counted():
    ch = binary_fixture()
    seen = {}
    for tmax in (1, 2, 3):
        fams = set()
        for idx, w in dmc.iter_family_indices(ch, tmax, COARSE):
            fams.update((tuple(i), tuple(x)) for i, x in zip(idx, w))
        assert len(fams) == dmc.family_count(ch, tmax, COARSE)
        if tmax > 1:
            assert seen[tmax - 1] <= fams
        seen[tmax] = fams
    with pytest.raises(ValueError, match="exceed"):
        list(dmc.iter_family_indices(ch, 4, DistGrid(max_families=10)))


def test_capacity_monotone_in_time_sharing_cardinality():
    ch = binary_fixture()
    prev = None
    for t in (1, 2, 3):
        fr = capacity_degraded(ch, tmax=t, grid=COARSE)
        if prev is not None:
            assert region_dominates(fr, prev, 1e-12)
        prev = fr


def test_degraded_variants_compare():
    ch = binary_fixture()
    full = capacity_degraded(ch, tmax=2, grid=COARSE)
    cor = capacity_degraded_cor(ch, tmax=2, grid=COARSE)
    # dropping a sum bound can only enlarge the region
    assert region_dominates(cor, full, 1e-12)
    # with Y2 = X1 the two first-rate expressions coincide
    sd = semidet_fixture()
    a = capacity_degraded(sd, tmax=2, grid=COARSE)
    b = capacity_semidet(sd, tmax=2, grid=COARSE)
    np.testing.assert_allclose(a.points, b.points, atol=1e-12)


def test_scheme_terms_specialize_to_degraded_formula():
    ch = binary_fixture()
    worst = 0.0
    a1, a2 = dmc._atoms(ch, COARSE)
    for idx, w in dmc.iter_family_indices(ch, 2, COARSE):
        fam = InputFamily(w, a1[idx], a2[idx])
        T = scheme_terms(fam.joint(ch), degraded_assignment())
        v = capacity_values(ch, fam)
        worst = max(worst, np.max(np.abs(T[:, 21] - v["r1_degraded"])),
                    np.max(np.abs(T[:, 13] - v["r2"])),
                    np.max(np.abs(np.minimum(T[:, 5], T[:, 15])
                                  - np.minimum(v["sum3"], v["sum4"]))))
    assert worst < 1e-10


def test_scheme_terms_nonnegative_and_consistent():
    rng = np.random.default_rng(4)
    for _ in range(5):
        J = dmc.random_scheme_joint(rng)
        t = scheme_terms(J)
        a = t.as_array()
        assert np.all(a >= 0)
        # the binning cost is part of I3
        assert t.I3prime <= t[3] + 1e-12
