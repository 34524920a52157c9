import csv
import itertools

import numpy as np
import pytest

from helpers import random_allocation
from ccifc import dmc, region
from ccifc.baselines import hk_region
from ccifc.rate_terms import terms_classical, terms_lookahead
from ccifc.region import (DIRECTIONS, EmptyRegion, Frontier, GridSpec, SplitRatePolytope,
                          allocation_grid, convex_closure, corollary_bounds, corollary_region,
                          lp_project, lp_project_many, read_frontier_csv, region_dominates,
                          sweep_frontier)
from ccifc.scenario import Strategy

SMALL = GridSpec(fraction_points=3, relay_beta_points=3, relay_h_points=2)


def _arr(I):
    a = np.zeros(22)
    a[1:] = I
    return a


def _agree(I, n=25):
    reg = corollary_region(I)
    span = max(reg.max_r1(), reg.max_r2(), 1e-3) if reg.feasible else 1.0
    span = 1.2 * span if np.isfinite(span) else 2.0
    g = np.linspace(0, span, n)
    pts = np.stack(np.meshgrid(g, g, indexing="ij"), -1).reshape(-1, 2)
    lp = lp_project_many(I, pts)
    for (x, y), l in zip(pts, lp):
        if reg.contains(x, y) != bool(l) and abs(reg.margin(x, y)) > 1e-9:
            return False
    return True


def test_all_zero_terms_give_origin_only():
    I = np.zeros(22)
    reg = corollary_region(I)
    assert reg.feasible
    assert reg.contains(0, 0)
    assert not reg.contains(1e-6, 0)
    assert lp_project(I, query=(0, 0))
    np.testing.assert_allclose(reg.vertices(), [[0.0, 0.0]])


def test_symmetric_terms_hand_evaluated():
    M = 1.0
    I = _arr([0, 0, 0] + [M] * 18)
    reg = corollary_region(I)
    # R1 family: min(min(3M, M) - 0, M + min(2M, M)) = M
    assert reg.bounds[0] == pytest.approx(M)
    assert all(np.isfinite(reg.bounds))
    assert reg.max_r1() == pytest.approx(M)
    assert _agree(I)


def test_infinite_terms_drop_constraints():
    I = _arr([0, 0, 0] + [np.inf] * 18)
    I[4] = 0.5
    reg = corollary_region(I)
    assert reg.feasible
    assert _agree(I)


def test_corollary_equals_lp_on_realizable_terms():
    rng = np.random.default_rng(11)
    for _ in range(15):
        t = dmc.random_scheme_terms(rng)
        assert _agree(t.as_array())


def test_corollary_equals_lp_on_gaussian_terms(fig6, rng):
    for i in range(15):
        a = random_allocation(rng, sparse=i % 2 == 0)
        assert _agree(terms_classical(fig6, a).as_array())
        la = random_allocation(rng, "lookahead")
        assert _agree(terms_lookahead(fig6, la).as_array())


def test_side_conditions_alone_do_not_certify_nonemptiness():
    # frozen unstructured vector: I1 <= I16 and I2 <= I17 hold, yet the
    # split-rate system has no solution even at the origin
    I = np.zeros(22)
    I[1], I[2], I[3] = 0.3, 0.3, 0.6
    I[4:] = 1.0
    I[13] = 0.1
    b, side_ok, nonempty = corollary_bounds(I[None])
    assert side_ok[0] and not nonempty[0]
    assert not lp_project(I, query=(0, 0))
    assert not corollary_region(I).feasible
    assert _agree(I)


def test_lp_soundness_beyond_r1_bound(rng):
    t = dmc.random_scheme_terms(rng).as_array()
    reg = corollary_region(t)
    if reg.feasible:
        assert not lp_project(t, query=(reg.bounds[0] + 1e-3, 0.0))


def test_split_polytope_check():
    P = SplitRatePolytope()
    A, s = P.lhs()
    assert A.shape == (21, 8) and set(s) == {-1.0, 1.0}
    I = _arr([0.1, 0.1, 0.2] + [1.0] * 18)
    x = dict(R1cd=0, R1cn=0, R1pd=0, R1pn=0, R2c=0, R2p=0, L2c=0.1, L2p=0.1)
    assert P.check(I, x)
    x["L2c"] = 0.0
    assert not P.check(I, x)


def test_convex_closure_examples():
    fr = convex_closure([(1, 0), (0, 1)])
    assert fr.contains((0.5, 0.5))
    assert not fr.contains((0.5, 0.5 + 1e-9))
    single = convex_closure([(0.3, 0.7)])
    np.testing.assert_allclose(single.points, [[0, 0.7], [0.3, 0.7], [0.3, 0]])
    with pytest.raises(ValueError):
        convex_closure([])
    origin = convex_closure([(0, 0)])
    assert len(origin) == 1 and origin.max_r1 == 0


def _brute_hull(P):
    """Upper-right hull vertices by checking every pair of points."""
    P = np.vstack([P, [[0, P[:, 1].max()], [P[:, 0].max(), 0]]])
    keep = set()
    for i, j in itertools.combinations(range(len(P)), 2):
        a, b = P[i], P[j]
        d = b - a
        n = np.array([d[1], -d[0]])
        if n[0] < 0 or n[1] < 0:
            n = -n
        if n[0] < 0 or n[1] < 0 or not n.any():
            continue
        s = (P - a) @ n
        if np.all(s <= 1e-12):
            keep.update([i, j])
    V = P[sorted(keep)]
    # drop points strictly inside an edge (collinear)
    fr = Frontier(V[np.lexsort((-V[:, 1], V[:, 0]))])
    return fr


def test_convex_closure_matches_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(30):
        P = rng.uniform(0, 1, size=(rng.integers(3, 25), 2))
        fr = convex_closure(P)
        bf = _brute_hull(P)
        # same region: each vertex set lies in the other's region exactly
        assert region_dominates(fr, bf, 1e-12) and region_dominates(bf, fr, 1e-12)
        # interior vertices strictly monotone; the axis anchors may drop vertically
        dx, dy = np.diff(fr.points[:, 0]), np.diff(fr.points[:, 1])
        assert np.all(dx >= 0) and np.all(dy <= 0) and np.all((dx > 0) | (dy < 0))
        assert np.all(dx[1:-1] > 0) and np.all(dy[1:-1] < 0)
        for p in P:
            assert fr.contains(p, 1e-12)


def test_region_dominates_examples():
    a = convex_closure([(1, 0.2), (0.4, 0.9), (0.1, 1.0)])
    assert region_dominates(a, a, 0.0)
    big = Frontier(a.points * 1.1)
    assert region_dominates(big, a, 0.0)
    assert not region_dominates(a, big, 1e-6)
    assert region.domination_gap(big, a) == 0.0


def test_frontier_csv_roundtrip(tmp_path):
    fr = convex_closure([(1, 0.2), (0.4, 0.9)])
    fr.strategy, fr.scenario = "classical", "abc"
    p = tmp_path / "f.csv"
    fr.to_csv(p)
    with open(p) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["R1", "R2", "strategy", "scenario"]
    back = read_frontier_csv(p)
    np.testing.assert_allclose(back.points, fr.points, atol=1e-9)
    assert back.strategy == "classical"


def test_clip_r2():
    fr = convex_closure([(1, 0), (0, 1)]).clip_r2(0.25)
    assert fr.max_r2 == pytest.approx(0.25)
    assert fr.contains((0.75, 0.25), 1e-12)
    assert not fr.contains((0.1, 0.3), 1e-9)


def test_allocation_grid_counts():
    g = allocation_grid(Strategy.CLASSICAL, GridSpec())
    assert len(g["bp1"]) == 924 * 84
    s = sum(g[k] for k in ("bp1", "b1", "bp2", "b2", "b3", "b4"))
    assert s.max() <= 1 + 1e-12
    la = allocation_grid(Strategy.LOOKAHEAD, GridSpec())
    assert len(la["bp1"]) == 210 * 84 and not la["bp2"].any() and not la["b2"].any()
    m = allocation_grid(Strategy.CLASSICAL, GridSpec(), {"gamma3": 0})
    assert not m["g3"].any()
    with pytest.raises(ValueError):
        allocation_grid(Strategy.CLASSICAL, GridSpec(), {"nonsense": 0})
    with pytest.raises(ValueError):
        GridSpec(fraction_points=1)


def test_sweep_masked_equals_hk(fig6):
    masks = {"bp2": 0, "b2": 0, "b3": 0, "b4": 0, "g3": 0, "dpc": "zero"}
    a = sweep_frontier(fig6, Strategy.CLASSICAL, SMALL, masks=masks)
    b = hk_region(fig6, SMALL)
    np.testing.assert_array_equal(a.points, b.points)


def test_grid_refinement_never_shrinks(fig6):
    # 3 -> 5 points per axis: {0, 1/2, 1} is a subset of {0, 1/4, ..., 1}
    coarse = sweep_frontier(fig6, Strategy.LOOKAHEAD, GridSpec(fraction_points=3))
    fine = sweep_frontier(fig6, Strategy.LOOKAHEAD, GridSpec(fraction_points=5))
    assert region_dominates(fine, coarse, 1e-9)


def test_power_monotonicity(fig6):
    lo = sweep_frontier(fig6, Strategy.CLASSICAL, SMALL)
    hi = sweep_frontier(fig6.with_(P1=2 * fig6.P1, P2=2 * fig6.P2), Strategy.CLASSICAL,
                        GridSpec(fraction_points=5))
    assert region_dominates(hi, lo, 1e-9)


def test_sweep_is_thread_count_independent(fig6, monkeypatch):
    g = GridSpec(fraction_points=4, chunk=500)
    monkeypatch.setenv("CCIFC_THREADS", "1")
    a = sweep_frontier(fig6, Strategy.CLASSICAL, g)
    monkeypatch.setenv("CCIFC_THREADS", "3")
    b = sweep_frontier(fig6, Strategy.CLASSICAL, g)
    np.testing.assert_array_equal(a.points, b.points)


def test_zero_power_sweep_is_trivial(fig6):
    fr = sweep_frontier(fig6.with_(P1=0.0, P2=0.0), Strategy.CLASSICAL, SMALL)
    assert fr.max_r1 == 0 and fr.max_r2 == 0


def test_empty_grid_raises(fig6):
    with pytest.raises(EmptyRegion):
        sweep_frontier(fig6, Strategy.CLASSICAL, SMALL, masks={"b1": 0.9, "bp1": 0.9})


def test_frontier_metadata(fig6):
    fr = sweep_frontier(fig6, Strategy.NODELAY, SMALL)
    assert fr.strategy == "nodelay" and fr.scenario == fig6.key()
    assert fr.grid["fraction_points"] == 3
    assert fr.meta["nonempty"] <= fr.meta["allocations"]


def test_region_polytope_directions():
    assert len(DIRECTIONS) == 8
    reg = corollary_region(_arr([0, 0, 0] + [1.0] * 18))
    V = reg.vertices()
    for x, y in V:
        assert reg.contains(x, y, tol=1e-9)
