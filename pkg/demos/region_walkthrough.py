"""Sweep the three strategies and the two baselines on one scenario and compare them."""
from ccifc.baselines import hk_region, mimo_bc_outer
from ccifc.region import GridSpec, domination_gap, sweep_frontier
from ccifc.scenario import Strategy, figure_preset

scen = figure_preset("fig7").scenario.with_(h21=4.0)
grid = GridSpec(fraction_points=5, relay_beta_points=5)

curves = {st.value: sweep_frontier(scen, st, grid) for st in Strategy}
curves["hk"] = hk_region(scen, grid)
curves["outer"] = mimo_bc_outer(scen)

for name, fr in curves.items():
    print(f"{name:>10}: {len(fr):3d} vertices, max R1 {fr.max_r1:.4f}, max R2 {fr.max_r2:.4f}")

print()
for name in ("classical", "nodelay", "lookahead"):
    print(f"{name:>10} vs hk: gap {domination_gap(curves[name], curves['hk']):.2e}, "
          f"outer vs {name}: gap {domination_gap(curves['outer'], curves[name]):.2e}")
