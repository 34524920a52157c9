"""Condition report and capacity frontiers of the binary test channel."""
from ccifc import dmc

ch = dmc.binary_fixture()
rep = dmc.check_conditions(ch)
for k, label in dmc.ConditionReport.LABELS.items():
    print(f"{label:>36}: {getattr(rep, k)}")

for tmax in (1, 2, 3):
    fr = dmc.capacity_degraded(ch, tmax=tmax, report=rep)
    print(f"tmax={tmax}: " + " ".join(f"({x:.4f}, {y:.4f})" for x, y in fr.points))

try:
    dmc.capacity_degraded(dmc.binary_fixture(degraded=False), tmax=1)
except dmc.ConditionRefused as e:
    print("refused:", e)
