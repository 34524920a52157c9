"""Command-line entry point: region sweeps, figure bundles, oracle runs and finite-channel tasks.

Exit codes: 0 success, 2 invalid configuration, 3 empty region,
4 failed dominance claim, 5 oracle disagreement, 6 channel outside the
class required by a capacity formula.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import baselines, dmc, region
from .rate_terms import RateTerms
from .region import EmptyRegion, GridSpec, read_frontier_csv, region_dominates
from .scenario import (PRESETS, DpcMode, ScenarioError, Strategy, figure_preset, load_scenario)

EXIT_OK, EXIT_CONFIG, EXIT_EMPTY, EXIT_DOMINANCE, EXIT_ORACLE, EXIT_REFUSED = 0, 2, 3, 4, 5, 6
STRATEGIES = ("classical", "nodelay", "lookahead", "hk", "outer")
ORACLE_TOL = 1e-9
HK_TOL = 1e-6
NEST_TOL = 1e-9
# rates are exported with 9 significant digits, i.e. up to 5e-9 rounding per
# coordinate in [1, 10); claims re-derived from files get this allowance
CSV_QUANT = 1e-8

PLOT_STUB = '''"""Plot every frontier CSV in this directory (needs matplotlib)."""
import csv
import glob
import os

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
for path in sorted(glob.glob(os.path.join(here, "*.csv"))):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    plt.plot([float(r["R1"]) for r in rows], [float(r["R2"]) for r in rows],
             label=os.path.basename(path)[:-4])
plt.xlabel("R1 [bits/use]")
plt.ylabel("R2 [bits/use]")
plt.legend()
plt.savefig(os.path.join(here, "frontiers.png"), dpi=150)
'''


class ConfigError(Exception):
    pass


# ------------------------------------------------------------- parsing

def _mask(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"mask must look like key=value, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def parse_dpc(text):
    """``paper``, ``zero`` or ``manual:a1,a2``; returns ``(mode, manual_pair)``."""
    if text.startswith("manual:"):
        try:
            a1, a2 = (float(x) for x in text[len("manual:"):].split(","))
        except ValueError:
            raise ConfigError(f"bad manual coefficients in {text!r}") from None
        if not (math.isfinite(a1) and math.isfinite(a2)):
            raise ConfigError("manual coefficients must be finite")
        return DpcMode.MANUAL, (a1, a2)
    try:
        mode = DpcMode(text)
    except ValueError:
        raise ConfigError(f"unknown dpc mode {text!r}") from None
    if mode is DpcMode.MANUAL:
        raise ConfigError("manual mode needs coefficients: manual:a1,a2")
    return mode, None


def _common(p):
    p.add_argument("--config", help="JSON file with flag defaults (flags take precedence)")
    p.add_argument("--out", default="ccifc_out", help="output directory")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    ap = argparse.ArgumentParser(prog="ccifc", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"ccifc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("region", help="sweep one frontier")
    _common(r)
    src = r.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--scenario", help="scenario JSON file")
    r.add_argument("--strategy", default="classical", choices=STRATEGIES)
    r.add_argument("--grid", type=int, default=None, help="points per power fraction")
    r.add_argument("--dpc", default="paper")
    r.add_argument("--mask", type=_mask, action="append", default=None, help="k=v, repeatable")
    r.add_argument("--h21", type=float)
    r.add_argument("--n2", type=float)
    r.add_argument("--cap-with-gain", action="store_true", default=None)

    f = sub.add_parser("figure", help="all curves of a preset plus a dominance report")
    _common(f)
    f.add_argument("name")
    f.add_argument("--grid", type=int, default=None)
    f.add_argument("--cap-with-gain", action="store_true", default=None)

    o = sub.add_parser("oracle", help="closed-form region vs. linear feasibility")
    _common(o)
    o.add_argument("--trials", type=int, default=100)
    o.add_argument("--points", type=int, default=50, help="membership grid per axis")

    d = sub.add_parser("dmc", help="finite-alphabet condition checks and capacity frontiers")
    _common(d)
    d.add_argument("channel", help="channel JSON file")
    d.add_argument("--capacity", choices=sorted(dmc.CAPACITY))
    d.add_argument("--check-only", action="store_true", default=None)
    d.add_argument("--tmax", type=int, default=None)
    d.add_argument("--samples", type=int, default=None)
    d.add_argument("--atom-q", type=int, default=None)
    return ap


def _explicit_parser():
    """Parser whose namespace holds only the options actually typed."""
    ap = build_parser()
    for act in ap._actions:
        if isinstance(act, argparse._SubParsersAction):
            for sp in act.choices.values():
                for a in sp._actions:
                    if a.dest not in ("help",) and not a.required and a.option_strings:
                        a.default = argparse.SUPPRESS
    return ap


def parse_args(argv):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        unknown = sorted(set(cfg) - set(vars(args)))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        given = set(vars(_explicit_parser().parse_args(argv)))
        for k, v in cfg.items():
            if k == "mask" and isinstance(v, dict):
                v = list(v.items())
            if k not in given:
                setattr(args, k, v)
    return args


# ------------------------------------------------------------- outputs

def _manifest(out, command, argv, payload, t0):
    m = {"command": command, "argv": list(argv), "tool_version": __version__}
    m.update(payload)
    m["created"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    m["wall_clock_s"] = round(time.perf_counter() - t0, 3)
    path = os.path.join(out, "manifest.json")
    with open(path, "w") as fh:
        json.dump(m, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    return path


def _write_stub(out):
    with open(os.path.join(out, "plot_frontiers.py"), "w") as fh:
        fh.write(PLOT_STUB)


def _export(fr, path):
    extra = {"bound_type": fr.meta["bound_type"]} if "bound_type" in fr.meta else None
    fr.to_csv(path, extra)
    return path


def _is_trivial(fr):
    return fr.max_r1 <= 0 and fr.max_r2 <= 0


# ------------------------------------------------------------- sweeps

def compute_curve(scen, strategy, grid, mode=DpcMode.PAPER, manual=None, masks=None, cap_with_gain=False):
    if strategy == "hk":
        return baselines.hk_region(scen, grid, masks)
    if strategy == "outer":
        return baselines.mimo_bc_outer(scen, grid, with_gain=cap_with_gain)
    return region.sweep_frontier(scen, Strategy(strategy), grid, dpc=mode, masks=masks, manual=manual)


def _scenario_from_args(args):
    if args.scenario:
        scen = load_scenario(args.scenario)
    else:
        scen = figure_preset(args.preset or "fig6").scenario
    kw = {}
    if args.h21 is not None:
        kw["h21"] = args.h21
    if args.n2 is not None:
        kw["N2"] = args.n2
    return scen.with_(**kw) if kw else scen


def _grid(args):
    n = args.grid
    if n is None:
        return GridSpec()
    return GridSpec(fraction_points=n, relay_beta_points=max(2, n))


def cmd_region(args, argv):
    t0 = time.perf_counter()
    scen = _scenario_from_args(args)
    mode, manual = parse_dpc(args.dpc)
    masks = dict(args.mask or [])
    region.normalize_masks(masks)
    grid = _grid(args)
    try:
        fr = compute_curve(scen, args.strategy, grid, mode, manual, masks, bool(args.cap_with_gain))
    except EmptyRegion as e:
        print(f"empty region: {e}", file=sys.stderr)
        return EXIT_EMPTY
    os.makedirs(args.out, exist_ok=True)
    path = _export(fr, os.path.join(args.out, f"{args.strategy}.csv"))
    _write_stub(args.out)
    _manifest(args.out, "region", argv, {
        "scenario": scen.to_dict(), "scenario_key": scen.key(), "strategies": [args.strategy],
        "grid": grid.to_dict(), "dpc": args.dpc, "masks": masks, "outputs": [path], "seed": args.seed,
        "meta": fr.meta}, t0)
    if _is_trivial(fr):
        print("region is the single point (0, 0)", file=sys.stderr)
        return EXIT_EMPTY
    print(f"wrote {path} ({len(fr)} vertices, max R1 {fr.max_r1:.6g}, max R2 {fr.max_r2:.6g})")
    return EXIT_OK


def _curve_name(scen, preset, strategy, mask_label=None):
    parts = []
    if len(preset.h21_values) > 1:
        parts.append(f"h21={scen.h21:g}")
    if len(preset.n2_values) > 1:
        parts.append(f"N2={scen.N2:g}")
    if mask_label:
        parts.append(mask_label)
    parts.append(strategy)
    return "_".join(parts)


def figure_plan(preset):
    """List of ``(file stem, scenario, strategy, masks, claims_group)`` for a preset."""
    plan = []
    for scen in preset.scenarios():
        masks = preset.masks or (("", {}),)
        for label, m in masks:
            for st in preset.strategies:
                plan.append((_curve_name(scen, preset, st.value, label), scen, st.value, m))
        plan.append((_curve_name(scen, preset, "hk"), scen, "hk", {}))
        if preset.outer_bound:
            plan.append((_curve_name(scen, preset, "outer"), scen, "outer", {}))
    return plan


def figure_claims(preset, stems):
    """Dominance claims ``(container, contained, tol, exact_equal)`` on file stems."""
    claims = []
    for scen in preset.scenarios():
        hk = _curve_name(scen, preset, "hk")
        labels = [lbl for lbl, _ in preset.masks] or [""]
        for lbl in labels:
            if lbl == labels[0]:
                # ablated curves keep the fixed binning rule and need not contain HK
                for st in preset.strategies:
                    claims.append((_curve_name(scen, preset, st.value, lbl), hk, HK_TOL, False))
            cl = _curve_name(scen, preset, "classical", lbl)
            nd = _curve_name(scen, preset, "nodelay", lbl)
            if cl in stems and nd in stems:
                claims.append((nd, cl, NEST_TOL, False))
        if preset.masks:
            for lbl, m in preset.masks[1:]:
                if "dpc" in m:
                    continue          # a different binning rule is not a restriction
                for st in preset.strategies:
                    claims.append((_curve_name(scen, preset, st.value, preset.masks[0][0]),
                                   _curve_name(scen, preset, st.value, lbl), NEST_TOL, False))
        if preset.outer_bound:
            outer = _curve_name(scen, preset, "outer")
            for st in preset.strategies:
                claims.append((outer, _curve_name(scen, preset, st.value), HK_TOL, False))
            claims.append((outer, hk, HK_TOL, False))
    if len(preset.n2_values) > 1:
        scens = preset.scenarios()          # N2 in the listed (decreasing) order
        for st in preset.strategies:
            names = [_curve_name(s, preset, st.value) for s in scens]
            for a, b in zip(names[1:], names[:-1]):
                claims.append((a, b, NEST_TOL, False))
        hks = [_curve_name(s, preset, "hk") for s in scens]
        for a in hks[1:]:
            claims.append((a, hks[0], 0.0, True))
    return [c for c in claims if c[0] in stems and c[1] in stems]


def dominance_report(out, claims):
    """Re-read the CSVs and evaluate every claim; returns ``(lines, all_pass)``."""
    cache = {}

    def load(stem):
        if stem not in cache:
            cache[stem] = read_frontier_csv(os.path.join(out, stem + ".csv"))
        return cache[stem]

    lines, ok = [], True
    for a, b, tol, exact in claims:
        A, B = load(a), load(b)
        if exact:
            good = A.points.shape == B.points.shape and np.array_equal(A.points, B.points)
            what = f"{a} == {b}"
        else:
            good = region_dominates(A, B, tol + CSV_QUANT)
            gap = region.domination_gap(A, B)
            what = f"{a} contains {b} (tol {tol:g} + file rounding {CSV_QUANT:g}, gap {gap:.3g})"
        ok &= bool(good)
        lines.append(f"{'PASS' if good else 'FAIL'}: {what}")
    return lines, ok


def cmd_figure(args, argv):
    t0 = time.perf_counter()
    try:
        preset = figure_preset(args.name)
    except KeyError as e:
        raise ConfigError(str(e.args[0])) from None
    grid = _grid(args)
    os.makedirs(args.out, exist_ok=True)
    outputs = []
    plan = figure_plan(preset)
    for stem, scen, st, m in plan:
        m = dict(m)
        try:
            fr = compute_curve(scen, st, grid, masks=m, cap_with_gain=bool(args.cap_with_gain))
        except EmptyRegion as e:
            print(f"{stem}: empty region: {e}", file=sys.stderr)
            return EXIT_EMPTY
        outputs.append(_export(fr, os.path.join(args.out, stem + ".csv")))
        print(f"{stem}: {len(fr)} vertices, max R1 {fr.max_r1:.6g}, max R2 {fr.max_r2:.6g}")
    stems = {p[0] for p in plan}
    lines, ok = dominance_report(args.out, figure_claims(preset, stems))
    summary = f"{preset.name}: {'PASS' if ok else 'FAIL'} ({sum(l.startswith('PASS') for l in lines)}/{len(lines)} claims)"
    with open(os.path.join(args.out, "report.txt"), "w") as fh:
        fh.write("\n".join(lines + [summary]) + "\n")
    _write_stub(args.out)
    _manifest(args.out, "figure", argv, {
        "preset": preset.name, "scenarios": [s.to_dict() for s in preset.scenarios()],
        "strategies": [s.value for s in preset.strategies], "grid": grid.to_dict(),
        "masks": [list(m) for m in preset.masks], "outputs": outputs, "seed": args.seed}, t0)
    print("\n".join(lines))
    print(summary)
    return EXIT_OK if ok else EXIT_DOMINANCE


def oracle_trial(t, points=50):
    """Worst disagreement between the closed form and the linear program on a grid.

    Returns ``(mismatches, grid_points)``; points within ``ORACLE_TOL`` of
    a closed-form boundary are not counted.
    """
    I = t.as_array() if isinstance(t, RateTerms) else np.asarray(t, float)
    reg = region.corollary_region(I)
    span = max(reg.max_r1(), reg.max_r2()) if reg.feasible else math.inf
    if not math.isfinite(span):
        fin = I[np.isfinite(I)]
        span = float(np.max(fin)) if fin.size else 1.0
    span = 1.2 * span if span > 0 else 1.0
    g = np.linspace(0.0, span, points)
    pts = np.stack(np.meshgrid(g, g, indexing="ij"), -1).reshape(-1, 2)
    lp = region.lp_project_many(I, pts)
    mis = 0
    for (x, y), l in zip(pts, lp):
        c = reg.contains(x, y, tol=ORACLE_TOL)
        if c != bool(l):
            if reg.feasible and abs(reg.margin(x, y)) <= ORACLE_TOL:
                continue
            mis += 1
    return mis, len(pts)


def cmd_oracle(args, argv):
    t0 = time.perf_counter()
    if args.trials < 1:
        raise ConfigError("--trials must be >= 1")
    if args.points < 2:
        raise ConfigError("--points must be >= 2")
    rng = np.random.default_rng(args.seed)
    os.makedirs(args.out, exist_ok=True)
    bad = None
    checked = 0
    for i in range(args.trials):
        t = dmc.random_scheme_terms(rng)
        mis, n = oracle_trial(t, args.points)
        checked += n
        if mis:
            bad = (i, t, mis)
            break
    payload = {"trials": args.trials, "seed": args.seed, "points_per_axis": args.points,
               "checked": checked, "tolerance": ORACLE_TOL}
    if bad is not None:
        i, t, mis = bad
        dump = os.path.join(args.out, "oracle_failure.json")
        with open(dump, "w") as fh:
            json.dump({"trial": i, "mismatches": mis, "terms": t.to_dict()}, fh, indent=2)
        payload["outputs"] = [dump]
        _manifest(args.out, "oracle", argv, payload, t0)
        print(f"FAIL: trial {i}: {mis} grid points disagree; terms written to {dump}")
        return EXIT_ORACLE
    _manifest(args.out, "oracle", argv, payload, t0)
    print(f"PASS: {args.trials} trials, {checked} membership queries agree within {ORACLE_TOL:g}")
    return EXIT_OK


def cmd_dmc(args, argv):
    t0 = time.perf_counter()
    try:
        ch = dmc.load_channel(args.channel)
    except (OSError, dmc.ChannelError) as e:
        raise ConfigError(str(e)) from None
    samples = 200 if args.samples is None else args.samples
    rep = dmc.check_conditions(ch, samples, args.seed)
    os.makedirs(args.out, exist_ok=True)
    rep_path = os.path.join(args.out, "conditions.json")
    with open(rep_path, "w") as fh:
        json.dump(rep.to_dict(), fh, indent=2)
    outputs = [rep_path]
    for k, label in dmc.ConditionReport.LABELS.items():
        v = getattr(rep, k)
        extra = f" (worst margin {rep.margins[k]:.3g})" if k in rep.margins else ""
        print(f"{label}: {'yes' if v else 'no'}{extra}")
    if args.check_only or not args.capacity:
        _manifest(args.out, "dmc", argv, {"channel": args.channel, "outputs": outputs, "seed": args.seed}, t0)
        return EXIT_OK
    tmax = 4 if args.tmax is None else args.tmax
    grid = dmc.DistGrid() if args.atom_q is None else dmc.DistGrid(atom_q=args.atom_q)
    try:
        fr = dmc.CAPACITY[args.capacity](ch, tmax, grid, report=rep)
    except dmc.ConditionRefused as e:
        print(f"refused: {e}", file=sys.stderr)
        _manifest(args.out, "dmc", argv, {"channel": args.channel, "outputs": outputs,
                                          "refused": str(e), "seed": args.seed}, t0)
        return EXIT_REFUSED
    except ValueError as e:
        raise ConfigError(str(e)) from None
    path = os.path.join(args.out, f"{args.capacity}.csv")
    fr.scenario = os.path.basename(args.channel)
    fr.to_csv(path)
    outputs.append(path)
    _write_stub(args.out)
    _manifest(args.out, "dmc", argv, {"channel": args.channel, "capacity": args.capacity, "tmax": tmax,
                                      "grid": {"atom_q": grid.atom_q, "weight_q": grid.weight_q},
                                      "outputs": outputs, "seed": args.seed}, t0)
    print(f"wrote {path} ({len(fr)} vertices)")
    return EXIT_OK


COMMANDS = {"region": cmd_region, "figure": cmd_figure, "oracle": cmd_oracle, "dmc": cmd_dmc}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args, argv)
    except (ConfigError, ScenarioError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
