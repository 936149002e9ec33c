"""Acceptance criteria 1-8.

Each test appends one ``PASS``/``FAIL`` line per criterion (and indented detail lines)
to ``REPORT``; ``conftest.py`` prints them at the end of the session, and each line
is also printed when it is recorded (visible with ``-s``).
"""

import cmath
import math
import time

import numpy as np
import pytest

from hyperraman import oracle as O
from hyperraman.cli import find_threshold
from hyperraman.kernels import FAMILY_SIZES, eval_coefficients
from hyperraman.scenario import CoherentAmplitudes, Couplings, PhaseMismatches, Scenario, get_builtin
from hyperraman.witnesses import TABULATED, evaluate, evaluate_scenario

REPORT: list[str] = []

ZS = (0.01, 0.02, 0.03, 0.04, 0.05)
N_SCENARIOS = 25
CUTOFF = 5
SLOPE_MIN = 2.5
DRIFT_MAX = 1e-8
CONTINUITY_DELTA = 1e-4
CONTINUITY_MAX = 1e-8
N_SIGN = 10_000
KEYS = [f"{fam}{n}" for fam, size in FAMILY_SIZES.items() for n in range(1, size + 1)]


def record(number: int, passed: bool, summary: str, details=()):
    lines = [f"ACCEPTANCE #{number} {'PASS' if passed else 'FAIL'}: {summary}"]
    lines += [f"    {d}" for d in details]
    REPORT.extend(lines)
    print("\n".join(lines))


# -- 1-5: closed-form claims -----------------------------------------------------------


def test_1_thresholds():
    s = get_builtin("fig2")
    t0 = time.perf_counter()
    a = find_threshold("S_a1->d", s, (0.005, 0.04), 1e-4)
    b = find_threshold("S_d->a1", s, (0.03, 0.1), 1e-4)
    elapsed = time.perf_counter() - t0
    # uniqueness: a dense scan over each range shows exactly one sign flip
    flips = []
    for name, (lo, hi) in (("S_a1->d", (0.005, 0.04)), ("S_d->a1", (0.03, 0.1))):
        vals = np.array([evaluate_scenario(name, s, z) for z in np.linspace(lo, hi, 701)])
        flips.append(int(np.count_nonzero((vals[:-1] < 0) != (vals[1:] < 0))))
    ok = 0.012 <= a.z_star <= 0.022 and 0.05 <= b.z_star <= 0.085 and flips == [1, 1] and elapsed < 5
    record(1, ok, f"S_a1->d z*={a.z_star:.5f} in [0.012, 0.022], S_d->a1 z*={b.z_star:.5f} in [0.05, 0.085], "
                  f"sign flips {flips}, {elapsed:.2f} s < 5 s")
    assert ok


def test_2_asymmetric_steering():
    s = get_builtin("fig2")
    fwd, back = evaluate_scenario("S_a1->d", s, 0.03), evaluate_scenario("S_d->a1", s, 0.03)
    ok = fwd < 0 < back
    record(2, ok, f"gz=0.03: S_a1->d={fwd:.6g} < 0, S_d->a1={back:.6g} > 0")
    assert ok


def test_3_persistent_pump_anti_stokes_entanglement():
    s = get_builtin("fig2")
    grid = np.linspace(0.001, 0.1, 201)[1:]
    off = np.array([evaluate_scenario("E_a1d", s, z) for z in grid])
    on = np.array([evaluate_scenario("E_a1d", s.with_(Gamma=1.5, alpha=9.0), z) for z in grid])
    frac = float(np.mean(on > off))
    ok = bool(np.all(off < 0) and np.all(on < 0) and frac >= 0.9)
    record(3, ok, f"E_a1d < 0 on all {len(grid)} points for Gamma=0 (max {off.max():.4g}) and Gamma=1.5g, alpha=9 "
                  f"(max {on.max():.4g}); less negative with probe on {100 * frac:.1f}% >= 90%")
    assert ok


def test_4_probe_independence():
    names = ["E_bd", "E'_bc", "D_b", "D_c", "D_d"]
    grid = np.linspace(0.0, 0.1, 201)
    mismatched = []
    for base in ("fig2", "fig3", "fig3b", "fig4"):
        s = get_builtin(base)
        for name in names:
            for z in grid:
                if evaluate_scenario(name, s.with_(Gamma=0.0), z) != evaluate_scenario(name, s.with_(Gamma=10.0), z):
                    mismatched.append((base, name, z))
    ok = not mismatched
    record(4, ok, f"{', '.join(names)} bit-identical for Gamma=0 vs 10 on 201 points x 4 figure scenarios "
                  f"({len(mismatched)} mismatches)",
           ["figure scenarios have a vacuum probe; with alpha != 0 E'_bc depends on Gamma (see decisions ledger)"])
    assert ok


def test_5_phase_controlled_nonclassicality():
    grid = np.linspace(0.0, 0.1, 201)[1:]
    e0 = np.array([evaluate_scenario("E_bd", get_builtin("fig3"), z) for z in grid])
    e1 = np.array([evaluate_scenario("E_bd", get_builtin("fig3b"), z) for z in grid])
    d0 = np.array([evaluate_scenario("D_a1", get_builtin("fig4-phi0"), z) for z in grid])
    d1 = np.array([evaluate_scenario("D_a1", get_builtin("fig4"), z) for z in grid])
    ok = bool(np.all(e0 >= 0) and np.any(e1 < 0) and np.all(d0 >= 0) and np.any(d1 < 0))
    record(5, ok, f"E_bd: phi1=0 min {e0.min():.4g} >= 0, phi1=pi/2 negative on {np.mean(e1 < 0):.0%}; "
                  f"D_a1: phi1=0 min {d0.min():.4g} >= 0, phi1=pi/2 negative on {np.mean(d1 < 0):.0%}")
    assert ok


# -- 6-7: oracle -------------------------------------------------------------------------


@pytest.fixture(scope="module")
def oracle_suite():
    """Acceptance draw, every oracle run recorded (including truncation reruns)."""
    runs = []
    original = O.run_oracle

    def recording(*args, **kwargs):
        r = original(*args, **kwargs)
        runs.append(r)
        return r

    O.run_oracle = recording
    t0 = time.perf_counter()
    try:
        results = []
        for seed in range(N_SCENARIOS):
            s = O.random_small_scenario(np.random.default_rng(seed))
            try:
                main = recording(s, ZS, CUTOFF)
                finer = recording(s, ZS, CUTOFF + 1)
                recs = O.compare(s, ZS, CUTOFF, run=main, check_truncation=False)
                recs_finer = O.compare(s, ZS, CUTOFF + 1, run=finer, check_truncation=False)
                printed = O.compare(s, ZS, CUTOFF, run=main, check_truncation=False, route="printed")
                results.append((s, recs, recs_finer, printed, None))
            except O.OracleError as exc:
                results.append((s, None, None, None, exc))
    finally:
        O.run_oracle = original
    return results, runs, time.perf_counter() - t0


def test_6_oracle_equivalence(oracle_suite):
    results, _, elapsed = oracle_suite
    errors = [(i, str(e)) for i, (*_, e) in enumerate(results) if e is not None]
    worst = {}
    envelope = {}
    failures = []
    finer_failures = 0
    truncation = 0.0
    printed_fail = {}
    for seed, (s, recs, recs_finer, printed, exc) in enumerate(results):
        if exc is not None:
            continue
        scale = (s.couplings.strongest * s.amplitudes.max_magnitude) ** 3
        for r, rf in zip(recs, recs_finer):
            worst[r.witness] = max(worst.get(r.witness, 0.0), r.abs_dev / r.tol)
            envelope[r.witness, r.z] = max(envelope.get((r.witness, r.z), 0.0), r.abs_dev / scale)
            truncation = max(truncation, abs(r.oracle - rf.oracle) / r.tol)
            finer_failures += not rf.passed
            if not r.passed:
                failures.append((seed, r.witness, r.z))
        for name in {r.witness for r in printed if not r.passed}:
            printed_fail[name] = printed_fail.get(name, 0) + 1
    slopes = {}
    for kind in TABULATED:
        y = np.array([envelope.get((kind.name, z), 0.0) for z in ZS])
        slopes[kind.name] = float(np.polyfit(np.log(ZS), np.log(y), 1)[0]) if np.all(y > 0) else math.nan
    low = {k: v for k, v in slopes.items() if not v >= SLOPE_MIN}
    ok = not errors and not failures and not low and elapsed < 600
    details = [f"{name}: max dev/tol {worst.get(name, math.nan):.3f}, slope {slopes[name]:.2f}"
               for name in sorted(slopes)]
    details.append(f"cutoff {CUTOFF + 1} rerun (information): {finer_failures} records outside the band, "
                   f"largest oracle change {truncation:.2f} of the band")
    details.append("printed closed forms (information), scenarios with a failure: "
                   + (", ".join(f"{k} {v}/{N_SCENARIOS}" for k, v in sorted(printed_fail.items())) or "none"))
    details += [f"seed {i}: {msg}" for i, msg in errors]
    details += [f"fail: seed {seed} {name} z={z}" for seed, name, z in failures[:20]]
    record(6, ok, f"{N_SCENARIOS} scenarios, cutoff {CUTOFF}, |amp| in [0.1, 0.15], {len(failures)} records outside "
                  f"C(Lambda z xi)^3, min slope {min(slopes.values()):.2f} >= {SLOPE_MIN}, {elapsed:.0f} s < 600 s",
           details)
    assert ok


def test_7_conservation(oracle_suite):
    _, runs, _ = oracle_suite
    # a few brighter, longer runs with the probe populated on top of the acceptance draw
    for seed in range(3):
        s = O.random_small_scenario(np.random.default_rng(100 + seed), amp_range=(0.2, 0.3)).with_(Gamma=1.0)
        runs.append(O.run_oracle(s, (0.05, 0.1, 0.2), cutoffs=6))
    worst = {key: max(r.drifts[key] for r in runs) for key in runs[0].drifts}
    ok = all(v <= DRIFT_MAX for v in worst.values())
    record(7, ok, f"{len(runs)} oracle runs, largest relative drift "
                  + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" <= {DRIFT_MAX:g}")
    assert ok


# -- 8: kernel stability and manifest signs ----------------------------------------------

CONTINUITY_BASES = {
    "dkS": dict(dkS=0.0, dkA=1.7, dkD=-0.6),
    "dkA": dict(dkS=1.3, dkA=0.0, dkD=0.9),
    "dkD": dict(dkS=-0.8, dkA=2.1, dkD=0.0),
    "dk1": dict(dkS=0.7, dkA=0.7, dkD=-1.3),
    "dk2": dict(dkS=-0.7, dkA=0.7, dkD=1.9),
    "dk3": dict(dkS=0.6, dkA=-1.4, dkD=-0.6),
    "dk4": dict(dkS=1.1, dkA=0.4, dkD=0.4),
    "all": dict(dkS=0.0, dkA=0.0, dkD=0.0),
}


def _continuity(strict: bool):
    sym = one = 0.0
    where = None
    for name, base in CONTINUITY_BASES.items():
        for axis in ("dkS", "dkA", "dkD"):
            for z in (0.01, 0.05, 0.1):
                mk = lambda **m: Scenario(couplings=Couplings(1.0, 1.2, 1.5), mismatches=PhaseMismatches(**m))
                at = eval_coefficients(mk(**base), z, strict)
                plus = eval_coefficients(mk(**{**base, axis: base[axis] + CONTINUITY_DELTA}), z, strict)
                minus = eval_coefficients(mk(**{**base, axis: base[axis] - CONTINUITY_DELTA}), z, strict)
                for key in KEYS:
                    v0 = at.ratio(key)
                    if v0 == 0:
                        continue
                    gap = abs(0.5 * (plus.ratio(key) + minus.ratio(key)) - v0) / abs(v0)
                    if gap > sym:
                        sym, where = gap, (name, axis, z, key)
                    one = max(one, abs(plus.ratio(key) - v0) / abs(v0), abs(minus.ratio(key) - v0) / abs(v0))
    return sym, one, where


def _random_inputs(n):
    rng = np.random.default_rng(2024)
    for _ in range(n):
        amps = CoherentAmplitudes(*(rng.uniform(0, 10) * cmath.exp(1j * rng.uniform(-math.pi, math.pi)) for _ in range(6)))
        s = Scenario(amplitudes=amps, couplings=Couplings(*rng.uniform(-2, 2, size=3)),
                     mismatches=PhaseMismatches(*rng.uniform(-30, 30, size=3)))
        yield s, float(rng.uniform(0.0, 0.1))


def test_8_kernel_stability_and_manifest_signs():
    sym, one, where = _continuity(strict=False)
    continuity_ok = sym <= CONTINUITY_MAX
    names = ["E_cd", "E'_cd", "D_b", "D_d"]
    negatives = dict.fromkeys(names, 0)
    most_negative = dict.fromkeys(names, 0.0)
    printed_ecd_neg = 0
    for s, z in _random_inputs(N_SIGN):
        cs = eval_coefficients(s, z)
        for name in names:
            v = evaluate(name, cs, s.amplitudes)
            if v < 0:
                negatives[name] += 1
                most_negative[name] = min(most_negative[name], v)
        printed_ecd_neg += evaluate("E_cd", cs, s.amplitudes, "printed") < 0
    signs_ok = not any(negatives.values())
    ok = continuity_ok and signs_ok
    details = [
        f"continuity: limit vs symmetric mean of +-{CONTINUITY_DELTA:g} approach, worst relative gap {sym:.2e} "
        f"<= {CONTINUITY_MAX:g} ({'PASS' if continuity_ok else 'FAIL'}; at {where})",
        f"continuity (information): one-sided relative gap up to {one:.2e}, the first-order slope of the coefficients",
    ]
    for name in names:
        details.append(f"{name} >= 0 on {N_SIGN} inputs: {negatives[name]} negative"
                       + (f" (most negative {most_negative[name]:.3g})" if negatives[name] else "")
                       + f" ({'PASS' if not negatives[name] else 'FAIL'})")
    details.append(f"E_cd printed closed form (information): {printed_ecd_neg} negative")
    if negatives["E_cd"]:
        details.append("E_cd: the oracle-validated second-order form is not sign definite (see decisions ledger)")
    record(8, ok, "kernel continuity across vanishing mismatches and manifest-sign witnesses", details)
    assert ok
