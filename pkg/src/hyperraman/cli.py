"""Command-line front end: sweeps, thresholds, oracle comparisons and debug dumps.

Data go to CSV (byte-identical for identical inputs); run metadata go to a JSON
sidecar next to ``--out``.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .kernels import CoefficientSet, coefficients_to_csv, eval_coefficients
from .oracle import COMPARISON_COLUMNS, OracleError, compare
from .scenario import Scenario, builtin_scenarios, get_builtin, load_scenario, scenario_to_dict
from .witnesses import ROUTES, TABULATED, ImaginaryResidueError, WitnessKind, evaluate_scenario, full_report

__all__ = [
    "AXES",
    "SweepSpec",
    "ThresholdResult",
    "NoSignChange",
    "apply_axis",
    "run_sweep",
    "find_sign_change",
    "find_threshold",
    "main",
]

AXES = ("alpha", "probe-phase", "dkD")


class NoSignChange(ValueError):
    """The witness keeps one sign on the requested range."""


# -- sweeps ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """What to tabulate: a scenario, witnesses, a z grid and an optional second axis.

    ``axis2`` is ``(name, values)`` with ``name`` in ``AXES``: ``alpha`` sets the probe
    amplitude magnitude (keeping its phase), ``probe-phase`` its phase (keeping the
    magnitude), ``dkD`` the probe-pump mismatch in units of ``dkD_unit``.
    """

    scenario: Scenario
    kinds: tuple[WitnessKind, ...]
    z_grid: tuple[float, ...]
    axis2: tuple[str, tuple[float, ...]] | None = None
    dkD_unit: str = "g"
    route: str = "derived"
    strict: bool = False

    def __post_init__(self):
        grid = tuple(float(z) for z in self.z_grid)
        if len(grid) < 2:
            raise ValueError("a sweep needs at least 2 grid points")
        if not all(math.isfinite(z) for z in grid):
            raise ValueError("z grid must be finite")
        object.__setattr__(self, "z_grid", grid)
        if self.axis2 is not None:
            name, values = self.axis2
            if name not in AXES:
                raise ValueError(f"unknown axis {name!r}; choose from {AXES}")
            values = tuple(float(v) for v in values)
            if not values or not all(math.isfinite(v) for v in values):
                raise ValueError("axis values must be finite and non-empty")
            object.__setattr__(self, "axis2", (name, values))
        if self.route not in ROUTES:
            raise ValueError(f"route must be one of {ROUTES}")


def apply_axis(s: Scenario, name: str, value: float, dkD_unit: str = "g") -> Scenario:
    """Scenario with one secondary-axis parameter set to ``value``."""
    alpha = s.amplitudes.alpha
    if name == "alpha":
        return s.with_(alpha=cmath.rect(value, cmath.phase(alpha) if alpha else 0.0))
    if name == "probe-phase":
        return s.with_(alpha=cmath.rect(abs(alpha), value))
    if name == "dkD":
        m = s.mismatches
        scale = s.couplings.g if dkD_unit == "g" else 1.0
        return s.with_(dkS=m.dkS, dkA=m.dkA, dkD=value * scale)
    raise ValueError(f"unknown axis {name!r}; choose from {AXES}")


def _fmt(x: float) -> str:
    # shortest round-trip representation
    return repr(float(x))


def _point(args):
    s, z, kinds, route, strict = args
    rep = full_report(s, z, route=route, strict=strict, kinds=kinds)
    return [(k.name, rep.values[k]) for k in kinds]


def run_sweep(spec: SweepSpec, jobs: int = 1) -> str:
    """CSV with columns ``z, [axis2], witness, value, nonclassical``.

    Rows are z-major, then secondary-axis value, then witness name; the order does
    not depend on ``jobs``.
    """
    kinds = tuple(sorted(spec.kinds))
    axis_values = spec.axis2[1] if spec.axis2 else (None,)
    points = [(z, v) for z in spec.z_grid for v in axis_values]
    tasks = []
    for z, v in points:
        s = spec.scenario if v is None else apply_axis(spec.scenario, spec.axis2[0], v, spec.dkD_unit)
        tasks.append((s, z, kinds, spec.route, spec.strict))
    if kinds:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
        else:
            results = [_point(t) for t in tasks]
    else:
        results = [[] for _ in tasks]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["z"] + ([spec.axis2[0]] if spec.axis2 else []) + ["witness", "value", "nonclassical"]
    w.writerow(head)
    for (z, v), rows in zip(points, results):
        lead = [_fmt(z)] + ([_fmt(v)] if spec.axis2 else [])
        for name, value in rows:
            w.writerow(lead + [name, _fmt(value), int(value < 0)])
    return buf.getvalue()


# -- thresholds ------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdResult:
    """A bracketed sign change of a witness along z."""

    kind: str
    z_lo: float
    z_hi: float
    z_star: float
    direction: str
    values: tuple[float, float] = field(default=(math.nan, math.nan))

    def row(self):
        return (self.kind, _fmt(self.z_lo), _fmt(self.z_hi), _fmt(self.z_star), self.direction)


def find_sign_change(f, lo: float, hi: float, tol: float = 1e-4, scan: int = 64):
    """First sign change of ``f`` on ``[lo, hi]``, refined by bisection.

    The range is first scanned on ``scan`` equal intervals so that a function
    with equal signs at both ends but a crossing inside is still bracketed.

    Returns
    -------
    z_lo, z_hi, f_lo, f_hi
        With exactly one of ``f_lo``, ``f_hi`` negative (signs are compared as
        ``f < 0`` against ``f >= 0``) and ``z_hi - z_lo <= tol``.

    Raises
    ------
    NoSignChange
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"need a finite range lo < hi, got ({lo}, {hi})")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    grid = np.linspace(lo, hi, scan + 1)
    a, fa = float(grid[0]), f(float(grid[0]))
    neg = fa < 0
    for b in grid[1:]:
        b = float(b)
        fb = f(b)
        if (fb < 0) != neg:
            break
        a, fa = b, fb
    else:
        raise NoSignChange(f"no sign change on [{lo}, {hi}]")
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm < 0) == neg:
            a, fa = m, fm
        else:
            b, fb = m, fm
    return a, b, fa, fb


def find_threshold(
    kind, s: Scenario, z_range: tuple[float, float], tol: float = 1e-4,
    route: str = "derived", strict: bool = False,
) -> ThresholdResult:
    """Propagation length at which ``kind`` first changes sign on ``z_range``."""
    if isinstance(kind, str):
        kind = WitnessKind.parse(kind)
    try:
        a, b, fa, fb = find_sign_change(lambda z: evaluate_scenario(kind, s, z, route, strict), *z_range, tol=tol)
    except NoSignChange:
        raise NoSignChange(f"{kind.label} does not change sign on {tuple(z_range)}") from None
    direction = "to_negative" if fa >= 0 else "to_positive"
    return ThresholdResult(kind.name, a, b, 0.5 * (a + b), direction, (fa, fb))


# -- argument handling -----------------------------------------------------------------


def _parse_complex(text: str) -> complex:
    """``3``, ``-9``, ``1+2j`` or polar ``MAG@PHASE`` (radians, ``pi`` allowed)."""
    if "@" in text:
        mag, phase = text.split("@", 1)
        return cmath.rect(float(mag), _parse_phase(phase))
    return complex(text.replace(" ", ""))


def _parse_phase(text: str) -> float:
    """Radians, or a multiple/fraction of pi such as ``pi``, ``-pi/2``, ``0.5pi``."""
    m = re.fullmatch(r"\s*([+-]?[0-9.]*)\*?pi(?:/([0-9.]+))?\s*", text)
    if not m:
        return float(text)
    lead = m.group(1)
    factor = -1.0 if lead == "-" else 1.0 if lead in ("", "+") else float(lead)
    return factor * math.pi / (float(m.group(2)) if m.group(2) else 1.0)


def _load(args) -> Scenario:
    src = args.scenario
    if src in builtin_scenarios():
        s = get_builtin(src)
    else:
        s = load_scenario(src, dkD_unit=args.dkD_unit)
    if args.gamma_over_g is not None:
        s = s.with_(Gamma=args.gamma_over_g * s.couplings.g)
    if args.probe_alpha is not None:
        s = s.with_(alpha=_parse_complex(args.probe_alpha))
    return s


def _z_grid(args, s: Scenario) -> tuple[float, ...]:
    given = [args.z_start, args.z_stop, args.z_count]
    if all(v is None for v in given):
        return s.z_grid
    if any(v is None for v in given):
        raise ValueError("--z-start, --z-stop and --z-count go together")
    if args.z_count < 2:
        raise ValueError("--z-count must be >= 2")
    return tuple(np.linspace(args.z_start, args.z_stop, args.z_count).tolist())


def _kinds(args, default=TABULATED) -> tuple[WitnessKind, ...]:
    if args.witness is None:
        return tuple(default)
    names = [n for item in args.witness for n in item.split(",") if n.strip()]
    return tuple(WitnessKind.parse(n) for n in names)


def _axis(text: str | None):
    if text is None:
        return None
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError("--axis2 takes NAME:START:STOP:COUNT")
    name, start, stop, count = parts[0], float(parts[1]), float(parts[2]), int(parts[3])
    if count < 2:
        raise ValueError("--axis2 count must be >= 2")
    return name, tuple(np.linspace(start, stop, count).tolist())


def _corruption(text: str | None):
    if text is None:
        return None
    key, factor = text.split("=", 1)
    factor = complex(factor)

    def hook(cs: CoefficientSet) -> CoefficientSet:
        return cs.perturbed(key.strip(), factor)

    return hook


def _emit(args, text: str, s: Scenario, command: str, extra=None) -> None:
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.write_text(text)
    meta = {
        "tool": "hyperraman",
        "version": __version__,
        "command": command,
        "scenario": s.name or args.scenario,
        "scenario_hash": s.digest(),
        "scenario_data": scenario_to_dict(s),
        "flags": {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")},
    }
    if extra:
        meta.update(extra)
    out.with_name(out.name + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _common(p: argparse.ArgumentParser, witnesses: bool = True) -> None:
    p.add_argument("--scenario", required=True, help="built-in name or path to a scenario JSON file")
    if witnesses:
        p.add_argument("--witness", action="append", help="witness name, e.g. S_a1->d, E_bd, Ep_b_c, D_a1 (repeatable)")
    p.add_argument("--gamma-over-g", type=float, help="set the probe coupling Gamma to this multiple of g")
    p.add_argument("--probe-alpha", help="probe amplitude: 9, -9, 1+2j or polar 9@pi")
    p.add_argument("--dkD-unit", dest="dkD_unit", choices=("g", "absolute"), default=None,
                   help="unit of dkD in scenario files and on the dkD axis (default: file setting, axis g)")
    p.add_argument("--strict-transcription", action="store_true",
                   help="use the coefficient table exactly as tabulated, without the corrections")
    p.add_argument("--out", help="output CSV path; a .meta.json sidecar is written next to it")


def _z_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--z-start", type=float)
    p.add_argument("--z-stop", type=float)
    p.add_argument("--z-count", type=int)


def _route(p: argparse.ArgumentParser) -> None:
    p.add_argument("--route", choices=ROUTES, default="derived",
                   help="derived second-order polynomials (default) or the printed closed forms")


def _cmd_sweep(args) -> int:
    s = _load(args)
    spec = SweepSpec(
        scenario=s,
        kinds=_kinds(args),
        z_grid=_z_grid(args, s),
        axis2=_axis(args.axis2),
        dkD_unit=args.dkD_unit or "g",
        route=args.route,
        strict=args.strict_transcription,
    )
    _emit(args, run_sweep(spec, jobs=args.jobs), s, "sweep")
    return 0


def _cmd_threshold(args) -> int:
    s = _load(args)
    kinds = _kinds(args, default=())
    if len(kinds) != 1:
        raise ValueError("threshold takes exactly one --witness")
    res = find_threshold(kinds[0], s, (args.z_start, args.z_stop), args.tol, args.route, args.strict_transcription)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["witness", "z_lo", "z_hi", "z_star", "direction"])
    w.writerow(res.row())
    _emit(args, buf.getvalue(), s, "threshold")
    return 0


def _cmd_compare(args) -> int:
    s = _load(args)
    grid = _z_grid(args, s)
    records = compare(
        s, grid, args.cutoff, kinds=_kinds(args), route=args.route, strict=args.strict_transcription,
        adaptive=not args.fixed_cutoff, coefficient_hook=_corruption(args.corrupt_coefficient),
    )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARISON_COLUMNS)
    for r in records:
        w.writerow(r.row())
    failed = sum(not r.passed for r in records)
    _emit(args, buf.getvalue(), s, "compare", {"cutoff_used": records[0].cutoff if records else args.cutoff})
    if failed:
        print(f"{failed} of {len(records)} comparisons outside tolerance", file=sys.stderr)
        return 1
    return 0


def _cmd_scenarios(args) -> int:
    table = builtin_scenarios()
    if args.show:
        sys.stdout.write(json.dumps(scenario_to_dict(get_builtin(args.show)), indent=2) + "\n")
        return 0
    for name, s in table.items():
        a1 = s.amplitudes.alpha1
        print(f"{name}\tphi1={cmath.phase(a1):.6g}\tdigest={s.digest()[:12]}")
    return 0


def _cmd_coeffs(args) -> int:
    s = _load(args)
    cs = eval_coefficients(s, args.z, strict=args.strict_transcription)
    _emit(args, coefficients_to_csv(cs), s, "coeffs")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperraman", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="tabulate witnesses on a z grid")
    _common(sw)
    _z_flags(sw)
    _route(sw)
    sw.add_argument("--axis2", help=f"secondary axis NAME:START:STOP:COUNT, NAME in {AXES}")
    sw.add_argument("--jobs", type=int, default=1, help="worker processes")
    sw.set_defaults(func=_cmd_sweep)

    th = sub.add_parser("threshold", help="locate the sign change of one witness")
    _common(th)
    _route(th)
    th.add_argument("--z-start", type=float, required=True)
    th.add_argument("--z-stop", type=float, required=True)
    th.add_argument("--tol", type=float, default=1e-4)
    th.set_defaults(func=_cmd_threshold)

    cp = sub.add_parser("compare", help="closed forms against the Fock-space oracle")
    _common(cp)
    _z_flags(cp)
    _route(cp)
    cp.add_argument("--cutoff", type=int, default=5, help="per-mode Fock cutoff of the first run")
    cp.add_argument("--fixed-cutoff", action="store_true", help="fail instead of raising the cutoff")
    cp.add_argument("--corrupt-coefficient", metavar="KEY=FACTOR", help=argparse.SUPPRESS)
    cp.set_defaults(func=_cmd_compare)

    sc = sub.add_parser("scenarios", help="list built-in scenarios")
    sc.add_argument("--show", help="print one built-in as JSON")
    sc.set_defaults(func=_cmd_scenarios)

    co = sub.add_parser("coeffs", help="dump the coefficient table at one z")
    _common(co, witnesses=False)
    co.add_argument("--z", type=float, required=True)
    co.set_defaults(func=_cmd_coeffs)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, OracleError, ImaginaryResidueError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        if isinstance(exc, ImaginaryResidueError) and getattr(args, "strict_transcription", False):
            print("hint: the as-printed coefficients do not fit the derived witness polynomials; "
                  "combine --strict-transcription with --route printed", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
