"""Steering, Hillery-Zubairy and antibunching witnesses from the perturbative solution.

Two evaluation routes are available:

``"derived"`` (default)
    Second-order polynomials obtained by expanding each witness definition with the
    operator solution and normal ordering against the coherent input
    (:mod:`hyperraman.expansion`).  These agree with exact Fock-space evolution up to
    third-order residuals.
``"printed"``
    The closed forms exactly as tabulated (:mod:`hyperraman.transcribed`), kept for
    auditing.  Several of them differ from the derived polynomials at second order.

A negative value witnesses the corresponding nonclassical effect.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from functools import total_ordering

from . import expansion
from .kernels import CoefficientSet, eval_coefficients
from .scenario import CoherentAmplitudes, Scenario
from .transcribed import TRANSCRIBED

__all__ = [
    "ROUTES",
    "WitnessKind",
    "WitnessNotTabulated",
    "ImaginaryResidueError",
    "TABULATED",
    "WitnessReport",
    "steering",
    "entanglement_hz1",
    "entanglement_hz2",
    "antibunching_D",
    "evaluate",
    "evaluate_scenario",
    "full_report",
    "reports_to_csv",
]

ROUTES = ("derived", "printed")
IMAG_TOL = 1e-10

_FAMILIES = {"S": "S", "HZ1": "E", "HZ2": "E'", "D": "D"}
_PREFIX = {"S": "S", "HZ1": "E", "HZ2": "Ep", "D": "D"}
_MODES = ("p", "a1", "a2", "b", "c", "d")


class WitnessNotTabulated(ValueError):
    """Requested witness has no tabulated closed form."""


class ImaginaryResidueError(ArithmeticError):
    """A witness evaluated to a complex number beyond rounding level."""


@total_ordering
@dataclass(frozen=True)
class WitnessKind:
    """One witness: ``family`` in {S, HZ1, HZ2, D} and its mode(s).

    Steering is ordered (``S`` with ``i="a1", j="d"`` is ``S_{a1->d}``); the HZ
    criteria are symmetric and stored in canonical mode order.
    """

    family: str
    i: str
    j: str | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown witness family {self.family!r}")
        for m in (self.i, self.j):
            if m is not None and m not in _MODES:
                raise ValueError(f"unknown mode {m!r}")
        if self.family in ("HZ1", "HZ2") and self.j is not None:
            if _MODES.index(self.i) > _MODES.index(self.j):
                a, b = self.j, self.i
                object.__setattr__(self, "i", a)
                object.__setattr__(self, "j", b)

    @property
    def name(self) -> str:
        """Stable identifier used in CSV files, e.g. ``S_a1_d``, ``Ep_b_c``, ``D_a1``."""
        parts = [_PREFIX[self.family], self.i] + ([self.j] if self.j else [])
        return "_".join(parts)

    @property
    def label(self) -> str:
        if self.family == "D":
            return f"D_{self.i}"
        if self.family == "S":
            return f"S_{self.i}->{self.j}"
        return ("E_" if self.family == "HZ1" else "E'_") + self.i + self.j

    @property
    def key(self) -> tuple:
        return (_FAMILIES[self.family], self.i, self.j)

    @property
    def uses_pump2(self) -> bool:
        return "a2" in (self.i, self.j)

    def relabeled(self) -> "WitnessKind":
        """The same witness with the two pumps exchanged."""
        swap = {"a1": "a2", "a2": "a1"}
        return WitnessKind(self.family, swap.get(self.i, self.i), swap.get(self.j, self.j) if self.j else None)

    @classmethod
    def parse(cls, text: str) -> "WitnessKind":
        """Parse names like ``S_a1_d``, ``S_a1->d``, ``E_a1d``, ``E'_bc``, ``Ep_b_c``, ``D_a1``."""
        t = text.strip().replace("->", "_").replace("'", "p")
        m = re.fullmatch(r"(Ep|S|E|D)_([a-z0-9_]+)", t)
        if not m:
            raise ValueError(f"cannot parse witness name {text!r}")
        fam = {"S": "S", "E": "HZ1", "Ep": "HZ2", "D": "D"}[m.group(1)]
        modes = re.findall(r"a1|a2|p|b|c|d", m.group(2).replace("_", ""))
        if "".join(modes) != m.group(2).replace("_", ""):
            raise ValueError(f"cannot parse modes in {text!r}")
        if fam == "D":
            if len(modes) != 1:
                raise ValueError(f"antibunching takes one mode: {text!r}")
            kind = cls(fam, modes[0])
        else:
            if len(modes) != 2:
                raise ValueError(f"two-mode witness needs two modes: {text!r}")
            kind = cls(fam, modes[0], modes[1])
        _check_tabulated(kind)
        return kind

    def __lt__(self, other: "WitnessKind") -> bool:
        return self.name < other.name


def _tabulated() -> tuple[WitnessKind, ...]:
    out = [WitnessKind("S", i, j) for i, j in (
        ("a1", "b"), ("a1", "c"), ("a1", "d"), ("b", "c"), ("b", "d"), ("c", "d"), ("d", "a1"))]
    for fam in ("HZ1", "HZ2"):
        out += [WitnessKind(fam, i, j) for i, j in (
            ("a1", "b"), ("a1", "c"), ("a1", "d"), ("b", "c"), ("b", "d"), ("c", "d"))]
    out += [WitnessKind("D", m) for m in ("a1", "b", "c", "d")]
    return tuple(out)


TABULATED = _tabulated()
_ALLOWED = set(TABULATED) | {k.relabeled() for k in TABULATED}


def _check_tabulated(kind: WitnessKind) -> None:
    if kind not in _ALLOWED:
        raise WitnessNotTabulated(f"witness {kind.label} has no tabulated closed form")


def _real(value: complex, scale: float, kind: WitnessKind) -> float:
    bound = IMAG_TOL * max(abs(value.real), scale)
    if abs(value.imag) > bound and abs(value.imag) > 1e-300:
        raise ImaginaryResidueError(
            f"{kind.label}: imaginary residue {value.imag:.3e} exceeds {bound:.3e}"
        )
    return float(value.real)


def evaluate(kind: WitnessKind, coeffs: CoefficientSet, amps: CoherentAmplitudes, route: str = "derived") -> float:
    """Value of one witness for a coefficient set and initial amplitudes.

    Pump-2 witnesses are only available on the derived route here; use
    :func:`evaluate_scenario` to obtain them by pump relabeling on either route.

    Raises
    ------
    WitnessNotTabulated
        For witnesses outside the tabulated set.
    ImaginaryResidueError
        If the complex evaluation leaves an imaginary part above rounding level.
    """
    if isinstance(kind, str):
        kind = WitnessKind.parse(kind)
    _check_tabulated(kind)
    if route == "derived":
        poly = expansion.witness_polynomial(*kind.key)
        value, scale = expansion.evaluate_polynomial(poly, coeffs, amps, with_scale=True)
        return _real(value, scale, kind)
    if route == "printed":
        if kind.uses_pump2:
            raise ValueError("printed forms cover pump 1 only; use evaluate_scenario for pump 2")
        value = complex(TRANSCRIBED[kind.key](lambda k: coeffs[k], amps))
        return _real(value, abs(value), kind)
    raise ValueError(f"route must be one of {ROUTES}, got {route!r}")


def steering(pair, coeffs, amps, route: str = "derived") -> float:
    """``S_{i->j} = <N_i N_j> - |<i j^+>|^2 + <N_i>/2`` for an ordered pair ``(i, j)``."""
    return evaluate(WitnessKind("S", *pair), coeffs, amps, route)


def entanglement_hz1(pair, coeffs, amps, route: str = "derived") -> float:
    """HZ-1: ``E_ij = <N_i N_j> - |<i j^+>|^2``."""
    return evaluate(WitnessKind("HZ1", *pair), coeffs, amps, route)


def entanglement_hz2(pair, coeffs, amps, route: str = "derived") -> float:
    """HZ-2: ``E'_ij = <N_i><N_j> - |<i j>|^2``."""
    return evaluate(WitnessKind("HZ2", *pair), coeffs, amps, route)


def antibunching_D(mode, coeffs, amps, route: str = "derived") -> float:
    """``D_i = <i^+2 i^2> - <N_i>^2``; negative means sub-Poissonian statistics."""
    return evaluate(WitnessKind("D", mode), coeffs, amps, route)


def evaluate_scenario(kind, s: Scenario, z: float, route: str = "derived", strict: bool = False) -> float:
    """Witness value at length ``z``; pump-2 witnesses via the 1<->2 relabeling."""
    if isinstance(kind, str):
        kind = WitnessKind.parse(kind)
    _check_tabulated(kind)
    if kind.uses_pump2:
        kind, s = kind.relabeled(), s.swap_pumps()
    return evaluate(kind, eval_coefficients(s, z, strict=strict), s.amplitudes, route)


@dataclass
class WitnessReport:
    """Every requested witness at one propagation length."""

    z: float
    values: dict[WitnessKind, float]
    route: str = "derived"
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def flags(self) -> dict[WitnessKind, bool]:
        """``True`` where the witness is negative (nonclassical)."""
        return {k: v < 0 for k, v in self.values.items()}

    def __getitem__(self, kind) -> float:
        if isinstance(kind, str):
            kind = WitnessKind.parse(kind)
        return self.values[kind]

    def rows(self):
        for kind in sorted(self.values):
            v = self.values[kind]
            yield (self.z, kind.name, v, int(v < 0))


def full_report(
    s: Scenario,
    z: float,
    route: str = "derived",
    strict: bool = False,
    kinds=None,
    include_pump2: bool = False,
) -> WitnessReport:
    """Evaluate all tabulated witnesses (or ``kinds``) at length ``z``."""
    if kinds is None:
        kinds = list(TABULATED)
        if include_pump2:
            kinds += [k.relabeled() for k in TABULATED if k.relabeled() != k]
    kinds = [WitnessKind.parse(k) if isinstance(k, str) else k for k in kinds]
    cs = eval_coefficients(s, z, strict=strict)
    swapped = None
    values = {}
    for kind in kinds:
        _check_tabulated(kind)
        if kind.uses_pump2:
            if swapped is None:
                s2 = s.swap_pumps()
                swapped = (eval_coefficients(s2, z, strict=strict), s2.amplitudes)
            values[kind] = evaluate(kind.relabeled(), swapped[0], swapped[1], route)
        else:
            values[kind] = evaluate(kind, cs, s.amplitudes, route)
    return WitnessReport(z, values, route, cs.diagnostics)


def reports_to_csv(reports) -> str:
    """CSV with columns ``z, kind, value, nonclassical``; z-major, kinds alphabetical."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["z", "kind", "value", "nonclassical"])
    for rep in reports:
        for z, name, v, flag in rep.rows():
            w.writerow([repr(float(z)), name, repr(float(v)), flag])
    return buf.getvalue()
