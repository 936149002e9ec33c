"""Closed-form operator-evolution coefficients of the perturbative solution.

Every mode operator at length ``z`` is a polynomial in the initial ladder operators,

    a_p(z) = f1 a_p + f2 a1 a2 + ...,   a1(z) = g1 a1 + g2 a2^+ b c + ...,   etc.

with ``f``, ``g``, ``h``, ``j``, ``k``, ``l`` the coefficient families of the probe,
pump-1, pump-2, Stokes, phonon and anti-Stokes modes.  The leading coefficient of
each family is the free phase ``exp(i z k_x)``; all others are stored as ratios to
it.  Each ratio is a first- or second-order divided difference of ``exp(i z x)``
over the relevant phase mismatches, evaluated with routines that stay accurate at
and near phase matching.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .scenario import Scenario

__all__ = [
    "commutator_defect",
    "FAMILY_SIZES",
    "FAMILY_MODE",
    "FIRST_ORDER",
    "phase_E",
    "phase_F",
    "divided_difference2",
    "CoefficientSet",
    "eval_coefficients",
    "coefficients_to_csv",
    "coefficient_order",
]

FAMILY_SIZES = {"f": 8, "g": 19, "h": 19, "j": 10, "k": 16, "l": 10}
FAMILY_MODE = {"f": "p", "g": "a1", "h": "a2", "j": "b", "k": "c", "l": "d"}
# coefficients linear in the couplings; the leading ones are order 0, all others order 2
FIRST_ORDER = {
    "f": {2},
    "g": {2, 3, 4},
    "h": {2, 3, 4},
    "j": {2},
    "k": {2, 3},
    "l": {2},
}

# below this |theta| the imaginary part of phase_F switches to its Taylor series
_F_SERIES_SWITCH = 0.25
# below this spread of the three nodes the second divided difference uses its series
_DD2_SERIES_SWITCH = 1e-3
# mismatches with |z * dk| below this are reported as limit evaluations
_LIMIT_REPORT = 1e-6


def coefficient_order(family: str, index: int) -> int:
    """Order in the couplings of coefficient ``family[index]``."""
    if index == 1:
        return 0
    return 1 if index in FIRST_ORDER[family] else 2


def phase_E(theta: float) -> complex:
    """``(exp(i theta) - 1) / theta`` with the removable singularity filled in (``E(0) = i``)."""
    if theta == 0.0:
        return 1j
    half = 0.5 * theta
    s = math.sin(half)
    # exp(i t) - 1 = -2 sin^2(t/2) + i sin t, free of cancellation
    return complex(-2.0 * s * s / theta, math.sin(theta) / theta)


def _theta_minus_sin_over_sq(theta: float) -> float:
    # (theta - sin theta) / theta^2
    if abs(theta) < _F_SERIES_SWITCH:
        t2 = theta * theta
        term = theta / 6.0
        total = term
        n = 3
        while True:
            term *= -t2 / ((n + 1) * (n + 2))
            total += term
            n += 2
            if abs(term) < 1e-18 * abs(total) or n > 40:
                break
        return total
    return (theta - math.sin(theta)) / (theta * theta)


def phase_F(theta: float) -> complex:
    """``(1 + i theta - exp(i theta)) / theta^2`` with ``F(0) = 1/2``."""
    if theta == 0.0:
        return complex(0.5, 0.0)
    half = 0.5 * theta
    s = math.sin(half) / half if half != 0.0 else 1.0
    return complex(0.5 * s * s, _theta_minus_sin_over_sq(theta))


def _dd1(x: float, y: float) -> complex:
    # first divided difference of exp(i t) at x, y
    return cmath.exp(1j * x) * phase_E(y - x)


def _complete_homogeneous(ys: tuple[float, float, float], degree: int) -> float:
    # h_n(y0, y1, y2) for n = degree
    y0, y1, y2 = ys
    total = 0.0
    for p in range(degree + 1):
        for q in range(degree + 1 - p):
            total += y0**p * y1**q * y2 ** (degree - p - q)
    return total


def divided_difference2(u: float, v: float) -> complex:
    """Second divided difference of ``exp(i t)`` at the nodes ``0, u, v``.

    Equals ``((u - v) + v e^{iu} - u e^{iv}) / (u v (u - v))`` for distinct nodes and
    its confluent limits otherwise (e.g. ``-phase_F(u)`` when ``v = 0``).
    """
    nodes = sorted((0.0, u, v))
    lo, mid, hi = nodes
    spread = hi - lo
    if spread >= _DD2_SERIES_SWITCH:
        return (_dd1(mid, hi) - _dd1(lo, mid)) / spread
    c = (lo + mid + hi) / 3.0
    ys = (lo - c, mid - c, hi - c)
    total = 0j
    fact = 2.0
    ipow = -1.0 + 0j  # i^2
    for n in range(2, 10):
        if n > 2:
            fact *= n
            ipow *= 1j
        total += ipow / fact * _complete_homogeneous(ys, n - 2)
    return cmath.exp(1j * c) * total


# -- z-scaled building blocks ----------------------------------------------------------


def _E(x: float, z: float) -> complex:
    # (e^{izx} - 1) / x
    return z * phase_E(z * x)


def _F(x: float, z: float) -> complex:
    # (1 + izx - e^{izx}) / x^2
    return z * z * phase_F(z * x)


def _Q(a: float, b: float, z: float) -> complex:
    # ((a - b) + b e^{iza} - a e^{izb}) / (a b (a - b))
    return z * z * divided_difference2(z * a, z * b)


@dataclass(frozen=True)
class CoefficientSet:
    """All coefficients of the perturbative solution at one propagation length.

    ``ratios[fam][n - 1]`` holds ``c_n / c_1`` (so ``ratios[fam][0] == 1``) and
    ``leading[fam]`` the unit-modulus free phase ``c_1``.  Item access returns the
    full coefficient, e.g. ``cs["g5"] == cs.leading["g"] * cs.ratios["g"][4]``.
    """

    z: float
    ratios: dict[str, np.ndarray]
    leading: dict[str, complex]
    strict: bool = False
    diagnostics: tuple[str, ...] = field(default=())

    def __getitem__(self, key: str) -> complex:
        fam, idx = key[0], int(key[1:])
        return complex(self.leading[fam] * self.ratios[fam][idx - 1])

    def ratio(self, key: str) -> complex:
        fam, idx = key[0], int(key[1:])
        return complex(self.ratios[fam][idx - 1])

    def with_leading(self, leading: dict[str, complex]) -> "CoefficientSet":
        """Same ratios with the free phases replaced (used by phase-invariance checks)."""
        merged = dict(self.leading)
        merged.update(leading)
        return CoefficientSet(self.z, self.ratios, merged, self.strict, self.diagnostics)

    def perturbed(self, key: str, factor: complex) -> "CoefficientSet":
        """Copy with one ratio multiplied by ``factor`` (fault injection for tests)."""
        fam, idx = key[0], int(key[1:])
        ratios = {f: r.copy() for f, r in self.ratios.items()}
        ratios[fam][idx - 1] *= factor
        return CoefficientSet(self.z, ratios, self.leading, self.strict, self.diagnostics)

    def items(self):
        for fam, size in FAMILY_SIZES.items():
            for n in range(1, size + 1):
                yield f"{fam}{n}", self[f"{fam}{n}"]


class _Table:
    """Collects ratio values and limit-branch diagnostics while a set is filled in."""

    def __init__(self, z: float, dk: dict[str, float]):
        self.z = z
        self.dk = dk
        self.values = {fam: np.zeros(n, dtype=complex) for fam, n in FAMILY_SIZES.items()}
        for fam in self.values:
            self.values[fam][0] = 1.0
        self.diagnostics: list[str] = []

    def put(self, keys: str, value: complex, uses: tuple[str, ...] = ()) -> None:
        for key in keys.split():
            self.values[key[0]][int(key[1:]) - 1] = value
        small = [n for n in uses if self.z > 0 and abs(self.z * self.dk[n]) < _LIMIT_REPORT]
        if small:
            for key in keys.split():
                self.diagnostics.append(f"{key}: limit branch for {', '.join(small)}")


def _fill(t: _Table, g: float, chi: float, Gam: float, z: float, strict: bool, ka1: float):
    d = t.dk
    S, A, D = d["dkS"], d["dkA"], d["dkD"]
    k1, k2, k3, k4 = d["dk1"], d["dk2"], d["dk3"], d["dk4"]
    E = lambda x: _E(x, z)  # noqa: E731
    F = lambda x: _F(x, z)  # noqa: E731
    Q = lambda a, b: _Q(a, b, z)  # noqa: E731

    # probe
    t.put("f2", Gam * E(D), ("dkD",))
    t.put("f3 f4", Gam * g * Q(D, k3), ("dkD", "dkS", "dk3"))
    if strict:
        # as printed: e^{iz dk4} in place of e^{-iz dk4}; singular at dkA = 0
        t.put("f5 f6", Gam * chi * (E(D) + E(k4)) / A, ("dkA", "dkD", "dk4"))
        f8 = -Gam**2 * F(D)
        t.put("f8", f8, ("dkD",))
        t.put("f7", f8 - Gam**2 * F(D) * cmath.exp(1j * z * t.dk["k_p"]), ("dkD",))
    else:
        t.put("f5 f6", Gam * chi * Q(-k4, D), ("dkA", "dkD", "dk4"))
        t.put("f7 f8", -Gam**2 * F(D), ("dkD",))

    # pumps: identical ratio tables for a1 (g) and a2 (h)
    for fam in ("g", "h"):
        n = lambda i: f"{fam}{i}"  # noqa: E731
        t.put(n(2), g * E(S), ("dkS",))
        t.put(n(3), chi * E(-A), ("dkA",))
        t.put(n(4), Gam * E(-D), ("dkD",))
        t.put(n(5), -g * chi * Q(S, k2), ("dkA", "dkS", "dk2"))
        t.put(n(6), -g * chi * Q(-k2, -A), ("dkA", "dkS", "dk2"))
        g7 = -Gam * g * Q(S, k3)
        t.put(n(8), -Gam * g * Q(-k3, -D), ("dkD", "dkS", "dk3"))
        t.put(n(9), -Gam * chi * Q(-A, -k4), ("dkA", "dkD", "dk4"))
        if strict and fam == "g":
            # bare "dk" in the printed numerator read as dkA; singular at dk4 = 0
            num = A * (1.0 - cmath.exp(-1j * z * D)) - D * cmath.exp(1j * z * k4)
            t.put(n(10), Gam * chi * num / (A * D * k4), ("dkA", "dkD", "dk4"))
        else:
            t.put(n(10), -Gam * chi * Q(k4, -D), ("dkA", "dkD", "dk4"))
        g11 = g * g * F(S)
        t.put(n(11), g11, ("dkS",))
        t.put(f"{n(12)} {n(13)}", -g11, ("dkS",))
        g14 = chi * chi * F(-A)
        t.put(f"{n(14)} {n(15)}", g14, ("dkA",))
        t.put(n(17), -g14, ("dkA",))
        g16 = Gam * Gam * F(-D)
        t.put(n(16), g16, ("dkD",))
        t.put(n(18), -g16, ("dkD",))
        g19 = -g * chi * (Q(-k1, -A) - Q(-k1, S))
        if strict and fam == "h":
            # stray pump-1 free phase printed in front of h7 and h19
            lead = cmath.exp(1j * z * ka1)
            g7 = g7 * lead
            g19 = g19 * lead
        t.put(n(7), g7, ("dkD", "dkS", "dk3"))
        t.put(n(19), g19, ("dkA", "dkS", "dk1"))

    # Stokes
    t.put("j2", g * E(-S), ("dkS",))
    t.put("j3", -g * chi * Q(k1, -S), ("dkA", "dkS", "dk1"))
    t.put("j4 j5", g * chi * Q(-S, -k2), ("dkA", "dkS", "dk2"))
    t.put("j6 j7", g * Gam * Q(-S, -k3), ("dkD", "dkS", "dk3"))
    j8 = g * g * F(-S)
    t.put("j8", j8, ("dkS",))
    t.put("j9 j10", -j8, ("dkS",))

    # phonon
    t.put("k2", g * E(-S), ("dkS",))
    t.put("k3", chi * E(-A), ("dkA",))
    t.put("k4 k5", g * Gam * Q(-S, -k3), ("dkD", "dkS", "dk3"))
    t.put("k6 k7", -Gam * chi * Q(-A, -k4), ("dkA", "dkD", "dk4"))
    k8 = -chi * chi * F(-A)
    t.put("k8", k8, ("dkA",))
    t.put("k11 k12", -k8, ("dkA",))
    if strict:
        # printed with e^{+iz dkS}; leaves an O(z) term and is singular at dkS = 0
        k9 = -g * g * (F(S) - 2j * z / S)
    else:
        k9 = -g * g * F(-S)
    t.put("k9 k10", k9, ("dkS",))
    t.put("k13", -k9, ("dkS",))
    k14 = g * chi * (Q(-S, -k2) - Q(-k2, -A))
    t.put("k14 k15", k14, ("dkA", "dkS", "dk2"))
    # no closed form is printed for k16; it coincides with k14 / k15
    t.put("k16", 0.0 if strict else k14, ("dkA", "dkS", "dk2"))

    # anti-Stokes
    t.put("l2", chi * E(A), ("dkA",))
    t.put("l3 l4", g * chi * Q(A, k2), ("dkA", "dkS", "dk2"))
    t.put("l5", g * chi * Q(A, k1), ("dkA", "dkS", "dk1"))
    t.put("l6 l7", Gam * chi * Q(A, k4), ("dkA", "dkD", "dk4"))
    t.put("l8 l9 l10", -chi * chi * F(A), ("dkA",))


def eval_coefficients(s: Scenario, z: float, strict: bool = False) -> CoefficientSet:
    """Evaluate every coefficient of the perturbative solution at length ``z``.

    Parameters
    ----------
    s : Scenario
        Supplies couplings, mismatches and (for the free phases) wave vectors.
    z : float
        Propagation length, ``z >= 0``.
    strict : bool
        Use the formulas exactly as printed, including the entries that disagree
        with the exact dynamics (f5-f7, g10, h7, h19, k9, k10, k13, k16).  Meant
        for auditing only; the printed variants are not limit-safe.

    Returns
    -------
    CoefficientSet
        Ratios to the free phase, the free phases, and limit-branch diagnostics.
    """
    if z < 0:
        raise ValueError(f"z must be >= 0, got {z}")
    m = s.mismatches
    k = s.k
    dk = m.as_dict()
    dk["k_p"] = k.k_p
    t = _Table(z, dk)
    c = s.couplings
    _fill(t, c.g, c.chi, c.Gamma, z, strict, k.k_a1)
    leading = {
        "f": cmath.exp(1j * z * k.k_p),
        "g": cmath.exp(1j * z * k.k_a1),
        "h": cmath.exp(1j * z * k.k_a2),
        "j": cmath.exp(1j * z * k.k_b),
        "k": cmath.exp(1j * z * k.k_c),
        "l": cmath.exp(1j * z * k.k_d),
    }
    return CoefficientSet(z, t.values, leading, strict, tuple(t.diagnostics))


def coefficients_to_csv(cs: CoefficientSet) -> str:
    """Debug dump: one row per coefficient (family, index, re, im, limit-branch flag)."""
    flagged = {d.split(":")[0] for d in cs.diagnostics}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "index", "re", "im", "limit_branch"])
    for fam, size in FAMILY_SIZES.items():
        for n in range(1, size + 1):
            v = cs[f"{fam}{n}"]
            w.writerow([fam, n, repr(v.real), repr(v.imag), int(f"{fam}{n}" in flagged)])
    return buf.getvalue()


def commutator_defect(s: Scenario, z: float, mode: str = "a1", strict: bool = False) -> float:
    """``|<[a(z), a(z)^+]> - 1|`` for the truncated operator solution of ``mode``.

    The commutator is expanded without dropping the third- and fourth-order cross
    terms and averaged over the coherent input, so the result measures how far the
    second-order solution is from unitary.  It vanishes for free propagation and
    scales as the third power of ``z`` otherwise.
    """
    from .expansion import evaluate_polynomial, moment

    cs = eval_coefficients(s, z, strict=strict)
    comm = moment((mode, False), (mode, True), max_order=4) - moment((mode, True), (mode, False), max_order=4)
    return abs(evaluate_polynomial(comm, cs, s.amplitudes) - 1.0)
