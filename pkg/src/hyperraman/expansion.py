"""Second-order moments computed directly from the perturbative operator solution.

Each mode operator at length ``z`` is written as a sum of coefficient-weighted words
in the initial ladder operators (the table ``WORDS``).  A moment such as
``<b^+ b d^+ d>`` is expanded into products of those words, truncated at second
order in the couplings, and every word product is normal ordered mode by mode, so
its coherent-state expectation is a monomial in the amplitudes and their conjugates.

The result is a compiled polynomial: a list of terms
``scalar * prod(coefficients) * prod(amplitude powers)``.  Compilation happens once
per witness; evaluation is a vectorised product over the terms.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kernels import FAMILY_SIZES, CoefficientSet, coefficient_order

__all__ = [
    "MODE_FAMILY",
    "WORDS",
    "Polynomial",
    "moment",
    "witness_polynomial",
    "evaluate_polynomial",
    "describe",
]

# mode index order: p, a1, a2, b, c, d
_MODE_INDEX = {"p": 0, "1": 1, "2": 2, "b": 3, "c": 4, "d": 5}
MODE_FAMILY = {"p": "f", "a1": "g", "a2": "h", "b": "j", "c": "k", "d": "l"}
_MODE_NAMES = ("p", "a1", "a2", "b", "c", "d")

# operator words multiplying each coefficient, in the printed operator order;
# "x+" is the creation operator of mode x
WORDS = {
    "f": ("p", "1 2", "1 1+ b c", "2+ 2 b c", "1 1+ c+ d", "2+ 2 c+ d", "1 1+ p", "2+ 2 p"),
    "g": (
        "1", "2+ b c", "2+ c+ d", "p 2+", "1 b c c d+", "1 b+ c+ c+ d", "p+ 1 b c",
        "p 1 b+ c+", "p+ 1 c+ d", "p 1 c d+", "1 b+ b c+ c", "1 2+ 2 b b+",
        "1 2+ 2 c+ c", "1 2+ 2 d+ d", "1 c c+ d+ d", "p+ p 1", "1 2+ 2 c+ c",
        "1 2+ 2", "1+ 2+ 2+ b d",
    ),
    "h": (
        "2", "1+ b c", "1+ c+ d", "p 1+", "2 b c c d+", "2 b+ c+ c+ d", "p+ 2 b c",
        "p 2 b+ c+", "p+ 2 c+ d", "p 2 c d+", "2 b+ b c+ c", "1+ 1 2 b b+",
        "1+ 1 2 c+ c", "2 1+ 1 d+ d", "2 c c+ d+ d", "p+ p 2", "1+ 1 2 c+ c",
        "1+ 1 2", "1+ 1+ 2+ b d",
    ),
    "j": (
        "b", "1 2 c+", "1 1 2 2 d+", "1 1+ c+ c+ d", "2+ 2 c+ c+ d", "p 1 1+ c+",
        "p 2+ 2 c+", "1+ 1 2+ 2 b", "1 1+ b c+ c", "2+ 2 b c+ c",
    ),
    "k": (
        "c", "1 2 b+", "1+ 2+ d", "1 1+ p b+", "2+ 2 p b+", "1+ 1 p+ d", "2 2+ p+ d",
        "1+ 1 2+ 2 c", "1 1+ b+ b c", "2+ 2 b+ b c", "1+ 1 c d+ d", "2 2+ c d+ d",
        "1+ 1 2+ 2 c", "1+ 1 b+ c+ d", "2+ 2 b+ c+ d", "b+ c+ d",
    ),
    "l": (
        "d", "1 2 c", "1 1+ b c c", "2+ 2 b c c", "1 1 2 2 b+", "1 1+ p c", "2+ 2 p c",
        "1 1+ c+ c d", "2+ 2 c+ c d", "1 1+ 2 2+ d",
    ),
}

# flat coefficient index: position of "fam n" in the concatenated family tables
_FLAT = {}
for _fam, _size in FAMILY_SIZES.items():
    for _n in range(1, _size + 1):
        _FLAT[f"{_fam}{_n}"] = len(_FLAT)
N_COEFFS = len(_FLAT)


def _parse(word: str) -> tuple[tuple[int, bool], ...]:
    return tuple((_MODE_INDEX[t[0]], t.endswith("+")) for t in word.split())


_PARSED = {fam: tuple(_parse(w) for w in ws) for fam, ws in WORDS.items()}


@lru_cache(maxsize=None)
def _single_mode_expectation(seq: tuple[bool, ...]) -> tuple[tuple[int, int, int], ...]:
    """Coherent expectation of a one-mode word (``True`` = creation).

    Returns ``((m, n, count), ...)`` meaning ``sum count * conj(amp)**m * amp**n``.
    """
    for i in range(len(seq) - 1):
        if not seq[i] and seq[i + 1]:
            swapped = seq[:i] + (True, False) + seq[i + 2 :]
            removed = seq[:i] + seq[i + 2 :]
            acc: dict[tuple[int, int], int] = defaultdict(int)
            for m, n, c in _single_mode_expectation(swapped) + _single_mode_expectation(removed):
                acc[(m, n)] += c
            return tuple((m, n, c) for (m, n), c in sorted(acc.items()) if c)
    m = sum(seq)
    return ((m, len(seq) - m, 1),)


def _word_expectation(tokens: tuple[tuple[int, bool], ...]) -> list[tuple[tuple[int, ...], int]]:
    """Normal-ordered coherent expectation of a multi-mode word.

    Returns ``[(exps, count)]`` with ``exps`` of length 12: for each mode the power of
    the conjugate amplitude followed by the power of the amplitude.
    """
    per_mode: list[list[bool]] = [[] for _ in range(6)]
    for mode, dag in tokens:
        per_mode[mode].append(dag)
    out = [((), 1)]
    for mode in range(6):
        terms = _single_mode_expectation(tuple(per_mode[mode]))
        out = [(e + (m, n), c * cc) for e, c in out for m, n, cc in terms]
    return out


@dataclass(frozen=True)
class _Factor:
    """One operator in a moment: the annihilator of ``mode`` or its adjoint."""

    mode: str
    dagger: bool

    def terms(self):
        fam = MODE_FAMILY[self.mode]
        for idx, word in enumerate(_PARSED[fam], start=1):
            order = coefficient_order(fam, idx)
            if self.dagger:
                word = tuple((m, not d) for m, d in reversed(word))
            yield (f"{fam}{idx}", self.dagger), order, word


def _canonical(factors) -> tuple:
    """Sorted factor tuple with ``c1 conj(c1)`` pairs removed (leading factors are unit phases)."""
    factors = list(factors)
    for fam in FAMILY_SIZES:
        lead = f"{fam}1"
        while (lead, False) in factors and (lead, True) in factors:
            factors.remove((lead, False))
            factors.remove((lead, True))
    return tuple(sorted(factors))


class Polynomial:
    """Truncated polynomial in coefficients and amplitudes.

    Keys are ``(coeff_factors, exps)`` with ``coeff_factors`` a sorted tuple of
    ``(coefficient_name, conjugated)``; values are exact integer or rational weights.
    """

    def __init__(self, terms: dict | None = None, max_order: int = 2):
        self.terms: dict[tuple, float] = dict(terms or {})
        self.max_order = max_order
        self._compiled = None

    @staticmethod
    def _order(factors) -> int:
        return sum(coefficient_order(name[0], int(name[1:])) for name, _ in factors)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Polynomial({k: v for k, v in out.items() if v}, self.max_order)

    def scale(self, s: float) -> "Polynomial":
        return Polynomial({k: v * s for k, v in self.terms.items()}, self.max_order)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out: dict[tuple, float] = defaultdict(float)
        for (fa, ea), va in self.terms.items():
            oa = self._order(fa)
            for (fb, eb), vb in other.terms.items():
                if oa + self._order(fb) > self.max_order:
                    continue
                key = (_canonical(fa + fb), tuple(x + y for x, y in zip(ea, eb)))
                out[key] += va * vb
        return Polynomial({k: v for k, v in out.items() if v}, self.max_order)

    def conj(self) -> "Polynomial":
        out = {}
        for (factors, exps), v in self.terms.items():
            f2 = tuple(sorted((n, not c) for n, c in factors))
            e2 = tuple(exps[i ^ 1] for i in range(12))
            out[(f2, e2)] = v
        return Polynomial(out, self.max_order)

    def __len__(self) -> int:
        return len(self.terms)


@lru_cache(maxsize=None)
def moment(*ops: tuple[str, bool], max_order: int = 2) -> Polynomial:
    """Coherent-state expectation of a product of evolved mode operators.

    ``ops`` are ``(mode, dagger)`` pairs in operator order, e.g.
    ``moment(("b", True), ("b", False))`` is ``<b^+(z) b(z)>``.
    """
    factors = [_Factor(m, d) for m, d in ops]
    acc: dict[tuple, float] = defaultdict(float)

    def rec(i, names, order, tokens):
        if i == len(factors):
            key_f = _canonical(names)
            for exps, c in _word_expectation(tokens):
                acc[(key_f, exps)] += c
            return
        for name, o, word in factors[i].terms():
            if order + o <= max_order:
                rec(i + 1, names + (name,), order + o, tokens + word)

    rec(0, (), 0, ())
    return Polynomial({k: v for k, v in acc.items() if v}, max_order)


def _N(mode: str) -> Polynomial:
    return moment((mode, True), (mode, False))


@lru_cache(maxsize=None)
def witness_polynomial(kind: str, i: str, j: str | None = None) -> Polynomial:
    """Second-order polynomial of a witness, straight from its definition.

    ``kind`` is one of ``"S"`` (steering ``i -> j``), ``"E"`` (HZ-1), ``"E'"`` (HZ-2)
    or ``"D"`` (antibunching of mode ``i``).
    """
    if kind == "D":
        second = moment((i, True), (i, True), (i, False), (i, False))
        return second - _N(i) * _N(i)
    if kind in ("S", "E"):
        corr = moment((i, True), (i, False), (j, True), (j, False))
        cross = moment((i, False), (j, True))
        out = corr - cross * cross.conj()
        return out + _N(i).scale(0.5) if kind == "S" else out
    if kind == "E'":
        pair = moment((i, False), (j, False))
        return _N(i) * _N(j) - pair * pair.conj()
    raise ValueError(f"unknown witness kind {kind!r}")


@dataclass(frozen=True)
class _Compiled:
    weights: np.ndarray  # (T,)
    coeff_idx: np.ndarray  # (T, K) into [c, conj(c), 1]
    exps: np.ndarray  # (T, 12)


def _compile(poly: Polynomial) -> _Compiled:
    keys = list(poly.terms)
    width = max((len(f) for f, _ in keys), default=1) or 1
    one = 2 * N_COEFFS
    idx = np.full((len(keys), width), one, dtype=np.int64)
    exps = np.zeros((len(keys), 12), dtype=np.int64)
    w = np.zeros(len(keys))
    for t, (factors, e) in enumerate(keys):
        for s, (name, conj) in enumerate(factors):
            idx[t, s] = _FLAT[name] + (N_COEFFS if conj else 0)
        exps[t] = e
        w[t] = poly.terms[(factors, e)]
    return _Compiled(w, idx, exps)


def evaluate_polynomial(poly: Polynomial, coeffs: CoefficientSet, amps, with_scale: bool = False):
    """Numerical value of a compiled polynomial for one coefficient set.

    With ``with_scale=True`` also returns the sum of the absolute values of the
    individual terms, the natural yardstick for rounding residue.
    """
    comp = poly._compiled
    if comp is None:
        comp = poly._compiled = _compile(poly)
    c = np.empty(2 * N_COEFFS + 1, dtype=complex)
    flat = np.concatenate([coeffs.leading[f] * coeffs.ratios[f] for f in FAMILY_SIZES])
    c[:N_COEFFS] = flat
    c[N_COEFFS : 2 * N_COEFFS] = flat.conj()
    c[-1] = 1.0
    lam = np.asarray(amps.as_tuple() if hasattr(amps, "as_tuple") else amps, dtype=complex)
    base = np.empty(12, dtype=complex)
    base[0::2] = lam.conj()
    base[1::2] = lam
    mono = np.prod(base[None, :] ** comp.exps, axis=1)
    terms = comp.weights * np.prod(c[comp.coeff_idx], axis=1) * mono
    value = complex(np.sum(terms))
    if with_scale:
        return value, float(np.sum(np.abs(terms)))
    return value


_AMP_SYMBOLS = ("alpha", "alpha1", "alpha2", "beta", "gamma", "delta")


def describe(poly: Polynomial, contains: tuple[str, ...] = ()) -> list[str]:
    """Readable listing of the terms, optionally only those using given coefficients.

    Each line reads like ``+1 g1 g6* |alpha1|^2 beta gamma^2 delta*``.
    """
    lines = []
    for (factors, exps), w in sorted(poly.terms.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        names = [n for n, _ in factors]
        if contains and not all(c in names for c in contains):
            continue
        coef = " ".join(n + ("*" if conj else "") for n, conj in factors)
        amp = []
        for m, sym in enumerate(_AMP_SYMBOLS):
            pc, pa = exps[2 * m], exps[2 * m + 1]
            both = min(pc, pa)
            if both:
                amp.append(f"|{sym}|^{2 * both}")
            for k, suffix in ((pa - both, ""), (pc - both, "*")):
                if k:
                    amp.append(sym + suffix + (f"^{k}" if k > 1 else ""))
        lines.append(f"{w:+g} {coef} {' '.join(amp)}".rstrip())
    return lines
