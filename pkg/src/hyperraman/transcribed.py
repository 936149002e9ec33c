"""Printed closed forms of the witnesses, transcribed term by term.

Each function takes a coefficient accessor ``c`` (``c("g5")`` returns the full
complex coefficient) and the six initial amplitudes, and returns the complex value
of the expression; ``+ c.c.`` is evaluated as ``x + conj(x)``.  Nothing here is
corrected: these are kept as a reference against which the derived second-order
polynomials of :mod:`hyperraman.expansion` are checked.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["TRANSCRIBED"]


def _cc(x: complex) -> complex:
    return x + np.conj(x)


class _Amps:
    """Amplitudes, conjugates and squared magnitudes under short names."""

    def __init__(self, amps):
        if hasattr(amps, "as_tuple"):
            amps = amps.as_tuple()
        self.al, self.al1, self.al2, self.be, self.ga, self.de = (complex(v) for v in amps)
        self.P, self.A1, self.A2, self.B, self.C, self.Dd = (
            abs(v) ** 2 for v in (self.al, self.al1, self.al2, self.be, self.ga, self.de)
        )

    @staticmethod
    def cj(x: complex) -> complex:
        return np.conj(x)


def _fam(c: Callable[[str], complex], letter: str) -> Callable[[int], complex]:
    return lambda n: c(f"{letter}{n}")


def _abs2(x: complex) -> float:
    return abs(x) ** 2


def S_a1_b(c, amps):
    G = _fam(c, "g")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = A1 / 2
    out += _abs2(G(2)) * (A1**2 * A2 + B**2 * C - 0.5 * (A1 - A2 - 1) * B * C - 0.5 * A1 * A2 * (3 * B + C + 1))
    out += _abs2(G(3)) * (
        (A2 - C) * B * Dd + (A2 + 1) * (C + 1) * Dd / 2 + 0.5 * A1 * Dd * (A2 + C + 1) - A1 * A2 * C / 2
    )
    out += _abs2(G(4)) * (P / 2 * (2 * B + A2 + A1 + 1) - A1 * A2 / 2)
    br = (
        G(1) * cj(G(2)) / 2 * x.al1 * x.al2 * cj(x.be) * cj(x.ga)
        + G(1) * cj(G(3)) / 2 * x.al1 * x.al2 * x.ga * cj(x.de)
        + G(1) * cj(G(4)) / 2 * cj(x.al) * x.al1 * x.al2
        + (cj(G(1)) * G(6) - G(1) * cj(G(5))) / 2 * A1 * cj(x.be) * cj(x.ga) ** 2 * x.de
        + (cj(G(1)) * G(8) - G(1) * cj(G(7))) / 2 * A1 * x.al * cj(x.be) * cj(x.ga)
        + (cj(G(1)) * G(9) + G(1) * cj(G(10))) / 2 * A1 * x.al * x.ga * cj(x.de)
        + (B + (A2 + 1) / 2) * _g234(G, x)
    )
    return out + _cc(br)


def _g234(G, x):
    cj = x.cj
    return (
        G(2) * cj(G(3)) * x.be * x.ga**2 * cj(x.de)
        + G(2) * cj(G(4)) * cj(x.al) * x.be * x.ga
        + G(3) * cj(G(4)) * cj(x.al) * cj(x.ga) * x.de
    )


def S_a1_c(c, amps):
    G, K = _fam(c, "g"), _fam(c, "k")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = A1 / 2
    out += _abs2(G(2)) * (A1 * A2 / 2 * (2 * A1 - B - 3 * C - 1) - 0.5 * (A1 - A2 - 2 * C - 1) * B * C)
    out += _abs2(G(3)) * (
        (A1**2 + C**2) * Dd
        + 3 * Dd * (A2 + 1) * (A1 + C)
        + A1 * Dd / 2 * (A2 + 3 * C + 1)
        + Dd * (A2 + (A2 + 1) * (C + 1) / 2)
        - 1.5 * A1 * A2 * C
    )
    out += _abs2(G(4)) * (P * (C + (A1 + A2 + 1) / 2) - A1 * A2 / 2)
    br = (
        G(1) * cj(G(2)) / 2 * x.al1 * x.al2 * cj(x.be) * cj(x.ga)
        + 1.5 * G(1) * cj(G(3)) * x.al1 * x.al2 * x.ga * cj(x.de)
        + G(1) * cj(G(4)) / 2 * cj(x.al) * x.al1 * x.al2
        + (G(1) * cj(G(5)) + 5 * G(1) * cj(G(6))) / 2 * A1 * x.be * x.ga**2 * cj(x.de)
        + (cj(G(1)) * G(8) - G(1) * cj(G(7))) / 2 * x.al * A1 * cj(x.be) * cj(x.ga)
        + (cj(G(1)) * G(10) + 3 * G(1) * cj(G(9))) / 2 * x.al * A1 * x.ga * cj(x.de)
        + G(2) * cj(G(3)) * (-A1 + A2 + C + 1 + (A2 + 1) / 2) * x.be * x.ga**2 * cj(x.de)
        + (A2 + 1) / 2 * (G(2) * cj(G(4)) * cj(x.al) * x.be * x.ga + 3 * G(3) * cj(G(4)) * cj(x.al) * cj(x.ga) * x.de)
        + C * (G(2) * cj(G(4)) * cj(x.al) * x.be * x.ga + G(3) * cj(G(4)) * cj(x.al) * cj(x.ga) * x.de)
        + ((G(1) * cj(G(19)) + cj(G(1)) * G(19)) / 2 - K(2) * cj(K(3)))
        * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
    )
    return out + _cc(br)


def S_a1_d(c, amps):
    G = _fam(c, "g")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = _abs2(G(2)) * ((Dd + (A1 + A2 + 1) / 2) * B * C - A1 * A2 / 2 * (B + C + 1))
    out += _abs2(G(3)) * (
        -A1 * Dd / 2 * (A2 + C + 1)
        + Dd / 2 * (A2 + C + 1)
        + Dd**2 * (A2 + C + 1)
        + A2 * C / 2 * (A1 + Dd)
    )
    out += _abs2(G(4)) * (P * Dd + P / 2 * (A2 + A1 + 1) - A1 * A2 / 2)
    out += A1 / 2
    br = (
        G(1) * cj(G(2)) / 2 * x.al1 * x.al2 * cj(x.be) * cj(x.ga)
        + G(1) * cj(G(3)) / 2 * x.al1 * x.al2 * x.ga * cj(x.de)
        + G(1) * cj(G(4)) / 2 * cj(x.al) * x.al1 * x.al2
        + (cj(G(1)) * G(5) - G(1) * cj(G(6))) / 2 * A1 * x.be * x.ga**2 * cj(x.de)
        + (G(1) * cj(G(7)) + cj(G(1)) * G(8)) / 2 * x.al * A1 * cj(x.be) * cj(x.ga)
        + (cj(G(1)) * G(10) - G(1) * cj(G(9))) / 2 * x.al * A1 * x.ga * cj(x.de)
        + G(1) * cj(G(19)) / 2 * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
        + (Dd + (A2 + 1) / 2) * _g234(G, x)
    )
    return out + _cc(br)


def S_b_c(c, amps):
    J, K = _fam(c, "j"), _fam(c, "k")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C = x.A1, x.A2, x.B, x.C
    s = A1 + A2 + 1
    out = B / 2 + _abs2(J(2)) / 2 * (A1 * A2 * (7 * B + 7 * C + 3) - 3 * B * C * s)
    br = (
        1.5 * J(1) * cj(J(2)) * cj(x.al1) * cj(x.al2) * x.be * x.ga
        + 1.5 * J(1) * cj(J(6)) * s * cj(x.al) * x.be * x.ga
        + 2.5 * J(1) * cj(J(4)) * s * x.be * x.ga**2 * cj(x.de)
        + (K(2) * cj(K(3)) + cj(J(1)) * J(3) / 2) * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
    )
    return out + _cc(br)


def S_b_d(c, amps):
    J, L = _fam(c, "j"), _fam(c, "l")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd = x.A1, x.A2, x.B, x.C, x.Dd
    s = A1 + A2 + 1
    out = B / 2 + _abs2(J(2)) * (A1 * A2 * (Dd + (B + C + 1) / 2) - 0.5 * s * B * C)
    br = (
        (cj(L(1)) * L(5) + cj(J(1)) * J(3) / 2) * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
        + cj(J(1)) * J(2) / 2 * x.al1 * x.al2 * cj(x.be) * cj(x.ga)
        + J(1) * cj(J(4)) / 2 * s * x.be * x.ga**2 * cj(x.de)
        + J(1) * cj(J(6)) / 2 * s * cj(x.al) * x.be * x.ga
    )
    return out + _cc(br)


def S_c_d(c, amps):
    K = _fam(c, "k")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd = x.A1, x.A2, x.B, x.C, x.Dd
    s = A1 + A2 + 1
    out = C / 2 + _abs2(K(2)) * (A1 * A2 * (B + Dd + 1 + C / 2) - 0.5 * s * B * C)
    out += _abs2(K(3)) * (A1 * A2 * (Dd - C) / 2 + s * Dd * (Dd + 1.5 * C + 2.5))
    br = (
        K(1) * cj(K(2)) / 2 * cj(x.al1) * cj(x.al2) * x.be * x.ga
        + K(1) * cj(K(3)) / 2 * x.al1 * x.al2 * x.ga * cj(x.de)
        + K(1) * cj(K(4)) / 2 * s * cj(x.al) * x.be * x.ga
        + K(1) * cj(K(6)) / 2 * s * x.al * x.ga * cj(x.de)
        + K(1) * cj(K(14)) / 2 * s * x.be * x.ga**2 * cj(x.de)
        + K(2) * cj(K(3)) * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
    )
    return out + _cc(br)


def S_d_a1(c, amps):
    G, L = _fam(c, "g"), _fam(c, "l")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = Dd / 2 + _abs2(G(2)) * B * C * Dd
    out += _abs2(G(3)) * (
        (A2 + C + 1) * Dd * (Dd - 0.5)
        - 1.5 * A1 * Dd * (A2 + 1)
        - C * Dd / 2 * (3 * A1 + A2)
        + A1 * A2 * C / 2
    )
    out += _abs2(G(4)) * P * Dd
    br = (
        (-G(1) * cj(G(6)) + cj(L(1)) * L(3) / 2) * A1 * x.be * x.ga**2 * cj(x.de)
        + (-G(1) * cj(G(9)) + cj(L(1)) * L(6) / 2) * A1 * x.al * x.ga * cj(x.de)
        + Dd * _g234(G, x)
        + cj(L(1)) * L(2) * x.al1 * x.al2 * x.ga * cj(x.de) / 2
        + cj(L(1)) * L(3) * x.be * x.ga**2 * cj(x.de) / 2
        + cj(L(1)) * L(4) * A2 * x.be * x.ga**2 * cj(x.de) / 2
        + cj(L(1)) * L(5) * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de) / 2
        + cj(L(1)) * L(6) * (A1 + 1) * x.al * x.ga * cj(x.de) / 2
        + cj(L(1)) * L(7) * A2 * cj(x.al1) ** 2 * cj(x.al2) ** 2 * x.be * x.de / 2
    )
    return out + _cc(br)


def E_a1_b(c, amps):
    G = _fam(c, "g")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = _abs2(G(2)) * (A1**2 * A2 + B**2 * C - A1 * B * (A2 + C))
    out += _abs2(G(3)) * (A2 + C) * B * Dd + _abs2(G(4)) * P * B
    br = (
        -G(1) * cj(G(5)) * A1 * cj(x.be) * cj(x.ga) ** 2 * x.de
        - G(1) * cj(G(7)) * A1 * x.al * cj(x.be) * cj(x.ga)
        + B * _g234(G, x)
    )
    return out + _cc(br)


def E_a1_c(c, amps):
    G, K = _fam(c, "g"), _fam(c, "k")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = _abs2(G(2)) * (A1 - C) * (A1 * A2 - B * C)
    out += _abs2(G(3)) * (
        3 * A1 * (A2 + 1) * Dd + (A1 + A2 + 1) * C * Dd + A1**2 * Dd + A2 * Dd - A1 * A2 * C
    )
    out += _abs2(G(4)) * P * C
    br = (
        G(1) * cj(G(3)) * x.al1 * x.al2 * x.ga * cj(x.de)
        + 2 * G(1) * cj(G(6)) * A1 * x.be * x.ga**2 * cj(x.de)
        + G(2) * cj(G(3)) * (-A1 + A2 + C + 1) * x.be * x.ga**2 * cj(x.de)
        - G(1) * cj(G(7)) * A1 * x.al * cj(x.be) * cj(x.ga)
        + cj(G(2)) * G(4) * C * x.al * cj(x.be) * cj(x.ga)
        + G(1) * cj(G(9)) * A1 * x.al * x.ga * cj(x.de)
        + cj(G(3)) * G(4) * (A2 + C + 1) * x.al * x.ga * cj(x.de)
        - K(2) * cj(K(3)) * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
    )
    return out + _cc(br)


def E_a1_d(c, amps):
    G, L = _fam(c, "g"), _fam(c, "l")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = _abs2(G(2)) * B * C * Dd
    out += _abs2(G(3)) * (Dd + 1) * ((A2 + C + 1) * Dd - A2 * C)
    out += _abs2(G(4)) * P * Dd
    out -= _abs2(L(2)) * (A1 * (A2 + C + 1) * Dd + (A2 + C + 1) * Dd - A2 * C * (Dd + 1))
    br = (
        -G(1) * cj(G(6)) * A1 * x.be * x.ga**2 * cj(x.de)
        - G(1) * cj(G(9)) * A1 * x.al * x.ga * cj(x.de)
        + Dd * _g234(G, x)
    )
    return out + _cc(br)


def E_b_c(c, amps):
    J, K = _fam(c, "j"), _fam(c, "k")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C = x.A1, x.A2, x.B, x.C
    s = A1 + A2 + 1
    out = _abs2(J(2)) * (A1 * A2 * (3 * B + 3 * C + 1) - B * C * s)
    br = (
        J(1) * cj(J(2)) * cj(x.al1) * cj(x.al2) * x.be * x.ga
        + K(2) * cj(K(3)) * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
        + J(1) * cj(J(6)) * s * cj(x.al) * x.be * x.ga
        + 2 * J(1) * cj(J(4)) * s * x.be * x.ga**2 * cj(x.de)
    )
    return out + _cc(br)


def E_b_d(c, amps):
    J, L = _fam(c, "j"), _fam(c, "l")
    x = _Amps(amps)
    br = np.conj(L(1)) * L(5) * x.al1**2 * x.al2**2 * np.conj(x.be) * np.conj(x.de)
    return _abs2(J(2)) * x.A1 * x.A2 * x.Dd + _cc(br)


def E_c_d(c, amps):
    K = _fam(c, "k")
    x = _Amps(amps)
    s = x.A1 + x.A2 + 1
    return complex(
        _abs2(K(2)) * x.A1 * x.A2 * x.Dd + _abs2(K(3)) * s * x.Dd * (x.C + x.Dd + 2)
    )


def Ep_a1_b(c, amps):
    G, J = _fam(c, "g"), _fam(c, "j")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = _abs2(G(2)) * (B**2 * C + A1**2 * A2 + A1 * A2 * B + A1 * B * C)
    out += _abs2(G(3)) * (A2 + C + 1) * B * Dd + _abs2(G(4)) * P * B
    br = (
        B * _g234(G, x)
        - cj(J(1)) * J(4) * A1 * cj(x.be) * cj(x.ga) ** 2 * x.de
        - J(1) * cj(J(6)) * A1 * cj(x.al) * x.be * x.ga
    )
    return out + _cc(br)


def Ep_a1_c(c, amps):
    G, K = _fam(c, "g"), _fam(c, "k")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = _abs2(G(2)) * (B * C**2 + A1**2 * A2 + A1 * A2 * C - A1 * B * C)
    out += _abs2(G(3)) * (
        (A2 + C + 1) * C * Dd - 2 * A2 * C * Dd + A1**2 * Dd - A1 * A2 * Dd + A1 * Dd - A2 * Dd
    )
    out += _abs2(G(4)) * P * C
    br = (
        -K(1) * cj(K(14)) * A1 * x.be * x.ga**2 * cj(x.de)
        - K(1) * cj(K(4)) * A1 * cj(x.al) * x.be * x.ga
        - cj(K(1)) * K(6) * A1 * cj(x.al) * cj(x.ga) * x.de
        + G(2) * cj(G(3)) * (C - A2) * x.be * x.ga**2 * cj(x.de)
        + G(2) * cj(G(4)) * C * cj(x.al) * x.be * x.ga
        + G(3) * cj(G(4)) * (C - A2) * cj(x.al) * cj(x.ga) * x.de
        - K(2) * cj(K(3)) * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
    )
    return out + _cc(br)


def Ep_a1_d(c, amps):
    G, L = _fam(c, "g"), _fam(c, "l")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = _abs2(G(2)) * (B * C + A1 * C + A1 * A2 + A1) * Dd
    out += _abs2(G(3)) * (A2 + C + 1) * Dd**2 + _abs2(G(4)) * P * Dd
    br = (
        Dd * _g234(G, x)
        - cj(L(1)) * L(3) * A1 * x.be * x.ga**2 * cj(x.de)
        - L(1) * cj(L(6)) * A1 * cj(x.al) * cj(x.ga) * x.de
    )
    return out + _cc(br)


def Ep_b_c(c, amps):
    J, K = _fam(c, "j"), _fam(c, "k")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd = x.A1, x.A2, x.B, x.C, x.Dd
    s = A1 + A2 + 1
    out = -_abs2(J(2)) * A1 * A2 * (B + C + 1) + _abs2(K(3)) * s * B * Dd
    br = (
        K(1) * cj(K(2)) * cj(x.al1) * cj(x.al2) * x.be * x.ga
        + K(1) * cj(K(4)) * s * cj(x.al) * x.be * x.ga
        + K(2) * cj(K(3)) * x.al1**2 * x.al2**2 * cj(x.be) * cj(x.de)
        + (J(1) * cj(J(2)) * K(1) * cj(K(3)) + K(1) * cj(K(14))) * s * x.be * x.ga**2 * cj(x.de)
    )
    return out - _cc(br)


def Ep_b_d(c, amps):
    J, L = _fam(c, "j"), _fam(c, "l")
    x = _Amps(amps)
    br = np.conj(L(1)) * L(5) * x.al1**2 * x.al2**2 * np.conj(x.be) * np.conj(x.de)
    return _abs2(J(2)) * x.A1 * x.A2 * x.Dd - _cc(br)


def Ep_c_d(c, amps):
    K = _fam(c, "k")
    x = _Amps(amps)
    s = x.A1 + x.A2 + 1
    return complex(
        _abs2(K(2)) * x.A1 * x.A2 * x.Dd + _abs2(K(3)) * s * (x.C + x.Dd) * x.Dd
    )


def D_a1(c, amps):
    G = _fam(c, "g")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd, P = x.A1, x.A2, x.B, x.C, x.Dd, x.P
    out = 2 * _abs2(G(2)) * A1 * B * C + 2 * _abs2(G(3)) * A1 * (A2 + C + 1) * Dd
    out += 2 * _abs2(G(4)) * P * A1
    br = (
        cj(G(1)) * G(2) * cj(G(1)) * G(3) * cj(x.al1) ** 2 * cj(x.al2) ** 2 * x.be * x.de
        + 2 * A1 * _g234(G, x)
    )
    return out + _cc(br)


def D_b(c, amps):
    J = _fam(c, "j")
    x = _Amps(amps)
    return complex(2 * _abs2(J(2)) * x.A1 * x.A2 * x.B)


def D_c(c, amps):
    K = _fam(c, "k")
    x = _Amps(amps)
    cj = x.cj
    A1, A2, B, C, Dd = x.A1, x.A2, x.B, x.C, x.Dd
    out = 2 * _abs2(K(2)) * A1 * A2 * (B + 1) * C + 2 * _abs2(K(3)) * (A1 + 1) * (A2 + 1) * C * Dd
    br = cj(K(1)) * K(2) * cj(K(1)) * K(3) * (A1 + A2 + 1) * cj(x.be) * cj(x.ga) ** 2 * x.de
    return out + _cc(br)


def D_d(c, amps):
    L = _fam(c, "l")
    x = _Amps(amps)
    return complex(2 * _abs2(L(2)) * x.A1 * x.A2 * x.C * x.Dd)


# keyed by (kind, i, j) with kind in {"S", "E", "E'", "D"}
TRANSCRIBED = {
    ("S", "a1", "b"): S_a1_b,
    ("S", "a1", "c"): S_a1_c,
    ("S", "a1", "d"): S_a1_d,
    ("S", "b", "c"): S_b_c,
    ("S", "b", "d"): S_b_d,
    ("S", "c", "d"): S_c_d,
    ("S", "d", "a1"): S_d_a1,
    ("E", "a1", "b"): E_a1_b,
    ("E", "a1", "c"): E_a1_c,
    ("E", "a1", "d"): E_a1_d,
    ("E", "b", "c"): E_b_c,
    ("E", "b", "d"): E_b_d,
    ("E", "c", "d"): E_c_d,
    ("E'", "a1", "b"): Ep_a1_b,
    ("E'", "a1", "c"): Ep_a1_c,
    ("E'", "a1", "d"): Ep_a1_d,
    ("E'", "b", "c"): Ep_b_c,
    ("E'", "b", "d"): Ep_b_d,
    ("E'", "c", "d"): Ep_c_d,
    ("D", "a1", None): D_a1,
    ("D", "b", None): D_b,
    ("D", "c", None): D_c,
    ("D", "d", None): D_d,
}
