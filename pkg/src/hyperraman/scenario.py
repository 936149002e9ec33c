"""Physical configuration of the probed hyper-Raman coupler.

All quantities are dimensionless; lengths are measured in units of ``1/g`` in the
built-in scenarios, so ``z`` on a grid is the rescaled interaction length ``gz``.
"""

from __future__ import annotations

import cmath
import enum
import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ModeId",
    "CoherentAmplitudes",
    "Couplings",
    "WaveVectors",
    "PhaseMismatches",
    "Scenario",
    "ValidityReport",
    "derive_mismatches",
    "validate_scenario",
    "normalize_phase",
    "load_scenario",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "builtin_scenarios",
    "get_builtin",
]


class ModeId(enum.Enum):
    """The six bosonic modes, in serialization / Fock-indexing order."""

    P = "p"
    A1 = "a1"
    A2 = "a2"
    B = "b"
    C = "c"
    D = "d"

    @property
    def index(self) -> int:
        return _MODE_ORDER.index(self)


_MODE_ORDER = (ModeId.P, ModeId.A1, ModeId.A2, ModeId.B, ModeId.C, ModeId.D)
_AMP_FIELDS = ("alpha", "alpha1", "alpha2", "beta", "gamma", "delta")


def normalize_phase(phi: float) -> float:
    """Map an angle onto ``(-pi, pi]``."""
    out = math.remainder(phi, 2.0 * math.pi)
    if out <= -math.pi:
        out += 2.0 * math.pi
    return out


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class CoherentAmplitudes:
    """Initial coherent amplitudes of the probe, two pumps, Stokes, phonon and anti-Stokes."""

    alpha: complex = 0j
    alpha1: complex = 0j
    alpha2: complex = 0j
    beta: complex = 0j
    gamma: complex = 0j
    delta: complex = 0j

    def __post_init__(self):
        for name in _AMP_FIELDS:
            v = complex(getattr(self, name))
            _check_finite(name, v.real)
            _check_finite(name, v.imag)
            object.__setattr__(self, name, v)

    @classmethod
    def from_polar(cls, **pairs: tuple[float, float]) -> "CoherentAmplitudes":
        """Build from ``name=(magnitude, phase)`` pairs; missing modes are vacuum."""
        kwargs = {}
        for name, (mag, phase) in pairs.items():
            if name not in _AMP_FIELDS:
                raise ValueError(f"unknown amplitude {name!r}")
            if mag < 0:
                raise ValueError(f"magnitude of {name} must be >= 0, got {mag}")
            kwargs[name] = cmath.rect(mag, normalize_phase(phase))
        return cls(**kwargs)

    def as_tuple(self) -> tuple[complex, ...]:
        """Amplitudes in mode order (p, a1, a2, b, c, d)."""
        return tuple(getattr(self, n) for n in _AMP_FIELDS)

    def __getitem__(self, mode: ModeId) -> complex:
        return self.as_tuple()[mode.index]

    def magnitude(self, mode: ModeId) -> float:
        return abs(self[mode])

    def phase(self, mode: ModeId) -> float:
        return normalize_phase(cmath.phase(self[mode]))

    @property
    def max_magnitude(self) -> float:
        return max(abs(v) for v in self.as_tuple())

    def swap_pumps(self) -> "CoherentAmplitudes":
        return replace(self, alpha1=self.alpha2, alpha2=self.alpha1)


@dataclass(frozen=True)
class Couplings:
    """Stokes coupling ``g``, anti-Stokes coupling ``chi`` and probe-pump coupling ``Gamma``."""

    g: float = 0.0
    chi: float = 0.0
    Gamma: float = 0.0

    def __post_init__(self):
        for name in ("g", "chi", "Gamma"):
            v = float(getattr(self, name))
            _check_finite(name, v)
            object.__setattr__(self, name, v)

    @property
    def strongest(self) -> float:
        return max(abs(self.g), abs(self.chi), abs(self.Gamma))


@dataclass(frozen=True)
class WaveVectors:
    k_p: float = 0.0
    k_a1: float = 0.0
    k_a2: float = 0.0
    k_b: float = 0.0
    k_c: float = 0.0
    k_d: float = 0.0

    def __post_init__(self):
        for name in ("k_p", "k_a1", "k_a2", "k_b", "k_c", "k_d"):
            v = float(getattr(self, name))
            _check_finite(name, v)
            object.__setattr__(self, name, v)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.k_p, self.k_a1, self.k_a2, self.k_b, self.k_c, self.k_d)

    def swap_pumps(self) -> "WaveVectors":
        return replace(self, k_a1=self.k_a2, k_a2=self.k_a1)


@dataclass(frozen=True)
class PhaseMismatches:
    """Stokes, anti-Stokes and probe-pump mismatches.

    The four combined mismatches are properties, so the identities
    ``dk1 = dkA - dkS`` etc. hold exactly for every instance.
    """

    dkS: float = 0.0
    dkA: float = 0.0
    dkD: float = 0.0

    def __post_init__(self):
        for name in ("dkS", "dkA", "dkD"):
            v = float(getattr(self, name))
            _check_finite(name, v)
            object.__setattr__(self, name, v)

    @property
    def dk1(self) -> float:
        return self.dkA - self.dkS

    @property
    def dk2(self) -> float:
        return self.dkA + self.dkS

    @property
    def dk3(self) -> float:
        return self.dkS + self.dkD

    @property
    def dk4(self) -> float:
        return self.dkA - self.dkD

    def as_dict(self) -> dict[str, float]:
        return {
            "dkS": self.dkS,
            "dkA": self.dkA,
            "dkD": self.dkD,
            "dk1": self.dk1,
            "dk2": self.dk2,
            "dk3": self.dk3,
            "dk4": self.dk4,
        }

    def canonical_wave_vectors(self) -> WaveVectors:
        """Wave vectors with ``k_a1 = k_a2 = k_c = 0`` reproducing these mismatches."""
        return WaveVectors(k_p=-self.dkD, k_b=self.dkS, k_d=-self.dkA)


def derive_mismatches(k: WaveVectors) -> PhaseMismatches:
    """Phase mismatches of the Stokes, anti-Stokes and probe-pump processes."""
    return PhaseMismatches(
        dkS=-k.k_a1 - k.k_a2 + k.k_b + k.k_c,
        dkA=k.k_a1 + k.k_a2 + k.k_c - k.k_d,
        dkD=k.k_a1 + k.k_a2 - k.k_p,
    )


@dataclass(frozen=True)
class Scenario:
    """Full configuration: amplitudes, couplings, mismatches and a propagation grid.

    ``wave_vectors`` is optional.  When given, ``mismatches`` is derived from it and
    must not be passed separately.  Witness values depend on the mismatches only;
    absolute wave vectors only set the free phases ``c_1`` of each mode.
    """

    amplitudes: CoherentAmplitudes = field(default_factory=CoherentAmplitudes)
    couplings: Couplings = field(default_factory=Couplings)
    mismatches: PhaseMismatches | None = None
    z_grid: tuple[float, ...] = (0.0,)
    wave_vectors: WaveVectors | None = None
    name: str = ""

    def __post_init__(self):
        if self.wave_vectors is not None:
            derived = derive_mismatches(self.wave_vectors)
            if self.mismatches is not None and self.mismatches != derived:
                raise ValueError("mismatches disagree with the given wave vectors")
            object.__setattr__(self, "mismatches", derived)
        elif self.mismatches is None:
            object.__setattr__(self, "mismatches", PhaseMismatches())
        grid = tuple(float(z) for z in self.z_grid)
        if not grid:
            raise ValueError("z_grid must not be empty")
        for z in grid:
            _check_finite("z", z)
            if z < 0:
                raise ValueError(f"propagation lengths must be >= 0, got {z}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("z_grid must be strictly increasing")
        object.__setattr__(self, "z_grid", grid)

    @property
    def k(self) -> WaveVectors:
        """Absolute wave vectors (canonical choice when only mismatches were given)."""
        if self.wave_vectors is not None:
            return self.wave_vectors
        return self.mismatches.canonical_wave_vectors()

    def with_(self, **changes) -> "Scenario":
        """Copy with fields replaced; accepts shorthand keys for common edits.

        Shorthands: ``Gamma``, ``g``, ``chi`` (couplings), any amplitude name,
        ``dkS``/``dkA``/``dkD`` (switches the copy to mismatch-direct input).
        """
        coup = {n: changes.pop(n) for n in ("g", "chi", "Gamma") if n in changes}
        amps = {n: changes.pop(n) for n in _AMP_FIELDS if n in changes}
        mis = {n: changes.pop(n) for n in ("dkS", "dkA", "dkD") if n in changes}
        out = self
        if coup:
            out = replace(out, couplings=replace(out.couplings, **coup))
        if amps:
            out = replace(out, amplitudes=replace(out.amplitudes, **amps))
        if mis:
            out = replace(out, wave_vectors=None, mismatches=replace(out.mismatches, **mis))
        if changes:
            out = replace(out, **changes)
        return out

    def swap_pumps(self) -> "Scenario":
        """Exchange the roles of the two pump modes (amplitudes and wave vectors)."""
        wv = self.wave_vectors.swap_pumps() if self.wave_vectors is not None else None
        return replace(self, amplitudes=self.amplitudes.swap_pumps(), wave_vectors=wv)

    def digest(self) -> str:
        """Stable SHA-256 of the canonical JSON form."""
        payload = json.dumps(scenario_to_dict(self), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class ValidityReport:
    """Short-length validity bound ``|Lambda z xi|`` evaluated on the grid."""

    z_grid: tuple[float, ...]
    bound: tuple[float, ...]
    valid: tuple[bool, ...]

    @property
    def max_bound(self) -> float:
        return max(self.bound)

    @property
    def all_valid(self) -> bool:
        return all(self.valid)


def validate_scenario(s: Scenario) -> ValidityReport:
    """Flag grid points outside the short-length validity region; never rejects."""
    lam = s.couplings.strongest
    xi = s.amplitudes.max_magnitude
    bound = tuple(abs(lam * z * xi) for z in s.z_grid)
    return ValidityReport(s.z_grid, bound, tuple(b < 1.0 for b in bound))


# -- serialization ---------------------------------------------------------------------


def _complex_to_json(v: complex) -> dict:
    return {"re": v.real, "im": v.imag}


def _complex_from_json(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if "re" in obj or "im" in obj:
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    if "mag" in obj:
        mag = float(obj["mag"])
        if mag < 0:
            raise ValueError(f"negative magnitude {mag}")
        return cmath.rect(mag, normalize_phase(float(obj.get("phase", 0.0))))
    raise ValueError(f"cannot read complex number from {obj!r}")


def scenario_to_dict(s: Scenario) -> dict:
    out = {
        "name": s.name,
        "amplitudes": {n: _complex_to_json(getattr(s.amplitudes, n)) for n in _AMP_FIELDS},
        "couplings": {"g": s.couplings.g, "chi": s.couplings.chi, "Gamma": s.couplings.Gamma},
        "z_grid": list(s.z_grid),
    }
    if s.wave_vectors is not None:
        wv = s.wave_vectors
        out["wave_vectors"] = {
            n: getattr(wv, n) for n in ("k_p", "k_a1", "k_a2", "k_b", "k_c", "k_d")
        }
    else:
        m = s.mismatches
        out["mismatches"] = {"dkS": m.dkS, "dkA": m.dkA, "dkD": m.dkD}
    return out


def _read_grid(obj) -> tuple[float, ...]:
    if isinstance(obj, dict):
        count = int(obj["count"])
        if count < 2:
            raise ValueError("z_grid count must be >= 2")
        return tuple(np.linspace(float(obj["start"]), float(obj["stop"]), count).tolist())
    return tuple(float(z) for z in obj)


def scenario_from_dict(obj: dict, dkD_unit: str | None = None) -> Scenario:
    """Parse the JSON scenario schema (see README).

    ``mismatches`` may carry ``"unit": "g"`` to express every mismatch in multiples of
    the Stokes coupling; ``dkD_unit`` overrides the unit of ``dkD`` alone.
    """
    amps = CoherentAmplitudes(
        **{n: _complex_from_json(v) for n, v in obj.get("amplitudes", {}).items()}
    )
    coup = Couplings(**obj.get("couplings", {}))
    wv = mis = None
    if "wave_vectors" in obj and "mismatches" in obj:
        raise ValueError("give either 'wave_vectors' or 'mismatches', not both")
    if "wave_vectors" in obj:
        wv = WaveVectors(**obj["wave_vectors"])
    else:
        raw = dict(obj.get("mismatches", {}))
        unit = raw.pop("unit", "absolute")
        if unit not in ("g", "absolute"):
            raise ValueError(f"unknown mismatch unit {unit!r}")
        scale = coup.g if unit == "g" else 1.0
        vals = {n: float(raw.get(n, 0.0)) * scale for n in ("dkS", "dkA", "dkD")}
        if dkD_unit is not None:
            if dkD_unit not in ("g", "absolute"):
                raise ValueError(f"unknown dkD unit {dkD_unit!r}")
            vals["dkD"] = float(raw.get("dkD", 0.0)) * (coup.g if dkD_unit == "g" else 1.0)
        mis = PhaseMismatches(**vals)
    return Scenario(
        amplitudes=amps,
        couplings=coup,
        mismatches=mis,
        wave_vectors=wv,
        z_grid=_read_grid(obj.get("z_grid", [0.0])),
        name=str(obj.get("name", "")),
    )


def load_scenario(path: str | Path, dkD_unit: str | None = None) -> Scenario:
    with open(path) as fh:
        return scenario_from_dict(json.load(fh), dkD_unit=dkD_unit)


def save_scenario(s: Scenario, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_dict(s), fh, indent=2)
        fh.write("\n")


# -- built-in scenarios ----------------------------------------------------------------

_FIG_GRID = tuple(np.linspace(0.0, 0.1, 201).tolist())


def _figure_base(name: str, phi1: float = 0.0) -> Scenario:
    # pump and Stokes phases default to zero unless a variant sets them
    return Scenario(
        amplitudes=CoherentAmplitudes(
            alpha=0.0,
            alpha1=cmath.rect(8.5, phi1),
            alpha2=8.3,
            beta=7.0,
            gamma=0.01,
            delta=-1.0,
        ),
        couplings=Couplings(g=1.0, chi=1.2, Gamma=0.0),
        mismatches=PhaseMismatches(dkS=-10.0, dkA=19.0, dkD=9.0),
        z_grid=_FIG_GRID,
        name=name,
    )


def builtin_scenarios() -> dict[str, Scenario]:
    """Figure parameter sets for the steering, entanglement and antibunching curves.

    Every built-in uses ``g = 1`` and a vacuum probe, with ``Gamma = 0`` except for
    ``fig2-map`` (``Gamma = 1.5 g`` on the grid ``gz = 0.0165, 0.067``); the probe
    variants are obtained with ``Scenario.with_(Gamma=..., alpha=...)`` or the CLI
    flags ``--gamma-over-g`` / ``--probe-alpha``.
    """
    half_pi = math.pi / 2
    return {
        "fig2": _figure_base("fig2"),
        "fig3": _figure_base("fig3"),
        "fig3b": _figure_base("fig3b", phi1=half_pi),
        "fig4": _figure_base("fig4", phi1=half_pi),
        "fig4-phi0": _figure_base("fig4-phi0"),
        # probe maps over (alpha, dkD) at the two zero-probe thresholds; Gamma is not
        # stated for these maps, 1.5 g is the default (override with --gamma-over-g)
        "fig2-map": replace(
            _figure_base("fig2-map"), couplings=Couplings(g=1.0, chi=1.2, Gamma=1.5), z_grid=(0.0165, 0.067)
        ),
    }


def get_builtin(name: str) -> Scenario:
    table = builtin_scenarios()
    try:
        return table[name]
    except KeyError:
        raise KeyError(f"unknown built-in scenario {name!r}; choose from {sorted(table)}") from None


def iter_modes() -> Iterable[ModeId]:
    return iter(_MODE_ORDER)


def mode_order() -> Sequence[ModeId]:
    return _MODE_ORDER
