import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperraman.scenario import (
    CoherentAmplitudes,
    Couplings,
    ModeId,
    PhaseMismatches,
    Scenario,
    WaveVectors,
    builtin_scenarios,
    derive_mismatches,
    get_builtin,
    load_scenario,
    normalize_phase,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
    validate_scenario,
)

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def test_mode_order():
    assert [m.name for m in ModeId] == ["P", "A1", "A2", "B", "C", "D"]
    assert [m.index for m in ModeId] == list(range(6))


def test_stokes_matched():
    m = derive_mismatches(WaveVectors(k_a1=1, k_a2=1, k_b=1.5, k_c=0.5))
    assert m.dkS == 0.0


def test_antistokes_matched():
    m = derive_mismatches(WaveVectors(k_a1=1, k_a2=1, k_c=0.5, k_d=2.5))
    assert m.dkA == 0.0


def test_figure_combinations():
    m = get_builtin("fig2").mismatches
    assert (m.dk1, m.dk2, m.dk3, m.dk4) == (29.0, 9.0, -1.0, 10.0)


@given(st.lists(finite, min_size=6, max_size=6))
def test_mismatch_identities(ks):
    m = derive_mismatches(WaveVectors(*ks))
    assert m.dk1 == m.dkA - m.dkS
    assert m.dk2 == m.dkA + m.dkS
    assert m.dk3 == m.dkS + m.dkD
    assert m.dk4 == m.dkA - m.dkD


@given(st.lists(st.integers(-20, 20), min_size=6, max_size=6), st.integers(-5, 5), st.integers(-5, 5))
def test_mismatch_shift_invariance(ks, s, t):
    # integer inputs keep the shifted sums exact
    k = WaveVectors(*map(float, ks))
    shifted = WaveVectors(k.k_p + 2 * s, k.k_a1 + s, k.k_a2 + s, k.k_b + 2 * s - t, k.k_c + t, k.k_d + 2 * s + t)
    assert derive_mismatches(k) == derive_mismatches(shifted)


def test_canonical_wave_vectors_roundtrip():
    m = PhaseMismatches(-10.0, 19.0, 9.0)
    assert derive_mismatches(m.canonical_wave_vectors()) == m


def test_validity_examples():
    free = Scenario(amplitudes=CoherentAmplitudes(alpha1=8.5), z_grid=(0.0, 1.0, 10.0))
    assert validate_scenario(free).all_valid
    s = Scenario(amplitudes=CoherentAmplitudes(alpha1=8.5), couplings=Couplings(g=1.0), z_grid=(0.05, 0.2))
    rep = validate_scenario(s)
    assert rep.bound[0] == pytest.approx(0.425)
    assert rep.valid == (True, False)
    assert rep.max_bound == pytest.approx(1.7)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        Scenario(z_grid=(0.1, 0.1))
    with pytest.raises(ValueError):
        Scenario(z_grid=(-0.1, 0.1))
    with pytest.raises(ValueError):
        Couplings(g=math.inf)
    with pytest.raises(ValueError):
        CoherentAmplitudes(beta=complex(math.nan, 0))
    with pytest.raises(ValueError):
        CoherentAmplitudes.from_polar(beta=(-1.0, 0.0))
    with pytest.raises(ValueError):
        Scenario(mismatches=PhaseMismatches(1.0, 0.0, 0.0), wave_vectors=WaveVectors())


@given(st.floats(-100, 100, allow_nan=False))
def test_phase_normalization(phi):
    out = normalize_phase(phi)
    assert -math.pi < out <= math.pi
    assert math.isclose(math.cos(out), math.cos(phi), abs_tol=1e-9)
    assert math.isclose(math.sin(out), math.sin(phi), abs_tol=1e-9)


def test_polar_amplitudes():
    a = CoherentAmplitudes.from_polar(alpha1=(8.5, math.pi / 2), delta=(1.0, math.pi))
    assert a.alpha1 == pytest.approx(8.5j)
    assert a.delta == pytest.approx(-1.0)
    assert a.phase(ModeId.D) == pytest.approx(math.pi)
    assert a.max_magnitude == pytest.approx(8.5)


def test_builtin_parameter_sets():
    table = builtin_scenarios()
    assert {"fig2", "fig3", "fig3b", "fig4", "fig4-phi0", "fig2-map"} <= set(table)
    s = table["fig2"]
    a = s.amplitudes
    assert (a.alpha, a.alpha1, a.alpha2, a.beta, a.gamma, a.delta) == (0, 8.5, 8.3, 7, 0.01, -1)
    assert (s.couplings.g, s.couplings.chi, s.couplings.Gamma) == (1.0, 1.2, 0.0)
    assert (s.mismatches.dkS, s.mismatches.dkA, s.mismatches.dkD) == (-10.0, 19.0, 9.0)
    assert len(s.z_grid) == 201 and s.z_grid[-1] == pytest.approx(0.1)
    for name in ("fig3b", "fig4"):
        assert table[name].amplitudes.alpha1 == pytest.approx(8.5j)
    assert table["fig2-map"].couplings.Gamma == 1.5
    with pytest.raises(KeyError):
        get_builtin("fig9")


def test_builtin_snapshot():
    # digests pin the built-in parameters byte for byte
    digests = {name: s.digest()[:16] for name, s in builtin_scenarios().items()}
    assert digests == {
        "fig2": "32a2dbbd888820f1",
        "fig3": "57a012e9669dfab7",
        "fig3b": "d07b38bbde664857",
        "fig4": "ea0a084505188caa",
        "fig4-phi0": "7b5d004d960a6eac",
        "fig2-map": "9ecaf6f1647e6729",
    }


@given(
    st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=6, max_size=6),
    st.lists(finite, min_size=3, max_size=3),
    st.lists(finite, min_size=3, max_size=3),
)
def test_json_roundtrip(amps, coup, dk):
    s = Scenario(
        amplitudes=CoherentAmplitudes(*amps),
        couplings=Couplings(*coup),
        mismatches=PhaseMismatches(*dk),
        z_grid=(0.0, 0.01, 0.02),
        name="x",
    )
    back = scenario_from_dict(json.loads(json.dumps(scenario_to_dict(s))))
    assert back == s


def test_file_roundtrip_with_wave_vectors(tmp_path):
    s = Scenario(
        amplitudes=CoherentAmplitudes(alpha=0.1 + 0.2j, beta=1 / 3),
        couplings=Couplings(0.1, 0.7, -0.3),
        wave_vectors=WaveVectors(0.1, 0.2, 0.3, 0.4, 0.5, 0.6),
        z_grid=tuple(np.linspace(0, 0.1, 7).tolist()),
    )
    path = tmp_path / "s.json"
    save_scenario(s, path)
    assert load_scenario(path) == s


def test_json_units_and_forms():
    obj = {
        "amplitudes": {"alpha1": {"mag": 2.0, "phase": math.pi / 2}, "delta": -1},
        "couplings": {"g": 2.0},
        "mismatches": {"dkS": -10, "dkA": 19, "dkD": 9, "unit": "g"},
        "z_grid": {"start": 0.0, "stop": 0.1, "count": 3},
    }
    s = scenario_from_dict(obj)
    assert s.amplitudes.alpha1 == pytest.approx(2j)
    assert (s.mismatches.dkS, s.mismatches.dkA, s.mismatches.dkD) == (-20.0, 38.0, 18.0)
    assert s.z_grid == (0.0, 0.05, 0.1)
    assert scenario_from_dict(obj, dkD_unit="absolute").mismatches.dkD == 9.0
    with pytest.raises(ValueError):
        scenario_from_dict({**obj, "z_grid": {"start": 0, "stop": 1, "count": 1}})
    with pytest.raises(ValueError):
        scenario_from_dict({**obj, "wave_vectors": {}})


def test_swap_pumps_involution():
    s = Scenario(
        amplitudes=CoherentAmplitudes(alpha1=1.0, alpha2=2.0j),
        wave_vectors=WaveVectors(k_a1=0.3, k_a2=-0.1),
    )
    t = s.swap_pumps()
    assert t.amplitudes.alpha1 == 2.0j and t.wave_vectors.k_a1 == -0.1
    assert t.mismatches == s.mismatches
    assert t.swap_pumps() == s


def test_with_shorthands():
    s = get_builtin("fig2").with_(Gamma=1.5, alpha=-9.0, dkD=4.0)
    assert s.couplings.Gamma == 1.5 and s.amplitudes.alpha == -9.0
    assert (s.mismatches.dkS, s.mismatches.dkA, s.mismatches.dkD) == (-10.0, 19.0, 4.0)
