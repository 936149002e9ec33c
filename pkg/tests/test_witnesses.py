import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperraman import witnesses as W
from hyperraman.expansion import witness_polynomial
from hyperraman.kernels import eval_coefficients
from hyperraman.scenario import CoherentAmplitudes, Couplings, PhaseMismatches, Scenario, WaveVectors, get_builtin
from hyperraman.witnesses import (
    TABULATED,
    WitnessKind,
    WitnessNotTabulated,
    antibunching_D,
    entanglement_hz1,
    entanglement_hz2,
    evaluate,
    evaluate_scenario,
    full_report,
    reports_to_csv,
    steering,
)

# closed forms that coincide on both routes
SAME_ON_BOTH_ROUTES = ["S_b_d", "E_a1_d", "E_b_d", "Ep_a1_b", "Ep_b_d", "Ep_c_d", "D_b"]


def random_scenario(rng, amp=3.0, wave_vectors=True):
    amps = CoherentAmplitudes(*(rng.uniform(0, amp) * cmath.exp(1j * rng.uniform(-math.pi, math.pi)) for _ in range(6)))
    coup = Couplings(*rng.uniform(-1.5, 1.5, size=3))
    if wave_vectors:
        return Scenario(amplitudes=amps, couplings=coup, wave_vectors=WaveVectors(*rng.uniform(-5, 5, size=6)))
    return Scenario(amplitudes=amps, couplings=coup, mismatches=PhaseMismatches(*rng.uniform(-20, 20, size=3)))


# -- kinds -----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text,name",
    [("S_a1->d", "S_a1_d"), ("S_a1_d", "S_a1_d"), ("E_a1d", "E_a1_d"), ("E_da1", "E_a1_d"), ("E'_bc", "Ep_b_c"),
     ("Ep_b_c", "Ep_b_c"), ("D_a1", "D_a1"), ("S_bc", "S_b_c"), ("S_a2->d", "S_a2_d")],
)
def test_parse(text, name):
    assert WitnessKind.parse(text).name == name


@pytest.mark.parametrize("text", ["S_b->a1", "S_d->b", "E_pb", "D_p", "E'_a1a2", "S_c->b"])
def test_untabulated(text):
    with pytest.raises(WitnessNotTabulated, match="no tabulated closed form"):
        WitnessKind.parse(text)


@pytest.mark.parametrize("text", ["X_a1", "S_a1", "D_a1b", "S_a1_q", ""])
def test_unparseable(text):
    with pytest.raises(ValueError):
        WitnessKind.parse(text)


def test_tabulated_set():
    assert len(TABULATED) == 23
    assert sum(k.family == "S" for k in TABULATED) == 7
    assert WitnessKind.parse("S_d->a1").label == "S_d->a1"
    assert WitnessKind.parse("E'_cd").label == "E'_cd"


# -- decoupled and vacuum limits -------------------------------------------------------


@pytest.mark.parametrize("route", W.ROUTES)
def test_decoupled_limit(route):
    s = Scenario(amplitudes=CoherentAmplitudes(0.3, 2.0, 1.1j, 0.7, -0.4, 1 + 1j), wave_vectors=WaveVectors(0.1, 0.2, 0.3, 0.4, 0.5, 0.6))
    cs = eval_coefficients(s, 0.05)
    assert steering(("a1", "b"), cs, s.amplitudes, route) == pytest.approx(2.0, rel=1e-14)
    assert entanglement_hz1(("a1", "b"), cs, s.amplitudes, route) == pytest.approx(0, abs=1e-13)
    assert entanglement_hz2(("b", "c"), cs, s.amplitudes, route) == pytest.approx(0, abs=1e-13)
    for kind in TABULATED:
        value = evaluate(kind, cs, s.amplitudes, route)
        expected = 0.5 * abs(getattr(s.amplitudes, {"a1": "alpha1", "b": "beta", "c": "gamma", "d": "delta"}[kind.i])) ** 2
        assert value == pytest.approx(expected if kind.family == "S" else 0.0, abs=1e-12), kind


@pytest.mark.parametrize("route", W.ROUTES)
def test_vacuum(route):
    rep = full_report(get_builtin("fig2").with_(alpha1=0, alpha2=0, beta=0, gamma=0, delta=0), 0.05, route=route)
    assert all(v == 0 for v in rep.values.values())


# -- structure ---------------------------------------------------------------------------


@given(st.integers(0, 2**32 - 1), st.floats(0.0, 0.1))
@settings(max_examples=40, deadline=None)
def test_pump2_relabeling_matches_direct_polynomial(seed, z):
    s = random_scenario(np.random.default_rng(seed))
    cs = eval_coefficients(s, z)
    for kind in TABULATED:
        two = kind.relabeled()
        if two == kind:
            continue
        direct = evaluate(two, cs, s.amplitudes, "derived")
        relabeled = evaluate_scenario(two, s, z)
        assert relabeled == pytest.approx(direct, rel=1e-9, abs=1e-9 * (1 + abs(direct))), two


@given(st.integers(0, 2**32 - 1), st.lists(st.floats(-math.pi, math.pi), min_size=6, max_size=6))
@settings(max_examples=40, deadline=None)
def test_free_phase_invariance(seed, phases):
    s = random_scenario(np.random.default_rng(seed))
    cs = eval_coefficients(s, 0.04)
    turned = cs.with_leading({fam: cmath.exp(1j * p) for fam, p in zip("fghjkl", phases)})
    for route in W.ROUTES:
        for kind in TABULATED:
            a = evaluate(kind, cs, s.amplitudes, route)
            b = evaluate(kind, turned, s.amplitudes, route)
            assert b == pytest.approx(a, rel=1e-9, abs=1e-9), (route, kind)


PROBE_FREE = ["E_b_d", "Ep_b_c", "D_b", "D_c", "D_d"]


@pytest.mark.parametrize("route", W.ROUTES)
@pytest.mark.parametrize("seed", range(5))
def test_probe_independence_exact(route, seed):
    # vacuum probe, as in every figure scenario
    s = random_scenario(np.random.default_rng(seed)).with_(alpha=0)
    for z in (0.01, 0.05, 0.1):
        off = full_report(s.with_(Gamma=0.0), z, route=route, kinds=PROBE_FREE)
        on = full_report(s.with_(Gamma=10.0), z, route=route, kinds=PROBE_FREE)
        assert off.values == on.values


def test_bright_probe_reaches_stokes_phonon_pair():
    # with alpha != 0 the probe feeds the pumps and E'_bc moves (the oracle agrees, see test_oracle)
    s = random_scenario(np.random.default_rng(0))
    assert evaluate_scenario("Ep_b_c", s, 0.05) != evaluate_scenario("Ep_b_c", s.with_(Gamma=10.0), 0.05)
    for name in ("E_b_d", "D_b", "D_c", "D_d"):
        assert evaluate_scenario(name, s, 0.05) == evaluate_scenario(name, s.with_(Gamma=10.0), 0.05)


def test_vacuum_probe_leaves_antibunching_of_pump():
    s = get_builtin("fig4")
    for z in np.linspace(0.0, 0.1, 21):
        assert evaluate_scenario("D_a1", s, z) == evaluate_scenario("D_a1", s.with_(Gamma=1.5), z)


@given(st.integers(0, 2**32 - 1), st.floats(0.0, 0.1))
@settings(max_examples=40, deadline=None)
def test_routes_agree_where_forms_coincide(seed, z):
    s = random_scenario(np.random.default_rng(seed))
    cs = eval_coefficients(s, z)
    for name in SAME_ON_BOTH_ROUTES:
        a = evaluate(name, cs, s.amplitudes, "derived")
        b = evaluate(name, cs, s.amplitudes, "printed")
        assert b == pytest.approx(a, rel=1e-9, abs=1e-9 * (1 + abs(a))), name


def test_stokes_antibunching_closed_form():
    s = random_scenario(np.random.default_rng(7))
    cs = eval_coefficients(s, 0.05)
    a = s.amplitudes
    expected = 2 * abs(cs.ratio("j2")) ** 2 * abs(a.alpha1) ** 2 * abs(a.alpha2) ** 2 * abs(a.beta) ** 2
    assert antibunching_D("b", cs, a) == pytest.approx(expected, rel=1e-12)


def test_anti_stokes_coherent_to_second_order():
    # the first-order anti-Stokes operator holds annihilators only
    assert len(witness_polynomial("D", "d")) == 0
    s = random_scenario(np.random.default_rng(3))
    assert evaluate_scenario("D_d", s, 0.07) == 0.0


@given(st.integers(0, 2**32 - 1), st.floats(0.0, 0.1))
@settings(max_examples=1000, deadline=None)
def test_values_real_and_finite(seed, z):
    s = random_scenario(np.random.default_rng(seed), amp=10.0, wave_vectors=False)
    rep = full_report(s, z, include_pump2=True)
    assert len(rep.values) == 34
    assert all(math.isfinite(v) for v in rep.values.values())


def test_imaginary_residue_rejected():
    kind = WitnessKind.parse("E_bd")
    with pytest.raises(W.ImaginaryResidueError):
        W._real(1.0 + 1e-6j, 1.0, kind)
    assert W._real(1.0 + 1e-12j, 1.0, kind) == 1.0


def test_printed_route_needs_relabeling_for_pump2():
    s = get_builtin("fig2")
    cs = eval_coefficients(s, 0.03)
    with pytest.raises(ValueError):
        evaluate("S_a2_d", cs, s.amplitudes, "printed")
    assert math.isfinite(evaluate_scenario("S_a2_d", s, 0.03, route="printed"))
    with pytest.raises(ValueError):
        evaluate("S_a1_d", cs, s.amplitudes, "other")


# -- figure-level behavior -------------------------------------------------------------


def test_stokes_phonon_hz2_entangled_and_probe_blind():
    s = get_builtin("fig2")
    zs = np.linspace(0.001, 0.1, 100)
    off = [evaluate_scenario("Ep_b_c", s, z) for z in zs]
    on = [evaluate_scenario("Ep_b_c", s.with_(Gamma=1.5), z) for z in zs]
    assert off == on
    assert min(off) < 0


def test_report_and_csv():
    s = get_builtin("fig2")
    reps = [full_report(s, z, kinds=["S_a1->d", "D_a1"]) for z in (0.01, 0.03)]
    assert reps[1].flags[WitnessKind.parse("S_a1_d")]
    assert reps[1]["S_a1->d"] < 0
    text = reports_to_csv(reps)
    lines = text.splitlines()
    assert lines[0] == "z,kind,value,nonclassical"
    assert [l.split(",")[1] for l in lines[1:]] == ["D_a1", "S_a1_d", "D_a1", "S_a1_d"]
    assert float(lines[2].split(",")[2]) == reps[0]["S_a1_d"]
    assert reports_to_csv(reps) == text
