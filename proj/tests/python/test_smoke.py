import json
import math

import pytest

qcsmc = pytest.importorskip("qcsmc")


def test_gain_thresholds():
    assert qcsmc.gamma_min_old(100.0) == pytest.approx(1100.5)
    g = qcsmc.gamma_min_new(100.0)
    assert 2928.9 <= g < 2929.0


def test_control_law_pointwise():
    p = qcsmc.ControlParams()
    p.gamma = 100.0
    out = qcsmc.control_modified(qcsmc.State(1.0, -2.0), p, 1e5)
    assert out.u == -96.0
    assert out.delta == -4.0
    assert qcsmc.control_original(qcsmc.State(1.0, 2.0), p, 1e5).u == -104.0
    with pytest.raises(qcsmc.QcsmcError):
        qcsmc.control_original(qcsmc.State(0.0, 1.0), p, 1e5)


def test_classify_regions():
    r = qcsmc.classify(qcsmc.State(2.0, -3.0), 100.0)
    assert r.domain == qcsmc.Domain.C
    assert r.in_ca
    assert qcsmc.classify(qcsmc.State(0.0, 0.0), 100.0).quadrant == "Origin"


def test_analytic_composition():
    sol = qcsmc.compose_trajectory(qcsmc.State(1.0, 2.0), 100.0, 1e-3)
    assert sol.total_time == pytest.approx(0.24436, rel=1e-3)
    arc = qcsmc.harmonic_params(qcsmc.State(1.0, -10.0), 100.0)
    assert arc.B == pytest.approx(1.0)
    assert arc.omega == pytest.approx(10.0)
    assert arc.t_reach == pytest.approx(math.pi / 20.0)


def test_simulate_and_capture():
    cfg = qcsmc.SimConfig()
    cfg.x0 = qcsmc.State(1.0, 2.0)
    cfg.params.gamma = 100.0
    cfg.t_end = 1.0
    traj = qcsmc.simulate(qcsmc.validate_config(cfg))
    assert traj.captured_at == pytest.approx(0.2444, rel=0.01)
    assert traj.samples[-1].state.x1 == 0.0
    kinds = [e.kind for e in traj.events]
    assert "EnterC" in kinds and "Capture" in kinds


def test_config_json_round_trip():
    scenario = {
        "x0": [1.5, 15.0],
        "gamma": 150.0,
        "D": 100.0,
        "t_end": 2.0,
        "disturbance": {"type": "sinusoid", "amplitude": 100.0, "frequency_hz": 10.0},
    }
    cfg = qcsmc.config_from_json(json.dumps(scenario))
    assert cfg.params.gamma == 150.0
    echoed = json.loads(qcsmc.config_to_json(qcsmc.validate_config(cfg)))
    assert echoed["capture"]["eps2"] == pytest.approx(150.0 * 1e-4)


def test_lyapunov_values():
    p = qcsmc.LyapunovParams()
    p.gamma, p.D, p.eta, p.epsilon = 2929.0, 100.0, 0.1, 0.6
    assert qcsmc.v_new(qcsmc.State(1.0, -1.0), p) == pytest.approx(2828.8)
    assert qcsmc.v_new(qcsmc.State(0.0, 0.0), p) == 0.0
    lo, hi = qcsmc.epsilon_interval(3000.0, 100.0, 0.1)
    assert 0.0 < lo < hi <= 2.0 / 3.0


def test_sweep_determinism():
    spec = qcsmc.SweepSpec()
    spec.base.params.gamma = 150.0
    spec.base.params.D = 100.0
    spec.base.t_end = 2.0
    spec.samples = 8
    spec.x0_region = qcsmc.SampleRegion.U
    spec.x1_lo, spec.x1_hi = 0.1, 2.0
    spec.x2_lo, spec.x2_hi = 0.1, 20.0
    spec.disturbance_family = qcsmc.UniformRandomDisturbance(100.0, 0)
    spec.seed = 7
    a = qcsmc.run_sweep(spec, 2)
    b = qcsmc.run_sweep(spec, 1)
    assert [r.capture_time for r in a.runs] == [r.capture_time for r in b.runs]
    assert a.bracket_violations == 0
