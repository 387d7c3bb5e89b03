import json

import numpy as np
import pytest

import tcl2


def test_local_stationary_matches_closed_form():
    rho, residual = tcl2.stationary_state(tcl2.Model(), "LA_M_BS")
    closed = tcl2.la_analytic_stationary(2.0)
    assert np.max(np.abs(rho - closed)) < 1e-8
    assert abs(rho[0, 0].real - 0.10650697891920075) < 1e-8
    assert abs(rho[2, 2].real - 0.78698604216159850) < 1e-8
    assert residual < 1e-12


def test_global_stationary_is_close_to_gibbs():
    model = tcl2.Model()
    rho, _ = tcl2.stationary_state(model, "M_BS")
    gibbs = tcl2.gibbs_state(model.system, model.bath.beta)
    assert 0.0 < tcl2.trace_distance(rho, gibbs) <= 0.05


def test_evolve_shapes_and_conservation():
    times = np.linspace(0.0, 5.0, 51)
    t, states = tcl2.evolve(tcl2.Model(), times, mode="NM_BS")
    assert states.shape == (51, 3, 3)
    np.testing.assert_array_equal(t, times)
    traces = np.trace(states, axis1=1, axis2=2)
    assert np.max(np.abs(traces - 1.0)) < 1e-10
    assert np.max(np.abs(states - np.conj(np.transpose(states, (0, 2, 1))))) < 1e-12
    assert states[0, 0, 0] == 1.0


def test_markov_dips_below_zero_at_short_times():
    times = np.linspace(0.0, 1.0, 11)
    _, m = tcl2.evolve(tcl2.Model(), times, mode="M_BS")
    _, nm = tcl2.evolve(tcl2.Model(), times, mode="NM_BS")
    assert m[1, 2, 2].real < 0.0
    assert np.min(nm[:, 2, 2].real) >= -1e-10


def test_bath_detailed_balance():
    bath = tcl2.OhmicBath(0.01, 1.0, 2.0)
    ratio = bath.phi(0.5).real / bath.phi(-0.5).real
    assert ratio == pytest.approx(np.exp(1.0), rel=1e-6)


def test_config_errors_raise_value_error():
    with pytest.raises(ValueError, match="bath.s"):
        tcl2.parse_config('{"bath": {"s": -1}}')
    with pytest.raises(tcl2.ConfigError):
        tcl2.Model(bath=tcl2.OhmicBath(0.01, 1.0, -2.0))


def test_parse_config_fills_defaults():
    cfg = json.loads(tcl2.parse_config(""))
    assert cfg["bath"] == {"s": 0.01, "omega_c": 1.0, "beta": 2.0}
    assert cfg["mode"] == "NM_BS"


def test_multiplicity_error_without_bath():
    model = tcl2.Model(bath=tcl2.OhmicBath(0.0, 1.0, 2.0))
    with pytest.raises(tcl2.MultiplicityError):
        tcl2.stationary_state(model, "M_BS")


def test_run_command_writes_outputs(tmp_path):
    config = json.dumps({"grid": {"t_end": 1.0, "samples": 11}})
    code, outputs, message = tcl2.run_command("evolve", config, str(tmp_path), 1)
    assert code == 0, message
    assert outputs == ["trajectory.csv", "manifest.json"]
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert len(lines) == 12
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == "ok"

    code, _, _ = tcl2.run_command("compare-modes", json.dumps({"compare_modes": ["M_BS"]}), str(tmp_path / "c"), 1)
    assert code == 2
