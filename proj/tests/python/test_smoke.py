import math
import pathlib

import pytest

import qndsqueeze as q

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def test_xi_formulas():
    assert q.xi_single_d1(22.0, 0.15) == pytest.approx(0.56073, abs=1e-5)
    assert q.xi2("two-colour-d1", 100.0, 0.1) == pytest.approx(0.16294633578584197, rel=1e-12)
    assert q.xi2("cycling", 100.0, 0.1) == q.xi_two_colour_cycling(100.0, 0.1)


def test_optimize_and_sweep():
    eta, xi2 = q.optimize_eta("cycling", 100.0)
    assert eta == pytest.approx(q.eta_opt_cycling(100.0), abs=1e-6)
    assert xi2 < 1.0
    rows = q.sweep("single-d1", [10.0, 100.0, 1000.0])
    assert [r[0] for r in rows] == [10.0, 100.0, 1000.0]
    assert rows[0][2] > rows[1][2] > rows[2][2]


def test_budgets_sum_to_eta():
    for budget in (q.single_probe_budget(0.2), q.two_colour_budget(0.2)):
        assert budget["total"] == pytest.approx(0.2, rel=1e-14)


def test_geometry():
    assert q.zero_phase_mhz() == pytest.approx(501.7, abs=1.0)
    assert q.coupling_constant(0.0, 50e-6) == 0.0
    assert q.coupling_constant(-1000.0, 50e-6) == -q.coupling_constant(1000.0, 50e-6)
    assert q.eta_from_geometry(1000.0, 1e10, 50e-6) > 0.0


def test_oracles():
    k = q.kappa_tilde_for(0.25, 100.0, 1e4)
    assert q.kappa_squared(k, 100.0, 1e4) == pytest.approx(0.25)
    assert q.exact_output_variance(100.0, 1e4, k) == pytest.approx(3125.0, rel=1e-2)
    r = q.posterior_conditional_variance(1e4, 1e7, q.kappa_tilde_for(1.0, 1e4, 1e7))
    assert r["mean_posterior_variance"] == pytest.approx(q.conditional_variance(1.0, 1e4), rel=0.02)
    assert all(c["pass"] for c in q.oracle_checks())


def test_compute_squeeze_scenario():
    r = q.compute_squeeze(SCENARIOS / "single_probe.json")
    assert r["scheme"] == "mz1"
    assert r["xi2"] == pytest.approx(0.5573, abs=1e-3)
    assert math.isfinite(r["d"])


def test_errors():
    with pytest.raises(q.DomainError):
        q.xi_single_d1(10.0, 1.5)
    with pytest.raises(ValueError):
        q.xi2("no-such-formula", 10.0, 0.1)
    with pytest.raises(q.ResourceError):
        q.exact_output_variance(500.0, 1e4, 1e-5)
