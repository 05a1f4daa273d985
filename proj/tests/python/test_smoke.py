import math

import pytest

import hypolab


def test_module_metadata():
    assert hypolab.__version__ == "0.1.0"
    assert hypolab.schema_version == 1


def test_coefficient_and_bracket():
    a = hypolab.Coefficient("exp(-abs(y)^(-1))")
    assert a(0.0) == 0.0
    assert a(0.5) == pytest.approx(math.exp(-2.0), rel=1e-14)
    assert a.log(1e-3) == pytest.approx(-1e3, rel=1e-14)
    assert hypolab.japanese_bracket(0.0) == pytest.approx(math.e)
    assert math.isfinite(hypolab.japanese_bracket(1e300))


def test_parse_errors_raise_value_error():
    with pytest.raises(ValueError):
        hypolab.Coefficient("exp(-abs(y)")


def test_ground_states_increase():
    a = hypolab.Coefficient("y^2")
    lam = hypolab.ground_states(a, 1.0, 513, 4, 10)
    assert len(lam) == 7
    assert all(x < y for x, y in zip(lam, lam[1:]))


def test_barrier_and_split():
    bp = hypolab.barrier_params(1.0, 0.0, 0.0, 0.0, 1.0)
    assert bp["beta"] == pytest.approx(1.0)
    assert math.exp(2 * bp["beta"] * bp["r0"]) <= 2.0
    sp = hypolab.split_point(1e10, 0.5, 1.0, 1.0)
    assert sp["positive"] and sp["identities_hold"]
    assert hypolab.interpolation_constant(1.0, 1.0) > 0


def test_mp_check_classical_verdicts():
    holds = hypolab.mp_check(hypolab.Coefficient("exp(-abs(y)^(-0.5))"), 1.0)
    assert holds["verdict"] == "holds"
    fails = hypolab.mp_check(hypolab.Coefficient("exp(-abs(y)^(-2))"), 1.0)
    assert fails["verdict"] == "fails"


def test_run_returns_report():
    code, report = hypolab.run({"kind": "interp-verify", "draws": 50, "sequences": 20}, seed=5)
    assert code == 0
    assert report["schema_version"] == 1
    assert report["seed"] == 5
    assert all(c["passed"] for c in report["checks"])
    with pytest.raises(ValueError, match="colour: unknown key"):
        hypolab.run({"kind": "lp-suite", "colour": 1})
