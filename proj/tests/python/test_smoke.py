import json
import math

import numpy as np
import pytest

import todavolt


def test_volterra_rhs_at_unit_point():
    np.testing.assert_allclose(todavolt.rhs("volterra_a", np.ones(3)), [1.0, 0.0, -1.0])


def test_integrate_shapes_and_conservation():
    times, states = todavolt.integrate("volterra_a", np.ones(3), 1.0, 1e-3)
    assert times.shape == (1001,)
    assert states.shape == (1001, 3)
    # I1 = a1 + a2 + a3 for the Kostant Volterra matrix
    assert abs(states[-1].sum() - 3.0) < 1e-9


def test_stieltjes_closed_form():
    ab, fallback = todavolt.stieltjes_invert([1.0, 2.0], [math.sqrt(0.4), math.sqrt(0.6)])
    assert not fallback
    assert abs(ab[0] ** 2 - 0.24) < 1e-12
    np.testing.assert_allclose(ab[1:], [1.4, 1.6], atol=1e-12)


def test_explicit_solution_matches_closed_form():
    ab, _ = todavolt.solve_toda_explicit([1.0, 0.0, 0.0], 1.0)
    assert ab[0] == pytest.approx(1.0 / math.cosh(2.0), rel=1e-12)
    assert ab[1] == pytest.approx(math.tanh(2.0), rel=1e-12)


def test_round_trip():
    rng = np.random.default_rng(0)
    ab = np.concatenate([rng.uniform(0.5, 2.0, 3), rng.uniform(-1.0, 1.0, 4)])
    lambdas, r = todavolt.spectral_decompose(ab)
    back, _ = todavolt.stieltjes_invert(lambdas, r)
    np.testing.assert_allclose(back, ab, atol=1e-9)


def test_maps():
    np.testing.assert_allclose(todavolt.gmap([3.0, 2.0, 1.0, 0.0]), [math.e] * 3)
    coords, sign = todavolt.volterra_to_toda(np.ones(5), "henon")
    np.testing.assert_allclose(coords, [0.5, 0.5, 0.5, 1.0, 1.0])
    assert sign == -1
    np.testing.assert_array_equal(todavolt.chop_square(np.ones(4)), [1, 1, 1, 2, 1])


def test_tensors():
    v2 = todavolt.eval_tensor("V2", [1.0, 2.0, 3.0])
    assert v2[0, 1] == 2.0 and v2[1, 2] == 6.0 and v2[0, 2] == 0.0
    assert todavolt.jacobiator_max("PI2", [1.0, 0.7, 0.2, -0.4, 0.9]) < 1e-6
    assert todavolt.oevel_residuals("volterra_q", 1, 1, [0.1, -0.2, 0.3, 0.0])["a"] < 1e-5


def test_errors():
    with pytest.raises(todavolt.DomainError):
        todavolt.rhs("volterra_a", np.ones(4))
    with pytest.raises(todavolt.ConfigError):
        todavolt.rhs("nope", np.ones(3))
    with pytest.raises(todavolt.Error):
        todavolt.eval_tensor("V2", [1.0, -1.0, 1.0])


def test_verify_report():
    report = json.loads(todavolt.verify("diagram", points=2))
    assert report["schema"] == 1
    assert report["passed"] is True
