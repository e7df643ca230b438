import json
import math

import numpy as np
import pytest

from quatcurves.curves import (
    DEFAULT_STEPS,
    ArcLengthTable,
    CurveSpec,
    ParametricCurve,
    arc_length,
    circle3,
    fourier_curve,
    helix3,
    is_unit_speed,
    reparameterize_by_arclength,
    torus_curve,
    _fd_derivative,
)
from quatcurves.errors import DegeneracyError

SQ2 = math.sqrt(0.5)


def builtin_families():
    return {
        "torus": torus_curve(0.6, 1.0, 0.4, 2.0),
        "torus2": torus_curve(0.4, 2.0, 0.2, 3.0),
        "circle3": circle3(1.0),
        "helix3": helix3(3.0, 4.0),
        "fourier": fourier_curve(
            [[0.0, 0.3], [0.0, 0.0, 0.2], [0.1]],
            [[0.0, 0.0], [0.0, 0.4], [0.0, 0.0, 0.0, 0.05]],
        ),
    }


class TestDerivative:
    def test_torus_first_derivative_at_zero(self):
        c = torus_curve(SQ2, 1.0, SQ2, 1.0, domain=(-math.pi, math.pi))
        want = np.array([0.0, SQ2, 0.0, SQ2])
        assert np.allclose(c.derivative(0.0, 1), want, atol=1e-14)
        # finite-difference path must agree
        fd = _fd_derivative(c, 0.0, 1, 1e-4)
        assert np.allclose(fd, want, atol=1e-9)

    def test_constant_curve_all_orders_zero(self):
        c = fourier_curve([[0.5], [1.0], [-2.0]], [[0.0], [0.0], [0.0]])
        for order in (1, 2, 3, 4):
            assert np.allclose(c.derivative(1.0, order), 0.0, atol=1e-15)

    def test_circle_second_derivative_norm(self):
        R = 2.5
        c = circle3(R)
        d2 = c.derivative(1.0, 2)
        assert math.isclose(np.linalg.norm(d2), 1.0 / R, rel_tol=1e-12)

    def test_fd_matches_analytic_all_families(self):
        rng = np.random.default_rng(20240901)
        for name, c in builtin_families().items():
            lo, hi = c.domain
            for u in rng.uniform(lo + 0.5, hi - 0.5, 8):
                for order in (1, 2, 3):
                    ex = c.derivative(float(u), order)
                    fd = _fd_derivative(c, float(u), order, DEFAULT_STEPS[order])
                    assert np.max(np.abs(ex - fd)) <= 1e-6, (name, order)
                ex = c.derivative(float(u), 4)
                fd = _fd_derivative(c, float(u), 4, DEFAULT_STEPS[4])
                assert np.max(np.abs(ex - fd)) <= 1e-4, name

    def test_margin_enforced_for_fd_curves(self):
        base = torus_curve(0.6, 1.0, 0.4, 2.0)
        plain = ParametricCurve(4, base.point, base.domain)  # no analytic derivatives
        with pytest.raises(ValueError, match="margin"):
            plain.derivative(1e-5, 3)

    def test_order_validation(self):
        c = circle3(1.0)
        with pytest.raises(ValueError):
            c.derivative(1.0, 0)
        with pytest.raises(ValueError):
            c.derivative(1.0, 5)


class TestArcLength:
    def test_unit_circle_circumference(self):
        c = circle3(1.0)
        assert abs(arc_length(c, 0.0, 2 * math.pi) - 2 * math.pi) <= 1e-10

    def test_zero_interval(self):
        c = circle3(1.0)
        assert arc_length(c, 1.0, 1.0) == 0.0

    def test_unit_speed_length_equals_span(self):
        c = torus_curve(0.6, 1.0, 0.4, 2.0)
        L = 5.5
        assert abs(arc_length(c, 0.0, L) - L) <= 1e-9

    def test_additivity(self):
        c = helix3(3.0, 4.0)
        total = arc_length(c, 0.5, 9.5)
        split = arc_length(c, 0.5, 4.0) + arc_length(c, 4.0, 9.5)
        assert abs(total - split) <= 1e-9

    def test_table_monotone(self):
        c = torus_curve(0.6, 1.0, 0.4, 2.0)
        table = ArcLengthTable.build(c, 0.0, 2 * math.pi, 64)
        assert table.lengths[0] == 0.0
        assert np.all(np.diff(table.lengths) > 0)
        assert abs(table.total - 2 * math.pi) <= 1e-9
        # inversion round-trip
        for target in (0.3, 2.0, 5.9):
            u = table.invert(target)
            assert abs(table.length_at(u) - target) <= 1e-11


class TestReparameterize:
    def test_identity_on_unit_speed_curve(self):
        c = torus_curve(0.6, 1.0, 0.4, 2.0)
        new = reparameterize_by_arclength(c, 128)
        for s in np.linspace(0.1, 5.0, 9):
            assert np.max(np.abs(new.point(s) - c.point(s + c.domain[0]))) <= 1e-8

    def test_angle_circle_becomes_unit_speed(self):
        c = circle3(2.0, mode="angle")
        ok, dev = is_unit_speed(c, 1e-6)
        assert not ok
        new = reparameterize_by_arclength(c, 128)
        ok, dev = is_unit_speed(new, 1e-6)
        assert ok, dev
        assert abs(new.domain[1] - 4 * math.pi) <= 1e-8

    def test_point_curve_rejected(self):
        c = fourier_curve([[1.0], [0.0], [0.0]], [[0.0], [0.0], [0.0]])
        with pytest.raises(DegeneracyError, match="irregular"):
            reparameterize_by_arclength(c, 64)


class TestIsUnitSpeed:
    def test_torus_is_unit_speed(self):
        ok, dev = is_unit_speed(torus_curve(0.6, 1.0, 0.4, 2.0), 1e-9)
        assert ok and dev < 1e-12

    def test_scaled_curve_fails(self):
        doubled = fourier_curve(
            [[0.0, 1.2], [0.0, 0.0], [0.0, 0.0, 0.8], [0.0, 0.0, 0.0]],
            [[0.0, 0.0], [0.0, 1.2], [0.0, 0.0, 0.0], [0.0, 0.0, 0.8]],
        )
        ok, dev = is_unit_speed(doubled, 1e-6)
        assert not ok
        assert abs(dev - 1.0) <= 1e-9

    def test_constant_curve_fails(self):
        c = fourier_curve([[0.5], [0.0], [0.0]], [[0.0], [0.0], [0.0]])
        ok, dev = is_unit_speed(c, 1e-6)
        assert not ok
        assert abs(dev - 1.0) <= 1e-12

    def test_after_reparameterization_all_families(self):
        for name, c in builtin_families().items():
            new = reparameterize_by_arclength(c, 128)
            ok, dev = is_unit_speed(new, 1e-5)
            assert ok, (name, dev)


class TestCurveSpec:
    def test_torus_document(self):
        doc = {
            "family": "torus_curve",
            "params": {"A": 0.70710678118654752, "p": 1.0, "B": 0.70710678118654752, "q": 1.0},
            "domain": [0.0, 6.2831853],
        }
        spec = CurveSpec.from_json(json.dumps(doc))
        curve = spec.build()
        assert curve.dim == 4
        assert np.allclose(curve.point(0.0), [SQ2, 0.0, SQ2, 0.0], atol=1e-8)

    def test_fourier_document(self):
        doc = {
            "family": "fourier",
            "params": {
                "coeffs": {
                    "cos": [[0.0, 1.0], [0.0, 0.0], [0.0]],
                    "sin": [[0.0, 0.0], [0.0, 1.0], [0.0]],
                }
            },
            "domain": [0.0, 6.283185307179586],
        }
        curve = CurveSpec.from_json(json.dumps(doc)).build()
        assert curve.dim == 3
        assert np.allclose(curve.point(0.0), [0.0, 1.0, 0.0, 0.0])

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="family"):
            CurveSpec.from_json('{"family": "lemniscate", "params": {}}')

    def test_missing_param(self):
        with pytest.raises(ValueError, match="missing parameter"):
            CurveSpec.from_json('{"family": "torus_curve", "params": {"A": 1.0}}').build()

    def test_malformed_json(self):
        with pytest.raises(json.JSONDecodeError):
            CurveSpec.from_json("{not json")

    def test_torus_unit_speed_validation(self):
        with pytest.raises(ValueError, match="A\\^2"):
            torus_curve(1.0, 1.0, 1.0, 1.0)


def test_analytic_derivative_validation_catches_mismatch():
    def evaluate(u):
        return np.array([0.0, math.cos(u), math.sin(u), 0.0])

    def wrong_derivs(u, n):
        return np.array([0.0, math.cos(u), math.sin(u), 0.0])  # ignores the order

    with pytest.raises(ValueError, match="disagree"):
        ParametricCurve(3, evaluate, (0.0, 6.0), wrong_derivs)
