import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from shallowlin.quadrature import integrate, piecewise_tensor_rule
from shallowlin.targets import ProdSinHalfPi, SinM, SumSinM, parse_key, parse_target


def _sym_rhs(expr, xs):
    return sp.lambdify(xs, -sum(sp.diff(expr, x, 2) for x in xs) + expr, "numpy")


class TestValues:
    def test_prod_sin_corner(self):
        assert ProdSinHalfPi(2).value(np.array([[1.0, 1.0]]))[0] == pytest.approx(1.0, abs=1e-15)

    def test_sum_sin_origin(self):
        assert SumSinM((1, 2, 4), 1).value(np.array([[0.0]]))[0] == 0.0

    def test_call_is_value(self):
        x = np.array([[0.3, -0.2]])
        assert ProdSinHalfPi(2)(x)[0] == ProdSinHalfPi(2).value(x)[0]


class TestNorms:
    def test_h1_seminorm_3d_by_quadrature(self):
        u = ProdSinHalfPi(3)
        r = piecewise_tensor_rule([(-1, 1)] * 3, 16, 5)
        g2 = integrate(lambda x: np.sum(u.gradient(x) ** 2, axis=1), r)
        assert math.sqrt(g2) == pytest.approx(math.pi / 2 * math.sqrt(3), abs=1e-10)
        assert u.h1_seminorm == pytest.approx(math.pi / 2 * math.sqrt(3), rel=1e-15)

    @pytest.mark.parametrize("d", [1, 2])
    def test_prod_sin_unit_l2(self, d):
        r = piecewise_tensor_rule([(-1, 1)] * d, 1024 if d == 1 else 256, 5)
        assert abs(integrate(lambda x: ProdSinHalfPi(d).value(x) ** 2, r) - 1.0) < 1e-10

    @pytest.mark.parametrize("t", [SinM(2, 1), SinM(1, 2), SumSinM((1, 2, 4), 1), SumSinM((1, 3), 2)])
    def test_closed_form_norms(self, t):
        r = piecewise_tensor_rule([(-1, 1)] * t.d, 200 if t.d == 1 else 64, 5)
        l2 = math.sqrt(integrate(lambda x: t.value(x) ** 2, r))
        h1 = math.sqrt(integrate(lambda x: np.sum(t.gradient(x) ** 2, axis=1), r))
        assert l2 == pytest.approx(t.l2_norm, rel=1e-10)
        assert h1 == pytest.approx(t.h1_seminorm, rel=1e-10)


class TestEllipticRhs:
    def test_prod_sin_1d_symbolic(self):
        x = sp.symbols("x")
        f = _sym_rhs(sp.sin(sp.pi * x / 2), [x])
        pts = np.linspace(-1, 1, 17)[:, None]
        np.testing.assert_allclose(ProdSinHalfPi(1).elliptic_rhs(pts), f(pts[:, 0]), rtol=1e-13, atol=1e-15)
        np.testing.assert_allclose(ProdSinHalfPi(1).elliptic_rhs(pts),
                                   (math.pi**2 / 4 + 1) * np.sin(math.pi * pts[:, 0] / 2), atol=1e-14)

    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    def test_prod_sin_separable(self, d):
        u = ProdSinHalfPi(d)
        pts = np.random.default_rng(d).uniform(-1, 1, (20, d))
        np.testing.assert_allclose(u.elliptic_rhs(pts), (d * math.pi**2 / 4 + 1) * u.value(pts), rtol=1e-13, atol=1e-15)

    def test_sum_sin_single_mode(self):
        pts = np.linspace(-1, 1, 9)[:, None]
        np.testing.assert_allclose(SumSinM((1,), 1).elliptic_rhs(pts), (math.pi**2 + 1) * np.sin(math.pi * pts[:, 0]),
                                   atol=1e-13)

    def test_sum_sin_2d_symbolic(self):
        x, y = sp.symbols("x y")
        expr = sum(sp.sin(m * sp.pi * x) * sp.sin(m * sp.pi * y) for m in (1, 2, 4))
        f = _sym_rhs(expr, [x, y])
        pts = np.random.default_rng(0).uniform(-1, 1, (30, 2))
        np.testing.assert_allclose(SumSinM((1, 2, 4), 2).elliptic_rhs(pts), f(pts[:, 0], pts[:, 1]),
                                   rtol=1e-12, atol=1e-12)


@given(st.sampled_from(["prod_sin_half_pi:d=2", "sin_m:m=2,d=3", "sum_sin_m:d=2,m=1,2,4", "sin_m:m=4,d=1"]),
       st.integers(0, 10_000))
def test_derivatives_match_finite_differences(key, seed):
    t = parse_target(key)
    x = np.random.default_rng(seed).uniform(-0.9, 0.9, (3, t.d))
    g = t.gradient(x)
    lap = t.laplacian(x)
    h, h2 = 1e-6, 1e-4
    fd_lap = np.zeros(len(x))
    for a in range(t.d):
        e = np.zeros(t.d)
        e[a] = h
        fd = (t.value(x + e) - t.value(x - e)) / (2 * h)
        np.testing.assert_allclose(fd, g[:, a], rtol=1e-7, atol=1e-7 * max(1.0, np.abs(g).max()))
        e[a] = h2
        fd_lap += (t.value(x + e) - 2 * t.value(x) + t.value(x - e)) / h2**2
    np.testing.assert_allclose(fd_lap, lap, rtol=1e-5, atol=1e-5 * max(1.0, np.abs(lap).max()))


class TestParsing:
    def test_parse_key(self):
        assert parse_key("sum_sin_m:d=1,m=1,2,4") == ("sum_sin_m", {"d": ["1"], "m": ["1", "2", "4"]})

    def test_parse_target_kinds(self):
        assert parse_target("prod_sin_half_pi:d=3") == ProdSinHalfPi(3)
        assert parse_target("sin_m:m=2,d=1") == SinM(2, 1)
        assert parse_target("sum_sin_m:d=2,m=1,2,4") == SumSinM((1, 2, 4), 2)

    @pytest.mark.parametrize("bad", ["nope:d=1", "sin_m:,3", "sum_sin_m:m=1,1,d=1"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_target(bad)
