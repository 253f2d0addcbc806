import numpy as np
import pytest

from shallowlin.activations import NeuronSet, relu_power, tanh
from shallowlin.assembly import variational_lstsq_system
from shallowlin.collocation import (
    BoundaryCondition,
    CollocationSet,
    build_pde_system,
    build_regression_system,
    qmc_collocation_points,
    tensor_collocation_points,
)
from shallowlin.linalg import svd_lstsq
from shallowlin.pointsets import HiddenParams, Provenance, random_box, sphere_scheme
from shallowlin.quadrature import QuadratureRule
from shallowlin.targets import SumSinM


def _ns(act, w, b):
    return NeuronSet(act, HiddenParams(np.array(w, dtype=float), np.array(b, dtype=float), Provenance.RANDOM_BOX))


class TestPoints:
    def test_tensor_all_interior(self):
        c = tensor_collocation_points([(-1, 1)] * 2, 5)
        assert c.n_interior == 25 and c.n_boundary == 0

    def test_tensor_dirichlet_split(self):
        c = tensor_collocation_points([(-1, 1)] * 2, 5, bc="dirichlet")
        assert c.n_interior == 9 and c.n_boundary == 16
        assert np.all(np.any(np.abs(c.boundary) == 1.0, axis=1))

    def test_tensor_1d_endpoints(self):
        c = tensor_collocation_points([(-1, 1)], 200, bc=BoundaryCondition.DIRICHLET)
        assert c.n_boundary == 2 and c.n_interior == 198

    def test_open_grid(self):
        c = tensor_collocation_points([(0, 1)], 3, include_boundary=False)
        np.testing.assert_allclose(c.interior[:, 0], [0.25, 0.5, 0.75])

    def test_qmc_in_box(self):
        c = qmc_collocation_points(64, [(-1, 1)] * 3)
        assert c.interior.shape == (64, 3) and np.all(np.abs(c.interior) <= 1)

    def test_penalties_positive(self):
        with pytest.raises(ValueError):
            CollocationSet(np.zeros((2, 1)), np.empty((0, 1)), 0.0, 1.0)

    def test_bad_per_axis(self):
        with pytest.raises(ValueError):
            tensor_collocation_points([(-1, 1)], 1)


class TestRegression:
    def test_exact_neuron(self):
        ns = _ns(relu_power(1), [[1.0]], [0.0])
        c = tensor_collocation_points([(-1, 1)], 11)
        s = build_regression_system(ns, c, lambda x: np.maximum(x[:, 0], 0))
        assert svd_lstsq(s.matrix, s.rhs).coefficients[0] == pytest.approx(1.0, abs=1e-12)

    def test_penalty_scaling_invariant(self):
        ns = NeuronSet(tanh, random_box(5, 1, 2.0, 0))
        u = lambda x: np.sin(3 * x[:, 0])  # noqa: E731
        a1 = svd_lstsq(*_mr(build_regression_system(ns, tensor_collocation_points([(-1, 1)], 40), u))).coefficients
        a2 = svd_lstsq(*_mr(build_regression_system(
            ns, tensor_collocation_points([(-1, 1)], 40, lambda_interior=7.5), u))).coefficients
        np.testing.assert_allclose(a1, a2, rtol=1e-9)

    def test_matches_weighted_variational_system(self):
        ns = NeuronSet(tanh, random_box(6, 2, 2.0, 1))
        rng = np.random.default_rng(2)
        pts, w = rng.uniform(-1, 1, (50, 2)), rng.uniform(0.1, 1.0, 50)
        u = lambda x: np.cos(x[:, 0]) * x[:, 1]  # noqa: E731
        s1 = build_regression_system(ns, CollocationSet(pts, np.empty((0, 2)), w, 1.0), u)
        s2 = variational_lstsq_system(ns, QuadratureRule(pts, w, [(-1, 1)] * 2), u)
        np.testing.assert_allclose(s1.matrix, s2.matrix, rtol=1e-14)
        np.testing.assert_allclose(s1.rhs, s2.rhs, rtol=1e-14)


def _mr(s):
    return s.matrix, s.rhs


class TestPde:
    def test_constant_tanh_neuron(self):
        # omega = 0: phi = tanh(1) is constant, so -phi'' + phi = tanh(1)
        ns = _ns(tanh, [[0.0]], [1.0])
        c = tensor_collocation_points([(-1, 1)], 10)
        s = build_pde_system(ns, c, "none", lambda x: np.full(len(x), np.tanh(1.0)))
        assert svd_lstsq(s.matrix, s.rhs).coefficients[0] == pytest.approx(1.0, abs=1e-12)

    def test_dirichlet_rows(self):
        ns = NeuronSet(tanh, random_box(4, 1, 1.0, 0))
        c = tensor_collocation_points([(-1, 1)], 20, bc="dirichlet", lambda_boundary=4.0)
        s = build_pde_system(ns, c, "dirichlet", lambda x: np.ones(len(x)), lambda x: np.zeros(len(x)))
        assert s.matrix.shape == (20, 4)
        np.testing.assert_allclose(s.matrix[-2:], 2.0 * np.tanh(c.boundary @ ns.params.weights.T + ns.params.biases))

    def test_boundary_mismatch(self):
        ns = NeuronSet(tanh, random_box(4, 1, 1.0, 0))
        with pytest.raises(ValueError):
            build_pde_system(ns, tensor_collocation_points([(-1, 1)], 10), "dirichlet", np.sin, np.sin)
        with pytest.raises(ValueError):
            build_pde_system(ns, tensor_collocation_points([(-1, 1)], 10, bc="dirichlet"), "dirichlet",
                             lambda x: x[:, 0])

    def test_relu1_rejected(self):
        with pytest.raises(ValueError):
            build_pde_system(_ns(relu_power(1), [[1.0]], [0.0]), tensor_collocation_points([(-1, 1)], 5), "none",
                             lambda x: x[:, 0])

    def test_sphere_scheme_solves_1d_problem(self):
        u = SumSinM((1, 2, 4), 1)
        ns = NeuronSet(tanh, sphere_scheme(64, 1, 4.0))
        c = tensor_collocation_points([(-1, 1)], 200, bc="dirichlet")
        s = build_pde_system(ns, c, "dirichlet", u.elliptic_rhs, u.value)
        sol = svd_lstsq(s.matrix, s.rhs)
        x = np.linspace(-1, 1, 301)[:, None]
        fit = np.tanh(x @ ns.params.weights.T + ns.params.biases) @ sol.coefficients
        assert np.abs(fit - u.value(x)).max() < 1e-5

    def test_normal_equation_residual_well_conditioned(self):
        ns = NeuronSet(tanh, random_box(6, 1, 2.0, 3))
        c = tensor_collocation_points([(-1, 1)], 50, bc="dirichlet")
        s = build_pde_system(ns, c, "dirichlet", lambda x: np.exp(x[:, 0]), lambda x: np.exp(x[:, 0]))
        a = svd_lstsq(s.matrix, s.rhs).coefficients
        r = s.matrix.T @ (s.matrix @ a - s.rhs)
        assert np.linalg.norm(r) <= 1e-8 * np.linalg.norm(s.matrix.T @ s.rhs)
