import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shallowlin.linalg import condition_number, loglog_slope, singular_values, solve_spd, svd_lstsq


def _random_system(rng, m, n, rank=None):
    A = rng.standard_normal((m, n))
    if rank is not None:
        A = rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n))
    return A, rng.standard_normal(m)


class TestSvdLstsq:
    def test_identity(self):
        r = svd_lstsq(np.eye(3), [1.0, 2.0, 3.0])
        np.testing.assert_allclose(r.coefficients, [1, 2, 3], atol=1e-15)
        assert r.rank == 3 and r.condition_number == 1.0

    def test_minimal_norm_on_rank_deficiency(self):
        r = svd_lstsq([[1.0, 1.0]], [2.0])
        np.testing.assert_allclose(r.coefficients, [1.0, 1.0], atol=1e-14)
        assert r.rank == 1

    def test_zero_matrix(self):
        r = svd_lstsq(np.zeros((3, 2)), np.ones(3))
        assert r.rank == 0 and np.all(r.coefficients == 0) and r.condition_number == np.inf

    @pytest.mark.parametrize("shape", [(5, 3), (3, 5)])
    def test_pinv_oracle(self, shape):
        rng = np.random.default_rng(sum(shape))
        for _ in range(20):
            A, y = _random_system(rng, *shape)
            np.testing.assert_allclose(svd_lstsq(A, y).coefficients, np.linalg.pinv(A) @ y, rtol=1e-10, atol=1e-12)

    def test_rcond_truncates(self):
        A = np.diag([1.0, 1e-9])
        assert svd_lstsq(A, [1.0, 1.0], rcond=1e-6).rank == 1
        assert svd_lstsq(A, [1.0, 1.0]).rank == 2

    def test_rejects(self):
        with pytest.raises(ValueError):
            svd_lstsq(np.eye(2), [1.0, np.nan])
        with pytest.raises(ValueError):
            svd_lstsq(np.eye(2), [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            svd_lstsq(np.eye(2), [1.0, 2.0], rcond=-1.0)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 10_000))
def test_residual_is_orthogonal_to_range(m, n, seed):
    A, y = _random_system(np.random.default_rng(seed), m, n)
    a = svd_lstsq(A, y).coefficients
    assert np.linalg.norm(A.T @ (A @ a - y)) <= 1e-9 * (np.linalg.norm(A) ** 2 * np.linalg.norm(a) + np.linalg.norm(A) * np.linalg.norm(y))


class TestSolveSpd:
    def test_agrees_with_svd(self):
        rng = np.random.default_rng(1)
        B = rng.standard_normal((8, 5))
        M = B.T @ B
        b = rng.standard_normal(5)
        r = solve_spd(M, b)
        assert r.flags == ()
        np.testing.assert_allclose(r.coefficients, svd_lstsq(M, b).coefficients, rtol=1e-10)
        np.testing.assert_allclose(r.condition_number, condition_number(M), rtol=1e-8)

    def test_indefinite_fallback_flag(self):
        r = solve_spd(np.array([[1.0, 2.0], [2.0, 1.0]]), [1.0, 0.0])
        assert r.flags == ("indefinite_fallback",)
        np.testing.assert_allclose(np.array([[1.0, 2.0], [2.0, 1.0]]) @ r.coefficients, [1.0, 0.0], atol=1e-14)

    def test_singular_raises(self):
        with pytest.raises(np.linalg.LinAlgError):
            solve_spd(np.zeros((2, 2)), [1.0, 1.0])

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            solve_spd(np.array([[1.0, 1.0], [0.0, 1.0]]), [1.0, 1.0])


class TestConditioning:
    def test_diagonal(self):
        assert condition_number(np.diag([4.0, 2.0, 1.0])) == 4.0

    def test_singular_is_inf(self):
        assert condition_number(np.array([[1.0, 0.0], [0.0, 0.0]])) == np.inf

    def test_zero_raises(self):
        with pytest.raises(ValueError):
            condition_number(np.zeros((2, 2)))

    @given(st.floats(1e-6, 1e6), st.integers(0, 1000))
    def test_scale_invariant(self, c, seed):
        A = np.random.default_rng(seed).standard_normal((6, 4))
        assert condition_number(c * A) == pytest.approx(condition_number(A), rel=1e-10)

    def test_singular_values_descending(self):
        s = singular_values(np.random.default_rng(0).standard_normal((7, 4)))
        assert np.all(np.diff(s) <= 0)


class TestLoglogSlope:
    def test_power_law(self):
        n = np.array([16, 32, 64, 128])
        assert loglog_slope(n, 3.0 * n**-2.5) == pytest.approx(-2.5, abs=1e-12)

    @pytest.mark.parametrize("xs,ys", [([1.0], [1.0]), ([1.0, 2.0], [1.0, 0.0]), ([2.0, 2.0], [1.0, 2.0])])
    def test_rejects(self, xs, ys):
        with pytest.raises(ValueError):
            loglog_slope(xs, ys)
