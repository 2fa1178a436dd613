import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apportion import linalg as la
from apportion.errors import DomainError
from apportion.rank_one import (
    apportion_rank_one,
    canonical_rank_one,
    factor_rank_one,
    second_column,
)


def random_rank_one(rng, n, kind="general"):
    x = rng.normal(size=n) + 1j * rng.normal(size=n)
    y = rng.normal(size=n) + 1j * rng.normal(size=n)
    if kind == "traceless":
        # make y orthogonal to x so tr(x y*) = 0
        y -= (np.vdot(x, y) / np.vdot(x, x)) * x
    elif kind == "aligned":
        # y parallel to x gives ||A||_F = |tr A|
        y = (rng.normal() + 1j * rng.normal()) * x
    return np.outer(x, y.conj())


def check_uniform(A, rep, tol=1e-9):
    n = A.shape[0]
    V, B = rep.transform, rep.matrix
    assert np.max(np.abs(V.conj().T @ V - np.eye(n))) < 1e-10
    assert np.allclose(B, V @ A @ V.conj().T, atol=1e-12 * max(1, la.max_norm(A)))
    kappa = la.frobenius(A) / n
    assert abs(rep.kappa - kappa) <= 1e-9 * max(1, kappa)
    assert np.max(np.abs(np.abs(B) - kappa)) <= tol * max(1, kappa)


class TestFactor:
    def test_unit(self):
        x, y = factor_rank_one(la.unit(2, 0, 1))
        assert np.allclose(np.outer(x, y.conj()), la.unit(2, 0, 1))
        assert np.allclose(np.abs(x), [1, 0])

    def test_ones(self):
        x, y = factor_rank_one(np.ones((2, 2)))
        assert np.allclose(np.outer(x, y.conj()), np.ones((2, 2)))
        assert np.linalg.norm(x) == pytest.approx(1)

    def test_random(self):
        A = random_rank_one(np.random.default_rng(0), 6)
        x, y = factor_rank_one(A)
        assert np.max(np.abs(np.outer(x, y.conj()) - A)) < 1e-10

    def test_rank_two_rejected(self):
        with pytest.raises(DomainError):
            factor_rank_one(np.diag([1.0, 1.0]))


class TestCanonical:
    def test_already_canonical(self):
        c = canonical_rank_one(la.unit(3, 0, 0))
        assert (c.gamma, c.alpha, c.beta) == (1, 1, 0)
        assert np.allclose(c.U, np.eye(3))

    def test_traceless(self):
        c = canonical_rank_one(la.unit(2, 0, 1))
        assert c.alpha == 0 and c.beta == pytest.approx(1)

    @pytest.mark.parametrize("seed", range(8))
    def test_random(self, seed):
        A = random_rank_one(np.random.default_rng(seed), 3 + seed % 4)
        c = canonical_rank_one(A)
        assert abs(abs(c.gamma) - 1) < 1e-12 and c.alpha >= 0 and c.beta >= 0
        assert la.is_unitary(c.U)
        assert la.max_norm(c.U @ A @ c.U.conj().T - c.form()) < 1e-9


class TestApportion:
    def test_projector(self):
        A = la.unit(3, 0, 0)
        rep = apportion_rank_one(A)
        assert rep.uniform
        np.testing.assert_allclose(rep.matrix, np.ones((3, 3)) / 3, atol=1e-12)

    def test_traceless_unit(self):
        rep = apportion_rank_one(la.unit(3, 0, 1))
        assert rep.uniform
        np.testing.assert_allclose(np.abs(rep.matrix), 1 / 3, atol=1e-12)

    def test_traceless_branch_formula(self):
        # B_kj = ||A||_F omega^{-j} / n on the traceless branch
        n = 4
        A = random_rank_one(np.random.default_rng(11), n, "traceless")
        B = apportion_rank_one(A).matrix
        w = la.root_of_unity(n)
        expect = np.array([[la.frobenius(A) * w ** (-j) / n for j in range(n)] for _ in range(n)])
        # the reflector phases leave an overall unimodular factor
        phase = B[0, 0] / expect[0, 0]
        assert abs(abs(phase) - 1) < 1e-12
        np.testing.assert_allclose(B, phase * expect, atol=1e-12)

    def test_zero(self):
        rep = apportion_rank_one(np.zeros((3, 3)))
        assert rep.uniform and rep.kappa == 0

    def test_one_by_one(self):
        rep = apportion_rank_one(np.array([[2 - 1j]]))
        assert rep.uniform and rep.kappa == pytest.approx(abs(2 - 1j))

    def test_rank_two_rejected(self):
        with pytest.raises(DomainError):
            apportion_rank_one(np.diag([0.0, 1.0, 2.0]))

    @pytest.mark.parametrize("kind", ["general", "traceless", "aligned"])
    @pytest.mark.parametrize("n", range(2, 13))
    def test_branches(self, n, kind):
        A = random_rank_one(np.random.default_rng(100 * n + len(kind)), n, kind)
        check_uniform(A, apportion_rank_one(A))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 9), st.integers(0, 2**32 - 1), st.sampled_from([2, -1, 1j, -0.5j]))
    def test_exact_scaling(self, n, seed, gamma):
        A = random_rank_one(np.random.default_rng(seed), n)
        r1, r2 = apportion_rank_one(A), apportion_rank_one(gamma * A)
        assert r2.kappa == pytest.approx(abs(gamma) * r1.kappa, rel=1e-12)
        check_uniform(gamma * A, r2)


@pytest.mark.parametrize("beta", [0.01, 0.5, 1.0, 3.0, 10.0])
@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_odd_column_identity(n, beta):
    u = second_column(n, beta)
    u0 = np.ones(n) / math.sqrt(n)
    assert abs(np.linalg.norm(u) - 1) < 1e-12 and abs(np.vdot(u0, u)) < 1e-12
    target = math.sqrt((beta**2 + 1) / n)
    np.testing.assert_allclose(np.abs(u0 + beta * u), target, atol=1e-10)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_even_column(n):
    u = second_column(n, 1.0)
    u0 = np.ones(n) / math.sqrt(n)
    assert abs(np.vdot(u0, u)) < 1e-12
    np.testing.assert_allclose(np.abs(u0 + 2.5 * u), np.abs(u0 + 2.5 * u)[0])
