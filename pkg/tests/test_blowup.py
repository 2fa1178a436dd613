import itertools
import math

import numpy as np
import pytest

from apportion import linalg as la
from apportion.blowup import (
    apportion_blowup,
    apportion_prime_search,
    block_unitary,
    cyclic_blowup,
    frak_u_min,
    group_element,
    orthogonality_check,
    permutation_matrix,
    tf_matrix,
    u_gap,
)
from apportion.errors import DomainError, SizeError
from apportion.labelings import LoopGraph, ZnFunction, contracting_functions, underlying_graphs

GRACEFUL4 = LoopGraph(4, [(0, 2), (0, 3), (1, 2), (2, 2)])
STAR3 = LoopGraph(3, [(0, 0), (0, 1), (0, 2)])


def random_function(rng, n):
    return ZnFunction(rng.integers(0, n, n))


class TestBlockUnitary:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_unitary(self, n):
        op = block_unitary(n)
        assert op.N == (2 * n - 1) ** 2
        assert np.max(np.abs(op.U @ op.U.conj().T - np.eye(op.N))) < 1e-12

    def test_first_block(self):
        U = block_unitary(2).U
        np.testing.assert_allclose(U[:3, :3], np.eye(3) / math.sqrt(3), atol=1e-15)

    def test_block_formula(self):
        n, m = 3, 5
        U = block_unitary(n).U
        C = la.cyclic_shift(m)
        w = la.root_of_unity(m) ** np.arange(m)
        for i, j in [(1, 2), (4, 3), (2, 0)]:
            want = np.linalg.matrix_power(C, j) @ np.diag(w**i) / math.sqrt(m)
            np.testing.assert_allclose(U[i * m:(i + 1) * m, j * m:(j + 1) * m], want, atol=1e-14)

    def test_cap(self):
        with pytest.raises(SizeError):
            block_unitary(11)
        with pytest.raises(DomainError):
            block_unitary(1)


class TestBlowup:
    def test_hermitian_and_norm(self):
        H = cyclic_blowup(GRACEFUL4)
        assert np.max(np.abs(H - H.conj().T)) < 1e-12
        assert la.frobenius(H) == pytest.approx(math.sqrt(7 * 7))

    def test_too_many_vertices(self):
        with pytest.raises(DomainError):
            cyclic_blowup(GRACEFUL4, n=3)

    def test_star(self):
        rep = apportion_blowup(STAR3, [0, 1, 2])
        assert rep.uniform and rep.kappa == pytest.approx(0.2)
        assert np.max(np.abs(np.abs(rep.matrix) - 0.2)) < 1e-9

    def test_example_graph(self):
        rep = apportion_blowup(GRACEFUL4, [0, 1, 2, 3])
        assert rep.uniform and rep.matrix.shape == (49, 49)
        assert np.max(np.abs(np.abs(rep.matrix) - 1 / 7)) < 1e-9

    def test_non_graceful_rho_labeling(self):
        G = LoopGraph(3, [(0, 1), (1, 2), (0, 0)])
        assert apportion_blowup(G, [0, 2, 1]).uniform

    def test_bad_labeling(self):
        with pytest.raises(DomainError):
            apportion_blowup(LoopGraph(3, [(0, 1), (1, 2), (0, 0)]), [0, 1, 2])

    @pytest.mark.parametrize("n", [2, 3])
    def test_prime_search_all_contracting(self, n):
        for f in contracting_functions(n):
            _, G = underlying_graphs(f)
            rep = apportion_prime_search(G)
            assert rep.uniform and abs(rep.kappa - 1 / (2 * n - 1)) < 1e-9


class TestGroup:
    def test_identity(self):
        np.testing.assert_allclose(group_element(np.eye(3), 2), np.eye(9), atol=1e-14)

    def test_group_law(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            p, q = rng.permutation(3), rng.permutation(3)
            P, Q = permutation_matrix(p), permutation_matrix(q)
            lhs = group_element(P, 2) @ group_element(Q, 2)
            assert np.max(np.abs(lhs - group_element(P @ Q, 2))) < 1e-10

    def test_unitary(self):
        for p in itertools.permutations(range(5)):
            if sum(p) % 7:
                continue
            assert la.is_unitary(group_element(permutation_matrix(p), 3), 1e-10)

    def test_not_permutation(self):
        with pytest.raises(DomainError):
            group_element(np.ones((3, 3)), 2)


class TestTf:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_norm(self, n):
        f = ZnFunction([0] + list(range(n - 1)))
        assert la.frobenius(tf_matrix(f)) == pytest.approx(math.sqrt((2 * n - 1) * n))

    def test_antihomomorphism(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            n = int(rng.integers(2, 5))
            f, g = random_function(rng, n), random_function(rng, n)
            lhs = tf_matrix(f) @ tf_matrix(g)
            assert np.max(np.abs(lhs - tf_matrix(g.compose(f)))) < 1e-10

    def test_involution_hermitian(self):
        T = tf_matrix(ZnFunction([1, 0, 2]))
        assert np.max(np.abs(T - T.conj().T)) < 1e-12


class TestFrakMin:
    def test_tf_n2(self):
        for f in contracting_functions(2):
            val, _ = frak_u_min(tf_matrix(f), 2)
            assert abs(val - 1 / 3) < 1e-10
            gap = val - la.frobenius(tf_matrix(f)) / 9
            assert abs(gap - (1 / 3 - math.sqrt(6) / 9)) < 1e-10
            assert abs(gap - u_gap(2)) < 1e-10

    def test_equal_values_n3(self):
        vals = [frak_u_min(tf_matrix(f), 3, subgroup="prime")[0] for f in contracting_functions(3)]
        assert max(vals) - min(vals) < 1e-10

    def test_already_uniform(self):
        H = apportion_blowup(STAR3, [0, 1, 2]).matrix
        val, perm = frak_u_min(H, 3, subgroup="prime")
        assert val == pytest.approx(la.max_norm(H)) and perm == [0, 1, 2, 3, 4]

    def test_sampled_is_deterministic(self):
        H = cyclic_blowup(STAR3)
        a = frak_u_min(H, 3, mode="sampled", samples=30, seed=4)
        b = frak_u_min(H, 3, mode="sampled", samples=30, seed=4)
        assert a == b

    def test_cap(self):
        with pytest.raises(SizeError):
            frak_u_min(np.eye(81), 5)


class TestOrthogonality:
    def test_all_n2(self):
        for f in contracting_functions(2):
            assert all(orthogonality_check(f, p) for p in itertools.permutations(range(3)))

    @staticmethod
    def collision_free(f, p, m):
        # U (I (x) X) U^* entry (a, b) only sees the cyclic diagonal b - a of X,
        # so the products are disjoint iff no arc difference is minus another
        d = [(p[f(i)] - p[i]) % m for i in range(1, f.n)]
        return not any((a + b) % m == 0 for a in d for b in d)

    @pytest.mark.parametrize("n", [2, 3])
    def test_matches_difference_oracle(self, n):
        m = 2 * n - 1
        for f in contracting_functions(n):
            for p in itertools.permutations(range(m)):
                assert orthogonality_check(f, p) == self.collision_free(f, p, m)

    def test_n3_star_counterexample(self):
        # labels 2, 0, 4 give arc differences 2 and -2 mod 5
        assert not orthogonality_check(ZnFunction([0, 0, 0]), [2, 0, 4, 3, 1])
        assert frak_u_min(tf_matrix(ZnFunction([0, 0, 0])), 3)[0] == pytest.approx(0.2)

    def test_identity(self):
        assert orthogonality_check(ZnFunction([0, 0, 1]), range(5))
