import numpy as np
import pytest

from apportion.errors import DomainError
from apportion.interlace import check_sum_identity, interlacing_bounds, mask_family
from apportion.labelings import LoopGraph, ZnFunction, nif_to_loopgraph

GRACEFUL4 = LoopGraph(4, [(0, 2), (0, 3), (1, 2), (2, 2)])

# masks printed for the example graph, as sign patterns on M
GRACEFUL4_MASKS = [
    [[1, 1, 0, 0], [1, 1, 0, 1], [0, 0, -1, 1], [0, 1, 1, 1]],
    [[1, 0, 1, 1], [0, -1, 1, 0], [1, 1, 1, 0], [1, 0, 0, 1]],
    [[-1, 1, 0, 0], [1, 1, 0, 1], [0, 0, 1, 1], [0, 1, 1, 1]],
    [[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 1, 0], [1, 0, 0, -1]],
]


def random_hermitian(rng, n):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (X + X.conj().T) / 2


def random_graceful(rng, n):
    return nif_to_loopgraph(ZnFunction([rng.integers(0, i + 1) for i in range(n)]))


class TestFamily:
    def test_example_masks(self):
        fam = mask_family(np.ones((4, 4)), GRACEFUL4)
        for Mk, want in zip(fam.members, GRACEFUL4_MASKS):
            np.testing.assert_array_equal(Mk, want)

    def test_example_symbolic(self):
        # distinct entries so every position is tracked
        M = np.arange(16).reshape(4, 4) + 1.0
        M = M + M.T
        fam = mask_family(M, GRACEFUL4)
        for Mk, mask in zip(fam.members, GRACEFUL4_MASKS):
            np.testing.assert_array_equal(Mk, M * np.array(mask))

    def test_zero(self):
        fam = mask_family(np.zeros((4, 4)), GRACEFUL4)
        assert all(np.all(Mk == 0) for Mk in fam.members) and np.all(fam.thetas == 0)

    def test_hermitian_members(self):
        rng = np.random.default_rng(0)
        fam = mask_family(random_hermitian(rng, 5), random_graceful(rng, 5))
        for Mk in fam.members:
            assert np.max(np.abs(Mk - Mk.conj().T)) < 1e-12

    def test_thetas(self):
        rng = np.random.default_rng(1)
        fam = mask_family(random_hermitian(rng, 6), random_graceful(rng, 6))
        assert fam.thetas.size == 36 and np.all(np.diff(fam.thetas) <= 0)
        assert np.allclose(np.sort(np.concatenate(fam.spectra)), np.sort(fam.thetas))
        assert fam.thetas.sum() == pytest.approx(4 * np.trace(fam.base).real, abs=1e-9)

    def test_rejects(self):
        with pytest.raises(DomainError):
            mask_family(np.array([[0, 1], [0, 0]]), LoopGraph(2, [(0, 1), (0, 0)]))
        with pytest.raises(DomainError):
            mask_family(np.eye(4), LoopGraph(4, [(0, 1), (1, 2), (2, 3), (0, 0)]))
        with pytest.raises(DomainError):
            mask_family(np.triu(np.ones((4, 4))), GRACEFUL4)


class TestIdentity:
    def test_example(self):
        fam = mask_family(np.ones((4, 4)), GRACEFUL4)
        assert check_sum_identity(fam) == 0
        np.testing.assert_array_equal(sum(fam.members), 2 * np.ones((4, 4)))

    def test_identity_matrix(self):
        fam = mask_family(np.eye(4), GRACEFUL4)
        np.testing.assert_array_equal(sum(fam.members), 2 * np.eye(4))

    @pytest.mark.parametrize("seed", range(5))
    def test_random_n5(self, seed):
        rng = np.random.default_rng(seed)
        assert check_sum_identity(mask_family(random_hermitian(rng, 5), random_graceful(rng, 5))) < 1e-12

    def test_n3_rejected(self):
        fam = mask_family(np.eye(3), nif_to_loopgraph(ZnFunction([0, 0, 0])))
        with pytest.raises(DomainError):
            check_sum_identity(fam)
        with pytest.raises(DomainError):
            interlacing_bounds(fam)


class TestBounds:
    def test_zero(self):
        rows = interlacing_bounds(mask_family(np.zeros((4, 4)), GRACEFUL4))
        assert all(r.ok and r.lower == r.value == r.upper == 0 for r in rows)

    def test_ones(self):
        rows = interlacing_bounds(mask_family(np.ones((4, 4)), GRACEFUL4))
        assert [r.value for r in rows] == pytest.approx([4, 0, 0, 0], abs=1e-12)
        assert all(r.ok for r in rows)

    @pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
    def test_random(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(10):
            rows = interlacing_bounds(mask_family(random_hermitian(rng, n), random_graceful(rng, n)))
            assert all(r.ok for r in rows)
