import pytest

from apportion.experiments import spectral_bound_rows, zero_augmented_rows


def test_spectral_rows_bracketed():
    rows = spectral_bound_rows(samples=3, n=3, restarts=1, iters=40)
    assert rows
    for r in rows:
        # searched u(A) sits between the Frobenius lower bound and the spectral upper bound
        assert r["frobenius_over_n"] - 1e-9 <= r["u_estimate"] <= r["spectral"] + 1e-9
        assert r["nuclear_over_n"] < r["spectral"]


def test_zero_augmented_rows_shape():
    rows = zero_augmented_rows(n=2, samples=2, restarts=1, iters=40)
    assert [r["sample"] for r in rows] == [0, 1]
    assert all(len(r["spectrum"]) == 2 and r["residual"] >= 0 for r in rows)


def test_reproducible():
    a = spectral_bound_rows(samples=2, n=2, restarts=1, iters=30, seed=5)
    b = spectral_bound_rows(samples=2, n=2, restarts=1, iters=30, seed=5)
    assert a == b
