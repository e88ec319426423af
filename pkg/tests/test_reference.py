import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imqfast.reference import (
    SingularMatrixError,
    assemble_dense,
    dense_matvec,
    dense_solve,
    halton2d,
    imq_sum,
    random_vector,
    read_points,
    rel_err_inf,
    write_points,
)


def _radical_inverse(i, base):
    inv, f = 0.0, 1.0 / base
    while i:
        inv += f * (i % base)
        i //= base
        f /= base
    return inv


def test_dense_matvec_examples():
    assert dense_matvec([[0.2, 0.2]], 0.5, np.array([3.0]))[0] == pytest.approx(6.0, rel=1e-15)
    pts = np.array([[0.0, 0.0], [np.sqrt(3), 0.0]])
    np.testing.assert_allclose(dense_matvec(pts, 1.0, np.ones(2)), [1.5, 1.5], rtol=1e-15)
    e = np.zeros(2)
    e[1] = 1
    np.testing.assert_allclose(dense_matvec(pts, 1.0, e), [0.5, 1.0], rtol=1e-15)


def test_assemble_collinear():
    A = assemble_dense([[0, 0], [1, 0], [2, 0]], 1.0)
    np.testing.assert_allclose(np.diag(A), 1.0)
    np.testing.assert_allclose([A[0, 1], A[1, 2], A[0, 2]], [2**-0.5, 2**-0.5, 5**-0.5], rtol=1e-15)


def test_assemble_symmetric_and_matches_matvec(rng):
    pts = rng.uniform(size=(300, 2))
    A = assemble_dense(pts, 0.3)
    assert np.array_equal(A, A.T)
    u = rng.uniform(-1, 1, 300)
    np.testing.assert_allclose(A @ u, dense_matvec(pts, 0.3, u), rtol=1e-13)


def test_assemble_cap():
    with pytest.raises(MemoryError):
        assemble_dense(np.zeros((11, 2)), 1.0, cap=10)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        dense_matvec([[0, np.nan]], 1.0, np.ones(1))
    with pytest.raises(ValueError):
        dense_matvec([[0, 0]], -1.0, np.ones(1))
    with pytest.raises(ValueError):
        imq_sum([[0, 0]], [[0, 0], [1, 1]], np.ones(3), 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.floats(0.05, 5), st.integers(0, 2**32 - 1))
def test_matvec_properties(N, t, seed):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(size=(N, 2))
    u = rng.uniform(-1, 1, N)
    b = dense_matvec(pts, t, u)
    assert np.all(np.abs(b) <= np.abs(u).sum() / t * (1 + 1e-12))
    e = np.zeros(N)
    e[0] = 1
    assert dense_matvec(pts, t, e)[0] == pytest.approx(1 / t, rel=1e-15)


def test_dense_solve_examples():
    assert dense_solve(np.array([[1 / 0.4]]), np.array([2.0]))[0] == pytest.approx(0.8, rel=1e-15)
    pts = halton2d(300)
    A = assemble_dense(pts, 0.01)
    c = dense_solve(A, A @ np.ones(300))
    np.testing.assert_allclose(c, 1.0, atol=1e-8)


def test_dense_solve_singular():
    with pytest.raises(SingularMatrixError):
        dense_solve(np.ones((2, 2)), np.ones(2))
    A = assemble_dense([[0.1, 0.1], [0.1, 0.1]], 1.0)
    with pytest.raises(np.linalg.LinAlgError):
        dense_solve(A, np.ones(2))
    with pytest.raises(ValueError):
        dense_solve(np.eye(2), np.ones(3))


def test_rel_err_inf():
    b = np.array([1.0, -2.0, 0.5])
    assert rel_err_inf(b, b) == 0.0
    assert rel_err_inf(1.01 * b, b) == pytest.approx(0.01, rel=1e-12)
    with pytest.raises(ValueError):
        rel_err_inf(b, np.zeros(3))
    with pytest.raises(ValueError):
        rel_err_inf(b, np.ones(2))


def test_halton():
    h = halton2d(1000)
    np.testing.assert_array_equal(h[:2], [[0.5, 1 / 3], [0.25, 2 / 3]])
    oracle = np.array([[_radical_inverse(i, 2), _radical_inverse(i, 3)] for i in range(1, 1001)])
    np.testing.assert_allclose(h, oracle, atol=1e-15)
    assert np.all((h > 0) & (h < 1))
    with pytest.raises(ValueError):
        halton2d(0)


def test_random_vector():
    a = random_vector(1000, 42)
    assert np.array_equal(a, random_vector(1000, 42))
    assert not np.array_equal(a, random_vector(1000, 43))
    assert np.all((a >= -1) & (a <= 1))


def test_point_file_round_trip(tmp_path):
    pts = halton2d(37)
    path = tmp_path / "pts.txt"
    write_points(path, pts, header="test set")
    assert path.read_text().startswith("# test set")
    assert np.array_equal(read_points(path), pts)
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 3\n4 5 6\n")
    with pytest.raises(ValueError):
        read_points(bad)
