import numpy as np
import pytest

from skinspec.linalg import (
    eig_dense,
    poly_roots,
    smallest_singular_value,
    solve_least_squares,
)
from skinspec.symbol import SymbolCoeffs, eval_symbol, truncation


def test_eig_identity():
    pairs = eig_dense(np.eye(3))
    assert np.allclose([p.value for p in pairs], [1, 1, 1])


def test_eig_diagonal():
    pairs = eig_dense(np.diag([1.0, 2.0j]))
    values = [p.value for p in pairs]
    assert np.allclose(sorted(values, key=lambda v: (v.real, v.imag)), [2.0j, 1.0])
    # eigenvectors are the coordinate axes up to phase
    for p in pairs:
        assert np.isclose(np.abs(p.vector).max(), 1.0)


def test_eig_coburn_symbol_at_one():
    # f(1) for the first golden example is [[0, 3/2], [3/2, 1]]; its
    # eigenvalues come from the quadratic formula on x^2 - x - 9/4
    s = SymbolCoeffs(a=[0, 1], b=[1, 0.5], c=[1, 0.5])
    pairs = eig_dense(eval_symbol(s, 1.0))
    expected = sorted([(1 - np.sqrt(10)) / 2, (1 + np.sqrt(10)) / 2])
    assert np.allclose([p.value.real for p in pairs], expected, atol=1e-12)
    assert np.allclose([p.value.imag for p in pairs], 0, atol=1e-12)


def test_eig_sorted_and_residual():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        pairs = eig_dense(m)
        values = np.array([p.value for p in pairs])
        assert list(values) == sorted(values, key=lambda v: (v.real, v.imag))
        # trace and determinant identities
        assert abs(values.sum() - np.trace(m)) <= 1e-8 * np.linalg.norm(m)
        det = np.prod(values)
        assert abs(det - np.linalg.det(m)) <= 1e-6 * max(1.0, abs(det))


def test_eig_rejects_nonsquare():
    with pytest.raises(ValueError):
        eig_dense(np.ones((2, 3)))


def test_smallest_singular_value_examples():
    assert np.isclose(smallest_singular_value(np.eye(7)), 1.0)
    assert np.isclose(smallest_singular_value(np.diag([3.0, 1e-4])), 1e-4)


def test_smallest_singular_value_truncated_kernel_bound():
    # the second golden example has kernel vector (1, 0, -1/2, 0, 1/4, ...);
    # its truncation residual upper-bounds sigma_min of the 40x40 section
    s = SymbolCoeffs(a=[0, 1], b=[1, 2], c=[1, 2])
    n = 40
    v = np.zeros(n)
    v[0::2] = (-0.5) ** np.arange(n // 2)
    a40 = truncation(s, n)
    bound = np.linalg.norm(a40 @ v) / np.linalg.norm(v)
    sig = smallest_singular_value(a40)
    assert sig <= bound + 1e-15
    assert sig <= 1e-5


def test_smallest_singular_value_probe_property():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 8))
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        sig = smallest_singular_value(m)
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        assert sig <= np.linalg.norm(m @ x) / np.linalg.norm(x) + 1e-12


def test_poly_roots_examples():
    assert np.allclose(poly_roots([-1, 0, 1]), [-1, 1])
    # 2x^2 + 5x + 2 factors as (2x + 1)(x + 2)
    roots = poly_roots([2, 5, 2])
    assert np.allclose(sorted(roots, key=lambda z: z.real), [-2, -0.5])
    for r in roots:
        assert abs(2 * r**2 + 5 * r + 2) <= 1e-12
    assert np.allclose(poly_roots([0, 0, 0, 1]), [0, 0, 0])


def test_poly_roots_reconstruction():
    rng = np.random.default_rng(5)
    for _ in range(20):
        deg = int(rng.integers(1, 7))
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        roots = poly_roots(coeffs)
        rebuilt = np.polynomial.polynomial.polyfromroots(roots) * coeffs[-1]
        scale = np.abs(coeffs).max()
        assert np.abs(rebuilt - coeffs).max() <= 1e-8 * scale * max(
            1.0, np.abs(roots).max() ** deg
        )
        for r in roots:
            val = np.polynomial.polynomial.polyval(r, coeffs)
            assert abs(val) <= 1e-8 * scale * max(1.0, abs(r)) ** deg


def test_poly_roots_rejects_zero_polynomial():
    with pytest.raises(ValueError):
        poly_roots([0, 0, 0])


def test_least_squares_identity():
    b = np.array([1.0, 2.0, 3.0])
    sol = solve_least_squares(np.eye(3), b)
    assert np.allclose(sol.x, b)
    assert sol.residual <= 1e-14


def test_least_squares_rank_deficient_consistent():
    sol = solve_least_squares(np.array([[1.0, 0.0], [0.0, 0.0]]), [2.0, 0.0])
    assert np.allclose(sol.x, [2.0, 0.0])
    assert sol.residual <= 1e-14


def test_least_squares_inconsistent():
    sol = solve_least_squares(np.array([[1.0, 0.0], [0.0, 0.0]]), [0.0, 1.0])
    assert np.isclose(sol.residual, 1.0)
    assert np.allclose(sol.x, [0.0, 0.0], atol=1e-12)
