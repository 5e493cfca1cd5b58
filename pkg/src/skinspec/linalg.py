"""Dense complex linear-algebra kernels shared by every other module.

Matrices are plain complex numpy arrays (row-major, square unless noted).
Everything here wraps LAPACK through numpy but pins down the conventions
the rest of the package relies on: deterministic eigenvalue ordering,
minimum-norm least squares, and ascending polynomial coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

EIG_RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with a unit-norm eigenvector."""

    value: complex
    vector: np.ndarray


class LstSqResult(NamedTuple):
    x: np.ndarray
    residual: float


def as_square(a) -> np.ndarray:
    """Validate and return ``a`` as a square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix entries must be finite")
    return m


def eig_dense(a) -> list[EigenPair]:
    """All eigenpairs of a square complex matrix.

    Eigenvalues are sorted by (real, imag) so repeated calls and downstream
    CSV output are reproducible.  Each returned pair satisfies
    ``norm(A v - w v) <= EIG_RESIDUAL_RTOL * norm(A, 'fro')``; a violation
    (or LAPACK non-convergence) raises instead of returning silently.
    """
    m = as_square(a)
    values, vectors = np.linalg.eig(m)
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order]
    scale = max(np.linalg.norm(m), 1e-300)
    pairs = []
    for j in range(len(values)):
        v = vectors[:, j]
        v = v / np.linalg.norm(v)
        res = np.linalg.norm(m @ v - values[j] * v)
        if res > EIG_RESIDUAL_RTOL * scale:
            raise ArithmeticError(
                f"eigenpair residual {res:.3e} exceeds {EIG_RESIDUAL_RTOL:.1e} * |A|"
            )
        pairs.append(EigenPair(complex(values[j]), v))
    return pairs


def eigvals_dense(a) -> np.ndarray:
    """Eigenvalues only, sorted by (real, imag)."""
    values = np.linalg.eigvals(as_square(a))
    return values[np.lexsort((values.imag, values.real))]


def smallest_singular_value(a) -> float:
    """sigma_min of a square matrix; zero (within fp) iff the matrix is singular."""
    m = as_square(a)
    if m.shape[0] == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def poly_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """Roots of a polynomial given by ascending coefficients ``c0 + c1 x + ...``.

    Trailing zero coefficients are trimmed; the zero polynomial is rejected.
    Uses companion-matrix eigenvalues (``np.roots``), returned sorted by
    (real, imag).
    """
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    nonzero = np.nonzero(c)[0]
    if len(nonzero) == 0:
        raise ValueError("zero polynomial has no well-defined roots")
    c = c[: nonzero[-1] + 1]
    if len(c) == 1:
        return np.zeros(0, dtype=complex)
    roots = np.roots(c[::-1])
    return roots[np.lexsort((roots.imag, roots.real))]


def solve_least_squares(a, b) -> LstSqResult:
    """Minimum-norm x minimizing ||A x - b||, with the attained residual norm.

    Rank-deficient and inconsistent systems are expected inputs, not errors.
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1:
        raise ValueError(f"expected a matrix with at least one row, got shape {m.shape}")
    rhs = np.asarray(b, dtype=complex).reshape(-1)
    if rhs.shape[0] != m.shape[0]:
        raise ValueError("right-hand side length does not match matrix rows")
    x, _, _, _ = np.linalg.lstsq(m, rhs, rcond=None)
    residual = float(np.linalg.norm(m @ x - rhs))
    return LstSqResult(x, residual)
