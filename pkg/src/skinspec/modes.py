"""Constructive decaying eigenvectors and pseudo-eigenvectors.

When the total winding at lam is negative both quadratic roots lie outside
the unit circle and the semi-infinite operator has a square-summable
eigenvector assembled cell by cell from powers of the reciprocal roots:

    cell m of u_i = z_i^{-(m-1)} v_i,

where v_i spans the kernel of f(z_i) - lam.  A two-term combination kills
the single scalar defect in the first block row (the top corner coupling
touches only the first coordinate).  A confluent root with a
one-dimensional kernel instead uses the chain variant

    cell m of u_2 = z_1^{-(m-1)} v_2 + (m-1) z_1^{-(m-2)} v_1,

with v_2 solving a (possibly singular, always consistent) linear system.
Truncations of the same constructions are the exponentially good
pseudo-eigenvectors of the finite sections; positive winding is handled by
mirroring the coefficients and flipping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import solve_least_squares
from .symbol import (
    RootPair,
    SymbolCoeffs,
    build_blocks,
    eval_symbol,
    quadratic_roots,
    reversed_coeffs,
)
from .winding import winding_at_radius

KERNEL_VECTOR_TOL = 1e-9
CHAIN_RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class OperatorEigenvector:
    """Lazy eigenvector of the semi-infinite operator: roots, cell vectors
    and the combination that zeroes the first-row defect."""

    lam: complex
    roots: RootPair
    v1: np.ndarray
    v2: np.ndarray
    combo: tuple[complex, complex]
    chain: str  # "independent" | "jordan"
    rho: float  # max_i 1/|z_i| < 1, the per-cell decay rate


@dataclass(frozen=True)
class DecayProfile:
    cell_max: np.ndarray  # per-cell max modulus, max-normalized
    fitted_rho: float
    fitted_logc: float
    fit_window: tuple[int, int]  # first and last cell index used (inclusive)
    side: str  # "left" | "right"


def _kernel_vector(m: np.ndarray) -> tuple[np.ndarray, float]:
    """Right singular vector for the smallest singular value, with that value."""
    _, sing, vh = np.linalg.svd(m)
    return vh[-1].conj(), float(sing[-1])


def _first_row_defect(s: SymbolCoeffs, z: complex, v: np.ndarray) -> complex:
    """Scalar first-row defect of the plain cell construction.

    The first block row fails by -z * (top corner coupling) * v, supported
    on the first coordinate only.
    """
    return -z * s.c[s.k - 1] * v[s.k - 1]


def _combo_from_defects(d1: complex, d2: complex) -> tuple[complex, complex]:
    """Unit null direction of the 1x2 defect row [d1 d2]."""
    norm = np.hypot(abs(d1), abs(d2))
    if norm == 0.0:
        return (1.0 + 0j, 0.0 + 0j)
    alpha = np.array([-d2, d1]) / norm
    return (complex(alpha[0]), complex(alpha[1]))


def jordan_chain_vector(
    s: SymbolCoeffs, lam: complex, z1: complex, v1: np.ndarray
) -> np.ndarray:
    """Minimum-norm chain vector for a confluent root.

    Solves (A_plus + (A_zero - lam)/z1 + A_minus/z1^2) v2
         = -((A_zero - lam) + 2 A_minus/z1) v1.
    The system is singular but consistent; a residual beyond tolerance
    signals numerical trouble rather than expected behavior.
    """
    v1 = np.asarray(v1, dtype=complex)
    blocks = build_blocks(s)
    eye = np.eye(s.k, dtype=complex)
    shifted = blocks.zero - lam * eye
    fmat = eval_symbol(s, z1) - lam * eye
    scale = max(1.0, float(np.linalg.norm(fmat)))
    if np.linalg.norm(fmat @ v1) > KERNEL_VECTOR_TOL * scale:
        raise ValueError("v1 is not a kernel vector of f(z1) - lam")
    lhs = blocks.plus + shifted / z1 + blocks.minus / z1**2
    rhs = -(shifted + 2.0 * blocks.minus / z1) @ v1
    sol = solve_least_squares(lhs, rhs)
    tol = CHAIN_RESIDUAL_RTOL * max(1.0, float(np.linalg.norm(lhs)), float(np.linalg.norm(rhs)))
    if sol.residual > tol:
        raise ArithmeticError(
            f"chain system residual {sol.residual:.3e} exceeds tolerance {tol:.3e}"
        )
    return sol.x


def operator_eigenvector(s: SymbolCoeffs, lam: complex) -> OperatorEigenvector:
    """Build the decaying eigenvector data for lam with negative total winding.

    For nonnegative winding there is no decaying construction on this side;
    mirror the coefficients (reversed_coeffs) for the right-edge variant.
    """
    wind = winding_at_radius(s, lam, 1.0).winding
    if wind >= 0:
        raise ValueError(
            f"total winding {wind} >= 0 at lam={lam}; decaying construction "
            "applies to the mirrored coefficients instead"
        )
    pair = quadratic_roots(s, lam)
    eye = np.eye(s.k, dtype=complex)
    rho = max(1.0 / abs(pair.z1), 1.0 / abs(pair.z2))

    if pair.multiplicity == "distinct":
        f1 = eval_symbol(s, pair.z1) - lam * eye
        f2 = eval_symbol(s, pair.z2) - lam * eye
        v1, s1 = _kernel_vector(f1)
        v2, s2 = _kernel_vector(f2)
        for mat, vec in ((f1, v1), (f2, v2)):
            scale = max(1.0, float(np.linalg.norm(mat)))
            if np.linalg.norm(mat @ vec) > KERNEL_VECTOR_TOL * scale:
                raise ArithmeticError("cell vector residual beyond tolerance")
        d1 = _first_row_defect(s, pair.z1, v1)
        d2 = _first_row_defect(s, pair.z2, v2)
        return OperatorEigenvector(
            lam=lam,
            roots=pair,
            v1=v1,
            v2=v2,
            combo=_combo_from_defects(d1, d2),
            chain="independent",
            rho=rho,
        )

    fmat = eval_symbol(s, pair.z1) - lam * eye
    u, sing, vh = np.linalg.svd(fmat)
    scale = max(1.0, float(sing[0]))
    if s.k >= 2 and sing[-2] <= 10.0 * KERNEL_VECTOR_TOL * scale:
        # two-dimensional kernel: two independent cell vectors, same root
        v1 = vh[-1].conj()
        v2 = vh[-2].conj()
        d1 = _first_row_defect(s, pair.z1, v1)
        d2 = _first_row_defect(s, pair.z1, v2)
        return OperatorEigenvector(
            lam=lam,
            roots=pair,
            v1=v1,
            v2=v2,
            combo=_combo_from_defects(d1, d2),
            chain="independent",
            rho=rho,
        )
    v1 = vh[-1].conj()
    v2 = jordan_chain_vector(s, lam, pair.z1, v1)
    d1 = _first_row_defect(s, pair.z1, v1)
    # chain defect: -z A_plus v2 + z^2 A_plus v1, again first-coordinate only
    d2 = (
        -pair.z1 * s.c[s.k - 1] * v2[s.k - 1]
        + pair.z1**2 * s.c[s.k - 1] * v1[s.k - 1]
    )
    return OperatorEigenvector(
        lam=lam,
        roots=pair,
        v1=v1,
        v2=v2,
        combo=_combo_from_defects(d1, d2),
        chain="jordan",
        rho=rho,
    )


def materialize(ev: OperatorEigenvector, n: int) -> np.ndarray:
    """First n entries of the combined eigenvector, max-normalized.

    n is truncated mid-cell when not a multiple of k.
    """
    if n < 1:
        raise ValueError("need at least one entry")
    k = len(ev.v1)
    cells = int(np.ceil(n / k))
    a1, a2 = ev.combo
    out = np.empty(cells * k, dtype=complex)
    z1 = ev.roots.z1
    z2 = ev.roots.z2
    for m in range(cells):
        w1 = z1 ** (-m) * ev.v1
        if ev.chain == "jordan":
            w2 = z1 ** (-m) * ev.v2 + (m * z1 ** (-(m - 1))) * ev.v1
        else:
            w2 = z2 ** (-m) * ev.v2
        out[m * k : (m + 1) * k] = a1 * w1 + a2 * w2
    out = out[:n]
    peak = np.abs(out).max()
    if peak == 0:
        raise ArithmeticError("materialized vector vanished")
    return out / peak


def pseudo_eigenvector(s: SymbolCoeffs, lam: complex, n: int) -> np.ndarray:
    """Length-n pseudo-eigenvector of the n x n finite section at lam.

    Negative winding: truncate the operator construction (first-row defect
    already zeroed, so only the last row leaks, geometrically small).
    Positive winding: build on the mirrored coefficients and flip, which
    requires n to be a multiple of k.  Zero winding: no decaying mode is
    guaranteed, error.
    """
    wind = winding_at_radius(s, lam, 1.0).winding
    if wind == 0:
        raise ValueError(f"zero total winding at lam={lam}: no decaying pseudo-mode")
    if wind < 0:
        return materialize(operator_eigenvector(s, lam), n)
    if n % s.k != 0:
        raise ValueError("mirrored construction needs n divisible by k")
    mirrored = pseudo_eigenvector(reversed_coeffs(s), lam, n)
    return mirrored[::-1].copy()


def pseudo_residual(s: SymbolCoeffs, lam: complex, n: int) -> float:
    """Exact residual of the length-n pseudo-eigenvector at lam.

    The construction satisfies every row of the finite section except the
    last, whose defect is the single cut coupling b_n * x_{n+1}.  Evaluating
    that scalar directly keeps the residual meaningful far below the
    cancellation noise floor of a matrix-vector product.
    """
    wind = winding_at_radius(s, lam, 1.0).winding
    if wind == 0:
        raise ValueError(f"zero total winding at lam={lam}: no decaying pseudo-mode")
    if wind > 0:
        if n % s.k != 0:
            raise ValueError("mirrored construction needs n divisible by k")
        return pseudo_residual(reversed_coeffs(s), lam, n)
    ev = operator_eigenvector(s, lam)
    x = materialize(ev, n + 1)
    defect = abs(s.b[(n - 1) % s.k] * x[n])
    return float(defect / np.linalg.norm(x[:n]))


def residual(a, lam: complex, v) -> float:
    """||(A - lam) v|| / ||v|| in the Euclidean norm."""
    mat = np.asarray(a, dtype=complex)
    vec = np.asarray(v, dtype=complex).reshape(-1)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] != vec.shape[0]:
        raise ValueError("matrix and vector dimensions do not agree")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("residual of the zero vector is undefined")
    return float(np.linalg.norm(mat @ vec - lam * vec) / norm)


def decay_profile(v, k: int, side: str = "left") -> DecayProfile:
    """Per-cell envelope and fitted geometric decay rate of a vector.

    Cells are groups of k consecutive entries (reversed first for
    side="right").  The rate comes from a least-squares line through the
    log envelope over the middle window: first and last cells are dropped
    and zero cells are excluded.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    vec = np.asarray(v, dtype=complex).reshape(-1)
    if len(vec) < 4 * k:
        raise ValueError("need at least four cells to fit a decay profile")
    if side == "right":
        vec = vec[::-1]
    cells = int(np.ceil(len(vec) / k))
    cell_max = np.array([np.abs(vec[i * k : (i + 1) * k]).max() for i in range(cells)])
    peak = cell_max.max()
    if peak == 0:
        raise ValueError("all-zero vector has no decay profile")
    cell_max = cell_max / peak
    idx = np.arange(cells)
    window = (idx >= 1) & (idx <= cells - 2) & (cell_max > 0)
    if np.count_nonzero(window) < 2:
        raise ValueError("not enough nonzero cells in the fit window")
    x = idx[window].astype(float)
    y = np.log(cell_max[window])
    slope, intercept = np.polyfit(x, y, 1)
    return DecayProfile(
        cell_max=cell_max,
        fitted_rho=float(np.exp(slope)),
        fitted_logc=float(intercept),
        fit_window=(1, cells - 2),
        side=side,
    )
