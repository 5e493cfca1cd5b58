"""The k-periodic tridiagonal symbol f(z) and its closed-form determinant.

A period-k tridiagonal operator is described by three coefficient lists
(a, b, c) of length k: diagonal, superdiagonal and subdiagonal, repeated
periodically.  Its symbol is the k x k matrix family

    f(z) = A_minus / z + A_zero + A_plus * z,

where A_zero is the tridiagonal cell block, A_minus carries b_k in its
bottom-left corner and A_plus carries c_k in its top-right corner.  The
scalar determinant of ``f(z) - lam`` collapses to

    lead * z + const / z + offset(lam),

with ``lead = (-1)^(k+1) prod(c)``, ``const = (-1)^(k+1) prod(b)`` and
``offset`` a degree-k polynomial in lam.  All spectral classification in
this package runs through the two roots of the associated quadratic
``lead z^2 + offset(lam) z + const``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import poly_roots

# multiplicity is declared double when |offset^2 - 4*lead*const| falls
# below this scale-relative threshold
DOUBLE_ROOT_RTOL = 1e-9


class DegenerateSymbolError(ValueError):
    """Raised when prod(b) or prod(c) vanishes and the root quadratic degenerates."""


@dataclass
class SymbolCoeffs:
    """Coefficient lists (a, b, c), each of length k >= 1."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.a = np.atleast_1d(np.asarray(self.a, dtype=complex))
        self.b = np.atleast_1d(np.asarray(self.b, dtype=complex))
        self.c = np.atleast_1d(np.asarray(self.c, dtype=complex))
        if not (len(self.a) == len(self.b) == len(self.c)) or len(self.a) < 1:
            raise ValueError("coefficient lists must share a common length k >= 1")

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def prod_b(self) -> complex:
        return complex(np.prod(self.b))

    @property
    def prod_c(self) -> complex:
        return complex(np.prod(self.c))

    @property
    def lead(self) -> complex:
        """Coefficient of z in det(f(z) - lam)."""
        return (-1) ** (self.k + 1) * self.prod_c

    @property
    def const(self) -> complex:
        """Coefficient of 1/z in det(f(z) - lam)."""
        return (-1) ** (self.k + 1) * self.prod_b

    def to_json(self) -> str:
        def pairs(x):
            return [[float(v.real), float(v.imag)] for v in x]

        return json.dumps(
            {"k": self.k, "a": pairs(self.a), "b": pairs(self.b), "c": pairs(self.c)}
        )

    @classmethod
    def from_json(cls, text: str) -> "SymbolCoeffs":
        data = json.loads(text)
        arrays = {}
        for key in ("a", "b", "c"):
            vals = data[key]
            arrays[key] = np.array(
                [complex(re, im) for re, im in vals], dtype=complex
            )
        s = cls(**arrays)
        if "k" in data and int(data["k"]) != s.k:
            raise ValueError(f"declared k={data['k']} does not match list length {s.k}")
        return s


@dataclass(frozen=True)
class SymbolBlocks:
    """The three k x k blocks of the symbol: f(z) = minus/z + zero + plus*z."""

    minus: np.ndarray
    zero: np.ndarray
    plus: np.ndarray


@dataclass(frozen=True)
class RootPair:
    """Roots of ``lead z^2 + offset z + const`` with their multiplicity.

    z1 is the root of smaller modulus (ties broken by phase angle).
    """

    z1: complex
    z2: complex
    multiplicity: str  # "distinct" | "double"
    lead: complex
    const: complex
    offset: complex

    @property
    def moduli(self) -> tuple[float, float]:
        return abs(self.z1), abs(self.z2)


def build_blocks(s: SymbolCoeffs) -> SymbolBlocks:
    """Assemble the cell blocks; for k = 1 they are the 1x1 values b, a, c."""
    k = s.k
    zero = np.zeros((k, k), dtype=complex)
    minus = np.zeros((k, k), dtype=complex)
    plus = np.zeros((k, k), dtype=complex)
    zero[np.arange(k), np.arange(k)] = s.a
    for i in range(k - 1):
        zero[i, i + 1] = s.b[i]
        zero[i + 1, i] = s.c[i]
    minus[k - 1, 0] = s.b[k - 1]
    plus[0, k - 1] = s.c[k - 1]
    return SymbolBlocks(minus=minus, zero=zero, plus=plus)


def eval_symbol(s: SymbolCoeffs, z: complex) -> np.ndarray:
    """The k x k matrix f(z).  For k <= 2 the corner blocks overlap additively."""
    if z == 0:
        raise ValueError("the symbol has a pole at z = 0")
    blocks = build_blocks(s)
    return blocks.minus / z + blocks.zero + blocks.plus * z


def _tridiag_det(diag, sup, sub) -> complex:
    """Determinant of a tridiagonal matrix via the three-term continuant."""
    n = len(diag)
    if n == 0:
        return 1.0 + 0j
    prev2, prev1 = 1.0 + 0j, complex(diag[0])
    for i in range(1, n):
        prev2, prev1 = prev1, diag[i] * prev1 - sup[i - 1] * sub[i - 1] * prev2
    return prev1


def inner_minor(s: SymbolCoeffs, lam: complex) -> complex:
    """Determinant of the interior principal (k-2) x (k-2) block of the cell.

    This is the minor on rows and columns 2..k-1 of A_zero - lam (diagonal
    a_2..a_{k-1} - lam, superdiagonal b_2..b_{k-2}, subdiagonal c_2..c_{k-2});
    by convention 0 for k = 1 and 1 for k = 2.  It multiplies the b_k c_k
    corner cross-term in the determinant expansion.
    """
    k = s.k
    if k == 1:
        return 0.0 + 0j
    if k == 2:
        return 1.0 + 0j
    return _tridiag_det(s.a[1 : k - 1] - lam, s.b[1 : k - 2], s.c[1 : k - 2])


def det_offset(s: SymbolCoeffs, lam: complex) -> complex:
    """The z-independent part of det(f(z) - lam).

    Equals det(A_zero - lam) - b_k c_k * inner_minor(lam); a polynomial of
    degree k in lam with leading coefficient (-1)^k.
    """
    cell = _tridiag_det(s.a - lam, s.b[: s.k - 1], s.c[: s.k - 1])
    return cell - s.b[s.k - 1] * s.c[s.k - 1] * inner_minor(s, lam)


def _poly_tridiag_det(diag_consts, sup, sub) -> np.ndarray:
    """Continuant recurrence carried over ascending polynomial coefficients.

    Each diagonal entry is the degree-1 polynomial ``d - lam``.
    """
    n = len(diag_consts)
    prev2 = np.array([1.0 + 0j])
    if n == 0:
        return prev2
    prev1 = np.array([complex(diag_consts[0]), -1.0 + 0j])
    for i in range(1, n):
        d = np.array([complex(diag_consts[i]), -1.0 + 0j])
        term = np.polynomial.polynomial.polymul(d, prev1)
        bc = sup[i - 1] * sub[i - 1]
        width = max(len(term), len(prev2))
        nxt = np.zeros(width, dtype=complex)
        nxt[: len(term)] = term
        nxt[: len(prev2)] -= bc * prev2
        prev2, prev1 = prev1, nxt
    return prev1


def det_offset_poly(s: SymbolCoeffs) -> np.ndarray:
    """Ascending coefficients (length k+1) of det_offset as a polynomial in lam."""
    k = s.k
    cell = _poly_tridiag_det(s.a, s.b[: k - 1], s.c[: k - 1])
    if k == 1:
        minor = np.zeros(1, dtype=complex)
    elif k == 2:
        minor = np.array([1.0 + 0j])
    else:
        minor = _poly_tridiag_det(s.a[1 : k - 1], s.b[1 : k - 2], s.c[1 : k - 2])
    out = np.zeros(k + 1, dtype=complex)
    out[: len(cell)] = cell
    out[: len(minor)] -= s.b[k - 1] * s.c[k - 1] * minor
    return out


def det_closed_form(s: SymbolCoeffs, z: complex, lam: complex) -> complex:
    """det(f(z) - lam) without forming the matrix: lead*z + const/z + offset."""
    if z == 0:
        raise ValueError("the symbol has a pole at z = 0")
    return s.lead * z + s.const / z + det_offset(s, lam)


def quadratic_roots(s: SymbolCoeffs, lam: complex) -> RootPair:
    """The two z-roots of det(f(z) - lam) = 0, smaller modulus first.

    Requires prod(b) != 0 and prod(c) != 0 so that the quadratic
    ``lead z^2 + offset z + const`` is non-degenerate.
    """
    lead, const = s.lead, s.const
    if lead == 0 or const == 0:
        raise DegenerateSymbolError(
            "root quadratic degenerates: prod(b) and prod(c) must be nonzero"
        )
    off = complex(det_offset(s, lam))
    disc = off * off - 4.0 * lead * const
    scale = abs(off) ** 2 + 4.0 * abs(lead * const) + 1.0
    if abs(disc) <= DOUBLE_ROOT_RTOL * scale:
        z = -off / (2.0 * lead)
        return RootPair(z, z, "double", lead, const, off)
    sq = np.sqrt(complex(disc))
    # pick the sign that avoids cancellation in -off -/+ sq
    if abs(off + sq) >= abs(off - sq):
        q = -(off + sq) / 2.0
    else:
        q = -(off - sq) / 2.0
    r1 = q / lead
    r2 = const / q
    (z1, z2) = sorted((complex(r1), complex(r2)), key=lambda w: (abs(w), np.angle(w)))
    return RootPair(z1, z2, "distinct", lead, const, off)


def double_root_lambdas(s: SymbolCoeffs) -> np.ndarray:
    """All lam (at most 2k) where the z-quadratic has a double root.

    These are the roots of offset(lam) = +/- 2 sqrt(lead * const), found via
    companion matrices on the offset polynomial.
    """
    if s.lead == 0 or s.const == 0:
        raise DegenerateSymbolError(
            "root quadratic degenerates: prod(b) and prod(c) must be nonzero"
        )
    base = det_offset_poly(s)
    shift = 2.0 * np.sqrt(complex(s.lead * s.const))
    found = []
    for sign in (-1.0, 1.0):
        coeffs = base.copy()
        coeffs[0] += sign * shift
        found.extend(poly_roots(coeffs))
    lams = np.array(found, dtype=complex)
    return lams[np.lexsort((lams.imag, lams.real))]


def reversed_coeffs(s: SymbolCoeffs) -> SymbolCoeffs:
    """The coefficient lists of the left-right mirrored operator.

    Flipping a k-periodic truncation (rows and columns reversed, cell count
    preserved) yields the truncation of the symbol with a reversed, the old
    subdiagonal as superdiagonal and vice versa:

        a -> (a_k, ..., a_1),  b -> (c_{k-1}, ..., c_1, c_k),
        c -> (b_{k-1}, ..., b_1, b_k).
    """
    k = s.k
    a_rev = s.a[::-1].copy()
    b_rev = np.concatenate([s.c[k - 2 :: -1], s.c[k - 1 :]]) if k > 1 else s.c.copy()
    c_rev = np.concatenate([s.b[k - 2 :: -1], s.b[k - 1 :]]) if k > 1 else s.b.copy()
    return SymbolCoeffs(a=a_rev, b=b_rev, c=c_rev)


def truncation(s: SymbolCoeffs, n: int) -> np.ndarray:
    """The n x n finite section of the semi-infinite periodic operator."""
    if n < 1:
        raise ValueError("truncation size must be positive")
    k = s.k
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    m[idx, idx] = s.a[idx % k]
    m[idx[:-1], idx[:-1] + 1] = s.b[idx[:-1] % k]
    m[idx[:-1] + 1, idx[:-1]] = s.c[idx[:-1] % k]
    return m
