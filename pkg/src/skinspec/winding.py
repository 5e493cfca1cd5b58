"""Winding numbers of the symbol determinant around a candidate eigenvalue.

On the circle of radius r the determinant ``det(f(z) - lam)`` is a
meromorphic loop with exactly two zeros (the quadratic roots) and one
simple pole at the origin.  Its winding about 0 is therefore

    (# roots with |z| < r) - 1,

which is computed exactly from the root moduli.  An independent
argument-accumulation route over sampled points provides the cross-check
used throughout the test suite.  Counterclockwise traversal is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symbol import SymbolCoeffs, det_offset, quadratic_roots

MAX_ARGUMENT_SAMPLES = 2**18


class BoundaryError(ValueError):
    """lam lies on (or too near) the radius-r determinant curve."""


class UnwrapError(RuntimeError):
    """Argument accumulation failed even at the maximum sample count."""


def guard_tol(r: float) -> float:
    """Boundary guard threshold for the radius-r circle."""
    return 1e-9 * (1.0 + r)


@dataclass(frozen=True)
class WindingResult:
    winding: int
    method: str  # "root_count" | "argument_sum"
    guard: float  # distance of the nearest root modulus to the circle radius


@dataclass(frozen=True)
class RegionLabel:
    """Classification of lam against the unit-circle determinant curve."""

    label: str  # "inside" | "on_sigma_det" | "outside"
    winding: int
    guard: float


def _roots_and_guard(s: SymbolCoeffs, lam: complex, r: float):
    pair = quadratic_roots(s, lam)
    guard = min(abs(abs(pair.z1) - r), abs(abs(pair.z2) - r))
    return pair, guard


def winding_at_radius(s: SymbolCoeffs, lam: complex, r: float) -> WindingResult:
    """Exact winding of det(f(z)-lam) on |z| = r via root counting."""
    if r <= 0:
        raise ValueError("radius must be positive")
    pair, guard = _roots_and_guard(s, lam, r)
    if guard <= guard_tol(r):
        raise BoundaryError(
            f"lam={lam} lies on the radius-{r} determinant curve (guard={guard:.3e})"
        )
    inside = sum(1 for z in (pair.z1, pair.z2) if abs(z) < r)
    return WindingResult(winding=inside - 1, method="root_count", guard=guard)


def winding_via_argument(
    s: SymbolCoeffs, lam: complex, r: float, samples: int = 1024
) -> WindingResult:
    """Winding by accumulating the unwrapped argument of the determinant loop.

    Doubles the sample count whenever a single step turns by more than pi/2,
    up to MAX_ARGUMENT_SAMPLES.  Agrees with winding_at_radius away from the
    boundary; the same boundary guard applies.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if samples < 256:
        raise ValueError("need at least 256 samples")
    _, guard = _roots_and_guard(s, lam, r)
    if guard <= guard_tol(r):
        raise BoundaryError(
            f"lam={lam} lies on the radius-{r} determinant curve (guard={guard:.3e})"
        )
    offset = det_offset(s, lam)
    n = samples
    while True:
        theta = 2.0 * np.pi * np.arange(n) / n
        z = r * np.exp(1j * theta)
        w = s.lead * z + s.const / z + offset
        ratios = np.roll(w, -1) / w
        steps = np.angle(ratios)
        if np.max(np.abs(steps)) <= np.pi / 2:
            total = float(np.sum(steps))
            return WindingResult(
                winding=int(np.rint(total / (2.0 * np.pi))),
                method="argument_sum",
                guard=guard,
            )
        if n >= MAX_ARGUMENT_SAMPLES:
            raise UnwrapError(
                f"argument steps exceed pi/2 at {n} samples; need more resolution"
            )
        n *= 2


def eigencurve_winding_sum(s: SymbolCoeffs, lam: complex) -> int:
    """Total winding of the symbol's eigenvalue curves about lam.

    Since det(f(z)-lam) factors over the eigenvalue branches, the branch
    windings sum to the determinant winding on the unit circle.
    """
    return winding_at_radius(s, lam, 1.0).winding


def classify_region(s: SymbolCoeffs, lam: complex) -> RegionLabel:
    """Locate lam relative to the nonzero-winding region.

    "on_sigma_det" when a quadratic root modulus sits on the unit circle
    within the guard tolerance; otherwise "inside" when the total winding
    is nonzero, else "outside".  The boundary is a label here, not an error.
    """
    pair, guard = _roots_and_guard(s, lam, 1.0)
    if guard <= guard_tol(1.0):
        return RegionLabel(label="on_sigma_det", winding=0, guard=guard)
    inside = sum(1 for z in (pair.z1, pair.z2) if abs(z) < 1.0)
    w = inside - 1
    return RegionLabel(
        label="inside" if w != 0 else "outside", winding=w, guard=guard
    )
