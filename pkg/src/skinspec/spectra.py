"""Spectral sets and grids: determinant spectrum samples, the spectrum
sandwich, point-spectrum decisions by forward recurrence, a block-circulant
oracle, and sigma_min grids for pseudospectra.

The spectrum of the semi-infinite periodic operator is sandwiched between
the determinant curve plus the nonzero-winding region and the same set
augmented by the eigenvalues of the leading (k-1) principal minor of the
cell block.  Points that land in that last sliver ("candidate_minor") are
undecidable by the sandwich alone and are settled numerically by running
the forward kernel recurrence and inspecting its per-cell growth.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .linalg import eigvals_dense, smallest_singular_value
from .symbol import SymbolCoeffs, build_blocks, eval_symbol, quadratic_roots
from .winding import classify_region

# verdict thresholds for the kernel recurrence (per-cell growth ratio)
RECURRENCE_RATIO_TOL = 0.05
# lam must be this close to a minor eigenvalue to stay a candidate
MINOR_MATCH_RTOL = 1e-8
# grid defaults: bounding box inflation and node count per axis
GRID_INFLATION = 0.25
GRID_RESOLUTION = 201

_LABEL_CODES = {"outside": 0, "inside": 1, "on_sigma_det": 2}
_CODE_LABELS = {v: k for k, v in _LABEL_CODES.items()}


def _worker_count() -> int:
    raw = os.environ.get("SKINSPEC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class SigmaDetSample:
    """Eigenvalues of f(e^{i theta}) on a uniform theta grid.

    ``values[m]`` holds the k eigenvalues at theta_m sorted by (real, imag);
    together the rows sample the essential-spectrum curves.
    """

    thetas: np.ndarray
    values: np.ndarray  # shape (samples, k)
    label: str = "sigma_det"

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def bounding_box(self) -> tuple[float, float, float, float]:
        v = self.flat
        return (
            float(v.real.min()),
            float(v.real.max()),
            float(v.imag.min()),
            float(v.imag.max()),
        )

    def min_distance(self, lam: complex) -> float:
        return float(np.abs(self.flat - lam).min())


def sigma_det_sample(s: SymbolCoeffs, samples: int = 512) -> SigmaDetSample:
    """Sample the determinant-spectrum curves at ``samples`` circle points."""
    if samples < 64:
        raise ValueError("need at least 64 circle samples")
    thetas = 2.0 * np.pi * np.arange(samples) / samples
    values = np.empty((samples, s.k), dtype=complex)
    for m, t in enumerate(thetas):
        values[m] = eigvals_dense(eval_symbol(s, np.exp(1j * t)))
    return SigmaDetSample(thetas=thetas, values=values)


def laurent_spectrum_sample(s: SymbolCoeffs, samples: int = 512) -> SigmaDetSample:
    """The two-sided (Laurent) operator spectrum; same curves, distinct label."""
    out = sigma_det_sample(s, samples)
    out.label = "laurent"
    return out


def principal_minor_eigs(s: SymbolCoeffs) -> np.ndarray:
    """Eigenvalues of the leading (k-1) x (k-1) minor of the cell block.

    Empty for k = 1: the minor is zero-dimensional and the sandwich reduces
    to the classical scalar statement.
    """
    if s.k == 1:
        return np.zeros(0, dtype=complex)
    blocks = build_blocks(s)
    return eigvals_dense(blocks.zero[: s.k - 1, : s.k - 1])


@dataclass(frozen=True)
class SpectrumClassification:
    label: str  # in_spectrum_essential | in_spectrum_winding | candidate_minor | not_in_spectrum
    winding: int
    minor_eigs: np.ndarray


def classify_spectrum_point(s: SymbolCoeffs, lam: complex) -> SpectrumClassification:
    """Place lam in the spectrum sandwich.

    Essential when a root modulus sits on the unit circle; winding-forced
    when the total winding is nonzero; otherwise a minor eigenvalue within
    tolerance keeps lam an undecided candidate, and anything else is out.
    """
    pair = quadratic_roots(s, lam)
    minor = principal_minor_eigs(s)
    dist = min(abs(abs(pair.z1) - 1.0), abs(abs(pair.z2) - 1.0))
    if dist <= 1e-9:
        return SpectrumClassification("in_spectrum_essential", 0, minor)
    inside = sum(1 for z in (pair.z1, pair.z2) if abs(z) < 1.0)
    w = inside - 1
    if w != 0:
        return SpectrumClassification("in_spectrum_winding", w, minor)
    tol = MINOR_MATCH_RTOL * (1.0 + abs(lam))
    if minor.size and np.abs(minor - lam).min() <= tol:
        return SpectrumClassification("candidate_minor", 0, minor)
    return SpectrumClassification("not_in_spectrum", 0, minor)


@dataclass(frozen=True)
class RecurrenceResult:
    vector: np.ndarray
    verdict: str  # "ell2_decay" | "growth" | "inconclusive"
    cell_ratio: float  # max adjacent per-cell ratio over the inspected window (nan if none)


def kernel_forward_recurrence(
    s: SymbolCoeffs, lam: complex, n: int | None = None
) -> RecurrenceResult:
    """Forward-substitute the only kernel candidate of the truncated rows.

    Starting from u_1 = 1 every subsequent entry is forced:
    u_{m+1} = ((lam - a_m) u_m - c_{m-1} u_{m-1}) / b_m with k-periodic
    coefficients.  The verdict inspects adjacent per-cell maxima over the
    last third of cells: all ratios below 1 - tol mean square-summable
    decay, any above 1 + tol mean growth, anything else is inconclusive.
    """
    k = s.k
    if n is None:
        n = 60 * k
    if n < 2:
        raise ValueError("need at least two entries")
    u = np.zeros(n, dtype=complex)
    u[0] = 1.0
    if s.b[0] == 0:
        raise ZeroDivisionError("superdiagonal coefficient b_1 vanishes")
    u[1] = (lam - s.a[0]) * u[0] / s.b[0]
    for m in range(2, n):
        bm = s.b[(m - 1) % k]
        if bm == 0:
            raise ZeroDivisionError(f"superdiagonal coefficient vanishes at row {m}")
        am = s.a[(m - 1) % k]
        cm = s.c[(m - 2) % k]
        u[m] = ((lam - am) * u[m - 1] - cm * u[m - 2]) / bm
    cells = int(np.ceil(n / k))
    cell_max = np.array([np.abs(u[i * k : (i + 1) * k]).max() for i in range(cells)])
    start = max(0, cells - max(2, cells // 3))
    ratios = [
        cell_max[i + 1] / cell_max[i]
        for i in range(start, cells - 1)
        if cell_max[i] > 0 and cell_max[i + 1] > 0
    ]
    if not ratios:
        return RecurrenceResult(u, "inconclusive", float("nan"))
    peak = max(ratios)
    if peak < 1.0 - RECURRENCE_RATIO_TOL:
        verdict = "ell2_decay"
    elif peak > 1.0 + RECURRENCE_RATIO_TOL:
        verdict = "growth"
    else:
        verdict = "inconclusive"
    return RecurrenceResult(u, verdict, float(peak))


def block_circulant_matrix(s: SymbolCoeffs, cells: int) -> np.ndarray:
    """The (cells*k)-dimensional periodic wrap-around truncation.

    Corner couplings close the chain: c_k connects site 1 back to the last
    site and b_k the last site to site 1.  Entries accumulate additively so
    that small cell counts (overlapping corners) stay correct.
    """
    if cells < 2:
        raise ValueError("need at least two cells")
    k = s.k
    n = cells * k
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    m[idx, idx] += s.a[idx % k]
    m[idx[:-1], idx[:-1] + 1] += s.b[idx[:-1] % k]
    m[idx[:-1] + 1, idx[:-1]] += s.c[idx[:-1] % k]
    m[0, n - 1] += s.c[k - 1]
    m[n - 1, 0] += s.b[k - 1]
    return m


def block_circulant_eigs(s: SymbolCoeffs, cells: int) -> np.ndarray:
    """Eigenvalues of the periodic truncation, sorted by (real, imag).

    Serves as a finite, assembly-level oracle: the same multiset must come
    out of the symbol evaluated at the corresponding roots of unity.
    """
    return eigvals_dense(block_circulant_matrix(s, cells))


@dataclass(frozen=True)
class GridSpec:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int
    n_im: int

    def __post_init__(self):
        if self.re_max <= self.re_min or self.im_max <= self.im_min:
            raise ValueError("grid ranges must be nonempty")
        if self.n_re < 2 or self.n_im < 2:
            raise ValueError("grid needs at least 2 nodes per axis")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.re_min, self.re_max, self.n_re),
            np.linspace(self.im_min, self.im_max, self.n_im),
        )


@dataclass
class ClassifiedGrid:
    """Rectangular lam-grid with region labels and an optional sigma_min layer."""

    spec: GridSpec
    labels: np.ndarray | None = None  # (n_im, n_re) int codes
    winding: np.ndarray | None = None  # (n_im, n_re) int
    sigma_min: np.ndarray | None = None  # (n_im, n_re) float

    @staticmethod
    def label_name(code: int) -> str:
        return _CODE_LABELS[int(code)]

    def rows(self):
        """Yield (re, im, label, winding, sigma_min) per node, row-major."""
        re_axis, im_axis = self.spec.axes()
        for j, y in enumerate(im_axis):
            for i, x in enumerate(re_axis):
                label = (
                    _CODE_LABELS[int(self.labels[j, i])]
                    if self.labels is not None
                    else ""
                )
                wind = int(self.winding[j, i]) if self.winding is not None else 0
                sig = (
                    float(self.sigma_min[j, i]) if self.sigma_min is not None else None
                )
                yield (float(x), float(y), label, wind, sig)

    def region_counts(self) -> dict[str, int]:
        if self.labels is None:
            return {}
        return {
            name: int(np.count_nonzero(self.labels == code))
            for name, code in _LABEL_CODES.items()
        }

    def level_crossing_counts(self, levels) -> dict[str, int]:
        """Number of grid cells straddled by each sigma_min level set."""
        if self.sigma_min is None:
            return {}
        out = {}
        z = self.sigma_min
        for eps in levels:
            above = z > eps
            cells = (
                above[:-1, :-1].astype(int)
                + above[:-1, 1:]
                + above[1:, :-1]
                + above[1:, 1:]
            )
            out[f"{eps:g}"] = int(np.count_nonzero((cells > 0) & (cells < 4)))
        return out


def default_grid(
    s: SymbolCoeffs,
    samples: int = 256,
    inflation: float = GRID_INFLATION,
    resolution: int = GRID_RESOLUTION,
) -> GridSpec:
    """Grid covering the determinant-spectrum curves with a 25% margin."""
    box = sigma_det_sample(s, samples).bounding_box()
    extent = max(box[1] - box[0], box[3] - box[2])
    pad = inflation * extent if extent > 0 else 1.0
    return GridSpec(
        re_min=box[0] - pad,
        re_max=box[1] + pad,
        im_min=box[2] - pad,
        im_max=box[3] + pad,
        n_re=resolution,
        n_im=resolution,
    )


def classify_grid(s: SymbolCoeffs, grid: GridSpec) -> ClassifiedGrid:
    """Region label and winding at every grid node.

    Rows fan out across SKINSPEC_THREADS workers; each row is an independent
    pure evaluation so the result does not depend on scheduling.
    """
    re_axis, im_axis = grid.axes()
    labels = np.zeros((grid.n_im, grid.n_re), dtype=np.int8)
    winding = np.zeros((grid.n_im, grid.n_re), dtype=np.int32)

    def fill_row(j: int):
        y = im_axis[j]
        for i, x in enumerate(re_axis):
            region = classify_region(s, complex(x, y))
            labels[j, i] = _LABEL_CODES[region.label]
            winding[j, i] = region.winding

    workers = _worker_count()
    if workers == 1:
        for j in range(grid.n_im):
            fill_row(j)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill_row, range(grid.n_im)))
    return ClassifiedGrid(spec=grid, labels=labels, winding=winding)


def pseudospectrum_grid(
    a, grid: GridSpec, base: ClassifiedGrid | None = None
) -> ClassifiedGrid:
    """sigma_min(A - lam I) at every node; level sets are pseudospectra.

    With ``base`` given (a grid classified against a symbol over the same
    spec) the sigma_min layer is added to its labels.
    """
    if min(grid.n_re, grid.n_im) < 32:
        raise ValueError("pseudospectrum grids need resolution >= 32 per axis")
    mat = np.asarray(a, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    eye = np.eye(mat.shape[0], dtype=complex)
    re_axis, im_axis = grid.axes()
    sig = np.zeros((grid.n_im, grid.n_re), dtype=float)

    def fill_row(j: int):
        y = im_axis[j]
        for i, x in enumerate(re_axis):
            sig[j, i] = smallest_singular_value(mat - complex(x, y) * eye)

    workers = _worker_count()
    if workers == 1:
        for j in range(grid.n_im):
            fill_row(j)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill_row, range(grid.n_im)))
    if base is not None:
        if base.spec != grid:
            raise ValueError("base grid spec does not match")
        return ClassifiedGrid(
            spec=grid, labels=base.labels, winding=base.winding, sigma_min=sig
        )
    return ClassifiedGrid(spec=grid, sigma_min=sig)


def sample_region_interior(
    s: SymbolCoeffs,
    count: int,
    resolution: int = 101,
    margin: float | None = None,
    samples: int = 512,
) -> np.ndarray:
    """Deterministic interior points of the nonzero-winding region.

    Grid-classifies a default window, ranks nonzero-winding nodes by their
    distance to the sampled determinant curves and greedily keeps points
    that stay spread out.  ``margin`` (default: 2% of the window diagonal)
    is the minimum curve distance for a point to count as interior.
    """
    grid = default_grid(s, samples=min(samples, 256), resolution=resolution)
    classified = classify_grid(s, grid)
    curve = sigma_det_sample(s, samples)
    re_axis, im_axis = grid.axes()
    diag = float(np.hypot(grid.re_max - grid.re_min, grid.im_max - grid.im_min))
    if margin is None:
        margin = 0.02 * diag
    pts = []
    jj, ii = np.nonzero(classified.labels == _LABEL_CODES["inside"])
    for j, i in zip(jj, ii):
        lam = complex(re_axis[i], im_axis[j])
        d = curve.min_distance(lam)
        if d > margin:
            pts.append((d, lam))
    pts.sort(key=lambda t: (-t[0], t[1].real, t[1].imag))
    if not pts:
        raise ValueError("no interior points found; the winding region may be empty")
    chosen: list[complex] = []
    spread = diag / 30.0
    for _, lam in pts:
        if all(abs(lam - q) >= spread for q in chosen):
            chosen.append(lam)
        if len(chosen) == count:
            return np.array(chosen)
    for _, lam in pts:
        if lam not in chosen:
            chosen.append(lam)
        if len(chosen) == count:
            break
    return np.array(chosen[:count])
