"""The acceptance suite: ten self-contained numerical criteria.

Each criterion returns a CriterionResult with its wall-clock time and a
human-readable detail string; `run_all` executes all ten.  The `verify`
CLI command and tests/test_acceptance.py both drive this module, so the
command line and the test suite can never disagree about what passes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import eigvals_dense, smallest_singular_value
from .modes import decay_profile, pseudo_residual
from .resonator import (
    ResonatorChain,
    capacitance_matrix,
    capacitance_to_ktoeplitz,
    ktoeplitz_matrix,
)
from .spectra import (
    block_circulant_eigs,
    kernel_forward_recurrence,
    sample_region_interior,
    sigma_det_sample,
)
from .symbol import (
    SymbolCoeffs,
    det_closed_form,
    det_offset_poly,
    double_root_lambdas,
    eval_symbol,
    quadratic_roots,
    truncation,
)
from .winding import winding_at_radius, winding_via_argument
from .modes import materialize, operator_eigenvector
from .linalg import poly_roots


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    budget: float
    detail: str

    @property
    def in_budget(self) -> bool:
        return self.elapsed < self.budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] criterion {self.number:2d} ({self.name}): "
            f"{self.elapsed:.2f}s / {self.budget:.0f}s budget; {self.detail}"
        )


def _coburn_pair() -> tuple[SymbolCoeffs, SymbolCoeffs]:
    one = SymbolCoeffs(a=[0, 1], b=[1, 0.5], c=[1, 0.5])
    two = SymbolCoeffs(a=[0, 1], b=[1, 2], c=[1, 2])
    return one, two


def _dimer_chain(n: int = 50) -> ResonatorChain:
    return ResonatorChain(n=n, k=2, spacings=[1.0, 2.0])


def _cell_ratio(vector: np.ndarray, k: int) -> float:
    cells = int(np.ceil(len(vector) / k))
    cm = np.array([np.abs(vector[i * k : (i + 1) * k]).max() for i in range(cells)])
    ratios = [cm[i + 1] / cm[i] for i in range(cells - 1) if cm[i] > 0 and cm[i + 1] > 0]
    return max(ratios)


def criterion_1() -> tuple[bool, str]:
    """Golden 2x2 period-2 examples: windings, roots, kernel recurrences."""
    one, two = _coburn_pair()
    issues = []
    for name, s in (("first", one), ("second", two)):
        w = winding_at_radius(s, 0.0, 1.0).winding
        if w != 0:
            issues.append(f"{name}: winding {w} != 0")
        pair = quadratic_roots(s, 0.0)
        if abs(pair.z1 - (-0.5)) > 1e-10 or abs(pair.z2 - (-2.0)) > 1e-10:
            issues.append(f"{name}: roots {pair.z1}, {pair.z2} != -1/2, -2")
    rec1 = kernel_forward_recurrence(one, 0.0)
    if rec1.verdict != "growth":
        issues.append(f"first: verdict {rec1.verdict} != growth")
    if abs(rec1.cell_ratio - 2.0) > 1e-9:
        issues.append(f"first: cell ratio {rec1.cell_ratio} != 2")
    rec2 = kernel_forward_recurrence(two, 0.0)
    if rec2.verdict != "ell2_decay":
        issues.append(f"second: verdict {rec2.verdict} != ell2_decay")
    n = len(rec2.vector)
    expected = np.zeros(n, dtype=complex)
    expected[0::2] = (-0.5) ** np.arange((n + 1) // 2)
    if np.abs(rec2.vector - expected).max() > 1e-12:
        issues.append("second: kernel vector mismatch beyond 1e-12")
    return not issues, "; ".join(issues) or "both golden examples exact"


def criterion_2(seed: int = 0) -> tuple[bool, str]:
    """Closed-form determinant against the dense LU determinant."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(1, 7):
        for _ in range(100):
            s = SymbolCoeffs(
                a=rng.standard_normal(k) + 1j * rng.standard_normal(k),
                b=rng.standard_normal(k) + 1j * rng.standard_normal(k),
                c=rng.standard_normal(k) + 1j * rng.standard_normal(k),
            )
            radius = rng.choice([0.5, 1.0, 2.0])
            z = radius * np.exp(2j * np.pi * rng.random())
            lam = 2.0 * (rng.standard_normal() + 1j * rng.standard_normal())
            closed = det_closed_form(s, z, lam)
            direct = np.linalg.det(eval_symbol(s, z) - lam * np.eye(k))
            scale = max(
                1.0, abs(s.lead * z) + abs(s.const / z) + abs(closed - s.lead * z - s.const / z)
            )
            worst = max(worst, abs(closed - direct) / scale)
    ok = worst <= 1e-10
    return ok, f"max scaled deviation {worst:.3e} (tol 1e-10)"


def criterion_3(seed: int = 0) -> tuple[bool, str]:
    """Root-count and argument-sum windings agree on 200 guarded draws."""
    rng = np.random.default_rng(seed)
    checked = 0
    mismatches = 0
    while checked < 200:
        k = int(rng.integers(1, 5))
        s = SymbolCoeffs(
            a=rng.standard_normal(k) + 1j * rng.standard_normal(k),
            b=rng.standard_normal(k) + 1j * rng.standard_normal(k),
            c=rng.standard_normal(k) + 1j * rng.standard_normal(k),
        )
        if s.prod_b == 0 or s.prod_c == 0:
            continue
        lam = 2.0 * (rng.standard_normal() + 1j * rng.standard_normal())
        r = float(rng.uniform(0.3, 2.5))
        pair = quadratic_roots(s, lam)
        guard = min(abs(abs(pair.z1) - r), abs(abs(pair.z2) - r))
        if guard <= 1e-3:
            continue
        by_roots = winding_at_radius(s, lam, r).winding
        by_arg = winding_via_argument(s, lam, r, samples=1024).winding
        if by_roots != by_arg:
            mismatches += 1
        checked += 1
    return mismatches == 0, f"{checked} draws, {mismatches} mismatches"


def _negative_winding_samples(rng, count: int):
    """Random symbols with a lam of total winding -1.

    The offset-polynomial roots give lam with both quadratic roots at
    modulus sqrt|const/lead| > 1 whenever |prod b| > |prod c|, and small
    perturbations stay inside the open winding region.
    """
    out = []
    while len(out) < count:
        k = int(rng.integers(1, 4))
        a = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        b = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        s = SymbolCoeffs(a=a, b=b, c=c)
        if s.prod_b == 0 or s.prod_c == 0:
            continue
        if abs(s.prod_b) <= abs(s.prod_c):
            s = SymbolCoeffs(a=a, b=c, c=b)
        if abs(s.const / s.lead) < 1.21:  # keep roots comfortably outside
            continue
        anchors = poly_roots(det_offset_poly(s))
        spread = max(1e-2, float(np.abs(anchors - anchors.mean()).max()))
        lam = None
        for scale in (0.3, 0.1, 0.0):
            cand = complex(anchors[int(rng.integers(0, len(anchors)))])
            cand += scale * spread * (rng.standard_normal() + 1j * rng.standard_normal())
            try:
                if winding_at_radius(s, cand, 1.0).winding == -1:
                    lam = cand
                    break
            except ValueError:
                continue
        if lam is None:
            continue
        out.append((s, lam))
    return out


def criterion_4(seed: int = 0) -> tuple[bool, str]:
    """Materialized eigenvectors satisfy the rows; decay rate matches roots."""
    rng = np.random.default_rng(seed)
    issues = []
    worst_row = 0.0
    worst_rho = 0.0
    for s, lam in _negative_winding_samples(rng, 50):
        k = s.k
        ev = operator_eigenvector(s, lam)
        x = materialize(ev, 40 * k)
        rows = truncation(s, 40 * k) @ x - lam * x
        row_err = float(np.abs(rows[: 39 * k]).max())
        worst_row = max(worst_row, row_err)
        if row_err > 1e-8:
            issues.append(f"row defect {row_err:.2e} at k={k} lam={lam:.4f}")
            continue
        prof = decay_profile(x, k, "left")
        m1, m2 = abs(ev.roots.z1), abs(ev.roots.z2)
        rho = max(1.0 / m1, 1.0 / m2)
        separated = (
            ev.roots.multiplicity == "distinct"
            and abs(m1 - m2) >= 0.05 * max(m1, m2)
        )
        tol = 0.05 if separated else 0.10
        rel = abs(prof.fitted_rho - rho) / rho
        worst_rho = max(worst_rho, rel / tol)
        if rel > tol:
            issues.append(
                f"rho {prof.fitted_rho:.4f} vs {rho:.4f} (rel {rel:.3f} > {tol}) at k={k}"
            )
    detail = (
        f"50 symbols; worst row defect {worst_row:.2e}; "
        f"worst rho error {worst_rho:.2f}x of its tolerance"
    )
    return not issues, "; ".join(issues[:3]) or detail


def criterion_5() -> tuple[bool, str]:
    """Confluent-root pseudo-modes decay at the double root rate.

    Scalar symbol with coefficients (0, 1, 1/4): the double-root locations
    are exactly -1 and 1, and at lam=1 the root is z=2, so residuals over
    growing truncations must fit slope log(1/2) per cell after removing the
    linear chain factor.
    """
    s = SymbolCoeffs(a=[0.0], b=[1.0], c=[0.25])
    lams = double_root_lambdas(s)
    if lams.shape[0] != 2 or np.abs(lams - np.array([-1.0, 1.0])).max() > 1e-9:
        return False, f"double-root locations {lams} != [-1, 1]"
    pair = quadratic_roots(s, 1.0)
    if pair.multiplicity != "double" or abs(pair.z1 - 2.0) > 1e-9:
        return False, f"expected double root z=2, got {pair}"
    sizes = np.arange(20, 81, 10)
    logs = []
    for n in sizes:
        r = pseudo_residual(s, 1.0, int(n))
        logs.append(np.log(r / n))  # k=1: ceil(n/k) = n cells
    slope = float(np.polyfit(sizes.astype(float), logs, 1)[0])
    target = np.log(0.5)
    rel = abs(slope - target) / abs(target)
    return rel <= 0.10, f"slope {slope:.4f} vs log(1/2)={target:.4f} (rel {rel:.3f})"


def criterion_6() -> tuple[bool, str]:
    """sigma_min of dimer truncations decays at the root rate inside the region."""
    spec = capacitance_to_ktoeplitz(_dimer_chain())
    s = spec.coeffs
    lams = sample_region_interior(s, 5, resolution=61)
    sizes = [20, 40, 60, 80, 100]
    worst = 0.0
    details = []
    for lam in lams:
        pair = quadratic_roots(s, lam)
        rho = max(1.0 / abs(pair.z1), 1.0 / abs(pair.z2))
        cells = np.array([int(np.ceil(n / 2)) for n in sizes], dtype=float)
        logs = [
            np.log(
                smallest_singular_value(
                    truncation(s, n) - lam * np.eye(n, dtype=complex)
                )
            )
            for n in sizes
        ]
        slope = float(np.polyfit(cells, logs, 1)[0])
        rel = abs(slope - np.log(rho)) / abs(np.log(rho))
        worst = max(worst, rel)
        details.append(f"{rel:.3f}")
    return worst <= 0.15, f"slope errors {details} (tol 0.15)"


def _localization_report(chain: ResonatorChain, sd_samples: int = 4096):
    """Shared checks for the figure-reproduction criteria."""
    cmat = capacitance_matrix(chain)
    spec = capacitance_to_ktoeplitz(chain)
    s = spec.coeffs
    values, vectors = np.linalg.eig(cmat)
    sd = sigma_det_sample(s, sd_samples)
    issues = []
    zero_idx = [j for j in range(chain.n) if abs(values[j]) <= 1e-8]
    if len(zero_idx) != 1:
        issues.append(f"{len(zero_idx)} eigenvalues with |lam| <= 1e-8, expected 1")
    else:
        v = vectors[:, zero_idx[0]]
        dev = float(np.abs(v - v.mean()).max() / np.abs(v).max())
        if dev > 1e-8:
            issues.append(f"zero-mode relative deviation {dev:.2e} > 1e-8")
    for j in range(chain.n):
        if j in zero_idx:
            continue
        lam = values[j]
        vec = vectors[:, j]
        site = int(np.argmax(np.abs(vec))) + 1
        rho = decay_profile(vec, chain.k, "left").fitted_rho
        if site > 5 or rho > 0.95:
            issues.append(
                f"mode lam={lam:.6g}: argmax site {site}, fitted rho {rho:.3f}"
            )
        if sd.min_distance(lam) > 1e-3:
            w = winding_at_radius(s, lam, 1.0).winding
            if w == 0:
                issues.append(f"mode lam={lam:.6g}: winding 0 off the spectral curve")
    return issues


def criterion_7() -> tuple[bool, str]:
    """Dimer chain (spacings 1,2; N=50): one flat zero mode, rest left-localized."""
    issues = _localization_report(_dimer_chain())
    return not issues, "; ".join(issues) or "one flat zero mode; 49 left-localized, all winding -1"


def criterion_8() -> tuple[bool, str]:
    """Trimer chains (1,2,3) and (2,3,4) at N=50, plus the 1e-2 level check.

    Known honest failure: the (1,2,3) chain cut at N=50 (mid-cell, N = 2 mod 3)
    carries one converged right-edge boundary mode at lam ~= 2.3521357869 with
    zero winding; whole-cell cuts (N = 0 mod 3) have none.  See the analysis
    in the project notes.
    """
    issues = []
    for base in ([1.0, 2.0, 3.0], [2.0, 3.0, 4.0]):
        chain = ResonatorChain(n=50, k=3, spacings=base)
        chain_issues = _localization_report(chain)
        issues.extend(f"s={base}: {msg}" for msg in chain_issues)
        spec = capacitance_to_ktoeplitz(chain)
        cmat = capacitance_matrix(chain).astype(complex)
        lams = sample_region_interior(spec.coeffs, 20, resolution=61)
        eye = np.eye(chain.n, dtype=complex)
        sig = [smallest_singular_value(cmat - lam * eye) for lam in lams]
        bad = sum(1 for v in sig if v >= 1e-2)
        if bad:
            issues.append(f"s={base}: {bad}/20 interior points with sigma_min >= 1e-2")
    return not issues, "; ".join(issues) or "both trimers localized; level check holds"


def criterion_9() -> tuple[bool, str]:
    """Periodic-truncation eigenvalues match the symbol at roots of unity."""
    spec = capacitance_to_ktoeplitz(_dimer_chain())
    one, _ = _coburn_pair()
    issues = []
    for name, s in (("coburn-1", one), ("dimer", spec.coeffs)):
        cells = 64
        assembled = block_circulant_eigs(s, cells)
        via_symbol = np.concatenate(
            [
                eigvals_dense(eval_symbol(s, np.exp(2j * np.pi * j / cells)))
                for j in range(cells)
            ]
        )
        unmatched = _multiset_mismatch(assembled, via_symbol, 1e-8)
        if unmatched:
            issues.append(f"{name}: {unmatched} eigenvalues unmatched at 1e-8")
        sd = sigma_det_sample(s, 4096)
        far = max(sd.min_distance(v) for v in assembled)
        if far > 1e-6:
            issues.append(f"{name}: value {far:.2e} away from the curve sample")
    return not issues, "; ".join(issues) or "assembly matches symbol route and curves"


def _multiset_mismatch(left: np.ndarray, right: np.ndarray, tol: float) -> int:
    """Greedy nearest matching; the count of values left unmatched."""
    if len(left) != len(right):
        return max(len(left), len(right))
    taken = np.zeros(len(right), dtype=bool)
    misses = 0
    for v in left:
        dist = np.abs(right - v)
        dist[taken] = np.inf
        j = int(np.argmin(dist))
        if dist[j] <= tol:
            taken[j] = True
        else:
            misses += 1
    return misses


def criterion_10(seed: int = 0) -> tuple[bool, str]:
    """Random uniform-length chains: zero row sums and exact periodic rebuild."""
    rng = np.random.default_rng(seed)
    worst_row = 0.0
    worst_rebuild = 0.0
    for _ in range(20):
        k = int(rng.integers(1, 5))
        n = k * int(rng.integers(3, 9))
        chain = ResonatorChain(
            n=n,
            k=k,
            spacings=rng.uniform(0.5, 3.0, size=k),
            gamma=float(rng.choice([1.0, -1.0, 0.5, -0.5])),
        )
        cmat = capacitance_matrix(chain)
        row = float(np.abs(cmat @ np.ones(n)).max() / np.abs(cmat).max())
        worst_row = max(worst_row, row)
        spec = capacitance_to_ktoeplitz(chain)
        rebuild = float(np.abs(ktoeplitz_matrix(spec, n) - cmat).max())
        worst_rebuild = max(worst_rebuild, rebuild)
    ok = worst_row <= 1e-12 and worst_rebuild <= 1e-12
    return ok, f"worst row-sum ratio {worst_row:.2e}, worst rebuild {worst_rebuild:.2e}"


_CRITERIA: list[tuple[int, str, float, Callable[[], tuple[bool, str]]]] = [
    (1, "golden period-2 examples", 1.0, criterion_1),
    (2, "determinant closed form vs LU", 5.0, criterion_2),
    (3, "winding method agreement", 10.0, criterion_3),
    (4, "operator eigenvector rows and decay", 30.0, criterion_4),
    (5, "confluent-root pseudo-mode decay", 5.0, criterion_5),
    (6, "dimer sigma_min decay slopes", 120.0, criterion_6),
    (7, "dimer chain localization", 30.0, criterion_7),
    (8, "trimer chains localization and levels", 120.0, criterion_8),
    (9, "periodic truncation oracle", 10.0, criterion_9),
    (10, "capacitance structure", 5.0, criterion_10),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, budget, fn in _CRITERIA:
        if num == number:
            start = time.perf_counter()
            passed, detail = fn()
            elapsed = time.perf_counter() - start
            if elapsed >= budget:
                passed = False
                detail += f"; exceeded {budget:.0f}s budget"
            return CriterionResult(num, name, passed, elapsed, budget, detail)
    raise ValueError(f"no criterion numbered {number}")


def run_all() -> list[CriterionResult]:
    return [run_criterion(num) for num, _, _, _ in _CRITERIA]
