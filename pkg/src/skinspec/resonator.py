"""Resonator-chain geometry, the gauge capacitance matrix and the skin-effect
analysis pipeline.

A chain of N one-dimensional resonators with k-periodic spacings and an
imaginary gauge factor gamma produces a real non-symmetric tridiagonal
matrix whose off-diagonal asymmetry (|upper| != |lower|) is the broken
Hermiticity.  Away from its two corners the matrix is exactly k-periodic,
so it splits into periodic coefficients plus two corner perturbations; the
spectral machinery of the other modules then predicts which eigenvalues
carry exponentially localized eigenvectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import eig_dense
from .modes import DecayProfile, decay_profile
from .spectra import SigmaDetSample, principal_minor_eigs, sigma_det_sample
from .symbol import SymbolCoeffs, truncation
from .winding import RegionLabel, classify_region

REBUILD_TOL = 1e-10


@dataclass
class ResonatorChain:
    """Geometry of N resonators: spacings (k-periodic), lengths, gauge.

    ``spacings`` may be given as the base pattern (length k) or in full
    (length N-1).  Lengths default to 1 everywhere; nonuniform lengths are
    accepted but the periodic extraction then only applies when they are
    k-periodic as well (uniform lengths are the validated regime).
    """

    n: int
    k: int
    spacings: np.ndarray
    lengths: np.ndarray | None = None
    gamma: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two resonators")
        if self.k < 1:
            raise ValueError("period must be positive")
        if self.gamma == 0:
            raise ValueError("gauge factor must be nonzero")
        s = np.asarray(self.spacings, dtype=float).reshape(-1)
        if len(s) == self.k:
            s = np.array([s[i % self.k] for i in range(self.n - 1)])
        elif len(s) == self.n - 1:
            for i in range(len(s) - self.k):
                if s[i + self.k] != s[i]:
                    raise ValueError("spacings are not k-periodic")
        else:
            raise ValueError(
                f"spacings must have length k={self.k} or N-1={self.n - 1}"
            )
        if np.any(s <= 0):
            raise ValueError("spacings must be positive")
        self.spacings = s
        if self.lengths is None:
            self.lengths = np.ones(self.n)
        else:
            ell = np.asarray(self.lengths, dtype=float).reshape(-1)
            if len(ell) == 1:
                ell = np.full(self.n, ell[0])
            if len(ell) != self.n:
                raise ValueError(f"lengths must have length N={self.n}")
            if np.any(ell <= 0):
                raise ValueError("lengths must be positive")
            self.lengths = ell

    @classmethod
    def from_json(cls, text: str) -> "ResonatorChain":
        data = json.loads(text)
        return cls(
            n=int(data["N"]),
            k=int(data["k"]),
            spacings=np.asarray(data["s"], dtype=float),
            lengths=np.asarray(data["l"], dtype=float) if "l" in data else None,
            gamma=float(data.get("gamma", 1.0)),
        )


@dataclass(frozen=True)
class KToeplitzSpec:
    """Periodic coefficients plus the two corner perturbations of a chain matrix."""

    coeffs: SymbolCoeffs
    a_pert: complex
    b_pert: complex


def capacitance_matrix(chain: ResonatorChain) -> np.ndarray:
    """The N x N gauge capacitance matrix of the chain.

    Row sums vanish for uniform lengths, so the constant vector is always
    a kernel vector in that regime.
    """
    n = chain.n
    g = chain.gamma
    s = chain.spacings
    ell = chain.lengths
    c = np.zeros((n, n))
    c[0, 0] = g / s[0] * ell[0] / (1.0 - np.exp(-g * ell[0]))
    for i in range(1, n - 1):
        c[i, i] = g / s[i] * ell[i] / (1.0 - np.exp(-g * ell[i])) - g / s[i - 1] * ell[
            i
        ] / (1.0 - np.exp(g * ell[i]))
    c[n - 1, n - 1] = -g / s[n - 2] * ell[n - 1] / (1.0 - np.exp(g * ell[n - 1]))
    for i in range(n - 1):
        c[i, i + 1] = -g / s[i] * ell[i] / (1.0 - np.exp(-g * ell[i + 1]))
        c[i + 1, i] = g / s[i] * ell[i + 1] / (1.0 - np.exp(g * ell[i]))
    return c


def ktoeplitz_matrix(spec: KToeplitzSpec, n: int) -> np.ndarray:
    """Rebuild the n x n chain matrix from periodic coefficients and corners."""
    m = truncation(spec.coeffs, n)
    m[0, 0] += spec.a_pert
    m[n - 1, n - 1] += spec.b_pert
    return m


def capacitance_to_ktoeplitz(chain: ResonatorChain) -> KToeplitzSpec:
    """Read the periodic coefficients off the interior rows of the matrix.

    Rows k+1..2k are corner-free for N >= 3k, so they expose one full
    period of each diagonal; the corners are whatever the first and last
    diagonal entries add on top of the periodic pattern.  The rebuilt
    matrix must match entrywise, otherwise the chain was not periodic.
    """
    k = chain.k
    n = chain.n
    if n < 3 * k:
        raise ValueError("need N >= 3k to observe interior coefficients")
    cmat = capacitance_matrix(chain)
    a = np.array([cmat[k + i, k + i] for i in range(k)], dtype=complex)
    b = np.array([cmat[k + i, k + i + 1] for i in range(k)], dtype=complex)
    c = np.array([cmat[k + i + 1, k + i] for i in range(k)], dtype=complex)
    coeffs = SymbolCoeffs(a=a, b=b, c=c)
    a_pert = complex(cmat[0, 0]) - a[0]
    b_pert = complex(cmat[n - 1, n - 1]) - a[(n - 1) % k]
    spec = KToeplitzSpec(coeffs=coeffs, a_pert=a_pert, b_pert=b_pert)
    mismatch = float(np.abs(ktoeplitz_matrix(spec, n) - cmat).max())
    if mismatch >= REBUILD_TOL:
        raise ValueError(
            f"rebuild mismatch {mismatch:.3e}: chain matrix is not k-periodic "
            "(nonuniform lengths must repeat with the spacing period)"
        )
    return spec


@dataclass(frozen=True)
class ModeRecord:
    index: int
    lam: complex
    region: str
    winding: int
    argmax_site: int  # 1-based site of the largest modulus
    fitted_rho: float
    side: str
    is_zero_mode: bool


@dataclass
class SkinReport:
    chain: ResonatorChain
    ktoeplitz: KToeplitzSpec
    modes: list[ModeRecord]
    eigenvectors: np.ndarray  # columns, same order as modes
    sigma_det: SigmaDetSample
    minor_eigs: np.ndarray

    def to_json(self) -> str:
        payload = {
            "chain": {
                "N": self.chain.n,
                "k": self.chain.k,
                "s": [float(x) for x in self.chain.spacings[: self.chain.k]],
                "gamma": self.chain.gamma,
            },
            "coefficients": json.loads(self.ktoeplitz.coeffs.to_json()),
            "corner_perturbations": {
                "first": [self.ktoeplitz.a_pert.real, self.ktoeplitz.a_pert.imag],
                "last": [self.ktoeplitz.b_pert.real, self.ktoeplitz.b_pert.imag],
            },
            "minor_eigs": [[v.real, v.imag] for v in self.minor_eigs],
            "modes": [
                {
                    "index": m.index,
                    "lambda": [m.lam.real, m.lam.imag],
                    "region": m.region,
                    "winding": m.winding,
                    "argmax_site": m.argmax_site,
                    "fitted_rho": m.fitted_rho,
                    "side": m.side,
                    "is_zero_mode": m.is_zero_mode,
                }
                for m in self.modes
            ],
        }
        return json.dumps(payload, indent=2)


def skin_effect_report(
    chain: ResonatorChain, samples: int = 512, zero_tol: float = 1e-8
) -> SkinReport:
    """Classify every eigenpair of the chain matrix against the symbol.

    For each eigenvalue: its region label and winding, the argmax site of
    its eigenvector, and the fitted per-cell decay rate (profiled from the
    left for nonpositive winding, from the right for positive winding).
    """
    cmat = capacitance_matrix(chain)
    spec = capacitance_to_ktoeplitz(chain)
    s = spec.coeffs
    pairs = eig_dense(cmat)
    sd = sigma_det_sample(s, samples)
    minor = principal_minor_eigs(s)
    modes = []
    vectors = np.empty((chain.n, len(pairs)), dtype=complex)
    for idx, pair in enumerate(pairs):
        region: RegionLabel = classify_region(s, pair.value)
        side = "right" if region.winding > 0 else "left"
        profile: DecayProfile = decay_profile(pair.vector, chain.k, side)
        vectors[:, idx] = pair.vector
        modes.append(
            ModeRecord(
                index=idx,
                lam=pair.value,
                region=region.label,
                winding=region.winding,
                argmax_site=int(np.argmax(np.abs(pair.vector))) + 1,
                fitted_rho=profile.fitted_rho,
                side=side,
                is_zero_mode=abs(pair.value) <= zero_tol,
            )
        )
    return SkinReport(
        chain=chain,
        ktoeplitz=spec,
        modes=modes,
        eigenvectors=vectors,
        sigma_det=sd,
        minor_eigs=minor,
    )
