import numpy as np
import pytest

from skinspec.linalg import eig_dense
from skinspec.modes import (
    decay_profile,
    jordan_chain_vector,
    materialize,
    operator_eigenvector,
    pseudo_eigenvector,
    pseudo_residual,
    residual,
)
from skinspec.spectra import kernel_forward_recurrence
from skinspec.symbol import (
    SymbolCoeffs,
    build_blocks,
    double_root_lambdas,
    quadratic_roots,
    reversed_coeffs,
    truncation,
)
from skinspec.winding import winding_at_radius

DECAYING = SymbolCoeffs(a=[0], b=[2], c=[0.5])  # roots of z^2/2 + 2: +-2i
JORDAN = SymbolCoeffs(a=[0], b=[1], c=[0.25])  # double root z=2 at lam=1
COBURN_2 = SymbolCoeffs(a=[0, 1], b=[1, 2], c=[1, 2])


def negative_winding_samples(rng, count):
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
        if abs(s.const / s.lead) < 1.21:
            continue
        from skinspec.linalg import poly_roots
        from skinspec.symbol import det_offset_poly

        anchors = poly_roots(det_offset_poly(s))
        lam = complex(anchors[int(rng.integers(0, len(anchors)))])
        lam += 0.1 * (rng.standard_normal() + 1j * rng.standard_normal())
        try:
            if winding_at_radius(s, lam, 1.0).winding != -1:
                continue
        except ValueError:
            continue
        out.append((s, lam))
    return out


def test_operator_eigenvector_scalar_example():
    ev = operator_eigenvector(DECAYING, 0.0)
    assert ev.chain == "independent"
    assert np.isclose(abs(ev.roots.z1), 2.0)
    assert np.isclose(abs(ev.roots.z2), 2.0)
    assert np.isclose(ev.rho, 0.5)
    x = materialize(ev, 40)
    assert residual(truncation(DECAYING, 40), 0.0, x) <= 1e-10
    assert np.isclose(decay_profile(x, 1).fitted_rho, 0.5, rtol=1e-6)


def test_operator_eigenvector_needs_negative_winding():
    # the second golden example has zero winding at 0: the construction
    # refuses, yet the kernel recurrence still finds the decaying vector
    with pytest.raises(ValueError):
        operator_eigenvector(COBURN_2, 0.0)
    rec = kernel_forward_recurrence(COBURN_2, 0.0)
    assert rec.verdict == "ell2_decay"


def test_operator_eigenvector_jordan_case():
    ev = operator_eigenvector(JORDAN, 1.0)
    assert ev.chain == "jordan"
    assert ev.roots.multiplicity == "double"
    assert np.isclose(ev.roots.z1, 2.0)
    x = materialize(ev, 30)
    rows = truncation(JORDAN, 30) @ x - x
    assert np.abs(rows[:-1]).max() <= 1e-9


def test_jordan_chain_vector_scalar_cases():
    v2 = jordan_chain_vector(JORDAN, 1.0, 2.0, np.array([1.0]))
    assert np.allclose(v2, [0.0])
    shifted = SymbolCoeffs(a=[5], b=[1], c=[0.25])
    v2 = jordan_chain_vector(shifted, 6.0, 2.0, np.array([1.0]))
    assert np.allclose(v2, [0.0])


def test_jordan_chain_vector_random_k2():
    rng = np.random.default_rng(29)
    found = 0
    attempts = 0
    while found < 5 and attempts < 200:
        attempts += 1
        s = SymbolCoeffs(
            a=rng.standard_normal(2) + 1j * rng.standard_normal(2),
            b=rng.standard_normal(2) + 1j * rng.standard_normal(2),
            c=rng.standard_normal(2) + 1j * rng.standard_normal(2),
        )
        for lam in double_root_lambdas(s):
            if found >= 5:
                break
            pair = quadratic_roots(s, lam)
            if pair.multiplicity != "double":
                continue
            blocks = build_blocks(s)
            eye = np.eye(2, dtype=complex)
            fmat = blocks.minus / pair.z1 + blocks.zero + blocks.plus * pair.z1 - lam * eye
            _, sing, vh = np.linalg.svd(fmat)
            if sing[-2] < 1e-6:  # two-dimensional kernel, no chain needed
                continue
            v1 = vh[-1].conj()
            v2 = jordan_chain_vector(s, lam, pair.z1, v1)
            lhs = blocks.plus + (blocks.zero - lam * eye) / pair.z1 + blocks.minus / pair.z1**2
            rhs = -((blocks.zero - lam * eye) + 2 * blocks.minus / pair.z1) @ v1
            scale = max(1.0, np.linalg.norm(lhs), np.linalg.norm(rhs))
            assert np.linalg.norm(lhs @ v2 - rhs) <= 1e-8 * scale
            found += 1
    assert found == 5


def test_materialize_row_identities_random():
    rng = np.random.default_rng(41)
    for s, lam in negative_winding_samples(rng, 15):
        k = s.k
        ev = operator_eigenvector(s, lam)
        x = materialize(ev, 40 * k)
        blocks = build_blocks(s)
        eye = np.eye(k, dtype=complex)
        cells = x.reshape(40, k)
        # interior block rows
        for m in range(1, 39):
            row = (
                blocks.plus @ cells[m - 1]
                + (blocks.zero - lam * eye) @ cells[m]
                + blocks.minus @ cells[m + 1]
            )
            assert np.abs(row).max() <= 1e-9
        first = (blocks.zero - lam * eye) @ cells[0] + blocks.minus @ cells[1]
        assert np.abs(first).max() <= 1e-8


def test_decay_rate_matches_slower_root():
    rng = np.random.default_rng(53)
    for s, lam in negative_winding_samples(rng, 15):
        ev = operator_eigenvector(s, lam)
        x = materialize(ev, 40 * s.k)
        prof = decay_profile(x, s.k)
        m1, m2 = abs(ev.roots.z1), abs(ev.roots.z2)
        separated = ev.roots.multiplicity == "distinct" and abs(m1 - m2) >= 0.05 * max(m1, m2)
        tol = 0.05 if separated else 0.10
        assert abs(prof.fitted_rho - ev.rho) <= tol * ev.rho


def test_pseudo_eigenvector_trivial_single_cell():
    v = pseudo_eigenvector(DECAYING, 0.0, 1)
    assert len(v) == 1 and np.isclose(abs(v[0]), 1.0)


def test_pseudo_eigenvector_residual_decay():
    # odd truncations of this symbol make 0 an exact eigenvalue (the cut
    # coupling lands on a vanishing entry), so sample even sizes
    sizes = np.arange(10, 31, 2)
    logs = [np.log(pseudo_residual(DECAYING, 0.0, int(n))) for n in sizes]
    slope = np.polyfit(sizes.astype(float), logs, 1)[0]
    assert abs(slope - np.log(0.5)) <= 0.10 * abs(np.log(0.5))
    # the matrix route agrees while well above the fp noise floor
    for n in (10, 16, 22):
        v = pseudo_eigenvector(DECAYING, 0.0, n)
        direct = residual(truncation(DECAYING, n), 0.0, v)
        assert np.isclose(direct, pseudo_residual(DECAYING, 0.0, n), rtol=1e-5)


def test_exact_zero_residual_at_odd_truncations():
    v = pseudo_eigenvector(DECAYING, 0.0, 11)
    assert residual(truncation(DECAYING, 11), 0.0, v) <= 1e-15
    assert pseudo_residual(DECAYING, 0.0, 11) == 0.0


def test_pseudo_eigenvector_jordan_rate():
    # residuals carry the algebraic cell factor; remove it before fitting
    sizes = np.arange(20, 81, 10)
    logs = [np.log(pseudo_residual(JORDAN, 1.0, int(n)) / n) for n in sizes]
    slope = np.polyfit(sizes.astype(float), logs, 1)[0]
    assert abs(slope - np.log(0.5)) <= 0.10 * abs(np.log(0.5))


def test_pseudo_eigenvector_zero_winding_rejected():
    with pytest.raises(ValueError):
        pseudo_eigenvector(COBURN_2, 0.0, 20)


def test_mirror_symmetry():
    rng = np.random.default_rng(61)
    for s, lam in negative_winding_samples(rng, 8):
        k = s.k
        n = 30 * k
        left = pseudo_eigenvector(s, lam, n)
        srev = reversed_coeffs(s)
        assert winding_at_radius(srev, lam, 1.0).winding == 1
        right = pseudo_eigenvector(srev, lam, n)
        prof_left = decay_profile(left, k, "left")
        prof_right = decay_profile(right, k, "right")
        assert np.isclose(prof_left.fitted_rho, prof_right.fitted_rho, rtol=1e-9)
        assert np.allclose(np.abs(right), np.abs(left[::-1]))
        assert np.isclose(
            pseudo_residual(s, lam, n), pseudo_residual(srev, lam, n), rtol=1e-9
        )


def test_residual_examples():
    m = np.diag([3.0, 7.0])
    pairs = eig_dense(m)
    for p in pairs:
        assert residual(m, p.value, p.vector) <= 1e-8 * np.linalg.norm(m)
    assert np.isclose(residual(m, 1.0, [1.0, 0.0]), 2.0)


def test_residual_truncated_kernel_vector():
    # only the last row of the 20x20 section acts on the truncated kernel
    # vector: |b_20 u_21| = 2 * (1/2)^10 = (1/2)^9
    n = 20
    v = np.zeros(n)
    v[0::2] = (-0.5) ** np.arange(n // 2)
    expected = 0.5**9 / np.linalg.norm(v)
    assert np.isclose(residual(truncation(COBURN_2, n), 0.0, v), expected, rtol=1e-12)


def test_residual_rejects_zero_vector():
    with pytest.raises(ValueError):
        residual(np.eye(2), 0.0, [0.0, 0.0])


def test_decay_profile_exact_geometric():
    j = np.arange(1, 25)
    v = 2.0 ** (-np.ceil(j / 2))
    prof = decay_profile(v, 2)
    assert abs(prof.fitted_rho - 0.5) <= 1e-10
    assert prof.cell_max.max() == 1.0


def test_decay_profile_constant_vector():
    prof = decay_profile(np.ones(20), 2)
    assert np.isclose(prof.fitted_rho, 1.0)


def test_decay_profile_kernel_vector():
    rec = kernel_forward_recurrence(COBURN_2, 0.0, 40)
    prof = decay_profile(rec.vector, 2)
    assert np.isclose(prof.fitted_rho, 0.5, rtol=1e-9)


def test_decay_profile_right_side():
    v = np.concatenate([np.zeros(16), [0.0, 1.0]])
    v = 2.0 ** (np.ceil(np.arange(1, 25) / 2))
    prof = decay_profile(v, 2, side="right")
    assert np.isclose(prof.fitted_rho, 0.5, rtol=1e-9)
    assert prof.side == "right"
