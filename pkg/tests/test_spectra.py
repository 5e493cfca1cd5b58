import numpy as np
import pytest

from skinspec.linalg import eigvals_dense, smallest_singular_value
from skinspec.spectra import (
    GridSpec,
    block_circulant_eigs,
    block_circulant_matrix,
    classify_grid,
    classify_spectrum_point,
    default_grid,
    kernel_forward_recurrence,
    laurent_spectrum_sample,
    principal_minor_eigs,
    pseudospectrum_grid,
    sample_region_interior,
    sigma_det_sample,
)
from skinspec.symbol import SymbolCoeffs, eval_symbol, truncation

COBURN_1 = SymbolCoeffs(a=[0, 1], b=[1, 0.5], c=[1, 0.5])
COBURN_2 = SymbolCoeffs(a=[0, 1], b=[1, 2], c=[1, 2])


def test_sigma_det_symmetric_scalar_symbol():
    sample = sigma_det_sample(SymbolCoeffs(a=[0], b=[1], c=[1]), 128)
    expected = 2 * np.cos(sample.thetas)
    assert np.allclose(sample.values[:, 0].real, expected)
    assert np.abs(sample.values.imag).max() <= 1e-12


def test_sigma_det_ellipse():
    s = SymbolCoeffs(a=[0], b=[0.5], c=[2])
    sample = sigma_det_sample(s, 128)
    expected = 2 * np.exp(1j * sample.thetas) + 0.5 * np.exp(-1j * sample.thetas)
    assert np.allclose(sample.values[:, 0], expected)


def test_sigma_det_avoids_origin_for_coburn():
    # the two curves are [1 +- sqrt(2 + 4(1 + cos t))]/2, so the gap at the
    # origin is exactly (sqrt(2) - 1)/2
    sample = sigma_det_sample(COBURN_1, 8192)
    gap = sample.min_distance(0.0)
    assert gap > 0.15
    assert np.isclose(gap, (np.sqrt(2) - 1) / 2, atol=1e-4)


def test_sigma_det_conjugate_symmetry():
    sample = sigma_det_sample(COBURN_1, 256)
    for m in range(1, 10):
        upper = np.sort_complex(sample.values[m])
        lower = np.sort_complex(np.conj(sample.values[-m]))
        assert np.allclose(upper, lower, atol=1e-10)


def test_laurent_alias():
    a = sigma_det_sample(COBURN_1, 64)
    b = laurent_spectrum_sample(COBURN_1, 64)
    assert np.allclose(a.values, b.values)
    assert b.label == "laurent"


def test_principal_minor_eigs():
    assert np.allclose(principal_minor_eigs(COBURN_1), [0.0])
    assert np.allclose(principal_minor_eigs(COBURN_2), [0.0])
    assert principal_minor_eigs(SymbolCoeffs(a=[3], b=[1], c=[1])).size == 0


def test_classify_spectrum_point_golden():
    # both golden examples leave lambda = 0 undecided by the sandwich
    assert classify_spectrum_point(COBURN_1, 0.0).label == "candidate_minor"
    assert classify_spectrum_point(COBURN_2, 0.0).label == "candidate_minor"
    assert classify_spectrum_point(COBURN_1, 40.0).label == "not_in_spectrum"
    inside = SymbolCoeffs(a=[0], b=[0.5], c=[2.0])
    assert classify_spectrum_point(inside, 0.0).label == "in_spectrum_winding"
    on_curve = SymbolCoeffs(a=[0], b=[1], c=[1])
    assert classify_spectrum_point(on_curve, 0.0).label == "in_spectrum_essential"


def test_kernel_recurrence_growth_example():
    result = kernel_forward_recurrence(COBURN_1, 0.0, 10)
    assert np.allclose(result.vector.real, [1, 0, -2, 0, 4, 0, -8, 0, 16, 0])
    assert result.verdict == "growth"


def test_kernel_recurrence_decay_example():
    result = kernel_forward_recurrence(COBURN_2, 0.0, 10)
    expected = np.zeros(10)
    expected[0::2] = (-0.5) ** np.arange(5)
    assert np.abs(result.vector - expected).max() <= 1e-14
    assert result.verdict == "ell2_decay"
    assert np.isclose(result.cell_ratio, 0.5)


def test_kernel_recurrence_inconclusive():
    result = kernel_forward_recurrence(SymbolCoeffs(a=[1], b=[1], c=[1]), 1.0, 6)
    assert np.allclose(result.vector.real, [1, 0, -1, 0, 1, 0])
    assert result.verdict == "inconclusive"


def test_kernel_recurrence_rejects_zero_b():
    with pytest.raises(ZeroDivisionError):
        kernel_forward_recurrence(SymbolCoeffs(a=[1], b=[0], c=[1]), 0.0, 4)


def test_block_circulant_scalar_examples():
    vals = block_circulant_eigs(SymbolCoeffs(a=[0], b=[1], c=[1]), 4)
    assert np.allclose(sorted(vals.real), [-2, 0, 0, 2])
    vals = block_circulant_eigs(SymbolCoeffs(a=[1], b=[0], c=[0]), 3)
    assert np.allclose(vals, [1, 1, 1])


def test_block_circulant_matches_symbol_route():
    cells = 8
    assembled = block_circulant_eigs(COBURN_1, cells)
    via_symbol = np.concatenate(
        [
            eigvals_dense(eval_symbol(COBURN_1, np.exp(2j * np.pi * j / cells)))
            for j in range(cells)
        ]
    )
    assembled = np.sort_complex(assembled)
    via_symbol = np.sort_complex(via_symbol)
    assert np.abs(assembled - via_symbol).max() <= 1e-8
    sample = sigma_det_sample(COBURN_1, 1024)
    assert max(sample.min_distance(v) for v in assembled) <= 1e-6


def test_block_circulant_matrix_corners():
    m = block_circulant_matrix(COBURN_1, 3)
    assert m.shape == (6, 6)
    assert np.isclose(m[0, 5], 0.5)  # wrap-around c_k
    assert np.isclose(m[5, 0], 0.5)  # wrap-around b_k


def test_sigma_min_monotone_in_truncation_size():
    lam = 0.3 + 0.1j
    values = []
    for n in (10, 14, 18, 22, 26):
        m = truncation(COBURN_2, n) - lam * np.eye(n)
        values.append(smallest_singular_value(m))
    for small, large in zip(values, values[1:]):
        assert large <= small + 1e-10


def test_spectrum_sandwich_consistency_two_sided():
    # truncation eigenvalues that are stable under n -> n + k converge to
    # point spectrum of the semi-infinite operator seen from one of the two
    # edges, so they are never outside both sandwiches.  (The second golden
    # example has such a right-edge eigenvalue at exactly 1: the reversed
    # coefficients put 1 in the leading-minor spectrum and the reversed
    # kernel recurrence decays there.)
    from skinspec.symbol import reversed_coeffs

    found_stable = 0
    for s in (COBURN_1, COBURN_2):
        base = eigvals_dense(truncation(s, 40))
        bigger = eigvals_dense(truncation(s, 42))
        for lam in base:
            if np.abs(bigger - lam).min() >= 1e-6:
                continue
            found_stable += 1
            left = classify_spectrum_point(s, lam).label
            right = classify_spectrum_point(reversed_coeffs(s), lam).label
            assert "not_in_spectrum" != left or "not_in_spectrum" != right
    assert found_stable >= 1  # the right-edge mode at 1 must be detected


def test_right_edge_bound_state_of_second_example():
    # lam = 1 sits outside the left sandwich but is a genuine eigenvalue of
    # the mirrored semi-infinite operator: the reversed recurrence decays
    from skinspec.symbol import reversed_coeffs

    assert classify_spectrum_point(COBURN_2, 1.0).label == "not_in_spectrum"
    rev = reversed_coeffs(COBURN_2)
    assert classify_spectrum_point(rev, 1.0).label == "candidate_minor"
    rec = kernel_forward_recurrence(rev, 1.0)
    assert rec.verdict == "ell2_decay"


def test_pseudospectrum_grid_trivial_cases():
    grid = GridSpec(re_min=-1, re_max=1, im_min=-1, im_max=1, n_re=33, n_im=33)
    out = pseudospectrum_grid(np.zeros((1, 1)), grid)
    re_axis, im_axis = grid.axes()
    expected = np.abs(re_axis[None, :] + 1j * im_axis[:, None])
    assert np.allclose(out.sigma_min, expected)
    jordan = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.isclose(smallest_singular_value(jordan), 0.0)


def test_pseudospectrum_grid_rejects_low_resolution():
    grid = GridSpec(re_min=-1, re_max=1, im_min=-1, im_max=1, n_re=8, n_im=8)
    with pytest.raises(ValueError):
        pseudospectrum_grid(np.eye(2), grid)


def test_truncated_kernel_vector_bounds_sigma_min():
    n = 50
    a50 = truncation(COBURN_2, n)
    sig = smallest_singular_value(a50)
    assert sig <= 2 * 0.5**24


def test_default_grid_has_margin():
    grid = default_grid(COBURN_1, resolution=41)
    box = sigma_det_sample(COBURN_1, 256).bounding_box()
    extent = max(box[1] - box[0], box[3] - box[2])
    assert grid.re_min <= box[0] - 0.1 * extent
    assert grid.re_max >= box[1] + 0.1 * extent
    assert grid.im_min <= box[2] - 0.1 * extent
    assert grid.im_max >= box[3] + 0.1 * extent


def test_classify_grid_matches_pointwise(monkeypatch):
    s = SymbolCoeffs(a=[0], b=[0.5], c=[2.0])
    grid = GridSpec(re_min=-3, re_max=3, im_min=-3, im_max=3, n_re=21, n_im=21)
    sequential = classify_grid(s, grid)
    monkeypatch.setenv("SKINSPEC_THREADS", "4")
    threaded = classify_grid(s, grid)
    assert np.array_equal(sequential.labels, threaded.labels)
    assert np.array_equal(sequential.winding, threaded.winding)
    assert sequential.region_counts()["inside"] > 0


def test_sample_region_interior_dimer():
    alpha = 1.0 / (1.0 - np.exp(-1.0))
    beta = 1.0 / (1.0 - np.exp(1.0))
    s = SymbolCoeffs(
        a=[alpha - beta / 2, alpha / 2 - beta],
        b=[-alpha, -alpha / 2],
        c=[beta, beta / 2],
    )
    pts = sample_region_interior(s, 5, resolution=41)
    assert len(pts) == 5
    sd = sigma_det_sample(s, 512)
    from skinspec.winding import eigencurve_winding_sum

    for lam in pts:
        assert eigencurve_winding_sum(s, lam) != 0
        assert sd.min_distance(lam) > 1e-3
