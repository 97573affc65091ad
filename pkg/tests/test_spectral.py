import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scrkernel.errors import AmbiguityError, StructuralError
from scrkernel.io import read_csv_matrix
from scrkernel.kernel import MetricTensor, metric_tensor, motif_decomposition
from scrkernel.numerics import principal_angles
from scrkernel.reservoir import CycleReservoir
from scrkernel.spectral import (
    align_motifs_to_fourier,
    dominant_bins,
    motif_fft,
    periodic_extension_basis,
    real_fourier_basis,
    relative_area,
    rho_sweep,
    sample_fourier_column,
    spectral_radius,
    write_coefficients_csv,
    write_sweep_csv,
)
from scrkernel.structure import canonicalize_symmetry

Q3 = np.array([[3.0, -1, -1], [-1, 3, -1], [-1, -1, 3]])
TOTAL = 280 * 280


class TestRealFourierBasis:
    def test_single(self):
        np.testing.assert_array_equal(real_fourier_basis(1, 1).f, [[1.0]])

    def test_n4(self):
        f = real_fourier_basis(4, 4).f
        expected = np.column_stack([
            np.array([1, 1, 1, 1]) / 2,
            np.array([1, 0, -1, 0]) / np.sqrt(2),
            np.array([0, 1, 0, -1]) / np.sqrt(2),
            np.array([1, -1, 1, -1]) / 2,
        ])
        np.testing.assert_allclose(f, expected, atol=1e-15)

    @pytest.mark.parametrize("tau,n", [(97, 97), (194, 97), (8, 8), (20, 7), (5, 1)])
    def test_orthonormal(self, tau, n):
        b = real_fourier_basis(tau, n)
        assert b.f.shape == (tau, n)
        np.testing.assert_allclose(b.f.T @ b.f, np.eye(n), atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5, 8, 97])
    def test_parity_counts(self, n):
        f = real_fourier_basis(n, n).f
        # cyclic reflection j -> -j mod n keeps cosines and flips sines
        refl = f[(-np.arange(n)) % n]
        sym = int(np.sum(np.all(np.isclose(refl, f, atol=1e-12), axis=0)))
        skew = int(np.sum(np.all(np.isclose(refl, -f, atol=1e-12), axis=0)))
        assert (sym, skew) == (n // 2 + 1, (n - 1) // 2)

    def test_too_many_columns(self):
        with pytest.raises(StructuralError):
            real_fourier_basis(4, 5)

    def test_labels(self):
        b = real_fourier_basis(6, 6)
        assert [k for _, k in b.labels] == ["const", "cos", "sin", "cos", "sin", "nyquist"]
        np.testing.assert_array_equal(b.bins, [0, 1, 1, 2, 2, 3])


class TestPeriodicExtension:
    def test_k1(self):
        np.testing.assert_array_equal(periodic_extension_basis(7, 1).f, real_fourier_basis(7, 7).f)

    def test_constant(self):
        np.testing.assert_allclose(periodic_extension_basis(2, 2).f[:, 0], np.full(4, 0.5))

    def test_cosine(self):
        col = periodic_extension_basis(4, 2).f[:, 1]
        np.testing.assert_allclose(col, np.array([1, 0, -1, 0, 1, 0, -1, 0]) / 2, atol=1e-15)

    def test_spans_unit_radius_motifs(self):
        r = CycleReservoir.from_pi(13)
        m = motif_decomposition(metric_tensor(r, 39))
        b = periodic_extension_basis(13, 3)
        np.testing.assert_allclose(b.f.T @ b.f, np.eye(13), atol=1e-12)
        assert principal_angles(m.motifs, b.f).min() >= 1 - 1e-8


class TestSampleColumn:
    @pytest.mark.parametrize("column", range(6))
    def test_reproduces_column(self, column):
        np.testing.assert_allclose(
            sample_fourier_column(6, column, 6), real_fourier_basis(6, 6).f[:, column], atol=1e-14
        )

    def test_dense(self):
        dense = sample_fourier_column(4, 1, 8)
        np.testing.assert_allclose(dense[::2], real_fourier_basis(4, 4).f[:, 1], atol=1e-15)
        assert np.isclose(dense[1], np.cos(np.pi / 4) / np.sqrt(2))


class TestMotifFFT:
    def test_constant(self):
        z = motif_fft(np.full((9, 1), 1 / 3.0))
        np.testing.assert_allclose(np.abs(z[:, 0]), [3.0] + [0.0] * 8, atol=1e-12)

    @pytest.mark.parametrize("n,k", [(12, 1), (12, 5), (97, 20)])
    def test_cosine(self, n, k):
        col = real_fourier_basis(n, n).f[:, 2 * k - 1]
        mag = np.abs(motif_fft(col[:, None])[:, 0])
        expected = np.zeros(n)
        expected[[k, n - k]] = np.sqrt(n / 2)
        np.testing.assert_allclose(mag, expected, atol=1e-10)

    def test_inside_box(self):
        assert np.sqrt(97 / 2) < 7.0

    def test_conjugate_symmetry(self):
        m = motif_decomposition(metric_tensor(CycleReservoir.from_pi(17, 0.9), 17))
        z = motif_fft(m)
        np.testing.assert_allclose(z[1:], np.conj(z[1:][::-1]), atol=1e-10)

    def test_empty(self):
        with pytest.raises(StructuralError):
            motif_fft(np.zeros((3, 0)))


class TestRelativeArea:
    def test_empty(self):
        rep = relative_area([])
        assert rep.area == 0.0 and rep.total_cells == TOTAL

    def test_single(self):
        assert relative_area([0.3 + 0.1j]).area == 1 / TOTAL

    def test_same_cell(self):
        assert relative_area([0.01 + 0.01j, 0.02 + 0.03j]).visited_cells == 1

    def test_cell_index(self):
        # (-7, -7) and (6.999, 6.999) are corner cells; 7 + 7j is clamped
        rep = relative_area([-7 - 7j, 6.999 + 6.999j, 7 + 7j, 100 - 100j])
        assert rep.visited_cells == 3 and rep.clamped == 2

    def test_bad_cell(self):
        with pytest.raises(StructuralError):
            relative_area([0j], cell=0.0)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False), max_size=50))
    def test_bounds(self, zs):
        rep = relative_area(zs)
        assert 0 <= rep.visited_cells <= len(zs)
        assert rep.area == rep.visited_cells / TOTAL


class TestSweep:
    def test_length_one(self):
        reps = rho_sweep(11, [0.9])
        assert len(reps) == 1 and reps[0].rho == 0.9

    def test_unit_radius_collapse(self):
        rep = rho_sweep(97, [1.0])[0]
        assert rep.area < 0.005
        assert rep.area <= (2 * 97 + 1) / TOTAL

    def test_duplicates_deterministic(self):
        a, b = rho_sweep(23, [0.95, 0.95])
        assert a.area == b.area and a.retained_motifs == b.retained_motifs

    def test_random_mode(self):
        reps = rho_sweep(20, [0.5, 1.0], mode="random", seed=3)
        assert all(0 < r.area < 1 and r.mode == "random" for r in reps)

    @pytest.mark.parametrize("rhos,mode", [([], "scr"), ([1.2], "scr"), ([0.5], "other")])
    def test_invalid(self, rhos, mode):
        with pytest.raises(StructuralError):
            rho_sweep(5, rhos, mode=mode)

    def test_spectral_radius(self, rng):
        a = rng.normal(size=(30, 30))
        ref = np.abs(np.linalg.eigvals(a)).max()
        assert abs(spectral_radius(a) - ref) <= 1e-2 * ref
        assert spectral_radius(np.zeros((3, 3))) == 0.0

    def test_csv(self, tmp_path):
        reps, coeffs = rho_sweep(7, [0.5, 1.0], return_coefficients=True)
        _, data = read_csv_matrix(write_sweep_csv(reps, tmp_path / "a.csv"))
        np.testing.assert_array_equal(data[:, 1], [r.area for r in reps])
        _, z = read_csv_matrix(write_coefficients_csv(coeffs[0], tmp_path / "z.csv"))
        np.testing.assert_array_equal(z[:, 0] + 1j * z[:, 1], coeffs[0].reshape(-1))


class TestAlignment:
    def test_self(self):
        b = real_fourier_basis(9, 9)
        rep = align_motifs_to_fourier(b.f, b)
        assert rep.min_cosine > 1 - 1e-12
        assert rep.permutation == list(range(9))

    def test_n3(self):
        m, _ = canonicalize_symmetry(motif_decomposition(MetricTensor(Q3, 3)))
        rep = align_motifs_to_fourier(m, real_fourier_basis(3, 3))
        assert rep.min_cosine >= 1 - 1e-9

    def test_n97(self):
        m = motif_decomposition(metric_tensor(CycleReservoir.from_pi(97), 97))
        m, _ = canonicalize_symmetry(m)
        rep = align_motifs_to_fourier(m, real_fourier_basis(97, 97))
        assert rep.min_cosine >= 1 - 1e-8
        assert sorted(rep.permutation) == list(range(97))

    def test_tau_mismatch(self):
        with pytest.raises(StructuralError):
            align_motifs_to_fourier(np.eye(4), real_fourier_basis(5, 5))

    def test_ambiguous(self):
        col = real_fourier_basis(8, 8).f[:, [1, 3]].sum(axis=1) / np.sqrt(2)
        with pytest.raises(AmbiguityError):
            dominant_bins(col[:, None])
