import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scrkernel.errors import StructuralError
from scrkernel.io import read_csv_matrix
from scrkernel.kernel import (
    MetricTensor,
    kernel_eval,
    metric_tensor,
    metric_tensor_general,
    motif_decomposition,
    replicate_motif,
    rmm_features,
    write_motif_csv,
)
from scrkernel.numerics import principal_angles
from scrkernel.reservoir import CycleReservoir, feature_map

Q3 = np.array([[3.0, -1, -1], [-1, 3, -1], [-1, -1, 3]])
W3 = np.array([1.0, 1.0, -1.0])


def lag_q_by_powers(r, tau):
    """Q_ij = w^T (W^T)^i W^j w by explicit matrix powers (0-based lags)."""
    mp = np.linalg.matrix_power
    vs = [mp(r.coupling, i) @ r.input_weights for i in range(tau)]
    return np.array([[vs[i] @ vs[j] for j in range(tau)] for i in range(tau)])


class TestMetricTensor:
    def test_n3(self):
        q = metric_tensor(CycleReservoir(3, 1.0, W3), 3)
        np.testing.assert_array_equal(q.q, Q3)

    def test_n1(self):
        np.testing.assert_array_equal(metric_tensor(CycleReservoir(1, 1.0, [1]), 1).q, [[1.0]])

    @pytest.mark.parametrize("n,tau,rho,scale", [(4, 4, 1.0, 1.0), (5, 11, 0.8, 0.3), (7, 3, 0.5, 2.0)])
    def test_against_powers(self, n, tau, rho, scale):
        r = CycleReservoir.from_pi(n, rho, scale)
        lag = lag_q_by_powers(r, tau)
        np.testing.assert_allclose(metric_tensor(r, tau, order="lag").q, lag, atol=1e-13)
        # chronological order is the lag order read backwards
        np.testing.assert_allclose(metric_tensor(r, tau).q, lag[::-1, ::-1], atol=1e-13)

    @pytest.mark.parametrize("rho", [0.5, 1.0])
    def test_most_recent_entry(self, rho):
        r = CycleReservoir.from_pi(9, rho, 0.05)
        expected = 9 * 0.05**2
        assert np.isclose(metric_tensor(r, 12, order="lag").q[0, 0], expected, rtol=1e-14)
        assert np.isclose(metric_tensor(r, 12).q[-1, -1], expected, rtol=1e-14)

    def test_symmetric_psd(self):
        q = metric_tensor(CycleReservoir.from_pi(10, 0.9), 25).q
        np.testing.assert_array_equal(q, q.T)
        assert np.linalg.eigvalsh(q).min() >= -1e-10 * np.linalg.norm(q)

    def test_general_matches_scr(self):
        r = CycleReservoir.from_pi(6, 0.7)
        a = metric_tensor(r, 9).q
        b = metric_tensor_general(r.coupling, r.input_weights, 9).q
        np.testing.assert_allclose(a, b, atol=1e-14)

    def test_bad_tau(self):
        with pytest.raises(StructuralError):
            metric_tensor(CycleReservoir.from_pi(3), 0)
        with pytest.raises(StructuralError):
            MetricTensor(np.eye(2), 3)

    @pytest.mark.parametrize("n", [1, 4, 13])
    def test_trace_at_unit_radius(self, n):
        r = CycleReservoir.from_pi(n, 1.0, 0.7)
        q = metric_tensor(r, n).q
        np.testing.assert_allclose(np.diag(q), n * 0.49, rtol=1e-14)
        assert np.isclose(np.trace(q), n * n * 0.49, rtol=1e-14)


class TestMotifDecomposition:
    def test_q3(self):
        m = motif_decomposition(MetricTensor(Q3, 3))
        np.testing.assert_allclose(m.weights, [4, 4, 1], atol=1e-12)
        assert m.n_m == 3

    def test_q3_threshold(self):
        m = motif_decomposition(MetricTensor(Q3, 3), 0.5)
        np.testing.assert_allclose(m.weights, [4, 4], atol=1e-12)
        assert m.n_m == 2 and m.threshold_used == 0.5

    def test_identity(self):
        m = motif_decomposition(np.eye(5))
        np.testing.assert_array_equal(m.weights, np.ones(5))

    def test_zero(self):
        m = motif_decomposition(np.zeros((4, 4)))
        assert m.n_m == 0 and m.motifs.shape == (4, 0)

    def test_threshold_range(self):
        with pytest.raises(StructuralError):
            motif_decomposition(np.eye(2), 1.0)

    def test_null_directions(self):
        # n=8 with the pi pattern has a vanishing Nyquist weight
        q = metric_tensor(CycleReservoir.from_pi(8), 8)
        assert motif_decomposition(q).n_m == 7
        full = motif_decomposition(q, include_null=True)
        assert full.n_m == 8 and full.weights[-1] == 0.0
        np.testing.assert_allclose(full.motifs.T @ full.motifs, np.eye(8), atol=1e-10)

    @pytest.mark.parametrize("n,tau,rho", [(5, 5, 1.0), (9, 20, 0.9), (12, 7, 0.6)])
    def test_invariants(self, n, tau, rho):
        m = motif_decomposition(metric_tensor(CycleReservoir.from_pi(n, rho), tau))
        assert m.n_m <= min(n, tau)
        np.testing.assert_allclose(m.motifs.T @ m.motifs, np.eye(m.n_m), atol=1e-10)
        assert np.all(np.diff(m.weights) <= 0)

    def test_scale_invariance(self):
        a = motif_decomposition(metric_tensor(CycleReservoir.from_pi(11, 0.9, 1.0), 11))
        b = motif_decomposition(metric_tensor(CycleReservoir.from_pi(11, 0.9, 3.0), 11))
        np.testing.assert_allclose(b.weights, 9 * a.weights, rtol=1e-10)
        np.testing.assert_allclose(principal_angles(a.motifs, b.motifs), 1.0, atol=1e-9)

    @pytest.mark.parametrize("n", [5, 12, 31])
    def test_pairing(self, n):
        m = motif_decomposition(metric_tensor(CycleReservoir.from_pi(n), n), include_null=True)
        fw = np.abs(np.fft.fft(CycleReservoir.from_pi(n).input_weights)) ** 2
        # independent oracle: unpaired bins removed, the rest come in equal pairs
        rest = list(m.weights)
        for u in [fw[0]] + ([fw[n // 2]] if n % 2 == 0 else []):
            rest.pop(int(np.argmin(np.abs(np.array(rest) - u))))
        rest = np.array(rest)
        np.testing.assert_allclose(rest[0::2], rest[1::2], rtol=1e-9, atol=1e-9 * m.weights[0])


class TestKernelEval:
    def test_zero(self):
        assert kernel_eval(Q3, np.zeros(3), np.zeros(3)) == 0.0

    def test_corner(self):
        assert kernel_eval(MetricTensor(Q3, 3), [1, 0, 0], [1, 0, 0]) == 3.0

    def test_mismatch(self):
        with pytest.raises(StructuralError):
            kernel_eval(Q3, np.ones(2), np.ones(3))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 9), st.integers(1, 25), st.sampled_from([0.5, 0.9, 1.0]), st.integers(0, 2**31))
    def test_feature_identity(self, n, tau, rho, seed):
        g = np.random.default_rng(seed)
        r = CycleReservoir(n, rho, g.choice([-1.0, 1.0], n))
        u, v = g.normal(size=tau), g.normal(size=tau)
        k = kernel_eval(metric_tensor(r, tau), u, v)
        assert abs(k - feature_map(r, u) @ feature_map(r, v)) <= 1e-9 * (1 + abs(k))


class TestReplicate:
    def test_k1(self, rng):
        b = rng.normal(size=5)
        b /= np.linalg.norm(b)
        np.testing.assert_allclose(replicate_motif(b, 1, 0.7), b, atol=1e-15)

    def test_unit_radius(self, rng):
        b = rng.normal(size=4)
        b /= np.linalg.norm(b)
        np.testing.assert_allclose(replicate_motif(b, 2, 1.0), np.r_[b, b] / np.sqrt(2), atol=1e-15)

    def test_contracted(self):
        np.testing.assert_allclose(replicate_motif([1.0], 2, 0.5), np.array([0.5, 1.0]) / np.sqrt(1.25), rtol=1e-15)

    def test_bad_k(self):
        with pytest.raises(StructuralError):
            replicate_motif([1.0], 0, 1.0)


class TestRmmFeatures:
    def test_first_motif(self):
        m = motif_decomposition(metric_tensor(CycleReservoir.from_pi(7), 7))
        np.testing.assert_allclose(rmm_features(m, m.motifs[:, 0]), np.eye(m.n_m)[0], atol=1e-12)

    def test_zero(self):
        m = motif_decomposition(MetricTensor(Q3, 3))
        np.testing.assert_array_equal(rmm_features(m, np.zeros(3)), 0)

    def test_q3_constant(self):
        m = motif_decomposition(MetricTensor(Q3, 3))
        np.testing.assert_allclose(np.abs(rmm_features(m, np.ones(3))), [0, 0, np.sqrt(3)], atol=1e-12)

    def test_batch_and_mismatch(self, rng):
        m = motif_decomposition(MetricTensor(Q3, 3))
        u = rng.normal(size=(4, 3))
        np.testing.assert_allclose(rmm_features(m, u)[2], rmm_features(m, u[2]))
        with pytest.raises(StructuralError):
            rmm_features(m, np.ones(4))


def test_motif_csv_roundtrip(tmp_path):
    m = motif_decomposition(metric_tensor(CycleReservoir.from_pi(6, 0.9), 6))
    path = write_motif_csv(m, tmp_path / "m.csv", comments=["config: {}"])
    header, body = read_csv_matrix(path)
    np.testing.assert_array_equal(np.array(header, dtype=float), m.weights)
    np.testing.assert_array_equal(body, m.motifs)
