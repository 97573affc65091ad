"""Reservoir kernel: metric tensor, motifs and motif-space features.

For a linear reservoir the dot product of the states reached after reading
two windows is a (semi-)inner product on the windows themselves,
``K(u, v) = u^T Q v``. The eigenvectors of ``Q`` are the motifs and the
eigenvalues their weights.

Windows are chronological: ``u[0]`` is the oldest sample and ``u[-1]`` the
most recent. In that ordering ``Q[i, j] = w^T (W^T)^(tau-1-i) W^(tau-1-j) w``.
``order="lag"`` returns the same matrix indexed by lag instead,
``Q[i, j] = w^T (W^T)^i W^j w``, so ``Q[0, 0] = ||w||^2``; the two are
related by reversing both axes.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import StructuralError
from .io import write_csv
from .numerics import sym_eig

__all__ = [
    "MetricTensor",
    "MotifBasis",
    "metric_tensor",
    "metric_tensor_general",
    "motif_decomposition",
    "kernel_eval",
    "replicate_motif",
    "rmm_features",
    "write_motif_csv",
]

NULL_RTOL = 1e-10


@dataclass(frozen=True)
class MetricTensor:
    q: np.ndarray
    tau: int
    order: str = "time"
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.shape != (self.tau, self.tau):
            raise StructuralError(f"q must be {self.tau}x{self.tau}, got {q.shape}")
        if self.order not in ("time", "lag"):
            raise StructuralError("order must be 'time' or 'lag'")
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class MotifBasis:
    """Motifs (columns) and weights of a metric tensor, weights descending."""

    motifs: np.ndarray
    weights: np.ndarray
    threshold_used: float = 0.0
    order: str = "time"

    @property
    def n_m(self):
        return self.motifs.shape[1]

    @property
    def tau(self):
        return self.motifs.shape[0]

    def subset(self, idx):
        idx = np.asarray(idx, dtype=int)
        return MotifBasis(
            self.motifs[:, idx], self.weights[idx], self.threshold_used, self.order
        )


def _lag_vectors(step, w, tau):
    vs = np.empty((tau, len(w)))
    v = np.asarray(w, dtype=float).copy()
    for i in range(tau):
        vs[i] = v
        v = step(v)
    return vs


def _gram(vs, order):
    if order == "time":
        vs = vs[::-1]
    q = vs @ vs.T
    return 0.5 * (q + q.T)


def metric_tensor(r, tau, order="time"):
    """Metric tensor of an SCR's kernel for windows of length ``tau``.

    Builds ``v_i = W^i w`` once by repeated shifts and forms their Gram
    matrix, O(tau^2 n).
    """
    if tau < 1:
        raise StructuralError("tau must be >= 1")
    vs = _lag_vectors(r.step, r.input_weights, tau)
    source = dict(r.describe(), kind="scr")
    return MetricTensor(_gram(vs, order), tau, order, source)


def metric_tensor_general(coupling, w, tau, order="time", source=None):
    """Same as :func:`metric_tensor` for an arbitrary dense coupling matrix."""
    coupling = np.asarray(coupling, dtype=float)
    w = np.asarray(w, dtype=float).reshape(-1)
    if coupling.shape != (w.size, w.size):
        raise StructuralError("coupling and input weights do not match")
    if tau < 1:
        raise StructuralError("tau must be >= 1")
    vs = _lag_vectors(lambda x: coupling @ x, w, tau)
    return MetricTensor(_gram(vs, order), tau, order, dict(source or {}))


def motif_decomposition(q, rel_threshold=0.0, include_null=False):
    """Eigen-decompose ``Q`` and keep the motifs above a relative threshold.

    Eigenpairs with ``weight >= rel_threshold * max_weight`` are kept. Weights
    that are zero up to round-off (``<= 1e-10 * max_weight``) are not motifs
    and are dropped, unless ``include_null`` is set, in which case the full
    orthonormal eigenbasis is returned with those weights clamped to 0.
    """
    if not 0.0 <= rel_threshold < 1.0:
        raise StructuralError("rel_threshold must lie in [0, 1)")
    qm = q.q if isinstance(q, MetricTensor) else np.asarray(q, dtype=float)
    order = q.order if isinstance(q, MetricTensor) else "time"
    tau = qm.shape[0]
    eig = sym_eig(qm)
    values, vectors = eig.values, eig.vectors
    top = max(values[0], 0.0) if values.size else 0.0
    null = values <= NULL_RTOL * top
    if include_null:
        weights = np.where(null, 0.0, values)
        keep = (weights >= rel_threshold * top) | null
    else:
        if top == 0.0:
            return MotifBasis(np.zeros((tau, 0)), np.zeros(0), rel_threshold, order)
        keep = (~null) & (values >= rel_threshold * top)
        weights = values
    idx = np.flatnonzero(keep)
    return MotifBasis(vectors[:, idx], weights[idx], rel_threshold, order)


def kernel_eval(q, u, v):
    """``u^T Q v``."""
    qm = q.q if isinstance(q, MetricTensor) else np.asarray(q, dtype=float)
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    if u.size != qm.shape[0] or v.size != qm.shape[0]:
        raise StructuralError(
            f"window lengths {u.size}, {v.size} do not match tau={qm.shape[0]}"
        )
    return float(u @ qm @ v)


def replicate_motif(base, k, rho):
    """Motif for window ``k * n`` built from a window-``n`` motif.

    ``k`` copies of ``base``; copy ``l`` is scaled by ``rho^((k-1-l) n)`` so the
    most recent block is unscaled. Returned with unit norm.
    """
    base = np.asarray(base, dtype=float).reshape(-1)
    if k < 1:
        raise StructuralError("k must be >= 1")
    n = base.size
    scales = rho ** (n * np.arange(k - 1, -1, -1, dtype=float))
    out = np.concatenate([s * base for s in scales])
    return out / np.linalg.norm(out)


def rmm_features(m, u):
    """Projections ``<m_i, u>`` of one window (1-D) or many windows (rows).

    Works with any object exposing orthonormal columns, i.e. a
    :class:`MotifBasis` or a ``RealFourierBasis``.
    """
    cols = m.motifs if isinstance(m, MotifBasis) else getattr(m, "f", m)
    cols = np.asarray(cols, dtype=float)
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != cols.shape[0]:
        raise StructuralError(
            f"window length {u.shape[-1]} does not match basis length {cols.shape[0]}"
        )
    return u @ cols


def write_motif_csv(basis, path, comments=()):
    """One motif per column; the header row holds the weights."""
    return write_csv(path, basis.weights, basis.motifs, comments)
