"""Dense linear algebra used throughout the package.

Everything here is a pure function on numpy arrays. The symmetric
eigensolver is a cyclic Jacobi method with a round-robin pair ordering:
each round applies ``n // 2`` disjoint rotations at once, which is exactly
equivalent to applying them one after another because disjoint plane
rotations do not touch each other's 2x2 pivot blocks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, SingularityError, StructuralError

__all__ = [
    "EigenDecomposition",
    "sym_eig",
    "dft",
    "idft",
    "ridge_solve",
    "principal_angles",
    "is_orthonormal",
]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a real symmetric matrix.

    Attributes
    ----------
    values : ndarray, shape (n,)
        Eigenvalues in descending order.
    vectors : ndarray, shape (n, n)
        Orthonormal eigenvectors, column ``i`` belongs to ``values[i]``.
    sweeps : int
        Number of Jacobi sweeps that were needed.
    off_norm : float
        Off-diagonal Frobenius norm at termination.
    """

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0
    off_norm: float = 0.0

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.T


def _as_square(a, name="a"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StructuralError(f"{name} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise StructuralError(f"{name} has non-finite entries")
    return a


def _round_robin(n):
    """Rounds of disjoint index pairs covering every pair exactly once.

    Circle method; for odd ``n`` a phantom player ``n`` sits out each round.
    """
    m = n if n % 2 == 0 else n + 1
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _fro(a):
    """Frobenius norm that neither underflows nor overflows."""
    m = float(np.max(np.abs(a), initial=0.0))
    if m == 0.0:
        return 0.0
    return m * float(np.linalg.norm(a / m))


def _off_norm(a):
    return _fro(a - np.diag(np.diag(a)))


def _sweep(a, v, rounds):
    """One cyclic sweep of Jacobi rotations, in place on ``a`` and ``v``."""
    for p, q in rounds:
        apq = a[p, q]
        active = apq != 0.0
        if not np.any(active):
            continue
        p, q, apq = p[active], q[active], apq[active]
        # a subnormal apq can overflow theta to inf; t -> 0 is then the
        # correct (identity) rotation
        with np.errstate(over="ignore"):
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
        t = np.sign(theta) / (np.abs(theta) + np.hypot(1.0, theta))
        t[theta == 0.0] = 1.0
        c = 1.0 / np.sqrt(1.0 + t * t)
        s = t * c

        ap, aq = a[:, p].copy(), a[:, q]
        a[:, p] = c * ap - s * aq
        a[:, q] = s * ap + c * aq
        ap, aq = a[p, :].copy(), a[q, :]
        a[p, :] = c[:, None] * ap - s[:, None] * aq
        a[q, :] = s[:, None] * ap + c[:, None] * aq
        a[p, q] = 0.0
        a[q, p] = 0.0

        vp, vq = v[:, p].copy(), v[:, q]
        v[:, p] = c * vp - s * vq
        v[:, q] = s * vp + c * vq


def sym_eig(a, tol=1e-12, max_sweeps=100):
    """Full eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Symmetric input. Asymmetry larger than ``tol * ||a||_F`` is rejected.
    tol : float
        Relative tolerance for both the symmetry check and convergence
        (off-diagonal Frobenius norm ``<= tol * ||a||_F``). One extra
        sweep is applied after the test first succeeds.
    max_sweeps : int
        Iteration cap; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    EigenDecomposition
        Eigenvalues sorted descending; ties keep Jacobi output order.
    """
    a = _as_square(a)
    n = a.shape[0]
    scale = _fro(a)
    if _fro(a - a.T) > tol * scale:
        raise StructuralError("matrix is not symmetric within tolerance")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    if n == 1 or scale == 0.0:
        return _sorted(a, v, 0, 0.0)

    target = tol * scale
    rounds = _round_robin(n)
    off = _off_norm(a)
    sweeps = 0
    while off > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, target {target:.3e})",
                residual=off,
            )
        _sweep(a, v, rounds)
        sweeps += 1
        off = _off_norm(a)
    if sweeps:
        # Convergence is quadratic, so one more sweep pushes the off-diagonal
        # mass down to round-off. Eigenvectors of small eigenvalues sitting
        # next to a null space need that: their error is roughly off / gap.
        _sweep(a, v, rounds)
        sweeps += 1
        off = _off_norm(a)

    return _sorted(a, v, sweeps, off)


def _sorted(a, v, sweeps, off):
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return EigenDecomposition(values[order], v[:, order], sweeps, off)


def _dft_matrix(n, sign):
    k = np.arange(n)
    # reduce jk mod n before scaling so large products keep full precision
    phase = np.outer(k, k) % n
    return np.exp(sign * 2j * np.pi * phase / n)


def dft(v, fast=False, axis=0):
    """Discrete Fourier transform ``X_k = sum_j v_j exp(-2 pi i jk / N)``.

    The reference path is a direct O(N^2) summation. ``fast=True`` uses
    ``numpy.fft`` instead; the two agree to 1e-9.
    Works column-wise on 2-D input along ``axis``.
    """
    v = np.asarray(v, dtype=complex)
    if v.size == 0 or v.shape[axis] == 0:
        raise StructuralError("dft of an empty vector")
    if fast:
        return np.fft.fft(v, axis=axis)
    m = _dft_matrix(v.shape[axis], -1)
    return np.moveaxis(np.tensordot(m, np.moveaxis(v, axis, 0), axes=1), 0, axis)


def idft(x, fast=False, axis=0):
    """Inverse of :func:`dft` (includes the ``1/N`` factor)."""
    x = np.asarray(x, dtype=complex)
    if x.size == 0 or x.shape[axis] == 0:
        raise StructuralError("idft of an empty vector")
    if fast:
        return np.fft.ifft(x, axis=axis)
    n = x.shape[axis]
    m = _dft_matrix(n, 1)
    return np.moveaxis(np.tensordot(m, np.moveaxis(x, axis, 0), axes=1), 0, axis) / n


def ridge_solve(x, y, alpha):
    """Minimise ``||X B - Y||^2 + alpha ||B||^2`` over ``B``.

    Solves the normal equations ``(X^T X + alpha I) B = X^T Y``. With
    ``alpha == 0`` a rank-deficient ``X^T X`` raises :class:`SingularityError`.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    squeeze = y.ndim == 1
    if squeeze:
        y = y[:, None]
    if x.ndim != 2 or y.ndim != 2:
        raise StructuralError("x and y must be 2-D")
    if x.shape[0] != y.shape[0]:
        raise StructuralError(
            f"sample counts differ: x has {x.shape[0]}, y has {y.shape[0]}"
        )
    if alpha < 0:
        raise StructuralError("alpha must be non-negative")

    gram = x.T @ x
    rhs = x.T @ y
    p = gram.shape[0]
    if alpha == 0 and np.linalg.matrix_rank(gram) < p:
        raise SingularityError("X^T X is rank deficient and alpha is 0")
    b = np.linalg.solve(gram + alpha * np.eye(p), rhs)
    return b[:, 0] if squeeze else b


def is_orthonormal(u, tol=1e-8):
    u = np.asarray(u, dtype=float)
    if u.ndim != 2:
        return False
    k = u.shape[1]
    return bool(np.max(np.abs(u.T @ u - np.eye(k)), initial=0.0) <= tol)


def principal_angles(u, v, tol=1e-8):
    """Cosines of the principal angles between ``span(u)`` and ``span(v)``.

    Both inputs must have orthonormal columns. The result has
    ``min(u.shape[1], v.shape[1])`` entries, clamped to [0, 1], descending.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim == 1:
        u = u[:, None]
    if v.ndim == 1:
        v = v[:, None]
    if u.shape[0] != v.shape[0]:
        raise StructuralError(
            f"row dimensions differ: {u.shape[0]} vs {v.shape[0]}"
        )
    if not (is_orthonormal(u, tol) and is_orthonormal(v, tol)):
        raise StructuralError("principal_angles needs orthonormal column sets")
    if u.shape[1] == 0 or v.shape[1] == 0:
        return np.zeros(0)
    s = np.linalg.svd(u.T @ v, compute_uv=False)
    return np.clip(np.sort(s)[::-1], 0.0, 1.0)
