"""Machine checks of the structural results for cycle reservoirs.

Covers the scaled-idempotent block matrix ``X_rho`` (``X^2 = lambda X`` and
the multiplicity of ``lambda``), Toeplitz / circulant / centrosymmetric
structure of the metric tensor, the symmetric / skew-symmetric motif
census, and the harmonic (Fourier) form of motifs at unit spectral radius.
"""

from dataclasses import dataclass, asdict, field

import numpy as np

from .errors import PreconditionError, ResourceError, StructureViolation
from .kernel import MotifBasis, MetricTensor, metric_tensor, motif_decomposition
from .numerics import dft, principal_angles, sym_eig
from .reservoir import CycleReservoir
from .spectral import real_fourier_basis

__all__ = [
    "GramBlockMatrix",
    "StructureReport",
    "HarmonicReport",
    "build_gram_block",
    "verify_idempotent_scaled",
    "verify_rank",
    "toeplitz_circulant_centro_check",
    "weight_classes",
    "canonicalize_symmetry",
    "verify_harmonic",
    "fourier_weights",
    "theorem_suite",
]

MAX_GRAM_ROWS = 4096
CLASS_RTOL = 1e-6


@dataclass(frozen=True)
class GramBlockMatrix:
    x: np.ndarray
    lam: float
    n: int
    tau: int
    rho: float
    w: np.ndarray

    @property
    def w_hat(self):
        """Block-diagonal ``(tau n) x tau`` stack of the input weights."""
        return np.kron(np.eye(self.tau), self.w.reshape(-1, 1))


def _cycle_power(n, k):
    # C^k has ones at (i + k mod n, i)
    return np.roll(np.eye(n), k % n, axis=0)


def build_gram_block(r, tau, max_rows=MAX_GRAM_ROWS):
    """Assemble ``X_rho``: block (i, j) is ``rho^(i+j) C^(j-i)`` (0-based)."""
    n = r.n
    size = tau * n
    if size > max_rows:
        raise ResourceError(f"X_rho would have {size} rows (limit {max_rows})")
    x = np.empty((size, size))
    for i in range(tau):
        for j in range(tau):
            x[i * n:(i + 1) * n, j * n:(j + 1) * n] = (
                r.rho ** (i + j) * _cycle_power(n, j - i)
            )
    if r.rho == 1.0:
        lam = float(tau)
    else:
        lam = (1.0 - r.rho ** (2 * tau)) / (1.0 - r.rho ** 2)
    return GramBlockMatrix(x, lam, n, tau, r.rho, r.input_weights.copy())


def verify_idempotent_scaled(g):
    """``max |X^2 - lambda X|``."""
    return float(np.max(np.abs(g.x @ g.x - g.lam * g.x)))


def verify_rank(g, return_deviation=False):
    """Multiplicity of the eigenvalue ``lambda`` of ``X_rho``.

    With ``return_deviation`` also returns the largest distance of any
    eigenvalue from the set ``{0, lambda}``.
    """
    values = sym_eig(g.x).values
    mult = int(np.sum(np.abs(values - g.lam) <= 1e-8 * g.lam))
    if not return_deviation:
        return mult
    dev = float(np.max(np.minimum(np.abs(values), np.abs(values - g.lam))))
    return mult, dev


@dataclass
class StructureReport:
    tolerance: float
    is_toeplitz: bool | None = None
    toeplitz_deviation: float | None = None
    is_circulant: bool | None = None
    circulant_deviation: float | None = None
    is_centrosymmetric: bool | None = None
    centro_deviation: float | None = None
    n_symmetric: int = 0
    n_skew: int = 0
    parity: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def toeplitz_circulant_centro_check(q, tol=1e-12):
    """Flag Toeplitz, circulant and centrosymmetric structure of ``Q``.

    Deviations are absolute maxima; a flag is set when the deviation is at
    most ``tol * max|Q|``.
    """
    qm = q.q if isinstance(q, MetricTensor) else np.asarray(q, dtype=float)
    scale = max(float(np.max(np.abs(qm), initial=0.0)), np.finfo(float).tiny)
    if qm.shape[0] > 1:
        toe = float(np.max(np.abs(qm[1:, 1:] - qm[:-1, :-1])))
        circ = float(np.max(np.abs(qm[1:] - np.roll(qm[:-1], 1, axis=1))))
    else:
        toe = circ = 0.0
    centro = float(np.max(np.abs(qm - qm[::-1, ::-1])))
    lim = tol * scale
    return StructureReport(
        tolerance=tol,
        is_toeplitz=toe <= lim,
        toeplitz_deviation=toe,
        is_circulant=circ <= lim,
        circulant_deviation=circ,
        is_centrosymmetric=centro <= lim,
        centro_deviation=centro,
    )


def weight_classes(weights, rtol=CLASS_RTOL):
    """Group sorted weights whose neighbours differ by <= ``rtol * max(lmax, 1)``."""
    weights = np.asarray(weights, dtype=float)
    if weights.size == 0:
        return []
    gap = rtol * max(float(np.max(weights)), 1.0)
    classes = [[0]]
    for i in range(1, weights.size):
        if abs(weights[i] - weights[classes[-1][-1]]) <= gap:
            classes[-1].append(i)
        else:
            classes.append([i])
    return [np.array(c, dtype=int) for c in classes]


def _parity_split(v):
    """Orthonormal bases of the symmetric and skew parts of ``span(v)``."""
    jv = v[::-1]
    parts = []
    for sign in (1.0, -1.0):
        p = 0.5 * (v + sign * jv)
        u, s, _ = np.linalg.svd(p, full_matrices=False)
        parts.append(u[:, s > 0.5])
    return parts


def canonicalize_symmetry(m, tol=1e-8, class_rtol=CLASS_RTOL):
    """Rotate each degenerate weight class onto symmetric/skew motifs.

    Returns the rotated :class:`MotifBasis` and a :class:`StructureReport`
    holding the counts and the parity of every motif. A class whose span is
    not invariant under reversal, or a single motif that is neither
    symmetric nor skew within ``tol``, raises :class:`StructureViolation`.
    """
    cols, weights, parity = [], [], []
    for idx in weight_classes(m.weights, class_rtol):
        v = m.motifs[:, idx]
        if len(idx) == 1:
            x = v[:, 0]
            plus = x + x[::-1]
            if np.linalg.norm(plus) < 1e-8:
                y, kind = x - x[::-1], "skew"
            else:
                y, kind = plus, "symmetric"
            y = y / np.linalg.norm(y)
            resid = np.linalg.norm(x[::-1] - (1 if kind == "symmetric" else -1) * x)
            if resid > tol:
                raise StructureViolation(
                    f"motif with weight {m.weights[idx[0]]:.6g} is neither "
                    f"symmetric nor skew (residual {resid:.3e})"
                )
            if y @ x < 0:
                y = -y
            cols.append(y[:, None])
            weights.append(m.weights[idx])
            parity.append(kind)
            continue
        sym, skew = _parity_split(v)
        if sym.shape[1] + skew.shape[1] != len(idx):
            raise StructureViolation(
                f"weight class {m.weights[idx[0]]:.6g} (dim {len(idx)}) splits into "
                f"{sym.shape[1]} symmetric + {skew.shape[1]} skew directions"
            )
        cols.append(np.column_stack([sym, skew]))
        weights.append(m.weights[idx])
        parity.extend(["symmetric"] * sym.shape[1] + ["skew"] * skew.shape[1])
    if cols:
        motifs = np.column_stack(cols)
        w = np.concatenate(weights)
    else:
        motifs, w = m.motifs.copy(), m.weights.copy()
    report = StructureReport(
        tolerance=tol,
        n_symmetric=parity.count("symmetric"),
        n_skew=parity.count("skew"),
        parity=parity,
    )
    return MotifBasis(motifs, w, m.threshold_used, m.order), report


def fourier_weights(r):
    """Kernel weight of each DFT bin at unit radius: ``|DFT(w)_k|^2``.

    This is ``n |<xi_k, w>|^2`` with ``xi_k`` the unit Fourier vectors.
    """
    return np.abs(dft(r.input_weights)) ** 2


@dataclass
class HarmonicReport:
    min_cosine: float
    max_weight_rel_error: float
    max_pair_rel_error: float
    classes: list

    def passed(self, cos_tol=1e-8, weight_tol=1e-8, pair_tol=1e-9):
        return (
            self.min_cosine >= 1.0 - cos_tol
            and self.max_weight_rel_error <= weight_tol
            and self.max_pair_rel_error <= pair_tol
        )

    def to_dict(self):
        return asdict(self)


def verify_harmonic(m, r, class_rtol=CLASS_RTOL):
    """Compare motifs with Fourier vectors at unit radius and ``tau == n``.

    For each weight class, the principal-angle cosines between the class's
    motifs and the real Fourier columns whose frequencies carry that weight.
    Also the relative error between the motif weights and ``|DFT(w)_k|^2``,
    and how well the weights pair up (every frequency other than 0 and
    ``n / 2`` appears twice).
    """
    n = r.n
    if r.rho != 1.0:
        raise PreconditionError("harmonic motifs require rho == 1")
    if m.tau != n:
        raise PreconditionError(f"harmonic motifs require tau == n ({m.tau} != {n})")

    fw = fourier_weights(r)
    top = float(max(fw.max(), np.max(m.weights, initial=0.0)))
    floor = 1e-6 * top

    # weights vs the full multiset of Fourier weights
    expected = np.sort(fw)[::-1]
    got = np.asarray(m.weights, dtype=float)
    if got.size == n:
        werr = np.abs(got - expected) / np.maximum(expected, floor)
    else:
        werr = np.array([np.min(np.abs(g - fw) / np.maximum(fw, floor)) for g in got])
    max_werr = float(werr.max(initial=0.0))

    # pairing: drop the unpaired bins, then neighbours must agree
    remaining = list(np.sort(got)[::-1])
    unpaired = [fw[0]] + ([fw[n // 2]] if n % 2 == 0 else [])
    for u in unpaired:
        if remaining:
            remaining.pop(int(np.argmin(np.abs(np.array(remaining) - u))))
    perr = 0.0
    for a, b in zip(remaining[0::2], remaining[1::2]):
        perr = max(perr, abs(a - b) / max(a, b, floor))

    basis = real_fourier_basis(n, n)
    half = np.array([min(b, n - b) for b in basis.bins])
    classes = []
    min_cos = 1.0
    gap = class_rtol * max(top, 1.0)
    for idx in weight_classes(got, class_rtol):
        level = float(np.mean(got[idx]))
        freq_cols = [j for j, b in enumerate(half) if abs(fw[b] - level) <= gap]
        if len(freq_cols) != len(idx):
            cs = [0.0]
        else:
            cs = list(principal_angles(m.motifs[:, idx], basis.f[:, freq_cols]))
        min_cos = min(min_cos, min(cs))
        classes.append(
            {
                "weight": level,
                "dim": int(len(idx)),
                "bins": sorted({int(half[j]) for j in freq_cols}),
                "cosines": [float(c) for c in cs],
            }
        )
    return HarmonicReport(float(min_cos), max_werr, float(perr), classes)


def _check(name, passed, deviation, tolerance, informational=False, **extra):
    out = {
        "check": name,
        "passed": bool(passed),
        "deviation": deviation,
        "tolerance": tolerance,
    }
    if informational:
        out["status"] = "expected-fail" if not passed else "pass"
        out["informational"] = True
    out.update(extra)
    return out


def theorem_suite(r, lemma_grid=None):
    """Run every structural check for one reservoir.

    The block-matrix lemmas are checked on ``lemma_grid`` (a list of
    ``(n, tau, rho)``; default the small grid {1..4} x {n, 2n, 3n} x
    {0.5, 0.9, 1.0}) plus the reservoir itself when ``X_rho`` fits the size
    guard. Circulant structure, the census and the harmonic check only apply
    at ``rho == 1``; for ``rho < 1`` the circulant/Toeplitz results are
    reported as informational.
    """
    checks = []
    if lemma_grid is None:
        lemma_grid = [
            (n, k * n, rho)
            for n in (1, 2, 3, 4)
            for k in (1, 2, 3)
            for rho in (0.5, 0.9, 1.0)
        ]
    grid = list(lemma_grid)
    if r.n * r.n <= MAX_GRAM_ROWS:
        grid.append((r.n, r.n, r.rho))
    for n, tau, rho in grid:
        # X_rho does not involve the input weights
        g = build_gram_block(CycleReservoir(n, rho, np.ones(n)), tau)
        dev = verify_idempotent_scaled(g)
        checks.append(
            _check(f"idempotent n={n} tau={tau} rho={rho}", dev <= 1e-9 * g.lam, dev, 1e-9 * g.lam)
        )
        mult, sdev = verify_rank(g, return_deviation=True)
        checks.append(
            _check(
                f"multiplicity n={n} tau={tau} rho={rho}",
                mult == n and sdev <= 1e-8 * g.lam,
                sdev,
                1e-8 * g.lam,
                multiplicity=mult,
            )
        )

    q = metric_tensor(r, r.n)
    lag = metric_tensor(r, r.n, order="lag")
    if r.n * r.n <= MAX_GRAM_ROWS:
        g = build_gram_block(r, r.n)
        dev = float(np.max(np.abs(g.w_hat.T @ g.x @ g.w_hat - lag.q)))
        checks.append(_check("gram block reproduces Q", dev <= 1e-10 * max(1.0, np.abs(lag.q).max()), dev, 1e-10))

    rep = toeplitz_circulant_centro_check(q)
    gated = r.rho != 1.0
    checks.append(_check("Q toeplitz", rep.is_toeplitz, rep.toeplitz_deviation, rep.tolerance, informational=gated))
    checks.append(_check("Q circulant", rep.is_circulant, rep.circulant_deviation, rep.tolerance, informational=gated))
    checks.append(_check("Q centrosymmetric", rep.is_centrosymmetric, rep.centro_deviation, rep.tolerance, informational=gated))
    if gated:
        return checks

    full = motif_decomposition(q, 0.0, include_null=True)
    h = verify_harmonic(full, r)
    checks.append(_check("harmonic motifs (subspace cosines)", h.min_cosine >= 1 - 1e-8, 1.0 - h.min_cosine, 1e-8))
    checks.append(_check("weights equal n|d_j|^2", h.max_weight_rel_error <= 1e-8, h.max_weight_rel_error, 1e-8))
    checks.append(_check("weights come in pairs", h.max_pair_rel_error <= 1e-9, h.max_pair_rel_error, 1e-9))
    try:
        _, census = canonicalize_symmetry(full)
        want = ((r.n + 1) // 2, r.n // 2)
        got = (census.n_symmetric, census.n_skew)
        checks.append(_check("symmetric/skew census", got == want, 0.0 if got == want else 1.0, 0.0, counts=list(got), expected=list(want)))
    except StructureViolation as exc:
        checks.append(_check("symmetric/skew census", False, 1.0, 0.0, error=str(exc)))
    return checks
