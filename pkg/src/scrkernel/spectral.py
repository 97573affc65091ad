"""Fourier-side analysis of reservoir motifs.

* the real Fourier basis (sampled cosines and sines) and its periodic
  extension to windows that are a multiple of the reservoir size,
* column-wise DFT of motifs and the coarse-grained "relative area" their
  coefficients cover in the complex plane,
* sweeps of that area over the spectral radius, for SCRs and for dense
  random reservoirs,
* frequency-by-frequency alignment of a motif basis with a Fourier basis.
"""

from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import AmbiguityError, ConvergenceError, StructuralError
from .io import write_csv
from .kernel import (
    MotifBasis,
    metric_tensor,
    metric_tensor_general,
    motif_decomposition,
)
from .numerics import dft, principal_angles
from .reservoir import CycleReservoir

__all__ = [
    "RealFourierBasis",
    "RelativeAreaReport",
    "AlignmentReport",
    "real_fourier_basis",
    "periodic_extension_basis",
    "sample_fourier_column",
    "motif_fft",
    "relative_area",
    "spectral_radius",
    "random_coupling",
    "rho_sweep",
    "align_motifs_to_fourier",
    "write_sweep_csv",
    "write_coefficients_csv",
]

AREA_HALF_WIDTH = 7.0
AREA_CELL = 0.05
AREA_THRESHOLD = 1e-2


@dataclass(frozen=True)
class RealFourierBasis:
    """Orthonormal sampled cosines/sines, one frequency label per column.

    ``labels[j] = (bin, kind)`` where ``bin`` is the frequency index in a
    ``domain_length``-point DFT and ``kind`` is one of ``const``, ``cos``,
    ``sin``, ``nyquist``.
    """

    f: np.ndarray
    labels: tuple
    domain_length: int

    @property
    def n(self):
        return self.f.shape[1]

    @property
    def bins(self):
        return np.array([b for b, _ in self.labels], dtype=int)


def _fourier_columns(tau, n):
    i = np.arange(tau)
    cols, labels = [], []
    cols.append(np.full(tau, 1.0 / np.sqrt(tau)))
    labels.append((0, "const"))
    scale = np.sqrt(2.0 / tau)
    for k in range(1, (n - 1) // 2 + 1):
        cols.append(scale * np.cos(2 * np.pi * k * i / tau))
        labels.append((k, "cos"))
        cols.append(scale * np.sin(2 * np.pi * k * i / tau))
        labels.append((k, "sin"))
    if n % 2 == 0 and n > 1:
        k = n // 2
        col = np.cos(2 * np.pi * k * i / tau)
        cols.append(col / np.linalg.norm(col))
        labels.append((k, "nyquist"))
    return np.column_stack(cols), labels


def real_fourier_basis(tau, n=None):
    """First ``n`` non-degenerate columns of the real Fourier basis on ``tau`` samples.

    Columns: the constant, then ``(cos_k, sin_k)`` for
    ``k = 1 .. (n - 1) // 2``, then for even ``n`` the cosine at ``k = n / 2``.
    Cosines and sines carry ``sqrt(2 / tau)``; the constant and the top
    cosine are renormalised to unit length.
    """
    n = tau if n is None else n
    if n < 1 or tau < 1:
        raise StructuralError("tau and n must be >= 1")
    if n > tau:
        raise StructuralError(f"n={n} exceeds window length tau={tau}")
    f, labels = _fourier_columns(tau, n)
    return RealFourierBasis(f, tuple(labels), tau)


def periodic_extension_basis(n, k):
    """``real_fourier_basis(n)`` tiled ``k`` times and renormalised (tau = k n)."""
    if k < 1:
        raise StructuralError("k must be >= 1")
    base = real_fourier_basis(n, n)
    f = np.tile(base.f, (k, 1)) / np.sqrt(k)
    labels = tuple((b * k, kind) for b, kind in base.labels)
    return RealFourierBasis(f, labels, n * k)


def sample_fourier_column(tau, column, samples, n=None):
    """Evaluate the function behind one basis column on a denser grid.

    The column's sinusoid is sampled at ``samples`` equally spaced points
    covering the same period ``[0, tau)``. With ``samples == tau`` this
    reproduces the column itself.
    """
    basis = real_fourier_basis(tau, n)
    k, kind = basis.labels[column]
    t = np.arange(samples) * (tau / samples)
    if kind == "const":
        return np.full(samples, 1.0 / np.sqrt(tau))
    if kind == "nyquist":
        norm = np.linalg.norm(np.cos(2 * np.pi * k * np.arange(tau) / tau))
        return np.cos(2 * np.pi * k * t / tau) / norm
    fn = np.cos if kind == "cos" else np.sin
    return np.sqrt(2.0 / tau) * fn(2 * np.pi * k * t / tau)


def motif_fft(m, fast=False):
    """Column-wise DFT of the motifs (tau x N_m complex)."""
    cols = m.motifs if isinstance(m, MotifBasis) else np.asarray(m, dtype=float)
    if cols.ndim != 2 or cols.shape[1] == 0:
        raise StructuralError("motif_fft needs a non-empty basis")
    return dft(cols, fast=fast, axis=0)


@dataclass
class RelativeAreaReport:
    area: float
    visited_cells: int
    total_cells: int
    clamped: int = 0
    rho: float | None = None
    retained_motifs: int | None = None
    half_width: float = AREA_HALF_WIDTH
    cell: float = AREA_CELL
    mode: str = "scr"

    def to_dict(self):
        return asdict(self)


def relative_area(coeffs, half_width=AREA_HALF_WIDTH, cell=AREA_CELL):
    """Fraction of grid cells in ``[-hw, hw]^2`` hit by the complex coefficients.

    Coefficients outside the box are clamped onto the boundary cells.
    """
    if cell <= 0:
        raise StructuralError("cell side must be positive")
    side = int(round(2 * half_width / cell))
    total = side * side
    z = np.asarray(coeffs, dtype=complex).reshape(-1)
    if z.size == 0:
        return RelativeAreaReport(0.0, 0, total)
    ix = np.floor((z.real + half_width) / cell).astype(np.int64)
    iy = np.floor((z.imag + half_width) / cell).astype(np.int64)
    outside = (ix < 0) | (ix >= side) | (iy < 0) | (iy >= side)
    ix = np.clip(ix, 0, side - 1)
    iy = np.clip(iy, 0, side - 1)
    visited = np.unique(ix * side + iy).size
    return RelativeAreaReport(visited / total, int(visited), total, int(outside.sum()))


def spectral_radius(w, iters=1000, seed=0):
    """Largest eigenvalue modulus of ``w`` by power iteration.

    Starts from a random complex vector and measures the average growth
    rate over the second half of the iterations, which stays correct when
    the dominant eigenvalues form a complex-conjugate pair.
    """
    w = np.asarray(w, dtype=float)
    rng = np.random.default_rng(seed)
    x = rng.normal(size=w.shape[0]) + 1j * rng.normal(size=w.shape[0])
    x /= np.linalg.norm(x)
    logs = np.empty(iters)
    for k in range(iters):
        x = w @ x
        nrm = np.linalg.norm(x)
        if nrm == 0.0 or not np.isfinite(nrm):
            return 0.0
        logs[k] = np.log(nrm)
        x /= nrm
    return float(np.exp(logs[iters // 2:].mean()))


def random_coupling(n, rho, seed=0, max_attempts=10):
    """Dense standard-normal coupling rescaled to spectral radius ``rho``.

    Returns ``(matrix, seed_used)``. A draw whose estimated spectral radius is
    zero is discarded and the next seed tried.
    """
    for attempt in range(max_attempts):
        s = seed + attempt
        base = np.random.default_rng(s).normal(size=(n, n))
        sr = spectral_radius(base, seed=s)
        if sr > 0.0:
            return base * (rho / sr), s
    raise ConvergenceError(
        f"no usable random coupling after {max_attempts} attempts", residual=0.0
    )


def rho_sweep(
    n,
    rhos,
    w=None,
    mode="scr",
    seed=0,
    threshold=AREA_THRESHOLD,
    input_scale=1.0,
    half_width=AREA_HALF_WIDTH,
    cell=AREA_CELL,
    return_coefficients=False,
):
    """Relative area of the motif spectra for each spectral radius in ``rhos``.

    ``w`` is the input sign pattern (defaults to the pi pattern). ``mode`` is
    ``"scr"`` or ``"random"``; the random baseline draws one seeded
    standard-normal matrix and rescales it to each ``rho``.
    """
    from .reservoir import pi_sign_pattern

    if mode not in ("scr", "random"):
        raise StructuralError("mode must be 'scr' or 'random'")
    rhos = [float(r) for r in rhos]
    if not rhos:
        raise StructuralError("rho grid is empty")
    if any(not 0.0 < r <= 1.0 for r in rhos):
        raise StructuralError("every rho must lie in (0, 1]")
    signs = pi_sign_pattern(n) if w is None else np.asarray(w, dtype=float)

    base = None
    if mode == "random":
        base, seed = random_coupling(n, 1.0, seed)

    reports, coeffs = [], []
    for rho in rhos:
        if mode == "scr":
            q = metric_tensor(CycleReservoir(n, rho, signs, input_scale), n)
        else:
            q = metric_tensor_general(
                rho * base, input_scale * signs, n, source={"kind": "random", "seed": seed}
            )
        basis = motif_decomposition(q, threshold)
        z = motif_fft(basis) if basis.n_m else np.zeros(0, dtype=complex)
        rep = relative_area(z, half_width, cell)
        rep.rho = rho
        rep.retained_motifs = basis.n_m
        rep.mode = mode
        reports.append(rep)
        coeffs.append(z)
    if return_coefficients:
        return reports, coeffs
    return reports


@dataclass
class AlignmentReport:
    """Per-frequency comparison of a motif basis with a Fourier basis.

    ``permutation[j]`` is the motif index matched to Fourier column ``j``
    (-1 when no motif carries that frequency).
    """

    bins: list
    cosines: dict
    min_cosine: float
    permutation: list
    motif_bins: list
    unmatched_motifs: list = field(default_factory=list)

    def to_dict(self):
        return {
            "bins": self.bins,
            "cosines": {str(k): v for k, v in self.cosines.items()},
            "min_cosine": self.min_cosine,
            "permutation": self.permutation,
            "motif_bins": self.motif_bins,
            "unmatched_motifs": self.unmatched_motifs,
        }


def dominant_bins(cols, tie_rtol=1e-6):
    """Dominant folded DFT bin (0 .. tau // 2) of each column."""
    cols = np.asarray(cols, dtype=float)
    tau = cols.shape[0]
    mag = np.abs(dft(cols, axis=0))
    half = tau // 2
    folded = mag[: half + 1].copy()
    out = []
    for j in range(cols.shape[1]):
        col = folded[:, j]
        order = np.argsort(-col, kind="stable")
        top = order[0]
        if len(order) > 1:
            second = order[1]
            if col[top] - col[second] <= tie_rtol * max(col[top], 1e-300):
                raise AmbiguityError(
                    f"motif {j}: bins {top} and {second} have equal magnitude"
                )
        out.append(int(top))
    return out


def align_motifs_to_fourier(m, f, tie_rtol=1e-6):
    """Match motifs to Fourier columns frequency by frequency.

    Each motif is assigned to the bin with the largest DFT magnitude. For
    each bin present in ``f`` the principal-angle cosines between the motifs
    and the Fourier columns of that bin are reported; a Fourier column with
    no matching motif contributes a cosine of 0.
    """
    cols = m.motifs if isinstance(m, MotifBasis) else np.asarray(m, dtype=float)
    fb = f if isinstance(f, RealFourierBasis) else None
    fmat = fb.f if fb is not None else np.asarray(f, dtype=float)
    if cols.shape[0] != fmat.shape[0]:
        raise StructuralError(
            f"window lengths differ: motifs {cols.shape[0]}, Fourier {fmat.shape[0]}"
        )
    tau = fmat.shape[0]
    if fb is not None:
        fbins = [min(b % tau, tau - b % tau) for b in fb.bins]
    else:
        fbins = dominant_bins(fmat, tie_rtol)
    mbins = dominant_bins(cols, tie_rtol)

    cosines = {}
    permutation = [-1] * fmat.shape[1]
    used = set()
    for b in sorted(set(fbins)):
        fj = [j for j, x in enumerate(fbins) if x == b]
        mj = [j for j, x in enumerate(mbins) if x == b]
        cs = principal_angles(cols[:, mj], fmat[:, fj]) if mj else np.zeros(0)
        cs = list(cs) + [0.0] * (len(fj) - len(cs))
        cosines[b] = [float(c) for c in cs]
        # greedy column matching inside the bin, largest |dot| first
        if mj:
            dots = np.abs(fmat[:, fj].T @ cols[:, mj])
            taken_f, taken_m = set(), set()
            for flat in np.argsort(-dots, axis=None):
                a, c = np.unravel_index(flat, dots.shape)
                if a in taken_f or c in taken_m:
                    continue
                permutation[fj[a]] = mj[c]
                taken_f.add(a)
                taken_m.add(c)
            used.update(mj[c] for c in taken_m)
    unmatched = [j for j in range(cols.shape[1]) if j not in used]
    allc = [c for cs in cosines.values() for c in cs]
    return AlignmentReport(
        bins=sorted(set(fbins)),
        cosines=cosines,
        min_cosine=float(min(allc)) if allc else 0.0,
        permutation=permutation,
        motif_bins=mbins,
        unmatched_motifs=unmatched,
    )


def write_sweep_csv(reports, path, comments=()):
    rows = [(r.rho, r.area, r.retained_motifs, r.visited_cells) for r in reports]
    return write_csv(path, ["rho", "area", "retained", "visited_cells"], rows, comments)


def write_coefficients_csv(coeffs, path, comments=()):
    z = np.asarray(coeffs, dtype=complex).reshape(-1)
    return write_csv(path, ["re", "im"], zip(z.real, z.imag), comments)
