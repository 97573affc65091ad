"""
Motifs at unit radius are Fourier vectors
=========================================

At spectral radius 1 with window length ``n`` the metric tensor is
circulant, so its eigenvectors are sampled sinusoids. Paired weights give
two-dimensional eigenspaces, so individual motifs are only defined up to a
rotation inside each pair. Comparison is therefore done per weight class
with principal angles.
"""

import numpy as np

from scrkernel import (
    CycleReservoir,
    align_motifs_to_fourier,
    canonicalize_symmetry,
    metric_tensor,
    motif_decomposition,
    real_fourier_basis,
    verify_harmonic,
)
from scrkernel.structure import fourier_weights

n = 97
r = CycleReservoir.from_pi(n)
m = motif_decomposition(metric_tensor(r, n), include_null=True)

# Weights are the squared DFT magnitudes of the input weights.
h = verify_harmonic(m, r)
print(f"min principal-angle cosine {h.min_cosine:.15f}")
print(f"weight vs |DFT(w)|^2 rel error {h.max_weight_rel_error:.2e}")
print("largest |DFT(w)|^2:", np.round(np.sort(fourier_weights(r))[::-1][:5], 4))

# Rotate each pair onto one palindromic and one anti-palindromic motif.
canon, census = canonicalize_symmetry(m)
print(f"symmetric {census.n_symmetric}, skew {census.n_skew}")

# Then every motif can be matched to a Fourier column by its dominant bin.
rep = align_motifs_to_fourier(canon, real_fourier_basis(n, n))
print("min cosine after matching:", f"{rep.min_cosine:.15f}")
print("first matched motifs per Fourier column:", rep.permutation[:9])
