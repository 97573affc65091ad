"""
Reservoir kernel and its motifs
===============================

A linear simple cycle reservoir maps a window ``u`` to the state it reaches
from zero. Inner products of those states define a kernel on raw windows,
``k(u, v) = u^T Q v``. The eigenvectors of ``Q`` are the motifs.
"""

import numpy as np

from scrkernel import CycleReservoir, feature_map, kernel_eval, metric_tensor, motif_decomposition

# The small worked instance: three neurons, unit radius, input signs (1, 1, -1).
r = CycleReservoir(3, 1.0, [1.0, 1.0, -1.0])
q = metric_tensor(r, 3)
print("Q =\n", q.q)

# Two identical weights and a smaller one; the pair is a cosine/sine couple.
m = motif_decomposition(q)
print("weights:", np.round(m.weights, 12))
print("motifs (columns):\n", np.round(m.motifs, 6))

# The kernel is the state inner product.
rng = np.random.default_rng(0)
u, v = rng.normal(size=3), rng.normal(size=3)
print("u^T Q v          =", kernel_eval(q, u, v))
print("<phi(u), phi(v)> =", feature_map(r, u) @ feature_map(r, v))

# A larger reservoir with the sign pattern read off the binary digits of pi.
# Below unit radius the older samples are damped and the weights spread out.
for rho in (0.9, 1.0):
    big = motif_decomposition(metric_tensor(CycleReservoir.from_pi(97, rho), 97))
    top = ", ".join(f"{w:.3f}" for w in big.weights[:6])
    print(f"rho={rho}: {big.n_m} motifs, largest weights {top}")
