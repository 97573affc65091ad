"""Simple cycle reservoirs and their linear state recursion.

A simple cycle reservoir (SCR) couples its ``n`` units along a single ring:
the coupling is ``rho * C`` with ``C`` the canonical cyclic shift, and the
scalar input enters through ``w = input_scale * sign_pattern`` with a
``{-1, +1}`` sign pattern.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DataError, StructuralError

__all__ = [
    "CycleReservoir",
    "StateTrajectory",
    "cycle_matrix",
    "pi_hex_digits",
    "pi_sign_pattern",
    "drive",
    "feature_map",
    "feature_matrix",
]

# First 64 fractional hex digits of pi (256 bits).
PI_HEX_CHECK = "243F6A8885A308D313198A2E03707344A4093822299F31D0082EFA98EC4E6C89"


def cycle_matrix(n):
    """Full-cycle permutation matrix: ones on the subdiagonal and at (0, n-1).

    Acting on a vector it shifts entries down by one, ``(C a)_k = a_{k-1 mod n}``.
    """
    if n < 1:
        raise StructuralError("cycle_matrix needs n >= 1")
    c = np.zeros((n, n))
    c[0, n - 1] = 1.0
    c[np.arange(1, n), np.arange(n - 1)] = 1.0
    return c


def _bbp_series(j, d):
    # fractional part of sum_k 16^(d-k) / (8k + j)
    s = 0.0
    for k in range(d + 1):
        den = 8 * k + j
        s = (s + pow(16, d - k, den) / den) % 1.0
    k = d + 1
    term = 1.0
    while term > 1e-17:
        term = 16.0 ** (d - k) / (8 * k + j)
        s += term
        k += 1
    return s % 1.0


def _bbp_hex_digit(pos):
    """Hex digit of pi at fractional position ``pos`` (0-based)."""
    x = (
        4 * _bbp_series(1, pos)
        - 2 * _bbp_series(4, pos)
        - _bbp_series(5, pos)
        - _bbp_series(6, pos)
    ) % 1.0
    return int(16 * x)


@lru_cache(maxsize=1)
def _verify_bbp():
    got = "".join("%X" % _bbp_hex_digit(i) for i in range(len(PI_HEX_CHECK)))
    if got != PI_HEX_CHECK:
        raise RuntimeError(f"BBP self-check failed: {got} != {PI_HEX_CHECK}")
    return True


def pi_hex_digits(count):
    """First ``count`` fractional hex digits of pi as a string."""
    _verify_bbp()
    head = PI_HEX_CHECK[:count]
    tail = "".join("%X" % _bbp_hex_digit(i) for i in range(len(head), count))
    return head + tail


def pi_sign_pattern(n):
    """Sign pattern from the fractional binary expansion of pi.

    Bit ``b_i`` (most significant first, integer part ``11.`` excluded)
    maps 1 -> +1 and 0 -> -1.
    """
    if n < 1:
        raise StructuralError("pi_sign_pattern needs n >= 1")
    digits = pi_hex_digits(-(-n // 4))
    bits = "".join(format(int(h, 16), "04b") for h in digits)[:n]
    return np.array([1.0 if b == "1" else -1.0 for b in bits])


@dataclass(frozen=True)
class CycleReservoir:
    """Linear SCR ``x_t = rho C x_{t-1} + w c_t``.

    Parameters
    ----------
    n : int
        State dimension.
    rho : float
        Spectral radius, in (0, 1].
    sign_pattern : array_like
        Vector of +-1 of length ``n``.
    input_scale : float
        ``r_in``; the input weights are ``input_scale * sign_pattern``.
    """

    n: int
    rho: float
    sign_pattern: np.ndarray = field(repr=False)
    input_scale: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise StructuralError("reservoir needs n >= 1")
        if not 0.0 < self.rho <= 1.0:
            raise StructuralError(f"rho must lie in (0, 1], got {self.rho}")
        sp = np.asarray(self.sign_pattern, dtype=float).reshape(-1)
        if sp.shape != (self.n,):
            raise StructuralError(
                f"sign pattern has length {sp.size}, expected {self.n}"
            )
        if not np.all(np.abs(sp) == 1.0):
            raise StructuralError("sign pattern entries must be +-1")
        sp.setflags(write=False)
        object.__setattr__(self, "sign_pattern", sp)

    @classmethod
    def from_pi(cls, n, rho=1.0, input_scale=1.0):
        return cls(n, rho, pi_sign_pattern(n), input_scale)

    @classmethod
    def random_signs(cls, n, rho=1.0, input_scale=1.0, seed=None):
        rng = np.random.default_rng(seed)
        return cls(n, rho, rng.choice([-1.0, 1.0], size=n), input_scale)

    @property
    def input_weights(self):
        return self.input_scale * self.sign_pattern

    @property
    def coupling(self):
        return self.rho * cycle_matrix(self.n)

    def step(self, x):
        """Apply the coupling: ``rho * C @ x`` without forming ``C``."""
        return self.rho * np.roll(x, 1, axis=0)

    def describe(self):
        return {
            "n": self.n,
            "rho": self.rho,
            "input_scale": self.input_scale,
            "sign_pattern": [int(s) for s in self.sign_pattern],
        }


@dataclass(frozen=True)
class StateTrajectory:
    states: np.ndarray  # shape (T, n)
    initial_state: np.ndarray

    @property
    def last_state(self):
        if len(self.states) == 0:
            return self.initial_state
        return self.states[-1]


def drive(r, inputs, x0=None):
    """Run ``x_t = W x_{t-1} + w c_t`` over a scalar input sequence."""
    inputs = np.asarray(inputs, dtype=float).reshape(-1)
    if not np.all(np.isfinite(inputs)):
        bad = int(np.flatnonzero(~np.isfinite(inputs))[0])
        raise DataError(f"non-finite input at index {bad}")
    x = np.zeros(r.n) if x0 is None else np.asarray(x0, dtype=float).copy()
    if x.shape != (r.n,):
        raise StructuralError(f"initial state must have length {r.n}")
    x_init = x.copy()
    w = r.input_weights
    states = np.empty((len(inputs), r.n))
    for t, c in enumerate(inputs):
        x = r.step(x) + w * c
        states[t] = x
    return StateTrajectory(states, x_init)


def feature_map(r, u):
    """Reservoir state reached from zero after reading the window ``u``.

    Equals ``sum_j u_j W^(tau-j) w``; ``u[-1]`` is the most recent sample.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.size == 0:
        raise StructuralError("feature_map needs a window of length >= 1")
    w = r.input_weights
    x = np.zeros(r.n)
    for c in u:
        x = r.step(x) + w * c
    return x


def feature_matrix(r, tau):
    """Matrix ``Phi`` (n x tau) with ``feature_map(r, u) == Phi @ u``.

    Column ``j`` is ``W^(tau-1-j) w``.
    """
    if tau < 1:
        raise StructuralError("tau must be >= 1")
    cols = np.empty((r.n, tau))
    v = r.input_weights.copy()
    for j in range(tau - 1, -1, -1):
        cols[:, j] = v
        v = r.step(v)
    return cols
