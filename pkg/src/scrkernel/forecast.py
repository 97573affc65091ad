"""Direct multi-horizon forecasting with motif-space and reservoir features.

Three model kinds share one ridge readout:

``rmm-scr``
    projections of each look-back window onto SCR motifs,
``rmm-fourier``
    projections onto a real Fourier basis,
``scr-state``
    the state of a linear SCR after reading the window from the zero state.

Per-motif coefficients of the motif-machine feature map are not learned
separately: under a linear readout any rescaling of a feature is undone by
the corresponding readout weight.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import __version__
from .errors import StructuralError
from .io import write_csv, write_json
from .kernel import MotifBasis, metric_tensor, motif_decomposition, rmm_features
from .numerics import ridge_solve
from .reservoir import CycleReservoir, feature_matrix, pi_sign_pattern
from .spectral import RealFourierBasis, periodic_extension_basis, real_fourier_basis

__all__ = [
    "WindowSet",
    "RidgeReadout",
    "ModelSpec",
    "ForecastReport",
    "make_windows",
    "windows_from_array",
    "features",
    "fit",
    "predict",
    "default_models",
    "compare",
    "relative_deviation",
    "DEFAULTS",
]

KINDS = ("rmm-scr", "rmm-fourier", "scr-state")

DEFAULTS = {
    "n": 97,
    "rho": 1.0,
    "tau": 194,
    "horizon": 168,
    "alpha": 1e-3,
    "r_in": 0.05,
}


@dataclass(frozen=True)
class WindowSet:
    """Sliding (window, target) pairs with stride 1.

    ``inputs[k] = series[o : o + tau]`` and
    ``targets[k] = series[o + tau : o + tau + horizon]`` for ``o = origins[k]``.
    """

    tau: int
    horizon: int
    inputs: np.ndarray
    targets: np.ndarray
    origins: np.ndarray
    slice_name: str = ""

    def __len__(self):
        return len(self.origins)


def windows_from_array(series, tau, horizon, offset=0, slice_name=""):
    series = np.asarray(series, dtype=float).reshape(-1)
    if tau < 1 or horizon < 1:
        raise StructuralError("tau and horizon must be >= 1")
    need = tau + horizon
    if series.size < need:
        raise StructuralError(
            f"slice {slice_name or ''} has {series.size} points; "
            f"need at least tau + horizon = {need}"
        )
    count = series.size - need + 1
    view = np.lib.stride_tricks.sliding_window_view(series, need)[:count]
    return WindowSet(
        tau,
        horizon,
        np.ascontiguousarray(view[:, :tau]),
        np.ascontiguousarray(view[:, tau:]),
        offset + np.arange(count),
        slice_name,
    )


def make_windows(d, which, tau, horizon):
    """All windows lying entirely inside one split of a dataset."""
    lo = {"train": d.train, "val": d.validation, "validation": d.validation,
          "test": d.test}[which][0]
    return windows_from_array(d.slice(which), tau, horizon, offset=lo, slice_name=which)


def _kind_of(basis):
    if isinstance(basis, MotifBasis):
        return "rmm-scr"
    if isinstance(basis, RealFourierBasis):
        return "rmm-fourier"
    if isinstance(basis, CycleReservoir):
        return "scr-state"
    raise StructuralError(f"unsupported basis type {type(basis).__name__}")


def features(kind, inputs, basis):
    """Feature matrix (windows x features) for one model kind."""
    if kind not in KINDS:
        raise StructuralError(f"unknown model kind {kind!r}")
    actual = _kind_of(basis)
    rmm = {"rmm-scr", "rmm-fourier"}
    if (kind in rmm) != (actual in rmm):
        raise StructuralError(f"model kind {kind} cannot use a {type(basis).__name__}")
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    tau = inputs.shape[1]
    if kind == "scr-state":
        return inputs @ feature_matrix(basis, tau).T
    return rmm_features(basis, inputs)


@dataclass(frozen=True)
class RidgeReadout:
    weights: np.ndarray  # features x horizon
    bias: np.ndarray  # horizon
    alpha: float
    feature_kind: str
    tau: int

    def apply(self, feats):
        return feats @ self.weights + self.bias


def fit(kind, windows, basis, alpha=DEFAULTS["alpha"]):
    """Ridge readout from window features to all horizon steps at once.

    Features and targets are centred on their training means; the bias
    restores the means.
    """
    x = features(kind, windows.inputs, basis)
    y = windows.targets
    xm = x.mean(axis=0)
    ym = y.mean(axis=0)
    b = ridge_solve(x - xm, y - ym, alpha)
    return RidgeReadout(b, ym - xm @ b, alpha, kind, windows.tau)


def predict(readout, windows, basis):
    if windows.tau != readout.tau:
        raise StructuralError(
            f"window length {windows.tau} does not match readout tau {readout.tau}"
        )
    return readout.apply(features(readout.feature_kind, windows.inputs, basis))


def relative_deviation(a, b, floor_rtol=1e-6):
    """Largest entrywise ``|a - b| / max(|a|, |b|, floor)``.

    ``floor = floor_rtol * max(|a|, |b|)`` keeps predictions that happen to
    sit near zero from dominating the ratio.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise StructuralError(f"shapes differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    scale = np.maximum(np.abs(a), np.abs(b))
    floor = floor_rtol * float(scale.max())
    if floor == 0.0:
        return 0.0
    return float(np.max(np.abs(a - b) / np.maximum(scale, floor)))


@dataclass(frozen=True)
class ModelSpec:
    label: str
    kind: str
    basis: object


def default_models(
    n=DEFAULTS["n"],
    rho=DEFAULTS["rho"],
    tau=DEFAULTS["tau"],
    r_in=DEFAULTS["r_in"],
    sign_pattern=None,
    fourier="periodic",
):
    """The three comparison models.

    ``fourier`` picks the Fourier basis when ``tau`` is a multiple of ``n``:
    ``"periodic"`` tiles the ``n``-point basis (same span as the unit-radius
    SCR motifs), ``"literal"`` samples frequencies ``k / tau`` directly.
    """
    signs = pi_sign_pattern(n) if sign_pattern is None else np.asarray(sign_pattern, float)
    res = CycleReservoir(n, rho, signs, r_in)
    motifs = motif_decomposition(metric_tensor(res, tau), 0.0)
    if fourier == "periodic":
        if tau % n:
            raise StructuralError("periodic Fourier basis needs tau to be a multiple of n")
        fb = periodic_extension_basis(n, tau // n)
    elif fourier == "literal":
        fb = real_fourier_basis(tau, n)
    else:
        raise StructuralError("fourier must be 'periodic' or 'literal'")
    state_res = CycleReservoir(n, 1.0, signs, r_in)
    return [
        ModelSpec("rmm-scr", "rmm-scr", motifs),
        ModelSpec("rmm-fourier", "rmm-fourier", fb),
        ModelSpec("scr-state", "scr-state", state_res),
    ]


@dataclass
class ForecastReport:
    labels: list
    mse: dict
    differences: dict
    config: dict
    n_features: dict = field(default_factory=dict)
    predictions: dict = field(default_factory=dict, repr=False)
    targets: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self):
        return {
            "version": __version__,
            "config": self.config,
            "models": [
                {"label": k, "mse": self.mse[k], "n_features": self.n_features.get(k)}
                for k in self.labels
            ],
            "abs_mse_differences": self.differences,
            "notes": [
                "direct multi-horizon ridge; features/targets centred on train means",
                "motif coefficients absorbed into the linear readout",
                "scr-state features: state after reading each window from zero",
            ],
        }

    def write_json(self, path):
        return write_json(path, self.to_dict())

    def write_csv(self, path, comments=()):
        rows = [(k, self.mse[k], self.n_features.get(k, "")) for k in self.labels]
        return write_csv(path, ["model", "test_mse", "n_features"], rows, comments)

    def write_predictions(self, path, comments=()):
        """Per-window dump: one row per (model, window, step)."""
        rows = []
        for label in self.labels:
            p = self.predictions[label]
            for k in range(p.shape[0]):
                for h in range(p.shape[1]):
                    rows.append((label, k, h + 1, p[k, h], self.targets[k, h]))
        return write_csv(path, ["model", "window", "step", "prediction", "target"], rows, comments)


def compare(models, d, tau, horizon, alpha=DEFAULTS["alpha"], config=None):
    """Fit every model on the train split and score MSE on the test split."""
    train = make_windows(d, "train", tau, horizon)
    test = make_windows(d, "test", tau, horizon)
    labels, mse, preds, nfeat = [], {}, {}, {}
    for spec in models:
        readout = fit(spec.kind, train, spec.basis, alpha)
        p = predict(readout, test, spec.basis)
        label = spec.label
        while label in mse:
            label += "'"
        labels.append(label)
        mse[label] = float(np.mean((p - test.targets) ** 2))
        preds[label] = p
        nfeat[label] = int(readout.weights.shape[0])
    diffs = {f"{a}|{b}": abs(mse[a] - mse[b]) for a, b in combinations(labels, 2)}
    cfg = {"tau": tau, "horizon": horizon, "alpha": alpha, "dataset": d.name}
    cfg.update(config or {})
    return ForecastReport(labels, mse, diffs, cfg, nfeat, preds, test.targets)
