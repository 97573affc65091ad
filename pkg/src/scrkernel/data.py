"""Univariate time-series ingestion, splitting and synthetic signals."""

import csv
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .errors import ColumnError, DataError, StructuralError
from .io import fmt_float, write_json

__all__ = [
    "TimeSeriesDataset",
    "SPLIT_PRESETS",
    "load_csv",
    "write_series_csv",
    "split_standardize",
    "synth",
]

# Month-based splits as fractions of the provided file.
SPLIT_PRESETS = {
    "ett-12-4-4": (12 / 20, 4 / 20, 4 / 20),
    "ecl-15-3-4": (15 / 22, 3 / 22, 4 / 22),
}


def load_csv(path, column):
    """Read one numeric column of a headed CSV file, in file order.

    ``column`` is a header name or a 0-based index. Unparsable or non-finite
    cells raise :class:`DataError` naming the data row (0-based, header
    excluded).
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise DataError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if isinstance(column, int) or (isinstance(column, str) and column.isdigit() and column not in header):
            col = int(column)
            if not 0 <= col < len(header):
                raise ColumnError(
                    f"{path}: column index {col} out of range; available: {header}"
                )
        else:
            if column not in header:
                raise ColumnError(f"{path}: no column {column!r}; available: {header}")
            col = header.index(column)
        values = []
        for row_no, row in enumerate(reader):
            if not row:
                continue
            try:
                x = float(row[col])
            except (IndexError, ValueError):
                cell = row[col] if col < len(row) else "<missing>"
                raise DataError(f"{path}: row {row_no}: cannot parse {cell!r}") from None
            if not np.isfinite(x):
                raise DataError(f"{path}: row {row_no}: non-finite value {row[col]!r}")
            values.append(x)
    if not values:
        raise DataError(f"{path}: no data rows")
    return np.array(values)


def write_series_csv(path, values, column="value"):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(f"{column}\n")
        for v in np.asarray(values, dtype=float):
            fh.write(fmt_float(v) + "\n")
    return path


@dataclass(frozen=True)
class TimeSeriesDataset:
    """Standardised series with contiguous train/validation/test ranges.

    ``values`` are already standardised with the train-slice mean and
    population standard deviation (``mean``, ``std``).
    """

    name: str
    values: np.ndarray
    train: tuple
    validation: tuple
    test: tuple
    mean: float
    std: float
    source: str = ""
    seed: int | None = None

    def slice(self, which):
        lo, hi = {"train": self.train, "val": self.validation,
                  "validation": self.validation, "test": self.test}[which]
        return self.values[lo:hi]

    def manifest(self):
        return {
            "name": self.name,
            "length": int(len(self.values)),
            "split": {"train": list(self.train), "validation": list(self.validation),
                      "test": list(self.test)},
            "lengths": {"train": self.train[1] - self.train[0],
                        "validation": self.validation[1] - self.validation[0],
                        "test": self.test[1] - self.test[0]},
            "mean": self.mean,
            "std": self.std,
            "std_convention": "population",
            "standardization_fit": "train",
            "source": self.source,
            "seed": self.seed,
        }

    def write_manifest(self, path):
        return write_json(path, self.manifest())


def split_standardize(raw, fractions, min_length=0, name="series", source="", seed=None):
    """Split by floor of cumulative fractions and standardise on the train slice.

    ``fractions`` may be a preset name from :data:`SPLIT_PRESETS`. Each slice
    must hold at least ``min_length`` points (typically ``tau + horizon``).
    """
    if isinstance(fractions, str):
        try:
            fractions = SPLIT_PRESETS[fractions]
        except KeyError:
            raise StructuralError(
                f"unknown split preset {fractions!r}; known: {sorted(SPLIT_PRESETS)}"
            ) from None
    fr = [float(f) for f in fractions]
    if len(fr) != 3 or any(f <= 0 for f in fr) or sum(fr) > 1 + 1e-12:
        raise StructuralError("fractions must be three positive numbers summing to <= 1")
    raw = np.asarray(raw, dtype=float).reshape(-1)
    if not np.all(np.isfinite(raw)):
        raise DataError("series contains non-finite values")
    n = raw.size
    cuts = np.floor(np.cumsum(fr) * n + 1e-9).astype(int)
    cuts = np.minimum(cuts, n)
    ranges = [(0, int(cuts[0])), (int(cuts[0]), int(cuts[1])), (int(cuts[1]), int(cuts[2]))]
    for label, (lo, hi) in zip(("train", "validation", "test"), ranges):
        if hi - lo < max(min_length, 1):
            raise DataError(
                f"{label} slice has {hi - lo} points; need at least {max(min_length, 1)}"
            )
    train = raw[ranges[0][0]:ranges[0][1]]
    mean = float(train.mean())
    std = float(train.std())
    if not std > 0:
        raise DataError("train slice has zero standard deviation")
    return TimeSeriesDataset(
        name, (raw - mean) / std, *ranges, mean=mean, std=std, source=str(source), seed=seed
    )


def synth(kind, length, seed=0, **params):
    """Deterministic synthetic series.

    ``sum-of-sines``
        ``x_t = sum_i a_i sin(2 pi f_i t) + noise * e_t``; params
        ``frequencies`` (cycles per step), ``amplitudes``, ``noise``.
    ``noisy-ar``
        ``x_t = coef x_(t-1) + e_t`` from ``x_(-1) = 0``; params ``coef``,
        ``noise`` (std of ``e_t``).
    ``square``
        ``x_t = sign(sin(2 pi f t + 1e-9)) + noise * e_t``; params
        ``frequency``, ``noise``.

    ``e_t`` is standard normal from ``numpy.random.default_rng(seed)``.
    """
    if length < 1:
        raise StructuralError("length must be >= 1")
    rng = np.random.default_rng(seed)
    t = np.arange(length, dtype=float)
    if kind == "sum-of-sines":
        freqs = np.atleast_1d(params.get("frequencies", (1 / 24, 1 / 168, 1 / 7.5)))
        amps = np.atleast_1d(params.get("amplitudes", np.ones(len(freqs))))
        if amps.size != freqs.size:
            raise StructuralError("amplitudes and frequencies differ in length")
        noise = params.get("noise", 0.0)
        x = np.sin(2 * np.pi * np.outer(t, freqs)) @ amps
        if noise:
            x = x + noise * rng.standard_normal(length)
        return x
    if kind == "noisy-ar":
        coef = params.get("coef", 0.9)
        eps = params.get("noise", 1.0) * rng.standard_normal(length)
        x = np.empty(length)
        prev = 0.0
        for i in range(length):
            prev = coef * prev + eps[i]
            x[i] = prev
        return x
    if kind == "square":
        f = params.get("frequency", 1 / 24)
        noise = params.get("noise", 0.0)
        x = np.sign(np.sin(2 * np.pi * f * t + 1e-9))
        if noise:
            x = x + noise * rng.standard_normal(length)
        return x
    raise StructuralError(f"unknown synthetic kind {kind!r}")
