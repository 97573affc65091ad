"""Command-line entry point.

Subcommands: ``motifs``, ``verify``, ``area-sweep``, ``forecast`` and
``fourier-sample``. Every output file carries the run configuration and the
library version. Exit codes: 0 success, 1 verification failure,
2 configuration error, 3 IO/data error.
"""

import argparse
import json
import sys
from dataclasses import dataclass, asdict, field
from pathlib import Path

import numpy as np

from . import __version__
from .data import SPLIT_PRESETS, load_csv, split_standardize, synth
from .errors import DataError, ScrKernelError, StructuralError
from .forecast import DEFAULTS, compare, default_models
from .io import write_csv, write_json
from .kernel import metric_tensor, motif_decomposition, write_motif_csv
from .reservoir import CycleReservoir, pi_sign_pattern
from .spectral import (
    motif_fft,
    rho_sweep,
    sample_fourier_column,
    write_coefficients_csv,
)
from .structure import theorem_suite

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 97
    rho: float = 1.0
    rho_grid: list = field(default_factory=list)
    tau: int | None = None
    threshold: float = 0.0
    data: str | None = None
    column: str = "OT"
    splits: list = field(default_factory=lambda: [0.6, 0.2, 0.2])
    preset: str | None = None
    horizon: int = DEFAULTS["horizon"]
    alpha: float = DEFAULTS["alpha"]
    r_in: float | None = None
    seed: int = 0
    mode: str = "scr"
    out: str = "."
    synth: str | None = None
    length: int = 4000
    noise: float = 0.3
    fourier: str = "periodic"
    samples: int = 500
    basis_column: int = 0
    dump_coefficients: bool = False
    dump_predictions: bool = False

    def validate(self):
        if self.n < 1:
            raise ConfigError(f"--n must be >= 1 (got {self.n})")
        for r in [self.rho, *self.rho_grid]:
            if not 0.0 < r <= 1.0:
                raise ConfigError(f"spectral radius must lie in (0, 1] (got {r})")
        if self.tau is not None and self.tau < 1:
            raise ConfigError("--tau must be >= 1")
        if not 0.0 <= self.threshold < 1.0:
            raise ConfigError("--threshold must lie in [0, 1)")
        if self.horizon < 1:
            raise ConfigError("--horizon must be >= 1")
        if self.alpha < 0:
            raise ConfigError("--alpha must be >= 0")
        if self.r_in is not None and self.r_in <= 0:
            raise ConfigError("--r-in must be positive")
        if self.preset is not None and self.preset not in SPLIT_PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; known: {sorted(SPLIT_PRESETS)}")
        if len(self.splits) != 3 or any(s <= 0 for s in self.splits) or sum(self.splits) > 1 + 1e-12:
            raise ConfigError("--splits needs three positive fractions summing to <= 1")
        if self.mode not in ("scr", "random", "both"):
            raise ConfigError("--mode must be scr, random or both")
        if self.command == "forecast" and not (self.data or self.synth):
            raise ConfigError("forecast needs --data or --synth")
        return self

    def echo(self):
        return dict(asdict(self), version=__version__)


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=97, help="reservoir size")
    common.add_argument("--rho", type=float, default=1.0, help="spectral radius")
    common.add_argument("--tau", type=int, default=None, help="window length (default n, forecast 2n)")
    common.add_argument("--threshold", type=float, default=0.0, help="relative motif-weight threshold")
    common.add_argument("--r-in", dest="r_in", type=float, default=None, help="input scale")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=".", help="output directory (must exist)")

    p = argparse.ArgumentParser(prog="scrkernel", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("motifs", parents=[common], help="write motifs.csv and motifs_fft.csv")
    sub.add_parser("verify", parents=[common], help="run the structural checks, write verify.json")

    sw = sub.add_parser("area-sweep", parents=[common], help="relative area over a rho grid")
    sw.add_argument("--rho-grid", dest="rho_grid", type=_floats, default=None)
    sw.add_argument("--mode", default="scr", help="scr, random or both")
    sw.add_argument("--dump-coefficients", action="store_true")

    fc = sub.add_parser("forecast", parents=[common], help="compare the three forecasters")
    fc.add_argument("--data", default=None, help="CSV file with a header row")
    fc.add_argument("--column", default="OT")
    fc.add_argument("--splits", type=_floats, default=[0.6, 0.2, 0.2])
    fc.add_argument("--preset", default=None, help=f"one of {sorted(SPLIT_PRESETS)}")
    fc.add_argument("--horizon", type=int, default=DEFAULTS["horizon"])
    fc.add_argument("--alpha", type=float, default=DEFAULTS["alpha"])
    fc.add_argument("--synth", default=None, help="sum-of-sines, noisy-ar or square")
    fc.add_argument("--length", type=int, default=4000)
    fc.add_argument("--noise", type=float, default=0.3)
    fc.add_argument("--fourier", default="periodic", choices=["periodic", "literal"])
    fc.add_argument("--dump-predictions", action="store_true")

    fs = sub.add_parser("fourier-sample", parents=[common], help="sample one Fourier column densely")
    fs.add_argument("--samples", type=int, default=500)
    fs.add_argument("--basis-column", dest="basis_column", type=int, default=0)
    return p


def _config_from_args(args):
    fields = {k: v for k, v in vars(args).items() if v is not None and k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    if args.command == "area-sweep" and not cfg.rho_grid:
        cfg.rho_grid = [cfg.rho]
    return cfg.validate()


def _out_dir(cfg):
    out = Path(cfg.out)
    if not out.is_dir():
        raise FileNotFoundError(f"output directory does not exist: {out}")
    return out


def _comments(cfg):
    return [f"config: {json.dumps(cfg.echo(), sort_keys=True)}"]


def _reservoir(cfg, default_r_in=1.0):
    r_in = default_r_in if cfg.r_in is None else cfg.r_in
    return CycleReservoir(cfg.n, cfg.rho, pi_sign_pattern(cfg.n), r_in)


def cmd_motifs(cfg):
    out = _out_dir(cfg)
    r = _reservoir(cfg)
    tau = cfg.tau or cfg.n
    basis = motif_decomposition(metric_tensor(r, tau), cfg.threshold)
    write_motif_csv(basis, out / "motifs.csv", _comments(cfg))
    mags = np.abs(motif_fft(basis)) if basis.n_m else np.zeros((tau, 0))
    write_csv(out / "motifs_fft.csv", basis.weights, mags, _comments(cfg))
    return EXIT_OK


def cmd_verify(cfg):
    r = _reservoir(cfg)
    checks = theorem_suite(r)
    failed = [c["check"] for c in checks if not c["passed"] and not c.get("informational")]
    payload = {"config": cfg.echo(), "passed": not failed, "failures": failed, "checks": checks}
    out = Path(cfg.out)
    if out.is_dir():
        write_json(out / "verify.json", payload)
    else:
        raise FileNotFoundError(f"output directory does not exist: {out}")
    for c in checks:
        tag = "PASS" if c["passed"] else ("EXPECTED-FAIL" if c.get("informational") else "FAIL")
        print(f"{tag:13s} {c['check']}  dev={c['deviation']:.3e}")
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_area_sweep(cfg):
    out = _out_dir(cfg)
    signs = pi_sign_pattern(cfg.n)
    r_in = 1.0 if cfg.r_in is None else cfg.r_in
    modes = ["scr", "random"] if cfg.mode == "both" else [cfg.mode]
    results = {}
    for mode in modes:
        reps, coeffs = rho_sweep(
            cfg.n, cfg.rho_grid, signs, mode=mode, seed=cfg.seed,
            threshold=cfg.threshold or 1e-2, input_scale=r_in, return_coefficients=True,
        )
        results[mode] = reps
        if cfg.dump_coefficients:
            for rep, z in zip(reps, coeffs):
                write_coefficients_csv(z, out / f"coeffs_{mode}_rho{rep.rho:.17g}.csv", _comments(cfg))
    header = ["rho", "area", "retained"]
    if "random" in results and "scr" in results:
        header += ["random_area", "random_retained"]
    elif "random" in results:
        header = ["rho", "random_area", "random_retained"]
    rows = []
    for i, rho in enumerate(cfg.rho_grid):
        row = [rho]
        for mode in modes:
            row += [results[mode][i].area, results[mode][i].retained_motifs]
        rows.append(row)
    write_csv(out / "area.csv", header, rows, _comments(cfg))
    return EXIT_OK


def cmd_forecast(cfg):
    out = _out_dir(cfg)
    tau = cfg.tau or 2 * cfg.n
    if cfg.data:
        column = int(cfg.column) if cfg.column.isdigit() else cfg.column
        raw = load_csv(cfg.data, column)
        name, source = Path(cfg.data).stem, cfg.data
    else:
        raw = synth(cfg.synth, cfg.length, seed=cfg.seed, noise=cfg.noise)
        name, source = cfg.synth, f"synth:{cfg.synth}"
    splits = cfg.preset or cfg.splits
    d = split_standardize(raw, splits, min_length=tau + cfg.horizon, name=name,
                          source=source, seed=cfg.seed)
    r_in = DEFAULTS["r_in"] if cfg.r_in is None else cfg.r_in
    models = default_models(cfg.n, cfg.rho, tau, r_in, fourier=cfg.fourier)
    rep = compare(models, d, tau, cfg.horizon, cfg.alpha, config=cfg.echo())
    rep.config["dataset_manifest"] = d.manifest()
    rep.write_json(out / "forecast.json")
    rep.write_csv(out / "forecast.csv", _comments(cfg))
    if cfg.dump_predictions:
        rep.write_predictions(out / "predictions.csv", _comments(cfg))
    for label in rep.labels:
        print(f"{label:12s} test MSE {rep.mse[label]:.6g}")
    return EXIT_OK


def cmd_fourier_sample(cfg):
    out = _out_dir(cfg)
    tau = cfg.tau or cfg.n
    dense = sample_fourier_column(tau, cfg.basis_column, cfg.samples, n=cfg.n if cfg.n <= tau else None)
    coarse = sample_fourier_column(tau, cfg.basis_column, tau, n=cfg.n if cfg.n <= tau else None)
    t_dense = np.arange(cfg.samples) * tau / cfg.samples
    write_csv(out / "fourier_dense.csv", ["t", "value"], zip(t_dense, dense), _comments(cfg))
    write_csv(out / "fourier_coarse.csv", ["t", "value"], zip(np.arange(tau), coarse), _comments(cfg))
    return EXIT_OK


COMMANDS = {
    "motifs": cmd_motifs,
    "verify": cmd_verify,
    "area-sweep": cmd_area_sweep,
    "forecast": cmd_forecast,
    "fourier-sample": cmd_fourier_sample,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[cfg.command](cfg)
    except (OSError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (StructuralError, ScrKernelError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
