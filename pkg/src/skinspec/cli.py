"""Batch command-line surface: spectral curves, winding regions,
pseudospectrum grids, skin-effect reports and the verification suite.

    skinspec sigma-det|winding-region|pseudospectrum|skin-report|verify
             --config <path> --out <dir> [--samples N] [--resolution R] [--seed S]

Configs are TOML (JSON accepted) naming either a symbol or a resonator
chain, inline or by path.  Every figure is regenerated from the CSV files
the command just wrote, so identical configs give byte-identical outputs.
Exit codes: 0 ok, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import plotting
from .acceptance import run_all
from .linalg import eigvals_dense
from .resonator import ResonatorChain, capacitance_matrix, capacitance_to_ktoeplitz, skin_effect_report
from .spectra import (
    GridSpec,
    classify_grid,
    default_grid,
    pseudospectrum_grid,
    sigma_det_sample,
)
from .symbol import SymbolCoeffs, truncation

DEFAULT_EPSILON_LEVELS = [1e-2, 1e-5]


class InputError(Exception):
    """Malformed config or input data; maps to exit code 2."""


@dataclass
class RunConfig:
    out_dir: Path
    symbol: SymbolCoeffs | None = None
    chain: ResonatorChain | None = None
    samples: int = 512
    resolution: int = 201
    seed: int = 0
    epsilon_levels: list[float] = field(default_factory=lambda: list(DEFAULT_EPSILON_LEVELS))
    truncation_size: int = 50
    grid: GridSpec | None = None

    def __post_init__(self):
        if self.resolution < 32:
            raise InputError("resolution must be at least 32")
        if self.samples < 64:
            raise InputError("samples must be at least 64")
        if not self.epsilon_levels:
            raise InputError("need at least one epsilon level")
        if any(e <= 0 for e in self.epsilon_levels):
            raise InputError("epsilon levels must be positive")
        if sorted(self.epsilon_levels, reverse=True) != list(self.epsilon_levels):
            raise InputError("epsilon levels must be sorted descending")

    def require_symbol(self) -> SymbolCoeffs:
        if self.symbol is not None:
            return self.symbol
        if self.chain is not None:
            return capacitance_to_ktoeplitz(self.chain).coeffs
        raise InputError("this command needs a symbol or a chain in the config")

    def require_chain(self) -> ResonatorChain:
        if self.chain is None:
            raise InputError("this command needs a chain in the config")
        return self.chain


def _load_document(path: Path) -> dict:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON config {path}: {exc}") from exc
    try:
        return tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"malformed TOML config {path}: {exc}") from exc


def _symbol_from_value(value, base: Path) -> SymbolCoeffs:
    try:
        if isinstance(value, str):
            return SymbolCoeffs.from_json((base / value).read_text())
        if isinstance(value, dict):
            return SymbolCoeffs.from_json(json.dumps(value))
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad symbol input: {exc}") from exc
    raise InputError("symbol must be a path or an inline table")


def _chain_from_value(value, base: Path) -> ResonatorChain:
    try:
        if isinstance(value, str):
            return ResonatorChain.from_json((base / value).read_text())
        if isinstance(value, dict):
            return ResonatorChain.from_json(json.dumps(value))
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad chain input: {exc}") from exc
    raise InputError("chain must be a path or an inline table")


def load_config(path: Path, args: argparse.Namespace) -> RunConfig:
    doc = _load_document(path)
    base = path.parent
    symbol = _symbol_from_value(doc["symbol"], base) if "symbol" in doc else None
    chain = _chain_from_value(doc["chain"], base) if "chain" in doc else None
    grid = None
    if "grid" in doc:
        g = doc["grid"]
        try:
            grid = GridSpec(
                re_min=float(g["re_min"]),
                re_max=float(g["re_max"]),
                im_min=float(g["im_min"]),
                im_max=float(g["im_max"]),
                n_re=int(g.get("resolution", doc.get("resolution", 201))),
                n_im=int(g.get("resolution", doc.get("resolution", 201))),
            )
        except (KeyError, ValueError) as exc:
            raise InputError(f"bad grid table: {exc}") from exc
    try:
        cfg = RunConfig(
            out_dir=Path(args.out),
            symbol=symbol,
            chain=chain,
            samples=int(args.samples or doc.get("samples", 512)),
            resolution=int(args.resolution or doc.get("resolution", 201)),
            seed=int(args.seed if args.seed is not None else doc.get("seed", 0)),
            epsilon_levels=[float(e) for e in doc.get("epsilon_levels", DEFAULT_EPSILON_LEVELS)],
            truncation_size=int(doc.get("truncation", 50)),
            grid=grid,
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad config value: {exc}") from exc
    return cfg


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: Path, header: list[str], rows) -> Path:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [_fmt(v) if isinstance(v, float) else str(v) for v in row]
            )
    return path


def _read_csv(path: Path) -> list[dict[str, str]]:
    with path.open(newline="") as fh:
        return list(csv.DictReader(fh))


def _grid_for(cfg: RunConfig, s: SymbolCoeffs) -> GridSpec:
    if cfg.grid is not None:
        return cfg.grid
    return default_grid(s, samples=min(cfg.samples, 256), resolution=cfg.resolution)


def write_sigma_det_csv(cfg: RunConfig, s: SymbolCoeffs, name: str = "sigma_det.csv") -> Path:
    sample = sigma_det_sample(s, cfg.samples)
    rows = []
    for m, theta in enumerate(sample.thetas):
        for branch in range(s.k):
            v = sample.values[m, branch]
            rows.append((float(theta), branch, float(v.real), float(v.imag)))
    return _write_csv(cfg.out_dir / name, ["theta", "branch", "re", "im"], rows)


def cmd_sigma_det(cfg: RunConfig) -> list[Path]:
    s = cfg.require_symbol()
    return [write_sigma_det_csv(cfg, s)]


def region_svg_from_files(region_csv: Path, sigma_csv: Path) -> str:
    region_rows = [
        (float(r["re"]), float(r["im"]), r["label"], int(r["winding"]))
        for r in _read_csv(region_csv)
    ]
    curve = [(float(r["re"]), float(r["im"])) for r in _read_csv(sigma_csv)]
    return plotting.region_svg(region_rows, curve)


def cmd_winding_region(cfg: RunConfig) -> list[Path]:
    s = cfg.require_symbol()
    grid = _grid_for(cfg, s)
    classified = classify_grid(s, grid)
    rows = [
        (re, im, label, wind)
        for re, im, label, wind, _ in classified.rows()
    ]
    region_csv = _write_csv(
        cfg.out_dir / "region.csv", ["re", "im", "label", "winding"], rows
    )
    sigma_csv = write_sigma_det_csv(cfg, s)
    svg_path = cfg.out_dir / "region.svg"
    svg_path.write_text(region_svg_from_files(region_csv, sigma_csv))
    return [region_csv, sigma_csv, svg_path]


def pseudospectrum_svg_from_files(
    sigma_min_csv: Path, eig_csv: Path, levels: list[float]
) -> str:
    rows = _read_csv(sigma_min_csv)
    xs = sorted({float(r["re"]) for r in rows})
    ys = sorted({float(r["im"]) for r in rows})
    z = np.empty((len(ys), len(xs)))
    x_index = {x: i for i, x in enumerate(xs)}
    y_index = {y: j for j, y in enumerate(ys)}
    for r in rows:
        z[y_index[float(r["im"])], x_index[float(r["re"])]] = float(r["sigma_min"])
    eigs = [(float(r["re"]), float(r["im"])) for r in _read_csv(eig_csv)]
    return plotting.contour_svg(xs, ys, z, levels, eigs)


def cmd_pseudospectrum(cfg: RunConfig) -> list[Path]:
    if cfg.chain is not None:
        mat = capacitance_matrix(cfg.chain).astype(complex)
        s = capacitance_to_ktoeplitz(cfg.chain).coeffs
    else:
        s = cfg.require_symbol()
        mat = truncation(s, cfg.truncation_size)
    grid = _grid_for(cfg, s)
    base = classify_grid(s, grid)
    full = pseudospectrum_grid(mat, grid, base=base)
    rows = [
        (re, im, label, wind, sig)
        for re, im, label, wind, sig in full.rows()
    ]
    sigma_min_csv = _write_csv(
        cfg.out_dir / "sigma_min.csv",
        ["re", "im", "label", "winding", "sigma_min"],
        rows,
    )
    eig_rows = [(float(v.real), float(v.imag)) for v in eigvals_dense(mat)]
    eig_csv = _write_csv(cfg.out_dir / "eigenvalues.csv", ["re", "im"], eig_rows)
    summary = {
        "region_cell_counts": full.region_counts(),
        "epsilon_level_crossing_cells": full.level_crossing_counts(cfg.epsilon_levels),
        "epsilon_levels": cfg.epsilon_levels,
    }
    summary_path = cfg.out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    svg_path = cfg.out_dir / "pseudospectrum.svg"
    svg_path.write_text(
        pseudospectrum_svg_from_files(sigma_min_csv, eig_csv, cfg.epsilon_levels)
    )
    return [sigma_min_csv, eig_csv, summary_path, svg_path]


def modes_svg_from_file(profiles_csv: Path) -> str:
    rows = [
        (int(r["mode"]), int(r["index"]), float(r["cell_max_site"]), r["is_zero"] == "1")
        for r in _read_csv(profiles_csv)
    ]
    return plotting.modes_svg(rows)


def cmd_skin_report(cfg: RunConfig) -> list[Path]:
    chain = cfg.require_chain()
    report = skin_effect_report(chain, samples=cfg.samples)
    mode_rows = [
        (
            float(m.lam.real),
            float(m.lam.imag),
            m.winding,
            m.region,
            m.argmax_site,
            float(m.fitted_rho),
        )
        for m in report.modes
    ]
    modes_csv = _write_csv(
        cfg.out_dir / "modes.csv",
        ["lambda_re", "lambda_im", "winding", "region", "argmax_site", "fitted_rho"],
        mode_rows,
    )
    profile_rows = []
    for m in report.modes:
        vec = report.eigenvectors[:, m.index]
        for site in range(chain.n):
            v = vec[site]
            cell = site // chain.k + 1
            profile_rows.append(
                (
                    m.index,
                    site + 1,
                    float(v.real),
                    float(v.imag),
                    cell,
                    float(abs(v)),
                    1 if m.is_zero_mode else 0,
                )
            )
    profiles_csv = _write_csv(
        cfg.out_dir / "profiles.csv",
        ["mode", "index", "re", "im", "cell", "cell_max_site", "is_zero"],
        profile_rows,
    )
    report_path = cfg.out_dir / "report.json"
    report_path.write_text(report.to_json() + "\n")
    svg_path = cfg.out_dir / "modes.svg"
    svg_path.write_text(modes_svg_from_file(profiles_csv))
    return [modes_csv, profiles_csv, report_path, svg_path]


def cmd_verify(cfg: RunConfig) -> int:
    results = run_all()
    payload = []
    for r in results:
        print(r.line())
        payload.append(
            {
                "criterion": r.number,
                "name": r.name,
                "passed": r.passed,
                "elapsed_seconds": round(r.elapsed, 3),
                "budget_seconds": r.budget,
                "detail": r.detail,
            }
        )
    (cfg.out_dir / "verify.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    return 0 if all(r.passed for r in results) else 1


_COMMANDS = {
    "sigma-det": cmd_sigma_det,
    "winding-region": cmd_winding_region,
    "pseudospectrum": cmd_pseudospectrum,
    "skin-report": cmd_skin_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skinspec",
        description="spectra, winding regions, pseudospectra and skin-effect reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in [*_COMMANDS, "verify"]:
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name != "verify"), help="TOML or JSON config")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--resolution", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify" and args.config is None:
            cfg = RunConfig(out_dir=Path(args.out))
        else:
            cfg = load_config(Path(args.config), args)
            cfg.out_dir = Path(args.out)
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "verify":
            return cmd_verify(cfg)
        written = _COMMANDS[args.command](cfg)
        for path in written:
            print(path)
        return 0
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
