"""JSON command-line front end.

Every subcommand reads one JSON document (``--input`` is a path or inline
JSON) and writes one JSON document to ``--output`` or stdout. Exit codes:
0 success / unique, 2 bad input, 3 non-unique family, 4 infeasible.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import interp, misp
from .cmv import CmvError, VerblunskyParams, assemble_cmv, eigenvector, eigenvector_residual_bound, spectrum, szego_forward, weyl, weyl_for
from .poly import poly_to_json

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAMILY = 3
EXIT_INFEASIBLE = 4


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    csv: str | None = None
    seed: int = 0
    trials: int = 100
    n: int | None = None
    m: int | None = None
    tol_rank: float | None = None
    tol_degen: float | None = None
    verbose: bool = False

    def __post_init__(self):
        for name in ("tol_rank", "tol_degen"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise CliError("validation", f"--{name.replace('_', '-')} must be positive")
        if self.trials < 0:
            raise CliError("validation", "--trials must be non-negative")


def _cj(c) -> list[float]:
    c = complex(c)
    return [c.real, c.imag]


def _load(cfg: RunConfig) -> dict:
    if cfg.input is None:
        raise CliError("validation", "--input is required")
    text = cfg.input
    path = Path(text)
    try:
        if not text.lstrip().startswith(("{", "[")) and path.exists():
            text = path.read_text()
    except OSError:
        pass
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("parse", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError("parse", "top-level JSON value must be an object")
    return data


def _emit(cfg: RunConfig, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _params(data: dict) -> VerblunskyParams:
    try:
        return VerblunskyParams.from_json(data)
    except (KeyError, TypeError) as exc:
        raise CliError("validation", f"expected {{'alphas': [[re, im], ...]}}: {exc}") from exc


def cmd_spectrum(cfg: RunConfig) -> int:
    params = _params(_load(cfg))
    _emit(cfg, {"zetas": [_cj(z) for z in spectrum(params)]})
    return EXIT_OK


def cmd_szego(cfg: RunConfig) -> int:
    system = szego_forward(_params(_load(cfg)))
    _emit(cfg, {"phis": [poly_to_json(p) for p in system.phis], "phi_tilde": poly_to_json(system.phi_tilde)})
    return EXIT_OK


def cmd_weyl(cfg: RunConfig) -> int:
    """With ``m`` (in the JSON or ``--m``) use the left block of a full matrix; else ``alphas`` is the prefix."""
    data = _load(cfg)
    m = data.get("m", cfg.m)
    try:
        alphas = [complex(*a) for a in data["alphas"]]
    except (KeyError, TypeError) as exc:
        raise CliError("validation", f"expected {{'alphas': [[re, im], ...]}}: {exc}") from exc
    w = weyl_for(VerblunskyParams(alphas), int(m)) if m is not None else weyl(alphas)
    _emit(cfg, {"numerator": poly_to_json(w.numerator), "denominator": poly_to_json(w.denominator)})
    return EXIT_OK


def cmd_interp(cfg: RunConfig) -> int:
    data = _load(cfg)
    try:
        problem = interp.InterpolationProblem.from_json(data)
    except (KeyError, TypeError) as exc:
        raise CliError("validation", f"malformed interpolation problem: {exc}") from exc
    rtol = cfg.tol_rank if cfg.tol_rank is not None else interp.RANK_RTOL
    pair = interp.generators(problem, rtol)
    _emit(cfg, pair.to_json())
    return EXIT_OK


def cmd_misp(cfg: RunConfig) -> int:
    inp = misp.MispInput.from_json(_load(cfg))
    kwargs = {}
    if cfg.tol_degen is not None:
        kwargs["degen_rtol"] = cfg.tol_degen
    if cfg.tol_rank is not None:
        kwargs["rank_rtol"] = cfg.tol_rank
    out = misp.solve_misp(inp, **kwargs)
    _emit(cfg, out.to_json())
    return {"unique": EXIT_OK, "family": EXIT_FAMILY, "infeasible": EXIT_INFEASIBLE}[out.tag]


CSV_FIELDS = ["trial", "selection", "outcome", "max_error", "r1_at_0_modulus"]


def cmd_roundtrip(cfg: RunConfig) -> int:
    if cfg.n is None or cfg.m is None:
        raise CliError("validation", "roundtrip needs --n and --m")
    report = misp.roundtrip_experiment(cfg.n, cfg.m, cfg.seed, cfg.trials)
    _emit(cfg, report)
    csv_path = cfg.csv or (str(Path(cfg.output).with_suffix(".csv")) if cfg.output else None)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            for row in report["rows"]:
                writer.writerow({k: ("" if row[k] is None else repr(row[k]) if isinstance(row[k], float) else row[k]) for k in CSV_FIELDS})
    return EXIT_OK


def cmd_eigvec(cfg: RunConfig) -> int:
    data = _load(cfg)
    params = _params(data)
    try:
        zeta = complex(*data["zeta"])
    except (KeyError, TypeError) as exc:
        raise CliError("validation", f"expected 'zeta': [re, im]: {exc}") from exc
    x = eigenvector(params, zeta)
    resid = float(np.linalg.norm(zeta * x - assemble_cmv(params) @ x))
    _emit(cfg, {"x": [_cj(v) for v in x], "residual": resid, "bound": eigenvector_residual_bound(params, zeta)})
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "szego": cmd_szego,
    "weyl": cmd_weyl,
    "interp": cmd_interp,
    "misp": cmd_misp,
    "roundtrip": cmd_roundtrip,
    "eigvec": cmd_eigvec,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmvmisp", description="CMV spectra and the mixed inverse spectral problem")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", help="JSON file path or inline JSON")
        p.add_argument("--output", help="write JSON here instead of stdout")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--tol-rank", type=float)
        p.add_argument("--tol-degen", type=float)
        p.add_argument("--verbose", "-v", action="store_true")
        if name == "roundtrip":
            p.add_argument("--csv", help="per-run CSV path (default: next to --output)")
    return parser


def _fail(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return EXIT_INVALID


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        cfg = RunConfig(**vars(args))
        return COMMANDS[cfg.command](cfg)
    except CliError as exc:
        return _fail(exc.kind, str(exc))
    except (misp.MispInputError, interp.ProblemError, CmvError, ValueError) as exc:
        return _fail("validation", str(exc))
    except ArithmeticError as exc:
        return _fail("numerical", str(exc))


if __name__ == "__main__":
    sys.exit(main())
