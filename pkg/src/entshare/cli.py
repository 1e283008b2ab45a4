"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 I/O error, 4 non-physical data.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import blochlab, fileio, monogamy
from .measures import PartitionSpec, concurrence_wootters, measure, negativity, realignment_measure
from .qmat import NumericError
from .states import DensityMatrix, StateVector

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_UNPHYSICAL = 0, 2, 3, 4
SEED_ENV = "ENTSHARE_SEED"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    seed: int = 0
    samples: int = 0
    grid_step: float = 0.01
    output_path: str | None = None
    tolerance: float | None = None
    cuts: list[str] | None = None
    blocks: list[str] | None = None
    qubits: int = 3
    fmt: str = "json"
    general_groups: bool = False

    def __post_init__(self):
        if not 0 < self.grid_step <= 1:
            raise CliError(EXIT_INPUT, f"--step must lie in (0, 1], got {self.grid_step}")
        if self.samples < 0:
            raise CliError(EXIT_INPUT, "--samples must be nonnegative")


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def _load(cfg: RunConfig) -> StateVector | DensityMatrix:
    if not cfg.input_path:
        raise CliError(EXIT_INPUT, "--input is required")
    try:
        return fileio.load_state(cfg.input_path)
    except fileio.StateFormatError as exc:
        raise CliError(EXIT_INPUT, f"invalid state file ({exc.field}): {exc}") from None
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {cfg.input_path}: {exc.strerror or exc}") from None


def _cut(text: str, n: int) -> PartitionSpec:
    try:
        cut = PartitionSpec.parse(text)
        cut.check(n)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, f"invalid cut: {exc}") from None
    return cut


def _parse_blocks(text: str) -> tuple[int, list[tuple[int, ...]]]:
    """``"0|1,2|3,4"`` -> focus 0 with groups (1, 2) and (3, 4)."""
    try:
        parts = [tuple(int(x) for x in p.split(",") if x.strip()) for p in text.split("|")]
    except ValueError:
        raise CliError(EXIT_INPUT, f"invalid block spec {text!r}") from None
    if len(parts) < 2 or len(parts[0]) != 1 or any(not p for p in parts):
        raise CliError(EXIT_INPUT, f"block spec {text!r} must look like FOCUS|GROUP|GROUP...")
    return parts[0][0], parts[1:]


def _cut_entry(state, cut: PartitionSpec) -> dict:
    entry = {"cut": str(cut)}
    conc = None
    if (isinstance(state, StateVector) and len(cut.left) == 1) or state.dims == (2, 2):
        conc = measure(state, cut, "concurrence")
    entry["concurrence"] = conc
    entry["negativity"] = negativity(state, cut)
    entry["realignment"] = realignment_measure(state, cut)
    return entry


def cmd_measure(cfg: RunConfig) -> int:
    state = _load(cfg)
    n = len(state.dims)
    if n < 2:
        raise CliError(EXIT_INPUT, "need at least two subsystems")
    cuts = [_cut(c, n) for c in cfg.cuts] if cfg.cuts else [PartitionSpec.single(q, n) for q in range(n)]
    report = {
        "command": "measure",
        "input": cfg.input_path,
        "dims": list(state.dims),
        "kind": "pure" if isinstance(state, StateVector) else "mixed",
        "cuts": [_cut_entry(state, c) for c in cuts],
    }
    if cfg.blocks:
        if not isinstance(state, StateVector):
            raise CliError(EXIT_INPUT, "--blocks needs a pure state")
        out = []
        for spec in cfg.blocks:
            focus, groups = _parse_blocks(spec)
            for kind in ("negativity", "realignment"):
                try:
                    rep = monogamy.monogamy_partition(state, focus, groups, kind)
                except ValueError as exc:
                    raise CliError(EXIT_INPUT, f"invalid blocks {spec!r}: {exc}") from None
                if cfg.tolerance is not None:
                    rep.tolerance = cfg.tolerance
                d = rep.to_dict()
                d["theorem_form"] = sum(len(g) > 1 for g in groups) <= 1
                out.append(d)
        report["blocks"] = out
    _emit(fileio.dumps_report(report), cfg.output_path)
    return EXIT_OK


def cmd_table1(cfg: RunConfig) -> int:
    rows = monogamy.table1_rows()
    if cfg.fmt == "text":
        lines = [f"{'class':<6} {'tau_ABC':>8} {'pi_ABC':>8}   {'tau':>14} {'pi':>14}"]
        for r in rows:
            lines.append(
                f"{r['class']:<6} {r['tau_marker']:>8} {r['pi_marker']:>8}   "
                f"{fileio.format_number(r['tau_ABC']):>14} {fileio.format_number(r['pi_ABC']):>14}"
            )
        text = "\n".join(lines) + "\n"
    else:
        text = fileio.dumps_report({"command": "table1", "threshold": monogamy.TANGLE_THRESHOLD, "rows": rows})
    _emit(text, cfg.output_path)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    rows = monogamy.tau_sweep(monogamy.sweep_grid(cfg.grid_step))
    _emit(fileio.sweep_csv(rows), cfg.output_path)
    return EXIT_OK


def cmd_conjecture(cfg: RunConfig) -> int:
    if cfg.qubits < 3:
        raise CliError(EXIT_INPUT, "--qubits must be at least 3")
    kwargs = {"general_groups": cfg.general_groups}
    if cfg.tolerance is not None:
        kwargs["tolerance"] = cfg.tolerance
    summary = monogamy.conjecture_campaign(cfg.qubits, cfg.samples, cfg.seed, **kwargs)
    summary = {"command": "conjecture", **summary}
    _emit(fileio.dumps_report(summary), cfg.output_path)
    return EXIT_OK


def cmd_bloch(cfg: RunConfig) -> int:
    if not cfg.input_path:
        raise CliError(EXIT_INPUT, "--input is required")
    try:
        data = fileio.parse_correlation_csv(Path(cfg.input_path).read_text())
    except fileio.StateFormatError as exc:
        raise CliError(EXIT_INPUT, f"invalid correlation data: {exc}") from None
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {cfg.input_path}: {exc.strerror or exc}") from None
    matrix, min_eig = blochlab.assemble_checked(data)
    if min_eig < -1e-10:
        raise CliError(EXIT_UNPHYSICAL, f"assembled matrix is not positive semidefinite (min eigenvalue {min_eig:.6g})")
    rho = DensityMatrix(matrix, (2, 2))
    cut = PartitionSpec((0,), (1,))
    neg = negativity(rho, cut)
    _, spec = blochlab.m_matrix(rho)
    report = {
        "command": "bloch",
        "input": cfg.input_path,
        "min_eigenvalue": min_eig,
        "concurrence": concurrence_wootters(rho),
        "negativity": neg,
        "realignment": realignment_measure(rho, cut),
        "separable": neg <= 1e-10,
        "lambdas": spec.lambdas,
        "bounds": blochlab.bracket_check(rho),
        "marginals_mixed": data.marginals_mixed,
    }
    if data.marginals_mixed:
        report["realignment_closed_form"] = blochlab.realignment_comparison(data)
        report["negativity_closed_form"] = blochlab.negativity_comparison(data)
    _emit(fileio.dumps_report(report), cfg.output_path)
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    state = _load(cfg)
    if not isinstance(state, StateVector) or state.dims != (2, 2, 2):
        raise CliError(EXIT_INPUT, "classify needs a pure three-qubit state")
    rep = monogamy.slocc_report(state)
    rep["pi_ABC"] = monogamy.residual_pi(state)
    _emit(fileio.dumps_report({"command": "classify", "input": cfg.input_path, **rep}), cfg.output_path)
    return EXIT_OK


COMMANDS = {
    "measure": cmd_measure,
    "table1": cmd_table1,
    "sweep": cmd_sweep,
    "conjecture": cmd_conjecture,
    "bloch": cmd_bloch,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="state JSON file (or correlation CSV for bloch)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--samples", type=int, default=0)
    common.add_argument("--step", type=float, default=0.01, help="grid step for sweep")
    common.add_argument("--tolerance", type=float, default=None, help="override the inequality tolerance")
    common.add_argument("--cut", action="append", help='bipartition such as "0:12" or "0:1,2"')
    common.add_argument("--blocks", action="append", help='block partition such as "0|1,2|3,4"')

    p = argparse.ArgumentParser(prog="entshare", description="Entanglement measures and monogamy checks for qubit states.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("measure", parents=[common], help="concurrence, negativity and realignment across cuts")
    t = sub.add_parser("table1", parents=[common], help="residual entanglement per SLOCC class")
    t.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
    sub.add_parser("sweep", parents=[common], help="tau_N / tau_R over the GHZ-W mixture (CSV)")
    c = sub.add_parser("conjecture", parents=[common], help="block monogamy campaign on Haar samples")
    c.add_argument("--qubits", type=int, default=3)
    c.add_argument("--general-groups", action="store_true", help="also evaluate multi-qubit groups (exploratory)")
    sub.add_parser("bloch", parents=[common], help="measures and bounds from correlation data")
    sub.add_parser("classify", parents=[common], help="SLOCC class of a pure three-qubit state")
    return p


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(EXIT_INPUT, f"${SEED_ENV} must be an integer") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            input_path=args.input,
            seed=args.seed if args.seed is not None else _default_seed(),
            samples=args.samples,
            grid_step=args.step,
            output_path=args.out,
            tolerance=args.tolerance,
            cuts=args.cut,
            blocks=args.blocks,
            qubits=getattr(args, "qubits", 3),
            fmt=getattr(args, "fmt", "json"),
            general_groups=getattr(args, "general_groups", False),
        )
        return COMMANDS[cfg.command](cfg)
    except CliError as exc:
        print(f"entshare {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except NumericError as exc:
        print(f"entshare {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL


if __name__ == "__main__":
    sys.exit(main())
