"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .closedforms import FIGURE_SERIES, figure_curves
from .config import DEFAULT, Tolerances
from .correlate import joint_probabilities
from .errors import NumericalError, UsageError
from .inequalities import enhancement_domain, optimize_chsh, pair_correlator
from .spin import KS_INVERTED_LABELS, KS_LABELS, Direction, Spin, as_spin, spin_labels
from .states import (
    check_uniqueness,
    clebsch_gordan_singlet,
    density,
    four_qubit_singlet,
    total_spin_squared,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("curve", "singlet", "verify", "chsh-scan", "enhance", "probe")


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = 42
    fmt: str = "json"
    out: Path | None = None
    degrees: bool = False
    tolerances: Tolerances = DEFAULT
    options: dict = field(default_factory=dict)


# formatting --------------------------------------------------------------------

def _csv_float(x: float, digits: int = 12) -> str:
    return f"{float(x):.{digits}g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps_json(obj) -> str:
    # repr-based floats round-trip exactly (at most 17 significant digits)
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        cfg.out.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write {cfg.out}: {exc.strerror or exc}") from exc


# argument parsing helpers ---------------------------------------------------------

def _angle(text: str, degrees: bool) -> float:
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"not an angle: {text!r}") from None
    if not math.isfinite(v):
        raise UsageError(f"angle must be finite: {text!r}")
    return math.radians(v) if degrees else v


def parse_direction(text: str, degrees: bool = False) -> Direction:
    """``"theta"`` or ``"theta,phi"``."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) not in (1, 2):
        raise UsageError(f"direction must be 'theta' or 'theta,phi', got {text!r}")
    theta = _angle(parts[0], degrees)
    phi = _angle(parts[1], degrees) if len(parts) == 2 else 0.0
    return Direction(theta, phi)


def parse_labels(text: str | None, spin: Spin):
    """Named label set (``spin``, ``ks``, ``ks-inverted``, ``pm``) or a comma list in ascending m.

    With no labels, qubits get ``pm`` (outcomes -1, +1) and higher spins get ``spin``.
    """
    if text is None:
        text = "pm" if spin.two_j == 1 else "spin"
    if text == "spin":
        return spin_labels(spin)
    if text in ("ks", "ks-inverted"):
        if spin.two_j != 2:
            raise UsageError(f"{text} labels need j = 1")
        return KS_LABELS if text == "ks" else KS_INVERTED_LABELS
    if text == "pm":
        if spin.two_j != 1:
            raise UsageError("pm labels need j = 1/2")
        return (-1.0, 1.0)
    try:
        labels = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"labels must be numbers, got {text!r}") from None
    if len(labels) != spin.dim:
        raise UsageError(f"j = {spin.j} needs {spin.dim} labels, got {len(labels)}")
    return labels


def parse_tolerance(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise UsageError(f"tolerance override must be NAME=VALUE, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise UsageError(f"tolerance value must be a number, got {value!r}") from None


def _spin_arg(text: str) -> Spin:
    try:
        return as_spin(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"j must be a positive multiple of 1/2, got {text!r}") from None


def _state(name: str, j: str | None):
    if name == "singlet":
        return clebsch_gordan_singlet(_spin_arg(j or "1/2"))
    if name == "bell":
        return clebsch_gordan_singlet(Spin(1))
    if name in ("four1", "four2"):
        return four_qubit_singlet(int(name[-1]))
    raise UsageError(f"unknown state {name!r}")


# commands -------------------------------------------------------------------------

def cmd_curve(cfg: RunConfig) -> int:
    figure, samples = cfg.options["figure"], cfg.options["samples"]
    if samples < 2:
        raise UsageError("--samples must be at least 2")
    if figure not in FIGURE_SERIES:
        raise UsageError("--figure must be 1 or 2")
    data = figure_curves(figure, np.linspace(0.0, math.pi, samples))
    cols = ["theta", *FIGURE_SERIES[figure]]
    if cfg.degrees:
        data["theta"] = np.degrees(data["theta"])
    if cfg.fmt == "json":
        _emit(cfg, dumps_json({"figure": figure, "columns": cols,
                               "rows": [[data[c][i] for c in cols] for i in range(samples)]}))
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for i in range(samples):
        # abscissa at full precision so re-evaluation reproduces the series
        w.writerow([_csv_float(data["theta"][i], 17)]
                   + [_csv_float(data[c][i]) for c in cols[1:]])
    _emit(cfg, buf.getvalue())
    return EXIT_OK


def _amplitude_rows(psi):
    rows = []
    for flat, a in enumerate(psi.amplitudes):
        if abs(a) <= 1e-15:
            continue
        idx = np.unravel_index(flat, psi.dims)
        ms = [(d - 1) / 2 - i for d, i in zip(psi.dims, idx)]
        rows.append((ms, a))
    return rows


def cmd_singlet(cfg: RunConfig) -> int:
    opts = cfg.options
    psi = _state(opts["state"], opts.get("j"))
    rows = _amplitude_rows(psi)
    record = {
        "name": psi.name,
        "dims": list(psi.dims),
        "norm": psi.norm,
        "total_spin_squared": total_spin_squared(psi),
        "amplitudes": [{"m": ms, "re": a.real, "im": a.imag} for ms, a in rows],
    }
    if psi.n_particles == 2:
        rep = check_uniqueness(psi, samples=opts["samples"], seed=cfg.seed)
        record["uniqueness_max_violation"] = rep.max_violation
    if cfg.fmt == "json":
        _emit(cfg, dumps_json(record))
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"m{k + 1}" for k in range(psi.n_particles)] + ["re", "im"])
    for ms, a in rows:
        w.writerow([_csv_float(m) for m in ms] + [_csv_float(a.real), _csv_float(a.imag)])
    _emit(cfg, buf.getvalue())
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    opts = cfg.options
    if opts["trials"] < 1:
        raise UsageError("--trials must be at least 1")
    errata = verify_mod.load_errata(opts["errata"]) if opts.get("errata") else None
    try:
        report = verify_mod.run_verification(trials=opts["trials"], seed=cfg.seed,
                                             filter=opts.get("filter"),
                                             tol=cfg.tolerances.oracle, errata=errata)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if opts.get("write_errata"):
        verify_mod.write_errata(opts["write_errata"], report, verify_mod.analytic_errata())
    _emit(cfg, dumps_json(report.to_record()))
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_chsh_scan(cfg: RunConfig) -> int:
    opts = cfg.options
    state = _state(opts["state"], opts.get("j"))
    if state.n_particles == 4:
        if opts["state"] != "four2":
            raise UsageError("pairwise CHSH needs the product singlet four2")
        correlator = pair_correlator(state, pair=(0, 1), fixed=None)
        result = optimize_chsh(correlator=correlator, method=opts["method"], grid=opts["grid"],
                               budget=opts["budget"], full_angles=opts["full_angles"])
    else:
        spin = Spin(state.dims[0] - 1)
        la = parse_labels(opts.get("labels_a"), spin)
        lb = parse_labels(opts.get("labels_b") or opts.get("labels_a"), spin)
        result = optimize_chsh(state, la, lb, method=opts["method"], grid=opts["grid"],
                               budget=opts["budget"], full_angles=opts["full_angles"])
    record = result.to_record()
    record.pop("runtime")  # keep output byte-stable
    record.update(state=state.name, seed=cfg.seed)
    if cfg.degrees:
        record["argmax"] = {k: [math.degrees(v) for v in pair]
                            for k, pair in record["argmax"].items()}
    _emit(cfg, dumps_json(record))
    return EXIT_OK


def cmd_enhance(cfg: RunConfig) -> int:
    rep = enhancement_domain(step=cfg.options["step"])
    _emit(cfg, dumps_json(rep.to_record()))
    return EXIT_OK


def cmd_probe(cfg: RunConfig) -> int:
    opts = cfg.options
    psi = _state(opts["state"], opts.get("j"))
    if not opts.get("dirs"):
        raise UsageError("--dir is required (one per particle)")
    dirs = [parse_direction(d, cfg.degrees) for d in opts["dirs"]]
    if len(dirs) == 1:
        dirs = dirs * psi.n_particles
    if len(dirs) != psi.n_particles:
        raise UsageError(f"{psi.n_particles} particles but {len(dirs)} directions")
    spins = [Spin(d - 1) for d in psi.dims]
    table = joint_probabilities(density(psi), dirs, spins, tol=cfg.tolerances)
    labels = None
    if opts.get("labels"):
        labels = [parse_labels(opts["labels"], s) for s in spins]
    if cfg.fmt == "json":
        record = {"state": psi.name,
                  "directions": [[d.theta, d.phi] for d in dirs],
                  "rows": [{"m": list(m), "p": p} for m, p in table.items()]}
        if labels is not None:
            record["correlation"] = table.expectation(labels, spins)
        _emit(cfg, dumps_json(record))
        return EXIT_OK
    lines = []
    for m, p in table.items():
        outcome = ",".join(_fmt_m(x) for x in m)
        lines.append(f"P({outcome}) = {p:.6f}")
    if labels is not None:
        lines.append(f"E = {table.expectation(labels, spins):.6f}")
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def _fmt_m(m: float) -> str:
    if float(m).is_integer():
        return f"{int(m):+d}" if m else "0"
    return f"{'+' if m > 0 else '-'}{int(abs(m) * 2)}/2"


HANDLERS = {
    "curve": cmd_curve,
    "singlet": cmd_singlet,
    "verify": cmd_verify,
    "chsh-scan": cmd_chsh_scan,
    "enhance": cmd_enhance,
    "probe": cmd_probe,
}


# parser ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", type=Path, help="write to this file instead of stdout")
    common.add_argument("--degrees", action="store_true", help="angles in degrees at the boundary")
    common.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE",
                        help="override a numerical tolerance, e.g. oracle=1e-10")

    p = _Parser(prog="plasticity", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("curve", parents=[common], help="figure data as CSV/JSON")
    c.add_argument("--figure", type=int, choices=(1, 2), required=True)
    c.add_argument("--samples", type=int, default=181)

    s = sub.add_parser("singlet", parents=[common], help="print singlet amplitudes")
    s.add_argument("--state", choices=("singlet", "bell", "four1", "four2"), default="singlet")
    s.add_argument("--j", default=None, help="spin for --state singlet, e.g. 3/2")
    s.add_argument("--samples", type=int, default=50, help="directions for the uniqueness check")

    v = sub.add_parser("verify", parents=[common], help="trace engine versus closed forms")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--filter", default=None, help="case key or closed-form id")
    v.add_argument("--errata", type=Path, default=None, help="errata file (default: shipped)")
    v.add_argument("--write-errata", type=Path, default=None)

    h = sub.add_parser("chsh-scan", parents=[common], help="search for the largest CHSH value")
    h.add_argument("--state", choices=("singlet", "bell", "four2"), default="bell")
    h.add_argument("--j", default=None)
    h.add_argument("--labels-a", default=None, help="spin | ks | ks-inverted | pm | comma list")
    h.add_argument("--labels-b", default=None)
    h.add_argument("--grid", type=int, default=60)
    h.add_argument("--method", choices=("grid", "refine"), default="refine")
    h.add_argument("--budget", type=int, default=10**6)
    h.add_argument("--full-angles", action="store_true", help="search all eight angles")

    e = sub.add_parser("enhance", parents=[common], help="measure where the enhanced form wins")
    e.add_argument("--step", type=float, default=1e-3)

    q = sub.add_parser("probe", parents=[common], help="joint outcome probabilities")
    q.add_argument("--state", choices=("singlet", "bell", "four1", "four2"), default="bell")
    q.add_argument("--j", default=None)
    q.add_argument("--dir", dest="dirs", action="append", default=[],
                   metavar="THETA[,PHI]", help="one per particle, or one shared by all")
    q.add_argument("--labels", default=None, help="also print the labeled correlation")
    return p


_DEFAULT_FORMAT = {"curve": "csv", "singlet": "json", "verify": "json", "chsh-scan": "json",
                   "enhance": "json", "probe": "csv"}
_COMMON = {"command", "seed", "format", "out", "degrees", "tolerance"}


def make_config(args: argparse.Namespace) -> RunConfig:
    overrides = dict(parse_tolerance(t) for t in args.tolerance)
    try:
        tol = DEFAULT.with_overrides(**overrides)
    except TypeError as exc:
        raise UsageError(f"unknown tolerance: {exc}") from None
    options = {k: v for k, v in vars(args).items() if k not in _COMMON}
    return RunConfig(args.command, args.seed, args.format or _DEFAULT_FORMAT[args.command],
                     args.out, args.degrees, tol, options)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse: --help or bad arguments
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"plasticity: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"plasticity: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"plasticity: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
