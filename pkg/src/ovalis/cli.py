"""Command-line front end.

Exit codes: 0 success, 1 error, 2 ambiguous classification.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import curveplot, periods, symmetrize
from .exact import IntMatrix, det, smith_normal_form
from .mod2 import HMatrix, Pattern, RealPoints
from .symplectic import SymplecticMap

log = logging.getLogger("ovalis")

EXIT_OK, EXIT_ERROR, EXIT_AMBIGUOUS = 0, 1, 2
TOL_ENV = "OVALIS_TOL"


class CliError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    tol: float = symmetrize.DEFAULT_TOL
    residual_tol: float = symmetrize.DEFAULT_RESIDUAL_TOL
    real_points: RealPoints = RealPoints.UNKNOWN
    seed: int = 0
    grid: int = curveplot.DEFAULT_GRID
    window: Optional[tuple[float, float, float, float]] = None
    output: Optional[str] = None
    format: Optional[str] = None
    verbosity: int = 0
    genus: Optional[int] = None
    h_spec: Optional[str] = None
    jobs: Optional[int] = None

    def __post_init__(self):
        if not self.tol > 0 or not self.residual_tol > 0:
            raise CliError("tolerances must be positive")
        if self.grid < 8:
            raise CliError("grid must be at least 8")


def default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return symmetrize.DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise CliError(f"{TOL_ENV}={raw!r} is not a number") from None


def parse_window(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from None
    if len(vals) != 4 or not (vals[1] > vals[0] and vals[3] > vals[2]):
        raise argparse.ArgumentTypeError("window must be xmin,xmax,ymin,ymax with xmin<xmax, ymin<ymax")
    return vals


def parse_h_spec(text: str, g: int) -> HMatrix:
    """``zero``, ``diag:d`` or ``blocks:b``."""
    name, _, count = text.partition(":")
    try:
        if name == "zero" and not count:
            return HMatrix.zero(g)
        if name == "diag":
            return HMatrix.diag_ones(g, int(count))
        if name == "blocks":
            return HMatrix.blocks(g, int(count))
    except ValueError as exc:
        raise CliError(f"H pattern {text!r} is inconsistent with g={g}: {exc}") from None
    raise CliError(f"unknown H pattern {text!r} (expected zero, diag:d or blocks:b)")


def h_from_json(doc: dict, g: int) -> HMatrix:
    return HMatrix(g, Pattern(doc["pattern"]), int(doc.get("count", 0)))


def _write(text: str, output: Optional[str]) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _load(path: str, fmt: Optional[str]) -> periods.PeriodPair:
    if path == "-":
        return periods.load_periods(sys.stdin.read(), format=fmt or "json")
    return periods.load_periods_file(path, format=fmt)


# -- classify -----------------------------------------------------------------

def _classify_one(path: str, cfg: CliConfig) -> tuple[int, dict]:
    try:
        p = _load(path, cfg.format)
        res = symmetrize.symmetrize(p, cfg.real_points, tol=cfg.tol, residual_tol=cfg.residual_tol)
    except symmetrize.StageError as exc:
        return EXIT_ERROR, {"input": path, "error": str(exc), "stage": exc.stage}
    except (OSError, ValueError) as exc:
        return EXIT_ERROR, {"input": path, "error": f"[load] {type(exc).__name__}: {exc}", "stage": "load"}
    doc = {"input": path, **symmetrize.result_to_json(res, p.label)}
    return (EXIT_AMBIGUOUS if res.ambiguous else EXIT_OK), doc


def _combine(codes: Sequence[int]) -> int:
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    return EXIT_AMBIGUOUS if EXIT_AMBIGUOUS in codes else EXIT_OK


def _period_files(directory: Path) -> list[Path]:
    return sorted(f for f in directory.iterdir()
                  if f.suffix in (".json", ".csv") and not f.name.endswith(".report.json"))


def cmd_classify(cfg: CliConfig) -> int:
    if len(cfg.inputs) == 1 and not Path(cfg.inputs[0]).is_dir():
        code, doc = _classify_one(cfg.inputs[0], cfg)
        if code == EXIT_ERROR:
            print(f"error: {doc['error']}", file=sys.stderr)
            return code
        _write(_dumps(doc), cfg.output)
        if code == EXIT_AMBIGUOUS:
            types = ", ".join(f"({t['g']},{t['k']},{t['a']})" for t in doc["types"])
            print(f"ambiguous: candidates {types}; pass --real-points yes/no", file=sys.stderr)
        return code

    files: list[Path] = []
    for item in cfg.inputs:
        path = Path(item)
        files.extend(_period_files(path) if path.is_dir() else [path])
    if not files:
        raise CliError("no period files found")
    outdir = Path(cfg.output) if cfg.output else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)

    def work(f: Path) -> tuple[Path, int, dict]:
        code, doc = _classify_one(str(f), cfg)
        doc["exit_code"] = code
        if outdir:
            (outdir / f"{f.stem}.report.json").write_text(_dumps(doc))
        return f, code, doc

    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        results = list(pool.map(work, files))
    for f, code, doc in results:
        summary = doc.get("error") or " ".join(f"({t['g']},{t['k']},{t['a']})" for t in doc["types"])
        print(f"{f.name}: exit {code}: {summary}", file=sys.stderr)
    if not outdir:
        _write(_dumps({str(f): doc for f, _, doc in results}), None)
    return _combine([code for _, code, _ in results])


# -- verify -------------------------------------------------------------------

def _derive_h(m: SymplecticMap, r: IntMatrix) -> Optional[HMatrix]:
    """H such that ``M R M^-1 == [[I, 0], [H, -I]]``, if M R M^-1 has that shape."""
    g = m.g
    t = m.matrix() @ r @ m.inverse().matrix()
    try:
        return HMatrix.from_matrix(t[g:, :g].mod(2))
    except ValueError:
        return None


def cmd_verify(cfg: CliConfig) -> int:
    if len(cfg.inputs) != 2:
        raise CliError("verify takes a period file and a map file")
    p = _load(cfg.inputs[0], cfg.format)
    doc = json.loads(Path(cfg.inputs[1]).read_text())
    m = SymplecticMap.from_json(doc.get("map", doc))
    if m.g != p.g:
        raise CliError(f"map is for genus {m.g}, periods for genus {p.g}")
    r = symmetrize.compute_R(p, cfg.tol)
    h = h_from_json(doc["H"], p.g) if "H" in doc else _derive_h(m, r.r)
    if h is None:
        log.info("map does not conjugate R to a canonical symmetric form")
    report = symmetrize.verify_symmetric(m, r, p, h or HMatrix.zero(p.g), cfg.residual_tol)
    out = {"input": cfg.inputs[0], "map": cfg.inputs[1], "H": h.to_json() if h else None,
           **report.to_json()}
    if h is None:
        out["exact_conjugation"] = out["passed"] = False
    _write(_dumps(out), cfg.output)
    return EXIT_OK if out["passed"] else EXIT_ERROR


# -- synth --------------------------------------------------------------------

def cmd_synth(cfg: CliConfig) -> int:
    if cfg.genus is None or cfg.h_spec is None:
        raise CliError("synth needs --genus and --h")
    h = parse_h_spec(cfg.h_spec, cfg.genus)
    inst = periods.synth_instance(cfg.genus, h, cfg.seed)
    fmt = cfg.format or "json"
    prefix = cfg.output or f"synth-g{cfg.genus}-s{cfg.seed}"
    period_path = Path(f"{prefix}.periods.{fmt}")
    truth_path = Path(f"{prefix}.truth.json")
    period_path.write_text(periods.dump_periods(inst.tilde_periods, fmt))
    truth_path.write_text(_dumps(inst.to_json()))
    print(f"wrote {period_path} and {truth_path}")
    return EXIT_OK


# -- plot ---------------------------------------------------------------------

def cmd_plot(cfg: CliConfig) -> int:
    if len(cfg.inputs) != 1:
        raise CliError("plot takes one polynomial (or a fixture file with a 'curve' entry)")
    text, window = cfg.inputs[0], cfg.window
    src = Path(text)
    if src.suffix == ".json" and src.is_file():
        curve = json.loads(src.read_text()).get("curve")
        if not curve:
            raise CliError(f"{src} has no 'curve' entry")
        text = curve["polynomial"]
        window = window or tuple(curve["window"])
    poly = curveplot.parse_polynomial(text)
    cs = curveplot.marching_squares(poly, window or curveplot.DEFAULT_WINDOW, cfg.grid)
    out = cfg.output or "curve.svg"
    Path(out).write_bytes(curveplot.render_svg(cs, title=poly.format()))
    print(f"components: {cs.components}")
    log.info("wrote %s", out)
    return EXIT_OK


# -- smith --------------------------------------------------------------------

def cmd_smith(cfg: CliConfig) -> int:
    if len(cfg.inputs) != 1:
        raise CliError("smith takes one matrix file")
    path = cfg.inputs[0]
    raw = sys.stdin.read() if path == "-" else Path(path).read_text()
    m = IntMatrix.from_json(json.loads(raw))
    dec = smith_normal_form(m)
    if dec.u @ m @ dec.v != dec.s or abs(det(dec.u)) != 1 or abs(det(dec.v)) != 1:
        raise CliError("Smith decomposition failed its exact re-check")
    _write(_dumps({
        "U": dec.u.to_json(), "S": dec.s.to_json(), "V": dec.v.to_json(),
        "rank": dec.rank, "invariant_factors": [str(x) for x in dec.invariant_factors],
    }), cfg.output)
    return EXIT_OK


COMMANDS = {"classify": cmd_classify, "verify": cmd_verify, "synth": cmd_synth,
            "plot": cmd_plot, "smith": cmd_smith}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="output file (directory for batch classify)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--tol", type=float, default=None,
                         help=f"rounding tolerance (default 0.25, or ${TOL_ENV})")
    numeric.add_argument("--residual-tol", type=float, default=symmetrize.DEFAULT_RESIDUAL_TOL,
                         help="period residual tolerance (default 1e-2)")
    numeric.add_argument("--format", choices=("json", "csv"), help="period file format (default: by extension)")

    parser = argparse.ArgumentParser(prog="ovalis", description="Topological type of real algebraic curves from periods.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, numeric], help="run the symmetrization pipeline")
    p.add_argument("inputs", nargs="+", metavar="PERIODS", help="period file(s) or a directory")
    p.add_argument("--real-points", choices=[r.value for r in RealPoints], default="unknown")
    p.add_argument("--jobs", type=int, default=None, help="worker threads for batch mode")

    p = sub.add_parser("verify", parents=[common, numeric], help="check a map against periods")
    p.add_argument("inputs", nargs=2, metavar=("PERIODS", "MAP"))

    p = sub.add_parser("synth", parents=[common, numeric], help="emit a synthetic instance with known H")
    p.add_argument("--genus", "-g", type=int, required=True)
    p.add_argument("--h", dest="h_spec", required=True, metavar="zero|diag:D|blocks:B")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("plot", parents=[common], help="plot the real curve f(x, y) = 0 as SVG")
    p.add_argument("inputs", nargs=1, metavar="POLYNOMIAL")
    p.add_argument("--grid", type=int, default=curveplot.DEFAULT_GRID)
    p.add_argument("--window", type=parse_window, help="xmin,xmax,ymin,ymax (use --window=-1,1,-1,1)")

    p = sub.add_parser("smith", parents=[common], help="Smith normal form of an integer matrix")
    p.add_argument("inputs", nargs=1, metavar="MATRIX")
    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    tol = getattr(args, "tol", None)
    return CliConfig(
        command=args.command,
        inputs=list(args.inputs) if hasattr(args, "inputs") else [],
        tol=default_tol() if tol is None else tol,
        residual_tol=getattr(args, "residual_tol", symmetrize.DEFAULT_RESIDUAL_TOL),
        real_points=RealPoints(getattr(args, "real_points", "unknown")),
        seed=getattr(args, "seed", 0),
        grid=getattr(args, "grid", curveplot.DEFAULT_GRID),
        window=getattr(args, "window", None),
        output=args.output,
        format=getattr(args, "format", None),
        verbosity=args.verbose,
        genus=getattr(args, "genus", None),
        h_spec=getattr(args, "h_spec", None),
        jobs=getattr(args, "jobs", None),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except curveplot.PolynomialSyntaxError as exc:
        print(f"error: {exc.message} at position {exc.position}\n{exc.caret()}", file=sys.stderr)
    except symmetrize.StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (CliError, OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
