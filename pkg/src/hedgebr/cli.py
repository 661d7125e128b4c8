"""Command line entry point: ``hedgebr {solve,hsp,oracle,regions,sweep}``.

Exit codes: 0 success, 2 usage or input error, 3 internal invariant
violation.  Every command that writes an output directory also writes
``manifest.json`` there; re-running the recorded command reproduces every
file bit for bit.  Action indices in all outputs are 1-based.

``sweep`` uses ``HEDGEBR_WORKERS`` processes (default: ``os.cpu_count()``).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analysis import export_regret_trajectory, format_zu, q_bound_constants, write_regret_csv, zu_vertices
from .dynamics import write_trajectory_csv
from .game import Game, load_game
from .hbr import SolveConfig, format_result, hbr_profile_nd, hbr_profile_trend, run_hbr, run_hsp, swap_roles
from .oracle import solve_ne
from .rational import SingularMatrixError, format_rational, parse_rational

WORKERS_ENV = "HEDGEBR_WORKERS"

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3


class InputError(Exception):
    """Bad flags or unreadable input; maps to exit code 2."""


@dataclass(frozen=True)
class RunManifest:
    command: str
    game: str
    config: dict
    seed: int | None
    out: str
    version: str = __version__

    def write(self, out_dir: Path) -> None:
        text = json.dumps(asdict(self), indent=2, sort_keys=True)
        (out_dir / "manifest.json").write_text(text + "\n")


# ---------------------------------------------------------------- arg helpers


def _eta_arg(s: str):
    if s == "auto":
        return "auto"
    try:
        v = float(parse_rational(s)) if "/" in s else float(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid eta {s!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("eta must be positive")
    return v


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _precision_arg(s: str):
    if s == "adaptive":
        return None
    return _positive_int(s)


def parse_horizons(s: str) -> list[int]:
    """``a,b,c`` or an inclusive range ``start:stop:step``."""
    try:
        if ":" in s:
            start, stop, step = (int(v) for v in s.split(":"))
            out = list(range(start, stop + 1, step))
        else:
            out = [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid horizon list {s!r}") from None
    if not out or any(v < 1 for v in out):
        raise argparse.ArgumentTypeError("horizons must be positive")
    return out


def _load(path: str) -> Game:
    try:
        return load_game(path)
    except OSError as exc:
        raise InputError(f"cannot read game file {path}: {exc.strerror or exc}") from exc
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed game file {path}: {exc}") from exc


def _out_dir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {path}: {exc}") from exc
    return out


def _config_echo(args: argparse.Namespace) -> dict:
    skip = {"func", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _manifest(args: argparse.Namespace, out: Path) -> RunManifest:
    return RunManifest(args.command, str(args.game), _config_echo(args), None, str(out))


def _write_trend(path: Path, trend) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "ND"])
        for t, v in enumerate(trend, start=1):
            w.writerow([t, repr(float(v))])


def _tokens(v) -> str:
    return " ".join(format_rational(p) if isinstance(p, Fraction) else repr(float(p)) for p in v)


# ------------------------------------------------------------------- commands


def cmd_solve(args: argparse.Namespace) -> int:
    g = _load(args.game)
    out = _out_dir(args.out)
    if args.mode == "float":
        g = g.to_float()
    cfg = SolveConfig(
        horizon=args.horizon,
        eta=args.eta,
        mode=args.mode,
        player=args.player,
        record_trajectory=args.trace,
        detect_cycles=not args.no_cycle_detection,
        br_precision=args.br_precision,
    )
    res = run_hbr(g, cfg)
    played = swap_roles(g) if args.player == "x" else g
    (out / "result.txt").write_text(format_result(res, cfg, played))
    if args.trace:
        write_trajectory_csv(out / "trajectory.csv", res.trajectory, played.n)
        if played.exact:
            v_star = solve_ne(played).value
            actions = [r["y"] - 1 for r in res.trajectory]
            write_regret_csv(out / "regret.csv", export_regret_trajectory(played, actions, v_star), played.n)
    _manifest(args, out).write(out)
    print(format_result(res, cfg, played), end="")
    return EXIT_OK


def cmd_hsp(args: argparse.Namespace) -> int:
    g = _load(args.game)
    out = _out_dir(args.out)
    res = run_hsp(g, args.horizon, args.eta)
    _write_trend(out / "nd_trend.csv", res.nd_trend)
    lines = [
        f"# hedgebr {__version__}",
        f"# game {g.n}x{g.m}",
        f"# horizon={args.horizon} eta_x={res.eta_x!r} eta_y={res.eta_y!r}",
        f"strategy_x_tas={_tokens(res.x_avg)}",
        f"strategy_y_tas={_tokens(res.y_avg)}",
        f"nd={res.nd!r}",
    ]
    if args.with_hbr:
        trend = hbr_profile_trend(g, args.horizon, args.eta)
        _write_trend(out / "hbr_nd_trend.csv", trend)
        lines.append(f"hbr_nd={trend[-1]!r}")
    text = "\n".join(lines) + "\n"
    (out / "hsp_result.txt").write_text(text)
    _manifest(args, out).write(out)
    print(text, end="")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    ne = solve_ne(_load(args.game))
    print(f"x*={_tokens(ne.x_star)}")
    print(f"y*={_tokens(ne.y_star)}")
    print(f"v={format_rational(ne.value)}")
    return EXIT_OK


def cmd_regions(args: argparse.Namespace) -> int:
    g = _load(args.game)
    if g.n != g.m:
        raise InputError(f"regions needs a square game, got {g.n}x{g.m}")
    ne = solve_ne(g)
    try:
        zu = zu_vertices(g, args.eta, ne)
    except SingularMatrixError as exc:
        raise InputError(str(exc)) from exc
    qb = q_bound_constants(g, args.eta, ne, zu)
    text = format_zu(zu) + f"M_p={qb.M_p!r}\ndelta_u={format_rational(qb.delta_u)}\nM_Q={qb.M_Q!r}\n"
    if args.out is not None:
        out = _out_dir(args.out)
        (out / "regions.txt").write_text(text)
        _manifest(args, out).write(out)
    print(text, end="")
    return EXIT_OK


_SWEEP_COLUMNS = {
    "nd": ["T", "eta", "hbr_nd", "hsp_nd"],
    "stoptime": ["T", "eta", "stop_y", "period_y", "stop_x", "period_x"],
}


def _sweep_one(game_path: str, T: int, metric: str, eta, out_dir: str) -> dict:
    """One horizon of a sweep; writes ``row.json`` in its own sub-directory."""
    g = load_game(game_path)
    row: dict = {"T": T}
    if metric == "nd":
        hsp = run_hsp(g, T, eta, trend=False)
        row["eta"] = repr(hsp.eta_y)
        row["hbr_nd"] = repr(hbr_profile_nd(g, T, eta))
        row["hsp_nd"] = repr(hsp.nd)
    else:
        for p in ("y", "x"):
            r = run_hbr(g, SolveConfig(horizon=T, eta=eta, player=p))
            row["eta"] = repr(r.eta)
            row[f"stop_{p}"] = r.cycle.t if r.cycle else ""
            row[f"period_{p}"] = r.cycle.period if r.cycle else ""
    sub = Path(out_dir) / f"T{T:08d}"
    sub.mkdir(parents=True, exist_ok=True)
    (sub / "row.json").write_text(json.dumps(row, sort_keys=True) + "\n")
    return row


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        v = int(raw)
    except ValueError:
        raise InputError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if v < 1:
        raise InputError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return v


def cmd_sweep(args: argparse.Namespace) -> int:
    g = _load(args.game)
    if not g.exact:  # pragma: no cover - files hold rationals only
        raise InputError("sweep needs a rational game")
    out = _out_dir(args.out)
    workers = min(worker_count(), len(args.horizons))
    jobs = [(str(args.game), T, args.metric, args.eta, str(out)) for T in args.horizons]
    if workers == 1:
        rows = [_sweep_one(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, *zip(*jobs)))
    cols = _SWEEP_COLUMNS[args.metric]
    with open(out / f"sweep_{args.metric}.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        for r in rows:
            w.writerow(r)
    _manifest(args, out).write(out)
    print(f"wrote {len(rows)} rows to {out / f'sweep_{args.metric}.csv'}")
    return EXIT_OK


# --------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hedgebr", description="Zero-sum games via Hedge against best response.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run the HBR solver")
    s.add_argument("--game", required=True)
    s.add_argument("--horizon", required=True, type=_positive_int)
    s.add_argument("--eta", default="auto", type=_eta_arg, help="learning rate or 'auto' (default)")
    s.add_argument("--mode", choices=("exact", "float"), default="exact")
    s.add_argument("--player", choices=("x", "y"), default="y", help="which player best-responds")
    s.add_argument("--trace", action="store_true", help="write trajectory.csv (and regret.csv in exact mode)")
    s.add_argument("--no-cycle-detection", action="store_true", help="play all T stages")
    s.add_argument(
        "--br-precision",
        default=113,
        type=_precision_arg,
        help="bits used to settle near-tied best responses, or 'adaptive' (default 113)",
    )
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_solve)

    h = sub.add_parser("hsp", help="Hedge self-play baseline")
    h.add_argument("--game", required=True)
    h.add_argument("--horizon", required=True, type=_positive_int)
    h.add_argument("--eta", default="auto", type=_eta_arg)
    h.add_argument("--with-hbr", action="store_true", help="also write the HBR profile ND trend")
    h.add_argument("--out", required=True)
    h.set_defaults(func=cmd_hsp)

    o = sub.add_parser("oracle", help="exact equilibrium by linear programming")
    o.add_argument("--game", required=True)
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("regions", help="vertices of the upper region Z_u")
    r.add_argument("--game", required=True)
    r.add_argument("--eta", required=True, type=_eta_arg)
    r.add_argument("--out")
    r.set_defaults(func=cmd_regions)

    w = sub.add_parser("sweep", help=f"one solve per horizon, {WORKERS_ENV} workers")
    w.add_argument("--game", required=True)
    w.add_argument("--horizons", required=True, type=parse_horizons, help="a,b,c or start:stop:step")
    w.add_argument("--metric", choices=("nd", "stoptime"), required=True)
    w.add_argument("--eta", default="auto", type=_eta_arg)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    if getattr(args, "eta", None) == "auto" and args.command == "regions":
        print("hedgebr: regions needs an explicit --eta", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"hedgebr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, AssertionError) as exc:
        print(f"hedgebr: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
