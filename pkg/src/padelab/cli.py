"""Command-line front end: pade-lab generate | approximate | verify | scan.

Subcommands write one machine-readable file each (deterministic bytes:
stable field order, 17-significant-digit floats) and print a one-line
summary to stdout.  Exit codes: 0 success, 2 validation or usage
problem, 3 numerical failure.  The environment variable PADE_LAB_MAX_N
(default 512) caps the linear system order any subcommand may build.
Rational literals like 1/4 are accepted anywhere a number is expected,
so exact-mode runs work from the shell.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import _jsonfmt
from .analysis import (
    CounterexampleReport,
    divergence_scan,
    find_poles,
    verify_counterexample,
)
from .errors import NumericalError, UsageError
from .pade import classical_pade, robust_pade
from .rational import as_fraction
from .series import (
    GammelParams,
    PoleSequence,
    block_order,
    build_counterexample_series,
    build_gammel_series,
    load_series,
    save_series,
)

ENV_MAX_N = "PADE_LAB_MAX_N"
DEFAULT_MAX_N = 512

__all__ = ["RunConfig", "main", "entry"]


@dataclass(frozen=True)
class RunConfig:
    """Fully parsed invocation, independent of argparse."""

    command: str
    out: Path
    max_n: int = DEFAULT_MAX_N
    series_path: Path | None = None
    family: str = "counterexample"
    k_max: int | None = None
    k_range: tuple | None = None
    n_range: tuple | None = None
    mode: str = "classical"
    tol_rel: float = 1e-12
    exact: bool = False
    exact_up_to: int = 0
    pole_spec: str | None = None
    alphas: tuple = ()
    points: tuple = ()
    scheme: str = "harmonic_repeated"
    fmt: str = "json"
    analyze: bool = False
    radius: float | None = None
    delta_doublet: float = 1e-3
    tol_spurious: float = 1e-6
    single_n: bool = True


# ---------------------------------------------------------------------------
# argument plumbing


def _parse_number(token: str):
    """Rational if possible (exactness preserved), else complex."""
    token = token.strip()
    try:
        return as_fraction(token)
    except (ValueError, ZeroDivisionError, TypeError):
        pass
    try:
        return complex(token)
    except ValueError:
        raise UsageError(f"cannot parse number {token!r} "
                         "(use integers, rationals like 1/4, or decimals)") from None


def _parse_number_list(spec: str) -> tuple:
    items = [tok for tok in spec.split(",") if tok.strip()]
    if not items:
        raise UsageError(f"empty number list {spec!r}")
    return tuple(_parse_number(tok) for tok in items)


def _parse_range(spec: str, what: str) -> tuple:
    """'2..5' -> (2, 5); a bare integer means a single-element range."""
    lo, sep, hi = spec.partition("..")
    try:
        lo_v = int(lo)
        hi_v = int(hi) if sep else lo_v
    except ValueError:
        raise UsageError(f"bad {what} {spec!r} (expected like 2..5)") from None
    if hi_v < lo_v:
        raise UsageError(f"empty {what} {spec!r}")
    return (lo_v, hi_v)


def _parse_poles(spec: str, k_hi: int, start_index: int = 2) -> PoleSequence:
    name = spec.strip().lower().replace("-", "_")
    if name == "harmonic":
        return PoleSequence.harmonic(k_hi)
    if name == "harmonic_repeated":
        return PoleSequence.harmonic_repeated(k_hi)
    return PoleSequence.explicit(_parse_number_list(spec), start_index=start_index)


def _max_n_from_env() -> int:
    raw = os.environ.get(ENV_MAX_N)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{ENV_MAX_N}={raw!r} is not an integer") from None
    if value < 1:
        raise UsageError(f"{ENV_MAX_N} must be at least 1, got {value}")
    return value


def _check_cap(n: int, max_n: int) -> None:
    if n > max_n:
        raise UsageError(f"system order {n} exceeds the cap {max_n}; "
                         f"raise {ENV_MAX_N} to allow it")


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def _write_json(path: Path, payload) -> None:
    _write_text(path, _jsonfmt.dumps(payload) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(cfg: RunConfig) -> int:
    if cfg.family == "counterexample":
        if cfg.k_max is None or cfg.k_max < 2:
            raise UsageError("generate needs --k-max >= 2")
        _check_cap(block_order(cfg.k_max), cfg.max_n)
        poles = _parse_poles(cfg.pole_spec or "harmonic", cfg.k_max)
        s = build_counterexample_series(cfg.k_max, poles)
    elif cfg.family == "gammel":
        if not cfg.alphas:
            raise UsageError("the gammel family requires --alphas "
                             "(comma-separated block amplitudes)")
        if not cfg.pole_spec:
            raise UsageError("the gammel family requires --poles "
                             "(an explicit comma-separated list)")
        name = cfg.pole_spec.strip().lower().replace("-", "_")
        if name in ("harmonic", "harmonic_repeated"):
            raise UsageError("the gammel family takes an explicit pole list, "
                             "not a scheme name")
        poles = PoleSequence.explicit(_parse_number_list(cfg.pole_spec), start_index=1)
        params = GammelParams(alphas=cfg.alphas, poles=poles)
        j_max = 2 ** (len(cfg.alphas) + 1) - 2    # last index of the final complete block
        _check_cap(j_max // 2, cfg.max_n)         # largest order buildable from this file
        s = build_gammel_series(params, j_max)
    else:
        raise UsageError(f"unknown family {cfg.family!r}")
    save_series(s, cfg.out)
    print(f"wrote {cfg.out} ({len(s.coeffs)} coefficients, family {cfg.family})")
    return 0


def _approximant_payload(cfg: RunConfig, s, n: int) -> dict:
    _check_cap(n, cfg.max_n)
    if cfg.mode == "classical":
        r = classical_pade(s, n, exact=cfg.exact)
    else:
        r = robust_pade(s, n, tol_rel=cfg.tol_rel)
    doc = r.to_json_dict()
    if cfg.analyze:
        radius = cfg.radius if cfg.radius is not None else s.radius_hint
        report = find_poles(r, radius_hint=radius,
                            delta_doublet=cfg.delta_doublet,
                            tol_spurious=cfg.tol_spurious)
        doc["pole_report"] = report.to_dict()
    return doc


def cmd_approximate(cfg: RunConfig) -> int:
    if cfg.exact and cfg.mode == "robust":
        raise UsageError("--exact applies to classical mode only "
                         "(the robust route is floating point by definition)")
    s = load_series(cfg.series_path)
    lo, hi = cfg.n_range
    docs = [_approximant_payload(cfg, s, n) for n in range(lo, hi + 1)]
    payload = docs[0] if cfg.single_n else docs
    _write_json(cfg.out, payload)
    label = f"n = {lo}" if cfg.single_n else f"n = {lo}..{hi}"
    print(f"wrote {cfg.out} ({cfg.mode} mode, {label})")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    lo, hi = cfg.k_range
    _check_cap(block_order(hi), cfg.max_n)
    poles = _parse_poles(cfg.pole_spec or "harmonic", hi)
    reports = [verify_counterexample(k, poles, exact=k <= cfg.exact_up_to)
               for k in range(lo, hi + 1)]
    if cfg.fmt == "csv":
        lines = [CounterexampleReport.CSV_HEADER]
        lines.extend(r.csv_row() for r in reports)
        _write_text(cfg.out, "\n".join(lines) + "\n")
    else:
        _write_json(cfg.out, [r.to_dict() for r in reports])
    verdict = "all passed" if all(r.passed for r in reports) else "FAILED checks present"
    print(f"wrote {cfg.out} ({len(reports)} blocks, {verdict})")
    return 0


def cmd_scan(cfg: RunConfig) -> int:
    if cfg.k_max is None or cfg.k_max < 2:
        raise UsageError("scan needs --k-max >= 2")
    _check_cap(block_order(cfg.k_max), cfg.max_n)
    table = divergence_scan(cfg.k_max, scheme=cfg.scheme, exact=cfg.exact,
                            points=cfg.points)
    _write_json(cfg.out, table.to_dict())
    hits = sum(1 for row in table.rows if row.error_at_zk == float("inf"))
    print(f"wrote {cfg.out} ({len(table.rows)} rows, {hits} exact pole hits)")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pade-lab",
        description="Classical and SVD-robust Pade approximation with a "
                    "well-conditioned spurious-pole counterexample family.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="materialize a power series to a JSON file")
    gen.add_argument("--family", choices=("counterexample", "gammel"),
                     default="counterexample")
    gen.add_argument("--k-max", type=int, help="last complete block (counterexample)")
    gen.add_argument("--poles", default=None, metavar="SPEC",
                     help="harmonic, harmonic-repeated, or a comma list like 1/4,1/5")
    gen.add_argument("--alphas", default=None, metavar="LIST",
                     help="gammel block amplitudes, e.g. 1/4,1/256")
    gen.add_argument("--out", type=Path, default=Path("series.json"))

    app = sub.add_parser("approximate", help="compute a Pade approximant from a series file")
    app.add_argument("--series", type=Path, required=True)
    group = app.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="single approximation order")
    group.add_argument("--n-range", metavar="A..B", help="writes a JSON array instead")
    app.add_argument("--mode", choices=("classical", "robust"), default="classical")
    app.add_argument("--tol", type=float, default=1e-12,
                     help="robust threshold tol_rel in (0, 1)")
    app.add_argument("--exact", action="store_true",
                     help="rational elimination instead of SVD (classical only)")
    app.add_argument("--analyze", action="store_true",
                     help="append a pole/doublet/spurious report to the output")
    app.add_argument("--radius", type=float, default=None,
                     help="analyticity radius for the spurious test "
                          "(default: the series radius_hint)")
    app.add_argument("--delta-doublet", type=float, default=1e-3)
    app.add_argument("--tol-spurious", type=float, default=1e-6)
    app.add_argument("--out", type=Path, default=Path("approximant.json"))

    ver = sub.add_parser("verify", help="check every counterexample claim per block")
    ver.add_argument("--k-range", required=True, metavar="A..B")
    ver.add_argument("--poles", default=None, metavar="SPEC")
    ver.add_argument("--exact-up-to", type=int, default=0,
                     help="blocks k <= this verify in exact arithmetic")
    ver.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    ver.add_argument("--out", type=Path, default=None,
                     help="default verify.json or verify.csv")

    scan = sub.add_parser("scan", help="pointwise error table over the block poles")
    scan.add_argument("--k-max", type=int, required=True)
    scan.add_argument("--scheme", choices=("harmonic-repeated", "harmonic"),
                      default="harmonic-repeated")
    scan.add_argument("--points", default=None, metavar="LIST",
                      help="extra probe points, e.g. 1/4,9/10")
    scan.add_argument("--float", action="store_true", dest="float_mode",
                      help="float pipeline instead of exact rationals")
    scan.add_argument("--out", type=Path, default=Path("scan.json"))
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    max_n = _max_n_from_env()
    if args.command == "generate":
        alphas = _parse_number_list(args.alphas) if args.alphas else ()
        return RunConfig(command="generate", out=args.out, max_n=max_n,
                         family=args.family, k_max=args.k_max,
                         pole_spec=args.poles, alphas=alphas)
    if args.command == "approximate":
        if args.n is not None:
            if args.n < 0:
                raise UsageError("--n must be nonnegative")
            n_range = (args.n, args.n)
            single = True
        else:
            n_range = _parse_range(args.n_range, "--n-range")
            if n_range[0] < 0:
                raise UsageError("--n-range must be nonnegative")
            single = False
        return RunConfig(command="approximate", out=args.out, max_n=max_n,
                         series_path=args.series, n_range=n_range,
                         single_n=single, mode=args.mode, tol_rel=args.tol,
                         exact=args.exact, analyze=args.analyze,
                         radius=args.radius, delta_doublet=args.delta_doublet,
                         tol_spurious=args.tol_spurious)
    if args.command == "verify":
        k_range = _parse_range(args.k_range, "--k-range")
        out = args.out if args.out is not None else Path(f"verify.{args.fmt}")
        return RunConfig(command="verify", out=out, max_n=max_n,
                         k_range=k_range, pole_spec=args.poles,
                         exact_up_to=args.exact_up_to, fmt=args.fmt)
    if args.command == "scan":
        points = _parse_number_list(args.points) if args.points else ()
        return RunConfig(command="scan", out=args.out, max_n=max_n,
                         k_max=args.k_max,
                         scheme=args.scheme.replace("-", "_"),
                         points=points, exact=not args.float_mode)
    raise UsageError(f"unknown command {args.command!r}")


_DISPATCH = {
    "generate": cmd_generate,
    "approximate": cmd_approximate,
    "verify": cmd_verify,
    "scan": cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        cfg = _config_from_args(args)
        return _DISPATCH[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main(sys.argv[1:]))
