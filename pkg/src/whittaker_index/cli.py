"""Command-line interface: ``whittaker eval|verify|sweep``.

Exit codes
----------
0  success
1  a verification check failed (or ``--method both`` disagreed)
2  bad command-line flags
3  arguments outside the domain of the requested quantity
4  numerical failure (no convergence, non-finite values)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import verify
from .comptonization import GreensParams, greens_function
from .confluent import whittaker_m, whittaker_w
from .errors import DomainError, WhittakerIndexError
from .index_integral import IntegralParams, eval_I
from .oracle import oracle_I

__all__ = ["main", "build_parser", "parse_complex", "sweep_rows", "evaluate_row", "SWEEP_COLUMNS"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3, 4

SWEEP_COLUMNS = ("param", "value_re", "value_im", "leading_re", "leading_im", "method", "elapsed_ns")
SWEEP_PARAMS = ("s", "kappa", "x", "x0")
# flags whose values may start with "-" and contain a comma, e.g. "--s -1,0"
_VALUE_FLAGS = ("--kappa", "--s", "--mu", "--z", "--x", "--x0", "--y", "--from", "--to")


def parse_complex(text: str) -> complex:
    """``"RE"`` or ``"RE,IM"`` to a complex number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM (no spaces), got {text!r}")


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.16e} {'+' if z.imag >= 0 else '-'} {abs(z.imag):.16e}i"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="whittaker",
        description="Integrals over the second index of the Whittaker W function.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a single quantity")
    ev_sub = ev.add_subparsers(dest="what", required=True)

    integ = ev_sub.add_parser("integral", help="the index integral I(s)")
    integ.add_argument("--kappa", type=parse_complex, required=True, metavar="RE[,IM]")
    integ.add_argument("--s", type=parse_complex, required=True, metavar="RE[,IM]")
    integ.add_argument("--x", type=float, required=True)
    integ.add_argument("--x0", type=float, required=True)
    integ.add_argument("--method", choices=("closed", "quadrature", "both"), default="closed")
    integ.add_argument("--tol", type=float, default=verify.ORACLE_TOL, help="quadrature tolerance (default 1e-9)")
    integ.add_argument("--gate", type=float, default=verify.MAIN_TOL,
                       help="relative agreement required with --method both (default 1e-6)")
    integ.add_argument("--allow-edge", action="store_true",
                       help="skip the half-integer kappa rejection")

    wf = ev_sub.add_parser("whittaker", help="Whittaker M or W")
    wf.add_argument("which", choices=("W", "M"))
    wf.add_argument("--kappa", type=parse_complex, required=True, metavar="RE[,IM]")
    wf.add_argument("--mu", type=parse_complex, required=True, metavar="RE[,IM]")
    wf.add_argument("--z", type=float, required=True)

    gr = ev_sub.add_parser("greens", help="Comptonization Green's function")
    gr.add_argument("--x", type=float, required=True)
    gr.add_argument("--x0", type=float, required=True)
    gr.add_argument("--y", type=float, required=True)
    gr.add_argument("--tol", type=float, default=1e-10)

    ver = sub.add_parser("verify", help="run invariant suites")
    ver.add_argument("suite", choices=("all", *verify.SUITES))

    sw = sub.add_parser("sweep", help="evaluate I(s) along a parameter range")
    sw.add_argument("--param", choices=SWEEP_PARAMS, default="s")
    sw.add_argument("--from", dest="start", type=parse_complex, metavar="RE[,IM]")
    sw.add_argument("--to", dest="stop", type=parse_complex, metavar="RE[,IM]")
    sw.add_argument("--steps", type=int, default=50)
    sw.add_argument("--log", action="store_true", help="geometric spacing (real positive endpoints)")
    sw.add_argument("--kappa", type=parse_complex, default=None, metavar="RE[,IM]")
    sw.add_argument("--s", type=parse_complex, default=None, metavar="RE[,IM]")
    sw.add_argument("--x", type=parse_complex, default=None)
    sw.add_argument("--x0", type=parse_complex, default=None)
    sw.add_argument("--grid", choices=("range", "main"), default="range",
                    help="'main' sweeps the closed-form acceptance grid instead of a range")
    sw.add_argument("--method", choices=("closed", "quadrature"), default="closed")
    sw.add_argument("--tol", type=float, default=verify.ORACLE_TOL)
    sw.add_argument("--allow-edge", action="store_true")
    sw.add_argument("--out", default="-", help="output file ('-' for stdout)")
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


# ---------------------------------------------------------------------- eval


def _cmd_eval(args) -> int:
    if args.what == "integral":
        p = IntegralParams(args.kappa, args.s, args.x, args.x0, allow_edge=args.allow_edge)
        closed = quad = None
        if args.method in ("closed", "both"):
            res = eval_I(p)
            closed = res.value
            print(f"closed     = {_fmt(closed)}   ({res.method})")
        if args.method in ("quadrature", "both"):
            quad = oracle_I(p, args.tol).value
            print(f"quadrature = {_fmt(quad)}")
        if closed is not None and quad is not None:
            diff = abs(closed - quad)
            rel = diff / abs(quad)
            print(f"abs diff   = {diff:.3e}")
            print(f"rel diff   = {rel:.3e}")
            if not rel <= args.gate:
                print(f"closed form and quadrature differ by more than {args.gate:g}", file=sys.stderr)
                return EXIT_FAIL
        return EXIT_OK
    if args.what == "whittaker":
        if not args.z > 0:
            raise DomainError("z must be positive")
        fn = whittaker_w if args.which == "W" else whittaker_m
        print(_fmt(fn(args.kappa, args.mu, args.z)))
        return EXIT_OK
    g = GreensParams(args.x, args.x0, args.y)
    print(f"{greens_function(g, args.tol):.16e}")
    return EXIT_OK


# -------------------------------------------------------------------- verify


def _cmd_verify(args) -> int:
    rows = verify.run(args.suite)
    print(verify.format_table(rows))
    failed = [r for r in rows if not r.passed]
    print(f"\n{len(rows) - len(failed)}/{len(rows)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


# --------------------------------------------------------------------- sweep


def evaluate_row(p: IntegralParams, method: str = "closed", tol: float = verify.ORACLE_TOL, label="") -> dict:
    """One sweep row: value, leading term, method tag and wall time.

    On a double pole (``method=degenerate``) the leading term and the
    coinciding residue merge into the limit ``K``, which is reported in the
    leading columns instead.
    """
    start = time.perf_counter_ns()
    if method == "closed":
        res = eval_I(p)
        value, tag = res.value, res.method
        lead = res.K_term if res.degenerate else res.leading_term
    else:
        value = oracle_I(p, tol).value
        lead, tag = None, "quadrature"
    elapsed = time.perf_counter_ns() - start
    return {
        "param": label,
        "value_re": value.real,
        "value_im": value.imag,
        # quadrature has no leading term: null in JSON, empty in CSV
        "leading_re": None if lead is None else lead.real,
        "leading_im": None if lead is None else lead.imag,
        "method": tag,
        "elapsed_ns": elapsed,
    }


def _thread_count() -> int:
    raw = os.environ.get("WHITTAKER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"WHITTAKER_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise DomainError(f"WHITTAKER_THREADS must be a positive integer, got {raw!r}")
    return n


def sweep_rows(points, method="closed", tol=verify.ORACLE_TOL, labels=None, threads=None) -> list[dict]:
    """Evaluate every point; rows come back in input order.

    With ``threads > 1`` the rows are computed concurrently and collected in
    order, so the output does not depend on the thread count.
    """
    labels = labels if labels is not None else [""] * len(points)
    threads = _thread_count() if threads is None else threads
    if threads <= 1:
        return [evaluate_row(p, method, tol, lab) for p, lab in zip(points, labels)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda pl: evaluate_row(pl[0], method, tol, pl[1]), zip(points, labels)))


def _grid_values(args) -> np.ndarray:
    if args.start is None or args.stop is None:
        raise DomainError("a range sweep needs --from and --to")
    if args.steps < 1:
        raise DomainError("--steps must be at least 1")
    a, b = args.start, args.stop
    if args.log:
        if a.imag or b.imag or a.real <= 0 or b.real <= 0:
            raise DomainError("--log needs real positive --from and --to")
        return np.geomspace(a.real, b.real, args.steps).astype(complex)
    return np.linspace(a, b, args.steps)


def _sweep_points(args):
    if args.grid == "main":
        points = verify.main_grid_params()
        labels = [f"kappa={p.kappa.real:g} s={_short(p.s)} x={p.x:g} x0={p.x0:g}" for p in points]
        return points, labels
    fixed = {"kappa": args.kappa, "s": args.s, "x": args.x, "x0": args.x0}
    missing = [k for k, v in fixed.items() if v is None and k != args.param]
    if missing:
        raise DomainError("sweep needs fixed values for: " + ", ".join("--" + k for k in missing))
    points, labels = [], []
    for v in _grid_values(args):
        vals = dict(fixed)
        vals[args.param] = v
        x, x0 = vals["x"], vals["x0"]
        if complex(x).imag or complex(x0).imag:
            raise DomainError("x and x0 must be real")
        points.append(IntegralParams(vals["kappa"], vals["s"], complex(x).real, complex(x0).real,
                                     allow_edge=args.allow_edge))
        labels.append(_short(v))
    return points, labels


def _short(z: complex) -> str:
    z = complex(z)
    return repr(z.real) if z.imag == 0 else f"{z.real!r},{z.imag!r}"


def _write(rows, fmt, out) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=1) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        text = buf.getvalue()
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_sweep(args) -> int:
    points, labels = _sweep_points(args)
    rows = sweep_rows(points, args.method, args.tol, labels)
    _write(rows, args.format, args.out)
    median_ms = statistics.median(r["elapsed_ns"] for r in rows) / 1e6
    print(f"{len(rows)} rows, median {median_ms:.3f} ms per point ({args.method})", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------- main


def _join_values(argv: list[str]) -> list[str]:
    """Glue ``--flag -1,0`` into ``--flag=-1,0`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _VALUE_FLAGS and nxt[:1] == "-" and (nxt[1:2].isdigit() or nxt[1:2] == "."):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    handlers = {"eval": _cmd_eval, "verify": _cmd_verify, "sweep": _cmd_sweep}
    try:
        return handlers[args.command](args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except WhittakerIndexError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
