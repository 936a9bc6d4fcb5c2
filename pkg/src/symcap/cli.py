"""Command-line interface.

Exit codes: 0 success, 2 unreadable or invalid input, 3 method does not
apply to the domain, 4 empty statistics window.  Data goes to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .asymptotics import embedding_obstruction, error_term, ruelle_half, window_stats
from .bounds import box_oracle, exponent_scan, toric_oracle
from .capacities import METHODS, MethodMismatch, capacity_sequence, _ball_d
from .domains import Ball, Toric, Union, as_profile, volume
from .ech_index import GeneratorError, gap_check, load_generator
from .geometry import Kind
from .io import Box, SpecError, fmt_exact, fmt_float, load_domain
from .ruelle import InterceptError, ruelle_quadrature, ruelle_toric
from .weights import mcduff_check, weight_expansion

EXIT_OK, EXIT_INPUT, EXIT_METHOD, EXIT_WINDOW = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("SYMCAP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"SYMCAP_THREADS={env!r} is not an integer", EXIT_INPUT)
    return os.cpu_count() or 1


def _domain(path):
    try:
        return load_domain(path)
    except SpecError as exc:
        raise CliError(str(exc), EXIT_INPUT)


def _capacities(domain, kmax, method, args, witnesses=True):
    if isinstance(domain, Box):
        raise CliError("box specs are only accepted by cube-bound", EXIT_METHOD)
    opts = {}
    if getattr(args, "min_weight", None) is not None:
        opts["min_weight"] = Fraction(args.min_weight)
    if getattr(args, "max_terms", None) is not None:
        opts["max_terms"] = args.max_terms
    try:
        return capacity_sequence(domain, kmax, method, witnesses=witnesses, workers=_threads(args), **opts)
    except MethodMismatch as exc:
        raise CliError(str(exc), EXIT_METHOD)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT)


def cmd_capacities(args, out):
    domain = _domain(args.domain)
    rows = _capacities(domain, args.kmax, args.method, args, witnesses=False)
    if args.out == "json":
        data = [
            {
                "k": r.k,
                "c_k": fmt_exact(r.value),
                "c_k_float": float(r.value),
                "method": r.method.value,
                "lower_bound_only": r.lower_bound_only,
            }
            for r in rows
        ]
        json.dump(data, out, indent=1)
        out.write("\n")
        return EXIT_OK
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "c_k", "c_k_float", "method", "lower_bound_only"])
    for r in rows:
        w.writerow([r.k, fmt_exact(r.value), fmt_float(r.value), r.method.value, str(r.lower_bound_only).lower()])
    return EXIT_OK


def cmd_error_term(args, out):
    domain = _domain(args.domain)
    kmax = args.kmax
    lo = max(1, math.ceil(kmax * (1 - args.window)))
    if kmax < 1 or lo > kmax:
        raise CliError(f"window over k in [{lo}, {kmax}] is empty", EXIT_WINDOW)
    vol = volume(domain) if not isinstance(domain, Box) else None
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "c_k", "e_k"])
    if isinstance(domain, Ball) and args.method in ("auto", "closed"):
        # skip building result objects: this path serves k up to ~10^6
        e = np.empty(kmax + 1)
        for k in range(kmax + 1):
            c = _ball_d(k) * domain.a
            e[k] = error_term(c, k, vol)
            w.writerow([k, fmt_exact(c), fmt_float(e[k])])
    else:
        rows = _capacities(domain, kmax, args.method, args, witnesses=False)
        e = np.array([error_term(r.value, r.k, vol) for r in rows])
        for r, ek in zip(rows, e):
            w.writerow([r.k, fmt_exact(r.value), fmt_float(ek)])
    ks = np.arange(0, kmax + 1)
    st = window_stats(ks[1:], e[1:], lo, kmax)
    target = ruelle_half(domain)
    parts = [f"window={lo}..{kmax}", f"min={fmt_float(st.min)}", f"max={fmt_float(st.max)}", f"mean={fmt_float(st.mean)}"]
    if target is not None:
        parts.append(f"target={fmt_float(target)}")
    out.write("# " + " ".join(parts) + "\n")
    return EXIT_OK


def cmd_ruelle(args, out):
    domain = _domain(args.domain)
    if isinstance(domain, (Union, Box)):
        raise CliError("the Ruelle invariant is computed for single toric domains", EXIT_METHOD)
    prof = as_profile(domain)
    out.write(f"ruelle={fmt_exact(ruelle_toric(prof.a, prof.b))}\n")
    smooth = domain.smooth if isinstance(domain, Toric) else None
    if smooth is not None:
        try:
            rep = ruelle_quadrature(smooth, args.quadrature)
        except InterceptError as exc:
            raise CliError(str(exc), EXIT_INPUT)
        out.write(f"quadrature={fmt_float(rep.value)}\n")
        out.write(f"error={fmt_float(rep.value - (smooth.a + smooth.b))}\n")
        out.write(f"max_residual={fmt_float(rep.max_residual)}\n")
    return EXIT_OK


def cmd_obstruct(args, out):
    src, tgt = _domain(args.source), _domain(args.target)
    try:
        rep = embedding_obstruction(as_profile(src), as_profile(tgt), Fraction(args.area_tol))
    except TypeError as exc:
        raise CliError(str(exc), EXIT_METHOD)
    out.write(f"verdict={rep.verdict.value}\n")
    out.write(f"source_a_plus_b={fmt_exact(rep.source_sum)}\n")
    out.write(f"target_a_plus_b={fmt_exact(rep.target_sum)}\n")
    out.write(f"area_gap={fmt_exact(rep.area_gap)}\n")
    out.write("hypotheses=asserted-by-caller\n")
    return EXIT_OK


def cmd_cube_bound(args, out):
    domain = _domain(args.domain)
    if isinstance(domain, Box):
        oracle = box_oracle([float(v) for v in domain.lo], [float(v) for v in domain.hi])
        vol = domain.volume
    elif isinstance(domain, Union):
        raise CliError("cube bounds need a single domain", EXIT_METHOD)
    else:
        oracle = toric_oracle(as_profile(domain))
        vol = volume(domain)
    try:
        ks = [int(x) for x in args.k.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"cannot parse k list {args.k!r}", EXIT_INPUT)
    if not ks or min(ks) < 1:
        raise CliError("k values must be positive", EXIT_INPUT)
    rows = exponent_scan(oracle, vol, args.depth, ks)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "lower_bound", "bound_over_k_quarter", "level", "truncated"])
    for r in rows:
        w.writerow([r.k, fmt_float(r.bound), fmt_float(r.scaled), r.level, str(r.truncated).lower()])
    return EXIT_OK


def cmd_ech_index(args, out):
    try:
        gen = load_generator(args.generator)
    except (OSError, json.JSONDecodeError, GeneratorError, ValueError) as exc:
        raise CliError(f"cannot load generator: {exc}", EXIT_INPUT)
    rep = gap_check(gen)
    out.write(f"I={rep.index}\nI_approx={fmt_float(rep.approx)}\ngap={fmt_float(rep.gap)}\n")
    out.write(f"bound={rep.bound}\nok={str(rep.ok).lower()}\n")
    return EXIT_OK


def cmd_weights(args, out):
    domain = _domain(args.domain)
    try:
        prof = as_profile(domain)
    except TypeError as exc:
        raise CliError(str(exc), EXIT_METHOD)
    if prof.kind is not Kind.CONCAVE:
        raise CliError("weight expansions need a concave domain", EXIT_METHOD)
    opts = {"max_terms": args.max_terms}
    if args.min_weight is not None:
        opts["min_weight"] = Fraction(args.min_weight)
    exp = weight_expansion(prof, **opts)
    lhs, rhs, equal = mcduff_check(prof, exp)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["i", "weight", "weight_float"])
    for i, a in enumerate(exp.weights, 1):
        w.writerow([i, fmt_exact(a), fmt_float(a)])
    status = "skipped (truncated)" if equal is None else ("equal" if equal else "NOT equal")
    out.write(f"# remainder_area={fmt_exact(exp.remainder_area)} truncated={str(exp.truncated).lower()}\n")
    out.write(f"# sum={fmt_exact(lhs)} a_plus_b_minus_length={fmt_exact(rhs)} check={status}\n")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: error: {message}", EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symcap", description="ECH capacities and related invariants of toric domains.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: SYMCAP_THREADS or CPU count)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("capacities", help="c_0 .. c_kmax")
    c.add_argument("--domain", required=True)
    c.add_argument("--kmax", type=int, required=True)
    c.add_argument("--method", choices=METHODS, default="auto")
    c.add_argument("--out", choices=("csv", "json"), default="csv")
    c.add_argument("--min-weight", dest="min_weight")
    c.add_argument("--max-terms", dest="max_terms", type=int)
    c.set_defaults(func=cmd_capacities)

    e = sub.add_parser("error-term", help="e_k = c_k - 2 sqrt(k vol) with window summary")
    e.add_argument("--domain", required=True)
    e.add_argument("--kmax", type=int, required=True)
    e.add_argument("--window", type=float, default=0.5, help="fraction of the k range at the top")
    e.add_argument("--method", choices=METHODS, default="auto")
    e.add_argument("--min-weight", dest="min_weight")
    e.add_argument("--max-terms", dest="max_terms", type=int)
    e.set_defaults(func=cmd_error_term)

    r = sub.add_parser("ruelle", help="Ruelle invariant a + b and its quadrature check")
    r.add_argument("--domain", required=True)
    r.add_argument("--quadrature", type=int, default=256)
    r.set_defaults(func=cmd_ruelle)

    o = sub.add_parser("obstruct", help="a + b obstruction to volume-filling embeddings")
    o.add_argument("--source", required=True)
    o.add_argument("--target", required=True)
    o.add_argument("--area-tol", dest="area_tol", default="0")
    o.set_defaults(func=cmd_obstruct)

    b = sub.add_parser("cube-bound", help="dyadic cube-packing lower bound on e_k")
    b.add_argument("--domain", required=True)
    b.add_argument("--depth", type=int, default=3)
    b.add_argument("--k", required=True, help="comma-separated list")
    b.set_defaults(func=cmd_cube_bound)

    x = sub.add_parser("ech-index", help="ECH index, approximate index and gap")
    x.add_argument("--generator", required=True)
    x.set_defaults(func=cmd_ech_index)

    w = sub.add_parser("weights", help="weight expansion of a concave domain")
    w.add_argument("--domain", required=True)
    w.add_argument("--min-weight", dest="min_weight")
    w.add_argument("--max-terms", dest="max_terms", type=int, default=4096)
    w.set_defaults(func=cmd_weights)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except (ValueError, ZeroDivisionError) as exc:
        print(f"symcap: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:  # pragma: no cover
        return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
