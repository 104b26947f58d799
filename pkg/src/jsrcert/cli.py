"""Command-line interface: ``jsrcert <command> ...``.

Exit status is 0 on success, 1 when an analysis is refused by its budget and
2 for malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import DEFAULT_BUDGET, BudgetExceeded, bounds_table, refine_bounds, smp_candidates
from .certificates import DEFAULT_TOL, certify_finiteness
from .families import build_family
from .limits import nonsingular_limit_certificate, sample_limit_points
from .linalg import NormKind
from .products import format_word, parse_word
from .records import write_records
from .setfile import SetFileError, parse_words_file, read_set_file, write_set_file
from .stability import SwitchingSequence, decide_stability, growth_exponent, simulate_trajectory

EXIT_OK, EXIT_REFUSED, EXIT_INPUT = 0, 1, 2
THREADS_ENV = "JSRCERT_THREADS"


class InputError(ValueError):
    pass


@dataclass
class RunReport:
    command: str
    parameters: dict
    results: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    wall_clock: float = 0.0
    version: str = __version__

    def meta(self) -> dict:
        return {"command": self.command, "parameters": self.parameters,
                "summary": self.summary, "tool_version": self.version,
                "wall_clock_s": self.wall_clock}


def _g(x: float) -> str:
    return f"{x:.12g}"


def _load(path: str):
    try:
        return read_set_file(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except ValueError as exc:
        raise InputError(f"{path}: {exc}")


# ---------------------------------------------------------------------------
# subcommands: each returns a RunReport and prints the human-readable view


def cmd_bounds(args) -> RunReport:
    mset = _load(args.input)
    norm = NormKind(args.norm)
    if args.prune:
        table = refine_bounds(mset, args.budget or 1_000_000, norm, max_depth=args.depth)
    else:
        table = bounds_table(mset, args.depth, norm, args.budget or DEFAULT_BUDGET)
    print(table.format())
    cands = smp_candidates(table, 3)
    for c in cands:
        print(f"candidate s.m.p. {format_word(c.word)}: value {_g(c.value)}, kappa {_g(c.kappa)}")
    return RunReport("bounds", vars_of(args), [r.as_record() for r in table.rows],
                     {"best_lo": table.best_lo, "best_hi": table.best_hi,
                      "depth": table.depth, "exhausted": table.exhausted,
                      "nodes": table.nodes})


def cmd_certify(args) -> RunReport:
    mset = _load(args.input)
    try:
        with open(args.words) as fh:
            words = parse_words_file(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {args.words}: {exc.strerror}")
    try:
        cert = certify_finiteness(mset, words, args.kappa_min, args.tol)
    except ValueError as exc:
        raise InputError(str(exc))
    print(f"status: {cert.status}")
    if cert.certified:
        print(f"certified value: {_g(cert.certified_value)}")
    else:
        print(f"failed clause ({cert.failed_clause}): {cert.reason}")
    print(f"{'len':>5}  {'value':>16}  {'kappa':>16}  {'sandwich':>10}")
    for w, v, kap, res in zip(cert.words, cert.values, cert.kappas, cert.sandwich_residuals):
        print(f"{len(w):>5}  {v:>16.12g}  {kap:>16.12g}  {res:>10.3g}")
    print(f"note: {cert.note}")
    return RunReport("certify", vars_of(args), [cert.as_record()], {"status": cert.status})


def cmd_stability(args) -> RunReport:
    mset = _load(args.input)
    dec = decide_stability(mset, args.max_depth, NormKind(args.norm))
    line = f"{dec.outcome} at depth {dec.depth}"
    if dec.witness is not None:
        line += f", witness {format_word(dec.witness)} (value {_g(dec.value)})"
    print(line)
    return RunReport("stability", vars_of(args), [dec.as_record()], {"outcome": dec.outcome})


def _parse_switching(spec: str) -> SwitchingSequence:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "periodic":
            return SwitchingSequence.periodic(parse_word(arg))
        if kind == "random":
            return SwitchingSequence.random(int(arg))
        if kind == "sturmian":
            parts = arg.split(",")
            gamma = float(parts[0])
            delta = float(parts[1]) if len(parts) > 1 else 0.0
            return SwitchingSequence.sturmian(gamma, delta)
    except ValueError as exc:
        raise InputError(f"bad switching spec {spec!r}: {exc}")
    raise InputError(f"unknown switching kind {kind!r}")


def cmd_simulate(args) -> RunReport:
    mset = _load(args.input)
    seq = _parse_switching(args.switching)
    x0 = np.zeros(mset.d)
    x0[0] = 1.0
    if args.x0:
        x0 = np.array([float(t) for t in args.x0.split(",")])
    try:
        traj = simulate_trajectory(mset, seq, x0, args.steps, NormKind(args.norm))
    except ValueError as exc:
        raise InputError(str(exc))
    rate = growth_exponent(traj)
    print(f"switching {seq.describe()}, {args.steps} steps")
    print(f"final log-norm {_g(traj[-1, 1])}, growth exponent {_g(rate)} "
          f"(rate {_g(math.exp(rate)) if rate > -math.inf else '0'})")
    rows = [{"t": int(t), "log_norm": float(y)} for t, y in traj]
    return RunReport("simulate", vars_of(args), rows, {"growth_exponent": rate})


def cmd_limits(args) -> RunReport:
    mset = _load(args.input)
    if args.rho_est is not None and not args.rho_est > 0:
        raise InputError("--rho-est must be positive")
    lps = sample_limit_points(mset, args.rho_est, args.samples, args.max_len, args.seed)
    cert = nonsingular_limit_certificate(mset, lps, args.det_tol)
    print(f"rho estimate {_g(lps.rho_estimate)}; kept {lps.kept} of {lps.drawn} products "
          f"in {len(lps.points)} clusters")
    print(f"{'id':>4}  {'|det|':>14}  {'rank':>4}  {'len':>5}  {'mult':>5}  {'radius':>10}")
    for i, p in enumerate(lps.points):
        print(f"{i:>4}  {p.abs_det:>14.6g}  {p.rank:>4}  {p.length:>5}  {p.multiplicity:>5}  "
              f"{p.radius:>10.3g}")
    print(cert.message)
    return RunReport("limits", vars_of(args), lps.records(),
                     {"certificate": cert.as_record(), "rho_estimate": lps.rho_estimate})


def cmd_family(args) -> RunReport:
    params = {}
    for item in args.param or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--param expects key=value, got {item!r}")
        params[key] = val
    try:
        spec = build_family(args.name, params)
    except ValueError as exc:
        raise InputError(str(exc))
    write_set_file(spec.matrix_set, args.emit)
    print(f"wrote {spec.name} set ({spec.matrix_set.k} generators, d={spec.matrix_set.d}) "
          f"to {args.emit}")
    return RunReport("family", vars_of(args), [], {"name": spec.name})


def vars_of(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "threads")}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jsrcert", description=(
        "Joint spectral radius bounds and finiteness certificates for matrix sets."))
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker cap (default ${THREADS_ENV} or CPU count); "
                        "results do not depend on it")
    sub = p.add_subparsers(dest="command", required=True)
    norms = [n.value for n in NormKind]

    b = sub.add_parser("bounds", help="per-depth lower/upper bounds")
    b.add_argument("--input", required=True)
    b.add_argument("--depth", type=int, required=True)
    b.add_argument("--norm", choices=norms, default="inf")
    b.add_argument("--prune", action="store_true", help="branch-and-bound search")
    b.add_argument("--budget", type=int, default=None, help="node / product budget")
    b.add_argument("--records")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("certify", help="uniformly sub-peripheral finiteness certificate")
    c.add_argument("--input", required=True)
    c.add_argument("--words", required=True)
    c.add_argument("--kappa-min", type=float, required=True)
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--records")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("stability", help="decide stability under arbitrary switching")
    s.add_argument("--input", required=True)
    s.add_argument("--max-depth", type=int, required=True)
    s.add_argument("--norm", choices=norms, default="inf")
    s.add_argument("--records")
    s.set_defaults(func=cmd_stability)

    m = sub.add_parser("simulate", help="trajectory under a switching sequence")
    m.add_argument("--input", required=True)
    m.add_argument("--switching", required=True,
                   help="periodic:WORD | random:SEED | sturmian:GAMMA,DELTA")
    m.add_argument("--steps", type=int, required=True)
    m.add_argument("--x0", help="comma-separated initial row vector (default e1)")
    m.add_argument("--norm", choices=norms, default="two")
    m.add_argument("--records")
    m.set_defaults(func=cmd_simulate)

    lm = sub.add_parser("limits", help="sample limit-semigroup points")
    lm.add_argument("--input", required=True)
    lm.add_argument("--samples", type=int, required=True)
    lm.add_argument("--max-len", type=int, required=True)
    lm.add_argument("--seed", type=int, required=True)
    lm.add_argument("--rho-est", type=float, default=None)
    lm.add_argument("--det-tol", type=float, default=1e-6)
    lm.add_argument("--records")
    lm.set_defaults(func=cmd_limits)

    f = sub.add_parser("family", help="write a named family to a set file")
    f.add_argument("name")
    f.add_argument("--param", action="append", metavar="KEY=VALUE")
    f.add_argument("--emit", required=True)
    f.set_defaults(func=cmd_family)
    return p


def resolve_threads(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return EXIT_INPUT if exc.code else EXIT_OK
    resolve_threads(args.threads)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (InputError, SetFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    report.wall_clock = time.perf_counter() - start
    if getattr(args, "records", None):
        write_records(args.records, report.command, report.results, report.meta())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
