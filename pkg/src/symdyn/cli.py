"""Command-line front end: reproducible experiments over the library.

Every run is fully determined by its arguments (system, oracle file,
initial-configuration descriptor, seeds); there is no hidden state.
Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import analysis, cantor, systems, verify
from .oracle import OracleTable, table_from_json
from .pi2 import ProductConfiguration
from .space import (ALPHA_01, ALPHA_01S, ALPHA_AB, Alphabet, Configuration,
                    Constant, Cylinder, Periodic, Sampler, Scheduled)
from .systems import EraseKind, SystemId, SystemSpec


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------

def parse_descriptor(text: str, alphabet: Alphabet,
                     default_seed: int = 0) -> Configuration:
    """``prefix:<word>,tail:<spec>`` where <spec> is a constant symbol,
    ``period=<word>``, ``bernoulli=<p>:seed=<n>`` or ``rich=<enumerator>``."""
    prefix, tail_spec = "", None
    for part in text.split(","):
        part = part.strip()
        if part.startswith("prefix:"):
            prefix = part[len("prefix:"):]
        elif part.startswith("tail:"):
            tail_spec = part[len("tail:"):]
        elif part:
            raise UsageError(f"unknown descriptor field {part!r}")
    if tail_spec is None:
        raise UsageError("descriptor needs a tail: field")
    if tail_spec in alphabet.symbols:
        tail = Constant(tail_spec)
    elif tail_spec.startswith("period="):
        tail = Periodic(tail_spec[len("period="):])
    elif tail_spec.startswith("bernoulli="):
        body = tail_spec[len("bernoulli="):]
        seed = default_seed
        if ":" in body:
            body, seed_part = body.split(":", 1)
            if not seed_part.startswith("seed="):
                raise UsageError(f"bad bernoulli tail {tail_spec!r}")
            seed = int(seed_part[len("seed="):])
        p = float(Fraction(body))
        if len(alphabet.symbols) != 2:
            raise UsageError("bernoulli tails are for two-symbol alphabets")
        tail = Sampler(alphabet.symbols, (1 - p, p), seed)
    elif tail_spec.startswith("rich="):
        tail = Scheduled(tail_spec[len("rich="):], alphabet.symbols[0])
    else:
        raise UsageError(f"unknown tail spec {tail_spec!r}")
    try:
        return Configuration(alphabet, prefix, tail)
    except ValueError as ex:
        raise UsageError(str(ex))


def load_oracle(path) -> OracleTable:
    if path is None:
        raise UsageError("this system needs --oracle <file>")
    try:
        with open(path) as fh:
            return table_from_json(fh.read())
    except OSError as ex:
        raise UsageError(f"cannot read oracle file: {ex}")
    except (ValueError, KeyError, TypeError) as ex:
        raise UsageError(f"malformed oracle file {path}: {ex}")


_SYSTEMS = {sid.value: sid for sid in SystemId}


def build_system(args) -> SystemSpec:
    sid = _SYSTEMS[args.system]
    if sid is SystemId.SHIFT:
        return systems.shift_system()
    return SystemSpec(sid, load_oracle(args.oracle))


def build_config(sys_spec: SystemSpec, args, seed: int):
    if sys_spec.is_product:
        if args.init2 is None:
            raise UsageError("product systems need --init2 for the second layer")
        return ProductConfiguration(
            parse_descriptor(args.init, ALPHA_01S, seed),
            parse_descriptor(args.init2, ALPHA_AB, seed + 1))
    alpha = ALPHA_01S if sys_spec.id is SystemId.PI2 else ALPHA_01
    return parse_descriptor(args.init, alpha, seed)


@contextmanager
def out_stream(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _frac(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_orbit(args) -> int:
    sys_spec = build_system(args)
    x = build_config(sys_spec, args, args.seed)
    rows = systems.orbit_windows(sys_spec, x, args.start,
                                 args.start + args.steps + 1, args.window)
    with out_stream(args.out) as fh:
        for t, w in enumerate(rows, start=args.start):
            pair = w if isinstance(w, tuple) else (w,)
            if args.format == "json":
                doc = {"t": t, "w": pair[0]}
                if len(pair) > 1:
                    doc["w2"] = pair[1]
                fh.write(json.dumps(doc) + "\n")
            else:
                fh.write(",".join([str(t), *pair]) + "\n")
    return 0


def cmd_omega(args) -> int:
    sys_spec = build_system(args)
    x = build_config(sys_spec, args, args.seed)
    prof = analysis.omega_profile(sys_spec, x, args.burn_in, args.horizon,
                                  args.depth)
    with out_stream(args.out) as fh:
        if args.format == "csv":
            for w in sorted(prof.words):
                fh.write(w + "\n")
        else:
            json.dump({"depth": prof.depth, "burn_in": prof.burn_in,
                       "horizon": prof.horizon,
                       "words": sorted(prof.words)}, fh, indent=2)
            fh.write("\n")
    return 0


def cmd_measure(args) -> int:
    sys_spec = build_system(args)
    x = build_config(sys_spec, args, args.seed)
    m = analysis.empirical_measure(sys_spec, x, args.steps, args.depth,
                                   start=args.start)
    with out_stream(args.out) as fh:
        if args.format == "json":
            json.dump({"depth": m.depth, "total": m.total,
                       "counts": dict(sorted(m.counts.items()))}, fh, indent=2)
            fh.write("\n")
        else:
            fh.write("word,count,frequency\n")
            for w in sorted(m.counts):
                fh.write(f"{w},{m.counts[w]},{float(m.frequency(w))}\n")
    return 0


def cmd_meets(args) -> int:
    sid = _SYSTEMS[args.system]
    if sid is SystemId.SHIFT:
        raise UsageError("the shift has no attractor predicate; "
                         "pick pi1, sigma2, pi2 or a product system")
    oracle = load_oracle(args.oracle)
    cyl = Cylinder(args.cylinder, args.position)
    verdict = analysis.attractor_meets(sid, cyl, oracle, budget=args.budget)
    with out_stream(args.out) as fh:
        fh.write(analysis.verdict_to_json(
            f"{args.system}-attractor-meets[{args.cylinder}]_{args.position}",
            verdict) + "\n")
    return 0


def cmd_tilde_mu(args) -> int:
    oracle = load_oracle(args.oracle)
    p = parse_fraction(args.p)
    kind = EraseKind.PHI if args.kind == "phi" else EraseKind.PHI_PRIME
    if args.word is not None:
        table = {args.word: analysis.tilde_mu(oracle, p, args.word,
                                              args.truncation, kind)}
    elif args.depth is not None:
        table = analysis.tilde_mu_table(oracle, p, args.depth,
                                        args.truncation, kind)
    else:
        raise UsageError("need --word or --depth")
    with out_stream(args.out) as fh:
        if args.format == "csv":
            fh.write("word,lower,upper\n")
            for w in sorted(table):
                est = table[w]
                fh.write(f"{w},{_frac(est.lower)},{_frac(est.upper)}\n")
        else:
            json.dump({"p": _frac(p), "truncation": args.truncation,
                       "kind": args.kind,
                       "entries": {w: {"lower": _frac(e.lower),
                                       "upper": _frac(e.upper)}
                                   for w, e in sorted(table.items())}},
                      fh, indent=2)
            fh.write("\n")
    return 0


def cmd_realm(args) -> int:
    sys_spec = build_system(args)
    seeds = [build_config(sys_spec, _Replace(args, init=d), args.seed + 17 * i)
             for i, d in enumerate(args.init)]
    target = Cylinder(args.target, args.position)
    witness = analysis.realm_visit_check(sys_spec, seeds, target,
                                         args.match_depth,
                                         args.t_from, args.t_to)
    with out_stream(args.out) as fh:
        doc = {"found": witness is not None}
        if witness is not None:
            doc.update(t=witness.t, seed_index=witness.seed_index)
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return 0


class _Replace:
    """argparse namespace view with one field overridden."""

    def __init__(self, base, **over):
        self._base, self._over = base, over

    def __getattr__(self, name):
        if name in self._over:
            return self._over[name]
        return getattr(self._base, name)


def cmd_interval_eval(args) -> int:
    sys_spec = build_system(args)
    sch = cantor.CantorScheme()
    enc = cantor.f_eval(sch, sys_spec, parse_fraction(args.point),
                        args.precision)
    with out_stream(args.out) as fh:
        json.dump({"lower": _frac(enc.lower), "upper": _frac(enc.upper),
                   "width": float(enc.width)}, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_interval_export(args) -> int:
    sch = cantor.CantorScheme()
    with out_stream(args.out) as fh:
        cantor.export_intervals(sch, args.depth, fh)
    return 0


def cmd_interval_escape(args) -> int:
    sys_spec = build_system(args)
    sch = cantor.CantorScheme()
    res = cantor.escape_fraction(sch, sys_spec, args.iterations,
                                 args.samples, args.seed, args.depth)
    with out_stream(args.out) as fh:
        json.dump(res.to_json(), fh, indent=2)
        fh.write("\n")
    return 0


def cmd_verify(args) -> int:
    report = verify.verify_suite(args.suite)
    with out_stream(args.out) as fh:
        if args.format == "csv":
            fh.write("check,status,measured,expected\n")
            for c in report.checks:
                fh.write(f"{c.name},{c.status},{c.measured},{c.expected}\n")
        else:
            json.dump(report.to_json(), fh, indent=2)
            fh.write("\n")
    if args.out is not None or args.format == "json":
        print(f"{sum(c.status == 'pass' for c in report.checks)}/"
              f"{len(report.checks)} checks passed", file=sys.stderr)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(p, oracle=True, fmt="csv"):
    if oracle:
        p.add_argument("--oracle", help="oracle table JSON file")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=fmt)


def _add_system(p, init=True):
    p.add_argument("--system", required=True, choices=sorted(_SYSTEMS))
    if init:
        p.add_argument("--init", required=True,
                       help="initial-configuration descriptor, e.g. "
                            "prefix:1001,tail:0")
        p.add_argument("--init2", help="second-layer descriptor "
                                       "(product systems)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="symdyn",
        description="simulation and verification workbench for "
                    "oracle-parameterized symbolic dynamics")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="window words along an orbit")
    _add_system(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--start", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("omega", help="set of windows visited after burn-in")
    _add_system(p)
    p.add_argument("--burn-in", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    _add_common(p, fmt="json")
    p.set_defaults(fn=cmd_omega)

    p = sub.add_parser("measure", help="empirical window measure of an orbit")
    _add_system(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--start", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("meets",
                       help="does the attractor meet a cylinder set?")
    _add_system(p, init=False)
    p.add_argument("--cylinder", required=True, help="cylinder word")
    p.add_argument("--position", type=int, default=0)
    p.add_argument("--budget", type=int, default=None,
                   help="step budget for enumerated oracles")
    _add_common(p, fmt="json")
    p.set_defaults(fn=cmd_meets)

    p = sub.add_parser("tilde-mu",
                       help="exact enclosures of the limit window measure")
    p.add_argument("--p", default="1/2", help="Bernoulli weight of symbol 1")
    p.add_argument("--word", help="single window word")
    p.add_argument("--depth", type=int, help="all words of this length")
    p.add_argument("--truncation", type=int, default=24)
    p.add_argument("--kind", choices=["phi", "phi-prime"], default="phi")
    _add_common(p, fmt="json")
    p.set_defaults(fn=cmd_tilde_mu)

    p = sub.add_parser("realm",
                       help="search orbits for a visit to a target cylinder")
    p.add_argument("--system", required=True, choices=sorted(_SYSTEMS))
    p.add_argument("--init", action="append", required=True,
                   help="initial-configuration descriptor (repeatable)")
    p.add_argument("--init2", help="second-layer descriptor")
    p.add_argument("--target", required=True)
    p.add_argument("--position", type=int, default=0)
    p.add_argument("--match-depth", type=int, required=True,
                   help="neighbourhood depth k")
    p.add_argument("--from", dest="t_from", type=int, required=True)
    p.add_argument("--to", dest="t_to", type=int, required=True)
    _add_common(p, fmt="json")
    p.set_defaults(fn=cmd_realm)

    p = sub.add_parser("interval", help="fat-Cantor interval embedding")
    isub = p.add_subparsers(dest="interval_command", required=True)

    q = isub.add_parser("eval", help="rigorous value of the interval map")
    q.add_argument("--system", required=True, choices=sorted(_SYSTEMS))
    q.add_argument("--point", required=True, help="rational in [0,1]")
    q.add_argument("--precision", type=int, default=20)
    _add_common(q, fmt="json")
    q.set_defaults(fn=cmd_interval_eval)

    q = isub.add_parser("export", help="endpoint tree as CSV")
    q.add_argument("--depth", type=int, required=True)
    _add_common(q, oracle=False)
    q.set_defaults(fn=cmd_interval_export)

    q = isub.add_parser("escape", help="certified-outside fraction after n steps")
    q.add_argument("--system", required=True, choices=sorted(_SYSTEMS))
    q.add_argument("--iterations", type=int, required=True)
    q.add_argument("--samples", type=int, default=10_000)
    q.add_argument("--depth", type=int, default=16)
    _add_common(q, fmt="json")
    q.set_defaults(fn=cmd_interval_escape)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all",
                   choices=["all", *verify.SUITES])
    _add_common(p, oracle=False, fmt="json")
    p.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
