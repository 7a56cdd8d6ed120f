"""Command line front end: ``qaraki verify | moments | conjugate | classify | bounds``.

Letters and generator indices on the command line are 1-based.
"""
from __future__ import annotations

import argparse
import sys

from . import arith, report
from .bounds import check_bounds
from .classify import classify_deformation, classify_type
from .config import SUITES, ConfigError, load
from .deformation import DeformationError
from .dualvars import conjugate_pairing_check, conjugate_series
from .fock import FockError
from .verify import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, Context, deformation_for, run_verify
from .wick import moment, moment_pairings


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--arithmetic", choices=list(arith.MODES))
    p.add_argument("--truncation", type=int, dest="N", metavar="N")
    p.add_argument("--q", help='deformation parameter, e.g. "1/2"')
    p.add_argument("--tolerance", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaraki", description="q-Gaussian dual/conjugate system verifier")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("--suite", action="append", choices=list(SUITES), dest="suites")
    p.add_argument("--m-max", type=int, dest="m_max")
    p.add_argument("--timings", action="store_true", default=None)

    p = sub.add_parser("moments", help="vacuum moment of a word by both routes")
    _common(p)
    p.add_argument("word", nargs="+", type=int)

    p = sub.add_parser("conjugate", help="conjugate variable coefficients and pairing table")
    _common(p)
    p.add_argument("index", type=int)

    p = sub.add_parser("classify", help="factor type from the spectrum")
    _common(p)
    p.add_argument("--lambdas", nargs="*", help="eigenvalues (rationals p/q or decimals)")

    p = sub.add_parser("bounds", help="norm estimates and majorant ratio test")
    _common(p)
    p.add_argument("--m-max", type=int, dest="m_max")
    return parser


def _overrides(args) -> dict:
    keys = ("arithmetic", "N", "q", "tolerance", "seed", "suites", "m_max", "timings")
    return {k: getattr(args, k, None) for k in keys}


def _emit(args, payload: dict, text: str) -> None:
    blob = report.dumps(payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(blob)
        sys.stdout.write(text)
    else:
        sys.stdout.write(blob)
        sys.stderr.write(text)


def _letters(ctx: Context, raw, what: str) -> tuple:
    out = []
    for a in raw:
        if not 1 <= a <= ctx.F.d:
            raise ConfigError(what, f"index {a} outside 1..{ctx.F.d}")
        out.append(a - 1)
    return tuple(out)


def cmd_verify(args) -> int:
    cfg = load(args.config, _overrides(args))
    rep, code = run_verify(cfg, Context(cfg))
    rows = [(e["name"], e["status"], e.get("max_residual", 0.0)) for e in rep["suites"]]
    _emit(args, rep, report.table(["suite", "status", "max_residual"], rows))
    return code


def cmd_moments(args) -> int:
    cfg = load(args.config, _overrides(args))
    ctx = Context(cfg)
    word = _letters(ctx, args.word, "word")
    if len(word) > cfg.N:
        raise ConfigError("word", f"length {len(word)} exceeds truncation N={cfg.N}")
    a, b = moment(ctx.F, word), moment_pairings(ctx.F, word)
    equal = a == b if ctx.exact else abs(complex(a - b)) <= cfg.tolerance
    payload = {"schema": report.SCHEMA, "word": list(args.word), "matrix": a, "pairings": b, "equal": bool(equal)}
    _emit(args, payload, report.table(["route", "value"], [("matrix", a), ("pairings", b)]))
    return EXIT_OK if equal else EXIT_FAIL


def cmd_conjugate(args) -> int:
    cfg = load(args.config, _overrides(args))
    ctx = Context(cfg)
    (i,) = _letters(ctx, [args.index], "index")
    F = ctx.F
    xi = conjugate_series(F, i)
    coeffs = {}
    for w, c in xi.coefficients().items():
        coeffs.setdefault(str(len(w)), {})[" ".join(str(a + 1) for a in w) or "()"] = c
    rows, pairing, ok = [], [], True
    for w in F.all_words():
        lhs, rhs = conjugate_pairing_check(F, i, w, xi=xi)
        eq = lhs == rhs if ctx.exact else abs(complex(lhs - rhs)) <= cfg.tolerance
        ok = ok and bool(eq)
        label = " ".join(str(a + 1) for a in w) or "()"
        pairing.append({"word": [a + 1 for a in w], "lhs": lhs, "rhs": rhs, "equal": bool(eq)})
        rows.append((label, lhs, rhs, "yes" if eq else "NO"))
    payload = {"schema": report.SCHEMA, "index": args.index, "coefficients": coeffs, "pairing": pairing}
    text = "xi coefficients by level:\n"
    text += report.table(["level", "word", "coefficient"], [(n, w, c) for n, lv in coeffs.items() for w, c in lv.items()])
    text += "\npairing check:\n" + report.table(["word", "lhs", "rhs", "equal"], rows)
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(args) -> int:
    cfg = load(args.config, _overrides(args))
    if args.lambdas is not None:
        vals = args.lambdas
        exact = all("." not in v and "e" not in v.lower() for v in vals)
        try:
            label = classify_type(vals if exact else [float(v) for v in vals], exact=exact, Q=cfg.Q, eps=cfg.eps)
        except ValueError as exc:
            raise ConfigError("lambdas", str(exc)) from None
    else:
        label = classify_deformation(deformation_for(cfg), Q=cfg.Q, eps=cfg.eps)
    payload = {
        "schema": report.SCHEMA,
        "type": str(label),
        "kind": label.kind,
        "lambda": label.lam,
        "generator": label.generator,
        "provenance": label.provenance,
    }
    text = report.table(["type", "generator", "provenance"], [(str(label), label.generator, label.provenance)])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_bounds(args) -> int:
    cfg = load(args.config, _overrides(args))
    ctx = Context(cfg)
    rep = check_bounds(ctx.F, cfg.m_max)
    rt = rep.ratio_test
    payload = {
        "schema": report.SCHEMA,
        "constants": {"C": rep.C, "C_reference": rep.C_reference, "D": rep.D, "E": rep.E, "B": rep.B},
        "entries": [
            {"family": e.family, "label": e.label, "lhs": e.lhs, "rhs": e.rhs, "slack": e.slack} for e in rep.entries
        ],
        "measured_over_bound": rep.measured_ratio(),
        "ratio_test": {
            "certified": rt.certified,
            "m0": rt.m0,
            "ratios": rt.ratios,
            "log10_partial_sum": rt.log10_partial_sum,
            "log10_tail_bound": rt.log10_tail_bound,
        },
        "passed": rep.passed,
    }
    rows = [(e.family, e.label, e.lhs, e.rhs, e.slack) for e in rep.entries]
    text = report.table(["family", "check", "lhs", "rhs", "slack"], rows)
    text += f"\nratio test: m0={rt.m0} log10(partial sum)={rt.log10_partial_sum:.4f}\n"
    _emit(args, payload, text)
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "moments": cmd_moments,
    "conjugate": cmd_conjugate,
    "classify": cmd_classify,
    "bounds": cmd_bounds,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DeformationError, FockError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
