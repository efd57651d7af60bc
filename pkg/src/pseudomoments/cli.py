"""Command-line front end: ``pseudomoments generate|verify|enumerate|decompose-check``.

Exit codes: 0 valid, 1 mathematically invalid, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Optional

from . import generators as gen
from .document import (
    CertificateDocument,
    DocumentError,
    document_from_params,
    load_document,
)
from .exactnum import format_scalar, parse_rational
from .forms import FORM_IDS
from .moments import CertificateReport, verify_certificate
from .symmetry import OrbitParams

EXIT_VALID, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- generate --------------------------------------------------------------

# rank -> step subset for the octic extreme construction
REZNICK_RANK_STEPS = {15: (), 14: (2,), 13: (1,), 12: (1, 2), 11: (1, 2, 3)}


def _reznick_extreme(kw, integer_mode, steps):
    if integer_mode:
        raise UsageError("reznick8/extreme has no integer mode; non-saturated values are already integral")
    return gen.gen_reznick_extreme(steps=steps, **kw).params


GENERATORS: dict = {
    ("motzkin", "general"): (("f", "c", "e", "a", "b", "d"), (), lambda kw, im, _: gen.gen_motzkin_general(integer_mode=im, **kw)),
    ("motzkin", "rank7"): (("f", "c", "e", "a"), ("f", "c", "e", "a"), lambda kw, im, _: gen.gen_motzkin_extreme(**kw)),
    ("robinson", "point"): (("a", "b", "c"), ("a", "b", "c"), lambda kw, im, _: _robinson_point(**kw)),
    ("robinson", "extreme"): (("a", "b", "c"), ("a", "b", "c"), lambda kw, im, _: gen.robinson_extreme(**kw)),
    ("reznick8", "general"): (
        ("e", "f", "h", "i", "g", "d", "c", "b", "a"),
        ("e", "f", "h", "i"),
        lambda kw, im, _: gen.gen_reznick_general(integer_mode=im, **kw),
    ),
    ("reznick8", "extreme"): (("e", "f", "h", "i", "g", "d", "a", "b", "c"), ("e", "f", "h", "i", "g"), _reznick_extreme),
    ("choilam", "general"): (("c", "f", "e", "g", "b"), ("c", "f"), lambda kw, im, _: gen.gen_choilam_general(integer_mode=im, **kw)),
    ("choilam", "extreme"): (("u", "v", "b"), ("u", "v"), lambda kw, im, _: gen.gen_choilam_extreme(**kw)),
}


def _robinson_point(a, b, c) -> OrbitParams:
    if not gen.robinson_member(a, b, c):
        raise gen.GeneratorError(None, f"({a}, {b}, {c}) is not a Robinson certificate")
    return OrbitParams("robinson", (a, b, c))


def _parse_sets(items) -> dict:
    out = {}
    for item in items or ():
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            key, sep, val = part.partition("=")
            if not sep:
                raise UsageError(f"--set expects key=value, got {part!r}")
            try:
                out[key.strip()] = parse_rational(val)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--set {key}: {val!r} is not a rational") from None
    return out


def _parse_steps(text: Optional[str]) -> tuple:
    if text is None:
        return (1, 2, 3)
    if text.strip() in ("", "none"):
        return ()
    try:
        return tuple(sorted({int(s) for s in text.split(",")}))
    except ValueError:
        raise UsageError(f"--steps expects a list such as 1,2,3, got {text!r}") from None


def cmd_generate(args) -> tuple:
    key = (args.form, args.algorithm)
    if key not in GENERATORS:
        algs = sorted(a for f, a in GENERATORS if f == args.form)
        raise UsageError(f"algorithm {args.algorithm!r} is not available for {args.form}; choose from {', '.join(algs)}")
    names, required, build = GENERATORS[key]
    kw = _parse_sets(args.set)
    missing = [k for k in required if k not in kw]
    if missing:
        raise UsageError(f"{args.form}/{args.algorithm} needs --set {', '.join(missing)}")
    unknown = set(kw) - set(names)
    if unknown:
        raise UsageError(f"unknown parameter(s) {', '.join(sorted(unknown))}; {args.form}/{args.algorithm} takes {', '.join(names)}")
    steps = _parse_steps(args.steps)
    if args.rank is not None:
        if key != ("reznick8", "extreme"):
            raise UsageError("--rank applies to reznick8/extreme only")
        if args.rank == 10:
            raise UsageError("rank-10 octic certificates are unsupported: the step construction reaches ranks 11 to 15 only")
        if args.rank not in REZNICK_RANK_STEPS:
            raise UsageError(f"--rank must be one of {sorted(REZNICK_RANK_STEPS)}")
        steps = REZNICK_RANK_STEPS[args.rank]
    params = build(kw, args.integer, steps)
    meta = {"generator": f"{args.form}/{args.algorithm}", "seed": {k: format_scalar(v) for k, v in sorted(kw.items())}}
    if key == ("reznick8", "extreme"):
        meta["steps"] = list(steps)
    if args.integer:
        meta["integer_mode"] = True
    doc = document_from_params(params, meta)
    report, ms = _verify_doc(doc, extreme=False)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc.dumps())
    payload = {"report": _report_json(report)}
    if not args.output:
        payload = {"document": doc.to_json(), **payload}
    text = [f"parameters: {params}"]
    if args.output:
        text.append(f"written to {args.output}")
    text.extend(_report_text(report, ms))
    return (EXIT_VALID if report.valid else EXIT_INVALID), payload, text


# -- verify ----------------------------------------------------------------


def _verify_doc(doc: CertificateDocument, extreme: bool):
    t0 = time.perf_counter()
    report = verify_certificate(doc.form_object(), doc.vector(), extreme=extreme)
    return report, (time.perf_counter() - t0) * 1000


def _report_json(r: CertificateReport) -> dict:
    out = {
        "valid": r.valid,
        "value": format_scalar(r.value),
        "psd": r.psd,
        "rank": r.rank,
        "size": r.size,
    }
    if r.form_id is not None:
        out["form"] = r.form_id
    if r.block_ranks is not None:
        out["block_ranks"] = r.block_ranks
    if r.extreme is not None:
        out["extreme"] = r.extreme
        if r.rank_b is not None:
            out["rank_b"] = r.rank_b
    if r.notes:
        out["notes"] = r.notes
    return out


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def _report_text(r: CertificateReport, ms: float) -> list:
    lines = [
        f"valid: {_yes(r.valid)}",
        f"value: {format_scalar(r.value)}",
        f"psd: {_yes(r.psd)}",
        f"rank: {r.rank} of {r.size}",
    ]
    if r.block_ranks is not None:
        lines.append("block ranks: " + " ".join(map(str, r.block_ranks)))
    if r.extreme is not None:
        tail = f" (rank B = {r.rank_b})" if r.rank_b is not None else ""
        lines.append(f"extreme: {_yes(r.extreme)}{tail}")
    lines.extend(f"note: {n}" for n in r.notes)
    lines.append(f"time: {ms:.1f} ms")
    return lines


def cmd_verify(args) -> tuple:
    doc = load_document(args.input)
    if not doc.is_rational():
        raise UsageError("certificates must be rational")
    report, ms = _verify_doc(doc, args.extreme)
    payload = _report_json(report)
    if args.timing:
        payload["timing_ms"] = round(ms, 3)
    return (EXIT_VALID if report.valid else EXIT_INVALID), payload, _report_text(report, ms)


# -- enumerate -------------------------------------------------------------


def cmd_enumerate(args) -> tuple:
    if args.form != "robinson":
        raise UsageError(f"enumeration is only supported for robinson, not {args.form}")
    mode = args.mode
    if mode in ("count", "list", "extreme") and args.a is None:
        raise UsageError(f"--mode {mode} needs --a")
    if args.a is not None and args.a < 1:
        raise UsageError("--a must be a positive integer")
    if mode == "count":
        n = gen.robinson_count(args.a)
        return EXIT_VALID, {"a": args.a, "count": n}, [f"N({args.a}) = {n}"]
    if mode == "list":
        rows = gen.robinson_enumerate(args.a)
        triples = [(args.a, b, c) for b, c in rows]
        label = f"N({args.a}) = {len(rows)}"
    elif mode == "minimal":
        triples = gen.robinson_minimal_integer()
        label = f"minimal a+b+c = {sum(triples[0])}" if triples else "none found"
    else:
        triples = gen.robinson_extreme_rays(args.a)
        label = f"{len(triples)} extreme ray(s) with a <= {args.a}"
    items = [
        {"a": a, "b": b, "c": c, "value": format_scalar(3 * (a - 2 * b + c))} for a, b, c in triples
    ]
    text = [label] + [f"{a} {b} {c}  value {3 * (a - 2 * b + c)}" for a, b, c in triples]
    return EXIT_VALID, {"mode": mode, "triples": items}, text


# -- decompose-check -------------------------------------------------------


def _parse_weights(text: str) -> list:
    try:
        return [parse_rational(w) for w in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--weights expects rationals such as 3/8,5/8, got {text!r}") from None


def cmd_decompose_check(args) -> tuple:
    target = load_document(args.target)
    if not target.is_rational():
        raise UsageError("target must be rational; Q(sqrt2) values are allowed in endpoints only")
    endpoints = [load_document(p, allow_quadext=True) for p in args.endpoint]
    for doc in (target, *endpoints):
        if doc.encoding != "orbit":
            raise UsageError("decomposition documents must use the orbit encoding")
    weights = _parse_weights(args.weights)
    try:
        rep = gen.decompose_check(target.params(), [d.params() for d in endpoints], weights)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {
        "passed": rep.passed,
        "residuals": {k: format_scalar(v) for k, v in rep.residuals.items()},
        "endpoints": [
            {"psd": p, "rank": r, "value": format_scalar(v)}
            for p, r, v in zip(rep.endpoint_psd, rep.endpoint_ranks, rep.endpoint_values)
        ],
        "failures": rep.failures,
    }
    text = [f"passed: {_yes(rep.passed)}"]
    text.append("residuals: " + ", ".join(f"{k}={format_scalar(v)}" for k, v in rep.residuals.items()))
    for k, (p, r, v) in enumerate(zip(rep.endpoint_psd, rep.endpoint_ranks, rep.endpoint_values)):
        text.append(f"endpoint {k}: psd {_yes(p)}, rank {r}, value {format_scalar(v)}")
    text.extend(f"failure: {f}" for f in rep.failures)
    return (EXIT_VALID if rep.passed else EXIT_INVALID), payload, text


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudomoments", description="Exact pseudo-moment certificates for positive non-SOS forms."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func: Callable, help_: str):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.set_defaults(func=func)
        return p

    g = add("generate", cmd_generate, "build a certificate with one of the constructive algorithms")
    g.add_argument("--form", required=True, choices=FORM_IDS)
    g.add_argument("--algorithm", required=True)
    g.add_argument("--set", action="append", metavar="K=V[,K=V...]", help="pin parameters")
    g.add_argument("--steps", help="reznick8/extreme: saturated steps, e.g. 1,2,3 or none")
    g.add_argument("--rank", type=int, help="reznick8/extreme: target rank 11..15")
    g.add_argument("--integer", action="store_true", help="round bounds up to integers")
    g.add_argument("--output", "-o", help="write the document here")

    v = add("verify", cmd_verify, "check a certificate document")
    v.add_argument("input")
    v.add_argument("--extreme", action="store_true", help="also run the extreme-ray test")
    v.add_argument("--timing", action="store_true", help="include timing in JSON output")

    e = add("enumerate", cmd_enumerate, "integer Robinson certificates")
    e.add_argument("--form", default="robinson")
    e.add_argument("--a", type=int)
    e.add_argument("--mode", choices=("count", "list", "minimal", "extreme"), default="count")

    d = add("decompose-check", cmd_decompose_check, "check a convex decomposition into endpoints")
    d.add_argument("--target", required=True)
    d.add_argument("--endpoint", action="append", required=True)
    d.add_argument("--weights", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_VALID
    try:
        code, payload, text = args.func(args)
    except (UsageError, DocumentError, gen.GeneratorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
