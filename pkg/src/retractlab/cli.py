"""Command-line interface.

Exit codes: 0 check passed / verdict produced, 1 check failed,
2 usage or parse error, 3 resource cap hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import __version__
from .classifier import DEFAULT_BOUND, Status, classify
from .endo import EndoMap, is_retraction, kernel_principal_check
from .expmap import (
    ExpMap,
    constants_bounded,
    find_local_slice,
    localization_identity_check,
    ml_bounded,
    sigma_degree_lc,
    verify_axioms,
)
from .field import parse_field
from .grading import InhomogeneousGenerator, grading_effective, homogeneous_components
from .monomial import (
    BUILTIN_CORPORA,
    CorpusError,
    builtin_corpus,
    corpus_to_json,
    enumerate_monomial_retractions,
    exponent_matrix,
    load_corpus,
    match_families,
)
from .parse import ParseError, default_names, format_polynomial, parse_images, parse_polynomial
from .poly import DegreeCapError, Polynomial

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _names(args, count: int | None = None) -> list[str]:
    if args.vars:
        names = [v.strip() for v in args.vars.split(",") if v.strip()]
    elif count is not None:
        names = default_names(count)
    else:
        raise UsageError("--vars is required")
    if len(set(names)) != len(names):
        raise UsageError("duplicate variable names")
    for r in ("U", "V"):
        if r in names:
            raise UsageError(f"{r} is reserved for exponential maps")
    return names


def _count_images(text: str) -> int:
    parts = text.split(";")
    if parts and not parts[-1].strip():
        parts = parts[:-1]
    return len(parts)


def _endo(args) -> tuple[EndoMap, list[str]]:
    fld = parse_field(args.field)
    names = _names(args, _count_images(args.images))
    imgs = parse_images(args.images, fld, names)
    if len(imgs) != len(names):
        raise UsageError(f"{len(imgs)} images for {len(names)} variables")
    return EndoMap(tuple(imgs)), names


def _expmap(args, text: str) -> tuple[ExpMap, list[str]]:
    fld = parse_field(args.field)
    names = _names(args, _count_images(text))
    imgs = parse_images(text, fld, names + ["U"], allow_reserved=True)
    if len(imgs) != len(names):
        raise UsageError(f"{len(imgs)} images for {len(names)} variables")
    return ExpMap(tuple(imgs)), names


def _fmt(p: Polynomial, names: Sequence[str]) -> str:
    return format_polynomial(p, names)


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


# -- subcommands --------------------------------------------------------------

def cmd_verify_retraction(args) -> int:
    phi, names = _endo(args)
    rep = is_retraction(phi)
    payload = {
        "command": "verify-retraction",
        "field": str(phi.field),
        "vars": names,
        "is_retraction": rep.is_retraction,
        "defects": [{"index": i, "residual": _fmt(r, names)} for i, r in rep.defects],
    }
    lines = [f"retraction: {'yes' if rep else 'no'}"]
    lines += [f"  defect at f{i}: f{i}(f) - f{i} = {_fmt(r, names)}" for i, r in rep.defects]
    _emit(args, payload, lines)
    return EXIT_OK if rep else EXIT_FAIL


def cmd_classify(args) -> int:
    phi, names = _endo(args)
    v = classify(phi, args.bound)
    payload = {"command": "classify", "field": str(phi.field), "vars": names, **v.to_json(names)}
    lines = [f"status: {v.status.value}"]
    if v.status is Status.POLYNOMIAL_RING:
        lines.append(f"dimension: {v.dim}{' (bound-relative)' if v.bound_relative else ''}")
        if v.witnesses is not None:
            lines.append("generators: " + ", ".join(_fmt(w, names) for w in v.witnesses) if v.witnesses else "generators: (none, A = k)")
        else:
            lines.append("generators: not found within the bound")
    for i, r in v.defects:
        lines.append(f"defect at f{i}: {_fmt(r, names)}")
    for r in v.reasons:
        lines.append(f"  [{r.rule}] {r.anchor}" + (f" -- {r.detail}" if r.detail else ""))
    lines.append(f"bound: {args.bound}")
    _emit(args, payload, lines)
    return EXIT_FAIL if v.status is Status.NOT_A_RETRACTION else EXIT_OK


def _mono_str(e, names) -> str:
    if e is None:
        return "0"
    return _fmt(Polynomial.monomial(e), names)


def cmd_enum_monomial(args) -> int:
    if args.n not in (2, 3):
        raise UsageError("--n must be 2 or 3")
    if args.max_exp < 0:
        raise UsageError("--max-exp must be nonnegative")
    names = default_names(args.n)
    t0 = time.perf_counter()
    en = enumerate_monomial_retractions(args.n, args.max_exp, threads=args.threads)
    elapsed = time.perf_counter() - t0
    rows = []
    for t in en.tuples:
        E = exponent_matrix(t)
        rows.append({
            "images": [_mono_str(e, names) for e in t],
            "support": [i + 1 for i in E.support],
            "matrix": [list(r) for r in E.entries],
            "trivial": t in en.trivial,
        })
    payload = {
        "command": "enum-monomial",
        "n": args.n,
        "max_exp": args.max_exp,
        "count": len(en.tuples),
        "trivial_count": len(en.trivial),
        "tuples": rows,
        "seconds": round(elapsed, 4),
    }
    lines = [f"{len(en.tuples)} monomial retractions with exponents <= {args.max_exp} "
             f"({len(en.trivial)} with A = k)"]
    if args.list:
        for r in rows:
            lines.append("  (" + ", ".join(r["images"]) + ")" + ("  [A = k]" if r["trivial"] else ""))
    code = EXIT_OK
    if args.match_corpus:
        src = args.match_corpus
        if src == "builtin":
            patterns = builtin_corpus(f"monomial-n{args.n}")
        elif src in BUILTIN_CORPORA:
            patterns = builtin_corpus(src)
        else:
            patterns = load_corpus(src)
        rep = match_families(en.tuples, patterns, args.max_exp)
        total = len(rep.family_hits)
        payload["match"] = {
            "families": total,
            "families_hit": rep.families_hit,
            "unhit_families": rep.unhit_families,
            "family_hits": rep.family_hits,
            "unmatched": [[_mono_str(e, names) for e in t] for t in rep.unmatched],
            "missing": [{"family_id": f, "images": [_mono_str(e, names) for e in t]} for f, t in rep.missing],
            "trivial": len(rep.trivial),
        }
        lines.append(f"{rep.families_hit}/{total} families matched, {len(rep.unmatched)} unmatched tuples")
        if rep.missing:
            lines.append(f"{len(rep.missing)} family instances missing from the enumeration")
        for t in rep.unmatched:
            lines.append("  unmatched: (" + ", ".join(_mono_str(e, names) for e in t) + ")")
        if rep.unmatched or rep.missing or rep.unhit_families:
            code = EXIT_FAIL
    _emit(args, payload, lines)
    return code


def cmd_expmap(args) -> int:
    texts = args.images
    if args.action != "ml" and len(texts) != 1:
        raise UsageError("give exactly one --images for this action")
    maps = [_expmap(args, t) for t in texts]
    sigma, names = maps[0]
    uname = names + ["U"]
    payload: dict = {"command": f"expmap {args.action}", "field": str(sigma.field), "vars": names, "bound": args.bound}
    lines: list[str] = []
    code = EXIT_OK
    if args.action == "verify":
        rep = verify_axioms(sigma)
        payload.update({
            "axiom_i": rep.axiom_i_ok,
            "axiom_ii": rep.axiom_ii_ok,
            "defects_i": [{"index": i, "residual": _fmt(r, names)} for i, r in rep.defects_i],
            "defects_ii": [{"index": i, "residual": _fmt(r, names + ["U", "V"])} for i, r in rep.defects_ii],
        })
        payload.pop("bound")
        lines.append(f"axiom (i)  sigma(x)|U=0 = x:          {'pass' if rep.axiom_i_ok else 'FAIL'}")
        lines.append(f"axiom (ii) sigma_V o sigma_U = sigma_U+V: {'pass' if rep.axiom_ii_ok else 'FAIL'}")
        for i, r in rep.defects_i:
            lines.append(f"  (i)  residual at x{i}: {_fmt(r, names)}")
        for i, r in rep.defects_ii:
            lines.append(f"  (ii) residual at x{i}: {_fmt(r, names + ['U', 'V'])}")
        code = EXIT_OK if rep else EXIT_FAIL
    elif args.action == "constants":
        basis = constants_bounded(sigma, args.bound)
        payload.update({"dimension": len(basis), "basis": [_fmt(b, names) for b in basis]})
        lines.append(f"constants of degree <= {args.bound}: dimension {len(basis)}")
        lines += [f"  {_fmt(b, names)}" for b in basis]
    elif args.action == "slice":
        info = find_local_slice(sigma, args.bound)
        if info is None:
            payload.update({"slice": None, "degree": None, "leading": None, "localization": None})
            lines.append(f"sigma fixes every monomial of degree <= {args.bound}; no local slice")
        else:
            loc = localization_identity_check(sigma, info, args.bound)
            gen_names = [f"c{i + 1}" for i in range(len(loc.generators) - 1)] + ["s"]
            payload.update({
                "slice": _fmt(info.slice, names),
                "degree": info.degree,
                "leading": _fmt(info.leading, names),
                "localization": {
                    "certified": loc.certified,
                    "slice_indeterminate": loc.slice_indeterminate,
                    "generators": [_fmt(g, names) for g in loc.generators],
                    "identities": {
                        str(i): {"power": loc.exponents[i], "expression": _fmt(c.expression, gen_names)}
                        for i, c in loc.certificates.items()
                    },
                },
            })
            lines.append(f"local slice: s = {_fmt(info.slice, names)}, deg_sigma = {info.degree}, "
                         f"leading coefficient a = {_fmt(info.leading, names)}")
            lines.append(f"localization certified: {'yes' if loc.certified else 'no'}")
            for k, g in zip(gen_names, loc.generators):
                lines.append(f"  {k} = {_fmt(g, names)}")
            for i, c in loc.certificates.items():
                lines.append(f"  a^{loc.exponents[i]} * {names[i - 1]} = {_fmt(c.expression, gen_names)}")
            code = EXIT_OK if loc.certified else EXIT_FAIL
    elif args.action == "ml":
        sigmas = [m for m, _ in maps]
        basis = ml_bounded(sigmas, args.bound)
        payload.update({"maps": len(sigmas), "dimension": len(basis), "basis": [_fmt(b, names) for b in basis]})
        lines.append(f"common constants of {len(sigmas)} map(s), degree <= {args.bound} "
                     f"(upper approximation): dimension {len(basis)}")
        lines += [f"  {_fmt(b, names)}" for b in basis]
    elif args.action == "degree":
        if not args.element:
            raise UsageError("--element is required for degree")
        b = parse_polynomial(args.element, sigma.field, names)
        d, lc = sigma_degree_lc(sigma, b)
        payload.update({"element": _fmt(b, names), "degree": d, "leading": _fmt(lc, names)})
        payload.pop("bound")
        lines.append(f"deg_sigma = {d}, lc_sigma = {_fmt(lc, names)}")
    if args.action not in ("verify", "degree"):
        lines.append(f"bound: {args.bound}")
    _emit(args, payload, lines)
    return code


def _parse_weights(text: str) -> list[int]:
    try:
        return [int(w) for w in text.split(",")]
    except ValueError:
        raise UsageError(f"bad weight vector {text!r}") from None


def cmd_grading(args) -> int:
    fld = parse_field(args.field)
    weights = _parse_weights(args.weights)
    names = _names(args, len(weights))
    if len(weights) != len(names):
        raise UsageError(f"{len(weights)} weights for {len(names)} variables")
    gens = parse_images(args.gens, fld, names)
    payload = {"command": "grading", "weights": weights, "vars": names, "generators": [_fmt(g, names) for g in gens]}
    try:
        rep = grading_effective(gens, weights)
    except InhomogeneousGenerator as exc:
        comps = homogeneous_components(exc.generator, weights)
        payload.update({
            "effective": None,
            "error": "inhomogeneous generator",
            "offending": _fmt(exc.generator, names),
            "components": {str(d): _fmt(c, names) for d, c in comps.items()},
        })
        lines = [f"error: generator {_fmt(exc.generator, names)} is not homogeneous "
                 f"(components in degrees {', '.join(map(str, comps))})"]
        _emit(args, payload, lines)
        return EXIT_FAIL
    payload.update({"effective": rep.effective, "degrees": list(rep.degrees)})
    lines = [f"induced grading effective (A_0 != A): {'yes' if rep else 'no'}",
             "generator degrees: " + ", ".join(str(d) for d in rep.degrees)]
    _emit(args, payload, lines)
    return EXIT_OK if rep else EXIT_FAIL


def cmd_kernel_check(args) -> int:
    phi, names = _endo(args)
    h = parse_polynomial(args.h, phi.field, names)
    if not is_retraction(phi):
        raise UsageError("images do not define a retraction")
    rep = kernel_principal_check(phi, h, args.bound)
    payload = {
        "command": "kernel-check",
        "field": str(phi.field),
        "vars": names,
        "h": _fmt(h, names),
        "holds": rep.holds,
        "bound": rep.bound,
        "failure": None if rep.failure is None else _fmt(Polynomial.monomial(rep.failure, 1, phi.field), names),
        "reason": rep.reason,
    }
    lines = [f"Ker(phi) = (h) up to degree {rep.bound}: {'yes' if rep else 'no'}"]
    if not rep:
        lines.append(f"  {rep.reason}" + (f" at b = {payload['failure']}" if rep.failure else ""))
    lines.append(f"bound: {rep.bound}")
    _emit(args, payload, lines)
    return EXIT_OK if rep else EXIT_FAIL


def cmd_export_corpus(args) -> int:
    patterns = builtin_corpus(args.source) if args.source in BUILTIN_CORPORA else load_corpus(args.source)
    print(corpus_to_json(patterns))
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="retractlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, images=True):
        sp.add_argument("--field", default="Q", help="Q or F<p> (default Q)")
        sp.add_argument("--vars", help="comma-separated variable names (default x,y,z)")
        if images:
            sp.add_argument("--images", required=True, help='images separated by ";"')
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("verify-retraction", help="check f_i(f) = f_i")
    common(sp)
    sp.set_defaults(func=cmd_verify_retraction)

    sp = sub.add_parser("classify", help="decide whether the retract is a polynomial ring")
    common(sp)
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("enum-monomial", help="enumerate monomial retractions")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-exp", type=int, required=True)
    sp.add_argument("--match-corpus", metavar="PATH", help="corpus file, a builtin corpus name, or 'builtin'")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--list", action="store_true", help="print every tuple")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_enum_monomial)

    sp = sub.add_parser("expmap", help="exponential maps sigma(x_i) in terms of x and U")
    sp.add_argument("action", choices=["verify", "constants", "slice", "ml", "degree"])
    common(sp, images=False)
    sp.add_argument("--images", required=True, action="append", help='images separated by ";" (repeat for ml)')
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    sp.add_argument("--element", help="element whose sigma-degree is wanted (degree action)")
    sp.set_defaults(func=cmd_expmap)

    sp = sub.add_parser("grading", help="effectiveness of a weight grading on a subalgebra")
    common(sp, images=False)
    sp.add_argument("--weights", required=True)
    sp.add_argument("--gens", required=True, help='generators separated by ";"')
    sp.set_defaults(func=cmd_grading)

    sp = sub.add_parser("kernel-check", help="check Ker(phi) = (h) up to a degree bound")
    common(sp)
    sp.add_argument("--h", required=True)
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    sp.set_defaults(func=cmd_kernel_check)

    sp = sub.add_parser("export-corpus", help="print a corpus file as JSON")
    sp.add_argument("source", help="corpus path or builtin name (" + ", ".join(BUILTIN_CORPORA) + ")")
    sp.set_defaults(func=cmd_export_corpus)
    return p


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "bound", 1) is not None and getattr(args, "bound", 1) < 1:
        print("error: --bound must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, UsageError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegreeCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
