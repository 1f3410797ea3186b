"""Command-line interface: ``gentorsion <command> ...``.

Exit codes: 0 success or verified, 1 not found, 2 usage or parse error,
3 inconclusive, 4 refuted.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
import time
from dataclasses import asdict, replace
from pathlib import Path

from .alexander import (
    KNOWN_POLYNOMIALS,
    ContradictionError,
    alexander_polynomial,
    orderability_report,
    parse_polynomial,
)
from .presentations import (
    CATALOG_NAMES,
    Presentation,
    PresentationError,
    abelianization,
    catalog,
    load_presentation,
    presentation_to_json,
    render_presentation,
)
from .search import NotFound, SearchBounds, SearchError, search, search_auto
from .torsion import (
    CertificateError,
    builtin_certificates,
    certificate_from_json,
    certificate_to_json,
    verify,
)
from .word_problem import AbelianWitness, Budget, PermutationWitness, TorusNormalForm, get_oracle
from .words import WordParseError, commutator

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_REFUTED = 0, 1, 2, 3, 4

# per-candidate bounds for --auto: many bases are tried, so each gets a short run
AUTO_BOUNDS = SearchBounds(
    max_conjugator_length=3,
    max_closure=100_000,
    max_depth=4,
    max_word_length=16,
    max_expansions=100,
)


class UsageError(Exception):
    pass


def fixture_dir() -> Path:
    return Path(os.environ.get("GENTORSION_FIXTURES", "fixtures"))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _emit(obj, stream=None):
    print(_dump(obj), file=stream or sys.stdout)


def _presentation(args) -> Presentation:
    sources = [s for s in (getattr(args, "catalog", None), getattr(args, "presentation", None)) if s]
    if len(sources) != 1:
        raise UsageError("give exactly one of --catalog or --presentation")
    if args.catalog:
        return catalog(args.catalog)
    return load_presentation(args.presentation)


def _budget(args) -> Budget:
    return Budget(
        kb_max_rules=args.kb_max_rules,
        quotient_degree=args.quotient_degree,
        seed=args.seed,
    )


_COMMUTATOR = re.compile(r"\[([^\[\],]+),([^\[\],]+)\]")


def parse_base(P: Presentation, text: str):
    """A word, or a commutator written ``[u,v]``."""
    text = text.strip()
    m = _COMMUTATOR.fullmatch(text)
    if m:
        return commutator(P.word(m.group(1).strip()), P.word(m.group(2).strip()))
    return P.word(text)


def _witness_json(P: Presentation, witness):
    if witness is None:
        return None
    if isinstance(witness, (AbelianWitness, PermutationWitness)):
        return witness.to_json()
    if isinstance(witness, TorusNormalForm):
        return {"kind": "torus normal form", "central": witness.central, "syllables": [list(s) for s in witness.syllables]}
    if isinstance(witness, list):
        return {"kind": "relator insertions", "steps": [[pos, P.render(w)] for pos, w in witness]}
    return {"kind": "normal form", "word": str(witness)}


# -- commands ----------------------------------------------------------------------


def cmd_catalog(args) -> int:
    if args.list or not args.name:
        rows = []
        for name in CATALOG_NAMES:
            P = catalog(name)
            rows.append({"name": name, "presentation": render_presentation(P)})
        note = "torus knot groups: T(p,q) for |p|,|q| >= 2, e.g. T(3,4); connected sums: A#B"
        if args.json:
            _emit({"catalog": rows, "families": note})
        else:
            for row in rows:
                print(f"{row['name']:6s} {row['presentation']}")
            print(note)
        return EXIT_OK
    P = load_presentation(args.name)
    ab = abelianization(P)
    info = presentation_to_json(P)
    info["text"] = render_presentation(P)
    info["abelianization"] = {
        "invariant_factors": list(ab.invariant_factors),
        "free_rank": ab.free_rank,
        "weights": list(ab.weights) if ab.weights is not None else None,
    }
    if args.json:
        _emit(info)
    else:
        print(info["text"])
        for key in ("name", "fibred", "meridian", "torus", "one_relator_criterion"):
            if key in info:
                print(f"{key}: {info[key]}")
        print(f"abelianization weights: {info['abelianization']['weights']}")
    return EXIT_OK


def _resolve_certificate(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    for candidate in (fixture_dir() / path, fixture_dir() / f"{path}.json"):
        if candidate.exists():
            return candidate
    raise UsageError(f"no certificate file {path!r}")


def cmd_verify(args) -> int:
    path = _resolve_certificate(args.certificate)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not JSON ({exc})") from exc
    cert = certificate_from_json(data)
    t0 = time.perf_counter()
    result = verify(cert, _budget(args))
    elapsed = time.perf_counter() - t0
    if args.json:
        out = result.to_json()
        out["certificate"] = str(path)
        _emit(out)
    else:
        P = cert.presentation
        print(f"{path}: {result.status}")
        print(f"base: {P.render(cert.base)}")
        print(f"k = {result.k}")
        if result.reason:
            print(f"reason: {result.reason}")
        if args.verbose:
            for entry in result.transcript:
                print("  " + "; ".join(f"{k}={v}" for k, v in entry.items()))
        print(f"time: {elapsed:.2f}s", file=sys.stderr)
    return {"verified": EXIT_OK, "inconclusive": EXIT_INCONCLUSIVE, "refuted": EXIT_REFUTED}[result.status]


def cmd_search(args) -> int:
    P = _presentation(args)
    if bool(args.base) == bool(args.auto):
        raise UsageError("give exactly one of --base or --auto")
    defaults = AUTO_BOUNDS if args.auto else SearchBounds()
    overrides = {
        "max_conjugator_length": args.max_conj,
        "max_closure": args.max_closure,
        "max_depth": args.max_depth,
        "max_word_length": args.max_word_length,
        "max_expansions": args.max_expansions,
    }
    bounds = replace(defaults, **{k: v for k, v in overrides.items() if v is not None})
    if any(v <= 0 for v in asdict(bounds).values()):
        raise UsageError("bounds must be positive")
    budget = _budget(args)
    if args.auto:
        cert, misses = search_auto(P, bounds, budget, threads=args.threads)
        if cert is None:
            out = {
                "result": "not_found",
                "reason": "bounds exhausted for every candidate base",
                "bounds": asdict(bounds),
                "candidates": [m.to_json(P) for m in misses],
            }
            _write(args, out)
            return EXIT_NOT_FOUND
    else:
        cert = search(P, parse_base(P, args.base), bounds, budget)
        if isinstance(cert, NotFound):
            _write(args, cert.to_json(P))
            return EXIT_NOT_FOUND
    _write(args, certificate_to_json(cert))
    return EXIT_OK


def _write(args, obj):
    text = _dump(obj) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _alex_report(args):
    if args.poly:
        if args.catalog or args.presentation:
            raise UsageError("give a polynomial or a presentation, not both")
        poly = parse_polynomial(args.poly)
        return None, orderability_report(polynomial=poly, fibred=args.fibred, one_relator=args.one_relator, strict=False)
    P = _presentation(args)
    poly = alexander_polynomial(P)
    return P, orderability_report(P, poly, fibred=args.fibred, one_relator=args.one_relator or None, strict=False)


def cmd_alex(args) -> int:
    P, report = _alex_report(args)
    if args.plot:
        from .plotting import root_figure

        label = P.name if P is not None and P.name else "input"
        root_figure([(label, report.polynomial, report.roots)], args.plot)
    if args.json:
        _emit(report.to_json())
        return EXIT_OK
    roots = report.roots
    print(f"polynomial: {report.polynomial.pretty()}")
    print(f"real roots: {roots.real_roots}")
    print(f"positive real roots: {roots.positive_real_roots}")
    for r in roots.exact_roots:
        print(f"  exact root {r}")
    for a, b in roots.intervals:
        if a != b:
            print(f"  root in [{a}, {b}]  (~{float(a + b) / 2:.6f})")
    print(f"verdict: {report.verdict}")
    print(f"criterion: {report.criterion}")
    return EXIT_OK


def cmd_wp(args) -> int:
    P = _presentation(args)
    w = parse_base(P, args.word)
    result = get_oracle(P, _budget(args)).is_trivial(w)
    if args.json:
        _emit(
            {
                "word": P.render(w),
                "result": result.value,
                "method": result.method,
                "witness": _witness_json(P, result.witness),
            }
        )
    else:
        print(result.describe())
    return EXIT_OK


def _report_rows():
    rows = []
    for name in CATALOG_NAMES:
        if name == "klein":
            continue
        P = catalog(name)
        rows.append((name, orderability_report(P)))
    for name, (text, fibred) in KNOWN_POLYNOMIALS.items():
        rows.append((name, orderability_report(polynomial=parse_polynomial(text), fibred=fibred)))
    return rows


def cmd_report(args) -> int:
    from .plotting import root_figure

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = _report_rows()
    tsv = out / "alexander.tsv"
    with tsv.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["knot", "polynomial", "degree", "real_roots", "positive_real_roots", "root_intervals", "verdict", "criterion"])
        for name, rep in rows:
            intervals = ";".join(f"[{a},{b}]" for a, b in rep.roots.intervals)
            writer.writerow(
                [name, rep.polynomial.pretty(), rep.roots.degree, rep.roots.real_roots,
                 rep.roots.positive_real_roots, intervals, rep.verdict, rep.criterion]
            )
    png = out / "alexander_roots.png"
    root_figure([(name, rep.polynomial, rep.roots) for name, rep in rows], png)

    cert_tsv = out / "certificates.tsv"
    with cert_tsv.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["certificate", "group", "base", "steps", "k", "status", "seconds"])
        for name, cert in builtin_certificates().items():
            t0 = time.perf_counter()
            res = verify(cert, _budget(args))
            dt = time.perf_counter() - t0
            P = cert.presentation
            writer.writerow([name, P.name or "", P.render(cert.base), len(cert.steps), res.k, res.status, f"{dt:.2f}"])
    for path in (tsv, cert_tsv, png):
        print(path)
    return EXIT_OK


def cmd_export_fixtures(args) -> int:
    out = Path(args.dir) if args.dir else fixture_dir()
    out.mkdir(parents=True, exist_ok=True)
    for name, cert in builtin_certificates().items():
        path = out / f"{name}.json"
        path.write_text(_dump(certificate_to_json(cert)) + "\n", encoding="utf-8")
        print(path)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def _add_budget(p):
    p.add_argument("--seed", type=int, default=0, help="seed for the finite-quotient search order")
    p.add_argument("--kb-max-rules", type=int, default=Budget.kb_max_rules)
    p.add_argument("--quotient-degree", type=int, default=Budget.quotient_degree)


def _add_source(p):
    p.add_argument("--catalog", choices=None, metavar="NAME", help="catalog entry (klein, 3_1, 4_1, 5_1, 5_2)")
    p.add_argument("--presentation", metavar="SRC", help="file, inline <gens | rels>, T(p,q) or A#B")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gentorsion", description="Generalized torsion in finitely presented groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="show a presentation or list the catalog")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="verify a certificate JSON file")
    p.add_argument("certificate", help="path, or a fixture name such as klein")
    p.add_argument("--json", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true", help="print the transcript")
    _add_budget(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="search for a torsion certificate")
    _add_source(p)
    p.add_argument("--base", help="base word, or a commutator [u,v]")
    p.add_argument("--auto", action="store_true", help="try every candidate commutator base")
    p.add_argument("--max-conj", type=int, help="max seed conjugator length")
    p.add_argument("--max-closure", type=int)
    p.add_argument("--max-depth", type=int, help="max number of base conjugates in a product")
    p.add_argument("--max-word-length", type=int)
    p.add_argument("--max-expansions", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    _add_budget(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("alex", help="Alexander polynomial, roots and orderability")
    _add_source(p)
    p.add_argument("--poly", help='polynomial such as "2 - 5t + 2t^2"')
    fib = p.add_mutually_exclusive_group()
    fib.add_argument("--fibred", dest="fibred", action="store_true", default=None)
    fib.add_argument("--not-fibred", dest="fibred", action="store_false")
    p.add_argument("--one-relator", action="store_true", help="apply the one-relator criterion")
    p.add_argument("--plot", metavar="PNG")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_alex)

    p = sub.add_parser("wp", help="decide whether a word is trivial")
    _add_source(p)
    p.add_argument("word")
    p.add_argument("--json", action="store_true")
    _add_budget(p)
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("report", help="write TSV tables and a PNG figure")
    p.add_argument("--out", default="report")
    _add_budget(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export-fixtures", help="write the built-in certificates as JSON")
    p.add_argument("--dir")
    p.set_defaults(func=cmd_export_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PresentationError, WordParseError, CertificateError, SearchError, FileNotFoundError) as exc:
        print(f"gentorsion: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContradictionError as exc:
        print(f"gentorsion: contradiction: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    except ValueError as exc:
        print(f"gentorsion: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
