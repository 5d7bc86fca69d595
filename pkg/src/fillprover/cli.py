"""Command-line front end.

Five subcommands: `prove` decides a formula and writes a deep-calculus
certificate, `check` validates a certificate with the matching checker,
`translate` rebuilds a certificate in another calculus, `corpus` enumerates
formulas up to a connective bound and decides each in both logics, and
`stats` reports size metrics for a certificate.

Exit statuses: 0 when the request succeeds, 1 when it fails on the merits
(unprovable formula, rejected proof, cut-bearing input declined), 2 for
usage errors, unparseable input, malformed certificates, and fragment
violations.  Diagnostics go to standard error; certificates and records go
to standard output or the --out path.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from contextlib import nullcontext

from .certs import (
    CheckError,
    branch_length,
    certificate_text,
    postorder,
    proof_size,
    read_certificate,
)
from .deep import check_dn_proof
from .display import check_dc_proof, parse_display
from .formula import (
    Atom,
    Excl,
    Formula,
    Lolli,
    Par,
    ParseError,
    Tensor,
    UnitBot,
    UnitI,
    arrow_count,
    formula_key,
    formula_text,
    is_fill_formula,
    parse_formula,
)
from .prover import SearchBudget, decide_formula
from .sequent import parse_sequent, tau_s
from .shallow import check_sn_proof
from .translate import (
    deep_to_shallow,
    display_to_shallow,
    read_display_sequent,
    shallow_to_deep,
    shallow_to_display,
)

__all__ = ["main", "corpus_formulas", "corpus_record", "CORPUS_CAP"]

# enumeration guard: strata grow by roughly a factor of 30 per connective
CORPUS_CAP = 8

_CHECKERS = {"dn": check_dn_proof, "sn": check_sn_proof, "dc": check_dc_proof}


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_cert_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"cannot read {path}: {e}", file=sys.stderr)
        return None
    try:
        return read_certificate(text)
    except CheckError as e:
        print(f"malformed certificate: {e}", file=sys.stderr)
        return None


def cmd_prove(args) -> int:
    try:
        f = parse_formula(args.formula)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    budget = None
    if args.budget_override is not None:
        budget = SearchBudget(args.budget_override, arrow_count(f))
    try:
        decision = decide_formula(f, args.logic, budget)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return 2
    if decision.proved:
        _emit(certificate_text("dn", args.logic, decision.proof), args.out)
        print(f"Proved ({decision.visited} states visited)", file=sys.stderr)
        return 0
    if decision.status == "refuted":
        print("Unprovable", file=sys.stderr)
    else:
        print("Budget exhausted before a decision", file=sys.stderr)
    return 1


def cmd_check(args) -> int:
    cert = _read_cert_file(args.certificate)
    if cert is None:
        return 2
    if args.calculus is not None and args.calculus != cert.calculus:
        print(f"certificate is {cert.calculus}, not {args.calculus}", file=sys.stderr)
        return 1
    logic = args.logic or cert.logic
    try:
        _CHECKERS[cert.calculus](cert.root, logic)
    except CheckError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1
    print(
        f"{cert.calculus} certificate ok under {logic}: {cert.endsequent}",
        file=sys.stderr,
    )
    return 0


def _translated(root, src: str, dst: str, logic: str):
    # a second hop revalidates in biill: translated proofs may use
    # structural rules outside the FILL subset even for FILL endsequents
    if src == "dn":
        sn = deep_to_shallow(root, logic)
        return sn if dst == "sn" else shallow_to_display(sn, "biill")
    if src == "sn":
        return shallow_to_deep(root, logic) if dst == "dn" else shallow_to_display(root, logic)
    sn = display_to_shallow(root, logic)
    return sn if dst == "sn" else shallow_to_deep(sn, "biill")


def cmd_translate(args) -> int:
    cert = _read_cert_file(args.certificate)
    if cert is None:
        return 2
    if args.calculus == cert.calculus:
        print(f"certificate is already in {args.calculus}", file=sys.stderr)
        return 2
    logic = args.logic or cert.logic
    try:
        out_root = _translated(cert.root, cert.calculus, args.calculus, logic)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return 1
    except CheckError as e:
        print(f"input certificate rejected: {e}", file=sys.stderr)
        return 1
    _emit(certificate_text(args.calculus, "biill", out_root), args.out)
    print(
        f"{cert.calculus} -> {args.calculus}: {proof_size(cert.root)} nodes "
        f"in, {proof_size(out_root)} out",
        file=sys.stderr,
    )
    return 0


def _stratum(strata, n: int, logic: str):
    for i in range(n):
        for a in strata[i]:
            for b in strata[n - 1 - i]:
                if formula_key(a) <= formula_key(b):
                    yield Tensor(a, b)
                    yield Par(a, b)
                yield Lolli(a, b)
                if logic == "biill":
                    yield Excl(a, b)


def corpus_formulas(variables, max_connectives: int, logic: str = "biill"):
    """All formulas over the variables plus units, by connective count, one
    representative per commutativity class of * and |.  Deterministic order:
    strata by size, construction order within a stratum.  Lower strata are
    kept for composition; the top stratum streams."""
    leaves: list[Formula] = [Atom(v) for v in variables]
    leaves += [UnitI(), UnitBot()]
    strata: list[list[Formula]] = [leaves]
    yield from leaves
    for n in range(1, max_connectives + 1):
        if n < max_connectives:
            layer = list(_stratum(strata, n, logic))
            strata.append(layer)
            yield from layer
        else:
            yield from _stratum(strata, n, logic)


def _decision_word(status: str) -> str:
    return "unprovable" if status == "refuted" else status


def corpus_record(f: Formula) -> dict:
    """Decide one formula in both logics.  `fill` is null for formulas that
    use exclusion; node and branch metrics come from the BiILL proof."""
    record: dict = {"formula": formula_text(f)}
    if is_fill_formula(f):
        record["fill"] = _decision_word(decide_formula(f, "fill").status)
    else:
        record["fill"] = None
    decision = decide_formula(f, "biill")
    record["biill"] = _decision_word(decision.status)
    if decision.proof is not None:
        record["nodes"] = proof_size(decision.proof)
        record["max_branch"] = branch_length(decision.proof)
    else:
        record["nodes"] = None
        record["max_branch"] = None
    return record


def cmd_corpus(args) -> int:
    if args.max_size < 0 or args.max_size > CORPUS_CAP:
        print(f"--max-size must be between 0 and {CORPUS_CAP}", file=sys.stderr)
        return 2
    variables = [v.strip() for v in args.vars.split(",") if v.strip()]
    if not variables or any(not v.isalpha() or not v.islower() for v in variables):
        print("--vars needs a comma-separated list of lowercase names", file=sys.stderr)
        return 2
    out = nullcontext(sys.stdout) if args.out is None else open(args.out, "w", encoding="utf-8")
    n = 0
    with out as sink:
        for f in corpus_formulas(variables, args.max_size, args.logic):
            sink.write(json.dumps(corpus_record(f)) + "\n")
            n += 1
    print(f"{n} records", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    cert = _read_cert_file(args.certificate)
    if cert is None:
        return 2
    try:
        _CHECKERS[cert.calculus](cert.root, cert.logic)
    except CheckError as e:
        print(f"certificate does not check: {e}", file=sys.stderr)
        return 1
    if cert.calculus == "dc":
        endsequent = read_display_sequent(parse_display(cert.endsequent))
    else:
        endsequent = parse_sequent(cert.endsequent)
    budget = SearchBudget.for_formula(tau_s(endsequent))
    rules = Counter(node.rule for node in postorder(cert.root))
    record = {
        "calculus": cert.calculus,
        "logic": cert.logic,
        "endsequent": cert.endsequent,
        "nodes": proof_size(cert.root),
        "max_branch": branch_length(cert.root),
        "rules": dict(sorted(rules.items())),
        "budget": {"max_branch_length": budget.max_branch_length, "hop_cap": budget.hop_cap},
    }
    _emit(json.dumps(record, indent=2) + "\n", args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fillprover",
        description="decision procedure and proof toolkit for FILL and BiILL",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="decide a formula, write a dn certificate on success")
    p.add_argument("formula", help="formula text, e.g. 'a * (b | c) -o (a * b) | c'")
    p.add_argument("--logic", choices=("fill", "biill"), default="biill")
    p.add_argument("--out", metavar="PATH", help="certificate file (default stdout)")
    p.add_argument(
        "--budget-override",
        type=int,
        metavar="N",
        help="replace the derived branch-length bound (testing only)",
    )
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="validate a certificate with its calculus checker")
    p.add_argument("certificate", help="certificate file")
    p.add_argument("--calculus", choices=("dn", "sn", "dc"), help="require this calculus")
    p.add_argument("--logic", choices=("fill", "biill"), help="override the recorded logic")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("translate", help="rebuild a certificate in another calculus")
    p.add_argument("certificate", help="certificate file")
    p.add_argument("--calculus", choices=("dn", "sn", "dc"), required=True, help="target calculus")
    p.add_argument("--logic", choices=("fill", "biill"), help="validate the input under this logic")
    p.add_argument("--out", metavar="PATH", help="certificate file (default stdout)")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("corpus", help="enumerate and decide formulas, one JSON record per line")
    p.add_argument("--max-size", type=int, default=2, metavar="N", help="connective bound")
    p.add_argument("--vars", default="p,q", metavar="LIST", help="comma-separated atom names")
    p.add_argument(
        "--logic",
        choices=("fill", "biill"),
        default="biill",
        help="biill enumerates exclusion formulas too; decisions are always recorded for both",
    )
    p.add_argument("--out", metavar="PATH", help="records file (default stdout)")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("stats", help="size metrics and search budget for a certificate")
    p.add_argument("certificate", help="certificate file")
    p.add_argument("--out", metavar="PATH", help="metrics file (default stdout)")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    # parsers and proof walks provision their own stack headroom, but give
    # deep user input a comfortable floor up front
    if sys.getrecursionlimit() < 30000:
        sys.setrecursionlimit(30000)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
