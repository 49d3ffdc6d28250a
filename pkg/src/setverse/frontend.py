"""Surface syntax for signatures and code expressions, and the CLI driver.

Signatures and queries are s-expressions: trivially deterministic to
parse and matching the tree shape of codes. ``;`` starts a comment that
runs to the end of the line. The canonical printer is
:func:`~setverse.universe.code_sexpr`; parsing its output returns the
original code.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    DuplicateName,
    ElementOutOfRange,
    FrontendError,
    KernelError,
    ParseError,
    UnknownFormer,
)
from .fincore import ElemMap, FinSet
from .report import VerifyReport
from .suites import SUITE_NAMES, run_suite
from .universe import (
    FORMER_ORDER,
    CEmpty,
    CId,
    CN,
    Code,
    CPi,
    CPo0,
    CSigma,
    CSum,
    CUnit,
    PredicateSpec,
    UniverseSig,
    code_sexpr,
    el,
    enumerate_codes,
    eqv_total,
    is_equal,
)

format_code = code_sexpr


# --------------------------------------------------------------------------
# S-expression reader
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _Atom:
    text: str
    line: int
    column: int


def _tokenize(text: str):
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in "()":
            yield (ch, line, col)
            col += 1
            i += 1
            continue
        start = i
        start_col = col
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
            col += 1
        yield (text[start:i], line, start_col)


def _read_sexprs(text: str) -> list:
    """Parse text into nested lists of atoms."""
    stack: list[list] = [[]]
    opens: list[tuple[int, int]] = []
    for tok, line, col in _tokenize(text):
        if tok == "(":
            stack.append([])
            opens.append((line, col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            opens.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(_Atom(tok, line, col))
    if len(stack) != 1:
        line, col = opens[-1]
        raise ParseError("unclosed '('", line, col)
    return stack[0]


def _read_one(text: str):
    forms = _read_sexprs(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one expression, found {len(forms)}")
    return forms[0]


def _head(form) -> str:
    if not isinstance(form, list) or not form or not isinstance(form[0], _Atom):
        raise ParseError("expected a parenthesized form with a head symbol")
    return form[0].text


def _where(form) -> tuple[int | None, int | None]:
    if isinstance(form, list) and form and isinstance(form[0], _Atom):
        return form[0].line, form[0].column
    if isinstance(form, _Atom):
        return form.line, form.column
    return None, None


def _nat(atom) -> int:
    if not isinstance(atom, _Atom) or not atom.text.isdigit():
        line, col = _where(atom)
        raise ParseError("expected a natural number", line, col)
    return int(atom.text)


def _name(atom) -> str:
    if not isinstance(atom, _Atom):
        line, col = _where(atom)
        raise ParseError("expected a name", line, col)
    return atom.text


# --------------------------------------------------------------------------
# Signature files
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SignatureFile:
    """Parsed form of a signature declaration."""

    nullary: tuple[tuple[str, int], ...]
    formers: tuple[str, ...]
    flags: tuple[str, ...] = ()


KNOWN_FLAGS = ("nbad",)


def parse_signature(text: str) -> SignatureFile:
    """Parse a ``(signature ...)`` declaration.

    Clauses: ``(nullary NAME SIZE)`` declares a named base type,
    ``(formers NAME*)`` enables type formers, ``(flags NAME*)`` sets
    optional flags.
    """
    form = _read_one(text)
    if _head(form) != "signature":
        line, col = _where(form)
        raise ParseError("expected a (signature ...) form", line, col)
    nullary: list[tuple[str, int]] = []
    seen: set[str] = set()
    formers: list[str] = []
    flags: list[str] = []
    for clause in form[1:]:
        head = _head(clause)
        if head == "nullary":
            if len(clause) != 3:
                line, col = _where(clause)
                raise ParseError("(nullary NAME SIZE) takes two arguments", line, col)
            name = _name(clause[1])
            size = _nat(clause[2])
            if name in seen:
                raise DuplicateName(f"base type {name!r} declared twice")
            seen.add(name)
            nullary.append((name, size))
        elif head == "formers":
            for atom in clause[1:]:
                former = _name(atom)
                if former not in FORMER_ORDER:
                    raise UnknownFormer(f"unknown former {former!r}")
                if former not in formers:
                    formers.append(former)
        elif head == "flags":
            for atom in clause[1:]:
                flag = _name(atom)
                if flag not in KNOWN_FLAGS:
                    line, col = _where(atom)
                    raise ParseError(f"unknown flag {flag!r}", line, col)
                if flag not in flags:
                    flags.append(flag)
        else:
            line, col = _where(clause)
            raise ParseError(f"unknown signature clause {head!r}", line, col)
    return SignatureFile(tuple(nullary), tuple(formers), tuple(flags))


def build_signature(sigfile: SignatureFile, bij_cap: int = 6) -> UniverseSig:
    return UniverseSig(
        dict(sigfile.nullary),
        sigfile.formers,
        nbad="nbad" in sigfile.flags,
        bij_cap=bij_cap,
    )


def load_signature(path: str, bij_cap: int = 6) -> UniverseSig:
    with open(path, encoding="utf-8") as fh:
        return build_signature(parse_signature(fh.read()), bij_cap)


# --------------------------------------------------------------------------
# Code expressions
# --------------------------------------------------------------------------


def parse_expr(text: str, sig: UniverseSig) -> Code:
    """Parse a code expression and validate it against the signature.

    Grammar: ``(n NAME) | (unit) | (empty) | (sum E E) | (sigma E (E*))
    | (pi E (E*)) | (id E NAT NAT) | (po0 E E E (NAT*) (NAT*))``. Family
    lengths must equal the decoding size of the head; identity endpoints
    and pushout targets must be in range.
    """
    return _build_code(_read_one(text), sig)


def _build_code(form, sig: UniverseSig) -> Code:
    head = _head(form)
    line, col = _where(form)
    args = form[1:]
    if head == "n":
        if len(args) != 1:
            raise ArityMismatch("(n NAME) takes one argument")
        name = _name(args[0])
        if name not in sig.nullary:
            raise ParseError(f"unknown base type {name!r}", line, col)
        return CN(name)
    if head == "unit":
        if args:
            raise ArityMismatch("(unit) takes no arguments")
        _require(sig, "unit")
        return CUnit()
    if head == "empty":
        if args:
            raise ArityMismatch("(empty) takes no arguments")
        _require(sig, "empty")
        return CEmpty()
    if head == "sum":
        if len(args) != 2:
            raise ArityMismatch("(sum E E) takes two arguments")
        _require(sig, "sum")
        return CSum(_build_code(args[0], sig), _build_code(args[1], sig))
    if head in ("sigma", "pi"):
        if len(args) != 2 or not isinstance(args[1], list):
            raise ArityMismatch(f"({head} E (E*)) takes a base and a family list")
        _require(sig, head)
        base = _build_code(args[0], sig)
        fam = tuple(_build_code(a, sig) for a in args[1])
        base_size = el(sig, base).size
        if len(fam) != base_size:
            raise ArityMismatch(
                f"family has {len(fam)} entries but the base decodes to size {base_size}"
            )
        return CSigma(base, fam) if head == "sigma" else CPi(base, fam)
    if head == "id":
        if len(args) != 3:
            raise ArityMismatch("(id E NAT NAT) takes three arguments")
        _require(sig, "id")
        base = _build_code(args[0], sig)
        x, y = _nat(args[1]), _nat(args[2])
        base_size = el(sig, base).size
        for v in (x, y):
            if v >= base_size:
                raise ElementOutOfRange(
                    f"element {v} outside the decoding of size {base_size}"
                )
        return CId(base, x, y)
    if head == "po0":
        if len(args) != 5 or not isinstance(args[3], list) or not isinstance(args[4], list):
            raise ArityMismatch("(po0 E E E (NAT*) (NAT*)) takes three codes and two maps")
        _require(sig, "po0")
        apex = _build_code(args[0], sig)
        left = _build_code(args[1], sig)
        right = _build_code(args[2], sig)
        na = el(sig, apex).size
        maps = []
        for raw, cod in ((args[3], el(sig, left)), (args[4], el(sig, right))):
            targets = tuple(_nat(a) for a in raw)
            if len(targets) != na:
                raise ArityMismatch(
                    f"map has {len(targets)} entries but the apex decodes to size {na}"
                )
            for t in targets:
                if t >= cod.size:
                    raise ElementOutOfRange(
                        f"target {t} outside the decoding of size {cod.size}"
                    )
            maps.append(ElemMap(FinSet(na), cod, targets))
        return CPo0(apex, left, right, maps[0], maps[1])
    raise ParseError(f"unknown code former {head!r}", line, col)


def _require(sig: UniverseSig, former: str) -> None:
    if former not in sig.formers:
        raise UnknownFormer(f"former {former!r} is not enabled in this signature")


# --------------------------------------------------------------------------
# CLI
# --------------------------------------------------------------------------


def _witness_text(w) -> str:
    # Collapsed or StructuralWitness; keep it short and deterministic.
    from .wtrees import Collapsed, StructuralWitness

    if isinstance(w, Collapsed):
        return "collapsed"
    if isinstance(w, StructuralWitness):
        kids = " ".join(_witness_text(c) for c in w.children)
        tgt = ",".join(str(t) for t in w.ident.target_path.fwd.targets)
        return f"(struct [{tgt}] {kids})".replace(" )", ")")
    return repr(w)


def _build_cli() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setverse",
        description="Decidable equality kernel for a closed universe of finite-set type codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="parse and validate a signature file")
    p_check.add_argument("signature")

    p_el = sub.add_parser("el", help="decode an expression to its finite set")
    p_el.add_argument("signature")
    p_el.add_argument("-e", "--expr", required=True)

    p_eq = sub.add_parser("eq", help="decide equality of two code expressions")
    p_eq.add_argument("signature")
    p_eq.add_argument("-e", "--expr", required=True)
    p_eq.add_argument("-f", "--expr2", required=True)
    p_eq.add_argument("--pred", default="isprop")
    p_eq.add_argument("--witnesses", action="store_true")

    p_enum = sub.add_parser("enumerate", help="enumerate codes within budgets")
    p_enum.add_argument("signature")
    p_enum.add_argument("--max-nodes", type=int, default=3)
    p_enum.add_argument("--max-size", type=int, default=6)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("signature")
    p_verify.add_argument("--pred", default="isprop")
    p_verify.add_argument("--suite", default="all", choices=SUITE_NAMES + ("all",))
    p_verify.add_argument("--depth", type=int, default=2)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--json", action="store_true")
    p_verify.add_argument(
        "--force",
        action="store_true",
        help="run the truncation suite even for predicates that do not imply propositionality",
    )
    for p in (p_check, p_el, p_eq, p_enum, p_verify):
        p.add_argument("--bij-cap", type=int, default=6, help="bijection enumeration size cap")
    return parser


def cli_main(argv=None) -> int:
    """Entry point; returns 0 on success, 1 on verification failure, 2 on usage errors."""
    parser = _build_cli()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (FrontendError, KernelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    sig = load_signature(args.signature, args.bij_cap)
    if args.command == "check":
        flags = ", ".join(f for f in ("nbad",) if getattr(sig, f))
        print(
            f"ok: {len(sig.nullary)} nullary, {len(sig.formers)} formers"
            + (f", flags: {flags}" if flags else "")
        )
        return 0
    if args.command == "el":
        code = parse_expr(args.expr, sig)
        print(f"size={el(sig, code).size}")
        return 0
    if args.command == "eq":
        pred = PredicateSpec.parse(args.pred)
        c0 = parse_expr(args.expr, sig)
        c1 = parse_expr(args.expr2, sig)
        if args.witnesses:
            pairs = eqv_total(sig, pred, c0, c1)
            print("equal" if pairs else "unequal")
            for p, w in pairs:
                print(f"path={list(p.fwd.targets)} witness={_witness_text(w)}")
        else:
            print("equal" if is_equal(sig, pred, c0, c1) else "unequal")
        return 0
    if args.command == "enumerate":
        for code in enumerate_codes(sig, args.max_nodes, args.max_size):
            print(code_sexpr(code))
        return 0
    if args.command == "verify":
        pred = PredicateSpec.parse(args.pred)
        reports = run_suite(
            args.suite,
            sig,
            pred,
            seed=args.seed,
            depth=args.depth,
            force=args.force,
        )
        return _emit_reports(reports, as_json=args.json)
    raise AssertionError(f"unhandled command {args.command!r}")


def _emit_reports(reports: list[VerifyReport], as_json: bool) -> int:
    if as_json:
        print(json.dumps([r.to_json_dict() for r in reports], sort_keys=True, indent=None))
    else:
        for r in reports:
            print(r.summary_line())
            for failure in r.failures:
                print(f"  FAIL inputs={failure.inputs} expected={failure.expected} got={failure.got}")
            if r.witness is not None:
                print(f"  witness: {r.witness}")
    return 0 if all(r.passed for r in reports) else 1


def main() -> None:
    sys.exit(cli_main())
