"""Command-line front end: ``mmppf validate|check|translate|oracle|format``.

Exit codes:

  0  success / formula true / verdicts agree
  1  input could not be read or parsed (including bad command-line usage)
  2  axiom violations (or admissible inputs without a transition)
  3  formula false
  4  search budget exhausted
  5  formula is not well formed (message names the rule)
  6  translation impossible (MIXED_COMPONENT_CASE, NO_DERIVATION)
  7  checker and oracle disagree
  8  structure exceeds the oracle limits
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import axioms, checker, derived
from .errors import CheckError, GrammarError, MetaInfoError, MmppfError
from .formulas import check_wff
from .metainfo import AbstractionProfile, translate_tr1
from .model import dumps_structure, load_file, load_structure
from .rgtc import format_grammar, load_grammar, parse_grammar, translate_tr2
from .syntax import parse_formula

EXIT_OK, EXIT_LOAD, EXIT_VIOLATION, EXIT_FALSE, EXIT_BUDGET = 0, 1, 2, 3, 4
EXIT_WFF, EXIT_TRANSLATION, EXIT_DISAGREE, EXIT_LIMIT = 5, 6, 7, 8

PACKAGE_CORPUS = Path(__file__).resolve().parent / "corpus"


def corpus_dir() -> Path:
    """The corpus directory: ``$MMPPF_CORPUS`` if set, else the bundled one."""
    env = os.environ.get("MMPPF_CORPUS")
    return Path(env) if env else PACKAGE_CORPUS


def resolve(arg: str) -> Path:
    """``arg`` as given, else looked up inside the corpus directory."""
    p = Path(arg)
    if p.exists():
        return p
    for cand in (corpus_dir() / arg, corpus_dir() / p.name):
        if cand.exists():
            return cand
    return p


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_text(arg: str) -> str:
    """A formula given inline (starting with ``[``) or as a file."""
    if arg.lstrip().startswith("["):
        return arg
    path = resolve(arg)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_LOAD, f"IO_ERROR: cannot read {arg}: {exc.strerror}") from None


def _load_structure(arg: str):
    try:
        return load_file(resolve(arg))
    except MmppfError as exc:
        raise _Fail(EXIT_LOAD, str(exc)) from None


def _parse(text: str, layer: str | None, sig=None):
    try:
        return parse_formula(text.strip(), layer, sig)
    except MmppfError as exc:
        raise _Fail(EXIT_LOAD, str(exc)) from None


def _wff_gate(f):
    bad = check_wff(f)
    if bad:
        raise _Fail(EXIT_WFF, "not well formed: " + "; ".join(map(str, bad)))


def _profile(arg):
    if not arg:
        return None
    try:
        return AbstractionProfile.from_json(resolve(arg))
    except (OSError, MmppfError) as exc:
        raise _Fail(EXIT_LOAD, f"cannot read profile {arg}: {exc}") from None


def _grammar(arg):
    if not arg:
        return None
    try:
        return load_grammar(resolve(arg))
    except MmppfError as exc:
        raise _Fail(EXIT_LOAD, str(exc)) from None


def _anchor(m, arg):
    return max(m.time_set) if arg is None else arg


def _emit(args, human: str, doc: dict):
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(human)


# --- subcommands ----------------------------------------------------------


def cmd_validate(args) -> int:
    m = _load_structure(args.structure)
    reports = axioms.validate_all(m)
    missing = axioms.check_totality(m)
    failed = [r.axiom_id for r in reports if r.status != axioms.PASS]
    lines = []
    for r in reports:
        lines.append(f"axiom {r.axiom_id:2d}: {r.status}")
        for w in r.witnesses:
            lines.append(f"    {json.dumps(w, sort_keys=True)}")
    for miss in missing:
        lines.append(f"no transition: {json.dumps(miss, sort_keys=True)}")
    ok = not failed and not missing
    lines.append("all axioms hold" if ok else f"violated axioms: {failed}" + (" (transition table incomplete)" if missing else ""))
    _emit(args, "\n".join(lines), {
        "status": "PASS" if ok else "FAIL",
        "reports": [r.to_json() for r in reports],
        "missing_transitions": missing,
    })
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_check(args) -> int:
    m = _load_structure(args.structure)
    anchor = _anchor(m, args.anchor)
    f = _parse(_read_text(args.formula), args.layer, m.signature)
    _wff_gate(f)
    profile = _profile(args.profile)
    try:
        if args.layer == "pl":
            res = checker.check(m, anchor, f)
        elif args.layer == "pl*":
            w = _parse(_read_text(args.witness), "pl", m.signature) if args.witness else None
            if w is not None:
                _wff_gate(w)
            res = derived.check_star(m, anchor, f, witness=w, bound=args.bound, profile=profile)
        else:
            w = _parse(_read_text(args.witness), "pl*", m.signature) if args.witness else None
            if w is not None:
                _wff_gate(w)
            res = derived.check_cl(m, anchor, f, witness=w, bound=args.bound, profile=profile,
                                   grammar=_grammar(args.grammar))
    except CheckError as exc:
        if exc.code == "BUDGET_EXHAUSTED":
            raise _Fail(EXIT_BUDGET, str(exc)) from None
        raise _Fail(EXIT_LOAD, str(exc)) from None
    except MmppfError as exc:
        raise _Fail(EXIT_TRANSLATION, str(exc)) from None
    human = "true" if res.value else "false"
    if res.value:
        human += "\n" + json.dumps([list(t) for t in res.traces], indent=2, sort_keys=True)
    elif res.detail.get("reason"):
        human += f" ({res.detail['reason']})"
    _emit(args, human, {"layer": args.layer, "anchor": anchor, **res.to_json()})
    return EXIT_OK if res.value else EXIT_FALSE


def cmd_translate(args) -> int:
    text = _read_text(args.formula)
    sig = _load_structure(args.structure).signature if args.structure else None
    try:
        if args.direction == "tr1":
            f = _parse(text, "pl", sig)
            _wff_gate(f)
            out = translate_tr1(f, _profile(args.profile), sig)
        else:
            # run collapsing is syntactic, so repeated present blocks are accepted
            f = _parse(text, "pl*", sig)
            out = translate_tr2(f, _grammar(args.grammar))
    except (MetaInfoError, GrammarError) as exc:
        code = EXIT_TRANSLATION if exc.code in ("MIXED_COMPONENT_CASE", "NO_DERIVATION") else EXIT_LOAD
        raise _Fail(code, str(exc)) from None
    _emit(args, str(out), {"direction": args.direction, "input": str(f), "output": str(out)})
    return EXIT_OK


def cmd_oracle(args) -> int:
    m = _load_structure(args.structure)
    anchor = _anchor(m, args.anchor)
    f = _parse(_read_text(args.formula), "pl", m.signature)
    _wff_gate(f)
    try:
        expected = checker.oracle_check(m, anchor, f)
        got = checker.check(m, anchor, f).value
    except CheckError as exc:
        if exc.code == "ORACLE_LIMIT_EXCEEDED":
            raise _Fail(EXIT_LIMIT, str(exc)) from None
        raise _Fail(EXIT_LOAD, str(exc)) from None
    agree = expected == got
    human = f"check: {str(got).lower()}\noracle: {str(expected).lower()}\n" + ("agree" if agree else "DISAGREE")
    _emit(args, human, {"check": got, "oracle": expected, "agree": agree})
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_format(args) -> int:
    path = resolve(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_LOAD, f"IO_ERROR: cannot read {args.file}: {exc.strerror}") from None
    try:
        if path.suffix == ".rgtc":
            out = format_grammar(parse_grammar(text))
        elif path.suffix == ".json":
            doc = json.loads(text)
            if "signature" in doc:
                out = dumps_structure(load_structure(doc))
            else:
                out = json.dumps(AbstractionProfile.from_json(doc).to_json(), indent=2, sort_keys=True) + "\n"
        else:
            out = str(parse_formula(text.strip())) + "\n"
    except (MmppfError, json.JSONDecodeError) as exc:
        raise _Fail(EXIT_LOAD, str(exc)) from None
    sys.stdout.write(out)
    return EXIT_OK


# --- argument parsing -----------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which here means "axioms violated"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_LOAD, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(
        prog="mmppf",
        description="Validate structures, check and translate PL / PL* / CL formulas.",
        epilog=__doc__.split("\n", 2)[2],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the eleven axioms")
    v.add_argument("structure")
    v.set_defaults(run=cmd_validate)

    c = sub.add_parser("check", help="decide a formula at a perspective")
    c.add_argument("structure")
    c.add_argument("formula", help="formula file, or the formula itself if it starts with '['")
    c.add_argument("--layer", choices=("pl", "pl*", "cl"), default="pl")
    c.add_argument("--anchor", type=int, help="perspective anchor (default: the latest time)")
    c.add_argument("--witness", help="witness formula one layer down (pl for pl*, pl* for cl)")
    c.add_argument("--bound", type=int, default=derived.DEFAULT_BOUND, help="candidate budget for witness search")
    c.add_argument("--profile", help="abstraction profile JSON")
    c.add_argument("--grammar", help="translation grammar (.rgtc)")
    c.set_defaults(run=cmd_check)

    t = sub.add_parser("translate", help="PL to PL* (tr1) or PL* to CL (tr2)")
    t.add_argument("direction", choices=("tr1", "tr2"))
    t.add_argument("formula")
    t.add_argument("--profile")
    t.add_argument("--grammar")
    t.add_argument("--structure", help="structure whose signature checks the formula")
    t.set_defaults(run=cmd_translate)

    o = sub.add_parser("oracle", help="compare the checker with brute-force enumeration")
    o.add_argument("structure")
    o.add_argument("formula")
    o.add_argument("--anchor", type=int)
    o.set_defaults(run=cmd_oracle)

    fm = sub.add_parser("format", help="print a structure, grammar, profile or formula canonically")
    fm.add_argument("file")
    fm.set_defaults(run=cmd_format)

    for sp in (v, c, t, o, fm):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_LOAD
    try:
        return args.run(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
