"""Syntax-directed translation with assignment sets and lambda-term outputs.

A grammar is a simple translation scheme: every rule ``A -> (alpha, gamma,
{assignments})`` rewrites input and output in lockstep, with at most one
nonterminal on each side and the same one on both.  Output symbols may be
lambda terms (written in backticks); assignments ``$x := c`` bind a variable
of a term emitted by the same or an earlier rule.  After the derivation the
terms are beta-reduced and must be closed.

File format, one declaration or rule per line::

    # comment
    %start S
    %input  [e|@=|meta o1: b1;0]  ->>
    %output [e|@=|o1|0|b1]
    S -> ( [e|@=|meta o1: b1;0] R , `\\$c:CR. \\$s:TS. [$c|$s|o1|0|b1]` R , { $c := e ; $s := @= } )
    R -> ( , , { } )

Connective tokens (``^``, ``->>``, ``~>``) are always declared on both sides.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import GrammarError
from .formulas import (
    AND,
    INDEP,
    Block,
    Chain,
    ClCompAtom,
    ClPropAtom,
    ClRelAtom,
    CompAtom,
    Formula,
    MetaAtom,
    MetaRelAtom,
)
from .lam import App, Const, Lam, Template, beta_reduce, const, free_vars, parse_term, substitute
from .syntax import parse_cl

CONNECTIVES = frozenset({"^", "->>", "~>"})


@dataclass(frozen=True)
class Term:
    """A lambda-term output symbol; ``text`` is its source form."""

    text: str
    term: object = field(compare=False, hash=False)

    def __str__(self):
        return f"`{self.text}`"


@dataclass(frozen=True)
class Rule:
    lhs: str
    alpha: tuple
    gamma: tuple
    assigns: tuple = ()  # ((var, constant text), ...)

    def __str__(self):
        parts = [self.lhs, "->", "("] + [str(x) for x in self.alpha] + [","]
        parts += [str(x) for x in self.gamma] + [",", "{"]
        parts += " ; ".join(f"${v} := {c}" for v, c in self.assigns).split()
        return " ".join(parts + ["}", ")"])


@dataclass(frozen=True)
class Grammar:
    start: str
    inputs: tuple
    outputs: tuple
    rules: tuple

    @property
    def nonterminals(self) -> frozenset:
        return frozenset(r.lhs for r in self.rules) | {self.start}

    def rules_for(self, a: str) -> list:
        return [(k, r) for k, r in enumerate(self.rules) if r.lhs == a]


# --- reading --------------------------------------------------------------


def _lex(line: str, lineno: int) -> list:
    out = []
    i, n = 0, len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
        elif c == "[":
            depth, j = 0, i
            while j < n:
                depth += line[j] == "["
                depth -= line[j] == "]"
                j += 1
                if depth == 0:
                    break
            if depth:
                raise GrammarError("SYNTAX_ERROR", f"line {lineno}: unbalanced brackets", line=lineno)
            out.append(line[i:j])
            i = j
        elif c == "`":
            j = line.find("`", i + 1)
            if j < 0:
                raise GrammarError("SYNTAX_ERROR", f"line {lineno}: unterminated term", line=lineno)
            out.append(line[i:j + 1])
            i = j + 1
        elif c in "(){},;":
            out.append(c)
            i += 1
        else:
            j = i
            while j < n and not line[j].isspace() and line[j] not in "(){},;[`":
                j += 1
            out.append(line[i:j])
            i = j
    return out


def _symbol(tok: str):
    if tok.startswith("`"):
        return Term(tok[1:-1], parse_term(tok[1:-1]))
    return tok


def _parse_rule(toks: list, lineno: int) -> Rule:
    def fail(msg, code="SYNTAX_ERROR"):
        return GrammarError(code, f"line {lineno}: {msg}", line=lineno)

    if len(toks) < 4 or toks[1] != "->" or toks[2] != "(" or toks[-1] != ")":
        raise fail("expected  A -> ( alpha , gamma , { assignments } )")
    body = toks[3:-1]
    parts, cur, depth = [], [], 0
    for t in body:
        if t == "{":
            depth += 1
        elif t == "}":
            depth -= 1
        if t == "," and depth == 0:
            parts.append(cur)
            cur = []
        else:
            cur.append(t)
    parts.append(cur)
    if len(parts) > 3:
        raise fail("a permutation component is not allowed in a simple scheme", "NOT_SIMPLE")
    if len(parts) < 3:
        raise fail("expected three components (alpha, gamma, assignments)")
    alpha, gamma, asg = parts
    if not asg or asg[0] != "{" or asg[-1] != "}":
        raise fail("the assignment set must be written { ... }")
    assigns = []
    inner = asg[1:-1]
    items, cur = [], []
    for t in inner:
        if t == ";":
            items.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        items.append(cur)
    for it in items:
        if not it:
            continue
        if len(it) < 3 or it[1] != ":=" or not it[0].startswith("$"):
            raise fail(f"bad assignment {' '.join(it)!r}; expected $x := constant")
        value = " ".join(it[2:])
        if value.startswith("pat "):
            pass
        elif len(it) != 3:
            raise fail(f"bad assignment {' '.join(it)!r}")
        assigns.append((it[0][1:], value))
    return Rule(toks[0], tuple(_symbol(t) for t in alpha), tuple(_symbol(t) for t in gamma), tuple(assigns))


def parse_grammar(source) -> Grammar:
    """Read a grammar from text or a path and validate it."""
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        text = source
    start = None
    inputs, outputs, rules = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = _lex(line, lineno)
        if toks[0] == "%start":
            if len(toks) != 2:
                raise GrammarError("SYNTAX_ERROR", f"line {lineno}: %start takes one symbol", line=lineno)
            start = toks[1]
        elif toks[0] == "%input":
            inputs += toks[1:]
        elif toks[0] == "%output":
            outputs += toks[1:]
        elif toks[0] in ("%permutation", "%perm"):
            raise GrammarError("NOT_SIMPLE", f"line {lineno}: permutations are not allowed", line=lineno)
        elif toks[0].startswith("%"):
            raise GrammarError("SYNTAX_ERROR", f"line {lineno}: unknown declaration {toks[0]}", line=lineno)
        else:
            rules.append(_parse_rule(toks, lineno))
    if start is None:
        if not rules:
            raise GrammarError("SYNTAX_ERROR", "empty grammar")
        start = rules[0].lhs
    g = Grammar(start, tuple(dict.fromkeys(inputs)), tuple(dict.fromkeys(outputs)), tuple(rules))
    validate_grammar(g)
    return g


def validate_grammar(g: Grammar) -> None:
    nts = g.nonterminals
    sigma = set(g.inputs) | CONNECTIVES
    upsilon = set(g.outputs) | CONNECTIVES
    overlap = nts & (sigma | upsilon)
    if overlap:
        raise GrammarError("OVERLAPPING_SYMBOLS", f"nonterminals also used as terminals: {sorted(overlap)}")
    for r in g.rules:
        a_nt = [s for s in r.alpha if isinstance(s, str) and s in nts]
        g_nt = [s for s in r.gamma if isinstance(s, str) and s in nts]
        if len(a_nt) > 1 or len(g_nt) > 1:
            raise GrammarError("TOO_MANY_NONTERMINALS", f"rule {r} has more than one nonterminal on a side")
        if a_nt != g_nt:
            raise GrammarError("NONTERMINAL_MISMATCH", f"rule {r} must carry the same nonterminal on both sides")
        for s in r.alpha:
            if isinstance(s, Term):
                raise GrammarError("UNDECLARED_SYMBOL", f"lambda terms may only appear on the output side: {s}")
            if s not in nts and s not in sigma:
                raise GrammarError("UNDECLARED_SYMBOL", f"input symbol {s!r} is not declared", symbol=s)
        for s in r.gamma:
            if isinstance(s, Term):
                continue
            if s not in nts and s not in upsilon:
                raise GrammarError("UNDECLARED_SYMBOL", f"output symbol {s!r} is not declared", symbol=s)


def format_grammar(g: Grammar) -> str:
    """Canonical text: declarations first, then rules in order."""
    lines = [f"%start {g.start}"]
    if g.inputs:
        lines.append("%input " + " ".join(g.inputs))
    if g.outputs:
        lines.append("%output " + " ".join(g.outputs))
    lines += [str(r) for r in g.rules]
    return "\n".join(lines) + "\n"


def load_grammar(path) -> Grammar:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GrammarError("IO_ERROR", f"cannot read {path}: {exc.strerror}", path=str(path)) from None
    return parse_grammar(text)


# --- translation ----------------------------------------------------------


@dataclass
class TranslationRun:
    tokens: tuple
    derivation: tuple = ()  # rule indices, top-down
    assignments: list = field(default_factory=list)  # (rule index, var, const, target record)
    raw_output: tuple = ()  # output symbols after assignments, before the final reduction
    output: tuple = ()  # final output tokens

    def replay_input(self, g: Grammar) -> tuple:
        """Rebuild the input from the derivation's input sides."""
        return _replay(g, self.derivation, "alpha")


def _replay(g, derivation, side):
    nts = g.nonterminals
    left, right = [], []
    for k in derivation:
        seq = getattr(g.rules[k], side)
        idx = next((i for i, s in enumerate(seq) if isinstance(s, str) and s in nts), None)
        if idx is None:
            left += seq
        else:
            left += seq[:idx]
            right = list(seq[idx + 1:]) + right
    return tuple(left + right)


class _Counter:
    def __init__(self, g: Grammar, tokens: tuple):
        self.g = g
        self.toks = tokens
        self.nts = g.nonterminals
        self.memo = {}
        self.active = set()
        self.cyclic = set()
        self.split = {}
        for k, r in enumerate(g.rules):
            for side in (r.alpha,):
                idx = next((i for i, s in enumerate(side) if isinstance(s, str) and s in self.nts), None)
                self.split[k] = (side, idx)

    def count(self, a: str, i: int, j: int) -> int:
        key = (a, i, j)
        if key in self.memo:
            return self.memo[key]
        if key in self.active:
            self.cyclic.add(key)
            return 0
        self.active.add(key)
        total = 0
        for k, _ in self.g.rules_for(a):
            total += self.count_rule(k, i, j)
            if total >= 2:
                total = 2
        self.active.discard(key)
        self.memo[key] = total
        return total

    def count_rule(self, k: int, i: int, j: int) -> int:
        alpha, idx = self.split[k]
        if idx is None:
            return 1 if tuple(alpha) == self.toks[i:j] else 0
        pre, nt, post = alpha[:idx], alpha[idx], alpha[idx + 1:]
        if j - i < len(pre) + len(post):
            return 0
        if tuple(pre) != self.toks[i:i + len(pre)]:
            return 0
        if post and tuple(post) != self.toks[j - len(post):j]:
            return 0
        return min(2, self.count(nt, i + len(pre), j - len(post)))

    def derive(self, a: str, i: int, j: int, out: list) -> None:
        for k, _ in self.g.rules_for(a):
            if self.count_rule(k, i, j):
                out.append(k)
                alpha, idx = self.split[k]
                if idx is not None:
                    self.derive(alpha[idx], i + idx, j - (len(alpha) - idx - 1), out)
                return
        raise AssertionError("derive called on a span without derivations")


def _leading_binder(t):
    return t.var if isinstance(t, Lam) else None


def translate(g: Grammar, tokens) -> TranslationRun:
    """Translate ``tokens`` with the unique derivation of ``g``.

    Raises ``NO_DERIVATION`` when the input is outside the grammar's language
    and ``AMBIGUOUS`` when it has more than one derivation (including the
    infinitely many produced by a cycle of rules that consume nothing).
    """
    tokens = tuple(tokens)
    c = _Counter(g, tokens)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * len(tokens) + 1000))
    try:
        n = c.count(g.start, 0, len(tokens))
        if n == 0:
            raise GrammarError("NO_DERIVATION", f"the input is not in the language of the grammar: {' '.join(tokens)}")
        if n > 1 or any(c.memo.get(key, 0) for key in c.cyclic):
            raise GrammarError("AMBIGUOUS", f"the input has more than one derivation: {' '.join(tokens)}")
        derivation = []
        c.derive(g.start, 0, len(tokens), derivation)
    finally:
        sys.setrecursionlimit(old)

    run = TranslationRun(tokens, tuple(derivation))
    # emit output records in derivation order; each record is [term, rule step, bound names]
    records = []
    nts = g.nonterminals
    left, right = [], []
    for step_no, k in enumerate(derivation):
        r = g.rules[k]
        idx = next((i for i, s in enumerate(r.gamma) if isinstance(s, str) and s in nts), None)
        emitted = []
        for s in r.gamma:
            if isinstance(s, str) and s in nts:
                emitted.append(None)
            elif isinstance(s, Term):
                rec = {"term": s.term, "step": step_no}
                records.append(rec)
                emitted.append(rec)
            else:
                emitted.append(s)
        if idx is None:
            left += emitted
        else:
            left += emitted[:idx]
            right = emitted[idx + 1:] + right
        for var, value in r.assigns:
            _assign(records, var, value, step_no, run)
    sequence = left + right
    run.raw_output = tuple(s if isinstance(s, str) else str(s["term"]) for s in sequence)
    out = []
    for s in sequence:
        if isinstance(s, str):
            out.append(s)
            continue
        t = beta_reduce(s["term"])
        if free_vars(t) or isinstance(t, Lam):
            names = sorted(free_vars(t)) or [t.var]
            raise GrammarError("UNBOUND_VARIABLE", f"variables {names} are never assigned in {t}")
        out.append(_render(t))
    run.output = tuple(out)
    return run


def _constant(value: str):
    if value.startswith("pat "):
        return Const(value[4:].strip(), "PO")
    return const(value)


def _assign(records, var, value, step_no, run):
    c = _constant(value)
    for rec in reversed(records):
        t = rec["term"]
        if var in free_vars(t):
            rec["term"] = substitute(t, var, c)
        elif _leading_binder(t) == var:
            rec["term"] = beta_reduce(App(t, c))
        else:
            continue
        rec.setdefault("bound", set()).add(var)
        run.assignments.append((step_no, var, value))
        return
    if any(var in r.get("bound", ()) for r in records):
        raise GrammarError("REBOUND_VARIABLE", f"${var} is already bound", variable=var)
    raise GrammarError("UNKNOWN_VARIABLE", f"no emitted term has a variable ${var}", variable=var)


def _render(t) -> str:
    if isinstance(t, Template):
        return str(t)
    if isinstance(t, Const):
        return str(t)
    raise GrammarError("TYPE_MISMATCH", f"output term {t} is not a template or constant")


# --- PL* to CL ------------------------------------------------------------


def chain_tokens(ch: Chain) -> tuple:
    """PL* chain as terminals: atoms and connectives, left to right."""
    out = []
    for bi, b in enumerate(ch.blocks):
        if bi:
            out.append(ch.connectives[bi - 1])
        for ai, a in enumerate(b.atoms):
            if ai:
                out.append(AND)
            out.append(str(a))
    return tuple(out)


def cl_atoms(a) -> list:
    """The CL atoms a PL* atom stands for (property atoms split per property)."""
    if isinstance(a, MetaAtom):
        return [ClPropAtom(a.cond, a.sit, a.obj, p, s) for p, s in enumerate(a.symbols)]
    if isinstance(a, CompAtom):
        return [ClCompAtom(a.cond, a.sit, a.obj, a.prop, a.dim, a.symbol)]
    if isinstance(a, MetaRelAtom):
        return [ClRelAtom(a.cond, a.sit, a.subj, a.target, a.symbol)]
    raise GrammarError("UNDECLARED_SYMBOL", f"{a} is not a PL* atom")


def _abstracted(cl_atom) -> Term:
    """``cl_atom`` with condition and situator abstracted as lambda binders."""
    body = str(cl_atom)[len(cl_atom.head()):]  # fields after condition and situator
    text = f"\\$c:CR. \\$s:TS. [$c|$s|{body}"
    return Term(text, parse_term(text))


def _block_output(b: Block):
    out, assigns = [], []
    for a in b.atoms:
        for ca in cl_atoms(a):
            if out:
                out.append(AND)
            out.append(_abstracted(ca))
            assigns += [("c", ca.cond.value), ("s", ca.sit.token)]
    # each $c / $s binds the latest unbound instance, so bind back to front
    return out, _reorder(assigns)


def _reorder(assigns):
    # terms are bound latest-first; emit assignment pairs in reverse term order
    pairs = [assigns[i:i + 2] for i in range(0, len(assigns), 2)]
    return tuple(x for pair in reversed(pairs) for x in pair)


def interval_collapse_grammar(blocks) -> Grammar:
    """The run-collapsing grammar over a vocabulary of distinct PL* blocks.

    Nonterminal ``R<k>`` means "inside a run of block k".  A ``->>`` to the
    same block extends the run and emits nothing; a ``->>`` to another block
    or any ``~>`` starts a new run and emits the block's CL atoms.
    """
    vocab = list(dict.fromkeys(blocks))
    toks = [chain_tokens(Chain((b,))) for b in vocab]
    outs = [_block_output(b) for b in vocab]
    rules = []
    for k, b in enumerate(vocab):
        rules.append(Rule("S", toks[k] + (f"R{k}",), tuple(outs[k][0]) + (f"R{k}",), outs[k][1]))
    for k in range(len(vocab)):
        rk = f"R{k}"
        rules.append(Rule(rk, ("->>",) + toks[k] + (rk,), (rk,), ()))
        for k2 in range(len(vocab)):
            r2 = f"R{k2}"
            if k2 != k:
                rules.append(Rule(rk, ("->>",) + toks[k2] + (r2,), ("->>",) + tuple(outs[k2][0]) + (r2,), outs[k2][1]))
        for k2 in range(len(vocab)):
            r2 = f"R{k2}"
            rules.append(Rule(rk, ("~>",) + toks[k2] + (r2,), ("~>",) + tuple(outs[k2][0]) + (r2,), outs[k2][1]))
        rules.append(Rule(rk, (), (), ()))
    inputs = tuple(dict.fromkeys(t for ts in toks for t in ts if t not in CONNECTIVES))
    g = Grammar("S", inputs, (), tuple(rules))
    validate_grammar(g)
    return g


def vocabulary(f: Formula) -> list:
    return list(dict.fromkeys(b for ch in f.chains for b in ch.blocks))


def translate_tr2(fstar: Formula, g: Grammar | None = None) -> Formula:
    """Collapse the PL* formula ``fstar`` to CL.

    Without ``g`` the interval-collapse grammar over the formula's own block
    vocabulary is used.  Chains are translated independently.
    """
    if fstar.layer != "pl*":
        raise GrammarError("NO_DERIVATION", f"expected a PL* formula, got layer {fstar.layer}")
    g = g or interval_collapse_grammar(vocabulary(fstar))
    chains = []
    for ch in fstar.chains:
        run = translate(g, chain_tokens(ch))
        chains.append(" ".join(run.output))
    try:
        return parse_cl(f" {INDEP} ".join(chains))
    except Exception as exc:  # output outside CL
        raise GrammarError("NO_DERIVATION", f"translation output is not a CL formula: {exc}") from None
