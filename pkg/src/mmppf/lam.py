"""Simply typed lambda terms used as translation outputs.

Terms are built from constants tagged with a category, variables, typed
abstractions, applications and *templates* (bracketed field lists that
become CL atoms once every field is a constant).  Free variables are
untyped holes: they are filled by assignment sets during translation.

Text form::

    \\$c:CR. \\$s:TS. [$c|$s|o1|0|$x]      abstraction with typed binders
    (f a)                                  application, left associative
    e h        <| @= |>        0 1 ...      condition, situator, integer constants
    b1 ~ k2 ...                            metainformation symbols
    pat name                               pattern constant
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass

from .errors import GrammarError
from .formulas import META_SYMBOLS

CATEGORIES = ("CR", "TS", "O", "PO", "INT", "META", "F")


@dataclass(frozen=True)
class Arrow:
    dom: object
    cod: object

    def __str__(self):
        return f"({self.dom}->{self.cod})"


@dataclass(frozen=True)
class Const:
    value: str
    cat: str

    def __str__(self):
        return f"pat {self.value}" if self.cat == "PO" else self.value


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return f"${self.name}"


@dataclass(frozen=True)
class Lam:
    var: str
    type: object
    body: object

    def __str__(self):
        return f"\\${self.var}:{self.type}. {self.body}"


@dataclass(frozen=True)
class App:
    fn: object
    arg: object

    def __str__(self):
        fn = f"({self.fn})" if isinstance(self.fn, Lam) else str(self.fn)
        arg = f"({self.arg})" if isinstance(self.arg, (Lam, App)) else str(self.arg)
        return f"{fn} {arg}"


@dataclass(frozen=True)
class Template:
    fields: tuple

    def __str__(self):
        return "[" + "|".join(f"({f})" if isinstance(f, (Lam, App)) else str(f) for f in self.fields) + "]"


def const(text: str) -> Const:
    """The constant denoted by a bare token, with its inferred category."""
    if text in ("e", "h"):
        return Const(text, "CR")
    if text in ("<|", "@=", "|>"):
        return Const(text, "TS")
    if text.isdigit():
        return Const(text, "INT")
    if text in META_SYMBOLS:
        return Const(text, "META")
    return Const(text, "O")


# --- free variables and substitution --------------------------------------


def free_vars(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, Template):
        return set().union(*(free_vars(f) for f in t.fields)) if t.fields else set()
    return set()


def _fresh(base: str, avoid: set) -> str:
    stem = base.rstrip("0123456789'") or "v"
    for k in itertools.count(1):
        cand = f"{stem}{k}"
        if cand not in avoid:
            return cand


def substitute(t, name: str, value):
    """Capture-avoiding ``t[name := value]``."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, App):
        return App(substitute(t.fn, name, value), substitute(t.arg, name, value))
    if isinstance(t, Template):
        return Template(tuple(substitute(f, name, value) for f in t.fields))
    if isinstance(t, Lam):
        if t.var == name:
            return t
        fv = free_vars(value)
        if t.var in fv and name in free_vars(t.body):
            new = _fresh(t.var, fv | free_vars(t.body) | {name})
            body = substitute(t.body, t.var, Var(new))
            return Lam(new, t.type, substitute(body, name, value))
        return Lam(t.var, t.type, substitute(t.body, name, value))
    return t


# --- typing ---------------------------------------------------------------


def _compatible(expected, got) -> bool:
    if got is None:  # an unfilled hole fits anywhere
        return True
    if expected == got:
        return True
    return expected == "O" and got == "PO"


def type_of(t, env: dict | None = None):
    """The type of ``t``; ``None`` for an unfilled hole.

    Raises ``TYPE_MISMATCH`` when an application's argument does not fit the
    binder, or a template field is not a first-order value.
    """
    env = env or {}
    if isinstance(t, Const):
        return t.cat
    if isinstance(t, Var):
        return env.get(t.name)
    if isinstance(t, Lam):
        return Arrow(t.type, type_of(t.body, {**env, t.var: t.type}))
    if isinstance(t, App):
        ft = type_of(t.fn, env)
        at = type_of(t.arg, env)
        if ft is None:
            return None
        if not isinstance(ft, Arrow):
            raise GrammarError("TYPE_MISMATCH", f"{t.fn} of type {ft} cannot be applied")
        if not _compatible(ft.dom, at):
            raise GrammarError("TYPE_MISMATCH", f"{t.fn} expects {ft.dom}, got {t.arg} of type {at}")
        return ft.cod
    if isinstance(t, Template):
        for f in t.fields:
            ft = type_of(f, env)
            if isinstance(ft, Arrow):
                raise GrammarError("TYPE_MISMATCH", f"template field {f} has function type {ft}")
        return "F"
    raise GrammarError("TYPE_MISMATCH", f"not a term: {t!r}")


# --- reduction ------------------------------------------------------------


def _step_normal(t):
    """One leftmost-outermost beta step, or ``None`` at normal form."""
    if isinstance(t, App):
        if isinstance(t.fn, Lam):
            return substitute(t.fn.body, t.fn.var, t.arg)
        s = _step_normal(t.fn)
        if s is not None:
            return App(s, t.arg)
        s = _step_normal(t.arg)
        return None if s is None else App(t.fn, s)
    if isinstance(t, Lam):
        s = _step_normal(t.body)
        return None if s is None else Lam(t.var, t.type, s)
    if isinstance(t, Template):
        for i, f in enumerate(t.fields):
            s = _step_normal(f)
            if s is not None:
                return Template(t.fields[:i] + (s,) + t.fields[i + 1:])
    return None


def beta_reduce(t, max_steps: int = 100_000):
    """Type-check ``t`` and reduce it to beta-normal form (normal order)."""
    type_of(t)
    for _ in range(max_steps):
        s = _step_normal(t)
        if s is None:
            return t
        t = s
    raise GrammarError("REDUCTION_LIMIT", f"no normal form within {max_steps} steps")


def redexes(t, path=()):
    """Paths to every beta redex in ``t``."""
    out = []
    if isinstance(t, App):
        if isinstance(t.fn, Lam):
            out.append(path)
        out += redexes(t.fn, path + (0,))
        out += redexes(t.arg, path + (1,))
    elif isinstance(t, Lam):
        out += redexes(t.body, path + (0,))
    elif isinstance(t, Template):
        for i, f in enumerate(t.fields):
            out += redexes(f, path + (i,))
    return out


def contract(t, path):
    """Contract the redex at ``path``."""
    if not path:
        return substitute(t.fn.body, t.fn.var, t.arg)
    head, rest = path[0], path[1:]
    if isinstance(t, App):
        return App(contract(t.fn, rest), t.arg) if head == 0 else App(t.fn, contract(t.arg, rest))
    if isinstance(t, Lam):
        return Lam(t.var, t.type, contract(t.body, rest))
    fields = list(t.fields)
    fields[head] = contract(fields[head], rest)
    return Template(tuple(fields))


def reduce_randomly(t, rng: random.Random, max_steps: int = 100_000):
    """Reduce to normal form choosing a random redex at every step."""
    for _ in range(max_steps):
        rs = redexes(t)
        if not rs:
            return t
        t = contract(t, rng.choice(rs))
    raise GrammarError("REDUCTION_LIMIT", f"no normal form within {max_steps} steps")


def _debruijn(t, scope=()):
    if isinstance(t, Var):
        return ("var", scope.index(t.name)) if t.name in scope else ("free", t.name)
    if isinstance(t, Lam):
        return ("lam", t.type, _debruijn(t.body, (t.var,) + scope))
    if isinstance(t, App):
        return ("app", _debruijn(t.fn, scope), _debruijn(t.arg, scope))
    if isinstance(t, Template):
        return ("tpl",) + tuple(_debruijn(f, scope) for f in t.fields)
    return ("const", t.value, t.cat)


def alpha_equal(a, b) -> bool:
    return _debruijn(a) == _debruijn(b)


# --- text form ------------------------------------------------------------

_TERM_TOKEN = re.compile(
    r"\s*(?:(?P<punct><\||\|>|@=|->|[\\\.\(\)\[\]\|:~])|(?P<var>\$[A-Za-z_][A-Za-z0-9_']*)|(?P<word>[A-Za-z0-9_][A-Za-z0-9_']*))"
)


def _tokens(text: str):
    out = []
    i = 0
    while True:
        while i < len(text) and text[i].isspace():
            i += 1
        if i >= len(text):
            return out
        m = _TERM_TOKEN.match(text, i)
        if not m or m.end() == i:
            raise GrammarError("SYNTAX_ERROR", f"unexpected character {text[i]!r} in term {text!r}")
        out.append((m.lastgroup, m.group(m.lastgroup)))
        i = m.end()


class _TermParser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else None

    def kind(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def next(self):
        if self.i >= len(self.toks):
            raise GrammarError("SYNTAX_ERROR", f"unexpected end of term {self.text!r}")
        self.i += 1
        return self.toks[self.i - 1][1]

    def expect(self, s):
        got = self.next()
        if got != s:
            raise GrammarError("SYNTAX_ERROR", f"expected {s!r}, found {got!r} in term {self.text!r}")

    def term(self):
        if self.peek() == "\\":
            self.next()
            v = self.next()
            if not v.startswith("$"):
                raise GrammarError("SYNTAX_ERROR", f"binder must be a $variable, found {v!r}")
            self.expect(":")
            ty = self.type()
            self.expect(".")
            return Lam(v[1:], ty, self.term())
        t = self.atom()
        while self.peek() not in (None, ")", "]", "|"):
            t = App(t, self.term() if self.peek() == "\\" else self.atom())
        return t

    def type(self):
        if self.peek() == "(":
            self.next()
            dom = self.type()
            self.expect("->")
            cod = self.type()
            self.expect(")")
            return Arrow(dom, cod)
        name = self.next()
        if name not in CATEGORIES:
            raise GrammarError("SYNTAX_ERROR", f"unknown type {name!r}")
        return name

    def atom(self):
        tok = self.next()
        if tok == "(":
            t = self.term()
            self.expect(")")
            return t
        if tok == "[":
            fields = [self.term()]
            while self.peek() == "|":
                self.next()
                fields.append(self.term())
            self.expect("]")
            return Template(tuple(fields))
        if tok.startswith("$"):
            return Var(tok[1:])
        if tok == "pat":
            return Const(self.next(), "PO")
        if tok in ("\\", ".", ")", "]", "|", ":", "->"):
            raise GrammarError("SYNTAX_ERROR", f"unexpected {tok!r} in term {self.text!r}")
        return const(tok)


def parse_term(text: str):
    p = _TermParser(text)
    t = p.term()
    if p.peek() is not None:
        raise GrammarError("SYNTAX_ERROR", f"trailing {p.peek()!r} in term {text!r}")
    return t
