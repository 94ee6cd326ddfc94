"""Text syntax for PL, PL* and CL formulas.

Atom forms (condition ``e``/``h``, situator ``<|`` past, ``@=`` present,
``|>`` future)::

    [e|@=|obj o1: {(h1,(left))};_]      property assignments, one slot per property
    [e|@=|rel S[o1,0] o2]               o2 is related to o1 under property 0
    [e|@=|act o1: (a1,c1)]              o1 performs a1 and c1
    [h|<||meta o1: b1;~]                PL* property symbols
    [h|<||comp o1[0,1]: g2]             PL* component symbol
    [h|<||mrel o1 o2: t3]               PL* relational symbol
    [e||>|o1|0|b1]  [e||>|o1|0|1|g1]  [e||>|o1|o2|k1]  [e||>|pat lamps|1|0]   CL

Blocks join atoms with ``^``; chains join blocks with ``->>`` or ``~>``;
``//`` separates independent chains.
"""

from __future__ import annotations

import re

from .errors import FormulaError
from .formulas import (
    COMPONENT_SYMBOLS,
    INDEP,
    JUNCTIONS,
    PROPERTY_SYMBOLS,
    RELATION_SYMBOLS,
    ActAtom,
    Block,
    Chain,
    ClCompAtom,
    ClPropAtom,
    ClRelAtom,
    CompAtom,
    Formula,
    MetaAtom,
    MetaRelAtom,
    ObjAtom,
    Pattern,
    RelAtom,
)
from .model import Condition, Signature, Situator

_TOKEN = re.compile(
    r"\s*(?:(?P<punct>->>|~>|//|<\||\|>|@=|[\[\]\(\)\{\},;:\|\^_~])|(?P<int>\d+)(?![A-Za-z_])|(?P<word>[A-Za-z0-9_][A-Za-z0-9_.']*))"
)
_KEYWORDS = {"obj", "rel", "act", "meta", "comp", "mrel"}


class _Tok:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind, text, offset):
        self.kind, self.text, self.offset = kind, text, offset

    def __repr__(self):
        return f"{self.kind}:{self.text!r}"


def tokenize(text: str) -> list:
    out = []
    i = 0
    n = len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise _error(text, i, f"unexpected character {text[i]!r}")
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), m.start(kind)))
        i = m.end()
    out.append(_Tok("eof", "", n))
    return out


def _line_col(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _error(text, offset, msg, code="SYNTAX_ERROR"):
    line, col = _line_col(text, offset)
    return FormulaError(code, f"{msg} at line {line}, column {col}", line=line, column=col)


class _Parser:
    def __init__(self, text: str, layer: str | None, sig: Signature | None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.layer = layer
        self.sig = sig

    # token helpers
    def peek(self, k=0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None, code="SYNTAX_ERROR"):
        tok = tok or self.peek()
        return _error(self.text, tok.offset, msg, code)

    def expect(self, text):
        t = self.next()
        if t.text != text or t.kind not in ("punct", "word"):
            raise self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def word(self, what="a name"):
        t = self.next()
        if t.kind not in ("word", "int"):
            raise self.fail(f"expected {what}, found {t.text or 'end of input'!r}", t)
        return t.text

    def integer(self):
        t = self.next()
        if t.kind != "int":
            raise self.fail(f"expected an integer, found {t.text or 'end of input'!r}", t)
        return int(t.text)

    def symbol(self, allowed, what):
        t = self.next()
        if t.text not in allowed:
            raise self.fail(f"expected {what}, found {t.text or 'end of input'!r}", t)
        return t.text

    # grammar
    def formula(self) -> Formula:
        chains = [self.chain()]
        while self.peek().text == INDEP:
            self.next()
            chains.append(self.chain())
        if self.peek().kind != "eof":
            raise self.fail(f"unexpected {self.peek().text!r}")
        return Formula(tuple(chains))

    def chain(self) -> Chain:
        blocks = [self.block()]
        conns = []
        while self.peek().text in JUNCTIONS:
            conns.append(self.next().text)
            blocks.append(self.block())
        return Chain(tuple(blocks), tuple(conns))

    def block(self) -> Block:
        atoms = [self.atom()]
        while self.peek().text == "^":
            self.next()
            atoms.append(self.atom())
        return Block(tuple(atoms))

    def atom(self):
        start = self.peek()
        self.expect("[")
        c = self.next()
        if c.text not in ("e", "h"):
            raise self.fail(f"expected condition e or h, found {c.text!r}", c)
        self.expect("|")
        s = self.next()
        if s.text not in ("<|", "@=", "|>"):
            raise self.fail(f"expected situator <|, @= or |>, found {s.text!r}", s)
        self.expect("|")
        cond, sit = Condition(c.text), Situator.from_token(s.text)
        pos = _line_col(self.text, start.offset)
        head = self.peek()
        if head.text in _KEYWORDS and self.peek(1).text != "|":
            atom = getattr(self, "_" + self.next().text)(cond, sit, pos)
        else:
            atom = self._cl(cond, sit, pos)
        self.expect("]")
        if self.layer and atom.layer != self.layer:
            raise self.fail(f"{atom.layer} atom in a {self.layer} formula", start)
        return atom

    def _obj(self, cond, sit, pos):
        o = self.object_name()
        self.expect(":")
        props = [self.pset(0)]
        while self.peek().text == ";":
            self.next()
            props.append(self.pset(len(props)))
        if self.sig and len(props) != len(self.sig.properties):
            raise self.fail(f"expected {len(self.sig.properties)} property slots, found {len(props)}")
        return ObjAtom(cond, sit, o, tuple(props), pos=pos)

    def pset(self, p):
        if self.peek().text == "_":
            self.next()
            return frozenset()
        self.expect("{")
        items = [self.pair(p)]
        while self.peek().text == ",":
            self.next()
            items.append(self.pair(p))
        self.expect("}")
        return frozenset(items)

    def pair(self, p):
        self.expect("(")
        tok = self.peek()
        h = self.word("an essence")
        if self.sig and h not in self.sig.essences:
            raise self.fail(f"unknown essence {h!r}", tok, "UNKNOWN_SYMBOL")
        self.expect(",")
        self.expect("(")
        vtok = self.peek()
        vals = [self.word("a value")]
        while self.peek().text == ",":
            self.next()
            vals.append(self.word("a value"))
        self.expect(")")
        self.expect(")")
        if self.sig and p < len(self.sig.properties):
            doms = self.sig.properties[p].domains
            if len(vals) != len(doms) or any(w not in d for w, d in zip(vals, doms)):
                raise self.fail(f"value {tuple(vals)} is outside the domain of property {p}", vtok, "UNKNOWN_SYMBOL")
        return (h, tuple(vals))

    def object_name(self):
        tok = self.peek()
        o = self.word("an object")
        if self.sig and not self.sig.has_object(o):
            raise self.fail(f"unknown object {o!r}", tok, "UNKNOWN_SYMBOL")
        return o

    def prop_index(self):
        tok = self.peek()
        p = self.integer()
        if self.sig and p >= len(self.sig.properties):
            raise self.fail(f"unknown property {p}", tok, "UNKNOWN_SYMBOL")
        return p

    def _rel(self, cond, sit, pos):
        tok = self.next()
        if tok.text != "S":
            raise self.fail("expected S[object,property]", tok)
        self.expect("[")
        o = self.object_name()
        self.expect(",")
        p = self.prop_index()
        self.expect("]")
        u = self.object_name()
        return RelAtom(cond, sit, o, p, u, pos=pos)

    def _act(self, cond, sit, pos):
        o = self.object_name()
        self.expect(":")
        self.expect("(")
        acts = [self.action_name()]
        while self.peek().text == ",":
            self.next()
            acts.append(self.action_name())
        self.expect(")")
        if self.sig and len(acts) != len(self.sig.properties):
            raise self.fail(f"expected {len(self.sig.properties)} actions, found {len(acts)}")
        return ActAtom(cond, sit, o, tuple(acts), pos=pos)

    def action_name(self):
        tok = self.peek()
        a = self.word("an action")
        if self.sig and not self.sig.has_action(a):
            raise self.fail(f"unknown action {a!r}", tok, "UNKNOWN_SYMBOL")
        return a

    def _meta(self, cond, sit, pos):
        o = self.object_name()
        self.expect(":")
        syms = [self.symbol(PROPERTY_SYMBOLS, "a property symbol")]
        while self.peek().text == ";":
            self.next()
            syms.append(self.symbol(PROPERTY_SYMBOLS, "a property symbol"))
        if self.sig and len(syms) != len(self.sig.properties):
            raise self.fail(f"expected {len(self.sig.properties)} symbols, found {len(syms)}")
        return MetaAtom(cond, sit, o, tuple(syms), pos=pos)

    def _comp(self, cond, sit, pos):
        o = self.object_name()
        self.expect("[")
        p = self.prop_index()
        self.expect(",")
        q = self.component_index(p)
        self.expect("]")
        self.expect(":")
        return CompAtom(cond, sit, o, p, q, self.symbol(COMPONENT_SYMBOLS, "a component symbol"), pos=pos)

    def component_index(self, p):
        tok = self.peek()
        q = self.integer()
        if self.sig and not 1 <= q <= self.sig.properties[p].dim:
            raise self.fail(f"property {p} has no component {q}", tok, "UNKNOWN_SYMBOL")
        return q

    def _mrel(self, cond, sit, pos):
        o = self.object_name()
        u = self.object_name()
        self.expect(":")
        return MetaRelAtom(cond, sit, o, u, self.symbol(RELATION_SYMBOLS, "a relational symbol"), pos=pos)

    def _cl(self, cond, sit, pos):
        if self.peek().text == "pat" and self.peek(1).kind in ("word", "int") and self.peek(1).text != "|":
            self.next()
            target = Pattern(self.word("a pattern name"))
        else:
            target = self.object_name()
        fields = []
        while self.peek().text == "|":
            self.next()
            fields.append(self.next())
        if not fields:
            raise self.fail("expected a CL atom or a keyword (obj, rel, act, meta, comp, mrel)")
        last = fields[-1]
        if len(fields) == 2 and fields[0].kind == "int":
            p = int(fields[0].text)
            self._check_prop(p, fields[0])
            self._check_sym(last, PROPERTY_SYMBOLS, "a property symbol")
            return ClPropAtom(cond, sit, target, p, last.text, pos=pos)
        if len(fields) == 2:
            if self.sig and not self.sig.has_object(fields[0].text):
                raise self.fail(f"unknown object {fields[0].text!r}", fields[0], "UNKNOWN_SYMBOL")
            self._check_sym(last, RELATION_SYMBOLS, "a relational symbol")
            return ClRelAtom(cond, sit, target, fields[0].text, last.text, pos=pos)
        if len(fields) == 3 and fields[0].kind == "int" and fields[1].kind == "int":
            p, q = int(fields[0].text), int(fields[1].text)
            self._check_prop(p, fields[0])
            if self.sig and not 1 <= q <= self.sig.properties[p].dim:
                raise self.fail(f"property {p} has no component {q}", fields[1], "UNKNOWN_SYMBOL")
            self._check_sym(last, COMPONENT_SYMBOLS, "a component symbol")
            return ClCompAtom(cond, sit, target, p, q, last.text, pos=pos)
        raise self.fail("malformed CL atom", fields[0])

    def _check_prop(self, p, tok):
        if self.sig and p >= len(self.sig.properties):
            raise self.fail(f"unknown property {p}", tok, "UNKNOWN_SYMBOL")

    def _check_sym(self, tok, allowed, what):
        if tok.text not in allowed:
            raise self.fail(f"expected {what}, found {tok.text!r}", tok)


def parse_formula(text: str, layer: str | None = None, signature: Signature | None = None) -> Formula:
    """Parse ``text``; ``layer`` (``pl``, ``pl*``, ``cl``) restricts the atom kinds.

    With a ``signature`` every object, essence, value, action and property
    index is checked and unknown ones raise ``UNKNOWN_SYMBOL``.
    """
    if layer not in (None, "pl", "pl*", "cl"):
        raise FormulaError("UNKNOWN_LAYER", f"unknown layer {layer!r}")
    f = _Parser(text, layer, signature).formula()
    if layer is None and f.layer == "mixed":
        raise FormulaError("SYNTAX_ERROR", "a formula may not mix atoms of different layers")
    return f


def parse_pl(text: str, signature: Signature | None = None) -> Formula:
    return parse_formula(text, "pl", signature)


def parse_star(text: str, signature: Signature | None = None) -> Formula:
    return parse_formula(text, "pl*", signature)


def parse_cl(text: str, signature: Signature | None = None) -> Formula:
    return parse_formula(text, "cl", signature)
