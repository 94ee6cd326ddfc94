"""Abstract syntax for the PL, PL* and CL description languages.

A formula is a ``//``-list of chains; a chain is a sequence of blocks joined
by ``->>`` (next moment) or ``~>`` (some later moment); a block is a
``^``-conjunction of atoms.  Blocks keep their atoms in a canonical order so
that printing and re-parsing give back an equal tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .model import Condition, Situator

AND, NEXT, LATER, INDEP = "^", "->>", "~>", "//"
JUNCTIONS = (NEXT, LATER)

SIGMA1 = ("0", "1")
SIGMA2 = ("~", "b1", "b2")
SIGMA3 = ("~", "g1", "g2")
SIGMA4 = ("~", "d1", "d2")
PI1 = ("k1", "k2")
PI2 = ("t1", "t2", "t3", "t4")
META_SYMBOLS = tuple(dict.fromkeys(SIGMA1 + SIGMA2 + SIGMA3 + SIGMA4 + PI1 + PI2))

PROPERTY_SYMBOLS = frozenset(SIGMA1 + SIGMA2)
COMPONENT_SYMBOLS = frozenset(SIGMA3 + SIGMA4)
RELATION_SYMBOLS = frozenset(PI1 + PI2)


def _natural(s: str):
    return tuple(int(x) if x.isdigit() else x for x in re.split(r"(\d+)", s))


@dataclass(frozen=True)
class Atom:
    cond: Condition
    sit: Situator
    pos: tuple = field(default=None, compare=False, repr=False, kw_only=True)

    layer = ""
    rank = 0

    @property
    def subject(self) -> str:
        raise NotImplementedError

    def sort_key(self):
        return (self.rank, _natural(str(self.subject)), str(self))

    def head(self) -> str:
        return f"[{self.cond.value}|{self.sit.token}|"


# --- PL -------------------------------------------------------------------


@dataclass(frozen=True)
class ObjAtom(Atom):
    """Type I: the per-property assignment sets of one object."""

    obj: str
    props: tuple  # per property: frozenset of (essence, value tuple)
    layer = "pl"
    rank = 0

    @property
    def subject(self):
        return self.obj

    def __str__(self):
        parts = []
        for ps in self.props:
            if not ps:
                parts.append("_")
            else:
                items = sorted(ps, key=lambda hv: (_natural(hv[0]), hv[1]))
                parts.append("{" + ",".join(f"({h},({','.join(v)}))" for h, v in items) + "}")
        return f"{self.head()}obj {self.obj}: {';'.join(parts)}]"


@dataclass(frozen=True)
class RelAtom(Atom):
    """Type II: ``target`` stands in relation ``S^{subj,prop}``."""

    subj: str
    prop: int
    target: str
    layer = "pl"
    rank = 1

    @property
    def subject(self):
        return self.subj

    def __str__(self):
        return f"{self.head()}rel S[{self.subj},{self.prop}] {self.target}]"


@dataclass(frozen=True)
class ActAtom(Atom):
    """Type III: the action tuple an object performs, one per property."""

    obj: str
    actions: tuple
    layer = "pl"
    rank = 2

    @property
    def subject(self):
        return self.obj

    def __str__(self):
        return f"{self.head()}act {self.obj}: ({','.join(self.actions)})]"


# --- PL* ------------------------------------------------------------------


@dataclass(frozen=True)
class MetaAtom(Atom):
    obj: str
    symbols: tuple  # one Sigma1/Sigma2 symbol per property
    layer = "pl*"
    rank = 3

    @property
    def subject(self):
        return self.obj

    def __str__(self):
        return f"{self.head()}meta {self.obj}: {';'.join(self.symbols)}]"


@dataclass(frozen=True)
class CompAtom(Atom):
    obj: str
    prop: int
    dim: int
    symbol: str
    layer = "pl*"
    rank = 4

    @property
    def subject(self):
        return self.obj

    def __str__(self):
        return f"{self.head()}comp {self.obj}[{self.prop},{self.dim}]: {self.symbol}]"


@dataclass(frozen=True)
class MetaRelAtom(Atom):
    subj: str
    target: str
    symbol: str
    layer = "pl*"
    rank = 5

    @property
    def subject(self):
        return self.subj

    def __str__(self):
        return f"{self.head()}mrel {self.subj} {self.target}: {self.symbol}]"


# --- CL -------------------------------------------------------------------


@dataclass(frozen=True)
class Pattern:
    name: str

    def __str__(self):
        return f"pat {self.name}"


def _target(t) -> str:
    return str(t)


@dataclass(frozen=True)
class ClPropAtom(Atom):
    target: object  # object name or Pattern
    prop: int
    symbol: str
    layer = "cl"
    rank = 6

    @property
    def subject(self):
        return self.target

    def __str__(self):
        return f"{self.head()}{_target(self.target)}|{self.prop}|{self.symbol}]"


@dataclass(frozen=True)
class ClCompAtom(Atom):
    target: object
    prop: int
    dim: int
    symbol: str
    layer = "cl"
    rank = 7

    @property
    def subject(self):
        return self.target

    def __str__(self):
        return f"{self.head()}{_target(self.target)}|{self.prop}|{self.dim}|{self.symbol}]"


@dataclass(frozen=True)
class ClRelAtom(Atom):
    target: object
    other: str
    symbol: str
    layer = "cl"
    rank = 8

    @property
    def subject(self):
        return self.target

    def __str__(self):
        return f"{self.head()}{_target(self.target)}|{self.other}|{self.symbol}]"


# --- compound -------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    atoms: tuple

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(sorted(self.atoms, key=Atom.sort_key)))

    def __str__(self):
        return f" {AND} ".join(str(a) for a in self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    @property
    def situators(self) -> set:
        return {a.sit for a in self.atoms}

    @property
    def conditions(self) -> set:
        return {a.cond for a in self.atoms}

    @property
    def situator(self) -> Situator:
        """The shared situator (the first atom's when the block is mixed)."""
        return self.atoms[0].sit

    @property
    def condition(self) -> Condition:
        return self.atoms[0].cond


@dataclass(frozen=True)
class Chain:
    blocks: tuple
    connectives: tuple = ()

    def __post_init__(self):
        if len(self.connectives) != len(self.blocks) - 1:
            raise ValueError("a chain needs one connective between consecutive blocks")

    def __str__(self):
        out = [str(self.blocks[0])]
        for c, b in zip(self.connectives, self.blocks[1:]):
            out.append(f" {c} {b}")
        return "".join(out)


@dataclass(frozen=True)
class Formula:
    chains: tuple

    def __str__(self):
        return f" {INDEP} ".join(str(c) for c in self.chains)

    def atoms(self):
        for c in self.chains:
            for b in c.blocks:
                yield from b.atoms

    @property
    def layer(self) -> str:
        layers = {a.layer for a in self.atoms()}
        return layers.pop() if len(layers) == 1 else "mixed"


def chain(*items) -> Chain:
    """``chain(block, "->>", block, "~>", block)`` convenience constructor."""
    blocks = [b if isinstance(b, Block) else Block(tuple(b) if not isinstance(b, Atom) else (b,)) for b in items[::2]]
    return Chain(tuple(blocks), tuple(items[1::2]))


def formula(*chains) -> Formula:
    return Formula(tuple(c if isinstance(c, Chain) else chain(c) for c in chains))


def print_formula(f) -> str:
    """Canonical text for a formula, chain, block or atom."""
    return str(f)


# --- well-formedness -----------------------------------------------------


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str
    chain: int
    block: int

    def __str__(self):
        return f"{self.rule}: {self.detail} (chain {self.chain}, block {self.block})"


STRICT_JUNCTIONS = frozenset(
    {
        (Situator.PAST, Situator.PAST),
        (Situator.PAST, Situator.PRESENT),
        (Situator.PRESENT, Situator.FUTURE),
        (Situator.FUTURE, Situator.FUTURE),
    }
)
JUNCTION_PAIRS = STRICT_JUNCTIONS | {(Situator.PAST, Situator.FUTURE)}


def junction_ok(left: Situator, right: Situator, strict: bool = False) -> bool:
    return (left, right) in (STRICT_JUNCTIONS if strict else JUNCTION_PAIRS)


def _duplicate_key(a: Atom):
    """Atoms sharing a non-None key may not share a block."""
    if isinstance(a, ObjAtom):
        return ("rule 4", a.obj)
    if isinstance(a, MetaAtom):
        return ("rule 4", a.obj)
    if isinstance(a, CompAtom):
        return ("rule 4", (a.obj, a.prop, a.dim))
    if isinstance(a, ClPropAtom):
        return ("rule 4", (a.target, a.prop))
    if isinstance(a, ClCompAtom):
        return ("rule 4", (a.target, a.prop, a.dim))
    if isinstance(a, ActAtom):
        return ("rule 5", a.obj)
    return None


def check_wff(f: Formula, strict: bool = False) -> list:
    """Well-formedness violations of ``f`` (empty iff ``f`` is a wff).

    Rule 1: a block shares one condition and one situator.  Rules 2 and 3:
    the situators across a ``->>`` / ``~>`` junction form an allowed pair.
    With ``strict`` only the four listed pairs are allowed; otherwise a past
    block may also be followed directly by a future one, which makes the
    situator sequence of a chain exactly the runs of PAST* PRESENT? FUTURE*.
    Rules 4 and 5: no two property atoms (resp. action atoms) on the same
    object within a block.
    """
    out = []
    for ci, ch in enumerate(f.chains):
        for bi, b in enumerate(ch.blocks):
            if len(b.situators) > 1 or len(b.conditions) > 1:
                out.append(Violation("rule 1", f"block mixes {sorted(map(str, b.conditions))} / {sorted(map(str, b.situators))}", ci, bi))
            seen = {}
            for a in b.atoms:
                key = _duplicate_key(a)
                if key is None:
                    continue
                if key in seen:
                    out.append(Violation(key[0], f"two atoms on {key[1]}: {seen[key]} and {a}", ci, bi))
                else:
                    seen[key] = a
        for bi, conn in enumerate(ch.connectives):
            left, right = ch.blocks[bi].atoms[-1].sit, ch.blocks[bi + 1].atoms[0].sit
            if len(ch.blocks[bi].situators) == 1 and len(ch.blocks[bi + 1].situators) == 1:
                if not junction_ok(left, right, strict):
                    rule = "rule 2" if conn == NEXT else "rule 3"
                    out.append(Violation(rule, f"{left.value} {conn} {right.value} is not an allowed junction", ci, bi))
    return out


def is_wff(f: Formula, strict: bool = False) -> bool:
    return not check_wff(f, strict)
