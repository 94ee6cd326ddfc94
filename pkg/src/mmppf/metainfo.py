"""Metainformation functors and the PL to PL* abstraction.

The functors reduce PL atoms to symbols:

====== ============================== =================
name   reads                          symbols
====== ============================== =================
ms     one property assignment set    ``0`` ``1``
tsp    a set before and after a step  ``b1`` ``b2`` ``~``
tscp   one value component over a step  ``g1`` ``g2`` ``~``
toscp  direction of a component       ``d1`` ``d2`` ``~``
rs     one relation in a block        ``k1`` ``k2``
trs    a relation over a step         ``t1`` .. ``t4``
====== ============================== =================

:func:`translate_tr1` applies them to a whole formula under an
:class:`AbstractionProfile`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MetaInfoError
from .formulas import (
    NEXT,
    Block,
    Chain,
    CompAtom,
    Formula,
    MetaAtom,
    MetaRelAtom,
    ObjAtom,
    RelAtom,
    check_wff,
)
from .model import Situator, Signature

ABSENT = "~"


def _pset(p: int, o: str, psi) -> frozenset:
    if psi is None:
        return frozenset()
    if not isinstance(psi, ObjAtom):
        raise MetaInfoError("WRONG_ATOM_KIND", f"expected a property atom, got {psi}")
    if psi.obj != o:
        raise MetaInfoError("WRONG_ATOM_KIND", f"{psi} does not describe {o}")
    if p >= len(psi.props):
        raise MetaInfoError("WRONG_ATOM_KIND", f"{psi} has no property {p}")
    return psi.props[p]


def _pair(phi, kind=ObjAtom):
    """Unpack ``phi`` as (left, right): a 2-tuple or a two-block ``->>`` chain."""
    if isinstance(phi, Chain):
        if len(phi.blocks) != 2 or phi.connectives != (NEXT,):
            raise MetaInfoError("WRONG_SHAPE", f"expected a ->> pair, got {phi}")
        left, right = phi.blocks
        if kind is ObjAtom:
            if len(left) != 1 or len(right) != 1:
                raise MetaInfoError("WRONG_SHAPE", f"expected single atoms on both sides of {phi}")
            return left.atoms[0], right.atoms[0]
        return left, right
    try:
        left, right = phi
    except (TypeError, ValueError):
        raise MetaInfoError("WRONG_SHAPE", f"expected a pair, got {phi!r}") from None
    return left, right


def ms(p: int, o: str, psi) -> str:
    """``0`` when property ``p`` of ``o`` has no assignments in ``psi``."""
    if psi is None or not isinstance(psi, ObjAtom):
        raise MetaInfoError("WRONG_ATOM_KIND", f"expected a property atom, got {psi}")
    return "1" if _pset(p, o, psi) else "0"


def tsp(p: int, o: str, phi) -> str:
    left, right = _pair(phi)
    for side in (left, right):
        if side is not None and (not isinstance(side, ObjAtom) or side.obj != o):
            raise MetaInfoError("WRONG_SHAPE", f"{side} is not a property atom on {o}")
    a, b = _pset(p, o, left), _pset(p, o, right)
    if not a or not b:
        return ABSENT
    return "b1" if a == b else "b2"


def _component_pairs(p, q, o, phi):
    left, right = _pair(phi)
    a, b = dict(_pset(p, o, left)), dict(_pset(p, o, right))
    if not a or not b:
        return None
    for v in list(a.values()) + list(b.values()):
        if not 1 <= q <= len(v):
            raise MetaInfoError("WRONG_SHAPE", f"property {p} has no component {q}")
    shared = sorted(a.keys() & b.keys())
    return [(a[h][q - 1], b[h][q - 1]) for h in shared]


def tscp(p: int, q: int, o: str, phi) -> str:
    """Whether component ``q`` keeps (``g1``) or changes (``g2``) for every
    essence present on both sides.  Anything in between is an error."""
    pairs = _component_pairs(p, q, o, phi)
    if pairs is None:
        return ABSENT
    if pairs and all(x == y for x, y in pairs):
        return "g1"
    if pairs and all(x != y for x, y in pairs):
        return "g2"
    raise MetaInfoError("MIXED_COMPONENT_CASE",
                        f"component {q} of property {p} on {o} neither keeps nor changes uniformly",
                        property=p, component=q, object=o)


def toscp(p: int, q: int, o: str, phi, sig: Signature) -> str:
    """Whether component ``q`` moves up (``d1``) or down (``d2``) the order
    of its domain for every essence present on both sides."""
    pairs = _component_pairs(p, q, o, phi)
    if pairs is None:
        return ABSENT
    order = sig.properties[p].domains[q - 1]
    ranks = [(order.index(x), order.index(y)) for x, y in pairs]
    if ranks and all(x < y for x, y in ranks):
        return "d1"
    if ranks and all(x > y for x, y in ranks):
        return "d2"
    raise MetaInfoError("MIXED_COMPONENT_CASE",
                        f"component {q} of property {p} on {o} does not move in one direction",
                        property=p, component=q, object=o)


def _has_rel(block, p, oi, ou) -> bool:
    if block is None:
        return False
    return any(isinstance(a, RelAtom) and (a.subj, a.prop, a.target) == (oi, p, ou) for a in block)


def rs(p: int, oi: str, ou: str, psi) -> str:
    return "k2" if _has_rel(psi, p, oi, ou) else "k1"


def trs(p: int, oi: str, ou: str, phi) -> str:
    left, right = _pair(phi, Block)
    before, after = _has_rel(left, p, oi, ou), _has_rel(right, p, oi, ou)
    return {(False, False): "t1", (False, True): "t2", (True, False): "t3", (True, True): "t4"}[(before, after)]


def meta_vector(o: str, psi, n: int) -> tuple:
    return tuple(ms(p, o, psi) for p in range(n))


# --- profiles -------------------------------------------------------------

_FAMILIES = {"sigma1", "sigma2"}
_COMPONENT_FAMILIES = {"sigma3", "sigma4"}


@dataclass(frozen=True)
class ObjectDirective:
    mode: str = "property"  # "property" or "component"
    components: tuple = ()  # ((p, q, "sigma3"|"sigma4"), ...)
    properties: tuple = ()  # ((p, "sigma1"|"sigma2"), ...) overrides inside a pair


@dataclass(frozen=True)
class AbstractionProfile:
    """Which functor applies where.

    ``pairs="greedy"`` folds each ``B ->> B'`` (left to right, without
    overlap) into one PL* block using the step functors; other blocks use
    the momentary ones.  ``pairs="none"`` never folds.  Per-object directives
    switch an object to component symbols or override single properties.
    ``relations`` lists extra ``(o, p, u)`` triples to report even when the
    relation does not occur.
    """

    pairs: str = "greedy"
    objects: dict = field(default_factory=dict)
    relations: tuple = ()

    def directive(self, o: str) -> ObjectDirective:
        return self.objects.get(o, ObjectDirective())

    def check(self, sig: Signature | None) -> None:
        if self.pairs not in ("greedy", "none"):
            raise MetaInfoError("PROFILE_MISMATCH", f"unknown pairing mode {self.pairs!r}")
        for o, d in self.objects.items():
            if d.mode not in ("property", "component"):
                raise MetaInfoError("PROFILE_MISMATCH", f"unknown mode {d.mode!r} for {o}")
            if d.mode == "component" and not d.components:
                raise MetaInfoError("PROFILE_MISMATCH", f"component mode for {o} lists no components")
            for p, q, fam in d.components:
                if fam not in _COMPONENT_FAMILIES:
                    raise MetaInfoError("PROFILE_MISMATCH", f"unknown component family {fam!r}")
                if sig and (p >= len(sig.properties) or not 1 <= q <= sig.properties[p].dim):
                    raise MetaInfoError("PROFILE_MISMATCH", f"no component ({p},{q}) in the signature")
            for p, fam in d.properties:
                if fam not in _FAMILIES:
                    raise MetaInfoError("PROFILE_MISMATCH", f"unknown property family {fam!r}")
                if sig and p >= len(sig.properties):
                    raise MetaInfoError("PROFILE_MISMATCH", f"no property {p} in the signature")
            if sig and not sig.has_object(o):
                raise MetaInfoError("PROFILE_MISMATCH", f"unknown object {o!r}")
        for o, p, u in self.relations:
            if sig and (not sig.has_object(o) or not sig.has_object(u) or p >= len(sig.properties)):
                raise MetaInfoError("PROFILE_MISMATCH", f"unknown relation ({o},{p},{u})")

    @classmethod
    def from_json(cls, doc) -> "AbstractionProfile":
        if isinstance(doc, Path) or (isinstance(doc, str) and not doc.lstrip().startswith("{")):
            doc = Path(doc).read_text(encoding="utf-8")
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise MetaInfoError("PROFILE_MISMATCH", f"profile is not JSON: {exc}") from None
        try:
            objects = {
                o: ObjectDirective(
                    d.get("mode", "property"),
                    tuple((int(p), int(q), fam) for p, q, fam in d.get("components", [])),
                    tuple(sorted((int(p), fam) for p, fam in d.get("properties", {}).items())),
                )
                for o, d in doc.get("objects", {}).items()
            }
            relations = tuple((o, int(p), u) for o, p, u in doc.get("relations", []))
            return cls(doc.get("pairs", "greedy"), objects, relations)
        except (AttributeError, TypeError, ValueError) as exc:
            raise MetaInfoError("PROFILE_MISMATCH", f"malformed profile: {exc}") from None

    def to_json(self) -> dict:
        return {
            "pairs": self.pairs,
            "objects": {
                o: {
                    "mode": d.mode,
                    "components": [list(c) for c in d.components],
                    "properties": {str(p): fam for p, fam in d.properties},
                }
                for o, d in sorted(self.objects.items())
            },
            "relations": [list(r) for r in self.relations],
        }


DEFAULT_PROFILE = AbstractionProfile()


# --- Tr1 ------------------------------------------------------------------


def _obj_atoms(block) -> dict:
    out = {}
    for a in block:
        if isinstance(a, ObjAtom):
            out[a.obj] = a
    return out


def _relations(blocks, profile) -> list:
    seen = dict.fromkeys(profile.relations)
    for b in blocks:
        for a in b:
            if isinstance(a, RelAtom):
                seen.setdefault((a.subj, a.prop, a.target), None)
    return list(seen)


def abstract_block(block, profile, sig):
    cond, sit = block.condition, block.situator
    atoms = []
    for o, psi in _obj_atoms(block).items():
        d = profile.directive(o)
        if d.mode == "component" or any(fam == "sigma2" for _, fam in d.properties):
            raise MetaInfoError("PROFILE_MISMATCH", f"{o} needs a ->> pair but {block} stands alone")
        atoms.append(MetaAtom(cond, sit, o, meta_vector(o, psi, len(psi.props))))
    seen = set()
    for o, p, u in _relations([block], profile):
        a = MetaRelAtom(cond, sit, o, u, rs(p, o, u, block))
        if a not in seen:
            seen.add(a)
            atoms.append(a)
    if not atoms:
        raise MetaInfoError("PROFILE_MISMATCH", f"nothing in {block} survives abstraction")
    return Block(tuple(atoms))


def _pair_situator(left: Block, right: Block) -> Situator:
    if Situator.PRESENT in (left.situator, right.situator):
        return Situator.PRESENT
    return left.situator


def abstract_pair(left, right, profile, sig):
    cond, sit = left.condition, _pair_situator(left, right)
    la, ra = _obj_atoms(left), _obj_atoms(right)
    atoms = []
    for o in dict.fromkeys(list(la) + list(ra)):
        phi = (la.get(o), ra.get(o))
        n = len((phi[0] or phi[1]).props)
        d = profile.directive(o)
        if d.mode == "component":
            for p, q, fam in d.components:
                sym = tscp(p, q, o, phi) if fam == "sigma3" else toscp(p, q, o, phi, sig)
                atoms.append(CompAtom(cond, sit, o, p, q, sym))
            continue
        fams = dict(d.properties)
        syms = []
        for p in range(n):
            if fams.get(p) == "sigma1":
                if phi[0] is None:
                    raise MetaInfoError("PROFILE_MISMATCH", f"{o} has no left atom for a momentary symbol")
                syms.append(ms(p, o, phi[0]))
            else:
                syms.append(tsp(p, o, phi))
        atoms.append(MetaAtom(cond, sit, o, tuple(syms)))
    seen = set()
    for o, p, u in _relations([left, right], profile):
        a = MetaRelAtom(cond, sit, o, u, trs(p, o, u, (left, right)))
        if a not in seen:
            seen.add(a)
            atoms.append(a)
    if not atoms:
        raise MetaInfoError("PROFILE_MISMATCH", f"nothing in {left} ->> {right} survives abstraction")
    return Block(tuple(atoms))


def _tr1_chain(ch: Chain, profile, sig) -> Chain:
    blocks, conns = [], []
    i = 0
    n = len(ch.blocks)
    while i < n:
        if i > 0:
            conns.append(ch.connectives[i - 1])
        if profile.pairs == "greedy" and i + 1 < n and ch.connectives[i] == NEXT:
            blocks.append(abstract_pair(ch.blocks[i], ch.blocks[i + 1], profile, sig))
            i += 2
        else:
            blocks.append(abstract_block(ch.blocks[i], profile, sig))
            i += 1
    return Chain(tuple(blocks), tuple(conns))


def translate_tr1(f: Formula, profile: AbstractionProfile | None = None, sig: Signature | None = None) -> Formula:
    """Abstract the PL formula ``f`` into PL*.

    Deterministic.  The condition/situator/connective skeleton is kept
    except that every folded ``->>`` pair becomes one block.  ``sig`` is
    needed only for ordered-component (``sigma4``) directives.
    """
    profile = profile or DEFAULT_PROFILE
    profile.check(sig)
    if f.layer != "pl":
        raise MetaInfoError("PROFILE_MISMATCH", f"expected a PL formula, got layer {f.layer}")
    bad = check_wff(f)
    if bad:
        raise MetaInfoError("NOT_WFF", f"input is not well formed: {bad[0]}")
    if sig is None and any(fam == "sigma4" for d in profile.objects.values() for *_, fam in d.components):
        raise MetaInfoError("PROFILE_MISMATCH", "ordered component symbols need the signature")
    return Formula(tuple(_tr1_chain(ch, profile, sig) for ch in f.chains))
