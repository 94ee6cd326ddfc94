"""Checking PL* and CL formulas through PL witnesses.

A PL* formula holds when some PL formula abstracting to it holds; a CL
formula holds when some PL* formula collapsing to it holds.  Both checks
accept an explicit witness or search a finite candidate space under a
budget.  Candidate PL blocks are read off the structure's own realities,
since a property atom is only ever satisfied by an exact copy of a state's
tables.  Action atoms only narrow the inputs a chain may take, so they are
added solely to keep an otherwise empty side of a pair non-empty.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
from dataclasses import dataclass
from pathlib import Path

from .checker import CheckResult, check, perspective, sat_atomic
from .errors import CheckError, GrammarError, MetaInfoError
from .formulas import (
    LATER,
    NEXT,
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
    check_wff,
)
from .metainfo import DEFAULT_PROFILE, AbstractionProfile, abstract_block, abstract_pair, translate_tr1
from .model import MmppfStructure, Reality, admissible_inputs
from .rgtc import Grammar, translate_tr2

DEFAULT_BOUND = 200_000


class Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise CheckError("BUDGET_EXHAUSTED", f"search budget of {self.limit} candidates exhausted",
                             bound=self.limit)


def _mismatch(expected, got) -> CheckResult:
    return CheckResult(False, detail={"reason": "TRANSLATION_MISMATCH", "expected": str(expected), "translation": str(got)})


# --- PL* ------------------------------------------------------------------


def _subsets(items):
    items = list(items)
    return itertools.chain.from_iterable(itertools.combinations(items, k) for k in range(len(items) + 1))


def _true_relations(m, r: Reality, pairs) -> list:
    s = m.state(r.state)
    out = []
    for o, u in pairs:
        for p in range(len(m.signature.properties)):
            if u in s.related(o, p):
                out.append(RelAtom(r.condition, r.situator, o, p, u))
    return out


def _obj_atom(m, r: Reality, o: str) -> ObjAtom:
    s = m.state(r.state)
    return ObjAtom(r.condition, r.situator, o, tuple(s.gstar_of(p, o) for p in range(len(m.signature.properties))))


def _fillers(m, pt, r: Reality) -> list:
    """Single action atoms true at ``r``.  They vanish under abstraction, so
    they stand in for a side that must be non-empty but carries nothing."""
    sig = m.signature
    out = {}
    for v in admissible_inputs(m, r.state):
        for i, o in enumerate(sig.objects):
            a = ActAtom(r.condition, r.situator, o, v[i])
            if a not in out and sat_atomic(m, pt, r, a):
                out[a] = None
    return [[a] for a in out]


def _targets(x: Block):
    objs = list(dict.fromkeys(a.obj for a in x if isinstance(a, (MetaAtom, CompAtom))))
    pairs = list(dict.fromkeys((a.subj, a.target) for a in x if isinstance(a, MetaRelAtom)))
    return objs, pairs


def _lone_candidates(m, pt, x: Block, profile, sig, budget):
    objs, pairs = _targets(x)
    for r in pt.realities():
        if (r.condition, r.situator) != (x.condition, x.situator):
            continue
        base = [_obj_atom(m, r, o) for o in objs]
        for rels in _subsets(_true_relations(m, r, pairs)):
            atoms = base + list(rels)
            if not atoms:
                continue
            budget.spend()
            b = Block(tuple(atoms))
            try:
                if abstract_block(b, profile, sig) == x:
                    yield (r,), (b,)
            except MetaInfoError:
                continue


def _pair_candidates(m, pt, x: Block, profile, sig, budget):
    objs, pairs = _targets(x)
    for r in pt.realities():
        if r.condition != x.condition:
            continue
        for r2 in pt.moment(r.time + 1):
            for sides in itertools.product("LRB", repeat=len(objs)):
                left = [_obj_atom(m, r, o) for o, sd in zip(objs, sides) if sd in "LB"]
                right = [_obj_atom(m, r2, o) for o, sd in zip(objs, sides) if sd in "RB"]
                for lrel in _subsets(_true_relations(m, r, pairs)):
                    for rrel in _subsets(_true_relations(m, r2, pairs)):
                        la, ra = left + list(lrel), right + list(rrel)
                        for fl in [[]] if la else _fillers(m, pt, r):
                            for fr in [[]] if ra else _fillers(m, pt, r2):
                                budget.spend()
                                bl, br = Block(tuple(la + fl)), Block(tuple(ra + fr))
                                try:
                                    if abstract_pair(bl, br, profile, sig) == x:
                                        yield (r, r2), (bl, br)
                                except MetaInfoError:
                                    continue


def _groupings(ch: Chain, profile):
    n = len(ch.blocks)
    options = []
    for k in range(n):
        opts = []
        if profile.pairs == "greedy":
            opts.append("pair")
        if profile.pairs == "none" or k == n - 1 or ch.connectives[k] == LATER:
            opts.append("lone")
        options.append(opts)
    return itertools.product(*options)


def _search_chain(m, anchor, pt, ch: Chain, profile, sig, budget):
    for grouping in _groupings(ch, profile):
        groups = []
        for x, kind in zip(ch.blocks, grouping):
            gen = _pair_candidates if kind == "pair" else _lone_candidates
            groups.append(list(gen(m, pt, x, profile, sig, budget)))
            if not groups[-1]:
                break
        else:
            found = _assemble(m, anchor, ch, groups, budget, profile, sig)
            if found is not None:
                return found
    return None


def _assemble(m, anchor, ch, groups, budget, profile, sig):
    """Depth-first over group candidates, keeping consecutive times consistent."""

    def rec(k, prev_time, blocks, conns):
        if k == len(groups):
            budget.spend()
            cand = Chain(tuple(blocks), tuple(conns))
            f = Formula((cand,))
            if check_wff(f):
                return None
            try:
                if translate_tr1(f, profile, sig) != Formula((ch,)):
                    return None
            except MetaInfoError:
                return None
            res = check(m, anchor, f)
            return (f, res) if res.value else None
        for realities, bs in groups[k]:
            t0 = realities[0].time
            if k:
                conn = ch.connectives[k - 1]
                if conn == NEXT and t0 != prev_time + 1:
                    continue
                if conn == LATER and t0 <= prev_time:
                    continue
            new_conns = conns + ([ch.connectives[k - 1]] if k else []) + [NEXT] * (len(bs) - 1)
            got = rec(k + 1, realities[-1].time, blocks + list(bs), new_conns)
            if got is not None:
                return got
        return None

    return rec(0, None, [], [])


def _star_layer(f: Formula, what: str):
    if f.layer != "pl*":
        raise CheckError("WRONG_LAYER", f"expected a PL* {what}, got layer {f.layer}")
    bad = check_wff(f)
    if bad:
        raise CheckError("NOT_WFF", "; ".join(map(str, bad)), rules=sorted({v.rule for v in bad}))


def check_star(m: MmppfStructure, anchor: int, fstar: Formula, witness: Formula | None = None,
               bound: int = DEFAULT_BOUND, profile: AbstractionProfile | None = None,
               _budget: Budget | None = None) -> CheckResult:
    """Decide the PL* formula ``fstar``.

    With a PL ``witness`` the result is true iff the witness abstracts to
    ``fstar`` and holds.  Without one, candidate PL chains are searched;
    ``BUDGET_EXHAUSTED`` is raised when more than ``bound`` candidates would
    be needed, so a false result always means the space was exhausted.
    """
    profile = profile or DEFAULT_PROFILE
    sig = m.signature
    perspective(m, anchor)
    _star_layer(fstar, "formula")
    if witness is not None:
        got = translate_tr1(witness, profile, sig)
        if got != fstar:
            return _mismatch(fstar, got)
        res = check(m, anchor, witness)
        return CheckResult(res.value, res.traces, {"witness": str(witness)})
    budget = _budget or Budget(bound)
    if budget.limit <= 0:
        raise CheckError("BUDGET_EXHAUSTED", "search budget is zero", bound=budget.limit)
    pt = m.perspectives[anchor]
    traces, found = [], []
    for ch in fstar.chains:
        got = _search_chain(m, anchor, pt, ch, profile, sig, budget)
        if got is None:
            return CheckResult(False, detail={"searched": budget.used})
        found.append(got[0].chains[0])
        traces += got[1].traces
    return CheckResult(True, tuple(traces), {"witness": str(Formula(tuple(found))), "searched": budget.used})


# --- patterns -------------------------------------------------------------


@dataclass(frozen=True)
class PatternRegistry:
    """Named object patterns for CL atoms.

    A pattern lists objects outright, or essences: it then matches every
    object holding one of them in some state.
    """

    patterns: dict

    @classmethod
    def from_json(cls, doc) -> "PatternRegistry":
        if isinstance(doc, (str, Path)):
            doc = json.loads(Path(doc).read_text(encoding="utf-8"))
        return cls({name: {k: tuple(v) for k, v in entry.items()} for name, entry in doc.items()})

    def objects_for(self, name: str, m: MmppfStructure) -> tuple:
        if name not in self.patterns:
            raise CheckError("UNKNOWN_PATTERN", f"pattern {name!r} is not registered", pattern=name)
        entry = self.patterns[name]
        objs = set(entry.get("objects", ()))
        wanted = set(entry.get("essences", ()))
        for s in m.states.values():
            for o in m.signature.objects:
                if s.essences_of(o) & wanted:
                    objs.add(o)
        return tuple(o for o in m.signature.objects if o in objs)


def expand_patterns(f: Formula, m: MmppfStructure, registry: PatternRegistry | None) -> list:
    """Every CL formula obtained by replacing each pattern atom's target with
    one of the pattern's objects (independently per atom)."""
    slots = [a for a in f.atoms() if isinstance(getattr(a, "target", None), Pattern)]
    if not slots:
        return [f]
    if registry is None:
        raise CheckError("UNKNOWN_PATTERN", "formula uses patterns but no registry was given")
    choices = [registry.objects_for(a.target.name, m) for a in slots]
    out = []
    for pick in itertools.product(*choices):
        mapping = {id(a): o for a, o in zip(slots, pick)}

        def sub(a):
            return _retarget(a, mapping[id(a)]) if id(a) in mapping else a

        chains = tuple(
            Chain(tuple(Block(tuple(sub(a) for a in b)) for b in ch.blocks), ch.connectives) for ch in f.chains
        )
        out.append(Formula(chains))
    return out


def _retarget(a, o):
    return dataclasses.replace(a, target=o)


# --- CL -------------------------------------------------------------------


def _uncollapse_block(b: Block, n_props: int):
    """The PL* block a CL block was split from, or ``None``."""
    props, atoms = {}, []
    for a in b:
        if isinstance(a, ClPropAtom):
            props.setdefault((a.cond, a.sit, a.target), {})
            if a.prop in props[(a.cond, a.sit, a.target)]:
                return None
            props[(a.cond, a.sit, a.target)][a.prop] = a.symbol
        elif isinstance(a, ClCompAtom):
            atoms.append(CompAtom(a.cond, a.sit, a.target, a.prop, a.dim, a.symbol))
        elif isinstance(a, ClRelAtom):
            atoms.append(MetaRelAtom(a.cond, a.sit, a.target, a.other, a.symbol))
    for (c, s, o), syms in props.items():
        if sorted(syms) != list(range(n_props)):
            return None
        atoms.append(MetaAtom(c, s, o, tuple(syms[p] for p in range(n_props))))
    return Block(tuple(atoms))


def _cl_layer(f: Formula):
    if f.layer != "cl":
        raise CheckError("WRONG_LAYER", f"expected a CL formula, got layer {f.layer}")
    bad = check_wff(f)
    if bad:
        raise CheckError("NOT_WFF", "; ".join(map(str, bad)), rules=sorted({v.rule for v in bad}))


def _translates_to(fstar, grammar, target) -> bool:
    try:
        return translate_tr2(fstar, grammar) == target
    except GrammarError:
        return False


def check_cl(m: MmppfStructure, anchor: int, fcl: Formula, witness: Formula | None = None,
             bound: int = DEFAULT_BOUND, profile: AbstractionProfile | None = None,
             grammar: Grammar | None = None, patterns: PatternRegistry | None = None) -> CheckResult:
    """Decide the CL formula ``fcl``.

    With a PL* ``witness``: false with ``TRANSLATION_MISMATCH`` unless the
    witness collapses to ``fcl``, otherwise the PL* check of the witness.
    Without one, every chain is expanded back into runs of repeated PL*
    blocks (each run at most as long as the time line) and each expansion
    that collapses to ``fcl`` is checked.
    """
    perspective(m, anchor)
    _cl_layer(fcl)
    budget = Budget(bound)
    targets = expand_patterns(fcl, m, patterns)
    if witness is not None:
        _star_layer(witness, "witness")
        got = translate_tr2(witness, grammar)
        if got not in targets:
            return _mismatch(fcl, got)
        return check_star(m, anchor, witness, bound=bound, profile=profile, _budget=budget)
    if budget.limit <= 0:
        raise CheckError("BUDGET_EXHAUSTED", "search budget is zero", bound=budget.limit)
    n_props = len(m.signature.properties)
    horizon = len(m.time_set)
    for target in targets:
        per_chain = []
        for ch in target.chains:
            result = _search_cl_chain(m, anchor, ch, n_props, horizon, grammar, profile, budget)
            if result is None:
                break
            per_chain.append(result)
        else:
            traces = tuple(t for r in per_chain for t in r.traces)
            witnesses = " // ".join(r.detail["witness"] for r in per_chain)
            return CheckResult(True, traces, {"witness": witnesses, "searched": budget.used})
    return CheckResult(False, detail={"searched": budget.used})


def _search_cl_chain(m, anchor, ch, n_props, horizon, grammar, profile, budget):
    blocks = [_uncollapse_block(b, n_props) for b in ch.blocks]
    if any(b is None for b in blocks):
        return None
    target = Formula((ch,))
    for runs in itertools.product(range(1, horizon + 1), repeat=len(blocks)):
        if sum(runs) > horizon:
            continue
        seq, conns = [], []
        for k, (b, n) in enumerate(zip(blocks, runs)):
            if k:
                conns.append(ch.connectives[k - 1])
            seq += [b] * n
            conns += [NEXT] * (n - 1)
        fstar = Formula((Chain(tuple(seq), tuple(conns)),))
        budget.spend()
        if check_wff(fstar) or not _translates_to(fstar, grammar, target):
            continue
        res = check_star(m, anchor, fstar, profile=profile, _budget=budget)
        if res.value:
            return res
    return None
