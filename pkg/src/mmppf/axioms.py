"""Exhaustive checks of the eleven structural axioms over finite tables.

Each ``_axiomN`` function yields witness dictionaries in the deterministic
enumeration order of the model (states in document order, then objects,
properties and essences in signature order).  :func:`check_axiom` wraps them
into an :class:`AxiomReport`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import AxiomError
from .model import (
    EMPTY,
    Condition,
    MmppfStructure,
    Situator,
    admissible_inputs,
    _input_json,
    _reality_json,
)

PASS = "PASS"
FAIL = "FAIL"
UNMATCHED_CASE = "UNMATCHED_CASE"

NOTES = {
    4: "DH is declared per action; compared against the union of ES over all states for the owning object",
    8: "only membership of theta in the owner's catalog is checked; whether an action modifies its object is not recorded in the data",
}


@dataclass(frozen=True)
class AxiomReport:
    axiom_id: int
    status: str
    witnesses: tuple = ()
    note: str = ""

    def to_json(self) -> dict:
        out = {"axiom": self.axiom_id, "status": self.status, "witnesses": list(self.witnesses)}
        if self.note:
            out["note"] = self.note
        return out


def _edges(m: MmppfStructure):
    for anchor, pt in m.perspectives.items():
        for k, e in enumerate(pt.succ):
            yield anchor, k, e


def _axiom1(m):
    objs = m.signature.objects
    for s in m.states.values():
        assigned = set().union(*(s.essences_of(o) for o in objs)) if objs else set()
        for p in range(1, len(m.signature.properties)):
            for h in m.signature.essences:
                has_value = s.value(p, h) is not EMPTY
                if has_value != (h in assigned):
                    yield {"state": s.id, "essence": h, "property": p,
                           "has_value": has_value, "assigned": h in assigned}


def _axiom2(m):
    for s in m.states.values():
        for p in range(1, len(m.signature.properties)):
            for h in m.signature.essences:
                if (s.value(p, h) is not EMPTY) != (s.value(0, h) is not EMPTY):
                    yield {"state": s.id, "essence": h, "property": p}


def _axiom3(m):
    sig = m.signature
    for s in m.states.values():
        for p in range(len(sig.properties)):
            listed = {}
            for o in sig.objects:
                for h, x in sorted(s.gstar_of(p, o), key=repr):
                    if x is EMPTY:
                        continue
                    listed.setdefault((h, x), o)
                    if s.value(p, h) != x:
                        yield {"state": s.id, "property": p, "essence": h, "object": o,
                               "gstar_value": list(x), "g_value": _v(s.value(p, h))}
            for h in sig.essences:
                x = s.value(p, h)
                if x is not EMPTY and (h, x) not in listed:
                    yield {"state": s.id, "property": p, "essence": h, "object": None,
                           "gstar_value": None, "g_value": list(x)}


def _v(x):
    return None if x is EMPTY else list(x)


def _axiom4(m):
    sig = m.signature
    for a in sig.actions:
        union = set()
        for s in m.states.values():
            union |= s.essences_of(a.obj)
        dh = a.essence_domain
        if dh != union:
            yield {"action": a.id, "object": a.obj, "property": a.prop,
                   "missing": sorted(union - dh), "extra": sorted(dh - union)}


def _axiom5(m):
    sig = m.signature
    states = list(m.states.values())
    for i, oi in enumerate(sig.objects):
        for ou in sig.objects[i + 1:]:
            for s1 in states:
                for s2 in states:
                    for h in sorted(s1.essences_of(oi) & s2.essences_of(ou), key=sig.essences.index):
                        yield {"essence": h, "state": s1.id, "object": oi,
                               "other_state": s2.id, "other_object": ou}


def _axiom6(m):
    sig = m.signature
    table = {}
    for d in m.dependencies:
        table[(d.state, d.prop, d.g0, d.gp, d.actions)] = d.result
    for anchor, k, e in _edges(m):
        src, dst = e.source.state, e.target.state
        for p in range(len(sig.properties)):
            key = (src, p, m.snapshot(src, 0), m.snapshot(src, p), m.bundle(e.input, p))
            got = table.get(key)
            want = m.dependency_set(dst, p)
            if got != want:
                yield {"perspective": anchor, "edge": k, "property": p, "source_state": src,
                       "target_state": dst, "expected": sorted(want),
                       "table": None if got is None else sorted(got)}


def _axiom7(m):
    sig = m.signature
    for anchor, k, e in _edges(m):
        src, dst = e.source.state, e.target.state
        for p in range(len(sig.properties)):
            source_snap = m.snapshot(src, p)
            deps = m.dependency_set(src, p)
            target_snap = m.snapshot(dst, p)
            if not any(
                law.prop == p and law.source == source_snap and law.dependencies == deps
                and target_snap in law.results
                for law in m.laws
            ):
                yield {"perspective": anchor, "edge": k, "property": p,
                       "source_state": src, "target_state": dst}


def _axiom8(m):
    sig = m.signature
    for s in m.states.values():
        for o in sig.objects:
            for p in range(len(sig.properties)):
                owned = set(sig.catalog(p, o))
                for a in sorted(s.theta_of(p, o)):
                    if a not in owned:
                        yield {"state": s.id, "object": o, "property": p, "action": a}


def _axiom9(m):
    sig = m.signature
    for anchor, pt in m.perspectives.items():
        if tuple(pt.time_set) != tuple(m.time_set):
            yield {"perspective": anchor, "field": "time_set",
                   "expected": list(m.time_set), "found": list(pt.time_set)}
        if len(pt.moments) != len(pt.time_set):
            yield {"perspective": anchor, "field": "moments",
                   "expected": len(pt.time_set), "found": len(pt.moments)}
        for t in sorted(pt.realized_inputs):
            if t in m.realized_inputs and pt.realized_inputs[t] != m.realized_inputs[t]:
                yield {"perspective": anchor, "field": "realized_inputs", "time": t,
                       "expected": _input_json(sig, m.realized_inputs[t]),
                       "found": _input_json(sig, pt.realized_inputs[t])}


def expected_successor(anchor: int, source, v, funcip: dict):
    """The (time, condition, situator) a successor must carry, or ``None``.

    ``None`` means no case of the eight-case table covers the combination.
    """
    t1 = source.time
    eps = source.condition is Condition.REALIZED
    realized = funcip.get(t1)
    same = realized is not None and realized == v
    E, H = Condition.REALIZED, Condition.HYPOTHETICAL
    if t1 + 1 < anchor:
        if same and eps:
            return (t1 + 1, E, Situator.PAST)
        if not same:
            return (t1 + 1, H, Situator.PAST)
        return None
    if t1 + 1 == anchor:
        if same and eps:
            return (t1 + 1, E, Situator.PRESENT)
        if not same:
            return (t1 + 1, H, Situator.PRESENT)
        return None
    if t1 == anchor:
        if same and eps:
            return (anchor + 1, E, Situator.FUTURE)
        if not same and not eps:
            return (anchor + 1, H, Situator.FUTURE)
        return None
    # source lies in the future of the anchor
    return (t1 + 1, E if eps else H, Situator.FUTURE)


def _axiom10(m):
    for anchor, k, e in _edges(m):
        pt = m.perspectives[anchor]
        want = expected_successor(anchor, e.source, e.input, pt.realized_inputs)
        got = (e.target.time, e.target.condition, e.target.situator)
        if want is None:
            yield {"perspective": anchor, "edge": k, "kind": UNMATCHED_CASE,
                   "source": _reality_json(e.source), "target": _reality_json(e.target)}
        elif want != got:
            yield {"perspective": anchor, "edge": k, "kind": "MISMATCH",
                   "source": _reality_json(e.source), "target": _reality_json(e.target),
                   "expected": [want[0], want[1].value, want[2].value]}


def _axiom11(m):
    sig = m.signature
    for anchor, k, e in _edges(m):
        if e.source.time != anchor:
            continue
        src = m.state(e.source.state)
        dst = m.state(e.target.state)
        for o in sig.objects:
            reg = src.sensation[o]
            if not any(
                sl.apply(reg, o, src.id, e.input) == dst.sensation[o] for sl in m.sensation_laws
            ):
                yield {"perspective": anchor, "edge": k, "object": o,
                       "source_state": src.id, "target_state": dst.id}


_CHECKS = {
    1: _axiom1, 2: _axiom2, 3: _axiom3, 4: _axiom4, 5: _axiom5, 6: _axiom6,
    7: _axiom7, 8: _axiom8, 9: _axiom9, 10: _axiom10, 11: _axiom11,
}


def check_axiom(m: MmppfStructure, k: int) -> AxiomReport:
    if k not in _CHECKS:
        raise AxiomError("UNKNOWN_AXIOM", f"there is no axiom {k!r}", axiom=k)
    witnesses = tuple(_CHECKS[k](m))
    return AxiomReport(k, FAIL if witnesses else PASS, witnesses, NOTES.get(k, ""))


def validate_all(m: MmppfStructure) -> list:
    """All eleven reports in axiom order; every axiom is always checked."""
    return [check_axiom(m, k) for k in range(1, 12)]


def check_totality(m: MmppfStructure) -> list:
    """Admissible inputs without a transition entry (a structural defect)."""
    missing = []
    for sid in m.states:
        for v in admissible_inputs(m, sid):
            if (sid, v) not in m.transition:
                missing.append({"state": sid, "input": _input_json(m.signature, v)})
    return missing


def reports_json(reports) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True)
