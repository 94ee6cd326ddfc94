"""Satisfaction of PL formulas over a structure seen from one perspective.

:func:`check` threads a frontier of realities through each chain: the first
block may hold at any time, ``->>`` moves to the next moment through one
transition, ``~>`` to any later moment through a chain of transitions whose
first input respects the block's action atoms.  :func:`oracle_check`
decides the same relation by plain enumeration and exists to test it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import CheckError
from .formulas import NEXT, ActAtom, Block, Formula, ObjAtom, RelAtom, check_wff
from .model import (
    UNDEFINED,
    Condition,
    MmppfStructure,
    Reality,
    _input_json,
    admissible_inputs,
    make_input,
    step,
)

ORACLE_LIMITS = {"states": 6, "times": 6, "inputs": 64}


@dataclass(frozen=True)
class CheckResult:
    value: bool
    traces: tuple = ()  # one list of records per chain when value is true
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.value

    def to_json(self) -> dict:
        out = {"result": self.value, "traces": [list(t) for t in self.traces]}
        if self.detail:
            out["detail"] = self.detail
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def perspective(m: MmppfStructure, anchor: int):
    if anchor not in m.time_set or anchor not in m.perspectives:
        raise CheckError("ANCHOR_OUT_OF_RANGE", f"no perspective anchored at {anchor!r}; available: {sorted(m.perspectives)}",
                         anchor=anchor)
    return m.perspectives[anchor]


def sat_atomic(m: MmppfStructure, pt, r: Reality, a) -> bool:
    """Whether atom ``a`` holds at reality ``r`` of perspective ``pt``."""
    s = m.state(r.state)
    if isinstance(a, ObjAtom):
        if (a.cond, a.sit) != (r.condition, r.situator):
            return False
        return all(a.props[p] == s.gstar_of(p, a.obj) for p in range(len(m.signature.properties))) \
            and len(a.props) == len(m.signature.properties)
    if isinstance(a, RelAtom):
        return (a.cond, a.sit) == (r.condition, r.situator) and a.target in s.related(a.subj, a.prop)
    if isinstance(a, ActAtom):
        if a.sit != r.situator:
            return False
        if a.cond is Condition.REALIZED and r.time <= pt.anchor:
            v = pt.realized_inputs.get(r.time)
            return v is not None and v[m.signature.object_index(a.obj)] == a.actions
        return len(a.actions) == len(m.signature.properties) and all(
            act in s.theta_of(p, a.obj) for p, act in enumerate(a.actions)
        )
    raise CheckError("WRONG_LAYER", f"{a} is not a PL atom")


def block_holds(m, pt, r: Reality, block: Block) -> bool:
    return all(sat_atomic(m, pt, r, a) for a in block)


def filtered_inputs(m: MmppfStructure, r: Reality, block: Block) -> tuple:
    """I': admissible inputs at ``r`` that agree with every action atom of ``block``."""
    wanted = [(m.signature.object_index(a.obj), a.actions) for a in block if isinstance(a, ActAtom)]
    return tuple(v for v in admissible_inputs(m, r.state) if all(v[i] == acts for i, acts in wanted))


def _record(r: Reality, v=None, sig=None) -> dict:
    return {"time": r.time, "condition": r.condition.value, "situator": r.situator.value,
            "state": r.state, "input": None if v is None else _input_json(sig, v)}


def _step_record(time, state, v, sig) -> dict:
    return {"time": time, "condition": None, "situator": None, "state": state, "input": _input_json(sig, v)}


def _layers(m, state, depth):
    """States reachable in exactly k unconstrained steps for k = 0..depth,
    each with the first input sequence found (breadth first)."""
    levels = [{state: ()}]
    for _ in range(depth):
        nxt = {}
        for s, path in levels[-1].items():
            for w in admissible_inputs(m, s):
                s2 = step(m, s, w)
                if s2 is not UNDEFINED and s2 not in nxt:
                    nxt[s2] = path + ((s, w),)
        levels.append(nxt)
        if not nxt:
            break
    return levels


def _check_chain(m, pt, ch):
    sig = m.signature
    t_max = max(m.time_set)
    first = ch.blocks[0]
    frontier = {}
    for r in pt.realities():
        if block_holds(m, pt, r, first):
            frontier.setdefault(r, [_record(r)])
    for bi, conn in enumerate(ch.connectives):
        block, nxt_block = ch.blocks[bi], ch.blocks[bi + 1]
        new = {}
        for r in sorted(frontier):
            trace = frontier[r]
            for v in filtered_inputs(m, r, block):
                s1 = step(m, r.state, v)
                if s1 is UNDEFINED:
                    continue
                if conn == NEXT:
                    for r2 in pt.moment(r.time + 1):
                        if r2 not in new and r2.state == s1 and block_holds(m, pt, r2, nxt_block):
                            new[r2] = trace[:-1] + [{**trace[-1], "input": _input_json(sig, v)}, _record(r2)]
                    continue
                levels = _layers(m, s1, t_max - r.time - 1)
                for k, level in enumerate(levels, start=1):
                    for r2 in pt.moment(r.time + k):
                        if r2 in new or r2.state not in level or not block_holds(m, pt, r2, nxt_block):
                            continue
                        mids = [_step_record(r.time + 1 + j, s, w, sig) for j, (s, w) in enumerate(level[r2.state])]
                        new[r2] = trace[:-1] + [{**trace[-1], "input": _input_json(sig, v)}] + mids + [_record(r2)]
        frontier = new
        if not frontier:
            return None
    if not frontier:
        return None
    return frontier[min(frontier)]


def _ensure_wff(f: Formula):
    if f.layer != "pl":
        raise CheckError("WRONG_LAYER", f"expected a PL formula, got layer {f.layer}")
    bad = check_wff(f)
    if bad:
        raise CheckError("NOT_WFF", "; ".join(map(str, bad)), rules=sorted({v.rule for v in bad}))


def check(m: MmppfStructure, anchor: int, f: Formula) -> CheckResult:
    """Decide ``f`` at the perspective anchored at ``anchor``.

    Chains separated by ``//`` are independent and each starts its search at
    the earliest time.  On success every chain contributes one trace of
    ``{time, condition, situator, state, input}`` records; records of states
    passed through inside a ``~>`` step carry no condition or situator.
    """
    pt = perspective(m, anchor)
    _ensure_wff(f)
    traces = []
    for ch in f.chains:
        tr = _check_chain(m, pt, ch)
        if tr is None:
            return CheckResult(False)
        traces.append(tuple(tr))
    return CheckResult(True, tuple(traces))


# --- oracle ---------------------------------------------------------------


def _facts(m, pt, r: Reality) -> set:
    """Every atom description true at ``r``, as plain tuples."""
    sig = m.signature
    s = m.state(r.state)
    out = set()
    for o in sig.objects:
        out.add(("obj", r.condition, r.situator, o, tuple(s.gstar_of(p, o) for p in range(len(sig.properties)))))
        for p in range(len(sig.properties)):
            for u in s.related(o, p):
                out.add(("rel", r.condition, r.situator, o, p, u))
            for a in s.theta_of(p, o):
                out.add(("theta", r.situator, o, p, a))
    if r.time <= pt.anchor and r.time in pt.realized_inputs:
        v = pt.realized_inputs[r.time]
        for i, o in enumerate(sig.objects):
            out.add(("done", r.situator, o, v[i]))
    return out


def _oracle_atom(facts, r, a, anchor) -> bool:
    if isinstance(a, ObjAtom):
        return ("obj", a.cond, a.sit, a.obj, a.props) in facts
    if isinstance(a, RelAtom):
        return ("rel", a.cond, a.sit, a.subj, a.prop, a.target) in facts
    if a.cond is Condition.REALIZED and r.time <= anchor:
        return ("done", a.sit, a.obj, a.actions) in facts
    return all(("theta", a.sit, a.obj, p, act) in facts for p, act in enumerate(a.actions))


def _oracle_inputs(m, r, block):
    sig = m.signature
    out = []
    for v in admissible_inputs(m, r.state):
        ok = True
        for a in block:
            if isinstance(a, ActAtom) and v[sig.objects.index(a.obj)] != a.actions:
                ok = False
        if ok:
            out.append(v)
    return out


def _reaches(m, state, k, target) -> bool:
    """Some input chain of exactly ``k`` steps leads from ``state`` to ``target``."""
    if k == 0:
        return state == target
    for w in admissible_inputs(m, state):
        nxt = m.transition.get((state, w))
        if nxt is not None and _reaches(m, nxt, k - 1, target):
            return True
    return False


def _connected(m, r1, block, conn, r2) -> bool:
    gap = r2.time - r1.time
    if conn == NEXT and gap != 1:
        return False
    if gap < 1:
        return False
    for v in _oracle_inputs(m, r1, block):
        s1 = m.transition.get((r1.state, v))
        if s1 is not None and _reaches(m, s1, gap - 1, r2.state):
            return True
    return False


def oracle_check(m: MmppfStructure, anchor: int, f: Formula) -> bool:
    """Brute-force decision of the same relation as :func:`check`."""
    limits = ORACLE_LIMITS
    if len(m.states) > limits["states"] or len(m.time_set) > limits["times"] or any(
        len(admissible_inputs(m, s)) > limits["inputs"] for s in m.states
    ):
        raise CheckError("ORACLE_LIMIT_EXCEEDED",
                         f"oracle limits are {limits['states']} states, {limits['times']} times, "
                         f"{limits['inputs']} inputs per state", **limits)
    pt = perspective(m, anchor)
    _ensure_wff(f)
    realities = list(pt.realities())
    facts = {r: _facts(m, pt, r) for r in realities}

    def holds(r, block):
        return all(_oracle_atom(facts[r], r, a, anchor) for a in block)

    def extend(ch, k, prev):
        if k == len(ch.blocks):
            return True
        for r in realities:
            if not holds(r, ch.blocks[k]):
                continue
            if k and not _connected(m, prev, ch.blocks[k - 1], ch.connectives[k - 1], r):
                continue
            if extend(ch, k + 1, r):
                return True
        return False

    return all(extend(ch, 0, None) for ch in f.chains)


def replay_trace(m: MmppfStructure, trace) -> bool:
    """Feed a trace's (state, input) pairs through the transition function and
    confirm every following state."""
    for cur, nxt in zip(trace, trace[1:]):
        v = cur["input"]
        if v is None:
            return False
        if step(m, cur["state"], make_input(m.signature, v)) != nxt["state"]:
            return False
    return trace[-1]["input"] is None
