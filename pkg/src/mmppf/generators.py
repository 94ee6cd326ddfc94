"""Random structures and formulas for property tests and benchmarks.

Everything takes an explicit :class:`random.Random` so runs are repeatable.
Structures are produced as documents and loaded through the normal reader.
"""

from __future__ import annotations

import random

from .formulas import (
    LATER,
    META_SYMBOLS,
    NEXT,
    PI1,
    PI2,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    SIGMA4,
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
from .model import Condition, MmppfStructure, Situator, admissible_inputs, load_structure, step

CONDITIONS = tuple(Condition)
SITUATORS = tuple(Situator)


def random_document(rng: random.Random, max_states: int = 4, max_times: int = 4,
                    max_objects: int = 2, max_props: int = 2, max_actions: int = 2) -> dict:
    objects = [f"o{i}" for i in range(1, rng.randint(1, max_objects) + 1)]
    essences = [f"h{i}" for i in range(1, len(objects) + rng.randint(0, 1) + 1)]
    props = []
    for p in range(rng.randint(1, max_props)):
        dims = rng.randint(1, 2)
        props.append({"name": f"p{p}", "domains": [[f"w{p}{q}{k}" for k in range(rng.randint(1, 3))] for q in range(dims)]})
    actions = []
    for p in range(len(props)):
        per_obj = {}
        for o in objects:
            per_obj[o] = [{"id": f"a{p}{o[1:]}{k}", "in": [], "ext": []} for k in range(rng.randint(1, max_actions))]
        actions.append(per_obj)

    def value(p):
        return [rng.choice(d) for d in props[p]["domains"]]

    states = []
    for i in range(rng.randint(1, max_states)):
        owner = {h: rng.choice(objects + [None]) for h in essences}
        es = {o: [h for h in essences if owner[h] == o] for o in objects}
        g, gstar, theta, rel = [], [], [], []
        for p in range(len(props)):
            vals = {h: value(p) for h in essences if owner[h] is not None}
            g.append(vals)
            gstar.append({o: [[h, vals[h]] for h in es[o]] for o in objects})
            theta.append({
                o: rng.sample([a["id"] for a in actions[p][o]], rng.randint(1, len(actions[p][o])))
                for o in objects
            })
            rel.append({o: [u for u in objects if u != o and rng.random() < 0.5] for o in objects})
        states.append({"id": f"e{i + 1}", "es": es, "g": g, "gstar": gstar, "theta": theta,
                       "sensation": {}, "relations": rel})
    doc = {
        "signature": {"objects": objects, "essences": essences, "properties": props,
                      "actions": actions, "sra": [None] * len(props)},
        "states": states,
        "transition": [],
        "realized_inputs": {},
        "perspectives": {},
    }
    m = load_structure(doc)
    sig = m.signature
    ids = [s["id"] for s in states]
    for sid in ids:
        for v in admissible_inputs(m, sid):
            if rng.random() < 0.85:
                doc["transition"].append({"from": sid, "input": _input_doc(sig, v), "to": rng.choice(ids)})
    n_times = rng.randint(1, max_times)
    anchors = sorted(rng.sample(range(1, n_times + 1), rng.randint(1, min(2, n_times))))
    if n_times not in anchors:
        anchors.append(n_times)
    for anchor in anchors:
        moments, realized = {}, {}
        for t in range(1, n_times + 1):
            reals = {}
            for _ in range(rng.randint(1, 2)):
                cond = rng.choice("eh")
                reals[(cond, rng.choice(ids))] = None
            sit = Situator.for_time(t, anchor).value
            moments[str(t)] = [[t, c, sit, e] for c, e in reals]
            if t <= anchor and rng.random() < 0.9:
                e = rng.choice(ids)
                vs = admissible_inputs(m, e)
                if vs:
                    realized[str(t)] = _input_doc(sig, rng.choice(vs))
        doc["perspectives"][str(anchor)] = {"moments": moments, "realized_inputs": realized, "succ": []}
    return doc


def _input_doc(sig, v) -> dict:
    return {o: list(v[i]) for i, o in enumerate(sig.objects)}


def random_structure(rng: random.Random, **kw) -> MmppfStructure:
    return load_structure(random_document(rng, **kw))


# --- formulas over a structure ---------------------------------------------


def _obj_atom(m, r, o, rng, perturb):
    s = m.state(r.state)
    props = [s.gstar_of(p, o) for p in range(len(m.signature.properties))]
    if perturb:
        p = rng.randrange(len(props))
        dom = m.signature.properties[p].domains
        props[p] = frozenset() if props[p] else frozenset({(rng.choice(m.signature.essences), tuple(rng.choice(d) for d in dom))})
    return ObjAtom(r.condition, r.situator, o, tuple(props))


def _act_atom(m, pt, r, o, rng, perturb):
    sig = m.signature
    if not perturb and r.condition is Condition.REALIZED and r.time <= pt.anchor and r.time in pt.realized_inputs:
        acts = pt.realized_inputs[r.time][sig.object_index(o)]
    elif not perturb:
        s = m.state(r.state)
        acts = tuple(rng.choice(sorted(s.theta_of(p, o)) or list(sig.catalog(p, o))) for p in range(len(sig.properties)))
    else:
        acts = tuple(rng.choice(sig.catalog(p, o)) for p in range(len(sig.properties)))
    return ActAtom(r.condition, r.situator, o, acts)


def random_block(m: MmppfStructure, pt, r, rng: random.Random, noise: float = 0.2) -> Block:
    """A block describing reality ``r``, with a chance of false atoms."""
    sig = m.signature
    atoms = []
    objs = rng.sample(sig.objects, rng.randint(1, len(sig.objects)))
    for o in objs:
        kind = rng.random()
        if kind < 0.6:
            atoms.append(_obj_atom(m, r, o, rng, rng.random() < noise))
        elif kind < 0.8:
            atoms.append(_act_atom(m, pt, r, o, rng, rng.random() < noise))
        else:
            p = rng.randrange(len(sig.properties))
            s = m.state(r.state)
            targets = sorted(s.related(o, p))
            if targets and rng.random() >= noise:
                atoms.append(RelAtom(r.condition, r.situator, o, p, rng.choice(targets)))
            else:
                atoms.append(RelAtom(r.condition, r.situator, o, p, rng.choice(sig.objects)))
    return Block(tuple(atoms))


def random_pl_formula(m: MmppfStructure, anchor: int, rng: random.Random, max_chains: int = 2,
                      max_blocks: int = 3, noise: float = 0.2, follow: float = 0.7) -> Formula:
    """A well-formed PL formula over ``m`` seen from ``anchor``.

    With probability ``follow`` each next block describes a reality actually
    reachable from the previous one, so a good share of formulas hold.
    """
    pt = m.perspectives[anchor]
    realities = list(pt.realities())
    while True:
        chains = []
        for _ in range(rng.randint(1, max_chains)):
            r = rng.choice(realities)
            blocks, conns = [random_block(m, pt, r, rng, noise)], []
            for _ in range(rng.randint(0, max_blocks - 1)):
                conn = rng.choice((NEXT, LATER))
                r = _next_reality(m, pt, r, conn, rng, follow, realities)
                if r is None:
                    break
                conns.append(conn)
                blocks.append(random_block(m, pt, r, rng, noise))
            chains.append(Chain(tuple(blocks), tuple(conns)))
        f = Formula(tuple(chains))
        if not check_wff(f):
            return f


def _next_reality(m, pt, r, conn, rng, follow, realities):
    if rng.random() < follow:
        cands = []
        for v in admissible_inputs(m, r.state):
            s = step(m, r.state, v)
            if conn == NEXT:
                cands += [r2 for r2 in pt.moment(r.time + 1) if r2.state == s]
            else:
                cands += [r2 for r2 in pt.realities() if r2.time > r.time]
        if cands:
            return rng.choice(cands)
    later = [r2 for r2 in realities if r2.time > r.time] if conn == LATER else list(pt.moment(r.time + 1))
    return rng.choice(later) if later else None


# --- free-form syntax -------------------------------------------------------


def _name(rng, prefix, n=3):
    return f"{prefix}{rng.randint(1, n)}"


def random_atom(rng: random.Random, layer: str, cond=None, sit=None, n_props: int = 2):
    cond = cond or rng.choice(CONDITIONS)
    sit = sit or rng.choice(SITUATORS)
    o = _name(rng, "o")
    if layer == "pl":
        kind = rng.randrange(3)
        if kind == 0:
            props = tuple(
                frozenset((_name(rng, "h"), tuple(_name(rng, "w") for _ in range(rng.randint(1, 2))))
                          for _ in range(rng.randint(0, 2)))
                for _ in range(n_props)
            )
            return ObjAtom(cond, sit, o, props)
        if kind == 1:
            return RelAtom(cond, sit, o, rng.randrange(n_props), _name(rng, "o"))
        return ActAtom(cond, sit, o, tuple(_name(rng, "a") for _ in range(n_props)))
    if layer == "pl*":
        kind = rng.randrange(3)
        if kind == 0:
            return MetaAtom(cond, sit, o, tuple(rng.choice(SIGMA1 + SIGMA2) for _ in range(n_props)))
        if kind == 1:
            return CompAtom(cond, sit, o, rng.randrange(n_props), rng.randint(1, 2), rng.choice(SIGMA3 + SIGMA4))
        return MetaRelAtom(cond, sit, o, _name(rng, "o"), rng.choice(PI1 + PI2))
    target = Pattern(_name(rng, "pat")) if rng.random() < 0.2 else o
    kind = rng.randrange(3)
    if kind == 0:
        return ClPropAtom(cond, sit, target, rng.randrange(n_props), rng.choice(SIGMA1 + SIGMA2))
    if kind == 1:
        return ClCompAtom(cond, sit, target, rng.randrange(n_props), rng.randint(1, 2), rng.choice(SIGMA3 + SIGMA4))
    return ClRelAtom(cond, sit, target, _name(rng, "o"), rng.choice(PI1 + PI2))


def random_formula(rng: random.Random, layer: str, max_chains: int = 2, max_blocks: int = 3,
                   max_atoms: int = 3, uniform: float = 0.7) -> Formula:
    """Syntactically valid, not necessarily well formed.

    With probability ``uniform`` a block shares one condition and situator.
    """
    chains = []
    for _ in range(rng.randint(1, max_chains)):
        blocks = []
        for _ in range(rng.randint(1, max_blocks)):
            if rng.random() < uniform:
                cond, sit = rng.choice(CONDITIONS), rng.choice(SITUATORS)
            else:
                cond = sit = None
            blocks.append(Block(tuple(random_atom(rng, layer, cond, sit) for _ in range(rng.randint(1, max_atoms)))))
        conns = tuple(rng.choice((NEXT, LATER)) for _ in blocks[1:])
        chains.append(Chain(tuple(blocks), conns))
    return Formula(tuple(chains))


__all__ = [
    "META_SYMBOLS",
    "random_atom",
    "random_block",
    "random_document",
    "random_formula",
    "random_pl_formula",
    "random_structure",
]
