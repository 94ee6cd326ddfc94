"""Helpers for authoring structures: fill the law, dependency and sensation
tables so that they agree with the succession edges already present."""

from __future__ import annotations

import dataclasses

from .model import DependencyEntry, LawEntry, MmppfStructure, SensationLaw


def derive_tables(m: MmppfStructure) -> MmppfStructure:
    """Return ``m`` with ``laws``, ``dependencies`` and ``sensation_laws``
    rebuilt from every succession edge of every perspective.

    The resulting tables make axioms 6, 7 and 11 hold by construction.
    """
    sig = m.signature
    deps = {}
    laws: dict = {}
    sl = {}
    for anchor, pt in m.perspectives.items():
        for e in pt.succ:
            src, dst = e.source.state, e.target.state
            for p in range(len(sig.properties)):
                bundle = m.bundle(e.input, p)
                deps[(src, p, m.snapshot(src, 0), m.snapshot(src, p), bundle)] = m.dependency_set(dst, p)
                key = (p, m.snapshot(src, p), bundle, m.dependency_set(src, p))
                laws.setdefault(key, set()).add(m.snapshot(dst, p))
            if e.source.time == anchor:
                s, d = m.state(src), m.state(dst)
                for o in sig.objects:
                    sl[(s.sensation[o], o, src, e.input)] = d.sensation[o]
    return dataclasses.replace(
        m,
        dependencies=tuple(DependencyEntry(*k, v) for k, v in deps.items()),
        laws=tuple(LawEntry(*k, frozenset(v)) for k, v in laws.items()),
        sensation_laws=(SensationLaw("sl1", sl),),
    )
