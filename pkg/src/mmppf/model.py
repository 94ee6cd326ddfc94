"""Finite representation of state structures, temporal perspectives and
MMPPF structures.

Every abstract function of the formalism (transition ``&``, laws ``l^p``,
sensation laws ``sl^k``, dependency maps ``d^p_j``, realized inputs) is an
explicit finite table.  Structures are immutable after :func:`load_structure`
returns; all lookups are by identifier strings.

Conventions used throughout the package:

* a property value is ``None`` (the empty value) or a tuple of domain
  element names whose length equals the property's dimension;
* a sensation register is ``None`` (the empty register) or a tuple of
  ``(x, y)`` pairs with ``x, y`` in ``{"s", "c"}``;
* an input vector is a tuple with one entry per object (signature order),
  each entry a tuple of action ids, one per property;
* a snapshot is a tuple with one ``frozenset`` of ``(essence, value)`` pairs
  per object (signature order);
* a bundle is a tuple with one action id (or ``None``) per object.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import StructureError

Value = "tuple[str, ...] | None"
InputVector = tuple  # tuple[tuple[str, ...], ...]

EMPTY = None
REGISTER_SYMBOLS = ("s", "c")


class _Undefined:
    """The value of the transition function outside its admissible inputs."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


class Condition(str, enum.Enum):
    REALIZED = "e"
    HYPOTHETICAL = "h"

    def __str__(self):
        return self.value


class Situator(str, enum.Enum):
    PAST = "past"
    PRESENT = "present"
    FUTURE = "future"

    @property
    def token(self) -> str:
        return _SIT_TOKENS[self]

    @classmethod
    def from_token(cls, tok: str) -> "Situator":
        return _TOKEN_SITS[tok]

    @classmethod
    def for_time(cls, time: int, anchor: int) -> "Situator":
        if time < anchor:
            return cls.PAST
        if time == anchor:
            return cls.PRESENT
        return cls.FUTURE

    def __str__(self):
        return self.value


_SIT_TOKENS = {Situator.PAST: "<|", Situator.PRESENT: "@=", Situator.FUTURE: "|>"}
_TOKEN_SITS = {v: k for k, v in _SIT_TOKENS.items()}


@dataclass(frozen=True)
class Property:
    name: str
    domains: tuple  # tuple[tuple[str, ...], ...], each in its total order

    @property
    def dim(self) -> int:
        return len(self.domains)

    def rank(self, q: int, w: str) -> int:
        """Position of ``w`` in the order of component ``q`` (1-based q)."""
        return self.domains[q - 1].index(w)


@dataclass(frozen=True)
class Action:
    id: str
    obj: str
    prop: int
    inn: tuple = ()  # ((essence, value, result), ...)
    ext: tuple = ()

    @property
    def essence_domain(self) -> frozenset:
        """DH: the essences the ``in`` table is defined on."""
        return frozenset(h for h, _, _ in self.inn)


@dataclass(frozen=True)
class Signature:
    objects: tuple
    essences: tuple
    properties: tuple
    actions: tuple = ()
    sra: tuple = (EMPTY,)
    _obj_index: dict = field(init=False, repr=False, compare=False)
    _action_by_id: dict = field(init=False, repr=False, compare=False)
    _catalog: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_obj_index", {o: i for i, o in enumerate(self.objects)})
        object.__setattr__(self, "_action_by_id", {a.id: a for a in self.actions})
        catalog: dict = {}
        for a in self.actions:
            catalog.setdefault((a.prop, a.obj), []).append(a.id)
        object.__setattr__(
            self, "_catalog", {k: tuple(sorted(v)) for k, v in catalog.items()}
        )

    @property
    def n(self) -> int:
        """Index of the last property (properties are ``0..n``)."""
        return len(self.properties) - 1

    def object_index(self, o: str) -> int:
        try:
            return self._obj_index[o]
        except KeyError:
            raise StructureError("UNKNOWN_OBJECT", f"unknown object {o!r}", object=o) from None

    def has_object(self, o: str) -> bool:
        return o in self._obj_index

    def action(self, a: str) -> Action:
        return self._action_by_id[a]

    def has_action(self, a: str) -> bool:
        return a in self._action_by_id

    def catalog(self, p: int, o: str) -> tuple:
        """A^p_o: the action ids object ``o`` owns for property ``p``."""
        return self._catalog.get((p, o), ())


@dataclass(frozen=True)
class StateStructure:
    id: str
    es: dict  # object -> frozenset of essences
    g: tuple  # per property: {essence: value}; missing means EMPTY
    gstar: tuple  # per property: {object: frozenset((essence, value))}
    theta: tuple  # per property: {object: frozenset(action ids)}
    sensation: dict  # object -> register
    relations: tuple  # per property: {object: frozenset(objects)}

    def value(self, p: int, h: str):
        return self.g[p].get(h, EMPTY)

    def gstar_of(self, p: int, o: str) -> frozenset:
        return self.gstar[p].get(o, frozenset())

    def theta_of(self, p: int, o: str) -> frozenset:
        return self.theta[p].get(o, frozenset())

    def related(self, o: str, p: int) -> frozenset:
        return self.relations[p].get(o, frozenset())

    def essences_of(self, o: str) -> frozenset:
        return self.es.get(o, frozenset())


@dataclass(frozen=True, order=True)
class Reality:
    time: int
    condition: Condition
    situator: Situator
    state: str

    def __str__(self):
        return f"({self.time},{self.condition.value},{self.situator.token},{self.state})"


@dataclass(frozen=True)
class SuccEdge:
    source: Reality
    input: tuple
    target: Reality


@dataclass(frozen=True)
class TemporalPerspective:
    anchor: int
    time_set: tuple
    moments: dict  # time -> tuple[Reality]
    realized_inputs: dict  # time (<= anchor) -> input vector
    succ: tuple = ()

    def realities(self) -> Iterator[Reality]:
        for t in sorted(self.moments):
            yield from self.moments[t]

    def moment(self, t: int) -> tuple:
        return self.moments.get(t, ())

    def precedes(self, r1: Reality, r2: Reality) -> bool:
        return r1.time < r2.time

    def succ_lookup(self, r: Reality, v: tuple):
        for e in self.succ:
            if e.source == r and e.input == v:
                return e.target
        return None


@dataclass(frozen=True)
class LawEntry:
    prop: int
    source: tuple  # snapshot
    actions: tuple  # bundle
    dependencies: frozenset
    results: frozenset  # of snapshots


@dataclass(frozen=True)
class DependencyEntry:
    state: str
    prop: int
    g0: tuple
    gp: tuple
    actions: tuple
    result: frozenset


@dataclass(frozen=True)
class SensationLaw:
    name: str
    table: dict  # (register, object, state, input) -> register

    def apply(self, register, o, state, v):
        return self.table.get((register, o, state, v), UNDEFINED)


@dataclass(frozen=True)
class MmppfStructure:
    signature: Signature
    states: dict  # id -> StateStructure, in document order
    transition: dict  # (state id, input) -> state id
    laws: tuple = ()
    sensation_laws: tuple = ()
    dependencies: tuple = ()
    perspectives: dict = field(default_factory=dict)  # anchor -> TemporalPerspective
    realized_inputs: dict = field(default_factory=dict)  # funi
    time_set: tuple = ()
    _inputs: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_inputs", {sid: _enumerate_inputs(self.signature, s) for sid, s in self.states.items()}
        )

    def state(self, e) -> StateStructure:
        sid = e.id if isinstance(e, StateStructure) else e
        try:
            return self.states[sid]
        except KeyError:
            raise StructureError("DANGLING_REFERENCE", f"unknown state {sid!r}", ref=sid) from None

    def all_inputs(self) -> tuple:
        """I: the union of all admissible input sets, deterministically ordered."""
        seen = {}
        for vs in self._inputs.values():
            for v in vs:
                seen.setdefault(v, None)
        return tuple(sorted(seen))

    def snapshot(self, e, p: int) -> tuple:
        s = self.state(e)
        return tuple(s.gstar_of(p, o) for o in self.signature.objects)

    def dependency_set(self, e, p: int) -> frozenset:
        """D^p_j: the pairs ``(o_i, o_u)`` with ``o_u`` in ``S^{o_i,p}_j``."""
        s = self.state(e)
        return frozenset((o, u) for o, us in s.relations[p].items() for u in us)

    def bundle(self, v: tuple, p: int) -> tuple:
        """The per-object actions of property ``p`` inside input vector ``v``."""
        return tuple(a[p] for a in v)


# ---------------------------------------------------------------------------
# operations


def project_input(sig: Signature, v: tuple, o: str) -> tuple:
    """The component of input vector ``v`` belonging to object ``o``."""
    return v[sig.object_index(o)]


def make_input(sig: Signature, components: Mapping[str, Iterable[str]]) -> tuple:
    """Build an input vector from a per-object mapping of action tuples."""
    missing = [o for o in sig.objects if o not in components]
    if missing:
        raise StructureError("UNKNOWN_OBJECT", f"input vector lacks objects {missing}")
    for o in components:
        sig.object_index(o)
    return tuple(tuple(components[o]) for o in sig.objects)


def _enumerate_inputs(sig: Signature, s: StateStructure) -> tuple:
    slots = [
        sorted(s.theta_of(p, o)) for o in sig.objects for p in range(len(sig.properties))
    ]
    width = len(sig.properties)
    out = []
    for flat in itertools.product(*slots):
        out.append(tuple(tuple(flat[i : i + width]) for i in range(0, len(flat), width)))
    return tuple(out)


def admissible_inputs(m: MmppfStructure, e) -> tuple:
    """I_e: the Cartesian product of the state's theta sets.

    Ordered by object index, then property index, then action id.  Empty when
    any theta set is empty.
    """
    return m._inputs[m.state(e).id]


def step(m: MmppfStructure, e, v: tuple):
    """The transition function: the successor state id, or ``UNDEFINED``."""
    sid = m.state(e).id
    if v not in m._inputs[sid]:
        return UNDEFINED
    return m.transition.get((sid, v), UNDEFINED)


def time_points(m: MmppfStructure) -> tuple:
    return m.time_set


# ---------------------------------------------------------------------------
# loading


class _Reader:
    """Walks a decoded JSON document keeping a field path for error messages."""

    def __init__(self, sig: Signature | None = None):
        self.sig = sig

    @staticmethod
    def fail(path: str, msg: str, code: str = "PARSE_ERROR", **detail):
        raise StructureError(code, f"{path}: {msg}", path=path, **detail)

    def get(self, obj, key, path, kind=None, default=Ellipsis):
        if not isinstance(obj, dict):
            self.fail(path, "expected an object")
        if key not in obj:
            if default is Ellipsis:
                self.fail(f"{path}.{key}", "missing field")
            return default
        val = obj[key]
        if kind is not None and not isinstance(val, kind):
            self.fail(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
        return val

    def object(self, o, path):
        if not isinstance(o, str):
            self.fail(path, "object identifier must be a string")
        if not self.sig.has_object(o):
            self.fail(path, f"undeclared object {o!r}", "DANGLING_REFERENCE", ref=o)
        return o

    def essence(self, h, path):
        if not isinstance(h, str):
            self.fail(path, "essence identifier must be a string")
        if h not in self._essences:
            self.fail(path, f"undeclared essence {h!r}", "DANGLING_REFERENCE", ref=h)
        return h

    def action(self, a, path, p: int | None = None):
        if not isinstance(a, str) or not self.sig.has_action(a):
            self.fail(path, f"undeclared action {a!r}", "DANGLING_REFERENCE", ref=a)
        if p is not None and self.sig.action(a).prop != p:
            self.fail(path, f"action {a!r} does not act on property {p}", "DANGLING_REFERENCE", ref=a)
        return a

    def prop(self, p, path) -> int:
        if isinstance(p, str) and p.isdigit():
            p = int(p)
        if not isinstance(p, int) or not 0 <= p < len(self.sig.properties):
            self.fail(path, f"undeclared property {p!r}", "DANGLING_REFERENCE", ref=str(p))
        return p

    def value(self, raw, p: int, path):
        if raw is None:
            return EMPTY
        if not isinstance(raw, list) or not all(isinstance(w, str) for w in raw):
            self.fail(path, "value must be null or a list of strings")
        prop = self.sig.properties[p]
        if len(raw) != prop.dim:
            self.fail(path, f"value has {len(raw)} components, dim({p}) = {prop.dim}", "ARITY_ERROR")
        for q, w in enumerate(raw):
            if w not in prop.domains[q]:
                self.fail(f"{path}[{q}]", f"{w!r} not in W[{p},{q + 1}]", "DANGLING_REFERENCE", ref=w)
        return tuple(raw)

    def register(self, raw, path):
        if raw is None:
            return EMPTY
        if not isinstance(raw, list):
            self.fail(path, "register must be null or a list of pairs")
        pairs = []
        for i, pair in enumerate(raw):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or any(x not in REGISTER_SYMBOLS for x in pair)
            ):
                self.fail(f"{path}[{i}]", "register entries are pairs over {s, c}")
            pairs.append(tuple(pair))
        return tuple(pairs)

    def domain_register(self, raw, path):
        reg = self.register(raw, path)
        if reg not in self.sig.sra:
            self.fail(path, f"register {raw!r} not in the SRA domain", "DANGLING_REFERENCE", ref=str(raw))
        return reg

    def input(self, raw, path):
        if not isinstance(raw, dict):
            self.fail(path, "input vector must be an object map")
        for o in raw:
            self.object(o, f"{path}.{o}")
        comps = []
        for o in self.sig.objects:
            if o not in raw:
                self.fail(f"{path}.{o}", "input vector lacks this object")
            acts = raw[o]
            if not isinstance(acts, list) or len(acts) != len(self.sig.properties):
                self.fail(f"{path}.{o}", "one action per property expected", "ARITY_ERROR")
            comps.append(tuple(self.action(a, f"{path}.{o}[{p}]", p) for p, a in enumerate(acts)))
        return tuple(comps)

    def pairs_set(self, raw, p, path) -> frozenset:
        if not isinstance(raw, list):
            self.fail(path, "expected a list of [essence, value] pairs")
        out = set()
        for i, item in enumerate(raw):
            if not isinstance(item, list) or len(item) != 2:
                self.fail(f"{path}[{i}]", "expected [essence, value]")
            out.add((self.essence(item[0], f"{path}[{i}][0]"), self.value(item[1], p, f"{path}[{i}][1]")))
        return frozenset(out)

    def snapshot(self, raw, p, path) -> tuple:
        if not isinstance(raw, dict):
            self.fail(path, "snapshot must be an object map")
        for o in raw:
            self.object(o, f"{path}.{o}")
        return tuple(self.pairs_set(raw.get(o, []), p, f"{path}.{o}") for o in self.sig.objects)

    def bundle(self, raw, p, path) -> tuple:
        if not isinstance(raw, dict):
            self.fail(path, "bundle must be an object map")
        for o in raw:
            self.object(o, f"{path}.{o}")
        return tuple(
            None if raw.get(o) is None else self.action(raw[o], f"{path}.{o}", p)
            for o in self.sig.objects
        )

    def dep_set(self, raw, path) -> frozenset:
        if not isinstance(raw, list):
            self.fail(path, "dependency set must be a list of [object, object]")
        out = set()
        for i, item in enumerate(raw):
            if not isinstance(item, list) or len(item) != 2:
                self.fail(f"{path}[{i}]", "expected [object, object]")
            out.add((self.object(item[0], f"{path}[{i}][0]"), self.object(item[1], f"{path}[{i}][1]")))
        return frozenset(out)


def _read_signature(doc, r: _Reader) -> Signature:
    sd = r.get(doc, "signature", "$", dict)
    objects = r.get(sd, "objects", "signature", list)
    essences = r.get(sd, "essences", "signature", list)
    for path, seq in (("signature.objects", objects), ("signature.essences", essences)):
        if not all(isinstance(x, str) for x in seq):
            r.fail(path, "identifiers must be strings")
        if len(set(seq)) != len(seq):
            r.fail(path, "duplicate identifier")
    if len(objects) > len(essences):
        r.fail("signature", f"{len(objects)} objects but only {len(essences)} essences (z <= z')")
    props_raw = r.get(sd, "properties", "signature", list)
    if not props_raw:
        r.fail("signature.properties", "property 0 (the spatial property) is required")
    props = []
    for p, pr in enumerate(props_raw):
        path = f"signature.properties[{p}]"
        doms = r.get(pr, "domains", path, list)
        if not doms:
            r.fail(f"{path}.domains", "dim(p) must be at least 1", "ARITY_ERROR")
        for q, w in enumerate(doms):
            if not isinstance(w, list) or not w or not all(isinstance(x, str) for x in w):
                r.fail(f"{path}.domains[{q}]", "domain must be a non-empty list of strings")
            if len(set(w)) != len(w):
                r.fail(f"{path}.domains[{q}]", "duplicate domain element")
        props.append(Property(r.get(pr, "name", path, str, default=f"p{p}"), tuple(tuple(w) for w in doms)))
    sra_raw = r.get(sd, "sra", "signature", list, default=[None])
    base = Signature(tuple(objects), tuple(essences), tuple(props))
    r.sig = base
    r._essences = set(essences)
    sra = []
    for i, reg in enumerate(sra_raw):
        sra.append(r.register(reg, f"signature.sra[{i}]"))
    actions = []
    seen = set()
    cat = r.get(sd, "actions", "signature", list, default=[])
    if len(cat) > len(props):
        r.fail("signature.actions", "more action catalogs than properties")
    for p, per_obj in enumerate(cat):
        path = f"signature.actions[{p}]"
        if not isinstance(per_obj, dict):
            r.fail(path, "expected object -> list of actions")
        for o, acts in per_obj.items():
            r.object(o, f"{path}.{o}")
            if not isinstance(acts, list):
                r.fail(f"{path}.{o}", "expected a list of actions")
            for k, ad in enumerate(acts):
                apath = f"{path}.{o}[{k}]"
                aid = r.get(ad, "id", apath, str)
                if aid in seen:
                    r.fail(f"{apath}.id", f"duplicate action id {aid!r}")
                seen.add(aid)
                tables = []
                for key in ("in", "ext"):
                    rows = []
                    for i, row in enumerate(r.get(ad, key, apath, list, default=[])):
                        rpath = f"{apath}.{key}[{i}]"
                        if not isinstance(row, list) or len(row) != 3:
                            r.fail(rpath, "expected [essence, value, result]")
                        rows.append(
                            (
                                r.essence(row[0], f"{rpath}[0]"),
                                r.value(row[1], p, f"{rpath}[1]"),
                                r.value(row[2], p, f"{rpath}[2]"),
                            )
                        )
                    tables.append(tuple(sorted(rows, key=_sort_key)))
                actions.append(Action(aid, o, p, tables[0], tables[1]))
    sig = Signature(tuple(objects), tuple(essences), tuple(props), tuple(actions), tuple(dict.fromkeys(sra)))
    r.sig = sig
    return sig


def _read_state(sd, i: int, r: _Reader) -> StateStructure:
    sig = r.sig
    path = f"states[{i}]"
    sid = r.get(sd, "id", path, str)
    nprops = len(sig.properties)

    def per_prop(key):
        raw = r.get(sd, key, path, list, default=[])
        if len(raw) > nprops:
            r.fail(f"{path}.{key}", "more entries than properties")
        return raw + [{}] * (nprops - len(raw))

    es = {}
    for o, hs in r.get(sd, "es", path, dict, default={}).items():
        r.object(o, f"{path}.es.{o}")
        if not isinstance(hs, list):
            r.fail(f"{path}.es.{o}", "expected a list of essences")
        es[o] = frozenset(r.essence(h, f"{path}.es.{o}") for h in hs)
    g = []
    for p, table in enumerate(per_prop("g")):
        if not isinstance(table, dict):
            r.fail(f"{path}.g[{p}]", "expected essence -> value")
        g.append(
            {
                r.essence(h, f"{path}.g[{p}].{h}"): r.value(v, p, f"{path}.g[{p}].{h}")
                for h, v in table.items()
                if v is not None
            }
        )
    gstar = []
    for p, table in enumerate(per_prop("gstar")):
        if not isinstance(table, dict):
            r.fail(f"{path}.gstar[{p}]", "expected object -> pairs")
        gstar.append(
            {
                r.object(o, f"{path}.gstar[{p}].{o}"): r.pairs_set(pairs, p, f"{path}.gstar[{p}].{o}")
                for o, pairs in table.items()
                if pairs
            }
        )
    theta = []
    for p, table in enumerate(per_prop("theta")):
        if not isinstance(table, dict):
            r.fail(f"{path}.theta[{p}]", "expected object -> actions")
        theta.append(
            {
                r.object(o, f"{path}.theta[{p}].{o}"): frozenset(
                    r.action(a, f"{path}.theta[{p}].{o}", p) for a in acts
                )
                for o, acts in table.items()
                if acts
            }
        )
    relations = []
    for p, table in enumerate(per_prop("relations")):
        if not isinstance(table, dict):
            r.fail(f"{path}.relations[{p}]", "expected object -> objects")
        relations.append(
            {
                r.object(o, f"{path}.relations[{p}].{o}"): frozenset(
                    r.object(u, f"{path}.relations[{p}].{o}") for u in us
                )
                for o, us in table.items()
                if us
            }
        )
    sensation = {}
    for o, reg in r.get(sd, "sensation", path, dict, default={}).items():
        r.object(o, f"{path}.sensation.{o}")
        sensation[o] = r.domain_register(reg, f"{path}.sensation.{o}")
    for o in sig.objects:
        sensation.setdefault(o, EMPTY)
    return StateStructure(sid, es, tuple(g), tuple(gstar), tuple(theta), sensation, tuple(relations))


def _read_reality(raw, states, anchor, path, r: _Reader) -> Reality:
    if not isinstance(raw, list) or len(raw) != 4:
        r.fail(path, "reality must be [time, condition, situator, state]")
    t, c, s, e = raw
    if not isinstance(t, int) or t < 1:
        r.fail(f"{path}[0]", "time must be a positive integer")
    try:
        cond = Condition(c)
    except ValueError:
        r.fail(f"{path}[1]", f"condition must be 'e' or 'h', got {c!r}")
    try:
        sit = Situator(s)
    except ValueError:
        r.fail(f"{path}[2]", f"situator must be past/present/future, got {s!r}")
    if e not in states:
        r.fail(f"{path}[3]", f"undeclared state {e!r}", "DANGLING_REFERENCE", ref=e)
    if anchor is not None and sit is not Situator.for_time(t, anchor):
        r.fail(path, f"situator {sit.value} inconsistent with time {t} at anchor {anchor}")
    return Reality(t, cond, sit, e)


def _time_keys(raw: dict, path, r: _Reader) -> dict:
    out = {}
    for k, v in raw.items():
        try:
            t = int(k)
        except (TypeError, ValueError):
            r.fail(f"{path}.{k}", "time keys must be integers")
        if t < 1:
            r.fail(f"{path}.{k}", "times start at 1")
        out[t] = v
    return out


def load_structure(source) -> MmppfStructure:
    """Build a structure from a document (JSON text, path, or decoded dict)."""
    if isinstance(source, Path):
        source = source.read_text(encoding="utf-8")
    if isinstance(source, str):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise StructureError(
                "PARSE_ERROR", f"line {exc.lineno} column {exc.colno}: {exc.msg}", line=exc.lineno
            ) from None
    else:
        doc = source
    r = _Reader()
    if not isinstance(doc, dict):
        r.fail("$", "structure document must be a JSON object")
    sig = _read_signature(doc, r)

    states: dict = {}
    for i, sd in enumerate(r.get(doc, "states", "$", list)):
        s = _read_state(sd, i, r)
        if s.id in states:
            r.fail(f"states[{i}].id", f"duplicate state id {s.id!r}")
        states[s.id] = s

    transition = {}
    for i, row in enumerate(r.get(doc, "transition", "$", list, default=[])):
        path = f"transition[{i}]"
        src = r.get(row, "from", path, str)
        dst = r.get(row, "to", path, str)
        for key, sid in (("from", src), ("to", dst)):
            if sid not in states:
                r.fail(f"{path}.{key}", f"undeclared state {sid!r}", "DANGLING_REFERENCE", ref=sid)
        v = r.input(r.get(row, "input", path), f"{path}.input")
        if (src, v) in transition and transition[(src, v)] != dst:
            r.fail(path, "conflicting transition entries")
        transition[(src, v)] = dst

    laws = []
    for i, row in enumerate(r.get(doc, "laws", "$", list, default=[])):
        path = f"laws[{i}]"
        p = r.prop(r.get(row, "property", path), f"{path}.property")
        laws.append(
            LawEntry(
                p,
                r.snapshot(r.get(row, "source", path), p, f"{path}.source"),
                r.bundle(r.get(row, "actions", path, default={}), p, f"{path}.actions"),
                r.dep_set(r.get(row, "dependencies", path, default=[]), f"{path}.dependencies"),
                frozenset(
                    r.snapshot(s, p, f"{path}.results[{k}]")
                    for k, s in enumerate(r.get(row, "results", path, list))
                ),
            )
        )

    deps = []
    dep_keys: dict = {}
    for i, row in enumerate(r.get(doc, "dependencies", "$", list, default=[])):
        path = f"dependencies[{i}]"
        sid = r.get(row, "state", path, str)
        if sid not in states:
            r.fail(f"{path}.state", f"undeclared state {sid!r}", "DANGLING_REFERENCE", ref=sid)
        p = r.prop(r.get(row, "property", path), f"{path}.property")
        entry = DependencyEntry(
            sid,
            p,
            r.snapshot(r.get(row, "g0", path), 0, f"{path}.g0"),
            r.snapshot(r.get(row, "gp", path), p, f"{path}.gp"),
            r.bundle(r.get(row, "actions", path, default={}), p, f"{path}.actions"),
            r.dep_set(r.get(row, "result", path), f"{path}.result"),
        )
        key = (entry.state, entry.prop, entry.g0, entry.gp, entry.actions)
        if key in dep_keys and dep_keys[key] != entry.result:
            r.fail(path, "conflicting entries for the same dependency key")
        dep_keys[key] = entry.result
        deps.append(entry)

    sls = []
    for i, fam in enumerate(r.get(doc, "sensation_laws", "$", list, default=[])):
        path = f"sensation_laws[{i}]"
        name = r.get(fam, "name", path, str, default=f"sl{i + 1}")
        table = {}
        for k, row in enumerate(r.get(fam, "entries", path, list, default=[])):
            epath = f"{path}.entries[{k}]"
            sid = r.get(row, "state", epath, str)
            if sid not in states:
                r.fail(f"{epath}.state", f"undeclared state {sid!r}", "DANGLING_REFERENCE", ref=sid)
            key = (
                r.domain_register(r.get(row, "register", epath), f"{epath}.register"),
                r.object(r.get(row, "object", epath), f"{epath}.object"),
                sid,
                r.input(r.get(row, "input", epath), f"{epath}.input"),
            )
            res = r.domain_register(r.get(row, "result", epath), f"{epath}.result")
            if key in table and table[key] != res:
                r.fail(epath, "conflicting sensation-law entries")
            table[key] = res
        sls.append(SensationLaw(name, table))

    funi = {
        t: r.input(v, f"realized_inputs.{t}")
        for t, v in _time_keys(r.get(doc, "realized_inputs", "$", dict, default={}), "realized_inputs", r).items()
    }

    raw_persp = _time_keys(r.get(doc, "perspectives", "$", dict, default={}), "perspectives", r)
    horizon = max([0, *funi, *raw_persp])
    for pd in raw_persp.values():
        if isinstance(pd, dict) and isinstance(pd.get("moments"), dict):
            horizon = max([horizon, *_time_keys(pd["moments"], "perspectives.moments", r)])
    time_set = tuple(range(1, horizon + 1))

    perspectives = {}
    for anchor in sorted(raw_persp):
        pd = raw_persp[anchor]
        path = f"perspectives.{anchor}"
        moments = {t: () for t in time_set}
        for t, rs in _time_keys(r.get(pd, "moments", path, dict, default={}), f"{path}.moments", r).items():
            if not isinstance(rs, list):
                r.fail(f"{path}.moments.{t}", "expected a list of realities")
            reals = []
            for k, raw in enumerate(rs):
                rpath = f"{path}.moments.{t}[{k}]"
                rea = _read_reality(raw, states, anchor, rpath, r)
                if rea.time != t:
                    r.fail(rpath, f"reality time {rea.time} filed under moment {t}")
                reals.append(rea)
            moments[t] = tuple(sorted(set(reals)))
        known = {x for ms in moments.values() for x in ms}
        funcip = {
            t: r.input(v, f"{path}.realized_inputs.{t}")
            for t, v in _time_keys(
                r.get(pd, "realized_inputs", path, dict, default={}), f"{path}.realized_inputs", r
            ).items()
        }
        for t in funcip:
            if t > anchor:
                r.fail(f"{path}.realized_inputs.{t}", "realized inputs exist only up to the anchor")
        succ = []
        for k, row in enumerate(r.get(pd, "succ", path, list, default=[])):
            spath = f"{path}.succ[{k}]"
            src = _read_reality(r.get(row, "from", spath), states, anchor, f"{spath}.from", r)
            dst = _read_reality(r.get(row, "to", spath), states, anchor, f"{spath}.to", r)
            for key, x in (("from", src), ("to", dst)):
                if x not in known:
                    r.fail(f"{spath}.{key}", f"reality {x} is not in any moment", "DANGLING_REFERENCE", ref=str(x))
            succ.append(SuccEdge(src, r.input(r.get(row, "input", spath), f"{spath}.input"), dst))
        tset = r.get(pd, "time_set", path, list, default=list(time_set))
        perspectives[anchor] = TemporalPerspective(anchor, tuple(tset), moments, funcip, tuple(succ))

    return MmppfStructure(
        sig,
        states,
        transition,
        tuple(laws),
        tuple(sls),
        tuple(deps),
        perspectives,
        funi,
        time_set,
    )


def load_file(path) -> MmppfStructure:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StructureError("IO_ERROR", f"{path}: {exc.strerror}") from None
    return load_structure(text)


# ---------------------------------------------------------------------------
# canonical serialization


def _sort_key(x) -> str:
    return json.dumps(_jsonable(x), sort_keys=True)


def _jsonable(x):
    if isinstance(x, (tuple, list, frozenset, set)):
        return [_jsonable(y) for y in x]
    if isinstance(x, enum.Enum):
        return x.value
    return x


def _sorted(items) -> list:
    return sorted((_jsonable(x) for x in items), key=lambda y: json.dumps(y, sort_keys=True))


def _value_json(v):
    return None if v is None else list(v)


def _register_json(reg):
    return None if reg is None else [list(pair) for pair in reg]


def _input_json(sig: Signature, v: tuple) -> dict:
    return {o: list(v[i]) for i, o in enumerate(sig.objects)}


def _pairs_json(pairs) -> list:
    return _sorted([h, _value_json(v)] for h, v in pairs)


def _snapshot_json(sig: Signature, snap: tuple) -> dict:
    return {o: _pairs_json(snap[i]) for i, o in enumerate(sig.objects)}


def _bundle_json(sig: Signature, b: tuple) -> dict:
    return {o: b[i] for i, o in enumerate(sig.objects) if b[i] is not None}


def _reality_json(r: Reality) -> list:
    return [r.time, r.condition.value, r.situator.value, r.state]


def to_document(m: MmppfStructure) -> dict:
    """The canonical document for ``m`` (inverse of :func:`load_structure`)."""
    sig = m.signature
    nprops = len(sig.properties)
    actions = [{} for _ in range(nprops)]
    for a in sig.actions:
        actions[a.prop].setdefault(a.obj, []).append(
            {
                "id": a.id,
                "in": _sorted([h, _value_json(v), _value_json(w)] for h, v, w in a.inn),
                "ext": _sorted([h, _value_json(v), _value_json(w)] for h, v, w in a.ext),
            }
        )
    for per_obj in actions:
        for acts in per_obj.values():
            acts.sort(key=lambda d: d["id"])
    signature = {
        "objects": list(sig.objects),
        "essences": list(sig.essences),
        "properties": [{"name": p.name, "domains": [list(w) for w in p.domains]} for p in sig.properties],
        "actions": actions,
        "sra": _sorted(_register_json(reg) for reg in sig.sra),
    }
    states = []
    for s in m.states.values():
        states.append(
            {
                "id": s.id,
                "es": {o: sorted(hs) for o, hs in s.es.items() if hs},
                "g": [{h: _value_json(v) for h, v in table.items()} for table in s.g],
                "gstar": [{o: _pairs_json(ps) for o, ps in table.items() if ps} for table in s.gstar],
                "theta": [{o: sorted(acts) for o, acts in table.items() if acts} for table in s.theta],
                "sensation": {o: _register_json(reg) for o, reg in s.sensation.items()},
                "relations": [{o: sorted(us) for o, us in table.items() if us} for table in s.relations],
            }
        )
    transition = _sorted_dicts(
        {"from": src, "input": _input_json(sig, v), "to": dst} for (src, v), dst in m.transition.items()
    )
    laws = _sorted_dicts(
        {
            "property": law.prop,
            "source": _snapshot_json(sig, law.source),
            "actions": _bundle_json(sig, law.actions),
            "dependencies": _sorted(law.dependencies),
            "results": _sorted_dicts(_snapshot_json(sig, s) for s in law.results),
        }
        for law in m.laws
    )
    deps = _sorted_dicts(
        {
            "state": d.state,
            "property": d.prop,
            "g0": _snapshot_json(sig, d.g0),
            "gp": _snapshot_json(sig, d.gp),
            "actions": _bundle_json(sig, d.actions),
            "result": _sorted(d.result),
        }
        for d in m.dependencies
    )
    sls = [
        {
            "name": sl.name,
            "entries": _sorted_dicts(
                {
                    "register": _register_json(reg),
                    "object": o,
                    "state": sid,
                    "input": _input_json(sig, v),
                    "result": _register_json(res),
                }
                for (reg, o, sid, v), res in sl.table.items()
            ),
        }
        for sl in m.sensation_laws
    ]
    perspectives = {}
    for anchor, pt in m.perspectives.items():
        perspectives[str(anchor)] = {
            "time_set": list(pt.time_set),
            "moments": {str(t): _sorted(_reality_json(x) for x in rs) for t, rs in pt.moments.items() if rs},
            "realized_inputs": {str(t): _input_json(sig, v) for t, v in pt.realized_inputs.items()},
            "succ": _sorted_dicts(
                {"from": _reality_json(e.source), "input": _input_json(sig, e.input), "to": _reality_json(e.target)}
                for e in pt.succ
            ),
        }
    return {
        "signature": signature,
        "states": states,
        "transition": transition,
        "laws": laws,
        "sensation_laws": sls,
        "dependencies": deps,
        "perspectives": perspectives,
        "realized_inputs": {str(t): _input_json(sig, v) for t, v in m.realized_inputs.items()},
    }


def _sorted_dicts(items) -> list:
    return sorted(items, key=lambda d: json.dumps(d, sort_keys=True))


def dumps_structure(m: MmppfStructure) -> str:
    """Canonical text: sorted keys, sorted set elements, two-space indent."""
    return json.dumps(to_document(m), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def canonicalize(text: str) -> str:
    return dumps_structure(load_structure(text))
