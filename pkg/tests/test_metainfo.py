import itertools
import json
import random

import pytest

from mmppf.errors import MetaInfoError
from mmppf.formulas import NEXT, Block, Chain, MetaAtom, ObjAtom, RelAtom, formula
from mmppf.generators import random_pl_formula, random_structure
from mmppf.metainfo import (
    AbstractionProfile,
    ObjectDirective,
    meta_vector,
    ms,
    rs,
    toscp,
    translate_tr1,
    trs,
    tscp,
    tsp,
)
from mmppf.model import Condition, Property, Signature, Situator
from mmppf.syntax import parse_pl, parse_star

from conftest import corpus

E, NOW = Condition.REALIZED, Situator.PRESENT
W = ("w1", "w2", "w3")
SIG = Signature(("o1", "o2"), ("h1", "h2"), (Property("p", (W,)), Property("q", (W, W))))


def obj(o, *props):
    return ObjAtom(E, NOW, o, tuple(frozenset(p) for p in props))


def one(h, *vals):
    return {(h, tuple(vals))}


def rel(o, p, u):
    return RelAtom(E, NOW, o, p, u)


# --- truth tables -------------------------------------------------------------


@pytest.mark.parametrize("pset, want", [(set(), "0"), (one("h1", "w1"), "1")])
def test_sigma1(pset, want):
    assert ms(0, "o1", obj("o1", pset)) == want


def test_sigma1_vector_all_empty():
    assert meta_vector("o1", obj("o1", set(), set()), 2) == ("0", "0")


@pytest.mark.parametrize(
    "left, right, want",
    [
        (one("h1", "w1"), one("h1", "w1"), "b1"),
        (one("h1", "w1"), one("h1", "w2"), "b2"),
        (set(), one("h1", "w1"), "~"),
        (one("h1", "w1"), set(), "~"),
    ],
)
def test_sigma2(left, right, want):
    assert tsp(0, "o1", (obj("o1", left), obj("o1", right))) == want


@pytest.mark.parametrize(
    "left, right, want",
    [
        (one("h1", "w1", "w2"), one("h1", "w1", "w3"), "g1"),
        (one("h1", "w1", "w2"), one("h1", "w2", "w2"), "g2"),
        (set(), one("h1", "w1", "w1"), "~"),
    ],
)
def test_sigma3(left, right, want):
    assert tscp(1, 1, "o1", (obj("o1", set(), left), obj("o1", set(), right))) == want


def test_sigma3_mixed_case():
    left = one("h1", "w1", "w1") | one("h2", "w1", "w1")
    right = one("h1", "w1", "w1") | one("h2", "w2", "w1")
    with pytest.raises(MetaInfoError) as exc:
        tscp(1, 1, "o1", (obj("o1", set(), left), obj("o1", set(), right)))
    assert exc.value.code == "MIXED_COMPONENT_CASE"


def test_sigma3_no_shared_essence_is_mixed():
    with pytest.raises(MetaInfoError) as exc:
        tscp(0, 1, "o1", (obj("o1", one("h1", "w1")), obj("o1", one("h2", "w1"))))
    assert exc.value.code == "MIXED_COMPONENT_CASE"


@pytest.mark.parametrize(
    "left, right, want",
    [
        (one("h1", "w1"), one("h1", "w2"), "d1"),
        (one("h1", "w2"), one("h1", "w1"), "d2"),
        (set(), set(), "~"),
    ],
)
def test_sigma4(left, right, want):
    assert toscp(0, 1, "o1", (obj("o1", left), obj("o1", right)), SIG) == want


@pytest.mark.parametrize(
    "left, right",
    [
        (one("h1", "w1") | one("h2", "w3"), one("h1", "w2") | one("h2", "w1")),
        (one("h1", "w1") | one("h2", "w3"), one("h1", "w1") | one("h2", "w1")),
    ],
)
def test_sigma4_mixed_case(left, right):
    with pytest.raises(MetaInfoError) as exc:
        toscp(0, 1, "o1", (obj("o1", left), obj("o1", right)), SIG)
    assert exc.value.code == "MIXED_COMPONENT_CASE"


@pytest.mark.parametrize("block, want", [
    (Block((rel("o1", 0, "o2"),)), "k2"),
    (Block((rel("o2", 0, "o1"),)), "k1"),
    (Block((obj("o1", set(), set()),)), "k1"),
])
def test_pi1(block, want):
    assert rs(0, "o1", "o2", block) == want


@pytest.mark.parametrize("before, after, want", [
    (False, False, "t1"), (False, True, "t2"), (True, False, "t3"), (True, True, "t4"),
])
def test_pi2(before, after, want):
    filler = obj("o2", set(), set())
    left = Block((rel("o1", 0, "o2"), filler) if before else (filler,))
    right = Block((rel("o1", 0, "o2"), filler) if after else (filler,))
    assert trs(0, "o1", "o2", (left, right)) == want
    assert trs(0, "o1", "o2", Chain((left, right), (NEXT,))) == want


def test_wrong_kinds():
    with pytest.raises(MetaInfoError) as exc:
        ms(0, "o1", rel("o1", 0, "o2"))
    assert exc.value.code == "WRONG_ATOM_KIND"
    with pytest.raises(MetaInfoError) as exc:
        tsp(0, "o1", (obj("o1", set()), obj("o2", set())))
    assert exc.value.code == "WRONG_SHAPE"
    with pytest.raises(MetaInfoError) as exc:
        tsp(0, "o1", Chain((Block((obj("o1", set()),)),), ()))
    assert exc.value.code == "WRONG_SHAPE"


# --- invariants over small exhaustive domains -----------------------------------

PSETS = [set()] + [one(h, w) for h in ("h1", "h2") for w in W] + [one("h1", "w1") | one("h2", "w2")]


def test_ms_zero_exactly_on_empty():
    for ps in PSETS:
        assert (ms(0, "o1", obj("o1", ps)) == "0") == (not ps)


def test_tsp_absent_iff_a_side_is_empty():
    for a, b in itertools.product(PSETS, repeat=2):
        phi = (obj("o1", a), obj("o1", b))
        absent = ms(0, "o1", phi[0]) == "0" or ms(0, "o1", phi[1]) == "0"
        assert (tsp(0, "o1", phi) == "~") == absent


def test_property_and_component_equality_agree_for_single_essence():
    for x, y in itertools.product(W, repeat=2):
        phi = (obj("o1", one("h1", x)), obj("o1", one("h1", y)))
        assert (tsp(0, "o1", phi) == "b1") == (tscp(0, 1, "o1", phi) == "g1")


def test_order_symbols_are_exclusive_and_follow_the_order():
    for x, y in itertools.product(W, repeat=2):
        phi = (obj("o1", one("h1", x)), obj("o1", one("h1", y)))
        if x == y:
            with pytest.raises(MetaInfoError):
                toscp(0, 1, "o1", phi, SIG)
            continue
        got = toscp(0, 1, "o1", phi, SIG)
        assert got == ("d1" if W.index(x) < W.index(y) else "d2")


def test_relation_functors_agree():
    for before, after in itertools.product((False, True), repeat=2):
        left = Block((rel("o1", 0, "o2"),) if before else (obj("o1", set(), set()),))
        right = Block((rel("o1", 0, "o2"),) if after else (obj("o1", set(), set()),))
        assert (trs(0, "o1", "o2", (left, right)) in ("t3", "t4")) == (rs(0, "o1", "o2", left) == "k2")
        assert (trs(0, "o1", "o2", (left, right)) in ("t2", "t4")) == (rs(0, "o1", "o2", right) == "k2")


# --- Tr1 ---------------------------------------------------------------------


def test_lone_block_gives_momentary_atom():
    f = parse_pl("[e|@=|obj o1: {(h1,(left))};_]")
    assert str(translate_tr1(f)) == "[e|@=|meta o1: 1;0]"


def test_pair_gives_temporal_atom():
    f = parse_pl(corpus("toggle-next.pl").read_text())
    assert translate_tr1(f) == parse_star(corpus("toggle-next.pls").read_text())


def test_unchanging_pair_is_all_b1(toggle):
    pt = toggle.perspectives[2]
    e1_past = next(r for r in pt.realities() if r.time == 1)
    e1_now = next(r for r in pt.moment(2) if r.state == "e1")
    s = toggle.state("e1")
    blocks = [
        Block((ObjAtom(r.condition, r.situator, "o1", tuple(s.gstar_of(p, "o1") for p in range(2))),))
        for r in (e1_past, e1_now)
    ]
    out = translate_tr1(formula(Chain(tuple(blocks), (NEXT,))))
    (a,) = out.atoms()
    assert isinstance(a, MetaAtom) and set(a.symbols) == {"b1"}


def test_component_profile():
    profile = AbstractionProfile(objects={"o1": ObjectDirective("component", ((0, 1, "sigma4"),))})
    before = ObjAtom(E, Situator.PAST, "o1", (frozenset(one("h1", "w1")), frozenset()))
    f = formula(Chain((Block((before,)), Block((obj("o1", one("h1", "w3"), set()),))), (NEXT,)))
    assert str(translate_tr1(f, profile, SIG)) == "[e|@=|comp o1[0,1]: d1]"


def test_component_profile_needs_a_pair():
    profile = AbstractionProfile(objects={"o1": ObjectDirective("component", ((0, 1, "sigma3"),))})
    with pytest.raises(MetaInfoError) as exc:
        translate_tr1(parse_pl("[e|@=|obj o1: _;_]"), profile, SIG)
    assert exc.value.code == "PROFILE_MISMATCH"


def test_profile_mismatch_against_signature():
    profile = AbstractionProfile(objects={"o1": ObjectDirective("component", ((0, 2, "sigma3"),))})
    with pytest.raises(MetaInfoError) as exc:
        translate_tr1(parse_pl("[e|@=|obj o1: _;_]"), profile, SIG)
    assert exc.value.code == "PROFILE_MISMATCH"


def test_profile_json_round_trip():
    profile = AbstractionProfile(
        "greedy",
        {"o1": ObjectDirective("property", (), ((1, "sigma1"),)), "o2": ObjectDirective("component", ((1, 2, "sigma3"),))},
        (("o1", 0, "o2"),),
    )
    doc = profile.to_json()
    assert AbstractionProfile.from_json(json.dumps(doc)) == profile
    assert AbstractionProfile.from_json(corpus("default-profile.json")) == AbstractionProfile()


def test_tr1_rejects_ill_formed_input():
    with pytest.raises(MetaInfoError):
        translate_tr1(parse_pl(corpus("toggle-reversed.pl").read_text()))


def _expected_skeleton(ch):
    shape, conns, i, folds = [], [], 0, 0
    while i < len(ch.blocks):
        if i:
            conns.append(ch.connectives[i - 1])
        fold = i + 1 < len(ch.blocks) and ch.connectives[i] == NEXT
        sits = {ch.blocks[i].situator} | ({ch.blocks[i + 1].situator} if fold else set())
        folds += fold
        shape.append((ch.blocks[i].condition, Situator.PRESENT if Situator.PRESENT in sits else ch.blocks[i].situator))
        i += 2 if fold else 1
    return shape, conns, folds


def test_tr1_keeps_the_skeleton_of_random_formulas():
    rng = random.Random("skeleton")
    done = 0
    while done < 200:
        m = random_structure(rng)
        f = random_pl_formula(m, rng.choice(sorted(m.perspectives)), rng)
        try:
            out = translate_tr1(f, sig=m.signature)
        except MetaInfoError:
            continue
        for ch, och in zip(f.chains, out.chains, strict=True):
            shape, conns, folds = _expected_skeleton(ch)
            assert [(b.condition, b.situator) for b in och.blocks] == shape
            assert list(och.connectives) == conns
            assert len(ch.blocks) - len(och.blocks) == folds
        done += 1
