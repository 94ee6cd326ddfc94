import random

import pytest
from hypothesis import given, settings, strategies as st

from mmppf.errors import FormulaError
from mmppf.formulas import (
    Block,
    Chain,
    Formula,
    ObjAtom,
    RelAtom,
    check_wff,
    is_wff,
)
from mmppf.generators import random_formula
from mmppf.model import Condition, Situator
from mmppf.syntax import parse_cl, parse_formula, parse_pl, parse_star

from conftest import corpus
from wff_oracle import PATTERN, dfa_accepts, dfa_wff, regex_wff

E = Condition.REALIZED
PAST, NOW, FUT = Situator.PAST, Situator.PRESENT, Situator.FUTURE
LAYERS = ("pl", "pl*", "cl")


def test_property_atom_fields():
    f = parse_pl("[e|@=|obj o1: {(h1,(w1))};_]")
    (a,) = f.atoms()
    assert isinstance(a, ObjAtom)
    assert (a.cond, a.sit, a.obj) == (E, NOW, "o1")
    assert a.props == (frozenset({("h1", ("w1",))}), frozenset())


def test_relation_atom():
    (a,) = parse_pl("[e|@=|rel S[o1,0] o2]").atoms()
    assert isinstance(a, RelAtom) and (a.subj, a.prop, a.target) == ("o1", 0, "o2")


def test_present_then_past_parses_but_is_not_wff():
    f = parse_pl("[e|@=|rel S[o1,0] o2] ->> [e|<||rel S[o1,0] o2]")
    assert [v.rule for v in check_wff(f)] == ["rule 2"]
    f = parse_pl("[e|@=|rel S[o1,0] o2] ~> [e|<||rel S[o1,0] o2]")
    assert [v.rule for v in check_wff(f)] == ["rule 3"]


def test_duplicate_object_is_rule_4():
    f = parse_pl(corpus("duplicate-object.pl").read_text())
    assert "rule 4" in {v.rule for v in check_wff(f)}


def test_duplicate_action_is_rule_5():
    f = parse_pl("[e|@=|act o1: (a1)] ^ [e|@=|act o1: (a2)]")
    assert [v.rule for v in check_wff(f)] == ["rule 5"]


def test_mixed_block_is_rule_1():
    f = parse_pl("[e|@=|rel S[o1,0] o2] ^ [h|@=|rel S[o2,0] o1]")
    assert [v.rule for v in check_wff(f)] == ["rule 1"]


def test_past_present_future_chain_is_wff():
    f = parse_pl("[e|<||rel S[o1,0] o2] ->> [e|@=|rel S[o1,0] o2] ->> [e||>|rel S[o1,0] o2]")
    assert is_wff(f)


def test_past_directly_to_future():
    f = parse_pl("[e|<||rel S[o1,0] o2] ~> [e||>|rel S[o1,0] o2]")
    assert is_wff(f)
    assert not is_wff(f, strict=True)


def test_single_atom_is_wff():
    assert is_wff(parse_pl("[h||>|act o2: (b1,d1)]"))


def test_conjuncts_print_in_canonical_order():
    a = parse_pl("[e|@=|rel S[o2,0] o1] ^ [e|@=|obj o1: _] ^ [e|@=|act o1: (a1)]")
    b = parse_pl("[e|@=|act o1: (a1)] ^ [e|@=|rel S[o2,0] o1] ^ [e|@=|obj o1: _]")
    assert str(a) == str(b)


@pytest.mark.parametrize(
    "text, layer",
    [
        ("[e|@=|meta o1: b1;~]", "pl*"),
        ("[e|@=|comp o1[0,1]: g1]", "pl*"),
        ("[h|<||mrel o1 o2: t3]", "pl*"),
        ("[e|@=|o1|0|b1]", "cl"),
        ("[e|@=|o1|0|1|g2]", "cl"),
        ("[e|@=|o1|o2|k2] // [e||>|pat lamps|1|b2]", "cl"),
    ],
)
def test_upper_layers_round_trip(text, layer):
    f = parse_formula(text, layer)
    assert f.layer == layer
    assert str(f) == text


def test_cl_output_has_no_binder():
    f = parse_cl("[e|@=|o1|0|b1]")
    assert "\\" not in str(f) and "$" not in str(f)


def test_syntax_error_reports_position():
    with pytest.raises(FormulaError) as exc:
        parse_pl("[e|@=|obj o1: {(h1,(w1))}")
    assert exc.value.code == "SYNTAX_ERROR"
    assert "column" in str(exc.value)


def test_layer_mismatch_is_rejected():
    with pytest.raises(FormulaError):
        parse_star("[e|@=|obj o1: _]")
    with pytest.raises(FormulaError):
        parse_formula("[e|@=|obj o1: _]", "pl++")


def test_unknown_symbol_against_signature(toggle):
    with pytest.raises(FormulaError) as exc:
        parse_pl("[e|@=|obj o9: _;_]", toggle.signature)
    assert exc.value.code == "UNKNOWN_SYMBOL"


@pytest.mark.parametrize("layer", LAYERS)
def test_round_trip_thousand_per_layer(layer):
    rng = random.Random(f"round-trip {layer}")
    for _ in range(1000):
        f = random_formula(rng, layer)
        text = str(f)
        g = parse_formula(text, layer)
        assert g == f, text
        assert str(g) == text


# --- wff as a regular language -----------------------------------------------


@pytest.mark.parametrize("word", ["", "P", "PPNF", "NFF", "PF", "FFF", "NP", "NN", "FP", "PNP"])
def test_dfa_matches_pattern(word):
    assert dfa_accepts(word) == bool(PATTERN.fullmatch(word))


def test_wff_equals_regular_language_on_random_formulas():
    rng = random.Random("wff")
    disagreements = []
    accepted = 0
    for i in range(1000):
        layer = LAYERS[i % 3]
        f = random_formula(rng, layer, max_blocks=4, max_atoms=2, uniform=0.9)
        got = is_wff(f)
        accepted += got
        if not got == regex_wff(f) == dfa_wff(f):
            disagreements.append(str(f))
    assert disagreements == []
    assert 50 < accepted < 950


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_violations_ignore_conjunct_order(r):
    f = random_formula(r, r.choice(LAYERS))
    shuffled = Formula(tuple(
        Chain(tuple(Block(tuple(r.sample(b.atoms, len(b.atoms)))) for b in ch.blocks), ch.connectives)
        for ch in f.chains
    ))
    assert {v.rule for v in check_wff(f)} == {v.rule for v in check_wff(shuffled)}
    assert check_wff(f) == check_wff(shuffled)
