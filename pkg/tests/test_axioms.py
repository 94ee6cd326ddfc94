import json
import time

import pytest

from mmppf import axioms
from mmppf.errors import AxiomError
from mmppf.model import Condition, Reality, Situator, load_file, load_structure

from conftest import corpus

E, H = Condition.REALIZED, Condition.HYPOTHETICAL
PAST, NOW, FUT = Situator.PAST, Situator.PRESENT, Situator.FUTURE


def failing(m):
    return [r.axiom_id for r in axioms.validate_all(m) if r.status != axioms.PASS]


@pytest.mark.parametrize("k", range(1, 12))
def test_each_violation_file_fails_only_its_axiom(k):
    m = load_file(corpus(f"axiom{k}-violation.mmppf.json"))
    assert failing(m) == [k]
    assert axioms.check_axiom(m, k).witnesses


@pytest.mark.parametrize("name", ["two-state-toggle", "minimal", "one-point", "self-loop"])
def test_clean_structures_pass(name):
    m = load_file(corpus(f"{name}.mmppf.json"))
    assert failing(m) == []
    assert axioms.check_totality(m) == []


def test_whole_suite_is_fast():
    start = time.perf_counter()
    for k in range(1, 12):
        axioms.validate_all(load_file(corpus(f"axiom{k}-violation.mmppf.json")))
    axioms.validate_all(load_file(corpus("two-state-toggle.mmppf.json")))
    assert time.perf_counter() - start < 1.0


def test_unassigned_essence_with_value_breaks_axiom_1():
    doc = json.loads(corpus("two-state-toggle.mmppf.json").read_text())
    for st in doc["states"]:
        if st["id"] == "e1":
            st["es"]["o1"] = []
            for table in st["gstar"]:
                table.pop("o1", None)
    m = load_structure(doc)
    rep = axioms.check_axiom(m, 1)
    assert rep.status == axioms.FAIL
    assert any(w["state"] == "e1" and w["essence"] == "h1" for w in rep.witnesses)


def test_axiom5_witness_names_both_sides():
    rep = axioms.check_axiom(load_file(corpus("axiom5-violation.mmppf.json")), 5)
    text = json.dumps(rep.to_json())
    assert "o1" in text and "o2" in text


def test_no_perspectives_passes_vacuously():
    doc = json.loads(corpus("two-state-toggle.mmppf.json").read_text())
    doc["perspectives"] = {}
    assert failing(load_structure(doc)) == []


def test_unknown_axiom():
    with pytest.raises(AxiomError):
        axioms.check_axiom(load_file(corpus("minimal.mmppf.json")), 12)


V, W = ("a",), ("b",)


@pytest.mark.parametrize(
    "anchor, source, v, want",
    [
        (4, Reality(1, E, PAST, "e"), V, (2, E, PAST)),
        (4, Reality(1, E, PAST, "e"), W, (2, H, PAST)),
        (4, Reality(1, H, PAST, "e"), W, (2, H, PAST)),
        (4, Reality(1, H, PAST, "e"), V, None),
        (2, Reality(1, E, PAST, "e"), V, (2, E, NOW)),
        (2, Reality(1, E, PAST, "e"), W, (2, H, NOW)),
        (2, Reality(1, H, PAST, "e"), V, None),
        (1, Reality(1, E, NOW, "e"), V, (2, E, FUT)),
        (1, Reality(1, H, NOW, "e"), W, (2, H, FUT)),
        (1, Reality(1, E, NOW, "e"), W, None),
        (1, Reality(2, E, FUT, "e"), W, (3, E, FUT)),
        (1, Reality(2, H, FUT, "e"), V, (3, H, FUT)),
    ],
)
def test_successor_table(anchor, source, v, want):
    assert axioms.expected_successor(anchor, source, v, {1: V}) == want
