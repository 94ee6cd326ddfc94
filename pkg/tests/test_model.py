import copy
import json

import pytest

from mmppf.errors import StructureError
from mmppf.model import (
    UNDEFINED,
    Situator,
    admissible_inputs,
    canonicalize,
    dumps_structure,
    load_file,
    load_structure,
    make_input,
    project_input,
    step,
)
from mmppf.generators import random_document

from conftest import CORPUS, corpus

STRUCTURES = sorted(p.name for p in CORPUS.glob("*.mmppf.json"))


def test_minimal_structure_sizes():
    m = load_file(corpus("minimal.mmppf.json"))
    sig = m.signature
    assert (len(sig.objects), len(sig.essences), len(sig.properties)) == (1, 1, 1)
    assert len(m.states) == 1 and m.time_set == (1,)


def test_dangling_essence_is_reported():
    doc = json.loads(corpus("minimal.mmppf.json").read_text())
    doc["states"][0]["es"] = {doc["signature"]["objects"][0]: ["h9"]}
    with pytest.raises(StructureError) as exc:
        load_structure(doc)
    assert exc.value.code == "DANGLING_REFERENCE"
    assert "h9" in str(exc.value)


def test_toggle_loads(toggle):
    assert len(toggle.states) == 2
    assert len(toggle.transition) == 2


def test_projection(toggle):
    sig = toggle.signature
    v = make_input(sig, {"o1": ["a1", "c1"], "o2": ["b1", "d1"]})
    assert project_input(sig, v, "o1") == ("a1", "c1")
    assert project_input(sig, v, "o2") == ("b1", "d1")


def test_admissible_inputs_at_e1(toggle):
    vs = admissible_inputs(toggle, "e1")
    assert len(vs) == 2
    assert vs == tuple(sorted(vs))


def test_step(toggle):
    sig = toggle.signature
    flip = make_input(sig, {"o1": ["a1", "c1"], "o2": ["b1", "d1"]})
    stay = make_input(sig, {"o1": ["a2", "c1"], "o2": ["b1", "d1"]})
    assert step(toggle, "e1", flip) == "e2"
    assert step(toggle, "e1", stay) == "e1"
    assert stay not in admissible_inputs(toggle, "e2")
    assert step(toggle, "e2", stay) is UNDEFINED


def test_self_loop_steps_to_itself():
    m = load_file(corpus("self-loop.mmppf.json"))
    (e,) = m.states
    for v in admissible_inputs(m, e):
        assert step(m, e, v) == e


@pytest.mark.parametrize("name", STRUCTURES)
def test_corpus_round_trip_is_byte_exact(name):
    text = corpus(name).read_text(encoding="utf-8")
    assert dumps_structure(load_file(corpus(name))) == text
    assert canonicalize(text) == text


def test_random_documents_round_trip(rng):
    for _ in range(100):
        m = load_structure(random_document(rng))
        text = dumps_structure(m)
        assert dumps_structure(load_structure(json.loads(text))) == text


def test_situator_for_time():
    assert Situator.for_time(1, 2) is Situator.PAST
    assert Situator.for_time(2, 2) is Situator.PRESENT
    assert Situator.for_time(3, 2) is Situator.FUTURE


def test_load_does_not_mutate_input():
    doc = json.loads(corpus("two-state-toggle.mmppf.json").read_text())
    before = copy.deepcopy(doc)
    load_structure(doc)
    assert doc == before
