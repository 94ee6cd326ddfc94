import json
import random

import pytest

from mmppf import checker
from mmppf.derived import PatternRegistry, check_cl, check_star, expand_patterns
from mmppf.errors import CheckError, MetaInfoError
from mmppf.generators import random_pl_formula, random_structure
from mmppf.metainfo import translate_tr1
from mmppf.model import load_file, load_structure
from mmppf.rgtc import translate_tr2
from mmppf.syntax import parse_cl, parse_pl, parse_star

from conftest import corpus

TOGGLE_PL = parse_pl(corpus("toggle-next.pl").read_text())
TOGGLE_STAR = parse_star(corpus("toggle-next.pls").read_text())
TOGGLE_CL = "[e|@=|o1|0|b1] ^ [e|@=|o1|1|b2] ^ [e|@=|o1|o2|t3]"


def test_star_with_witness(toggle):
    res = check_star(toggle, 2, TOGGLE_STAR, witness=TOGGLE_PL)
    assert res.value and res.traces


def test_star_search_finds_the_flip(toggle):
    res = check_star(toggle, 2, TOGGLE_STAR)
    assert res.value
    assert parse_pl(res.detail["witness"]) == TOGGLE_PL


def test_star_witness_mismatch(toggle):
    res = check_star(toggle, 2, parse_star("[e|@=|meta o1: b1;b1]"), witness=TOGGLE_PL)
    assert not res.value and res.detail["reason"] == "TRANSLATION_MISMATCH"


def test_presence_of_an_always_empty_property_is_false():
    doc = json.loads(corpus("one-point.mmppf.json").read_text())
    for st in doc["states"]:
        st["es"] = {o: [] for o in st["es"]}
        st["g"] = [{} for _ in st["g"]]
        st["gstar"] = [{} for _ in st["gstar"]]
    m = load_structure(doc)
    assert not check_star(m, 1, parse_star("[e|@=|meta o1: 1]")).value
    assert check_star(m, 1, parse_star("[e|@=|meta o1: 0]")).value


def test_zero_budget(toggle):
    with pytest.raises(CheckError) as exc:
        check_star(toggle, 2, TOGGLE_STAR, bound=0)
    assert exc.value.code == "BUDGET_EXHAUSTED"
    with pytest.raises(CheckError) as exc:
        check_cl(toggle, 2, parse_cl(TOGGLE_CL), bound=0)
    assert exc.value.code == "BUDGET_EXHAUSTED"


def test_small_budget_runs_out(toggle):
    with pytest.raises(CheckError) as exc:
        check_star(toggle, 2, TOGGLE_STAR, bound=3)
    assert exc.value.code == "BUDGET_EXHAUSTED"


def test_cl_with_witness_and_by_search(toggle):
    assert translate_tr2(TOGGLE_STAR) == parse_cl(TOGGLE_CL)
    assert check_cl(toggle, 2, parse_cl(TOGGLE_CL), witness=TOGGLE_STAR).value
    assert check_cl(toggle, 2, parse_cl(TOGGLE_CL)).value


def test_cl_witness_mismatch(toggle):
    res = check_cl(toggle, 2, parse_cl("[e|@=|o1|0|b2]"), witness=TOGGLE_STAR)
    assert not res.value and res.detail["reason"] == "TRANSLATION_MISMATCH"


def test_one_point_interval_needs_change_but_presence_holds():
    m = load_file(corpus("one-point.mmppf.json"))
    assert not check_cl(m, 1, parse_cl("[e|@=|o1|0|b1]")).value
    assert check_cl(m, 1, parse_cl("[e|@=|o1|0|1]")).value


def test_patterns(toggle):
    fcl = parse_cl(TOGGLE_CL.replace("[e|@=|o1|0|b1]", "[e|@=|pat holders|0|b1]"))
    reg = PatternRegistry.from_json({"holders": {"essences": ["h1"]}})
    assert reg.objects_for("holders", toggle) == ("o1",)
    assert [str(f) for f in expand_patterns(fcl, toggle, reg)] == [TOGGLE_CL]
    assert check_cl(toggle, 2, fcl, witness=TOGGLE_STAR, patterns=reg).value
    with pytest.raises(CheckError) as exc:
        check_cl(toggle, 2, fcl)
    assert exc.value.code == "UNKNOWN_PATTERN"
    with pytest.raises(CheckError):
        PatternRegistry({}).objects_for("holders", toggle)


def test_wrong_layers(toggle):
    with pytest.raises(CheckError):
        check_star(toggle, 2, TOGGLE_PL)
    with pytest.raises(CheckError):
        check_cl(toggle, 2, TOGGLE_STAR)


def _true_formulas(seed, n):
    rng = random.Random(seed)
    while n:
        m = random_structure(rng)
        anchor = rng.choice(sorted(m.perspectives))
        f = random_pl_formula(m, anchor, rng, noise=0.05)
        if not checker.check(m, anchor, f).value:
            continue
        try:
            fstar = translate_tr1(f, sig=m.signature)
        except MetaInfoError:  # blocks holding only action atoms have no abstraction
            continue
        n -= 1
        yield m, anchor, f, fstar


def test_search_recovers_random_true_formulas():
    for m, anchor, f, fstar in _true_formulas("search", 60):
        assert check_star(m, anchor, fstar).value, str(f)
        assert check_cl(m, anchor, translate_tr2(fstar)).value, str(f)
