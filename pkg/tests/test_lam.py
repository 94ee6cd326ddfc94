import random

import pytest

from mmppf.errors import GrammarError
from mmppf.lam import (
    App,
    Arrow,
    Const,
    Lam,
    Template,
    Var,
    alpha_equal,
    beta_reduce,
    const,
    free_vars,
    parse_term,
    reduce_randomly,
    substitute,
    type_of,
)

REGISTER = r"\$tp:TS. \$o:O. [$tp|$o|0|$x]"


def test_register_applied_to_situator_and_object():
    t = App(App(parse_term(REGISTER), const("@=")), const("o1"))
    assert str(beta_reduce(t)) == "[@=|o1|0|$x]"


def test_identity():
    atom = parse_term("[e|@=|o1|0|b1]")
    assert beta_reduce(App(parse_term(r"\$x:F. $x"), atom)) == atom


def test_register_rejects_condition_for_situator():
    t = App(parse_term(REGISTER), const("e"))
    with pytest.raises(GrammarError) as exc:
        beta_reduce(t)
    assert exc.value.code == "TYPE_MISMATCH"


def test_pattern_fits_object_slot():
    t = App(App(parse_term(REGISTER), const("@=")), parse_term("pat lamps"))
    assert str(beta_reduce(t)) == "[@=|pat lamps|0|$x]"


def test_constant_categories():
    assert [const(x).cat for x in ("e", "|>", "3", "t2", "o7")] == ["CR", "TS", "INT", "META", "O"]


def test_substitution_avoids_capture():
    t = Lam("y", "O", App(Var("x"), Var("y")))
    out = substitute(t, "x", Var("y"))
    assert "y" in free_vars(out)
    assert alpha_equal(out, Lam("z", "O", App(Var("y"), Var("z"))))


def test_alpha_equality():
    assert alpha_equal(parse_term(r"\$a:O. [$a]"), parse_term(r"\$b:O. [$b]"))
    assert not alpha_equal(parse_term(r"\$a:O. [$a|$c]"), parse_term(r"\$b:O. [$b|$d]"))


def test_arrow_types_parse():
    t = parse_term(r"\$f:(O->F). $f o1")
    assert t.type == Arrow("O", "F")
    assert type_of(t) == Arrow(Arrow("O", "F"), "F")


@pytest.mark.parametrize("text", [REGISTER, r"(\$c:CR. [$c|x]) e", "[e|@=|pat p|0|b1]", r"\$f:(O->F). $f o1"])
def test_print_parse_round_trip(text):
    t = parse_term(text)
    assert parse_term(str(t)) == t


def test_trailing_garbage():
    with pytest.raises(GrammarError):
        parse_term("[a|b] ]")


# random terms with many overlapping redexes, all of type F
def _template(rng, env):
    fields = []
    for _ in range(rng.randint(1, 3)):
        names = [v for v, ty in env if ty == "O"]
        fields.append(Var(rng.choice(names)) if names and rng.random() < 0.6 else Const(f"o{rng.randint(1, 3)}", "O"))
    return Template(tuple(fields))


def _obj(rng, env, depth):
    names = [v for v, ty in env if ty == "O"]
    if depth > 0 and rng.random() < 0.4:
        v = f"v{len(env)}"
        return App(Lam(v, "O", _obj(rng, env + [(v, "O")], depth - 1)), _obj(rng, env, depth - 1))
    if names and rng.random() < 0.5:
        return Var(rng.choice(names))
    return Const(f"o{rng.randint(1, 3)}", "O")


def random_term(rng, depth=3, env=None):
    env = env or []
    if depth == 0 or rng.random() < 0.2:
        return _template(rng, env)
    v = f"v{len(env)}"
    body = random_term(rng, depth - 1, env + [(v, "O")])
    if rng.random() < 0.3:
        return Template((App(Lam(v, "O", body), _obj(rng, env, depth - 1)),))
    return App(Lam(v, "O", body), _obj(rng, env, depth - 1))


def test_random_reduction_orders_agree():
    rng = random.Random("confluence")
    for _ in range(300):
        t = random_term(rng)
        normal = beta_reduce(t)
        for _ in range(3):
            assert alpha_equal(reduce_randomly(t, rng), normal), str(t)
