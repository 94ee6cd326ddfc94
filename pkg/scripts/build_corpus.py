"""Regenerate the bundled corpus under src/mmppf/corpus/.

The base structure ``two-state-toggle`` is written out by hand below.  Each
``axiomN-violation`` file applies one targeted edit to it, chosen so that
axiom N fails and the other ten still hold.
"""

from __future__ import annotations

import copy
import json
from pathlib import Path

from mmppf.build import derive_tables
from mmppf.metainfo import DEFAULT_PROFILE, translate_tr1
from mmppf.model import dumps_structure, load_structure, to_document
from mmppf.rgtc import format_grammar, interval_collapse_grammar, vocabulary
from mmppf.syntax import parse_pl

OUT = Path(__file__).resolve().parent.parent / "src" / "mmppf" / "corpus"

TOGGLE = {"o1": ["a1", "c1"], "o2": ["b1", "d1"]}
STAY = {"o1": ["a2", "c1"], "o2": ["b1", "d1"]}


def base_doc() -> dict:
    state_e1 = {
        "id": "e1",
        "es": {"o1": ["h1"], "o2": ["h2"]},
        "g": [{"h1": ["left"], "h2": ["right"]}, {"h1": ["off"], "h2": ["off"]}],
        "gstar": [
            {"o1": [["h1", ["left"]]], "o2": [["h2", ["right"]]]},
            {"o1": [["h1", ["off"]]], "o2": [["h2", ["off"]]]},
        ],
        "theta": [{"o1": ["a1", "a2"], "o2": ["b1"]}, {"o1": ["c1"], "o2": ["d1"]}],
        "sensation": {"o1": None, "o2": None},
        "relations": [{"o1": ["o2"]}, {}],
    }
    state_e2 = copy.deepcopy(state_e1)
    state_e2.update(
        id="e2",
        g=[{"h1": ["left"], "h2": ["right"]}, {"h1": ["on"], "h2": ["off"]}],
        gstar=[
            {"o1": [["h1", ["left"]]], "o2": [["h2", ["right"]]]},
            {"o1": [["h1", ["on"]]], "o2": [["h2", ["off"]]]},
        ],
        theta=[{"o1": ["a1", "a2"]}, {"o1": ["c1"], "o2": ["d1"]}],
        sensation={"o1": [["s", "c"]], "o2": None},
    )

    def act(aid, h, table):
        return {"id": aid, "in": [[h, v, r] for v, r in table], "ext": []}

    return {
        "signature": {
            "objects": ["o1", "o2"],
            "essences": ["h1", "h2"],
            "properties": [
                {"name": "place", "domains": [["left", "right"]]},
                {"name": "lamp", "domains": [["off", "on"]]},
            ],
            "actions": [
                {
                    "o1": [act("a1", "h1", [(["left"], ["left"])]), act("a2", "h1", [(["left"], ["left"])])],
                    "o2": [act("b1", "h2", [(["right"], ["right"])])],
                },
                {
                    "o1": [act("c1", "h1", [(["off"], ["on"]), (["on"], ["off"])])],
                    "o2": [act("d1", "h2", [(["off"], ["off"])])],
                },
            ],
            "sra": [None, [["s", "c"]]],
        },
        "states": [state_e1, state_e2],
        "transition": [
            {"from": "e1", "input": TOGGLE, "to": "e2"},
            {"from": "e1", "input": STAY, "to": "e1"},
        ],
        "realized_inputs": {"1": TOGGLE, "2": TOGGLE},
        "perspectives": {
            "1": {
                "moments": {
                    "1": [[1, "e", "present", "e1"]],
                    "2": [[2, "e", "future", "e2"], [2, "h", "future", "e1"]],
                },
                "realized_inputs": {"1": TOGGLE},
                "succ": [
                    {"from": [1, "e", "present", "e1"], "input": TOGGLE, "to": [2, "e", "future", "e2"]},
                ],
            },
            "2": {
                "moments": {
                    "1": [[1, "e", "past", "e1"]],
                    "2": [[2, "e", "present", "e2"], [2, "h", "present", "e1"]],
                },
                "realized_inputs": {"1": TOGGLE, "2": TOGGLE},
                "succ": [
                    {"from": [1, "e", "past", "e1"], "input": TOGGLE, "to": [2, "e", "present", "e2"]},
                    {"from": [1, "e", "past", "e1"], "input": STAY, "to": [2, "h", "present", "e1"]},
                ],
            },
        },
    }


def complete(doc: dict) -> dict:
    return to_document(derive_tables(load_structure(doc)))


def state(doc, sid):
    return next(s for s in doc["states"] if s["id"] == sid)


def v1(doc):
    # h3 carries values in e2 but belongs to no object
    doc["signature"]["essences"].append("h3")
    e2 = state(doc, "e2")
    e2["g"][0]["h3"] = ["left"]
    e2["g"][1]["h3"] = ["on"]
    e2["gstar"][0]["o1"].append(["h3", ["left"]])
    e2["gstar"][1]["o1"].append(["h3", ["on"]])
    return complete(doc)


def v2(doc):
    # h1 loses its place in e2 but keeps its lamp value
    e2 = state(doc, "e2")
    del e2["g"][0]["h1"]
    e2["gstar"][0]["o1"] = []
    return complete(doc)


def v3(doc):
    # g* disagrees with g for h1 in e2
    e2 = state(doc, "e2")
    e2["gstar"][1]["o1"] = [["h1", ["off"]]]
    return complete(doc)


def v4(doc):
    doc = complete(doc)
    a2 = doc["signature"]["actions"][0]["o1"][1]
    assert a2["id"] == "a2"
    a2["in"] = []
    return doc


def v5(doc):
    # in e2 the essence h1 has moved from o1 to o2
    e2 = state(doc, "e2")
    e2["es"] = {"o2": ["h1", "h2"]}
    for p in range(2):
        e2["gstar"][p]["o2"] = e2["gstar"][p]["o1"] + e2["gstar"][p]["o2"]
        e2["gstar"][p]["o1"] = []
    e2["sensation"] = {"o1": None, "o2": [["s", "c"]]}
    for per_obj in doc["signature"]["actions"]:
        for a in per_obj["o2"]:
            a["in"] += [["h1", row[1], row[2]] for row in per_obj["o1"][0]["in"]]
    return complete(doc)


def v6(doc):
    doc = complete(doc)
    for d in doc["dependencies"]:
        if d["property"] == 0 and d["actions"] == {"o1": "a2", "o2": "b1"}:
            d["result"] = []
    return doc


def v7(doc):
    doc = complete(doc)
    for law in doc["laws"]:
        if law["property"] == 1:
            law["results"] = [r for r in law["results"] if r["o1"] != [["h1", ["on"]]]]
    return doc


def v8(doc):
    # e1 lets o1 use o2's lamp action d1
    e1 = state(doc, "e1")
    e1["theta"][1]["o1"] = ["c1", "d1"]
    doc["transition"] += [
        {"from": "e1", "input": {"o1": [a, "d1"], "o2": ["b1", "d1"]}, "to": "e1"} for a in ("a1", "a2")
    ]
    return complete(doc)


def v9(doc):
    doc["perspectives"]["2"]["realized_inputs"]["2"] = STAY
    return complete(doc)


def v10(doc):
    doc["perspectives"]["2"]["succ"][0]["to"] = [2, "h", "present", "e1"]
    return complete(doc)


def v11(doc):
    doc = complete(doc)
    for row in doc["sensation_laws"][0]["entries"]:
        if row["object"] == "o1":
            row["result"] = None
    return doc


def self_loop() -> dict:
    return {
        "signature": {
            "objects": ["o1"],
            "essences": ["h1"],
            "properties": [{"name": "place", "domains": [["here"]]}],
            "actions": [{"o1": [{"id": "a", "in": [["h1", ["here"], ["here"]]], "ext": []}]}],
            "sra": [None],
        },
        "states": [
            {
                "id": "e",
                "es": {"o1": ["h1"]},
                "g": [{"h1": ["here"]}],
                "gstar": [{"o1": [["h1", ["here"]]]}],
                "theta": [{"o1": ["a"]}],
                "sensation": {"o1": None},
                "relations": [{}],
            }
        ],
        "transition": [{"from": "e", "input": {"o1": ["a"]}, "to": "e"}],
        "realized_inputs": {"1": {"o1": ["a"]}, "2": {"o1": ["a"]}, "3": {"o1": ["a"]}},
        "perspectives": {
            "3": {
                "moments": {str(t): [[t, "e", "past" if t < 3 else "present", "e"]] for t in (1, 2, 3)},
                "realized_inputs": {str(t): {"o1": ["a"]} for t in (1, 2, 3)},
                "succ": [
                    {"from": [t, "e", "past", "e"], "input": {"o1": ["a"]},
                     "to": [t + 1, "e", "past" if t + 1 < 3 else "present", "e"]}
                    for t in (1, 2)
                ],
            }
        },
    }


def one_point() -> dict:
    doc = self_loop()
    doc["realized_inputs"] = {"1": {"o1": ["a"]}}
    doc["perspectives"] = {
        "1": {
            "moments": {"1": [[1, "e", "present", "e"]]},
            "realized_inputs": {"1": {"o1": ["a"]}},
            "succ": [],
        }
    }
    return doc


def minimal() -> dict:
    doc = one_point()
    doc["signature"]["actions"] = []
    doc["states"][0]["theta"] = [{}]
    doc["transition"] = []
    doc["realized_inputs"] = {}
    doc["perspectives"]["1"]["realized_inputs"] = {}
    return doc


# o1 before and after its lamp is switched on, seen from perspective 2
TOGGLE_BEFORE = "[e|<||obj o1: {(h1,(left))};{(h1,(off))}] ^ [e|<||rel S[o1,0] o2]"
TOGGLE_AFTER = "[e|@=|obj o1: {(h1,(left))};{(h1,(on))}]"
FORMULAS = {
    "toggle-next.pl": f"{TOGGLE_BEFORE} ->> {TOGGLE_AFTER}",
    "toggle-later.pl": f"{TOGGLE_BEFORE} ~> {TOGGLE_AFTER}",
    "toggle-reversed.pl": f"{TOGGLE_AFTER} ->> {TOGGLE_BEFORE}",
    "lamp-off.pl": "[e|<||obj o1: {(h1,(left))};{(h1,(off))}]",
    "duplicate-object.pl": "[e|<||obj o1: {(h1,(left))};{(h1,(off))}] ^ [e|<||obj o1: _;_]",
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    files = {"two-state-toggle": complete(base_doc())}
    for k, fn in enumerate((v1, v2, v3, v4, v5, v6, v7, v8, v9, v10, v11), start=1):
        files[f"axiom{k}-violation"] = fn(base_doc())
    files["self-loop"] = complete(self_loop())
    files["one-point"] = complete(one_point())
    files["minimal"] = complete(minimal())
    for name, doc in files.items():
        text = dumps_structure(load_structure(json.dumps(doc)))
        (OUT / f"{name}.mmppf.json").write_text(text, encoding="utf-8")
        print("wrote", name)
    for name, text in FORMULAS.items():
        (OUT / name).write_text(text + "\n", encoding="utf-8")
        print("wrote", name)
    sig = load_structure(files["two-state-toggle"]).signature
    star = translate_tr1(parse_pl(FORMULAS["toggle-next.pl"], sig), DEFAULT_PROFILE, sig)
    (OUT / "toggle-next.pls").write_text(f"{star}\n", encoding="utf-8")
    grammar = interval_collapse_grammar(vocabulary(star))
    header = "# run-collapsing grammar for the abstraction of toggle-next.pl\n"
    (OUT / "interval-collapse.rgtc").write_text(header + format_grammar(grammar), encoding="utf-8")
    (OUT / "default-profile.json").write_text(
        json.dumps(DEFAULT_PROFILE.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print("wrote grammar and profile")


if __name__ == "__main__":
    main()
