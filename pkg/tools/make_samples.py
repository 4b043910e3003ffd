"""Regenerate the JSON inputs in samples/ from library constructions."""

import json
from pathlib import Path

from iqframes.catalog import _component
from iqframes.groupoid import BiAction, FinGroupoid, GAction, dual_biaction
from iqframes.io import biaction_to_json, groupoid_to_json, load_biaction

OUT = Path(__file__).resolve().parent.parent / "samples"


def dump(name: str, doc: dict) -> None:
    # one key per line, values kept compact
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v, ensure_ascii=False)}" for k, v in doc.items())
    (OUT / name).write_text("{\n" + body + "\n}\n", encoding="utf-8")


def action_doc(a: GAction, ref: str) -> dict:
    G = a.groupoid
    c = [str(x) for x in a.carrier]
    return {
        "groupoid": ref,
        "carrier": c,
        "anchor": [[c[x], G.objects[a.anchor[x]]] for x in range(len(c))],
        "act": [[G.label(g), c[x], c[y]] for (g, x), y in sorted(a.table.items())],
    }


def main() -> None:
    OUT.mkdir(exist_ok=True)
    P2 = FinGroupoid.pair(2)
    T = FinGroupoid.trivial()
    Z2 = _component(1, "Z2")
    P3 = FinGroupoid.pair(3)
    for fname, G in (("pair2.json", P2), ("point.json", T), ("z2.json", Z2), ("pair3.json", P3)):
        dump(fname, groupoid_to_json(G))
    dump("taut.json", action_doc(GAction.tautological(P2), "pair2.json"))
    dump("z2_regular.json", action_doc(GAction.regular(Z2), "z2.json"))

    # P2 on its objects, point on the right: a Morita witness P2 ~ T
    b = BiAction.tautological(P2)
    doc = biaction_to_json(b, "pair2.json", "point.json")
    doc["q"] = [[x, T.objects[0]] for x, _ in doc["q"]]
    doc["right"] = [[x, T.label(0), y] for x, _, y in doc["right"]]
    dump("taut_bi.json", doc)
    back = load_biaction(OUT / "taut_bi.json")
    dump("taut_bi_dual.json", biaction_to_json(dual_biaction(back), "point.json", "pair2.json"))

    # the functor T -> P2 picking object 1, and T -> Z2
    dump("point_to_pair2.json", {
        "source": "point.json", "target": "pair2.json",
        "objects": [[T.objects[0], P2.objects[0]]],
        "arrows": [[T.label(0), P2.label(P2.ids[0])]],
    })
    dump("point_to_z2.json", {
        "source": "point.json", "target": "z2.json",
        "objects": [[T.objects[0], Z2.objects[0]]],
        "arrows": [[T.label(0), Z2.label(Z2.ids[0])]],
    })


if __name__ == "__main__":
    main()
