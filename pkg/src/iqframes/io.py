"""JSON input formats and the set-expression syntax used by the CLI.

Groupoid::

    {"name": "P2", "objects": [1, 2],
     "arrows": [{"id": "(1,1)", "dom": 1, "cod": 1}, ...],
     "comp": [[f, g, "f∘g"], ...], "inv": [[f, finv], ...], "ids": [[obj, arr], ...]}

``comp`` lists every composable pair ``(f, g)`` with ``dom f = cod g``.

Action: ``{"groupoid": path, "carrier": [...], "anchor": [[x, obj], ...],
"act": [[g, x, "g·x"], ...]}``.  Bi-action: ``{"left_groupoid": path,
"right_groupoid": path, "carrier": [...], "p": [[x, obj], ...], "q": [[x,
obj], ...], "left": [[g, x, "g·x"], ...], "right": [[x, h, "x·h"], ...]}``.
Functor: ``{"source": path, "target": path, "objects": [[b, a], ...],
"arrows": [[h, g], ...]}``.  Paths are relative to the referring file.
Identifiers are matched by their string form.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Hashable, Sequence

from .errors import ParseError
from .groupoid import BiAction, FinGroupoid, GAction, GroupoidFunctor

_SEEN: dict[Path, FinGroupoid] = {}


def digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_json(path: str | Path) -> dict:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file ({exc.strerror})", str(path)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", str(path))
    return doc


def _field(doc: dict, key: str, where: str, kind: type = list) -> Any:
    if key not in doc:
        raise ParseError(f"missing field '{key}'", where)
    v = doc[key]
    if not isinstance(v, kind):
        raise ParseError(f"field '{key}' must be a {kind.__name__}", f"{where}.{key}")
    return v


def _index(items: Sequence[Hashable], where: str) -> dict[str, int]:
    idx: dict[str, int] = {}
    for i, v in enumerate(items):
        k = str(v)
        if k in idx:
            raise ParseError(f"duplicate identifier {k!r}", f"{where}[{i}]")
        idx[k] = i
    return idx


def _lookup(idx: dict[str, int], v: Any, where: str, what: str) -> int:
    k = str(v)
    if k not in idx:
        raise ParseError(f"unknown {what} {k!r}", where)
    return idx[k]


def _rows(doc: dict, key: str, width: int, where: str) -> list[list]:
    rows = _field(doc, key, where)
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != width:
            raise ParseError(f"entry must be a list of {width} items", f"{where}.{key}[{i}]")
    return rows


def groupoid_from_json(doc: dict, where: str = "groupoid") -> FinGroupoid:
    objects = _field(doc, "objects", where)
    oidx = _index(objects, f"{where}.objects")
    arrows = _field(doc, "arrows", where)
    ids_, dom, cod = [], [], []
    for i, a in enumerate(arrows):
        w = f"{where}.arrows[{i}]"
        if not isinstance(a, dict):
            raise ParseError("arrow must be an object with id, dom, cod", w)
        for k in ("id", "dom", "cod"):
            if k not in a:
                raise ParseError(f"missing field '{k}'", w)
        ids_.append(a["id"])
        dom.append(_lookup(oidx, a["dom"], f"{w}.dom", "object"))
        cod.append(_lookup(oidx, a["cod"], f"{w}.cod", "object"))
    aidx = _index(ids_, f"{where}.arrows")
    comp = {}
    for i, (f, g, fg) in enumerate(_rows(doc, "comp", 3, where)):
        w = f"{where}.comp[{i}]"
        comp[(_lookup(aidx, f, w, "arrow"), _lookup(aidx, g, w, "arrow"))] = _lookup(aidx, fg, w, "arrow")
    inv = [-1] * len(ids_)
    for i, (f, fi) in enumerate(_rows(doc, "inv", 2, where)):
        w = f"{where}.inv[{i}]"
        inv[_lookup(aidx, f, w, "arrow")] = _lookup(aidx, fi, w, "arrow")
    if -1 in inv:
        raise ParseError(f"no inverse given for arrow {ids_[inv.index(-1)]!r}", f"{where}.inv")
    units = [-1] * len(objects)
    for i, (o, a) in enumerate(_rows(doc, "ids", 2, where)):
        w = f"{where}.ids[{i}]"
        units[_lookup(oidx, o, w, "object")] = _lookup(aidx, a, w, "arrow")
    if -1 in units:
        raise ParseError(f"no identity given for object {objects[units.index(-1)]!r}", f"{where}.ids")
    return FinGroupoid(objects, ids_, dom, cod, comp, inv, units, name=doc.get("name"))


def groupoid_to_json(G: FinGroupoid) -> dict:
    lab = [G.label(a) for a in range(G.n_arrows)]
    return {
        "name": G.name,
        "objects": list(G.objects),
        "arrows": [
            {"id": lab[a], "dom": G.objects[G.dom[a]], "cod": G.objects[G.cod[a]]}
            for a in range(G.n_arrows)
        ],
        "comp": [[lab[f], lab[g], lab[fg]] for (f, g), fg in sorted(G.comp_table.items())],
        "inv": [[lab[a], lab[G.inv[a]]] for a in range(G.n_arrows)],
        "ids": [[G.objects[o], lab[G.ids[o]]] for o in range(G.n_objects)],
    }


def load_groupoid(path: str | Path) -> FinGroupoid:
    p = Path(path).resolve()
    if p not in _SEEN:
        G = groupoid_from_json(_load_json(p), str(path))
        if G.name is None:
            G.name = p.stem
        _SEEN[p] = G
    return _SEEN[p]


def _referenced(doc: dict, key: str, base: Path, where: str, given: FinGroupoid | None) -> FinGroupoid:
    if given is not None:
        return given
    ref = _field(doc, key, where, str)
    return load_groupoid(base / ref)


def _arrow_index(G: FinGroupoid) -> dict[str, int]:
    return {G.label(a): a for a in range(G.n_arrows)} | {str(a_): i for i, a_ in enumerate(G.arrows)}


def _object_index(G: FinGroupoid) -> dict[str, int]:
    return {str(o): i for i, o in enumerate(G.objects)}


def _anchor(doc: dict, key: str, xidx: dict[str, int], G: FinGroupoid, n: int, where: str) -> list[int]:
    oidx = _object_index(G)
    anchor = [-1] * n
    for i, (x, o) in enumerate(_rows(doc, key, 2, where)):
        w = f"{where}.{key}[{i}]"
        anchor[_lookup(xidx, x, w, "point")] = _lookup(oidx, o, w, "object")
    if -1 in anchor:
        raise ParseError("anchor is not total", f"{where}.{key}")
    return anchor


def action_from_json(doc: dict, G: FinGroupoid, where: str = "action") -> GAction:
    carrier = _field(doc, "carrier", where)
    xidx = _index(carrier, f"{where}.carrier")
    aidx = _arrow_index(G)
    anchor = _anchor(doc, "anchor", xidx, G, len(carrier), where)
    act = {}
    for i, (g, x, y) in enumerate(_rows(doc, "act", 3, where)):
        w = f"{where}.act[{i}]"
        act[(_lookup(aidx, g, w, "arrow"), _lookup(xidx, x, w, "point"))] = _lookup(xidx, y, w, "point")
    return GAction(G, carrier, anchor, act, check=False)


def load_action(path: str | Path, G: FinGroupoid | None = None) -> GAction:
    doc = _load_json(path)
    G = _referenced(doc, "groupoid", Path(path).parent, str(path), G)
    return action_from_json(doc, G, str(path))


def biaction_from_json(doc: dict, G: FinGroupoid, H: FinGroupoid, where: str = "biaction") -> BiAction:
    carrier = _field(doc, "carrier", where)
    xidx = _index(carrier, f"{where}.carrier")
    n = len(carrier)
    p = _anchor(doc, "p", xidx, G, n, where)
    q = _anchor(doc, "q", xidx, H, n, where)
    gidx, hidx = _arrow_index(G), _arrow_index(H)
    left = {}
    for i, (g, x, y) in enumerate(_rows(doc, "left", 3, where)):
        w = f"{where}.left[{i}]"
        left[(_lookup(gidx, g, w, "arrow"), _lookup(xidx, x, w, "point"))] = _lookup(xidx, y, w, "point")
    right = {}
    for i, (x, h, y) in enumerate(_rows(doc, "right", 3, where)):
        w = f"{where}.right[{i}]"
        right[(_lookup(xidx, x, w, "point"), _lookup(hidx, h, w, "arrow"))] = _lookup(xidx, y, w, "point")
    la = GAction(G, carrier, p, left, check=False)
    return BiAction.from_right_table(la, H, q, right, check=False)


def load_biaction(path: str | Path) -> BiAction:
    doc = _load_json(path)
    base = Path(path).parent
    G = _referenced(doc, "left_groupoid", base, str(path), None)
    H = _referenced(doc, "right_groupoid", base, str(path), None)
    return biaction_from_json(doc, G, H, str(path))


def biaction_to_json(b: BiAction, left_ref: str, right_ref: str) -> dict:
    G, H = b.G, b.H
    c = [str(x) for x in b.carrier]
    return {
        "left_groupoid": left_ref,
        "right_groupoid": right_ref,
        "carrier": c,
        "p": [[c[x], G.objects[b.p[x]]] for x in range(len(c))],
        "q": [[c[x], H.objects[b.q[x]]] for x in range(len(c))],
        "left": [[G.label(g), c[x], c[y]] for (g, x), y in sorted(b.left.table.items())],
        "right": sorted(
            [c[x], H.label(h), c[b.ract(x, h)]]
            for h in range(H.n_arrows)
            for x in range(len(c))
            if b.ract(x, h) is not None
        ),
    }


def functor_from_json(doc: dict, H: FinGroupoid, G: FinGroupoid, where: str = "functor") -> GroupoidFunctor:
    hobj, gobj = _object_index(H), _object_index(G)
    harr, garr = _arrow_index(H), _arrow_index(G)
    obj = [-1] * H.n_objects
    for i, (b, a) in enumerate(_rows(doc, "objects", 2, where)):
        w = f"{where}.objects[{i}]"
        obj[_lookup(hobj, b, w, "object")] = _lookup(gobj, a, w, "object")
    arr = [-1] * H.n_arrows
    for i, (h, g) in enumerate(_rows(doc, "arrows", 2, where)):
        w = f"{where}.arrows[{i}]"
        arr[_lookup(harr, h, w, "arrow")] = _lookup(garr, g, w, "arrow")
    if -1 in obj or -1 in arr:
        raise ParseError("functor is not total", where)
    return GroupoidFunctor(H, G, obj, arr, check=False)


def load_functor(path: str | Path) -> GroupoidFunctor:
    doc = _load_json(path)
    base = Path(path).parent
    H = _referenced(doc, "source", base, str(path), None)
    G = _referenced(doc, "target", base, str(path), None)
    return functor_from_json(doc, H, G, str(path))


# ---------------------------------------------------------------------------
# set expressions

def parse_set(expr: str, carrier: Sequence[Hashable]) -> int:
    """``{a,b}`` over carrier names, ``1`` for everything and ``0`` for nothing."""
    s = expr.strip()
    if s == "1":
        return (1 << len(carrier)) - 1
    if s == "0":
        return 0
    idx = {str(c): i for i, c in enumerate(carrier)}
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError("expected '{...}', '0' or '1'", f"set expression {expr!r}")
    body = s[1:-1]
    mask = 0
    if not body.strip():
        return 0
    # names may themselves contain commas inside parentheses, e.g. (1,2)
    names, depth, cur = [], 0, ""
    for ch in body:
        if ch == "," and depth == 0:
            names.append(cur.strip())
            cur = ""
            continue
        depth += ch in "(["
        depth -= ch in ")]"
        cur += ch
    names.append(cur.strip())
    for k, name in enumerate(names):
        if name not in idx:
            raise ParseError(f"unknown atom {name!r}", f"set expression {expr!r}, item {k}")
        mask |= 1 << idx[name]
    return mask
