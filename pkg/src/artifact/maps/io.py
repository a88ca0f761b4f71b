"""JSON exchange format for combinatorial maps."""

from __future__ import annotations

import json

from ..graph_core import ParseError
from .canon import canonical_form
from .kernel import CombinatorialMap, Component, Face, Vertex


def _walk_out(a):
    return a if isinstance(a, int) else ["v", a[1]]


def _walk_in(a):
    return a if isinstance(a, int) else ("v", int(a[1]))


def map_to_json(m: CombinatorialMap) -> dict:
    idents = {}
    for v, rec in enumerate(m.vertices):
        if rec.point is not None:
            idents.setdefault(rec.point, []).append(v)
    return {
        "components": [{"orientable": c.orientable, "genus": c.genus} for c in m.components],
        "tau0": [f ^ 2 for f in range(m.n_flags)],
        "tau1": list(m.tau1),
        "tau2": [f ^ 1 for f in range(m.n_flags)],
        "flag_vertex": list(m.flag_vertex),
        "edges": [{"name": n, "kind": k} for n, k in zip(m.edge_name, m.edge_kind)],
        "vertices": [{"comp": r.comp, "point": r.point, "covered": r.covered, "label": r.label, "name": r.name}
                     for r in m.vertices],
        "faces": [{"comp": f.comp, "orientable": f.orientable, "genus": f.genus,
                   "walks": [_walk_out(a) for a in f.walks], "q": f.q, "label": f.label, "hole": f.hole}
                  for f in m.faces],
        "segments": [[x if j % 2 == 0 else list(x) for j, x in enumerate(tr)] for tr in m.segments],
        "identifications": [[p, vs] for p, vs in sorted(idents.items())],
        "canon": canonical_form(m).hex(),
    }


def dumps_map(m: CombinatorialMap) -> str:
    return json.dumps(map_to_json(m), separators=(",", ":")) + "\n"


def map_from_json(d: dict) -> CombinatorialMap:
    try:
        n = len(d["tau1"])
        if d.get("tau0", [f ^ 2 for f in range(n)]) != [f ^ 2 for f in range(n)] or \
                d.get("tau2", [f ^ 1 for f in range(n)]) != [f ^ 1 for f in range(n)]:
            raise ParseError("tau0/tau2 must follow the flag numbering 4*edge + 2*end + side")
        m = CombinatorialMap(
            components=tuple(Component(bool(c["orientable"]), int(c["genus"])) for c in d["components"]),
            vertices=tuple(Vertex(r["comp"], r["point"], bool(r["covered"]), int(r["label"]), r.get("name"))
                           for r in d["vertices"]),
            flag_vertex=tuple(int(x) for x in d["flag_vertex"]),
            tau1=tuple(int(x) for x in d["tau1"]),
            edge_kind=tuple(e["kind"] for e in d["edges"]),
            edge_name=tuple(e["name"] for e in d["edges"]),
            faces=tuple(Face(int(f["comp"]), bool(f["orientable"]), int(f["genus"]),
                             tuple(_walk_in(a) for a in f["walks"]), int(f["q"]), int(f["label"]), bool(f["hole"]))
                        for f in d["faces"]),
            segments=tuple(tuple(int(x) if j % 2 == 0 else (x[0], x[1]) for j, x in enumerate(tr))
                           for tr in d["segments"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad map record: {exc}") from exc
    return m


def loads_map(text: str) -> CombinatorialMap:
    try:
        return map_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad map JSON: {exc}") from exc
