"""JSON emission and loading, plus rendering bindings back to session text.

Rationals are written as ``"p/q"`` strings (``"p"`` for integers); keys are
emitted in a fixed order so output is byte-for-byte reproducible.
"""

from __future__ import annotations

import json

from ..coalg import Coalgebra
from ..colimits import CoconeResult
from ..comod import ComodMorphism, Comodule
from ..diagram import Arrow, Diagram
from ..exactlin import RationalMatrix
from ..limits import ConeResult
from ..report import ValidationReport


def matrix_literal(m: RationalMatrix) -> list[list[str]]:
    return m.to_literal()


def certificate_block(report: ValidationReport) -> dict:
    return {"ok": report.ok, "checks": {c.name: c.passed for c in report.checks}}


def coalgebra_json(c: Coalgebra) -> dict:
    return {"name": c.name, "dim": c.dim, "delta": matrix_literal(c.delta), "eps": matrix_literal(c.eps)}


def comodule_json(v: Comodule) -> dict:
    return {"coalgebra": v.coalgebra.name, "dim": v.dim, "rho": matrix_literal(v.rho)}


def morphism_json(f: ComodMorphism) -> dict:
    return {"src": f.src.name, "dst": f.dst.name, "mat": matrix_literal(f.mat)}


def diagram_json(d: Diagram) -> dict:
    return {
        "objects": list(d.labels),
        "arrows": [{"label": a.label, "src": d.labels[a.src], "dst": d.labels[a.dst],
                    "mat": matrix_literal(a.morphism.mat)} for a in d.arrows],
    }


def cone_json(r: ConeResult) -> dict:
    return {
        "kind": "limit",
        "apex": comodule_json(r.apex),
        "j": matrix_literal(r.embedding.mat),
        "p": matrix_literal(r.p),
        "trace": list(r.trace),
        "legs": [matrix_literal(leg.mat) for leg in r.legs],
        "certificate": certificate_block(r.certificate),
    }


def cocone_json(r: CoconeResult) -> dict:
    return {
        "kind": "colimit",
        "apex": comodule_json(r.apex),
        "legs": [matrix_literal(leg.mat) for leg in r.legs],
        "coaction_kernel_dim": r.coaction_kernel_dim,
        "certificate": certificate_block(r.certificate),
    }


def to_json_value(value) -> dict:
    if isinstance(value, Coalgebra):
        return coalgebra_json(value)
    if isinstance(value, Comodule):
        return comodule_json(value)
    if isinstance(value, ComodMorphism):
        return morphism_json(value)
    if isinstance(value, Diagram):
        return diagram_json(value)
    if isinstance(value, ConeResult):
        return cone_json(value)
    if isinstance(value, CoconeResult):
        return cocone_json(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def emit_json(value, indent: int | None = 2) -> str:
    return json.dumps(to_json_value(value), indent=indent)


def _matrix(rows, shape) -> RationalMatrix:
    m = RationalMatrix.from_rows(rows, cols=shape[1])
    if m.shape != shape:
        raise ValueError(f"matrix of shape {m.shape}, expected {shape}")
    return m


def coalgebra_from_json(data: dict) -> Coalgebra:
    n = data["dim"]
    return Coalgebra(n, _matrix(data["delta"], (n * n, n)), _matrix(data["eps"], (1, n)), data["name"])


def comodule_from_json(data: dict, coalgebras: dict[str, Coalgebra], name: str = "") -> Comodule:
    c = coalgebras[data["coalgebra"]]
    m = data["dim"]
    return Comodule(c, m, _matrix(data["rho"], (c.dim * m, m)), name)


def morphism_from_json(data: dict, comodules: dict[str, Comodule]) -> ComodMorphism:
    src, dst = comodules[data["src"]], comodules[data["dst"]]
    return ComodMorphism(src, dst, _matrix(data["mat"], (dst.dim, src.dim)))


def diagram_from_json(data: dict, comodules: dict[str, Comodule], coalgebra: Coalgebra | None = None
                      ) -> Diagram:
    objs = [comodules[o] for o in data["objects"]]
    labels = list(data["objects"])
    arrows = []
    for a in data["arrows"]:
        s, d = labels.index(a["src"]), labels.index(a["dst"])
        arrows.append(Arrow(a["label"], s, d,
                            ComodMorphism(objs[s], objs[d], _matrix(a["mat"], (objs[d].dim, objs[s].dim)))))
    c = coalgebra or (objs[0].coalgebra if objs else None)
    if c is None:
        raise ValueError("an empty diagram needs an explicit coalgebra")
    return Diagram(c, objs, arrows, labels)


def _literal_text(m: RationalMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(row) + "]" for row in m.to_literal()) + "]"


def render_bindings(bindings: dict) -> str:
    """Session text recreating every explicit binding.

    Construction results are rendered as explicit comodules (their apex) so
    later references to them still resolve.
    """
    lines = []
    for name, value in bindings.items():
        apex = getattr(value, "apex", None)
        if isinstance(value, Coalgebra):
            lines.append(f"coalgebra {name} = explicit {{ dim {value.dim}; "
                         f"delta {_literal_text(value.delta)}; eps {_literal_text(value.eps)} }}")
        elif isinstance(value, Comodule) or isinstance(apex, Comodule):
            v = value if isinstance(value, Comodule) else apex
            lines.append(f"comodule {name} over {v.coalgebra.name} {{ dim {v.dim}; rho {_literal_text(v.rho)} }}")
        elif isinstance(value, ComodMorphism):
            lines.append(f"morphism {name} : {value.src.name} -> {value.dst.name} = {_literal_text(value.mat)}")
        elif isinstance(value, Diagram):
            parts = [f"objects {', '.join(value.labels)}"] if value.labels else []
            parts += [f"arrow {a.label} : {value.labels[a.src]} -> {value.labels[a.dst]}" for a in value.arrows]
            lines.append(f"diagram {name} {{ {'; '.join(parts)} }}")
    return "\n".join(lines) + "\n"


def snapshot(bindings: dict) -> dict:
    """JSON-ready view of all explicit bindings (results reduced to their apex)."""
    out = {}
    for name, value in bindings.items():
        apex = getattr(value, "apex", None)
        if isinstance(value, (Coalgebra, Comodule, ComodMorphism, Diagram)):
            out[name] = to_json_value(value)
        elif isinstance(apex, Comodule):
            out[name] = comodule_json(apex)
    return out
