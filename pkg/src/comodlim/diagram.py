from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .coalg import Coalgebra
from .comod import ComodMorphism, Comodule, same_coalgebra, validate_comodule, validate_morphism
from .errors import MixedCoalgebras
from .report import ValidationReport


@dataclass(frozen=True)
class Arrow:
    label: str
    src: int
    dst: int
    morphism: ComodMorphism


@dataclass
class Diagram:
    """A finite multigraph of comodules (objects) and comodule maps (arrows)."""

    coalgebra: Coalgebra
    objects: list[Comodule]
    arrows: list[Arrow] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [o.name or f"M{i}" for i, o in enumerate(self.objects)]

    def index(self, label: str) -> int:
        return self.labels.index(label)


def validate_diagram(d: Diagram) -> ValidationReport:
    report = ValidationReport("diagram")
    try:
        same_coalgebra(d.coalgebra, *(o.coalgebra for o in d.objects))
        report.add("single coalgebra", True)
    except MixedCoalgebras as e:
        report.add("single coalgebra", False, detail=str(e))
        return report
    for i, o in enumerate(d.objects):
        report.add(f"object {d.labels[i]} is a comodule", validate_comodule(o).ok, i)
    for k, a in enumerate(d.arrows):
        ends = (0 <= a.src < len(d.objects) and 0 <= a.dst < len(d.objects)
                and a.morphism.src == d.objects[a.src] and a.morphism.dst == d.objects[a.dst])
        report.add(f"arrow {a.label} endpoints", ends, k)
        if ends:
            report.add(f"arrow {a.label} is a comodule map", validate_morphism(a.morphism).ok, k)
    return report


def discrete(coalgebra: Coalgebra, objects: Sequence[Comodule]) -> Diagram:
    return Diagram(coalgebra, list(objects), [], [f"M{i}" for i in range(len(objects))])


def parallel_pair(f: ComodMorphism, g: ComodMorphism) -> Diagram:
    return Diagram(f.src.coalgebra, [f.src, f.dst],
                   [Arrow("f", 0, 1, f), Arrow("g", 0, 1, g)], ["src", "dst"])


def span(f: ComodMorphism, g: ComodMorphism) -> Diagram:
    """B <-f- A -g-> C, the shape of a pushout."""
    return Diagram(f.src.coalgebra, [f.src, f.dst, g.dst],
                   [Arrow("f", 0, 1, f), Arrow("g", 0, 2, g)], ["A", "B", "C"])


def cospan(f: ComodMorphism, g: ComodMorphism) -> Diagram:
    """A -f-> C <-g- B, the shape of a pullback."""
    return Diagram(f.dst.coalgebra, [f.src, g.src, f.dst],
                   [Arrow("f", 0, 2, f), Arrow("g", 1, 2, g)], ["A", "B", "C"])


@dataclass(frozen=True)
class MediatingResult:
    map: ComodMorphism
    uniqueness_kernel_dim: int
