"""Simultaneous path building and the Rado partition into r paths of distinct colours."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .classifier import classify
from .graphcore import ALL, ArityError, Exhausted, LargenessOracle, LazyColoring, VertexClass
from .paths import MonoPowerPath, PartitionResult


@dataclass
class PathClass:
    """One class for :func:`build_simultaneous_paths`.

    ``target`` is the optional set A_j the path must keep visiting;
    ``target_infinite`` says whether the caller declares it infinite.
    """

    members: VertexClass
    color: int
    target: VertexClass | None = None
    start: int | None = None
    target_infinite: bool = True


class BuildFailure(Exhausted):
    def __init__(self, cause: Exhausted, class_index: int, round_: int, phase: str):
        super().__init__(f"class {class_index}, round {round_} ({phase}): {cause}", cause.query, cause.certified_empty)
        self.class_index = class_index
        self.round = round_
        self.phase = phase


class SimultaneousPathBuilder:
    """Streaming builder: round 2m visits the targets, round 2m+1 absorbs v_m.

    The builder never looks at the prefix length, so running it for more
    rounds only end-extends the paths it already has.
    """

    def __init__(
        self,
        classes: Sequence[PathClass],
        coloring: LazyColoring,
        oracle: LargenessOracle,
        connectors: VertexClass = ALL,
    ):
        self.classes = list(classes)
        self.coloring = coloring
        self.oracle = oracle
        self.connectors = connectors
        self.paths: list[list[int]] = [[] for _ in classes]
        self.used: set[int] = set()
        self.m = 0
        self.target_visits = [0] * len(classes)
        for j, cl in enumerate(self.classes):
            if cl.start is not None:
                if cl.start not in cl.members:
                    raise ValueError(f"start point {cl.start} not in class {j}")
                if cl.start in self.used:
                    raise ValueError("start points must be distinct")
                self.paths[j].append(cl.start)
                self.used.add(cl.start)

    def _connect(self, j: int, target: int, phase: str) -> None:
        path, color = self.paths[j], self.classes[j].color
        if not path:
            path.append(target)
            self.used.add(target)
            return
        last = path[-1]
        if self.coloring.color_of((last, target)) == color:
            path.append(target)
            self.used.add(target)
            return
        try:
            u = self.oracle.fresh(self.connectors, [(last, color), (target, color)], self.used | {target})
        except Exhausted as exc:
            raise BuildFailure(exc, j, self.m, phase) from exc
        path.extend((u, target))
        self.used.update((u, target))

    def _visit_target(self, j: int) -> None:
        cl = self.classes[j]
        path = self.paths[j]
        constraints = [(path[-1], cl.color)] if path else []
        try:
            a = self.oracle.fresh(cl.target, constraints, self.used)
        except Exhausted as exc:
            raise BuildFailure(exc, j, self.m, "target") from exc
        path.append(a)
        self.used.add(a)
        self.target_visits[j] += 1

    def step(self) -> None:
        """Process enumeration index m (vertex v_m = m)."""
        v = self.m
        for j, cl in enumerate(self.classes):
            if cl.target is not None and cl.target_infinite:
                self._visit_target(j)
        if v not in self.used:
            for j, cl in enumerate(self.classes):
                if v in cl.members:
                    self._connect(j, v, "cover")
                    break
        self.m += 1

    def run(self, n: int) -> None:
        while self.m < n:
            self.step()
            assert self.m - 1 in self.used or not any(self.m - 1 in c.members for c in self.classes)

    def result(self, open_ended: bool = True) -> list[MonoPowerPath]:
        return [MonoPowerPath(tuple(p), cl.color, 1, open_ended) for p, cl in zip(self.paths, self.classes)]


def build_simultaneous_paths(
    classes: Sequence[PathClass],
    coloring: LazyColoring,
    oracle: LargenessOracle,
    prefix: int,
    connectors: VertexClass = ALL,
) -> list[MonoPowerPath]:
    """Disjoint monochromatic paths, P_j of colour i_j, jointly covering every class on [0,prefix)."""
    builder = SimultaneousPathBuilder(classes, coloring, oracle, connectors)
    builder.run(prefix)
    return builder.result()


def cover_by_single_path(
    members: VertexClass,
    color: int,
    coloring: LazyColoring,
    oracle: LargenessOracle,
    prefix: int,
    connectors: VertexClass = ALL,
) -> MonoPowerPath:
    return build_simultaneous_paths([PathClass(members, color)], coloring, oracle, prefix, connectors)[0]


def rado_partition(coloring: LazyColoring, prefix: int, oracle: LargenessOracle) -> PartitionResult:
    """r disjoint paths, path j of colour j, covering [0,prefix)."""
    if coloring.k != 2:
        raise ArityError("the Rado partition needs a graph colouring")
    cl = classify(coloring, prefix, oracle)
    classes = [PathClass(cl.class_of(i), i) for i in range(coloring.r)]
    paths = build_simultaneous_paths(classes, coloring, oracle, prefix)
    return PartitionResult(
        paths,
        prefix=prefix,
        distinct_colors=True,
        meta={"mode": "rado", "classification": cl.provenance, "specialColor": cl.special_color},
    )
