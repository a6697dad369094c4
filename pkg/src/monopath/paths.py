"""Certified pieces and the partition verifier.

The verifier only ever calls ``coloring.color_of``; it never looks at how a
piece was built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .graphcore import LazyColoring


class ExtensionError(ValueError):
    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class MonoPowerPath:
    """A finite sequence of distinct vertices whose pairs at distance <= power share ``color``.

    ``open_ended`` marks a certified prefix of a one-way infinite path.
    """

    vertices: tuple[int, ...]
    color: int
    power: int = 1
    open_ended: bool = False

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))

    def __len__(self):
        return len(self.vertices)

    def to_json(self) -> dict:
        return {
            "kind": "power",
            "vertices": list(self.vertices),
            "color": self.color,
            "power": self.power,
            "openEnded": self.open_ended,
        }


@dataclass(frozen=True)
class TightPiece:
    """A tight path, tight cycle, or a finite window of a two-way infinite tight path.

    For windows ``offset`` is the ℤ-index of the first vertex.
    """

    vertices: tuple[int, ...]
    color: int
    uniformity: int
    shape: str = "path"  # path | cycle | two-way-window
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if self.shape not in ("path", "cycle", "two-way-window"):
            raise ValueError(f"unknown shape {self.shape!r}")

    def __len__(self):
        return len(self.vertices)

    def windows(self) -> list[tuple[int, ...]]:
        vs, k = self.vertices, self.uniformity
        if self.shape == "cycle":
            if len(vs) < k:
                return []
            return [tuple(vs[(i + j) % len(vs)] for j in range(k)) for i in range(len(vs))]
        return [vs[i:i + k] for i in range(len(vs) - k + 1)]

    def to_json(self) -> dict:
        out = {
            "kind": "tight",
            "vertices": list(self.vertices),
            "color": self.color,
            "uniformity": self.uniformity,
            "shape": self.shape,
        }
        if self.shape == "two-way-window":
            out["offset"] = self.offset
        return out


Piece = Union[MonoPowerPath, TightPiece]


@dataclass
class PartitionResult:
    pieces: list
    leftover: frozenset = frozenset()
    prefix: int = 0
    distinct_colors: bool = False
    meta: dict = field(default_factory=dict)

    def covered(self) -> set[int]:
        out = set()
        for p in self.pieces:
            out.update(p.vertices)
        return out

    def to_json(self) -> dict:
        out = {
            "pieces": [p.to_json() for p in self.pieces],
            "leftover": sorted(self.leftover),
            "prefix": self.prefix,
            "distinctColors": self.distinct_colors,
        }
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PartitionResult":
        pieces = []
        for p in data["pieces"]:
            if p.get("kind", "power") == "tight":
                pieces.append(TightPiece(tuple(p["vertices"]), p["color"], p["uniformity"], p.get("shape", "path"), p.get("offset", 0)))
            else:
                pieces.append(MonoPowerPath(tuple(p["vertices"]), p["color"], p.get("power", 1), p.get("openEnded", False)))
        return cls(pieces, frozenset(data.get("leftover", ())), data.get("prefix", 0), data.get("distinctColors", False), data.get("meta", {}))


@dataclass
class VerificationReport:
    ok: bool = True
    violations: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def fail(self, kind: str, **details):
        self.ok = False
        self.violations.append({"kind": kind, **details})

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations[:100], "violationCount": len(self.violations), **self.info}


def _safe_color(coloring: LazyColoring, edge) -> int | None:
    try:
        return coloring.color_of(edge)
    except ValueError:
        return None


def verify_power_path(coloring: LazyColoring, piece: MonoPowerPath) -> VerificationReport:
    """Check every pair at sequence distance <= power."""
    rep = VerificationReport()
    vs = piece.vertices
    if len(set(vs)) != len(vs):
        rep.fail("repeated-vertex", vertices=sorted({v for v in vs if vs.count(v) > 1}))
    if piece.power < 1:
        rep.fail("bad-power", power=piece.power)
        return rep
    for i in range(len(vs)):
        for j in range(i + 1, min(len(vs), i + piece.power + 1)):
            if vs[i] == vs[j]:
                continue
            c = _safe_color(coloring, (vs[i], vs[j]))
            if c != piece.color:
                rep.fail("pair", positions=(i, j), edge=(vs[i], vs[j]), color=c, expected=piece.color)
    return rep


def verify_tight(coloring: LazyColoring, piece: TightPiece) -> VerificationReport:
    rep = VerificationReport()
    vs = piece.vertices
    if piece.uniformity != coloring.k:
        rep.fail("uniformity", piece=piece.uniformity, coloring=coloring.k)
        return rep
    if len(set(vs)) != len(vs):
        rep.fail("repeated-vertex", vertices=sorted({v for v in vs if vs.count(v) > 1}))
        return rep
    for w in piece.windows():
        c = _safe_color(coloring, w)
        if c != piece.color:
            rep.fail("window", window=w, color=c, expected=piece.color)
    return rep


def verify_piece(coloring: LazyColoring, piece: Piece) -> VerificationReport:
    if isinstance(piece, TightPiece):
        return verify_tight(coloring, piece)
    return verify_power_path(coloring, piece)


def verify_partition(coloring: LazyColoring, result: PartitionResult) -> VerificationReport:
    rep = VerificationReport()
    owner: dict[int, int] = {}
    for idx, piece in enumerate(result.pieces):
        for v in piece.vertices:
            if v in owner:
                rep.fail("disjointness", vertex=v, pieces=(owner[v], idx))
            else:
                owner[v] = idx
        sub = verify_piece(coloring, piece)
        for viol in sub.violations:
            rep.fail("piece", piece=idx, violation=viol)
    clash = sorted(set(owner) & set(result.leftover))
    if clash:
        rep.fail("leftover-overlap", vertices=clash)
    gap = [v for v in range(result.prefix) if v not in owner and v not in result.leftover]
    if gap:
        rep.fail("coverage", gap=gap)
    if result.distinct_colors:
        colors = [p.color for p in result.pieces if len(p.vertices)]
        if len(colors) != len(set(colors)):
            rep.fail("distinct-colors", colors=colors)
    rep.info = {
        "pieces": len(result.pieces),
        "nonemptyPieces": sum(1 for p in result.pieces if len(p.vertices)),
        "leftoverSize": len(result.leftover),
        "prefix": result.prefix,
    }
    return rep


def end_extend(base: MonoPowerPath, extension: Sequence[int], coloring: LazyColoring) -> MonoPowerPath:
    """Append ``extension`` to ``base``, rechecking every new pair within distance ``power``."""
    ext = tuple(extension)
    if not ext:
        return base
    clash = set(ext) & set(base.vertices)
    if clash or len(set(ext)) != len(ext):
        raise ExtensionError(f"extension not disjoint from base: {sorted(clash)}")
    vs = base.vertices + ext
    start = len(base.vertices)
    for j in range(start, len(vs)):
        for i in range(max(0, j - base.power), j):
            c = coloring.color_of((vs[i], vs[j]))
            if c != base.color:
                raise ExtensionError(f"edge {{{vs[i]},{vs[j]}}} has colour {c}, not {base.color}", (vs[i], vs[j]))
    return MonoPowerPath(vs, base.color, base.power, base.open_ended)


def brute_force_power_violations(coloring: LazyColoring, vertices: Sequence[int], color: int, power: int) -> set[tuple[int, int]]:
    """Independent double loop over all position pairs, for cross-checking the verifier."""
    bad = set()
    for i, j in itertools.combinations(range(len(vertices)), 2):
        if j - i <= power and coloring.color_of((vertices[i], vertices[j])) != color:
            bad.add((i, j))
    return bad


def as_power_paths(pieces: Iterable[TightPiece]) -> list[MonoPowerPath]:
    """View 2-uniform tight paths as ordinary paths."""
    out = []
    for p in pieces:
        if p.uniformity != 2 or p.shape != "path":
            raise ValueError("only 2-uniform tight paths are ordinary paths")
        out.append(MonoPowerPath(p.vertices, p.color, 1))
    return out
