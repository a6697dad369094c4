"""Absorbing paths into path-squares, and the partition into at most four squares."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..classifier import density_classification_on, exact_classification
from ..gameengine import GameSpec, parallel_compose
from ..graphcore import (
    ALL,
    ArityError,
    FiniteClass,
    LargenessOracle,
    LazyColoring,
    MaskClass,
    TypeClass,
    VertexClass,
)
from ..paths import MonoPowerPath, PartitionResult
from ..radopart import PathClass, build_simultaneous_paths
from .finite import maximal_two_path_partition, pokrovskiy_finite

# finite classes larger than this are too big for the bitmask searches
FINITE_SEARCH_LIMIT = 16


@dataclass
class Absorption:
    square: MonoPowerPath
    witnesses: dict[str, list[int]] = field(default_factory=dict)  # protected class name -> untouched samples


def absorb_path_into_square(
    path: Sequence[int],
    color: int,
    W: VertexClass,
    coloring: LazyColoring,
    oracle: LargenessOracle,
    protect: Sequence[VertexClass] = (),
    exclude: set[int] | frozenset = frozenset(),
) -> Absorption:
    """Turn the colour-``color`` path v_0, v_1, ... into the square v_0, v_1, w_0, v_2, v_3, w_1, ...

    w_i is a fresh vertex of W joined to v_{2i}..v_{2i+3}, and it is only
    placed when v_{2i+1} exists.  Alongside each w_i one sample f_i from the
    next protected class (round robin) is set aside and never used.
    """
    vs = [int(v) for v in path]
    used = set(vs) | set(exclude)
    out: list[int] = []
    witnesses: dict[str, list[int]] = {F.name: [] for F in protect}
    for i in range(0, len(vs), 2):
        out.append(vs[i])
        if i + 1 >= len(vs):
            break
        out.append(vs[i + 1])
        block = vs[i:i + 4]
        w = oracle.fresh(W, [(v, color) for v in block], used)
        used.add(w)
        out.append(w)
        if protect:
            F = protect[(i // 2) % len(protect)]
            f = oracle.fresh(F, (), used)
            used.add(f)
            witnesses[F.name].append(f)
    return Absorption(MonoPowerPath(tuple(out), color, 2), witnesses)


# ---------------------------------------------------------------------------
# classes with a finiteness verdict


@dataclass
class Split:
    """A (special, rest) split of a vertex class, as in the two-step classification."""

    A: VertexClass
    B: VertexClass
    special: int
    B_finite: bool
    provenance: str


def _is_finite(cls: VertexClass, H: int | None) -> bool:
    if isinstance(cls, TypeClass):
        return cls.finite()
    m = cls.mask(H)
    return not m[H // 2:].any() and int(m.sum()) <= FINITE_SEARCH_LIMIT


def _members(cls: VertexClass, H: int | None) -> list[int]:
    if isinstance(cls, TypeClass):
        return sorted(cls.members())
    if isinstance(cls, FiniteClass):
        return sorted(cls.vertices)
    return cls.below(H)


def _split(coloring: LazyColoring, domain: VertexClass, exact: bool, H: int, matrix) -> Split:
    if exact:
        cl = exact_classification(coloring, within=None if domain is ALL else domain)
        z = cl.special_color
        names_a = [t for t, c in cl._types.items() if c == z]
        names_b = [t for t, c in cl._types.items() if c != z]
        A = TypeClass(coloring.structure, names_a)
        B = TypeClass(coloring.structure, names_b)
        return Split(A, B, z, B.finite(), "exact")
    cl = density_classification_on(coloring, domain.mask(H), matrix)
    d = cl._density_d
    z = cl.special_color
    dom = domain.mask(H)
    A = MaskClass(dom & (d == z), "A")
    B = MaskClass(dom & (d != z) & (d >= 0), "B")
    fin = _is_finite(B, H)
    if fin:
        B = FiniteClass(B.below(H), "B")
    return Split(A, B, z, fin, f"density({H})")


def _square_specs(coloring, oracle, items) -> list[GameSpec]:
    return [GameSpec(coloring, color, ladder, oracle, name=name) for name, color, ladder in items]


def four_square_partition(coloring: LazyColoring, prefix: int, oracle: LargenessOracle) -> PartitionResult:
    """Partition [0,prefix) into at most four monochromatic path-squares (two colours)."""
    if coloring.k != 2 or coloring.r > 2:
        raise ArityError("four squares needs a 2-colouring of a graph")
    exact = oracle.exact and coloring.structure is not None
    H = oracle.horizon
    matrix = None if exact else coloring.matrix(H)
    first = _split(coloring, ALL, exact, H, matrix)
    z = first.special
    o = 1 - z
    A0, B0 = first.A, first.B
    pieces: list[MonoPowerPath] = []
    meta = {"mode": "squares", "provenance": first.provenance, "specialColor": z}

    if first.B_finite:
        meta["case"] = 1
        sol = pokrovskiy_finite(_members(B0, H), coloring, k=2, power_color=z)
        Q = MonoPowerPath(sol.power, z, 2)
        reserved = set(_members(B0, H))
        absorbed = []
        for P in sol.paths:
            R = absorb_path_into_square(P, o, A0, coloring, oracle, exclude=reserved).square
            reserved |= set(R.vertices)
            absorbed.append(R)
        A0p = A0.minus(reserved)
        S, game_meta = parallel_compose(_square_specs(coloring, oracle, [("S", z, [A0p] * 3)]), prefix, reserved=reserved)
        pieces = absorbed + [Q] + S
        meta["rounds"] = game_meta["rounds"]
    else:
        second = _split(coloring, B0, exact, H, matrix)
        A1, B1 = second.A, second.B
        meta["provenance2"] = second.provenance
        if second.special == z:
            meta["case"] = 2
            items = [("A0", z, [A0] * 3), ("A1", z, [A1] * 3), ("B1", o, [B1, A1, A0])]
            S, game_meta = parallel_compose(_square_specs(coloring, oracle, items), prefix)
            pieces = S
        else:
            meta["case"] = 3
            P0, P1 = _two_paths(coloring, oracle, B1, second.B_finite, z, prefix, H, matrix, exact)
            reserved = set(P0) | set(P1)
            R0 = absorb_path_into_square(P0, z, A1, coloring, oracle, protect=[A1], exclude=reserved)
            reserved |= set(R0.square.vertices)
            R1 = absorb_path_into_square(P1, o, A0, coloring, oracle, protect=[A0], exclude=reserved)
            reserved |= set(R1.square.vertices)
            A0r, A1r = A0.minus(R1.square.vertices), A1.minus(R0.square.vertices)
            items = [("A0-R1", z, [A0r] * 3), ("A1-R0", o, [A1r] * 3)]
            S, game_meta = parallel_compose(_square_specs(coloring, oracle, items), prefix, reserved=reserved)
            pieces = [R0.square, R1.square] + S
        meta["rounds"] = game_meta["rounds"]
    pieces = [p for p in pieces if len(p)]
    assert len(pieces) <= 4
    return PartitionResult(pieces, prefix=prefix, meta=meta)


def _two_paths(coloring, oracle, B1, finite, z, prefix, H, matrix, exact) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split B_1 into a colour-z path and a colour-(1-z) path."""
    if finite:
        members = _members(B1, H)
        p0, p1 = maximal_two_path_partition(members, coloring)
        return (p0, p1) if z == 0 else (p1, p0)
    if exact:
        cl = exact_classification(coloring, within=B1)
    else:
        cl = density_classification_on(coloring, B1.mask(H), matrix)
    classes = [PathClass(cl.class_of(c), c) for c in (z, 1 - z)]
    paths = build_simultaneous_paths(classes, coloring, oracle, prefix, connectors=B1)
    return paths[0].vertices, paths[1].vertices
