"""Vertex classification standing in for a nonprincipal ultrafilter.

``d(v)`` is the colour of v's "large" neighbourhood and ``special_color`` is
the colour whose class is itself large.  Exact mode reads both off the typed
structure of the family (the ultrafilter concentrates on the seat type);
density mode takes majorities over a horizon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graphcore import (
    ALL,
    ArityError,
    Exhausted,
    LargenessOracle,
    LazyColoring,
    MaskClass,
    TypeClass,
    VertexClass,
)


@dataclass
class Classification:
    coloring: LazyColoring
    special_color: int
    provenance: str  # "exact" or "density(H)"
    horizon: int | None = None
    domain: VertexClass = ALL
    _types: dict | None = None  # exact: type name -> colour
    _d: dict = field(default_factory=dict)
    _density_d: np.ndarray | None = None  # density: d over [0,H), -1 outside domain

    @property
    def exact(self) -> bool:
        return self._types is not None

    def d(self, v: int) -> int:
        if v not in self._d:
            if self._types is not None:
                self._d[v] = self._types[self.coloring.structure.type_of(v).name]
            elif self._density_d is not None and v < len(self._density_d):
                self._d[v] = int(self._density_d[v])
            else:
                self._d[v] = density_color(self.coloring, v, self.horizon, self.domain)
        return self._d[v]

    def d_map(self, n: int) -> dict[int, int]:
        return {v: self.d(v) for v in range(n) if v in self.domain}

    def class_of(self, i: int) -> VertexClass:
        """V_i = d^{-1}{i} within the classified domain."""
        if self._types is not None:
            names = [t for t, c in self._types.items() if c == i]
            removed = self.domain.removed if isinstance(self.domain, TypeClass) else ()
            return TypeClass(self.coloring.structure, names, removed)
        if self._density_d is not None:
            return MaskClass(self._density_d == i, name=f"V{i}")
        return _DensityClass(self, i)

    def to_json(self, n: int) -> dict:
        return {
            "dMap": {str(v): c for v, c in self.d_map(n).items()},
            "specialColor": self.special_color,
            "provenance": self.provenance,
        }


class _DensityClass(VertexClass):
    def __init__(self, cl: Classification, i: int):
        self.cl = cl
        self.i = i
        self.name = f"V{i}"

    def __contains__(self, v):
        return v in self.cl.domain and self.cl.d(v) == self.i

    def mask(self, size):
        base = self.cl.domain.mask(size)
        out = np.zeros(size, dtype=bool)
        for v in np.flatnonzero(base):
            out[v] = self.cl.d(int(v)) == self.i
        return out


def density_color(coloring: LazyColoring, v: int, horizon: int, domain: VertexClass = ALL) -> int:
    """argmax_i |N(v,i) ∩ domain ∩ [0,H)|, ties to the smallest colour."""
    row = coloring.row(v, horizon)
    if domain is not ALL:
        row = row[domain.mask(len(row))]
    counts = np.bincount(row[row >= 0].astype(np.int64), minlength=coloring.r)
    return int(np.argmax(counts))


def classify(coloring: LazyColoring, prefix: int, oracle: LargenessOracle, mode: str | None = None) -> Classification:
    """Classify the vertices of a 2-coloured K_N.

    In density mode ``d`` is pinned per vertex from the oracle horizon (so it
    never changes when the prefix grows) while the special colour is the
    majority class on [0, prefix).
    """
    if coloring.k != 2:
        raise ArityError("classification needs a graph colouring (k=2)")
    mode = mode or ("exact" if oracle.exact and coloring.structure is not None else "density")
    if mode == "exact":
        return exact_classification(coloring)
    H = oracle.horizon
    cl = Classification(coloring, 0, f"density({H})", horizon=H)
    counts = np.zeros(coloring.r, dtype=np.int64)
    for v in range(prefix):
        counts[cl.d(v)] += 1
    cl.special_color = int(np.argmax(counts))
    return cl


def exact_classification(coloring: LazyColoring, within: TypeClass | None = None) -> Classification:
    """Closed-form ultrafilter classification for typed families.

    The ultrafilter lives on the seat type (or, inside ``within``, on its
    first infinite type); N(v,i) is large iff it contains that type.
    """
    s = coloring.structure
    if s is None:
        raise ValueError(f"{coloring.tag} has no exact classification")
    names = [t.name for t in s.types] if within is None else [t.name for t in within.types()]
    infinite = [n for n in names if not s.by_name[n].finite]
    if not infinite:
        raise Exhausted("cannot classify a finite vertex set")
    seat = s.seat if s.seat in infinite else infinite[0]
    types = {n: s.pair_color(n, seat) for n in names}
    domain = within if within is not None else ALL
    return Classification(coloring, types[seat], "exact", _types=types, domain=domain)


def density_classification_on(coloring: LazyColoring, domain_mask: np.ndarray, matrix: np.ndarray | None = None) -> Classification:
    """Density classification of c restricted to the vertex set ``domain_mask`` ⊆ [0,H).

    Both d and the special colour are majorities inside the domain.
    """
    H = len(domain_mask)
    if matrix is None:
        matrix = coloring.matrix(H)
    members = np.flatnonzero(domain_mask)
    d = np.full(H, -1, dtype=np.int64)
    counts = np.zeros(coloring.r, dtype=np.int64)
    if len(members):
        sub = matrix[np.ix_(members, members)]
        per = np.stack([(sub == i).sum(axis=1) for i in range(coloring.r)], axis=1)
        d[members] = np.argmax(per, axis=1)
        counts = np.bincount(d[members], minlength=coloring.r)
    cl = Classification(coloring, int(np.argmax(counts)), f"density({H})", horizon=H, domain=MaskClass(domain_mask, "domain"))
    cl._density_d = d
    return cl


def joint_neighborhood(
    oracle: LargenessOracle,
    F: Iterable[int],
    i: int,
    restrict_to: VertexClass = ALL,
    exclude: Iterable[int] = (),
) -> int:
    """Smallest w ∈ restrict_to \\ exclude with c({v,w}) = i for all v ∈ F."""
    return oracle.fresh(restrict_to, [(v, i) for v in F], exclude)
