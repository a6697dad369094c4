"""Colorings of complete (hyper)graphs on N, vertex classes and the largeness oracle.

Every construction in the package treats "this set is infinite" as a promise
made by a :class:`LargenessOracle`: ask it for a fresh vertex with given colour
constraints and it either produces the smallest admissible one or raises
:class:`Exhausted`.  Structured families answer exactly; everything else is
scanned up to a horizon.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

DEFAULT_HORIZON_FACTOR = 10
DEFAULT_HORIZON_BASE = 1000


class ArityError(ValueError):
    pass


class DomainError(ValueError):
    pass


class ColoringFormatError(ValueError):
    pass


class Exhausted(Exception):
    """No admissible vertex was found.

    ``certified_empty`` is set when an exact oracle proved the set empty,
    as opposed to a scan that simply ran past its horizon.
    """

    def __init__(self, message: str, query: "Query | None" = None, certified_empty: bool = False):
        super().__init__(message)
        self.query = query
        self.certified_empty = certified_empty

    def to_json(self) -> dict:
        out = {"error": "exhausted", "message": str(self), "certifiedEmpty": self.certified_empty}
        if self.query is not None:
            out["query"] = self.query.to_json()
        return out


def default_horizon(prefix: int) -> int:
    env = os.environ.get("MONOPATH_HORIZON")
    if env:
        return int(env)
    return DEFAULT_HORIZON_FACTOR * prefix + DEFAULT_HORIZON_BASE


# ---------------------------------------------------------------------------
# hashing for the seeded-random family


def splitmix64(x: int) -> int:
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def edge_hash(edge: Sequence[int], seed: int) -> int:
    """64-bit hash of a sorted edge: fold splitmix64 over (seed, v1, ..., vk)."""
    h = splitmix64(seed & MASK64)
    for v in sorted(edge):
        h = splitmix64(h ^ v)
    return h


def _splitmix64_np(z: np.ndarray) -> np.ndarray:
    z = z + np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


# ---------------------------------------------------------------------------
# colorings


class LazyColoring:
    """A total colouring of the k-subsets of N (or of a finite universe).

    Subclasses implement ``_color`` on a sorted tuple.  ``row`` is the
    vectorised k=2 view used by scans and density classification.
    """

    tag = "abstract"

    def __init__(self, r: int, k: int, universe: int | None = None):
        if r < 1:
            raise ValueError("need at least one colour")
        if k < 1:
            raise ValueError("uniformity must be positive")
        self.r = r
        self.k = k
        self.universe = universe
        self._rows: dict[tuple[int, int], np.ndarray] = {}

    # structure hooks; None means "no exact oracle"
    structure: "TypedStructure | None" = None
    chain: "ChainStructure | None" = None

    @property
    def params(self) -> dict:
        return {}

    def spec(self) -> str:
        return self.tag

    def color_of(self, edge: Iterable[int]) -> int:
        e = tuple(sorted(edge))
        if len(e) != self.k or len(set(e)) != self.k:
            raise ArityError(f"expected {self.k} distinct vertices, got {list(edge)!r}")
        if e[0] < 0:
            raise DomainError(f"negative vertex in {e}")
        if self.universe is not None and e[-1] >= self.universe:
            raise DomainError(f"vertex {e[-1]} outside universe [0,{self.universe})")
        return self._color(e)

    __call__ = color_of

    def _color(self, e: tuple[int, ...]) -> int:
        raise NotImplementedError

    def row(self, v: int, size: int) -> np.ndarray:
        """Colours c({v,w}) for w in [0,size) as int8, with -1 at w == v."""
        if self.k != 2:
            raise ArityError("row() is only defined for graphs")
        if self.universe is not None:
            size = min(size, self.universe)
        key = (v, size)
        cached = self._rows.get(key)
        if cached is None:
            cached = self._row(v, size)
            cached.setflags(write=False)
            if len(self._rows) > 50000:
                self._rows.clear()
            self._rows[key] = cached
        return cached

    def _row(self, v: int, size: int) -> np.ndarray:
        out = np.empty(size, dtype=np.int8)
        for w in range(size):
            out[w] = -1 if w == v else self._color((v, w) if v < w else (w, v))
        return out

    def matrix(self, size: int) -> np.ndarray:
        if self.universe is not None:
            size = min(size, self.universe)
        return np.stack([self.row(v, size) for v in range(size)]) if size else np.zeros((0, 0), np.int8)


class ConstantColoring(LazyColoring):
    tag = "constant"

    def __init__(self, color: int = 0, r: int | None = None, k: int = 2):
        super().__init__(r if r is not None else color + 1, k)
        if not 0 <= color < self.r:
            raise ValueError("constant colour out of range")
        self.value = color
        if k == 2:
            self.structure = TypedStructure(
                types=(VertexType("N", start=0, step=1),),
                table={("N", "N"): color},
                seat="N",
                type_index=lambda v: 0,
            )
        self.chain = ChainStructure(lambda n: color, lambda n, w: w > n, {color: None})

    @property
    def params(self) -> dict:
        return {"color": self.value, "r": self.r, "k": self.k}

    def spec(self) -> str:
        return f"constant:{self.value},r={self.r},k={self.k}"

    def _color(self, e):
        return self.value

    def _row(self, v, size):
        out = np.full(size, self.value, dtype=np.int8)
        if v < size:
            out[v] = -1
        return out


class SeededRandomColoring(LazyColoring):
    """colour = edge_hash(sorted edge, seed) mod r."""

    tag = "seeded-random"

    def __init__(self, r: int, k: int = 2, seed: int = 0):
        super().__init__(r, k)
        self.seed = seed
        self._h0 = splitmix64(seed & MASK64)

    @property
    def params(self) -> dict:
        return {"r": self.r, "k": self.k, "seed": self.seed}

    def spec(self) -> str:
        return f"seeded-random:{self.r},{self.k},{self.seed}"

    def _color(self, e):
        h = self._h0
        for v in e:
            h = splitmix64(h ^ v)
        return h % self.r

    def _row(self, v, size):
        w = np.arange(size, dtype=np.uint64)
        vv = np.uint64(v)
        lo = np.minimum(w, vv)
        hi = np.maximum(w, vv)
        with np.errstate(over="ignore"):
            h = _splitmix64_np(np.uint64(self._h0) ^ lo)
            h = _splitmix64_np(h ^ hi)
        out = (h % np.uint64(self.r)).astype(np.int8)
        if v < size:
            out[v] = -1
        return out


@dataclass(frozen=True)
class VertexType:
    """A vertex type: either a finite set or the progression start, start+step, ..."""

    name: str
    members: frozenset | None = None
    start: int = 0
    step: int = 1

    @property
    def finite(self) -> bool:
        return self.members is not None

    def contains(self, v: int) -> bool:
        if self.members is not None:
            return v in self.members
        return v >= self.start and (v - self.start) % self.step == 0

    def first_avoiding(self, avoid: frozenset | set) -> int | None:
        if self.members is not None:
            for v in sorted(self.members):
                if v not in avoid:
                    return v
            return None
        v = self.start
        while v in avoid:
            v += self.step
        return v

    def below(self, size: int) -> list[int]:
        if self.members is not None:
            return sorted(v for v in self.members if v < size)
        return list(range(self.start, size, self.step))


@dataclass
class TypedStructure:
    """Colourings where c({u,v}) depends only on the types of u and v.

    ``seat`` names the infinite type carrying the canonical nonprincipal
    ultrafilter: a set is "large" iff it contains cofinitely much of the seat.
    """

    types: tuple[VertexType, ...]
    table: dict[tuple[str, str], int]
    seat: str
    type_index: Callable[[int], int]

    def __post_init__(self):
        self.by_name = {t.name: t for t in self.types}
        for (a, b), c in list(self.table.items()):
            self.table.setdefault((b, a), c)

    def type_of(self, v: int) -> VertexType:
        return self.types[self.type_index(v)]

    def pair_color(self, a: str, b: str) -> int:
        return self.table[(a, b)]


@dataclass
class ChainStructure:
    """Closed form of the nested Ramsey chain for hypergraph families.

    ``d(n)`` is the colour with c({n} ∪ O) = d(n) for all (k-1)-sets O of
    ``V_n``; ``in_v(n, w)`` decides w ∈ V_n.  ``classes`` maps each colour to
    the finite member set of {n : d(n) = i}, or None when that class is infinite.
    """

    d: Callable[[int], int]
    in_v: Callable[[int, int], bool]
    classes: dict[int, frozenset | None]

    def class_finite(self, i: int) -> bool:
        return self.classes.get(i, frozenset()) is not None


class TypedColoring(LazyColoring):
    def __init__(self, tag: str, r: int, structure: TypedStructure):
        super().__init__(r, 2)
        self.tag = tag
        self.structure = structure
        self._table = np.zeros((len(structure.types), len(structure.types)), dtype=np.int8)
        for i, a in enumerate(structure.types):
            for j, b in enumerate(structure.types):
                self._table[i, j] = structure.pair_color(a.name, b.name)
        self._type_cache = np.zeros(0, dtype=np.int16)

    def spec(self) -> str:
        return self.tag

    def _color(self, e):
        s = self.structure
        return int(self._table[s.type_index(e[0]), s.type_index(e[1])])

    def type_array(self, size: int) -> np.ndarray:
        if len(self._type_cache) < size:
            self._type_cache = np.array([self.structure.type_index(v) for v in range(max(size, 2 * len(self._type_cache)))], dtype=np.int16)
        return self._type_cache[:size]

    def _row(self, v, size):
        out = self._table[self.structure.type_index(v)][self.type_array(size)].astype(np.int8)
        if v < size:
            out[v] = -1
        return out


COUNTEREXAMPLE_B = frozenset(range(0, 4))
COUNTEREXAMPLE_C = frozenset(range(4, 8))
COUNTEREXAMPLE_D = frozenset({8})
COUNTEREXAMPLE_SPECIAL = COUNTEREXAMPLE_B | COUNTEREXAMPLE_C | COUNTEREXAMPLE_D


def make_counterexample() -> TypedColoring:
    """2-colouring with B={0..3}, C={4..7}, D={8}, A={9,10,...}.

    Colour 1 exactly on A x (B ∪ C ∪ D), [B]^2 and [C]^2.
    """

    def index(v: int) -> int:
        if v >= 9:
            return 0
        if v < 4:
            return 1
        if v < 8:
            return 2
        return 3

    types = (
        VertexType("A", start=9, step=1),
        VertexType("B", members=COUNTEREXAMPLE_B),
        VertexType("C", members=COUNTEREXAMPLE_C),
        VertexType("D", members=COUNTEREXAMPLE_D),
    )
    table = {}
    for a in "ABCD":
        for b in "ABCD":
            one = (a == "A") != (b == "A") or (a == b and a in "BC")
            table[(a, b)] = 1 if one else 0
    return TypedColoring("counterexample", 2, TypedStructure(types, table, seat="A", type_index=index))


def make_block_bipartite() -> TypedColoring:
    """Colour 0 inside the even and odd classes, 1 across; the ultrafilter seat is the evens."""
    types = (VertexType("even", start=0, step=2), VertexType("odd", start=1, step=2))
    table = {("even", "even"): 0, ("odd", "odd"): 0, ("even", "odd"): 1}
    return TypedColoring("block-bipartite", 2, TypedStructure(types, table, seat="even", type_index=lambda v: v & 1))


def make_layered(finite_tail: bool = False) -> TypedColoring:
    """Three types X (seat), Y, Z whose double classification splits off Z with a different special colour.

    X-X is colour 0, Y-Y colour 1, X-{Y,Z} colour 1, Y-Z colour 0 and Z-Z colour 1.
    With ``finite_tail`` Z = {0,1,2}, X = odd >= 3 and Y = even >= 4; otherwise
    X, Y, Z are the residues 0, 1, 2 mod 3.
    """
    table = {("X", "X"): 0, ("Y", "Y"): 1, ("Z", "Z"): 1, ("X", "Y"): 1, ("X", "Z"): 1, ("Y", "Z"): 0}
    if finite_tail:
        types = (VertexType("X", start=3, step=2), VertexType("Y", start=4, step=2), VertexType("Z", members=frozenset({0, 1, 2})))
        index = lambda v: 2 if v < 3 else (0 if v & 1 else 1)
        return TypedColoring("layered-finite", 2, TypedStructure(types, table, seat="X", type_index=index))
    types = (VertexType("X", start=0, step=3), VertexType("Y", start=1, step=3), VertexType("Z", start=2, step=3))
    return TypedColoring("layered", 2, TypedStructure(types, table, seat="X", type_index=lambda v: v % 3))


class MinMarkedColoring(LazyColoring):
    """k-uniform: an edge gets colour 1 iff its minimum lies in ``marked``.

    The default marks the odd vertices below 8, so the colour-1 vertex class is
    {1,3,5,7}: the parity class of the minimum, cut off to a finite set.
    """

    tag = "min-marked"

    def __init__(self, k: int = 3, marked: Iterable[int] = (1, 3, 5, 7)):
        super().__init__(2, k)
        self.marked = frozenset(marked)
        self.chain = ChainStructure(
            d=lambda n: 1 if n in self.marked else 0,
            in_v=lambda n, w: w > n,
            classes={0: None, 1: self.marked},
        )

    @property
    def params(self) -> dict:
        return {"k": self.k, "marked": sorted(self.marked)}

    def spec(self) -> str:
        return f"min-marked:{self.k}"

    def _color(self, e):
        return 1 if e[0] in self.marked else 0


class FileColoring(LazyColoring):
    tag = "file"

    def __init__(self, r: int, k: int, n: int, colors: dict[tuple[int, ...], int], source: str = ""):
        super().__init__(r, k, universe=n)
        self.colors = colors
        self.source = source

    @property
    def params(self) -> dict:
        return {"r": self.r, "k": self.k, "n": self.universe}

    def spec(self) -> str:
        return f"file:{self.source}" if self.source else "file"

    def _color(self, e):
        return self.colors[e]

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "k": self.k,
            "n": self.universe,
            "edges": [list(e) + [c] for e, c in sorted(self.colors.items())],
        }

    def dumps(self) -> str:
        lines = [f"{self.r} {self.k} {self.universe}"]
        lines += [" ".join(map(str, e)) + f" {c}" for e, c in sorted(self.colors.items())]
        return "\n".join(lines) + "\n"


def parse_coloring_text(text: str, source: str = "") -> FileColoring:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ColoringFormatError("empty coloring file")
    try:
        r, k, n = map(int, lines[0])
    except ValueError as exc:
        raise ColoringFormatError(f"bad header {lines[0]!r}; expected 'r k n'") from exc
    expected = list(itertools.combinations(range(n), k))
    body = lines[1:]
    if len(body) != len(expected):
        raise ColoringFormatError(f"expected {len(expected)} edge lines, found {len(body)}")
    colors = {}
    for lineno, (want, fields) in enumerate(zip(expected, body), start=2):
        try:
            nums = list(map(int, fields))
        except ValueError as exc:
            raise ColoringFormatError(f"line {lineno}: non-integer field") from exc
        if len(nums) != k + 1:
            raise ColoringFormatError(f"line {lineno}: expected {k + 1} fields")
        if tuple(nums[:k]) != want:
            raise ColoringFormatError(f"line {lineno}: expected edge {want}, got {tuple(nums[:k])}")
        if not 0 <= nums[k] < r:
            raise ColoringFormatError(f"line {lineno}: colour {nums[k]} out of range")
        colors[want] = nums[k]
    return FileColoring(r, k, n, colors, source)


def load_coloring_file(path: str) -> FileColoring:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return coloring_from_json(json.loads(text), source=path)
    return parse_coloring_text(text, source=path)


def coloring_from_json(data: dict, source: str = "") -> FileColoring:
    try:
        r, k, n = data["r"], data["k"], data["n"]
        colors = {tuple(e[:-1]): e[-1] for e in data["edges"]}
    except (KeyError, TypeError) as exc:
        raise ColoringFormatError("JSON coloring needs r, k, n and edges") from exc
    text = f"{r} {k} {n}\n" + "".join(
        " ".join(map(str, e)) + f" {colors.get(e, -1)}\n" for e in itertools.combinations(range(n), k)
    )
    return parse_coloring_text(text, source)


def finite_coloring(n: int, colors: dict[tuple[int, int], int] | Callable[[int, int], int], r: int = 2) -> FileColoring:
    """Explicit 2-uniform colouring of K_n, from a dict or a function of (u, v) with u < v."""
    table = {}
    for e in itertools.combinations(range(n), 2):
        table[e] = colors[e] if isinstance(colors, dict) else colors(*e)
    return FileColoring(r, 2, n, table)


FAMILIES = ("constant", "seeded-random", "block-bipartite", "counterexample", "min-marked", "layered", "file")


def make_family(tag: str, **params) -> LazyColoring:
    if tag == "constant":
        return ConstantColoring(params.get("color", 0), params.get("r"), params.get("k", 2))
    if tag in ("seeded-random", "random"):
        return SeededRandomColoring(params.get("r", 2), params.get("k", 2), params.get("seed", 0))
    if tag == "block-bipartite":
        return make_block_bipartite()
    if tag == "counterexample":
        return make_counterexample()
    if tag == "layered":
        return make_layered(bool(params.get("finite", 0)))
    if tag == "min-marked":
        return MinMarkedColoring(params.get("k", 3), params.get("marked", (1, 3, 5, 7)))
    if tag == "file":
        return load_coloring_file(params["path"])
    raise ValueError(f"unknown coloring family {tag!r}")


def parse_coloring_spec(spec: str, defaults: dict | None = None) -> LazyColoring:
    """Parse ``family:params`` as used on the command line.

    ``constant:0``, ``constant:1,r=2,k=3``, ``seeded-random:2,2,42``,
    ``seeded-random:r=3,seed=7``, ``counterexample``, ``block-bipartite``,
    ``min-marked:3``, ``layered``, ``layered:1``, ``file:path/to/coloring.txt``.
    ``defaults`` fills parameters the spec leaves unset.
    """
    tag, _, rest = spec.partition(":")
    if tag == "file":
        return make_family("file", path=rest)
    positional: list[int] = []
    named: dict[str, int] = {}
    for item in filter(None, rest.split(",")):
        if "=" in item:
            key, val = item.split("=", 1)
            named[key.strip()] = int(val)
        else:
            positional.append(int(item))
    order = {
        "constant": ("color", "r", "k"),
        "seeded-random": ("r", "k", "seed"),
        "random": ("r", "k", "seed"),
        "min-marked": ("k",),
        "layered": ("finite",),
    }.get(tag, ())
    if len(positional) > len(order):
        raise ValueError(f"too many parameters for {tag!r}")
    params = {key: val for key, val in (defaults or {}).items() if val is not None}
    params.update(zip(order, positional))
    params.update(named)
    return make_family(tag, **params)


# ---------------------------------------------------------------------------
# vertex classes


class VertexClass:
    """A named vertex set.  ``finite()`` is True/False when certified, None when unknown."""

    name = "class"

    def __contains__(self, v: int) -> bool:
        raise NotImplementedError

    def mask(self, size: int) -> np.ndarray:
        return np.fromiter((v in self for v in range(size)), dtype=bool, count=size)

    def below(self, size: int) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.mask(size))]

    def finite(self) -> bool | None:
        return None

    def minus(self, removed: Iterable[int]) -> "VertexClass":
        return Minus(self, frozenset(removed))

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class AllVertices(VertexClass):
    name = "all"

    def __init__(self, universe: int | None = None):
        self.universe = universe

    def __contains__(self, v):
        return v >= 0 and (self.universe is None or v < self.universe)

    def mask(self, size):
        m = np.ones(size, dtype=bool)
        if self.universe is not None:
            m[self.universe:] = False
        return m

    def finite(self):
        return self.universe is not None


ALL = AllVertices()


class FiniteClass(VertexClass):
    def __init__(self, vertices: Iterable[int], name: str = "finite"):
        self.vertices = frozenset(vertices)
        self.name = name

    def __contains__(self, v):
        return v in self.vertices

    def mask(self, size):
        m = np.zeros(size, dtype=bool)
        idx = [v for v in self.vertices if v < size]
        m[idx] = True
        return m

    def finite(self):
        return True

    def minus(self, removed):
        return FiniteClass(self.vertices - frozenset(removed), self.name)


class TypeClass(VertexClass):
    """Union of types of a :class:`TypedStructure`, minus finitely many vertices."""

    def __init__(self, structure: TypedStructure, names: Iterable[str], removed: Iterable[int] = ()):
        self.structure = structure
        self.names = frozenset(names)
        self.removed = frozenset(removed)
        self.name = "+".join(t.name for t in structure.types if t.name in self.names) or "empty"

    def types(self) -> list[VertexType]:
        return [t for t in self.structure.types if t.name in self.names]

    def __contains__(self, v):
        return v >= 0 and v not in self.removed and self.structure.type_of(v).name in self.names

    def finite(self):
        return all(t.finite for t in self.types())

    def members(self) -> frozenset:
        """All members; only valid for finite classes."""
        assert self.finite()
        return frozenset().union(*(t.members for t in self.types())) - self.removed

    def minus(self, removed):
        return TypeClass(self.structure, self.names, self.removed | frozenset(removed))


class MaskClass(VertexClass):
    """Membership known on [0, len(mask)) only; used for density classes."""

    def __init__(self, mask: np.ndarray, name: str = "mask"):
        self._mask = np.asarray(mask, dtype=bool)
        self._mask.setflags(write=False)
        self.name = name

    def __contains__(self, v):
        return 0 <= v < len(self._mask) and bool(self._mask[v])

    def mask(self, size):
        out = np.zeros(size, dtype=bool)
        n = min(size, len(self._mask))
        out[:n] = self._mask[:n]
        return out

    def minus(self, removed):
        m = self._mask.copy()
        for v in removed:
            if 0 <= v < len(m):
                m[v] = False
        return MaskClass(m, self.name)


class PredicateClass(VertexClass):
    def __init__(self, fn: Callable[[int], bool], name: str = "predicate"):
        self.fn = fn
        self.name = name

    def __contains__(self, v):
        return v >= 0 and bool(self.fn(v))


class Minus(VertexClass):
    def __init__(self, base: VertexClass, removed: frozenset):
        self.base = base
        self.removed = removed
        self.name = f"{base.name}-minus-{len(removed)}"

    def __contains__(self, v):
        return v not in self.removed and v in self.base

    def mask(self, size):
        m = self.base.mask(size).copy()
        idx = [v for v in self.removed if 0 <= v < size]
        m[idx] = False
        return m

    def finite(self):
        return self.base.finite()

    def minus(self, removed):
        return Minus(self.base, self.removed | frozenset(removed))


def type_class(coloring: LazyColoring, names: Iterable[str]) -> TypeClass:
    if coloring.structure is None:
        raise ValueError(f"{coloring.tag} has no vertex types")
    return TypeClass(coloring.structure, names)


# ---------------------------------------------------------------------------
# the oracle


Constraint = tuple  # (frozenset of k-1 vertices, colour)


def normalize_constraints(constraints: Iterable) -> tuple[tuple[frozenset, int], ...]:
    out = []
    for item, color in constraints:
        s = frozenset([item]) if isinstance(item, (int, np.integer)) else frozenset(item)
        out.append((s, int(color)))
    return tuple(out)


@dataclass(frozen=True)
class Query:
    """Ask for w in ``base`` \\ ``exclude`` with c(S ∪ {w}) = i for every (S, i) in ``constraints``."""

    base: VertexClass = ALL
    constraints: tuple = ()
    exclude: frozenset = frozenset()
    horizon: int | None = None

    def to_json(self) -> dict:
        return {
            "baseClass": self.base.name,
            "constraints": [[sorted(int(x) for x in s), c] for s, c in self.constraints],
            "exclude": sorted(int(v) for v in self.exclude)[:50],
            "excludeSize": len(self.exclude),
            "horizon": self.horizon,
        }


@dataclass
class LargenessOracle:
    """Finitary stand-in for "this set is infinite".

    ``mode`` is ``exact`` (closed-form answers for typed families) or
    ``scan`` (test 0, 1, 2, ... up to ``horizon``).  Exact mode falls back
    to scanning for classes it cannot describe in closed form.
    """

    coloring: LazyColoring
    mode: str = "scan"
    horizon: int = 5000
    calls: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.mode not in ("exact", "scan"):
            raise ValueError(f"unknown oracle mode {self.mode!r}")
        if self.mode == "exact" and self.coloring.structure is None and self.coloring.chain is None:
            raise ValueError(f"{self.coloring.tag} has no exact oracle")
        if self.coloring.universe is not None:
            self.horizon = min(self.horizon, self.coloring.universe)

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    def fresh(self, base: VertexClass = ALL, constraints: Iterable = (), exclude: Iterable[int] = (), horizon: int | None = None) -> int:
        return self.fresh_vertex(Query(base, normalize_constraints(constraints), frozenset(exclude), horizon))

    def fresh_vertex(self, query: Query) -> int:
        self.calls += 1
        constraints = normalize_constraints(query.constraints)
        if constraints is not query.constraints:
            query = Query(query.base, constraints, query.exclude, query.horizon)
        if self.exact and self._exact_capable(query):
            return self._exact(query)
        return self._scan(query)

    def _exact_capable(self, q: Query) -> bool:
        s = self.coloring.structure
        if s is None or self.coloring.k != 2:
            return False
        return isinstance(q.base, (AllVertices, TypeClass, FiniteClass))

    def _exact(self, q: Query) -> int:
        s = self.coloring.structure
        col = self.coloring
        fixed = set()
        for S, _ in q.constraints:
            fixed |= S
        avoid = set(q.exclude) | fixed
        if isinstance(q.base, FiniteClass):
            for v in sorted(q.base.vertices):
                if v not in avoid and all(col.color_of((u, v)) == i for S, i in q.constraints for u in S):
                    return v
            raise Exhausted("no admissible vertex in finite base class", q, certified_empty=True)
        if isinstance(q.base, TypeClass):
            names = q.base.names
            avoid |= q.base.removed
        else:
            names = {t.name for t in s.types}
        best = None
        for t in s.types:
            if t.name not in names:
                continue
            if any(s.pair_color(t.name, s.type_of(u).name) != i for S, i in q.constraints for u in S):
                continue
            v = t.first_avoiding(avoid)
            if v is not None and (best is None or v < best):
                best = v
        if best is None:
            raise Exhausted("admissible set is empty", q, certified_empty=True)
        return best

    def _scan(self, q: Query) -> int:
        H = q.horizon or self.horizon
        if self.coloring.universe is not None:
            H = min(H, self.coloring.universe)
        col = self.coloring
        if col.k == 2 and all(len(S) == 1 for S, _ in q.constraints):
            m = q.base.mask(H).copy()
            for S, i in q.constraints:
                (u,) = S
                m &= col.row(u, H) == i
                if u < H:
                    m[u] = False
            idx = [v for v in q.exclude if 0 <= v < H]
            m[idx] = False
            hits = np.flatnonzero(m)
            if len(hits):
                return int(hits[0])
            raise Exhausted(f"no admissible vertex below horizon {H}", q)
        fixed = set()
        for S, _ in q.constraints:
            fixed |= S
        for v in range(H):
            if v in q.exclude or v in fixed or v not in q.base:
                continue
            if all(col._color(tuple(sorted(S | {v}))) == i for S, i in q.constraints):
                return v
        raise Exhausted(f"no admissible vertex below horizon {H}", q)

    def infinite(self, cls: VertexClass) -> bool | None:
        """Certified infiniteness of a class, or None if this oracle cannot tell."""
        fin = cls.finite()
        return None if fin is None else not fin


def make_oracle(coloring: LazyColoring, horizon: int | None = None, mode: str | None = None, prefix: int = 0) -> LargenessOracle:
    if mode is None:
        mode = "exact" if coloring.structure is not None or coloring.chain is not None else "scan"
    return LargenessOracle(coloring, mode, horizon if horizon is not None else default_horizon(prefix))


def joint_neighborhood_scan(coloring: LazyColoring, F: Iterable[int], i: int, size: int) -> list[int]:
    """Independent brute-force listing of N[F,i] ∩ [0,size) for tests."""
    F = list(F)
    return [w for w in range(size) if w not in F and all(coloring.color_of((v, w)) == i for v in F)]
