"""Tight-path and tight-cycle partitions of k-uniform hypergraph colourings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .classifier import exact_classification
from .graphcore import ALL, Exhausted, LargenessOracle, LazyColoring
from .paths import PartitionResult, TightPiece


@dataclass
class RamseyCertificate:
    homogeneous_set: tuple[int, ...]
    color: int
    arity: int
    source: str = "derived"

    def verify(self, d: Callable[[tuple[int, ...]], int]) -> bool:
        return all(d(x) == self.color for x in itertools.combinations(sorted(self.homogeneous_set), self.arity))


def _pigeonhole(cands: list[int], arity: int, d: Callable[[tuple], int]) -> tuple[list[int], int | None]:
    """Iterated pigeonhole: returns a homogeneous list and its colour (None if too small to say)."""
    if not cands:
        return [], None
    if arity == 1:
        groups: dict[int, list[int]] = {}
        for v in cands:
            groups.setdefault(d((v,)), []).append(v)
        color = max(sorted(groups), key=lambda c: len(groups[c]))
        return groups[color], color
    xs: list[int] = []
    cols: list[int | None] = []
    rest = list(cands)
    while rest:
        x = rest.pop(0)
        if len(rest) < arity - 1:
            xs.append(x)
            cols.append(None)
            xs.extend(rest)
            cols.extend([None] * len(rest))
            break
        sub, col = _pigeonhole(rest, arity - 1, lambda y, x=x: d(tuple(sorted((x,) + y))))
        xs.append(x)
        cols.append(col)
        rest = sub
    known = sorted({c for c in cols if c is not None})
    if not known:
        return xs[:arity - 1], None
    best = max(known, key=lambda c: sum(1 for q in cols if q == c))
    # trailing elements with no recorded colour can join any class; keep at most arity-1 of them
    tail = [x for x, q in zip(xs, cols) if q is None][: arity - 1]
    return [x for x, q in zip(xs, cols) if q == best] + tail, best


def _exhaustive(cands: list[int], arity: int, d: Callable[[tuple], int], m: int) -> tuple[list[int], int] | None:
    colors = sorted({d(x) for x in itertools.combinations(cands, arity)})
    for color in colors:
        chosen: list[int] = []

        def extend(start: int) -> bool:
            if len(chosen) == m:
                return True
            for idx in range(start, len(cands)):
                v = cands[idx]
                if all(d(tuple(sorted(s + (v,)))) == color for s in itertools.combinations(chosen, arity - 1)):
                    chosen.append(v)
                    if extend(idx + 1):
                        return True
                    chosen.pop()
            return False

        if extend(0):
            return list(chosen), color
    return None


def ramsey_extract(
    d: Callable[[tuple[int, ...]], int],
    arity: int,
    candidates: Sequence[int],
    m: int,
    exhaustive_limit: int = 48,
) -> RamseyCertificate:
    """Find an m-element set homogeneous for the arity-ary colouring ``d``.

    Iterated pigeonhole first; if that falls short and the candidate list is
    small, an exhaustive backtracking search.
    """
    if m < 1:
        raise ValueError("target size must be positive")
    cands = sorted(dict.fromkeys(int(v) for v in candidates))
    if len(cands) < max(m, arity):
        raise Exhausted(f"need at least {max(m, arity)} candidates, have {len(cands)}")
    if m <= arity:
        chosen = cands[:max(m, arity)]
        color = d(tuple(chosen[:arity]))
        return RamseyCertificate(tuple(chosen[:m]) if m == arity else tuple(chosen[:arity]), color, arity)
    found, color = _pigeonhole(cands, arity, d)
    if color is not None and len(found) >= m:
        return RamseyCertificate(tuple(sorted(found[:m])), color, arity)
    if len(cands) <= exhaustive_limit:
        hit = _exhaustive(cands, arity, d, m)
        if hit is not None:
            return RamseyCertificate(tuple(hit[0]), hit[1], arity, "derived/exhaustive")
    raise Exhausted(f"no homogeneous set of size {m} among {len(cands)} candidates")


# ---------------------------------------------------------------------------
# tight paths


@dataclass
class PerfectFamily:
    """Disjoint tight paths P_t (t ∈ T) and a reservoir sample A.

    The reservoir is lazy: only the sampled members are stored, and every new
    sample is drawn subject to condition (b) against the current tails.
    """

    coloring: LazyColoring
    T: list[int] = field(default_factory=list)
    paths: dict[int, list[int]] = field(default_factory=dict)
    reservoir: list[int] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.coloring.k

    def tails(self):
        for t in self.T:
            p = self.paths[t]
            for i in range(1, self.k):
                if len(p) >= i:
                    yield t, frozenset(p[-i:]), i

    def sample_constraints(self) -> list[tuple[frozenset, int]]:
        """Constraints a new reservoir member w must satisfy: c(x ∪ y' ∪ {w}) = t."""
        out = []
        for t, x, i in self.tails():
            for rest in itertools.combinations(self.reservoir, self.k - i - 1):
                out.append((x | frozenset(rest), t))
        return out

    def check_b(self) -> list[tuple]:
        """All violations of condition (b) against the current reservoir sample."""
        bad = []
        for t, x, i in self.tails():
            for y in itertools.combinations(self.reservoir, self.k - i):
                if self.coloring.color_of(x | set(y)) != t:
                    bad.append((t, tuple(sorted(x)), y))
        return bad

    def used(self) -> set[int]:
        out = set(self.reservoir)
        for p in self.paths.values():
            out.update(p)
        return out


def tight_path_partition(
    coloring: LazyColoring,
    prefix: int,
    oracle: LargenessOracle,
    target: int | None = None,
    check: bool = True,
) -> PartitionResult:
    """At most r tight paths of distinct colours covering [0,prefix).

    Each step takes the least uncovered v, extracts a homogeneous set of size
    ``target`` (default k-1) from the reservoir for d(x) = c(x ∪ {v}) and
    either opens a new colour or appends (v_1, ..., v_{k-1}, v) to P_{t'}.
    """
    k = coloring.k
    if k < 2:
        raise ValueError("tight paths need k >= 2")
    m = target if target is not None else k - 1
    if m < k - 1:
        raise ValueError("target size must be at least k-1")
    fam = PerfectFamily(coloring)
    covered: set[int] = set()
    steps = 0
    v = 0
    while True:
        while v in covered:
            v += 1
        if v >= prefix:
            break
        if v in fam.reservoir:
            fam.reservoir.remove(v)

        def d(x, v=v):
            return coloring.color_of(x + (v,))

        cert = None
        while cert is None:
            while len(fam.reservoir) < m:
                fam.reservoir.append(oracle.fresh(ALL, fam.sample_constraints(), covered | set(fam.reservoir) | {v}))
            try:
                cert = ramsey_extract(d, k - 1, fam.reservoir, m)
            except Exhausted:
                if len(fam.reservoir) >= 4 * m + 8:
                    raise
                fam.reservoir.append(oracle.fresh(ALL, fam.sample_constraints(), covered | set(fam.reservoir) | {v}))
        B = list(cert.homogeneous_set)
        t = cert.color
        if t not in fam.T:
            fam.T.append(t)
            fam.paths[t] = [v]
            fam.reservoir = B
            covered.add(v)
        else:
            head, fam.reservoir = B[: k - 1], B[k - 1:]
            fam.paths[t].extend(head + [v])
            covered.update(head)
            covered.add(v)
        steps += 1
        if check:
            bad = fam.check_b()
            assert not bad, f"perfect-family invariant broken: {bad[:3]}"
    pieces = [TightPiece(tuple(fam.paths[t]), t, k, "path") for t in sorted(fam.T)]
    return PartitionResult(pieces, prefix=prefix, distinct_colors=True, meta={"mode": "tight", "steps": steps, "perfectSet": sorted(fam.T)})


# ---------------------------------------------------------------------------
# tight cycles and two-way windows


class _Filler:
    """Greedy slot filling with a window check at every placement."""

    def __init__(self, coloring: LazyColoring, color: int, horizon: int, used: set[int], cyclic: bool = False):
        self.coloring = coloring
        self.color = color
        self.horizon = horizon
        self.used = used
        self.cyclic = cyclic

    def _windows_ok(self, seq: list, pos: int) -> bool:
        k, L = self.coloring.k, len(seq)
        for s in range(pos - k + 1, pos + 1):
            if self.cyclic:
                idx = [(s + j) % L for j in range(k)]
                if L < k:
                    return True
            else:
                if s < 0 or s + k > L:
                    continue
                idx = list(range(s, s + k))
            vals = [seq[i] for i in idx]
            if any(x is None for x in vals):
                continue
            if self.coloring.color_of(vals) != self.color:
                return False
        return True

    def fill(self, seq: list, allowed: Callable[[int], bool]) -> list[int]:
        for pos, val in enumerate(seq):
            if val is not None:
                continue
            for w in range(self.horizon):
                if w in self.used or not allowed(w):
                    continue
                seq[pos] = w
                if self._windows_ok(seq, pos):
                    self.used.add(w)
                    break
                seq[pos] = None
            else:
                raise Exhausted(f"no vertex below {self.horizon} fits slot {pos} of a colour-{self.color} tight piece")
        return seq


def vertex_classes(coloring: LazyColoring, prefix: int, oracle: LargenessOracle, sample: int = 24) -> dict[int, int]:
    """d(n) for n < prefix: closed form when available, else per-vertex Ramsey extraction."""
    k = coloring.k
    if oracle.exact and coloring.chain is not None:
        return {n: coloring.chain.d(n) for n in range(prefix)}
    if oracle.exact and coloring.structure is not None and k == 2:
        cl = exact_classification(coloring)
        return {n: cl.d(n) for n in range(prefix)}
    out = {}
    for n in range(prefix):
        cands = [w for w in range(n + 1, min(oracle.horizon, n + 1 + sample))]
        if len(cands) < k - 1:
            raise Exhausted(f"horizon too small to classify vertex {n}")
        _, color = _pigeonhole(cands, k - 1, lambda x, n=n: coloring.color_of((n,) + x))
        out[n] = color if color is not None else coloring.color_of((n,) + tuple(cands[: k - 1]))
    return out


def tight_cycle_partition(coloring: LazyColoring, prefix: int, oracle: LargenessOracle) -> PartitionResult:
    """Tight cycles for the finite vertex classes, two-way windows for the infinite ones.

    Finite classes are only recognised with an exact oracle; under a scan
    oracle every class is treated as infinite and ``meta['downgraded']`` is set.
    """
    k, r = coloring.k, coloring.r
    typed = oracle.exact and coloring.structure is not None and k == 2
    exact = oracle.exact and coloring.chain is not None or typed
    if prefix <= 0:
        return PartitionResult([], prefix=0, distinct_colors=True, meta={"mode": "tightcycle"})
    d = vertex_classes(coloring, prefix, oracle)
    chain = coloring.chain if oracle.exact else None
    in_v = chain.in_v if chain else (lambda n, w: True)
    if chain:
        K = [i for i in range(r) if chain.class_finite(i)]
        finite_members = {i: sorted(chain.classes.get(i) or ()) for i in K}
    elif typed:
        cl = exact_classification(coloring)
        K = [i for i in range(r) if cl.class_of(i).finite()]
        finite_members = {i: sorted(cl.class_of(i).members()) for i in K}
    else:
        K, finite_members = [], {}
    used: set[int] = set()
    pieces: list[TightPiece] = []
    for i in K:
        xs = [x for x in finite_members[i] if x not in used]
        if not xs:
            continue
        used.update(xs)
        seq: list = []
        for x in xs:
            seq.append(x)
            seq.extend([None] * (k - 1))
        filler = _Filler(coloring, i, oracle.horizon, used, cyclic=True)
        filler.fill(seq, lambda w: all(in_v(x, w) for x in xs))
        pieces.append(TightPiece(tuple(seq), i, k, "cycle"))

    infinite = [i for i in range(r) if i not in K]
    windows: dict[int, dict] = {i: {"seq": [], "left_x": None, "right_x": None, "nleft": 0, "nright": 0, "offset": 0} for i in infinite}

    def next_x(i):
        for v in range(prefix):
            if v not in used and d[v] == i:
                return v
        return None

    progress = True
    while progress:
        progress = False
        for i in infinite:
            x = next_x(i)
            if x is None:
                continue
            progress = True
            w = windows[i]
            used.add(x)
            filler = _Filler(coloring, i, oracle.horizon, used)
            if not w["seq"]:
                w["seq"] = [x]
                w["left_x"] = w["right_x"] = x
                continue
            if w["nright"] <= w["nleft"]:
                prev = w["right_x"]
                seq = w["seq"] + [None] * (k - 1) + [x]
                filler.fill(seq, lambda u, a=prev, b=x: in_v(a, u) and in_v(b, u))
                w["seq"], w["right_x"] = seq, x
                w["nright"] += 1
            else:
                prev = w["left_x"]
                seq = [x] + [None] * (k - 1) + w["seq"]
                filler.fill(seq, lambda u, a=x, b=prev: in_v(a, u) and in_v(b, u))
                w["seq"], w["left_x"] = seq, x
                w["nleft"] += 1
                w["offset"] -= k
    for i in infinite:
        w = windows[i]
        if w["seq"]:
            pieces.append(TightPiece(tuple(w["seq"]), i, k, "two-way-window", w["offset"]))
    return PartitionResult(
        pieces,
        prefix=prefix,
        distinct_colors=True,
        meta={"mode": "tightcycle", "finiteClasses": K, "downgraded": not exact},
    )
