"""Exhaustive searches on finite 2-coloured complete graphs.

Vertex sets are bitmasks over the positions of ``vertices``; everything here
is exact and deterministic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from ..graphcore import COUNTEREXAMPLE_B, COUNTEREXAMPLE_C, COUNTEREXAMPLE_D, LazyColoring, make_counterexample

ColorFn = Callable[[int, int], int]


class FalsificationAlarm(AssertionError):
    """A search that a published theorem guarantees to succeed came back empty."""


def _color_fn(coloring) -> ColorFn:
    if isinstance(coloring, LazyColoring):
        return lambda u, v: coloring.color_of((u, v))
    return coloring


def adjacency(vertices: Sequence[int], coloring, color: int) -> list[int]:
    """adj[i] = bitmask of positions j with c(v_i, v_j) = color."""
    c = _color_fn(coloring)
    n = len(vertices)
    adj = [0] * n
    for i, j in itertools.combinations(range(n), 2):
        if c(vertices[i], vertices[j]) == color:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


def hamiltonian_endpoints(adj: list[int]) -> list[int]:
    """hp[mask] = bitmask of possible last vertices of a Hamiltonian path of mask (0 if none)."""
    n = len(adj)
    hp = [0] * (1 << n)
    for u in range(n):
        hp[1 << u] = 1 << u
    for mask in range(1, 1 << n):
        ends = hp[mask]
        if not ends:
            continue
        for u in range(n):
            bit = 1 << u
            if not mask & bit and ends & adj[u]:
                hp[mask | bit] |= bit
    return hp


def path_cover_numbers(hp: list[int]) -> list[int]:
    """pc[mask] = least number of disjoint paths covering mask."""
    size = len(hp)
    pc = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        rest = mask ^ low
        best = size
        sub = rest
        while True:
            part = sub | low
            if hp[part]:
                cand = 1 + pc[mask ^ part]
                if cand < best:
                    best = cand
            if not sub:
                break
            sub = (sub - 1) & rest
        pc[mask] = best
    return pc


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def power_order(mask: int, adj: list[int], k: int) -> list[int] | None:
    """Lexicographically least ordering of ``mask`` whose pairs at distance <= k are edges of ``adj``."""
    if not mask:
        return []
    failed: set[tuple[int, tuple[int, ...]]] = set()

    def extend(remaining: int, seq: list[int]) -> bool:
        if not remaining:
            return True
        tail = tuple(seq[-k:])
        if (remaining, tail) in failed:
            return False
        allowed = remaining
        for t in tail:
            allowed &= adj[t]
        for u in _bits(allowed):
            seq.append(u)
            if extend(remaining ^ (1 << u), seq):
                return True
            seq.pop()
        failed.add((remaining, tail))
        return False

    seq: list[int] = []
    return seq if extend(mask, seq) else None


def _split_paths(mask: int, count: int, hp: list[int], pc: list[int], adj: list[int]) -> list[list[int]]:
    out = []
    while mask:
        low = mask & -mask
        rest = mask ^ low
        chosen = None
        for sub in sorted(_submasks(rest)):
            part = sub | low
            if hp[part] and pc[mask ^ part] == count - 1:
                chosen = part
                break
        assert chosen is not None
        out.append(power_order(chosen, adj, 1))
        mask ^= chosen
        count -= 1
    return out


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if not sub:
            return
        sub = (sub - 1) & mask


@dataclass
class PokrovskiySolution:
    paths: list[tuple[int, ...]]  # colour ``path_color`` paths, nonempty only
    power: tuple[int, ...]  # colour ``power_color`` k-th power
    k: int
    path_color: int
    power_color: int

    def to_json(self) -> dict:
        return {
            "paths": [list(p) for p in self.paths],
            "power": list(self.power),
            "k": self.k,
            "pathColor": self.path_color,
            "powerColor": self.power_color,
        }


def pokrovskiy_finite(vertices: Sequence[int], coloring, k: int = 2, power_color: int = 0) -> PokrovskiySolution:
    """Cover ``vertices`` by <= k paths of the other colour and one k-th power of ``power_color``.

    Among all solutions, the one with the fewest paths wins, then the power
    whose position bitmask is least; orderings are lexicographically least.
    """
    vertices = list(vertices)
    path_color = 1 - power_color
    n = len(vertices)
    if n > 20:
        raise ValueError("exhaustive search is limited to 20 vertices")
    full = (1 << n) - 1
    adj_path = adjacency(vertices, coloring, path_color)
    adj_pow = adjacency(vertices, coloring, power_color)
    hp = hamiltonian_endpoints(adj_path)
    pc = path_cover_numbers(hp)
    for p in range(k + 1):
        for S in range(full + 1):
            if S & ~full or pc[full ^ S] != p:
                continue
            order = power_order(S, adj_pow, k)
            if order is None:
                continue
            paths = _split_paths(full ^ S, p, hp, pc, adj_path)
            return PokrovskiySolution(
                [tuple(vertices[i] for i in path) for path in paths],
                tuple(vertices[i] for i in order),
                k,
                path_color,
                power_color,
            )
    raise FalsificationAlarm(f"no cover of {vertices} by {k} paths of colour {path_color} and a power of colour {power_color}")


def maximal_two_path_partition(vertices: Sequence[int], coloring) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Disjoint paths P0 (colour 0) and P1 (colour 1) with |P0|+|P1| maximal; the maximum is always n."""
    vertices = list(vertices)
    n = len(vertices)
    full = (1 << n) - 1
    adj0, adj1 = adjacency(vertices, coloring, 0), adjacency(vertices, coloring, 1)
    ham0, ham1 = hamiltonian_endpoints(adj0), hamiltonian_endpoints(adj1)
    for S in range(full, -1, -1):
        rest = full ^ S
        if (S == 0 or ham0[S]) and (rest == 0 or ham1[rest]):
            p0 = power_order(S, adj0, 1)
            p1 = power_order(rest, adj1, 1)
            return tuple(vertices[i] for i in p0), tuple(vertices[i] for i in p1)
    best = max(
        bin(a).count("1") + bin(b).count("1")
        for a in range(full + 1)
        if a == 0 or ham0[a]
        for b in _submasks(full ^ a)
        if b == 0 or ham1[b]
    )
    raise FalsificationAlarm(f"two paths cover only {best} of {n} vertices")


# ---------------------------------------------------------------------------
# sweeps


def _edge_coloring_fn(n: int, bits: int) -> ColorFn:
    index = {e: i for i, e in enumerate(itertools.combinations(range(n), 2))}

    def c(u, v):
        return bits >> index[(min(u, v), max(u, v))] & 1

    return c


def sweep_pokrovskiy(n: int, k: int = 2, shard: int = 0, shards: int = 1, samples: int | None = None, seed: int = 0) -> dict:
    """Run the search on every 2-colouring of K_n (or on ``samples`` seeded ones).

    ``shard``/``shards`` split the instance list into independent slices.
    """
    m = n * (n - 1) // 2
    if samples is None:
        instances = range(shard, 1 << m, shards)
    else:
        rng = random.Random(seed)
        instances = [rng.getrandbits(m) for _ in range(samples)][shard::shards]
    checked = alarms = 0
    failures = []
    for bits in instances:
        checked += 1
        try:
            pokrovskiy_finite(range(n), _edge_coloring_fn(n, bits), k)
        except FalsificationAlarm:
            alarms += 1
            failures.append(bits)
    return {"n": n, "k": k, "checked": checked, "alarms": alarms, "failures": failures[:20], "shard": shard, "shards": shards}


# ---------------------------------------------------------------------------
# the sharpness example


def monochromatic_squares(vertices: Sequence[int], c: ColorFn, color: int) -> dict[int, tuple[int, ...]]:
    """Every vertex set (bitmask over ``vertices``) spanned by a ``color`` path-square, with one witness ordering."""
    adj = adjacency(vertices, c, color)
    found: dict[int, tuple[int, ...]] = {0: ()}

    def grow(mask: int, seq: list[int]):
        if mask not in found:
            found[mask] = tuple(vertices[i] for i in seq)
        allowed = ~mask & ((1 << len(vertices)) - 1)
        for t in seq[-2:]:
            allowed &= adj[t]
        for u in _bits(allowed):
            seq.append(u)
            grow(mask | 1 << u, seq)
            seq.pop()

    for u in range(len(vertices)):
        grow(1 << u, [u])
    return found


def counterexample_check(prefix: int = 30, max_len: int = 3) -> dict:
    """Machine-check the finite core of the three-squares lower bound."""
    coloring = make_counterexample()
    c = lambda u, v: coloring.color_of((u, v))
    special = sorted(COUNTEREXAMPLE_B | COUNTEREXAMPLE_C | COUNTEREXAMPLE_D)
    full = (1 << len(special)) - 1
    pos = {v: i for i, v in enumerate(special)}
    squares = {col: monochromatic_squares(special, c, col) for col in (0, 1)}
    masks = set(squares[0]) | set(squares[1])
    two_cover = next(((a, b) for a in masks for b in masks if a | b == full and not a & b), None)
    # a 1-square that also uses A-vertices meets B∪C∪D in a 1-path, so test 1-paths too
    hp1 = hamiltonian_endpoints(adjacency(special, c, 1))
    pieces = set(squares[0]) | {m for m in range(full + 1) if m == 0 or hp1[m]}
    path_cover = any(full ^ a in pieces for a in pieces)

    bmask = sum(1 << pos[v] for v in COUNTEREXAMPLE_B)
    cmask = sum(1 << pos[v] for v in COUNTEREXAMPLE_C)
    dmask = sum(1 << pos[v] for v in COUNTEREXAMPLE_D)
    pop = lambda m: bin(m).count("1")
    bound_violations = []
    max_zero_cover = 0
    for mask, seq in squares[0].items():
        limit = 2 if mask & dmask else 1
        if pop(mask & bmask) > limit or pop(mask & cmask) > limit:
            bound_violations.append(list(seq))
        max_zero_cover = max(max_zero_cover, pop(mask))

    # mixed squares on a prefix: every short square meeting A and B∪C∪D has colour 1
    special_set = set(special)
    mixed_bad = []
    mixed_count = 0
    for col in (0, 1):
        adj = adjacency(list(range(prefix)), c, col)

        def walk(seq: list[int], mask: int):
            nonlocal mixed_count
            if len(seq) >= 2:
                has_a = any(v not in special_set for v in seq)
                has_s = any(v in special_set for v in seq)
                if has_a and has_s:
                    mixed_count += 1
                    if col != 1:
                        mixed_bad.append(list(seq))
            if len(seq) == max_len:
                return
            allowed = ~mask & ((1 << prefix) - 1)
            for t in seq[-2:]:
                allowed &= adj[t]
            for u in _bits(allowed):
                walk(seq + [u], mask | 1 << u)

        for u in range(prefix):
            walk([u], 1 << u)

    return {
        "bSize": len(COUNTEREXAMPLE_B),
        "cSize": len(COUNTEREXAMPLE_C),
        "dSize": len(COUNTEREXAMPLE_D),
        "zeroSquares": len(squares[0]) - 1,
        "oneSquares": len(squares[1]) - 1,
        "twoSquareCover": two_cover is not None,
        "twoPieceCoverWithOnePaths": path_cover,
        "twoSquareWitness": None if two_cover is None else [list(squares[0].get(m) or squares[1][m]) for m in two_cover],
        "zeroSquareBoundsHold": not bound_violations,
        "zeroSquareBoundViolations": bound_violations[:10],
        "maxZeroSquareCover": max_zero_cover,
        "mixedSquaresChecked": mixed_count,
        "mixedSquaresAllColorOne": not mixed_bad,
        "prefix": prefix,
    }
