"""The Adam/Bob covering game, Bob's strategies, and the parallel composer.

Bob wins G(H, W, k) when the moves cover W and Bob's own vertices carry the
k-th power of a Hamiltonian path of H.  Plays are finite here, so "wins" is
audited on a prefix after a round budget.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graphcore import Exhausted, FiniteClass, LargenessOracle, LazyColoring, TypeClass, VertexClass
from .paths import MonoPowerPath, PartitionResult, verify_power_path


class IllegalMove(ValueError):
    pass


# ---------------------------------------------------------------------------
# the triangle ordering


def _before_diagonal(s: int, k: int) -> int:
    if s <= k + 1:
        return s * (s + 1) // 2
    return (k + 1) * (k + 2) // 2 + (s - k - 1) * (k + 1)


def triangle_order(ell: int, k: int) -> tuple[int, int]:
    """The ell-th (1-based) cell of N x {0..k} ordered by n+j, then j."""
    if ell < 1:
        raise ValueError("positions start at 1")
    pos = ell - 1
    if pos < (k + 1) * (k + 2) // 2:
        s = 0
        while _before_diagonal(s + 1, k) <= pos:
            s += 1
    else:
        s = k + 1 + (pos - (k + 1) * (k + 2) // 2) // (k + 1)
    j = pos - _before_diagonal(s, k)
    return s - j, j


def triangle_index(n: int, j: int, k: int) -> int:
    if not 0 <= j <= k or n < 0:
        raise ValueError(f"cell ({n},{j}) outside N x {{0..{k}}}")
    return _before_diagonal(n + j, k) + j + 1


def triangle_before(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (m, i), (n, j) = a, b
    return a != b and (m + i < n + j or (m + i == n + j and i <= j))


def lex_position(n: int, j: int, k: int) -> int:
    return (k + 1) * n + j


# ---------------------------------------------------------------------------
# specs and transcripts


@dataclass
class GameSpec:
    """Host graph H = (N, c^{-1}(color)), target W = ladder[0], and the ladder W_0..W_k."""

    coloring: LazyColoring
    color: int
    ladder: Sequence[VertexClass]
    oracle: LargenessOracle
    name: str = "game"

    @property
    def k(self) -> int:
        return len(self.ladder) - 1

    @property
    def W(self) -> VertexClass:
        return self.ladder[0]


@dataclass
class GameTranscript:
    moves: list = field(default_factory=list)  # [(player, frozenset)]
    played: set = field(default_factory=set)

    def add(self, player: str, move) -> frozenset:
        move = frozenset(int(v) for v in move)
        clash = move & self.played
        if clash:
            raise IllegalMove(f"{player} replayed {sorted(clash)}")
        self.moves.append((player, move))
        self.played |= move
        return move

    @property
    def rounds(self) -> int:
        return sum(1 for p, _ in self.moves if p == "B")

    def union(self, player: str) -> set[int]:
        out = set()
        for p, m in self.moves:
            if p == player:
                out |= m
        return out

    def to_json(self) -> dict:
        return {"moves": [{"player": p, "vertices": sorted(m)} for p, m in self.moves], "rounds": self.rounds}


# ---------------------------------------------------------------------------
# Bob


class BobInfinite:
    """One cell b_{f(l)} per round, following the triangle ordering.

    Row-0 cells absorb the least unplayed vertex of W_0; a cell (n,j) with
    j > 0 is a fresh vertex of W_j joined in the host colour to earlier cells.
    ``local=True`` joins it only to the cells at lexicographic distance <= k,
    namely (n,i) and (n+1,i) for i < j; ``local=False`` joins it to every
    triangle-earlier cell with a smaller row index.
    """

    def __init__(self, spec: GameSpec, local: bool = True):
        self.spec = spec
        self.local = local
        self.cells: dict[tuple[int, int], int] = {}
        self.ell = 0

    def neighbours(self, n: int, j: int) -> list[int]:
        # (n+1, i) with i < j is triangle-before (n, j), so every key is already filled
        if self.local:
            keys = [(n, i) for i in range(j)] + [(n + 1, i) for i in range(j)]
        else:
            keys = [(m, i) for (m, i) in self.cells if i < j and triangle_before((m, i), (n, j))]
        return [self.cells[key] for key in keys]

    def move(self, transcript: GameTranscript) -> frozenset:
        self.ell += 1
        n, j = triangle_order(self.ell, self.spec.k)
        spec = self.spec
        if j == 0:
            b = spec.oracle.fresh(spec.ladder[0], (), transcript.played)
        else:
            b = spec.oracle.fresh(spec.ladder[j], [(u, spec.color) for u in self.neighbours(n, j)], transcript.played)
        self.cells[(n, j)] = b
        return frozenset({b})

    def ordering(self) -> list[int]:
        """Bob's vertices in lexicographic cell order, up to the first missing cell."""
        out = []
        n = 0
        while True:
            for j in range(self.spec.k + 1):
                if (n, j) not in self.cells:
                    return out
                out.append(self.cells[(n, j)])
            n += 1

    def pending(self) -> set[int]:
        return set(self.cells.values()) - set(self.ordering())

    def closed_through(self, cells: Sequence[tuple[int, int]]) -> bool:
        k = self.spec.k
        have = len(self.ordering())
        return all(lex_position(n, j, k) < have for n, j in cells)


class BobFinite:
    """Strategy for a finite W_0: a (k+1) x N grid filled row by row in k+1 rounds."""

    def __init__(self, spec: GameSpec):
        self.spec = spec
        self.round = 0
        self.cells: dict[tuple[int, int], int] = {}
        self.N = 0

    def _w0(self) -> list[int]:
        W = self.spec.W
        if isinstance(W, FiniteClass):
            return sorted(W.vertices)
        if isinstance(W, TypeClass) and W.finite():
            return sorted(W.members())
        raise ValueError("BobFinite needs a certified finite W_0")

    def move(self, transcript: GameTranscript) -> frozenset:
        j = self.round
        self.round += 1
        spec = self.spec
        if j == 0:
            b0 = [v for v in self._w0() if v not in transcript.played]
            self.N = len(b0)
            for n, v in enumerate(b0):
                self.cells[(n, 0)] = v
            return frozenset(b0)
        if j > spec.k:
            return frozenset()
        earlier = [v for (n, i), v in self.cells.items() if i < j]
        taken = set(transcript.played)
        picked = []
        for n in range(self.N):
            b = spec.oracle.fresh(spec.ladder[j], [(u, spec.color) for u in earlier], taken)
            taken.add(b)
            picked.append(b)
            self.cells[(n, j)] = b
        return frozenset(picked)

    def ordering(self) -> list[int]:
        out = []
        for n in range(self.N):
            for j in range(self.spec.k + 1):
                if (n, j) not in self.cells:
                    return out
                out.append(self.cells[(n, j)])
        return out

    def pending(self) -> set[int]:
        return set(self.cells.values()) - set(self.ordering())

    def closed_through(self, cells) -> bool:
        return self.round > self.spec.k or not self.N


def bob_for(spec: GameSpec, local: bool = True):
    """Finite strategy when W_0 is certified finite, otherwise the triangle strategy."""
    if spec.W.finite():
        return BobFinite(spec)
    return BobInfinite(spec, local)


# ---------------------------------------------------------------------------
# Adam


def adam_empty(transcript: GameTranscript, spec: GameSpec) -> set[int]:
    return set()


class RandomAdam:
    """Plays random ``size``-sets from [0, span), skipping anything already played."""

    def __init__(self, seed: int, size: int = 3, span: int = 100):
        self.rng = random.Random(seed)
        self.size = size
        self.span = span

    def __call__(self, transcript, spec):
        pick = set(self.rng.sample(range(self.span), self.size))
        return pick - transcript.played


def adam_minimum_stealer(transcript: GameTranscript, spec: GameSpec) -> set[int]:
    try:
        return {spec.oracle.fresh(spec.W, (), transcript.played)}
    except Exhausted:
        return set()


class ReplayAttacker:
    """Plays nothing until Bob has moved, then replays one of Bob's vertices."""

    def __call__(self, transcript, spec):
        bob = transcript.union("B")
        return {min(bob)} if bob else set()


ADAMS = {
    "empty": lambda seed: adam_empty,
    "random": lambda seed: RandomAdam(seed),
    "min-stealer": lambda seed: adam_minimum_stealer,
    "replay": lambda seed: ReplayAttacker(),
}


# ---------------------------------------------------------------------------
# playing and auditing


@dataclass
class GameResult:
    transcript: GameTranscript
    bob_order: list[int]
    pending: set[int]
    condition_a: bool
    condition_b: bool
    uncovered: list[int]
    prefix: int
    spec: GameSpec

    @property
    def bob_wins(self) -> bool:
        return self.condition_a and self.condition_b

    def to_json(self) -> dict:
        return {
            **self.transcript.to_json(),
            "bobUnion": self.bob_order,
            "pending": sorted(self.pending),
            "conditionA": self.condition_a,
            "conditionB": self.condition_b,
            "uncovered": self.uncovered,
            "prefix": self.prefix,
            "bobWins": self.bob_wins,
        }


def audit(spec: GameSpec, transcript: GameTranscript, bob, prefix: int) -> GameResult:
    order = bob.ordering()
    pending = bob.pending()
    uncovered = [v for v in range(prefix) if v in spec.W and v not in transcript.played]
    path = MonoPowerPath(tuple(order), spec.color, max(spec.k, 1))
    cond_b = verify_power_path(spec.coloring, path).ok and set(order) | pending == transcript.union("B")
    return GameResult(transcript, order, pending, not uncovered, cond_b, uncovered, prefix, spec)


def play_game(
    spec: GameSpec,
    adam: Callable[[GameTranscript, GameSpec], set],
    bob=None,
    rounds: int = 50,
    prefix: int = 0,
) -> GameResult:
    """Alternate A_0, B_0, A_1, B_1, ... for ``rounds`` rounds and audit conditions (A) and (B)."""
    bob = bob if bob is not None else bob_for(spec)
    transcript = GameTranscript()
    for _ in range(rounds):
        transcript.add("A", adam(transcript, spec))
        transcript.add("B", bob.move(transcript))
    return audit(spec, transcript, bob, prefix)


class CompositionError(Exhausted):
    pass


class GameExhausted(Exhausted):
    """An oracle query inside one of several composed games failed."""

    def __init__(self, cause: Exhausted, game: int, round_: int):
        super().__init__(f"game {game}, round {round_}: {cause}", cause.query, cause.certified_empty)
        self.game = game
        self.round = round_


def parallel_compose(
    specs: Sequence[GameSpec],
    prefix: int,
    local: bool = True,
    reserved: set[int] | frozenset = frozenset(),
    max_rounds: int | None = None,
    strategies: Sequence | None = None,
) -> tuple[list[MonoPowerPath], dict]:
    """Play the games simultaneously in lexicographic (round, game) order.

    Adam's move in game i is every Bob move made so far elsewhere that game i
    has not seen yet.  Play continues until every W_0 is covered on
    [0,prefix) and every cell picked up to then sits in a lexicographically
    closed segment; later picks are all >= prefix and are dropped.
    """
    bobs = list(strategies) if strategies is not None else [bob_for(s, local) for s in specs]
    transcripts = [GameTranscript() for _ in specs]
    for t in transcripts:
        t.played |= set(reserved)
    all_b: set[int] = set()
    b_history: list[tuple[int, int, frozenset]] = []
    target = set()
    for s in specs:
        target |= {v for v in s.W.below(prefix) if v not in reserved}
    max_rounds = max_rounds if max_rounds is not None else 8 * (prefix + 10) * max(1, max(s.k for s in specs) if specs else 1) + 50
    covered_at: list | None = None
    n = 0
    while True:
        if covered_at is None and target <= all_b:
            covered_at = [dict(getattr(b, "cells", {})) for b in bobs]
        if covered_at is not None and all(b.closed_through(list(c)) for b, c in zip(bobs, covered_at)):
            break
        if n >= max_rounds:
            raise CompositionError(f"parallel games did not close within {max_rounds} rounds; uncovered {sorted(target - all_b)[:10]}")
        for i, (spec, bob, tr) in enumerate(zip(specs, bobs, transcripts)):
            tr.add("A", all_b - tr.played)
            try:
                move = bob.move(tr)
            except Exhausted as exc:
                raise GameExhausted(exc, i, n) from exc
            B = tr.add("B", move)
            assert not (B & all_b), "scheduler produced overlapping Bob moves"
            all_b |= B
            b_history.append((n, i, B))
        n += 1
    pieces = []
    dropped = set()
    for spec, bob in zip(specs, bobs):
        order = bob.ordering()
        pieces.append(MonoPowerPath(tuple(order), spec.color, max(spec.k, 1), open_ended=not spec.W.finite()))
        dropped |= set(bob.cells.values()) - set(order)
    assert all(v >= prefix for v in dropped), "a dropped pick lies inside the prefix"
    meta = {"rounds": n, "dropped": len(dropped), "transcripts": transcripts, "history": b_history}
    return pieces, meta


def compose_partition(specs: Sequence[GameSpec], prefix: int, **kw) -> PartitionResult:
    pieces, meta = parallel_compose(specs, prefix, **kw)
    return PartitionResult(pieces, prefix=prefix, meta={"mode": "parallel", "rounds": meta["rounds"], "dropped": meta["dropped"]})
