"""The set tree A_s and the partition into boundedly many monochromatic k-th powers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..classifier import density_classification_on, exact_classification
from ..gameengine import GameExhausted, GameSpec, parallel_compose
from ..graphcore import ArityError, FiniteClass, LargenessOracle, LazyColoring, MaskClass, TypeClass, VertexClass
from ..paths import PartitionResult


@dataclass
class SetNode:
    seq: tuple[int, ...]
    cls: VertexClass
    infinite: bool
    provenance: str

    def members_below(self, n: int) -> list[int]:
        if isinstance(self.cls, TypeClass) and self.cls.finite():
            return sorted(v for v in self.cls.members() if v < n)
        return self.cls.below(n)


@dataclass
class SetTree:
    r: int
    k: int
    nodes: dict[tuple[int, ...], SetNode] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return (self.k - 1) * self.r + 1

    @property
    def bound(self) -> int:
        return self.r ** self.depth

    def leaves(self) -> list[SetNode]:
        return [node for s, node in sorted(self.nodes.items()) if len(s) == self.depth]

    def infinite_leaves(self) -> list[SetNode]:
        return [node for node in self.leaves() if node.infinite]

    def leaf_color(self, s: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
        """(i_s, H_s): a colour filling >= k positions of s and the k largest such positions, descending."""
        for i in range(self.r):
            positions = [h for h, c in enumerate(s) if c == i]
            if len(positions) >= self.k:
                return i, tuple(sorted(positions, reverse=True)[: self.k])
        raise AssertionError("pigeonhole failed")  # unreachable: len(s) = (k-1)r+1

    def ladder(self, s: tuple[int, ...]) -> list[VertexClass]:
        _, H = self.leaf_color(s)
        return [self.nodes[s].cls] + [self.nodes[s[:h]].cls for h in H]

    def to_json(self, n: int) -> dict:
        return {
            "r": self.r,
            "k": self.k,
            "depth": self.depth,
            "bound": self.bound,
            "nodes": [
                {
                    "seq": list(s),
                    "infinite": node.infinite,
                    "provenance": node.provenance,
                    "membersBelowPrefix": node.members_below(n),
                }
                for s, node in sorted(self.nodes.items())
            ],
        }


def build_set_tree(coloring: LazyColoring, k: int, oracle: LargenessOracle, mode: str | None = None) -> SetTree:
    """Iterated classification down to depth (k-1)r+1.

    Exact mode works with unions of types.  Density mode works with boolean
    masks over [0,H); there a node counts as infinite iff it has a member in
    [H/2, H), since a finite set only shows up at the start of the horizon.
    """
    if coloring.k != 2:
        raise ArityError("the set tree needs a graph colouring")
    if k < 1:
        raise ValueError("power must be >= 1")
    tree = SetTree(coloring.r, k)
    mode = mode or ("exact" if oracle.exact and coloring.structure is not None else "density")
    if mode == "exact":
        s = coloring.structure
        root = TypeClass(s, [t.name for t in s.types])
        tree.nodes[()] = SetNode((), root, not root.finite(), "exact")
        _grow_exact(tree, coloring, ())
    else:
        H = oracle.horizon
        matrix = coloring.matrix(H)
        root = np.ones(H, dtype=bool)
        tree.nodes[()] = SetNode((), MaskClass(root, "root"), True, f"density({H})")
        _grow_density(tree, coloring, (), root, matrix)
    return tree


def _grow_exact(tree: SetTree, coloring, seq):
    node = tree.nodes[seq]
    if len(seq) == tree.depth:
        return
    structure = coloring.structure
    if node.infinite:
        cl = exact_classification(coloring, within=node.cls)
        children = [TypeClass(structure, [t for t, c in cl._types.items() if c == i]) for i in range(tree.r)]
    else:
        children = [node.cls] + [TypeClass(structure, []) for _ in range(1, tree.r)]
    for i, child in enumerate(children):
        tree.nodes[seq + (i,)] = SetNode(seq + (i,), child, not child.finite(), "exact")
        _grow_exact(tree, coloring, seq + (i,))


def _grow_density(tree: SetTree, coloring, seq, mask: np.ndarray, matrix: np.ndarray):
    node = tree.nodes[seq]
    if len(seq) == tree.depth:
        return
    H = len(mask)
    if node.infinite:
        cl = density_classification_on(coloring, mask, matrix)
        child_masks = [mask & (cl._density_d == i) for i in range(tree.r)]
    else:
        child_masks = [mask] + [np.zeros(H, dtype=bool) for _ in range(1, tree.r)]
    for i, cm in enumerate(child_masks):
        s = seq + (i,)
        infinite = bool(cm[H // 2:].any())
        name = "A" + "".join(map(str, s))
        cls = MaskClass(cm, name) if infinite else FiniteClass(np.flatnonzero(cm).tolist(), name)
        tree.nodes[s] = SetNode(s, cls, infinite, node.provenance)
        _grow_density(tree, coloring, s, cm, matrix)


def power_partition(coloring: LazyColoring, k: int, prefix: int, oracle: LargenessOracle, tree: SetTree | None = None) -> PartitionResult:
    """At most r^((k-1)r+1) monochromatic k-th powers plus the finite leaves, on [0,prefix)."""
    tree = tree or build_set_tree(coloring, k, oracle)
    exact = tree.nodes[()].provenance == "exact"
    demoted: list[tuple[int, ...]] = []
    while True:
        leaves = [node.seq for node in tree.infinite_leaves() if node.seq not in demoted]
        specs = []
        for s in leaves:
            color, _ = tree.leaf_color(s)
            specs.append(GameSpec(coloring, color, tree.ladder(s), oracle, name="A" + "".join(map(str, s))))
        try:
            pieces, meta = parallel_compose(specs, prefix) if specs else ([], {"rounds": 0, "dropped": 0})
            break
        except GameExhausted as exc:
            # a density leaf that runs dry below the horizon is treated as finite
            if exact:
                raise
            demoted.append(leaves[exc.game])
    assert len(pieces) <= tree.bound
    covered = set().union(*(p.vertices for p in pieces)) if pieces else set()
    leftover = set()
    for node in tree.leaves():
        if not node.infinite or node.seq in demoted:
            leftover.update(node.members_below(prefix))
    leftover -= covered
    return PartitionResult(
        pieces,
        frozenset(leftover),
        prefix,
        meta={
            "mode": "power",
            "k": k,
            "bound": tree.bound,
            "leaves": [list(s) for s in leaves],
            "provenance": tree.nodes[()].provenance,
            "rounds": meta["rounds"],
            "demoted": [list(s) for s in demoted],
        },
    )
