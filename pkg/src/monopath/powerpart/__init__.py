"""Partitions into monochromatic k-th powers of paths."""

from .finite import (
    FalsificationAlarm,
    PokrovskiySolution,
    counterexample_check,
    maximal_two_path_partition,
    pokrovskiy_finite,
    sweep_pokrovskiy,
)
from .settree import SetNode, SetTree, build_set_tree, power_partition
from .squares import Absorption, absorb_path_into_square, four_square_partition

__all__ = [
    "Absorption",
    "FalsificationAlarm",
    "PokrovskiySolution",
    "SetNode",
    "SetTree",
    "absorb_path_into_square",
    "build_set_tree",
    "counterexample_check",
    "four_square_partition",
    "maximal_two_path_partition",
    "pokrovskiy_finite",
    "power_partition",
    "sweep_pokrovskiy",
]
