"""Ordered interval partitions of [k] and the compatibility relation.

An ordered interval partition is stored as a composition of k: the tuple
of block sizes (s_1, ..., s_r), the blocks being the consecutive integer
intervals W_1 = {1..s_1}, W_2 = {s_1+1..s_1+s_2}, and so on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .ncpoly import word_runs


@dataclass(frozen=True)
class IntervalPartition:
    block_sizes: tuple[int, ...]

    def __post_init__(self):
        if not self.block_sizes:
            raise ValueError("interval partition needs at least one block")
        if any(s < 1 for s in self.block_sizes):
            raise ValueError("block sizes must be positive")

    @property
    def k(self) -> int:
        return sum(self.block_sizes)

    def blocks(self) -> list[range]:
        """The blocks as ranges of 1-based positions."""
        out, start = [], 1
        for s in self.block_sizes:
            out.append(range(start, start + s))
            start += s
        return out


def enumerate_interval_partitions(k: int) -> list[IntervalPartition]:
    """All 2^(k-1) ordered interval partitions of [k], each exactly once."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = []
    # A composition of k is a subset of cut positions {1, ..., k-1}.
    for cuts in itertools.product((False, True), repeat=k - 1):
        sizes, size = [], 1
        for cut in cuts:
            if cut:
                sizes.append(size)
                size = 1
            else:
                size += 1
        sizes.append(size)
        out.append(IntervalPartition(tuple(sizes)))
    return out


def compatible(J: tuple[int, ...], P: IntervalPartition) -> bool:
    """Whether the index sequence J is compatible with P.

    Compatible means: constant on each block, and different across each
    pair of consecutive blocks. Equal values across non-adjacent blocks
    are allowed.
    """
    J = tuple(J)
    if len(J) != P.k:
        raise ValueError(f"sequence length {len(J)} != partition size {P.k}")
    blocks = P.blocks()
    values = []
    for b in blocks:
        vals = {J[p - 1] for p in b}
        if len(vals) != 1:
            return False
        values.append(vals.pop())
    return all(values[s] != values[s + 1] for s in range(len(values) - 1))


def canonical_partition(J: tuple[int, ...]) -> IntervalPartition:
    """The run-length composition of J, the unique partition compatible with J."""
    J = tuple(J)
    if not J:
        raise ValueError("empty sequence has no canonical partition")
    return IntervalPartition(tuple(length for _, length in word_runs(J)))


def equivalent(J1: tuple[int, ...], J2: tuple[int, ...]) -> bool:
    """Whether J1 and J2 are both compatible with a common interval partition.

    Operationally this holds iff their run-length compositions coincide.
    """
    J1, J2 = tuple(J1), tuple(J2)
    if len(J1) != len(J2):
        raise ValueError("sequences must have equal length")
    return canonical_partition(J1) == canonical_partition(J2)
