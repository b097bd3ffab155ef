"""Set partitions of {1..k}: enumeration, non-crossing tests and lattice operations.

Partitions are immutable values kept in canonical form (blocks sorted by their
minimum).  Every enumerator emits partitions in lexicographic order of their
restricted-growth strings, and all matrix indices in the package rely on that
order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Hashable, Iterator, Sequence

from . import config
from .errors import CapExceeded, EmptyWord, GroundSetMismatch, InvalidInput, OddGroundSet

PLAIN = "1"
STAR = "*"


@dataclass(frozen=True)
class Partition:
    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(1, self.k + 1)):
            raise InvalidInput(f"blocks {self.blocks} do not partition 1..{self.k}")
        for b in self.blocks:
            if not b or list(b) != sorted(set(b)):
                raise InvalidInput(f"block {b} is empty or not strictly increasing")
        if [b[0] for b in self.blocks] != sorted(b[0] for b in self.blocks):
            raise InvalidInput("blocks must be sorted by their minimum")

    @classmethod
    def from_blocks(cls, blocks, k: int | None = None) -> Partition:
        """Build a partition from blocks given in any order."""
        bs = sorted(tuple(sorted(b)) for b in blocks)
        if k is None:
            k = sum(len(b) for b in bs)
        return cls(k, tuple(bs))

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> Partition:
        groups: dict[int, list[int]] = {}
        for pos, label in enumerate(rgs, start=1):
            groups.setdefault(label, []).append(pos)
        return cls(len(rgs), tuple(tuple(g) for g in groups.values()))

    @classmethod
    def from_text(cls, text: str) -> Partition:
        """Parse the brace encoding, e.g. ``"{1,4}{2,3}"``."""
        text = text.strip()
        if not re.fullmatch(r"(\{\d+(,\d+)*\})+", text):
            raise InvalidInput(f"cannot parse partition {text!r}")
        blocks = [tuple(int(x) for x in m.split(",")) for m in re.findall(r"\{([^}]*)\}", text)]
        p = cls.from_blocks(blocks)
        if p.text() != text:
            raise InvalidInput(f"partition {text!r} is not in canonical form")
        return p

    def text(self) -> str:
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)

    __str__ = text

    def __len__(self) -> int:
        return len(self.blocks)

    @cached_property
    def labels(self) -> tuple[int, ...]:
        """Block index (0-based, canonical) of each element 1..k."""
        out = [0] * self.k
        for i, b in enumerate(self.blocks):
            for x in b:
                out[x - 1] = i
        return tuple(out)

    @property
    def rgs(self) -> tuple[int, ...]:
        return self.labels

    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)


def singletons(k: int) -> Partition:
    return Partition(k, tuple((i,) for i in range(1, k + 1)))


def top(k: int) -> Partition:
    return Partition(k, (tuple(range(1, k + 1)),))


def _check_cap(k: int, cap: int, what: str):
    if k < 1:
        raise InvalidInput(f"ground set size must be positive, got {k}")
    if k > cap:
        raise CapExceeded(f"{what}: k={k} exceeds cap {cap}")


def _rgs_all(k: int) -> Iterator[tuple[int, ...]]:
    rgs = [0] * k

    def rec(pos: int, mx: int):
        if pos == k:
            yield tuple(rgs)
            return
        for label in range(mx + 2):
            rgs[pos] = label
            yield from rec(pos + 1, max(mx, label))

    rgs[0] = 0
    yield from rec(1, 0)


def enumerate_all_partitions(k: int) -> list[Partition]:
    _check_cap(k, config.caps.partitions, "enumerate_all_partitions")
    return list(_all_cached(k))


@lru_cache(maxsize=None)
def _all_cached(k: int) -> tuple[Partition, ...]:
    return tuple(Partition.from_rgs(r) for r in _rgs_all(k))


def _rgs_nc(k: int) -> Iterator[tuple[int, ...]]:
    # Appending position m to block b is safe iff every other block touching
    # (last(b), m) was opened after last(b).
    rgs = [0] * k
    first: list[int] = []
    last: list[int] = []

    def ok(pos: int, b: int) -> bool:
        lb = last[b]
        for t in range(lb + 1, pos):
            c = rgs[t]
            if c != b and first[c] < lb:
                return False
        return True

    def rec(pos: int):
        if pos == k:
            yield tuple(rgs)
            return
        for b in range(len(first)):
            if ok(pos, b):
                rgs[pos] = b
                old = last[b]
                last[b] = pos
                yield from rec(pos + 1)
                last[b] = old
        rgs[pos] = len(first)
        first.append(pos)
        last.append(pos)
        yield from rec(pos + 1)
        first.pop()
        last.pop()

    yield from rec(0)


def enumerate_nc(k: int) -> list[Partition]:
    _check_cap(k, config.caps.nc, "enumerate_nc")
    return list(_nc_cached(k))


@lru_cache(maxsize=None)
def _nc_cached(k: int) -> tuple[Partition, ...]:
    return tuple(Partition.from_rgs(r) for r in _rgs_nc(k))


def _rgs_nc2(k: int) -> Iterator[tuple[int, ...]]:
    rgs = [0] * k
    stack: list[int] = []

    def rec(pos: int, nblocks: int):
        if pos == k:
            yield tuple(rgs)
            return
        # closing the innermost open pair uses a smaller label than opening a new one
        if stack:
            b = stack.pop()
            rgs[pos] = b
            yield from rec(pos + 1, nblocks)
            stack.append(b)
        if len(stack) + 1 <= k - pos - 1:
            rgs[pos] = nblocks
            stack.append(nblocks)
            yield from rec(pos + 1, nblocks + 1)
            stack.pop()

    yield from rec(0, 0)


def enumerate_nc2(k: int) -> list[Partition]:
    """Non-crossing pair partitions of {1..k}."""
    if k % 2:
        raise OddGroundSet(f"odd ground set: k={k} has no pair partitions")
    _check_cap(k, config.caps.pairings, "enumerate_nc2")
    return list(_nc2_cached(k))


@lru_cache(maxsize=None)
def _nc2_cached(k: int) -> tuple[Partition, ...]:
    return tuple(Partition.from_rgs(r) for r in _rgs_nc2(k))


def parse_decoration(d: str) -> str:
    if not d or any(c not in (PLAIN, STAR) for c in d):
        raise InvalidInput(f"decoration must be a nonempty string over '1' and '*', got {d!r}")
    return d


def admissible(p: Partition, d: str) -> bool:
    """True iff every block of the pairing joins a plain and a starred position."""
    return all(len(b) == 2 and d[b[0] - 1] != d[b[1] - 1] for b in p.blocks)


def enumerate_nc2_decorated(d: str) -> list[Partition]:
    d = parse_decoration(d)
    return [p for p in enumerate_nc2(len(d)) if admissible(p, d)]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry


def _same_ground(p: Partition, q: Partition):
    if p.k != q.k:
        raise GroundSetMismatch(f"ground sets differ: {p.k} vs {q.k}")


def join_size(p: Partition, q: Partition) -> int:
    """Number of blocks of ``join(p, q)``, without building it."""
    _same_ground(p, q)
    uf = _UnionFind(p.k)
    comps = p.k
    for part in (p, q):
        for b in part.blocks:
            for x in b[1:]:
                rx, ry = uf.find(b[0] - 1), uf.find(x - 1)
                if rx != ry:
                    uf.union(rx, ry)
                    comps -= 1
    return comps


def join(p: Partition, q: Partition) -> Partition:
    """Least upper bound of ``p`` and ``q`` in the lattice of all partitions."""
    _same_ground(p, q)
    uf = _UnionFind(p.k)
    for part in (p, q):
        for b in part.blocks:
            for x in b[1:]:
                uf.union(b[0] - 1, x - 1)
    return Partition.from_rgs([uf.find(i) for i in range(p.k)])


def leq(p: Partition, q: Partition) -> bool:
    """Refinement order: every block of ``p`` lies inside a block of ``q``."""
    _same_ground(p, q)
    lab = q.labels
    for b in p.blocks:
        first = lab[b[0] - 1]
        for x in b[1:]:
            if lab[x - 1] != first:
                return False
    return True


def ker(word: Sequence[Hashable]) -> Partition:
    if len(word) == 0:
        raise EmptyWord("ker of an empty word")
    return Partition.from_rgs(list(word))


def is_noncrossing(p: Partition) -> bool:
    """Interleaving test: no s1 < t1 < s2 < t2 with s's and t's in distinct blocks."""
    lab = p.labels
    # a partition crosses iff scanning left to right some block is re-entered
    # while a block opened after it is still unfinished
    last = {}
    for i, b in enumerate(lab):
        last[b] = i
    stack: list[int] = []
    for i, b in enumerate(lab):
        if stack and stack[-1] == b:
            pass
        elif b in stack:
            return False
        else:
            stack.append(b)
        if last[b] == i:
            stack.pop()
    return True


def is_noncrossing_recursive(p: Partition) -> bool:
    """Interval-removal characterization: peel off interval blocks until none remain."""
    remaining = [list(b) for b in p.blocks]
    order = list(range(1, p.k + 1))
    while remaining:
        pos = {x: i for i, x in enumerate(order)}
        for b in remaining:
            idx = [pos[x] for x in b]
            if idx[-1] - idx[0] == len(b) - 1:
                remaining.remove(b)
                order = [x for x in order if x not in b]
                break
        else:
            return False
    return True


def interval_block(p: Partition, positions: Sequence[int] | None = None) -> tuple[int, ...] | None:
    """First block of ``p`` that is an interval of ``positions`` (default 1..k).

    ``positions`` lists the surviving ground-set elements in order, which lets
    callers peel blocks repeatedly without relabeling.
    """
    if positions is None:
        positions = range(1, p.k + 1)
    pos = {x: i for i, x in enumerate(positions)}
    for b in p.blocks:
        if b[0] not in pos:
            continue
        idx = [pos[x] for x in b]
        if idx[-1] - idx[0] == len(b) - 1:
            return b
    return None


def restrict(p: Partition, elements: Sequence[int]) -> Partition:
    """Relabel the blocks of ``p`` contained in ``elements`` onto 1..len(elements)."""
    rank = {x: i for i, x in enumerate(sorted(elements), start=1)}
    blocks = [tuple(rank[x] for x in b) for b in p.blocks if b[0] in rank]
    return Partition.from_blocks(blocks, k=len(rank))
