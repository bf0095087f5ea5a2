"""Set partitions, noncrossing partitions and pairings, and their lattice operations.

Partitions of ``{1..k}`` are stored in canonical form: blocks sorted by their
minima, elements ascending inside each block.  Families are ordered
lexicographically by restricted-growth string (RGS), which gives a stable
row/column order for the Gram and Weingarten matrices.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

#: enumeration guard, see ``enumerate_partitions``
MAX_ENUM_K = 10
#: pairings are cheap to enumerate, so NC2 gets a larger ground set
MAX_ENUM_K_NC2 = 20


class SizeLimitError(ValueError):
    """Raised when a request exceeds the desk-scale size guards."""


class Kind(str, Enum):
    ALL = "ALL"
    NC = "NC"
    NC2 = "NC2"


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


class _DSU:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller label as root so labels stay canonical-friendly
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``{1..k}`` in canonical form."""

    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(1, self.k + 1)):
            raise ValueError(f"blocks {self.blocks} do not partition {{1..{self.k}}}")
        if any(len(b) == 0 for b in self.blocks):
            raise ValueError("empty block")
        canon = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], k: int | None = None) -> "SetPartition":
        blocks = tuple(tuple(b) for b in blocks)
        if k is None:
            k = sum(len(b) for b in blocks)
        return cls(k, blocks)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "SetPartition":
        groups: dict[int, list[int]] = {}
        for pos, label in enumerate(rgs, start=1):
            groups.setdefault(label, []).append(pos)
        return cls(len(rgs), tuple(tuple(g) for g in groups.values()))

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """Inverse of ``str``: ``"{{1,2},{3,4}}"`` -> partition of {1..4}."""
        text = text.strip()
        if not (text.startswith("{") and text.endswith("}")):
            raise ValueError(f"not a partition literal: {text!r}")
        inner = text[1:-1].strip()
        blocks = [
            [int(x) for x in body.split(",") if x.strip()]
            for body in re.findall(r"\{([^{}]*)\}", inner)
        ]
        return cls.from_blocks(blocks)

    @classmethod
    def discrete(cls, k: int) -> "SetPartition":
        return cls(k, tuple((i,) for i in range(1, k + 1)))

    @classmethod
    def full(cls, k: int) -> "SetPartition":
        return cls(k, (tuple(range(1, k + 1)),) if k else ())

    @classmethod
    def interval_pairing(cls, k: int) -> "SetPartition":
        """``{{1,2},{3,4},...,{2k-1,2k}}``."""
        return cls(2 * k, tuple((2 * i - 1, 2 * i) for i in range(1, k + 1)))

    @property
    def rgs(self) -> tuple[int, ...]:
        labels = [0] * self.k
        for idx, block in enumerate(self.blocks):
            for x in block:
                labels[x - 1] = idx
        return tuple(labels)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"

    def rgs_string(self) -> str:
        return "".join(str(x) if x < 10 else chr(ord("a") + x - 10) for x in self.rgs)


def block_count(p: SetPartition) -> int:
    return len(p.blocks)


def is_noncrossing(p: SetPartition) -> bool:
    # stack scan: a block may only continue while it is the innermost open one
    closing = {b[-1] for b in p.blocks}
    stack: list[int] = []
    for pos, lab in enumerate(p.rgs, start=1):
        if not stack or stack[-1] != lab:
            if lab in stack:
                return False
            stack.append(lab)
        if pos in closing:
            stack.pop()
    return True


def _check_same_ground(p: SetPartition, q: SetPartition) -> None:
    if p.k != q.k:
        raise ValueError(f"ground sets differ: {p.k} vs {q.k}")


def join(p: SetPartition, q: SetPartition, lattice: str = "all") -> SetPartition:
    """Join of ``p`` and ``q``.

    ``lattice="all"`` joins in the lattice of all partitions of {1..k}
    (transitive closure of both block relations); this is what the Gram
    matrices use.  ``lattice="nc"`` is the join inside NC(k): the all-lattice
    join with crossing blocks merged until nothing crosses.
    """
    _check_same_ground(p, q)
    dsu = _DSU(p.k + 1)
    for part in (p, q):
        for b in part.blocks:
            for x in b[1:]:
                dsu.union(b[0], x)
    out = _from_dsu(dsu, p.k)
    if lattice == "all":
        return out
    if lattice != "nc":
        raise ValueError(f"unknown lattice {lattice!r}")
    while True:
        pair = _first_crossing(out)
        if pair is None:
            return out
        dsu.union(pair[0], pair[1])
        out = _from_dsu(dsu, p.k)


def _from_dsu(dsu: _DSU, k: int) -> SetPartition:
    groups: dict[int, list[int]] = {}
    for x in range(1, k + 1):
        groups.setdefault(dsu.find(x), []).append(x)
    return SetPartition(k, tuple(tuple(g) for g in groups.values()))


def _first_crossing(p: SetPartition) -> tuple[int, int] | None:
    labels = p.rgs
    k = p.k
    for a in range(k):
        for b in range(a + 1, k):
            for c in range(b + 1, k):
                if labels[c] != labels[a] or labels[b] == labels[a]:
                    continue
                for d in range(c + 1, k):
                    if labels[d] == labels[b]:
                        return a + 1, b + 1
    return None


def refines(p: SetPartition, q: SetPartition) -> bool:
    """``p <= q``: every block of ``p`` sits inside a block of ``q``."""
    _check_same_ground(p, q)
    ql = q.rgs
    return all(len({ql[x - 1] for x in b}) == 1 for b in p.blocks)


def cabling(p: SetPartition) -> SetPartition:
    """Collapse the neighbours ``2i-1, 2i`` of a partition of {1..2k} to ``i``."""
    if p.k % 2:
        raise ValueError(f"cabling needs an even ground set, got {p.k}")
    k = p.k // 2
    joined = join(p, SetPartition.interval_pairing(k))
    return SetPartition(k, tuple(tuple(sorted({(x + 1) // 2 for x in b})) for b in joined.blocks))


def kernel_partition(indices: Sequence) -> SetPartition:
    """Partition of positions grouping equal labels, ``ker i``."""
    if len(indices) == 0:
        raise ValueError("empty index tuple")
    groups: dict = {}
    for pos, lab in enumerate(indices, start=1):
        groups.setdefault(lab, []).append(pos)
    return SetPartition(len(indices), tuple(tuple(g) for g in groups.values()))


# ---------------------------------------------------------------------------
# enumeration


def _rgs_all(k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    rgs = [0] * k

    def rec(pos: int, nblocks: int):
        if pos == k:
            yield tuple(rgs)
            return
        for lab in range(nblocks + 1):
            rgs[pos] = lab
            yield from rec(pos + 1, max(nblocks, lab + 1))

    yield from rec(1, 1)


def _rgs_nc(k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    rgs = [0] * k
    first: list[int] = [0]
    last: list[int] = [0]

    def rec(pos: int):
        if pos == k:
            yield tuple(rgs)
            return
        for lab in range(len(first) + 1):
            if lab < len(first):
                # pos extends block lab; it crosses any block with an element
                # strictly between last[lab] and pos that began before last[lab]
                prev = last[lab]
                if any(rgs[t] != lab and first[rgs[t]] < prev for t in range(prev + 1, pos)):
                    continue
                rgs[pos] = lab
                last[lab] = pos
                yield from rec(pos + 1)
                last[lab] = prev
            else:
                rgs[pos] = lab
                first.append(pos)
                last.append(pos)
                yield from rec(pos + 1)
                first.pop()
                last.pop()

    yield from rec(1)


def _rgs_nc2(k: int) -> Iterator[tuple[int, ...]]:
    if k % 2:
        raise ValueError(f"NC2 needs an even ground set, got {k}")
    rgs = [0] * k
    stack: list[int] = []

    def rec(pos: int, nblocks: int):
        if pos == k:
            if not stack:
                yield tuple(rgs)
            return
        remaining = k - pos
        # closing the innermost open block first keeps RGS lex order
        if stack:
            lab = stack.pop()
            rgs[pos] = lab
            yield from rec(pos + 1, nblocks)
            stack.append(lab)
        if len(stack) + 1 <= remaining - 1:
            rgs[pos] = nblocks
            stack.append(nblocks)
            yield from rec(pos + 1, nblocks + 1)
            stack.pop()

    yield from rec(0, 0)


@dataclass(frozen=True)
class PartitionFamily:
    kind: Kind
    k: int
    members: tuple[SetPartition, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> SetPartition:
        return self.members[i]

    def index(self, p: SetPartition) -> int:
        return self._index[p]

    @property
    def _index(self) -> dict[SetPartition, int]:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {p: i for i, p in enumerate(self.members)}
            object.__setattr__(self, "_index_cache", cache)
        return cache

    def label_array(self) -> np.ndarray:
        """``(len, k)`` int array of RGS labels, one row per member."""
        return np.array([p.rgs for p in self.members], dtype=np.int64).reshape(len(self), self.k)

    def block_counts(self) -> np.ndarray:
        return np.array([len(p) for p in self.members], dtype=np.int64)


@lru_cache(maxsize=None)
def enumerate_partitions(kind: Kind | str, k: int) -> PartitionFamily:
    """All partitions of {1..k} of the given kind, in RGS-lex order."""
    kind = Kind(kind)
    if k < 0:
        raise ValueError("k must be >= 0")
    limit = MAX_ENUM_K_NC2 if kind is Kind.NC2 else MAX_ENUM_K
    if k > limit:
        raise SizeLimitError(f"{kind.value}({k}) exceeds enumeration guard k <= {limit}")
    gen = {Kind.ALL: _rgs_all, Kind.NC: _rgs_nc, Kind.NC2: _rgs_nc2}[kind]
    members = tuple(SetPartition.from_rgs(r) for r in gen(k))
    return PartitionFamily(kind, k, members)


def refinement_matrix(family: PartitionFamily) -> np.ndarray:
    """Boolean matrix ``R[i, j] = members[i] <= members[j]``."""
    labels = family.label_array()
    n = len(family)
    out = np.zeros((n, n), dtype=bool)
    if family.k == 0:
        out[:] = True
        return out
    for i, p in enumerate(family.members):
        first = np.array([b[0] - 1 for b in p.blocks for _ in b], dtype=np.int64)
        pos = np.array([x - 1 for b in p.blocks for x in b], dtype=np.int64)
        out[i] = np.all(labels[:, pos] == labels[:, first], axis=1)
    return out


# ---------------------------------------------------------------------------
# Moebius function on NC(k)


@dataclass(frozen=True)
class MoebiusTable:
    family: PartitionFamily
    values: dict[tuple[int, int], int]

    def __call__(self, p: SetPartition, q: SetPartition) -> int:
        i, j = self.family.index(p), self.family.index(q)
        return self.values.get((i, j), 0)


def _rank_order(family: PartitionFamily) -> np.ndarray:
    # finer partitions first: a valid linear extension of refinement
    return np.argsort(-family.block_counts(), kind="stable")


def moebius_row(family: PartitionFamily, lower: SetPartition, refine: np.ndarray | None = None) -> np.ndarray:
    """``mu(lower, tau)`` for every member ``tau`` (zero where not comparable)."""
    R = refinement_matrix(family) if refine is None else refine
    i = family.index(lower)
    mu = np.zeros(len(family), dtype=object)
    up = R[i]
    for t in _rank_order(family):
        if not up[t]:
            continue
        if t == i:
            mu[t] = 1
            continue
        below = up & R[:, t]
        below[t] = False
        mu[t] = -sum(mu[below])
    return mu


def moebius_column(family: PartitionFamily, upper: SetPartition, refine: np.ndarray | None = None) -> np.ndarray:
    """``mu(tau, upper)`` for every member ``tau``."""
    R = refinement_matrix(family) if refine is None else refine
    j = family.index(upper)
    mu = np.zeros(len(family), dtype=object)
    down = R[:, j]
    for t in _rank_order(family)[::-1]:
        if not down[t]:
            continue
        if t == j:
            mu[t] = 1
            continue
        above = down & R[t]
        above[t] = False
        mu[t] = -sum(mu[above])
    return mu


@lru_cache(maxsize=None)
def moebius_table(family: PartitionFamily) -> MoebiusTable:
    """Full Moebius table on an NC family by recursive zeta inversion."""
    if family.kind is not Kind.NC:
        raise ValueError("moebius_table is defined on NC families")
    R = refinement_matrix(family)
    values = {}
    for i, p in enumerate(family.members):
        row = moebius_row(family, p, R)
        for j in np.nonzero(R[i])[0]:
            values[(i, int(j))] = int(row[j])
    return MoebiusTable(family, values)


def kreweras_moebius_bottom_top(k: int) -> int:
    """Closed form ``mu(0_k, 1_k) = (-1)^(k-1) Cat(k-1)`` on NC(k)."""
    if k == 0:
        return 1
    return (-1) ** (k - 1) * catalan(k - 1)
