"""Exact Gram/Weingarten matrices and Haar moments for A_s(N) and A_o(n).

Gram entries are the integers ``m ** |p v q|``.  The Weingarten matrix is
stored as an integer adjugate over a common denominator (the Gram
determinant), produced by fraction-free Gauss-Jordan elimination, so that
moments reduce to integer dot products and a single final division.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .partitions import (
    Kind,
    PartitionFamily,
    SetPartition,
    SizeLimitError,
    cabling,
    enumerate_partitions,
    join,
)

#: exact inversion guard on the ground-set size of NC families (NC(8) is 1430x1430)
MAX_INVERT_K = 8


class SingularGramError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ExactMatrix:
    """Square rational matrix ``numerators / denominator`` indexed by ``family``."""

    family: PartitionFamily
    m: int
    numerators: np.ndarray  # object dtype, python ints
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")

    @property
    def shape(self):
        return self.numerators.shape

    def __getitem__(self, idx) -> Fraction:
        i, j = idx
        return Fraction(int(self.numerators[i, j]), self.denominator)

    def entry(self, p: SetPartition, q: SetPartition) -> Fraction:
        return self[self.family.index(p), self.family.index(q)]

    def to_fractions(self) -> list[list[Fraction]]:
        d = self.denominator
        return [[Fraction(int(x), d) for x in row] for row in self.numerators]

    def __matmul__(self, other: "ExactMatrix") -> list[list[Fraction]]:
        prod = self.numerators.dot(other.numerators)
        d = self.denominator * other.denominator
        return [[Fraction(int(x), d) for x in row] for row in prod]

    def is_inverse_of(self, other: "ExactMatrix") -> bool:
        """Exact check ``self @ other == other @ self == I``."""
        d = self.denominator * other.denominator
        ident = np.eye(self.shape[0], dtype=object) * d
        return bool(
            np.all(self.numerators.dot(other.numerators) == ident)
            and np.all(other.numerators.dot(self.numerators) == ident)
        )


def join_count_matrix(family: PartitionFamily) -> np.ndarray:
    """``|p v q|`` (all-partition join) for every pair of members."""
    n = len(family)
    out = np.zeros((n, n), dtype=np.int64)
    members = family.members
    for i in range(n):
        for j in range(i, n):
            c = len(join(members[i], members[j]))
            out[i, j] = out[j, i] = c
    return out


_join_cache: dict[tuple[Kind, int], np.ndarray] = {}
_join_lock = threading.Lock()


def _join_counts(family: PartitionFamily) -> np.ndarray:
    key = (family.kind, family.k)
    got = _join_cache.get(key)
    if got is None:
        got = join_count_matrix(family)
        with _join_lock:
            got = _join_cache.setdefault(key, got)
    return got


def gram(family: PartitionFamily, m: int) -> ExactMatrix:
    if m < 1:
        raise ValueError("m must be >= 1")
    counts = _join_counts(family)
    powers = [m**e for e in range(family.k + 1)]
    nums = np.empty(counts.shape, dtype=object)
    for idx, c in np.ndenumerate(counts):
        nums[idx] = powers[c]
    return ExactMatrix(family, m, nums, 1)


def bareiss_inverse(a: np.ndarray) -> tuple[np.ndarray, int]:
    """Fraction-free Gauss-Jordan on ``[a | I]``.

    Returns ``(adj, det)`` with ``a @ adj == det * I`` and ``det > 0``, i.e.
    the adjugate and determinant up to a common sign.
    """
    n = a.shape[0]
    aug = np.zeros((n, 2 * n), dtype=object)
    aug[:, :n] = a
    for i in range(n):
        aug[i, n + i] = 1
    prev = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col] != 0), None)
        if piv is None:
            raise SingularGramError("Gram matrix is singular")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        p = aug[col, col]
        rowc = aug[col]
        for r in range(n):
            if r == col:
                continue
            f = aug[r, col]
            # exact by Sylvester's identity
            aug[r] = (aug[r] * p - rowc * f) // prev
        prev = p
    # the left block is now prev * I, so a @ right_block == prev * I
    adj = aug[:, n:]
    if prev < 0:
        adj, prev = -adj, -prev
    return adj, prev


@dataclass
class _Memo:
    store: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def get_or_compute(self, key, fn):
        got = self.store.get(key)
        if got is not None:
            return got
        value = fn()
        with self.lock:
            # first published value wins; a concurrent duplicate is dropped
            return self.store.setdefault(key, value)


_weingarten_memo = _Memo()


def weingarten(family: PartitionFamily, m: int) -> ExactMatrix:
    """Exact inverse of ``gram(family, m)``."""
    guard = 2 * MAX_INVERT_K if family.kind is Kind.NC2 else MAX_INVERT_K
    if family.k > guard:
        raise SizeLimitError(f"exact inversion limited to k <= {MAX_INVERT_K} (got {family.kind.value}({family.k}))")

    def compute():
        g = gram(family, m)
        adj, det = bareiss_inverse(g.numerators)
        return ExactMatrix(family, m, adj, det)

    return _weingarten_memo.get_or_compute((family.kind, family.k, m), compute)


def clear_cache() -> None:
    with _weingarten_memo.lock:
        _weingarten_memo.store.clear()


# ---------------------------------------------------------------------------
# moments


def _mask(family: PartitionFamily, indices: Sequence) -> np.ndarray:
    """Integer 0/1 vector: member ``p`` satisfies ``p <= ker(indices)``."""
    out = np.zeros(len(family), dtype=object)
    for t, p in enumerate(family.members):
        out[t] = int(all(len({indices[x - 1] for x in b}) == 1 for b in p.blocks))
    return out


def bilinear(W: ExactMatrix, left: np.ndarray, right: np.ndarray) -> Fraction:
    """``sum_{p,q} left[p] W[p,q] right[q]`` exactly."""
    num = left.dot(W.numerators.dot(right))
    return Fraction(int(num), W.denominator)


@dataclass(frozen=True)
class MomentRequest:
    """A Haar moment ``int prod_t g_t`` over ``AS(N)`` or ``AO(n)``.

    For ``AO`` the word holds pairs ``(i, j)`` of ``u_ij``; for ``AS`` it holds
    pairs ``(row, col)`` of ``p_{row, col}`` where each label may itself be a
    tuple such as ``(i, a)``.
    """

    model: str
    size: int
    word: tuple

    def __post_init__(self):
        if self.model not in ("AS", "AO"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.size < 1:
            raise ValueError("size must be >= 1")


def joint_moment(req: MomentRequest) -> Fraction:
    word = req.word
    k = len(word)
    if k == 0:
        return Fraction(1)
    rows = [w[0] for w in word]
    cols = [w[1] for w in word]
    if req.model == "AO":
        for lab in itertools.chain(rows, cols):
            if not (1 <= lab <= req.size):
                raise ValueError(f"index {lab} outside 1..{req.size}")
        if k % 2:
            return Fraction(0)
        family = enumerate_partitions(Kind.NC2, k)
    else:
        family = enumerate_partitions(Kind.NC, k)
    W = weingarten(family, req.size)
    return bilinear(W, _mask(family, rows), _mask(family, cols))


def as_moment(N: int, word) -> Fraction:
    return joint_moment(MomentRequest("AS", N, tuple(word)))


def ao_moment(n: int, word) -> Fraction:
    return joint_moment(MomentRequest("AO", n, tuple(word)))


def fhg_moment(n: int, m: int, N: int, p: int) -> Fraction:
    """``p``-th moment of ``X(n, m, N) = sum_{i<=n, j<=m} u_ij`` in A_s(N).

    Full row (``n == N``) or column (``m == N``) ranges collapse to a scalar by
    the magic-unitary sum rule; this also covers small ``N`` where the NC
    Gram matrix is singular.
    """
    if not (1 <= n <= N and 1 <= m <= N):
        raise ValueError("need 1 <= n, m <= N")
    if p < 0:
        raise ValueError("p must be >= 0")
    if n == N:
        return Fraction(m) ** p
    if m == N:
        return Fraction(n) ** p
    return fhg_double_sum(n, m, N, p)


def fhg_double_sum(n: int, m: int, N: int, p: int) -> Fraction:
    """``sum_{pi, sigma in NC(p)} W_N(pi, sigma) n^|pi| m^|sigma|``."""
    if p == 0:
        return Fraction(1)
    family = enumerate_partitions(Kind.NC, p)
    W = weingarten(family, N)
    counts = family.block_counts()
    left = np.array([n ** int(c) for c in counts], dtype=object)
    right = np.array([m ** int(c) for c in counts], dtype=object)
    return bilinear(W, left, right)


def hyperspherical_moment(n: int, k: int) -> Fraction:
    """``int u_ij^(2k)`` over A_o(n)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if k == 0:
        return Fraction(1)
    family = enumerate_partitions(Kind.NC2, 2 * k)
    W = weingarten(family, n)
    ones = np.ones(len(family), dtype=object)
    return bilinear(W, ones, ones)


# ---------------------------------------------------------------------------
# verification reports


@dataclass
class Report:
    identity: str
    parameters: dict
    pairs_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.pairs_checked > 0

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "parameters": self.parameters,
            "pairs_checked": self.pairs_checked,
            "failures": self.failures,
            "pass": self.passed,
        }


def verify_cabling_weingarten(k: int, n: int, gram_override=None) -> Report:
    """Compare ``W_{NC2(2k),n}`` entrywise with the rescaled ``W_{NC(k),n^2}``.

    ``gram_override`` (a function of the NC2 Gram numerators) lets tests
    corrupt the left-hand side for a negative control.
    """
    pairings = enumerate_partitions(Kind.NC2, 2 * k)
    ncs = enumerate_partitions(Kind.NC, k)
    if gram_override is None:
        W2 = weingarten(pairings, n)
    else:
        g = gram_override(gram(pairings, n).numerators.copy())
        adj, det = bareiss_inverse(g)
        W2 = ExactMatrix(pairings, n, adj, det)
    W1 = weingarten(ncs, n * n)
    cab = [ncs.index(cabling(p)) for p in pairings]
    sizes = [len(ncs[c]) for c in cab]
    rep = Report("cabling-weingarten", {"k": k, "n": n})
    for a, b in itertools.product(range(len(pairings)), repeat=2):
        lhs = W2[a, b]
        rhs = Fraction(n) ** (sizes[a] + sizes[b] - k) * W1[cab[a], cab[b]]
        rep.pairs_checked += 1
        if lhs != rhs:
            rep.failures.append({"pi": str(pairings[a]), "sigma": str(pairings[b]), "lhs": str(lhs), "rhs": str(rhs)})
    return rep


def verify_ks_join(k: int) -> Report:
    """``|p v q| = k + 2|p~ v q~| - |p~| - |q~|`` on NC2(2k)."""
    pairings = enumerate_partitions(Kind.NC2, 2 * k)
    cab = [cabling(p) for p in pairings]
    rep = Report("kodiyalam-sunder-join", {"k": k})
    for a, b in itertools.product(range(len(pairings)), repeat=2):
        lhs = len(join(pairings[a], pairings[b]))
        rhs = k + 2 * len(join(cab[a], cab[b])) - len(cab[a]) - len(cab[b])
        rep.pairs_checked += 1
        if lhs != rhs:
            rep.failures.append({"pi": str(pairings[a]), "sigma": str(pairings[b]), "lhs": lhs, "rhs": rhs})
    return rep


def squared_u_moment(n: int, pattern) -> Fraction:
    """``int prod_t u_{i_t j_t}^2`` over A_o(n)."""
    word = [pair for pair in pattern for _ in range(2)]
    return ao_moment(n, word)


def x_moment(n: int, pattern) -> Fraction:
    """``int prod_t X_{i_t j_t}`` over A_s(n^2), ``X_ij = (1/n) sum_ab p_{ia,jb}``.

    The sums over the inner indices ``a, b`` are done in closed form: a member
    ``p <= ker(i)`` admits ``n ** |p|`` inner index tuples with ``p <= ker(a)``.
    """
    L = len(pattern)
    if L == 0:
        return Fraction(1)
    family = enumerate_partitions(Kind.NC, L)
    W = weingarten(family, n * n)
    counts = family.block_counts()
    rows = _mask(family, [t[0] for t in pattern])
    cols = _mask(family, [t[1] for t in pattern])
    left = np.array([r * n ** int(c) for r, c in zip(rows, counts)], dtype=object)
    right = np.array([r * n ** int(c) for r, c in zip(cols, counts)], dtype=object)
    return bilinear(W, left, right) / Fraction(n) ** L


def verify_equal_laws(n: int, pattern) -> Report:
    pattern = tuple(tuple(t) for t in pattern)
    for i, j in pattern:
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"index pair {(i, j)} outside 1..{n}")
    lhs = squared_u_moment(n, pattern)
    rhs = x_moment(n, pattern)
    rep = Report("equal-laws", {"n": n, "pattern": [list(t) for t in pattern]}, pairs_checked=1)
    rep.parameters["lhs"] = str(lhs)
    rep.parameters["rhs"] = str(rhs)
    if lhs != rhs:
        rep.failures.append({"lhs": str(lhs), "rhs": str(rhs)})
    return rep
