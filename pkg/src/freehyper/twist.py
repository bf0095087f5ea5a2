"""Twisted group algebras over ``G = Z_n^2`` and the Haar-transport check.

Group and cocycle arithmetic stays at the exponent level (integers mod n);
complex numbers appear only when a phase ``w ** e`` with ``w = exp(2 pi i / n)``
has to enter a matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .partitions import Kind, enumerate_partitions
from .weingarten import SizeLimitError, weingarten, ao_moment

PURE_TOL = 1e-12
PIPELINE_TOL = 1e-9


@dataclass(frozen=True, order=True)
class GroupElem:
    n: int
    i: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "i", self.i % self.n)
        object.__setattr__(self, "j", self.j % self.n)

    def __add__(self, other: "GroupElem") -> "GroupElem":
        return GroupElem(self.n, self.i + other.i, self.j + other.j)

    def __neg__(self) -> "GroupElem":
        return GroupElem(self.n, -self.i, -self.j)

    @property
    def index(self) -> int:
        """Position of ``e_(i,j)`` in the basis ordering ``i * n + j``."""
        return self.i * self.n + self.j


def group_elements(n: int) -> list[GroupElem]:
    return [GroupElem(n, i, j) for i in range(n) for j in range(n)]


def root_of_unity(n: int, e) -> complex | np.ndarray:
    return np.exp(2j * np.pi * (np.asarray(e) % n) / n)


@dataclass(frozen=True)
class Cocycle:
    """A ``U(1)``-valued 2-cocycle on ``Z_n^2`` given by an exponent rule.

    ``exponent(g, h)`` is an integer ``e`` with ``sigma(g, h) = w ** e``.
    """

    n: int
    exponent: Callable[[GroupElem, GroupElem], int]
    name: str = "custom"

    def __call__(self, g: GroupElem, h: GroupElem) -> complex:
        return complex(root_of_unity(self.n, self.exponent(g, h)))

    def exponent_table(self) -> np.ndarray:
        els = group_elements(self.n)
        return np.array([[self.exponent(g, h) % self.n for h in els] for g in els], dtype=np.int64)

    def check_normalized(self) -> bool:
        zero = GroupElem(self.n, 0, 0)
        return all(self.exponent(g, zero) % self.n == 0 and self.exponent(zero, g) % self.n == 0
                   for g in group_elements(self.n))

    def check_cocycle(self) -> bool:
        """``sigma(gh, s) sigma(g, h) == sigma(g, hs) sigma(h, s)`` on all triples."""
        els = group_elements(self.n)
        e = self.exponent
        return all(
            (e(g + h, s) + e(g, h) - e(g, h + s) - e(h, s)) % self.n == 0
            for g, h, s in itertools.product(els, repeat=3)
        )


def standard_cocycle(n: int, check: bool = True) -> Cocycle:
    """``sigma((i,j),(k,l)) = w ** (j k)``, a bicharacter."""
    if n < 2:
        raise ValueError("n must be >= 2")
    c = Cocycle(n, lambda g, h: g.j * h.i, name="standard")
    if check and n <= 8:
        if not (c.check_normalized() and c.check_cocycle()):
            raise AssertionError("standard cocycle failed its own invariants")
    return c


def trivial_cocycle(n: int) -> Cocycle:
    return Cocycle(n, lambda g, h: 0, name="trivial")


def omega_exponent(c: Cocycle, word: Sequence[GroupElem]) -> int:
    """Exponent of ``Omega(g_1..g_m) = prod_k sigma(g_1...g_k, g_{k+1})``."""
    if not word:
        raise ValueError("empty word")
    total = 0
    acc = word[0]
    for g in word[1:]:
        total += c.exponent(acc, g)
        acc = acc + g
    return total % c.n


def omega(c: Cocycle, word: Sequence[GroupElem]) -> complex:
    return complex(root_of_unity(c.n, omega_exponent(c, word)))


@dataclass(frozen=True)
class TwistedGroupAlgebra:
    n: int
    cocycle: Cocycle

    @property
    def dim(self) -> int:
        return self.n * self.n

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of coefficient vectors in the basis ``e_g``."""
        out = np.zeros(self.dim, dtype=complex)
        els = group_elements(self.n)
        for g in els:
            if x[g.index] == 0:
                continue
            for h in els:
                if y[h.index] == 0:
                    continue
                out[(g + h).index] += x[g.index] * y[h.index] * self.cocycle(g, h)
        return out

    def left_regular(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> x y`` on the ``n^2``-dimensional space."""
        L = np.zeros((self.dim, self.dim), dtype=complex)
        els = group_elements(self.n)
        for g in els:
            if x[g.index] == 0:
                continue
            for h in els:
                L[(g + h).index, h.index] += x[g.index] * self.cocycle(g, h)
        return L

    def basis(self, g: GroupElem) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[g.index] = 1
        return v


def canonical_trace(alg: TwistedGroupAlgebra, coeffs) -> complex:
    """Normalised trace of the left regular representation of ``coeffs``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (alg.dim,):
        raise ValueError(f"expected {alg.dim} coefficients")
    return complex(np.trace(alg.left_regular(coeffs)) / alg.dim)


# ---------------------------------------------------------------------------
# the matrix model C_sigma[Z_n^2] ~ M_n(C)


@dataclass(frozen=True)
class PsiMap:
    """``psi`` as an ``n^2 x n^2`` matrix (basis ``e_g`` -> matrix units ``E_ab``)
    together with the inverse ``psi'`` read off the displayed formula."""

    n: int
    forward: np.ndarray
    inverse: np.ndarray

    def image(self, g: GroupElem) -> np.ndarray:
        return self.forward[:, g.index].reshape(self.n, self.n)


def build_psi(n: int) -> PsiMap:
    if n < 2:
        raise ValueError("n must be >= 2")
    fwd = np.zeros((n * n, n * n), dtype=complex)
    for g in group_elements(n):
        # psi(e_(i,j)) = sum_k w^(k i) E_{k, k+j}
        for k in range(n):
            fwd[k * n + (k + g.j) % n, g.index] += root_of_unity(n, k * g.i)
    inv = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            # psi'(E_ab) = (1/n) sum_k w^(-a k) e_(k, b-a)
            for k in range(n):
                inv[GroupElem(n, k, b - a).index, a * n + b] += root_of_unity(n, -a * k) / n
    return PsiMap(n, fwd, inv)


@dataclass
class TwistReport:
    check: str
    n: int
    word: object = None
    lhs: object = None
    rhs: object = None
    residual: float = 0.0
    tolerance: float = PURE_TOL
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tolerance)

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return [round(v.real, 12), round(v.imag, 12)]
            return v if v is None or isinstance(v, (int, float, str, list, dict)) else str(v)

        return {
            "check": self.check,
            "n": self.n,
            "word": self.word,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "residual": float(f"{self.residual:.6e}"),
            "pass": self.passed,
            **({"details": self.details} if self.details else {}),
        }


def verify_psi_iso(n: int, tolerance: float = PURE_TOL, cocycle: Cocycle | None = None) -> TwistReport:
    """Multiplicativity, ``psi' psi = id`` and trace transport for ``psi``."""
    c = standard_cocycle(n) if cocycle is None else cocycle
    psi = build_psi(n)
    els = group_elements(n)
    images = {g: psi.image(g) for g in els}
    mult = 0.0
    for g, h in itertools.product(els, repeat=2):
        diff = images[g] @ images[h] - c(g, h) * images[g + h]
        mult = max(mult, float(np.abs(diff).max()))
    roundtrip = float(np.abs(psi.inverse @ psi.forward - np.eye(n * n)).max())
    alg = TwistedGroupAlgebra(n, c)
    trace = 0.0
    for g in els:
        expected = 1.0 if g == GroupElem(n, 0, 0) else 0.0
        mat_tr = np.trace(images[g]) / n
        can_tr = canonical_trace(alg, alg.basis(g))
        trace = max(trace, float(abs(mat_tr - expected)), float(abs(can_tr - expected)))
    return TwistReport(
        "psi-iso", n, residual=max(mult, roundtrip, trace), tolerance=tolerance,
        details={"multiplicativity": mult, "roundtrip": roundtrip, "trace": trace},
    )


# ---------------------------------------------------------------------------
# Haar transport PA_o(n) -> A_aut(C_sigma[G]) -> A_aut(C[G]) -> A_s(n^2)

MAX_TRANSPORT_N = 3
MAX_TRANSPORT_LEN = 2


def phi_coefficients(n: int, i: int, j: int, k: int, l: int) -> np.ndarray:
    """Coefficients of ``phi(u_ij u_kl)`` on ``x_{g,h}`` as an ``(n^2, n^2)`` array.

    ``phi(u_ij u_kl) = (1/n) sum_ab w^(a i - b j) x_{(a, k-i), (b, l-j)}``;
    indices are 0-based residues.
    """
    out = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            g = GroupElem(n, a, k - i)
            h = GroupElem(n, b, l - j)
            out[g.index, h.index] += root_of_unity(n, a * i - b * j) / n
    return out


def rho_matrix(n: int) -> np.ndarray:
    """``rho`` as a map from ``x_{g,h}`` to ``p_{r,c}``, shape ``(n^4, n^4)``.

    ``rho(x_{(a,b),(i,j)}) = (1/n^2) sum_{klrs} w^(ki + lj - ra - sb) p_{(r,s),(k,l)}``.
    Rows index ``(r, c)`` pairs of Z_n^2 elements, columns ``(g, h)``.
    """
    d = n * n
    els = group_elements(n)
    out = np.zeros((d * d, d * d), dtype=complex)
    for g, h in itertools.product(els, repeat=2):
        col = g.index * d + h.index
        for r, c in itertools.product(els, repeat=2):
            e = c.i * h.i + c.j * h.j - r.i * g.i - r.j * g.j
            out[r.index * d + c.index, col] = root_of_unity(n, e) / d
    return out


def _omega_phase_tensor(c: Cocycle, m: int) -> np.ndarray:
    """Phase ``Omega(g)^-1 Omega(h)`` for all ``(g_1,h_1,...,g_m,h_m)``."""
    n = c.n
    els = group_elements(n)
    d = n * n
    out = np.ones((d,) * (2 * m), dtype=complex)
    if m == 1:
        return out
    for gs in itertools.product(els, repeat=m):
        eg = omega_exponent(c, gs)
        for hs in itertools.product(els, repeat=m):
            eh = omega_exponent(c, hs)
            idx = tuple(v for pair in zip(gs, hs) for v in (pair[0].index, pair[1].index))
            out[idx] = root_of_unity(n, eh - eg)
    return out


def _as_integral(n: int, coeffs: np.ndarray, m: int) -> complex:
    """Integrate ``sum C[r1,c1,...,rm,cm] p_{r1 c1} ... p_{rm cm}`` over A_s(n^2)."""
    d = n * n
    family = enumerate_partitions(Kind.NC, m)
    W = weingarten(family, d)
    Wf = np.array([[float(W[a, b]) for b in range(len(family))] for a in range(len(family))])
    # move rows to the front: C[r1..rm, c1..cm]
    perm = [2 * t for t in range(m)] + [2 * t + 1 for t in range(m)]
    C = coeffs.transpose(perm).reshape(d**m, d**m)
    label_tuples = list(itertools.product(range(d), repeat=m))
    masks = np.array(
        [[all(len({lab[x - 1] for x in b}) == 1 for b in p.blocks) for lab in label_tuples] for p in family],
        dtype=float,
    )
    # sum_{pi, sigma} W(pi, sigma) <mask_pi, C mask_sigma>
    inner = masks @ C @ masks.T
    return complex(np.sum(Wf * inner))


def haar_transport_rhs(n: int, word, omega_cocycle: Cocycle | None = None) -> complex:
    """Right side of the transport; ``omega_cocycle`` replaces the cocycle in the Omega step only."""
    c = standard_cocycle(n) if omega_cocycle is None else omega_cocycle
    m = len(word)
    d = n * n
    # (1) the word in the x_{g,h} basis of A_aut(C_sigma[G]) (phi is an algebra map)
    factors = [phi_coefficients(n, i - 1, j - 1, k - 1, l - 1) for (i, j), (k, l) in word]
    coeff = factors[0]
    for f in factors[1:]:
        coeff = np.multiply.outer(coeff, f)
    # (2) Omega phases: coalgebra isomorphism onto A_aut(C[G])
    coeff = coeff * _omega_phase_tensor(c, m)
    # (3) rho, applied slot by slot (an algebra map)
    R = rho_matrix(n).reshape(d, d, d, d)  # [r, c, g, h]
    for t in range(m):
        coeff = np.tensordot(R, coeff, axes=([2, 3], [2 * t, 2 * t + 1]))
        # tensordot puts the new (r, c) axes first; rotate them into slot t
        order = list(range(2, 2 * t + 2)) + [0, 1] + list(range(2 * t + 2, 2 * m))
        coeff = coeff.transpose(order)
    # (4)+(5) integrate every p-monomial and sum
    return _as_integral(n, coeff, m)


def verify_haar_transport(n: int, word, tolerance: float = PIPELINE_TOL, omega_cocycle: Cocycle | None = None) -> TwistReport:
    """Integrate a word in ``u_ij u_kl`` on both sides of the twisting isomorphism.

    ``word`` is a sequence of ``((i, j), (k, l))`` with 1-based indices; the
    left side is ``int prod_t u_{i_t j_t} u_{k_t l_t}`` over A_o(n).
    """
    word = tuple((tuple(a), tuple(b)) for a, b in word)
    if n > MAX_TRANSPORT_N or len(word) > MAX_TRANSPORT_LEN:
        raise SizeLimitError(f"haar transport limited to n <= {MAX_TRANSPORT_N}, length <= {MAX_TRANSPORT_LEN}")
    if n < 2 or not word:
        raise ValueError("need n >= 2 and a nonempty word")
    for pair in word:
        for idx in itertools.chain(*pair):
            if not 1 <= idx <= n:
                raise ValueError(f"index {idx} outside 1..{n}")
    flat = [u for a, b in word for u in (a, b)]
    lhs = ao_moment(n, flat)
    rhs = haar_transport_rhs(n, word, omega_cocycle)
    residual = abs(complex(float(lhs)) - rhs)
    return TwistReport(
        "haar-transport", n, word=[[list(a), list(b)] for a, b in word],
        lhs=str(lhs), rhs=rhs, residual=residual, tolerance=tolerance,
    )
