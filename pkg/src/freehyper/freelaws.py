"""Free moment-cumulant transforms, reference laws, the closed form for the
moments of X(n, n, n^2), and finite-size scans toward the free Poisson and
semicircle limits."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Sequence

import mpmath

from .partitions import Kind, SetPartition, catalan, enumerate_partitions, moebius_column
from .weingarten import fhg_moment


@dataclass(frozen=True)
class MomentSequence:
    """``values[p - 1] = m_p`` for ``p = 1..p_max``."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def p_max(self) -> int:
        return len(self.values)

    def __getitem__(self, p: int):
        if not 1 <= p <= self.p_max:
            raise IndexError(p)
        return self.values[p - 1]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


class CumulantSequence(MomentSequence):
    """``values[p - 1] = kappa_p``."""


@dataclass(frozen=True)
class LimitParams:
    lam: Fraction | None = None
    nu: Fraction | None = None

    def __post_init__(self):
        if self.lam is not None and not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.nu is not None and not 0 < self.nu < 1:
            raise ValueError("nu must lie in (0, 1)")


@lru_cache(maxsize=None)
def _moebius_to_top(p: int) -> tuple[tuple[SetPartition, int], ...]:
    family = enumerate_partitions(Kind.NC, p)
    col = moebius_column(family, SetPartition.full(p))
    return tuple((q, int(col[i])) for i, q in enumerate(family.members) if col[i] != 0)


def _block_product(part: SetPartition, seq: Sequence):
    return prod((seq[len(b) - 1] for b in part.blocks), start=1)


def moments_to_cumulants(m: MomentSequence) -> CumulantSequence:
    """``kappa_p = sum_{pi in NC(p)} mu(pi, 1_p) prod_V m_|V|``.

    Works over any commutative ring the moments live in (Fraction, int,
    sympy expressions).
    """
    if m.p_max < 1:
        raise ValueError("need at least one moment")
    vals = m.values
    out = []
    for p in range(1, m.p_max + 1):
        out.append(sum((mu * _block_product(q, vals) for q, mu in _moebius_to_top(p)), start=0))
    return CumulantSequence(out)


def cumulants_to_moments(k: CumulantSequence) -> MomentSequence:
    """``m_p = sum_{pi in NC(p)} prod_V kappa_|V|``."""
    if k.p_max < 1:
        raise ValueError("need at least one cumulant")
    vals = k.values
    out = []
    for p in range(1, k.p_max + 1):
        family = enumerate_partitions(Kind.NC, p)
        out.append(sum((_block_product(q, vals) for q in family), start=0))
    return MomentSequence(out)


def free_poisson_moments(lam, p_max: int) -> MomentSequence:
    """``m_p = sum_{pi in NC(p)} lam^|pi|``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if isinstance(lam, int):
        lam = Fraction(lam)
    return MomentSequence(
        sum((lam ** len(q) for q in enumerate_partitions(Kind.NC, p)), start=0 * lam)
        for p in range(1, p_max + 1)
    )


def semicircle_moments(p_max: int) -> MomentSequence:
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    return MomentSequence(Fraction(catalan(p // 2)) if p % 2 == 0 else Fraction(0) for p in range(1, p_max + 1))


def fhg_moments(n: int, m: int, N: int, p_max: int) -> MomentSequence:
    return MomentSequence(fhg_moment(n, m, N, p) for p in range(1, p_max + 1))


# ---------------------------------------------------------------------------
# closed form for X(n, n, n^2)


class UnsupportedParameter(ValueError):
    pass


def thm34_q(n: int, precision: int = 30):
    """The root of ``q + 1/q = -n`` lying in ``(-1, 0)``."""
    with mpmath.workdps(precision):
        return (-n + mpmath.sqrt(n * n - 4)) / 2


def thm34_closed_form(n: int, k: int, precision: int = 30, prefactor: str = "corrected"):
    """``int X(n, n, n^2)^k`` from the alternating binomial closed form.

    ``prefactor="corrected"`` uses ``n^k / (n+2)^k``; ``"printed"`` uses the
    published ``n^k / (n+1)^k``, which overshoots the exact moments by
    exactly ``((n+2)/(n+1))^k`` (already visible at ``k = 1``, where the mean is
    ``n * n / n^2 = 1``).  Returns an ``mpmath.mpf``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if n == 2:
        raise UnsupportedParameter("n = 2 gives q = -1, where 1/(1+q^r) is singular at odd r")
    if k < 1:
        raise ValueError("k must be >= 1")
    if precision < 30:
        raise ValueError("precision must be at least 30 digits")
    if prefactor not in ("corrected", "printed"):
        raise ValueError(f"unknown prefactor {prefactor!r}")
    # extra guard digits: the binomial terms reach C(2k+2, k+1)
    with mpmath.workdps(precision + len(str(comb(2 * k + 2, k + 1))) + 5):
        q = thm34_q(n, mpmath.mp.dps)
        total = mpmath.mpf(0)
        for r in range(-k - 1, k + 2):
            total += (-1) ** r * comb(2 * k + 2, k + r + 1) * r / (1 + q**r)
        shift = 2 if prefactor == "corrected" else 1
        value = (mpmath.mpf(n) / (n + shift)) ** k * (q + 1) / (q - 1) / (k + 1) * total
    with mpmath.workdps(precision):
        return +value


# ---------------------------------------------------------------------------
# asymptotic scans


def _binomial_shift(moments: MomentSequence, c: Fraction) -> MomentSequence:
    """Moments of ``X - c`` from moments of ``X``."""
    full = (Fraction(1),) + tuple(moments.values)
    return MomentSequence(
        sum(comb(p, j) * full[j] * (-c) ** (p - j) for j in range(p + 1)) for p in range(1, moments.p_max + 1)
    )


@dataclass
class ScanRow:
    n: int
    m: int
    N: int
    moments: list
    cumulants: list
    distance_sq: Fraction
    distance: float
    # regime 2 only: exact kappa_p(S)^2 and signs
    cumulant_squares: list | None = None
    cumulant_signs: list | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "N": self.N,
            "moments": self.moments,
            "cumulants": self.cumulants,
            "distance": self.distance,
            "distance_sq": self.distance_sq,
        }


@dataclass
class ScanReport:
    regime: int
    params: dict
    p_max: int
    rows: list = field(default_factory=list)

    @property
    def non_increasing(self) -> bool:
        d = [r.distance_sq for r in self.rows]
        return all(a >= b for a, b in zip(d, d[1:]))

    @property
    def strictly_decreasing(self) -> bool:
        d = [r.distance_sq for r in self.rows]
        return all(a > b for a, b in zip(d, d[1:]))

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "params": self.params,
            "p_max": self.p_max,
            "non_increasing": self.non_increasing,
            "rows": [r.to_dict() for r in self.rows],
        }


@dataclass(frozen=True)
class Standardized:
    """Exact value ``sign * sqrt(square)``; ``square`` is rational."""

    sign: int
    square: Fraction

    @classmethod
    def of(cls, base: Fraction, p: int, variance: Fraction) -> "Standardized":
        """``base / variance^(p/2)``."""
        return cls((base > 0) - (base < 0), Fraction(base) ** 2 / Fraction(variance) ** p)

    def __abs__(self) -> Fraction:
        # comparisons of magnitudes are done on the exact square
        return self.square

    def to_float(self, digits: int = 30) -> float:
        with mpmath.workdps(digits):
            return float(self.sign * mpmath.sqrt(mpmath.mpf(self.square.numerator) / self.square.denominator))


def standardized_sequences(n: int, m: int, N: int, p_max: int):
    """Exact moments and cumulants of ``S = (X - m nu) / sqrt(m nu (1 - nu))``, ``nu = n/N``.

    Returns ``(x_moments, y_moments, y_cumulants, variance)`` with ``Y = X - m nu``;
    the standardized quantities are ``Standardized.of(y, p, variance)``.
    """
    nu = Fraction(n, N)
    if not 0 < nu < 1:
        raise ValueError("need 0 < n < N")
    x = fhg_moments(n, m, N, p_max)
    y = _binomial_shift(x, m * nu)
    return x, y, moments_to_cumulants(y), m * nu * (1 - nu)


def _check_ladder(sizes):
    sizes = [tuple(int(v) for v in s) for s in sizes]
    if not sizes:
        raise ValueError("empty size ladder")
    for n, m, N in sizes:
        if not (1 <= n <= N and 1 <= m <= N):
            raise ValueError(f"invalid size {(n, m, N)}")
    return sizes


def asymptotic_scan(regime: int, sizes, p_max: int, digits: int = 30) -> ScanReport:
    """Distances to the limiting law along a size ladder.

    Regime 1 needs ``n m / N`` constant (= lambda) and compares moments of X
    with free Poisson(lambda).  Regime 2 needs ``n / N`` constant (= nu) and
    compares the standardized variable with the (0,1) semicircle.
    """
    sizes = _check_ladder(sizes)
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    if regime == 1:
        lams = {Fraction(n * m, N) for n, m, N in sizes}
        if len(lams) != 1:
            raise ValueError(f"regime 1 needs constant nm/N, got {sorted(lams)}")
        lam = lams.pop()
        target = free_poisson_moments(lam, p_max)
        report = ScanReport(1, {"lambda": str(lam)}, p_max)
        for n, m, N in sizes:
            mom = fhg_moments(n, m, N, p_max)
            cum = moments_to_cumulants(mom)
            dist = max(abs(a - b) for a, b in zip(mom, target))
            report.rows.append(ScanRow(n, m, N, list(mom), list(cum), dist**2, float(dist)))
        return report
    if regime == 2:
        nus = {Fraction(n, N) for n, m, N in sizes}
        if len(nus) != 1:
            raise ValueError(f"regime 2 needs constant n/N, got {sorted(nus)}")
        nu = nus.pop()
        if not 0 < nu < 1:
            raise ValueError("regime 2 needs 0 < nu < 1")
        target = semicircle_moments(p_max)
        report = ScanReport(2, {"nu": str(nu)}, p_max)
        for n, m, N in sizes:
            _, y, ky, var = standardized_sequences(n, m, N, p_max)
            dsq = Fraction(0)
            for p in range(1, p_max + 1):
                s = Standardized.of(y[p], p, var)
                if p % 2:
                    diff_sq = s.square
                else:
                    # even orders: S-moment y_p / var^(p/2) is rational
                    diff_sq = (y[p] / var ** (p // 2) - target[p]) ** 2
                dsq = max(dsq, diff_sq)
            kappas = [Standardized.of(ky[p], p, var) for p in range(1, p_max + 1)]
            mom_s = [Standardized.of(y[p], p, var).to_float(digits) for p in range(1, p_max + 1)]
            with mpmath.workdps(digits):
                dist = float(mpmath.sqrt(mpmath.mpf(dsq.numerator) / dsq.denominator))
            report.rows.append(ScanRow(
                n, m, N, mom_s, [s.to_float(digits) for s in kappas], dsq, dist,
                cumulant_squares=[s.square for s in kappas], cumulant_signs=[s.sign for s in kappas],
            ))
        return report
    raise ValueError(f"unknown regime {regime!r}")


def standardized_cumulants(n: int, m: int, N: int, p_max: int) -> list[Standardized]:
    _, _, ky, var = standardized_sequences(n, m, N, p_max)
    return [Standardized.of(ky[p], p, var) for p in range(1, p_max + 1)]
