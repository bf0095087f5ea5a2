"""Verification suites driven by the CLI and the experiment scripts.

Each suite returns a ``SuiteResult`` holding one JSON-ready record per check.
The ``SMALL`` preset pins the desk-scale parameters used for acceptance.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import freelaws, twist, weingarten
from .partitions import Kind, SetPartition, catalan, enumerate_partitions, moebius_row, kreweras_moebius_bottom_top

SMALL = {
    "cabling": {"kmax": 5, "ns": [2, 3]},
    "ks-join": {"kmax": 6},
    "equal-laws": {"ns": [2, 3], "max_len": 2, "random_words": 20, "random_len": 3, "random_n": 2},
    "thm34": {"ns": [3, 4, 5], "kmax": 6, "rel_tol": 1e-9},
    "asymptotics": {
        "regime1": [(2, 2, 4), (4, 4, 16), (8, 8, 64)],
        "regime1_pmax": 4,
        "regime2": [(4, 2, 8), (8, 2, 16), (16, 2, 32)],
        "regime2_pmax": 4,
    },
    "psi-iso": {"ns": list(range(2, 9)), "tol": 1e-12},
    "haar-transport": {"n2_indices": [1, 2], "n3_samples": 20, "tol": 1e-9},
    "structural": {"gw_kmax": 6, "gw_ms": [4, 9, 16], "roundtrips": 100, "rt_pmax": 6, "mu_pmax": 8, "count_kmax": 8},
}

SUITES = list(SMALL) + ["all"]


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c["pass"] for c in self.checks)

    def add(self, name: str, ok: bool, **detail):
        self.checks.append({"check": name, "pass": bool(ok), **detail})

    def to_dict(self) -> dict:
        return {"suite": self.suite, "pass": self.passed, "checks": self.checks}


def seeded_words(seed: int, count: int, length: int, n: int, arity: int) -> list:
    """Deterministic random words of index tuples in ``1..n``."""
    rng = random.Random(seed)
    return [
        tuple(tuple(rng.randint(1, n) for _ in range(arity)) for _ in range(length))
        for _ in range(count)
    ]


def run_cabling(kmax: int = 5, ns=(2, 3)) -> SuiteResult:
    res = SuiteResult("cabling")
    for n in ns:
        for k in range(1, kmax + 1):
            rep = weingarten.verify_cabling_weingarten(k, n)
            res.add(f"cabling k={k} n={n}", rep.passed, **rep.to_dict())
    return res


def run_ks_join(kmax: int = 6) -> SuiteResult:
    res = SuiteResult("ks-join")
    for k in range(1, kmax + 1):
        rep = weingarten.verify_ks_join(k)
        res.add(f"ks-join k={k}", rep.passed, **rep.to_dict())
    return res


def equal_law_patterns(n: int, max_len: int):
    pairs = list(itertools.product(range(1, n + 1), repeat=2))
    for length in range(1, max_len + 1):
        yield from itertools.product(pairs, repeat=length)


def run_equal_laws(ns=(2, 3), max_len=2, random_words=20, random_len=3, random_n=2, seed=0) -> SuiteResult:
    res = SuiteResult("equal-laws")
    for n in ns:
        bad, total = [], 0
        for pat in equal_law_patterns(n, max_len):
            rep = weingarten.verify_equal_laws(n, pat)
            total += 1
            if not rep.passed:
                bad.append(rep.to_dict())
        res.add(f"equal-laws n={n} all words len<={max_len}", not bad, words=total, failures=bad)
    bad = []
    words = seeded_words(seed, random_words, random_len, random_n, 2)
    for pat in words:
        rep = weingarten.verify_equal_laws(random_n, pat)
        if not rep.passed:
            bad.append(rep.to_dict())
    res.add(f"equal-laws n={random_n} {random_words} seeded words len={random_len}", not bad,
            words=len(words), seed=seed, failures=bad)
    return res


def run_thm34(ns=(3, 4, 5), kmax=6, rel_tol=1e-9, precision=30) -> SuiteResult:
    res = SuiteResult("thm34")
    for n in ns:
        for k in range(1, kmax + 1):
            exact = weingarten.fhg_moment(n, n, n * n, k)
            closed = freelaws.thm34_closed_form(n, k, precision)
            with mpmath.workdps(precision):
                ex = mpmath.mpf(exact.numerator) / exact.denominator
                rel = float(abs(closed - ex) / abs(ex))
            res.add(f"thm34 n={n} k={k}", rel < rel_tol, exact=exact, closed_form=mpmath.nstr(closed, 20),
                    relative_error=rel)
    return res


def regime2_checks(report) -> dict:
    """Criterion-style checks on a regime-2 scan (exact, via squares)."""
    rows = report.rows
    k3 = [r.cumulant_squares[2] for r in rows]
    k4 = [r.cumulant_squares[3] for r in rows]
    # |kappa_2 - 1|: kappa_2(S) is rational (even order), recover it from sign and square
    k2 = [rational_sqrt(r.cumulant_squares[1]) for r in rows]
    d2 = [abs(x - 1) for x in k2]
    return {
        "kappa3_non_increasing": all(a >= b for a, b in zip(k3, k3[1:])),
        "kappa4_non_increasing": all(a >= b for a, b in zip(k4, k4[1:])),
        "kappa2_gap_decreasing": all(a > b for a, b in zip(d2, d2[1:])),
        "kappa2": k2,
        "kappa3_sq": k3,
        "kappa4_sq": k4,
    }


def rational_sqrt(square: Fraction) -> Fraction:
    """Exact square root of a rational known to be a perfect square."""
    from math import isqrt

    a, b = isqrt(square.numerator), isqrt(square.denominator)
    if a * a != square.numerator or b * b != square.denominator:
        raise ValueError(f"{square} is not a rational square")
    return Fraction(a, b)


def run_asymptotics(regime1=None, regime1_pmax=4, regime2=None, regime2_pmax=4) -> SuiteResult:
    cfg = SMALL["asymptotics"]
    regime1 = regime1 or cfg["regime1"]
    regime2 = regime2 or cfg["regime2"]
    res = SuiteResult("asymptotics")
    r1 = freelaws.asymptotic_scan(1, regime1, regime1_pmax)
    res.add("free Poisson: distance strictly decreasing", r1.strictly_decreasing,
            distances=[r.distance for r in r1.rows], ladder=[list(s) for s in regime1])
    r2 = freelaws.asymptotic_scan(2, regime2, regime2_pmax)
    chk = regime2_checks(r2)
    ladder = [list(s) for s in regime2]
    res.add("semicircle: |kappa_3(S)| non-increasing", chk["kappa3_non_increasing"],
            kappa3_sq=chk["kappa3_sq"], ladder=ladder)
    res.add("semicircle: |kappa_4(S)| non-increasing", chk["kappa4_non_increasing"],
            kappa4=[r.cumulants[3] for r in r2.rows], kappa4_sq=chk["kappa4_sq"], ladder=ladder)
    res.add("semicircle: |kappa_2(S) - 1| decreasing", chk["kappa2_gap_decreasing"], kappa2=chk["kappa2"], ladder=ladder)
    return res


def run_psi_iso(ns=range(2, 9), tol=1e-12) -> SuiteResult:
    res = SuiteResult("psi-iso")
    for n in ns:
        rep = twist.verify_psi_iso(n, tol)
        res.add(f"psi-iso n={n}", rep.passed, **rep.to_dict())
    return res


def haar_words_n2(indices=(1, 2), max_len=2):
    pairs = [((i, j), (k, l)) for i, j, k, l in itertools.product(indices, repeat=4)]
    for length in range(1, max_len + 1):
        yield from itertools.product(pairs, repeat=length)


def haar_words_n3(samples=20, seed=0):
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        length = rng.randint(1, 2)
        out.append(tuple(
            ((rng.randint(1, 3), rng.randint(1, 3)), (rng.randint(1, 3), rng.randint(1, 3)))
            for _ in range(length)
        ))
    return out


def run_haar_transport(n2_indices=(1, 2), n3_samples=20, tol=1e-9, seed=0) -> SuiteResult:
    res = SuiteResult("haar-transport")
    for n, words in ((2, list(haar_words_n2(n2_indices))), (3, haar_words_n3(n3_samples, seed))):
        worst, bad = 0.0, []
        for w in words:
            rep = twist.verify_haar_transport(n, w, tol)
            worst = max(worst, rep.residual)
            if not rep.passed:
                bad.append(rep.to_dict())
        res.add(f"haar-transport n={n}", not bad, words=len(words), worst_residual=worst, failures=bad)
    return res


def run_structural(gw_kmax=6, gw_ms=(4, 9, 16), roundtrips=100, rt_pmax=6, mu_pmax=8, count_kmax=8, seed=0) -> SuiteResult:
    res = SuiteResult("structural")
    for k in range(1, gw_kmax + 1):
        fam = enumerate_partitions(Kind.NC, k)
        for m in gw_ms:
            ok = weingarten.weingarten(fam, m).is_inverse_of(weingarten.gram(fam, m))
            res.add(f"G W = I NC({k}) m={m}", ok)
    rng = random.Random(seed)
    bad = 0
    for _ in range(roundtrips):
        seq = freelaws.MomentSequence(Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(rt_pmax))
        back = freelaws.cumulants_to_moments(freelaws.moments_to_cumulants(seq))
        bad += back.values != seq.values
    res.add(f"moment-cumulant round trip x{roundtrips}", bad == 0, failures=bad)
    for p in range(1, mu_pmax + 1):
        fam = enumerate_partitions(Kind.NC, p)
        mu = moebius_row(fam, SetPartition.discrete(p))[fam.index(SetPartition.full(p))]
        res.add(f"mu(0_{p}, 1_{p})", mu == kreweras_moebius_bottom_top(p), value=int(mu))
    for k in range(0, count_kmax + 1):
        nc = len(enumerate_partitions(Kind.NC, k))
        nc2 = len(enumerate_partitions(Kind.NC2, 2 * k))
        res.add(f"|NC({k})| = |NC2({2 * k})| = Cat({k})", nc == nc2 == catalan(k), nc=nc, nc2=nc2)
    return res


RUNNERS = {
    "cabling": run_cabling,
    "ks-join": run_ks_join,
    "equal-laws": run_equal_laws,
    "thm34": run_thm34,
    "asymptotics": run_asymptotics,
    "psi-iso": run_psi_iso,
    "haar-transport": run_haar_transport,
    "structural": run_structural,
}
