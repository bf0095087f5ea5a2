"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line, printed in the terminal summary
(see conftest.py).  Weingarten caches are cleared first so the timings
reflect a cold start of each criterion.
"""
import itertools
import time
from fractions import Fraction

import mpmath
import pytest

from freehyper import freelaws, suites, twist, weingarten
from freehyper.partitions import Kind, SetPartition, catalan, enumerate_partitions, moebius_row

from conftest import ACCEPTANCE_LINES
from oracles import count_nc_pairings, nc_partitions

pytestmark = pytest.mark.acceptance


class Criterion:
    def __init__(self, name, budget_s):
        self.name, self.budget = name, budget_s

    def __enter__(self):
        weingarten.clear_cache()
        self.t0 = time.perf_counter()
        return self

    def finish(self, ok: bool, detail: str):
        elapsed = time.perf_counter() - self.t0
        in_time = elapsed < self.budget
        passed = bool(ok) and in_time
        ACCEPTANCE_LINES.append((self.name, passed, f"{detail}; {elapsed:.1f}s (budget {self.budget}s)"))
        print(f"{'PASS' if passed else 'FAIL'} {self.name}: {detail}; {elapsed:.1f}s")
        assert ok, detail
        assert in_time, f"{elapsed:.1f}s exceeds the {self.budget}s budget"

    def __exit__(self, *exc):
        return False


def test_c1_cabling_identity():
    with Criterion("C1 cabling Weingarten identity", 60) as c:
        bad, pairs = [], 0
        for n in (2, 3):
            for k in range(1, 6):
                rep = weingarten.verify_cabling_weingarten(k, n)
                pairs += rep.pairs_checked
                if not rep.passed:
                    bad.append((k, n, len(rep.failures)))
        c.finish(not bad, f"{pairs} pairs exact, failures={bad}")


def test_c2_kodiyalam_sunder_join():
    with Criterion("C2 Kodiyalam-Sunder join formula", 30) as c:
        bad, pairs = [], 0
        for k in range(1, 7):
            rep = weingarten.verify_ks_join(k)
            pairs += rep.pairs_checked
            if not rep.passed:
                bad.append(k)
        c.finish(not bad, f"{pairs} pairs exact, failing k={bad}")


def test_c3_equality_of_laws():
    with Criterion("C3 equality of laws u^2 vs X", 300) as c:
        bad, words = [], 0
        for n in (2, 3):
            for pat in suites.equal_law_patterns(n, 2):
                words += 1
                if not weingarten.verify_equal_laws(n, pat).passed:
                    bad.append((n, pat))
        for pat in suites.seeded_words(0, 20, 3, 2, 2):
            words += 1
            if not weingarten.verify_equal_laws(2, pat).passed:
                bad.append((2, pat))
        c.finish(not bad, f"{words} words exact, failures={bad[:3]}")


def test_c4_closed_form():
    with Criterion("C4 closed form vs exact moments", 120) as c:
        worst = 0.0
        for n in (3, 4, 5):
            for k in range(1, 7):
                exact = weingarten.fhg_moment(n, n, n * n, k)
                value = freelaws.thm34_closed_form(n, k, 30)
                with mpmath.workdps(30):
                    rel = float(abs(value - mpmath.mpf(exact.numerator) / exact.denominator) / exact)
                worst = max(worst, rel)
        c.finish(worst < 1e-9, f"worst relative error {worst:.2e} (tol 1e-9)")


def test_c5_free_poisson_limit():
    with Criterion("C5 free Poisson limit", 60) as c:
        ladder = [(2, 2, 4), (4, 4, 16), (8, 8, 64)]
        target = [catalan(p) for p in range(1, 5)]
        dist = []
        for n, m, N in ladder:
            mom = [weingarten.fhg_moment(n, m, N, p) for p in range(1, 5)]
            dist.append(max(abs(a - b) for a, b in zip(mom, target)))
        ok = all(a > b for a, b in zip(dist, dist[1:]))
        c.finish(ok, "distances " + ", ".join(f"{float(d):.4f}" for d in dist))


SEMICIRCLE_LADDER = [(4, 2, 8), (8, 2, 16), (16, 2, 32)]


def semicircle_cumulants():
    return [freelaws.standardized_cumulants(n, m, N, 4) for n, m, N in SEMICIRCLE_LADDER]


def test_c6a_semicircle_kappa3():
    with Criterion("C6a semicircle |kappa_3(S)| non-increasing", 60) as c:
        sq = [ks[2].square for ks in semicircle_cumulants()]
        ok = all(a >= b for a, b in zip(sq, sq[1:]))
        c.finish(ok, "kappa_3^2 " + ", ".join(str(s) for s in sq))


def test_c6b_semicircle_kappa4():
    with Criterion("C6b semicircle |kappa_4(S)| non-increasing", 60) as c:
        ks = semicircle_cumulants()
        sq = [k[3].square for k in ks]
        ok = all(a >= b for a, b in zip(sq, sq[1:]))
        c.finish(ok, "kappa_4 " + ", ".join(f"{k[3].to_float():+.4f}" for k in ks))


def test_c6c_semicircle_kappa2():
    with Criterion("C6c semicircle |kappa_2(S) - 1| decreasing", 60) as c:
        k2 = [suites.rational_sqrt(ks[1].square) * ks[1].sign for ks in semicircle_cumulants()]
        gaps = [abs(k - 1) for k in k2]
        ok = all(a > b for a, b in zip(gaps, gaps[1:]))
        c.finish(ok, "kappa_2 " + ", ".join(str(k) for k in k2))


def test_c7_psi_isomorphism():
    with Criterion("C7 matrix model of the twisted algebra", 10) as c:
        worst, bad = 0.0, []
        for n in range(2, 9):
            rep = twist.verify_psi_iso(n, 1e-12)
            worst = max(worst, rep.residual)
            if not rep.passed:
                bad.append(n)
        c.finish(not bad, f"worst residual {worst:.1e} incl. trace transport (tol 1e-12), failing n={bad}")


def test_c8_haar_transport():
    with Criterion("C8 Haar transport", 300) as c:
        words = [(2, w) for w in suites.haar_words_n2((1, 2))] + [(3, w) for w in suites.haar_words_n3(20, 0)]
        worst, bad = 0.0, []
        for n, w in words:
            rep = twist.verify_haar_transport(n, w, 1e-9)
            worst = max(worst, rep.residual)
            if not rep.passed:
                bad.append((n, w))
        c.finish(not bad, f"{len(words)} words, worst residual {worst:.1e} (tol 1e-9)")


def test_c9_structural():
    with Criterion("C9 structural suites", 120) as c:
        problems = []
        for k in range(1, 7):
            fam = enumerate_partitions(Kind.NC, k)
            for m in (4, 9, 16):
                if not weingarten.weingarten(fam, m).is_inverse_of(weingarten.gram(fam, m)):
                    problems.append(f"GW!=I k={k} m={m}")
        import random
        rng = random.Random(0)
        for _ in range(100):
            seq = freelaws.MomentSequence(Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(6))
            if freelaws.cumulants_to_moments(freelaws.moments_to_cumulants(seq)).values != seq.values:
                problems.append("round trip")
        for p in range(1, 9):
            fam = enumerate_partitions(Kind.NC, p)
            mu = moebius_row(fam, SetPartition.discrete(p))[fam.index(SetPartition.full(p))]
            if mu != (-1) ** (p - 1) * catalan(p - 1):
                problems.append(f"mu p={p}")
        for k in range(0, 9):
            nc, nc2 = len(enumerate_partitions(Kind.NC, k)), len(enumerate_partitions(Kind.NC2, 2 * k))
            if not (nc == nc2 == catalan(k) == len(nc_partitions(k)) == count_nc_pairings(k)):
                problems.append(f"count k={k}")
        c.finish(not problems, f"problems={problems}")
