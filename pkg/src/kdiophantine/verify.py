"""Dual-evaluation sweeps: every closed form against its brute-force oracle.

Each suite returns a :class:`SuiteResult`; ``counterexample`` holds the
first disagreement found, after which the suite stops.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from sympy import primerange

from . import kernels
from .charsums import (
    PatternSpec,
    Polynomial,
    cubic_sum_brute,
    cubic_sum_closed,
    is_constant_times_square,
    pattern_bound_check,
    pattern_count,
    weil_check,
)
from .curves import all_point_counts, gauss_candidates
from .field import make_field
from .tuples import closed_form_N3, count_tuples, cube_count, pair_count

SUITES = ("charsums", "cubicsum", "gauss", "cubecount", "paircount", "patterns", "weil", "n3")
DEFAULT_SEED = 20210801
RANDOM_PRIMES = (101, 499)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    passed: int = 0
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None and self.checked == self.passed

    def record(self, good: bool, what) -> bool:
        self.checked += 1
        if good:
            self.passed += 1
        elif self.counterexample is None:
            self.counterexample = what() if callable(what) else str(what)
        return good

    def as_dict(self) -> dict:
        return {
            "checked": self.checked,
            "passed": self.passed,
            "ok": self.ok,
            "counterexample": self.counterexample,
        }


def odd_primes(lo: int, hi: int) -> list[int]:
    """Odd primes p with lo <= p <= hi."""
    return [int(p) for p in primerange(max(lo, 3), hi + 1)]


def _random_primes(pmax: int) -> list[int]:
    chosen = [q for q in RANDOM_PRIMES if q <= pmax]
    if not chosen:
        small = odd_primes(3, pmax)
        chosen = small[-1:]
    return chosen


def suite_charsums(pmax: int) -> SuiteResult:
    """Linear sums vanish and quadratic sums match their closed form, for every (a, b, c)."""
    res = SuiteResult("charsums")
    for p in odd_primes(3, pmax):
        F = make_field(p)
        chi = F.chi.astype(np.int64)
        xs = np.arange(p, dtype=np.int64)
        b = c = np.arange(p, dtype=np.int64)
        for a in range(1, p):
            lin = chi[(a * xs[None, :] + b[:, None]) % p].sum(axis=1)
            for bad in np.flatnonzero(lin != 0)[:1]:
                res.record(False, f"p={p} linear a={a} b={bad}: sum {lin[bad]}")
                return res
            res.checked += p
            res.passed += p

            grid = kernels.quadratic_sum_grid(F.square_bits, p, a)
            disc = (b[:, None] ** 2 - 4 * a * c[None, :]) % p
            closed = np.where(disc == 0, (p - 1) * int(chi[a]), -int(chi[a]))
            wrong = np.argwhere(grid != closed)
            if wrong.size:
                bb, cc = wrong[0]
                res.record(False, f"p={p} quadratic ({a},{bb},{cc}): brute {grid[bb, cc]} "
                                  f"closed {closed[bb, cc]}")
                return res
            res.checked += p * p
            res.passed += p * p
    return res


def suite_cubicsum(pmax: int) -> SuiteResult:
    res = SuiteResult("cubicsum")
    for p in odd_primes(5, pmax):
        F = make_field(p)
        brute, closed = cubic_sum_brute(F), cubic_sum_closed(F)
        if not res.record(brute == closed, lambda: f"p={p}: brute {brute} closed {closed}"):
            break
    return res


def suite_gauss(pmax: int) -> SuiteResult:
    res = SuiteResult("gauss")
    for p in odd_primes(3, pmax):
        F = make_field(p)
        counts = all_point_counts(F)
        for D in range(1, p):
            exact = int(counts[D])
            cands = gauss_candidates(D, F)
            if not res.record(exact in cands, lambda: f"p={p} D={D}: {exact} not in {sorted(cands)}"):
                return res
    return res


def suite_cubecount(pmax: int) -> SuiteResult:
    res = SuiteResult("cubecount")
    for p in odd_primes(5, pmax):
        r = cube_count(make_field(p), verify=False)
        if not res.record(r.delta == 0, lambda: f"p={p}: brute {r.brute_count} closed {r.closed_form}"):
            break
    return res


def suite_paircount(pmax: int) -> SuiteResult:
    res = SuiteResult("paircount")
    for p in odd_primes(3, pmax):
        r = pair_count(make_field(p), verify=False)
        if not res.record(r.delta == 0, lambda: f"p={p}: brute {r.brute_count} closed {r.closed_form}"):
            break
    return res


def _pattern_ok(spec: PatternSpec, F) -> bool:
    rep = pattern_count(spec, F)
    return 0 <= rep.defect <= spec.k / 2 and pattern_bound_check(spec, F)


def exhaustive_patterns(p: int, kmax: int = 3):
    for k in range(1, kmax + 1):
        for shifts in itertools.combinations(range(p), k):
            for signs in itertools.product((1, -1), repeat=k):
                yield PatternSpec(shifts, signs)


def random_patterns(p: int, n: int, rng: np.random.Generator, kmax: int = 6):
    for _ in range(n):
        k = int(rng.integers(1, kmax + 1))
        shifts = tuple(int(s) for s in rng.choice(p, size=k, replace=False))
        signs = tuple(int(s) for s in rng.choice((-1, 1), size=k))
        yield PatternSpec(shifts, signs)


def suite_patterns(pmax: int, seed: int = DEFAULT_SEED, samples: int = 1000) -> SuiteResult:
    res = SuiteResult("patterns")
    for p in odd_primes(3, min(pmax, 31)):
        F = make_field(p)
        for spec in exhaustive_patterns(p):
            if not res.record(_pattern_ok(spec, F), lambda: f"p={p} {spec}"):
                return res
    rng = np.random.default_rng(seed)
    for p in _random_primes(pmax):
        F = make_field(p)
        for spec in random_patterns(p, samples, rng):
            if not res.record(_pattern_ok(spec, F), lambda: f"p={p} {spec}"):
                return res
    return res


def random_applicable_polys(F, degree: int, n: int, rng: np.random.Generator):
    """``n`` random polynomials of exact degree that are not c * g(x)^2."""
    out = []
    while len(out) < n:
        coeffs = [int(c) for c in rng.integers(0, F.p, size=degree)] + [int(rng.integers(1, F.p))]
        f = Polynomial.over(coeffs, F)
        if not is_constant_times_square(f, F):
            out.append(f)
    return out


def suite_weil(pmax: int, seed: int = DEFAULT_SEED, samples: int = 1000) -> SuiteResult:
    res = SuiteResult("weil")
    rng = np.random.default_rng(seed)
    for p in _random_primes(pmax):
        F = make_field(p)
        for d in range(2, 7):
            for f in random_applicable_polys(F, d, samples, rng):
                rep = weil_check(f, F)
                if not res.record(rep.holds, lambda: f"p={p} f={f.coeffs}: |{rep.sum}| > {rep.bound}"):
                    return res
    return res


def suite_n3(pmax: int, workers: int = 1) -> SuiteResult:
    res = SuiteResult("n3")
    for p in odd_primes(5, pmax):
        F = make_field(p)
        n = count_tuples(3, 3, F, workers=workers, verify=False).brute_count
        closed = closed_form_N3(F)
        if not res.record(n == closed, lambda: f"p={p}: enumeration {n} formula {closed}"):
            break
    return res


def run_suite(name: str, pmax: int, seed: int = DEFAULT_SEED, samples: int = 1000,
              workers: int = 1) -> SuiteResult:
    if name == "patterns":
        return suite_patterns(pmax, seed, samples)
    if name == "weil":
        return suite_weil(pmax, seed, samples)
    if name == "n3":
        return suite_n3(pmax, workers)
    runners = {
        "charsums": suite_charsums,
        "cubicsum": suite_cubicsum,
        "gauss": suite_gauss,
        "cubecount": suite_cubecount,
        "paircount": suite_paircount,
    }
    if name not in runners:
        raise ValueError(f"unknown suite {name!r}")
    return runners[name](pmax)
