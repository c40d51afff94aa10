"""Enumeration, counting and certification of k-Diophantine m-tuples in F_p.

A k-Diophantine m-tuple is a set of m distinct nonzero residues such that
the product of any k of them, plus one, is a square (zero included).
Tuples are represented as ascending ``tuple[int, ...]``.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from . import kernels
from .curves import represent
from .errors import BadParameters, KTooLarge, NoWitness, ResourceLimit, VerificationError
from .field import PrimeField, is_square_mod

TupleSet = tuple[int, ...]

# leading elements handed to a kernel call between budget checks
LEAD_BLOCK = 64


@dataclass
class CountReport:
    p: int
    k: int
    m: int
    brute_count: int
    closed_form: int | None = None
    elapsed: float = 0.0
    quantity: str = "tuples"
    note: str = ""

    @property
    def delta(self) -> int | None:
        if self.closed_form is None:
            return None
        return self.brute_count - self.closed_form


@dataclass
class WitnessReport:
    p: int
    k: int
    m: int
    tuple: TupleSet
    start: TupleSet
    extension_trace: list[int] = field(default_factory=list)
    candidate_count: int = 0
    backtracks: int = 0


@dataclass(frozen=True)
class BoundSpec:
    """Prime thresholds above which a k-Diophantine m-tuple must exist.

    ``bound`` is the general threshold; ``k3_bound`` (k == 3) and
    ``diagonal_bound`` (m == k) are the sharper special cases, or None.
    """

    k: int
    m: int
    bound: int
    k3_bound: int | None = None
    diagonal_bound: int | None = None


def _check_km(k: int, m: int) -> None:
    if k < 1 or m < 1:
        raise BadParameters(f"k and m must be positive (k={k}, m={m})")
    if k > m:
        raise KTooLarge(k, m)


def canonical(S: Iterable[int], F: PrimeField) -> TupleSet:
    elems = [int(a) for a in S]
    if any(not 0 < a < F.p for a in elems):
        raise BadParameters(f"tuple elements must lie in 1..{F.p - 1}: {elems}")
    if len(set(elems)) != len(elems):
        raise BadParameters(f"tuple elements must be distinct: {elems}")
    return tuple(sorted(elems))


def is_tuple(S: Iterable[int], k: int, F: PrimeField) -> bool:
    T = canonical(S, F)
    _check_km(k, len(T))
    return all(
        is_square_mod(math.prod(sub) + 1, F) for sub in itertools.combinations(T, k)
    )


# ---------------------------------------------------------------------------
# enumeration and counting


def _lead_blocks(F: PrimeField, m: int) -> Iterator[np.ndarray]:
    leads = np.arange(1, max(F.p - m + 1, 1), dtype=np.int64)
    for s in range(0, leads.size, LEAD_BLOCK):
        yield leads[s:s + LEAD_BLOCK]


def enumerate_array(
    k: int,
    m: int,
    F: PrimeField,
    *,
    workers: int = 1,
    max_tuples: int | None = None,
    max_seconds: float | None = None,
) -> np.ndarray:
    """All k-Diophantine m-tuples as rows of an int64 array, in lexicographic order.

    The search is partitioned on the smallest element; partitions are
    concatenated in order, so the output does not depend on ``workers``.
    Raises :class:`ResourceLimit` once either budget is exceeded.
    """
    _check_km(k, m)
    t0 = time.perf_counter()
    blocks, total = [], 0
    for leads in _lead_blocks(F, m):
        counts = kernels.count_by_lead(F.square_bits, F.p, k, m, leads, workers)
        total += int(counts.sum())
        if max_tuples is not None and total > max_tuples:
            raise ResourceLimit(f"more than {max_tuples} tuples for p={F.p}, k={k}, m={m}")
        blocks.append(
            kernels.tuples_for_leads(F.square_bits, F.p, k, m, leads, counts, workers)
        )
        if max_seconds is not None and time.perf_counter() - t0 > max_seconds:
            raise ResourceLimit(f"time budget of {max_seconds}s exceeded")
    if not blocks:
        return np.empty((0, m), dtype=np.int64)
    return np.concatenate(blocks)


def enumerate_tuples(k: int, m: int, F: PrimeField, **budget) -> list[TupleSet]:
    return [tuple(row) for row in enumerate_array(k, m, F, **budget).tolist()]


def count_tuples(
    k: int,
    m: int,
    F: PrimeField,
    *,
    workers: int = 1,
    max_seconds: float | None = None,
    verify: bool = True,
) -> CountReport:
    """Streaming count; attaches the closed form when (k, m) == (3, 3)."""
    _check_km(k, m)
    t0 = time.perf_counter()
    total = 0
    for leads in _lead_blocks(F, m):
        total += int(kernels.count_by_lead(F.square_bits, F.p, k, m, leads, workers).sum())
        if max_seconds is not None and time.perf_counter() - t0 > max_seconds:
            raise ResourceLimit(f"time budget of {max_seconds}s exceeded")
    report = CountReport(F.p, k, m, total, elapsed=time.perf_counter() - t0)
    if (k, m) == (3, 3) and F.p >= 5:
        report.closed_form = closed_form_N3(F)
        if verify and report.delta != 0:
            raise VerificationError(
                f"N3({F.p}): enumeration {total} != formula {report.closed_form}"
            )
    return report


def closed_form_N3(F: PrimeField) -> int:
    """Number of 3-Diophantine triples: C(p-1, 3)/2, plus (a+1)/3 when p = 1 mod 3."""
    p = F.p
    if p < 5:
        raise BadParameters("closed_form_N3 needs p >= 5")
    main, rem = divmod(math.comb(p - 1, 3), 2)
    assert rem == 0
    if p % 3 == 2:
        return main
    a = represent(F).a
    assert (a + 1) % 3 == 0
    return main + (a + 1) // 3


def cube_count(F: PrimeField, verify: bool = True) -> CountReport:
    """Ordered triples of pairwise-distinct (a, b, c) with abc = -1."""
    p = F.p
    if p < 5:
        raise BadParameters("cube_count needs p >= 5")
    t0 = time.perf_counter()
    brute = kernels.cube_triples(p)
    closed = (p - 2) * (p - 3) + (4 if p % 3 == 1 else 0)
    report = CountReport(
        p, 3, 3, brute, closed, time.perf_counter() - t0,
        quantity="cube_triples",
        note="ordered triples with pairwise-distinct coordinates",
    )
    if verify and report.delta != 0:
        raise VerificationError(f"cube count mod {p}: brute {brute} != closed {closed}")
    return report


def pair_count(F: PrimeField, verify: bool = True) -> CountReport:
    """Ordered pairs a != b with ab = -1."""
    p = F.p
    t0 = time.perf_counter()
    a = np.arange(1, p, dtype=np.int64)
    hit = (a[:, None] * a[None, :] % p == p - 1) & (a[:, None] != a[None, :])
    brute = int(hit.sum())
    closed = p - 3 if p % 4 == 1 else p - 1
    report = CountReport(p, 2, 2, brute, closed, time.perf_counter() - t0, quantity="pairs")
    if verify and report.delta != 0:
        raise VerificationError(f"pair count mod {p}: brute {brute} != closed {closed}")
    return report


def asymptotic_ratio(k: int, F: PrimeField, **kwargs) -> float:
    """N_k(p) * k! * 2 / p^k, which tends to 1."""
    if k < 2:
        raise BadParameters("asymptotic_ratio needs k >= 2")
    n = count_tuples(k, k, F, **kwargs).brute_count
    return float(Fraction(n * math.factorial(k) * 2, F.p**k))


# ---------------------------------------------------------------------------
# existence bounds and witnesses


def existence_bound(k: int, m: int) -> BoundSpec:
    if k < 2 or m < k:
        raise BadParameters(f"existence_bound needs 2 <= k <= m (k={k}, m={m})")
    c = math.comb(m, k - 1)
    # 4^(c+1) * (c/2 + m + 1)^2 == 4^c * (c + 2m + 2)^2
    general = 4**c * (c + 2 * m + 2) ** 2
    k3 = 2 ** (m * m - m - 2) * (m * m + 3 * m + 4) ** 2 if k == 3 else None
    diagonal = 4**k * (3 * k + 2) ** 2 if m == k else None
    return BoundSpec(k, m, general, k3, diagonal)


def admissible_extensions(T: TupleSet, k: int, F: PrimeField) -> np.ndarray:
    """Ascending x outside T and 0 such that T + {x} keeps every new k-product square."""
    qs = [math.prod(sub) % F.p for sub in itertools.combinations(T, k - 1)]
    ok = kernels.extension_mask(F.square_bits, F.p, qs)
    ok[0] = False
    ok[list(T)] = False
    return np.flatnonzero(ok)


def _subsets(lo: int, hi: int, k: int) -> Iterator[TupleSet]:
    """k-subsets of lo..hi-1 in lexicographic order, without materialising the range."""
    if k == 0:
        yield ()
        return
    for a in range(lo, hi - k + 1):
        for rest in _subsets(a + 1, hi, k - 1):
            yield (a,) + rest


def _start_tuples(k: int, F: PrimeField) -> Iterator[TupleSet]:
    for sub in _subsets(1, F.p, k):
        if is_square_mod(math.prod(sub) + 1, F):
            yield sub


def find_witness(k: int, m: int, F: PrimeField, max_nodes: int = 1_000_000) -> WitnessReport:
    """Constructive search for a k-Diophantine m-tuple.

    Takes the lexicographically first k-Diophantine k-tuple, then keeps
    adjoining the smallest admissible x. On a dead end it backtracks to the
    next admissible x (and, if needed, the next starting tuple), so the
    plain greedy path is always tried first.
    """
    if k < 2:
        raise BadParameters("find_witness needs k >= 2")
    _check_km(k, m)
    if m > F.p - 1:
        raise NoWitness(f"F_{F.p} has fewer than {m} nonzero elements")
    nodes = backtracks = 0
    seen: set[frozenset[int]] = set()
    for start in _start_tuples(k, F):
        if m == k:
            g = admissible_extensions(start[:-1], k, F).size
            return WitnessReport(F.p, k, m, start, start, [], g, backtracks)
        stack = [(list(start), iter(admissible_extensions(start, k, F).tolist()))]
        while stack:
            chain, it = stack[-1]
            x = next(it, None)
            if x is None:
                stack.pop()
                backtracks += 1
                continue
            grown = chain + [x]
            key = frozenset(grown)
            if key in seen:
                continue
            seen.add(key)
            nodes += 1
            if nodes > max_nodes:
                raise NoWitness(f"search budget of {max_nodes} nodes exhausted at p={F.p}")
            if len(grown) == m:
                g = admissible_extensions(tuple(chain), k, F).size
                witness = tuple(sorted(grown))
                if not is_tuple(witness, k, F):
                    raise VerificationError(f"witness {witness} fails certification")
                return WitnessReport(F.p, k, m, witness, start, grown[k:], g, backtracks)
            stack.append((grown, iter(admissible_extensions(tuple(grown), k, F).tolist())))
    raise NoWitness(f"no {k}-Diophantine {m}-tuple in F_{F.p}")
