"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

The public functions at the bottom of this module dispatch on
:func:`kdiophantine._backend.backend`. Both paths must return identical
integers; ``tests/test_kernels.py`` holds them to that.

Residue tables are bit-packed (``numpy.packbits`` with little bit order):
bit ``r & 7`` of byte ``r >> 3`` is set iff ``r`` is a square mod ``p``.
All products are formed in int64, which is exact because the modulus is
capped below 2**31.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from math import comb

import numpy as np

from ._backend import backend, njit, prange

# rows * candidates per vectorised block in the numpy enumeration path
_NP_BLOCK = 1 << 22


# ---------------------------------------------------------------------------
# residue tables


# residues squared per chunk in the numpy table builder
_SQ_CHUNK = 1 << 20


def square_bits(p: int) -> np.ndarray:
    """Packed table of squares mod p, 0 included; memory is p/8 bytes."""
    if backend() == "numba":
        return _square_bits_nb(p)
    return _square_bits_np(p)


@njit(cache=True)
def _square_bits_nb(p):
    bits = np.zeros((p + 7) // 8, dtype=np.uint8)
    for r in range(p // 2 + 1):
        s = r * r % p
        bits[s >> 3] |= np.uint8(1 << (s & 7))
    return bits


def _square_bits_np(p):
    if p <= _SQ_CHUNK:
        r = np.arange(p, dtype=np.int64)
        mask = np.zeros(p, dtype=bool)
        mask[r * r % p] = True
        return np.packbits(mask, bitorder="little")
    bits = np.zeros((p + 7) // 8, dtype=np.uint8)
    for lo in range(0, p // 2 + 1, _SQ_CHUNK):
        r = np.arange(lo, min(lo + _SQ_CHUNK, p // 2 + 1), dtype=np.int64)
        s = r * r % p
        np.bitwise_or.at(bits, s >> 3, (1 << (s & 7)).astype(np.uint8))
    return bits


def lookup(bits: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Vectorised bit-table lookup; ``r`` must already be reduced."""
    return ((bits[r >> 3] >> (r & 7)) & 1).astype(bool)


def chi_table(bits: np.ndarray, p: int) -> np.ndarray:
    r = np.arange(p, dtype=np.int64)
    chi = np.where(lookup(bits, r), 1, -1).astype(np.int8)
    chi[0] = 0
    return chi


def inverse_table(p: int) -> np.ndarray:
    """``inv[a] * a == 1 (mod p)`` for a in 1..p-1; ``inv[0] = 0``."""
    return _inverse_table_nb(p) if backend() == "numba" else _inverse_table_py(p)


@njit(cache=True)
def _inverse_table_nb(p):
    inv = np.zeros(p, dtype=np.int64)
    if p > 1:
        inv[1] = 1
    for i in range(2, p):
        inv[i] = (p - (p // i) * inv[p % i] % p) % p
    return inv


def _inverse_table_py(p):
    inv = [0] * p
    if p > 1:
        inv[1] = 1
    for i in range(2, p):
        inv[i] = (p - (p // i) * inv[p % i] % p) % p
    return np.array(inv, dtype=np.int64)


# ---------------------------------------------------------------------------
# k-Diophantine m-tuple search (numba)
#
# prods[d, j, :C(d, j)] holds the products (mod p) of every j-subset of the
# first d chosen elements. Adjoining x at depth d requires
# prods[d, k-1, i] * x + 1 to be a square for every i; the (k-1)-subsets
# made of the smallest elements come first, so most candidates die early.
# Candidates at a depth are scanned in ascending order, so vals[d, i] tracks
# prods[d, k-1, i] * x + 1 (mod p) incrementally.


@njit(cache=True)
def _admissible(bits, p, subprods, nsub, x):
    for i in range(nsub):
        v = (subprods[i] * x + 1) % p
        if not ((bits[v >> 3] >> (v & 7)) & 1):
            return False
    return True


@njit(cache=True)
def _grow(prods, binom, d, k, x, p):
    for j in range(k):
        n_old = binom[d, j]
        for i in range(n_old):
            prods[d + 1, j, i] = prods[d, j, i]
        if j >= 1:
            for i in range(binom[d, j - 1]):
                prods[d + 1, j, n_old + i] = prods[d, j - 1, i] * x % p


@njit(cache=True)
def _reset(vals, prods, binom, d, k, x, p):
    for i in range(binom[d, k - 1]):
        vals[d, i] = (prods[d, k - 1, i] * x + 1) % p


@njit(cache=True)
def _step(vals, prods, binom, d, k, p):
    # x -> x + 1 moves each q*x + 1 by q; no division needed
    for i in range(binom[d, k - 1]):
        v = vals[d, i] + prods[d, k - 1, i]
        if v >= p:
            v -= p
        vals[d, i] = v


@njit(cache=True)
def _all_square(bits, vals, nsub, d):
    for i in range(nsub):
        v = vals[d, i]
        if not ((bits[v >> 3] >> (v & 7)) & 1):
            return False
    return True


@njit(cache=True)
def _walk(bits, p, k, m, a1, binom, width, out, row0, write):
    prods = np.zeros((m + 1, k, width), dtype=np.int64)
    vals = np.empty((m, width), dtype=np.int64)
    chosen = np.empty(m, dtype=np.int64)
    cand = np.empty(m + 1, dtype=np.int64)
    prods[0, 0, 0] = 1
    if a1 > p - m:
        return 0
    if not _admissible(bits, p, prods[0, k - 1], binom[0, k - 1], a1):
        return 0
    chosen[0] = a1
    if m == 1:
        if write:
            out[row0, 0] = a1
        return 1
    _grow(prods, binom, 0, k, a1, p)
    count = 0
    d = 1
    cand[1] = a1 + 1
    _reset(vals, prods, binom, 1, k, a1 + 1, p)
    while d >= 1:
        x = cand[d]
        if x > p - m + d:
            d -= 1
            if d >= 1:
                cand[d] += 1
                _step(vals, prods, binom, d, k, p)
            continue
        if _all_square(bits, vals, binom[d, k - 1], d):
            chosen[d] = x
            if d == m - 1:
                if write:
                    for t in range(m):
                        out[row0 + count, t] = chosen[t]
                count += 1
                cand[d] += 1
                _step(vals, prods, binom, d, k, p)
            else:
                _grow(prods, binom, d, k, x, p)
                d += 1
                cand[d] = x + 1
                _reset(vals, prods, binom, d, k, x + 1, p)
        else:
            cand[d] += 1
            _step(vals, prods, binom, d, k, p)
    return count


@njit(parallel=True, cache=True)
def _count_leads_nb(bits, p, k, m, leads, binom, width):
    counts = np.zeros(leads.size, dtype=np.int64)
    scratch = np.empty((1, m), dtype=np.int64)
    for i in prange(leads.size):
        counts[i] = _walk(bits, p, k, m, leads[i], binom, width, scratch, 0, False)
    return counts


@njit(parallel=True, cache=True)
def _fill_leads_nb(bits, p, k, m, leads, offsets, binom, width, out):
    for i in prange(leads.size):
        _walk(bits, p, k, m, leads[i], binom, width, out, offsets[i], True)


def _binom_table(m: int) -> tuple[np.ndarray, int]:
    table = np.zeros((m + 1, m + 1), dtype=np.int64)
    for d in range(m + 1):
        for j in range(d + 1):
            table[d, j] = comb(d, j)
    return table, max(1, int(table.max()))


# ---------------------------------------------------------------------------
# k-Diophantine m-tuple search (numpy): breadth-first, one leading element
# at a time, each level extended by a vectorised rows x candidates mask.


def _walk_np(bits, p, k, m, a1):
    empty = np.empty((0, m), dtype=np.int64)
    if a1 > p - m:
        return empty
    if k == 1 and not lookup(bits, np.int64((a1 + 1) % p)):
        return empty
    rows = np.array([[a1]], dtype=np.int64)
    prods = [np.ones((1, 1), dtype=np.int64)] + [
        np.empty((1, 0), dtype=np.int64) for _ in range(k - 1)
    ]
    prods = _grow_np(prods, np.zeros(1, dtype=np.int64), rows[:, 0], p)
    for d in range(1, m):
        lo = int(rows[:, -1].min()) + 1
        hi = p - m + d
        if lo > hi:
            return empty
        xs = np.arange(lo, hi + 1, dtype=np.int64)
        step = max(1, _NP_BLOCK // xs.size)
        parents, picks = [], []
        for s in range(0, rows.shape[0], step):
            last = rows[s:s + step, -1]
            valid = xs[None, :] > last[:, None]
            sub = prods[k - 1][s:s + step]
            for i in range(sub.shape[1]):
                valid &= lookup(bits, (sub[:, i:i + 1] * xs[None, :] + 1) % p)
            ri, xi = np.nonzero(valid)
            parents.append(ri + s)
            picks.append(xs[xi])
        idx = np.concatenate(parents)
        x = np.concatenate(picks)
        if idx.size == 0:
            return empty
        rows = np.hstack([rows[idx], x[:, None]])
        if d < m - 1:
            prods = _grow_np(prods, idx, x, p)
    return rows


def _grow_np(prods, idx, x, p):
    out = [prods[0][idx]]
    for j in range(1, len(prods)):
        out.append(np.hstack([prods[j][idx], prods[j - 1][idx] * x[:, None] % p]))
    return out


def _map_leads(fn, leads, workers):
    if workers <= 1 or len(leads) <= 1:
        return [fn(int(a)) for a in leads]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda a: fn(int(a)), leads))


# ---------------------------------------------------------------------------
# single-tuple extension: x such that q * x + 1 is a square for every q


@njit(cache=True)
def _extension_mask_nb(bits, p, qs):
    ok = np.ones(p, dtype=np.uint8)
    for q in qs:
        v = 1
        for x in range(p):
            ok[x] &= (bits[v >> 3] >> (v & 7)) & 1
            v += q
            if v >= p:
                v -= p
    return ok.view(np.bool_)


def _extension_mask_np(bits, p, qs):
    xs = np.arange(p, dtype=np.int64)
    ok = np.ones(p, dtype=bool)
    for q in qs:
        ok &= lookup(bits, (int(q) * xs + 1) % p)
    return ok


# ---------------------------------------------------------------------------
# elliptic curve y^2 = x^3 + D point counts


@njit(parallel=True, cache=True)
def _point_counts_nb(bits, p, Ds):
    cubes = np.empty(p, dtype=np.int64)
    for x in range(p):
        cubes[x] = x * x % p * x % p
    out = np.empty(Ds.size, dtype=np.int64)
    for i in prange(Ds.size):
        D = Ds[i]
        s = 1
        for x in range(p):
            v = (cubes[x] + D) % p
            if v == 0:
                s += 1
            elif (bits[v >> 3] >> (v & 7)) & 1:
                s += 2
        out[i] = s
    return out


def _point_counts_np(bits, p, Ds):
    xs = np.arange(p, dtype=np.int64)
    cubes = xs * xs % p * xs % p
    out = np.empty(Ds.size, dtype=np.int64)
    step = max(1, _NP_BLOCK // p)
    for s in range(0, Ds.size, step):
        v = (cubes[None, :] + Ds[s:s + step, None]) % p
        per_x = np.where(v == 0, 1, 2 * lookup(bits, v))
        out[s:s + step] = 1 + per_x.sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# quadratic-character sums


@njit(cache=True)
def _poly_char_sum_nb(bits, p, coeffs):
    total = 0
    n = coeffs.size
    for x in range(p):
        v = 0
        for i in range(n - 1, -1, -1):
            v = (v * x + coeffs[i]) % p
        if v != 0:
            total += 1 if (bits[v >> 3] >> (v & 7)) & 1 else -1
    return total


def _poly_char_sum_np(bits, p, coeffs):
    xs = np.arange(p, dtype=np.int64)
    v = np.zeros(p, dtype=np.int64)
    for c in coeffs[::-1]:
        v = (v * xs + c) % p
    return int(chi_table(bits, p)[v].sum(dtype=np.int64))


@njit(parallel=True, cache=True)
def _quadratic_grid_nb(bits, p, a):
    ax2 = np.empty(p, dtype=np.int64)
    for x in range(p):
        ax2[x] = a * x % p * x % p
    grid = np.zeros((p, p), dtype=np.int64)
    for b in prange(p):
        for c in range(p):
            s = 0
            for x in range(p):
                v = (ax2[x] + b * x + c) % p
                if v != 0:
                    s += 1 if (bits[v >> 3] >> (v & 7)) & 1 else -1
            grid[b, c] = s
    return grid


def _quadratic_grid_np(bits, p, a):
    chi = chi_table(bits, p)
    xs = np.arange(p, dtype=np.int64)
    cs = np.arange(p, dtype=np.int64)
    ax2 = a * xs % p * xs % p
    grid = np.empty((p, p), dtype=np.int64)
    for b in range(p):
        base = (ax2 + b * xs) % p
        grid[b] = chi[(base[None, :] + cs[:, None]) % p].sum(axis=1, dtype=np.int64)
    return grid


# ---------------------------------------------------------------------------
# ordered distinct triples with abc = -1


@njit(parallel=True, cache=True)
def _cube_triples_nb(p, inv):
    per_a = np.zeros(p, dtype=np.int64)
    for a in prange(1, p):
        n = 0
        for b in range(1, p):
            if b == a:
                continue
            c = p - inv[a * b % p]
            if c != a and c != b:
                n += 1
        per_a[a] = n
    return per_a.sum()


def _cube_triples_np(p, inv):
    a = np.arange(1, p, dtype=np.int64)
    c = p - inv[a[:, None] * a[None, :] % p]
    ok = (a[:, None] != a[None, :]) & (c != a[:, None]) & (c != a[None, :])
    return int(ok.sum())


# ---------------------------------------------------------------------------
# dispatchers


def count_by_lead(bits, p, k, m, leads, workers=1) -> np.ndarray:
    """Number of k-Diophantine m-tuples whose smallest element is each lead."""
    leads = np.ascontiguousarray(leads, dtype=np.int64)
    if backend() == "numba":
        binom, width = _binom_table(m)
        return _count_leads_nb(bits, p, k, m, leads, binom, width)
    sizes = _map_leads(lambda a: _walk_np(bits, p, k, m, a).shape[0], leads, workers)
    return np.array(sizes, dtype=np.int64)


def tuples_for_leads(bits, p, k, m, leads, counts=None, workers=1) -> np.ndarray:
    """All tuples for the given leads, one per row, in lexicographic order."""
    leads = np.ascontiguousarray(leads, dtype=np.int64)
    if backend() == "numba":
        binom, width = _binom_table(m)
        if counts is None:
            counts = _count_leads_nb(bits, p, k, m, leads, binom, width)
        offsets = np.zeros(leads.size, dtype=np.int64)
        np.cumsum(counts[:-1], out=offsets[1:])
        out = np.empty((int(counts.sum()), m), dtype=np.int64)
        _fill_leads_nb(bits, p, k, m, leads, offsets, binom, width, out)
        return out
    blocks = _map_leads(lambda a: _walk_np(bits, p, k, m, a), leads, workers)
    if not blocks:
        return np.empty((0, m), dtype=np.int64)
    return np.concatenate(blocks)


def point_counts(bits, p, Ds) -> np.ndarray:
    """Projective point counts of y^2 = x^3 + D for each D in ``Ds``."""
    Ds = np.ascontiguousarray(Ds, dtype=np.int64) % p
    if backend() == "numba":
        return _point_counts_nb(bits, p, Ds)
    return _point_counts_np(bits, p, Ds)


def poly_char_sum(bits, p, coeffs) -> int:
    """Sum of the quadratic character of f(x) over x in F_p (coeffs low first)."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64) % p
    if backend() == "numba":
        return int(_poly_char_sum_nb(bits, p, coeffs))
    return _poly_char_sum_np(bits, p, coeffs)


def quadratic_sum_grid(bits, p, a) -> np.ndarray:
    """grid[b, c] = sum over x of chi(a x^2 + b x + c)."""
    a %= p
    if backend() == "numba":
        return _quadratic_grid_nb(bits, p, a)
    return _quadratic_grid_np(bits, p, a)


def extension_mask(bits, p, qs) -> np.ndarray:
    """mask[x] is True iff q x + 1 is a square mod p for every q in ``qs``."""
    qs = np.ascontiguousarray(qs, dtype=np.int64) % p
    if backend() == "numba":
        return _extension_mask_nb(bits, p, qs)
    return _extension_mask_np(bits, p, qs)


def cube_triples(p) -> int:
    """#{(a, b, c) pairwise distinct : abc = -1 (mod p)}, by enumeration."""
    inv = inverse_table(p)
    if backend() == "numba":
        return int(_cube_triples_nb(p, inv))
    return _cube_triples_np(p, inv)
