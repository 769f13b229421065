"""Complete short-vector enumeration over a positive-definite Gram matrix.

Fincke-Pohst enumeration in exact arithmetic: the Gram matrix is cleared to
integers, its LDL decomposition is taken over the rationals once, and the
branch-and-bound recursion is then carried out purely in arbitrary-precision
integers by pre-scaling each level with a fixed common denominator.  No
floating point is involved anywhere, so the emitted vector set is complete
and the accept/reject decisions are exact.

Vectors come in +- pairs; one canonical representative is stored per pair
(the outermost nonzero coefficient is positive) and counts double it back.
The outermost coordinate is the last one, traversal order is deterministic,
and the final representative list is sorted lexicographically, so output is
identical no matter how the top levels are partitioned across workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterator, Optional

from .lattices import Lattice


class EnumerationError(ValueError):
    pass


@dataclass(frozen=True)
class ShortVectorSet:
    """Nonzero lattice vectors with normalized norm <= bound, up to sign."""

    bound: Fraction
    reps: tuple[tuple[tuple[int, ...], Fraction], ...]  # (coefficients, norm), sorted

    @property
    def count(self) -> int:
        """Number of vectors counting both signs."""
        return 2 * len(self.reps)

    def grouped_by_norm(self) -> dict[Fraction, list[tuple[int, ...]]]:
        groups: dict[Fraction, list[tuple[int, ...]]] = {}
        for v, q in self.reps:
            groups.setdefault(q, []).append(v)
        return groups

    def counts_by_norm(self) -> dict[Fraction, int]:
        """Vector count per norm value, counting both signs."""
        return {q: 2 * len(vs) for q, vs in sorted(self.grouped_by_norm().items())}

    def signed_vectors(self) -> Iterator[tuple[int, ...]]:
        for v, _ in self.reps:
            yield v
            yield tuple(-x for x in v)

    def min_norm(self) -> Fraction:
        if not self.reps:
            raise EnumerationError("empty vector set has no minimum")
        return min(q for _, q in self.reps)


class _Enumerator:
    """Exact integer-scaled Fincke-Pohst state for one Gram matrix and bound."""

    def __init__(self, gram_int: list[list[int]], scale: Fraction, bound: Fraction):
        # normalized norm of coefficient row x is (x gram_int x^T) / scale
        n = len(gram_int)
        self.n = n
        self.gram_int = gram_int
        self.scale = scale
        self.bound = bound
        threshold = bound * scale  # cutoff for the integer quadratic form
        q = [[Fraction(gram_int[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            d = q[i][i]
            if d <= 0:
                raise EnumerationError("Gram matrix is not positive definite")
            for j in range(i + 1, n):
                t = q[i][j] / d
                for k in range(j, n):
                    q[j][k] -= t * q[i][k]
                q[i][j] = t
        self.d_num = [q[i][i].numerator for i in range(n)]
        self.d_den = [q[i][i].denominator for i in range(n)]
        self.m_den = [1] * n
        self.c_num = [[0] * n for _ in range(n)]
        for i in range(n):
            md = 1
            for j in range(i + 1, n):
                md = lcm(md, q[i][j].denominator)
            self.m_den[i] = md
            for j in range(i + 1, n):
                self.c_num[i][j] = int(q[i][j] * md)
        # R[i] is the fixed denominator of the remaining-bound value at level i;
        # R[i-1] absorbs what the level-i update divides by, keeping it integral.
        R = [0] * n
        R[n - 1] = threshold.denominator
        for i in range(n - 1, 0, -1):
            R[i - 1] = lcm(R[i], self.d_den[i] * self.m_den[i] * self.m_den[i])
        self.R = R
        self.R_leaf = lcm(R[0], self.d_den[0] * self.m_den[0] * self.m_den[0])
        self.tau_top = threshold.numerator * (R[n - 1] // threshold.denominator)
        self.thr_leaf = threshold.numerator * (self.R_leaf // threshold.denominator)

    # ---------------------------------------------------------------- ranges
    def _level_range(self, i: int, tau: int, nu: int) -> tuple[int, int]:
        """Inclusive x_i range allowed by the remaining bound tau at level i."""
        di_n, di_d, mi = self.d_num[i], self.d_den[i], self.m_den[i]
        a = di_d * mi * mi * tau
        b = di_n * self.R[i]
        s = isqrt(a // b)
        if b * (s + 1) * (s + 1) <= a:
            s += 1
        lo_num = -s - nu
        lo = lo_num // mi if lo_num % mi == 0 else lo_num // mi + 1
        hi = (s - nu) // mi
        return lo, hi

    # ---------------------------------------------------------------- walk
    def run(self, prefix: tuple[int, ...] = ()) -> list[tuple[tuple[int, ...], int]]:
        """Enumerate canonical representatives in the subtree fixed by prefix.

        ``prefix`` assigns the outermost coordinates x_{n-1}, x_{n-2}, ...
        Representatives are returned as (coefficients, unscaled integer norm).
        """
        n = self.n
        out: list[tuple[tuple[int, ...], int]] = []
        x = [0] * n
        nu_stack = [[0] * n for _ in range(n + 1)]
        tau = self.tau_top
        all_zero = True
        level = n - 1
        for val in prefix:
            lo, hi = self._level_range(level, tau, nu_stack[level + 1][level])
            if not (lo <= val <= hi):
                return out
            tau = self._descend(level, val, tau, nu_stack)
            if tau is None:
                return out
            x[level] = val
            all_zero = all_zero and val == 0
            level -= 1
        self._walk(level, tau, all_zero, x, nu_stack, out)
        return out

    def _descend(self, i: int, xi: int, tau: int, nu_stack) -> Optional[int]:
        di_n, di_d, mi = self.d_num[i], self.d_den[i], self.m_den[i]
        nu = nu_stack[i + 1][i]
        y = mi * xi + nu
        if i == 0:
            rl = self.R_leaf
            t2 = tau * (rl // self.R[0]) - (rl * di_n) // (di_d * mi * mi) * y * y
            return t2 if t2 >= 0 else None
        f1 = self.R[i - 1] // self.R[i]
        f2 = (self.R[i - 1] * di_n) // (di_d * mi * mi)
        t2 = tau * f1 - f2 * y * y
        if t2 < 0:
            return None
        cur, nxt = nu_stack[i + 1], nu_stack[i]
        if xi == 0:
            nxt[:i] = cur[:i]
        else:
            c = self.c_num
            for j in range(i):
                nxt[j] = cur[j] + c[j][i] * xi
        return t2

    def _walk(self, i: int, tau: int, all_zero: bool, x, nu_stack, out) -> None:
        di_n, di_d, mi = self.d_num[i], self.d_den[i], self.m_den[i]
        nu = nu_stack[i + 1][i]
        lo, hi = self._level_range(i, tau, nu)
        start = 0 if (all_zero and lo < 0) else lo
        if i == 0:
            rl = self.R_leaf
            f1 = rl // self.R[0]
            f2 = (rl * di_n) // (di_d * mi * mi)
            thr = self.thr_leaf
            for xi in range(start, hi + 1):
                if all_zero and xi == 0:
                    continue
                y = mi * xi + nu
                t2 = tau * f1 - f2 * y * y
                if t2 < 0:
                    continue
                x[0] = xi
                out.append((tuple(x), (thr - t2) // rl))  # integer norm, exact
            return
        f1 = self.R[i - 1] // self.R[i]
        f2 = (self.R[i - 1] * di_n) // (di_d * mi * mi)
        cur, nxt = nu_stack[i + 1], nu_stack[i]
        c = self.c_num
        for xi in range(start, hi + 1):
            y = mi * xi + nu
            t2 = tau * f1 - f2 * y * y
            if t2 < 0:
                continue
            x[i] = xi
            if xi == 0:
                nxt[:i] = cur[:i]
            else:
                for j in range(i):
                    nxt[j] = cur[j] + c[j][i] * xi
            self._walk(i - 1, t2, all_zero and xi == 0, x, nu_stack, out)

    # ---------------------------------------------------------------- tasks
    def top_tasks(self, min_tasks: int) -> list[tuple[int, ...]]:
        """Split the canonical search tree into subtree prefixes for workers."""
        tasks: list[tuple[int, ...]] = [()]
        level = self.n - 1
        while len(tasks) < min_tasks and level >= max(self.n - 3, 1):
            new: list[tuple[int, ...]] = []
            for prefix in tasks:
                nu_stack = [[0] * self.n for _ in range(self.n + 1)]
                tau: Optional[int] = self.tau_top
                lv = self.n - 1
                ok = True
                for val in prefix:
                    tau = self._descend(lv, val, tau, nu_stack)
                    if tau is None:
                        ok = False
                        break
                    lv -= 1
                if not ok:
                    continue
                lo, hi = self._level_range(lv, tau, nu_stack[lv + 1][lv])
                if all(v == 0 for v in prefix) and lo < 0:
                    lo = 0
                new.extend(prefix + (v,) for v in range(lo, hi + 1))
            tasks = new
            level -= 1
        return tasks


def _worker(args) -> list[tuple[tuple[int, ...], int]]:
    gram_int, scale, bound, prefixes = args
    enum = _Enumerator(gram_int, scale, bound)
    out: list[tuple[tuple[int, ...], int]] = []
    for p in prefixes:
        out.extend(enum.run(p))
    return out


def _integer_form(lat: Lattice) -> tuple[list[list[int]], Fraction]:
    """Integer matrix g and scale s with normalized_norm(x) = (x g x^T) / s."""
    gram = lat.gram
    d = 1
    for row in gram.entries:
        for v in row:
            d = lcm(d, v.denominator)
    gram_int = [[int(v * d) for v in row] for row in gram.entries]
    return gram_int, Fraction(d) * lat.norm_divisor


def enumerate_short_vectors(lat: Lattice, bound, threads: Optional[int] = None) -> ShortVectorSet:
    """All nonzero lattice vectors with normalized norm <= bound, up to sign."""
    bound = Fraction(bound)
    if bound <= 0:
        raise EnumerationError("bound must be positive")
    gram_int, scale = _integer_form(lat)
    enum = _Enumerator(gram_int, scale, bound)
    if threads is None:
        threads = os.cpu_count() or 1
    if threads > 1 and lat.dimension >= 14:
        tasks = enum.top_tasks(4 * threads)
        chunks: list[list[tuple[int, ...]]] = [[] for _ in range(threads)]
        for i, t in enumerate(tasks):
            chunks[i % threads].append(t)
        args = [(gram_int, scale, bound, c) for c in chunks if c]
        raw: list[tuple[tuple[int, ...], int]] = []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_worker, args):
                raw.extend(part)
    else:
        raw = enum.run()
    raw.sort(key=lambda item: item[0])
    reps = tuple((v, Fraction(q, 1) / scale) for v, q in raw)
    return ShortVectorSet(bound, reps)


def minimum(lat: Lattice, threads: Optional[int] = None) -> Fraction:
    """Smallest normalized norm of a nonzero lattice vector."""
    g = lat.normalized_gram()
    diag_min = min(g[i, i] for i in range(lat.dimension))
    for b in (diag_min / 4, diag_min / 2, diag_min):
        sv = enumerate_short_vectors(lat, b, threads)
        if sv.reps:
            return sv.min_norm()
    raise AssertionError("unreachable: basis vectors realize the diagonal norm")


def kissing_number(lat: Lattice, threads: Optional[int] = None) -> int:
    """Number of lattice vectors of minimal norm, counting both signs."""
    g = lat.normalized_gram()
    diag_min = min(g[i, i] for i in range(lat.dimension))
    sv = enumerate_short_vectors(lat, diag_min, threads)
    mn = sv.min_norm()
    return 2 * sum(1 for _, q in sv.reps if q == mn)


def brute_force_short_vectors(lat: Lattice, bound) -> ShortVectorSet:
    """Independent oracle: box search over coefficients.

    The coefficient box is derived from the dual Gram diagonal, which bounds
    |x_i| for any vector of norm <= bound.  Candidate norms are evaluated in
    batched int64 arithmetic (entries are tiny, so this is exact) and the
    survivors re-checked exactly.  Only practical in low dimension.
    """
    import numpy as np

    bound = Fraction(bound)
    n = lat.dimension
    g = lat.normalized_gram()
    ginv = g.inverse()
    radii = []
    for i in range(n):
        r2 = bound * ginv[i, i]  # |x_i|^2 <= bound * (G^-1)_ii exactly
        r = isqrt(r2.numerator // r2.denominator)
        if (r + 1) * (r + 1) * r2.denominator <= r2.numerator:
            r += 1
        radii.append(r)
    gram_int, scale = _integer_form(lat)
    gn = np.array(gram_int, dtype=np.int64)
    limit = bound * scale  # integer-form cutoff
    if max(radii) ** 2 * int(np.abs(gn).max()) * n * n >= 1 << 60:
        raise EnumerationError("box too large for the int64 oracle")
    widths = [2 * r + 1 for r in radii]
    total = 1
    for w in widths:
        total *= w
    offsets = np.array(radii, dtype=np.int64)
    reps = []
    chunk_size = 1 << 17
    for start in range(0, total, chunk_size):
        idx = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        arr = np.empty((len(idx), n), dtype=np.int64)
        rem = idx
        for j in range(n - 1, -1, -1):
            arr[:, j] = rem % widths[j]
            rem = rem // widths[j]
        arr -= offsets[None, :]
        # keep one representative per +- pair: last nonzero coordinate positive
        nz = arr != 0
        rev_first = nz[:, ::-1].argmax(axis=1)
        lead = arr[np.arange(len(arr)), n - 1 - rev_first]
        keep = nz.any(axis=1) & (lead > 0)
        arr = arr[keep]
        if not len(arr):
            continue
        qs = np.einsum("ij,jk,ik->i", arr, gn, arr)
        ok = np.nonzero(qs * limit.denominator <= limit.numerator)[0]
        for i in ok:
            reps.append((tuple(int(x) for x in arr[i]), Fraction(int(qs[i])) / scale))
    reps.sort(key=lambda item: item[0])
    return ShortVectorSet(bound, tuple(reps))
