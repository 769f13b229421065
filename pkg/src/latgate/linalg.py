"""Exact integer and rational dense linear algebra.

Everything here is arbitrary precision: rational entries are
``fractions.Fraction`` (always reduced, positive denominator), integer
entries are Python ints.  Determinants and ranks use fraction-free
(Bareiss) elimination so intermediate values stay bounded; Hermite and
Smith normal forms work over the integers.

The JSON wire format used across the package for any matrix is::

    {"rows": n, "cols": m, "den": q, "num": [[..int..], ...]}

meaning ``entry(i, j) = num[i][j] / q`` with ``q`` a positive integer.
Canonically ``q`` is the LCM of the entry denominators.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


class LinalgError(ValueError):
    """Dimension mismatch or a violated precondition (singular input etc.)."""


def _as_fraction_rows(rows: Iterable[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


class RationalMatrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("entries", "rows", "cols")

    def __init__(self, rows: Iterable[Sequence]):
        self.entries = _as_fraction_rows(rows)
        self.rows = len(self.entries)
        if self.rows == 0:
            raise LinalgError("matrix needs at least one row")
        self.cols = len(self.entries[0])
        if any(len(r) != self.cols for r in self.entries):
            raise LinalgError("ragged rows")

    # ------------------------------------------------------------ basics
    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"RationalMatrix({self.rows}x{self.cols}: {body})"

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise LinalgError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = list(zip(*other.entries))
        return RationalMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.entries]
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinalgError("shape mismatch")
        return RationalMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinalgError("shape mismatch")
        return RationalMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix([[c * x for x in row] for row in self.entries])

    # ------------------------------------------------------------ predicates
    def is_integral(self) -> bool:
        """True iff every entry has denominator 1."""
        return all(x.denominator == 1 for row in self.entries for x in row)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i)
        )

    def is_identity(self) -> bool:
        return self.is_square and all(
            self.entries[i][j] == (1 if i == j else 0)
            for i in range(self.rows)
            for j in range(self.cols)
        )

    # ------------------------------------------------------------ algorithms
    def determinant(self) -> Fraction:
        """Exact determinant, Bareiss elimination on a cleared integer copy."""
        if not self.is_square:
            raise LinalgError("determinant of a non-square matrix")
        scale = Fraction(1)
        int_rows = []
        for row in self.entries:
            d = lcm(*(x.denominator for x in row)) if self.cols else 1
            scale *= d
            int_rows.append([int(x * d) for x in row])
        return Fraction(_bareiss_det(int_rows), 1) / scale

    def inverse(self) -> "RationalMatrix":
        """Exact inverse by Gauss-Jordan elimination."""
        if not self.is_square:
            raise LinalgError("inverse of a non-square matrix")
        n = self.rows
        aug = [
            list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
            for i, row in enumerate(self.entries)
        ]
        for col in range(n):
            piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
            if piv is None:
                raise LinalgError("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv_p = 1 / aug[col][col]
            aug[col] = [x * inv_p for x in aug[col]]
            for i in range(n):
                if i != col and aug[i][col]:
                    f = aug[i][col]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
        return RationalMatrix([row[n:] for row in aug])

    def to_int_matrix(self) -> "IntMatrix":
        if not self.is_integral():
            raise LinalgError("matrix has non-integer entries")
        return IntMatrix([[int(x) for x in row] for row in self.entries])

    def cleared(self) -> tuple["IntMatrix", int]:
        """Integer matrix d*self together with the common denominator d."""
        d = 1
        for row in self.entries:
            for x in row:
                d = lcm(d, x.denominator)
        return IntMatrix([[int(x * d) for x in row] for row in self.entries]), d

    # ------------------------------------------------------------ JSON
    def to_json(self) -> dict:
        m, den = self.cleared()
        return {"rows": self.rows, "cols": self.cols, "den": den, "num": [list(r) for r in m.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "RationalMatrix":
        den = int(obj["den"])
        if den <= 0:
            raise LinalgError("den must be a positive integer")
        mat = cls([[Fraction(int(x), den) for x in row] for row in obj["num"]])
        if (mat.rows, mat.cols) != (int(obj["rows"]), int(obj["cols"])):
            raise LinalgError("matrix shape does not match rows/cols fields")
        return mat


class IntMatrix:
    """Immutable dense matrix over the integers."""

    __slots__ = ("entries", "rows", "cols")

    def __init__(self, rows: Iterable[Sequence[int]]):
        self.entries = tuple(tuple(int(x) for x in row) for row in rows)
        self.rows = len(self.entries)
        if self.rows == 0:
            raise LinalgError("matrix needs at least one row")
        self.cols = len(self.entries[0])
        if any(len(r) != self.cols for r in self.entries):
            raise LinalgError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i][j]

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"IntMatrix({self.rows}x{self.cols}: {body})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise LinalgError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = list(zip(*other.entries))
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.entries]
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.entries))

    def to_rational(self) -> RationalMatrix:
        return RationalMatrix(self.entries)

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise LinalgError("determinant of a non-square matrix")
        return _bareiss_det([list(r) for r in self.entries])

    # ------------------------------------------------------------ HNF
    def hermite_normal_form(self) -> tuple["IntMatrix", "IntMatrix"]:
        """Row-style Hermite normal form.

        Returns ``(h, t)`` with ``h = t @ self`` and ``t`` unimodular.  The
        convention is: zeros below each pivot, pivots positive, entries above
        a pivot reduced into ``[0, pivot)``; zero rows sink to the bottom.
        """
        a = [list(r) for r in self.entries]
        m, n = self.rows, self.cols
        t = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        piv = 0
        for col in range(n):
            r = next((i for i in range(piv, m) if a[i][col]), None)
            if r is None:
                continue
            a[piv], a[r] = a[r], a[piv]
            t[piv], t[r] = t[r], t[piv]
            for i in range(piv + 1, m):
                # gcd steps: repeatedly reduce the pair (a[piv][col], a[i][col])
                while a[i][col]:
                    q = a[piv][col] // a[i][col]
                    a[piv] = [x - q * y for x, y in zip(a[piv], a[i])]
                    t[piv] = [x - q * y for x, y in zip(t[piv], t[i])]
                    a[piv], a[i] = a[i], a[piv]
                    t[piv], t[i] = t[i], t[piv]
            if a[piv][col] < 0:
                a[piv] = [-x for x in a[piv]]
                t[piv] = [-x for x in t[piv]]
            p = a[piv][col]
            for i in range(piv):
                q = a[i][col] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[piv])]
                    t[i] = [x - q * y for x, y in zip(t[i], t[piv])]
            piv += 1
            if piv == m:
                break
        return IntMatrix(a), IntMatrix(t)

    # ------------------------------------------------------------ SNF
    def smith_normal_form(self) -> tuple["IntMatrix", int]:
        """Smith normal form: diagonal with d1 | d2 | ... , plus the rank."""
        a = [list(r) for r in self.entries]
        m, n = self.rows, self.cols
        piv = 0
        while piv < min(m, n):
            # move a nonzero entry to the pivot position
            found = False
            for i in range(piv, m):
                for j in range(piv, n):
                    if a[i][j]:
                        a[piv], a[i] = a[i], a[piv]
                        for row in a:
                            row[piv], row[j] = row[j], row[piv]
                        found = True
                        break
                if found:
                    break
            if not found:
                break
            while True:
                stable = True
                for i in range(piv + 1, m):
                    if a[i][piv]:
                        q = a[i][piv] // a[piv][piv]
                        a[i] = [x - q * y for x, y in zip(a[i], a[piv])]
                        if a[i][piv]:
                            a[piv], a[i] = a[i], a[piv]
                            stable = False
                if not stable:
                    continue
                for j in range(piv + 1, n):
                    if a[piv][j]:
                        q = a[piv][j] // a[piv][piv]
                        for row in a:
                            row[j] -= q * row[piv]
                        if a[piv][j]:
                            for row in a:
                                row[piv], row[j] = row[j], row[piv]
                            stable = False
                if stable:
                    break
            piv += 1
        rank = sum(1 for i in range(min(m, n)) if a[i][i])
        # enforce the divisibility chain
        for i in range(rank):
            a[i][i] = abs(a[i][i])
        changed = True
        while changed:
            changed = False
            for i in range(rank - 1):
                x, y = a[i][i], a[i + 1][i + 1]
                if y % x:
                    g = gcd(x, y)
                    a[i][i], a[i + 1][i + 1] = g, x * y // g
                    changed = True
        s = [[a[i][j] if i == j else 0 for j in range(n)] for i in range(m)]
        return IntMatrix(s), rank

    def elementary_divisors(self) -> list[int]:
        s, rank = self.smith_normal_form()
        return [s[i, i] for i in range(rank)]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "den": 1, "num": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "IntMatrix":
        m = RationalMatrix.from_json(obj)
        return m.to_int_matrix()


def _bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (mutates its copy)."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free Gaussian elimination."""
    a = [[int(x) for x in row] for row in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, m):
            if a[i][col]:
                f, g = a[rank][col], a[i][col]
                a[i] = [f * x - g * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == m:
            break
    return rank
