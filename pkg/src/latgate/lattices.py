"""Lattices, linear codes and the code constructions that tie them together.

A lattice is stored by an exact square basis matrix (rows are basis vectors)
together with a positive rational ``norm_divisor``; every structural
statement (evenness, unimodularity, vector norms) refers to the rescaled
Gram matrix ``gram / norm_divisor``.  Keeping the divisor explicit lets all
entries stay integral: binary code constructions carry divisor 2, ternary
ones divisor 3 and the standard 24-dimensional even unimodular lattice
divisor 8, with no irrational scalings anywhere.

Codes are generator matrices over GF(2) or GF(3).  The specific generator
matrices shipped here are literal data validated by self-tests (weight
distribution, self-duality) rather than re-derived, except for Reed-Muller
codes which are generated from monomial evaluations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

from .linalg import IntMatrix, RationalMatrix


class LatticeError(ValueError):
    pass


# --------------------------------------------------------------------------
# linear codes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearCode:
    """A linear [n, k] code over GF(p), p in {2, 3}, given by a generator matrix.

    Redundant generator rows are allowed; the dimension k is the rank over
    the field.  The zero code is the all-zeros generator row.
    """

    field_order: int
    generator: IntMatrix

    def __post_init__(self):
        p = self.field_order
        if p not in (2, 3):
            raise LatticeError("only GF(2) and GF(3) codes are supported")
        if any(x % p != x for row in self.generator.entries for x in row):
            object.__setattr__(
                self,
                "generator",
                IntMatrix([[x % p for x in row] for row in self.generator.entries]),
            )

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return len(self.row_basis())

    def row_basis(self) -> list[tuple[int, ...]]:
        """Independent codeword rows spanning the code (row reduction mod p)."""
        p = self.field_order
        a = [list(r) for r in self.generator.entries]
        rank = 0
        for col in range(self.n):
            piv = next((i for i in range(rank, len(a)) if a[i][col] % p), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = pow(a[rank][col], -1, p)
            a[rank] = [(x * inv) % p for x in a[rank]]
            for i in range(len(a)):
                if i != rank and a[i][col] % p:
                    f = a[i][col]
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
            rank += 1
        return [tuple(row) for row in a[:rank]]

    def codewords(self) -> Iterator[tuple[int, ...]]:
        """All p^k codewords (exhaustive; meant for small k self-tests)."""
        p = self.field_order
        basis = self.row_basis()
        for coeffs in itertools.product(range(p), repeat=len(basis)):
            cw = [0] * self.n
            for c, row in zip(coeffs, basis):
                if c:
                    cw = [(x + c * y) % p for x, y in zip(cw, row)]
            yield tuple(cw)

    def weight_distribution(self) -> dict[int, int]:
        dist: dict[int, int] = {}
        for cw in self.codewords():
            w = sum(1 for x in cw if x)
            dist[w] = dist.get(w, 0) + 1
        return dist

    def minimum_distance(self) -> int:
        return min(w for w in self.weight_distribution() if w > 0)

    def is_self_dual(self) -> bool:
        p = self.field_order
        g = self.generator
        gg = g @ g.transpose()
        return 2 * self.k == self.n and all(
            x % p == 0 for row in gg.entries for x in row
        )

    def is_doubly_even(self) -> bool:
        """True iff every codeword weight is divisible by 4 (binary codes).

        Checked without enumeration: all generator rows must have weight
        divisible by 4 and pairwise supports must meet in an even number of
        positions, which is equivalent for GF(2).
        """
        if self.field_order != 2:
            return False
        rows = self.generator.entries
        if any(sum(r) % 4 for r in rows):
            return False
        return all(
            sum(a & b for a, b in zip(rows[i], rows[j])) % 2 == 0
            for i in range(len(rows))
            for j in range(i)
        )

    def to_json(self) -> dict:
        return {"field": self.field_order, "generator": self.generator.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearCode":
        return cls(int(obj["field"]), IntMatrix.from_json(obj["generator"]))


def reed_muller_code(r: int, m: int) -> LinearCode:
    """Reed-Muller code RM(r, m): evaluations of degree-<=r monomials on GF(2)^m."""
    if not (0 <= r <= m) or m < 1:
        raise LatticeError(f"unsupported Reed-Muller parameters ({r}, {m})")
    n = 1 << m
    rows = [[1] * n]
    for deg in range(1, r + 1):
        for support in itertools.combinations(range(m), deg):
            rows.append([1 if all(x >> i & 1 for i in support) else 0 for x in range(n)])
    return LinearCode(2, IntMatrix(rows))


def extended_hamming_code() -> LinearCode:
    """The [8,4,4] extended Hamming code (self-dual, doubly even)."""
    return LinearCode(2, IntMatrix([
        [1, 1, 1, 1, 0, 0, 0, 0],
        [1, 1, 0, 0, 1, 1, 0, 0],
        [1, 0, 1, 0, 1, 0, 1, 0],
        [1, 1, 1, 1, 1, 1, 1, 1],
    ]))


_TERNARY_GOLAY_B = [
    [0, 1, 1, 1, 1, 1],
    [1, 0, 1, 2, 2, 1],
    [1, 1, 0, 1, 2, 2],
    [1, 2, 1, 0, 1, 2],
    [1, 2, 2, 1, 0, 1],
    [1, 1, 2, 2, 1, 0],
]


def ternary_golay_code() -> LinearCode:
    """The [12,6,6] extended ternary Golay code (self-dual over GF(3))."""
    rows = [[1 if j == i else 0 for j in range(6)] + _TERNARY_GOLAY_B[i] for i in range(6)]
    return LinearCode(3, IntMatrix(rows))


_BINARY_GOLAY_B = [
    [1, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1],
    [1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1],
    [0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 1],
    [1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1],
    [1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1],
    [1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1],
    [0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1],
    [0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 0, 1],
    [0, 1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 1],
    [1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 0, 1],
    [0, 1, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0],
]


def binary_golay_code() -> LinearCode:
    """The [24,12,8] extended binary Golay code (self-dual, doubly even)."""
    rows = [[1 if j == i else 0 for j in range(12)] + _BINARY_GOLAY_B[i] for i in range(12)]
    return LinearCode(2, IntMatrix(rows))


# --------------------------------------------------------------------------
# lattices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice in R^n given by a square basis (rows = basis vectors)."""

    basis: RationalMatrix
    norm_divisor: Fraction
    name: Optional[str] = None
    gram: RationalMatrix = field(init=False)

    def __post_init__(self):
        if not self.basis.is_square:
            raise LatticeError("basis must be square")
        object.__setattr__(self, "norm_divisor", Fraction(self.norm_divisor))
        if self.norm_divisor <= 0:
            raise LatticeError("norm_divisor must be positive")
        gram = self.basis @ self.basis.transpose()
        object.__setattr__(self, "gram", gram)
        if gram.determinant() == 0:
            raise LatticeError("basis is singular")

    @property
    def dimension(self) -> int:
        return self.basis.rows

    def normalized_gram(self) -> RationalMatrix:
        return self.gram.scale(1 / self.norm_divisor)

    def vector_norm(self, coeffs) -> Fraction:
        """Normalized squared length of the lattice vector with the given coefficients."""
        v = RationalMatrix([coeffs])
        return (v @ self.gram @ v.transpose())[0, 0] / self.norm_divisor

    def coefficients_of(self, vector) -> Optional[tuple[int, ...]]:
        """Integer coefficients of an ambient vector, or None if not in the lattice."""
        v = RationalMatrix([vector])
        x = v @ self.basis.inverse()
        if not x.is_integral():
            return None
        return tuple(int(c) for c in x.row(0))

    def determinant(self) -> Fraction:
        """Determinant of the normalized Gram matrix."""
        return self.normalized_gram().determinant()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "basis": self.basis.to_json(),
            "norm_divisor": str(self.norm_divisor),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Lattice":
        return cls(
            RationalMatrix.from_json(obj["basis"]),
            Fraction(obj["norm_divisor"]),
            obj.get("name"),
        )


def lattice_from_basis(m, norm_divisor=1, name: Optional[str] = None) -> Lattice:
    if not isinstance(m, RationalMatrix):
        m = RationalMatrix(m)
    return Lattice(m, Fraction(norm_divisor), name)


def is_even(lat: Lattice) -> bool:
    """All normalized vector norms are even integers.

    Equivalent to: the normalized Gram matrix is integral and its diagonal
    entries are even.
    """
    g = lat.normalized_gram()
    if not g.is_integral():
        return False
    return all(g[i, i] % 2 == 0 for i in range(g.rows))


def is_unimodular(lat: Lattice) -> bool:
    """|det| of the normalized Gram matrix equals 1."""
    return abs(lat.determinant()) == 1


def _hnf_square_basis(rows: list[list[int]], n: int) -> IntMatrix:
    h, _ = IntMatrix(rows).hermite_normal_form()
    basis = [list(r) for r in h.entries if any(r)]
    if len(basis) != n:
        raise LatticeError("generating set does not span full rank")
    return IntMatrix(basis)


def construction_a(code: LinearCode, name: Optional[str] = None) -> Lattice:
    """Lattice of integer vectors congruent to a codeword mod p; divisor p."""
    p, n = code.field_order, code.n
    rows = [list(r) for r in code.generator.entries]
    rows.extend([p if j == i else 0 for j in range(n)] for i in range(n))
    basis = _hnf_square_basis(rows, n)
    return Lattice(basis.to_rational(), Fraction(p), name)


def construction_b(code: LinearCode, name: Optional[str] = None) -> Lattice:
    """Sublattice of construction A where the coordinate sum is 0 mod 4.

    Requires a binary code in which every codeword weight is divisible by 4;
    the standard lift of each generator row is sign-adjusted so its
    coordinate sum is 0 mod 4.
    """
    if code.field_order != 2:
        raise LatticeError("construction B needs a binary code")
    if not code.is_doubly_even():
        raise LatticeError("construction B needs all codeword weights divisible by 4")
    n = code.n
    rows = []
    for r in code.generator.entries:
        row = list(r)
        if sum(row) % 4:
            i = row.index(1)
            row[i] = -1  # weight is even, so one sign flip fixes the sum mod 4
        rows.append(row)
    for i in range(n - 1):
        rows.append([2 if j == i else (-2 if j == i + 1 else 0) for j in range(n)])
    rows.append([2 if j >= n - 2 else 0 for j in range(n)])
    basis = _hnf_square_basis(rows, n)
    return Lattice(basis.to_rational(), Fraction(2), name)


def leech_lattice() -> Lattice:
    """The Leech lattice with an integral basis and norm divisor 8.

    Built from the binary Golay code congruences: doubled codeword lifts,
    the sublattice 4*D24, and the odd-coset vector (-3, 1, ..., 1).  This
    avoids committing to any particular published coordinate table; the
    result is validated by its invariants (even, unimodular, minimum 4).
    """
    code = binary_golay_code()
    n = 24
    rows = [[2 * x for x in cw] for cw in code.generator.entries]
    for i in range(n - 1):
        rows.append([4 if j == i else (-4 if j == i + 1 else 0) for j in range(n)])
    rows.append([4 if j < 2 else 0 for j in range(n)])
    rows.append([-3] + [1] * (n - 1))
    basis = _hnf_square_basis(rows, n)
    return Lattice(basis.to_rational(), Fraction(8), "leech")


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------

D4_BASIS = [[1, 1, 0, 0], [1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]

E8_ROOT_BASIS = [
    [2, -2, 0, 0, 0, 0, 0, 0],
    [0, 2, -2, 0, 0, 0, 0, 0],
    [0, 0, 2, -2, 0, 0, 0, 0],
    [0, 0, 0, 2, -2, 0, 0, 0],
    [0, 0, 0, 0, 2, -2, 0, 0],
    [0, 0, 0, 0, 0, 2, -2, 0],
    [0, 0, 0, 0, 0, 0, 2, -2],
    [1, 1, 1, 1, 1, -1, -1, -1],
]

# common eigenbasis of {XX, YY, ZZ}; spans a lattice isometric to Z^4
MERMIN_BASIS = [[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]]

CATALOG_NAMES = ("zn", "z4-mermin", "d4", "e8-root", "e8-hamming", "bw16", "d12plus", "leech")


@lru_cache(maxsize=None)
def _catalog_cached(name: str, n: int) -> Lattice:
    if name == "zn":
        return lattice_from_basis(RationalMatrix.identity(n), 1, f"z{n}")
    if name == "z4-mermin":
        return lattice_from_basis(MERMIN_BASIS, 2, "z4-mermin")
    if name == "d4":
        return lattice_from_basis(D4_BASIS, 1, "d4")
    if name == "e8-root":
        return lattice_from_basis(E8_ROOT_BASIS, 4, "e8-root")
    if name == "e8-hamming":
        return construction_a(extended_hamming_code(), "e8-hamming")
    if name == "bw16":
        return construction_b(reed_muller_code(1, 4), "bw16")
    if name == "d12plus":
        return construction_a(ternary_golay_code(), "d12plus")
    if name == "leech":
        return leech_lattice()
    raise LatticeError(f"unknown lattice name {name!r} (known: {', '.join(CATALOG_NAMES)})")


def catalog(name: str, n: Optional[int] = None) -> Lattice:
    """Canonical lattice by name; ``zn`` additionally needs the dimension."""
    name = name.lower()
    if name == "zn":
        if n is None:
            raise LatticeError("catalog('zn') needs the dimension n")
        if n < 1:
            raise LatticeError("dimension must be positive")
        return _catalog_cached("zn", n)
    return _catalog_cached(name, 0)
