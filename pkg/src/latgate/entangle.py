"""Gate rows as multipartite states and their entanglement measures.

A gate row is a unit vector of exact rationals; splitting its length into
an ordered factor list (2,2,2), (3,2,2), (6,2,2), ... turns it into a
multipartite state.  Indexing is big-endian mixed radix: the leftmost ket
digit is the most significant, so |i1 i2 ... ik> sits at flat position
sum_j i_j * prod_{l>j} d_l.

All density-matrix algebra (outer products, partial traces, partial
transposes, the spin flip, the 3-tangle determinants, Schmidt ranks) is
exact rational arithmetic.  Floating point enters only at the final
spectral step: eigenvalues of rho rho~ are taken from the symmetric
product sqrt(rho) rho~ sqrt(rho), and partial-transpose spectra from the
symmetric transpose matrix, both via the Jacobi solver in ``numerics``.

Subsystem letters A, B, C, ... name factor positions 1, 2, 3, ...; a
two-party tangle label like tau_AB means the remaining factors are traced
out.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .linalg import IntMatrix, RationalMatrix
from .numerics import psd_sqrt, sym_eigen
from .autgrp import OrthogonalGate

DEFAULT_TOL = 1e-10


class EntangleError(ValueError):
    pass


# --------------------------------------------------------------------------
# shapes and states
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorShape:
    """Ordered factor dimensions of a multipartite system."""

    dims: tuple[int, ...]

    def __init__(self, dims):
        object.__setattr__(self, "dims", tuple(int(d) for d in dims))
        if any(d < 2 for d in self.dims) or not self.dims:
            raise EntangleError("factor dimensions must all be >= 2")

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def flat_index(self, digits: Sequence[int]) -> int:
        idx = 0
        for d, digit in zip(self.dims, digits):
            if not 0 <= digit < d:
                raise EntangleError(f"digit {digit} out of range for factor of dimension {d}")
            idx = idx * d + digit
        return idx

    def digits(self, flat: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.dims):
            out.append(flat % d)
            flat //= d
        return tuple(reversed(out))

    def all_digits(self):
        return itertools.product(*[range(d) for d in self.dims])


@dataclass(frozen=True)
class MultipartiteState:
    """Exact real state vector with unit norm."""

    amplitudes: tuple[Fraction, ...]
    shape: FactorShape

    def __init__(self, amplitudes, shape):
        if not isinstance(shape, FactorShape):
            shape = FactorShape(shape)
        amps = tuple(Fraction(a) for a in amplitudes)
        if len(amps) != shape.total:
            raise EntangleError("amplitude count does not match the shape")
        if sum(a * a for a in amps) != 1:
            raise EntangleError("state is not normalized")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "shape", shape)

    def amplitude(self, digits: Sequence[int]) -> Fraction:
        return self.amplitudes[self.shape.flat_index(digits)]

    @classmethod
    def from_kets(cls, terms: dict[str, Fraction], shape) -> "MultipartiteState":
        """Build a state from ket-label amplitudes, e.g. {'000': 1}."""
        shape = shape if isinstance(shape, FactorShape) else FactorShape(shape)
        amps = [Fraction(0)] * shape.total
        for label, coeff in terms.items():
            digits = [int(c) for c in label]
            amps[shape.flat_index(digits)] = Fraction(coeff)
        return cls(amps, shape)

    def to_json(self) -> dict:
        den = 1
        for a in self.amplitudes:
            den = lcm(den, a.denominator)
        return {
            "shape": list(self.shape.dims),
            "den": den,
            "num": [int(a * den) for a in self.amplitudes],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MultipartiteState":
        den = int(obj["den"])
        return cls([Fraction(x, den) for x in obj["num"]], FactorShape(obj["shape"]))


def state_from_row(gate: OrthogonalGate, row: int, shape) -> MultipartiteState:
    shape = shape if isinstance(shape, FactorShape) else FactorShape(shape)
    if shape.total != gate.dimension:
        raise EntangleError("shape does not match the gate dimension")
    if not 0 <= row < gate.dimension:
        raise EntangleError("row index out of range")
    return MultipartiteState(gate.row(row), shape)


def reshape(state: MultipartiteState, new_shape, permutation: Optional[Sequence[int]] = None) -> MultipartiteState:
    """Reinterpret the flat amplitude vector under a new factor shape.

    With ``permutation`` the factors of the current shape are reordered
    first (entry p[i] says which old factor lands at new position i); the
    flat vector is then relabeled under ``new_shape``.  Without it this is
    a pure re-indexing, e.g. (3,2,2) -> (2,2,3) or flat -> (6,4).
    """
    new_shape = new_shape if isinstance(new_shape, FactorShape) else FactorShape(new_shape)
    amps = state.amplitudes
    if permutation is not None:
        perm = tuple(permutation)
        if sorted(perm) != list(range(len(state.shape))):
            raise EntangleError("invalid factor permutation")
        permuted_dims = tuple(state.shape.dims[p] for p in perm)
        src = FactorShape(state.shape.dims)
        dst = FactorShape(permuted_dims)
        out = [Fraction(0)] * src.total
        for digits in src.all_digits():
            out[dst.flat_index([digits[p] for p in perm])] = amps[src.flat_index(digits)]
        amps = tuple(out)
    if new_shape.total != len(amps):
        raise EntangleError("total dimension must be preserved")
    return MultipartiteState(amps, new_shape)


# --------------------------------------------------------------------------
# density matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityMatrix:
    """Exact symmetric unit-trace matrix over an ordered factor list."""

    matrix: RationalMatrix
    shape: FactorShape

    def __init__(self, matrix: RationalMatrix, shape, tol: float = DEFAULT_TOL):
        if not isinstance(shape, FactorShape):
            shape = FactorShape(shape)
        if matrix.rows != shape.total or not matrix.is_square:
            raise EntangleError("matrix size does not match the shape")
        if not matrix.is_symmetric():
            raise EntangleError("density matrix must be symmetric")
        if sum(matrix[i, i] for i in range(matrix.rows)) != 1:
            raise EntangleError("density matrix must have trace 1")
        lo = min(sym_eigen(_to_float(matrix)).eigenvalues)
        if lo < -tol:
            raise EntangleError(f"density matrix is not PSD (min eigenvalue {lo})")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "shape", shape)

    def __getitem__(self, ij):
        return self.matrix[ij]

    @property
    def dimension(self) -> int:
        return self.matrix.rows


def _to_float(m: RationalMatrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m.entries])


def density_matrix(state: MultipartiteState) -> DensityMatrix:
    """Pure-state projector |psi><psi| as an exact matrix."""
    a = state.amplitudes
    return DensityMatrix(RationalMatrix([[x * y for y in a] for x in a]), state.shape)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every factor not listed in ``keep`` (kept order preserved)."""
    keep = tuple(keep)
    nfac = len(rho.shape)
    if not keep or any(not 0 <= k < nfac for k in keep) or len(set(keep)) != len(keep):
        raise EntangleError("invalid subsystem indices")
    drop = tuple(i for i in range(nfac) if i not in keep)
    dims = rho.shape.dims
    kept_shape = FactorShape([dims[k] for k in keep])
    out = [[Fraction(0)] * kept_shape.total for _ in range(kept_shape.total)]
    src = rho.shape
    for kd_row in kept_shape.all_digits():
        for kd_col in kept_shape.all_digits():
            acc = Fraction(0)
            for td in itertools.product(*[range(dims[d]) for d in drop]):
                full_row = [0] * nfac
                full_col = [0] * nfac
                for pos, k in enumerate(keep):
                    full_row[k] = kd_row[pos]
                    full_col[k] = kd_col[pos]
                for pos, d in enumerate(drop):
                    full_row[d] = td[pos]
                    full_col[d] = td[pos]
                acc += rho[src.flat_index(full_row), src.flat_index(full_col)]
            out[kept_shape.flat_index(kd_row)][kept_shape.flat_index(kd_col)] = acc
    return DensityMatrix(RationalMatrix(out), kept_shape)


_SYSY = RationalMatrix([
    [0, 0, 0, -1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
])


def spin_flip(rho: DensityMatrix) -> DensityMatrix:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y); conjugation is trivial here
    because every state in scope is real."""
    if rho.shape.dims != (2, 2):
        raise EntangleError("spin flip is defined for two-qubit systems")
    return DensityMatrix(_SYSY @ rho.matrix @ _SYSY, rho.shape)


def concurrence_spectrum(rho: DensityMatrix, tol: float = DEFAULT_TOL) -> tuple[tuple[float, ...], float]:
    """Eigenvalues of rho rho~ (descending) and the tangle tau = C^2.

    The spectrum is computed from the symmetric PSD matrix
    sqrt(rho) rho~ sqrt(rho), which shares it.  Eigenvalues above -tol are
    clamped to zero before the square roots; so are numerically-zero
    positive ones, whose O(eps) noise would otherwise surface as O(sqrt(eps))
    in the concurrence.
    """
    flipped = spin_flip(rho)
    rf = _to_float(rho.matrix)
    ff = _to_float(flipped.matrix)
    root = psd_sqrt(rf)
    lam = np.array(sym_eigen(root @ ff @ root).eigenvalues)
    if lam.min() < -tol:
        raise EntangleError("rho rho~ has a significantly negative eigenvalue")
    scale = max(1.0, float(np.abs(lam).max()))
    lam[np.abs(lam) < 1e-12 * scale] = 0.0
    lam = np.clip(lam, 0.0, None)
    roots = np.sqrt(lam)
    c = max(0.0, roots[0] - roots[1:].sum())
    tau = min(max(c * c, 0.0), 1.0)
    return tuple(float(x) for x in lam), tau


def two_tangle(rho: DensityMatrix, tol: float = DEFAULT_TOL) -> float:
    """Tangle tau = C(rho)^2 of a two-qubit density matrix."""
    return concurrence_spectrum(rho, tol)[1]


def pure_two_tangle(state: MultipartiteState) -> Fraction:
    """Exact tangle of a pure two-qubit state: 4 det(amplitude matrix)^2."""
    if state.shape.dims != (2, 2):
        raise EntangleError("expected a two-qubit pure state")
    a = state.amplitudes
    det = a[0] * a[3] - a[1] * a[2]
    return 4 * det * det


def three_tangle(state: MultipartiteState) -> Fraction:
    """Exact 3-tangle of a pure three-qubit state from four 2x2 determinants."""
    if state.shape.dims != (2, 2, 2):
        raise EntangleError("expected a three-qubit pure state")
    a = state.amplitude
    t000 = a((0, 0, 0)) * a((1, 1, 1)) - a((0, 1, 1)) * a((1, 0, 0))
    t001 = a((0, 0, 1)) * a((1, 1, 0)) - a((0, 1, 0)) * a((1, 0, 1))
    p_b0 = a((0, 0, 0)) * a((1, 0, 1)) - a((0, 0, 1)) * a((1, 0, 0))
    p_b1 = a((0, 1, 0)) * a((1, 1, 1)) - a((0, 1, 1)) * a((1, 1, 0))
    return 4 * abs((t001 - t000) ** 2 - 4 * p_b1 * p_b0)


def factor_out(state: MultipartiteState, fixed: int, value: int) -> MultipartiteState:
    """Remove a factor that is exactly in the basis state |value>."""
    dims = state.shape.dims
    if not 0 <= fixed < len(dims):
        raise EntangleError("invalid factor index")
    for digits in state.shape.all_digits():
        if digits[fixed] != value and state.amplitude(digits) != 0:
            raise EntangleError("state does not factorize on the requested factor")
    rest_shape = FactorShape([d for i, d in enumerate(dims) if i != fixed])
    amps = [Fraction(0)] * rest_shape.total
    for digits in state.shape.all_digits():
        if digits[fixed] == value:
            rest = tuple(d for i, d in enumerate(digits) if i != fixed)
            amps[rest_shape.flat_index(rest)] = state.amplitude(digits)
    return MultipartiteState(amps, rest_shape)


def residual_three_tangle(state: MultipartiteState, fixed: int, value: int) -> Fraction:
    """3-tangle of the rest after factoring |value> out of a 4-qubit state."""
    if state.shape.dims != (2, 2, 2, 2):
        raise EntangleError("expected a four-qubit pure state")
    return three_tangle(factor_out(state, fixed, value))


def schmidt_rank(state: MultipartiteState, left: Sequence[int]) -> int:
    """Exact Schmidt rank across the bipartition (left | remaining factors).

    The amplitude vector is reshaped to a d_left x d_right matrix, cleared
    to integers, and the rank of its Smith normal form is returned.
    """
    left = tuple(left)
    nfac = len(state.shape)
    if not left or len(set(left)) != len(left) or any(not 0 <= i < nfac for i in left):
        raise EntangleError("invalid bipartition")
    right = tuple(i for i in range(nfac) if i not in left)
    if not right:
        raise EntangleError("bipartition must leave both sides nonempty")
    dims = state.shape.dims
    lshape = FactorShape([dims[i] for i in left])
    rshape = FactorShape([dims[i] for i in right])
    den = 1
    for a in state.amplitudes:
        den = lcm(den, a.denominator)
    mat = [[0] * rshape.total for _ in range(lshape.total)]
    for digits in state.shape.all_digits():
        ld = lshape.flat_index([digits[i] for i in left])
        rd = rshape.flat_index([digits[i] for i in right])
        mat[ld][rd] = int(state.amplitude(digits) * den)
    _, rank = IntMatrix(mat).smith_normal_form()
    return rank


def partial_transpose(rho, part: int, shape=None) -> RationalMatrix:
    """Exact partial transpose on one factor; symmetric for real rho.

    Accepts a DensityMatrix, or a plain symmetric RationalMatrix together
    with its factor shape (needed e.g. to transpose an already-transposed
    matrix, which is generally not PSD).
    """
    if isinstance(rho, DensityMatrix):
        matrix, shape = rho.matrix, rho.shape
    else:
        if shape is None:
            raise EntangleError("shape is required for a plain matrix")
        matrix = rho
        shape = shape if isinstance(shape, FactorShape) else FactorShape(shape)
    nfac = len(shape)
    if not 0 <= part < nfac:
        raise EntangleError("invalid subsystem index")
    n = shape.total
    out = [[Fraction(0)] * n for _ in range(n)]
    for rd in shape.all_digits():
        for cd in shape.all_digits():
            nr = list(rd)
            nc = list(cd)
            nr[part], nc[part] = cd[part], rd[part]
            out[shape.flat_index(nr)][shape.flat_index(nc)] = matrix[shape.flat_index(rd), shape.flat_index(cd)]
    return RationalMatrix(out)


def ppt_spectrum(rho: DensityMatrix, part: int, tol: float = DEFAULT_TOL) -> tuple[tuple[float, ...], bool]:
    """Spectrum of the partial transpose (descending) and the verdict flag.

    A negative eigenvalue certifies entanglement across the bipartition in
    any dimension.  A nonnegative spectrum certifies separability only for
    total dimension <= 6; beyond that the flag False means "no entanglement
    detected" (bound entangled states exist).
    """
    pt = partial_transpose(rho, part)
    lam = sym_eigen(_to_float(pt)).eigenvalues
    return lam, lam[-1] < -tol


# --------------------------------------------------------------------------
# Pauli words and shared eigenbases
# --------------------------------------------------------------------------

_PAULI_REAL = {
    "I": RationalMatrix([[1, 0], [0, 1]]),
    "X": RationalMatrix([[0, 1], [1, 0]]),
    "Y": RationalMatrix([[0, -1], [1, 0]]),  # sigma_y / i; i-factors tracked separately
    "Z": RationalMatrix([[1, 0], [0, -1]]),
}


def pauli_observable(word: str) -> RationalMatrix:
    """Exact tensor product of Pauli matrices, e.g. 'XZ', '-ZYY'.

    Only real results are representable, so the word must contain an even
    number of Y letters (each pair contributes i^2 = -1).
    """
    word = word.strip().upper()
    sign = 1
    if word.startswith(("+", "-")):
        if word[0] == "-":
            sign = -1
        word = word[1:]
    if not word or any(c not in _PAULI_REAL for c in word):
        raise EntangleError(f"invalid Pauli word {word!r}")
    y_count = word.count("Y")
    if y_count % 2:
        raise EntangleError("odd number of Y factors gives an imaginary observable")
    if y_count % 4 == 2:
        sign = -sign
    out = _PAULI_REAL[word[0]]
    for c in word[1:]:
        out = _kron(out, _PAULI_REAL[c])
    return out.scale(sign)


def _kron(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            out.append([a[i, j] * b[k, l] for j in range(a.cols) for l in range(b.cols)])
    return RationalMatrix(out)


def common_eigenbasis_check(rows, observables: Sequence[RationalMatrix]) -> bool:
    """True iff every row is an exact +-1 eigenvector of every observable.

    Rows may come from an orthogonal gate or any matrix whose rows are
    nonzero candidate eigenvectors (normalization is irrelevant to the
    eigenvector property).  The observables must commute pairwise, exactly.
    """
    mat = rows.b if isinstance(rows, OrthogonalGate) else rows
    for a, b in itertools.combinations(observables, 2):
        if a @ b != b @ a:
            raise EntangleError("observables do not commute")
    for i in range(mat.rows):
        v = RationalMatrix([mat.row(i)]).transpose()
        if all(x == 0 for x in mat.row(i)):
            return False
        for obs in observables:
            w = obs @ v
            if w != v and w != v.scale(-1):
                return False
    return True


# --------------------------------------------------------------------------
# per-row reports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TangleReport:
    row: int
    tau3: Optional[float] = None
    tau_ab: Optional[float] = None
    tau_ac: Optional[float] = None
    tau_bc: Optional[float] = None
    schmidt_ranks: Optional[dict[str, int]] = None
    ppt_spectra: Optional[dict[str, tuple[tuple[float, ...], bool]]] = None
    factor: Optional[tuple[int, int]] = None  # (index, digit) split off a 4-qubit row


_PAIR_LABEL = {(0, 1): "ab", (0, 2): "ac", (1, 2): "bc"}


def analyze_state(state: MultipartiteState, row: int = 0, tol: float = DEFAULT_TOL) -> TangleReport:
    dims = state.shape.dims
    if dims == (2, 2):
        return TangleReport(row=row, tau_ab=float(pure_two_tangle(state)))
    if dims == (2, 2, 2):
        rho = density_matrix(state)
        pair_taus = {}
        for pair in ((0, 1), (0, 2), (1, 2)):
            pair_taus[_PAIR_LABEL[pair]] = two_tangle(partial_trace(rho, pair), tol)
        return TangleReport(
            row=row,
            tau3=float(three_tangle(state)),
            tau_ab=pair_taus["ab"],
            tau_ac=pair_taus["ac"],
            tau_bc=pair_taus["bc"],
        )
    if dims == (2, 2, 2, 2):
        for fixed in range(4):
            for value in (0, 1):
                try:
                    rest = factor_out(state, fixed, value)
                except EntangleError:
                    continue
                return TangleReport(row=row, tau3=float(three_tangle(rest)), factor=(fixed, value))
        return TangleReport(row=row)
    if len(dims) == 3:
        rho = density_matrix(state)
        ranks = {
            "a|bc": schmidt_rank(state, (0,)),
            "b|ac": schmidt_rank(state, (1,)),
            "c|ab": schmidt_rank(state, (2,)),
        }
        taus: dict[str, Optional[float]] = {"ab": None, "ac": None, "bc": None}
        spectra = {}
        for pair in ((0, 1), (0, 2), (1, 2)):
            label = _PAIR_LABEL[pair]
            reduced = partial_trace(rho, pair)
            spectra[label] = ppt_spectrum(reduced, 0, tol)
            if dims[pair[0]] == 2 and dims[pair[1]] == 2:
                taus[label] = two_tangle(reduced, tol)
        return TangleReport(
            row=row,
            tau_ab=taus["ab"],
            tau_ac=taus["ac"],
            tau_bc=taus["bc"],
            schmidt_ranks=ranks,
            ppt_spectra=spectra,
        )
    raise EntangleError(f"no analysis defined for shape {dims}")


def analyze_gate(gate: OrthogonalGate, shape, tol: float = DEFAULT_TOL) -> list[TangleReport]:
    """Entanglement report for every row of a gate under the given shape."""
    shape = shape if isinstance(shape, FactorShape) else FactorShape(shape)
    if shape.total != gate.dimension:
        raise EntangleError("shape does not match the gate dimension")
    return [
        analyze_state(state_from_row(gate, r, shape), row=r, tol=tol)
        for r in range(gate.dimension)
    ]
