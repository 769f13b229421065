"""Small dense symmetric eigensolver and PSD square root.

This is the only floating-point code in the package.  Matrices are at most
24x24, so a cyclic Jacobi sweep is plenty: quadratically convergent, simple
to test, and performance is irrelevant at this size.

Tolerance policy: input symmetry defect up to 1e-12 (relative), sweeps run
until the off-diagonal Frobenius norm falls below 1e-14 times the matrix
norm, eigenvalues come back in non-increasing order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SYM_TOL = 1e-12
_OFF_TOL = 1e-14
_PSD_TOL = 1e-10


class NumericsError(ValueError):
    pass


@dataclass(frozen=True)
class SymmetricSpectrum:
    """Full spectrum of a symmetric matrix.

    ``eigenvalues`` are non-increasing, ``eigenvectors[:, k]`` is the unit
    eigenvector for ``eigenvalues[k]``, ``residual`` is max |A v - lambda v|
    over all pairs.
    """

    eigenvalues: tuple[float, ...]
    eigenvectors: np.ndarray
    residual: float


def _check_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NumericsError("expected a square matrix")
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.T).max()) > _SYM_TOL * scale:
        raise NumericsError("matrix is not symmetric within tolerance")
    return (a + a.T) / 2.0


def sym_eigen(a) -> SymmetricSpectrum:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations."""
    a = _check_symmetric(a)
    n = a.shape[0]
    v = np.eye(n)
    w = a.copy()
    norm = max(np.linalg.norm(w), 1e-300)
    diag_mask = ~np.eye(n, dtype=bool)
    for _ in range(100):
        # off-diagonal Frobenius norm, summed directly (the ||W|| - ||diag||
        # form cancels catastrophically near convergence)
        off = np.sqrt(np.sum(w[diag_mask] ** 2))
        if off <= _OFF_TOL * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (w[q, q] - w[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:  # theta^2 would overflow
                    t = 1.0 / (2.0 * theta)
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = w[p, :].copy(), w[q, :].copy()
                w[p, :] = c * rp - s * rq
                w[q, :] = s * rp + c * rq
                cp, cq = w[:, p].copy(), w[:, q].copy()
                w[:, p] = c * cp - s * cq
                w[:, q] = s * cp + c * cq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    eig = np.diag(w).copy()
    # non-increasing order, ties broken by original index (deterministic)
    idx = sorted(range(n), key=lambda k: (-eig[k], k))
    eig = eig[idx]
    v = v[:, idx]
    residual = float(np.abs(a @ v - v * eig[None, :]).max())
    return SymmetricSpectrum(tuple(float(x) for x in eig), v, residual)


def psd_sqrt(a) -> np.ndarray:
    """Symmetric square root of a PSD matrix; tiny negative eigenvalues clamp to 0."""
    spec = sym_eigen(a)
    lam = np.array(spec.eigenvalues)
    scale = max(1.0, float(abs(lam).max()))
    if lam.min() < -_PSD_TOL * scale:
        raise NumericsError(f"matrix is significantly indefinite (min eigenvalue {lam.min()})")
    # zero out numerically-zero eigenvalues: sqrt would blow their O(eps)
    # noise up to O(sqrt(eps)) and poison downstream spectra
    lam[np.abs(lam) < 1e-12 * scale] = 0.0
    lam = np.clip(lam, 0.0, None)
    v = spec.eigenvectors
    return (v * np.sqrt(lam)[None, :]) @ v.T
