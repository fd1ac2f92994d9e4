"""Smallest eigenpair of small dense Hermitian matrices."""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence

HERMITIAN_TOL = 1e-10
RESIDUAL_TOL = 1e-9


def symmetrize(H: np.ndarray) -> np.ndarray:
    """Return ``(H + H^*)/2`` after checking ``H`` is Hermitian to 1e-10 (relative)."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    skew = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if skew > HERMITIAN_TOL * scale:
        raise ValueError(f"matrix is not Hermitian (defect {skew:.3e})")
    return 0.5 * (H + H.conj().T)


def hermitian_min_eigpair(H: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit eigenvector.

    LAPACK ``heevd`` through :func:`numpy.linalg.eigh`; the returned pair is
    checked against ``||Hv - lam v|| <= 1e-9 ||H||``.
    """
    H = symmetrize(H)
    try:
        vals, vecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    lam = float(vals[0])
    v = vecs[:, 0]
    resid = np.linalg.norm(H @ v - lam * v)
    if resid > RESIDUAL_TOL * max(np.linalg.norm(H, 2), np.finfo(float).tiny):
        raise NoConvergence(f"eigenpair residual {resid:.3e} above tolerance")
    return lam, v


def hermitian_min_eig(H: np.ndarray) -> float:
    return hermitian_min_eigpair(H)[0]
