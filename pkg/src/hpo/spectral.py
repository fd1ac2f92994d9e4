"""Truncated matrices in the basis ``e_n = V z^n`` of the half-plane Hardy space.

``V f(w) = sqrt(2)/(1+w) f(gamma(w))`` with the self-inverse Cayley map
``gamma(z) = (1-z)/(1+z)``.  A half-plane operator ``T`` is pulled back to the
disk as ``V^-1 T V`` and its columns are the Taylor coefficients of
``V^-1 T e_n``, read off from samples on the circle ``|z| = rho`` with one FFT:

    coeff_k = fft(G(rho * omega^j))[k] / (M * rho^k)

Conjugate-linear maps are stored as the matrix ``A`` of ``c -> A @ conj(c)``.
Products and Gram matrices are formed from the exact operators (see
:class:`DiskOperator`), so the only truncation is the retained block itself.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegenerateSymbol, OutsideDomain, QuadratureDivergence
from .kernels import ConjugationSpec, KernelCombo, apply_forward, inner
from .lfmap import LFSymbol, adjoint_symbol
from .linalg import hermitian_min_eig

DEFAULT_ORDER = 64
DEFAULT_FFT = 8192
DEFAULT_RADIUS = 0.9

SQRT2 = math.sqrt(2.0)


def cayley(z):
    """``(1-z)/(1+z)``: disk <-> right half-plane, its own inverse."""
    return (1 - z) / (1 + z)


@dataclass(frozen=True, eq=False)
class DiskOperator:
    """Pull-back ``V^-1 T V`` of a (conjugate-)linear weighted composition.

    Linear:            ``g -> weight(z) * g(map(z))``
    Conjugate-linear:  ``g -> weight(z) * conj(g(map(z)))``

    Composition operators, the conjugations and their products all have this
    form, so the column ``V^-1 T e_n`` is ``weight * map^n`` (or
    ``weight * conj(map)^n``) and products never go through a truncated sum.
    """

    weight: Callable
    map: Callable
    conjugate_linear: bool = False

    def __matmul__(self, other: "DiskOperator") -> "DiskOperator":
        """``self o other``."""
        fix = np.conj if self.conjugate_linear else (lambda v: v)
        return DiskOperator(
            weight=lambda z: self.weight(z) * fix(other.weight(self.map(z))),
            map=lambda z: other.map(self.map(z)),
            conjugate_linear=self.conjugate_linear != other.conjugate_linear,
        )

    def scaled(self, s: float) -> "DiskOperator":
        return DiskOperator(lambda z: s * self.weight(z), self.map, self.conjugate_linear)

    def columns(self, z: np.ndarray, N: int) -> np.ndarray:
        """Samples of ``V^-1 T e_n`` at ``z`` for ``n < N``, shape ``(len(z), N)``."""
        ratio = self.map(z)
        if self.conjugate_linear:
            ratio = np.conj(ratio)
        return _geometric_columns(self.weight(z), ratio, N)

    @property
    def kind(self) -> str:
        return "conjugate_linear" if self.conjugate_linear else "linear"


def disk_composition(phi: LFSymbol) -> DiskOperator:
    """``C_phi`` on the disk: ``2/((1+z)(1+phi(gamma z))) * g(gamma(phi(gamma z)))``."""
    def weight(z):
        with np.errstate(over="ignore", invalid="ignore"):
            pw = phi(cayley(z))
        # 1 + phi(w) stays in the right half-plane, so only overflow degenerates
        if not np.all(np.isfinite(pw)):
            raise DegenerateSymbol(f"{phi} overflows on the sample circle")
        return 2.0 / ((1 + z) * (1 + pw))
    def cmap(z):
        with np.errstate(over="ignore", invalid="ignore"):
            return cayley(phi(cayley(z)))
    return DiskOperator(weight, cmap, False)


def disk_adjoint(phi: LFSymbol) -> DiskOperator:
    """``C_phi^* = a^-1 C_psi`` on the disk."""
    scale, psi = adjoint_symbol(phi)
    return disk_composition(psi).scaled(scale)


def disk_conjugation(C: ConjugationSpec) -> DiskOperator:
    """Conjugate-linear map ``C`` on the disk.

    ``Wc`` is ``J_U T_Psi C_Phi`` with ``Psi_c = sqrt(1-c^2)/(1-cz)`` and
    ``Phi_c = (c-z)/(1-cz)``; the others come from their half-plane action
    ``pref(w) conj(f(P(w)))`` conjugated by ``V``.
    """
    spec = C.resolved()
    if spec.tag == "Wc":
        c = spec.c
        return DiskOperator(
            weight=lambda z: np.conj(math.sqrt(1.0 - c * c) / (1 - c * np.conj(z))),
            map=lambda z: (c - np.conj(z)) / (1 - c * np.conj(z)),
            conjugate_linear=True,
        )

    def weight(z):
        pref, P = spec.halfplane_action(cayley(z))
        return SQRT2 / (1 + z) * pref * np.conj(SQRT2 / (1 + P))

    def cmap(z):
        return cayley(spec.halfplane_action(cayley(z))[1])

    return DiskOperator(weight, cmap, True)


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Leading ``N x N`` block of an operator in the basis ``e_n``.

    ``entries[m, n]`` is the ``m``-th coefficient of ``T e_n``; for the
    conjugate-linear kind the map is ``c -> entries @ conj(c)``.
    """

    entries: np.ndarray
    kind: str = "linear"
    fft_size: int = DEFAULT_FFT
    radius: float = DEFAULT_RADIUS
    source: Optional[DiskOperator] = None

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def apply(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=complex)
        return self.entries @ (c.conj() if self.kind == "conjugate_linear" else c)

    def column_gram(self, k: Optional[int] = None) -> np.ndarray:
        """``[<T e_j, T e_i>]_{i,j < k}`` over the full (untruncated) columns.

        Uses the exact operator when available (trapezoid rule on ``|z| = 1``,
        i.e. Parseval for the whole coefficient sequence), otherwise the
        truncated product ``A^* A``.
        """
        k = self.order if k is None else k
        if self.source is None:
            E = self.entries[:, :k]
            return E.conj().T @ E
        return column_gram(self.source, k, self.fft_size)


def basis_eval(n: int, w):
    """``e_n(w) = sqrt(2)/(1+w) * gamma(w)^n``."""
    w_arr = np.asarray(w, dtype=complex)
    if np.any(w_arr.real <= 0):
        raise OutsideDomain(f"basis functions live on Re(w) > 0, got {w!r}")
    out = SQRT2 / (1 + w_arr) * cayley(w_arr) ** n
    return complex(out) if out.ndim == 0 else out


def basis_coefficients(u, N: int) -> np.ndarray:
    """Coefficients ``conj(e_n(u))`` of ``K_u`` for ``n < N``."""
    u = complex(u)
    g = cayley(u)
    return np.conj(SQRT2 / (1 + u) * g ** np.arange(N))


def _check_grid(N: int, M: int, rho: float):
    if N < 1:
        raise ValueError(f"order must be >= 1, got {N}")
    if M < 4 * N:
        raise ValueError(f"fft size {M} must be at least 4*order = {4 * N}")
    if not 0.0 < rho < 1.0:
        raise ValueError(f"sample radius must lie in (0, 1), got {rho}")


def _circle(M: int, rho: float) -> np.ndarray:
    return rho * np.exp(2j * np.pi * np.arange(M) / M)


def _taylor_rows(samples: np.ndarray, N: int, rho: float) -> np.ndarray:
    """Taylor coefficients 0..N-1 of each sampled column."""
    M = samples.shape[0]
    coeffs = np.fft.fft(samples, axis=0)[:N] / M
    return coeffs * (rho ** -np.arange(N, dtype=float))[:, None]


def _geometric_columns(prefactor: np.ndarray, ratio: np.ndarray, N: int) -> np.ndarray:
    """Columns ``prefactor * ratio^n`` built by repeated multiplication."""
    out = np.empty((np.shape(prefactor)[0], N), dtype=complex)
    col = np.asarray(prefactor, dtype=complex)
    for n in range(N):
        out[:, n] = col
        col = col * ratio
    return out


def operator_matrix(op: DiskOperator, N: int = DEFAULT_ORDER, M: int = DEFAULT_FFT,
                    rho: float = DEFAULT_RADIUS) -> TruncatedOperator:
    """FFT coefficient extraction of the columns of ``op`` on ``|z| = rho``."""
    _check_grid(N, M, rho)
    samples = op.columns(_circle(M, rho), N)
    return TruncatedOperator(_taylor_rows(samples, N, rho), op.kind, M, rho, op)


def column_gram(op: DiskOperator, k: int, M: int = DEFAULT_FFT) -> np.ndarray:
    """Gram matrix of the first ``k`` columns, by the trapezoid rule on the unit circle.

    The nodes are shifted half a step so that ``z = +-1`` (``w = 0, oo``) is never sampled.
    """
    z = np.exp(2j * np.pi * (np.arange(M) + 0.5) / M)
    S = op.columns(z, k)
    return S.conj().T @ S / M


def composition_matrix(phi: LFSymbol, N: int = DEFAULT_ORDER, M: int = DEFAULT_FFT,
                       rho: float = DEFAULT_RADIUS) -> TruncatedOperator:
    """Matrix ``<C_phi e_n, e_m>``, ``m, n < N``.

    Column ``n`` holds the Taylor coefficients of
    ``2/((1+z)(1+phi(gamma z))) * gamma(phi(gamma z))^n``.
    """
    return operator_matrix(disk_composition(phi), N, M, rho)


def conjugation_matrix(C: ConjugationSpec, N: int = DEFAULT_ORDER, M: int = DEFAULT_FFT,
                       rho: float = DEFAULT_RADIUS) -> TruncatedOperator:
    """Coefficient matrix ``A`` of a conjugate-linear map, ``c -> A conj(c)``."""
    return operator_matrix(disk_conjugation(C), N, M, rho)


def conjugation_matrix_checks(A: TruncatedOperator) -> tuple[float, float]:
    """``(symmetry_defect, unitarity_defect)`` on the leading ``N/2`` block.

    A conjugation in an orthonormal basis is a symmetric unitary matrix.
    """
    if A.kind != "conjugate_linear":
        raise ValueError("conjugation checks need a conjugate-linear operator")
    k = max(1, A.order // 2)
    E = A.entries[:k, :k]
    sym = float(np.max(np.abs(E - E.T)))
    uni = float(np.max(np.abs(A.column_gram(k) - np.eye(k))))
    return sym, uni


def csym_matrix_residual(phi: LFSymbol, C: ConjugationSpec, N: int = 32, M: int = DEFAULT_FFT,
                         rho: float = DEFAULT_RADIUS) -> float:
    """``max |P - P^T|`` on the leading ``N`` block of ``P = [C_phi][C]``.

    ``C T^* C = T`` with ``C`` symmetric unitary is equivalent to ``T A``
    symmetric.  ``P`` is extracted from the product operator itself.
    """
    P = operator_matrix(disk_composition(phi) @ disk_conjugation(C), N, M, rho).entries
    return float(np.max(np.abs(P - P.T)))


def commutator_block(phi: LFSymbol, N: int, M: int = DEFAULT_FFT) -> np.ndarray:
    """Leading ``N`` block of ``T T^* - T^* T`` for ``T = C_phi``.

    ``(T T^*)[i, j] = <T^* e_j, T^* e_i>`` and ``(T^* T)[i, j] = <T e_j, T e_i>``.
    """
    return column_gram(disk_adjoint(phi), N, M) - column_gram(disk_composition(phi), N, M)


def cohypo_matrix_residual(phi: LFSymbol, N: int = 24, M: int = DEFAULT_FFT) -> float:
    """Smallest eigenvalue of the self-commutator block; ``>= 0`` when cohyponormal."""
    H = commutator_block(phi, N, M)
    return hermitian_min_eig(0.5 * (H + H.conj().T))


def operator_defects(phi: LFSymbol, N: int = DEFAULT_ORDER, M: int = DEFAULT_FFT,
                     rho: float = DEFAULT_RADIUS) -> dict[str, float]:
    """Unitarity, self-adjointness and normality defects on the leading ``N/2`` block."""
    k = max(1, N // 2)
    T = composition_matrix(phi, N, M, rho).entries[:k, :k]
    TstarT = column_gram(disk_composition(phi), k, M)
    TTstar = column_gram(disk_adjoint(phi), k, M)
    return {
        "unitary": float(max(np.max(np.abs(TstarT - np.eye(k))), np.max(np.abs(TTstar - np.eye(k))))),
        "self_adjoint": float(np.max(np.abs(T - T.conj().T))),
        "normal": float(np.max(np.abs(TTstar - TstarT))),
    }


@functools.lru_cache(maxsize=8)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def boundary_norm_quadrature(f: Callable, x: float, n_nodes: int = 400) -> float:
    """``(1/2pi) int |f(x+iy)|^2 dy`` with ``y = tan(theta)`` and Gauss-Legendre nodes."""
    if not x > 0:
        raise OutsideDomain(f"line Re(w) = {x} is not inside the half-plane")
    nodes, weights = _gauss_legendre(n_nodes)
    theta = 0.5 * np.pi * nodes
    vals = np.abs(np.asarray(f(x + 1j * np.tan(theta)), dtype=complex)) ** 2 / np.cos(theta) ** 2
    if not np.all(np.isfinite(vals)) or np.max(vals) > 1e300:
        raise QuadratureDivergence(f"integrand overflows on the line Re(w) = {x}")
    return float(0.5 * np.pi * weights @ vals / (2 * np.pi))


def boundary_inner_quadrature(f: Callable, g: Callable, x: float, n_nodes: int = 400) -> complex:
    """``<f, g>`` on the line ``Re(w) = x`` by polarization of the norm quadrature."""
    total = 0j
    for k in range(4):
        ik = 1j ** k
        total += ik * boundary_norm_quadrature(lambda w: f(w) + ik * g(w), x, n_nodes)
    return total / 4


def interior_point_pairs(seed: int, n: int = 10) -> list[tuple[complex, complex]]:
    """``n`` pairs of points with ``|u| <= 2`` and ``Re(u) >= 0.5``.

    The first two pairs sit at the corners ``0.5 +- i sqrt(3.75)`` where
    ``|gamma(u)|`` is largest, so truncation error dominates rounding there.
    """
    corner = complex(0.5, math.sqrt(3.75))
    pairs = [(corner, corner), (corner, corner.conjugate())][:n]
    rng = np.random.default_rng(seed)
    pts: list[complex] = []
    while len(pairs) + len(pts) // 2 < n:
        p = complex(rng.uniform(0.5, 2.0), rng.uniform(-2.0, 2.0))
        if abs(p) <= 2.0:
            pts.append(p)
    pairs.extend(zip(pts[0::2], pts[1::2]))
    return pairs


def matrix_vs_kernel_crosscheck(phi: LFSymbol, N: int, pairs: Sequence[tuple[complex, complex]],
                                M: int = DEFAULT_FFT, rho: float = DEFAULT_RADIUS) -> float:
    """Largest gap between ``<C_phi K_u, K_v>`` from kernel algebra and from the matrix."""
    T = composition_matrix(phi, N, M, rho).entries
    worst = 0.0
    for u, v in pairs:
        exact = inner(apply_forward(phi, KernelCombo.kernel(u)), KernelCombo.kernel(v))
        cu, cv = basis_coefficients(u, N), basis_coefficients(v, N)
        approx = cv.conj() @ T @ cu
        worst = max(worst, abs(exact - approx))
    return worst

