"""Exact algebra on finite spans of Szegő kernels of the right half-plane.

The inner product is normalised so that ``K_u(w) = 1/(conj(u) + w)`` is the
reproducing kernel, i.e. ``<f, K_u> = f(u)`` with boundary measure
``dy / (2*pi)``.  Every operator used here (composition operators with affine
symbols, their adjoints and the conjugations J, W0, J_r, U_a) maps a single
kernel to a single scaled kernel, so all norms and residuals reduce to finite
Gram sums and involve rounding error only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import OutsideDomain
from .lfmap import LFSymbol, adjoint_symbol, fixed_point
from .linalg import hermitian_min_eigpair

MERGE_TOL = 1e-12
WITNESS_TOL = 1e-12
# below this real part 1/(2 Re u) and its products leave the float range
MIN_POINT_RE = 1e-150


def _check_point(w, what="point") -> complex:
    w = complex(w)
    if not w.real > 0:
        raise OutsideDomain(f"{what} {w!r} is not in the open right half-plane")
    return w


def kernel_eval(u, w) -> complex:
    """``K_u(w) = 1/(conj(u) + w)``."""
    u = _check_point(u, "kernel point")
    w = _check_point(w, "evaluation point")
    return 1.0 / (u.conjugate() + w)


@dataclass(frozen=True)
class ScaledKernel:
    coeff: complex
    point: complex

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "point", _check_point(self.point, "kernel point"))

    def __call__(self, w) -> complex:
        return self.coeff * kernel_eval(self.point, w)


def _normal_form(terms: Iterable[ScaledKernel]) -> tuple[ScaledKernel, ...]:
    coeffs: list[complex] = []
    points: list[complex] = []
    for t in terms:
        for k, p in enumerate(points):
            if abs(p - t.point) < MERGE_TOL:
                coeffs[k] += t.coeff
                break
        else:
            coeffs.append(t.coeff)
            points.append(t.point)
    return tuple(ScaledKernel(c, p) for c, p in zip(coeffs, points) if c != 0)


@dataclass(frozen=True)
class KernelCombo:
    """Finite sum ``sum_j c_j K_{u_j}``; the empty combo is the zero function.

    Terms at points closer than 1e-12 are merged on construction and zero
    coefficients dropped.
    """

    terms: tuple[ScaledKernel, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", _normal_form(self.terms))

    @classmethod
    def kernel(cls, u, coeff=1.0) -> "KernelCombo":
        return cls((ScaledKernel(coeff, u),))

    @classmethod
    def from_arrays(cls, coeffs, points) -> "KernelCombo":
        return cls(tuple(ScaledKernel(c, p) for c, p in zip(coeffs, points)))

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms], dtype=complex)

    @property
    def points(self) -> np.ndarray:
        return np.array([t.point for t in self.terms], dtype=complex)

    def __len__(self):
        return len(self.terms)

    def __call__(self, w) -> complex:
        return combo_eval(self, w)

    def __add__(self, other: "KernelCombo") -> "KernelCombo":
        return KernelCombo(self.terms + other.terms)

    def __neg__(self) -> "KernelCombo":
        return KernelCombo(tuple(ScaledKernel(-t.coeff, t.point) for t in self.terms))

    def __sub__(self, other: "KernelCombo") -> "KernelCombo":
        return self + (-other)

    def __rmul__(self, c) -> "KernelCombo":
        return KernelCombo(tuple(ScaledKernel(c * t.coeff, t.point) for t in self.terms))


def combo_eval(f: KernelCombo, w) -> complex:
    w = _check_point(w, "evaluation point")
    return sum((t.coeff / (t.point.conjugate() + w) for t in f.terms), 0j)


def gram(p: np.ndarray, q: Optional[np.ndarray] = None) -> np.ndarray:
    """``G[j, i] = <K_{p_j}, K_{q_i}> = 1/(conj(p_j) + q_i)``."""
    p = np.asarray(p, dtype=complex)
    q = p if q is None else np.asarray(q, dtype=complex)
    return 1.0 / (p.conj()[:, None] + q[None, :])


def inner(f: KernelCombo, g: KernelCombo) -> complex:
    """``<f, g>`` by the Gram sum ``sum c_j conj(d_i) / (conj(u_j) + v_i)``."""
    if not f.terms or not g.terms:
        return 0j
    return complex(f.coeffs @ gram(f.points, g.points) @ g.coeffs.conj())


def norm(f: KernelCombo) -> float:
    return math.sqrt(max(inner(f, f).real, 0.0))


# -- stable distances ---------------------------------------------------------

def paired_sq_distance(alpha, p, beta, q) -> float:
    """``||sum_j alpha_j K_{p_j} - beta_j K_{q_j}||^2`` without cancellation.

    Each summand is split as ``(alpha-beta) K_p + beta (K_p - K_q)`` and the
    Gram entries of the difference kernels are evaluated in factored form, so
    nearly equal pairs contribute only second-order small terms.
    """
    alpha, p, beta, q = (np.atleast_1d(np.asarray(x, dtype=complex)) for x in (alpha, p, beta, q))
    pc, qc = p.conj(), q.conj()
    # rows index the left argument of <., .>, columns the right one
    g_aa = 1.0 / (pc[:, None] + p[None, :])
    g_ab = (q - p)[None, :] / ((pc[:, None] + p[None, :]) * (pc[:, None] + q[None, :]))
    g_ba = g_ab.conj().T
    s, t = p[None, :], q[None, :]
    g_bb = ((t - s) * (qc - pc)[:, None] * (pc[:, None] + qc[:, None] + s + t)
            / ((pc[:, None] + s) * (pc[:, None] + t) * (qc[:, None] + s) * (qc[:, None] + t)))
    c = np.concatenate([alpha - beta, beta])
    G = np.block([[g_aa, g_ab], [g_ba, g_bb]])
    return max(float((c @ G @ c.conj()).real), 0.0)


def _pair_distance(lhs: Sequence[ScaledKernel], rhs: Sequence[ScaledKernel]) -> float:
    return math.sqrt(paired_sq_distance(
        [t.coeff for t in lhs], [t.point for t in lhs],
        [t.coeff for t in rhs], [t.point for t in rhs]))


def kernel_norm(u) -> float:
    return 1.0 / math.sqrt(2.0 * complex(u).real)


# -- operators, term by term --------------------------------------------------

def _forward_term(phi: LFSymbol, t: ScaledKernel) -> ScaledKernel:
    # (K_u o phi)(w) = 1/(conj(u) + a w + b) = a^-1 K_{(u + conj b)/a}(w)
    return ScaledKernel(t.coeff / phi.a, (t.point + phi.b.conjugate()) / phi.a)


def _adjoint_term(phi: LFSymbol, t: ScaledKernel) -> ScaledKernel:
    return ScaledKernel(t.coeff, phi(t.point))


def apply_forward(phi: LFSymbol, f: KernelCombo) -> KernelCombo:
    """``C_phi f = f o phi``; on kernels ``C_phi K_u = a^-1 K_{(u + conj b)/a}``."""
    return KernelCombo(tuple(_forward_term(phi, t) for t in f.terms))


def apply_adjoint(phi: LFSymbol, f: KernelCombo) -> KernelCombo:
    """``C_phi^* K_u = K_{phi(u)}``, extended linearly."""
    return KernelCombo(tuple(_adjoint_term(phi, t) for t in f.terms))


# -- conjugations -------------------------------------------------------------

_TAGS = ("J", "W0", "Jr", "Wab", "Ua", "Wc")


@dataclass(frozen=True)
class ConjugationSpec:
    """Tagged conjugate-linear map.

    ``J``    f(w) -> conj(f(conj w))
    ``W0``   f(w) -> conj(f(1/conj w)) / w
    ``Jr``   C_tau^-1 W0 C_tau with tau(w) = w + i r
    ``Wab``  the J_r attached to the hyperbolic automorphism a w + b
    ``Ua``   a^-1/2 C_{w/a} J; isometric, not an involution
    ``Wc``   transferred disk conjugation, matrix level only
    """

    tag: str
    r: float = 0.0
    a: float = 1.0
    b: complex = 0j
    c: float = 0.0

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown conjugation tag {self.tag!r}")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "c", float(self.c))
        if self.tag == "Wab" and not (self.a > 0 and self.a != 1.0 and self.b.real == 0.0):
            raise ValueError("Wab needs a > 0, a != 1 and Re(b) == 0")
        if self.tag == "Ua" and not self.a > 0:
            raise ValueError("Ua needs a > 0")
        if self.tag == "Wc" and not -1.0 < self.c < 1.0:
            raise ValueError("Wc needs c in (-1, 1)")

    @classmethod
    def J(cls):
        return cls("J")

    @classmethod
    def W0(cls):
        return cls("W0")

    @classmethod
    def Jr(cls, r: float):
        return cls("Jr", r=r)

    @classmethod
    def Wab(cls, a: float, b: complex):
        return cls("Wab", a=a, b=b)

    @classmethod
    def Ua(cls, a: float):
        return cls("Ua", a=a)

    @classmethod
    def Wc(cls, c: float):
        return cls("Wc", c=c)

    @property
    def is_conjugation(self) -> bool:
        return self.tag != "Ua"

    def resolved(self) -> "ConjugationSpec":
        """Reduce ``Wab`` to its ``Jr`` and ``Wc(0)`` to ``W0``."""
        if self.tag == "Wab":
            # phi = tau o (a w) o tau^-1 forces tau(w) = w + b/(1-a)
            return ConjugationSpec.Jr(self.b.imag / (1.0 - self.a))
        if self.tag == "Wc" and self.c == 0.0:
            return ConjugationSpec.W0()
        return self

    def halfplane_action(self, w):
        """Return ``(pref, P)`` with ``(Cf)(w) = pref(w) * conj(f(P(w)))``."""
        spec = self.resolved()
        w = np.asarray(w, dtype=complex)
        if spec.tag == "J":
            return np.ones_like(w), w.conj()
        if spec.tag == "W0":
            return 1.0 / w, 1.0 / w.conj()
        if spec.tag == "Jr":
            ir = 1j * spec.r
            return 1.0 / (w - ir), 1.0 / (w.conj() + ir) + ir
        if spec.tag == "Ua":
            return np.full_like(w, spec.a ** -0.5), w.conj() / spec.a
        raise NotImplementedError("Wc with c != 0 has no closed half-plane action")

    def __str__(self):
        if self.tag == "Jr":
            return f"Jr({self.r:g})"
        if self.tag == "Wab":
            return f"Wab({self.a:g}, {self.b:g})"
        if self.tag == "Ua":
            return f"Ua({self.a:g})"
        if self.tag == "Wc":
            return f"Wc({self.c:g})"
        return self.tag


def _conj_term(C: ConjugationSpec, t: ScaledKernel) -> ScaledKernel:
    spec = C.resolved()
    c, u = t.coeff.conjugate(), t.point
    if spec.tag == "J":
        return ScaledKernel(c, u.conjugate())
    if spec.tag == "W0":
        return ScaledKernel(c / u, 1.0 / u.conjugate())
    if spec.tag == "Jr":
        ir = 1j * spec.r
        return ScaledKernel(c / (u - ir), 1.0 / (u.conjugate() + ir) + ir)
    if spec.tag == "Ua":
        return ScaledKernel(c * math.sqrt(spec.a), spec.a * u.conjugate())
    raise NotImplementedError("Wc with c != 0 is only available as a matrix")


def apply_conjugation(C: ConjugationSpec, f: KernelCombo) -> KernelCombo:
    """Conjugate-linear action on a kernel combination.

    Kernel images::

        J      K_u -> K_{conj u}
        W0     K_u -> u^-1 K_{1/conj u}
        Jr(r)  K_u -> (u - ir)^-1 K_{1/(conj u + ir) + ir}
        Ua(a)  K_u -> a^1/2 K_{a conj u}
    """
    return KernelCombo(tuple(_conj_term(C, t) for t in f.terms))


def conjugate_function(C: ConjugationSpec, f):
    """Action of ``C`` on an arbitrary callable ``f`` on the half-plane."""
    def Cf(w):
        pref, P = C.halfplane_action(w)
        return pref * np.conj(f(P))
    return Cf


# -- sampling -----------------------------------------------------------------

def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def random_points(seed_or_rng, n: int) -> np.ndarray:
    """Points with ``Re = exp(U[-1.5, 1.5])`` and ``Im = U[-4, 4]``."""
    rng = _rng(seed_or_rng)
    re = np.exp(rng.uniform(-1.5, 1.5, n))
    im = rng.uniform(-4.0, 4.0, n)
    return re + 1j * im


def random_combo(seed_or_rng, n_terms: int = 3) -> KernelCombo:
    rng = _rng(seed_or_rng)
    pts = random_points(rng, n_terms)
    coeffs = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    return KernelCombo.from_arrays(coeffs, pts)


def default_points(phi: Optional[LFSymbol] = None, seed: int = 0, n: int = 12) -> list[complex]:
    """``n`` seeded points, plus the fixed point of ``phi`` when it lies inside."""
    pts = [complex(p) for p in random_points(seed, n)]
    fp = None if phi is None else usable_fixed_point(phi)
    if fp is not None:
        pts.append(fp)
    return pts


def usable_fixed_point(phi: LFSymbol) -> Optional[complex]:
    """Fixed point of ``phi`` if it is inside and its kernel norm is representable."""
    fp = fixed_point(phi)
    if fp is None or fp.outside_domain or fp.value.real < MIN_POINT_RE:
        return None
    return fp.value


# -- residuals ----------------------------------------------------------------

def conjugation_axiom_residuals(C: ConjugationSpec, samples: Sequence[KernelCombo]) -> tuple[float, float]:
    """``(involution, antiunitarity)`` defects over ``samples``.

    involution    = max_f ||C C f - f|| / max(1, ||f||)
    antiunitarity = max_{f, g} |<Cf, Cg> - <g, f>|
    """
    if not samples:
        raise ValueError("need at least one sample")
    involution = 0.0
    for f in samples:
        twice = [_conj_term(C, _conj_term(C, t)) for t in f.terms]
        d = _pair_distance(twice, f.terms)
        involution = max(involution, d / max(1.0, norm(f)))

    images = [apply_conjugation(C, f) for f in samples]
    orig = _stacked_gram(samples)
    img = _stacked_gram(images)
    antiunitarity = float(np.max(np.abs(img - orig.T)))
    return involution, antiunitarity


def _stacked_gram(combos: Sequence[KernelCombo]) -> np.ndarray:
    """Matrix of ``<f_i, f_j>`` for all pairs."""
    pts = np.concatenate([f.points for f in combos])
    coef = np.zeros((len(combos), len(pts)), dtype=complex)
    k = 0
    for i, f in enumerate(combos):
        coef[i, k:k + len(f)] = f.coeffs
        k += len(f)
    return coef @ gram(pts) @ coef.conj().T


def symmetry_residual(phi: LFSymbol, C: ConjugationSpec, points: Sequence[complex]) -> float:
    """max over ``u`` of ``||C C_phi^* C K_u - C_phi K_u|| / ||K_u||``."""
    if not C.is_conjugation:
        raise ValueError(f"{C} is not a conjugation")
    if len(points) == 0:
        raise ValueError("need at least one point")
    spec = C.resolved()
    if spec.tag == "Jr" and spec.r != 0.0:
        # J_r = T_{-r} W0 T_r with (T_r f)(w) = f(w + ir) unitary, and
        # T_r C_phi T_{-r} = C_phi~ with phi~(w) = phi(w + ir) - ir.  The norm
        # is unchanged in the translated frame, and there the cancellation in
        # Im(b) + (a - 1) r happens once on O(|b|) numbers instead of after
        # the kernel points have been pushed out to distance |r|.
        shifted = LFSymbol(phi.a, complex(phi.b.real, phi.b.imag + (phi.a - 1.0) * spec.r))
        moved = [complex(u) - 1j * spec.r for u in points]
        return symmetry_residual(shifted, ConjugationSpec.W0(), moved)
    worst = 0.0
    for u in points:
        k = ScaledKernel(1.0, u)
        lhs = _conj_term(C, _adjoint_term(phi, _conj_term(C, k)))
        rhs = _forward_term(phi, k)
        worst = max(worst, _pair_distance([lhs], [rhs]) / kernel_norm(u))
    return worst


def adjoint_formula_residual(phi: LFSymbol, points: Sequence[complex]) -> float:
    """Defect of ``C_phi^* = a^-1 C_psi`` on kernels."""
    scale, psi = adjoint_symbol(phi)
    worst = 0.0
    for u in points:
        k = ScaledKernel(1.0, u)
        lhs = _adjoint_term(phi, k)
        fw = _forward_term(psi, k)
        rhs = ScaledKernel(scale * fw.coeff, fw.point)
        worst = max(worst, _pair_distance([lhs], [rhs]) / kernel_norm(u))
    return worst


def ua_relation_residual(a: float, b: complex, points: Sequence[complex]) -> float:
    """Defect of ``U_a C_phi U_a = C_phi^*`` on kernels, ``phi = (a, b)``."""
    phi = LFSymbol(a, b)
    U = ConjugationSpec.Ua(a)
    worst = 0.0
    for u in points:
        k = ScaledKernel(1.0, u)
        lhs = _conj_term(U, _forward_term(phi, _conj_term(U, k)))
        rhs = _adjoint_term(phi, k)
        worst = max(worst, _pair_distance([lhs], [rhs]) / kernel_norm(u))
    return worst


def cohypo_quadratic_form(phi: LFSymbol, f: KernelCombo) -> float:
    """``||C_phi^* f||^2 - ||C_phi f||^2``; negative values refute cohyponormality."""
    val = inner(apply_adjoint(phi, f), apply_adjoint(phi, f)) - inner(apply_forward(phi, f), apply_forward(phi, f))
    assert abs(val.imag) <= 1e-14 * max(1.0, abs(val.real)), val
    return val.real


def cohypo_form_matrix(phi: LFSymbol, points: Sequence[complex]) -> np.ndarray:
    """``D[i, j] = <C* K_j, C* K_i> - <C K_j, C K_i>`` so that ``c^H D c`` is the form."""
    u = np.asarray(points, dtype=complex)
    adj = phi(u)
    fwd = (u + phi.b.conjugate()) / phi.a
    return (1.0 / (adj[:, None] + adj.conj()[None, :])
            - phi.a ** -2 / (fwd[:, None] + fwd.conj()[None, :]))


@dataclass(frozen=True)
class Witness:
    """Kernel combination on which the cohyponormality form is negative."""

    points: tuple[complex, ...]
    coeffs: tuple[complex, ...]
    value: float

    def combo(self) -> KernelCombo:
        return KernelCombo.from_arrays(self.coeffs, self.points)


def witness_points(phi: LFSymbol, n_points: int, seed: int) -> list[complex]:
    """Seeded points, led by the fixed point when it is inside the half-plane."""
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    fp = usable_fixed_point(phi)
    pts: list[complex] = [] if fp is None else [fp]
    pts.extend(complex(p) for p in random_points(seed, n_points - len(pts)))
    return pts


def witness_tolerance(phi: LFSymbol, points: Sequence[complex]) -> float:
    return WITNESS_TOL * max(1.0, float(np.max(np.abs(cohypo_form_matrix(phi, points)))))


def cohypo_min_form(phi: LFSymbol, points: Sequence[complex]) -> tuple[float, np.ndarray]:
    return hermitian_min_eigpair(cohypo_form_matrix(phi, points))


def cohypo_witness_search(phi: LFSymbol, n_points: int, seed: int) -> Optional[Witness]:
    """Look for a kernel combination with ``||C_phi f|| > ||C_phi^* f||``.

    Returns ``None`` when the form matrix ``D`` has no eigenvalue below
    ``-1e-12 * max(1, max|D|)``.  The scale matters: near the fixed point
    ``b/(1-a)`` the entries of ``D`` grow like ``1/Re(b)``.
    """
    pts = witness_points(phi, n_points, seed)
    lam, vec = cohypo_min_form(phi, pts)
    if lam < -witness_tolerance(phi, pts):
        return Witness(tuple(pts), tuple(complex(c) for c in vec), lam)
    return None
