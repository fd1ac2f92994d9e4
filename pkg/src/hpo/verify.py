"""Named verification suites: each binds one structural statement about
``C_phi`` to a list of measured residuals with pass/fail thresholds.

Every suite is deterministic given ``(seed, scale)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels as kc
from . import spectral as sm
from .errors import UnknownSuite
from .kernels import ConjugationSpec, KernelCombo
from .lfmap import LFSymbol

BELOW, ABOVE = "below", "above"
EXACT_ORDER = 64


@dataclass(frozen=True)
class Scale:
    n_points: int
    n_symbols: int
    order: int
    fft: int
    cohypo_order: int
    witness_seeds: int


SCALES = {
    "quick": Scale(n_points=12, n_symbols=12, order=32, fft=8192, cohypo_order=24, witness_seeds=10),
    "full": Scale(n_points=50, n_symbols=50, order=128, fft=16384, cohypo_order=48, witness_seeds=100),
}


@dataclass(frozen=True)
class Case:
    label: str
    measured: float
    threshold: float
    direction: str
    expected_fail: bool = False

    @property
    def passed(self) -> bool:
        if self.direction == BELOW:
            return self.measured < self.threshold
        return self.measured > self.threshold


@dataclass
class SuiteResult:
    suite_name: str
    seed: int
    scale: str
    cases: list[Case] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def below(self, label, measured, threshold):
        self.cases.append(Case(label, float(measured), threshold, BELOW))

    def above(self, label, measured, threshold, expected_fail=False):
        self.cases.append(Case(label, float(measured), threshold, ABOVE, expected_fail))


# -- random symbols -----------------------------------------------------------

def _dilation_away_from_one(rng) -> float:
    a = math.exp(rng.uniform(math.log(1.25), math.log(10.0)))
    return a if rng.random() < 0.5 else 1.0 / a


def random_parabolic(rng) -> LFSymbol:
    re = 0.0 if rng.random() < 0.3 else math.exp(rng.uniform(-2, 1.5))
    im = rng.uniform(-4, 4)
    return LFSymbol(1.0, complex(re, im))


def random_hyperbolic(rng, automorphism: bool = False) -> LFSymbol:
    a = _dilation_away_from_one(rng)
    re = 0.0 if automorphism else math.exp(rng.uniform(-2, 1.5))
    return LFSymbol(a, complex(re, rng.uniform(-4, 4)))


def random_symbol(rng) -> LFSymbol:
    a = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
    re = 0.0 if rng.random() < 0.25 else math.exp(rng.uniform(-2, 1.5))
    return LFSymbol(a, complex(re, rng.uniform(-4, 4)))


def _fmt(phi: LFSymbol) -> str:
    return f"({phi.a:.4g}, {phi.b.real:.4g}{phi.b.imag:+.4g}i)"


# -- suites -------------------------------------------------------------------

def suite_conjugation_axioms(res: SuiteResult, rng, sc: Scale):
    samples = [kc.random_combo(rng) for _ in range(sc.n_points)]
    for C in (ConjugationSpec.J(), ConjugationSpec.W0(), ConjugationSpec.Jr(-2.0),
              ConjugationSpec.Jr(0.0), ConjugationSpec.Jr(1.5), ConjugationSpec.Jr(-1.5)):
        inv, anti = kc.conjugation_axiom_residuals(C, samples)
        res.below(f"{C} is an involution", inv, 1e-12)
        res.below(f"{C} is antiunitary", anti, 1e-12)
    U = ConjugationSpec.Ua(4.0)
    inv, anti = kc.conjugation_axiom_residuals(U, samples + [KernelCombo.kernel(1.0)])
    res.below(f"{U} is isometric conjugate-linear", anti, 1e-12)
    res.above(f"{U} involution defect (expected-fail: not a conjugation)", inv, 0.1, expected_fail=True)


def suite_thm9(res: SuiteResult, rng, sc: Scale):
    pts = kc.random_points(rng, sc.n_points)
    J = ConjugationSpec.J()
    for _ in range(sc.n_symbols):
        phi = random_parabolic(rng)
        res.below(f"parabolic {_fmt(phi)} is J-symmetric", kc.symmetry_residual(phi, J, pts), 1e-12)
    fixed = [LFSymbol(0.5, 1.0), LFSymbol(2.0, 1.0), LFSymbol(0.5, 2 + 3j), LFSymbol(2.0, 1j)]
    for phi in fixed + [random_hyperbolic(rng, rng.random() < 0.3) for _ in range(sc.n_symbols)]:
        res.above(f"non-parabolic {_fmt(phi)} is not J-symmetric", kc.symmetry_residual(phi, J, pts), 1e-6)


def suite_thm26(res: SuiteResult, rng, sc: Scale):
    pts = kc.random_points(rng, sc.n_points)
    W0 = ConjugationSpec.W0()
    dil = [0.1, 0.5, 2.0, 10.0, 1.0] + [_dilation_away_from_one(rng) for _ in range(sc.n_symbols // 2)]
    for a in dil:
        phi = LFSymbol(a, 0j)
        res.below(f"dilation {_fmt(phi)} is W0-symmetric", kc.symmetry_residual(phi, W0, pts), 1e-12)
    others = [LFSymbol(1.0, 2 + 3j), LFSymbol(2.0, 1j), LFSymbol(0.5, 1.0)]
    for phi in others + [random_symbol(rng) for _ in range(sc.n_symbols)]:
        res.above(f"{_fmt(phi)} with b != 0 is not W0-symmetric", kc.symmetry_residual(phi, W0, pts), 1e-6)


def suite_thm100(res: SuiteResult, rng, sc: Scale):
    pts = kc.random_points(rng, sc.n_points)
    for _ in range(sc.n_symbols):
        phi = random_hyperbolic(rng, automorphism=True)
        r = phi.b.imag / (1.0 - phi.a)
        res.below(f"hyperbolic automorphism {_fmt(phi)} is Jr({r:.4g})-symmetric",
                  kc.symmetry_residual(phi, ConjugationSpec.Jr(r), pts), 1e-12)
        res.above(f"hyperbolic automorphism {_fmt(phi)} is not Jr({r + 0.1:.4g})-symmetric",
                  kc.symmetry_residual(phi, ConjugationSpec.Jr(r + 0.1), pts), 1e-6)
    for _ in range(max(2, sc.n_symbols // 4)):
        phi = random_hyperbolic(rng, automorphism=False)
        r = phi.b.imag / (1.0 - phi.a)
        res.above(f"non-automorphism {_fmt(phi)} is not Jr({r:.4g})-symmetric",
                  kc.symmetry_residual(phi, ConjugationSpec.Jr(r), pts), 1e-6)
    for phi, r in ((LFSymbol(1.0, 1j), 0.0), (LFSymbol(1.0, 2.0), 1.0)):
        res.above(f"parabolic {_fmt(phi)} is not Jr({r:g})-symmetric",
                  kc.symmetry_residual(phi, ConjugationSpec.Jr(r), pts), 1e-6)


def suite_prop3(res: SuiteResult, rng, sc: Scale):
    pts = kc.random_points(rng, sc.n_points)
    for _ in range(sc.n_symbols):
        phi = random_symbol(rng)
        res.below(f"C_phi^* = a^-1 C_psi for {_fmt(phi)}", kc.adjoint_formula_residual(phi, pts), 1e-12)
    worst = 0.0
    for _ in range(sc.n_symbols):
        phi = random_symbol(rng)
        u, v = kc.random_points(rng, 2)
        lhs = kc.inner(kc.apply_forward(phi, KernelCombo.kernel(u)), KernelCombo.kernel(v))
        rhs = kc.inner(KernelCombo.kernel(u), kc.apply_adjoint(phi, KernelCombo.kernel(v)))
        worst = max(worst, abs(lhs - rhs))
    res.below("<C_phi K_u, K_v> = <K_u, C_phi^* K_v>", worst, 1e-12)


def suite_eq29(res: SuiteResult, rng, sc: Scale):
    pts = kc.random_points(rng, sc.n_points)
    for _ in range(sc.n_symbols):
        phi = random_symbol(rng)
        res.below(f"U_a C_phi U_a = C_phi^* for {_fmt(phi)}", kc.ua_relation_residual(phi.a, phi.b, pts), 1e-12)
    samples = [kc.random_combo(rng) for _ in range(sc.n_points)]
    for a in (0.25, 4.0):
        _, anti = kc.conjugation_axiom_residuals(ConjugationSpec.Ua(a), samples)
        res.below(f"U_{a:g} is isometric", anti, 1e-12)


def suite_thm101(res: SuiteResult, rng, sc: Scale):
    seed0 = int(rng.integers(0, 2**31))
    w = kc.cohypo_witness_search(LFSymbol(0.5, 1.0), 1, seed0)
    value = w.value if w is not None else 0.0
    res.below("witness at the fixed point u=2 of (0.5, 1)", value, -1.0 / 12.0 + 1e-10)
    res.below("|witness value + 1/12|", abs(value + 1.0 / 12.0), 1e-12)

    seeds = range(seed0, seed0 + sc.witness_seeds)
    cases = [LFSymbol(2.0, 1.0), LFSymbol(4.0, 2 + 3j)]
    cases += [random_hyperbolic(rng, automorphism=True) for _ in range(3)]
    cases += [LFSymbol(1.0, 5.0), LFSymbol(0.5, 3j)]
    for phi in cases:
        lam = min(kc.cohypo_min_form(phi, kc.witness_points(phi, 8, s))[0] for s in seeds)
        res.above(f"no cohyponormality violation for {_fmt(phi)}", lam, -1e-12)
    for _ in range(max(3, sc.n_symbols // 4)):
        phi = LFSymbol(math.exp(rng.uniform(math.log(0.1), math.log(0.8))),
                       complex(math.exp(rng.uniform(-2, 1.5)), rng.uniform(-4, 4)))
        lam = kc.cohypo_min_form(phi, kc.witness_points(phi, 8, seed0))[0]
        res.below(f"witness found for {_fmt(phi)} (a < 1, Re b > 0)", lam, -1e-12)

    N = sc.cohypo_order
    res.above("truncated commutator of (2, 1) is positive", sm.cohypo_matrix_residual(LFSymbol(2.0, 1.0), N, sc.fft), -1e-6)
    res.below("truncated commutator of (0.5, 1) is indefinite", sm.cohypo_matrix_residual(LFSymbol(0.5, 1.0), N, sc.fft), -1e-3)


def suite_thm2_matrix(res: SuiteResult, rng, sc: Scale):
    N = sc.order
    table = [
        (LFSymbol(1.0, 3j), dict(unitary=True, self_adjoint=False, normal=True)),
        (LFSymbol(1.0, 2.0), dict(unitary=False, self_adjoint=True, normal=True)),
        (LFSymbol(1.0, 2 + 3j), dict(unitary=False, self_adjoint=False, normal=True)),
        (LFSymbol(3.0, 1j), dict(unitary=False, self_adjoint=False, normal=True)),
        (LFSymbol(0.25, 3j), dict(unitary=False, self_adjoint=False, normal=True)),
        (LFSymbol(2.0, 1.0), dict(unitary=False, self_adjoint=False, normal=False)),
        (LFSymbol(0.5, 1 + 1j), dict(unitary=False, self_adjoint=False, normal=False)),
    ]
    tol = {"unitary": 1e-8, "self_adjoint": 1e-8, "normal": 1e-6}
    for phi, flags in table:
        d = sm.operator_defects(phi, N, sc.fft)
        for name, expected in flags.items():
            if expected:
                res.below(f"{_fmt(phi)} {name} defect", d[name], tol[name])
            else:
                res.above(f"{_fmt(phi)} not {name}", d[name], 1e-4)
    H = sm.commutator_block(LFSymbol(1.0, 3j), sc.cohypo_order, sc.fft)
    res.below("commutator of unitary (1, 3i) vanishes", np.max(np.abs(H)), 1e-6)


def suite_transfer_consistency(res: SuiteResult, rng, sc: Scale):
    N, M = sc.order, sc.fft
    half = N // 2
    # radius correction amplifies rounding by 0.9^-N, so exact-structure
    # checks stop at N = 64 where that factor is still below 1e3
    Ne = min(N, EXACT_ORDER)
    eye = np.eye(Ne)
    res.below(f"identity symbol gives the identity matrix (N={Ne})",
              np.max(np.abs(sm.composition_matrix(LFSymbol(1.0, 0j), Ne, M).entries - eye)), 1e-12)
    res.below(f"J is the identity matrix (N={Ne})",
              np.max(np.abs(sm.conjugation_matrix(ConjugationSpec.J(), Ne, M).entries - eye)), 1e-12)
    res.below(f"W0 is diag((-1)^n) (N={Ne})",
              np.max(np.abs(sm.conjugation_matrix(ConjugationSpec.W0(), Ne, M).entries - np.diag((-1.0) ** np.arange(Ne)))), 1e-12)
    wc = sm.conjugation_matrix(ConjugationSpec.Wc(0.6), N, M)
    res.below("Wc(0.6) constant coefficient is sqrt(1 - c^2)", abs(wc.entries[0, 0] - 0.8), 1e-12)
    for C in (ConjugationSpec.Wc(0.6), ConjugationSpec.Jr(1.0), ConjugationSpec.Wc(-0.3)):
        sym, uni = sm.conjugation_matrix_checks(sm.conjugation_matrix(C, N, M))
        res.below(f"{C} matrix is symmetric", sym, 1e-8)
        res.below(f"{C} matrix is unitary", uni, 1e-8)
    sym, _ = sm.conjugation_matrix_checks(sm.conjugation_matrix(ConjugationSpec.Ua(4.0), N, M))
    res.above("Ua(4) matrix is not symmetric (expected-fail: not a conjugation)", sym, 1e-4, expected_fail=True)

    P = sm.composition_matrix(LFSymbol(1.0, 2.0), N, M).entries[:half, :half]
    res.below("parabolic (1, 2) matrix is symmetric", np.max(np.abs(P - P.T)), 1e-8)
    for phi, C, direction in (
        (LFSymbol(1.0, 1 + 2j), ConjugationSpec.J(), BELOW),
        (LFSymbol(3.0, 0j), ConjugationSpec.W0(), BELOW),
        (LFSymbol(3.0, 2j), ConjugationSpec.Jr(-1.0), BELOW),
        (LFSymbol(3.0, 2j), ConjugationSpec.Jr(1.0), ABOVE),
        (LFSymbol(2.0, 1.0), ConjugationSpec.J(), ABOVE),
    ):
        r = sm.csym_matrix_residual(phi, C, half, M)
        if direction == BELOW:
            res.below(f"[C_phi][{C}] symmetric for {_fmt(phi)}", r, 1e-8)
        else:
            res.above(f"[C_phi][{C}] not symmetric for {_fmt(phi)}", r, 1e-4)

    pairs = sm.interior_point_pairs(int(rng.integers(0, 2**31)), 10)
    phi = LFSymbol(2.0, 1.0)
    coarse = sm.matrix_vs_kernel_crosscheck(phi, 32, pairs, M)
    fine = sm.matrix_vs_kernel_crosscheck(phi, 64, pairs, M)
    res.below("matrix agrees with kernel algebra at N=64", fine, 1e-6)
    res.above("N-doubling 32 -> 64 shrinks the discrepancy by 10x", coarse / max(fine, 1e-300), 10.0)
    if N >= 128:
        finer = sm.matrix_vs_kernel_crosscheck(phi, 128, pairs, M)
        res.above("N-doubling 64 -> 128 shrinks the discrepancy by 10x", fine / max(finer, 1e-300), 10.0)

    A = sm.composition_matrix(phi, N, M).entries
    B = sm.composition_matrix(phi, N, 2 * M).entries
    res.below("M -> 2M changes no retained entry", np.max(np.abs(A - B)), 1e-10)

    x = 1e-10
    k = 5 if N < 128 else 9
    G = np.array([[sm.boundary_inner_quadrature(lambda w, m=m: sm.basis_eval(m, w),
                                                lambda w, n=n: sm.basis_eval(n, w), x, 200)
                   for n in range(k)] for m in range(k)])
    res.below(f"basis e_0..e_{k - 1} orthonormal by boundary quadrature", np.max(np.abs(G - np.eye(k))), 1e-8)
    for x in (1.0, 0.1, 0.001):
        q = sm.boundary_norm_quadrature(lambda w: 1.0 / (1.0 + w), x)
        res.below(f"||K_1||^2 on Re w = {x:g} matches 1/(2(1+x))", abs(q - 0.5 / (1 + x)), 1e-8)


SUITES: dict[str, Callable] = {
    "conjugation_axioms": suite_conjugation_axioms,
    "thm9": suite_thm9,
    "thm26": suite_thm26,
    "thm100": suite_thm100,
    "prop3": suite_prop3,
    "eq29": suite_eq29,
    "thm101": suite_thm101,
    "thm2_matrix": suite_thm2_matrix,
    "transfer_consistency": suite_transfer_consistency,
}


def run_suite(name: str, seed: int = 0, scale: str = "quick") -> SuiteResult:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}")
    # each suite draws from its own stream so suites are independent of run order
    rng = np.random.default_rng([seed, list(SUITES).index(name)])
    result = SuiteResult(name, seed, scale)
    t0 = time.perf_counter()
    SUITES[name](result, rng, SCALES[scale])
    result.elapsed = time.perf_counter() - t0
    return result


def run_all(seed: int = 0, scale: str = "quick") -> list[SuiteResult]:
    return [run_suite(name, seed, scale) for name in SUITES]
