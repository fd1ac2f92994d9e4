import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hpo import spectral as sm
from hpo.errors import DegenerateSymbol, NoConvergence, OutsideDomain
from hpo.kernels import ConjugationSpec, KernelCombo, apply_forward, inner
from hpo.lfmap import LFSymbol
from hpo.linalg import hermitian_min_eig, hermitian_min_eigpair, symmetrize


# -- eigen oracle: bisection on Sylvester inertia ------------------------------

def _negative_count(H, lam):
    """Number of eigenvalues of H below lam, from the pivots of an LDL^H sweep."""
    A = np.array(H, dtype=complex) - lam * np.eye(len(H))
    n = len(A)
    neg = 0
    for k in range(n):
        d = A[k, k].real
        if d == 0.0:
            d = -1e-300
        if d < 0:
            neg += 1
        if k + 1 < n:
            col = A[k + 1:, k] / d
            A[k + 1:, k + 1:] -= np.outer(col, A[k, k + 1:])
    return neg


def bisection_min_eig(H, tol=1e-13):
    lo = -np.abs(H).sum(axis=1).max() - 1.0
    hi = -lo
    while hi - lo > tol * max(1.0, abs(lo) + abs(hi)):
        mid = 0.5 * (lo + hi)
        if _negative_count(H, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@settings(max_examples=40)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_min_eig_matches_inertia_bisection(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    H = X + X.conj().T
    lam = hermitian_min_eig(H)
    assert abs(lam - bisection_min_eig(H)) <= 1e-10 * max(1.0, np.abs(H).max())


def test_min_eigpair_residual_and_known_values():
    assert hermitian_min_eig(np.diag([3.0, -1.0, 2.0])) == pytest.approx(-1.0, abs=1e-15)
    H = np.array([[2, 1j], [-1j, 2]])
    lam, v = hermitian_min_eigpair(H)
    assert lam == pytest.approx(1.0, abs=1e-14)
    assert np.linalg.norm(H @ v - lam * v) <= 1e-14


def test_symmetrize_rejects_non_hermitian():
    with pytest.raises(ValueError):
        symmetrize(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        symmetrize(np.ones((2, 3)))


def test_min_eig_reports_nonconvergence(monkeypatch):
    monkeypatch.setattr(np.linalg, "eigh", lambda H: (_ for _ in ()).throw(np.linalg.LinAlgError("boom")))
    with pytest.raises(NoConvergence):
        hermitian_min_eig(np.eye(2))


# -- basis and transfer --------------------------------------------------------

def test_cayley_is_involution():
    z = np.array([0.3, -0.5 + 0.2j, 0.9j])
    assert np.allclose(sm.cayley(sm.cayley(z)), z, atol=1e-15)


def test_basis_coefficients_reproduce_kernel():
    # sum_n conj(e_n(u)) e_n(w) = K_u(w) for |gamma(u)|, |gamma(w)| < 1
    u, w = 1.3 - 0.4j, 0.8 + 0.5j
    c = sm.basis_coefficients(u, 200)
    approx = sum(c[n] * sm.basis_eval(n, w) for n in range(200))
    assert abs(approx - 1 / (np.conj(u) + w)) <= 1e-14


def test_grid_validation():
    with pytest.raises(ValueError):
        sm.composition_matrix(LFSymbol(1, 0), 0)
    with pytest.raises(ValueError):
        sm.composition_matrix(LFSymbol(1, 0), 64, 128)
    with pytest.raises(ValueError):
        sm.composition_matrix(LFSymbol(1, 0), 8, 64, 1.2)


def test_composition_matrix_examples():
    T = sm.composition_matrix(LFSymbol(1, 0), 8).entries
    assert np.max(np.abs(T - np.eye(8))) <= 1e-12
    T = sm.composition_matrix(LFSymbol(2, 0), 8).entries
    assert abs(T[0, 0] - 2 / 3) <= 1e-12
    # column 0 is 2/(3 - z) on the disk side
    assert abs(T[1, 0] - 2 / 9) <= 1e-12
    assert abs(T[2, 0] - 2 / 27) <= 1e-12


def _quadrature_entry(phi, m, n, x=1e-10):
    # (C_phi e_n)(w) = e_n(phi(w)); entry [m, n] is <C_phi e_n, e_m>
    f = lambda w: sm.basis_eval(n, phi(w))
    g = lambda w: sm.basis_eval(m, w)
    return sm.boundary_inner_quadrature(f, g, x, 400)


@pytest.mark.parametrize("phi", [LFSymbol(2, 1), LFSymbol(0.5, 1 + 1j), LFSymbol(1, 3j)])
def test_matrix_entries_against_boundary_quadrature(phi):
    T = sm.composition_matrix(phi, 8).entries
    for m, n in [(0, 0), (1, 0), (0, 2), (3, 1), (2, 2)]:
        assert abs(T[m, n] - _quadrature_entry(phi, m, n)) <= 1e-7


def test_conjugation_matrix_examples():
    eye = np.eye(16)
    assert np.max(np.abs(sm.conjugation_matrix(ConjugationSpec.J(), 16).entries - eye)) <= 1e-12
    W = sm.conjugation_matrix(ConjugationSpec.W0(), 16).entries
    assert np.max(np.abs(W - np.diag((-1.0) ** np.arange(16)))) <= 1e-12
    A = sm.conjugation_matrix(ConjugationSpec.Wc(0.6), 8)
    assert A.kind == "conjugate_linear"
    assert abs(A.entries[0, 0] - 0.8) <= 1e-12


@pytest.mark.parametrize("C", [ConjugationSpec.J(), ConjugationSpec.Jr(1.0), ConjugationSpec.Wc(0.6),
                               ConjugationSpec.Wc(-0.9), ConjugationSpec.Jr(-2.5)])
def test_conjugation_matrix_checks(C):
    sym, uni = sm.conjugation_matrix_checks(sm.conjugation_matrix(C, 64))
    assert sym <= 1e-8 and uni <= 1e-8


def test_ua_matrix_is_not_a_conjugation():
    sym, uni = sm.conjugation_matrix_checks(sm.conjugation_matrix(ConjugationSpec.Ua(4.0), 64))
    assert uni <= 1e-8 and sym > 1e-4


def test_conjugation_matrix_matches_kernel_action():
    # conjugate-linear convention: [C] c = A conj(c)
    C = ConjugationSpec.Jr(0.7)
    A = sm.conjugation_matrix(C, 64).entries
    u, v = 1.1 + 0.3j, 0.9 - 0.2j
    from hpo.kernels import apply_conjugation
    exact = inner(apply_conjugation(C, KernelCombo.kernel(u)), KernelCombo.kernel(v))
    approx = sm.basis_coefficients(v, 64).conj() @ A @ sm.basis_coefficients(u, 64).conj()
    assert abs(exact - approx) <= 1e-10


def test_parabolic_matrix_symmetric():
    P = sm.composition_matrix(LFSymbol(1, 2), 64).entries[:16, :16]
    assert np.max(np.abs(P - P.T)) <= 1e-8


@pytest.mark.parametrize("phi,C,ok", [
    (LFSymbol(1, 1 + 2j), ConjugationSpec.J(), True),
    (LFSymbol(3, 0), ConjugationSpec.W0(), True),
    (LFSymbol(3, 2j), ConjugationSpec.Jr(-1.0), True),
    (LFSymbol(3, 2j), ConjugationSpec.Jr(1.0), False),
    (LFSymbol(2, 1), ConjugationSpec.J(), False),
])
def test_csym_matrix_residual(phi, C, ok):
    r = sm.csym_matrix_residual(phi, C, 32)
    assert (r <= 1e-8) if ok else (r > 1e-4)


def test_cohypo_matrix_residual_signs():
    assert sm.cohypo_matrix_residual(LFSymbol(2, 1), 24) >= -1e-6
    assert sm.cohypo_matrix_residual(LFSymbol(0.5, 1), 24) < -1e-3
    assert sm.cohypo_matrix_residual(LFSymbol(1, 1 + 1j), 24) >= -1e-10


def test_commutator_gram_against_truncated_product_at_high_order():
    # the column Gram is the exact T^*T block; a 4x wider truncated product agrees closely
    phi = LFSymbol(1, 2 + 1j)
    k = 6
    T = sm.composition_matrix(phi, 96).entries
    approx = T[:, :k].conj().T @ T[:, :k]
    exact = sm.column_gram(sm.disk_composition(phi), k)
    assert np.max(np.abs(approx - exact)) <= 1e-6


@pytest.mark.parametrize("phi,flags", [
    (LFSymbol(1, 3j), dict(unitary=True, self_adjoint=False, normal=True)),
    (LFSymbol(1, 2), dict(unitary=False, self_adjoint=True, normal=True)),
    (LFSymbol(3, 1j), dict(unitary=False, self_adjoint=False, normal=True)),
    (LFSymbol(2, 1), dict(unitary=False, self_adjoint=False, normal=False)),
])
def test_operator_defects(phi, flags):
    d = sm.operator_defects(phi, 64)
    for name, expected in flags.items():
        assert (d[name] <= 1e-6) == expected, (name, d[name])


def test_degenerate_symbol():
    with pytest.raises(DegenerateSymbol):
        sm.composition_matrix(LFSymbol(1e308, 0), 8)


def test_aliasing_control():
    phi = LFSymbol(2, 1)
    A = sm.composition_matrix(phi, 128, 8192).entries
    B = sm.composition_matrix(phi, 128, 16384).entries
    assert np.max(np.abs(A - B)) <= 1e-10


def test_crosscheck_improves_with_order():
    pairs = sm.interior_point_pairs(0, 10)
    phi = LFSymbol(2, 1)
    e32, e64, e128 = (sm.matrix_vs_kernel_crosscheck(phi, N, pairs) for N in (32, 64, 128))
    assert e64 <= 1e-6
    assert e32 / e64 >= 10 and e64 / e128 >= 10


def test_interior_point_pairs_region():
    pairs = sm.interior_point_pairs(4, 10)
    assert len(pairs) == 10
    for p, q in pairs:
        for z in (p, q):
            assert z.real >= 0.5 and abs(z) <= 2 + 1e-12


def test_truncated_operator_apply_matches_kernel():
    phi = LFSymbol(0.5, 1)
    T = sm.composition_matrix(phi, 64)
    u = 1.2 + 0.1j
    coeffs = T.apply(sm.basis_coefficients(u, 64))
    exact = apply_forward(phi, KernelCombo.kernel(u))
    w = 0.9 + 0.3j
    assert abs(sum(coeffs[n] * sm.basis_eval(n, w) for n in range(64)) - exact(w)) <= 1e-8


# -- boundary quadrature --------------------------------------------------------

@pytest.mark.parametrize("x", [1.0, 0.1, 0.001])
def test_quadrature_kernel_norm(x):
    assert abs(sm.boundary_norm_quadrature(lambda w: 1 / (1 + w), x) - 1 / (2 * (1 + x))) <= 1e-8


@given(st.floats(0.2, 3.0), st.floats(-3, 3), st.floats(0.05, 2.0))
def test_quadrature_kernel_gram(re, im, x):
    u = complex(re, im)
    # on the line Re w = x the kernel K_u is K_{u + x} of the shifted space
    expected = 1 / (2 * (u.real + x))
    assert math.isclose(sm.boundary_norm_quadrature(lambda w: 1 / (np.conj(u) + w), x, 800), expected, rel_tol=1e-8)


def test_quadrature_basis_near_boundary():
    assert abs(sm.boundary_norm_quadrature(lambda w: sm.basis_eval(0, w), 0.001) - 1 / 1.001) <= 1e-8
    G = np.array([[sm.boundary_inner_quadrature(lambda w, m=m: sm.basis_eval(m, w),
                                                lambda w, n=n: sm.basis_eval(n, w), 1e-10, 400)
                   for n in range(9)] for m in range(9)])
    assert np.max(np.abs(G - np.eye(9))) <= 1e-8


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_quadrature_errors():
    with pytest.raises(OutsideDomain):
        sm.boundary_norm_quadrature(lambda w: w, 0.0)
    from hpo.errors import QuadratureDivergence
    with pytest.raises(QuadratureDivergence):
        sm.boundary_norm_quadrature(lambda w: np.exp(800 * np.abs(w)), 1.0)
