"""Rule-based classification of ``C_phi`` with certificate conjugations.

Flags follow exact parameter rules; the numerical layers are then asked to
confirm them (:func:`cross_validate`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import kernels as kc
from .kernels import ConjugationSpec
from .lfmap import LFSymbol, SymbolClass, classify_symbol

SYMMETRIC_TOL = 1e-12
ASYMMETRIC_TOL = 1e-6
DEFAULT_N_POINTS = 12


@dataclass
class ClassificationReport:
    symbol: LFSymbol
    symbol_class: SymbolClass
    normal: bool
    self_adjoint: bool
    unitary: bool
    complex_symmetric: bool
    cohyponormal: bool
    certificate: Optional[ConjugationSpec]
    residuals: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def check_invariants(self):
        assert not self.unitary or self.normal
        assert not self.self_adjoint or self.normal
        assert self.complex_symmetric == self.normal
        a, b = self.symbol.a, self.symbol.b
        assert self.cohyponormal == (a >= 1.0 or b.real == 0.0)
        assert (self.certificate is not None) == self.complex_symmetric


def certificate_for(phi: LFSymbol) -> Optional[ConjugationSpec]:
    """The conjugation ``C`` with ``C C_phi^* C = C_phi``, or ``None``."""
    if phi.a == 1.0:
        return ConjugationSpec.J()
    if phi.b == 0j:
        return ConjugationSpec.W0()
    if phi.b.real == 0.0:
        return ConjugationSpec.Wab(phi.a, phi.b).resolved()
    return None


def wrong_conjugations(phi: LFSymbol) -> list[ConjugationSpec]:
    """Conjugations for which ``C_phi`` must *not* be symmetric.

    Empty for the identity, which is symmetric with respect to every conjugation.
    """
    if phi.is_identity:
        return []
    cert = certificate_for(phi)
    if cert is None:
        return [ConjugationSpec.J(), ConjugationSpec.W0(), ConjugationSpec.Jr(0.5)]
    if cert.tag == "J":
        return [ConjugationSpec.W0(), ConjugationSpec.Jr(1.0)]
    if cert.tag == "W0":
        return [ConjugationSpec.J(), ConjugationSpec.Jr(1.0)]
    return [ConjugationSpec.J(), ConjugationSpec.W0(), ConjugationSpec.Jr(cert.r + 0.1)]


def classify_operator(phi: LFSymbol, seed: int = 0, n_points: int = DEFAULT_N_POINTS) -> ClassificationReport:
    a, b = phi.a, phi.b
    normal = a == 1.0 or b.real == 0.0
    cert = certificate_for(phi)
    report = ClassificationReport(
        symbol=phi,
        symbol_class=classify_symbol(phi),
        normal=normal,
        self_adjoint=a == 1.0 and b.imag == 0.0 and b.real >= 0.0,
        unitary=a == 1.0 and b.real == 0.0,
        complex_symmetric=normal,
        cohyponormal=a >= 1.0 or b.real == 0.0,
        certificate=cert,
    )
    points = kc.default_points(phi, seed, n_points)
    if cert is not None:
        report.residuals["certificate_symmetry"] = kc.symmetry_residual(phi, cert, points)
    report.residuals["adjoint_formula"] = kc.adjoint_formula_residual(phi, points)
    report.residuals["ua_relation"] = kc.ua_relation_residual(a, b, points)
    report.residuals["cohypo_min_form"] = kc.cohypo_min_form(phi, points)[0]
    if cert is not None and cert.tag == "W0":
        report.notes.append("Jr(0) coincides with W0")
    if phi.is_identity:
        report.notes.append("identity operator is symmetric for every conjugation")
    report.check_invariants()
    return report


@dataclass(frozen=True)
class CheckResult:
    expected: bool
    residual: float
    passed: bool


def cross_validate(phi: LFSymbol, seed: int = 0, n_points: int = DEFAULT_N_POINTS) -> dict[str, CheckResult]:
    """Compare each rule-based flag with a kernel-level measurement.

    ``expected`` is the predicted truth of the checked property, ``residual``
    the measured quantity, ``passed`` whether they agree.
    """
    points = kc.default_points(phi, seed, n_points)
    out: dict[str, CheckResult] = {}

    cert = certificate_for(phi)
    if cert is not None:
        res = kc.symmetry_residual(phi, cert, points)
        out[f"symmetric:{cert}"] = CheckResult(True, res, res <= SYMMETRIC_TOL)
    for C in wrong_conjugations(phi):
        res = kc.symmetry_residual(phi, C, points)
        out[f"symmetric:{C}"] = CheckResult(False, res, res > ASYMMETRIC_TOL)

    cohypo = phi.a >= 1.0 or phi.b.real == 0.0
    wpts = kc.witness_points(phi, n_points, seed)
    lam = kc.cohypo_min_form(phi, wpts)[0]
    found = lam < -kc.witness_tolerance(phi, wpts)
    out["cohyponormal"] = CheckResult(cohypo, lam, found != cohypo)

    res = kc.adjoint_formula_residual(phi, points)
    out["adjoint_formula"] = CheckResult(True, res, res <= SYMMETRIC_TOL)
    res = kc.ua_relation_residual(phi.a, phi.b, points)
    out["ua_relation"] = CheckResult(True, res, res <= SYMMETRIC_TOL)
    return out
