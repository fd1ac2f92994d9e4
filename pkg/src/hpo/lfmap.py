"""Affine self-maps w -> a*w + b of the right half-plane.

Only the bounded class a > 0, Re(b) >= 0 is represented.  Membership tests
(Re(b) == 0, a == 1, b == 0) compare stored values exactly: the
classification is rule-based, not numerical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import NotAutomorphism, UnboundedSymbol


class SymbolClass(str, enum.Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    PARABOLIC_AUTOMORPHISM = "parabolic_automorphism"
    HYPERBOLIC = "hyperbolic"
    HYPERBOLIC_AUTOMORPHISM = "hyperbolic_automorphism"


@dataclass(frozen=True)
class LFSymbol:
    """The map ``w -> a*w + b`` with ``a > 0`` and ``Re(b) >= 0``."""

    a: float
    b: complex = 0j

    def __post_init__(self):
        a = float(self.a)
        b = complex(self.b)
        if not a > 0:
            raise UnboundedSymbol(f"dilation a must be positive, got a={a!r}")
        if not b.real >= 0:
            raise UnboundedSymbol(f"translation must have Re(b) >= 0, got b={b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __call__(self, w):
        return self.a * w + self.b

    @property
    def is_identity(self) -> bool:
        return self.a == 1.0 and self.b == 0j

    @property
    def is_automorphism(self) -> bool:
        return self.b.real == 0.0

    def __str__(self):
        return f"w -> {self.a!r}*w + {self.b!r}"


IDENTITY = LFSymbol(1.0, 0j)


def make_symbol(a: float, b: complex = 0j) -> LFSymbol:
    """Validate ``(a, b)`` and return the symbol.

    Raises
    ------
    UnboundedSymbol
        If ``a <= 0`` or ``Re(b) < 0``.
    """
    return LFSymbol(a, b)


def compose(outer: LFSymbol, inner: LFSymbol) -> LFSymbol:
    """Return ``outer o inner``."""
    result = LFSymbol(outer.a * inner.a, outer.a * inner.b + outer.b)
    assert result.b.real >= 0
    return result


def invert(phi: LFSymbol) -> LFSymbol:
    """Inverse map ``w -> (w - b)/a``; only automorphisms stay in the class."""
    if phi.b.real > 0:
        raise NotAutomorphism(f"{phi} has Re(b) > 0; its inverse is not a self-map")
    return LFSymbol(1.0 / phi.a, -phi.b / phi.a)


def adjoint_symbol(phi: LFSymbol) -> tuple[float, LFSymbol]:
    """Return ``(scale, psi)`` with ``C_phi^* = scale * C_psi``.

    ``scale = 1/a`` and ``psi(w) = w/a + conj(b)/a``.
    """
    scale = 1.0 / phi.a
    return scale, LFSymbol(scale, phi.b.conjugate() * scale)


@dataclass(frozen=True)
class FixedPoint:
    value: complex
    outside_domain: bool


def fixed_point(phi: LFSymbol) -> Optional[FixedPoint]:
    """Finite fixed point ``b/(1-a)`` of a non-parabolic symbol.

    Parabolic symbols have none; the identity fixes everything and also
    yields ``None`` (check ``phi.is_identity``).  A fixed point off the open
    half-plane is still returned, with ``outside_domain`` set.
    """
    if phi.a == 1.0:
        return None
    u = phi.b / (1.0 - phi.a)
    return FixedPoint(u, outside_domain=not u.real > 0)


def classify_symbol(phi: LFSymbol) -> SymbolClass:
    if phi.a == 1.0:
        if phi.b == 0j:
            return SymbolClass.IDENTITY
        if phi.is_automorphism:
            return SymbolClass.PARABOLIC_AUTOMORPHISM
        return SymbolClass.PARABOLIC
    if phi.is_automorphism:
        return SymbolClass.HYPERBOLIC_AUTOMORPHISM
    return SymbolClass.HYPERBOLIC
