"""Derivations of k[x, y] and invariant principal ideals.

A derivation is determined by the images of the two generators; applying
it to any polynomial uses the Leibniz rule through the chain
D(p) = D(x) * dp/dx + D(y) * dp/dy.  The special family handled by the
simplicity and isotropy modules has D(x) = 1 and D(y) = a(x)*y + b(x);
``ShamsuddinForm`` captures that shape.

A Darboux polynomial f is a nonconstant polynomial with D(f) = h*f; its
principal ideal (f) is then stable under D.  This module only verifies
candidate invariant polynomials, it does not search for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .polyring import BPoly, UPoly, Y, exact_divide, partial

__all__ = [
    "Derivation",
    "ShamsuddinForm",
    "DarbouxWitness",
    "apply",
    "to_shamsuddin",
    "invariant_check",
    "lemma_witness",
]


@dataclass(frozen=True)
class Derivation:
    """A k-derivation of k[x, y], given by the images of x and y."""

    dx: BPoly
    dy: BPoly

    def apply(self, p: BPoly) -> BPoly:
        return self.dx * partial(p, "x") + self.dy * partial(p, "y")

    __call__ = apply


@dataclass(frozen=True)
class ShamsuddinForm:
    """The derivation with dx = 1 and dy = a(x)*y + b(x)."""

    a: UPoly
    b: UPoly

    def to_derivation(self) -> Derivation:
        return Derivation(BPoly.const(1), self.a.to_bpoly() * Y + self.b.to_bpoly())


@dataclass(frozen=True)
class DarbouxWitness:
    """Nonconstant f together with the cofactor of D(f) = cofactor * f."""

    f: BPoly
    cofactor: BPoly

    def verify(self, d: Derivation) -> bool:
        return d.apply(self.f) == self.cofactor * self.f


def apply(d: Derivation, p: BPoly) -> BPoly:
    return d.apply(p)


def to_shamsuddin(d: Derivation) -> Optional[ShamsuddinForm]:
    """Recognize dx = 1, dy = a(x)*y + b(x); None for any other shape."""
    if d.dx != BPoly.const(1):
        return None
    if not d.dy.is_zero and d.dy.deg_y > 1:
        return None
    rows = d.dy.by_y()
    b = rows[0] if rows else UPoly.zero()
    a = rows[1] if len(rows) > 1 else UPoly.zero()
    return ShamsuddinForm(a, b)


def invariant_check(d: Derivation, f: BPoly) -> Optional[DarbouxWitness]:
    """Witness that (f) is D-stable, i.e. f divides D(f) exactly.

    Returns None when f is constant or does not divide D(f).
    """
    if f.is_zero:
        raise ValueError("invariant_check: f must be nonzero")
    if f.total_degree == 0:
        return None
    cofactor = exact_divide(d.apply(f), f)
    if cofactor is None:
        return None
    return DarbouxWitness(f, cofactor)


def lemma_witness(sf: ShamsuddinForm) -> Optional[DarbouxWitness]:
    """Explicit invariant principal ideal when a = 0 or b = 0.

    With b = 0 the ideal (y) is stable with cofactor a; with a = 0 the
    ideal (y - h) is stable with cofactor 0, where h is the antiderivative
    of b with constant term 0.  Both nonzero: no witness from this route.
    """
    if sf.b.is_zero:
        return DarbouxWitness(Y, sf.a.to_bpoly())
    if sf.a.is_zero:
        h = sf.b.antiderivative()
        return DarbouxWitness(Y - h.to_bpoly(), BPoly.zero())
    return None
