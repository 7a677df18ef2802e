"""Commuting automorphisms of a derivation.

``commutes`` decides whether a polynomial map rho satisfies rho D = D rho
by checking the two generator identities rho(D(x)) = D(rho(x)) and
rho(D(y)) = D(rho(y)), which extend to all of k[x, y].

``shamsuddin_isotropy`` certifies that a simple dx = 1, dy = a*y + b
derivation commutes with nothing but the identity.  Rather than trusting
the theorem, it re-verifies each algebraic fact of the argument by exact
arithmetic and emits the facts as a four-step certificate; a failed step
is a hard error, since it could only mean an implementation bug.

``brute_force_isotropy`` is the independent oracle: exhaustive search of
all candidate maps over a finite coefficient box.  Exponential cost is
accepted; the box size is guarded by an explicit candidate-pair budget.
Candidate generation is a pure function of the box, so the search may be
partitioned arbitrarily and merged by set union; this implementation
walks it sequentially.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ._rat import as_coeff, norm
from .derivation import Derivation, ShamsuddinForm
from .dynamics import PolyMap
from .polyring import BPoly, UPoly, X, Y, partial, substitute
from .simplicity import shamsuddin_is_simple, solve_linear_ode

__all__ = [
    "NotSimpleError",
    "SearchBoxTooLarge",
    "CertificateCheck",
    "CertificateStep",
    "IsotropyCertificate",
    "IsotropyEnumeration",
    "commutes",
    "shamsuddin_isotropy",
    "brute_force_isotropy",
]

DEFAULT_PAIR_BUDGET = 10_000_000


class NotSimpleError(ValueError):
    """Raised when a certificate is requested for a non-simple derivation."""

    def __init__(self, witness):
        super().__init__("derivation not simple")
        self.witness = witness


class SearchBoxTooLarge(ValueError):
    pass


def commutes(d: Derivation, rho: PolyMap) -> bool:
    """True iff rho commutes with d (checked on the generators x, y)."""
    if substitute(d.dx, rho.f, rho.g) != d.apply(rho.f):
        return False
    return substitute(d.dy, rho.f, rho.g) == d.apply(rho.g)


@dataclass(frozen=True)
class CertificateCheck:
    description: str
    passed: bool


@dataclass(frozen=True)
class CertificateStep:
    key: str
    claim: str
    checks: tuple[CertificateCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True)
class IsotropyCertificate:
    form: ShamsuddinForm
    steps: tuple[CertificateStep, ...]
    conclusion: str

    @property
    def verified(self) -> bool:
        return all(step.passed for step in self.steps)


_PROBE_SCALARS = (0, 1, 2, -1)
_PROBE_POLYS = (UPoly.zero(), UPoly.const(1), UPoly((0, 1)), UPoly((0, 0, 1)), UPoly((0, 0, 0, 1)))


def shamsuddin_isotropy(sf: ShamsuddinForm) -> IsotropyCertificate:
    """Certify that the isotropy group of a simple form is trivial.

    Re-checks simplicity first and raises NotSimpleError (carrying the
    invariant-ideal witness) if it fails.
    """
    verdict = shamsuddin_is_simple(sf)
    if not verdict.simple:
        raise NotSimpleError(verdict.witness)

    d = sf.to_derivation()
    a, b = sf.a, sf.b
    da = a.degree
    la = a.lc

    steps = (
        _step_x_part(d, a),
        _step_shift_comparison(a, da, la),
        _step_y_shape(d, a, b),
        _step_coefficient_equation(a, b),
    )
    for step in steps:
        if not step.passed:
            raise AssertionError(f"isotropy certificate step {step.key} failed: {step.claim}")
    return IsotropyCertificate(sf, steps, "trivial")


def _step_x_part(d: Derivation, a: UPoly) -> CertificateStep:
    checks = [CertificateCheck("a(x) is nonzero", not a.is_zero)]
    for s in (1, 2, 3):
        ok = solve_linear_ode(a.scale(-s), UPoly.zero()).solution == UPoly.zero()
        for u in _PROBE_POLYS[1:]:
            ok = ok and u.derivative() != a.scale(-s) * u
        checks.append(
            CertificateCheck(f"only u = 0 solves u' = -{s}*a(x)*u (y^{s} coefficient comparison)", ok)
        )
    checks.append(CertificateCheck("D(x) = 1 and D(1) = 0, so D(f) = 1 forces f = x + c", d.apply(X) == 1 and d.apply(BPoly.const(1)).is_zero))
    return CertificateStep(
        "S1",
        "every commuting map sends x to x + c with c a scalar",
        tuple(checks),
    )


def _step_shift_comparison(a: UPoly, da: int, la) -> CertificateStep:
    # encode the unknown shift c as the spare variable y: A = a(x + c)
    abp = a.to_bpoly()
    shifted = substitute(abp, X + Y, Y)
    top = {j: c for (i, j), c in shifted.terms.items() if i == da}
    sub = (shifted - abp).terms
    subtop = {j: c for (i, j), c in sub.items() if i == da - 1}
    expected = {1: norm(Fraction(da * la))}
    checks = (
        CertificateCheck("a(x) is nonconstant (a constant would contradict simplicity)", da >= 1),
        CertificateCheck("x^deg(a) coefficient of a(x+c) is lc(a), forcing t = 1 in a(x+c) = t*a(x)", top == {0: la}),
        CertificateCheck(
            "x^(deg(a)-1) coefficient of a(x+c) - a(x) equals deg(a)*lc(a)*c",
            subtop == expected,
        ),
        CertificateCheck("deg(a)*lc(a) is nonzero, so a(x+c) = a(x) forces c = 0", da * la != 0),
    )
    return CertificateStep("S2", "comparing leading y-coefficients gives t = 1 and c = 0", checks)


def _step_y_shape(d: Derivation, a: UPoly, b: UPoly) -> CertificateStep:
    abp, bbp = a.to_bpoly(), b.to_bpoly()
    count = 0
    ok = True
    for b1 in _PROBE_SCALARS:
        for b0 in _PROBE_POLYS:
            g = b0.to_bpoly() + b1 * Y
            residual = d.apply(g) - (abp * g + bbp)
            reduced = (b0.derivative() - a * b0 - b.scale(1 - b1)).to_bpoly()
            ok = ok and residual == reduced
            count += 1
    checks = (
        CertificateCheck(
            f"for g = b0(x) + b1*y the commutation residual D(g) - (a*g + b) "
            f"reduces to b0' - a*b0 - (1 - b1)*b, verified on {count} probe pairs",
            ok,
        ),
    )
    return CertificateStep(
        "S3",
        "the y-image is b0(x) + b1*y and commuting is the equation D(b0) = a*b0 + (1 - b1)*b",
        checks,
    )


def _step_coefficient_equation(a: UPoly, b: UPoly) -> CertificateStep:
    no_solution = solve_linear_ode(a, b).solution is None
    scaled_ok = all(
        solve_linear_ode(a, b.scale(lam)).solution is None for lam in (2, -1, Fraction(1, 2))
    )
    hom = solve_linear_ode(a, UPoly.zero()).solution == UPoly.zero()
    for u in _PROBE_POLYS[1:]:
        hom = hom and u.derivative() != a * u
    checks = (
        CertificateCheck("r' = a*r + b has no polynomial solution", no_solution),
        CertificateCheck(
            "r' = a*r + lambda*b has no solution for lambda in {2, -1, 1/2} "
            "(linearity rules out every b1 != 1)",
            scaled_ok,
        ),
        CertificateCheck("b0' = a*b0 forces b0 = 0", hom),
    )
    return CertificateStep("S4", "b1 = 1 and b0 = 0, so the map is the identity", checks)


@dataclass(frozen=True)
class IsotropyEnumeration:
    maps: tuple[PolyMap, ...]
    deg_bound: int
    grid: tuple
    pair_count: int


def _poly_sort_key(p: BPoly):
    return tuple(
        (i + j, i, Fraction(c).numerator, Fraction(c).denominator)
        for (i, j), c in p.sorted_terms()
    )


def _ueval(u: UPoly, image: BPoly) -> BPoly:
    acc = BPoly.zero()
    for c in reversed(u.coeffs):
        acc = acc * image + c
    return acc


def _rows_at(rows: Sequence[UPoly], image: BPoly) -> list[BPoly]:
    return [_ueval(u, image) for u in rows]


def _horner_y(rows: Sequence[BPoly], g: BPoly) -> BPoly:
    acc = BPoly.zero()
    for row in reversed(rows):
        acc = acc * g + row
    return acc


def brute_force_isotropy(
    d: Derivation,
    deg_bound: int = 2,
    grid: Sequence = (-1, 0, 1),
    budget: int = DEFAULT_PAIR_BUDGET,
) -> IsotropyEnumeration:
    """Exhaustive commuting-map search over a finite coefficient box.

    Candidates are all pairs (f, g) supported on monomials of total degree
    <= deg_bound with every coefficient drawn from the grid.  A pair is
    kept iff its Jacobian determinant is a nonzero constant and it
    commutes with d; every kept map is re-verified through ``commutes``.
    """
    if deg_bound < 1:
        raise ValueError("deg_bound must be >= 1")
    grid = tuple(sorted({as_coeff(c) for c in grid}, key=Fraction))
    if not grid:
        raise ValueError("grid must be nonempty")
    monos = sorted(
        ((i, j) for i in range(deg_bound + 1) for j in range(deg_bound + 1 - i)),
        key=lambda e: (e[0] + e[1], e[0]),
    )
    ncand = len(grid) ** len(monos)
    pairs = ncand * ncand
    if pairs > budget:
        raise SearchBoxTooLarge(
            f"search box too large: {pairs} candidate pairs exceed the budget of {budget}"
        )

    cands = []
    for assignment in itertools.product(grid, repeat=len(monos)):
        p = BPoly._raw({m: c for m, c in zip(monos, assignment) if c != 0})
        px, py = partial(p, "x"), partial(p, "y")
        cands.append((p, px, py, d.dx * px + d.dy * py))

    dx_rows = d.dx.by_y()
    dy_rows = d.dy.by_y()
    dx_y_free = len(dx_rows) <= 1

    found = []
    for f, fx, fy, df in cands:
        if dx_y_free:
            # condition (1) does not involve g here; screen f once
            lhs1 = _ueval(dx_rows[0], f) if dx_rows else BPoly.zero()
            if lhs1 != df:
                continue
            dx_at_f = None
        else:
            dx_at_f = _rows_at(dx_rows, f)
        dy_at_f = _rows_at(dy_rows, f)
        for g, gx, gy, dg in cands:
            jac = fx * gy - fy * gx
            if jac.total_degree != 0:
                continue
            if dx_at_f is not None and _horner_y(dx_at_f, g) != df:
                continue
            if _horner_y(dy_at_f, g) != dg:
                continue
            rho = PolyMap(f, g)
            if not commutes(d, rho):  # authoritative re-check
                raise AssertionError("enumeration screen disagrees with commutes()")
            found.append(rho)

    found.sort(key=lambda m: (_poly_sort_key(m.f), _poly_sort_key(m.g)))
    return IsotropyEnumeration(tuple(found), deg_bound, grid, pairs)
