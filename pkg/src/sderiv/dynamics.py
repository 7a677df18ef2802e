"""Polynomial self-maps of the plane: composition, iteration, degree
growth, fixed points, and finite-order detection.

The degree of a map is the larger of its component degrees.  The
dynamical degree lim (deg rho^n)^(1/n) is reported as an estimate from a
finite window together with a boundedness flag, never as a certified
limit.  Iteration carries an explicit stored-term budget and fails loudly
when a Henon-type map blows past it.

Fixed points are solved exactly: eliminate y by resultant, pull rational
roots, back-substitute, and verify every candidate.  The verdict about
points over the algebraic closure is kept separate from the rational
listing and degrades to Unknown whenever a leading-coefficient degeneracy
would make the resultant argument inconclusive; it never guesses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._rat import Coeff, div, norm
from .polyring import (
    BPoly,
    UPoly,
    X,
    Y,
    partial,
    rational_roots,
    resultant,
    substitute,
)

__all__ = [
    "PolyMap",
    "AutomorphismCert",
    "JacobianRejection",
    "DynDegreeEstimate",
    "ClosureVerdict",
    "FixedPointReport",
    "IterationBlowup",
    "IdentityMapError",
    "compose",
    "identity_map",
    "validate_automorphism",
    "degree_sequence",
    "fixed_points",
    "order_detect",
]

DEFAULT_TERM_BUDGET = 1_000_000


class IterationBlowup(RuntimeError):
    """Iterate exceeded the stored-term budget."""

    def __init__(self, last_completed: int, degrees: tuple[int, ...]):
        super().__init__(f"iteration blow-up after n = {last_completed}")
        self.last_completed = last_completed
        self.degrees = degrees


class IdentityMapError(ValueError):
    pass


@dataclass(frozen=True)
class PolyMap:
    """Endomorphism of the plane: (x, y) -> (f(x, y), g(x, y))."""

    f: BPoly
    g: BPoly

    @property
    def degree(self) -> int:
        return max(self.f.total_degree or 0, self.g.total_degree or 0)

    @property
    def is_identity(self) -> bool:
        return self.f == X and self.g == Y

    def terms_stored(self) -> int:
        return len(self.f.terms) + len(self.g.terms)

    def evaluate(self, xv, yv) -> tuple[Coeff, Coeff]:
        return self.f.evaluate(xv, yv), self.g.evaluate(xv, yv)


def identity_map() -> PolyMap:
    return PolyMap(X, Y)


def compose(rho: PolyMap, sigma: PolyMap) -> PolyMap:
    """rho after sigma: substitute sigma's components into rho's."""
    return PolyMap(
        substitute(rho.f, sigma.f, sigma.g),
        substitute(rho.g, sigma.f, sigma.g),
    )


@dataclass(frozen=True)
class AutomorphismCert:
    """Constant nonzero Jacobian certificate, with an inverse when one of
    the recognized shapes applies.  Without an inverse the certificate is
    a necessary condition only: constant Jacobian does not decide
    invertibility (that converse is the open Jacobian problem)."""

    map: PolyMap
    jacobian_det: Coeff
    inverse: Optional[PolyMap]

    @property
    def complete(self) -> bool:
        return self.inverse is not None


@dataclass(frozen=True)
class JacobianRejection:
    map: PolyMap
    det: BPoly


def _jacobian_det(rho: PolyMap) -> BPoly:
    return partial(rho.f, "x") * partial(rho.g, "y") - partial(rho.f, "y") * partial(rho.g, "x")


def validate_automorphism(rho: PolyMap):
    """AutomorphismCert when the Jacobian determinant is a nonzero
    constant, JacobianRejection (carrying the determinant) otherwise."""
    det = _jacobian_det(rho)
    if det.total_degree != 0:
        return JacobianRejection(rho, det)
    inverse = _try_inverse(rho)
    if inverse is not None:
        if not (compose(rho, inverse).is_identity and compose(inverse, rho).is_identity):
            raise AssertionError("constructed inverse failed re-verification")
    return AutomorphismCert(rho, det.coefficient(0, 0), inverse)


def _try_inverse(rho: PolyMap) -> Optional[PolyMap]:
    """Explicit inverse for affine maps and elementary triangular maps
    a*x + p(y), b*y + c (and the transposed shape).  Anything else is
    left uninverted on purpose."""
    f, g = rho.f, rho.g
    if (f.total_degree or 0) <= 1 and (g.total_degree or 0) <= 1:
        return _invert_affine(rho)
    if _is_triangular_x(f) and _is_scalar_line(g, "y"):
        alpha = f.coefficient(1, 0)
        beta, gamma = g.coefficient(0, 1), g.coefficient(0, 0)
        p = BPoly({(i, j): c for (i, j), c in f.terms.items() if i == 0})
        yinv = (Y - gamma) * div(1, beta)
        xinv = (X - substitute(p, X, yinv)) * div(1, alpha)
        return PolyMap(xinv, yinv)
    if _is_triangular_y(g) and _is_scalar_line(f, "x"):
        alpha, gamma = f.coefficient(1, 0), f.coefficient(0, 0)
        beta = g.coefficient(0, 1)
        q = BPoly({(i, j): c for (i, j), c in g.terms.items() if j == 0})
        xinv = (X - gamma) * div(1, alpha)
        yinv = (Y - substitute(q, xinv, Y)) * div(1, beta)
        return PolyMap(xinv, yinv)
    return None


def _is_triangular_x(f: BPoly) -> bool:
    # f = alpha*x + p(y) with alpha != 0
    return f.coefficient(1, 0) != 0 and all(i == 0 or (i, j) == (1, 0) for i, j in f.terms)


def _is_triangular_y(g: BPoly) -> bool:
    return g.coefficient(0, 1) != 0 and all(j == 0 or (i, j) == (0, 1) for i, j in g.terms)


def _is_scalar_line(p: BPoly, var: str) -> bool:
    # p = beta*var + gamma with beta != 0
    key = (1, 0) if var == "x" else (0, 1)
    return p.coefficient(*key) != 0 and all(e in (key, (0, 0)) for e in p.terms)


def _invert_affine(rho: PolyMap) -> Optional[PolyMap]:
    a11, a12, t1 = rho.f.coefficient(1, 0), rho.f.coefficient(0, 1), rho.f.coefficient(0, 0)
    a21, a22, t2 = rho.g.coefficient(1, 0), rho.g.coefficient(0, 1), rho.g.coefficient(0, 0)
    det = a11 * a22 - a12 * a21
    if det == 0:
        return None
    b11, b12 = div(a22, det), div(-a12, det)
    b21, b22 = div(-a21, det), div(a11, det)
    xt, yt = X - t1, Y - t2
    return PolyMap(b11 * xt + b12 * yt, b21 * xt + b22 * yt)


@dataclass(frozen=True)
class DynDegreeEstimate:
    degrees: tuple[int, ...]
    per_step_roots: tuple[float, ...]
    bounded: bool

    @property
    def estimate(self):
        """Exactly 1 for a bounded window, else the last per-step root."""
        return 1 if self.bounded else self.per_step_roots[-1]


def degree_sequence(rho: PolyMap, n_max: int, term_budget: int = DEFAULT_TERM_BUDGET) -> DynDegreeEstimate:
    """deg(rho^n) for n = 1..n_max by repeated composition.

    ``bounded`` is set when the last min(3, n_max) entries agree.  Raises
    IterationBlowup (reporting the last completed n) if an iterate stores
    more than term_budget terms.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    degrees = []
    cur = rho
    for n in range(1, n_max + 1):
        if n > 1:
            cur = compose(rho, cur)
        if cur.terms_stored() > term_budget:
            raise IterationBlowup(n - 1, tuple(degrees))
        degrees.append(cur.degree)
    roots = tuple(float(d) ** (1.0 / n) for n, d in enumerate(degrees, start=1))
    window = min(3, n_max)
    bounded = len(set(degrees[-window:])) == 1
    return DynDegreeEstimate(tuple(degrees), roots, bounded)


class ClosureVerdict(enum.Enum):
    EXISTS = "ExistsOverClosure"
    NONE = "NoneOverClosure"
    INFINITE = "InfinitelyMany"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class FixedPointReport:
    rational_points: tuple[tuple[Coeff, Coeff], ...]
    closure_verdict: ClosureVerdict


def _x_content(p: BPoly) -> UPoly:
    """gcd in k[x] of the coefficients of p as a polynomial in y."""
    rows = p.by_y()
    acc = UPoly.zero()
    for row in rows:
        acc = acc.gcd(row)
        if acc.degree == 0:
            break
    return acc


def _specialize_x(p: BPoly, x0) -> UPoly:
    return substitute(p, BPoly.const(x0), Y).as_univariate("y")


def fixed_points(rho: PolyMap) -> FixedPointReport:
    """Exact fixed-point report for f(p) = p.

    Rational points are complete and each is re-verified by evaluation;
    the closure verdict follows the resultant argument and reports
    Unknown instead of guessing through degeneracies.
    """
    fx = rho.f - X
    gy = rho.g - Y
    if fx.is_zero and gy.is_zero:
        raise IdentityMapError("identity map: every point is fixed")
    if fx.is_zero or gy.is_zero:
        h = gy if fx.is_zero else fx
        if h.total_degree == 0:
            return FixedPointReport((), ClosureVerdict.NONE)
        return FixedPointReport((), ClosureVerdict.INFINITE)
    if fx.total_degree == 0 or gy.total_degree == 0:
        return FixedPointReport((), ClosureVerdict.NONE)

    # a common factor is either y-free (shared x-content) or has positive
    # y-degree (zero resultant); both mean a whole fixed curve
    if not _x_content(fx).gcd(_x_content(gy)).degree == 0:
        return FixedPointReport((), ClosureVerdict.INFINITE)
    dy_f = fx.deg_y
    dy_g = gy.deg_y
    if dy_f == 0 and dy_g == 0:
        # two coprime x-only conditions: no common x even over the closure
        return FixedPointReport((), ClosureVerdict.NONE)
    if dy_f > 0 and dy_g > 0 and resultant(fx, gy, "y").is_zero:
        return FixedPointReport((), ClosureVerdict.INFINITE)

    res = resultant(fx, gy, "y")
    if res.is_zero:
        return FixedPointReport((), ClosureVerdict.UNKNOWN)  # defensive; excluded above

    points = []
    if res.degree > 0:
        for x0 in rational_roots(res):
            fy0 = _specialize_x(fx, x0)
            gy0 = _specialize_x(gy, x0)
            if fy0.is_zero and gy0.is_zero:
                continue  # common-factor line; excluded earlier, defensive
            if fy0.is_zero:
                cands = set(rational_roots(gy0)) if gy0.degree > 0 else set()
            elif gy0.is_zero:
                cands = set(rational_roots(fy0)) if fy0.degree > 0 else set()
            else:
                ra = set(rational_roots(fy0)) if fy0.degree > 0 else set()
                rb = set(rational_roots(gy0)) if gy0.degree > 0 else set()
                cands = ra & rb
            for y0 in cands:
                if rho.evaluate(x0, y0) == (x0, y0):
                    points.append((norm(Fraction(x0)), norm(Fraction(y0))))
                else:  # pragma: no cover - evaluation is the final authority
                    raise AssertionError("candidate fixed point failed re-verification")
    points.sort(key=lambda pt: (Fraction(pt[0]), Fraction(pt[1])))

    if res.degree == 0:
        verdict = ClosureVerdict.NONE
    elif _degeneracies_absent(fx, gy):
        verdict = ClosureVerdict.EXISTS
    else:
        verdict = ClosureVerdict.UNKNOWN
    return FixedPointReport(tuple(points), verdict)


def _degeneracies_absent(fx: BPoly, gy: BPoly) -> bool:
    """No x where both leading y-coefficients vanish: then every root of
    the nonconstant resultant carries a genuine common solution in y."""
    rows_f = fx.by_y()
    rows_g = gy.by_y()
    if len(rows_f) == 1:
        # fx is x-only: pair its x-condition against the other leading row
        return rows_f[0].gcd(rows_g[-1]).degree == 0
    if len(rows_g) == 1:
        return rows_g[0].gcd(rows_f[-1]).degree == 0
    return rows_f[-1].gcd(rows_g[-1]).degree == 0


def order_detect(rho: PolyMap, n_max: int, term_budget: int = DEFAULT_TERM_BUDGET) -> Optional[int]:
    """Smallest n <= n_max with rho^n = identity, or None.

    Iteration blow-up propagates: a map whose iterates exceed the budget
    cannot be certified either way within it.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    cur = rho
    for n in range(1, n_max + 1):
        if cur.is_identity:
            return n
        if n < n_max:
            cur = compose(rho, cur)
            if cur.terms_stored() > term_budget:
                raise IterationBlowup(n, ())
    return None
