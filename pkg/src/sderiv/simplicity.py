"""Simplicity of the dx = 1, dy = a(x)*y + b(x) derivations.

The decision reduces to a linear first-order ODE in k[x]: the derivation
is simple exactly when no polynomial r satisfies r' = a*r + b.  When a
solution r exists, y - r generates an invariant ideal with cofactor a,
which is returned as a checkable witness.

``solve_linear_ode`` uses the forced-degree reduction: for nonzero a and
b, any solution must have degree deg b - deg a, because deg r' < deg(a*r)
makes the leading terms of a*r cancel against b.  The independent brute
oracle ``ode_brute_oracle`` skips that reduction and tries every degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._rat import norm
from .derivation import DarbouxWitness, ShamsuddinForm
from .polyring import UPoly, Y

__all__ = ["OdeVerdict", "SimplicityVerdict", "solve_linear_ode", "ode_brute_oracle", "shamsuddin_is_simple"]


@dataclass(frozen=True)
class OdeVerdict:
    """Outcome of searching for polynomial r with r' = a*r + b.

    ``solution`` is None when no polynomial solution exists.  For nonzero
    a the solution is unique: the difference of two solutions would solve
    u' = a*u, impossible for nonzero u since deg u' < deg(a*u).
    """

    solution: Optional[UPoly]

    @property
    def has_solution(self) -> bool:
        return self.solution is not None


@dataclass(frozen=True)
class SimplicityVerdict:
    simple: bool
    witness: Optional[DarbouxWitness]
    ode_solution: Optional[UPoly]


def _residual(r: UPoly, a: UPoly, b: UPoly) -> UPoly:
    return r.derivative() - a * r - b


def solve_linear_ode(a: UPoly, b: UPoly) -> OdeVerdict:
    """All polynomial solutions of r' = a(x)*r + b(x)."""
    if a.is_zero:
        return OdeVerdict(b.antiderivative())
    if b.is_zero:
        return OdeVerdict(UPoly.zero())
    da, db = a.degree, b.degree
    if db < da:
        return OdeVerdict(None)
    n = db - da
    # unknowns r_0..r_n; row k equates the x^k coefficient of r' - a*r - b
    rows = []
    rhs = []
    for k in range(da + n + 1):
        row = [0] * (n + 1)
        if k + 1 <= n:
            row[k + 1] = k + 1
        for m in range(n + 1):
            e = k - m
            if 0 <= e <= da:
                row[m] -= a.coefficient(e)
        rows.append(row)
        rhs.append(b.coefficient(k))
    sol = _solve_exact(rows, rhs)
    if sol is None:
        return OdeVerdict(None)
    r = UPoly(sol)
    if not _residual(r, a, b).is_zero:
        raise AssertionError("linear solve produced a non-solution")
    return OdeVerdict(r)


def _solve_exact(rows: list[list], rhs: list) -> Optional[list]:
    """Gauss-Jordan over exact rationals.

    Returns None when inconsistent.  The callers' systems are uniquely
    determined whenever consistent (forced-degree argument), which is
    asserted rather than silently assumed.
    """
    m, n = len(rows), len(rows[0])
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[k])] for k, row in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(n):
        pivot_row = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    if len(pivots) != n:
        raise AssertionError("underdetermined ODE system; uniqueness argument violated")
    sol = [Fraction(0)] * n
    for k, c in enumerate(pivots):
        sol[c] = aug[k][n]
    return [norm(v) for v in sol]


def ode_brute_oracle(a: UPoly, b: UPoly, max_deg: int) -> OdeVerdict:
    """Undetermined-coefficients search through every degree 0..max_deg.

    Deliberately independent of solve_linear_ode: no forced-degree
    shortcut, its own elimination, and the candidate is accepted only
    after the residual r' - a*r - b is recomputed and found to vanish.
    """
    if max_deg < 0:
        raise ValueError("max_deg must be >= 0")
    for m in range(max_deg + 1):
        cand = _brute_degree(a, b, m)
        if cand is not None and _residual(cand, a, b).is_zero:
            return OdeVerdict(cand)
    return OdeVerdict(None)


def _brute_degree(a: UPoly, b: UPoly, m: int) -> Optional[UPoly]:
    # coefficients of x^k in r' - a*r - b for r of degree <= m
    size = m + max(a.degree if a.degree is not None else 0, 0) + 1
    size = max(size, (b.degree if b.degree is not None else 0) + 1, m)
    aug = []
    for k in range(size):
        row = [Fraction(0)] * (m + 1)
        if k + 1 <= m:
            row[k + 1] += k + 1
        for j in range(m + 1):
            row[j] -= a.coefficient(k - j) if 0 <= k - j else 0
        aug.append(row + [Fraction(b.coefficient(k))])
    # forward elimination with back substitution, free unknowns pinned to 0
    ncols = m + 1
    where = [-1] * ncols
    row_i = 0
    for col in range(ncols):
        sel = next((i for i in range(row_i, len(aug)) if aug[i][col] != 0), None)
        if sel is None:
            continue
        aug[row_i], aug[sel] = aug[sel], aug[row_i]
        for i in range(len(aug)):
            if i != row_i and aug[i][col] != 0:
                f = aug[i][col] / aug[row_i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[row_i])]
        where[col] = row_i
        row_i += 1
    for i in range(row_i, len(aug)):
        if aug[i][ncols] != 0:
            return None
    coeffs = []
    for col in range(ncols):
        if where[col] < 0:
            coeffs.append(0)
        else:
            coeffs.append(norm(aug[where[col]][ncols] / aug[where[col]][col]))
    return UPoly(coeffs)


def shamsuddin_is_simple(sf: ShamsuddinForm) -> SimplicityVerdict:
    """Simple iff r' = a*r + b has no polynomial solution.

    A solution r yields the invariant ideal (y - r) with cofactor a:
    D(y - r) = a*y + b - (a*r + b) = a*(y - r).
    """
    verdict = solve_linear_ode(sf.a, sf.b)
    if verdict.solution is None:
        return SimplicityVerdict(True, None, None)
    r = verdict.solution
    witness = DarbouxWitness(Y - r.to_bpoly(), sf.a.to_bpoly())
    if not witness.verify(sf.to_derivation()):
        raise AssertionError("simplicity witness failed re-verification")
    return SimplicityVerdict(False, witness, r)
