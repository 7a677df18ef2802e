"""Exact polynomial arithmetic over arbitrary-precision rationals.

Two representations cover everything the package needs:

* ``UPoly``: dense univariate polynomial, a tuple of coefficients indexed
  by exponent (lowest first, trailing coefficient nonzero).
* ``BPoly``: sparse bivariate polynomial in x and y, a map from exponent
  pairs ``(i, j)`` to nonzero coefficients.

Coefficients are Python ints or ``fractions.Fraction`` values; every
operation is exact.  The degree of the zero polynomial is the sentinel
``None``, never an integer, and all degree formulas guard it.  Values are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt, lcm
from types import MappingProxyType
from typing import Iterable, Optional

from . import _kernels
from ._rat import BigRat, Coeff, as_coeff, denominator, div, norm

__all__ = [
    "BigRat",
    "BPoly",
    "UPoly",
    "X",
    "Y",
    "partial",
    "substitute",
    "shift_univariate",
    "exact_divide",
    "resultant",
    "rational_roots",
]


def _grlex_key(exp: tuple[int, int]) -> tuple[int, int]:
    # graded lexicographic, x before y: compare total degree, then x-degree
    return (exp[0] + exp[1], exp[0])


def _format_terms(items: list[tuple[tuple[int, int], Coeff]]) -> str:
    """Render sorted (exponent, coefficient) pairs; shared by str()."""
    if not items:
        return "0"
    pieces = []
    for (i, j), c in items:
        mono = "*".join(
            ([f"x^{i}" if i > 1 else "x"] if i else [])
            + ([f"y^{j}" if j > 1 else "y"] if j else [])
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = [body if sign == "+" else "-" + body]
    for sign, body in pieces[1:]:
        out.append(f" {sign} {body}")
    return "".join(out)


class BPoly:
    """Sparse exact polynomial in k[x, y]."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            for exp, c in dict(terms).items():
                i, j = exp
                if not (isinstance(i, int) and isinstance(j, int)) or i < 0 or j < 0:
                    raise ValueError(f"bad exponent pair: {exp!r}")
                c = as_coeff(c)
                if c != 0:
                    data[(i, j)] = c
        self._terms = data

    @classmethod
    def _raw(cls, data: dict) -> "BPoly":
        # internal: data already normalized (no zeros, canonical scalars)
        obj = object.__new__(cls)
        obj._terms = data
        return obj

    @classmethod
    def zero(cls) -> "BPoly":
        return cls._raw({})

    @classmethod
    def const(cls, c) -> "BPoly":
        c = as_coeff(c)
        return cls._raw({(0, 0): c} if c != 0 else {})

    @classmethod
    def variable(cls, name: str) -> "BPoly":
        if name == "x":
            return cls._raw({(1, 0): 1})
        if name == "y":
            return cls._raw({(0, 1): 1})
        raise ValueError(f"unknown variable {name!r}")

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def total_degree(self) -> Optional[int]:
        if not self._terms:
            return None
        return max(i + j for i, j in self._terms)

    @property
    def deg_x(self) -> Optional[int]:
        if not self._terms:
            return None
        return max(i for i, _ in self._terms)

    @property
    def deg_y(self) -> Optional[int]:
        if not self._terms:
            return None
        return max(j for _, j in self._terms)

    def coefficient(self, i: int, j: int) -> Coeff:
        return self._terms.get((i, j), 0)

    def leading_term(self) -> tuple[tuple[int, int], Coeff]:
        """Largest term in graded-lex order; undefined on zero."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms, key=_grlex_key)
        return exp, self._terms[exp]

    def sorted_terms(self) -> list[tuple[tuple[int, int], Coeff]]:
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def by_y(self) -> list["UPoly"]:
        """Coefficient list in y: entry j is the x-polynomial on y^j."""
        if not self._terms:
            return []
        rows: list[dict] = [{} for _ in range(self.deg_y + 1)]
        for (i, j), c in self._terms.items():
            rows[j][i] = c
        return [UPoly._from_sparse(row) for row in rows]

    def by_x(self) -> list["UPoly"]:
        """Coefficient list in x: entry i is the y-polynomial on x^i."""
        if not self._terms:
            return []
        rows: list[dict] = [{} for _ in range(self.deg_x + 1)]
        for (i, j), c in self._terms.items():
            rows[i][j] = c
        return [UPoly._from_sparse(row) for row in rows]

    def as_univariate(self, var: str) -> "UPoly":
        """View as a polynomial in a single variable; raises if mixed."""
        other = 1 if var == "x" else 0
        sparse = {}
        for exp, c in self._terms.items():
            if exp[other]:
                raise ValueError(f"polynomial is not univariate in {var}")
            sparse[exp[0 if var == "x" else 1]] = c
        return UPoly._from_sparse(sparse)

    def evaluate(self, xv, yv) -> Coeff:
        xv, yv = as_coeff(xv), as_coeff(yv)
        total = 0
        for (i, j), c in self._terms.items():
            total += c * xv**i * yv**j
        return norm(Fraction(total))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, BPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == BPoly.const(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> "BPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for exp, c in other._terms.items():
            v = out.get(exp, 0) + c
            if v == 0:
                out.pop(exp, None)
            else:
                out[exp] = norm(v)
        return BPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BPoly":
        return BPoly._raw({exp: -c for exp, c in self._terms.items()})

    def __sub__(self, other) -> "BPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "BPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "BPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return BPoly._raw(_kernels.mul_terms(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = BPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __str__(self) -> str:
        return _format_terms(self.sorted_terms())

    def __repr__(self) -> str:
        return f"BPoly({str(self)!r})"


def _coerce(value) -> "BPoly":
    if isinstance(value, BPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return BPoly.const(value)
    return NotImplemented


X = BPoly.variable("x")
Y = BPoly.variable("y")


def partial(p: BPoly, var: str) -> BPoly:
    """Formal partial derivative with respect to "x" or "y"."""
    if var not in ("x", "y"):
        raise ValueError(f"unknown variable {var!r}")
    out = {}
    pick = 0 if var == "x" else 1
    for (i, j), c in p.terms.items():
        e = (i, j)[pick]
        if e:
            exp = (i - 1, j) if pick == 0 else (i, j - 1)
            v = out.get(exp, 0) + e * c
            if v == 0:
                out.pop(exp, None)
            else:
                out[exp] = norm(v)
    return BPoly._raw(out)


def substitute(p: BPoly, img_x: BPoly, img_y: BPoly) -> BPoly:
    """Image of p under the ring map x -> img_x, y -> img_y.

    Evaluated by a sparse Horner scheme in y over x so that large images
    are multiplied as few times as possible.
    """
    if p.is_zero:
        return BPoly.zero()
    rows: dict[int, dict[int, Coeff]] = {}
    for (i, j), c in p.terms.items():
        rows.setdefault(j, {})[i] = c
    evaluated = {j: _horner(row, img_x) for j, row in rows.items()}
    return _horner(evaluated, img_y)


def _horner(row: dict[int, "BPoly | Coeff"], image: BPoly) -> BPoly:
    exps = sorted(row, reverse=True)
    acc = BPoly.zero()
    prev = None
    for e in exps:
        if prev is not None:
            acc = acc * image ** (prev - e)
        acc = acc + row[e]
        prev = e
    if prev:
        acc = acc * image**prev
    return acc


def exact_divide(p: BPoly, q: BPoly) -> Optional[BPoly]:
    """Quotient h with p = h*q when q divides p exactly, else None."""
    if q.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero:
        return BPoly.zero()
    (qi, qj), qc = q.leading_term()
    rem = dict(p.terms)
    quot: dict = {}
    while rem:
        exp = max(rem, key=_grlex_key)
        i, j = exp[0] - qi, exp[1] - qj
        if i < 0 or j < 0:
            return None
        fac = div(rem[exp], qc)
        quot[(i, j)] = fac
        for (ti, tj), tc in q.terms.items():
            key = (ti + i, tj + j)
            v = rem.get(key, 0) - fac * tc
            if v == 0:
                rem.pop(key, None)
            else:
                rem[key] = norm(v)
    return BPoly._raw(quot)


def resultant(p: BPoly, q: BPoly, eliminate: str) -> "UPoly":
    """Sylvester resultant of p and q with respect to one variable.

    Returns a univariate polynomial in the surviving variable, computed as
    a fraction-free Bareiss determinant after clearing denominators.
    """
    if eliminate not in ("x", "y"):
        raise ValueError(f"unknown variable {eliminate!r}")
    if p.is_zero or q.is_zero:
        raise ValueError("resultant of the zero polynomial is undefined")
    prow = p.by_y() if eliminate == "y" else p.by_x()
    qrow = q.by_y() if eliminate == "y" else q.by_x()
    m, n = len(prow) - 1, len(qrow) - 1
    if m == 0 and n == 0:
        raise ValueError("no elimination variable")
    if m == 0:
        return prow[0] ** n
    if n == 0:
        return qrow[0] ** m

    # scale the coefficient rows to integers; the determinant picks up
    # dp^n * dq^m which is divided back out at the end
    dp = lcm(*(c.denominator for u in prow for c in u.coeffs if type(c) is Fraction), 1)
    dq = lcm(*(c.denominator for u in qrow for c in u.coeffs if type(c) is Fraction), 1)
    pdesc = [u * dp for u in reversed(prow)]
    qdesc = [u * dq for u in reversed(qrow)]

    dim = m + n
    zero = UPoly.zero()
    matrix = []
    for k in range(n):
        matrix.append([zero] * k + pdesc + [zero] * (n - 1 - k))
    for k in range(m):
        matrix.append([zero] * k + qdesc + [zero] * (m - 1 - k))

    det = _bareiss(matrix)
    return det.scale(div(1, dp**n * dq**m))


def _bareiss(matrix: list[list["UPoly"]]) -> "UPoly":
    """Fraction-free determinant; all interior divisions are exact."""
    dim = len(matrix)
    sign = 1
    prev = UPoly.const(1)
    for k in range(dim - 1):
        if matrix[k][k].is_zero:
            for r in range(k + 1, dim):
                if not matrix[r][k].is_zero:
                    matrix[k], matrix[r] = matrix[r], matrix[k]
                    sign = -sign
                    break
            else:
                return UPoly.zero()
        pivot = matrix[k][k]
        for i in range(k + 1, dim):
            for j in range(k + 1, dim):
                num = pivot * matrix[i][j] - matrix[i][k] * matrix[k][j]
                matrix[i][j] = num.exact_div(prev)
            matrix[i][k] = UPoly.zero()
        prev = pivot
    det = matrix[dim - 1][dim - 1]
    return -det if sign < 0 else det


def rational_roots(u: "UPoly") -> list[Coeff]:
    """All rational roots of u, found by integer scaling and divisor
    enumeration of the extreme coefficients; each candidate is verified
    by exact evaluation."""
    if u.is_zero:
        raise ValueError("rational_roots: polynomial is identically zero")
    den = lcm(*(denominator(c) for c in u.coeffs), 1)
    coeffs = [int(c * den) for c in u.coeffs]
    roots: set = set()
    low = 0
    while coeffs[low] == 0:
        low += 1
    if low:
        roots.add(0)
        coeffs = coeffs[low:]
    if len(coeffs) == 1:
        return sorted(roots)
    from math import gcd

    content = 0
    for c in coeffs:
        content = gcd(content, c)
    coeffs = [c // content for c in coeffs]
    a0, an = abs(coeffs[0]), abs(coeffs[-1])
    for num in _divisors(a0):
        for dnm in _divisors(an):
            for cand in (Fraction(num, dnm), Fraction(-num, dnm)):
                if cand in roots:
                    continue
                if u.evaluate(cand) == 0:
                    roots.add(norm(cand))
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
    return out


class UPoly:
    """Dense exact polynomial in one variable (printed as x)."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        data = [as_coeff(c) for c in coeffs]
        while data and data[-1] == 0:
            data.pop()
        self._coeffs = tuple(data)

    @classmethod
    def _raw(cls, coeffs: tuple) -> "UPoly":
        obj = object.__new__(cls)
        obj._coeffs = coeffs
        return obj

    @classmethod
    def _from_sparse(cls, sparse: dict[int, Coeff]) -> "UPoly":
        if not sparse:
            return cls._raw(())
        data = [0] * (max(sparse) + 1)
        for e, c in sparse.items():
            data[e] = c
        return cls._raw(tuple(data))

    @classmethod
    def zero(cls) -> "UPoly":
        return cls._raw(())

    @classmethod
    def const(cls, c) -> "UPoly":
        c = as_coeff(c)
        return cls._raw((c,) if c != 0 else ())

    @classmethod
    def x(cls) -> "UPoly":
        return cls._raw((0, 1))

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def degree(self) -> Optional[int]:
        # None is the degree sentinel of the zero polynomial
        return len(self._coeffs) - 1 if self._coeffs else None

    @property
    def lc(self) -> Coeff:
        if not self._coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self._coeffs[-1]

    def coefficient(self, k: int) -> Coeff:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else 0

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self._coeffs == UPoly.const(other)._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __add__(self, other) -> "UPoly":
        other = _coerce_u(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        data = list(a)
        for k, c in enumerate(b):
            data[k] = norm(data[k] + c)
        return UPoly(data)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly._raw(tuple(-c for c in self._coeffs))

    def __sub__(self, other) -> "UPoly":
        other = _coerce_u(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "UPoly":
        other = _coerce_u(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "UPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, UPoly):
            return NotImplemented
        a, b = self._coeffs, other._coeffs
        if not a or not b:
            return UPoly.zero()
        data = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                data[i + j] += ca * cb
        return UPoly(data)

    __rmul__ = __mul__

    def scale(self, c) -> "UPoly":
        c = as_coeff(c)
        if c == 0:
            return UPoly.zero()
        return UPoly._raw(tuple(norm(a * c) for a in self._coeffs))

    def __pow__(self, n: int) -> "UPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = UPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "UPoly":
        return UPoly(k * c for k, c in enumerate(self._coeffs) if k)

    def antiderivative(self) -> "UPoly":
        """Antiderivative with constant term fixed to 0."""
        return UPoly([0] + [div(c, k + 1) for k, c in enumerate(self._coeffs)])

    def evaluate(self, at) -> Coeff:
        at = as_coeff(at)
        acc = 0
        for c in reversed(self._coeffs):
            acc = acc * at + c
        return norm(Fraction(acc)) if acc else 0

    def shift(self, c) -> "UPoly":
        """Taylor shift: returns self(x + c), exactly."""
        c = as_coeff(c)
        xpc = UPoly((c, 1))
        acc = UPoly.zero()
        for coeff in reversed(self._coeffs):
            acc = acc * xpc + UPoly.const(coeff)
        return acc

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self._coeffs)
        dq = other.degree
        if self.degree is None or self.degree < dq:
            return UPoly.zero(), self
        quot = [0] * (len(rem) - dq)
        inv_lc = div(1, other.lc)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = norm(c * inv_lc)
            quot[k - dq] = f
            for t, oc in enumerate(other._coeffs):
                rem[k - dq + t] = norm(rem[k - dq + t] - f * oc)
        return UPoly(quot), UPoly(rem)

    def exact_div(self, other: "UPoly") -> "UPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ValueError("inexact polynomial division")
        return q

    def gcd(self, other: "UPoly") -> "UPoly":
        """Monic greatest common divisor (Euclid)."""
        a, b = self, other
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        if a.is_zero:
            return a
        return a.scale(div(1, a.lc))

    def to_bpoly(self, var: str = "x") -> BPoly:
        if var == "x":
            return BPoly({(k, 0): c for k, c in enumerate(self._coeffs)})
        if var == "y":
            return BPoly({(0, k): c for k, c in enumerate(self._coeffs)})
        raise ValueError(f"unknown variable {var!r}")

    def __str__(self) -> str:
        items = [((k, 0), c) for k, c in enumerate(self._coeffs) if c != 0]
        items.sort(key=lambda kv: _grlex_key(kv[0]), reverse=True)
        return _format_terms(items)

    def __repr__(self) -> str:
        return f"UPoly({str(self)!r})"


def _coerce_u(value) -> "UPoly":
    if isinstance(value, UPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return UPoly.const(value)
    return NotImplemented


def shift_univariate(a: UPoly, c) -> UPoly:
    """a(x + c), computed exactly."""
    return a.shift(c)
