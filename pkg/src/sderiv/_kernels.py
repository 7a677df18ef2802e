"""Multiplication kernel for sparse bivariate polynomials.

Small products run as a plain dictionary convolution.  Large products are
reduced to a single big-integer multiplication by Kronecker substitution:
clear denominators, pack each operand into one integer with a fixed bit
width per coefficient slot, multiply, and read the product coefficients
back out of the byte representation.  The packing width is chosen from an
a-priori bound on the product's coefficients, so the round trip is exact.

The big multiplication itself is the hot spot.  When gmpy2 is importable
(and SDERIV_NO_GMP is unset) it runs on GMP, whose FFT multiplication is
two orders of magnitude faster than CPython's Karatsuba at the sizes that
degree-growth experiments reach; otherwise plain Python ints are used.
``BACKEND`` records which one was selected at import time.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm

from ._rat import norm

if os.environ.get("SDERIV_NO_GMP", "") not in ("", "0"):
    _gmpy2 = None
else:
    try:
        import gmpy2 as _gmpy2
    except ImportError:  # pragma: no cover - depends on environment
        _gmpy2 = None

if _gmpy2 is not None:
    BACKEND = "gmpy2"

    def _mul_big(a: int, b: int) -> int:
        return int(_gmpy2.mpz(a) * _gmpy2.mpz(b))

else:  # pragma: no cover - exercised via SDERIV_NO_GMP test runs
    BACKEND = "python"

    def _mul_big(a: int, b: int) -> int:
        return a * b


# Products with at most this many coefficient pairs skip the packing
# round trip; see benchmarks/bench_kernels.py for the calibration.
SMALL_PRODUCT_CUTOFF = 20_000


def mul_terms(p: dict, q: dict) -> dict:
    """Exact product of two term dicts {(i, j): coeff}, normalized."""
    if not p or not q:
        return {}
    if len(p) * len(q) <= SMALL_PRODUCT_CUTOFF:
        return _mul_dict(p, q)
    return _mul_kronecker(p, q)


def _mul_dict(p: dict, q: dict) -> dict:
    if len(p) > len(q):
        p, q = q, p
    out: dict = {}
    get = out.get
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            key = (i1 + i2, j1 + j2)
            v = get(key)
            if v is None:
                out[key] = c1 * c2
            else:
                out[key] = v + c1 * c2
    return {k: norm(c) for k, c in out.items() if c != 0}


def _clear_denominators(p: dict) -> tuple[dict, int]:
    den = lcm(*(c.denominator for c in p.values() if type(c) is Fraction), 1)
    if den == 1:
        return p, 1
    return {k: int(c * den) for k, c in p.items()}, den


def _mul_kronecker(p: dict, q: dict) -> dict:
    pz, dp = _clear_denominators(p)
    qz, dq = _clear_denominators(q)

    ny = max(j for _, j in pz) + max(j for _, j in qz) + 1
    nx = max(i for i, _ in pz) + max(i for i, _ in qz) + 1

    # Per-slot width: every product coefficient is a sum of at most
    # min(|p|, |q|) pairwise products, and signed decoding needs one
    # spare bit of headroom on top of the bound.
    bound = min(len(pz), len(qz)) * max(map(abs, pz.values())) * max(map(abs, qz.values()))
    nb = (bound.bit_length() + 2 + 7) // 8
    width = 8 * nb

    big = _mul_big(_pack(pz, ny, nb), _pack(qz, ny, nb))
    sign = 1
    if big < 0:
        big, sign = -big, -1

    nslots = nx * ny
    data = big.to_bytes(nslots * nb + nb, "little")
    base = 1 << width
    half = base >> 1
    scale = dp * dq

    out: dict = {}
    carry = 0
    from_bytes = int.from_bytes
    for slot in range(nslots):
        off = slot * nb
        c = from_bytes(data[off : off + nb], "little") + carry
        if c >= half:
            c -= base
            carry = 1
        else:
            carry = 0
        if c:
            if sign < 0:
                c = -c
            if scale != 1:
                c = norm(Fraction(c, scale))
            out[divmod(slot, ny)] = c
    if carry:
        raise AssertionError("kronecker decode overflow")  # bound too small
    return out


def _pack(terms: dict, ny: int, nb: int) -> int:
    size = (max(i for i, _ in terms) * ny + max(j for _, j in terms) + 1) * nb
    pos = bytearray(size)
    neg = bytearray(size)
    for (i, j), c in terms.items():
        off = (i * ny + j) * nb
        if c > 0:
            pos[off : off + nb] = c.to_bytes(nb, "little")
        else:
            neg[off : off + nb] = (-c).to_bytes(nb, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")
