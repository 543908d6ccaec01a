"""Shared high-precision numerics: gmpy2 contexts, exact circle phases,
complex FFT at arbitrary precision, and cumulative Gauss-Legendre quadrature.

Conventions used throughout the package:

* Circle coordinates and rotation angles are exact rationals ``num/den``
  (arbitrary-precision integers).  A "phase" is the fractional part
  ``{k * num/den}`` represented by its residue ``(k*num) % den`` so that all
  torus arithmetic is exact; floats/mpfr are produced only at the point of
  evaluation.
* Dyadic rationals (den = 2**s) are used for random sample points.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import gmpy2
import mpmath
import numpy as np
from gmpy2 import mpc, mpfr, mpz

__all__ = [
    "local_context",
    "to_mpfr",
    "to_mpf",
    "bits_of",
    "cis",
    "phase_residue",
    "residue_progression_f64",
    "residue_progression_mpfr",
    "frac_to_unit_f64",
    "mp_fft",
    "gauss_legendre_nodes",
    "cumulative_integral",
    "fsum",
    "cfsum",
    "det_map",
]


# --------------------------------------------------------------------------
# precision contexts and scalar conversions
# --------------------------------------------------------------------------

def local_context(prec: int) -> gmpy2.context:
    """A gmpy2 context with `prec` bits, round-to-nearest."""
    return gmpy2.context(precision=prec)


def to_mpfr(x, prec: int) -> mpfr:
    """Convert int / float / Fraction / str / mpmath.mpf to mpfr at `prec` bits."""
    if isinstance(x, mpmath.mpf):
        sign, man, exp, bc = x._mpf_
        with gmpy2.context(precision=max(prec, int(bc) + 2)):
            v = mpfr(mpz(man))
            v = gmpy2.mul_2exp(v, exp) if exp >= 0 else gmpy2.div_2exp(v, -exp)
            if sign:
                v = -v
        with gmpy2.context(precision=prec):
            return +v
    with gmpy2.context(precision=prec):
        if isinstance(x, mpfr):
            return +x
        if isinstance(x, (int, float, str)):
            return mpfr(x)
        if isinstance(x, Fraction):
            return mpfr(mpz(x.numerator)) / mpfr(mpz(x.denominator))
        raise TypeError(f"cannot convert {type(x)!r} to mpfr")


def to_mpf(x, prec: int | None = None) -> mpmath.mpf:
    """Convert int / Fraction / float / mpfr to mpmath.mpf (exact if prec None)."""
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, mpfr):
        man, exp = x.as_mantissa_exp()
        with mpmath.workprec(max(int(man).bit_length() + 2, 10)):
            return mpmath.ldexp(mpmath.mpf(int(man)), int(exp))
    if isinstance(x, Fraction):
        p = prec or mpmath.mp.prec
        with mpmath.workprec(p):
            return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def bits_of(n: int) -> int:
    return int(n).bit_length()


def cis(theta: mpfr, prec: int) -> mpc:
    """exp(2*pi*i*theta) at `prec` bits; theta in turns (not radians)."""
    with gmpy2.context(precision=prec + 8):
        ang = 2 * gmpy2.const_pi() * theta
        return mpc(gmpy2.cos(ang), gmpy2.sin(ang))


# --------------------------------------------------------------------------
# exact phases
# --------------------------------------------------------------------------

def phase_residue(k: int, num: int, den: int) -> int:
    """Residue of k*num modulo den, i.e. the numerator of {k*num/den}."""
    return (k * num) % den


def frac_to_unit_f64(res: int, den: int) -> float:
    """res/den in [0,1) as float64 without overflowing intermediate floats."""
    if den.bit_length() <= 62:
        return res / den
    shift = den.bit_length() - 62
    return (res >> shift) / float(den >> shift)


def residue_progression_f64(start: int, step: int, den: int, count: int) -> np.ndarray:
    """{(start + j*step)/den} for j = 0..count-1 as float64, by exact
    incremental residue arithmetic (one add + conditional subtract per term)."""
    out = np.empty(count, dtype=np.float64)
    r = start % den
    s = step % den
    if den.bit_length() <= 62:
        d = den
        for j in range(count):
            out[j] = r / d
            r += s
            if r >= d:
                r -= d
    else:
        shift = den.bit_length() - 62
        dtop = float(den >> shift)
        for j in range(count):
            out[j] = (r >> shift) / dtop
            r += s
            if r >= den:
                r -= den
    return out


def residue_progression_mpfr(start: int, step: int, den: int, count: int,
                             prec: int) -> list[mpfr]:
    """Same progression but as mpfr values at `prec` bits."""
    out = []
    r = start % den
    s = step % den
    with gmpy2.context(precision=prec):
        dinv = 1 / mpfr(mpz(den))
        for _ in range(count):
            out.append(mpfr(mpz(r)) * dinv)
            r += s
            if r >= den:
                r -= den
    return out


# --------------------------------------------------------------------------
# FFT over gmpy2 complex numbers
# --------------------------------------------------------------------------

_ROOT_CACHE: dict[tuple[int, int], list[mpc]] = {}


def _roots_of_unity(n: int, prec: int) -> list[mpc]:
    """e^{2 pi i t / n} for t = 0..n-1, renormalized periodically to stop drift."""
    key = (n, prec)
    cached = _ROOT_CACHE.get(key)
    if cached is not None:
        return cached
    with gmpy2.context(precision=prec + 16):
        two_pi = 2 * gmpy2.const_pi()
        roots = [mpc(1, 0)] * n
        w1 = mpc(gmpy2.cos(two_pi / n), gmpy2.sin(two_pi / n))
        for t in range(1, n):
            if t % 64 == 0:
                ang = two_pi * t / n
                roots[t] = mpc(gmpy2.cos(ang), gmpy2.sin(ang))
            else:
                roots[t] = roots[t - 1] * w1
    if len(_ROOT_CACHE) > 8:
        _ROOT_CACHE.clear()
    _ROOT_CACHE[key] = roots
    return roots


def mp_fft(vec: Sequence[mpc], prec: int, inverse: bool = False) -> list[mpc]:
    """In-order radix-2 complex FFT at `prec` bits. len(vec) must be 2**k.

    Forward: X_t = sum_j x_j e^{-2 pi i j t / n}; inverse divides by n.
    """
    n = len(vec)
    if n & (n - 1):
        raise ValueError("mp_fft length must be a power of two")
    roots = _roots_of_unity(n, prec)
    # bit-reversal permutation
    a = list(vec)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    with gmpy2.context(precision=prec + 16):
        length = 2
        while length <= n:
            half = length >> 1
            stride = n // length
            for i in range(0, n, length):
                for k in range(half):
                    t = k * stride
                    w = roots[(n - t) % n] if not inverse else roots[t]
                    u = a[i + k]
                    v = a[i + k + half] * w
                    a[i + k] = u + v
                    a[i + k + half] = u - v
            length <<= 1
        if inverse:
            inv = 1 / mpfr(n)
            a = [x * inv for x in a]
    return a


# --------------------------------------------------------------------------
# Gauss-Legendre quadrature at arbitrary precision
# --------------------------------------------------------------------------

_GL_CACHE: dict[tuple[int, int], tuple[list[mpfr], list[mpfr]]] = {}


def gauss_legendre_nodes(degree: int, prec: int) -> tuple[list[mpfr], list[mpfr]]:
    """Nodes and weights of `degree`-point Gauss-Legendre rule on [-1, 1]."""
    key = (degree, prec)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    with gmpy2.context(precision=prec + 32):
        nodes, weights = [], []
        for i in range(1, degree + 1):
            # Newton from the Chebyshev-like initial guess
            x = mpfr(math.cos(math.pi * (i - 0.25) / (degree + 0.5)))
            for _ in range(200):
                p0, p1 = mpfr(1), x
                for k in range(2, degree + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = degree * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x = x - dx
                if abs(dx) < gmpy2.exp2(-(prec + 8)):
                    break
            p0, p1 = mpfr(1), x
            for k in range(2, degree + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = degree * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append(+x)
            weights.append(+w)
    _GL_CACHE[key] = (nodes, weights)
    return nodes, weights


def cumulative_integral(g: Callable[[mpfr], mpfr], a: mpfr, h: mpfr, count: int,
                        prec: int, degree: int = 16) -> list[mpfr]:
    """Running integrals I_i = int_a^{a+i*h} g for i = 0..count, by composite
    Gauss-Legendre with `degree` points per step.  g must be smooth on the
    closed span."""
    nodes, weights = gauss_legendre_nodes(degree, prec)
    out = [None] * (count + 1)
    with gmpy2.context(precision=prec + 16):
        acc = mpfr(0)
        out[0] = +acc
        half = h / 2
        for i in range(count):
            mid = a + h * i + half
            s = mpfr(0)
            for x, w in zip(nodes, weights):
                s += w * g(mid + half * x)
            acc += s * half
            out[i + 1] = +acc
    return out


# --------------------------------------------------------------------------
# summation and deterministic mapping
# --------------------------------------------------------------------------

def fsum(values: Iterable[float]) -> float:
    """Correctly rounded float sum (deterministic for a fixed order)."""
    return math.fsum(values)


def cfsum(values: Iterable[complex]) -> complex:
    vs = list(values)
    return complex(math.fsum(v.real for v in vs), math.fsum(v.imag for v in vs))


def det_map(fn, items, threads: int = 1) -> list:
    """Order-preserving map; thread pool when threads > 1 (results joined in
    submission order so reductions stay deterministic)."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))
