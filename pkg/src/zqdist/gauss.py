"""Quadratic Gauss sums G(a, b, n) = sum_{x in Z_n} e^{2 pi i (a x^2 + b x)/n}.

Three evaluators:

``gauss_brute``
    direct summation with compensated accumulation; the trust anchor.
``gauss_closed``
    the closed form of G(a, n) = G(a, 0, n) for gcd(a, n) = 1, split by the
    residue of n mod 4.
``gauss_general``
    arbitrary (a, b): the gcd reduction
    G(a, b, n) = (a,n) G(a/(a,n), b/(a,n), n/(a,n)) when (a,n) | b, zero
    otherwise, followed for odd reduced modulus by completing the square.

Closed-form results are carried symbolically (an integer scale, a surd, a
Gaussian-integer unit and an exact rational phase) so downstream bound checks
can use exact magnitudes; a complex rendering is always available.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import jacobi
from .errors import DomainError, InconsistencyError

__all__ = ["GaussSumValue", "gauss_brute", "gauss_closed", "gauss_general"]

_F0 = Fraction(0)
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GaussSumValue:
    """Value of a quadratic Gauss sum.

    Exact values are ``scale * sqrt(surd) * (unit_re + i unit_im) * e^{2 pi i phase}``
    with scale >= 0 an integer, surd the reduced modulus and unit a Gaussian
    integer of squared modulus 0, 1 or 2.  ``scale == 0`` encodes the
    vanishing sum.  When ``approx`` is set the sum was measured numerically
    (even reduced modulus with a linear term) and the symbolic fields are
    placeholders.
    """

    scale: int
    surd: int
    unit: tuple[int, int]
    phase: Fraction
    approx: complex | None = None

    @property
    def is_exact(self) -> bool:
        return self.approx is None

    @property
    def is_zero(self) -> bool:
        if self.approx is None:
            return self.scale == 0
        return abs(self.approx) < 1e-9 * self.scale * math.sqrt(self.surd)

    @property
    def magnitude_sq(self) -> Fraction:
        """Exact squared modulus (e.g. n, 2n or 0 times an integer square)."""
        if self.approx is None:
            u0, u1 = self.unit
            return Fraction(self.scale * self.scale * self.surd * (u0 * u0 + u1 * u1))
        r = abs(self.approx) ** 2
        k = round(r)
        if abs(r - k) > 1e-6 * max(1.0, r):
            raise InconsistencyError(f"numeric Gauss magnitude^2 {r} is not near an integer")
        return Fraction(k)

    @property
    def complex_render(self) -> complex:
        if self.approx is not None:
            return self.approx
        u0, u1 = self.unit
        z = complex(u0, u1) * (self.scale * math.sqrt(self.surd))
        if self.phase:
            z *= cmath.exp(2j * math.pi * float(self.phase))
        return z

    def __complex__(self) -> complex:
        return self.complex_render


_ZERO = GaussSumValue(0, 1, (0, 0), _F0)


@lru_cache(maxsize=512)
def _roots(n: int) -> tuple[complex, ...]:
    step = _TWO_PI / n
    return tuple(complex(math.cos(step * k), math.sin(step * k)) for k in range(n))


def gauss_brute(a: int, b: int, n: int) -> complex:
    """Direct summation of G(a, b, n) in index order.

    Kahan-compensated on both components, so the accumulated rounding error
    stays O(machine epsilon) relative to the term magnitudes, independent of
    n; trustworthy as an oracle up to n ~ 10^4.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    a %= n
    b %= n
    roots = _roots(n)
    # v = (a x^2 + b x) mod n, updated incrementally: the difference
    # a(2x+1) + b grows by 2a per step.
    v = 0
    dv = (a + b) % n
    step = (2 * a) % n
    s_re = s_im = c_re = c_im = 0.0
    for _ in range(n):
        z = roots[v]
        y = z.real - c_re
        t = s_re + y
        c_re = (t - s_re) - y
        s_re = t
        y = z.imag - c_im
        t = s_im + y
        c_im = (t - s_im) - y
        s_im = t
        v += dv
        if v >= n:
            v -= n
        dv += step
        if dv >= n:
            dv -= n
    return complex(s_re, s_im)


def _eps_unit(n: int) -> tuple[int, int]:
    # eps_n = 1 for n = 1 (mod 4), i for n = 3 (mod 4)
    return (1, 0) if n % 4 == 1 else (0, 1)


def _eps_inv_unit(a: int) -> tuple[int, int]:
    # 1 / eps_a
    return (1, 0) if a % 4 == 1 else (0, -1)


def _gmul(u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _gsign(u: tuple[int, int], s: int) -> tuple[int, int]:
    return (u[0] * s, u[1] * s)


def gauss_closed(a: int, n: int) -> GaussSumValue:
    """Closed form of G(a, n) for gcd(a, n) = 1.

        odd n:           eps_n (a/n) sqrt(n)
        n = 2 (mod 4):   0
        n = 0 (mod 4):   (1+i) eps_a^{-1} (n/a) sqrt(n)

    In the last branch a is odd automatically: gcd(a, n) = 1 with 4 | n.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    a %= n
    if n > 1 and math.gcd(a, n) != 1:
        raise DomainError(f"gcd({a}, {n}) > 1; use gauss_general")
    if n % 2 == 1:
        unit = _gsign(_eps_unit(n), jacobi(a, n))
        return GaussSumValue(1, n, unit, _F0)
    if n % 4 == 2:
        return _ZERO
    unit = _gmul((1, 1), _gsign(_eps_inv_unit(a), jacobi(n, a)))
    return GaussSumValue(1, n, unit, _F0)


def gauss_general(a: int, b: int, n: int) -> GaussSumValue:
    """G(a, b, n) for arbitrary integer a, b.

    Applies the gcd reduction, then for an odd reduced modulus absorbs the
    linear term by completing the square:

        G(a', b', n') = e^{-2 pi i b'^2 (4a')^{-1} / n'} G(a', n').

    An even reduced modulus with b' != 0 is outside the stated closed forms
    and is measured with gauss_brute instead (the result is flagged inexact).
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    a %= n
    b %= n
    if a == 0:
        # sum of a plain character: n when n | b, zero otherwise
        if b == 0:
            return GaussSumValue(n, 1, (1, 0), _F0)
        return _ZERO
    g = math.gcd(a, n)
    if b % g:
        return _ZERO
    a2, b2, n2 = a // g, b // g, n // g
    if n2 % 2 == 1:
        base = gauss_closed(a2, n2)
        phase = _F0
        if b2:
            shift = (-b2 * b2 * pow(4 * a2, -1, n2)) % n2
            phase = Fraction(shift, n2)
        return GaussSumValue(g, base.surd, base.unit, phase)
    if b2 == 0:
        base = gauss_closed(a2, n2)
        if base.scale == 0:
            return _ZERO
        return GaussSumValue(g, base.surd, base.unit, base.phase)
    z = gauss_brute(a2, b2, n2)
    return GaussSumValue(g, n2, (0, 0), _F0, approx=g * z)
