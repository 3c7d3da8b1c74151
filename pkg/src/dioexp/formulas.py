"""Closed-form exponents of affine subspaces, transference and Dirichlet bounds.

Everything is exact on Fractions.  Infinite exponents are carried as
``ExtendedExponent.inf()``; each formula states the value it takes there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InconsistentPair

ESTIMATE_SLACK = Fraction(1, 10)


@dataclass(frozen=True, order=False)
class ExtendedExponent:
    """A nonnegative exponent or +infinity."""

    value: object = None  # Fraction, float, or None for +inf

    @classmethod
    def inf(cls):
        return cls(None)

    @classmethod
    def of(cls, x):
        if isinstance(x, ExtendedExponent):
            return x
        if x is None or (isinstance(x, float) and math.isinf(x)):
            if x is not None and x < 0:
                raise DomainError("exponents are nonnegative")
            return cls.inf()
        if isinstance(x, (int, str)):
            x = Fraction(x)
        if x < 0:
            raise DomainError("exponents are nonnegative")
        return cls(x)

    @property
    def is_inf(self):
        return self.value is None

    def __float__(self):
        return math.inf if self.is_inf else float(self.value)

    def _key(self):
        return (1, 0) if self.is_inf else (0, self.value)

    def __lt__(self, other):
        return self._key() < ExtendedExponent.of(other)._key()

    def __le__(self, other):
        return self._key() <= ExtendedExponent.of(other)._key()

    def __gt__(self, other):
        return self._key() > ExtendedExponent.of(other)._key()

    def __ge__(self, other):
        return self._key() >= ExtendedExponent.of(other)._key()

    def __eq__(self, other):
        try:
            return self._key() == ExtendedExponent.of(other)._key()
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        return "+inf" if self.is_inf else str(self.value)

    def to_json(self):
        if self.is_inf:
            return "inf"
        if isinstance(self.value, Fraction):
            return f"{self.value.numerator}/{self.value.denominator}"
        return float(self.value)

    @classmethod
    def from_json(cls, obj):
        if obj == "inf":
            return cls.inf()
        return cls.of(Fraction(obj) if isinstance(obj, str) else obj)


_E = ExtendedExponent.of


def _max(*xs):
    return max((_E(x) for x in xs), key=lambda e: e._key())


def sigma_L_from_sigmas(sigmas, n):
    """max{1/n, sigma_1, ..., sigma_n}."""
    if n < 2 or len(sigmas) != n:
        raise ValueError("need n >= 2 and n sector exponents")
    return _max(Fraction(1, n), *sigmas)


def sector_n(omega_a, n):
    """omega / (n + (n-1) omega); +inf maps to 1/(n-1)."""
    w = _E(omega_a)
    if w.is_inf:
        return _E(Fraction(1, n - 1))
    return _E(w.value / (n + (n - 1) * w.value))


def hyperplane_sigma(omega_a, n):
    """max{1/n, omega / (n + (n-1) omega)}."""
    if n < 2:
        raise ValueError("need n >= 2")
    return _max(Fraction(1, n), sector_n(omega_a, n))


def _ratio(x, a, b):
    """x / (a + b x) with limit 1/b at +inf."""
    x = _E(x)
    if x.is_inf:
        return _E(Fraction(1, b))
    return _E(x.value / (a + b * x.value))


def transference_bounds(omega, n):
    """(1 / (n-1 + n/omega), (omega - n + 1) / n) for omega >= n."""
    w = _E(omega)
    if w.is_inf:
        return _E(Fraction(1, n - 1)) if n > 1 else ExtendedExponent.inf(), ExtendedExponent.inf()
    if w.value < n:
        raise DomainError(f"omega must be at least {n}")
    return _E(1 / (n - 1 + n / w.value)), _E((w.value - n + 1) / n)


def check_pair(omega, sigma, n, slack=0):
    """True iff sigma lies within the transference interval (widened by slack)."""
    lo, hi = transference_bounds(omega, n)
    s = _E(sigma)
    if s.is_inf:
        return hi.is_inf
    above = lo.is_inf is False and s.value >= lo.value - slack
    below = hi.is_inf or s.value <= hi.value + slack
    return bool(above and below)


def line_r3_sigma(sigma_y, omega_y, slack=0, check=True):
    """max{1/3, sigma/(2+sigma), omega/(3+2 omega)} for the line x -> (ax, bx, x).

    ``check=False`` skips the transference test and only substitutes.
    """
    if check and not check_pair(omega_y, sigma_y, 2, slack):
        raise InconsistentPair(f"(sigma, omega) = ({sigma_y}, {omega_y}) violates transference")
    return _max(Fraction(1, 3), _ratio(sigma_y, 2, 1), _ratio(omega_y, 3, 2))


def abequi_convert(a, b, v):
    """c = (b v - a) / (v + 1); c = 0 exactly at the floor v = a/b."""
    if a <= 0 or b <= 0:
        raise DomainError("a and b must be positive")
    if v * b < a:
        raise DomainError("need v >= a/b")
    return (b * v - a) / (v + 1)


def abequi_image(a, b, c):
    """(a + c) / (b - c)."""
    if a <= 0 or b <= 0:
        raise DomainError("a and b must be positive")
    if c >= b:
        raise DomainError("need c < b")
    return (a + c) / (b - c)


def bounds_check(sigma_L, n, s):
    """1/n <= sigma(L) <= 1/s."""
    if not 1 <= s <= n - 1:
        raise ValueError("need 1 <= s <= n-1")
    x = _E(sigma_L)
    if x.is_inf:
        return False
    return Fraction(1, n) <= x.value <= Fraction(1, s)
