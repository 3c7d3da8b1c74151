"""Exact and enclosed real scalars.

A :class:`RealScalar` is one of four kinds:

``rational``   p/q, exact.
``quadratic``  a + b*sqrt(d) with rational a, b and square-free d >= 2.
``liouville``  sum_{k<=K} base**(-m_k) with m_1 = 1, m_{k+1} = ceil((v+1) m_k),
               so that the simultaneous/linear exponent of the number is v.
``decimal``    a decimal string known up to +-2**(-err_bits).

All kinds hand out rational enclosures of any requested width, which is what
the search and lattice code consume.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache

from .errors import InsufficientDepth, ParseError, PrecisionExhausted
from .tail import tail_limsup

DEFAULT_PRECISION = 256
MAX_PRECISION = 4096

KINDS = ("rational", "quadratic", "liouville", "decimal")


def _squarefree_split(d):
    """Return (s, r) with d = s*s*r and r square-free."""
    s, r, f = 1, 1, 2
    while f * f <= d:
        while d % (f * f) == 0:
            s *= f
            d //= f * f
        if d % f == 0:
            r *= f
            d //= f
        f += 1
    return s, r * d


def liouville_exponents(v, depth):
    """Digit positions m_1 < m_2 < ... of the Liouville-type constructor."""
    v = Fraction(v)
    ms = [1]
    while len(ms) < depth:
        ms.append(math.ceil((v + 1) * ms[-1]))
    return ms


@lru_cache(maxsize=64)
def _liouville_value(base, v, depth):
    return sum(Fraction(1, base ** m) for m in liouville_exponents(v, depth))


@dataclass(frozen=True)
class RealScalar:
    kind: str
    payload: tuple

    # -- constructors -----------------------------------------------------

    @classmethod
    def rational(cls, p, q=1):
        x = Fraction(p, q)
        return cls("rational", (x.numerator, x.denominator))

    @classmethod
    def quadratic(cls, a, b, d):
        a, b, d = Fraction(a), Fraction(b), int(d)
        if d < 0:
            raise ValueError("quadratic scalars must be real (d >= 0)")
        s, r = _squarefree_split(d) if d > 0 else (0, 1)
        b = b * s
        if r == 1 or b == 0:
            return cls.rational(a + b)
        return cls("quadratic", (a, b, r))

    @classmethod
    def sqrt(cls, d):
        return cls.quadratic(0, 1, d)

    @classmethod
    def golden(cls):
        return cls.quadratic(Fraction(1, 2), Fraction(1, 2), 5)

    @classmethod
    def liouville(cls, base=10, v=5, depth=6):
        if base < 2:
            raise ValueError("base must be >= 2")
        v = Fraction(v)
        if v <= 1:
            raise ValueError("target exponent must exceed 1")
        if depth < 1:
            raise ValueError("depth must be positive")
        return cls("liouville", (int(base), v, int(depth)))

    @classmethod
    def decimal(cls, text, err_bits):
        try:
            Decimal(text)
        except InvalidOperation as exc:
            raise ParseError(f"bad decimal literal {text!r}") from exc
        return cls("decimal", (str(text), int(err_bits)))

    # -- basic queries ----------------------------------------------------

    @property
    def is_rational(self):
        return self.kind == "rational"

    def exact(self):
        """Exact value as a Fraction (rational and liouville kinds), else None."""
        if self.kind == "rational":
            return Fraction(*self.payload)
        if self.kind == "liouville":
            return _liouville_value(*self.payload)
        return None

    def __float__(self):
        lo, hi = self.enclose(64) if self.kind != "decimal" else self._decimal_interval()
        return float((lo + hi) / 2)

    def __str__(self):
        return to_text(self)

    # -- enclosures -------------------------------------------------------

    def _decimal_interval(self):
        text, k = self.payload
        mid = Fraction(Decimal(text))
        err = Fraction(1, 2 ** k) if k >= 0 else Fraction(2 ** -k)
        return mid - err, mid + err

    def enclose(self, bits):
        """Rational interval [lo, hi] containing the value, hi - lo <= 2**-bits."""
        if bits < 1:
            raise ValueError("bits must be positive")
        if bits > MAX_PRECISION:
            raise ValueError(f"bits exceeds maximum precision {MAX_PRECISION}")
        if self.kind == "rational":
            x = Fraction(*self.payload)
            return x, x
        if self.kind == "quadratic":
            a, b, d = self.payload
            k = bits + max(0, abs(b).numerator.bit_length() - abs(b).denominator.bit_length() + 1)
            s = math.isqrt(d << (2 * k))
            lo, hi = Fraction(s, 1 << k), Fraction(s + 1, 1 << k)
            lo, hi = (b * lo, b * hi) if b > 0 else (b * hi, b * lo)
            return a + lo, a + hi
        if self.kind == "liouville":
            x = _liouville_value(*self.payload)
            scale = 1 << (bits + 1)
            n = (x.numerator * scale) // x.denominator
            return Fraction(n, scale), Fraction(n + 1, scale)
        lo, hi = self._decimal_interval()
        if hi - lo > Fraction(1, 2 ** bits):
            raise PrecisionExhausted(
                f"decimal scalar carries only {self.payload[1]} bits; {bits} requested"
            )
        return lo, hi

    def fixed(self, bits):
        """Fixed-point image: integer Y and slack u with |x * 2**bits - Y| <= u.

        Unlike :meth:`enclose` this never raises for decimals; it reports the
        slack the stored precision allows.
        """
        if self.kind == "rational":
            x = Fraction(*self.payload) * (1 << bits)
            y = round(x)
            return y, (0 if x == y else 1)
        if self.kind == "decimal":
            lo, hi = self._decimal_interval()
        else:
            lo, hi = self.enclose(bits)
        scale = 1 << bits
        y = math.floor(lo * scale)
        return y, math.ceil(hi * scale) - y

    # -- serialization ----------------------------------------------------

    def to_json(self):
        if self.kind == "rational":
            p, q = self.payload
            payload = f"{p}/{q}"
        elif self.kind == "quadratic":
            a, b, d = self.payload
            payload = {"a": str(a), "b": str(b), "d": d}
        elif self.kind == "liouville":
            base, v, depth = self.payload
            payload = {"base": base, "v": str(v), "depth": depth}
        else:
            text, k = self.payload
            payload = {"value": text, "err_exp": k}
        return {"kind": self.kind, "payload": payload}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        kind, payload = obj["kind"], obj["payload"]
        if kind == "rational":
            return cls.rational(Fraction(payload))
        if kind == "quadratic":
            return cls.quadratic(Fraction(payload["a"]), Fraction(payload["b"]), payload["d"])
        if kind == "liouville":
            return cls.liouville(payload["base"], Fraction(payload["v"]), payload["depth"])
        if kind == "decimal":
            return cls.decimal(payload["value"], payload["err_exp"])
        raise ParseError(f"unknown scalar kind {kind!r}")


# -- mini-language -----------------------------------------------------------

_DEC_RE = re.compile(r"^dec:([-+]?[0-9.eE+-]+?)(?:(?:±|\+-)2\^-?(-?\d+))?$")


def parse_scalar(text):
    """Parse one scalar of the command-line grammar.

    ``p/q`` or integer or plain decimal (exact), ``sqrt:d``, ``quad:a:b:d``
    for a + b sqrt(d), ``phi``,
    ``liouville:b:v[:K]``, ``dec:<digits>±2^-k``.
    """
    t = text.strip()
    if not t:
        raise ParseError("empty scalar")
    neg = t.startswith("-") and not re.match(r"^-?[0-9./]+$", t)
    if neg:
        t = t[1:]
    try:
        if t == "phi":
            x = RealScalar.golden()
        elif t.startswith("sqrt:"):
            x = RealScalar.sqrt(int(t[5:]))
        elif t.startswith("quad:"):
            parts = t.split(":")[1:]
            if len(parts) != 3:
                raise ParseError(f"quad needs a:b:d, got {text!r}")
            x = RealScalar.quadratic(Fraction(parts[0]), Fraction(parts[1]), int(parts[2]))
        elif t.startswith("liouville:"):
            parts = t.split(":")[1:]
            if len(parts) not in (2, 3):
                raise ParseError(f"liouville needs b:v[:K], got {text!r}")
            depth = int(parts[2]) if len(parts) == 3 else 6
            x = RealScalar.liouville(int(parts[0]), Fraction(parts[1]), depth)
        elif t.startswith("dec:"):
            m = _DEC_RE.match(t)
            if not m:
                raise ParseError(f"bad decimal scalar {text!r}")
            digits, k = m.group(1), m.group(2)
            if k is None:
                # error half a unit in the last printed place
                frac = digits.split(".")[1] if "." in digits else ""
                k = math.floor(len(frac) * math.log2(10))
            x = RealScalar.decimal(digits, int(k))
        else:
            x = RealScalar.rational(Fraction(t))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"cannot parse scalar {text!r}: {exc}") from exc
    if neg:
        x = negate(x)
    return x


def negate(x):
    if x.kind == "rational":
        return RealScalar.rational(-Fraction(*x.payload))
    if x.kind == "quadratic":
        a, b, d = x.payload
        return RealScalar.quadratic(-a, -b, d)
    if x.kind == "decimal":
        text, k = x.payload
        return RealScalar.decimal(str(-Decimal(text)), k)
    raise ParseError("negated Liouville scalars are not supported")


def parse_vector(text):
    return [parse_scalar(part) for part in text.split(",")]


def parse_matrix(text):
    """Rows separated by ';', entries by ','."""
    rows = [parse_vector(r) for r in text.split(";") if r.strip()]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows must be non-empty and of equal length")
    return rows


def to_text(x):
    if x.kind == "rational":
        p, q = x.payload
        return str(p) if q == 1 else f"{p}/{q}"
    if x.kind == "quadratic":
        a, b, d = x.payload
        if (a, b, d) == (Fraction(1, 2), Fraction(1, 2), 5):
            return "phi"
        if a == 0 and b == 1:
            return f"sqrt:{d}"
        return f"quad:{a}:{b}:{d}"
    if x.kind == "liouville":
        base, v, depth = x.payload
        return f"liouville:{base}:{v}:{depth}"
    text, k = x.payload
    return f"dec:{text}±2^-{k}"


# -- continued fractions -----------------------------------------------------


@dataclass(frozen=True)
class ContinuedFraction:
    quotients: list
    convergents: list  # (p_k, q_k)
    terminated: bool


def _cf_rational(x, depth):
    quotients = []
    p, q = x.numerator, x.denominator
    while q and len(quotients) < depth:
        a, r = divmod(p, q)
        quotients.append(a)
        p, q = q, r
    return quotients, q == 0


def _cf_quadratic(a, b, d, depth):
    # x = (P + sqrt(D)) / Q with Q | D - P^2
    P = a.numerator * b.denominator
    Q = a.denominator * b.denominator
    D = (a.denominator * b.numerator) ** 2 * d
    if b < 0:
        P, Q = -P, -Q
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    r = math.isqrt(D)
    quotients = []
    for _ in range(depth):
        q_ = (P + r) // Q if Q > 0 else -((P + r) // (-Q)) - 1
        quotients.append(q_)
        P = q_ * Q - P
        Q = (D - P * P) // Q
    return quotients


def _cf_interval(lo, hi, depth):
    """Common prefix of the expansions of the interval endpoints."""
    qa, _ = _cf_rational(lo, depth + 1)
    qb, _ = _cf_rational(hi, depth + 1)
    out = []
    # the last common term of two expansions is not certified
    for u, w in zip(qa[:-1], qb[:-1]):
        if u != w:
            break
        out.append(u)
    return out[:depth]


def convergents(quotients):
    p0, q0, p1, q1 = 1, 0, quotients[0], 1
    out = [(p1, q1)]
    for a in quotients[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def continued_fraction(x, depth):
    """First ``depth`` partial quotients and convergents of ``x``."""
    if depth < 1:
        raise ValueError("depth must be positive")
    terminated = False
    if x.kind in ("rational", "liouville"):
        quotients, terminated = _cf_rational(x.exact(), depth)
    elif x.kind == "quadratic":
        quotients = _cf_quadratic(*x.payload, depth)
    else:
        lo, hi = x._decimal_interval()
        quotients = _cf_interval(lo, hi, depth)
        if len(quotients) < depth:
            raise PrecisionExhausted(
                f"decimal scalar determines only {len(quotients)} partial quotients"
            )
    return ContinuedFraction(quotients, convergents(quotients), terminated)


def cf_exponent(x, depth):
    """Scalar Diophantine exponent from the growth of convergent denominators.

    Uses the records ``(log q_k, log q_{k+1})`` over the last ceil(depth/2)
    available indices and the floor-corrected tail maximum of their ratio.
    """
    cf = continued_fraction(x, depth)
    qs = [q for _, q in cf.convergents]
    pairs = [(qs[k], qs[k + 1]) for k in range(len(qs) - 1) if qs[k] >= 2]
    if len(qs) < 3 or not pairs:
        raise InsufficientDepth("need at least three convergents")
    window = pairs[-math.ceil(depth / 2):]
    stat = tail_limsup([math.log(a) for a, _ in window], [math.log(b) for _, b in window], 1.0)
    return stat.value
