"""Diagonal flow g_t on the lattices u_y Z^{n+1}.

delta(t) = -log(shortest max-norm of g_t u_y Z^{n+1}) grows linearly at rate
gamma(y) along an unbounded set of times, and gamma determines the
simultaneous exponent: sigma = (1 + n gamma) / (n (1 - gamma)).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .errors import DomainError, EmptyTail, UndecidableAtPrecision, ZeroPolynomial
from .lattice import LatticeBasis, find_shortest, lll_with_transform
from .scalars import DEFAULT_PRECISION, MAX_PRECISION, RealScalar

DEFAULT_STEP = 0.25
DEFAULT_T_MAX = 40.0


def _as_scalar(x):
    return x if isinstance(x, RealScalar) else RealScalar.rational(Fraction(x))


def _mpf_to_fraction(x):
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(int(man)) * (Fraction(2) ** int(exp))


def _exp_interval(x, bits):
    """Rational enclosure of exp(x) for rational x."""
    x = Fraction(x)
    ctx = mpmath.iv
    saved = ctx.prec
    ctx.prec = bits + 16
    try:
        r = ctx.exp(ctx.mpf(x.numerator) / x.denominator)
        return _mpf_to_fraction(r.a), _mpf_to_fraction(r.b)
    finally:
        ctx.prec = saved


def u_matrix(y):
    """Rows of u_y = (I_n y; 0 1) with RealScalar entries."""
    n = len(y)
    if n < 1:
        raise ValueError("need n >= 1")
    zero, one = RealScalar.rational(0), RealScalar.rational(1)
    rows = [[one if i == j else zero for j in range(n)] + [_as_scalar(y[i])] for i in range(n)]
    rows.append([zero] * n + [one])
    return rows


def g_matrix(t, n, bits=DEFAULT_PRECISION):
    """diag(e^{t/n} x n, e^{-t}) as Fraction midpoints of rational enclosures."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    t = Fraction(t)
    up = _exp_interval(t / n, bits)
    down = _exp_interval(-t, bits)
    diag = [sum(up) / 2] * n + [sum(down) / 2]
    return [[diag[i] if i == j else Fraction(0) for j in range(n + 1)] for i in range(n + 1)]


def _round_dyadic(x, bits):
    scale = 1 << bits
    return Fraction(round(x * scale), scale)


def flowed_basis(y, t, bits=DEFAULT_PRECISION):
    """Basis (with entry error bound) of g_t u_y Z^{n+1}."""
    n = len(y)
    t = Fraction(t)
    up_lo, up_hi = _exp_interval(t / n, bits)
    dn_lo, dn_hi = _exp_interval(-t, bits)
    err = (dn_hi - dn_lo) / 2
    last = []
    for yi in y:
        yi = _as_scalar(yi)
        if yi.kind == "decimal":
            lo, hi = yi._decimal_interval()
        else:
            lo, hi = yi.enclose(bits)
        prods = [a * b for a in (up_lo, up_hi) for b in (lo, hi)]
        mid = _round_dyadic((min(prods) + max(prods)) / 2, bits)
        err = max(err, max(abs(p - mid) for p in prods))
        last.append(mid)
    up = _round_dyadic((up_lo + up_hi) / 2, bits)
    err = max(err, (up_hi - up_lo) / 2 + Fraction(1, 1 << bits))
    down = _round_dyadic((dn_lo + dn_hi) / 2, bits)
    cols = []
    for i in range(n):
        cols.append(tuple(up if r == i else Fraction(0) for r in range(n + 1)))
    cols.append(tuple(last) + (down,))
    return LatticeBasis(tuple(cols), err)


@dataclass
class FlowTrace:
    n: int
    y: list
    T_max: float
    step: float
    samples: list = field(default_factory=list)  # (t, delta, norm, expanding_zero)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "delta", "norm"])
        for t, d, nm, _ in self.samples:
            w.writerow([repr(t), repr(d), repr(nm)])
        return buf.getvalue()


def _compose(U, Uacc):
    k = len(U)
    return [[sum(U[j][i] * Uacc[i][l] for i in range(k)) for l in range(k)] for j in range(k)]


def _apply(basis, U):
    return LatticeBasis(tuple(basis.combine(row) for row in U), basis.entry_error)


def trace(y, T_max=DEFAULT_T_MAX, step=DEFAULT_STEP, bits=DEFAULT_PRECISION, max_bits=MAX_PRECISION):
    """Sample delta(t) on the grid t = k * step, 0 <= t <= T_max.

    The reducing transform found at one time is reused at the next, so each
    step only re-reduces a nearly reduced basis.
    """
    if T_max <= 0 or step <= 0:
        raise ValueError("T_max and step must be positive")
    y = [_as_scalar(v) for v in y]
    n = len(y)
    out = FlowTrace(n, y, float(T_max), float(step))
    Uacc = [[int(i == j) for i in range(n + 1)] for j in range(n + 1)]
    steps = int(math.floor(Fraction(T_max) / Fraction(step) + Fraction(1, 10 ** 9)))
    for k in range(steps + 1):
        t = Fraction(step) * k
        b = bits
        while True:
            basis = _apply(flowed_basis(y, t, b), Uacc)
            red, U = lll_with_transform(basis)
            sv = find_shortest(red)
            if sv.error * (1 << 20) <= sv.norm:
                break
            b *= 2
            if b > max_bits:
                raise UndecidableAtPrecision(f"shortest norm at t={float(t)} not resolved at {max_bits} bits")
        Uacc = _compose(U, Uacc)
        norm = sv.norm
        delta = math.log(norm.denominator) - math.log(norm.numerator)
        expanding_zero = all(v == 0 for v in sv.vector[:n])
        out.samples.append((float(t), delta, float(norm), expanding_zero))
    return out


@dataclass(frozen=True)
class GammaEstimate:
    gamma_hat: float
    witness_times: list
    raw: float
    divergent: bool


_BELOW_ONE = math.nextafter(1.0, 0.0)


def estimate_gamma(tr, tail_fraction=2 / 3):
    """max delta(t)/t over the tail window t >= (1 - tail_fraction) * T_max.

    Finite traces under-estimate the limsup.  A tail sample whose shortest
    vector has an exactly vanishing expanding block means y has a rational
    relation; the estimate is then flagged divergent.
    """
    if len(tr.samples) < 10:
        raise ValueError("trace needs at least 10 samples")
    start = (1 - tail_fraction) * tr.T_max
    window = [s for s in tr.samples if s[0] >= start and s[0] > 0]
    if not window:
        raise EmptyTail("no samples in the tail window")
    ratios = [d / t for t, d, _, _ in window]
    raw = max(ratios)
    witnesses = [s[0] for s, r in zip(window, ratios) if r >= raw - 1e-12]
    divergent = raw >= 1 - 1e-9 or any(s[3] for s in window)
    gamma = min(max(raw, 0.0), _BELOW_ONE)
    return GammaEstimate(gamma, witnesses, raw, divergent)


def gamma_to_sigma(gamma, n):
    if not 0 <= gamma < 1:
        raise DomainError("gamma must lie in [0, 1)")
    if isinstance(gamma, Fraction) or isinstance(gamma, int):
        gamma = Fraction(gamma)
    return (1 + n * gamma) / (n * (1 - gamma))


def sigma_to_gamma(sigma, n):
    if isinstance(sigma, int):
        sigma = Fraction(sigma)
    if sigma < Fraction(1, n):
        raise DomainError("sigma must be at least 1/n")
    return (n * sigma - 1) / (n * sigma + n)


# -- nondivergence experiments --------------------------------------------------


@dataclass(frozen=True)
class PolynomialMap:
    """f: R^d -> R^n, each component a {exponent tuple: coefficient} dict."""

    components: tuple
    d: int = 1

    def __call__(self, x):
        x = [Fraction(v) for v in x]
        out = []
        for comp in self.components:
            s = Fraction(0)
            for exps, c in comp.items():
                term = Fraction(c)
                for xi, e in zip(x, exps):
                    term *= xi ** e
                s += term
            out.append(s)
        return out

    @classmethod
    def monomial_curve(cls, n):
        """x -> (x, x^2, ..., x^n)."""
        return cls(tuple({(k,): 1} for k in range(1, n + 1)), 1)

    @classmethod
    def constant(cls, values):
        return cls(tuple({(0,): Fraction(v)} for v in values), 1)


def _draw(seed, index, box):
    rng = np.random.default_rng([seed, index])
    u = rng.random(len(box))
    return [Fraction(float(lo + (hi - lo) * ui)) for (lo, hi), ui in zip(box, u)]


def cusp_profile(f, box, t, eps_list, samples, seed, bits=64):
    """Monte-Carlo fractions of x in box with g_t u_{f(x)} Z^{n+1} outside K_eps."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    if any(e <= 0 for e in eps_list):
        raise ValueError("eps must be positive")
    eps_list = [Fraction(e) for e in eps_list]
    hits = [0] * len(eps_list)
    for i in range(samples):
        y = f(_draw(seed, i, box))
        b = bits
        while True:
            sv = find_shortest(flowed_basis(y, t, b))
            lo, hi = sv.norm - sv.error, sv.norm + sv.error
            if all(lo >= e or hi < e for e in eps_list):
                break
            b *= 2
            if b > MAX_PRECISION:
                raise UndecidableAtPrecision("cusp test not resolved")
        for k, e in enumerate(eps_list):
            if sv.norm < e:
                hits[k] += 1
    return [h / samples for h in hits]


def cusp_measure(f, box, t, eps, samples, seed):
    est = cusp_profile(f, box, t, [eps], samples, seed)[0]
    return {"t": float(t), "eps": float(eps), "estimate": est, "samples": samples, "seed": seed}


def loglog_slope(xs, ys):
    """Least-squares slope of log y against log x over points with y > 0."""
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2:
        raise ValueError("need two positive points to fit a slope")
    a, b = np.array(pts).T
    return float(np.polyfit(a, b, 1)[0])


def good_function_profile(coeffs, interval, eps_grid):
    """Normalized measure of {x in [a, b] : |f(x)| < eps} for a polynomial f.

    ``coeffs`` are in increasing degree.  The sublevel set is assembled from
    the real roots of f - eps and f + eps.
    """
    p = np.polynomial.Polynomial([float(c) for c in coeffs])
    a, b = map(float, interval)
    if not np.any(p.coef):
        raise ZeroPolynomial("f vanishes identically")
    out = []
    for eps in eps_grid:
        cuts = {a, b}
        for shift in (-eps, eps):
            for r in (p - shift).roots() if p.degree() > 0 else []:
                if abs(r.imag) < 1e-12 and a < r.real < b:
                    cuts.add(float(r.real))
        cuts = sorted(cuts)
        m = sum(hi - lo for lo, hi in zip(cuts, cuts[1:]) if abs(p((lo + hi) / 2)) < eps)
        out.append((eps, m / (b - a)))
    return out
