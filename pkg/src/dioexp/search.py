"""Brute-force exponent estimators straight from the definitions.

All three estimators are instances of one problem: for a real m x c matrix M,
scan integer q in Z^c with 2 <= ||q|| <= Q, take p = nearest integer vector to
-Mq, and watch how small ||Mq + p|| gets relative to ||q||.

    sigma(y)  M = y^T (n x 1)
    omega(y)  M = y   (1 x n)
    omega(A)  M = A   ((s+1) x (n-s))

Arithmetic is fixed point: entries become integers scaled by 2**bits with a
tracked slack, so the errors (which reach 1e-40 for Liouville inputs) are
exact up to that slack.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import EmptyTail, PrecisionExhausted, SearchBudgetExceeded
from .scalars import DEFAULT_PRECISION, MAX_PRECISION, RealScalar
from .tail import tail_limsup

NODE_CAP = 5_000_000
_LOG2 = math.log(2)


@dataclass(frozen=True)
class Witness:
    q: object  # int or tuple
    p: tuple
    error: float
    implied_exponent: float
    norm_q: int


@dataclass
class ExponentEstimate:
    value: float | None  # None together with infinite=True
    infinite: bool
    witnesses: list
    Q: int
    window_min: float
    base: float
    raw: float | None = None
    extra: dict = field(default_factory=dict)

    def display(self):
        return "+inf" if self.infinite else f"{self.value:.6f}"

    def to_dict(self):
        return {
            "value": None if self.infinite else self.value,
            "infinite": self.infinite,
            "raw_tail_max": self.raw,
            "dirichlet_base": self.base,
            "Q": self.Q,
            "window_min_norm": self.window_min,
            "n_witnesses": len(self.witnesses),
            **self.extra,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def witnesses_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["normq", "error", "implied_exponent"])
        for wt in self.witnesses:
            w.writerow([wt.norm_q, repr(wt.error), repr(wt.implied_exponent)])
        return buf.getvalue()


def _as_scalar(x):
    return x if isinstance(x, RealScalar) else RealScalar.rational(Fraction(x))


class _FixedMatrix:
    """Fixed-point image of a real matrix with per-entry slack."""

    def __init__(self, rows, bits):
        self.rows = [[_as_scalar(x) for x in r] for r in rows]
        self.bits = bits
        self.full = 1 << bits
        self.half = self.full >> 1
        fx = [[x.fixed(bits) for x in r] for r in self.rows]
        self.Y = [[v for v, _ in r] for r in fx]
        self.u = [[s for _, s in r] for r in fx]
        self.exact = all(x.is_rational for r in self.rows for x in r)
        self.zero_rows = [all(x.is_rational and x.exact() == 0 for x in r) for r in self.rows]

    def residual(self, q):
        """(max distance to Z as scaled int, slack, nearest p)."""
        worst, slack, ps = 0, 0, []
        for Yr, ur in zip(self.Y, self.u):
            s = sum(a * b for a, b in zip(Yr, q))
            k, r = divmod(s, self.full)
            if r > self.half:
                k, r = k + 1, self.full - r
            ps.append(-k)
            worst = max(worst, r)
            slack = max(slack, sum(abs(a) * b for a, b in zip(q, ur)))
        return worst, slack, tuple(ps)

    def exact_on_support(self, q):
        return all(_surd_form(x) is not None for r in self.rows for x, qi in zip(r, q) if qi)

    def exact_zero(self, q):
        """Each row of Mq is an integer, decided in Q(sqrt d1, sqrt d2, ...)."""
        for r in self.rows:
            acc = {}
            for x, qi in zip(r, q):
                if qi:
                    for d, c in _surd_form(x).items():
                        acc[d] = acc.get(d, 0) + c * qi
            if acc.get(1, Fraction(0)).denominator != 1:
                return False
            if any(c for d, c in acc.items() if d != 1):
                return False
        return True


def _surd_form(x):
    """{1: rational part, d: coefficient of sqrt d} or None if not exact."""
    if x.kind in ("rational", "liouville"):
        return {1: x.exact()}
    if x.kind == "quadratic":
        a, b, d = x.payload
        return {1: Fraction(a), d: Fraction(b)}
    return None


def _neglog_err(err_int, bits):
    return bits * _LOG2 - math.log(err_int)


def _half_ball(c, Q):
    """All q in Z^c with 1 <= ||q|| <= Q and first nonzero coordinate positive,
    sorted by max-norm then lexicographically."""
    axis = np.arange(-Q, Q + 1)
    q = np.stack(np.meshgrid(*([axis] * c), indexing="ij"), -1).reshape(-1, c)
    nz = q != 0
    first = q[np.arange(len(q)), nz.argmax(1)]
    q = q[nz.any(1) & (first > 0)]
    norm = np.abs(q).max(1)
    order = np.lexsort(tuple(q[:, k] for k in range(c - 1, -1, -1)) + (norm,))
    return q[order], norm[order]


def _resolve(fm, rows, q, max_bits):
    """Residual of q when the fixed-point enclosure touches an integer vector.

    Returns (err_int on fm's scale, p); err_int == 0 means an exact relation.
    """
    if fm.exact_on_support(q) and fm.exact_zero(q):
        return 0, fm.residual(q)[2]
    b = fm.bits
    while True:
        b *= 2
        if b > max_bits:
            raise PrecisionExhausted(f"cannot separate residual at q={q} from 0")
        err, slack, p = _FixedMatrix(rows, b).residual(q)
        if err > slack:
            return max(1, err >> (b - fm.bits)), p


def _scan(rows, Q, bits, max_bits):
    """Yield (norm_q, q, err_int, p) for each strict improvement of the error.

    Shell minima are screened in float64 with a rigorous margin; only the
    candidates that can matter are evaluated in fixed point.  Stops after
    yielding err_int == 0 (an exact rational relation).
    """
    fm = _FixedMatrix(rows, bits)
    c = len(fm.Y[0])
    qs, norms = _half_ball(c, Q)
    M = np.array([[float(x) for x in r] for r in fm.rows])
    vals = qs @ M.T
    dist = np.abs(vals - np.rint(vals)).max(1)
    # float rounding of M and of the products, with a safety factor
    margin = 8.0 * c * Q * (np.abs(M).max() + 1.0) * 2.0 ** -52
    starts = np.searchsorted(norms, np.arange(1, Q + 2))
    shell_min = np.minimum.reduceat(dist, starts[:-1])
    scale = float(fm.full)
    best = None
    for r in range(1, Q + 1):
        lo, hi = starts[r - 1], starts[r]
        if best is not None and shell_min[r - 1] - margin >= best / scale:
            continue
        cand = np.nonzero(dist[lo:hi] <= shell_min[r - 1] + 2 * margin)[0] + lo
        shell_best = None
        for i in cand:
            q = tuple(int(v) for v in qs[i])
            err, slack, p = fm.residual(q)
            if err <= slack:
                err, p = _resolve(fm, rows, q, max_bits)
            if shell_best is None or err < shell_best[0]:
                shell_best = (err, q, p)
        if best is None or shell_best[0] < best:
            best = shell_best[0]
            yield r, shell_best[1], shell_best[0], shell_best[2]
            if best == 0:
                return


def _scan_1d(rows, Q, bits, max_bits):
    """Single-column fast path: incremental sums over q = 1..Q."""
    fm = _FixedMatrix(rows, bits)
    Y = [r[0] for r in fm.Y]
    umax = max(r[0] for r in fm.u)
    full, half = fm.full, fm.half
    S = [0] * len(Y)
    best = full
    for q in range(1, Q + 1):
        worst = 0
        for i, y in enumerate(Y):
            S[i] += y
            r = S[i] % full
            if r > half:
                r = full - r
            if r > worst:
                worst = r
        if worst >= best:
            continue
        if worst <= umax * q:
            worst, p = _resolve(fm, rows, (q,), max_bits)
            if worst >= best:
                continue
        else:
            p = fm.residual((q,))[2]
        best = worst
        yield q, (q,), worst, p
        if best == 0:
            return


def matrix_records(rows, Q, bits=DEFAULT_PRECISION, max_bits=MAX_PRECISION, node_cap=NODE_CAP):
    """Best-approximation records of the system ||M q + p|| over 1 <= ||q|| <= Q."""
    c = len(rows[0])
    if c > 1 and ((2 * Q + 1) ** c) // 2 > node_cap:
        raise SearchBudgetExceeded(f"ball of radius {Q} in Z^{c} exceeds node cap {node_cap}")
    gen = _scan_1d if c == 1 else _scan
    return list(gen(rows, Q, bits, max_bits))


def _estimate(rows, Q, base, bits, max_bits, node_cap):
    if Q < 10:
        raise ValueError("Q must be at least 10")
    records = matrix_records(rows, Q, bits, max_bits, node_cap)
    witnesses, infinite = [], False
    for r, q, err, p in records:
        if r < 2 and err != 0:
            continue
        if err == 0:
            witnesses.append(Witness(q if len(q) > 1 else q[0], p, 0.0, math.inf, r))
            infinite = True
            break
        ne = _neglog_err(err, bits)
        if ne <= 0:
            continue
        witnesses.append(Witness(q if len(q) > 1 else q[0], p, math.exp(-ne), ne / math.log(r), r))
    window_min = math.sqrt(Q)
    if infinite:
        return ExponentEstimate(None, True, witnesses, Q, window_min, base, math.inf)
    if not witnesses:
        raise EmptyTail("no witnesses with error < 1")
    tail = [w for w in witnesses if w.norm_q >= window_min] or witnesses[-1:]
    stat = tail_limsup([math.log(w.norm_q) for w in tail],
                       [w.implied_exponent * math.log(w.norm_q) for w in tail], base,
                       [(math.log(w.norm_q), w.implied_exponent * math.log(w.norm_q)) for w in witnesses])
    est = ExponentEstimate(stat.value, False, witnesses, Q, window_min, base, stat.raw)
    est.extra["floor_excess"] = stat.floor_excess
    est.extra["argmax_norm"] = tail[stat.argmax].norm_q
    return est


def _effective_base(rows):
    nz = sum(1 for r in rows if not all(_as_scalar(x).is_rational and _as_scalar(x).exact() == 0 for x in r))
    return len(rows[0]) / max(nz, 1)


def sigma_estimate(y, Q, bits=DEFAULT_PRECISION, max_bits=MAX_PRECISION):
    """Simultaneous exponent: scan q = 2..Q, p = nearest integers to -q y."""
    rows = [[v] for v in y]
    return _estimate(rows, Q, _effective_base(rows), bits, max_bits, NODE_CAP)


def omega_estimate(y, Q, bits=DEFAULT_PRECISION, max_bits=MAX_PRECISION, node_cap=NODE_CAP):
    """Linear-form exponent: scan q in Z^n, 2 <= ||q|| <= Q (half ball)."""
    rows = [list(y)]
    return _estimate(rows, Q, float(len(y)), bits, max_bits, node_cap)


def matrix_omega_estimate(A, Q, bits=DEFAULT_PRECISION, max_bits=MAX_PRECISION, node_cap=NODE_CAP):
    """Exponent of the system ||A q + p|| < ||q||^-v, q in Z^{cols}."""
    rows = [list(r) for r in A]
    return _estimate(rows, Q, _effective_base(rows), bits, max_bits, node_cap)


def best_approximations(y, Q, bits=DEFAULT_PRECISION):
    """Witnesses of sigma_estimate whose error strictly improves on all earlier ones."""
    est = sigma_estimate(y, Q, bits)
    out, best = [], math.inf
    for w in est.witnesses:
        if w.error < best:
            out.append(w)
            best = w.error
    return out
