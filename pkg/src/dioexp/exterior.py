"""Exterior algebra over Z^{n+1} and the rank-j sector exponents of a subspace.

A grade-j multivector w splits as pi(w) (index sets containing n+1) plus a part
inside {1..n}.  The unipotent u_y acts by

    u_y w = pi(w) + sum_i y_i C_i(w),   y_{n+1} = 1,

and a subspace with matrix A (R = (A I_{s+1})) is scored by ||R C(w)||.
"""

from __future__ import annotations

import contextlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd

import numpy as np

from .errors import (
    DecompositionMismatch,
    DimensionMismatch,
    DomainError,
    GradeOverflow,
    PrecisionExhausted,
    SearchBudgetExceeded,
)
from .scalars import DEFAULT_PRECISION, MAX_PRECISION, RealScalar
from .search import ExponentEstimate, Witness, _surd_form
from .tail import tail_limsup

NODE_CAP = 5_000_000
_FAULTS = set()


@contextlib.contextmanager
def inject_fault(name):
    """Deliberately break one code path (for mutation tests of the verifier)."""
    _FAULTS.add(name)
    try:
        yield
    finally:
        _FAULTS.discard(name)


# -- multivectors ---------------------------------------------------------------


@dataclass(frozen=True)
class Multivector:
    """Element of the j-th exterior power of Q^k, indices 1..k."""

    k: int
    coeffs: dict = field(default_factory=dict)  # sorted index tuple -> Fraction

    def __post_init__(self):
        clean = {}
        grades = set()
        for key, c in self.coeffs.items():
            key = tuple(key)
            if list(key) != sorted(set(key)) or not all(1 <= i <= self.k for i in key):
                raise ValueError(f"bad index set {key}")
            c = Fraction(c)
            if c:
                clean[key] = c
                grades.add(len(key))
        if len(grades) > 1:
            raise ValueError("mixed grades")
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @property
    def grade(self):
        return len(next(iter(self.coeffs))) if self.coeffs else None

    @classmethod
    def basis(cls, k, *idx):
        return cls(k, {tuple(idx): 1})

    @classmethod
    def vector(cls, v):
        return cls(len(v), {(i + 1,): x for i, x in enumerate(v)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return Multivector(self.k, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Multivector(self.k, {key: v * c for key, v in self.coeffs.items()})

    def __bool__(self):
        return bool(self.coeffs)

    def max_norm(self):
        return max((abs(c) for c in self.coeffs.values()), default=Fraction(0))

    def euclid_norm_sq(self):
        return sum((c * c for c in self.coeffs.values()), Fraction(0))

    def to_json(self):
        return json.dumps({",".join(map(str, key)): f"{c.numerator}/{c.denominator}"
                           for key, c in self.coeffs.items()})

    @classmethod
    def from_json(cls, text, k):
        return cls(k, {tuple(int(i) for i in key.split(",")): Fraction(c)
                       for key, c in json.loads(text).items()})


def _merge_sign(a, b):
    """Sign of the permutation sorting a + b (a, b disjoint sorted tuples)."""
    inv = sum(1 for x in a for y in b if x > y)
    return -1 if inv % 2 else 1


def wedge(a, b):
    if a.k != b.k:
        raise DimensionMismatch("ambient dimensions differ")
    if a.grade is not None and b.grade is not None and a.grade + b.grade > a.k:
        raise GradeOverflow(f"grade {a.grade} + {b.grade} exceeds {a.k}")
    out = {}
    for ka, ca in a.coeffs.items():
        for kb, cb in b.coeffs.items():
            if set(ka) & set(kb):
                continue
            key = tuple(sorted(ka + kb))
            out[key] = out.get(key, 0) + _merge_sign(ka, kb) * ca * cb
    return Multivector(a.k, out)


def wedge_all(vectors):
    w = Multivector.vector(vectors[0])
    for v in vectors[1:]:
        w = wedge(w, Multivector.vector(v))
    return w


def pi_part(w):
    return Multivector(w.k, {key: c for key, c in w.coeffs.items() if key[-1] == w.k})


def _contraction_sign(i, I):
    s = sum(1 for x in I if x > i)
    if "contraction_sign" in _FAULTS:
        s += 1
    return -1 if s % 2 else 1


def contraction_parts(w):
    """[C_1(w), ..., C_{n+1}(w)], each supported on index sets inside {1..n}."""
    k = w.k
    n = k - 1
    parts = [dict() for _ in range(k)]
    for key, c in w.coeffs.items():
        if key[-1] == k:
            J = key[:-1]
            for i in range(1, k):
                if i not in J:
                    I = tuple(sorted(J + (i,)))
                    parts[i - 1][I] = _contraction_sign(i, I) * c
        else:
            parts[n][key] = c
    return [Multivector(k, p) for p in parts]


def _u_columns(y):
    n = len(y)
    cols = [[Fraction(int(r == i)) for r in range(n + 1)] for i in range(n)]
    cols.append([Fraction(v) for v in y] + [Fraction(1)])
    return cols


def _rational(x):
    if isinstance(x, RealScalar):
        if not x.is_rational:
            raise DomainError("act_u needs rational y")
        return x.exact()
    return Fraction(x)


def act_u(y, w):
    """u_y w, computed multilinearly and by the pi + sum C_i y_i split; both must agree."""
    y = [_rational(v) for v in y]
    if w.k != len(y) + 1:
        raise DimensionMismatch("w must live in dimension len(y) + 1")
    cols = _u_columns(y)
    direct = Multivector(w.k, {})
    for key, c in w.coeffs.items():
        direct = direct + wedge_all([cols[i - 1] for i in key]).scale(c)
    split = pi_part(w)
    for yi, Ci in zip(y + [Fraction(1)], contraction_parts(w)):
        split = split + Ci.scale(yi)
    if direct != split:
        raise DecompositionMismatch("u_y w differs between the two computations")
    return direct


# -- subspaces ------------------------------------------------------------------


def _as_scalar(x):
    return x if isinstance(x, RealScalar) else RealScalar.rational(Fraction(x))


@dataclass(frozen=True)
class SubspaceSpec:
    """s-dimensional affine subspace x -> ((x, 1) A, x) of R^n."""

    n: int
    s: int
    A: tuple  # (s+1) rows of n-s RealScalars

    def __post_init__(self):
        A = tuple(tuple(_as_scalar(x) for x in r) for r in self.A)
        object.__setattr__(self, "A", A)
        if not 1 <= self.s <= self.n - 1:
            raise DimensionMismatch("need 1 <= s <= n-1")
        if len(A) != self.s + 1 or any(len(r) != self.n - self.s for r in A):
            raise DimensionMismatch(f"A must be {self.s + 1} x {self.n - self.s}")

    @classmethod
    def hyperplane(cls, a):
        """x -> (a_1 x_1 + ... + a_{n-1} x_{n-1} + a_n, x)."""
        return cls(len(a), len(a) - 1, tuple((v,) for v in a))

    @classmethod
    def line_r3(cls, a, b):
        """x -> (a x, b x, x)."""
        return cls(3, 1, ((a, b), (0, 0)))

    def R(self):
        one, zero = RealScalar.rational(1), RealScalar.rational(0)
        return [list(r) + [one if c == i else zero for c in range(self.s + 1)]
                for i, r in enumerate(self.A)]

    def to_dict(self):
        return {"n": self.n, "s": self.s, "A": [[x.to_json() for x in r] for r in self.A]}


def _rc_forms(spec, x, z):
    """Entries of R C(w) as (integer part, {(r, i): integer coefficient of A[r][i]}).

    x maps (j-1)-subsets J of {1..n} to <e_{J+(n+1)}, w>; z maps j-subsets I
    of {1..n} to <e_I, w>.  Rows r are 0-based; A columns i are 0-based.
    """
    n, s = spec.n, spec.s
    low = n - s
    out = {}
    for I in z:
        for r in range(s + 1):
            const, lin = 0, {}
            for i in I:
                xi = x.get(tuple(v for v in I if v != i), 0)
                if not xi:
                    continue
                c = _contraction_sign(i, I) * xi
                if i <= low:
                    lin[(r, i - 1)] = lin.get((r, i - 1), 0) + c
                elif i - low == r + 1:
                    const += c
            if r == s:
                const += z[I]
            out[(r, I)] = (const, lin)
    return out


def _split(spec, w):
    n = spec.n
    x = {key[:-1]: int(c) for key, c in w.coeffs.items() if key[-1] == n + 1}
    z = {I: 0 for I in combinations(range(1, n + 1), w.grade)}
    for key, c in w.coeffs.items():
        if key[-1] != n + 1:
            z[key] = int(c)
    return x, z


def rc_norm(spec, w):
    """||R C(w)|| in the max-norm; exact Fraction for rational A, else float."""
    if w.k != spec.n + 1:
        raise DimensionMismatch("w must live in dimension n + 1")
    if not w:
        return Fraction(0)
    if w.grade > spec.n:
        raise GradeOverflow("top grade has no C-part inside {1..n}")
    if any(c.denominator != 1 for c in w.coeffs.values()):
        parts = contraction_parts(w)
        R = spec.R()
        if all(v.is_rational for r in R for v in r):
            best = Fraction(0)
            keys = set().union(*(p.coeffs for p in parts))
            for r in R:
                for I in keys:
                    best = max(best, abs(sum(v.exact() * p.coeffs.get(I, 0) for v, p in zip(r, parts))))
            return best
        return max(abs(sum(float(v) * float(p.coeffs.get(I, 0)) for v, p in zip(r, parts)))
                   for r in R for I in set().union(*(q.coeffs for q in parts)))
    x, z = _split(spec, w)
    ev = _Evaluator(spec, DEFAULT_PRECISION, MAX_PRECISION)
    return ev.norm(_rc_forms(spec, x, z))


class _Evaluator:
    """Fixed-point evaluation of integer combinations of the entries of A."""

    def __init__(self, spec, bits, max_bits):
        self.spec = spec
        self.max_bits = max_bits
        self.exact = all(x.is_rational for r in spec.A for x in r)
        self._set(bits)

    def _set(self, bits):
        self.bits = bits
        fx = [[x.fixed(bits) for x in r] for r in self.spec.A]
        self.Y = [[v for v, _ in r] for r in fx]
        self.u = [[e for _, e in r] for r in fx]

    def value(self, const, lin):
        """(scaled value, slack) of const + sum coeff * A[r][i]."""
        v = const << self.bits
        slack = 0
        for (r, i), c in lin.items():
            v += c * self.Y[r][i]
            slack += abs(c) * self.u[r][i]
        return v, slack

    def nearest(self, lin):
        """Nearest integer to sum coeff * A[r][i]."""
        v, _ = self.value(0, lin)
        half = 1 << (self.bits - 1)
        return (v + half) >> self.bits

    def is_zero(self, const, lin):
        if not all(_surd_form(self.spec.A[r][i]) is not None for (r, i), c in lin.items() if c):
            return False
        acc = {1: Fraction(const)}
        for (r, i), c in lin.items():
            for d, co in _surd_form(self.spec.A[r][i]).items():
                acc[d] = acc.get(d, 0) + c * co
        return not any(acc.values())

    def norm(self, forms):
        """Max |form| as a float (Fraction for rational A); 0 only if certified."""
        if self.exact:
            return max(abs(const + sum(c * self.spec.A[r][i].exact() for (r, i), c in lin.items()))
                       for const, lin in forms.values())
        best = 0.0
        for const, lin in forms.values():
            best = max(best, self._abs(const, lin))
        return best

    def _abs(self, const, lin):
        bits = self.bits
        while True:
            ev = self if bits == self.bits else _Evaluator(self.spec, bits, self.max_bits)
            v, slack = ev.value(const, lin)
            if abs(v) > slack:
                return _big_ldexp(abs(v), bits)
            if self.is_zero(const, lin):
                return 0.0
            bits *= 2
            if bits > self.max_bits:
                raise PrecisionExhausted("cannot separate an R C(w) entry from 0")


def _big_ldexp(v, bits):
    shift = max(v.bit_length() - 60, 0)
    return math.ldexp(v >> shift, shift - bits)


# -- exponent conversion --------------------------------------------------------


def exponent_conversion(u, j):
    """v = u / (j + (j-1) u)."""
    if u < 0:
        raise DomainError("u must be nonnegative")
    if u == math.inf:
        return Fraction(1, j - 1) if j > 1 else math.inf
    return u / (j + (j - 1) * u)


def exponent_conversion_inverse(v, j):
    """u = j v / (v + 1 - j v); pole at v = 1/(j-1)."""
    if v < 0:
        raise DomainError("v must be nonnegative")
    d = v + 1 - j * v
    if d <= 0:
        raise DomainError(f"v = {v} is at or beyond the pole 1/{j - 1}")
    return j * v / d


# -- rank-j sector search -------------------------------------------------------


def _rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def is_decomposable(w):
    """w = v_1 ^ ... ^ v_j iff v -> v ^ w has kernel of dimension j."""
    j, k = w.grade, w.k
    if j is None:
        return True
    if j in (1, k - 1, k):
        return True
    idx = list(combinations(range(1, k + 1), j + 1))
    pos = {I: r for r, I in enumerate(idx)}
    mat = [[0] * k for _ in idx]
    for i in range(1, k + 1):
        for key, c in w.coeffs.items():
            if i in key:
                continue
            I = tuple(sorted((i,) + key))
            mat[pos[I]][i - 1] += _merge_sign((i,), key) * c
    return _rank(mat) == k - j


@dataclass
class _Layout:
    free: list
    forced: list  # (J, r, k, I)
    cells: list  # j-subsets of {1..n}
    base_u: float | None


def _layout(spec, j):
    n, s = spec.n, spec.s
    high = set(range(n - s + 1, n + 1))
    subsets = list(combinations(range(1, n + 1), j - 1))
    free = [J for J in subsets if high <= set(J)]
    rest = [J for J in subsets if not high <= set(J)]
    rest.sort(key=lambda J: (-len(high & set(J)), J))
    forced = []
    for J in rest:
        k = min(high - set(J))
        forced.append((J, k - (n - s) - 1, k, tuple(sorted(J + (k,)))))
    cells = list(combinations(range(1, n + 1), j))
    # forced entries whose rounding target actually depends on A
    nonconst = 0
    for J, r, k, I in forced:
        if any(i <= n - s and not _is_zero_scalar(spec.A[r][i - 1]) for i in I):
            nonconst += 1
    for I in cells:
        if any(i <= n - s and not _is_zero_scalar(spec.A[spec.s][i - 1]) for i in I):
            nonconst += 1
    base_u = len(free) / nonconst if free and nonconst else None
    return _Layout(free, forced, cells, base_u)


def _is_zero_scalar(x):
    return x.is_rational and x.exact() == 0


def _target(spec, x, r, I):
    """Integer combination of A-row r feeding cell I, as {(r, i): coeff}."""
    lin = {}
    for i in I:
        if i <= spec.n - spec.s:
            xi = x.get(tuple(v for v in I if v != i), 0)
            if xi:
                lin[(r, i - 1)] = lin.get((r, i - 1), 0) + _contraction_sign(i, I) * xi
    return lin


def _complete(spec, lay, free_vals, ev):
    """Fill in the forced coordinates by rounding; returns (x, z)."""
    x = dict(zip(lay.free, free_vals))
    for J, r, k, I in lay.forced:
        sgn = _contraction_sign(k, I)
        x[J] = -sgn * ev.nearest(_target(spec, x, r, I))
    z = {I: -ev.nearest(_target(spec, x, spec.s, I)) for I in lay.cells}
    return x, z


def _to_multivector(n, x, z):
    coeffs = {J + (n + 1,): v for J, v in x.items() if v}
    coeffs.update({I: v for I, v in z.items() if v})
    return Multivector(n + 1, coeffs)


def _float_pass(spec, lay, frees):
    """Vectorized float version of _complete + ||R C|| + ||pi||."""
    A = np.array([[float(v) for v in r] for r in spec.A])
    low = spec.n - spec.s
    X = {J: frees[:, c].astype(float) for c, J in enumerate(lay.free)}

    def target(r, I):
        acc = np.zeros(len(frees))
        for i in I:
            if i <= low:
                J = tuple(v for v in I if v != i)
                if J in X:
                    acc += _contraction_sign(i, I) * A[r, i - 1] * X[J]
        return acc

    for J, r, k, I in lay.forced:
        X[J] = -_contraction_sign(k, I) * np.rint(target(r, I))
    Z = {I: -np.rint(target(spec.s, I)) for I in lay.cells}
    rc = np.zeros(len(frees))
    for I in lay.cells:
        for r in range(spec.s + 1):
            v = target(r, I)
            for i in I:
                if i > low and i - low == r + 1:
                    J = tuple(u for u in I if u != i)
                    v = v + _contraction_sign(i, I) * X.get(J, 0.0)
            if r == spec.s:
                v = v + Z[I]
            rc = np.maximum(rc, np.abs(v))
    pin = np.zeros(len(frees))
    for v in X.values():
        pin = np.maximum(pin, np.abs(v))
    scale = (np.abs(A).max() + 1.0) * max(1.0, float(np.abs(frees).max())) * 8 * (len(lay.free) + len(lay.forced) + 1)
    return rc, pin, scale * 2.0 ** -50


def sigma_j_estimate(spec, j, H, bits=DEFAULT_PRECISION, max_bits=MAX_PRECISION, node_cap=NODE_CAP):
    """Rank-j sector exponent sigma_j(A) from integer multivectors of height <= H.

    The coordinates <e_{J+(n+1)}, w> with J containing {n-s+1..n} are free and
    range over [-H, H]; every other coordinate is pinned by rounding, because an
    identity column of R isolates it.  This is exhaustive for ||R C(w)|| < 1/2.
    With no free coordinates, pi(w) = 0 for every such w and sigma_j = 0.
    """
    n = spec.n
    if not 1 <= j <= n:
        raise ValueError("j must lie in 1..n (grade n+1 is never searched)")
    if H < 2:
        raise ValueError("H must be at least 2")
    lay = _layout(spec, j)
    F = len(lay.free)
    if F == 0:
        return ExponentEstimate(0.0, False, [], H, math.sqrt(H), 0.0, 0.0,
                                {"j": j, "free_coordinates": 0, "u": 0.0})
    if ((2 * H + 1) ** F) // 2 > node_cap:
        raise SearchBudgetExceeded(f"{F} free coordinates at height {H} exceed node cap {node_cap}")
    axis = np.arange(-H, H + 1)
    frees = np.stack(np.meshgrid(*([axis] * F), indexing="ij"), -1).reshape(-1, F)
    nz = frees != 0
    first = frees[np.arange(len(frees)), nz.argmax(1)]
    frees = frees[nz.any(1) & (first > 0)]
    rc, pin, margin = _float_pass(spec, lay, frees)
    pin_i = pin.astype(np.int64)
    order = np.lexsort((rc, pin_i))
    ev = _Evaluator(spec, bits, max_bits)
    records, best = [], math.inf
    pos = 0
    N = len(order)
    while pos < N:
        p = pin_i[order[pos]]
        end = pos
        while end < N and pin_i[order[end]] == p:
            end += 1
        shell_best = None
        for idx in order[pos:end]:
            bound = min(best, shell_best[0] if shell_best else math.inf)
            if rc[idx] - margin >= min(bound, 0.5):
                break
            x, z = _complete(spec, lay, [int(v) for v in frees[idx]], ev)
            w = _to_multivector(n, x, z)
            if not pi_part(w):
                continue
            g = 0
            for c in w.coeffs.values():
                g = gcd(g, int(c))
            if g != 1 or not is_decomposable(w):
                continue
            val = ev.norm(_rc_forms(spec, x, z))
            val = float(val)
            if val < bound:
                shell_best = (val, w)
        if shell_best is not None and shell_best[0] < best:
            best = shell_best[0]
            norm_pi = int(pi_part(shell_best[1]).max_norm())
            records.append((norm_pi, shell_best[1], best))
            if best == 0:
                break
        pos = end
    return _sector_estimate(records, H, j, lay)


def _sector_estimate(records, H, j, lay):
    extra = {"j": j, "free_coordinates": len(lay.free), "base_u": lay.base_u}
    witnesses, infinite = [], False
    for norm_pi, w, err in records:
        if err == 0:
            witnesses.append(Witness(w.to_json(), (), 0.0, math.inf, norm_pi))
            infinite = True
            break
        if norm_pi < 2 or err >= 1:
            continue
        u = -math.log(err) / math.log(norm_pi)
        witnesses.append(Witness(w.to_json(), (), err, float(exponent_conversion(u, j)), norm_pi))
    window_min = math.sqrt(H)
    if infinite:
        return ExponentEstimate(None, True, witnesses, H, window_min, 0.0, math.inf, extra)
    if not witnesses:
        extra["u"] = 0.0
        return ExponentEstimate(0.0, False, [], H, window_min, 0.0, 0.0, extra)
    tail = [w for w in witnesses if w.norm_q >= window_min] or witnesses[-1:]
    logs = [math.log(w.norm_q) for w in tail]
    negs = [-math.log(w.error) for w in tail]
    base_u = lay.base_u if lay.base_u is not None else 0.0
    pool = [(math.log(w.norm_q), -math.log(w.error)) for w in witnesses]
    stat = tail_limsup(logs, negs, base_u, pool)
    extra.update(u=stat.value, floor_excess=stat.floor_excess, argmax_norm=tail[stat.argmax].norm_q)
    return ExponentEstimate(float(exponent_conversion(stat.value, j)), False, witnesses, H, window_min,
                            float(exponent_conversion(base_u, j)), float(exponent_conversion(stat.raw, j)), extra)
