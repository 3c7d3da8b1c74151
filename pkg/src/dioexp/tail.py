"""Finite-data limsup statistics for approximation exponents.

Every estimator in the package reduces to a stream of records
``(log scale, -log error)`` and asks for the limsup of their ratio.  The raw
ratio carries a bias of order ``const / log scale`` (for the golden ratio the
constant is ``log sqrt(5)``), which at desk-scale search bounds is larger than
the tolerances we care about.  :func:`tail_limsup` therefore reports both the
raw tail maximum and a floor-corrected one: the smallest Dirichlet excess seen
in the tail window is treated as a bounded constant and removed.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TailStat:
    value: float
    raw: float
    floor_excess: float
    argmax: int  # index into the window list


def tail_limsup(log_scales, neglog_errors, base, floor_pool=None):
    """Tail statistic over parallel sequences of ``log scale`` / ``-log error``.

    ``base`` is the Dirichlet exponent of the problem (the value every input
    attains), so the excess ``E = -log err - base * log scale`` is bounded for
    extremal inputs and grows linearly in ``log scale`` along witnesses of a
    larger exponent.  Returns ``base + max (E - E_floor) / log scale`` with
    ``E_floor = max(0, min E)``.  ``floor_pool`` (pairs of the same kind)
    widens the set the floor is taken over; a tail holding a single isolated
    record would otherwise cancel itself.
    """
    pairs = list(zip(log_scales, neglog_errors))
    if not pairs:
        raise ValueError("empty tail window")
    if any(ls <= 0 for ls, _ in pairs):
        raise ValueError("log scale must be positive")
    excess = [ne - base * ls for ls, ne in pairs]
    pool = excess + [ne - base * ls for ls, ne in (floor_pool or []) if ls > 0]
    floor = max(0.0, min(pool))
    best, arg = None, 0
    for k, ((ls, _), e) in enumerate(zip(pairs, excess)):
        cand = base + (e - floor) / ls
        if best is None or cand > best:
            best, arg = cand, k
    raw = max(ne / ls for ls, ne in pairs)
    return TailStat(value=best, raw=raw, floor_excess=floor, argmax=arg)
