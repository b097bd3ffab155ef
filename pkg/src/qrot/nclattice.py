"""Intervals and the Möbius function of the non-crossing partition lattice."""

from __future__ import annotations

import threading
from fractions import Fraction

from .partitions import Partition, enumerate_nc, is_noncrossing, leq, singletons
from .errors import NotComparable, NotNonCrossing


def _check_pair(lower: Partition, upper: Partition):
    for p in (lower, upper):
        if not is_noncrossing(p):
            raise NotNonCrossing(f"{p} is not non-crossing")
    if not leq(lower, upper):
        raise NotComparable(f"{lower} is not below {upper}")


def interval(lower: Partition, upper: Partition) -> list[Partition]:
    """All non-crossing sigma with lower <= sigma <= upper, canonical order."""
    _check_pair(lower, upper)
    return [s for s in enumerate_nc(lower.k) if leq(lower, s) and leq(s, upper)]


class MobiusCache:
    """Memo of Möbius values keyed by the canonical text of (lower, upper).

    Writes are idempotent, so a lock around insertion is enough for
    concurrent callers.
    """

    def __init__(self):
        self.entries: dict[tuple[str, str], Fraction] = {}
        # full columns mu(., upper) over [0, upper], keyed by upper's text
        self.columns: dict[str, dict[Partition, Fraction]] = {}
        self._lock = threading.Lock()

    def get(self, lower: Partition, upper: Partition):
        return self.entries.get((lower.text(), upper.text()))

    def put_many(self, items):
        with self._lock:
            for key, value in items:
                self.entries.setdefault(key, value)

    def put_column(self, upper: Partition, column: dict[Partition, Fraction]):
        with self._lock:
            self.columns.setdefault(upper.text(), column)

    def clear(self):
        with self._lock:
            self.entries.clear()
            self.columns.clear()

    def __len__(self):
        return len(self.entries)


default_cache = MobiusCache()


def _fill_column(upper: Partition, lower: Partition, cache: MobiusCache):
    # mu(t, upper) = -sum_{t < u <= upper} mu(u, upper), swept from the top down;
    # one sweep yields mu(., upper) on the whole of [lower, upper].
    elems = [s for s in enumerate_nc(upper.k) if leq(lower, s) and leq(s, upper)]
    elems.sort(key=len)
    values: dict[Partition, Fraction] = {}
    for i, t in enumerate(elems):
        if t == upper:
            values[t] = Fraction(1)
            continue
        acc = Fraction(0)
        for u in elems[:i]:
            if len(u) < len(t) and leq(t, u):
                acc += values[u]
        values[t] = -acc
    cache.put_many(((t.text(), upper.text()), v) for t, v in values.items())
    return values


def mobius(lower: Partition, upper: Partition, cache: MobiusCache | None = default_cache) -> Fraction:
    """Möbius function of NC(k) on the pair (lower, upper).

    Pass ``cache=None`` to compute without memoization.
    """
    _check_pair(lower, upper)
    if cache is None:
        return _fill_column(upper, lower, MobiusCache())[lower]
    hit = cache.get(lower, upper)
    if hit is not None:
        return hit
    return _fill_column(upper, lower, cache)[lower]


def mobius_from_below(lower: Partition, upper: Partition) -> Fraction:
    """Unmemoized evaluation by mu(p,p) = 1 and sum_{p <= t <= q} mu(p, t) = 0."""
    _check_pair(lower, upper)
    elems = interval(lower, upper)
    elems.sort(key=lambda s: -len(s))
    values: dict[Partition, Fraction] = {}
    for i, t in enumerate(elems):
        if t == lower:
            values[t] = Fraction(1)
            continue
        values[t] = -sum((values[s] for s in elems[:i] if len(s) > len(t) and leq(s, t)), Fraction(0))
    return values[upper]


def mobius_column(upper: Partition, cache: MobiusCache | None = default_cache) -> dict[Partition, Fraction]:
    """mu(sigma, upper) for every non-crossing sigma <= upper, canonical order."""
    if cache is not None:
        hit = cache.columns.get(upper.text())
        if hit is not None:
            return dict(hit)
    bottom = singletons(upper.k)
    _check_pair(bottom, upper)
    members = interval(bottom, upper)
    values = _fill_column(upper, bottom, cache if cache is not None else MobiusCache())
    column = {s: values[s] for s in members}
    if cache is not None:
        cache.put_column(upper, column)
    return dict(column)
