"""Nested moments and free cumulants over a scalar moment oracle.

A *word* is a sequence of ``(label, decoration)`` pairs, where the decoration
is ``"1"`` (plain) or ``"*"`` (starred).  Oracles map words to exact
rationals; everything here is bilinear bookkeeping on top of them.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from . import config
from .errors import DegreeExceeded, GroundSetMismatch, InvalidInput, NotNonCrossing
from .nclattice import MobiusCache, default_cache, mobius_column
from .partitions import PLAIN, STAR, Partition, enumerate_nc, interval_block, is_noncrossing
from .rational import to_text

Letter = tuple[Hashable, str]
Word = tuple[Letter, ...]


def as_word(labels: Sequence[Hashable], d: str | None = None) -> Word:
    """Pair labels with a decoration string (all plain by default)."""
    if d is None:
        d = PLAIN * len(labels)
    if len(d) != len(labels):
        raise InvalidInput("decoration length differs from word length")
    for c in d:
        if c not in (PLAIN, STAR):
            raise InvalidInput(f"bad decoration symbol {c!r}")
    return tuple(zip(labels, d))


class MomentOracle:
    """Joint distribution given by its moments.

    Subclasses implement :meth:`moment`; :meth:`eval` adds the degree cap,
    the unital convention for the empty word, and memoization.
    """

    def __init__(self, degree_cap: int | None = None):
        self.degree_cap = config.caps.degree if degree_cap is None else degree_cap
        self._memo: dict[Word, Fraction] = {}
        self._lock = threading.Lock()

    def moment(self, word: Word) -> Fraction:
        raise NotImplementedError

    def eval(self, word) -> Fraction:
        word = tuple((label, dec) for label, dec in word)
        if len(word) > self.degree_cap:
            raise DegreeExceeded(f"word length {len(word)} exceeds degree cap {self.degree_cap}")
        if not word:
            return Fraction(1)
        hit = self._memo.get(word)
        if hit is None:
            hit = Fraction(self.moment(word))
            with self._lock:
                self._memo[word] = hit
        return hit

    __call__ = eval

    def describe(self) -> str:
        return type(self).__name__


class FunctionOracle(MomentOracle):
    """Wrap a plain function ``word -> Fraction`` as an oracle."""

    def __init__(self, fn: Callable[[Word], Fraction], degree_cap: int | None = None, name: str = "function"):
        super().__init__(degree_cap)
        self._fn = fn
        self.name = name

    def moment(self, word):
        return self._fn(word)

    def describe(self):
        return self.name


def _check(oracle: MomentOracle, word: Word, pi: Partition):
    if pi.k != len(word):
        raise GroundSetMismatch(f"partition on {pi.k} points, word of length {len(word)}")
    if len(word) > oracle.degree_cap:
        raise DegreeExceeded(f"word length {len(word)} exceeds degree cap {oracle.degree_cap}")
    if not is_noncrossing(pi):
        raise NotNonCrossing(f"{pi} is not non-crossing")


def nested_moment(oracle: MomentOracle, word, pi: Partition) -> Fraction:
    """E^(pi) by repeatedly collapsing an interval block to its moment."""
    word = tuple(word)
    _check(oracle, word, pi)
    positions = list(range(1, pi.k + 1))
    value = Fraction(1)
    while positions:
        block = interval_block(pi, positions)
        # the collapsed block is a scalar here, so it factors out of the outer word
        value *= oracle.eval(tuple(word[x - 1] for x in block))
        if value == 0:
            return value
        gone = set(block)
        positions = [x for x in positions if x not in gone]
    return value


def free_cumulant(oracle: MomentOracle, word, pi: Partition, cache: MobiusCache | None = default_cache) -> Fraction:
    """kappa^(pi) = sum over non-crossing sigma <= pi of mu(sigma, pi) E^(sigma)."""
    word = tuple(word)
    _check(oracle, word, pi)
    total = Fraction(0)
    for sigma, mu in mobius_column(pi, cache).items():
        if mu:
            total += mu * nested_moment(oracle, word, sigma)
    return total


def free_cumulant_recursive(oracle: MomentOracle, word, pi: Partition) -> Fraction:
    """kappa^(pi) by solving the moment-cumulant formula for the top cumulant.

    Independent of the Möbius function; used as a cross-check.
    """
    word = tuple(word)
    _check(oracle, word, pi)
    memo: dict[Word, Fraction] = {}

    def top_cumulant(w: Word) -> Fraction:
        if w in memo:
            return memo[w]
        n = len(w)
        rest = Fraction(0)
        for sigma in enumerate_nc(n):
            if len(sigma) == 1:
                continue
            term = Fraction(1)
            for b in sigma.blocks:
                term *= top_cumulant(tuple(w[x - 1] for x in b))
                if term == 0:
                    break
            rest += term
        memo[w] = oracle.eval(w) - rest
        return memo[w]

    value = Fraction(1)
    for b in pi.blocks:
        value *= top_cumulant(tuple(word[x - 1] for x in b))
    return value


@dataclass(frozen=True)
class CumulantTable:
    word: Word
    values: dict[Partition, Fraction]

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def nonzero(self) -> dict[Partition, Fraction]:
        return {p: v for p, v in self.values.items() if v}

    def to_json(self) -> list[dict[str, str]]:
        return [{"partition": p.text(), "value": to_text(v)} for p, v in self.values.items()]


def cumulants_from_moments(oracle: MomentOracle, word, cache: MobiusCache | None = default_cache) -> CumulantTable:
    word = tuple(word)
    n = len(word)
    if n == 0:
        raise InvalidInput("cumulant table of an empty word")
    if n > oracle.degree_cap:
        raise DegreeExceeded(f"word length {n} exceeds degree cap {oracle.degree_cap}")
    ncs = enumerate_nc(n)
    moments = {s: nested_moment(oracle, word, s) for s in ncs}
    values = {}
    for pi in ncs:
        acc = Fraction(0)
        for sigma, mu in mobius_column(pi, cache).items():
            if mu and moments[sigma]:
                acc += mu * moments[sigma]
        values[pi] = acc
    return CumulantTable(word, values)
