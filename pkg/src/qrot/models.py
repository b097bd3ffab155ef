"""Closed-form moment oracles: free semicircular and circular families, and a row of generators."""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from typing import Sequence

from .cumulants import MomentOracle, Word
from .errors import InvalidInput
from .haar import psi
from .partitions import PLAIN, STAR, admissible, enumerate_nc2
from .rational import parse as parse_rational
from .rational import to_text
from .weingarten import ORTHOGONAL, UNITARY


def _labels(word) -> list:
    return [letter[0] if isinstance(letter, tuple) else letter for letter in word]


def _decoration(word) -> str:
    return "".join(letter[1] if isinstance(letter, tuple) else PLAIN for letter in word)


def _ker_pairings(labels: Sequence):
    if len(labels) % 2:
        return []
    if not labels:
        return []
    return [
        p for p in enumerate_nc2(len(labels))
        if all(labels[a - 1] == labels[b - 1] for a, b in p.blocks)
    ]


def semicircular_moment(c, word) -> Fraction:
    """Moment of a free semicircular family with common variance ``c``.

    Accepts bare labels or ``(label, decoration)`` letters; decorations are
    ignored since the variables are self-adjoint.
    """
    labels = _labels(word)
    if not labels:
        return Fraction(1)
    pairs = _ker_pairings(labels)
    return len(pairs) * Fraction(c) ** (len(labels) // 2)


def circular_moment(eta, theta, word) -> Fraction:
    """Moment of a free circular family; a block {s < t} weighs eta if s is starred, else theta."""
    labels, d = _labels(word), _decoration(word)
    if not labels:
        return Fraction(1)
    eta, theta = Fraction(eta), Fraction(theta)
    total = Fraction(0)
    for p in _ker_pairings(labels):
        if admissible(p, d):
            w = Fraction(1)
            for s, _ in p.blocks:
                w *= eta if d[s - 1] == STAR else theta
            total += w
    return total


def generator_row_moment(flavor: str, n: int, word) -> Fraction:
    """psi_n(u_{1 j1} ... u_{1 jm}) with the column indices taken from the word."""
    labels, d = _labels(word), _decoration(word)
    if flavor == ORTHOGONAL:
        d = PLAIN * len(d)
    return psi(flavor, n, (1,) * len(labels), tuple(labels), d)


class SemicircularFamilyOracle(MomentOracle):
    def __init__(self, c=1, degree_cap: int | None = None):
        super().__init__(degree_cap)
        self.c = Fraction(c)
        if self.c <= 0:
            raise InvalidInput("semicircular variance must be positive")

    def moment(self, word: Word) -> Fraction:
        return semicircular_moment(self.c, word)

    def describe(self):
        return f"semicircle:c={to_text(self.c, plain=True)}"


class CircularFamilyOracle(MomentOracle):
    def __init__(self, eta=1, theta=1, degree_cap: int | None = None):
        super().__init__(degree_cap)
        self.eta, self.theta = Fraction(eta), Fraction(theta)
        if self.eta < 0 or self.theta < 0:
            raise InvalidInput("circular variances must be non-negative")

    def moment(self, word: Word) -> Fraction:
        return circular_moment(self.eta, self.theta, word)

    def describe(self):
        return f"circular:eta={to_text(self.eta, plain=True)},theta={to_text(self.theta, plain=True)}"


class GeneratorRowOracle(MomentOracle):
    """x_j = u_{1j} in the Haar probability space of the quantum group."""

    def __init__(self, flavor: str = ORTHOGONAL, n: int = 2, degree_cap: int | None = None):
        super().__init__(degree_cap)
        if flavor not in (ORTHOGONAL, UNITARY):
            raise InvalidInput(f"unknown flavor {flavor!r}")
        if n < 2:
            raise InvalidInput(f"row model needs n >= 2, got {n}")
        self.flavor, self.n = flavor, n

    def moment(self, word: Word) -> Fraction:
        return generator_row_moment(self.flavor, self.n, word)

    def describe(self):
        return f"row-{self.flavor}:n={self.n}"


class IndependentSignOracle(MomentOracle):
    """Classically independent commuting +-1 variables (every even power has moment 1).

    Useful as a distribution that is not quantum rotatable.
    """

    def moment(self, word: Word) -> Fraction:
        counts = Counter(_labels(word))
        return Fraction(int(all(v % 2 == 0 for v in counts.values())))

    def describe(self):
        return "bernoulli"


def _params(text: str, allowed: set[str]) -> dict[str, str]:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep or key not in allowed or key in out:
            raise InvalidInput(f"bad model parameter {item!r}")
        out[key] = val
    return out


def parse_model(text: str, degree_cap: int | None = None) -> MomentOracle:
    """Build an oracle from ``semicircle:c=1``, ``circular:eta=1,theta=2``, ``row-orthogonal:n=3`` etc."""
    name, _, rest = text.strip().partition(":")
    if name == "semicircle":
        p = _params(rest, {"c"})
        return SemicircularFamilyOracle(parse_rational(p.get("c", "1")), degree_cap)
    if name == "circular":
        p = _params(rest, {"eta", "theta"})
        return CircularFamilyOracle(parse_rational(p.get("eta", "1")), parse_rational(p.get("theta", "1")), degree_cap)
    m = re.fullmatch(r"row-(orthogonal|unitary)", name)
    if m:
        p = _params(rest, {"n"})
        if "n" not in p or not p["n"].isdigit():
            raise InvalidInput(f"row model needs n=<int>: {text!r}")
        return GeneratorRowOracle(m.group(1), int(p["n"]), degree_cap)
    if name == "bernoulli" and not rest:
        return IndependentSignOracle(degree_cap)
    raise InvalidInput(f"unknown model {text!r}")

