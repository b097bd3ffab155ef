"""Text encoding of exact rationals (``fractions.Fraction``)."""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InvalidInput

_RAT = re.compile(r"[+-]?\d+(/\d+)?")


def to_text(x: Fraction | int, plain: bool = False) -> str:
    """``"p/q"`` in lowest terms; integers become ``"p/1"``, or ``"p"`` when ``plain``."""
    x = Fraction(x)
    if plain and x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse(text: str) -> Fraction:
    text = text.strip()
    if not _RAT.fullmatch(text):
        raise InvalidInput(f"not a rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise InvalidInput(f"zero denominator in {text!r}") from None
