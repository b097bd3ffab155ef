"""Haar state of the free orthogonal and free unitary quantum groups on generator monomials."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionTooSmall, InvalidInput
from .partitions import PLAIN, STAR, Partition
from .weingarten import ORTHOGONAL, UNITARY, WeingartenTable, weingarten_table


@dataclass(frozen=True)
class Monomial:
    """u_{i1 j1} ... u_{im jm}, or v_{i1 j1}^{d1} ... for the unitary flavor."""

    flavor: str
    n: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    d: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        if not self.d:
            object.__setattr__(self, "d", PLAIN * len(self.rows))
        if self.flavor not in (ORTHOGONAL, UNITARY):
            raise InvalidInput(f"unknown flavor {self.flavor!r}")
        if not (len(self.rows) == len(self.cols) == len(self.d)):
            raise InvalidInput("rows, cols and decoration must have equal length")
        if any(c not in (PLAIN, STAR) for c in self.d):
            raise InvalidInput(f"bad decoration {self.d!r}")
        if self.flavor == ORTHOGONAL and STAR in self.d:
            raise InvalidInput("orthogonal generators carry no star decoration")
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2:
            raise DimensionTooSmall(f"Haar state needs n >= 2, got {self.n!r}")
        for idx in self.rows + self.cols:
            if not 1 <= idx <= self.n:
                raise InvalidInput(f"index {idx} outside 1..{self.n}")

    def __len__(self):
        return len(self.rows)

    def text(self) -> str:
        return " ".join(
            f"{i},{j}" + ("*" if dec == STAR else "") for i, j, dec in zip(self.rows, self.cols, self.d)
        )


_FACTOR = re.compile(r"(\d+),(\d+)(\*?)")


def parse_monomial(text: str, flavor: str, n: int) -> Monomial:
    """Parse ``"1,1 1,2* 2,1"`` style factor lists."""
    rows, cols, d = [], [], []
    for tok in text.split():
        m = _FACTOR.fullmatch(tok)
        if not m:
            raise InvalidInput(f"cannot parse factor {tok!r}")
        rows.append(int(m.group(1)))
        cols.append(int(m.group(2)))
        d.append(STAR if m.group(3) else PLAIN)
    return Monomial(flavor, n, tuple(rows), tuple(cols), "".join(d))


def dominated(index: Sequence[Partition], word: Sequence) -> list[int]:
    """Positions in ``index`` of the pairings p with p <= ker(word)."""
    return [
        pos for pos, p in enumerate(index)
        if all(word[a - 1] == word[b - 1] for a, b in p.blocks)
    ]


def table_for(flavor: str, n: int, d: str) -> WeingartenTable:
    key = len(d) // 2 if flavor == ORTHOGONAL else d
    return weingarten_table(flavor, key, n)


def haar_moment(m: Monomial) -> Fraction:
    """psi_n of a monomial as the double Weingarten sum over admissible pairings."""
    size = len(m)
    if size == 0:
        return Fraction(1)
    if size % 2:
        return Fraction(0)
    t = table_for(m.flavor, m.n, m.d)
    rows_ok = dominated(t.index, m.rows)
    if not rows_ok:
        return Fraction(0)
    cols_ok = dominated(t.index, m.cols)
    return sum((t.wg[a, b] for a in rows_ok for b in cols_ok), Fraction(0))


def psi(flavor: str, n: int, rows: Sequence[int], cols: Sequence[int], d: str = "") -> Fraction:
    return haar_moment(Monomial(flavor, n, tuple(rows), tuple(cols), d))


def orthogonality_check(n: int, j: int, jp: int, degree_budget: int, flavor: str = ORTHOGONAL) -> bool:
    """Check sum_i psi(u_ij u_ij' M) = delta(j, j') psi(M) for every monomial M up to the budget.

    For the unitary flavor both insertions v_ij^* v_ij' and v_ij v_ij'^* are
    checked (unitarity of the generator matrix and of its conjugate).
    """
    if n < 2:
        raise DimensionTooSmall(f"Haar state needs n >= 2, got {n}")
    prefixes = [PLAIN + PLAIN] if flavor == ORTHOGONAL else [STAR + PLAIN, PLAIN + STAR]
    delta = 1 if j == jp else 0
    letters = range(1, n + 1)
    decs = (PLAIN,) if flavor == ORTHOGONAL else (PLAIN, STAR)
    for m in range(degree_budget + 1):
        for rows in itertools.product(letters, repeat=m):
            for cols in itertools.product(letters, repeat=m):
                for d in itertools.product(decs, repeat=m):
                    d = "".join(d)
                    rhs = delta * psi(flavor, n, rows, cols, d)
                    for prefix_d in prefixes:
                        lhs = sum(
                            (psi(flavor, n, (i, i) + rows, (j, jp) + cols, prefix_d + d) for i in letters),
                            Fraction(0),
                        )
                        if lhs != rhs:
                            return False
    return True
