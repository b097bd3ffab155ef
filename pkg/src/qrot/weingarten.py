"""Gram and Weingarten matrices on (decorated) non-crossing pairings.

For the orthogonal flavor the index set is NC_2(2k); for the unitary flavor it
is the set of non-crossing pairings that join a plain and a starred position
of a decoration string such as ``"1*1*"``.  Entries are exact
``fractions.Fraction`` values throughout.
"""

from __future__ import annotations

import math
import os
import tempfile
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

from . import config
from .errors import CacheCorrupted, CapExceeded, DimensionTooSmall, InvalidInput, OddGroundSet, Singular
from .partitions import Partition, enumerate_nc2, enumerate_nc2_decorated, join_size, parse_decoration
from .rational import parse as parse_rational
from .rational import to_text

ORTHOGONAL = "orthogonal"
UNITARY = "unitary"
FLAVORS = (ORTHOGONAL, UNITARY)

Key = Union[int, str]


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise InvalidInput("entry count does not match the shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RationalMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InvalidInput("ragged rows")
        return cls(len(rows), ncols, tuple(Fraction(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise InvalidInput("shape mismatch in matrix product")
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append([sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols])
        if not out:
            return RationalMatrix(0, other.cols, ())
        return RationalMatrix.from_rows(out)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[j::self.cols]) if self.cols else ()


def invert(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse by fraction-free Gauss-Jordan elimination.

    Rows are first scaled to integers.  Each elimination step divides by the
    previous pivot, which is exact (the entries are minors of the input), so
    the working matrix never leaves the integers; the single division by the
    determinant happens at the end.
    """
    if not m.is_square():
        raise InvalidInput(f"cannot invert a {m.rows}x{m.cols} matrix")
    n = m.rows
    scale = []
    work = []
    for i in range(n):
        r = m.row(i)
        s = math.lcm(*(x.denominator for x in r)) if r else 1
        scale.append(s)
        work.append([int(x * s) for x in r] + [int(i == j) for j in range(n)])
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if work[i][k] != 0), None)
        if p is None:
            raise Singular(k)
        work[k], work[p] = work[p], work[k]
        pivot_row = work[k]
        piv = pivot_row[k]
        for i in range(n):
            if i == k:
                continue
            row = work[i]
            f = row[k]
            for j in range(2 * n):
                num = piv * row[j] - f * pivot_row[j]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("inexact fraction-free division")
                row[j] = q
        prev = piv
    inv = [[Fraction(work[i][n + j], work[i][i]) * scale[j] for j in range(n)] for i in range(n)]
    if n == 0:
        return RationalMatrix(0, 0, ())
    return RationalMatrix.from_rows(inv)


def _half_degree(flavor: str, key: Key) -> int:
    if flavor == ORTHOGONAL:
        if isinstance(key, bool) or not isinstance(key, int) or key < 1:
            raise InvalidInput(f"orthogonal tables need a positive integer k, got {key!r}")
        return key
    if flavor == UNITARY:
        if not isinstance(key, str):
            raise InvalidInput(f"unitary tables need a decoration string, got {key!r}")
        d = parse_decoration(key)
        if len(d) % 2:
            raise OddGroundSet(f"odd ground set: decoration {d!r} has length {len(d)}")
        return len(d) // 2
    raise InvalidInput(f"unknown flavor {flavor!r}")


def pairing_index(flavor: str, key: Key) -> list[Partition]:
    """Canonical index of admissible pairings for a table."""
    k = _half_degree(flavor, key)
    if k > config.caps.weingarten_k:
        raise CapExceeded(f"half-degree {k} exceeds Weingarten cap {config.caps.weingarten_k}")
    if flavor == ORTHOGONAL:
        return enumerate_nc2(2 * k)
    return enumerate_nc2_decorated(key)


def gram_matrix(flavor: str, key: Key, n: int) -> RationalMatrix:
    if not isinstance(n, int) or n < 1:
        raise DimensionTooSmall(f"gram matrix needs n >= 1, got {n!r}")
    index = pairing_index(flavor, key)
    if not index:
        return RationalMatrix(0, 0, ())
    return RationalMatrix.from_rows([[n ** join_size(p, q) for q in index] for p in index])


@dataclass(frozen=True)
class WeingartenTable:
    flavor: str
    key: Key
    n: int
    index: tuple[Partition, ...]
    gram: RationalMatrix
    wg: RationalMatrix

    @property
    def k(self) -> int:
        return _half_degree(self.flavor, self.key)

    def position(self) -> dict[Partition, int]:
        return {p: i for i, p in enumerate(self.index)}

    def validate(self) -> bool:
        size = len(self.index)
        return (self.gram @ self.wg) == RationalMatrix.identity(size)


class _TableCache:
    def __init__(self):
        self.tables: dict[tuple[str, Key, int], WeingartenTable] = {}
        self._locks: dict[tuple[str, Key, int], threading.Lock] = {}
        self._guard = threading.Lock()
        self.cache_dir: Path | None = None

    def lock_for(self, key):
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def clear(self):
        with self._guard:
            self.tables.clear()
            self._locks.clear()


_cache = _TableCache()


def set_cache_dir(path: str | os.PathLike | None):
    """Enable (or with ``None`` disable) on-disk persistence of tables."""
    _cache.cache_dir = Path(path) if path is not None else None


def clear_memory_cache():
    _cache.clear()


def weingarten_table(flavor: str, key: Key, n: int) -> WeingartenTable:
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise DimensionTooSmall(f"Weingarten tables need n >= 2, got {n!r}")
    k = _half_degree(flavor, key)
    if k > config.caps.weingarten_k:
        raise CapExceeded(f"half-degree {k} exceeds Weingarten cap {config.caps.weingarten_k}")
    ck = (flavor, key, n)
    hit = _cache.tables.get(ck)
    if hit is not None:
        return hit
    with _cache.lock_for(ck):
        hit = _cache.tables.get(ck)
        if hit is not None:
            return hit
        table = None
        if _cache.cache_dir is not None:
            path = _cache.cache_dir / table_filename(flavor, key, n)
            if path.exists():
                table = load_table(path)
        if table is None:
            table = _build(flavor, key, n)
            if _cache.cache_dir is not None:
                save_table(table, _cache.cache_dir)
        _cache.tables[ck] = table
        return table


def _build(flavor: str, key: Key, n: int) -> WeingartenTable:
    index = tuple(pairing_index(flavor, key))
    gram = gram_matrix(flavor, key, n)
    try:
        wg = invert(gram)
    except Singular as exc:
        # cannot happen for n >= 2; treat as a broken invariant rather than bad input
        raise RuntimeError(f"Gram matrix unexpectedly singular for {flavor} {key} n={n}") from exc
    return WeingartenTable(flavor, key, n, index, gram, wg)


def asymptotic_deviation(flavor: str, key: Key, n: int) -> Fraction:
    """Sum over entries of |n^k W(p, q) - delta(p, q)|."""
    t = weingarten_table(flavor, key, n)
    scale = Fraction(n) ** t.k
    size = len(t.index)
    return sum(
        (abs(scale * t.wg[i, j] - (1 if i == j else 0)) for i in range(size) for j in range(size)),
        Fraction(0),
    )


# --- on-disk format -----------------------------------------------------------

def table_filename(flavor: str, key: Key, n: int) -> str:
    tag = str(key).replace("*", "s")
    return f"weingarten-{flavor}-{tag}-{n}.txt"


def dump_table(t: WeingartenTable) -> str:
    lines = [f"weingarten v1 {t.flavor} {t.key} {t.n}"]
    lines += [p.text() for p in t.index]
    for i in range(t.wg.rows):
        lines.append(" ".join(to_text(x) for x in t.wg.row(i)))
    return "\n".join(lines) + "\n"


def save_table(t: WeingartenTable, directory: str | os.PathLike) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / table_filename(t.flavor, t.key, t.n)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".txt")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dump_table(t))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def parse_table(text: str) -> WeingartenTable:
    lines = text.splitlines()
    try:
        magic, version, flavor, key_text, n_text = lines[0].split()
        if (magic, version) != ("weingarten", "v1") or flavor not in FLAVORS:
            raise ValueError("bad header")
        key: Key = int(key_text) if flavor == ORTHOGONAL else key_text
        n = int(n_text)
        index = tuple(pairing_index(flavor, key))
        size = len(index)
        if [ln.strip() for ln in lines[1:1 + size]] != [p.text() for p in index]:
            raise ValueError("pairing index differs from canonical order")
        body = " ".join(lines[1 + size:]).split()
        if len(body) != size * size:
            raise ValueError(f"expected {size * size} matrix entries, found {len(body)}")
        wg = RationalMatrix(size, size, tuple(parse_rational(tok) for tok in body))
        if n < 2:
            raise ValueError("dimension below 2")
        table = WeingartenTable(flavor, key, n, index, gram_matrix(flavor, key, n), wg)
    except (ValueError, IndexError) as exc:
        raise CacheCorrupted(f"unreadable Weingarten table: {exc}") from exc
    if not table.validate():
        raise CacheCorrupted(f"cached table {flavor} {key} n={n} fails gram * wg = identity")
    return table


def load_table(path: str | os.PathLike) -> WeingartenTable:
    path = Path(path)
    table = parse_table(path.read_text())
    if path.name != table_filename(table.flavor, table.key, table.n):
        raise CacheCorrupted(f"{path.name} does not match its header")
    return table


def validate_cache_dir(directory: str | os.PathLike) -> list[tuple[Path, str]]:
    """Validate every table file in ``directory``; returns (path, error) pairs."""
    problems = []
    for path in sorted(Path(directory).glob("weingarten-*.txt")):
        try:
            load_table(path)
        except CacheCorrupted as exc:
            problems.append((path, str(exc)))
    return problems
