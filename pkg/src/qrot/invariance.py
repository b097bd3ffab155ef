"""Verification harnesses for quantum rotatability and quantum unitary invariance.

The invariance condition is an identity inside the quantum group algebra.
Two computable surrogates are provided: its image under the Haar state ψ_n
(:func:`averaged_invariance_check`), and the symbolic contraction used to
prove that free semicircular families are invariant
(:func:`interval_reduction_check`).  Neither is the full operator identity.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cumulants import MomentOracle, as_word
from .errors import DimensionTooSmall, InvalidInput, NotNonCrossing
from .haar import dominated, table_for
from .models import GeneratorRowOracle, generator_row_moment
from .partitions import PLAIN, STAR, Partition, enumerate_all_partitions, interval_block, is_noncrossing
from .rational import to_text
from .weingarten import ORTHOGONAL, UNITARY, Key, _half_degree, asymptotic_deviation


@dataclass
class Failure:
    cols: tuple[int, ...]
    decoration: str
    lhs: Fraction
    rhs: Fraction


@dataclass
class InvarianceReport:
    model: str
    flavor: str
    n: int
    max_degree: int
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "FAIL" if self.failures else "PASS"

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        fails = []
        for f in self.failures:
            item = {"cols": list(f.cols)}
            if self.flavor == UNITARY:
                item["decoration"] = f.decoration
            item["lhs"] = to_text(f.lhs)
            item["rhs"] = to_text(f.rhs)
            fails.append(item)
        return {
            "model": self.model,
            "flavor": self.flavor,
            "n": self.n,
            "max_degree": self.max_degree,
            "checked": self.checked,
            "failures": fails,
            "verdict": self.verdict,
        }


def _ker_representatives(m: int, n: int) -> list[tuple[int, ...]]:
    """One word per partition of {1..m} with at most n blocks (labels = block number)."""
    return [tuple(x + 1 for x in p.rgs) for p in enumerate_all_partitions(m) if len(p) <= n]


def _ker_key(word: Sequence[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen) + 1) for x in word)


def averaged_invariance_check(
    oracle: MomentOracle, flavor: str, n: int, max_degree: int, dedupe: bool = True
) -> InvarianceReport:
    """Check sum_i  oracle(x_i) psi_n(u_{i j}) = oracle(x_j) for every column word j.

    Both sides are compared exactly.  The left side depends on the column word
    only through ker(j), so with ``dedupe`` one representative per kernel is
    checked; this is sound whenever the oracle is exchangeable (every model in
    :mod:`qrot.models` is).  Pass ``dedupe=False`` to check all n^m words.
    """
    if flavor not in (ORTHOGONAL, UNITARY):
        raise InvalidInput(f"unknown flavor {flavor!r}")
    if n < 2:
        raise DimensionTooSmall(f"invariance check needs n >= 2, got {n}")
    if max_degree > oracle.degree_cap:
        raise InvalidInput(f"max_degree {max_degree} exceeds the oracle's degree cap {oracle.degree_cap}")
    report = InvarianceReport(oracle.describe(), flavor, n, max_degree)
    letters = range(1, n + 1)
    decorations = ("1", "*") if flavor == UNITARY else ("1",)
    for m in range(1, max_degree + 1):
        col_words = _ker_representatives(m, n) if dedupe else list(itertools.product(letters, repeat=m))
        for d in map("".join, itertools.product(decorations, repeat=m)):
            if m % 2:
                # psi vanishes on odd monomials, so the left side is 0
                row_sums = None
                index = ()
            else:
                index = table_for(flavor, n, d).index
                row_sums = defaultdict(Fraction)
                if index:
                    for rows in itertools.product(letters, repeat=m):
                        row_sums[_ker_key(rows)] += oracle.eval(as_word(rows, d))
            for cols in sorted(col_words):
                lhs = _averaged_lhs(flavor, n, d, index, row_sums, cols)
                rhs = oracle.eval(as_word(cols, d))
                report.checked += 1
                if lhs != rhs:
                    report.failures.append(Failure(tuple(cols), d, lhs, rhs))
    report.failures.sort(key=lambda f: (len(f.cols), f.cols, f.decoration))
    return report


def _averaged_lhs(flavor, n, d, index, row_sums, cols) -> Fraction:
    if not row_sums or not index:
        return Fraction(0)
    t = table_for(flavor, n, d)
    cols_ok = dominated(index, cols)
    if not cols_ok:
        return Fraction(0)
    total = Fraction(0)
    for rep, weight in row_sums.items():
        if not weight:
            continue
        rows_ok = dominated(index, rep)
        for a in rows_ok:
            for b in cols_ok:
                total += weight * t.wg[a, b]
    return total


def interval_reduction_check(pi: Partition, cols: Sequence[int], n: int, d: str | None = None) -> bool:
    """Contract sum_{i: pi <= ker i} u_{i1 j1} ... u_{i2k j2k} one interval pair at a time.

    Each contraction of an adjacent pair {l, l+1} applies
    sum_i u_{i j_l} u_{i j_l+1} = delta(j_l, j_l+1).  The sum reduces to 1
    exactly when pi <= ker(cols); otherwise some delta vanishes and the
    function returns False.  With a decoration ``d`` the unitary relations
    are used, which requires every block of pi to join a plain and a starred
    position.
    """
    cols = tuple(cols)
    if pi.k != len(cols):
        raise InvalidInput(f"pairing on {pi.k} points, column word of length {len(cols)}")
    if not pi.is_pairing():
        raise InvalidInput(f"{pi} is not a pair partition")
    if not is_noncrossing(pi):
        raise NotNonCrossing(f"{pi} is not non-crossing")
    if n < 2 or any(not 1 <= j <= n for j in cols):
        raise InvalidInput(f"column indices must lie in 1..{n} with n >= 2")
    if d is not None:
        if len(d) != pi.k:
            raise InvalidInput("decoration length differs from the pairing")
        if any(d[a - 1] == d[b - 1] for a, b in pi.blocks):
            raise InvalidInput(f"{pi} is not admissible for decoration {d!r}")
    positions = list(range(1, pi.k + 1))
    scalar = 1
    while positions:
        block = interval_block(pi, positions)
        a, b = block
        if positions.index(b) != positions.index(a) + 1:
            raise AssertionError("interval pair is not adjacent")
        scalar *= int(cols[a - 1] == cols[b - 1])
        if scalar == 0:
            return False
        positions.remove(a)
        positions.remove(b)
    return scalar == 1


@dataclass
class BoundSample:
    n: int
    delta: Fraction
    n_delta: Fraction


@dataclass
class BoundScan:
    flavor: str
    key: Key
    samples: list[BoundSample]

    @property
    def d_estimate(self) -> Fraction:
        return max((s.n_delta for s in self.samples), default=Fraction(0))

    @property
    def argmax_n(self) -> int:
        best = self.d_estimate
        return next(s.n for s in self.samples if s.n_delta == best)

    @property
    def is_lower_bound(self) -> bool:
        # the maximum over a finite range never certifies the sup over all n
        return True

    def non_increasing(self) -> bool:
        vals = [s.n_delta for s in self.samples]
        return all(a >= b for a, b in zip(vals, vals[1:]))

    def to_json(self) -> dict:
        out = {"flavor": self.flavor, "k": _half_degree(self.flavor, self.key)}
        if self.flavor == UNITARY:
            out["decoration"] = self.key
        out.update(
            samples=[{"n": s.n, "delta": to_text(s.delta), "n_delta": to_text(s.n_delta)} for s in self.samples],
            d_estimate=to_text(self.d_estimate),
            argmax_n=self.argmax_n,
            is_lower_bound=self.is_lower_bound,
        )
        return out


def bound_scan(flavor: str, key: Key, n_min: int, n_max: int) -> BoundScan:
    """n * Delta(n) over a range of n; the maximum is a lower bound for the sup over all n."""
    if not 2 <= n_min <= n_max:
        raise InvalidInput(f"need 2 <= n_min <= n_max, got {n_min}, {n_max}")
    samples = []
    for n in range(n_min, n_max + 1):
        delta = asymptotic_deviation(flavor, key, n)
        samples.append(BoundSample(n, delta, n * delta))
    return BoundScan(flavor, key, samples)


@dataclass
class CounterexampleReport:
    n: int
    second_moment: Fraction
    sum_squares_squared: Fraction
    fourth_moment: Fraction
    free_prediction: Fraction
    invariance: InvarianceReport

    @property
    def second_moment_ok(self) -> bool:
        return self.second_moment == Fraction(1, self.n)

    @property
    def sum_ok(self) -> bool:
        return self.sum_squares_squared == 1

    @property
    def verdict(self) -> str:
        return "NOT-FREE" if self.fourth_moment != self.free_prediction else "CONSISTENT-WITH-FREE"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "psi_x1_2": to_text(self.second_moment),
            "psi_x1_2_is_1_over_n": self.second_moment_ok,
            "sum_psi_xi2_xj2": to_text(self.sum_squares_squared),
            "sum_is_1": self.sum_ok,
            "psi_x1_4": to_text(self.fourth_moment),
            "free_prediction": to_text(self.free_prediction),
            "verdict": self.verdict,
            "rotatable": self.invariance.to_json(),
        }


def counterexample_report(n: int, invariance_degree: int = 4) -> CounterexampleReport:
    """The row x_j = u_{1j} of A_o(n): quantum rotatable, yet not free with equal laws."""
    if n < 2:
        raise DimensionTooSmall(f"counterexample needs n >= 2, got {n}")
    row = lambda *labels: generator_row_moment(ORTHOGONAL, n, labels)
    second = row(1, 1)
    total = sum((row(i, i, j, j) for i in range(1, n + 1) for j in range(1, n + 1)), Fraction(0))
    fourth = row(1, 1, 1, 1)
    prediction = Fraction(1, n * n)
    inv = averaged_invariance_check(GeneratorRowOracle(ORTHOGONAL, n), ORTHOGONAL, n, invariance_degree)
    return CounterexampleReport(n, second, total, fourth, prediction, inv)
