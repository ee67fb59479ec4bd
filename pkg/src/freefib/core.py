"""Exact n-free Fibonacci sequences.

An n-free Fibonacci sequence starts with two integers and continues by
adding the previous two terms and dividing out the largest power of ``n``
that divides the sum::

    >>> generate(0, 1, 4, 10).terms
    [0, 1, 1, 2, 3, 5, 2, 7, 9, 1]

Terms are Python ints, so there is no overflow path. Runs are indexed from
1 in prose (``a_1, a_2, ...``) and from 0 in the stored lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from functools import reduce
from typing import Iterator

from .errors import DegenerateInputError, WrongShapeError

DEFAULT_BUDGET = 10**6


def _check_modulus(n: int) -> None:
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")


def strip_powers(x: int, n: int) -> tuple[int, int]:
    """Split ``x`` into ``(reduced, power)`` with ``x == reduced * n**power``.

    ``reduced`` is not divisible by ``n``. Negative ``x`` keeps its sign in
    ``reduced``; zero has no such decomposition.
    """
    _check_modulus(n)
    if x == 0:
        raise DegenerateInputError("cannot strip powers from 0")
    power = 0
    while x % n == 0:
        x //= n
        power += 1
    return x, power


@dataclass(frozen=True)
class StepRecord:
    term: int
    power: int
    residue: int


def next_state(pair: tuple[int, int], n: int) -> tuple[tuple[int, int], StepRecord]:
    a, b = pair
    if a == 0 and b == 0:
        raise DegenerateInputError("the pair (0, 0) generates the zero sequence")
    c, power = strip_powers(a + b, n)
    return (b, c), StepRecord(c, power, c % n)


def iterate(a1: int, a2: int, n: int) -> Iterator[StepRecord]:
    """Yield the records of the sequence forever, starting with ``a1`` and ``a2``.

    Works for signed starts as well; the two seed records have power 0.
    """
    _check_modulus(n)
    if a1 == 0 and a2 == 0:
        raise DegenerateInputError("start (0, 0) generates the zero sequence")
    yield StepRecord(a1, 0, a1 % n)
    yield StepRecord(a2, 0, a2 % n)
    pair = (a1, a2)
    while True:
        pair, rec = next_state(pair, n)
        yield rec


@dataclass(frozen=True)
class SequenceRun:
    modulus: int
    start: tuple[int, int]
    steps: tuple[StepRecord, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def terms(self) -> list[int]:
        return [s.term for s in self.steps]

    @property
    def powers(self) -> list[int]:
        return [s.power for s in self.steps]

    @property
    def residues(self) -> list[int]:
        return [s.residue for s in self.steps]

    @property
    def signature(self) -> list[int | None]:
        """Divisor used at each step; ``None`` for the two seed positions."""
        return [None, None][: len(self.steps)] + [
            self.modulus**s.power for s in self.steps[2:]
        ]


def _run_from(a1: int, a2: int, n: int, count: int) -> SequenceRun:
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    it = iterate(a1, a2, n)
    steps = tuple(next(it) for _ in range(count))
    return SequenceRun(n, (a1, a2), steps)


def generate(a1: int, a2: int, n: int, count: int) -> SequenceRun:
    """First ``count`` terms of the n-free sequence starting ``a1, a2``."""
    if a1 < 0 or a2 < 0:
        raise ValueError("starting terms must be non-negative")
    return _run_from(a1, a2, n, count)


def replay(a1: int, a2: int, n: int, count: int) -> SequenceRun:
    """Like :func:`generate` but accepts negative starting terms.

    Backward constructions produce such starts before positivity is restored.
    """
    return _run_from(a1, a2, n, count)


@dataclass(frozen=True)
class CycleReport:
    preperiod: int
    period: int
    cycle_terms: list[int]
    content_gcd: int

    @property
    def primitive(self) -> list[int]:
        return [t // self.content_gcd for t in self.cycle_terms]


@dataclass(frozen=True)
class Exhausted:
    """No repeated pair was seen within ``budget`` steps.

    This says nothing about whether the sequence eventually cycles.
    """

    budget: int
    last_pair: tuple[int, int]
    steps: int = field(default=0)


def _pair_at(a1: int, a2: int, n: int, index: int) -> tuple[int, int]:
    pair = (a1, a2)
    for _ in range(index):
        pair, _ = next_state(pair, n)
    return pair


def detect_cycle(a1: int, a2: int, n: int, budget: int = DEFAULT_BUDGET) -> CycleReport | Exhausted:
    """Find the first exact repetition of a consecutive-term pair.

    Pair ``k`` is ``(a_{k+1}, a_{k+2})``; the report's ``preperiod`` is the
    index of the first pair that belongs to the cycle, so it also counts the
    terms before the cycle. At most ``budget`` steps are taken.

    Only hashes of past pairs are kept in memory, since growing runs reach
    thousands of digits; a hash hit is confirmed by replaying from the start.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if a1 < 0 or a2 < 0:
        raise ValueError("starting terms must be non-negative")
    _check_modulus(n)
    pair = (a1, a2)
    seen: dict[int, list[int]] = {hash(pair): [0]}
    for step in range(1, budget + 1):
        pair, _ = next_state(pair, n)
        h = hash(pair)
        for first in seen.get(h, ()):
            if _pair_at(a1, a2, n, first) == pair:
                period = step - first
                terms = generate(a1, a2, n, max(2, first + period)).terms[first : first + period]
                return CycleReport(first, period, terms, reduce(gcd, terms))
        seen.setdefault(h, []).append(step)
    return Exhausted(budget, pair, budget)


def primitive_cycle(cycle_terms: list[int]) -> tuple[list[int], int]:
    if not cycle_terms:
        raise DegenerateInputError("empty cycle")
    g = reduce(gcd, cycle_terms)
    return [t // g for t in cycle_terms], g


def verify_three_cycle_form(cycle_terms: list[int]) -> bool:
    """Check that a 3-free cycle of period 3 reads ``k, k, 2k`` up to rotation,
    with ``3 ∤ k`` and ``k`` equal to the gcd of the cycle."""
    if len(cycle_terms) != 3:
        raise WrongShapeError(f"expected a cycle of period 3, got {len(cycle_terms)}")
    _, g = primitive_cycle(cycle_terms)
    for r in range(3):
        x, y, z = cycle_terms[r:] + cycle_terms[:r]
        if x == y and z == 2 * x and x % 3 != 0:
            return g == x
    return False


# Structural checks on raw runs.

def max_gap_between_divisions(run: SequenceRun) -> int | None:
    """Longest run of non-dividing steps between two dividing steps.

    Only divisions from index 4 on are considered: before that the pair
    may still contain a seed term that is a multiple of ``n``.
    ``None`` if there are fewer than two such divisions.
    """
    idx = [k for k, p in enumerate(run.powers) if k >= 3 and p > 0]
    if len(idx) < 2:
        return None
    return max(b - a - 1 for a, b in zip(idx, idx[1:]))


def two_evens_after_first_odd(run: SequenceRun) -> bool:
    terms = run.terms
    try:
        first = next(k for k, t in enumerate(terms) if t % 2)
    except StopIteration:
        return False
    return any(terms[k] % 2 == 0 and terms[k + 1] % 2 == 0 for k in range(first, len(terms) - 1))


def scale(run: SequenceRun, m: int) -> SequenceRun:
    """Regenerate ``run`` from its start multiplied by ``m``."""
    return generate(run.start[0] * m, run.start[1] * m, run.modulus, len(run))
