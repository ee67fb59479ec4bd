"""Generators for the OEIS sequences that show up around free Fibonacci
sequences, and b-file export.

Offsets follow the encyclopedia's conventions.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator

from . import fibmod
from .construct import build_division_rich, two_free_predecessors
from .core import iterate
from .errors import UnsupportedSequenceError


def _naturals(start=1):
    return itertools.count(start)


def _primes() -> Iterator[int]:
    return (p for p in itertools.count(2) if fibmod.is_prime(p))


def _fibonacci_like(a, b):
    while True:
        yield a
        a, b = b, a + b


def _n_free(n):
    return (rec.term for rec in iterate(0, 1, n))


def _where(pred, start=1):
    return (n for n in _naturals(start) if pred(n))


def _omni(n):
    return fibmod.is_omni_factor(n).omni_factor


def _prefix(gen: Iterator[int], count: int) -> list[int]:
    return list(itertools.islice(gen, count))


def _division_rich(count):
    if count <= 0:
        return []
    terms = build_division_rich(3, max(count, 2), (1, 1)).terms[::-1]
    return terms[:count]


@dataclass(frozen=True)
class SequenceDescriptor:
    id: str
    offset: int
    name: str
    terms: Callable[[int], list[int]]


def _stream(offset, name, make):
    return offset, name, lambda count: _prefix(make(), count)


_TABLE = {
    "A000032": _stream(0, "Lucas numbers", lambda: _fibonacci_like(2, 1)),
    "A000045": _stream(0, "Fibonacci numbers", lambda: _fibonacci_like(0, 1)),
    "A000057": _stream(1, "Primes dividing all Fibonacci-like sequences",
                       lambda: (p for p in _primes() if fibmod.prime_omni_test(p))),
    "A000285": _stream(0, "Fibonacci-like sequence starting 1, 4", lambda: _fibonacci_like(1, 4)),
    "A001175": _stream(1, "Pisano periods", lambda: map(fibmod.pisano_period, _naturals())),
    "A001177": _stream(1, "Fibonacci entry points", lambda: map(fibmod.entry_point, _naturals())),
    "A001602": _stream(1, "Entry points of primes", lambda: map(fibmod.entry_point, _primes())),
    "A015134": _stream(1, "Number of orbits of the Fibonacci pair map mod n",
                       lambda: (fibmod.orbit_decomposition(n).cycle_count for n in _naturals())),
    "A015135": _stream(1, "Number of distinct orbit lengths mod n",
                       lambda: (fibmod.orbit_decomposition(n).distinct_lengths for n in _naturals())),
    "A060305": _stream(1, "Pisano periods of primes", lambda: map(fibmod.pisano_period, _primes())),
    "A064362": _stream(1, "No Lucas number is a multiple of n",
                       lambda: _where(lambda n: not fibmod.lucas_divides(n))),
    "A064414": _stream(1, "Fibonacci omni-factors", lambda: _where(_omni)),
    "A065156": _stream(1, "Divisors of some Lucas number", lambda: _where(fibmod.lucas_divides)),
    "A078414": _stream(0, "7-free Fibonacci numbers", lambda: _n_free(7)),
    "A214684": _stream(0, "5-free Fibonacci numbers", lambda: _n_free(5)),
    "A224382": _stream(0, "4-free Fibonacci numbers", lambda: _n_free(4)),
    "A230359": _stream(1, "Primes that are not omni-factors",
                       lambda: (p for p in _primes() if not fibmod.prime_omni_test(p))),
    "A230457": _stream(1, "Non-omni-factors", lambda: _where(lambda n: not _omni(n))),
    "A232357": _stream(1, "Residue pairs mod n whose sequence avoids 0",
                       lambda: (fibmod.count_zero_pairs(n)[1] for n in _naturals())),
    "A232656": _stream(1, "Residue pairs mod n whose sequence contains 0",
                       lambda: (fibmod.count_zero_pairs(n)[0] for n in _naturals())),
    "A232658": _stream(1, "Non-omni-factors dividing some Lucas number",
                       lambda: _where(lambda n: not _omni(n) and fibmod.lucas_divides(n))),
    "A232666": _stream(0, "6-free Fibonacci numbers", lambda: _n_free(6)),
    "A233246": _stream(1, "Sum of squared cycle lengths mod n",
                       lambda: (fibmod.cycle_length_moments(n)[0] for n in _naturals())),
    "A233248": _stream(1, "Rounded half mean cycle length mod n",
                       lambda: (fibmod.cycle_length_moments(n)[1] for n in _naturals())),
    "A233525": (1, "3-free division-rich run read backwards", _division_rich),
    "A233526": (1, "Minimal 2-free run read backwards from 3, 1",
                lambda count: two_free_predecessors(3, 1, count) if count > 0 else []),
}

SEQUENCES = {k: SequenceDescriptor(k, *v) for k, v in _TABLE.items()}


def descriptor(seq_id: str) -> SequenceDescriptor:
    try:
        return SEQUENCES[seq_id.upper()]
    except KeyError:
        raise UnsupportedSequenceError(f"unsupported sequence {seq_id!r}") from None


def emit(seq_id: str, count: int) -> list[int]:
    if count < 0:
        raise ValueError("count must be non-negative")
    return descriptor(seq_id).terms(count)


def export_bfile(seq_id: str, count: int, destination) -> Path:
    """Write ``count`` terms as ``index value`` lines starting at the offset."""
    desc = descriptor(seq_id)
    path = Path(destination)
    old = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        lines = "".join(f"{desc.offset + i} {v}\n" for i, v in enumerate(desc.terms(count)))
    finally:
        sys.set_int_max_str_digits(old)
    try:
        path.write_text(lines)
    except OSError as e:
        raise OSError(f"cannot write b-file {path}: {e.strerror or e}") from e
    return path


def read_bfile(source) -> list[tuple[int, int]]:
    """Parse a b-file; comment and blank lines are skipped."""
    out = []
    old = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        for line in Path(source).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i, v = line.split()
            out.append((int(i), int(v)))
    finally:
        sys.set_int_max_str_digits(old)
    return out
