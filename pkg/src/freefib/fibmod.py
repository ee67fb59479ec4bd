"""Fibonacci-like sequences modulo n.

Everything here works on residue pairs ``(a, b)`` under the invertible map
``(a, b) -> (b, a + b) mod n``. The full orbit decomposition costs Θ(n²)
time and memory, so it is guarded by ``cap`` (default 10⁴).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd

from .errors import DivergenceError, ResourceBoundError, WrongDomainError

DEFAULT_CAP = 10**4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def entry_point(m: int) -> int:
    """Least ``k >= 1`` with ``m | F_k``."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return 1
    a, b, k = 0, 1, 1
    while b:
        a, b = b, (a + b) % m
        k += 1
    return k


@lru_cache(maxsize=None)
def pisano_period(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    a, b, k = 1, 1, 1
    while (a, b) != (0, 1):
        a, b = b, (a + b) % n
        k += 1
    return k


@dataclass(frozen=True)
class Orbit:
    pairs: tuple[tuple[int, int], ...]

    @property
    def length(self) -> int:
        return len(self.pairs)

    @property
    def contains_zero(self) -> bool:
        return any(a == 0 for a, _ in self.pairs)

    def segments(self) -> list[int]:
        """Lengths of the pieces between consecutive zero terms.

        A zero-containing orbit is cut before every pair ``(0, x)``; this is
        how a census of "lines ending in 0" counts it. Zero-free orbits come
        back whole.
        """
        zeros = [i for i, (a, _) in enumerate(self.pairs) if a == 0]
        if not zeros:
            return [self.length]
        bounds = zeros + [zeros[0] + self.length]
        return [b - a for a, b in zip(bounds, bounds[1:])]


@dataclass(frozen=True)
class OrbitDecomposition:
    modulus: int
    cycles: tuple[Orbit, ...]

    @property
    def cycle_count(self) -> int:
        return len(self.cycles)

    @property
    def distinct_lengths(self) -> int:
        return len({c.length for c in self.cycles})

    def census(self) -> list[int]:
        """Sorted segment lengths over all orbits; see :meth:`Orbit.segments`."""
        return sorted(s for c in self.cycles for s in c.segments())


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ResourceBoundError(f"n={n} exceeds the orbit cap {cap}")


@lru_cache(maxsize=256)
def _decompose(n: int) -> OrbitDecomposition:
    seen = bytearray(n * n)
    cycles = []
    for start in range(n * n):
        if seen[start]:
            continue
        a, b = divmod(start, n)
        pairs = []
        while not seen[a * n + b]:
            seen[a * n + b] = 1
            pairs.append((a, b))
            a, b = b, (a + b) % n
        cycles.append(Orbit(tuple(pairs)))
    return OrbitDecomposition(n, tuple(cycles))


def orbit_decomposition(n: int, cap: int = DEFAULT_CAP) -> OrbitDecomposition:
    """Partition all n² residue pairs into orbits, in order of their least pair."""
    _check_cap(n, cap)
    return _decompose(n)


def count_zero_pairs(n: int, cap: int = DEFAULT_CAP) -> tuple[int, int]:
    """``(with_zero, zero_free)``; the pair (0, 0) counts as containing zero."""
    dec = orbit_decomposition(n, cap)
    free = sum(c.length for c in dec.cycles if not c.contains_zero)
    return n * n - free, free


@dataclass(frozen=True)
class ClassificationRecord:
    n: int
    omni_factor: bool
    lucas_witness: bool
    witness_start: tuple[int, int] | None


def lucas_divides(n: int) -> bool:
    """Whether some Lucas number is divisible by ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    a, b = 2 % n, 1 % n
    for _ in range(pisano_period(n)):
        if a == 0:
            return True
        a, b = b, (a + b) % n
    return False


def is_omni_factor(n: int, cap: int = DEFAULT_CAP) -> ClassificationRecord:
    """Does every Fibonacci-like sequence contain a multiple of ``n``?"""
    dec = orbit_decomposition(n, cap)
    free = [c for c in dec.cycles if not c.contains_zero]
    witness = min(min(c.pairs) for c in free) if free else None
    return ClassificationRecord(n, not free, not lucas_divides(n), witness)


def prime_omni_test(p: int) -> bool:
    if not is_prime(p):
        raise WrongDomainError(f"{p} is not prime")
    return entry_point(p) == p + 1


def division_free_successors(n: int, cap: int = DEFAULT_CAP) -> dict[int, set[int]]:
    """Map each residue ``r`` to the residues that can follow it inside a
    zero-free orbit. Empty for omni-factors."""
    out: dict[int, set[int]] = {}
    for c in orbit_decomposition(n, cap).cycles:
        if c.contains_zero:
            continue
        for a, b in c.pairs:
            out.setdefault(a, set()).add(b)
    return out


def avg_steps_between_divisions(n: int, cap: int = DEFAULT_CAP) -> Fraction:
    """Mean stretch length between divisions, as an exact fraction.

    A state is ``(u, r)``: ``u`` is the term before the division (coprime to
    ``n``) and ``r`` the non-zero remainder produced by it. The stretch counts
    ``r`` and the terms after it, up to but excluding the next multiple of ``n``.
    States are weighted uniformly.
    """
    _check_cap(n, cap)
    if n < 2:
        raise ValueError("n must be >= 2")
    # steps_to_zero[a*n+b]: terms from b onwards before the first zero term
    steps = [-1] * (n * n)
    for a in range(n):
        steps[a * n] = 0
    for c in orbit_decomposition(n, cap).cycles:
        if not c.contains_zero:
            continue
        # walk the orbit backwards from each zero
        L = c.length
        start = next(i for i, (_, b) in enumerate(c.pairs) if b == 0)
        dist = 0
        for j in range(L):
            a, b = c.pairs[(start - j) % L]
            if b == 0:
                dist = 0
            else:
                dist += 1
            steps[a * n + b] = dist
    total = count = 0
    for u in range(1, n):
        if gcd(u, n) != 1:
            continue
        for r in range(1, n):
            s = steps[u * n + r]
            if s < 0:
                raise DivergenceError(
                    f"({u}, {r}) mod {n} never reaches 0; {n} is not an omni-factor"
                )
            total += s
            count += 1
    return Fraction(total, count)


def _round_half_away(x: Fraction) -> int:
    q, r = divmod(abs(x.numerator), x.denominator)
    if 2 * r >= x.denominator:
        q += 1
    return q if x >= 0 else -q


def cycle_length_moments(n: int, cap: int = DEFAULT_CAP) -> tuple[int, int]:
    """``(sum of squared segment lengths, round(that / 2n²))``."""
    census = orbit_decomposition(n, cap).census()
    sq = sum(x * x for x in census)
    return sq, _round_half_away(Fraction(sq, 2 * n * n))


def cycle_length_divisor(n: int) -> int:
    """gcd of ``π(p)`` over the prime factors ``p`` of ``n - 1``."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return reduce(gcd, (pisano_period(p) for p in prime_factors(n - 1)))


def cycle_length_multiple(n: int) -> int:
    """A number every n-free cycle length is divisible by.

    For each prime ``p | n - 1`` a primitive cycle reduces mod ``p`` to a
    non-trivial orbit of the Fibonacci pair map, so its length is a multiple
    of the gcd of those orbit lengths. That gcd is ``π(p)`` unless 5 is a
    square mod ``p`` (e.g. ``p = 11`` has orbits of length 5 and 10).
    The per-prime values are combined with lcm.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    out = 1
    for p in prime_factors(n - 1):
        lengths = {c.length for c in _decompose(p).cycles if c.pairs[0] != (0, 0)}
        g = reduce(gcd, lengths)
        out = out * g // gcd(out, g)
    return out
