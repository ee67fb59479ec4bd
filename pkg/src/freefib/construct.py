"""Backward construction of n-free sequences with prescribed divisions.

Running the recurrence backwards, ``a_{k-2} = d_k * a_k - a_{k-1}`` where
``d_k`` is the divisor used at step ``k``. Picking the divisors (and hence
the remainders) lets us build runs that divide at every step, at every other
step, or in any other legal pattern. Results are stored terminal-last, so
``terms[-1]`` is the pair the construction started from.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import SequenceRun, generate, replay
from .errors import AdjustmentExponentError, LegalityError, WrongDomainError

UNKNOWN = None


def format_signature(signature) -> str:
    return ", ".join("*" if d is None else str(d) for d in signature)


def signature_of(run: SequenceRun) -> list[int | None]:
    return run.signature


def _is_power_of(d: int, n: int) -> bool:
    if d < 1:
        return False
    while d % n == 0:
        d //= n
    return d == 1


@dataclass(frozen=True)
class RemainderPrescription:
    """Remainders mod ``modulus`` together with a matching signature.

    ``signature`` uses ``None`` for the first two (unknown) entries and exact
    powers of the modulus elsewhere.
    """

    modulus: int
    remainders: tuple[int, ...]
    signature: tuple[int | None, ...]

    @classmethod
    def from_powers(cls, n: int, remainders, powers) -> "RemainderPrescription":
        """Build from a list of exponents; the first two exponents are ignored."""
        sig = [None, None] + [n**p for p in list(powers)[2:]]
        return cls(n, tuple(remainders), tuple(sig[: len(remainders)]))

    def check(self) -> None:
        """Raise :class:`LegalityError` naming the first bad (1-based) index."""
        n, rs, sig = self.modulus, self.remainders, self.signature
        if len(rs) != len(sig):
            raise LegalityError(0, "remainders and signature differ in length")
        if len(rs) < 2:
            raise LegalityError(0, "need at least two remainders")
        for k, r in enumerate(rs, start=1):
            if not 0 <= r < n:
                raise LegalityError(k, f"remainder {r} outside [0, {n})")
        for k in range(2, len(rs)):
            d = sig[k]
            if d is None or not _is_power_of(d, n):
                raise LegalityError(k + 1, f"signature entry {d!r} is not a power of {n}")
            if rs[k] == 0:
                raise LegalityError(k + 1, "remainder 0 after the seed positions")
            s = (rs[k - 2] + rs[k - 1]) % n
            if d == 1:
                if s == 0:
                    raise LegalityError(k + 1, "sum of previous remainders is 0 but no division")
                if s != rs[k]:
                    raise LegalityError(k + 1, f"expected remainder {s}, got {rs[k]}")
            elif s != 0:
                raise LegalityError(k + 1, f"division by {d} but previous remainders sum to {s}")


def _smallest_power_above(n: int, base: int, bound: int, min_power: int) -> int:
    """Least ``n**i`` with ``i >= min_power`` and ``n**i * base > bound``."""
    d = n**min_power
    while d * base <= bound:
        d *= n
    return d


def build_division_rich(n: int, length: int, terminal_pair: tuple[int, int] = (1, 1)) -> SequenceRun:
    """A run of ``length`` terms that divides at every step from index 3 on.

    Each backward step uses the smallest positive power keeping the new
    term positive. From ``(1, 1)`` with ``n=3`` this gives
    ``49, 32, 1, 11, 4, 5, 1, 2, 1, 1``.
    """
    if length < 2:
        raise ValueError("length must be >= 2")
    x, y = terminal_pair
    if x <= 0 or y <= 0 or x % n == 0 or y % n == 0:
        raise WrongDomainError("terminal pair must be positive and not divisible by n")
    terms = [y, x]  # reversed
    while len(terms) < length:
        prev, last = terms[-1], terms[-2]
        d = _smallest_power_above(n, last, prev, 1)
        terms.append(d * last - prev)
    terms.reverse()
    return generate(terms[0], terms[1], n, length)


def build_2free_predecessor(a1: int, a2: int) -> int:
    """Odd ``a0`` with ``a0, a1, a2`` a valid 2-free run, using the least power of 2."""
    if a1 <= 0 or a2 <= 0 or a1 % 2 == 0 or a2 % 2 == 0:
        raise WrongDomainError("both terms must be odd and positive")
    return _smallest_power_above(2, a2, a1, 1) * a2 - a1


def two_free_predecessors(a1: int, a2: int, count: int) -> list[int]:
    """``a2, a1, a0, a_-1, ...``: the run read from the end, extended backwards."""
    out = [a2, a1][:count]
    while len(out) < count:
        out.append(build_2free_predecessor(out[-1], out[-2]))
    return out


def build_from_prescription(p: RemainderPrescription, terminal_pair: tuple[int, int]) -> list[int]:
    """Integers (possibly negative) realising ``p`` when replayed forward."""
    p.check()
    n = p.modulus
    x, y = terminal_pair
    if x % n != p.remainders[-2] or y % n != p.remainders[-1]:
        raise WrongDomainError("terminal pair residues do not match the last two remainders")
    terms = [y, x]
    for d in reversed(p.signature[2:]):
        terms.append(d * terms[-2] - terms[-1])
    terms.reverse()
    return terms[len(terms) - len(p.remainders):]


def adjust_positive(raw: list[int], n: int, m: int) -> SequenceRun:
    """Shift the first two raw terms by multiples of ``n**m`` to make the run positive.

    Valid only while the product of divisors used by ``raw`` stays below
    ``n**m``; the forward signature and remainders are then unchanged.
    """
    if len(raw) < 2:
        raise ValueError("need at least two terms")
    used = sum(replay(raw[0], raw[1], n, len(raw)).powers)
    if used >= m:
        raise AdjustmentExponentError(
            f"divisors multiply to {n}^{used}, which is not below {n}^{m}"
        )
    step = n**m
    b1 = raw[0] + max(0, -(-(1 - raw[0]) // step)) * step
    b2 = raw[1] + max(0, -(-(1 - raw[1]) // step)) * step
    return generate(b1, b2, n, len(raw))
