import random

import pytest

from freefib.construct import (
    RemainderPrescription,
    adjust_positive,
    build_2free_predecessor,
    build_division_rich,
    build_from_prescription,
    format_signature,
    signature_of,
    two_free_predecessors,
)
from freefib.core import generate, replay
from freefib.errors import AdjustmentExponentError, LegalityError


def random_prescription(rng, n, length):
    """A legal prescription built by walking the remainder rule forward."""
    rs = [rng.randrange(n), rng.randrange(1, n)]
    powers = [0, 0]
    for _ in range(length - 2):
        s = (rs[-2] + rs[-1]) % n
        if s:
            rs.append(s)
            powers.append(0)
        else:
            rs.append(rng.randrange(1, n))
            powers.append(rng.randint(1, 3))
    return RemainderPrescription.from_powers(n, rs, powers)


def terminal_for(rng, p):
    n = p.modulus
    return (p.remainders[-2] + n * rng.randint(1, 50), p.remainders[-1] + n * rng.randint(0, 50))


def fuzz_corpus(count=500, seed=11):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 9)
        p = random_prescription(rng, n, rng.randint(3, 25))
        out.append((p, terminal_for(rng, p)))
    return out


def test_division_rich_example():
    run = build_division_rich(3, 10, (1, 1))
    assert run.terms == [49, 32, 1, 11, 4, 5, 1, 2, 1, 1]
    assert all(p >= 1 for p in run.powers[2:])
    assert build_division_rich(3, 4, (1, 1)).terms == [1, 2, 1, 1]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
def test_division_rich_round_trip(n):
    run = build_division_rich(n, 25, (1, 1))
    again = generate(run.terms[0], run.terms[1], n, 25)
    assert again == run
    assert all(p >= 1 for p in run.powers[2:])
    assert all(t > 0 for t in run.terms)


def test_division_rich_uses_smallest_power():
    t = build_division_rich(3, 20, (2, 1)).terms
    for k in range(2, len(t)):
        d = (t[k - 2] + t[k - 1]) // t[k]
        # one power less would not keep the earlier term positive
        assert d == 3 or (d // 3) * t[k] <= t[k - 1]


def test_2free_predecessor():
    assert build_2free_predecessor(3, 1) == 1
    assert build_2free_predecessor(1, 3) == 5
    a0 = build_2free_predecessor(5, 1)
    assert a0 == 3
    assert generate(a0, 5, 2, 3).terms == [3, 5, 1]


def test_2free_predecessor_chain():
    assert two_free_predecessors(3, 1, 9) == [1, 3, 1, 5, 3, 7, 5, 9, 1]
    chain = two_free_predecessors(3, 1, 40)[::-1]
    assert generate(chain[0], chain[1], 2, 40).terms == chain


def test_division_poor_example():
    p = RemainderPrescription.from_powers(3, [1, 1, 2, 2, 1, 1], [0, 0, 0, 1, 0, 1])
    raw = build_from_prescription(p, (1, 1))
    assert raw == [-8, 7, -1, 2, 1, 1]
    adjusted = adjust_positive(raw, 3, 3)
    assert adjusted.terms == [19, 7, 26, 11, 37, 16]
    assert adjusted.signature == replay(-8, 7, 3, 6).signature


def test_division_poor_long_run_grows():
    # every other step divides by exactly 3
    n, length = 3, 30
    rs, powers = [1, 1], [0, 0]
    for k in range(2, length):
        s = (rs[-2] + rs[-1]) % n
        rs.append(s if s else rs[-1])
        powers.append(0 if s else 1)
    p = RemainderPrescription.from_powers(n, rs, powers)
    raw = build_from_prescription(p, (rs[-2], rs[-1]))
    run = adjust_positive(raw, n, sum(powers) + 1)
    t = run.terms
    plain = [k for k in range(2, length) if run.powers[k] == 0]
    assert all(b - a == 2 for a, b in zip(plain, plain[1:]))
    assert all(t[k] > t[k - 2] for k in plain)


def test_all_plain_prescription_is_fibonacci_backwards():
    p = RemainderPrescription.from_powers(7, [5, 6, 4, 3], [0, 0, 0, 0])
    assert build_from_prescription(p, (11, 17)) == [5, 6, 11, 17]
    assert build_from_prescription(p, (25, 38)) == [12, 13, 25, 38]


def test_illegal_prescription_names_index():
    p = RemainderPrescription.from_powers(3, [1, 2, 1, 0], [0, 0, 0, 0])
    with pytest.raises(LegalityError) as exc:
        build_from_prescription(p, (1, 1))
    assert exc.value.index == 3
    p = RemainderPrescription.from_powers(3, [1, 1, 2, 1], [0, 0, 1, 0])
    with pytest.raises(LegalityError) as exc:
        p.check()
    assert exc.value.index == 3
    p = RemainderPrescription.from_powers(7, [2, 1, 3, 4, 1], [0, 0, 0, 0, 0])
    with pytest.raises(LegalityError) as exc:
        p.check()  # 3 + 4 = 7 must divide
    assert exc.value.index == 5
    p = RemainderPrescription(3, (1, 1, 2), (None, None, 6))
    with pytest.raises(LegalityError):
        p.check()


def test_adjust_positive_noop_and_precondition():
    run = generate(5, 4, 3, 7)
    assert adjust_positive(run.terms, 3, 6).terms == run.terms
    with pytest.raises(AdjustmentExponentError):
        adjust_positive([-8, 7, -1, 2, 1, 1], 3, 2)


def test_signature_examples():
    assert format_signature(signature_of(generate(5, 4, 3, 7))) == "*, *, 9, 1, 3, 1, 9"
    assert signature_of(generate(2, 1, 5, 8)) == [None, None] + [1] * 6
    # recomputed from the listed 4-free terms 0,1,1,2,3,5,2,7,9,1
    listed = [0, 1, 1, 2, 3, 5, 2, 7, 9, 1]
    expected = [None, None] + [(listed[k - 2] + listed[k - 1]) // listed[k] for k in range(2, 10)]
    assert expected == [None, None, 1, 1, 1, 1, 4, 1, 1, 16]
    assert signature_of(generate(0, 1, 4, 10)) == expected


def test_fuzzed_round_trips():
    for p, terminal in fuzz_corpus():
        raw = build_from_prescription(p, terminal)
        fwd = replay(raw[0], raw[1], p.modulus, len(raw))
        assert fwd.terms == raw
        assert tuple(fwd.signature) == p.signature
        assert tuple(fwd.residues) == p.remainders
        m = sum(fwd.powers) + 1
        adj = adjust_positive(raw, p.modulus, m)
        assert all(t > 0 for t in adj.terms)
        assert adj.signature == fwd.signature
        assert adj.residues == fwd.residues


def test_generated_traces_are_legal():
    rng = random.Random(12)
    for _ in range(300):
        n = rng.randint(2, 12)
        run = generate(rng.randint(0, 10**5), rng.randint(1, 10**5), n, 40)
        RemainderPrescription(n, tuple(run.residues), tuple(run.signature)).check()
