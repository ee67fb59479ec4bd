"""Monte-Carlo growth estimates and the closed-form growth models.

Randomness: trial ``i`` of an experiment with master seed ``s`` draws its
start from ``numpy.random.default_rng([s, i])`` (PCG64 behind a
SeedSequence). Trials are summed in fixed blocks of ``BLOCK`` and the blocks
are combined in order, so results do not depend on the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .core import iterate
from .fibmod import DEFAULT_CAP, avg_steps_between_divisions, entry_point, is_omni_factor

BLOCK = 64
GOLDEN = (1 + math.sqrt(5)) / 2

# Deviated exponents reported for omni-factors at 10000 x 500.
REPORTED_GROWTH = {4: 1.32, 6: 1.42, 7: 1.34, 9: 1.4, 14: 1.49, 23: 1.48, 27: 1.53, 43: 1.54, 49: 1.56}
NON_OMNI_GROWTH = 1.61


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    trials: int = 1000
    length: int = 300
    init_low: int = 1
    init_high: int = 1000
    master_seed: int = 0
    tail_skip: int = 50
    averaging: str = "log"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.length < self.tail_skip + 10:
            raise ValueError("length must be at least tail_skip + 10")
        if not 1 <= self.init_low <= self.init_high:
            raise ValueError("need 1 <= init_low <= init_high")
        if self.averaging not in ("log", "arithmetic"):
            raise ValueError("averaging must be 'log' or 'arithmetic'")


PAPER_SCALE = dict(trials=10000, length=500)


@dataclass(frozen=True)
class GrowthFit:
    n: int
    g: float
    stderr: float
    trials_used: int
    length: int
    seed: int
    residual_rms: float


def trial_start(config: ExperimentConfig, trial: int) -> tuple[int, int]:
    rng = np.random.default_rng([config.master_seed, trial])
    a, b = rng.integers(config.init_low, config.init_high, size=2, endpoint=True)
    return int(a), int(b)


def trial_terms(config: ExperimentConfig, trial: int) -> list[int]:
    a, b = trial_start(config, trial)
    it = iterate(a, b, config.n)
    return [next(it).term for _ in range(config.length)]


def _block_sum(args):
    config, lo, hi = args
    if config.averaging == "log":
        acc = np.zeros(config.length)
        for t in range(lo, hi):
            acc += np.fromiter((math.log(x) for x in trial_terms(config, t)), float, config.length)
        return acc
    acc = [0] * config.length
    for t in range(lo, hi):
        acc = [s + x for s, x in zip(acc, trial_terms(config, t))]
    return acc


def _blocks(config):
    return [(config, lo, min(lo + BLOCK, config.trials)) for lo in range(0, config.trials, BLOCK)]


def mean_profile(config: ExperimentConfig, workers: int = 1) -> np.ndarray:
    """Per-index average of ``log(term)`` over all trials (or log of the
    arithmetic mean of terms when ``config.averaging == 'arithmetic'``)."""
    blocks = _blocks(config)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_block_sum, blocks))
    else:
        parts = [_block_sum(b) for b in blocks]
    if config.averaging == "log":
        total = np.zeros(config.length)
        for p in parts:
            total += p
        return total / config.trials
    total = [0] * config.length
    for p in parts:
        total = [s + x for s, x in zip(total, p)]
    return np.array([math.log(s) - math.log(config.trials) for s in total])


def fit_growth(profile: np.ndarray, tail_skip: int) -> tuple[float, float, float]:
    """Least-squares slope of ``profile`` against the 1-based index, using
    indices past ``tail_skip``. Returns ``(g, stderr(g), residual rms)``."""
    idx = np.arange(1, len(profile) + 1, dtype=float)
    sel = idx > tail_skip
    x, y = idx[sel], profile[sel]
    xm = x - x.mean()
    slope = float(xm @ (y - y.mean()) / (xm @ xm))
    resid = y - y.mean() - slope * xm
    dof = max(len(x) - 2, 1)
    se = math.sqrt(float(resid @ resid) / dof / float(xm @ xm))
    g = math.exp(slope)
    return g, g * se, math.sqrt(float(resid @ resid) / len(x))


def mc_growth(config: ExperimentConfig, workers: int = 1) -> GrowthFit:
    g, se, rms = fit_growth(mean_profile(config, workers), config.tail_skip)
    return GrowthFit(config.n, g, se, config.trials, config.length, config.master_seed, rms)


def division_free_tail_fraction(config: ExperimentConfig, tail: int = 100) -> float:
    """Fraction of trials whose last ``tail`` steps never divide."""
    hits = 0
    for t in range(config.trials):
        a, b = trial_start(config, t)
        it = iterate(a, b, config.n)
        powers = [next(it).power for _ in range(config.length)]
        hits += not any(powers[-tail:])
    return hits / config.trials


def avg_division_factor(n: int) -> float:
    """Expected divisor per division when each extra factor of ``n`` is
    geometrically less likely: ``n ** (n / (n - 1))``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return n ** (n / (n - 1))


def avg_division_per_step(n: int, a) -> float:
    """Average division per step given ``a`` steps between divisions."""
    return n ** (n / ((n - 1) * float(a)))


def recurrence_growth(d: float) -> float:
    """Growth of ``x_k = (x_{k-1} + x_{k-2}) / d``: the positive root of ``d t² = t + 1``."""
    if d <= 0:
        raise ValueError("d must be positive")
    return (1 + math.sqrt(1 + 4 * d)) / (2 * d)


# Coin-flip model for n = 3: heads divides the next sum by 5, tails adds one
# plain Fibonacci step first. Terms are tracked as coefficient pairs on a1, a2.

def _coin_flip_terms(flips: str) -> list[tuple[Fraction, Fraction]]:
    seq = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]

    def add(div):
        (p, q), (r, s) = seq[-2], seq[-1]
        seq.append(((p + r) / div, (q + s) / div))

    for f in flips:
        if f == "T":
            add(1)
        add(5)
    return seq


def coin_flip_case_bounds() -> dict[str, Fraction]:
    """For each two-flip outcome, the bound on the last two terms in units of
    ``max(a1, a2)``."""
    out = {}
    for flips in ("HH", "HT", "TH", "TT"):
        seq = _coin_flip_terms(flips)
        out[flips] = max(p + q for p, q in seq[-2:])
    return out


@dataclass(frozen=True)
class Model3Bound:
    closed_form: float
    case_bounds: dict
    simulated: float


def model3_bound(pairs: int = 10**6, seed: int = 0) -> Model3Bound:
    cases = coin_flip_case_bounds()
    closed = (2 * 3 * 7 * 13) ** 0.25 / 5
    logs = np.log(np.array([float(v) for v in cases.values()]))
    draws = np.random.default_rng(seed).integers(0, 4, size=pairs)
    simulated = math.exp(float(logs[draws].mean()))
    return Model3Bound(closed, cases, simulated)


@dataclass(frozen=True)
class Model4Bound:
    r_up: float
    r_down: float
    overall: float

    @property
    def per_division(self) -> float:
        return self.overall ** (1 / 3)


def model4_bound() -> Model4Bound:
    """Lower bounds on the growth of the 4-free model sequence.

    ``overall`` is ``r_up² · r_down``; the decreasing regime is at most half
    as likely as the increasing one.
    """
    x = 4 ** (4 / 3)
    r_up = (((x + 2) + 2 / (x + 1)) / x * ((2 * x + 3) + 3 / (x + 1)) / x) ** (1 / 3)
    den = (1 + x) * x * x
    r_down = (
        (2 + 2 * x + x * x) / den * (3 * x * x + 6 * x + 4) / den * (5 * x * x + 10 * x + 6) / den
    ) ** (1 / 3)
    return Model4Bound(r_up, r_down, r_up * r_up * r_down)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    omni_factor: bool
    mc_growth: float
    entry_point: int
    avg_steps: Fraction | None
    avg_division: float | None
    recurrence_growth: float | None


def growth_table(ns, template: ExperimentConfig | None = None, workers: int = 1,
                 cap: int = DEFAULT_CAP) -> list[GrowthRow]:
    """One row per ``n``; the division columns are ``None`` for non-omni-factors."""
    template = template or ExperimentConfig(n=2)
    rows = []
    for n in ns:
        fit = mc_growth(replace(template, n=n), workers)
        omni = is_omni_factor(n, cap).omni_factor
        a = d = rg = None
        if omni:
            a = avg_steps_between_divisions(n, cap)
            d = avg_division_per_step(n, a)
            rg = recurrence_growth(d)
        rows.append(GrowthRow(n, omni, fit.g, entry_point(n), a, d, rg))
    return rows
