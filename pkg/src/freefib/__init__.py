"""n-free Fibonacci sequences: sum the previous two terms, then divide out
the largest power of n."""

from .core import (
    CycleReport,
    Exhausted,
    SequenceRun,
    StepRecord,
    detect_cycle,
    generate,
    next_state,
    primitive_cycle,
    strip_powers,
    verify_three_cycle_form,
)
from .errors import FreeFibError

__all__ = [
    "CycleReport",
    "Exhausted",
    "FreeFibError",
    "SequenceRun",
    "StepRecord",
    "detect_cycle",
    "generate",
    "next_state",
    "primitive_cycle",
    "strip_powers",
    "verify_three_cycle_form",
]
