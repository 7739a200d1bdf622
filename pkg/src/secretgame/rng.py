"""Counter-based SplitMix64 streams.

Every random word is a pure function of ``(seed, trial, slot)``:

    key(seed, t)     = mix64(seed + (t + 1) * GAMMA)
    word(seed, t, j) = mix64(key(seed, t) + (j + 1) * GAMMA)

with all arithmetic mod 2**64 and ``mix64`` the SplitMix64 finaliser
(Steele, Lea & Flood 2014). Trial ``t`` therefore sees the same draws no
matter how trials are partitioned across workers.

Uniforms use the top 53 bits of a word; a Bernoulli(p) draw succeeds iff
``word >> 11 < floor(p * 2**53)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MUL1 = 0xBF58476D1CE4E5B9
MUL2 = 0x94D049BB133111EB
UNIT_BITS = 53
UNIT = 1 << UNIT_BITS


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MUL1) & MASK64
    z = ((z ^ (z >> 27)) * MUL2) & MASK64
    return z ^ (z >> 31)


def trial_key(seed: int, t: int) -> int:
    return mix64(seed + (t + 1) * GAMMA)


def word(seed: int, t: int, slot: int) -> int:
    """Scalar reference implementation of one draw."""
    return mix64(trial_key(seed, t) + (slot + 1) * GAMMA)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MUL1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MUL2)
    return z ^ (z >> np.uint64(31))


def trial_keys(seed: int, start: int, stop: int) -> np.ndarray:
    t = np.arange(start, stop, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64_np(np.uint64(seed & MASK64) + (t + np.uint64(1)) * np.uint64(GAMMA))


def words(keys: np.ndarray, slot: int) -> np.ndarray:
    """Draw ``slot`` for every trial key (vectorised :func:`word`)."""
    offset = np.uint64(((slot + 1) * GAMMA) & MASK64)
    with np.errstate(over="ignore"):
        return _mix64_np(keys + offset)


def threshold(p) -> int:
    """Integer threshold so that ``u53 < threshold`` has probability ~p."""
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    return int(Fraction(p) * UNIT)


def cumulative_thresholds(weights: Sequence) -> np.ndarray:
    acc = Fraction(0)
    out = []
    for w in weights:
        acc += Fraction(w)
        out.append(int(acc * UNIT))
    out[-1] = UNIT
    return np.array(out, dtype=np.uint64)


def categorical(u53: np.ndarray, cum: np.ndarray) -> np.ndarray:
    """Index i with cum[i-1] <= u < cum[i]; zero-weight entries never drawn."""
    return np.searchsorted(cum, u53, side="right")
