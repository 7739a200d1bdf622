"""Monte Carlo replay of the packet exchange.

Per trial, random slots are consumed in a fixed order:

* slot 0: legit strategy (sampled from ``q`` when mixed)
* slot 1: Eve's location (sampled from ``p`` when mixed)
* slots 2 .. N+1: Eve's reception of each packet, Alice's packets first
* slots N+2 .. 2N+1: packet payloads (payload mode only)

Slots are reserved even for pure strategies, so a pure strategy and the
matching point-mass mixture give identical trials.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import rng
from .game import EVE_STRATEGIES, EveStrategy, GameSpec, LegitStrategy, build_utility_matrix, packet_counts
from .numeric import format_number, parse_number
from .solver import ArgumentError, check_distribution, expected_value

CHUNK = 1 << 16
MODES = ("probability", "payload")

LegitChoice = Union[LegitStrategy, Sequence]
EveChoice = Union[EveStrategy, Sequence]


@dataclass(frozen=True)
class SimulationConfig:
    spec: GameSpec
    legit: LegitChoice
    eve: EveChoice
    trials: int
    seed: int = 0
    payload_bits: int = 32

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, int) or self.trials < 1:
            raise ArgumentError(f"trials must be a positive integer, got {self.trials!r}")
        if not 0 <= self.seed <= rng.MASK64:
            raise ArgumentError("seed must be an unsigned 64-bit integer")
        if not 1 <= self.payload_bits <= 64:
            raise ArgumentError("payload_bits must be in [1, 64]")
        cols = self.spec.legit_strategies()
        if isinstance(self.legit, LegitStrategy):
            if self.legit not in cols:
                raise ArgumentError(f"{self.legit.label} is not a strategy for N={self.spec.N}")
        else:
            check_distribution(self.legit, len(cols), "q")
        if not isinstance(self.eve, EveStrategy):
            check_distribution(self.eve, 3, "p")

    def q_vector(self) -> tuple:
        cols = self.spec.legit_strategies()
        if isinstance(self.legit, LegitStrategy):
            return tuple(parse_number(int(c == self.legit)) for c in cols)
        return tuple(self.legit)

    def p_vector(self) -> tuple:
        if isinstance(self.eve, EveStrategy):
            return tuple(parse_number(int(r == self.eve)) for r in EVE_STRATEGIES)
        return tuple(self.eve)

    @property
    def is_pure(self) -> bool:
        return isinstance(self.legit, LegitStrategy) and isinstance(self.eve, EveStrategy)

    def labels(self) -> tuple[str, str]:
        legit = self.legit.label if isinstance(self.legit, LegitStrategy) else "mixed"
        eve = self.eve.label if isinstance(self.eve, EveStrategy) else "mixed"
        return legit, eve


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    captures: int
    analytic_pe: object
    seed: int
    legit: str = ""
    eve: str = ""
    spec_hash: str = ""

    @property
    def empirical_pe(self) -> float:
        return self.captures / self.trials

    @property
    def std_error(self) -> float:
        pe = self.empirical_pe
        return math.sqrt(pe * (1 - pe) / self.trials)

    @property
    def z_score(self) -> float | None:
        se = self.std_error
        diff = self.empirical_pe - float(self.analytic_pe)
        if se == 0:
            return 0.0 if diff == 0 else None
        return diff / se

    def within(self, k: float) -> bool:
        """|empirical - analytic| <= k standard errors."""
        return abs(self.empirical_pe - float(self.analytic_pe)) <= k * self.std_error

    def to_dict(self) -> dict:
        z = self.z_score
        return {
            "trials": self.trials,
            "captures": self.captures,
            "empirical_pe": repr(self.empirical_pe),
            "std_error": repr(self.std_error),
            "analytic_pe": format_number(self.analytic_pe),
            "z_score": None if z is None else repr(z),
            "seed": self.seed,
            "legit": self.legit,
            "eve": self.eve,
            "spec_hash": self.spec_hash,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


CSV_HEADER = ["spec_hash", "legit", "eve", "trials", "empirical_pe", "analytic_pe", "z_score", "seed"]


def report_csv(reports: Sequence[SimulationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        d = r.to_dict()
        w.writerow([d[k] if d[k] is not None else "" for k in CSV_HEADER])
    return buf.getvalue()


def spec_hash(spec: GameSpec) -> str:
    blob = json.dumps(spec.to_json(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _tables(cfg: SimulationConfig):
    spec = cfg.spec
    cols = spec.legit_strategies()
    counts = np.array([packet_counts(c, spec.N)[0] for c in cols], dtype=np.int64)  # Alice's packets
    thr_a = np.zeros(3, dtype=np.uint64)
    thr_b = np.zeros(3, dtype=np.uint64)
    for s in EVE_STRATEGIES:
        fa, fb = s.triple_fields()
        thr_a[s.value] = rng.threshold(getattr(spec.triple_A, fa))
        thr_b[s.value] = rng.threshold(getattr(spec.triple_B, fb))
    return counts, thr_a, thr_b


def capture_indicators(cfg: SimulationConfig, start: int, stop: int, mode: str = "probability") -> np.ndarray:
    """Boolean capture outcome of trials ``start .. stop-1``."""
    if mode not in MODES:
        raise ArgumentError(f"mode must be one of {MODES}")
    N = cfg.spec.N
    counts, thr_a, thr_b = _tables(cfg)
    keys = rng.trial_keys(cfg.seed, start, stop)
    shift = np.uint64(64 - rng.UNIT_BITS)

    # slots 0 and 1 always consumed
    u_legit = rng.words(keys, 0) >> shift
    u_eve = rng.words(keys, 1) >> shift
    if isinstance(cfg.legit, LegitStrategy):
        col = np.full(len(keys), cfg.spec.legit_strategies().index(cfg.legit))
    else:
        col = rng.categorical(u_legit, rng.cumulative_thresholds(cfg.legit))
    if isinstance(cfg.eve, EveStrategy):
        row = np.full(len(keys), cfg.eve.value)
    else:
        row = rng.categorical(u_eve, rng.cumulative_thresholds(cfg.eve))

    k_alice = counts[col]
    ta = thr_a[row]
    tb = thr_b[row]
    received = np.ones((len(keys), N), dtype=bool)
    for j in range(N):
        u = rng.words(keys, 2 + j) >> shift
        thr = np.where(j < k_alice, ta, tb)
        received[:, j] = u < thr

    if mode == "probability":
        return received.all(axis=1)

    mask = np.uint64(rng.MASK64 if cfg.payload_bits == 64 else (1 << cfg.payload_bits) - 1)
    secret = np.zeros(len(keys), dtype=np.uint64)
    eve_xor = np.zeros(len(keys), dtype=np.uint64)
    for j in range(N):
        payload = rng.words(keys, 2 + N + j) & mask
        secret ^= payload
        eve_xor ^= np.where(received[:, j], payload, np.uint64(0))
    # packets carry sequence numbers: a gap leaves Eve without a candidate
    complete = received.all(axis=1)
    return complete & (eve_xor == secret)


def count_captures(cfg: SimulationConfig, partitions: int = 1, mode: str = "probability") -> int:
    """Total captures, computed over ``partitions`` contiguous trial ranges."""
    if partitions < 1:
        raise ArgumentError("partitions must be >= 1")
    bounds = np.linspace(0, cfg.trials, partitions + 1).astype(int)
    total = 0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        for s in range(lo, hi, CHUNK):
            total += int(capture_indicators(cfg, s, min(s + CHUNK, hi), mode).sum())
    return total


def analytic_pe(cfg: SimulationConfig):
    m = build_utility_matrix(cfg.spec)
    return expected_value(m, cfg.p_vector(), cfg.q_vector())


def simulate_exchange(cfg: SimulationConfig, partitions: int = 1, mode: str = "probability") -> SimulationReport:
    captures = count_captures(cfg, partitions, mode)
    legit, eve = cfg.labels()
    return SimulationReport(
        trials=cfg.trials,
        captures=captures,
        analytic_pe=analytic_pe(cfg),
        seed=cfg.seed,
        legit=legit,
        eve=eve,
        spec_hash=spec_hash(cfg.spec),
    )


def simulate_equilibrium_value(cfg: SimulationConfig, partitions: int = 1) -> SimulationReport:
    """Empirical check of p^T M q for mixed (or point-mass) p and q."""
    if isinstance(cfg.legit, LegitStrategy) or isinstance(cfg.eve, EveStrategy):
        raise ArgumentError("simulate_equilibrium_value needs probability vectors for both sides")
    return simulate_exchange(cfg, partitions)
