"""Inequality checks behind the symmetric-game results.

The symmetric mixed equilibria have Eve sitting in the middle with
certainty while the legitimate users spread positive weight over every
strategy. A legit mixture qualifies when Eve's expected capture from either
near position stays strictly below the middle-row value ``p_mid**N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .channel import ChannelTriple
from .game import EveStrategy, GameSpec, LegitStrategy, build_utility_matrix
from .numeric import Number, format_number, ipow
from .solver import ArgumentError, eve_payoffs


@dataclass(frozen=True)
class InequalityReport:
    lemma: str
    holds: bool
    lhs: Number
    rhs: Number

    @property
    def margin(self) -> Number:
        return self.rhs - self.lhs

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "holds": self.holds,
            "lhs": format_number(self.lhs),
            "rhs": format_number(self.rhs),
            "margin": format_number(self.margin),
        }


def split_middle_report(t: ChannelTriple, N: int) -> InequalityReport:
    lhs = ipow(t.p_near, N // 2) * ipow(t.p_far, N // 2)
    rhs = ipow(t.p_mid, N)
    return InequalityReport("1", lhs < rhs, lhs, rhs)


def check_lemma1(t: ChannelTriple, N: int = 2) -> bool:
    """Split against a near Eve captures less than a middle Eve.

    Equivalent to ``p_near * p_far < p_mid**2`` for any even N.
    """
    return split_middle_report(t, N).holds


@dataclass(frozen=True)
class SymmetricMixedProfile:
    """Legit weights: ``q_A[n]`` on AliceHeavy(n), ``q_AB`` on Split, ``q_B[n]`` on BobHeavy(n)."""

    q_A: tuple
    q_AB: Number
    q_B: tuple

    def __post_init__(self):
        if len(self.q_A) != len(self.q_B):
            raise ArgumentError("q_A and q_B must have the same length")

    @property
    def N(self) -> int:
        return 2 * len(self.q_A)

    @classmethod
    def from_q(cls, q, N: int) -> "SymmetricMixedProfile":
        """From a vector in matrix column order."""
        half = N // 2
        if len(q) != N + 1:
            raise ArgumentError(f"q must have length {N + 1}")
        return cls(tuple(q[:half]), q[half], tuple(reversed(q[half + 1:])))

    def as_q(self) -> tuple:
        """Weights in matrix column order (AliceHeavy ascending, Split, BobHeavy descending)."""
        return tuple(self.q_A) + (self.q_AB,) + tuple(reversed(self.q_B))

    def weight(self, s: LegitStrategy) -> Number:
        if s.kind == "Split":
            return self.q_AB
        return (self.q_A if s.kind == "AliceHeavy" else self.q_B)[s.n]

    def to_json(self) -> dict:
        return {
            "q_A": [format_number(x) for x in self.q_A],
            "q_AB": format_number(self.q_AB),
            "q_B": [format_number(x) for x in self.q_B],
        }


def _require_symmetric(spec: GameSpec) -> None:
    if not spec.symmetric:
        raise ArgumentError("symmetric spec required (triple_A == triple_B)")


def _require_full_support(profile: SymmetricMixedProfile, N: int) -> None:
    if profile.N != N:
        raise ArgumentError(f"profile is for N={profile.N}, spec has N={N}")
    q = profile.as_q()
    if any(not x > 0 for x in q):
        raise ArgumentError("every legit strategy needs strictly positive weight")
    if sum(q) != 1 and not abs(sum(q) - 1) <= 1e-12:
        raise ArgumentError("weights must sum to 1")


def eve_middle_dominance(spec: GameSpec, profile: SymmetricMixedProfile) -> dict:
    """Eve's expected capture probability at each location under ``profile``."""
    m = build_utility_matrix(spec)
    pay = eve_payoffs(m, profile.as_q())
    return {s: pay[s.value] for s in EveStrategy}


@dataclass(frozen=True)
class SymmetricMixedReport:
    holds: bool
    near_alice: Number
    near_bob: Number
    middle: Number

    def to_json(self) -> dict:
        return {
            "lemma": "3",
            "holds": self.holds,
            "lhs": [format_number(self.near_alice), format_number(self.near_bob)],
            "rhs": format_number(self.middle),
            "margin": format_number(self.middle - max(self.near_alice, self.near_bob)),
        }


def check_symmetric_mixed(spec: GameSpec, profile: SymmetricMixedProfile) -> SymmetricMixedReport:
    """Both near-position captures strictly below ``p_mid**N``.

    Paired with Eve staying in the middle, a passing profile is a mixed
    equilibrium of the symmetric game.
    """
    _require_symmetric(spec)
    _require_full_support(profile, spec.N)
    pay = eve_middle_dominance(spec, profile)
    rhs = ipow(spec.triple_A.p_mid, spec.N)
    a, b = pay[EveStrategy.NearAlice], pay[EveStrategy.NearBob]
    return SymmetricMixedReport(a < rhs and b < rhs, a, b, rhs)


def case_terms(spec: GameSpec) -> list[tuple[int, Number, Number, int]]:
    """Per n: (n, paired near/far capture sum, 2*p_mid**N, case number)."""
    t = spec.triple_A
    N = spec.N
    rhs = 2 * ipow(t.p_mid, N)
    out = []
    for n in range(N // 2):
        lhs = ipow(t.p_near, N - n) * ipow(t.p_far, n) + ipow(t.p_near, n) * ipow(t.p_far, N - n)
        out.append((n, lhs, rhs, 1 if lhs <= rhs else 2))
    return out


def _collapsed_holds(spec: GameSpec, weights, q_ab) -> bool:
    t = spec.triple_A
    N = spec.N
    mid = ipow(t.p_mid, N)
    split = ipow(t.p_near, N // 2) * ipow(t.p_far, N // 2)
    lhs = q_ab * split
    for (_, pair, _, _), w in zip(case_terms(spec), weights):
        lhs += w * pair
    return lhs < mid * (2 * sum(weights) + q_ab)


def construct_feasible_q(spec: GameSpec, max_halvings: int = 4096) -> SymmetricMixedProfile:
    """Build a full-support legit mixture certified by :func:`check_symmetric_mixed`.

    Uses ``q_A[n] == q_B[n]`` so the two near-position inequalities
    coincide. Every strategy starts at weight ``1/(N+1)``; indices whose
    paired capture sum exceeds ``2*p_mid**N`` (case 2) are halved until the
    collapsed inequality holds. Split absorbs the remaining mass.
    """
    _require_symmetric(spec)
    N = spec.N
    exact = spec.exact
    start = Fraction(1, N + 1) if exact else 1.0 / (N + 1)
    cases = [c for *_, c in case_terms(spec)]
    weights = [start] * (N // 2)
    for _ in range(max_halvings):
        q_ab = 1 - 2 * sum(weights)
        if _collapsed_holds(spec, weights, q_ab):
            break
        weights = [w / 2 if c == 2 else w for w, c in zip(weights, cases)]
    else:
        raise ArgumentError("halving did not certify a profile; is the triple admissible?")
    q_ab = 1 - 2 * sum(weights)
    return SymmetricMixedProfile(tuple(weights), q_ab, tuple(weights))


def halvings_needed(spec: GameSpec) -> int:
    """How many halving rounds :func:`construct_feasible_q` performs."""
    profile = construct_feasible_q(spec)
    start = Fraction(1, spec.N + 1) if spec.exact else 1.0 / (spec.N + 1)
    smallest = min(profile.q_A)
    k = 0
    while smallest < start:
        smallest *= 2
        k += 1
    return k


__all__ = [
    "InequalityReport",
    "SymmetricMixedProfile",
    "SymmetricMixedReport",
    "case_terms",
    "check_lemma1",
    "check_symmetric_mixed",
    "construct_feasible_q",
    "eve_middle_dominance",
    "halvings_needed",
    "split_middle_report",
]
