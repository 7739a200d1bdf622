"""Strategy spaces and the zero-sum utility matrix of Eve's capture probability."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Sequence

from .channel import ChannelTriple
from .numeric import Number, all_exact, format_number, ipow

DEFAULT_MAX_N = 64


class GameError(ValueError):
    pass


class EveStrategy(enum.IntEnum):
    """Eve's location; the value is the matrix row index."""

    NearAlice = 0
    Middle = 1
    NearBob = 2

    @property
    def label(self) -> str:
        return self.name

    def triple_fields(self) -> tuple[str, str]:
        """Which triple field applies to (Alice's packets, Bob's packets)."""
        return _EVE_FIELDS[self]

    @classmethod
    def parse(cls, text: str) -> "EveStrategy":
        try:
            return cls[text]
        except KeyError:
            raise GameError(f"unknown Eve strategy {text!r}") from None


# distance to Alice / Bob: (eps, D-eps), (D/2, D/2), (D-eps, eps)
_EVE_FIELDS = {
    EveStrategy.NearAlice: ("p_near", "p_far"),
    EveStrategy.Middle: ("p_mid", "p_mid"),
    EveStrategy.NearBob: ("p_far", "p_near"),
}

EVE_STRATEGIES = tuple(EveStrategy)


@dataclass(frozen=True, order=True)
class LegitStrategy:
    """``AliceHeavy(n)``, ``BobHeavy(n)`` or ``Split``.

    Under ``AliceHeavy(n)`` Alice sends ``N - n`` packets and Bob ``n``.
    """

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in ("AliceHeavy", "BobHeavy", "Split"):
            raise GameError(f"unknown legit strategy kind {self.kind!r}")
        if self.kind == "Split":
            if self.n is not None:
                raise GameError("Split takes no parameter")
        elif not isinstance(self.n, int) or self.n < 0:
            raise GameError(f"{self.kind} needs a non-negative integer n")

    @classmethod
    def alice_heavy(cls, n: int) -> "LegitStrategy":
        return cls("AliceHeavy", n)

    @classmethod
    def bob_heavy(cls, n: int) -> "LegitStrategy":
        return cls("BobHeavy", n)

    @classmethod
    def split(cls) -> "LegitStrategy":
        return cls("Split")

    @classmethod
    def parse(cls, text: str) -> "LegitStrategy":
        text = text.strip()
        if text == "Split":
            return cls.split()
        for kind in ("AliceHeavy", "BobHeavy"):
            if text.startswith(kind + "(") and text.endswith(")"):
                try:
                    return cls(kind, int(text[len(kind) + 1:-1]))
                except ValueError:
                    break
        raise GameError(f"cannot parse legit strategy {text!r}")

    @property
    def label(self) -> str:
        return "Split" if self.kind == "Split" else f"{self.kind}({self.n})"

    def __str__(self) -> str:
        return self.label


SPLIT = LegitStrategy.split()


def _check_N(N: int, max_N: int = DEFAULT_MAX_N) -> None:
    if isinstance(N, bool) or not isinstance(N, int):
        raise GameError(f"N must be an integer, got {N!r}")
    if N < 2 or N % 2:
        raise GameError(f"N must be an even integer >= 2, got {N}")
    if N > max_N:
        raise GameError(f"N={N} exceeds the configured cap {max_N}")


def legit_strategies(N: int) -> list[LegitStrategy]:
    """AliceHeavy(0..N/2-1), Split, BobHeavy(N/2-1..0)."""
    _check_N(N, max_N=N)
    half = N // 2
    return (
        [LegitStrategy.alice_heavy(n) for n in range(half)]
        + [SPLIT]
        + [LegitStrategy.bob_heavy(n) for n in reversed(range(half))]
    )


def packet_counts(s: LegitStrategy, N: int) -> tuple[int, int]:
    """(packets sent by Alice, packets sent by Bob)."""
    _check_N(N, max_N=N)
    if s.kind == "Split":
        return N // 2, N // 2
    if s.n >= N // 2:
        raise GameError(f"{s.label} out of range for N={N}")
    if s.kind == "AliceHeavy":
        return N - s.n, s.n
    return s.n, N - s.n


@dataclass(frozen=True)
class GameSpec:
    N: int
    triple_A: ChannelTriple
    triple_B: ChannelTriple
    max_N: int = DEFAULT_MAX_N

    def __post_init__(self):
        _check_N(self.N, self.max_N)

    @property
    def symmetric(self) -> bool:
        return self.triple_A == self.triple_B

    @property
    def exact(self) -> bool:
        return self.triple_A.exact and self.triple_B.exact

    def as_float(self) -> "GameSpec":
        return GameSpec(self.N, self.triple_A.as_float(), self.triple_B.as_float(), self.max_N)

    def legit_strategies(self) -> list[LegitStrategy]:
        return legit_strategies(self.N)

    def to_json(self) -> dict:
        return {"N": self.N, "alice": self.triple_A.to_json(), "bob": self.triple_B.to_json()}


def eve_capture_probability(spec: GameSpec, s_L: LegitStrategy, s_E: EveStrategy) -> Number:
    k_alice, k_bob = packet_counts(s_L, spec.N)
    field_a, field_b = s_E.triple_fields()
    pa = getattr(spec.triple_A, field_a)
    pb = getattr(spec.triple_B, field_b)
    return ipow(pa, k_alice) * ipow(pb, k_bob)


@dataclass(frozen=True)
class UtilityMatrix:
    """Eve's capture probability for each (Eve row, legit column).

    Eve maximises the entries; the legitimate users' utility is their
    negation and is never stored.
    """

    rows: tuple[EveStrategy, ...]
    cols: tuple[LegitStrategy, ...]
    entries: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        if len(self.entries) != len(self.rows):
            raise GameError("row count mismatch")
        if any(len(r) != len(self.cols) for r in self.entries):
            raise GameError("column count mismatch")

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[Number]], cols=None, rows=None) -> "UtilityMatrix":
        entries = tuple(tuple(r) for r in entries)
        if rows is None:
            rows = EVE_STRATEGIES[: len(entries)]
        if cols is None:
            cols = tuple(legit_strategies(len(entries[0]) - 1))
        return cls(tuple(rows), tuple(cols), entries)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def exact(self) -> bool:
        return all(all_exact(r) for r in self.entries)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def column(self, c: int) -> tuple:
        return tuple(row[c] for row in self.entries)

    def legit_utility(self, r: int, c: int) -> Number:
        return -self.entries[r][c]

    def col_index(self, s: LegitStrategy) -> int:
        return self.cols.index(s)

    def restrict(self, cols: Sequence[LegitStrategy]) -> "UtilityMatrix":
        idx = [self.col_index(s) for s in cols]
        return UtilityMatrix(self.rows, tuple(cols), tuple(tuple(r[i] for i in idx) for r in self.entries))

    def extremes(self) -> "UtilityMatrix":
        """Restriction to AliceHeavy(0), Split, BobHeavy(0)."""
        return self.restrict([LegitStrategy.alice_heavy(0), SPLIT, LegitStrategy.bob_heavy(0)])

    def map(self, fn) -> "UtilityMatrix":
        return UtilityMatrix(self.rows, self.cols, tuple(tuple(fn(x) for x in r) for r in self.entries))

    def row_labels(self) -> list[str]:
        return [r.label for r in self.rows]

    def col_labels(self) -> list[str]:
        return [c.label for c in self.cols]

    def to_json(self) -> dict:
        return {
            "rows": self.row_labels(),
            "cols": self.col_labels(),
            "entries": [[format_number(x) for x in r] for r in self.entries],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eve"] + self.col_labels())
        for label, r in zip(self.row_labels(), self.entries):
            w.writerow([label] + [format_number(x) for x in r])
        return buf.getvalue()


def build_utility_matrix(spec: GameSpec) -> UtilityMatrix:
    cols = tuple(spec.legit_strategies())
    entries = tuple(
        tuple(eve_capture_probability(spec, s_L, s_E) for s_L in cols) for s_E in EVE_STRATEGIES
    )
    return UtilityMatrix(EVE_STRATEGIES, cols, entries)
