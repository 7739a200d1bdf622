"""Pure and mixed equilibria of the capture-probability game.

Eve (rows) maximises the matrix entry, the legitimate users (columns)
minimise it. Three independent routes are provided:

* :func:`solve_algorithm1`: proposition/verification enumeration for the
  3x3 game on AliceHeavy(0), Split, BobHeavy(0)
* :func:`solve_support_enumeration`: bilateral indifference over support
  pairs of a full 3x(N+1) matrix
* :func:`game_value`: Eve's maximin linear program solved by vertex
  enumeration

All of them are exact when the matrix holds Fractions.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .channel import ChannelTriple
from .game import GameSpec, LegitStrategy, UtilityMatrix
from .linalg import solve_unique
from .numeric import (
    FLOAT_MARGIN,
    Number,
    NumericallyAmbiguous,
    all_exact,
    format_number,
    format_vector,
    strictly_greater,
)


class SolverError(RuntimeError):
    pass


class ArgumentError(ValueError):
    pass


class GameClass(str, enum.Enum):
    Symmetric = "Symmetric"
    AsymmetricPureAtBob = "AsymmetricPureAtBob"
    AsymmetricMixedOnly = "AsymmetricMixedOnly"
    Unclassified = "Unclassified"


@dataclass(frozen=True)
class Equilibrium:
    """A (possibly degenerate) mixed profile; pure profiles are point masses."""

    p: tuple
    q: tuple
    value: Number
    rows: tuple
    cols: tuple[LegitStrategy, ...]
    degenerate: bool = False
    verified: bool = False
    trace: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def pure(cls, m: UtilityMatrix, r: int, c: int, **kw) -> "Equilibrium":
        one, zero = _unit(m)
        p = tuple(one if i == r else zero for i in range(m.shape[0]))
        q = tuple(one if j == c else zero for j in range(m.shape[1]))
        return cls(p, q, m[r, c], m.rows, m.cols, **kw)

    @property
    def is_pure(self) -> bool:
        return sum(1 for x in self.p if x) == 1 and sum(1 for x in self.q if x) == 1

    @property
    def kind(self) -> str:
        return "pure" if self.is_pure else "mixed"

    @property
    def eve_row(self) -> int | None:
        return next(i for i, x in enumerate(self.p) if x) if self.is_pure else None

    @property
    def legit_col(self) -> int | None:
        return next(j for j, x in enumerate(self.q) if x) if self.is_pure else None

    def profile(self) -> tuple | None:
        """(EveStrategy, LegitStrategy) for pure equilibria."""
        if not self.is_pure:
            return None
        return self.rows[self.eve_row], self.cols[self.legit_col]

    def with_flags(self, **kw) -> "Equilibrium":
        fields = dict(self.__dict__)
        fields.update(kw)
        return Equilibrium(**fields)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "p": format_vector(self.p),
            "q": format_vector(self.q),
            "value": format_number(self.value),
            "degenerate": self.degenerate,
            "verified": self.verified,
            "eve_strategies": [r.label for r in self.rows],
            "legit_strategies": [c.label for c in self.cols],
        }
        if self.is_pure:
            out["profile"] = {"eve": self.rows[self.eve_row].label, "legit": self.cols[self.legit_col].label}
        return out


def _unit(m: UtilityMatrix):
    return (Fraction(1), Fraction(0)) if m.exact else (1.0, 0.0)


def _tol(m: UtilityMatrix, tol):
    if tol is not None:
        return tol
    return 0 if m.exact else FLOAT_MARGIN


def eve_payoffs(m: UtilityMatrix, q: Sequence) -> list:
    """Expected capture probability of each Eve row against ``q``."""
    return [sum(x * y for x, y in zip(row, q)) for row in m.entries]


def legit_payoffs(m: UtilityMatrix, p: Sequence) -> list:
    """Expected capture probability of each legit column against ``p``."""
    return [sum(p[r] * m.entries[r][c] for r in range(len(p))) for c in range(m.shape[1])]


def expected_value(m: UtilityMatrix, p: Sequence, q: Sequence):
    return sum(pr * x for pr, x in zip(p, eve_payoffs(m, q)))


# --------------------------------------------------------------------------
# pure equilibria and verification


def find_pure_equilibria(m: UtilityMatrix, tol=None) -> list[Equilibrium]:
    """Every cell that is a best response for both sides (weak inequalities).

    Rows of constant value yield one equilibrium per column; all are kept.
    """
    tol = _tol(m, tol)
    out = []
    n_rows, n_cols = m.shape
    col_max = [max(m.column(c)) for c in range(n_cols)]
    row_min = [min(r) for r in m.entries]
    for r in range(n_rows):
        for c in range(n_cols):
            x = m[r, c]
            if x >= col_max[c] - tol and x <= row_min[r] + tol:
                out.append(Equilibrium.pure(m, r, c, verified=True))
    return out


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    value: Number
    eve_best_row: int
    eve_gain: Number
    legit_best_col: int
    legit_gain: Number

    def to_json(self, m: UtilityMatrix | None = None) -> dict:
        row = self.eve_best_row if m is None else m.rows[self.eve_best_row].label
        col = self.legit_best_col if m is None else m.cols[self.legit_best_col].label
        return {
            "ok": self.ok,
            "value": format_number(self.value),
            "eve_best_deviation": {"strategy": row, "gain": format_number(self.eve_gain)},
            "legit_best_deviation": {"strategy": col, "gain": format_number(self.legit_gain)},
        }


def check_distribution(v: Sequence, n: int, name: str) -> None:
    if len(v) != n:
        raise ArgumentError(f"{name} has length {len(v)}, expected {n}")
    if any(x < 0 for x in v):
        raise ArgumentError(f"{name} has a negative component")
    total = sum(v)
    if all_exact(v):
        if total != 1:
            raise ArgumentError(f"{name} sums to {format_number(total)}, not 1")
    elif abs(total - 1) > FLOAT_MARGIN:
        raise ArgumentError(f"{name} sums to {total!r}, not 1")


def verify_equilibrium(m: UtilityMatrix, e, tol=None) -> VerificationReport:
    """Check that no unilateral pure deviation gains more than ``tol``.

    ``e`` is an :class:`Equilibrium` or a ``(p, q)`` pair. ``tol`` defaults
    to 0 for exact matrices and vectors.
    """
    p, q = (e.p, e.q) if isinstance(e, Equilibrium) else e
    check_distribution(p, m.shape[0], "p")
    check_distribution(q, m.shape[1], "q")
    if tol is None:
        tol = 0 if (m.exact and all_exact(p) and all_exact(q)) else FLOAT_MARGIN
    value = expected_value(m, p, q)
    rows = eve_payoffs(m, q)
    cols = legit_payoffs(m, p)
    best_r = max(range(len(rows)), key=lambda i: rows[i])
    best_c = min(range(len(cols)), key=lambda j: cols[j])
    eve_gain = rows[best_r] - value
    legit_gain = value - cols[best_c]
    return VerificationReport(
        ok=eve_gain <= tol and legit_gain <= tol,
        value=value,
        eve_best_row=best_r,
        eve_gain=eve_gain,
        legit_best_col=best_c,
        legit_gain=legit_gain,
    )


# --------------------------------------------------------------------------
# classification


def _dominates(a: ChannelTriple, b: ChannelTriple) -> bool:
    return all(x > y for x, y in zip(a.as_tuple(), b.as_tuple()))


def classify(spec: GameSpec) -> GameClass:
    """Which regime the two channel triples put the game in.

    Raises :class:`~secretgame.channel.AssumptionViolation` on invalid triples.
    A game where Bob's channel dominates is Unclassified; swap labels first.
    """
    a = spec.triple_A.validated()
    b = spec.triple_B.validated()
    if a == b:
        return GameClass.Symmetric
    if _dominates(a, b):
        if b.p_near <= a.p_far:
            return GameClass.AsymmetricPureAtBob
        return GameClass.AsymmetricMixedOnly
    return GameClass.Unclassified


# --------------------------------------------------------------------------
# indifference systems


def _solve_side(m: UtilityMatrix, own: Sequence[int], other: Sequence[int], for_cols: bool):
    """Solve the mixture over ``other`` that equalises payoffs across ``own``.

    With ``for_cols`` the unknowns are column weights (q) making rows in
    ``own`` indifferent; otherwise row weights (p) making columns in ``own``
    indifferent. Returns (weights over ``other``, common value) or None.
    """
    k = len(other)
    A, b = [], []
    for i in own:
        if for_cols:
            coeffs = [m[i, j] for j in other]
        else:
            coeffs = [m[j, i] for j in other]
        A.append(coeffs + [-1])
        b.append(0)
    A.append([1] * k + [0])
    b.append(1)
    sol = solve_unique(A, b)
    if sol is None:
        return None
    return sol[:k], sol[k]


def _embed(weights, support, n, zero):
    out = [zero] * n
    for w, i in zip(weights, support):
        out[i] = w
    return tuple(out)


def _nonempty_subsets(n: int, max_size: int | None = None):
    top = n if max_size is None else min(n, max_size)
    for size in range(1, top + 1):
        yield from itertools.combinations(range(n), size)


def solve_support_enumeration(m: UtilityMatrix) -> Equilibrium:
    """First equilibrium over support pairs, ordered by size then lexicographically.

    Only square support pairs are tried: any other pair leaves one side's
    indifference system underdetermined, and square kernels suffice for
    matrix games. The returned profile is flagged ``degenerate`` when a
    strategy outside a support is also a best response or a supported
    strategy carries zero weight.
    """
    exact = m.exact
    tol = 0 if exact else FLOAT_MARGIN
    one, zero = _unit(m)
    n_rows, n_cols = m.shape
    for size in range(1, min(n_rows, n_cols) + 1):
        for I in itertools.combinations(range(n_rows), size):
            for J in itertools.combinations(range(n_cols), size):
                sq = _solve_side(m, I, J, for_cols=True)
                if sq is None or any(x < -tol for x in sq[0]):
                    continue
                sp = _solve_side(m, J, I, for_cols=False)
                if sp is None or any(x < -tol for x in sp[0]):
                    continue
                q = _embed(sq[0], J, n_cols, zero)
                p = _embed(sp[0], I, n_rows, zero)
                v = sq[1]
                rows = eve_payoffs(m, q)
                cols = legit_payoffs(m, p)
                if any(rows[r] > v + tol for r in range(n_rows) if r not in I):
                    continue
                if any(cols[c] < v - tol for c in range(n_cols) if c not in J):
                    continue
                degenerate = (
                    any(abs(rows[r] - v) <= tol for r in range(n_rows) if r not in I)
                    or any(abs(cols[c] - v) <= tol for c in range(n_cols) if c not in J)
                    or any(abs(x) <= tol for x in sq[0] + sp[0])
                )
                e = Equilibrium(p, q, v, m.rows, m.cols, degenerate=degenerate)
                return e.with_flags(verified=verify_equilibrium(m, e).ok)
    raise SolverError("no equilibrium found; matrix game must have one")  # pragma: no cover


# --------------------------------------------------------------------------
# proposition / verification enumeration on the 3x3 game

# Proposition order over Eve's supports: full, pairs, then singletons with
# Middle first. The legit side is enumerated in the mirrored order.
PROPOSITION_ORDER = ((0, 1, 2), (0, 1), (0, 2), (1, 2), (1,), (0,), (2,))


@dataclass(frozen=True)
class TraceStep:
    eve_support: tuple[int, ...]
    legit_support: tuple[int, ...]
    q: tuple | None
    p: tuple | None
    outcome: str

    def to_json(self, m: UtilityMatrix) -> dict:
        return {
            "eve_support": [m.rows[i].label for i in self.eve_support],
            "legit_support": [m.cols[j].label for j in self.legit_support],
            "q": None if self.q is None else format_vector(self.q),
            "p": None if self.p is None else format_vector(self.p),
            "outcome": self.outcome,
        }


def _run_propositions(m: UtilityMatrix, strict: bool, trace: list):
    exact = m.exact
    one, zero = _unit(m)

    def gt(a, b):
        if strict:
            try:
                return strictly_greater(a, b, exact=exact)
            except NumericallyAmbiguous:
                return False  # a tie within the margin; left to the weak pass
        return a >= b - (0 if exact else FLOAT_MARGIN)

    for P in PROPOSITION_ORDER:
        for Q in PROPOSITION_ORDER:
            sq = _solve_side(m, P, Q, for_cols=True)
            if sq is None:
                trace.append(TraceStep(P, Q, None, None, "no unique q solution"))
                continue
            q = _embed(sq[0], Q, 3, zero)
            v = sq[1]
            if not all(gt(x, 0) for x in sq[0]):
                trace.append(TraceStep(P, Q, q, None, "q infeasible"))
                continue
            rows = eve_payoffs(m, q)
            if not all(gt(v, rows[r]) for r in range(3) if r not in P):
                trace.append(TraceStep(P, Q, q, None, "excluded Eve row not worse"))
                continue
            sp = _solve_side(m, Q, P, for_cols=False)
            if sp is None:
                trace.append(TraceStep(P, Q, q, None, "no unique p solution"))
                continue
            p = _embed(sp[0], P, 3, zero)
            if not all(gt(x, 0) for x in sp[0]):
                trace.append(TraceStep(P, Q, q, p, "p does not match proposition"))
                continue
            cols = legit_payoffs(m, p)
            if not all(gt(cols[c], sp[1]) for c in range(3) if c not in Q):
                trace.append(TraceStep(P, Q, q, p, "excluded legit column not worse"))
                continue
            trace.append(TraceStep(P, Q, q, p, "equilibrium"))
            return p, q, v
    return None


def solve_algorithm1(m: UtilityMatrix) -> Equilibrium:
    """Proposition/verification search on a 3x3 matrix.

    For each proposed Eve support (in :data:`PROPOSITION_ORDER`) the legit
    mixture making the supported rows indifferent and the others strictly
    worse is solved for every candidate legit support; a feasible mixture
    is then verified by solving the mirrored system for Eve and checking it
    reproduces the proposed support. Inequalities are strict. If a tie-laden
    game defeats the strict pass, a weak pass runs and the result is
    flagged ``degenerate``.

    The full proposition trace is attached as ``trace``.
    """
    if m.shape != (3, 3):
        raise ArgumentError(f"expected a 3x3 matrix, got {m.shape}; use UtilityMatrix.extremes()")
    trace: list[TraceStep] = []
    found = _run_propositions(m, strict=True, trace=trace)
    degenerate = False
    if found is None:
        degenerate = True
        found = _run_propositions(m, strict=False, trace=trace)
    if found is None:
        raise SolverError("no proposition verified; arithmetic is inconsistent")
    p, q, v = found
    e = Equilibrium(p, q, v, m.rows, m.cols, degenerate=degenerate, trace=tuple(trace))
    report = verify_equilibrium(m, e)
    if not report.ok:
        raise SolverError("proposition search returned a profile failing verification")
    return e.with_flags(verified=True)


# --------------------------------------------------------------------------
# value by linear programming (vertex enumeration)


def game_value(m: UtilityMatrix):
    """max over Eve mixtures p of min over columns of p^T M.

    Solved as the LP ``max t`` s.t. ``t <= (p^T M)_c``, ``p >= 0``,
    ``sum(p) = 1`` by enumerating its vertices: every choice of ``R`` tight
    inequalities (R = number of rows) together with the normalisation.
    """
    exact = m.exact
    tol = 0 if exact else FLOAT_MARGIN
    n_rows, n_cols = m.shape
    # unknowns: p_0..p_{R-1}, t
    constraints = []
    for r in range(n_rows):
        constraints.append(("p", r))
    for c in range(n_cols):
        constraints.append(("col", c))
    best = None
    for tight in itertools.combinations(constraints, n_rows):
        A, b = [], []
        for kind, idx in tight:
            if kind == "p":
                A.append([1 if i == idx else 0 for i in range(n_rows)] + [0])
            else:
                A.append([m[i, idx] for i in range(n_rows)] + [-1])
            b.append(0)
        A.append([1] * n_rows + [0])
        b.append(1)
        sol = solve_unique(A, b)
        if sol is None:
            continue
        p, t = sol[:n_rows], sol[n_rows]
        if any(x < -tol for x in p):
            continue
        if any(t > sum(p[i] * m[i, c] for i in range(n_rows)) + tol for c in range(n_cols)):
            continue
        if best is None or t > best:
            best = t
    if best is None:  # pragma: no cover
        raise SolverError("LP has no feasible vertex")
    return best


def solve(spec: GameSpec, m: UtilityMatrix | None = None) -> dict:
    """Everything the ``solve`` command reports, as Python objects."""
    from .game import build_utility_matrix

    if m is None:
        m = build_utility_matrix(spec)
    cls = classify(spec)
    pure = find_pure_equilibria(m)
    if m.shape == (3, 3) and cls in (GameClass.AsymmetricMixedOnly, GameClass.AsymmetricPureAtBob):
        mixed = solve_algorithm1(m)
        method = "proposition-search"
    else:
        mixed = solve_support_enumeration(m)
        method = "support-enumeration"
    return {"class": cls, "matrix": m, "pure": pure, "mixed": mixed, "method": method, "value": mixed.value}
