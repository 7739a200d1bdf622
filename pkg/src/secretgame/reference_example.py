"""The published N=2 asymmetric worked example, recomputed exactly.

Inputs: Alice (0.99, 0.94, 0.80), Bob (0.90, 0.84, 0.70). The published
reduced payoffs are reproduced next to the recomputed ones; two of the
legit-side coefficients do not follow from the inputs, and the published
Eve mixture inherits that slip.
"""

from __future__ import annotations

from fractions import Fraction as F

from .channel import ChannelTriple
from .game import GameSpec, UtilityMatrix, build_utility_matrix
from .numeric import format_number, format_vector
from .solver import game_value, solve_algorithm1, solve_support_enumeration, verify_equilibrium

ALICE = ChannelTriple.of("0.99", "0.94", "0.80")
BOB = ChannelTriple.of("0.90", "0.84", "0.70")
SPEC = GameSpec(2, ALICE, BOB)

# (coef of first weight, coef of second weight, constant), third weight eliminated
PUBLISHED_EVE = {
    "NearAlice": (F("0.4901"), F("0.203"), F("0.49")),
    "Middle": (F("0.178"), F("0.084"), F("0.7056")),
    "NearBob": (F("-0.17"), F("-0.09"), F("0.81")),
}
PUBLISHED_LEGIT = {
    "AliceHeavy(0)": (F("-0.3401"), F("-0.2364"), F("-0.64")),
    "Split": (F("0.027"), F("-0.0504"), F("-0.72")),
    "BobHeavy(0)": (F("0.32"), F("0.1044"), F("-0.81")),
}
PUBLISHED_Q = (F(0), F("0.6"), F("0.4"))
PUBLISHED_P = (F(0), F("0.5814"), F("0.4186"))
PUBLISHED_FULL_SUPPORT_Q = (F("1.946"), F("-3.292"), F("2.346"))


def eve_coefficients(m: UtilityMatrix) -> dict:
    """Eve's payoff per row as ``a*q1 + b*q2 + c`` with ``q3 = 1 - q1 - q2``."""
    out = {}
    for s, row in zip(m.rows, m.entries):
        out[s.label] = (row[0] - row[2], row[1] - row[2], row[2])
    return out


def legit_coefficients(m: UtilityMatrix) -> dict:
    """Legit payoff (negated capture) per column as ``a*p1 + b*p2 + c`` with ``p3 = 1 - p1 - p2``."""
    out = {}
    for j, s in enumerate(m.cols):
        col = m.column(j)
        out[s.label] = (-(col[0] - col[2]), -(col[1] - col[2]), -col[2])
    return out


def _p_from_published_split_row() -> F:
    # Split == BobHeavy(0) with p1 = 0 using the published coefficients
    _, b_split, c_split = PUBLISHED_LEGIT["Split"]
    _, b_bob, c_bob = PUBLISHED_LEGIT["BobHeavy(0)"]
    return (c_bob - c_split) / (b_split - b_bob)


def _coef_table(recomputed: dict, published: dict) -> list[dict]:
    rows = []
    for label, rec in recomputed.items():
        pub = published[label]
        rows.append({
            "strategy": label,
            "recomputed": format_vector(rec),
            "published": format_vector(pub),
            "match": tuple(rec) == tuple(pub),
            "mismatched_terms": [i for i, (a, b) in enumerate(zip(rec, pub)) if a != b],
        })
    return rows


def reproduce() -> dict:
    m = build_utility_matrix(SPEC)
    eq = solve_algorithm1(m)
    oracle = solve_support_enumeration(m)
    value = game_value(m)
    ours = verify_equilibrium(m, (eq.p, eq.q))
    published = verify_equilibrium(m, (PUBLISHED_P, PUBLISHED_Q))
    full = next(t for t in eq.trace if len(t.eve_support) == 3 and len(t.legit_support) == 3)
    return {
        "inputs": SPEC.to_json(),
        "matrix": m.to_json(),
        "eve_coefficients": _coef_table(eve_coefficients(m), PUBLISHED_EVE),
        "legit_coefficients": _coef_table(legit_coefficients(m), PUBLISHED_LEGIT),
        "full_support_proposition": {
            "q": format_vector(full.q),
            "q_approx": [round(float(x), 3) for x in full.q],
            "published_q": format_vector(PUBLISHED_FULL_SUPPORT_Q),
            "outcome": full.outcome,
        },
        "proposition_trace": [t.to_json(m) for t in eq.trace],
        "q": format_vector(eq.q),
        "q_matches_published": eq.q == PUBLISHED_Q,
        "p_candidates": [
            {
                "source": "recomputed",
                "p": format_vector(eq.p),
                "p_approx": [round(float(x), 4) for x in eq.p],
                "verification": ours.to_json(m),
            },
            {
                "source": "published",
                "p": format_vector(PUBLISHED_P),
                "derived_from_published_coefficients": format_number(_p_from_published_split_row()),
                "verification": published.to_json(m),
            },
        ],
        "value": format_number(eq.value),
        "support_enumeration_value": format_number(oracle.value),
        "lp_value": format_number(value),
    }
