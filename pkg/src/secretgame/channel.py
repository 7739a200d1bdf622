"""Distance-dependent packet success probabilities and their admissibility.

Only three distances matter to the game: ``epsilon`` (Eve next to the
sender), ``D/2`` (Eve in the middle) and ``D - epsilon`` (Eve next to the
receiver). A :class:`ChannelTriple` stores the sender's success probability
at those three points; parametric :class:`ChannelModel` families are a
convenience that must produce an admissible triple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .numeric import Number, all_exact, format_number, is_exact, parse_number

FAMILIES = ("explicit-triple", "concave-quadratic", "table-interpolated")

ASSUMPTION_NOTES = (
    "Assumption 1(i): packet transmissions are independent (contract honoured by the simulator).",
    "Assumption 1(ii): success probabilities are time-invariant (fixed for a whole run).",
)


class ChannelError(ValueError):
    """Base class for channel-related failures."""


class DomainError(ChannelError):
    """A distance outside the model's domain was queried."""


class AssumptionViolation(ChannelError):
    """A triple fails one of the checkable parts of Assumption 1."""

    def __init__(self, part: str, detail: str):
        self.part = part
        self.detail = detail
        super().__init__(f"Assumption 1({part}) violated: {detail}")


@dataclass(frozen=True)
class GeometryParams:
    D: Number
    epsilon: Number

    def __post_init__(self):
        if not self.D > 0:
            raise ChannelError(f"D must be positive, got {self.D}")
        if not 0 < 2 * self.epsilon < self.D:
            raise ChannelError(f"epsilon must lie in (0, D/2), got {self.epsilon} with D={self.D}")

    @classmethod
    def of(cls, D, epsilon) -> "GeometryParams":
        return cls(parse_number(D), parse_number(epsilon))

    @property
    def distances(self) -> tuple:
        half = Fraction(self.D) / 2 if is_exact(self.D) else self.D / 2
        return (self.epsilon, half, self.D - self.epsilon)


@dataclass(frozen=True)
class ChannelTriple:
    """Success probabilities at distances ``epsilon``, ``D/2`` and ``D - epsilon``."""

    p_near: Number
    p_mid: Number
    p_far: Number

    @classmethod
    def of(cls, p_near, p_mid, p_far) -> "ChannelTriple":
        return cls(parse_number(p_near), parse_number(p_mid), parse_number(p_far))

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "ChannelTriple":
        fam = obj.get("family", "explicit-triple")
        if fam != "explicit-triple":
            raise ChannelError(f"expected family 'explicit-triple', got {fam!r}")
        try:
            return cls.of(obj["p_near"], obj["p_mid"], obj["p_far"])
        except KeyError as exc:
            raise ChannelError(f"channel descriptor missing field {exc.args[0]!r}") from None

    def to_json(self) -> dict:
        return {
            "family": "explicit-triple",
            "p_near": format_number(self.p_near),
            "p_mid": format_number(self.p_mid),
            "p_far": format_number(self.p_far),
        }

    @property
    def exact(self) -> bool:
        return all_exact(self.as_tuple())

    def as_tuple(self) -> tuple:
        return (self.p_near, self.p_mid, self.p_far)

    def as_float(self) -> "ChannelTriple":
        return ChannelTriple(float(self.p_near), float(self.p_mid), float(self.p_far))

    def map(self, fn) -> "ChannelTriple":
        return ChannelTriple(fn(self.p_near), fn(self.p_mid), fn(self.p_far))

    def violations(self) -> list[tuple[str, str]]:
        """(part, violated inequality) pairs; empty when admissible."""
        out = []
        for name, v in zip(("p_near", "p_mid", "p_far"), self.as_tuple()):
            if not 0 < v < 1:
                out.append(("range", f"{name}={format_number(v)} not in (0, 1)"))
        n, m, f = self.as_tuple()
        if not (n > m > f):
            out.append(("iii", f"need {format_number(n)} > {format_number(m)} > {format_number(f)}"))
        if not 2 * m > n + f:
            out.append(
                ("iv", f"need {format_number(m)} > ({format_number(n)} + {format_number(f)})/2"
                       f" = {format_number((n + f) / 2)}")
            )
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def validated(self) -> "ChannelTriple":
        """Return self, or raise :class:`AssumptionViolation` on the first failure."""
        bad = self.violations()
        if bad:
            part, detail = bad[0]
            raise AssumptionViolation(part, detail)
        return self


@dataclass(frozen=True)
class ChannelModel:
    """A success-probability curve p(d) over the distance domain (0, D].

    ``params`` by family:

    * ``explicit-triple``: ``triple`` and ``geometry`` (only the three game
      distances are defined)
    * ``concave-quadratic``: ``a``, ``b`` with p(d) = a - b*d**2
    * ``table-interpolated``: ``points``, sorted (distance, probability)
      pairs, linearly interpolated
    """

    family: str
    params: Mapping[str, Any]
    D: Number

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ChannelError(f"unknown channel family {self.family!r}")
        if not self.D > 0:
            raise ChannelError("domain bound D must be positive")
        if self.family == "concave-quadratic":
            a, b = self.params["a"], self.params["b"]
            if b < 0:
                raise ChannelError("concave-quadratic needs b >= 0")
            # p is decreasing on (0, D]: sup is a (open end), inf is p(D)
            if not (a <= 1 and a > 0 and a - b * self.D * self.D > 0):
                raise ChannelError("concave-quadratic parameters leave (0, 1) on the domain")
            if a == 1 and b == 0:
                raise ChannelError("concave-quadratic parameters leave (0, 1) on the domain")
        elif self.family == "table-interpolated":
            pts = self.params["points"]
            if len(pts) < 2:
                raise ChannelError("table needs at least two points")
            ds = [d for d, _ in pts]
            if ds != sorted(ds) or len(set(ds)) != len(ds):
                raise ChannelError("table distances must be strictly increasing")
            if any(not 0 < p < 1 for _, p in pts):
                raise ChannelError("table probabilities must lie in (0, 1)")
        elif self.family == "explicit-triple":
            geom = self.params["geometry"]
            if geom.D != self.D:
                raise ChannelError("explicit-triple geometry must match the domain bound")

    @classmethod
    def explicit(cls, triple: ChannelTriple, geometry: GeometryParams) -> "ChannelModel":
        return cls("explicit-triple", {"triple": triple, "geometry": geometry}, geometry.D)

    @classmethod
    def quadratic(cls, a, b, D) -> "ChannelModel":
        return cls("concave-quadratic", {"a": parse_number(a), "b": parse_number(b)}, parse_number(D))

    @classmethod
    def table(cls, points, D) -> "ChannelModel":
        pts = tuple((parse_number(d), parse_number(p)) for d, p in points)
        return cls("table-interpolated", {"points": pts}, parse_number(D))

    @classmethod
    def from_json(cls, obj: Mapping[str, Any], geometry: GeometryParams | None) -> "ChannelModel":
        fam = obj.get("family")
        if fam == "explicit-triple":
            if geometry is None:
                raise ChannelError("explicit-triple model needs a geometry")
            return cls.explicit(ChannelTriple.from_json(obj), geometry)
        D = obj.get("D", geometry.D if geometry else None)
        if D is None:
            raise ChannelError("parametric channel needs a domain bound D")
        if fam == "concave-quadratic":
            return cls.quadratic(obj["a"], obj["b"], D)
        if fam == "table-interpolated":
            return cls.table(obj["points"], D)
        raise ChannelError(f"unknown channel family {fam!r}")

    def success_probability(self, d) -> Number:
        if not 0 < d <= self.D:
            raise DomainError(f"distance {d} outside (0, {self.D}]")
        if self.family == "explicit-triple":
            geom = self.params["geometry"]
            for dist, p in zip(geom.distances, self.params["triple"].as_tuple()):
                if d == dist:
                    return p
            raise DomainError(f"explicit-triple model defined only at {geom.distances}, not {d}")
        if self.family == "concave-quadratic":
            return self.params["a"] - self.params["b"] * d * d
        pts = self.params["points"]
        if d < pts[0][0] or d > pts[-1][0]:
            raise DomainError(f"distance {d} outside table range [{pts[0][0]}, {pts[-1][0]}]")
        for (d0, p0), (d1, p1) in zip(pts, pts[1:]):
            if d0 <= d <= d1:
                return p0 + (p1 - p0) * (d - d0) / (d1 - d0)
        raise DomainError(f"distance {d} not covered by table")  # pragma: no cover


def success_probability(model: ChannelModel, d) -> Number:
    return model.success_probability(d)


def sample_triple(model: ChannelModel, geom: GeometryParams) -> ChannelTriple:
    """Evaluate ``model`` at epsilon, D/2 and D - epsilon without validating."""
    return ChannelTriple(*(model.success_probability(d) for d in geom.distances))


def triple_from_model(model: ChannelModel, geom: GeometryParams) -> ChannelTriple:
    """Sample ``model`` at the three game distances and validate the result."""
    return sample_triple(model, geom).validated()


@dataclass(frozen=True)
class SenderCheck:
    sender: str
    part_iii: bool
    part_iv: bool
    in_range: bool
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.part_iii and self.part_iv and self.in_range


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[SenderCheck, ...]
    notes: tuple[str, ...] = ASSUMPTION_NOTES

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "senders": {
                c.sender: {
                    "Assumption 1(iii)": c.part_iii,
                    "Assumption 1(iv)": c.part_iv,
                    "range (0,1)": c.in_range,
                    "violations": list(c.violations),
                }
                for c in self.checks
            },
            "notes": list(self.notes),
        }


def _check(sender: str, t: ChannelTriple) -> SenderCheck:
    bad = t.violations()
    parts = {p for p, _ in bad}
    return SenderCheck(
        sender=sender,
        part_iii="iii" not in parts,
        part_iv="iv" not in parts,
        in_range="range" not in parts,
        violations=tuple(
            f"Assumption 1({p}): {d}" if p != "range" else d for p, d in bad
        ),
    )


def validate_assumption(triple_A: ChannelTriple, triple_B: ChannelTriple) -> ValidationReport:
    return ValidationReport((_check("alice", triple_A), _check("bob", triple_B)))
