"""Command-line front end.

Exit codes: 0 success, 1 validation/domain failure, 2 usage or parse error.

Config file (JSON)::

    {
      "N": 2,
      "alice": {"family": "explicit-triple", "p_near": "0.99", "p_mid": "0.94", "p_far": "0.80"},
      "bob":   {"family": "explicit-triple", "p_near": "0.90", "p_mid": "0.84", "p_far": "0.70"},
      "geometry": {"D": "60", "epsilon": "10"},
      "simulate": {"legit": "Split", "eve": "NearAlice", "trials": 100000},
      "sweep": {"param": "bob.p_near", "start": "0.70", "stop": "0.90", "step": "0.01"}
    }

``geometry`` is only needed for parametric channel families
(``concave-quadratic``, ``table-interpolated``). ``simulate.legit`` and
``simulate.eve`` take a strategy label or a probability vector; the string
``"equilibrium"`` for both uses the solved mixed equilibrium.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any

from . import reference_example
from .channel import (
    ChannelError,
    ChannelModel,
    ChannelTriple,
    GeometryParams,
    sample_triple,
    validate_assumption,
)
from .game import EveStrategy, GameError, GameSpec, LegitStrategy, build_utility_matrix
from .numeric import NumericallyAmbiguous, format_number, parse_number
from .sim import SimulationConfig, report_csv, simulate_exchange
from .solver import ArgumentError, solve, verify_equilibrium

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    """Malformed config; maps to exit code 2."""


class InvalidInput(ValueError):
    """Well-formed config describing an invalid game; maps to exit code 1."""


# --------------------------------------------------------------------------
# config parsing


def load_config(path: str | None) -> dict:
    if path is None:
        raise ConfigError("--config is required for this command")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return cfg


def _field(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"{where}: missing field {key!r}")
    return obj[key]


def _number(value, where: str):
    try:
        return parse_number(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: not a number: {value!r}") from None


def parse_triples(cfg: dict) -> tuple[ChannelTriple, ChannelTriple]:
    """Alice's and Bob's triples, sampled from models when parametric. Not validated."""
    geometry = None
    if "geometry" in cfg:
        g = cfg["geometry"]
        try:
            geometry = GeometryParams(_number(_field(g, "D", "geometry"), "geometry.D"),
                                      _number(_field(g, "epsilon", "geometry"), "geometry.epsilon"))
        except ChannelError as exc:
            raise ConfigError(f"geometry: {exc}") from None
    out = []
    for who in ("alice", "bob"):
        desc = _field(cfg, who, "config")
        if not isinstance(desc, dict):
            raise ConfigError(f"{who}: channel descriptor must be an object")
        family = desc.get("family", "explicit-triple")
        try:
            if family == "explicit-triple":
                for k in ("p_near", "p_mid", "p_far"):
                    _number(_field(desc, k, who), f"{who}.{k}")
                out.append(ChannelTriple.from_json(desc))
            else:
                if geometry is None:
                    raise ConfigError(f"{who}: family {family!r} needs a 'geometry' block")
                params = dict(desc)
                if family == "concave-quadratic":
                    for k in ("a", "b"):
                        _number(_field(desc, k, who), f"{who}.{k}")
                out.append(sample_triple(ChannelModel.from_json(params, geometry), geometry))
        except ChannelError as exc:
            raise InvalidInput(f"{who}: {exc}") from None
        except KeyError as exc:
            raise ConfigError(f"{who}: missing field {exc.args[0]!r}") from None
    return out[0], out[1]


def parse_spec(cfg: dict, mode: str = "rational") -> GameSpec:
    a, b = parse_triples(cfg)
    N = _field(cfg, "N", "config")
    if isinstance(N, bool) or not isinstance(N, int):
        raise ConfigError(f"config.N: expected an integer, got {N!r}")
    try:
        spec = GameSpec(N, a, b, max_N=int(cfg.get("max_N", 64)))
    except GameError as exc:
        raise ConfigError(f"config.N: {exc}") from None
    return spec.as_float() if mode == "float" else spec


def _require_valid(spec: GameSpec) -> None:
    report = validate_assumption(spec.triple_A, spec.triple_B)
    if not report.ok:
        raise InvalidInput("; ".join(v for c in report.checks for v in c.violations))


# --------------------------------------------------------------------------
# output


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    a, b = parse_triples(cfg)
    report = validate_assumption(a, b)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sender", "assumption_iii", "assumption_iv", "in_range", "violations"])
        for c in report.checks:
            w.writerow([c.sender, c.part_iii, c.part_iv, c.in_range, " | ".join(c.violations)])
        _emit(args, buf.getvalue())
    else:
        _emit(args, _dump(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_INVALID


def solve_summary(spec: GameSpec) -> dict:
    result = solve(spec)
    m = result["matrix"]
    mixed = result["mixed"]
    return {
        "class": result["class"].value,
        "matrix": m.to_json(),
        "pure": [e.to_json()["profile"] for e in result["pure"]],
        "mixed": mixed.to_json(),
        "method": result["method"],
        "value": format_number(result["value"]),
        "verification": verify_equilibrium(m, mixed).to_json(m),
    }


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    spec = parse_spec(cfg, args.mode)
    _require_valid(spec)
    out = solve_summary(spec)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class", "value", "pure", "p", "q", "verified", "degenerate"])
        w.writerow([
            out["class"], out["value"],
            " ".join(f"{e['eve']}/{e['legit']}" for e in out["pure"]),
            " ".join(out["mixed"]["p"]), " ".join(out["mixed"]["q"]),
            out["mixed"]["verified"], out["mixed"]["degenerate"],
        ])
        _emit(args, buf.getvalue())
    else:
        _emit(args, _dump(out))
    return EXIT_OK


def _parse_choice(value, kind: str, spec: GameSpec, where: str):
    if isinstance(value, str):
        try:
            return EveStrategy.parse(value) if kind == "eve" else LegitStrategy.parse(value)
        except GameError as exc:
            raise InvalidInput(f"{where}: {exc}") from None
    if isinstance(value, list):
        return tuple(_number(x, f"{where}[{i}]") for i, x in enumerate(value))
    raise ConfigError(f"{where}: expected a strategy label or a probability list")


def build_sim_config(cfg: dict, spec: GameSpec, args) -> SimulationConfig:
    sim = cfg.get("simulate", {})
    legit_raw = args.legit if args.legit is not None else sim.get("legit")
    eve_raw = args.eve if args.eve is not None else sim.get("eve")
    if legit_raw is None or eve_raw is None:
        raise ConfigError("simulate: both 'legit' and 'eve' are required")
    if legit_raw == "equilibrium" or eve_raw == "equilibrium":
        _require_valid(spec)
        mixed = solve(spec)["mixed"]
        legit = mixed.q if legit_raw == "equilibrium" else _parse_choice(legit_raw, "legit", spec, "simulate.legit")
        eve = mixed.p if eve_raw == "equilibrium" else _parse_choice(eve_raw, "eve", spec, "simulate.eve")
    else:
        legit = _parse_choice(legit_raw, "legit", spec, "simulate.legit")
        eve = _parse_choice(eve_raw, "eve", spec, "simulate.eve")
    trials = args.trials if args.trials is not None else sim.get("trials", 100_000)
    seed = args.seed if args.seed is not None else sim.get("seed", 0)
    try:
        return SimulationConfig(spec, legit, eve, int(trials), int(seed), int(sim.get("payload_bits", 32)))
    except ArgumentError as exc:
        raise InvalidInput(f"simulate: {exc}") from None


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    spec = parse_spec(cfg)
    sim_cfg = build_sim_config(cfg, spec, args)
    mode = cfg.get("simulate", {}).get("mode", "probability")
    report = simulate_exchange(sim_cfg, partitions=args.partitions, mode=mode)
    if args.format == "csv":
        _emit(args, report_csv([report]))
    else:
        _emit(args, json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_repro(args) -> int:
    report = reference_example.reproduce()
    if args.format == "csv":
        m = build_utility_matrix(reference_example.SPEC)
        _emit(args, m.to_csv())
    else:
        _emit(args, _dump(report))
    return EXIT_OK


SWEEP_FIELDS = ("p_near", "p_mid", "p_far")
SWEEP_HEADER = ["index", "param", "value", "valid", "class", "class_change", "game_value",
                "pure", "p", "q", "method", "error"]


def _grid(start: Fraction, stop: Fraction, step: Fraction) -> list:
    if step <= 0:
        raise ConfigError("sweep.step must be positive")
    if stop < start:
        raise ConfigError("sweep.stop must be >= sweep.start")
    out, x = [], start
    while x <= stop:
        out.append(x)
        x += step
    return out


def sweep_rows(cfg: dict, param: str, grid: list, mode: str) -> list[dict]:
    who, _, fld = param.partition(".")
    if who not in ("alice", "bob") or fld not in SWEEP_FIELDS:
        raise ConfigError(f"sweep.param must be alice|bob . {'|'.join(SWEEP_FIELDS)}, got {param!r}")
    base_a, base_b = parse_triples(cfg)
    N = _field(cfg, "N", "config")
    rows = []
    previous = None
    for i, x in enumerate(grid):
        a, b = base_a, base_b
        if who == "alice":
            a = ChannelTriple(**{**a.__dict__, fld: x})
        else:
            b = ChannelTriple(**{**b.__dict__, fld: x})
        row = {"index": i, "param": param, "value": format_number(x), "valid": True, "class": "",
               "class_change": False, "game_value": "", "pure": "", "p": "", "q": "", "method": "", "error": ""}
        try:
            spec = GameSpec(N, a, b)
            if mode == "float":
                spec = spec.as_float()
            _require_valid(spec)
            summary = solve_summary(spec)
        except (InvalidInput, GameError, NumericallyAmbiguous) as exc:
            row.update(valid=False, error=str(exc))
            rows.append(row)
            continue
        row.update(
            {"class": summary["class"], "game_value": summary["value"], "method": summary["method"],
             "pure": " ".join(f"{e['eve']}/{e['legit']}" for e in summary["pure"]),
             "p": " ".join(summary["mixed"]["p"]), "q": " ".join(summary["mixed"]["q"])}
        )
        row["class_change"] = previous is not None and previous != summary["class"]
        previous = summary["class"]
        rows.append(row)
    return rows


def boundaries(rows: list[dict]) -> list[dict]:
    """Consecutive valid grid points where the game class flips."""
    valid = [r for r in rows if r["valid"]]
    out = []
    for a, b in zip(valid, valid[1:]):
        if a["class"] != b["class"]:
            out.append({"after": a["value"], "at": b["value"], "from": a["class"], "to": b["class"]})
    return out


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    sw = dict(cfg.get("sweep", {}))
    for k in ("param", "start", "stop", "step"):
        v = getattr(args, k)
        if v is not None:
            sw[k] = v
    param = _field(sw, "param", "sweep")
    start = _number(_field(sw, "start", "sweep"), "sweep.start")
    stop = _number(sw.get("stop", sw["start"]), "sweep.stop")
    step = _number(sw.get("step", "1"), "sweep.step")
    rows = sweep_rows(cfg, param, _grid(Fraction(start), Fraction(stop), Fraction(step)), args.mode)
    if args.format == "json":
        _emit(args, _dump({"rows": rows, "boundaries": boundaries(rows)}))
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=SWEEP_HEADER, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _emit(args, buf.getvalue())
        for bnd in boundaries(rows):
            print(f"class boundary between {bnd['after']} and {bnd['at']}: {bnd['from']} -> {bnd['to']}",
                  file=sys.stderr)
    return EXIT_OK if all(r["valid"] for r in rows) else EXIT_INVALID


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="game config JSON")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--mode", choices=("rational", "float"), default="rational")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--out", help="write output here instead of stdout")

    ap = argparse.ArgumentParser(prog="secretgame", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check channel admissibility").set_defaults(func=cmd_validate)
    sub.add_parser("solve", parents=[common], help="classify and solve the game").set_defaults(func=cmd_solve)
    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo packet exchange")
    p.add_argument("--legit", help="legit strategy label (overrides config)")
    p.add_argument("--eve", help="Eve strategy label (overrides config)")
    p.add_argument("--partitions", type=int, default=1)
    p.set_defaults(func=cmd_simulate)
    p = sub.add_parser("sweep", parents=[common], help="re-solve over a parameter grid")
    for k in ("param", "start", "stop", "step"):
        p.add_argument(f"--{k}")
    p.set_defaults(func=cmd_sweep, default_format="csv")
    sub.add_parser("repro-paper-example", parents=[common],
                   help="recompute the N=2 worked example").set_defaults(func=cmd_repro)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.format is None:
        args.format = getattr(args, "default_format", "json")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInput, ChannelError, GameError, ArgumentError, NumericallyAmbiguous) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
