"""Command-line front end.

Every run prints (or writes to ``--output``) a JSON document holding the
resolved configuration and the result.  Floats are written with 9
significant digits.  Exit codes: 0 success, 2 invalid input, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import bounds, exact_search, jacobi, leja
from .errors import (
    BudgetTooSmall,
    DomainError,
    EmptyDomain,
    LengthMismatch,
    ModeUnavailable,
    NonConvergence,
    PointInSupport,
    SingularNodes,
)
from .polycore import FactorWeight, IntervalUnion, IntPoly, RationalPoint, pullback_scale, split_factor_specs

THREADS_ENV = "INTCHEB_THREADS"

VALIDATION_ERRORS = (DomainError, LengthMismatch, ModeUnavailable, BudgetTooSmall, SingularNodes, ValueError)
NUMERICAL_ERRORS = (NonConvergence, EmptyDomain, PointInSupport, ArithmeticError)

GRAMMAR = {
    "domain": "LO:HI[,LO:HI...] with decimal or fractional endpoints, e.g. 0:1/4",
    "poly": "ascending integer coefficients '-1,5' or an expression '5z-1'",
    "weight": "POLY:EXPONENT[,POLY:EXPONENT...], e.g. 'z:0.58,4z-1:0.09'",
    "factors": "POLY:MULT[:SCALE][,...] where MULT is * (swept) or a number, e.g. 'z:*,4z-1:*'",
    "zetas": "comma-separated rationals, e.g. '0,1/4,1/5' (re:im for complex points)",
    "box": "LO:HI per swept coordinate, comma separated, e.g. '0.29:0.37,0.09:0.18'",
}


# ---------------------------------------------------------------------------
# Argument types
# ---------------------------------------------------------------------------


def _typed(kind, fn):
    def parse(text):
        try:
            fn(text)
        except Exception as exc:  # report the grammar, not a traceback
            raise argparse.ArgumentTypeError(f"{text!r} is not valid ({exc}); expected {GRAMMAR[kind]}") from exc
        return text

    parse.__name__ = kind
    return parse


def _parse_zetas(text: str) -> list[RationalPoint]:
    return [RationalPoint.parse(t) for t in text.split(",") if t.strip()]


def _parse_box(text: str) -> list[tuple[float, float]]:
    out = []
    for part in text.split(","):
        lo, hi = part.split(":")
        out.append((float(Fraction(lo)), float(Fraction(hi))))
    return out


class FactorSpec:
    """One entry of a ``--factors`` list: polynomial, multiplicity or ``*``, scale."""

    def __init__(self, poly: IntPoly, mult: float | None, scale: float):
        self.poly, self.mult, self.scale = poly, mult, scale


def parse_factor_specs(text: str, domain: IntervalUnion) -> list[FactorSpec]:
    """Scale defaults to the [0,1/4] table value on that interval and to 1 elsewhere."""
    out = []
    for poly_text, rest in split_factor_specs(text):
        poly = IntPoly.parse(poly_text)
        fields = rest.split(":")
        mult = None if fields[0].strip() == "*" else float(fields[0])
        if len(fields) > 1:
            scale = float(Fraction(fields[1]))
        else:
            s = pullback_scale(poly) if domain == bounds.QUARTER_INTERVAL else None
            scale = float(s) if s is not None else 1.0
        out.append(FactorSpec(poly, mult, scale))
    if not out:
        raise ValueError("no factors given")
    return out


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file whose keys mirror the long flag names")
    p.add_argument("--output", help="write the full report here; stdout then gets a one-line summary")
    p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="intcheb", description="Bounds for integer Chebyshev constants.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equilibrium", help="closed-form two-factor equilibrium data on [0,1/4]")
    _common(p)
    p.add_argument("--alpha1", type=float, required=True)
    p.add_argument("--alpha2", type=float, required=True)

    p = sub.add_parser("leja", help="weighted Leja sequence and its estimators")
    _common(p)
    p.add_argument("--domain", type=_typed("domain", IntervalUnion.parse), default="0:1/4")
    p.add_argument("--weight", type=_typed("weight", FactorWeight.parse), default="")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--grid-density", type=float, default=leja.DEFAULT_GRID_DENSITY)
    p.add_argument("--zetas", type=_typed("zetas", _parse_zetas), default="")

    p = sub.add_parser("bound", help="a single upper or lower bound")
    _common(p)
    p.add_argument("side", choices=["upper", "lower"])
    p.add_argument("--method", choices=["fekete", "weighted", "robin", "rational-point", "trigub"])
    p.add_argument("--domain", type=_typed("domain", IntervalUnion.parse), default="0:1/4")
    p.add_argument("--weight", type=_typed("weight", FactorWeight.parse), default="")
    p.add_argument("--mode", choices=["closedForm", "leja"], default="leja")
    p.add_argument("--n", type=int, default=4000)
    p.add_argument("--grid-density", type=float, default=leja.DEFAULT_GRID_DENSITY)
    p.add_argument("--zetas", type=_typed("zetas", _parse_zetas), default="")
    p.add_argument("--m", type=int, default=1, help="Trigub interval index")

    for name, helptext in (("sweep", "lattice optimization over multiplicities"), ("region", "feasibility lattice")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--factors", required=True, type=_typed("factors", lambda t: split_factor_specs(t) or 1 / 0))
        p.add_argument("--domain", type=_typed("domain", IntervalUnion.parse), default="0:1/4")
        p.add_argument("--zetas", type=_typed("zetas", _parse_zetas), default="")
        p.add_argument("--step", type=float, required=True)
        p.add_argument("--box", type=_typed("box", _parse_box))
        p.add_argument("--mode", choices=["auto", "closedForm", "leja"], default="auto")
        p.add_argument("--n", type=int, default=2000)
        p.add_argument("--grid-density", type=float, default=20_000)
        if name == "sweep":
            p.add_argument("--kind", choices=["lower", "upper"], default="lower")
            p.add_argument("--refine", type=int, default=3)
        else:
            p.add_argument("--m", type=float, default=bounds.DEFAULT_M)
            p.add_argument("--strategy", choices=["full", "flood"], default="full")
            p.add_argument("--seed", type=_typed("box", lambda t: [float(Fraction(x)) for x in t.split(",")]))
            p.set_defaults(format="csv")

    p = sub.add_parser("exact", help="small-degree integer Chebyshev search")
    _common(p)
    p.add_argument("--domain", type=_typed("domain", IntervalUnion.parse), default="0:1")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--budget", type=float)
    p.add_argument("--max-degree", type=int, default=exact_search.DEFAULT_MAX_DEGREE)

    p = sub.add_parser("lemniscate", help="t_Z of a lemniscate |V(z)| = r")
    _common(p)
    p.add_argument("--poly", required=True, type=_typed("poly", IntPoly.parse))
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--irreducible", action="store_true")

    p = sub.add_parser("construct", help="small integer polynomial from Leja nodes and lattice reduction")
    _common(p)
    p.add_argument("--domain", type=_typed("domain", IntervalUnion.parse), default="0:1")
    p.add_argument("--weight", type=_typed("weight", FactorWeight.parse), default="")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--grid-density", type=float, default=20_000)
    return ap


def _subparser(ap: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in ap._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _config_tokens(sub: argparse.ArgumentParser, cfg: dict) -> tuple[list[str], list[str]]:
    """Turn a config mapping into (positional, flag) tokens for ``sub``."""
    by_dest = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    positional, tokens = [], []
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest == "command" or value is None:
            continue
        if dest not in by_dest:
            raise ValueError(f"unknown key {key!r}")
        action = by_dest[dest]
        if not action.option_strings:
            positional.append(str(value))
        elif isinstance(action, argparse._StoreTrueAction):
            if value:
                tokens.append(action.option_strings[-1])
        else:
            tokens += [action.option_strings[-1], str(value)]
    return positional, tokens


def _config_path(argv: list[str]) -> str | None:
    for i, t in enumerate(argv):
        if t == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if t.startswith("--config="):
            return t.split("=", 1)[1]
    return None


def _resolve(ap: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    """Parse argv; a ``--config`` file supplies flags that explicit ones override."""
    path = _config_path(argv)
    if path is None:
        return ap.parse_args(argv)
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        ap.error("--config: expected a JSON object mirroring the flag names")
    if argv and argv[0] in COMMANDS:
        command, rest = argv[0], argv[1:]
    else:
        command, rest = cfg.get("command"), argv
    if command not in COMMANDS:
        ap.error(f"--config: no subcommand given (choose from {', '.join(COMMANDS)})")
    sub = _subparser(ap, command)
    try:
        positional, tokens = _config_tokens(sub, cfg)
    except ValueError as exc:
        ap.error(f"--config: {exc}")
    if any(t in ("upper", "lower") for t in rest):
        positional = []
    # later occurrences win in argparse, so explicit flags override the file
    return ap.parse_args([command] + positional + tokens + rest)


def resolved_config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("config", "output")}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def cmd_equilibrium(a):
    p = jacobi.TwoFactorParams(a.alpha1, a.alpha2)
    S = jacobi.support_endpoints(p)
    F = jacobi.robin_constant(p)
    cap = jacobi.weighted_capacity(p)
    out = {"a": S.a, "b": S.b, "delta": S.delta, "F_w": F, "alpha": p.alpha_total, "capacity": cap.value}
    out["upper_bound"] = cap.value ** (p.normalizer / 2)
    out["robin_lower_bound"] = math.exp(-p.normalizer * F)
    gaps = {}
    if p.alpha1 > 0:
        gaps["0"] = jacobi.potential_gap(p, 0.0)
    if p.alpha2 > 0:
        gaps["1/4"] = jacobi.potential_gap(p, 0.25)
    out["potential_gap"] = gaps
    out["rational_point_bounds"] = {
        k: bounds.constraint_value(p.alpha_total, RationalPoint.parse(k).q, g) for k, g in gaps.items()
    }
    return out, None


def cmd_leja(a):
    E, w = IntervalUnion.parse(a.domain), FactorWeight.parse(a.weight)
    seq = leja.leja_sequence(E, w, a.n, a.grid_density)
    F = leja.estimate_robin(seq)
    lc = leja.estimate_log_capacity(seq)
    out = {
        "n": a.n,
        "robin_constant": F.value,
        "robin_spread": F.spread,
        "capacity": math.exp(lc.value),
        "log_capacity_spread": lc.spread,
        "support": leja.support_estimate(seq).to_text(),
        "potential_gap": {},
    }
    for z in _parse_zetas(a.zetas):
        est = leja.estimate_potential_gap(seq, z.value)
        out["potential_gap"][z.to_text()] = {"value": est.value, "spread": est.spread}
    return out, leja.to_csv(seq)


def cmd_bound(a):
    E, w = IntervalUnion.parse(a.domain), FactorWeight.parse(a.weight)
    method = a.method or ("weighted" if a.side == "upper" else "rational-point")
    if a.side == "upper":
        if method == "fekete":
            return bounds.fekete_upper(E, a.n, a.grid_density).to_dict(), None
        if method == "weighted":
            return bounds.weighted_upper(E, w, a.mode, a.n, a.grid_density).to_dict(), None
        raise ValueError(f"--method {method} gives a lower bound")
    if method == "trigub":
        return bounds.trigub_lower(a.m).to_dict(), None
    if method not in ("robin", "rational-point"):
        raise ValueError(f"--method {method} gives an upper bound")
    closed = bounds.two_factor_params(E, w) if a.mode == "closedForm" else None
    if a.mode == "closedForm" and closed is None:
        raise ModeUnavailable("closedForm needs the weight |z|^(2 a1) |4z-1|^a2 on [0,1/4]")
    seq = None if closed else leja.leja_sequence(E, w, a.n, a.grid_density)
    if method == "robin":
        F = jacobi.robin_constant(closed) if closed else leja.estimate_robin(seq).value
        return bounds.robin_lower(w, F, closed, E).to_dict(), None
    zetas = _parse_zetas(a.zetas)
    if not zetas:
        raise LengthMismatch("--zetas is required for rational-point bounds")
    if closed:
        gaps = [jacobi.potential_gap(closed, z.value) for z in zetas]
    else:
        gaps = [leja.estimate_potential_gap(seq, z.value).value for z in zetas]
    return bounds.rational_point_lower(w, zetas, gaps, E).to_dict(), None


def _evaluator(a):
    E = IntervalUnion.parse(a.domain)
    specs = parse_factor_specs(a.factors, E)
    polys = [s.poly for s in specs]
    two = (
        E == bounds.QUARTER_INTERVAL
        and len(specs) == 2
        and polys[0] in (IntPoly((0, 1)), -IntPoly((0, 1)))
        and polys[1] in (IntPoly((-1, 4)), -IntPoly((-1, 4)))
        and [s.scale for s in specs] == [2.0, 1.0]
    )
    mode = a.mode
    if mode == "auto":
        mode = "closedForm" if two and all(s.mult is None for s in specs) else "leja"
    if mode == "closedForm":
        if not two:
            raise ModeUnavailable("closedForm sweeps need factors z:*,4z-1:* on [0,1/4]")
        ev = bounds.ClosedFormGaps()
    else:
        ev = bounds.LejaGaps(
            tuple(polys), tuple(s.scale for s in specs), E, a.n, a.grid_density,
            names=tuple(f"alpha_{p}" for p in polys),
        )
    fixed = {i: s.mult for i, s in enumerate(specs) if s.mult is not None}
    if fixed:
        ev = bounds.Pinned(ev, fixed)
    zetas = _parse_zetas(a.zetas) if a.zetas else _default_zetas(polys)
    return E, ev, zetas, mode


def _default_zetas(polys) -> list[RationalPoint]:
    """Rational zeros of the linear factors."""
    out = []
    for p in polys:
        if p.degree() == 1:
            out.append(RationalPoint.from_fractions(Fraction(-p.coeffs[0], p.coeffs[1])))
    if not out:
        raise LengthMismatch("no linear factor; pass --zetas")
    return out


def _box(a, ev):
    if not a.box:
        return None
    box = _parse_box(a.box)
    if len(box) != len(ev.names):
        raise LengthMismatch(f"--box has {len(box)} ranges for {len(ev.names)} swept coordinates")
    return box


def cmd_sweep(a):
    E, ev, zetas, mode = _evaluator(a)
    box = _box(a, ev)
    if a.kind == "lower":
        rep = bounds.sweep_lower_bound(ev, zetas, a.step, box, a.refine, E, _threads())
    else:
        rep = bounds.sweep_upper_bound(ev, a.step, box, a.refine, E, _threads())
    out = rep.to_dict()
    out["mode"] = mode
    return out, None


def cmd_region(a):
    E, ev, zetas, mode = _evaluator(a)
    spec = bounds.RegionSpec(tuple(ev.names), a.step, a.m, tuple(zetas), _box(a, ev))
    seed = None
    if a.seed:
        seed = [float(Fraction(x)) for x in a.seed.split(",")]
    bounds.feasible_region(spec, ev, a.strategy, seed, _threads())
    bb = spec.bounding_box()
    out = {
        "mode": mode,
        "names": list(spec.alpha_names),
        "bound": spec.bound,
        "lattice_points": int(len(spec.points)),
        "feasible_points": int(spec.feasible.sum()),
        "bounding_box": None if bb is None else [list(b) for b in bb],
    }
    return out, spec.to_csv()


def cmd_exact(a):
    E = IntervalUnion.parse(a.domain)
    rec = exact_search.search_integer_chebyshev(E, a.degree, a.budget, a.max_degree)
    out = rec.to_dict()
    red = exact_search.symmetry_reduce(rec.polynomial)
    out["symmetry"] = None if red is None else {"q": list(red.q.coeffs), "parity": red.parity}
    out["nth_root_norm"] = rec.norm ** (1.0 / a.degree) if a.degree else rec.norm
    return out, None


def cmd_lemniscate(a):
    return bounds.lemniscate_tz(IntPoly.parse(a.poly), a.r, a.irreducible).to_dict(), None


def cmd_construct(a):
    E, w = IntervalUnion.parse(a.domain), FactorWeight.parse(a.weight)
    nodes = leja.leja_sequence(E, w, a.degree, a.grid_density).points
    c = exact_search.hilbert_fekete_construct(E, w, a.degree, nodes)
    out = {
        "polynomial": list(c.polynomial.coeffs),
        "certified_bound": c.certified_bound,
        "nth_root_bound": c.certified_bound ** (1.0 / a.degree),
        "forms": list(c.forms),
        "diagnostics": c.diagnostics,
    }
    return out, None


COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "leja": cmd_leja,
    "bound": cmd_bound,
    "sweep": cmd_sweep,
    "region": cmd_region,
    "exact": cmd_exact,
    "lemniscate": cmd_lemniscate,
    "construct": cmd_construct,
}


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _round(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return _round(obj.item())
    return obj


def render(config: dict, result: dict) -> str:
    return json.dumps(_round({"config": config, "result": result}), sort_keys=True, indent=2) + "\n"


def _summary(command: str, result: dict) -> str:
    for key in ("value", "certified_bound", "norm", "F_w", "robin_constant"):
        if key in result:
            return f"{command}: {key} = {result[key]:.9g}"
    if "bounding_box" in result:
        return f"{command}: bounding box {_round(result['bounding_box'])}"
    return f"{command}: done"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = _resolve(ap, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"intcheb: --config: {exc}", file=sys.stderr)
        return 2
    config = resolved_config(args)
    try:
        result, table = COMMANDS[args.command](args)
    except NUMERICAL_ERRORS as exc:
        print(f"intcheb: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except VALIDATION_ERRORS as exc:
        print(f"intcheb: invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.format == "csv":
        if table is None:
            print(f"intcheb: {args.command} has no CSV output; use --format json", file=sys.stderr)
            return 2
        text = table
    else:
        text = render(config, result)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(_summary(args.command, result))
    else:
        sys.stdout.write(text)
    return 0


def main_entry() -> None:
    sys.exit(main())
