"""Command-line front end: ``poker-ne <command> [options]``.

Every command can print text (bracketed lists of exact fractions) or a JSON
record carrying ``"schema": 1`` and a ``"certified"`` flag.  Failures exit
nonzero and write a JSON error object to stderr.  Set ``POKER_NE_LOG`` to a
logging level name (e.g. DEBUG) for diagnostics.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .continuous import (
    NoAdmissibleRoot,
    advice as continuous_advice,
    indifference_gaps,
    three_continuous,
    three_optimal_bet,
    three_residuals,
    vn_continuous,
    vn_optimal_bet,
)
from .exact_arith import format_rational, parse_rational, to_decimal
from .game_model import GameParams, ThreeStrategyProfile
from .mixed_ne import SolverError, vn_fast, vn_slow
from .newman import NEWMAN_LIMIT, ConstraintLimitError, detect_saturation, newman_mixed
from .pure_ne import DEFAULT_MAX_TABLE_BITS, TableSizeError, build_paytable, enumerate_pure_ne, is_pure_ne
from .three_player import NoEquilibriumFound, three_fast_ne
from .verify import epsilon_ne_newman, epsilon_ne_three, epsilon_ne_two, monte_carlo

SCHEMA = 1
logger = logging.getLogger("poker_ne")

EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_UNSOLVED = 0, 2, 3, 4


class CLIError(Exception):
    def __init__(self, kind: str, message: str, code: int, **extra):
        super().__init__(message)
        self.kind, self.code, self.extra = kind, code, extra

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "error": {"type": self.kind, "message": str(self), **self.extra}}


# ---------------------------------------------------------------------------
# helpers


def _fr(x) -> str:
    return format_rational(x)


def _vec(v) -> List[str]:
    return [_fr(x) for x in v]


def _set(s) -> str:
    return "{" + ", ".join(map(str, s)) + "}"


def _card_advice(strategy, yes: str, no: str, who: str) -> List[str]:
    lines = []
    for card, p in enumerate(strategy, start=1):
        if p == 1:
            act = f"definitely {yes}"
        elif p == 0:
            act = f"definitely {no}"
        else:
            act = f"{yes} with probability {_fr(p)} and {no} with probability {_fr(1 - p)}"
        lines.append(f"{who}: if your card is {card}, {act}.")
    return lines


def parse_range(text: str) -> List[int]:
    """'5', '2:10' or '2..10' (inclusive), or a comma list of those."""
    out: List[int] = []
    for part in str(text).split(","):
        part = part.strip()
        for sep in ("..", ":"):
            if sep in part:
                lo, hi = (int(x) for x in part.split(sep, 1))
                if hi < lo:
                    raise argparse.ArgumentTypeError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
                break
        else:
            out.append(int(part))
    return sorted(set(out))


def _single(values: List[int], flag: str) -> int:
    if len(values) != 1:
        raise CLIError("usage", f"{flag} takes a single value for this command", EXIT_USAGE)
    return values[0]


# ---------------------------------------------------------------------------
# record builders (shared by single runs and scans)


def pure_record(n: int, b: int, restricted: bool = False, max_table_bits: int = DEFAULT_MAX_TABLE_BITS) -> dict:
    params = GameParams(n, b)
    table = build_paytable(params, restricted=restricted, max_table_bits=max_table_bits)
    found = enumerate_pure_ne(table)
    eqs = [
        {"S1": list(e.S1), "S2": list(e.S2), "value": _fr(e.value), "certified": is_pure_ne(params, e.S1, e.S2, restricted)}
        for e in found
    ]
    rec = {"schema": SCHEMA, "command": "vn-pure", "n": n, "b": b, "restricted": restricted, "equilibria": eqs}
    if found:
        values = {e.value for e in found}
        if len(values) != 1:
            raise CLIError("solver", f"pure equilibria disagree on the value: {sorted(values)}", EXIT_UNSOLVED)
        rec["value"] = _fr(found[0].value)
        rec["pure"] = True
    elif restricted:
        from .mixed_ne import solve_matrix_game

        full = table.block(0, table.shape[0]).tolist()
        rec["value"] = _fr(solve_matrix_game(full, table.denominator).value)
        rec["pure"] = False
    else:
        rec["value"] = None
        rec["pure"] = False
    rec["certified"] = all(e["certified"] for e in eqs)
    return rec


def mixed_record(n: int, b: int, slow: bool = False) -> dict:
    params = GameParams(n, b)
    if slow:
        sol = vn_slow(params)
        P = _marginals(sol.row_mixture, n)
        Q = _marginals(sol.col_mixture, n)
        rep = epsilon_ne_two(params, P, Q)
        return {
            "schema": SCHEMA,
            "command": "vn-mixed",
            "method": "slow",
            "n": n,
            "b": b,
            "value": _fr(sol.value),
            "value_decimal": to_decimal(sol.value),
            "row_mixture": [{"subset": list(s), "p": _fr(p)} for s, p in sol.row_mixture.items()],
            "col_mixture": [{"subset": list(s), "p": _fr(p)} for s, p in sol.col_mixture.items()],
            "P": _vec(P),
            "Q": _vec(Q),
            "gaps": rep.to_json()["gaps"],
            "certified": rep.certified,
        }
    sol = vn_fast(params)
    return {
        "schema": SCHEMA,
        "command": "vn-mixed",
        "method": "fast",
        "n": n,
        "b": b,
        "value": _fr(sol.value),
        "value_decimal": to_decimal(sol.value),
        "P": _vec(sol.p_strategy),
        "Q": _vec(sol.q_strategy),
        "gaps": sol.certificate.to_json()["gaps"],
        "certified": sol.certified,
    }


def _marginals(mixture, n):
    out = [Fraction(0)] * n
    for subset, p in mixture.items():
        for c in subset:
            out[c - 1] += p
    return tuple(out)


def djn_record(n: int, b: int) -> dict:
    sol = newman_mixed(GameParams(n, b))
    return {
        "schema": SCHEMA,
        "command": "djn",
        "n": n,
        "b": b,
        "value": _fr(sol.value),
        "value_decimal": to_decimal(sol.value),
        "P": [_vec(r) for r in sol.p_matrix],
        "Q": [_vec(r) for r in sol.q_matrix],
        "gaps": sol.certificate.to_json()["gaps"],
        "certified": sol.certified,
    }


def three_record(n: int, b: int) -> dict:
    sol = three_fast_ne(GameParams(n, b))
    A, B, C = sol.cuts()
    return {
        "schema": SCHEMA,
        "command": "three",
        "n": n,
        "b": b,
        "values": _vec(sol.values),
        "values_decimal": [to_decimal(v) for v in sol.values],
        "P": _vec(sol.profile.P),
        "Q": _vec(sol.profile.Q),
        "R": _vec(sol.profile.R),
        "method": sol.method,
        "structure": {"a": sol.a, "alpha": _fr(sol.alpha), "B_cut": sol.B_cut, "c": sol.c, "gamma": _fr(sol.gamma)},
        "cuts": {"A": A, "B": B, "C": C},
        "gaps": sol.certificate.to_json()["gaps"],
        "certified": sol.certified,
    }


def continuous_record(players: int, b: Optional[float], optimize: bool = False) -> dict:
    rec = {"schema": SCHEMA, "command": "continuous", "players": players}
    if optimize:
        b_star, _ = vn_optimal_bet() if players == 2 else three_optimal_bet()
        rec["b_star"] = b_star
        b = b_star
    if b is None:
        raise CLIError("usage", "continuous needs -b/--bet or --optimize", EXIT_USAGE)
    if players == 2:
        cuts = vn_continuous(int(b) if float(b).is_integer() else b)
        rec.update(b=_num(cuts.b), A=_num(cuts.A), B=_num(cuts.B), C=_num(cuts.C), value=_num(cuts.value))
        rec["certified"] = True
        return rec
    cuts = three_continuous(b)
    res = three_residuals(cuts.A, cuts.B, cuts.C, cuts.b)
    rec.update(b=cuts.b, A=cuts.A, B=cuts.B, C=cuts.C, value=cuts.value, residuals=list(res))
    rec["certified"] = max(abs(r) for r in res) < 1e-12
    return rec


def _num(x):
    """Exact values as "p/q" strings, floats as JSON numbers."""
    return _fr(x) if isinstance(x, (int, Fraction)) else float(x)


# ---------------------------------------------------------------------------
# text rendering


def render_text(rec: dict, verbose: bool = False) -> List[str]:
    cmd = rec["command"]
    if cmd == "vn-pure":
        lines = [f"{_set(e['S1'])} ; {_set(e['S2'])} ; {e['value']}" for e in rec["equilibria"]]
        if not lines:
            lines = ["no pure Nash equilibria"]
            if rec["restricted"] and rec["value"] is not None:
                lines.append(f"value of the restricted game (mixed strategies): {rec['value']}")
        elif verbose:
            lines.append(f"The value of the game is {rec['value']}.")
            for e in rec["equilibria"]:
                lines.append(f"Player I: bet iff your card is in {_set(e['S1'])}. Player II: call iff your card is in {_set(e['S2'])}.")
        return lines
    if cmd == "vn-mixed":
        if rec["method"] == "slow":
            mix = lambda m: "{" + ", ".join(f"[{_set(x['subset'])}, {x['p']}]" for x in m) + "}"
            lines = [f"[{mix(rec['row_mixture'])}, {mix(rec['col_mixture'])}, {rec['value']}]"]
        else:
            lines = [f"[{rec['value']}, {rec['value_decimal']}, [{', '.join(rec['P'])}], [{', '.join(rec['Q'])}]]"]
        if verbose:
            P = [parse_rational(x) for x in rec["P"]]
            Q = [parse_rational(x) for x in rec["Q"]]
            lines.append(f"The value of the game is {rec['value']} = {rec['value_decimal']}.")
            lines += _card_advice(P, "bet", "check", "Player I")
            lines += _card_advice(Q, "call", "fold", "Player II")
        return lines
    if cmd == "djn":
        P = "[" + ", ".join("[" + ", ".join(r) + "]" for r in rec["P"]) + "]"
        Q = "[" + ", ".join("[" + ", ".join(r) + "]" for r in rec["Q"]) + "]"
        lines = [f"[{rec['value']}, {rec['value_decimal']}, {P}, {Q}]"]
        if verbose:
            lines.append(f"The value of the game is {rec['value']} = {rec['value_decimal']}.")
            for card, row in enumerate(rec["P"], start=1):
                parts = [f"bet {s} with probability {p}" if s else f"check with probability {p}" for s, p in enumerate(row) if p != "0"]
                lines.append(f"Player I: if your card is {card}, " + ", ".join(parts) + ".")
            for card, row in enumerate(rec["Q"], start=1):
                parts = [f"call a bet of {s} with probability {p}" for s, p in enumerate(row) if s]
                lines.append(f"Player II: if your card is {card}, " + ", ".join(parts) + ".")
        return lines
    if cmd == "three":
        v = "[0, " + ", ".join(rec["values"]) + "]"
        lines = [f"[{v}, [{', '.join(rec['P'])}], [{', '.join(rec['Q'])}], [{', '.join(rec['R'])}]]"]
        if verbose:
            c = rec["cuts"]
            lines.append(
                f"The value of the game is {rec['values'][0]} for Player I and {rec['values'][1]} for each of Players II and III."
            )
            lines.append(f"The cuts are A = {c['A']:.15f}, B = {c['B']:.15f}, C = {c['C']:.15f}.")
            lines += _card_advice([parse_rational(x) for x in rec["P"]], "bet", "check", "Player I")
            lines += _card_advice([parse_rational(x) for x in rec["Q"]], "call", "fold", "Players II and III")
        return lines
    if cmd == "continuous":
        fmt = lambda x: x if isinstance(x, str) else f"{x:.15f}"
        lines = []
        if "b_star" in rec:
            lines.append(f"b* = {rec['b_star']:.6f}")
        lines += [f"A = {fmt(rec['A'])}", f"B = {fmt(rec['B'])}", f"C = {fmt(rec['C'])}", f"value = {fmt(rec['value'])}"]
        if verbose:
            from .continuous import CutPoints

            conv = lambda x: parse_rational(x) if isinstance(x, str) else x
            cuts = CutPoints(*(conv(rec[k]) for k in ("A", "B", "C", "b", "value")), players=rec["players"])
            lines += continuous_advice(cuts)
        return lines
    if cmd == "verify":
        lines = [f"gaps: [{', '.join(rec['gaps'])}]", "certified" if rec["certified"] else "NOT certified"]
        if "residuals" in rec:
            lines[0] = "indifference residuals: " + ", ".join(f"{r:.3e}" for r in rec["residuals"])
        mc = rec.get("monte_carlo")
        if mc:
            for k, (e, se) in enumerate(zip(mc["estimates"], mc["std_errors"]), start=1):
                lines.append(f"Monte Carlo, player {k}: {e:.6f} +- {se:.6f} ({mc['trials']} deals, seed {mc['seed']})")
        return lines
    raise ValueError(f"unknown record type {cmd!r}")


def emit(rec: dict, fmt: str, verbose: bool, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rec, indent=2) + "\n")
    else:
        out.write("\n".join(render_text(rec, verbose)) + "\n")


# ---------------------------------------------------------------------------
# verify


def verify_record(rec: dict, trials: int = 0, seed: int = 0) -> dict:
    cmd = rec.get("command")
    out = {"schema": SCHEMA, "command": "verify", "source": cmd}
    mc_model = mc_strats = None
    params = None
    if cmd in ("vn-mixed", "vn-pure"):
        n, b = rec["n"], rec["b"]
        params = GameParams(n, b)
        if cmd == "vn-pure":
            if not rec["equilibria"]:
                raise CLIError("input", "record holds no equilibrium to verify", EXIT_USAGE)
            e = rec["equilibria"][0]
            P = tuple(Fraction(int(c in e["S1"])) for c in range(1, n + 1))
            Q = tuple(Fraction(int(c in e["S2"])) for c in range(1, n + 1))
        else:
            P, Q = ([parse_rational(x) for x in rec[k]] for k in ("P", "Q"))
        rep = epsilon_ne_two(params, P, Q)
        mc_model, mc_strats = "two", (P, Q)
    elif cmd == "djn":
        params = GameParams(rec["n"], rec["b"])
        Pm, Qm = ([[parse_rational(x) for x in row] for row in rec[k]] for k in ("P", "Q"))
        rep = epsilon_ne_newman(params, Pm, Qm)
        mc_model, mc_strats = "newman", (Pm, Qm)
    elif cmd == "three":
        params = GameParams(rec["n"], rec["b"])
        prof = ThreeStrategyProfile(*([parse_rational(x) for x in rec[k]] for k in ("P", "Q", "R")))
        rep = epsilon_ne_three(params, prof)
        mc_model, mc_strats = "three", prof
    elif cmd == "continuous":
        if rec["players"] != 3:
            out.update(gaps=[], certified=True, residuals=[0.0, 0.0, 0.0])
            return out
        from .continuous import CutPoints

        cuts = CutPoints(rec["A"], rec["B"], rec["C"], rec["b"], rec["value"], players=3)
        res = list(three_residuals(cuts.A, cuts.B, cuts.C, cuts.b))
        quad = list(indifference_gaps(cuts))
        out.update(gaps=[], residuals=res, quadrature_gaps=quad)
        out["certified"] = max(map(abs, res)) < 1e-12 and max(map(abs, quad)) < 1e-9
        if trials:
            mc_model, mc_strats = "three_continuous", cuts
        rep = None
    else:
        raise CLIError("input", f"cannot verify a record of type {cmd!r}", EXIT_USAGE)
    if rep is not None:
        out.update(rep.to_json())
    if trials:
        mc = monte_carlo(mc_model, mc_strats, trials, seed=seed, params=params)
        out["monte_carlo"] = {
            "trials": trials,
            "seed": seed,
            "estimates": list(mc.estimates),
            "std_errors": list(mc.std_errors),
        }
    return out


# ---------------------------------------------------------------------------
# scan


def _scan_key(rec: dict) -> Tuple[int, int]:
    return rec["n"], rec["b"]


def _run_task(task):
    fn, args = task
    try:
        return fn(*args)
    except (TableSizeError, ConstraintLimitError, ValueError) as exc:
        return {"error": {"type": "guard", "message": str(exc)}}
    except (NoEquilibriumFound, SolverError) as exc:
        return {"error": {"type": "unsolved", "message": str(exc)}}


def _djn_block(n: int, bs: Sequence[int]) -> List[dict]:
    return [_run_task((djn_record, (n, b))) for b in bs]


def run_scan(kind: str, ns: List[int], bs: List[int], out_path: Optional[str], jobs: int = 1, **opts) -> List[dict]:
    """One record per (n, b) in (n, b) order; records already in ``out_path`` are reused."""
    done: Dict[Tuple[int, int], dict] = {}
    if out_path and os.path.exists(out_path):
        with open(out_path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    logger.warning("ignoring a malformed line in %s", out_path)
                    continue
                if rec.get("scan") == kind and "error" not in rec:
                    done[_scan_key(rec)] = rec
    keys = [(n, b) for n in ns for b in bs]
    todo = [k for k in keys if k not in done]
    logger.info("scan %s: %d records, %d already present", kind, len(keys), len(keys) - len(todo))

    if kind == "vn-pure":
        fn, extra = pure_record, (opts.get("restricted", False), opts.get("max_table_bits", DEFAULT_MAX_TABLE_BITS))
    elif kind == "vn-mixed":
        fn, extra = mixed_record, (opts.get("slow", False),)
    elif kind == "three":
        fn, extra = three_record, ()
    elif kind == "djn":
        fn, extra = djn_record, ()
    else:
        raise CLIError("usage", f"unknown scan kind {kind!r}", EXIT_USAGE)

    appender = open(out_path, "a") if out_path else None
    try:
        tasks = [(fn, (n, b) + extra) for n, b in todo]
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = pool.map(_run_task, tasks)
                _collect(kind, todo, results, done, appender)
        else:
            _collect(kind, todo, map(_run_task, tasks), done, appender)
    finally:
        if appender:
            appender.close()

    records = [done[k] for k in keys if k in done]
    if kind == "djn":
        _add_saturation(records)
    failures = [k for k in keys if k not in done]
    if out_path:
        tmp = out_path + ".tmp"
        with open(tmp, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec) + "\n")
        os.replace(tmp, out_path)
    if failures:
        logger.error("scan %s: %d records failed: %s", kind, len(failures), failures)
    return records


def _collect(kind, todo, results, done, appender):
    for key, rec in zip(todo, results):
        if "error" in rec:
            logger.error("n=%d b=%d failed: %s", key[0], key[1], rec["error"]["message"])
            continue
        rec["scan"] = kind
        done[key] = rec
        if appender:
            appender.write(json.dumps(rec) + "\n")
            appender.flush()


def _add_saturation(records: List[dict]) -> None:
    by_n: Dict[int, Dict[int, Fraction]] = {}
    for rec in records:
        by_n.setdefault(rec["n"], {})[rec["b"]] = parse_rational(rec["value"])
    for rec in records:
        values = by_n[rec["n"]]
        rec["saturation_b"] = detect_saturation(values) if len(values) > 1 else None
        rec["limit_gap"] = to_decimal(abs(parse_rational(rec["value"]) - NEWMAN_LIMIT))


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--verbose", action="store_true", help="spell out per-card advice")
    common.add_argument("--out", metavar="FILE", help="write the report to FILE instead of stdout")

    deck = argparse.ArgumentParser(add_help=False)
    deck.add_argument("-n", "--deck", required=True, help="deck size (scan: range such as 2:10)")
    deck.add_argument("-b", "--bet", required=True, help="bet size (scan: range such as 1:3)")

    p = argparse.ArgumentParser(prog="poker-ne", description="Exact equilibria of simplified poker games.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("vn-pure", parents=[common, deck], help="pure equilibria, two players, fixed bet")
    sp.add_argument("--restricted", action="store_true", help="interval/threshold strategies only")
    sp.add_argument("--max-table-bits", type=int, default=DEFAULT_MAX_TABLE_BITS, help="largest n for the full table")

    sp = sub.add_parser("vn-mixed", parents=[common, deck], help="mixed equilibrium, two players, fixed bet")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--fast", dest="slow", action="store_false", help="per-card LPs (default)")
    g.add_argument("--slow", dest="slow", action="store_true", help="LP over all subset strategies")
    sp.set_defaults(slow=False)

    sub.add_parser("djn", parents=[common, deck], help="Newman poker with bet sizes 0..b")
    sub.add_parser("three", parents=[common, deck], help="three players, fixed bet")

    sp = sub.add_parser("continuous", parents=[common], help="infinite-deck cut points")
    sp.add_argument("-b", "--bet", type=float, help="bet size (real, > 0)")
    sp.add_argument("--players", type=int, choices=(2, 3), default=2)
    sp.add_argument("--optimize", action="store_true", help="also search the bet size that maximizes Player I's value")

    sp = sub.add_parser("verify", parents=[common], help="recheck a JSON record from another command")
    sp.add_argument("--input", default="-", metavar="FILE", help="record to check ('-' for stdin)")
    sp.add_argument("--trials", type=int, default=0, help="Monte Carlo deals (0 to skip)")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("scan", parents=[common, deck], help="one JSON-lines record per (n, b), resumable")
    sp.add_argument("--game", choices=("vn", "djn", "three"), default="vn")
    sp.add_argument("--players", type=int, choices=(2, 3), default=2, help="3 is shorthand for --game three")
    sp.add_argument("--mode", choices=("pure", "mixed"), default="mixed", help="for --game vn")
    sp.add_argument("--restricted", action="store_true")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--fast", dest="slow", action="store_false")
    g.add_argument("--slow", dest="slow", action="store_true")
    sp.set_defaults(slow=False)
    sp.add_argument("--max-table-bits", type=int, default=DEFAULT_MAX_TABLE_BITS)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    return p


def _setup_logging() -> None:
    level = os.environ.get("POKER_NE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _dispatch(args) -> Tuple[List[dict], bool]:
    """Records to emit, and whether they are JSON lines (scan)."""
    cmd = args.command
    if cmd == "continuous":
        if args.bet is not None and args.bet <= 0:
            raise CLIError("usage", "bet size must be positive", EXIT_USAGE)
        return [continuous_record(args.players, args.bet, args.optimize)], False
    if cmd == "verify":
        text = sys.stdin.read() if args.input == "-" else open(args.input).read()
        try:
            rec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CLIError("input", f"input is not a JSON record: {exc}", EXIT_USAGE) from None
        if rec.get("schema") != SCHEMA:
            raise CLIError("input", f"unsupported schema {rec.get('schema')!r}", EXIT_USAGE)
        return [verify_record(rec, args.trials, args.seed)], False

    ns, bs = parse_range(args.deck), parse_range(args.bet)
    if cmd == "scan":
        if args.players == 3 or args.game == "three":
            kind = "three"
        elif args.game == "djn":
            kind = "djn"
        else:
            kind = "vn-pure" if args.mode == "pure" else "vn-mixed"
        recs = run_scan(
            kind,
            ns,
            bs,
            args.out,
            jobs=max(1, args.jobs),
            restricted=args.restricted,
            slow=args.slow,
            max_table_bits=args.max_table_bits,
        )
        expected = len(ns) * len(bs)
        if len(recs) < expected:
            args.scan_failures = expected - len(recs)
        return recs, True
    n, b = _single(ns, "-n/--deck"), _single(bs, "-b/--bet")
    if cmd == "vn-pure":
        return [pure_record(n, b, args.restricted, args.max_table_bits)], False
    if cmd == "vn-mixed":
        return [mixed_record(n, b, args.slow)], False
    if cmd == "djn":
        return [djn_record(n, b)], False
    if cmd == "three":
        return [three_record(n, b)], False
    raise CLIError("usage", f"unknown command {cmd!r}", EXIT_USAGE)


def main(argv: Optional[Sequence[str]] = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        records, lines = _dispatch(args)
    except CLIError as exc:
        sys.stderr.write(json.dumps(exc.to_json()) + "\n")
        return exc.code
    except NoEquilibriumFound as exc:
        best = None
        if exc.best is not None:
            best = {"P": _vec(exc.best.P), "Q": _vec(exc.best.Q), "R": _vec(exc.best.R), "gaps": _vec(exc.gaps)}
        err = CLIError("unsolved", str(exc), EXIT_UNSOLVED, best_candidate=best)
        sys.stderr.write(json.dumps(err.to_json()) + "\n")
        return err.code
    except NoAdmissibleRoot as exc:
        err = CLIError("unsolved", str(exc), EXIT_UNSOLVED, roots=list(exc.roots))
        sys.stderr.write(json.dumps(err.to_json()) + "\n")
        return err.code
    except (TableSizeError, ConstraintLimitError, ValueError) as exc:
        err = CLIError("guard", str(exc), EXIT_GUARD)
        sys.stderr.write(json.dumps(err.to_json()) + "\n")
        return err.code
    except (SolverError, ArithmeticError) as exc:
        err = CLIError("solver", str(exc), EXIT_UNSOLVED)
        sys.stderr.write(json.dumps(err.to_json()) + "\n")
        return err.code

    if lines:
        status = EXIT_UNSOLVED if getattr(args, "scan_failures", 0) else EXIT_OK
        if args.out:
            return status  # already written
        for rec in records:
            if args.format == "json":
                sys.stdout.write(json.dumps(rec) + "\n")
            else:
                sys.stdout.write(f"n={rec['n']} b={rec['b']}: " + " | ".join(render_text(rec, False)) + "\n")
        return status
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for rec in records:
            emit(rec, args.format, args.verbose, out)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
