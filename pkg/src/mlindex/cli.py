"""Command-line front end.

Maps are exchanged as mlmap/1 JSON, so ``mlindex gen ... | mlindex beta --rand``
works as a pipeline.  Analyzer commands print a report/1 document.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from typing import Any

from . import __version__, bounds, verify
from .errors import BudgetExceeded, ExponentOverflow, InputError, MlindexError
from .generators import (GraphSpec, gen_group_algebra, gen_identity, gen_matmul, gen_random,
                         gen_tutte)
from .gf import field_make
from .height import height_bracket, ideal_from_json
from .mlmap import evaluate, map_from_json, map_to_json
from .oracle import (BudgetGuard, alpha_brute, analytic_rank_exact, beta_brute, subrank_brute)
from .randbeta import RandConfig, beta_randomized, rand_report_json

REPORT_FORMAT = "report/1"
EXIT_OK, EXIT_FAIL, EXIT_GUARD, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3, 4
GLOBAL_DEFAULTS = {"seed": None, "epsilon": 0.05, "budget": 10**7, "format": "json", "threads": 1}
TIMING_FIELDS = ("wall_time",)


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not guard failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    kw = (lambda name: {"default": argparse.SUPPRESS}) if suppress else (lambda name: {"default": GLOBAL_DEFAULTS[name]})
    p.add_argument("--seed", type=int, help="root seed (default $MLINDEX_SEED or 0)", **kw("seed"))
    p.add_argument("--epsilon", type=float, help="error budget for randomized runs", **kw("epsilon"))
    p.add_argument("--budget", type=int, help="candidate cap for exhaustive search", **kw("budget"))
    p.add_argument("--format", choices=["json", "text"], **kw("format"))
    p.add_argument("--threads", type=int, help="worker threads for randomized trials", **kw("threads"))
    return p


def _field_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, required=True, help="field characteristic")
    p.add_argument("--l", type=int, default=1, help="extension degree")


def _input_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", default="-", help="mlmap/1 file, '-' for stdin")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlindex", description=__doc__.splitlines()[0],
                     parents=[_global_flags(False)])
    parser.add_argument("--version", action="version", version=f"mlindex {__version__}")
    flags = _global_flags(True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", parents=[flags], help="emit an mlmap/1 map")
    gsub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    g = gsub.add_parser("identity", parents=[flags])
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    _field_args(g)
    g = gsub.add_parser("matmul", parents=[flags])
    g.add_argument("--n", type=int, required=True)
    _field_args(g)
    g = gsub.add_parser("tutte", parents=[flags])
    g.add_argument("--vertices", type=int, required=True)
    g.add_argument("--edges", required=True, help="1-based pairs, e.g. '1-2,2-3'")
    _field_args(g)
    g = gsub.add_parser("group-algebra", parents=[flags])
    g.add_argument("--orders", type=_int_list, required=True, help="cyclic factor orders, e.g. 2,3")
    _field_args(g)
    g = gsub.add_parser("random", parents=[flags])
    g.add_argument("--dims", type=_int_list, required=True)
    g.add_argument("--codim", type=int, required=True)
    g.add_argument("--kind", choices=["general", "alternating", "symmetric"], default="general")
    _field_args(g)

    p = sub.add_parser("eval", parents=[flags], help="evaluate a map")
    _input_arg(p)
    p.add_argument("--args", required=True, help="JSON list of d vectors")

    p = sub.add_parser("alpha", parents=[flags], help="isotropy index")
    _input_arg(p)
    p.add_argument("--brute", action="store_true", default=True)

    p = sub.add_parser("beta", parents=[flags], help="completeness index")
    _input_arg(p)
    m = p.add_mutually_exclusive_group(required=True)
    m.add_argument("--brute", action="store_true")
    m.add_argument("--rand", action="store_true")

    p = sub.add_parser("ar", parents=[flags], help="exact analytic rank")
    _input_arg(p)

    p = sub.add_parser("subrank", parents=[flags], help="restriction witness for I_r")
    _input_arg(p)
    p.add_argument("--brute", action="store_true", default=True)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("bracket", parents=[flags], help="subrank and geometric-rank brackets")
    _input_arg(p)

    p = sub.add_parser("height", parents=[flags], help="height bracket of an ideal/1 file")
    p.add_argument("input", nargs="?", default="-")

    p = sub.add_parser("bounds", parents=[flags], help="closed-form calculators")
    bsub = p.add_subparsers(dest="name", required=True, parser_class=_Parser)
    b = bsub.add_parser("ramsey-lower", parents=[flags])
    for a in ("d", "s", "t"):
        b.add_argument(f"--{a}", type=int, required=True)
    b = bsub.add_parser("adjustment", parents=[flags])
    for a in ("N", "q", "c"):
        b.add_argument(f"--{a}", type=int, required=True)
    b = bsub.add_parser("nonzero-points", parents=[flags])
    for a in ("q", "N", "deg"):
        b.add_argument(f"--{a}", type=int, required=True)
    b = bsub.add_parser("grobner-degree", parents=[flags])
    for a in ("h", "d", "n"):
        b.add_argument(f"--{a}", type=int, required=True)
    b = bsub.add_parser("completeness", parents=[flags])
    b.add_argument("--beta", type=int, required=True)
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--kind", choices=["general", "alternating", "symmetric"], default="general")
    b.add_argument("--q", type=int, default=None, help="field order; omit for an infinite field")
    b = bsub.add_parser("isotropy", parents=[flags])
    for a in ("m", "d", "pr", "alpha"):
        b.add_argument(f"--{a}", type=int, required=True)
    b.add_argument("--kind", choices=["general", "alternating", "symmetric"], default="general")

    p = sub.add_parser("verify", parents=[flags], help="run a verification suite")
    p.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    return parser


# -- helpers -----------------------------------------------------------------

def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}") from exc


def _load_map(path: str):
    obj = _read_json(path)
    try:
        return map_from_json(obj)
    except KeyError as exc:
        raise InputError(f"missing field {exc.args[0]!r}") from exc


def _ctx(ns):
    return field_make(ns.p, ns.l)


def _config(ns) -> dict:
    """Everything that can influence numeric results; thread count excluded."""
    skip = {"threads", "format"}
    return {k: v for k, v in sorted(vars(ns).items()) if k not in skip}


def _digest(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _gen(ns) -> dict:
    ctx = _ctx(ns)
    if ns.family == "identity":
        F = gen_identity(ns.r, ns.d, ctx)
    elif ns.family == "matmul":
        F = gen_matmul(ns.n, ctx)
    elif ns.family == "tutte":
        edges = []
        for part in ns.edges.split(","):
            try:
                a, b = (int(x) - 1 for x in part.split("-"))
            except ValueError as exc:
                raise InputError(f"bad edge {part!r}; expected i-j") from exc
            edges.append((a, b))
        F = gen_tutte(GraphSpec.from_edges(ns.vertices, edges), ctx)
    elif ns.family == "group-algebra":
        F = gen_group_algebra(ns.orders, ctx)
    else:
        F = gen_random(ns.dims, ns.codim, ns.kind, ctx, ns.seed)
    return map_to_json(F)


def _run(ns) -> tuple[dict, int]:
    """Result payload and exit code for an analyzer command."""
    guard = BudgetGuard(ns.budget)
    cfg = RandConfig(epsilon=ns.epsilon, seed=ns.seed, threads=ns.threads)
    cmd = ns.command
    if cmd == "eval":
        F = _load_map(ns.input)
        try:
            args = json.loads(ns.args)
        except json.JSONDecodeError as exc:
            raise InputError("--args must be a JSON list of vectors") from exc
        vals = evaluate(F, [[F.ctx.decode(x) for x in v] for v in args])
        return {"value": [F.ctx.encode(x) for x in vals]}, EXIT_OK
    if cmd == "alpha":
        return alpha_brute(_load_map(ns.input), guard).to_json(), EXIT_OK
    if cmd == "beta":
        F = _load_map(ns.input)
        if ns.brute:
            return beta_brute(F, guard).to_json(), EXIT_OK
        rep = beta_randomized(F, cfg)
        out = rand_report_json(rep)
        return out, EXIT_OK if out["q_guard_ok"] else EXIT_GUARD
    if cmd == "ar":
        return analytic_rank_exact(_load_map(ns.input), guard).to_json(), EXIT_OK
    if cmd == "subrank":
        w = subrank_brute(_load_map(ns.input), ns.r, guard)
        return {"r": ns.r, "exists": w is not None, "witness": w.to_json() if w else None}, EXIT_OK
    if cmd == "bracket":
        sub, gr = bounds.bracket_report(_load_map(ns.input), cfg)
        code = EXIT_GUARD if sub.guards or gr.guards else EXIT_OK
        return {"subrank": sub.to_json(), "geometricRank": gr.to_json()}, code
    if cmd == "height":
        rep = height_bracket(ideal_from_json(_read_json(ns.input)), cfg)
        return rep.to_json(), EXIT_GUARD if rep.guards else EXIT_OK
    if cmd == "bounds":
        return _bounds(ns), EXIT_OK
    if cmd == "verify":
        res = verify.run_suite(ns.suite, seed=ns.seed, threads=ns.threads)
        return res, EXIT_OK if res["pass"] else EXIT_FAIL
    raise InputError(f"unknown command {cmd!r}")


def _bounds(ns) -> dict:
    name = ns.name
    if name == "ramsey-lower":
        floor, exact, val = bounds.ramsey_lambda_lower(ns.d, ns.s, ns.t)
        return {"value": floor, "integral": exact, "exact": str(val)}
    if name == "adjustment":
        z, prod_val = bounds.adjustment_min(ns.N, ns.q, ns.c)
        return {"z": list(z), "product": prod_val}
    if name == "nonzero-points":
        val, clamped = bounds.nonzero_points_bound(ns.q, ns.N, ns.deg)
        return {"value": val, "clamped": clamped}
    if name == "grobner-degree":
        val, better = bounds.grobner_degree_bound(ns.h, ns.d, ns.n)
        return {"value": val, "improves_classical": better}
    if name == "completeness":
        return bounds.completeness_rank_bounds(ns.beta, ns.d, ns.kind, ns.q)
    ok, implied = bounds.isotropy_check(ns.m, ns.d, ns.pr, ns.alpha, ns.kind)
    return {"holds": ok, "implied_pr_lower": implied}


def _text(doc: dict) -> str:
    if "error" in doc:
        return f"error: {doc['error']['type']}: {doc['error']['message']}"
    res = doc["result"]
    if isinstance(res, dict) and "pass" in res:
        return f"{res.get('suite', doc['command'])}: {'PASS' if res['pass'] else 'FAIL'}"
    return "\n".join(f"{k}: {json.dumps(v)}" for k, v in res.items())


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def strip_timing(doc: dict) -> dict:
    out = json.loads(json.dumps(doc))
    for k in TIMING_FIELDS:
        out.get("manifest", {}).pop(k, None)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors carry EXIT_INPUT; --help and --version exit 0
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    if ns.seed is None:
        env = os.environ.get("MLINDEX_SEED")
        try:
            ns.seed = int(env) if env else 0
        except ValueError:
            print(f"mlindex: MLINDEX_SEED must be an integer, got {env!r}", file=sys.stderr)
            return EXIT_INPUT
    start = time.perf_counter()
    doc: dict[str, Any] = {"format": REPORT_FORMAT, "command": ns.command}
    code = EXIT_OK
    try:
        if ns.command == "gen":
            print(dumps(_gen(ns)))
            return EXIT_OK
        result, code = _run(ns)
        doc["result"] = result
    except BudgetExceeded as exc:
        doc["error"] = {"type": "BudgetExceeded", "message": str(exc), "level": exc.level}
        code = EXIT_BUDGET
    except (InputError, ExponentOverflow) as exc:
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INPUT
    except MlindexError as exc:
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INPUT
    cfg = _config(ns)
    doc["manifest"] = {
        "argv": argv,
        "seed": ns.seed,
        "config_digest": _digest(cfg),
        "version": __version__,
        "threads": ns.threads,
        "wall_time": round(time.perf_counter() - start, 6),
    }
    print(dumps(doc) if ns.format == "json" else _text(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
