"""sidoturan command line.

    sidoturan gap --f loose-cycle:3:3 --h complete:3:3
    sidoturan gen --family expansion --base triangle --r 3 --out f.hg
    sidoturan experiment --config exp.cfg --seed 42 --out runs.csv

Exit status: 0 on success, 1 on a domain or usage error, 2 when a budget
runs out. Outputs are assembled in memory and written only on success.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .constructions import parse_weighted
from .families import parse_family
from .homomorphism import DEFAULT_BUDGET, EDGE_INJECTIVE, GRAPHON, density, hom_count, weighted_hom_count
from .hypergraph import BudgetExceeded, HypergraphError, serialize_hypergraph
from .sidorenko import bound_calculator, gap, mixed_witness_certify, witness_search
from .turan import (
    RNG_NAME,
    ExperimentConfig,
    choose_tensor_exponent,
    extract_f_free,
    parse_config,
    random_deletion_baseline,
    records_to_csv,
    run_experiment,
)
from .constructions import random_hypergraph
from .witnesses import behrend_set, validate_witness_properties


class UsageError(HypergraphError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors share exit status 1 with domain errors; 2 is kept for budget aborts
    def error(self, message):
        raise UsageError(message)


def _list(kind):
    def conv(text):
        try:
            return [kind(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return conv


def _meta(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return {"tool": "sidoturan", "version": __version__, "config": cfg, "seed": args.seed}


def _json_lines(args, objs) -> str:
    lines = [json.dumps({"_meta": _meta(args)}, sort_keys=True, default=str)]
    lines += [json.dumps(o, sort_keys=True, default=str) for o in objs]
    return "\n".join(lines) + "\n"


def _hash_comments(args) -> list:
    return ["sidoturan " + __version__, "config " + json.dumps(_meta(args)["config"], sort_keys=True, default=str)]


def _text(args, pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


def _report(args, obj: dict) -> str:
    if args.format == "text":
        return _text(args, obj.items())
    if args.format != "json":
        raise UsageError(f"format {args.format!r} not supported here")
    return _json_lines(args, [obj])


def _need(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required for {args.cmd}")


def _target(args):
    if args.w is not None:
        with open(args.w, encoding="utf-8") as fh:
            return parse_weighted(fh.read(), name=os.path.basename(args.w))
    _need(args, "h")
    return parse_family(args.h)


# -- subcommands ---------------------------------------------------------------


def _gen_descriptor(args) -> str:
    fam = args.family
    if ":" in fam or fam in ("triangle", "fano") or os.path.exists(fam):
        return fam
    if fam == "expansion":
        _need(args, "base", "r")
        return f"expansion:{args.r}:{args.base}"
    if fam == "tensor":
        _need(args, "base", "k")
        return f"tensor:{args.k}:{args.base}"
    if fam == "complete":
        _need(args, "n", "r")
        return f"complete:{args.n}:{args.r}"
    if fam == "empty":
        _need(args, "n", "r")
        return f"empty:{args.n}:{args.r}"
    if fam == "edge":
        _need(args, "r")
        return f"edge:{args.r}"
    if fam == "loose-cycle":
        _need(args, "l", "r")
        return f"loose-cycle:{args.l}:{args.r}"
    if fam in ("cycle", "path"):
        _need(args, "l")
        return f"{fam}:{args.l}"
    if fam == "simplex":
        _need(args, "k")
        return f"simplex:{args.k}"
    if fam == "rs":
        _need(args, "m")
        return f"rs:{args.m}"
    if fam == "random":
        _need(args, "n", "p", "r")
        return f"random:{args.n}:{args.p}:{args.r}:{args.seed}"
    if fam == "greedy":
        _need(args, "n", "r", "k")
        return f"greedy:{args.n}:{args.r}:{args.k}:{args.seed}"
    raise UsageError(f"unknown family {fam!r}")


def cmd_gen(args):
    H = parse_family(_gen_descriptor(args))
    return serialize_hypergraph(H, _hash_comments(args))


def cmd_hom(args):
    _need(args, "f")
    F = parse_family(args.f)
    T = _target(args)
    if args.w is not None:
        val = weighted_hom_count(F, T, args.mode, args.budget)
    else:
        val = hom_count(F, T, args.budget)
    return _report(args, {"f": args.f, "target": args.w or args.h, "hom": str(val)})


def cmd_density(args):
    _need(args, "f")
    F = parse_family(args.f)
    d = density(F, _target(args), args.mode, args.budget)
    return _report(args, {"f": args.f, "target": args.w or args.h, "mode": args.mode,
                          "density": str(d), "value": float(d.value)})


def cmd_gap(args):
    _need(args, "f")
    res = gap(parse_family(args.f), _target(args), args.mode, args.budget)
    return _report(args, res.to_dict())


def cmd_search(args):
    _need(args, "f")
    out = witness_search(parse_family(args.f), args.strategy or "seeded", args.budget,
                         args.seed, args.vmax, args.n, threads=args.threads)
    obj = {"evaluations": out.evaluations, "exhausted": out.exhausted, "best": None}
    if out.best is not None:
        obj["best"] = out.best.to_dict()
        W = out.best.witness
        obj["witness_edges"] = [list(e) for e in getattr(W, "edges", ())]
        obj["witness_n"] = W.n
    return _report(args, obj)


def cmd_certify(args):
    _need(args, "f")
    p_grid = args.grid_p if args.grid_p is not None else [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    N_grid = args.grid_n if args.grid_n is not None else [1, 2]
    res = mixed_witness_certify(parse_family(args.f), p_grid, N_grid)
    return _report(args, {"certified": res is not None, "best": res.to_dict() if res else None})


def cmd_bounds(args):
    if not args.mode_name:
        raise UsageError("bounds needs --bound-mode")
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise UsageError(f"bound parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    val = bound_calculator(args.mode_name, **params)
    exact = str(val) if isinstance(val, Fraction) else None
    return _report(args, {"mode": args.mode_name, "params": params, "value": float(val), "exact": exact})


def cmd_validate(args):
    _need(args, "h", "k")
    H = parse_family(args.h)
    rep = validate_witness_properties(H, args.k, args.r or H.r, rigidity=args.rigidity)
    return _report(args, json.loads(rep.to_json()))


def cmd_behrend(args):
    _need(args, "m")
    S = behrend_set(args.m, args.strategy or "auto")
    return _report(args, {"m": args.m, "size": len(S), "set": list(S)})


def cmd_extract(args):
    _need(args, "f", "h")
    F = parse_family(args.f)
    if args.g is not None:
        G = parse_family(args.g)
    else:
        _need(args, "n", "p")
        G = random_hypergraph(args.n, args.p, F.r, args.seed)
    strategy = args.strategy or "max-degree-greedy"
    if strategy == "random-deletion":
        out, st = random_deletion_baseline(G, F, args.seed, args.budget)
        N = 0
    else:
        H = parse_family(args.h)
        N = args.N
        if N is None:
            res = gap(F, H)
            if res.gap is None:
                raise HypergraphError("witness gives no gap; pass --N explicitly")
            p = args.p if args.p is not None else 1.0
            N = choose_tensor_exponent(res.t_edge.value, max(res.gap, 0.0), F, G.n, p).N
        out, st = extract_f_free(G, F, H, N, args.seed, strategy, args.budget)
    stats = {"N": N, "edges_sampled": st.edges_sampled, "edges_after_filter": st.edges_after_filter,
             "copies_in_filtered": st.copies_in_filtered, "edges_final": st.edges_final,
             "certified_f_free": st.certified_f_free}
    if args.format in ("json", "text"):
        comments = _hash_comments(args) + ["stats " + json.dumps(stats, sort_keys=True)]
        return serialize_hypergraph(out.named(f"extract:{args.f}"), comments)
    raise UsageError(f"format {args.format!r} not supported for extract")


def cmd_experiment(args):
    if args.config is not None:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    else:
        cfg = ExperimentConfig()
    if args.seed_given:
        cfg.seed = args.seed
    if args.threads_given:
        cfg.threads = args.threads
    if args.grid_n is not None:
        cfg.n_grid = args.grid_n
    if args.grid_p is not None:
        cfg.p_grid = [float(p) for p in args.grid_p]
    if args.trials is not None:
        cfg.trials = args.trials
    if args.strategy is not None:
        cfg.strategies = args.strategy.split(",")
    if args.f is not None:
        cfg.f = args.f
    if args.h is not None:
        cfg.witness = args.h
    if args.budget_given:
        cfg.budget = args.budget
    cfg.validate()
    records = run_experiment(cfg)
    # thread count does not change results, so it stays out of the header
    head = [f"# sidoturan {__version__}", f"# rng {RNG_NAME}"] + [
        "# " + line for line in cfg.to_text().splitlines() if not line.startswith("threads=")]
    return "\n".join(head) + "\n" + records_to_csv(records)


COMMANDS = {
    "gen": cmd_gen, "hom": cmd_hom, "density": cmd_density, "gap": cmd_gap,
    "search": cmd_search, "certify": cmd_certify, "bounds": cmd_bounds,
    "validate": cmd_validate, "behrend": cmd_behrend, "extract": cmd_extract,
    "experiment": cmd_experiment,
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sidoturan", description="Sidorenko gaps and random Turan extraction for hypergraphs.")
    ap.add_argument("--version", action="version", version=f"sidoturan {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--f", help="forbidden / pattern hypergraph (descriptor or file)")
        p.add_argument("--h", help="host or witness hypergraph (descriptor or file)")
        p.add_argument("--w", help="weighted witness file")
        p.add_argument("--g", help="host graph for extract (default: G(n,p) from --n --p --seed)")
        p.add_argument("--r", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=float)
        p.add_argument("--k", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--N", type=int, help="tensor exponent for extract (default: automatic)")
        p.add_argument("--family")
        p.add_argument("--base")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--budget", type=int)
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "text", "csv"))
        p.add_argument("--config")
        p.add_argument("--strategy")
        p.add_argument("--mode", default=GRAPHON, choices=(GRAPHON, EDGE_INJECTIVE))
        p.add_argument("--bound-mode", dest="mode_name")
        p.add_argument("--param", action="append", help="key=value for bounds; repeatable")
        p.add_argument("--vmax", type=int, default=5)
        p.add_argument("--grid-p", type=_list(Fraction))
        p.add_argument("--grid-n", type=_list(int))
        p.add_argument("--trials", type=int)
        p.add_argument("--rigidity", action="store_true")
        p.set_defaults(func=COMMANDS[name])
    return ap


def _finish_defaults(args):
    args.seed_given = args.seed is not None
    args.threads_given = args.threads is not None
    args.budget_given = args.budget is not None
    if args.seed is None:
        args.seed = 0
    if args.threads is None:
        args.threads = 1
    if args.budget is None:
        args.budget = DEFAULT_BUDGET if args.cmd != "experiment" else 10**7
    if args.format is None:
        args.format = "csv" if args.cmd == "experiment" else "json"


def _write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".sidoturan-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _finish_defaults(args)
        text = args.func(args)
        if args.out:
            _write(args.out, text)
        else:
            sys.stdout.write(text)
        return 0
    except BudgetExceeded as exc:
        print(f"sidoturan: budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:  # HypergraphError is a ValueError
        print(f"sidoturan: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
