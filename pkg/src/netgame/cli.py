"""``netgame`` command line.

Exit codes: 0 success, 1 domain rejection (regime, assumption, feasibility),
2 parse or I/O failure.  Diagnostics are JSON lines on standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, _kernels
from .constructions import (
    CommunitySkeleton,
    HypergraphSpec,
    Join,
    build_clique,
    build_community_graph,
    build_complete_single_host,
    build_dense_k_supportable,
    build_h32,
    build_hkp,
    build_hypergraph_network,
)
from .degree_sequence import DegreeSequence, powerlaw_sequence, realize
from .dynamics import DynamicsPolicy, arrivals_from, run_dynamics
from .errors import DomainError, InvalidInputError, NetgameError, ParseError
from .io import (
    RunManifest,
    _keys,
    _event_from_json,
    _int,
    _load_json,
    dumps,
    export_graph,
    format_rational,
    params_to_json,
    parse_config,
    parse_degrees,
    parse_rational,
    read_text,
    serialize,
)
from .metrics import graph_stats, verify_clustering_bound, verify_k_supportable_degree_bound
from .model import B_EPS, Parameters, Strategy, connection_graph
from .stability import check_stability_criterion, check_stability_deviation

CONSTRUCTIONS = ("complete", "clique", "hkp", "h32", "community", "hypergraph", "dense")
RANDOM_CONSTRUCTIONS = ("hypergraph", "dense")


def diag(level: str, **fields) -> None:
    fields = {"level": level, **fields}
    sys.stderr.write(json.dumps(fields, sort_keys=True) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message, "argv")


class _Run:
    """Per-invocation state: outputs written and the optional manifest."""

    def __init__(self, args, argv):
        self.args = args
        self.manifest = RunManifest(argv=list(argv), version=__version__, backend=_kernels.backend())
        self.t0 = time.perf_counter()

    def read(self, path) -> str:
        text = read_text(path)
        self.manifest.add_input(path)
        return text

    def emit(self, text: str, path=None) -> None:
        if path is None or str(path) == "-":
            sys.stdout.write(text)
            return
        try:
            Path(path).write_text(text)
        except OSError as e:
            raise ParseError(e.strerror or str(e), str(path)) from None
        self.manifest.add_output(path, text)
        diag("info", event="wrote", path=str(path), sha256=self.manifest.outputs[str(path)])

    def finish(self) -> None:
        path = getattr(self.args, "manifest", None)
        if path:
            self.manifest.wall_clock = time.perf_counter() - self.t0
            try:
                Path(path).write_text(dumps(self.manifest.to_json()))
            except OSError as e:
                raise ParseError(e.strerror or str(e), str(path)) from None


# argument helpers

def _rational(text: str) -> Fraction:
    return parse_rational(text, "argv")


def _params(args, n: int) -> Parameters:
    b = B_EPS if args.b in (None, "eps") else _rational(args.b)
    if args.a is not None or args.c is not None:
        if args.a is None or args.c is None:
            raise ParseError("--a and --c must be given together", "argv")
        a, c = _rational(args.a), _rational(args.c)
        if args.gamma is not None and _rational(args.gamma) != a / c:
            raise ParseError("--gamma disagrees with --a/--c", "argv")
        return Parameters(a=a, b=b, c=c, n=n)
    if args.gamma is None:
        raise ParseError("one of --gamma or --a/--c is required", "argv")
    return Parameters.from_gamma(_rational(args.gamma), n, b)


def _add_param_flags(p) -> None:
    p.add_argument("--gamma", help="benefit-to-cost ratio as p/q (a=p, c=q)")
    p.add_argument("--a", help="benefit per connection, p/q")
    p.add_argument("--c", help="cost per invitation unit, p/q")
    p.add_argument("--b", default="eps", help="fixed cost per unit rate, p/q or eps (default)")


def _skeleton(run: _Run, path) -> CommunitySkeleton:
    doc = _load_json(run.read(path), str(path))
    _keys(doc, "skeleton", {"cliques", "joins"})
    sizes = doc["cliques"]
    if not isinstance(sizes, list):
        raise ParseError("cliques must be a list of sizes", "skeleton.cliques")
    sizes = [_int(s, f"skeleton.cliques[{i}]") for i, s in enumerate(sizes)]
    joins = {}
    if not isinstance(doc["joins"], list):
        raise ParseError("joins must be a list", "skeleton.joins")
    for i, j in enumerate(doc["joins"]):
        where = f"skeleton.joins[{i}]"
        _keys(j, where, {"between", "mode"}, {"size"})
        pair = j["between"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError("between must list two clique indices", where)
        a, b = (_int(x, f"{where}.between") for x in pair)
        joins[(a, b)] = Join(j["mode"], _int(j.get("size", 1), f"{where}.size"))
    return CommunitySkeleton(tuple(sizes), joins)


# subcommands

def cmd_build(run: _Run) -> int:
    a = run.args
    kind = a.construction
    if kind in RANDOM_CONSTRUCTIONS and a.seed is None:
        raise ParseError(f"--seed is required for the {kind} construction", "argv")
    run.manifest.seed = a.seed

    def need(name):
        v = getattr(a, name)
        if v is None:
            raise ParseError(f"--{name.replace('_', '-')} is required for the {kind} construction", "argv")
        return v

    if kind == "complete":
        cfg = build_complete_single_host(_params(a, need("n")))
    elif kind == "clique":
        size = need("size")
        cfg = build_clique(_params(a, size), size)
    elif kind == "hkp":
        k, p = need("k"), need("p")
        cfg = build_hkp(_params(a, 2 * k - p), k, p)
    elif kind == "h32":
        cfg = build_h32(_params(a, 4))
    elif kind == "community":
        sk = _skeleton(run, need("skeleton"))
        cfg = build_community_graph(_params(a, 1), sk)
    elif kind == "hypergraph":
        n, k, d = need("n"), need("k"), need("d")
        cfg = build_hypergraph_network(_params(a, n), HypergraphSpec(n, k, d, a.seed)).config
    else:
        n, K = need("n"), need("K")
        cfg = build_dense_k_supportable(_params(a, n), n, K, a.seed).config
    run.manifest.parameters = {"construction": kind, **params_to_json(cfg.params)}
    run.emit(serialize(cfg), a.out)
    return 0


def cmd_check(run: _Run) -> int:
    cfg = parse_config(run.args.config)
    run.manifest.add_input(run.args.config)
    if run.args.mode == "criterion":
        rep = check_stability_criterion(cfg)
    else:
        rep = check_stability_deviation(cfg)
    doc = rep.to_json()
    doc["mode"] = run.args.mode
    run.emit(dumps(doc), run.args.out)
    return 0


def cmd_metrics(run: _Run) -> int:
    cfg = parse_config(run.args.config)
    run.manifest.add_input(run.args.config)
    G = connection_graph(cfg)
    stats = graph_stats(G)
    doc = stats.to_json()
    if run.args.check == "clustering":
        chk = verify_clustering_bound(G)
        doc["clustering_bound"] = {
            "holds": chk.holds,
            "lhs": format_rational(chk.lhs),
            "rhs": format_rational(chk.rhs),
            "degenerate": chk.degenerate,
            "sharper_holds": chk.sharper_holds,
            "sharper_rhs": None if chk.sharper_rhs is None else format_rational(chk.sharper_rhs),
        }
    elif run.args.check == "ksupport":
        if run.args.K is None:
            raise ParseError("--K is required with --check ksupport", "argv")
        chk = verify_k_supportable_degree_bound(cfg, run.args.K)
        doc["ksupport_bound"] = {
            "holds": chk.holds,
            "average_degree": format_rational(chk.average_degree),
            "bound": format_rational(chk.bound),
        }
    if run.args.json:
        text = dumps(doc)
    else:
        text = "".join(f"{k}: {json.dumps(v, sort_keys=True)}\n" for k, v in sorted(doc.items()))
    run.emit(text, run.args.out)
    return 0


def cmd_degree_seq(run: _Run) -> int:
    a = run.args
    if (a.input is None) == (a.powerlaw is None):
        raise ParseError("give exactly one of --input or --powerlaw", "argv")
    if a.input is not None:
        D = DegreeSequence(parse_degrees(run.read(a.input), str(a.input)))
    else:
        parts = a.powerlaw.split(",")
        if len(parts) != 2 or not parts[1].strip().isdigit():
            raise ParseError(f"--powerlaw expects alpha,n, got {a.powerlaw!r}", "argv")
        D = powerlaw_sequence(_rational(parts[0]), int(parts[1]))
    run.manifest.seed = a.seed
    params = _params(a, D.n)
    rep = realize(D, params, a.seed)
    G = connection_graph(rep.config)
    doc = rep.to_json()
    doc["connected"] = graph_stats(G).connected
    doc["stable"] = check_stability_deviation(rep.config).stable
    doc["params"] = params_to_json(params)
    run.manifest.parameters = params_to_json(params)
    run.emit(serialize(rep.config), a.out)
    if a.report:
        run.emit(dumps(doc), a.report)
    else:
        diag("info", event="realized", l1_shift=rep.l1_shift, K=rep.K_used, stable=doc["stable"])
    return 0


def _arrivals(run: _Run, path, n0: int) -> tuple:
    doc = _load_json(run.read(path), str(path))
    if not isinstance(doc, list):
        raise ParseError("arrivals must be a list", "arrivals")
    out = []
    n = n0
    for i, item in enumerate(doc):
        where = f"arrivals[{i}]"
        _keys(item, where, {"round", "events"})
        rnd = _int(item["round"], f"{where}.round")
        if not isinstance(item["events"], list):
            raise ParseError("events must be a list", f"{where}.events")
        evs = [_event_from_json(e, f"{where}.events[{j}]", n + 1, host=n) for j, e in enumerate(item["events"])]
        out.append((rnd, Strategy(tuple(evs))))
        n += 1
    if [r for r, _ in out] != sorted(r for r, _ in out):
        raise ParseError("arrivals must be listed in round order", "arrivals")
    return arrivals_from(out)


def cmd_dynamics(run: _Run) -> int:
    a = run.args
    cfg = parse_config(a.init)
    run.manifest.add_input(a.init)
    arrivals = _arrivals(run, a.arrivals, cfg.n) if a.arrivals else ()
    try:
        policy = DynamicsPolicy(order=a.order, max_rounds=a.max_rounds, seed=a.seed, arrivals=arrivals)
    except InvalidInputError as e:
        raise ParseError(str(e), "argv") from None
    run.manifest.seed = a.seed
    final, trace = run_dynamics(cfg, policy=policy)
    if a.trace:
        run.emit(trace.to_jsonl(), a.trace)
    if a.out:
        run.emit(serialize(final), a.out)
    diag("info", event="dynamics", status=trace.status, rounds=trace.rounds, changes=len(trace.steps))
    return 0


def cmd_export(run: _Run) -> int:
    cfg = parse_config(run.args.config)
    run.manifest.add_input(run.args.config)
    run.emit(export_graph(connection_graph(cfg), run.args.format), run.args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--manifest", help="write a run manifest (argv, seed, hashes) to this path")
    p = _Parser(prog="netgame", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"netgame {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="emit a stable configuration from a named construction")
    b.add_argument("--construction", required=True, choices=CONSTRUCTIONS)
    _add_param_flags(b)
    b.add_argument("--n", type=int, help="number of agents (complete, hypergraph, dense)")
    b.add_argument("--size", type=int, help="clique size")
    b.add_argument("--k", type=int, help="clique size for hkp, edge size for hypergraph")
    b.add_argument("--p", type=int, help="shared vertices for hkp")
    b.add_argument("--d", type=int, help="vertex degree of the hypergraph")
    b.add_argument("--K", type=int, help="invitation cap for the dense construction")
    b.add_argument("--skeleton", help="community skeleton JSON")
    b.add_argument("--seed", type=int)
    b.add_argument("--out", help="output path (default stdout)")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", parents=[common], help="stability verdict for a configuration")
    c.add_argument("config")
    c.add_argument("--mode", choices=("criterion", "best-response"), default="best-response")
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("metrics", parents=[common], help="graph statistics of the connection network")
    m.add_argument("config")
    m.add_argument("--json", action="store_true", help="emit JSON instead of key: value lines")
    m.add_argument("--check", choices=("clustering", "ksupport"))
    m.add_argument("--K", type=int, help="invitation cap for --check ksupport")
    m.add_argument("--out")
    m.set_defaults(func=cmd_metrics)

    d = sub.add_parser("degree-seq", parents=[common], help="realise a degree sequence")
    d.add_argument("--input", help="file with one degree per line")
    d.add_argument("--powerlaw", help="alpha,n for a generated power-law sequence")
    _add_param_flags(d)
    d.add_argument("--seed", type=int, required=True)
    d.add_argument("--out", help="configuration output path (default stdout)")
    d.add_argument("--report", help="report JSON path")
    d.set_defaults(func=cmd_degree_seq)

    y = sub.add_parser("dynamics", parents=[common], help="run best-response dynamics")
    y.add_argument("--init", required=True)
    y.add_argument("--order", choices=("rr", "random"), default="rr")
    y.add_argument("--seed", type=int)
    y.add_argument("--max-rounds", type=int, default=100)
    y.add_argument("--arrivals", help="JSON list of {round, events} for newly arriving agents")
    y.add_argument("--trace", help="JSON-lines trace output path")
    y.add_argument("--out", help="final configuration output path")
    y.set_defaults(func=cmd_dynamics)

    e = sub.add_parser("export", parents=[common], help="export the connection network")
    e.add_argument("config")
    e.add_argument("--format", choices=("edgelist", "dot"), default="edgelist")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        run = _Run(args, argv)
        code = args.func(run)
        run.finish()
        return code
    except DomainError as e:
        diag("error", kind=type(e).__name__, message=str(e), **({"assumption": e.assumption} if hasattr(e, "assumption") else {}))
        return 1
    except ParseError as e:
        diag("error", kind="ParseError", message=e.message, location=e.location)
        return 2
    except (InvalidInputError, NetgameError) as e:
        diag("error", kind=type(e).__name__, message=str(e))
        return 2
    except OSError as e:
        diag("error", kind="IOError", message=str(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
