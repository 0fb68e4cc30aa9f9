"""Command-line front end.

Exit status: 0 affirmative verdict, 1 negative verdict, 2 usage or parse
error, 3 resource-limit refusal.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import Sequence, TextIO

from .axioms import CLOSURE_LIMIT, GRAPHOID, MODES, SEMIGRAPHOID, closure, derive
from .checks import CHECKS, run_check
from .core import DependencyModel, Dag, ResourceLimitError, UndirectedGraph, ValidationError
from .formats import (ParseError, error_text, dump_graph, dump_model, dump_protocol, format_triplet,
                      parse_graph, parse_model, parse_protocol, parse_triplet, to_dot)
from .protocol import (NotAffirmedError, compile_protocol, extract, protocol_triplets,
                       witness_protocol)
from .separation import (DSepOracle, dsep, dsep_model, idsep, is_imap,
                         undirected_minimal_imap, usep, usep_model)

OK, NEGATIVE, USAGE, RESOURCE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _read(path: str, stdin: TextIO) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _UsageError(f"{path}: {e.strerror}") from None


def _edgeless(g) -> bool:
    return isinstance(g, Dag) and not g.deterministic and not g.edges()


def _load_graph(args, stdin: TextIO, want: type | None = None) -> Dag | UndirectedGraph:
    g = parse_graph(_read(args.graph, stdin), args.graph)
    if want is UndirectedGraph and _edgeless(g):
        # a file with only node lines reads as either kind
        g = UndirectedGraph(g.universe)
    if want is not None and not isinstance(g, want):
        kind = "directed (edge)" if want is Dag else "undirected (link)"
        raise _UsageError(f"{args.graph}: expected a {kind} graph")
    return g


def _load_model(args, stdin: TextIO) -> DependencyModel:
    return parse_model(_read(args.model, stdin), args.model)


def _parse_literal(text: str, universe, what: str):
    try:
        return parse_triplet(text, universe)
    except (ValidationError, KeyError) as e:
        raise _UsageError(f"{what} {text!r}: {error_text(e)}") from None


def _oracle(args, stdin: TextIO, default_mode: str):
    """Oracle from --graph (d-separation) or --model (closure membership)."""
    if args.graph:
        return DSepOracle(_load_graph(args, stdin, Dag))
    mode = args.mode or default_mode
    return closure(_load_model(args, stdin), mode, limit=args.limit)


def _verdict(out: TextIO, ok: bool, yes: str, no: str) -> int:
    print(yes if ok else no, file=out)
    return OK if ok else NEGATIVE


# -- commands ----------------------------------------------------------------

def _cmd_closure(args, out, stdin):
    m = closure(_load_model(args, stdin), args.mode or SEMIGRAPHOID, limit=args.limit)
    out.write(dump_model(m, header=False))
    return OK


def _cmd_derive(args, out, stdin):
    m = _load_model(args, stdin)
    target = _parse_literal(args.target, m.universe, "target")
    trace = derive(m, target, args.mode or SEMIGRAPHOID, limit=args.limit)
    if trace is None:
        print("NOT DERIVABLE", file=out)
        return NEGATIVE
    u = m.universe
    for i, step in enumerate(trace.steps, 1):
        premises = " & ".join(format_triplet(p, u) for p in step.premises)
        print(f"{i}. {step.axiom}: {premises} => {format_triplet(step.result, u)}", file=out)
    print("DERIVABLE" if trace.steps else "DERIVABLE (premise)", file=out)
    return OK


def _separation(fn, want):
    def cmd(args, out, stdin):
        g = _load_graph(args, stdin, want)
        q = _parse_literal(args.query, g.universe, "query")
        return _verdict(out, fn(g, q), "SEPARATED", "NOT SEPARATED")
    return cmd


def _cmd_compile(args, out, stdin):
    p = parse_protocol(_read(args.protocol, stdin), args.protocol)
    out.write(dump_graph(compile_protocol(p)))
    return OK


def _cmd_extract(args, out, stdin):
    out.write(dump_protocol(extract(_load_graph(args, stdin, Dag))))
    return OK


def _cmd_triplets(args, out, stdin):
    p = parse_protocol(_read(args.protocol, stdin), args.protocol)
    for t in protocol_triplets(p):
        print(f"indep {format_triplet(t, p.universe)}", file=out)
    return OK


def _cmd_minimal_imap(args, out, stdin):
    oracle = _oracle(args, stdin, GRAPHOID)
    out.write(dump_graph(undirected_minimal_imap(oracle)))
    return OK


def _cmd_witness(args, out, stdin):
    oracle = _oracle(args, stdin, SEMIGRAPHOID)
    t = _parse_literal(args.target, oracle.universe, "target")
    try:
        p = witness_protocol(oracle, t)
    except NotAffirmedError:
        print(f"indepcalc: cannot build a witness: {args.target!r} is not affirmed", file=sys.stderr)
        print("NOT AFFIRMED", file=out)
        return NEGATIVE
    out.write(dump_protocol(p))
    return OK


def _cmd_verify_imap(args, out, stdin):
    g = _load_graph(args, stdin)
    read = dsep_model if isinstance(g, Dag) else usep_model
    candidate = read(g, limit=args.limit)
    m = closure(_load_model(args, stdin), args.mode or SEMIGRAPHOID, limit=args.limit)
    if m.universe != g.universe:
        raise _UsageError("graph and model declare different variables (or a different order)")
    bad = is_imap(candidate, m)
    if bad is None:
        print("I-MAP", file=out)
        return OK
    print("NOT I-MAP", file=out)
    print(f"counterexample: indep {format_triplet(bad, g.universe)}", file=out)
    return NEGATIVE


def _cmd_check(args, out, stdin):
    report = run_check(args.name, [args.n], args.trials, args.seed, args.limit)
    for line in report.lines():
        print(line, file=out)
    return OK if report.ok else NEGATIVE


def _cmd_export_dot(args, out, stdin):
    want = {"dag": Dag, "undirected": UndirectedGraph}.get(args.flavor)
    g = _load_graph(args, stdin, want)
    if args.flavor is not None and (args.flavor == "dag") != isinstance(g, Dag):
        raise _UsageError(f"{args.graph}: file does not hold a {args.flavor} graph")
    out.write(to_dot(g))
    return OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indepcalc", allow_abbrev=False,
                                     description="Independence calculus on DAGs, undirected graphs and triplet models.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help):
        p = sub.add_parser(name, help=help, allow_abbrev=False)
        p.set_defaults(fn=fn)
        return p

    def limit_arg(p):
        p.add_argument("--limit", type=int, default=CLOSURE_LIMIT,
                       help=f"largest universe for exhaustive work (default {CLOSURE_LIMIT})")

    def mode_arg(p):
        p.add_argument("--mode", choices=MODES, default=None)

    p = add("closure", _cmd_closure, "print the axiom closure of a model")
    p.add_argument("--model", required=True)
    mode_arg(p)
    limit_arg(p)

    p = add("derive", _cmd_derive, "print a derivation of a triplet from a model")
    p.add_argument("--model", required=True)
    p.add_argument("--target", required=True)
    mode_arg(p)
    limit_arg(p)

    for name, fn, want, help in (("dsep", dsep, Dag, "d-separation query"),
                                 ("idsep", idsep, Dag, "ID-separation query (deterministic nodes)"),
                                 ("usep", usep, UndirectedGraph, "undirected separation query")):
        p = add(name, _separation(fn, want), help)
        p.add_argument("--graph", required=True)
        p.add_argument("--query", required=True)

    p = add("compile", _cmd_compile, "turn a protocol into a DAG")
    p.add_argument("--protocol", required=True)

    p = add("extract", _cmd_extract, "read the protocol off a DAG")
    p.add_argument("--graph", required=True)

    p = add("triplets", _cmd_triplets, "list a protocol's I(n, B, R) statements")
    p.add_argument("--protocol", required=True)

    for name, fn, help in (("minimal-imap", _cmd_minimal_imap, "edge-minimal undirected I-map"),
                           ("witness", _cmd_witness, "protocol whose DAG separates the target")):
        p = add(name, fn, help)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--graph")
        src.add_argument("--model")
        if name == "witness":
            p.add_argument("--target", required=True)
        mode_arg(p)
        limit_arg(p)

    p = add("verify-imap", _cmd_verify_imap, "is the graph an I-map of the model's closure?")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", required=True)
    mode_arg(p)
    limit_arg(p)

    p = add("check", _cmd_check, "run a randomized property check")
    p.add_argument("name", choices=sorted(CHECKS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=None)

    p = add("export-dot", _cmd_export_dot, "render a graph file as DOT")
    p.add_argument("--graph", required=True)
    p.add_argument("--flavor", choices=("dag", "undirected"), default=None)
    return parser


def run(argv: Sequence[str], stdin: TextIO | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        try:
            args = parser.parse_args(list(argv))
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else USAGE
        if args.command == "check":
            if args.n < 1 or args.trials < 0:
                print("indepcalc: --n must be positive and --trials nonnegative", file=stderr)
                return USAGE
        try:
            return args.fn(args, stdout, stdin)
        except ResourceLimitError as e:
            print(f"indepcalc: {e}", file=stderr)
            return RESOURCE
        except (_UsageError, ParseError, ValidationError, KeyError) as e:
            print(f"indepcalc: {error_text(e)}", file=stderr)
            return USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))
