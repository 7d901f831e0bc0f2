"""Command-line front end.

Exit codes: 0 when the property holds (or a construction succeeds), 1 when it
fails and a certificate is printed, 2 on usage or parse errors, 3 when a
budget is exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import circuit as cc
from . import verify as vf
from .dct import check_dct_all, check_dct_one
from .dynamics import format_config, iterate, orbit, parse_config
from .errors import BudgetExceededError, MbanError
from .graph import DiGraph, format_graph, parse_edge_list, parse_graph
from .patterns import (
    characterize,
    find_leader,
    find_maximal_self_sufficient,
    find_small_self_sufficient,
    find_ss_m_cycle,
    format_certificate,
)
from .reduce import (
    ReductionOutput,
    circuit_to_mban,
    full_reduction,
    reduce_clique_to_ss,
    reduce_dctp_one,
    reduce_vc_to_leader,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _graph(path: str) -> DiGraph:
    return parse_graph(_read(path))


def _config(text: str, n: int, flag: str = "configuration") -> int:
    try:
        x, length = parse_config(text)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None
    if length != n:
        raise UsageError(f"{flag}: literal has {length} bits, expected {n}")
    return x


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, record: dict, text: str) -> None:
        if self.as_json:
            print(json.dumps(record, sort_keys=True))
        else:
            sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- dynamics and decision commands -----------------------------------------------


def cmd_simulate(args, out: Output) -> int:
    g = _graph(args.graph)
    x = _config(args.config, g.n)
    traj = [x]
    for _ in range(args.steps):
        traj.append(iterate(g, traj[-1], 1))
    lits = [format_config(y, g.n) for y in traj]
    out.emit({"trajectory": lits}, "\n".join(lits))
    return EXIT_OK


def cmd_orbit(args, out: Output) -> int:
    g = _graph(args.graph)
    x = _config(args.config, g.n)
    orb = orbit(g, x, args.max_steps)
    rec = orb.format()
    text = [f"transient_length {orb.transient_length}", f"period {orb.period}"]
    text += [f"t {s}" for s in rec["transient"]] + [f"c {s}" for s in rec["cycle"]]
    out.emit(rec, "\n".join(text))
    return EXIT_OK


def cmd_check_dct(args, out: Output) -> int:
    g = _graph(args.graph)
    v = check_dct_all(g, prune_complements=not args.no_prune, max_n=args.max_n, jobs=args.jobs)
    rec = v.format()
    lines = [f"solves {str(v.solves).lower()}", f"configurations_checked {v.configurations_checked}"]
    if not v.solves:
        lines += [
            f"counterexample {rec['counterexample']}",
            f"failure_kind {v.failure_kind}",
            f"majority_flip {str(v.majority_flip).lower()}",
        ]
    out.emit(rec, "\n".join(lines))
    return EXIT_OK if v.solves else EXIT_FAIL


def cmd_check_dct_one(args, out: Output) -> int:
    g = _graph(args.graph)
    x = _config(args.config, g.n)
    ok = check_dct_one(g, x, args.max_steps)
    out.emit({"converges": ok}, f"converges {str(ok).lower()}")
    return EXIT_OK if ok else EXIT_FAIL


def _report_certificate(cert, out: Output, kind: str) -> int:
    if cert is None:
        out.emit({"found": False, "kind": kind}, f"no {kind}")
        return EXIT_OK
    text = format_certificate(cert)
    out.emit({"found": True, "kind": cert.kind, "certificate": text}, text)
    return EXIT_FAIL


def cmd_find_leader(args, out: Output) -> int:
    g = _graph(args.graph)
    return _report_certificate(find_leader(g, args.max_n, args.max_subsets), out, "leader")


def cmd_find_ss(args, out: Output) -> int:
    g = _graph(args.graph)
    cert = find_small_self_sufficient(g, args.max_n, args.max_subsets)
    return _report_certificate(cert, out, "self-sufficient")


def cmd_find_maximal_ss(args, out: Output) -> int:
    g = _graph(args.graph)
    cert = find_maximal_self_sufficient(g, args.max_n)
    return _report_certificate(cert, out, "maximal-self-sufficient")


def cmd_find_cycle(args, out: Output) -> int:
    g = _graph(args.graph)
    return _report_certificate(find_ss_m_cycle(g, args.max_n), out, "m-cycle")


def cmd_characterize(args, out: Output) -> int:
    g = _graph(args.graph)
    v = characterize(g, args.max_n, args.max_subsets)
    if v.solves:
        out.emit({"solves": True}, "solves true")
        return EXIT_OK
    text = "solves false\n" + format_certificate(v.witness)
    out.emit({"solves": False, "kind": v.witness.kind, "certificate": format_certificate(v.witness)}, text)
    return EXIT_FAIL


# -- circuit commands ---------------------------------------------------------------


def _circuit(path: str) -> cc.Circuit:
    return cc.parse_circuit(_read(path))


def _emit_circuit(c: cc.Circuit, out: Output, extra: dict | None = None) -> int:
    text = cc.format_circuit(c)
    out.emit({"circuit": text, **(extra or {})}, text)
    return EXIT_OK


def cmd_circuit_eval(args, out: Output) -> int:
    c = _circuit(args.circuit)
    y = cc.evaluate(c, _config(args.input, c.n_inputs, "--input"))
    lit = format_config(y, c.n_outputs)
    out.emit({"output": lit}, lit)
    return EXIT_OK


def cmd_circuit_iterate(args, out: Output) -> int:
    c = _circuit(args.circuit)
    x = _config(args.input, c.n_inputs, "--input")
    if args.steps is not None:
        lit = format_config(cc.iterate_circuit(c, x, args.steps), c.n_outputs)
        out.emit({"output": lit}, lit)
        return EXIT_OK
    orb = cc.circuit_orbit(c, x, args.max_steps)
    rec = orb.format()
    text = [f"transient_length {orb.transient_length}", f"period {orb.period}"]
    text += [f"t {s}" for s in rec["transient"]] + [f"c {s}" for s in rec["cycle"]]
    out.emit(rec, "\n".join(text))
    return EXIT_OK


def cmd_circuit_dual(args, out: Output) -> int:
    return _emit_circuit(cc.dual(_circuit(args.circuit)), out)


def cmd_circuit_monotonize(args, out: Output) -> int:
    m = cc.monotonize(_circuit(args.circuit))
    return _emit_circuit(m.circuit, out, {"depth": m.depth, "meta": m.meta})


def cmd_circuit_wrap(args, out: Output) -> int:
    c = _circuit(args.circuit)
    x = _config(args.input, c.n_inputs, "--input")
    return _emit_circuit(cc.wrap_counter(c, x, args.index), out)


def cmd_circuit_layerize(args, out: Output) -> int:
    lc = cc.layerize(_circuit(args.circuit))
    return _emit_circuit(lc.circuit, out, {"depth": lc.depth})


# -- reductions ----------------------------------------------------------------------


def _emit_reduction(r: ReductionOutput, args, out: Output) -> int:
    graph_text = format_graph(r.graph)
    if args.out:
        Path(args.out + ".mban").write_text(graph_text)
        Path(args.out + ".labels").write_text(r.format_labels())
        if r.seed_config is not None:
            Path(args.out + ".seed").write_text(r.format_seed() + "\n")
    meta = {k: v for k, v in r.metadata.items() if k != "degree_histogram"}
    meta["degree_histogram"] = {str(k): v for k, v in r.metadata["degree_histogram"].items()}
    rec = {"graph": graph_text, "labels": list(r.labels), "seed": r.format_seed(), "metadata": meta}
    text = graph_text + "".join(f"# {v}: {tag}\n" for v, tag in enumerate(r.labels))
    if r.seed_config is not None:
        text += f"# seed {r.format_seed()}\n"
    out.emit(rec, text)
    return EXIT_OK


def cmd_reduce_dctp_one(args, out: Output) -> int:
    c = _circuit(args.circuit)
    r = reduce_dctp_one(c, _config(args.input, c.n_inputs, "--input"), args.index)
    return _emit_reduction(r, args, out)


def _edges(path: str):
    return parse_edge_list(_read(path))


def cmd_reduce_clique(args, out: Output) -> int:
    return _emit_reduction(reduce_clique_to_ss(*_edges(args.graph)), args, out)


def cmd_reduce_vc(args, out: Output) -> int:
    return _emit_reduction(reduce_vc_to_leader(*_edges(args.graph)), args, out)


def cmd_reduce_compile(args, out: Output) -> int:
    return _emit_reduction(circuit_to_mban(_circuit(args.circuit)), args, out)


def cmd_reduce_full(args, out: Output) -> int:
    c = _circuit(args.circuit)
    r = full_reduction(c, _config(args.input, c.n_inputs, "--input"), args.index)
    return _emit_reduction(r, args, out)


# -- verification suites ------------------------------------------------------------------


def cmd_verify(args, out: Output) -> int:
    seed = args.seed
    count = args.count
    suite = args.suite
    if suite == "characterization":
        res = vf.characterization(seed, samples=count or 300)
    elif suite == "dual":
        res = vf.dual_contract(seed, count=count or 100)
    elif suite == "rails":
        res = vf.rails_contract(seed, count=count or 50)
    elif suite == "counter":
        res = vf.counter_cycles(seed, per_case=count or 5)
    elif suite == "monotone":
        res = vf.monotone_cycles(seed, count=count or 50, fix_ones=not args.unrestricted)
    elif suite == "dctp-one":
        res = vf.dctp_one(seed, count=count or 100)
    else:
        res = vf.compiled_cycles(seed, trials=count or 100)
    rec = res.format()
    lines = [f"{res.name} {'PASS' if res.passed else 'FAIL'} checked={res.checked}"]
    lines += [f"  {k}={v}" for k, v in res.notes.items()]
    lines += [f"  failure: {f}" for f in res.failures[:10]]
    out.emit(rec, "\n".join(lines))
    return EXIT_OK if res.passed else EXIT_FAIL


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON record per result")
    common.add_argument("--max-n", type=int, default=20, help="vertex cap for exhaustive searches")
    common.add_argument("--max-steps", type=int, default=None, help="step budget for orbit computations")
    common.add_argument("--max-subsets", type=int, default=None, help="subset budget for pattern searches")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for full scans")

    parser = argparse.ArgumentParser(prog="mban", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(container, name, func, help_text):
        p = container.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add(sub, "simulate", cmd_simulate, "print a trajectory")
    p.add_argument("graph")
    p.add_argument("config")
    p.add_argument("--steps", type=int, default=1)
    p = add(sub, "orbit", cmd_orbit, "transient and limit cycle of a configuration")
    p.add_argument("graph")
    p.add_argument("config")
    p = add(sub, "check-dct", cmd_check_dct, "decide the density task by full enumeration")
    p.add_argument("graph")
    p.add_argument("--no-prune", action="store_true", help="also visit complements")
    p = add(sub, "check-dct-one", cmd_check_dct_one, "does one configuration reach its majority?")
    p.add_argument("graph")
    p.add_argument("config")
    for name, func, what in (
        ("find-leader", cmd_find_leader, "smallest leader subset"),
        ("find-ss", cmd_find_ss, "smallest self-sufficient subset below half size"),
        ("find-maximal-ss", cmd_find_maximal_ss, "non-trivial maximal self-sufficient subset"),
        ("find-cycle", cmd_find_cycle, "shortest self-sufficient m-cycle"),
        ("characterize", cmd_characterize, "decide the density task through forbidden patterns"),
    ):
        add(sub, name, func, what).add_argument("graph")

    circ = sub.add_parser("circuit", help="circuit tools").add_subparsers(dest="action", required=True)
    p = add(circ, "eval", cmd_circuit_eval, "evaluate once")
    p.add_argument("circuit")
    p.add_argument("--input", required=True)
    p = add(circ, "iterate", cmd_circuit_iterate, "iterate a self-map (orbit unless --steps)")
    p.add_argument("circuit")
    p.add_argument("--input", required=True)
    p.add_argument("--steps", type=int, default=None)
    add(circ, "dual", cmd_circuit_dual, "swap AND and OR").add_argument("circuit")
    add(circ, "monotonize", cmd_circuit_monotonize, "double-rail monotone circuit").add_argument("circuit")
    p = add(circ, "wrap", cmd_circuit_wrap, "counter wrapper")
    p.add_argument("circuit")
    p.add_argument("--input", required=True)
    p.add_argument("--index", type=int, required=True)
    add(circ, "layerize", cmd_circuit_layerize, "pad to a layered circuit").add_argument("circuit")

    red = sub.add_parser("reduce", help="reductions to MBANs").add_subparsers(dest="action", required=True)
    for name, func, src, what in (
        ("dctp-one", cmd_reduce_dctp_one, "circuit", "single-configuration convergence instance"),
        ("clique", cmd_reduce_clique, "graph", "half clique to small self-sufficient subset"),
        ("vc", cmd_reduce_vc, "graph", "vertex cover to leader"),
        ("compile", cmd_reduce_compile, "circuit", "monotone circuit to MBAN"),
        ("full", cmd_reduce_full, "circuit", "full pipeline from an iterated circuit instance"),
    ):
        p = add(red, name, func, what)
        p.add_argument(src)
        p.add_argument("--out", help="write <prefix>.mban, <prefix>.labels and <prefix>.seed")
        if name in ("dctp-one", "full"):
            p.add_argument("--input", required=True)
            p.add_argument("--index", type=int, required=True)

    p = add(sub, "verify", cmd_verify, "run a property suite")
    p.add_argument("suite", choices=sorted(vf.SUITES))
    p.add_argument("--count", type=int, default=None, help="suite size (instances or trials)")
    p.add_argument("--unrestricted", action="store_true", help="monotone: do not require C(1^n) = 1^n")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.json)
    try:
        return args.func(args, out)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, MbanError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
