"""Command line entry point: ``moserkit <command> ...``.

Exit status: 0 clean, 1 a violation was found, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import catalogue as cat
from .digraph import GraphError
from .groups import GroupError
from .kernel_graph import build_kernel_graph, check_omega_lemma, mainomega_bound
from .mader import MaderError, mader_cycles, verify_cycle_system
from .moser import (
    MoserError, MoserInstance, all_molecules, check_kernel_lemmas, kernel, mu_brute, mu_flow,
)
from .verify import THEOREMS, Mode, SweepSpec, VerificationError, run_sweep


class UsageError(Exception):
    pass


def _emit(args, payload, text: str) -> None:
    out = json.dumps(payload, indent=1, sort_keys=True) + "\n" if args.format == "json" else text
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _graph(args, reflexive: bool = False) -> cat.GraphInstance:
    inst = cat.parse_graph(args.graph, reflexive=args.reflexive_closure)
    if reflexive and not inst.graph.reflexive:
        raise UsageError(f"{inst.key} is not reflexive; pass --reflexive-closure")
    return inst


def _vertex(args, inst) -> int:
    if not 0 <= args.vertex < inst.graph.n:
        raise UsageError(f"vertex {args.vertex} out of range 0..{inst.graph.n - 1}")
    return args.vertex


def _cert(inst):
    cert = cat.certificate_for(inst)
    if cert is None:
        raise UsageError(f"{inst.key} is not vertex-transitive")
    return cert


def _set(vs) -> list[int]:
    return list(vs.members)


def cmd_mu(args) -> int:
    inst = _graph(args, reflexive=True)
    mi = MoserInstance(inst.graph, _vertex(args, inst))
    methods = ["flow", "brute"] if args.method == "both" else [args.method]
    certs = {m: (mu_flow(mi) if m == "flow" else mu_brute(mi)) for m in methods}
    payload = {
        "graph": inst.key, "vertex": mi.v,
        "results": {m: {"mu": c.value, "molecule": _set(c.witness_molecule.members), "cut": _set(c.cut)}
                    for m, c in certs.items()},
    }
    payload["agree"] = len({(c.value, c.witness_molecule.members) for c in certs.values()}) == 1
    text = "".join(f"{m}: mu={c.value} molecule={c.witness_molecule.members} cut={c.cut}\n" for m, c in certs.items())
    _emit(args, payload, text)
    return 0 if payload["agree"] else 1


def cmd_kernel(args) -> int:
    inst = _graph(args, reflexive=True)
    k = kernel(MoserInstance(inst.graph, _vertex(args, inst)))
    payload = {"graph": inst.key, "vertex": args.vertex, "mu": k.molecule.boundary_size,
               "kernel": _set(k.members), "atom": _set(k.atom)}
    _emit(args, payload, f"mu={k.molecule.boundary_size} kernel={k.members} atom={k.atom}\n")
    return 0


def cmd_molecules(args) -> int:
    inst = _graph(args, reflexive=True)
    mols = all_molecules(MoserInstance(inst.graph, _vertex(args, inst)))
    payload = {"graph": inst.key, "vertex": args.vertex, "mu": mols[0].boundary_size,
               "molecules": [_set(m.members) for m in mols]}
    _emit(args, payload, f"mu={mols[0].boundary_size}\n" + "".join(f"{m.members}\n" for m in mols))
    return 0


def cmd_lemmas(args) -> int:
    inst = _graph(args, reflexive=True)
    rep = check_kernel_lemmas(inst.graph, _cert(inst))
    payload = {"graph": inst.key, "checks": rep.checks, "violations": rep.violations}
    _emit(args, payload, f"checks={rep.checks} violations={len(rep.violations)}\n"
          + "".join(f"  {v}\n" for v in rep.violations))
    return 0 if rep.ok else 1


def cmd_kernel_graph(args) -> int:
    inst = _graph(args, reflexive=True)
    kg = build_kernel_graph(inst.graph, _cert(inst))
    bounds = [mainomega_bound(kg, v, kg.kernels[v].molecule.boundary_size) for v in range(inst.graph.n)]
    payload = {
        "graph": inst.key,
        "omega": [list(nb) for nb in kg.omega.out_adj],
        "kernels": [_set(k.members) for k in kg.kernels],
        "bounds": [{"v": b.v, "mu": b.mu, "rhs": b.rhs, "holds": b.holds, "tight": b.tight} for b in bounds],
    }
    text = "".join(f"v={b.v} omega={list(kg.omega.out_adj[b.v])} mu={b.mu} rhs={b.rhs}\n" for b in bounds)
    ok = all(b.holds for b in bounds)
    if args.check:
        lem = check_omega_lemma(kg)
        payload["check"] = {"checks": lem.checks, "violations": lem.violations}
        text += f"lemma checks={lem.checks} violations={len(lem.violations)}\n"
        ok = ok and lem.ok
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_mader(args) -> int:
    inst = _graph(args)
    _cert(inst)
    cs = mader_cycles(inst.graph, _vertex(args, inst))
    ok, why = verify_cycle_system(inst.graph, cs)
    payload = {"graph": inst.key, "vertex": cs.v, "cycles": [list(c) for c in cs.cycles], "verified": ok}
    _emit(args, payload, "".join(" -> ".join(map(str, c)) + "\n" for c in cs.cycles) + ("" if ok else f"INVALID: {why}\n"))
    return 0 if ok else 1


def cmd_groups(args) -> int:
    rows = []
    for spec in cat.group_catalogue():
        g = cat.group(spec)
        rows.append({"spec": spec, "order": g.order})
    _emit(args, {"groups": rows}, "".join(f"{r['spec']:10s} order {r['order']}\n" for r in rows))
    return 0


def cmd_verify(args) -> int:
    sources = [x for x in (args.family, args.group and f"group:{args.group}", args.graph and f"graph:{args.graph}") if x]
    if len(sources) != 1:
        raise UsageError("give exactly one of --family, --group, --graph")
    family = sources[0]
    if args.samples is not None:
        if args.exhaustive:
            raise UsageError("--exhaustive and --samples are exclusive")
        if args.seed is None:
            raise UsageError("--samples needs --seed")
        mode = Mode.sampled(args.samples, args.seed)
    else:
        mode = Mode()
    spec = SweepSpec(family, tuple(args.theorems), mode, args.records, args.force)
    report = run_sweep(spec, jobs=args.jobs, timing=args.timing)
    out = report.render(args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
        if args.format != "text":
            sys.stderr.write(report.to_text())
    else:
        sys.stdout.write(out)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="moserkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True, vertex=False, fmt=("json", "text")):
        if graph:
            sp.add_argument("--graph", required=True, help="circulant:n:s,..  cayley:G:s,..  file:PATH  petersen")
            sp.add_argument("--reflexive-closure", action="store_true", help="add a loop at every vertex on load")
        if vertex:
            sp.add_argument("--vertex", type=int, required=True)
        sp.add_argument("--format", choices=fmt, default="text")
        sp.add_argument("--out")

    sp = sub.add_parser("mu", help="minimum boundary over v-Moser sets")
    common(sp, vertex=True)
    sp.add_argument("--method", choices=("flow", "brute", "both"), default="flow")
    sp.set_defaults(func=cmd_mu)

    sp = sub.add_parser("kernel", help="the least v-molecule")
    common(sp, vertex=True)
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("molecules", help="all v-molecules (brute force)")
    common(sp, vertex=True)
    sp.set_defaults(func=cmd_molecules)

    sp = sub.add_parser("lemmas", help="kernel distinctness / equivariance / containment checks")
    common(sp)
    sp.set_defaults(func=cmd_lemmas)

    sp = sub.add_parser("kernel-graph", help="kernel-graph adjacency and lower bounds")
    common(sp)
    sp.add_argument("--check", action="store_true")
    sp.set_defaults(func=cmd_kernel_graph)

    sp = sub.add_parser("mader", help="d(v) cycles through v meeting only at v")
    common(sp, vertex=True)
    sp.set_defaults(func=cmd_mader)

    sp = sub.add_parser("groups", help="group catalogue")
    sp.add_argument("action", choices=("list",))
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_groups)

    sp = sub.add_parser("verify", help="sweep theorem instances and report")
    sp.add_argument("theorems", nargs="+", choices=THEOREMS)
    sp.add_argument("--family", help="cyclic:N  catalogue:N  kemperman-groups  groups:G,H  random:COUNT")
    sp.add_argument("--group")
    sp.add_argument("--graph", help="single graph; loops are added for the reflexive theorems")
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--records", choices=("violations", "tight", "all"), default="violations")
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sp.add_argument("--out")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--force", action="store_true")
    sp.add_argument("--timing", action="store_true", help="add wall-clock runtime to the summary")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (UsageError, GraphError, GroupError, MoserError, MaderError, VerificationError) as exc:
        sys.stderr.write(f"moserkit: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
