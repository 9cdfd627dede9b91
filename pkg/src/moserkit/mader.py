"""Mader cycle systems: d(v) directed cycles through v sharing nothing else.

Delete v, split every other vertex into a unit arc, feed the out-neighbours
of v from a super source and drain the in-neighbours of v into a super sink.
A flow of value d(v) decomposes into vertex-disjoint paths; closing each
with v gives the cycles.
"""
from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph
from .flow import INF, FlowNetwork, node_in, node_out


class MaderError(RuntimeError):
    pass


@dataclass(frozen=True)
class CycleSystem:
    v: int
    cycles: tuple[tuple[int, ...], ...]


def mader_network(g: Digraph, v: int) -> tuple[FlowNetwork, int, int]:
    n = g.n
    s, t = 2 * n, 2 * n + 1
    net = FlowNetwork(2 * n + 2)
    for u in range(n):
        if u != v:
            net.add_arc(node_in(u), node_out(u), 1)
    for u, w in g.edges():
        if v not in (u, w) and u != w:
            net.add_arc(node_out(u), node_in(w), INF)
    for w in g.out_adj[v]:
        net.add_arc(s, node_in(w), INF)
    for w in g.in_adj[v]:
        net.add_arc(node_out(w), t, INF)
    return net, s, t


def mader_cycles(g: Digraph, v: int) -> CycleSystem:
    if not g.loopless:
        raise MaderError("Mader cycles need a loopless graph")
    r = g.out_degree(v)
    if r < 1:
        raise MaderError(f"vertex {v} has no out-neighbours")
    net, s, t = mader_network(g, v)
    value = net.max_flow(s, t)
    if value < r:
        raise MaderError(f"flow {value} < out-degree {r} at v={v}: graph is not vertex-transitive or flow is wrong")
    cycles = []
    for nodes in net.decompose_paths(s, t):
        # nodes: s, u_in, u_out, w_in, w_out, ..., t
        path = [x // 2 for x in nodes[1:-1:2]]
        cycles.append((v, *path, v))
    if len(cycles) != r:
        raise MaderError(f"decomposition gave {len(cycles)} paths for flow {value}")
    return CycleSystem(v, tuple(sorted(cycles)))


def verify_cycle_system(g: Digraph, cs: CycleSystem) -> tuple[bool, str]:
    """Independent re-check of a cycle system against ``g``; returns (ok, reason)."""
    v = cs.v
    if len(cs.cycles) != g.out_degree(v):
        return False, f"{len(cs.cycles)} cycles but out-degree {g.out_degree(v)}"
    seen: dict[int, int] = {}
    for i, cyc in enumerate(cs.cycles):
        if len(cyc) < 3 or cyc[0] != v or cyc[-1] != v:
            return False, f"cycle {i} does not start and end at {v}"
        inner = cyc[1:-1]
        if len(set(inner)) != len(inner) or v in inner:
            return False, f"cycle {i} repeats a vertex"
        for a, b in zip(cyc, cyc[1:]):
            if not g.has_edge(a, b):
                return False, f"cycle {i} uses non-edge ({a},{b})"
        for u in inner:
            if u in seen:
                return False, f"cycles {seen[u]} and {i} share vertex {u}"
            seen[u] = i
    return True, ""
