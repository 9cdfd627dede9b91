"""Graph spec strings and the enumerated instance families used by sweeps.

Graph specs::

    circulant:7:0,1,3          Cay(Z_7, {0,1,3})
    cayley:D4:0,1,4            Cay(D_4, {0,1,4}) with element indices
    file:PATH                  edge list
    petersen                   the Petersen graph (symmetric, loopless)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .digraph import Digraph, GraphError, load_edge_list, reflexive_closure
from .groups import FiniteGroup, cayley_graph, make_group, translation_permutation
from .transitivity import TransitivityCertificate, certify_transitivity


@dataclass(frozen=True)
class GraphInstance:
    key: str
    graph: Digraph
    group: FiniteGroup | None = None
    connection_set: tuple[int, ...] | None = None

    @property
    def hint(self):
        if self.group is None:
            return None
        return [translation_permutation(self.group, c) for c in self.group.elements]


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise GraphError(f"bad element list {text!r}") from None


def petersen() -> Digraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges = outer + spokes + inner
    return Digraph.from_edges(10, edges + [(b, a) for a, b in edges])


@lru_cache(maxsize=None)
def group(spec: str) -> FiniteGroup:
    return make_group(spec)


def cayley_instance(group_spec: str, s) -> GraphInstance:
    g = group(group_spec)
    s = tuple(sorted(set(s)))
    key = f"cayley:{group_spec}:{','.join(map(str, s))}"
    return GraphInstance(key, cayley_graph(g, s), g, s)


def parse_graph(spec: str, reflexive: bool = False) -> GraphInstance:
    spec = spec.strip()
    if spec.startswith("circulant:"):
        parts = spec.split(":")
        if len(parts) != 3 or not parts[1].isdigit():
            raise GraphError(f"bad circulant spec {spec!r}")
        n = int(parts[1])
        inst = cayley_instance(f"Z{n}", [x % n for x in _ints(parts[2])])
        inst = GraphInstance(f"circulant:{n}:{','.join(map(str, inst.connection_set))}", inst.graph, inst.group, inst.connection_set)
    elif spec.startswith("cayley:"):
        body = spec[len("cayley:"):]
        gspec, _, elems = body.rpartition(":")
        if not gspec:
            raise GraphError(f"bad cayley spec {spec!r}")
        inst = cayley_instance(gspec, _ints(elems))
    elif spec.startswith("file:"):
        inst = GraphInstance(spec, load_edge_list(spec[len("file:"):]))
    elif spec == "petersen":
        inst = GraphInstance(spec, petersen())
    else:
        raise GraphError(f"unsupported graph spec {spec!r}")
    if reflexive and not inst.graph.reflexive:
        g = reflexive_closure(inst.graph)
        if inst.group is not None:
            s = tuple(sorted(set(inst.connection_set) | {0}))
            return GraphInstance(inst.key + "+loops", g, inst.group, s)
        return GraphInstance(inst.key + "+loops", g)
    return inst


# -- families ----------------------------------------------------------------

# groups swept exhaustively by the group-level theorems
KEMPERMAN_GROUPS = ("Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "D3", "D4", "Q8", "Z2xZ4")

# groups whose Cayley graphs form the graph catalogue, every connection set
CATALOGUE_GROUPS = (
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12",
    "Z2xZ2", "D3", "D4", "Q8", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "D5", "D6", "Z2xZ6", "S3",
)

# larger groups reached by seeded samples of connection sets
SAMPLED_GROUPS = (
    "Z13", "Z14", "Z15", "Z16", "D7", "D8", "Z2xZ8", "Z4xZ4", "Z2xZ2xZ4", "Q8xZ2", "Z2xD4", "Z3xZ5",
)

NAMED_GRAPHS = ("petersen",)


def connection_sets(order: int, reflexive: bool) -> Iterator[tuple[int, ...]]:
    """All S with identity in S (reflexive) or identity not in S and S non-empty."""
    rest = range(1, order)
    for mask in range(1 << (order - 1)):
        s = tuple(x for i, x in enumerate(rest) if mask >> i & 1)
        if reflexive:
            yield (0,) + s
        elif s:
            yield s


def circulants(max_n: int, reflexive: bool = True) -> Iterator[GraphInstance]:
    for n in range(1, max_n + 1):
        for s in connection_sets(n, reflexive):
            yield parse_graph(f"circulant:{n}:{','.join(map(str, s))}")


def cayley_family(group_spec: str, reflexive: bool) -> Iterator[GraphInstance]:
    for s in connection_sets(group(group_spec).order, reflexive):
        yield cayley_instance(group_spec, s)


def job_rng(seed: int, job: int) -> np.random.Generator:
    """Stream for job ``job``: PCG64 seeded by SeedSequence(seed, spawn_key=(job,))."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(job,))))


def sampled_connection_sets(order: int, reflexive: bool, count: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    """``count`` random connection sets, each element kept with probability 1/2.

    Duplicates are dropped; the list is returned sorted.
    """
    found = set()
    for _ in range(count):
        bits = rng.random(order - 1) < 0.5
        s = tuple(int(x) + 1 for x in np.flatnonzero(bits))
        if reflexive:
            s = (0,) + s
        elif not s:
            s = (1 + int(rng.integers(order - 1)),) if order > 1 else ()
        if s:
            found.add(s)
    return sorted(found)


def graph_catalogue(max_vertices: int, reflexive: bool, samples: int = 0, seed: int = 0) -> Iterator[GraphInstance]:
    """The catalogue of vertex-transitive test graphs up to ``max_vertices``.

    Every connection set of every group in CATALOGUE_GROUPS, plus ``samples``
    seeded connection sets per group in SAMPLED_GROUPS, plus the named
    non-Cayley graphs (with loops added when ``reflexive``).
    """
    for gs in CATALOGUE_GROUPS:
        if group(gs).order <= max_vertices:
            yield from cayley_family(gs, reflexive)
    if samples:
        for j, gs in enumerate(SAMPLED_GROUPS):
            order = group(gs).order
            if order > max_vertices:
                continue
            for s in sampled_connection_sets(order, reflexive, samples, job_rng(seed, j)):
                yield cayley_instance(gs, s)
    for name in NAMED_GRAPHS:
        inst = parse_graph(name, reflexive=reflexive)
        if inst.graph.n <= max_vertices:
            yield inst


def random_vt_instances(count: int, seed: int, max_order: int = 12) -> list[GraphInstance]:
    """Seeded random reflexive Cayley graphs, every third one with shuffled vertex labels.

    Relabelled instances carry no group, so their transitivity has to come
    from automorphism search rather than the translation hint.
    """
    pool = [gs for gs in CATALOGUE_GROUPS + SAMPLED_GROUPS if 2 <= group(gs).order <= max_order]
    rng = job_rng(seed, 0)
    out = []
    for i in range(count):
        gs = pool[int(rng.integers(len(pool)))]
        (s,) = sampled_connection_sets(group(gs).order, True, 1, rng)
        inst = cayley_instance(gs, s)
        if i % 3 == 2:
            perm = [int(x) for x in rng.permutation(inst.graph.n)]
            g = Digraph.from_edges(inst.graph.n, ((perm[u], perm[w]) for u, w in inst.graph.edges()))
            inst = GraphInstance(f"{inst.key}@perm={','.join(map(str, perm))}", g)
        out.append(inst)
    return out


def group_catalogue() -> list[str]:
    return list(itertools.chain(CATALOGUE_GROUPS, SAMPLED_GROUPS))



def certificate_for(inst: GraphInstance) -> TransitivityCertificate | None:
    return certify_transitivity(inst.graph, inst.hint)
