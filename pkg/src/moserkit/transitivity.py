"""Certificates that a finite digraph is vertex-transitive.

A certificate stores, for every vertex y, one automorphism sending vertex 0
to y. That is enough for transitivity: x -> y is reached by composing the
inverse of the witness for x with the witness for y.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .digraph import Digraph, GraphError, _bits, is_automorphism

SEARCH_CAP = 64

KINDS = ("cayley-translations", "automorphism-search", "asserted")


class SearchCapExceeded(GraphError):
    pass


@dataclass(frozen=True)
class TransitivityCertificate:
    kind: str
    vertex_count: int
    # witnesses[y] maps vertex 0 to y; empty for kind "asserted"
    witnesses: tuple[tuple[int, ...], ...] = ()

    @property
    def automorphisms(self) -> tuple[tuple[int, ...], ...]:
        return self.witnesses

    def verify(self, g: Digraph) -> bool:
        if self.kind == "asserted":
            return True
        if len(self.witnesses) != g.n:
            return False
        return all(p[0] == y and is_automorphism(g, p) for y, p in enumerate(self.witnesses))

    @classmethod
    def asserted(cls, n: int) -> TransitivityCertificate:
        return cls("asserted", n)


def _compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """p after q."""
    return tuple(p[x] for x in q)


def translation_certificate(g: Digraph, translations: Sequence[Sequence[int]]) -> TransitivityCertificate | None:
    """Certificate from a translation hint: ``translations[y]`` should send 0 to y."""
    ws = tuple(tuple(int(x) for x in p) for p in translations)
    cert = TransitivityCertificate("cayley-translations", g.n, ws)
    return cert if cert.verify(g) else None


def _vertex_invariants(g: Digraph) -> list[tuple]:
    base = [(g.out_degree(u), g.in_degree(u), g.has_edge(u, u)) for u in range(g.n)]
    return [
        (
            base[u],
            tuple(sorted(base[w] for w in g.out_adj[u])),
            tuple(sorted(base[w] for w in g.in_adj[u])),
        )
        for u in range(g.n)
    ]


def _search_order(g: Digraph) -> list[int]:
    # BFS over the underlying undirected graph so each new vertex has
    # assigned neighbours that constrain it
    n = g.n
    order, seen = [], 0
    for root in range(n):
        if seen >> root & 1:
            continue
        queue = [root]
        seen |= 1 << root
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in _bits((g.out_mask[u] | g.in_mask[u]) & ~seen):
                seen |= 1 << w
                queue.append(w)
    return order


def find_automorphism(g: Digraph, source: int, target: int, invariants=None) -> tuple[int, ...] | None:
    """Backtracking search for an automorphism mapping ``source`` to ``target``."""
    n = g.n
    inv = invariants or _vertex_invariants(g)
    if inv[source] != inv[target]:
        return None
    order = _search_order(g)
    order.remove(source)
    order.insert(0, source)
    image = [-1] * n
    used = 0

    def consistent(u, x):
        # every already-assigned w must keep its edge relation to u
        for w in range(n):
            y = image[w]
            if y < 0:
                continue
            if g.has_edge(u, w) != g.has_edge(x, y) or g.has_edge(w, u) != g.has_edge(y, x):
                return False
        return g.has_edge(u, u) == g.has_edge(x, x)

    def extend(depth):
        nonlocal used
        if depth == n:
            return True
        u = order[depth]
        if depth == 0:
            candidates = [target]
        else:
            candidates = [x for x in range(n) if not used >> x & 1 and inv[x] == inv[u]]
        for x in candidates:
            if consistent(u, x):
                image[u] = x
                used |= 1 << x
                if extend(depth + 1):
                    return True
                image[u] = -1
                used &= ~(1 << x)
        return False

    return tuple(image) if extend(0) else None


def certify_transitivity(
    g: Digraph,
    hint: Sequence[Sequence[int]] | None = None,
    search_cap: int = SEARCH_CAP,
) -> TransitivityCertificate | None:
    """Certify that ``g`` is vertex-transitive.

    With a translation ``hint`` (one permutation per vertex y sending 0 to y,
    as produced for Cayley graphs) the hint is checked edge by edge. Otherwise
    automorphisms are found by backtracking search; orbits already covered by
    composing earlier finds are skipped. Returns None when some vertex is
    provably outside the orbit of 0.
    """
    if hint is not None:
        cert = translation_certificate(g, hint)
        if cert is not None:
            return cert
    if g.n > search_cap:
        raise SearchCapExceeded(f"{g.n} vertices exceeds automorphism search cap {search_cap}")
    inv = _vertex_invariants(g)
    witness: dict[int, tuple[int, ...]] = {0: tuple(range(g.n))}
    gens: list[tuple[int, ...]] = []
    for y in range(g.n):
        if y in witness:
            continue
        phi = find_automorphism(g, 0, y, inv)
        if phi is None:
            return None
        gens.append(phi)
        # close the partial orbit of 0 under the generators found so far
        frontier = list(witness.items())
        while frontier:
            nxt = []
            for _, p in frontier:
                for s in gens:
                    q = _compose(s, p)
                    if q[0] not in witness:
                        witness[q[0]] = q
                        nxt.append((q[0], q))
            frontier = nxt
    ws = tuple(witness[y] for y in range(g.n))
    return TransitivityCertificate("automorphism-search", g.n, ws)
