"""Finite directed relations and the image / boundary operators on vertex sets.

A graph is a relation: loops are ordinary edges and stored explicitly, so the
boundary of X is simply image(X) minus X with no special cases.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


class VertexSet:
    """Subset of ``range(n)`` backed by an int bitmask (any width)."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, members: Iterable[int] = ()):
        m = mask_of(members)
        if m >> n:
            raise GraphError(f"vertex out of range for a {n}-vertex graph")
        self.n = n
        self.mask = m

    @classmethod
    def from_mask(cls, n: int, mask: int) -> VertexSet:
        vs = cls.__new__(cls)
        vs.n, vs.mask = n, mask
        return vs

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls.from_mask(n, (1 << n) - 1)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    def __iter__(self):
        return _bits(self.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, v):
        return bool(self.mask >> v & 1)

    def __eq__(self, other):
        if isinstance(other, VertexSet):
            return self.n == other.n and self.mask == other.mask
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.mask))

    def __le__(self, other: VertexSet) -> bool:
        return self.mask & ~other.mask == 0

    def __and__(self, other: VertexSet) -> VertexSet:
        return VertexSet.from_mask(self.n, self.mask & other.mask)

    def __or__(self, other: VertexSet) -> VertexSet:
        return VertexSet.from_mask(self.n, self.mask | other.mask)

    def __sub__(self, other: VertexSet) -> VertexSet:
        return VertexSet.from_mask(self.n, self.mask & ~other.mask)

    def complement(self) -> VertexSet:
        return VertexSet.from_mask(self.n, ((1 << self.n) - 1) & ~self.mask)

    def sort_key(self):
        return (len(self), self.members)

    def __repr__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


class Digraph:
    """Immutable finite digraph on vertices ``0..n-1``."""

    __slots__ = ("vertex_count", "out_adj", "in_adj", "out_mask", "in_mask", "reflexive")

    def __init__(self, out_adj: Sequence[Iterable[int]]):
        n = len(out_adj)
        if n == 0:
            raise GraphError("graph needs at least one vertex")
        outs = tuple(tuple(sorted(set(map(int, nb)))) for nb in out_adj)
        ins: list[list[int]] = [[] for _ in range(n)]
        for u, nb in enumerate(outs):
            for w in nb:
                if not 0 <= w < n:
                    raise GraphError(f"edge ({u},{w}) leaves the vertex range")
                ins[w].append(u)
        self.vertex_count = n
        self.out_adj = outs
        self.in_adj = tuple(tuple(x) for x in ins)
        self.out_mask = tuple(mask_of(nb) for nb in outs)
        self.in_mask = tuple(mask_of(nb) for nb in self.in_adj)
        self.reflexive = all(u in outs[u] for u in range(n))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
        out: list[set[int]] = [set() for _ in range(n)]
        for u, w in edges:
            if not (0 <= u < n and 0 <= w < n):
                raise GraphError(f"edge ({u},{w}) leaves the vertex range")
            out[u].add(w)
        return cls(out)

    @property
    def n(self) -> int:
        return self.vertex_count

    def edges(self):
        for u, nb in enumerate(self.out_adj):
            for w in nb:
                yield u, w

    def has_edge(self, u: int, w: int) -> bool:
        return bool(self.out_mask[u] >> w & 1)

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    @property
    def loopless(self) -> bool:
        return not any(u in self.out_adj[u] for u in range(self.vertex_count))

    def vset(self, members: Iterable[int] = ()) -> VertexSet:
        return VertexSet(self.vertex_count, members)

    def __eq__(self, other):
        if isinstance(other, Digraph):
            return self.out_adj == other.out_adj
        return NotImplemented

    def __hash__(self):
        return hash(self.out_adj)

    def __repr__(self):
        return f"Digraph(n={self.vertex_count}, edges={sum(map(len, self.out_adj))})"


def image_mask(g: Digraph, mask: int) -> int:
    r = 0
    for u in _bits(mask):
        r |= g.out_mask[u]
    return r


def preimage_mask(g: Digraph, mask: int) -> int:
    r = 0
    for u in _bits(mask):
        r |= g.in_mask[u]
    return r


def image(g: Digraph, f: VertexSet) -> VertexSet:
    return VertexSet.from_mask(g.n, image_mask(g, f.mask))


def preimage(g: Digraph, f: VertexSet) -> VertexSet:
    return VertexSet.from_mask(g.n, preimage_mask(g, f.mask))


def boundary(g: Digraph, f: VertexSet) -> VertexSet:
    return VertexSet.from_mask(g.n, image_mask(g, f.mask) & ~f.mask)


def exterior(g: Digraph, f: VertexSet) -> VertexSet:
    full = (1 << g.n) - 1
    return VertexSet.from_mask(g.n, full & ~(f.mask | image_mask(g, f.mask)))


def neg_boundary(g: Digraph, f: VertexSet) -> VertexSet:
    return VertexSet.from_mask(g.n, preimage_mask(g, f.mask) & ~f.mask)


def transpose(g: Digraph) -> Digraph:
    return Digraph(g.in_adj)


def reflexive_closure(g: Digraph) -> Digraph:
    if g.reflexive:
        return g
    return Digraph([set(nb) | {u} for u, nb in enumerate(g.out_adj)])


def remove_loops(g: Digraph) -> Digraph:
    return Digraph([set(nb) - {u} for u, nb in enumerate(g.out_adj)])


def induced_subgraph(g: Digraph, x: VertexSet) -> tuple[Digraph, tuple[int, ...]]:
    """Digraph on X re-indexed 0..|X|-1, plus the map new index -> old vertex."""
    old = x.members
    if not old:
        raise GraphError("induced subgraph of an empty vertex set")
    new = {u: i for i, u in enumerate(old)}
    out = [[new[w] for w in g.out_adj[u] if w in new] for u in old]
    return Digraph(out), old


def is_strongly_connected(g: Digraph) -> bool:
    full = (1 << g.n) - 1
    for adj in (g.out_mask, g.in_mask):
        seen = frontier = 1
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= adj[u]
            frontier = nxt & ~seen
            seen |= nxt
        if seen != full:
            return False
    return True


def is_automorphism(g: Digraph, perm: Sequence[int]) -> bool:
    """Edge-by-edge check that ``perm`` maps out-neighbourhoods onto out-neighbourhoods."""
    n = g.n
    if len(perm) != n or sorted(perm) != list(range(n)):
        return False
    for u in range(n):
        if mask_of(perm[w] for w in g.out_adj[u]) != g.out_mask[perm[u]]:
            return False
    return True


def apply_perm(perm: Sequence[int], f: VertexSet) -> VertexSet:
    return VertexSet.from_mask(f.n, mask_of(perm[u] for u in f))


# -- whole-lattice tables ------------------------------------------------------

SUBSET_TABLE_MAX = 24


def subset_table(masks: Sequence[int], base: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Enumerate every union ``base | (subset of masks)``.

    Returns ``(index, combined)`` where entry ``i`` corresponds to choosing
    the masks selected by the bits of ``i``; ``index`` holds the OR of the
    chosen bit positions' keys and ``combined`` the OR of their values.
    ``masks`` is a list of ``(key_mask, value_mask)`` pairs.
    """
    k = len(masks)
    if k > SUBSET_TABLE_MAX:
        raise GraphError(f"subset enumeration over {k} items exceeds cap {SUBSET_TABLE_MAX}")
    keys = np.zeros(1 << k, dtype=np.uint64)
    vals = np.zeros(1 << k, dtype=np.uint64)
    keys[0] = base
    for i, (key, val) in enumerate(masks):
        lo = 1 << i
        keys[lo:2 * lo] = keys[:lo] | np.uint64(key)
        vals[lo:2 * lo] = vals[:lo] | np.uint64(val)
    return keys, vals


def image_table(g: Digraph, free: int, fixed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """All sets ``fixed | Y`` with ``Y`` a subset of ``free``, and their images."""
    if g.n > 63:
        raise GraphError("whole-lattice tables need at most 63 vertices")
    items = [(1 << u, g.out_mask[u]) for u in _bits(free)]
    sets, imgs = subset_table(items, fixed)
    imgs |= np.uint64(image_mask(g, fixed))
    return sets, imgs


def popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def boundary_sizes(g: Digraph) -> np.ndarray:
    """|boundary(X)| for every subset mask X of the vertices."""
    sets, imgs = image_table(g, (1 << g.n) - 1)
    return popcount(imgs & ~sets)


def submodularity_violations(g: Digraph) -> int:
    """Pairs (X, Y) with |d(X u Y)| + |d(X n Y)| > |d(X)| + |d(Y)|, over all pairs."""
    b = boundary_sizes(g)
    m = np.arange(1 << g.n, dtype=np.uint64)
    bad = 0
    for x in range(1 << g.n):
        x64 = np.uint64(x)
        bad += int(np.count_nonzero(b[m | x64] + b[m & x64] > b[x] + b))
    return bad


def exterior_inclusion_violations(g: Digraph) -> int:
    """Sets F for which neg_boundary(exterior(F)) is not inside boundary(F)."""
    full = (1 << g.n) - 1
    sets, imgs = image_table(g, full)
    _, pre = image_table(transpose(g), full)
    ext = ~(sets | imgs) & np.uint64(full)
    # preimage of every exterior set, looked up by mask
    neg = pre[ext.astype(np.int64)] & ~ext
    return int(np.count_nonzero(neg & ~(imgs & ~sets)))


# -- edge-list files -------------------------------------------------------------

def load_edge_list(path: str | Path) -> Digraph:
    """Line ``n`` then lines ``u v`` (0-based); ``#`` starts a comment."""
    path = Path(path)
    try:
        lines = [ln.split("#", 1)[0].split() for ln in path.read_text().splitlines()]
    except OSError as exc:
        raise GraphError(f"cannot read edge list {path}: {exc}") from exc
    lines = [ln for ln in lines if ln]
    try:
        (n,) = map(int, lines[0])
        edges = [tuple(map(int, ln)) for ln in lines[1:]]
        if any(len(e) != 2 for e in edges):
            raise ValueError
    except (ValueError, IndexError):
        raise GraphError(f"malformed edge list {path}") from None
    return Digraph.from_edges(n, edges)


def dump_edge_list(g: Digraph) -> str:
    return "\n".join([str(g.n)] + [f"{u} {w}" for u, w in g.edges()]) + "\n"
