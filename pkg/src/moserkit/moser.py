"""v-Moser sets, the minimum boundary mu(v), molecules and kernels.

A v-Moser set F contains v and meets the in-neighbourhood of v only in v.
mu(v) is the least boundary size over all such F; the sets attaining it are
the v-molecules, and they are closed under union and intersection, so there
is a least one, the kernel K_v.

Two independent routes compute mu: ``mu_brute`` enumerates every Moser set,
``mu_flow`` solves a vertex-capacitated min cut between v and the forbidden
in-neighbours. The kernel is read off the flow as the smallest source side.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .digraph import Digraph, VertexSet, boundary, image_table, popcount
from .flow import INF, FlowNetwork, node_in, node_out
from .transitivity import TransitivityCertificate

BRUTE_CAP = 22


class MoserError(ValueError):
    pass


@dataclass(frozen=True)
class MoserInstance:
    graph: Digraph
    v: int
    forbidden: VertexSet = field(init=False)

    def __post_init__(self):
        g = self.graph
        if not g.reflexive:
            raise MoserError("Moser instances need a reflexive graph")
        if not 0 <= self.v < g.n:
            raise MoserError(f"vertex {self.v} out of range")
        object.__setattr__(
            self, "forbidden", VertexSet.from_mask(g.n, g.in_mask[self.v] & ~(1 << self.v))
        )


@dataclass(frozen=True)
class Molecule:
    instance: MoserInstance
    members: VertexSet
    boundary_size: int


@dataclass(frozen=True)
class Kernel:
    molecule: Molecule

    @property
    def members(self) -> VertexSet:
        return self.molecule.members

    @property
    def atom(self) -> VertexSet:
        """Mader's atom: the kernel without v."""
        m = self.molecule
        return VertexSet.from_mask(m.members.n, m.members.mask & ~(1 << m.instance.v))


@dataclass(frozen=True)
class MuCertificate:
    value: int
    witness_molecule: Molecule
    method: str
    cut: VertexSet


def is_moser_set(inst: MoserInstance, f: VertexSet) -> bool:
    return f.mask >> inst.v & 1 == 1 and f.mask & inst.forbidden.mask == 0


def _check_cap(inst: MoserInstance, cap: int = BRUTE_CAP):
    if inst.graph.n > cap:
        raise MoserError(f"{inst.graph.n} vertices exceeds brute-force cap {cap}")


def moser_boundary_table(inst: MoserInstance) -> tuple[np.ndarray, np.ndarray]:
    """Every v-Moser set (as a bitmask) with its boundary size."""
    _check_cap(inst)
    g = inst.graph
    free = ((1 << g.n) - 1) & ~inst.forbidden.mask & ~(1 << inst.v)
    sets, imgs = image_table(g, free, fixed=1 << inst.v)
    return sets, popcount(imgs & ~sets)


def _lex_least(n: int, masks) -> int:
    # minimum size first, then lexicographic on sorted members
    return min((int(m) for m in masks), key=lambda m: VertexSet.from_mask(n, m).sort_key())


def mu_brute(inst: MoserInstance) -> MuCertificate:
    sets, sizes = moser_boundary_table(inst)
    mu = int(sizes.min())
    n = inst.graph.n
    best = _lex_least(n, sets[sizes == mu])
    members = VertexSet.from_mask(n, best)
    mol = Molecule(inst, members, mu)
    return MuCertificate(mu, mol, "brute", boundary(inst.graph, members))


def moser_network(inst: MoserInstance) -> tuple[FlowNetwork, int, int]:
    """Split network whose minimum s-t cuts are the boundaries of v-molecules.

    Every u != v gets a unit arc u_in -> u_out; each non-loop edge (u, w) with
    w != v an unbounded arc u_out -> w_in; each forbidden w an unbounded arc
    w_out -> t. A forbidden vertex can therefore sit in the cut (paying its
    unit arc) but never on the source side.
    """
    g = inst.graph
    n, v = g.n, inst.v
    t = 2 * n
    net = FlowNetwork(2 * n + 1)
    for u in range(n):
        if u != v:
            net.add_arc(node_in(u), node_out(u), 1)
    for u, w in g.edges():
        if u != w and w != v:
            net.add_arc(node_out(u), node_in(w), INF)
    for w in inst.forbidden:
        net.add_arc(node_out(w), t, INF)
    return net, node_out(v), t


def mu_flow(inst: MoserInstance) -> MuCertificate:
    g = inst.graph
    net, s, t = moser_network(inst)
    value = net.max_flow(s, t)
    reach = net.residual_reachable(s)
    members = g.vset(u for u in range(g.n) if node_out(u) in reach)
    cut = boundary(g, members)
    if len(cut) != value:
        raise MoserError(f"flow value {value} disagrees with source-side boundary {len(cut)}")
    return MuCertificate(value, Molecule(inst, members, value), "flow", cut)


def kernel(inst: MoserInstance) -> Kernel:
    return Kernel(mu_flow(inst).witness_molecule)


def all_molecules(inst: MoserInstance) -> list[Molecule]:
    sets, sizes = moser_boundary_table(inst)
    mu = int(sizes.min())
    n = inst.graph.n
    found = [VertexSet.from_mask(n, int(m)) for m in sets[sizes == mu]]
    found.sort(key=lambda f: f.members)
    return [Molecule(inst, f, mu) for f in found]


def kernel_by_intersection(inst: MoserInstance) -> VertexSet:
    """Oracle: intersect every molecule found by enumeration."""
    sets, sizes = moser_boundary_table(inst)
    acc = np.bitwise_and.reduce(sets[sizes == sizes.min()])
    return VertexSet.from_mask(inst.graph.n, int(acc))


def kernels(g: Digraph) -> list[Kernel]:
    return [kernel(MoserInstance(g, v)) for v in range(g.n)]


@dataclass
class LemmaReport:
    checks: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def check(self, condition: bool, lemma: str, **witness):
        self.checks += 1
        if not condition:
            self.violations.append({"lemma": lemma, **witness})


def check_kernel_lemmas(g: Digraph, cert: TransitivityCertificate | None, ks: list[Kernel] | None = None) -> LemmaReport:
    """Kernel distinctness, automorphism equivariance and the containment alternative.

    For v != w: K_v != K_w. For each certificate automorphism phi and every
    v: phi(K_v) = K_phi(v). For w in K_v: v in image(K_w) or K_w within K_v.
    """
    if cert is None:
        raise MoserError("kernel lemmas need a transitivity certificate")
    if g.n > BRUTE_CAP:
        raise MoserError(f"{g.n} vertices exceeds cap {BRUTE_CAP}")
    ks = ks if ks is not None else kernels(g)
    km = [k.members.mask for k in ks]
    rep = LemmaReport()
    for v in range(g.n):
        for w in range(g.n):
            if v == w:
                continue
            rep.check(km[v] != km[w], "distinct", v=v, w=w)
            if km[v] >> w & 1:
                image_kw = 0
                for u in ks[w].members:
                    image_kw |= g.out_mask[u]
                rep.check(
                    bool(image_kw >> v & 1) or km[w] & ~km[v] == 0, "davtrans", v=v, w=w
                )
    for phi in cert.automorphisms:
        for v in range(g.n):
            moved = 0
            for u in ks[v].members:
                moved |= 1 << phi[u]
            rep.check(moved == km[phi[v]], "equivariance", v=v, phi_v=phi[v])
    return rep


def molecule_lattice_violations(mols: list[Molecule]) -> list[tuple[int, int]]:
    """Pairs of molecules whose meet or join is missing from the list."""
    masks = {m.members.mask for m in mols}
    bad = []
    for a in masks:
        for b in masks:
            if (a & b) not in masks or (a | b) not in masks:
                bad.append((a, b))
    return bad

