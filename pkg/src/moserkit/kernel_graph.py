"""The kernel-graph: out-neighbourhood of v restricted to the kernel K_v."""
from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, VertexSet, boundary, is_automorphism
from .moser import BRUTE_CAP, Kernel, MoserError, LemmaReport, MoserInstance, kernels, mu_flow
from .transitivity import TransitivityCertificate


@dataclass(frozen=True)
class KernelGraph:
    base: Digraph
    omega: Digraph
    kernels: tuple[Kernel, ...]
    certificate: TransitivityCertificate

    def kernel_set(self, v: int) -> VertexSet:
        return self.kernels[v].members


@dataclass(frozen=True)
class BoundRecord:
    v: int
    mu: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.mu >= self.rhs

    @property
    def tight(self) -> bool:
        return self.mu == self.rhs


def build_kernel_graph(g: Digraph, cert: TransitivityCertificate | None) -> KernelGraph:
    if cert is None:
        raise MoserError("kernel-graph needs a transitivity certificate")
    if not g.reflexive:
        raise MoserError("kernel-graph needs a reflexive base graph")
    if g.n > BRUTE_CAP:
        raise MoserError(f"{g.n} vertices exceeds cap {BRUTE_CAP}")
    ks = kernels(g)
    omega = Digraph([list(VertexSet.from_mask(g.n, g.out_mask[v] & ks[v].members.mask)) for v in range(g.n)])
    return KernelGraph(g, omega, tuple(ks), cert)


def check_omega_lemma(kg: KernelGraph) -> LemmaReport:
    """Base automorphisms preserve omega; omega in-neighbours sit in the kernel boundary.

    Also checks that the omega in-neighbourhood of v meets the base
    out-neighbourhood of v only in v.
    """
    g, om = kg.base, kg.omega
    rep = LemmaReport()
    for i, phi in enumerate(kg.certificate.automorphisms):
        rep.check(is_automorphism(om, phi), "omega-transitive", automorphism=i, phi_0=phi[0])
    for v in range(g.n):
        back = om.in_mask[v] & ~(1 << v)
        dk = boundary(g, kg.kernel_set(v)).mask
        rep.check(back & ~dk == 0, "omega-inclusion", v=v)
        rep.check(om.in_mask[v] & g.out_mask[v] == 1 << v, "omega-meets-image", v=v)
    return rep


def mainomega_bound(kg: KernelGraph, v: int, mu: int | None = None) -> BoundRecord:
    g, om = kg.base, kg.omega
    if mu is None:
        mu = mu_flow(MoserInstance(g, v)).value
    rhs = g.out_degree(v) - om.out_degree(v) + om.in_degree(v) - 1
    return BoundRecord(v, mu, rhs)


def cayley_omega_connection_set(kg: KernelGraph, connection_set) -> set[int]:
    """B intersected with K_identity; on a Cayley graph omega = Cay(G, this set)."""
    return set(connection_set) & set(kg.kernel_set(0))
