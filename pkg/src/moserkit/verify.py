"""Instance-by-instance verification of the sumset and isoperimetric inequalities.

Every verifier returns a :class:`VerificationReport`. Exhaustive group sweeps
and exhaustive ``F`` sweeps are vectorised over whole subset lattices with
numpy bitmask tables; sampled sweeps use the plain set operations from
:mod:`moserkit.groups` and :mod:`moserkit.digraph` instead, so the two routes
cross-check each other on shared instances.
"""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from typing import Iterator

import numpy as np

from . import catalogue as cat
from .digraph import (
    Digraph, VertexSet, _bits, image, image_table, is_strongly_connected, popcount, remove_loops, subset_table,
)
from .groups import FiniteGroup, cayley_graph, inverse_set, left_translate, minkowski_product
from .kernel_graph import build_kernel_graph, check_omega_lemma, mainomega_bound
from .mader import MaderError, mader_cycles, verify_cycle_system
from .moser import (
    MoserInstance, all_molecules, check_kernel_lemmas, kernel_by_intersection, kernels,
    molecule_lattice_violations, mu_brute,
)
from .transitivity import TransitivityCertificate

SCHEMA = 1
BUDGET = 1 << 28
THEOREMS = ("scherk", "kemperman", "main", "mainomega", "lemmas", "mader")
GROUP_THEOREMS = ("scherk", "kemperman")
RECORD_POLICIES = ("violations", "tight", "all")
GROUP_EXHAUSTIVE_MAX = 8
MAIN_EXHAUSTIVE_MAX = 16
# fixed sample of connection sets per large group inside catalogue families
CATALOGUE_SAMPLES = 48


class VerificationError(ValueError):
    pass


@dataclass(frozen=True)
class Mode:
    kind: str = "exhaustive"
    count: int = 0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("exhaustive", "sampled"):
            raise VerificationError(f"unknown mode {self.kind!r}")
        if self.kind == "sampled" and (self.seed is None or self.count < 1):
            raise VerificationError("sampled mode needs a positive count and an explicit seed")

    @classmethod
    def sampled(cls, count: int, seed: int) -> Mode:
        return cls("sampled", count, seed)

    @property
    def exhaustive(self) -> bool:
        return self.kind == "exhaustive"

    def rng(self, job: int) -> np.random.Generator:
        return cat.job_rng(self.seed, job)


@dataclass
class Record:
    key: str
    theorem: str
    lhs: int | None
    rhs: int | None
    holds: bool
    tight: bool
    witness: dict | None = None

    def as_dict(self) -> dict:
        d = asdict(self)
        if d["witness"] is None:
            del d["witness"]
        return d


@dataclass
class Tally:
    instances: int = 0
    violations: int = 0
    tight: int = 0


class VerificationReport:
    def __init__(self, spec: dict | None = None, policy: str = "violations"):
        if policy not in RECORD_POLICIES:
            raise VerificationError(f"unknown record policy {policy!r}")
        self.spec = spec or {}
        self.policy = policy
        self.tallies: dict[str, Tally] = {}
        self.records: list[Record] = []
        self.runtime: float | None = None

    def keeps(self, holds: bool, tight: bool) -> bool:
        return self.policy == "all" or not holds or (tight and self.policy == "tight")

    def count(self, theorem: str, instances: int, violations: int, tight: int) -> None:
        t = self.tallies.setdefault(theorem, Tally())
        t.instances += int(instances)
        t.violations += int(violations)
        t.tight += int(tight)

    def add(self, rec: Record) -> None:
        self.count(rec.theorem, 1, not rec.holds, rec.tight)
        if self.keeps(rec.holds, rec.tight):
            self.records.append(rec)

    def merge(self, other: VerificationReport) -> None:
        for name, t in other.tallies.items():
            self.count(name, t.instances, t.violations, t.tight)
        self.records.extend(other.records)

    def finalize(self) -> VerificationReport:
        self.records.sort(key=lambda r: (r.theorem, r.key))
        return self

    @property
    def violations(self) -> int:
        return sum(t.violations for t in self.tallies.values())

    @property
    def instances(self) -> int:
        return sum(t.instances for t in self.tallies.values())

    @property
    def exit_code(self) -> int:
        return 1 if self.violations else 0

    def summary(self) -> dict:
        s = {
            "instances": self.instances,
            "violations": self.violations,
            "tight": sum(t.tight for t in self.tallies.values()),
            "by_theorem": {k: asdict(v) for k, v in sorted(self.tallies.items())},
        }
        if self.runtime is not None:
            s["runtime_s"] = round(self.runtime, 3)
        return s

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "spec": self.spec,
            "summary": self.summary(),
            "records": [r.as_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theorem", "key", "lhs", "rhs", "holds", "tight"])
        for r in self.records:
            w.writerow([r.theorem, r.key, r.lhs, r.rhs, int(r.holds), int(r.tight)])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for name, t in sorted(self.tallies.items()):
            lines.append(f"{name:10s} instances={t.instances} violations={t.violations} tight={t.tight}")
        lines.append(f"total      instances={self.instances} violations={self.violations}")
        if self.runtime is not None:
            lines.append(f"runtime    {self.runtime:.2f}s")
        for r in self.records:
            if not r.holds:
                lines.append(f"VIOLATION {r.theorem} {r.key} lhs={r.lhs} rhs={r.rhs} {r.witness or ''}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return {"json": self.to_json, "csv": self.to_csv, "text": self.to_text}[fmt]()


def _members(mask: int) -> str:
    return ",".join(map(str, _bits(int(mask))))


# -- group theorems ---------------------------------------------------------------

def _translate_tables(group: FiniteGroup, right) -> np.ndarray:
    """Row c maps every subset mask B to the mask of {c * right(b) : b in B}."""
    n = group.order
    rows = np.empty((n, 1 << n), dtype=np.uint64)
    for c in range(n):
        _, rows[c] = subset_table([(1 << b, 1 << int(group.mul[c, right(b)])) for b in range(n)])
    return rows


def product_table(group: FiniteGroup) -> np.ndarray:
    """P[A, B] = mask of AB for every pair of subset masks."""
    n = group.order
    left = _translate_tables(group, lambda b: b)
    p = np.zeros((1 << n, 1 << n), dtype=np.uint64)
    for a in range(n):
        lo = 1 << a
        p[lo:2 * lo] = p[:lo] | left[a][None, :]
    return p


def _check_group_budget(group: FiniteGroup, mode: Mode, force: bool):
    if mode.exhaustive and group.order > GROUP_EXHAUSTIVE_MAX and not force:
        raise VerificationError(
            f"exhaustive sweep over {group.name} (order {group.order}) exceeds order {GROUP_EXHAUSTIVE_MAX}; use --force or sampling"
        )
    if mode.exhaustive and group.order > 12:
        raise VerificationError(f"exhaustive pair tables for order {group.order} do not fit in memory")


def _random_nonempty(n: int, rng: np.random.Generator, required: int = 0, avoid: int = 0) -> int:
    while True:
        bits = np.flatnonzero(rng.random(n) < 0.5)
        m = (sum(1 << int(b) for b in bits) | required) & ~avoid | required
        if m:
            return m


def verify_kemperman(group: FiniteGroup, mode: Mode = Mode(), policy: str = "violations",
                     job: int = 0, force: bool = False) -> VerificationReport:
    """|AB| >= |A| + |B| - |A meet cB^-1| for nonempty A, B and every c in AB."""
    _check_group_budget(group, mode, force)
    rep = VerificationReport(policy=policy)
    name = group.name
    if not mode.exhaustive:
        rng = mode.rng(job)
        n = group.order
        for _ in range(mode.count):
            a = group.subset(_bits(_random_nonempty(n, rng)))
            b = group.subset(_bits(_random_nonempty(n, rng)))
            ab = minkowski_product(a, b)
            binv = inverse_set(b)
            for c in ab:
                r = len(set(a) & set(left_translate(c, binv)))
                lhs, rhs = len(ab), len(a) + len(b) - r
                rep.add(Record(f"group={name};A={_members(a.mask)};B={_members(b.mask)};c={c}",
                               "kemperman", lhs, rhs, lhs >= rhs, lhs == rhs))
        return rep
    n = group.order
    p = product_table(group)
    cbinv = _translate_tables(group, group.inv)
    sizes = popcount(np.arange(1 << n, dtype=np.uint64))
    amask = np.arange(1 << n, dtype=np.uint64)[:, None]
    lhs = popcount(p)
    nonempty = (sizes[:, None] > 0) & (sizes[None, :] > 0)
    for c in range(n):
        valid = nonempty & ((p >> np.uint64(c)) & np.uint64(1)).astype(bool)
        rhs = sizes[:, None] + sizes[None, :] - popcount(amask & cbinv[c][None, :])
        bad = valid & (lhs < rhs)
        tight = valid & (lhs == rhs)
        rep.count("kemperman", valid.sum(), bad.sum(), tight.sum())
        keep = {"violations": bad, "tight": bad | tight, "all": valid}[policy]
        for ai, bi in np.argwhere(keep):
            rep.records.append(Record(
                f"group={name};A={_members(ai)};B={_members(bi)};c={c}", "kemperman",
                int(lhs[ai, bi]), int(rhs[ai, bi]), bool(lhs[ai, bi] >= rhs[ai, bi]),
                bool(lhs[ai, bi] == rhs[ai, bi])))
    return rep


def verify_scherk(group: FiniteGroup, mode: Mode = Mode(), policy: str = "violations",
                  job: int = 0, force: bool = False) -> VerificationReport:
    """|AB| >= |A| + |B| - 1 whenever A meets B^-1 exactly in the identity."""
    _check_group_budget(group, mode, force)
    rep = VerificationReport(policy=policy)
    name = group.name
    n = group.order
    if not mode.exhaustive:
        rng = mode.rng(job)
        for _ in range(mode.count):
            b = group.subset(_bits(_random_nonempty(n, rng, required=1)))
            a = group.subset(_bits(_random_nonempty(n, rng, required=1, avoid=inverse_set(b).mask)))
            lhs = len(minkowski_product(a, b))
            rhs = len(a) + len(b) - 1
            rep.add(Record(f"group={name};A={_members(a.mask)};B={_members(b.mask)}",
                           "scherk", lhs, rhs, lhs >= rhs, lhs == rhs))
        return rep
    p = product_table(group)
    _, binv = subset_table([(1 << b, 1 << group.inv(b)) for b in range(n)])
    sizes = popcount(np.arange(1 << n, dtype=np.uint64))
    amask = np.arange(1 << n, dtype=np.uint64)[:, None]
    valid = (amask & binv[None, :]) == 1
    lhs = popcount(p)
    rhs = sizes[:, None] + sizes[None, :] - 1
    bad = valid & (lhs < rhs)
    tight = valid & (lhs == rhs)
    rep.count("scherk", valid.sum(), bad.sum(), tight.sum())
    keep = {"violations": bad, "tight": bad | tight, "all": valid}[policy]
    for ai, bi in np.argwhere(keep):
        rep.records.append(Record(
            f"group={name};A={_members(ai)};B={_members(bi)}", "scherk",
            int(lhs[ai, bi]), int(rhs[ai, bi]), bool(lhs[ai, bi] >= rhs[ai, bi]),
            bool(lhs[ai, bi] == rhs[ai, bi])))
    return rep


# -- graph theorems ------------------------------------------------------------------

def _require(cert: TransitivityCertificate | None, key: str):
    if cert is None:
        raise VerificationError(f"{key}: no vertex-transitivity certificate")


def _require_reflexive(g: Digraph, key: str):
    if not g.reflexive:
        raise VerificationError(f"{key}: graph is not reflexive (use the reflexive closure)")


def _compress(mask: int, free: int) -> int:
    """Position of ``mask``'s bits inside the enumeration order of ``free``."""
    out = 0
    for i, u in enumerate(_bits(free)):
        if mask >> u & 1:
            out |= 1 << i
    return out


def verify_main_finite(inst: cat.GraphInstance, cert, mode: Mode = Mode(), policy: str = "violations",
                       job: int = 0, force: bool = False) -> VerificationReport:
    """|image(F)| >= |F| + d(v) - |in(v) meet F| for every v and every F containing v.

    Alongside, F' = (F minus in(v)) plus v must satisfy |image(F)| >= |image(F')|
    and the Moser-set bound |image(F')| >= |F'| + d(v) - 1; a failure of
    either is counted as a violation of the instance.
    """
    g, key = inst.graph, inst.key
    _require(cert, key)
    _require_reflexive(g, key)
    n = g.n
    rep = VerificationReport(policy=policy)
    connected = is_strongly_connected(g)
    full = (1 << n) - 1
    if mode.exhaustive:
        if n > MAIN_EXHAUSTIVE_MAX and not force:
            raise VerificationError(f"{key}: exhaustive F sweep over {n} vertices exceeds {MAIN_EXHAUSTIVE_MAX}")
        for v in range(n):
            free = full & ~(1 << v)
            sets, imgs = image_table(g, free, fixed=1 << v)
            lhs = popcount(imgs)
            inv = np.uint64(g.in_mask[v])
            d = g.out_degree(v)
            rhs = popcount(sets) + d - popcount(sets & inv)
            idx = np.arange(len(sets), dtype=np.uint64)
            reduced = idx & ~np.uint64(_compress(g.in_mask[v], free))
            lhs_red = lhs[reduced]
            size_red = popcount(sets[reduced])
            holds = (lhs >= rhs) & (lhs >= lhs_red) & (lhs_red >= size_red + d - 1)
            tight = lhs == rhs
            rep.count("main", len(sets), (~holds).sum(), (tight & holds).sum())
            keep = {"violations": ~holds, "tight": ~holds | tight, "all": np.ones_like(holds)}[policy]
            for i in np.flatnonzero(keep):
                rep.records.append(Record(
                    f"graph={key};v={v};F={_members(sets[i])}", "main", int(lhs[i]), int(rhs[i]),
                    bool(holds[i]), bool(tight[i] and holds[i]),
                    None if holds[i] else {"reduced_image": int(lhs_red[i]), "connected": connected}))
        return rep
    rng = mode.rng(job)
    for v in range(n):
        vin = g.vset(g.in_adj[v])
        d = g.out_degree(v)
        for _ in range(mode.count):
            f = VertexSet.from_mask(n, _random_nonempty(n, rng, required=1 << v))
            fr = (f - vin) | g.vset([v])
            lhs = len(image(g, f))
            rhs = len(f) + d - len(vin & f)
            lhs_red = len(image(g, fr))
            holds = lhs >= rhs and lhs >= lhs_red and lhs_red >= len(fr) + d - 1
            rep.add(Record(f"graph={key};v={v};F={_members(f.mask)}", "main", lhs, rhs, holds,
                           holds and lhs == rhs,
                           None if holds else {"reduced_image": lhs_red, "connected": connected}))
    return rep


def verify_mainomega(inst: cat.GraphInstance, cert, mode: Mode = Mode(), policy: str = "violations",
                     job: int = 0, force: bool = False) -> VerificationReport:
    """Kernel-graph lemma checks and mu(v) >= d(v) - |omega(v)| + |omega^-(v)| - 1."""
    g, key = inst.graph, inst.key
    _require(cert, key)
    _require_reflexive(g, key)
    rep = VerificationReport(policy=policy)
    kg = build_kernel_graph(g, cert)
    lemma = check_omega_lemma(kg)
    witness = {"violations": lemma.violations[:20]} if lemma.violations else None
    if inst.group is not None:
        # omega of a Cayley graph is the Cayley graph of B meet K_identity
        s = set(inst.connection_set) & set(kg.kernel_set(0))
        expect = cayley_graph(inst.group, sorted(s))
        same = expect == kg.omega
        rep.add(Record(f"graph={key}", "omega-cayley", None, None, same, False,
                       None if same else {"expected_connection_set": sorted(s)}))
    rep.add(Record(f"graph={key}", "omega-lemma", lemma.checks, lemma.checks - len(lemma.violations),
                   lemma.ok, False, witness))
    for v in range(g.n):
        b = mainomega_bound(kg, v, kg.kernels[v].molecule.boundary_size)
        rep.add(Record(f"graph={key};v={v}", "mainomega", b.mu, b.rhs, b.holds, b.tight))
    return rep


def verify_lemmas(inst: cat.GraphInstance, cert, mode: Mode = Mode(), policy: str = "violations",
                  job: int = 0, force: bool = False) -> VerificationReport:
    """Flow against brute force, kernel minimality, molecule lattice and kernel lemmas."""
    g, key = inst.graph, inst.key
    _require(cert, key)
    _require_reflexive(g, key)
    rep = VerificationReport(policy=policy)
    connected = is_strongly_connected(g)
    ks = kernels(g)
    for v in range(g.n):
        mi = MoserInstance(g, v)
        brute = mu_brute(mi)
        k = ks[v].molecule
        mols = all_molecules(mi)
        problems = []
        if brute.value != k.boundary_size:
            problems.append("mu-mismatch")
        if brute.witness_molecule.members != k.members:
            problems.append("kernel-mismatch")
        if kernel_by_intersection(mi) != k.members:
            problems.append("intersection-mismatch")
        if not all(k.members <= m.members for m in mols):
            problems.append("kernel-not-minimal")
        if molecule_lattice_violations(mols):
            problems.append("lattice-not-closed")
        rep.add(Record(f"graph={key};v={v}", "molecules", k.boundary_size, brute.value, not problems, False,
                       {"problems": problems, "connected": connected} if problems else None))
    lem = check_kernel_lemmas(g, cert, ks)
    rep.add(Record(f"graph={key}", "kernel-lemmas", lem.checks, lem.checks - len(lem.violations), lem.ok, False,
                   {"violations": lem.violations[:20]} if lem.violations else None))
    return rep


def verify_mader(inst: cat.GraphInstance, cert, mode: Mode = Mode(), policy: str = "violations",
                 job: int = 0, force: bool = False) -> VerificationReport:
    g, key = inst.graph, inst.key
    _require(cert, key)
    if not g.loopless:
        raise VerificationError(f"{key}: Mader cycles need a loopless graph")
    rep = VerificationReport(policy=policy)
    for v in range(g.n):
        d = g.out_degree(v)
        try:
            cs = mader_cycles(g, v)
            ok, why = verify_cycle_system(g, cs)
            got = len(cs.cycles)
        except MaderError as exc:
            ok, why, got = False, str(exc), 0
        rep.add(Record(f"graph={key};v={v}", "mader", got, d, ok, ok, None if ok else {"reason": why}))
    return rep


VERIFIERS = {
    "scherk": verify_scherk,
    "kemperman": verify_kemperman,
    "main": verify_main_finite,
    "mainomega": verify_mainomega,
    "lemmas": verify_lemmas,
    "mader": verify_mader,
}


# -- sweeps -------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    family: str
    theorems: tuple[str, ...] = ()
    mode: Mode = Mode()
    records: str = "violations"
    force: bool = False

    def __post_init__(self):
        bad = [t for t in self.theorems if t not in THEOREMS]
        if bad:
            raise VerificationError(f"unknown theorem(s) {bad}; choose from {THEOREMS}")
        if self.records not in RECORD_POLICIES:
            raise VerificationError(f"unknown record policy {self.records!r}")

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "theorems": sorted(self.theorems),
            "mode": self.mode.kind,
            "samples": self.mode.count,
            "seed": self.mode.seed,
            "records": self.records,
        }


def family_groups(family: str) -> list[str]:
    kind, _, arg = family.partition(":")
    if kind == "group":
        return [arg]
    if kind == "groups":
        return [x for x in arg.split(",") if x]
    if kind in ("cyclic", "circulants"):
        return [f"Z{n}" for n in range(1, int(arg) + 1)]
    if kind == "kemperman-groups":
        return list(cat.KEMPERMAN_GROUPS)
    if kind == "catalogue":
        return [g for g in cat.CATALOGUE_GROUPS if cat.group(g).order <= int(arg)]
    if kind in ("graph", "random"):
        return []
    raise VerificationError(f"unknown family {family!r}")


def family_graphs(family: str, reflexive: bool, seed: int | None = None) -> Iterator[cat.GraphInstance]:
    """Graph instances of a family: reflexive ones, or loopless ones for Mader."""
    kind, _, arg = family.partition(":")
    if kind == "graph":
        inst = cat.parse_graph(arg, reflexive=reflexive)
        yield inst
    elif kind == "random":
        for inst in cat.random_vt_instances(int(arg), seed or 0):
            if reflexive:
                yield inst
            else:
                g = remove_loops(inst.graph)
                if g.out_degree(0):
                    s = tuple(x for x in inst.connection_set or () if x) or None
                    yield cat.GraphInstance(inst.key + "-loops", g, inst.group, s)
    elif kind == "catalogue":
        yield from cat.graph_catalogue(int(arg), reflexive, CATALOGUE_SAMPLES, seed=0)
    else:
        for gs in family_groups(family):
            yield from cat.cayley_family(gs, reflexive)


def _estimate(theorem: str, n: int) -> int:
    return {
        "kemperman": n * 4 ** n,
        "scherk": 4 ** n,
        "main": n * 2 ** max(n - 1, 0),
        "mainomega": n * 2 ** n,
        "lemmas": n * 2 ** n,
        "mader": n * n,
    }[theorem]


def _jobs(spec: SweepSpec) -> list[tuple]:
    jobs = []
    for theorem in THEOREMS:
        if theorem not in spec.theorems:
            continue
        if theorem in GROUP_THEOREMS:
            for gs in family_groups(spec.family):
                jobs.append((theorem, gs))
        else:
            reflexive = theorem != "mader"
            for inst in family_graphs(spec.family, reflexive, spec.mode.seed):
                jobs.append((theorem, inst))
    return jobs


def _run_job(args) -> VerificationReport:
    index, theorem, target, mode, policy, force = args
    fn = VERIFIERS[theorem]
    if theorem in GROUP_THEOREMS:
        return fn(cat.group(target), mode, policy, job=index, force=force)
    return fn(target, cat.certificate_for(target), mode, policy, job=index, force=force)


def run_sweep(spec: SweepSpec, jobs: int = 1, timing: bool = False) -> VerificationReport:
    start = time.perf_counter()
    work = _jobs(spec)
    if spec.mode.exhaustive and not spec.force:
        sizes = [cat.group(t).order if th in GROUP_THEOREMS else t.graph.n for th, t in work]
        estimate = sum(_estimate(th, n) for (th, _), n in zip(work, sizes))
        if estimate > BUDGET:
            raise VerificationError(f"estimated {estimate} instances exceeds budget {BUDGET}; use --force or sampling")
    args = [(i, th, t, spec.mode, spec.records, spec.force) for i, (th, t) in enumerate(work)]
    report = VerificationReport(spec.as_dict(), spec.records)
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_job, args, chunksize=max(1, len(args) // (4 * jobs))))
    else:
        parts = [_run_job(a) for a in args]
    for part in parts:
        report.merge(part)
    report.finalize()
    if timing:
        report.runtime = time.perf_counter() - start
    return report
