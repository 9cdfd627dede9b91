"""Finite groups as Cayley tables, subsets, Minkowski products and Cayley graphs.

Elements are dense indices ``0..order-1`` with the identity at 0. Groups are
built from a small spec language::

    Z5        cyclic group of order 5
    D4        dihedral group of order 8 (symmetries of a square)
    S3        symmetric group on 3 points (n <= 5)
    Q8        quaternion group
    Z2xZ4     direct product, pair (a, b) has index a*|H| + b
    table:P   Cayley table read from file P
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .digraph import Digraph


class GroupError(ValueError):
    pass


ASSOC_EXHAUSTIVE_MAX = 64
ASSOC_SAMPLES = 10_000
SYMMETRIC_MAX = 5


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    name: str
    mul: np.ndarray
    labels: tuple[str, ...]
    inverse: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> range:
        return range(self.order)

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def subset(self, members: Iterable[int]) -> GroupSubset:
        return GroupSubset(self, members)

    def label(self, a: int) -> str:
        return self.labels[a]

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or np.array_equal(self.mul, other.mul)

    def __hash__(self):
        return hash(self.mul.tobytes())


def _validated(name: str, table, labels: Sequence[str] | None = None) -> FiniteGroup:
    """Check the group axioms on ``table`` and freeze it into a FiniteGroup."""
    mul = np.array(table, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise GroupError(f"{name}: table must be a non-empty square array")
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise GroupError(f"{name}: table entries out of range 0..{n - 1}")
    ar = np.arange(n)
    if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
        raise GroupError(f"{name}: element 0 is not a two-sided identity")
    if n <= ASSOC_EXHAUSTIVE_MAX:
        # (ab)c == a(bc) for all triples, one broadcast
        left = mul[mul[:, :, None], ar[None, None, :]]
        right = mul[ar[:, None, None], mul[None, :, :]]
        if not np.array_equal(left, right):
            a, b, c = map(int, np.argwhere(left != right)[0])
            raise GroupError(f"{name}: not associative at ({a},{b},{c})")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, ASSOC_SAMPLES))
        bad = mul[mul[a, b], c] != mul[a, mul[b, c]]
        if bad.any():
            i = int(np.argmax(bad))
            raise GroupError(f"{name}: not associative at ({a[i]},{b[i]},{c[i]})")
    inverse = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        right_inv = np.flatnonzero(mul[x] == 0)
        if len(right_inv) != 1 or mul[right_inv[0], x] != 0:
            raise GroupError(f"{name}: element {x} has no two-sided inverse")
        inverse[x] = right_inv[0]
    mul.setflags(write=False)
    inverse.setflags(write=False)
    if labels is None:
        labels = [str(i) for i in range(n)]
    if len(labels) != n:
        raise GroupError(f"{name}: expected {n} labels, got {len(labels)}")
    return FiniteGroup(name, mul, tuple(labels), inverse)


def _from_elements(name, elements: Sequence[Hashable], op: Callable, labels=None) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[op(a, b)] for b in elements] for a in elements]
    return _validated(name, table, labels)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    return _validated(f"Z{n}", (np.arange(n)[:, None] + np.arange(n)[None, :]) % n)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; index f*n + k stands for r^k s^f."""
    if n < 2:
        raise GroupError("dihedral group needs n >= 2")
    elements = [(k, f) for f in (0, 1) for k in range(n)]

    def op(x, y):
        (k1, f1), (k2, f2) = x, y
        return ((k1 + (-1) ** f1 * k2) % n, (f1 + f2) % 2)

    labels = [("s" if f else "") + (f"r{k}" if k else ("" if f else "e")) for k, f in elements]
    return _from_elements(f"D{n}", elements, op, labels)


def symmetric(n: int) -> FiniteGroup:
    """Permutations of range(n) in lexicographic order, (p*q)(i) = p(q(i))."""
    if not 1 <= n <= SYMMETRIC_MAX:
        raise GroupError(f"symmetric group supported for 1 <= n <= {SYMMETRIC_MAX}")
    perms = list(itertools.permutations(range(n)))
    labels = ["".join(map(str, p)) for p in perms]
    return _from_elements(f"S{n}", perms, lambda p, q: tuple(p[i] for i in q), labels)


def quaternion8() -> FiniteGroup:
    # unit quaternions as (sign, axis) with axis in 1, i, j, k
    axes = "1ijk"
    table = {
        ("1", "1"): (1, "1"), ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }

    def op(x, y):
        (s1, a1), (s2, a2) = x, y
        if a1 == "1":
            return (s1 * s2, a2)
        if a2 == "1":
            return (s1 * s2, a1)
        s, a = table[a1, a2]
        return (s1 * s2 * s, a)

    elements = [(s, a) for a in axes for s in (1, -1)]
    labels = [("" if s > 0 else "-") + a for s, a in elements]
    return _from_elements("Q8", elements, op, labels)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    m = h.order
    a = np.arange(g.order * m)
    ga, ha = a // m, a % m
    table = g.mul[ga[:, None], ga[None, :]] * m + h.mul[ha[:, None], ha[None, :]]
    labels = [f"({g.labels[x // m]},{h.labels[x % m]})" for x in a]
    return _validated(f"{g.name}x{h.name}", table, labels)


def load_table(path: str | Path) -> FiniteGroup:
    """Read a Cayley table file: order, then one row per element, then optional ``# i name`` lines."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GroupError(f"cannot read table file {path}: {exc}") from exc
    rows, labels = [], {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if len(parts) == 2 and parts[0].isdigit():
                labels[int(parts[0])] = parts[1].strip()
            continue
        rows.append(line.split())
    try:
        n = int(rows[0][0])
        if len(rows[0]) != 1 or len(rows) != n + 1:
            raise ValueError
        table = [[int(x) for x in row] for row in rows[1:]]
        if any(len(row) != n for row in table):
            raise ValueError
    except (ValueError, IndexError):
        raise GroupError(f"malformed table file {path}") from None
    names = [labels.get(i, str(i)) for i in range(n)]
    return _validated(f"table:{path}", table, names)


def make_group(spec: str) -> FiniteGroup:
    spec = spec.strip()
    if spec.startswith("table:"):
        return load_table(spec[len("table:"):])
    if "x" in spec:
        parts = spec.split("x")
        group = make_group(parts[0])
        for part in parts[1:]:
            group = direct_product(group, make_group(part))
        return group
    if spec == "Q8":
        return quaternion8()
    families = {"Z": cyclic, "D": dihedral, "S": symmetric}
    if spec[:1] in families and spec[1:].isdigit():
        return families[spec[0]](int(spec[1:]))
    raise GroupError(f"unsupported group spec {spec!r}")


class GroupSubset:
    """Canonical sorted subset of a FiniteGroup."""

    __slots__ = ("group", "members")

    def __init__(self, group: FiniteGroup, members: Iterable[int]):
        ms = tuple(sorted({int(x) for x in members}))
        if ms and (ms[0] < 0 or ms[-1] >= group.order):
            raise GroupError(f"subset members out of range for {group.name}")
        self.group = group
        self.members = ms

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members

    def __eq__(self, other):
        if isinstance(other, GroupSubset):
            return self.group == other.group and self.members == other.members
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"GroupSubset({self.group.name}, {list(self.members)})"

    def __and__(self, other: GroupSubset) -> GroupSubset:
        _same_group(self, other)
        return GroupSubset(self.group, set(self.members) & set(other.members))

    def __or__(self, other: GroupSubset) -> GroupSubset:
        _same_group(self, other)
        return GroupSubset(self.group, set(self.members) | set(other.members))

    @property
    def mask(self) -> int:
        m = 0
        for x in self.members:
            m |= 1 << x
        return m


def _same_group(a: GroupSubset, b: GroupSubset) -> None:
    if a.group != b.group:
        raise GroupError(f"subsets of different groups: {a.group.name} vs {b.group.name}")


def minkowski_product(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    _same_group(a, b)
    mul = a.group.mul
    return GroupSubset(a.group, (int(mul[x, y]) for x in a for y in b))


def inverse_set(b: GroupSubset) -> GroupSubset:
    return GroupSubset(b.group, (b.group.inv(x) for x in b))


def left_translate(c: int, b: GroupSubset) -> GroupSubset:
    return GroupSubset(b.group, (b.group.op(c, x) for x in b))


def cayley_graph(group: FiniteGroup, s: GroupSubset | Iterable[int]) -> Digraph:
    """Cay(G, S): edge x -> y iff x^-1 y in S, i.e. out-neighbours of x are xS."""
    members = s.members if isinstance(s, GroupSubset) else tuple(sorted(set(s)))
    if not members:
        raise GroupError("Cayley graph needs a non-empty connection set")
    if members[0] < 0 or members[-1] >= group.order:
        raise GroupError("connection set out of range")
    cols = list(members)
    out = [sorted({int(y) for y in group.mul[x, cols]}) for x in range(group.order)]
    return Digraph(out)


def translation_permutation(group: FiniteGroup, c: int) -> tuple[int, ...]:
    """x -> c*x, an automorphism of every Cayley graph on ``group``."""
    return tuple(int(y) for y in group.mul[c])

