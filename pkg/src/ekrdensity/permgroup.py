"""Permutation groups: enumeration, stabilizers, conjugacy, coset actions, blocks.

A permutation on ``n`` points is a tuple ``p`` of images, ``p[v]`` being the
image of ``v``.  Products are composed right to left: ``compose(p, q)`` maps
``v`` to ``p[q[v]]``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property, reduce
from typing import Iterable, Sequence

from sympy.combinatorics import Permutation as _SymPerm
from sympy.combinatorics import PermutationGroup as _SymGroup

Permutation = tuple[int, ...]

DEFAULT_GROUP_CAP = 2**22


class GroupTooLarge(ValueError):
    pass


def identity(n: int) -> Permutation:
    if n < 1:
        raise ValueError("degree must be >= 1")
    return tuple(range(n))


def check_perm(p: Sequence[int]) -> Permutation:
    p = tuple(int(x) for x in p)
    if not p or sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation: {p}")
    return p


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The map v -> p(q(v))."""
    if len(p) != len(q):
        raise ValueError(f"degree mismatch: {len(p)} vs {len(q)}")
    return tuple(p[i] for i in q)


def inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p: Permutation) -> bool:
    return all(i == j for i, j in enumerate(p))


def power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        p, k = inverse(p), -k
    result = identity(len(p))
    base = p
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def conjugate(g: Permutation, x: Permutation) -> Permutation:
    """g x g^-1."""
    return compose(compose(g, x), inverse(g))


def cycles(p: Permutation) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def element_order(p: Permutation) -> int:
    return reduce(math.lcm, (len(c) for c in cycles(p)), 1)


def fixed_points(p: Permutation) -> list[int]:
    return [i for i, j in enumerate(p) if i == j]


def from_cycles(n: int, *cycs: Sequence[int]) -> Permutation:
    out = list(range(n))
    for c in cycs:
        for a, b in zip(c, list(c[1:]) + [c[0]]):
            out[a] = b
    return check_perm(out)


def cycle_str(p: Permutation) -> str:
    parts = ["(" + " ".join(map(str, c)) + ")" for c in cycles(p) if len(c) > 1]
    return "".join(parts) or "()"


def closure(generators: Iterable[Permutation], cap: int = DEFAULT_GROUP_CAP,
            degree: int | None = None) -> list[Permutation]:
    """All elements of <generators> in BFS layer order, lexicographic within a layer."""
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("need at least one generator or an explicit degree")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise ValueError("generators have different degrees")
    e = identity(degree)
    seen = {e}
    out = [e]
    layer = [e]
    while layer:
        nxt = set()
        for g in layer:
            for s in gens:
                h = tuple(g[i] for i in s)
                if h not in seen and h not in nxt:
                    nxt.add(h)
        if len(seen) + len(nxt) > cap:
            raise GroupTooLarge(f"group too large: closure exceeds cap of {cap} elements")
        layer = sorted(nxt)
        seen.update(layer)
        out.extend(layer)
    return out


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A permutation group with an optional designated subgroup H.

    The action studied is the action of the group on left cosets of H.  When
    H is not given it defaults to the stabilizer of point 0, i.e. the action
    on points itself.
    """

    degree: int
    generators: tuple[Permutation, ...]
    designated_subgroup: tuple[Permutation, ...] | None = None
    name: str = ""
    cap: int = DEFAULT_GROUP_CAP
    kernel_order: int = 1
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        for g in self.generators:
            if len(g) != self.degree:
                raise ValueError("generator degree mismatch")

    @cached_property
    def elements(self) -> list[Permutation]:
        return closure(self.generators, self.cap, self.degree)

    @cached_property
    def index(self) -> dict[Permutation, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @cached_property
    def _sym(self) -> _SymGroup:
        gens = [_SymPerm(list(g)) for g in self.generators] or [_SymPerm(list(range(self.degree)))]
        return _SymGroup(gens)

    @cached_property
    def order(self) -> int:
        """Group order from a stabilizer chain; no enumeration."""
        if "elements" in self.__dict__:
            return len(self.__dict__["elements"])
        return int(self._sym.order())

    @cached_property
    def base(self) -> list[int]:
        """A base: points whose images determine each group element."""
        if self.order == 1:
            return []
        return [int(b) for b in self._sym.base]

    def contains(self, g: Permutation) -> bool:
        if "index" in self.__dict__:
            return g in self.index
        return bool(self._sym.contains(_SymPerm(list(g))))

    @cached_property
    def point_subgroup(self) -> tuple[Permutation, ...]:
        """H: the designated subgroup, or the stabilizer of point 0."""
        if self.designated_subgroup is not None:
            return self.designated_subgroup
        stab = self._sym.stabilizer(0)
        gens = [tuple(int(x) for x in s.array_form) for s in stab.generators]
        gens = [g + tuple(range(len(g), self.degree)) for g in gens]
        return tuple(closure(gens, self.cap, self.degree))

    @property
    def identity(self) -> Permutation:
        return identity(self.degree)

    def orbit(self, v: int) -> list[int]:
        seen = {v}
        out = [v]
        queue = deque([v])
        while queue:
            a = queue.popleft()
            for s in self.generators:
                b = s[a]
                if b not in seen:
                    seen.add(b)
                    out.append(b)
                    queue.append(b)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def with_subgroup(self, H: Iterable[Permutation], name: str | None = None) -> "FiniteGroup":
        return replace(self, designated_subgroup=tuple(H), name=name or self.name)

    def mul(self, i: int, j: int) -> int:
        return self.index[compose(self.elements[i], self.elements[j])]


def enumerate_group(generators: Sequence[Sequence[int]], cap: int = DEFAULT_GROUP_CAP,
                    name: str = "") -> FiniteGroup:
    if not generators:
        raise ValueError("need a nonempty generator list")
    gens = tuple(check_perm(g) for g in generators)
    G = FiniteGroup(len(gens[0]), gens, name=name, cap=cap)
    G.elements  # enumerate now, raising GroupTooLarge if needed
    return G


def subgroup_elements(G: FiniteGroup, K) -> list[Permutation]:
    """Accept either element positions or permutations."""
    K = list(K)
    if K and isinstance(K[0], int):
        return [G.elements[i] for i in K]
    return [tuple(k) for k in K]


def is_subgroup(K: Sequence[Permutation]) -> bool:
    ks = set(K)
    if not ks:
        return False
    return all(compose(a, b) in ks for a in ks for b in ks)


def stabilizer(G: FiniteGroup, v: int) -> list[int]:
    if not 0 <= v < G.degree:
        raise ValueError(f"point {v} out of range for degree {G.degree}")
    return [i for i, g in enumerate(G.elements) if g[v] == v]


def conjugacy_class(G: FiniteGroup, g: Permutation) -> list[Permutation]:
    """Orbit of g under conjugation by the generators (no full enumeration)."""
    g = tuple(g)
    gens = [(s, inverse(s)) for s in G.generators]
    seen = {g}
    out = [g]
    queue = deque([g])
    while queue:
        x = queue.popleft()
        for s, si in gens:
            y = tuple(s[x[si[v]]] for v in range(len(x)))
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


def conjugates_of_subgroup(G: FiniteGroup, H: Sequence[Permutation]) -> list[frozenset]:
    """All conjugates gHg^-1 as frozensets, via orbit under the generators."""
    H0 = frozenset(tuple(h) for h in H)
    gens = [(s, inverse(s)) for s in G.generators]
    seen = {H0}
    out = [H0]
    queue = deque([H0])
    while queue:
        X = queue.popleft()
        for s, si in gens:
            Y = frozenset(tuple(s[x[si[v]]] for v in range(len(x))) for x in X)
            if Y not in seen:
                seen.add(Y)
                out.append(Y)
                queue.append(Y)
    return out


@dataclass(frozen=True)
class CosetTable:
    reps: list[Permutation]
    point_of: dict[Permutation, int]

    def image(self, g: Permutation) -> Permutation:
        """Permutation induced by g on the cosets: x H -> g x H."""
        return tuple(self.point_of[compose(g, r)] for r in self.reps)


def coset_table(G: FiniteGroup, H: Sequence[Permutation]) -> CosetTable:
    H = [tuple(h) for h in H]
    if not is_subgroup(H):
        raise ValueError("H is not closed under composition")
    reps: list[Permutation] = []
    point_of: dict[Permutation, int] = {}
    for g in G.elements:
        if g in point_of:
            continue
        i = len(reps)
        reps.append(g)
        for h in H:
            point_of[compose(g, h)] = i
    return CosetTable(reps, point_of)


def coset_action(G: FiniteGroup, H=None) -> FiniteGroup:
    """Action of G on left cosets gH; the coset H itself is point 0.

    The result carries ``kernel_order`` (1 iff the action is faithful) and its
    designated subgroup is the stabilizer of point 0.
    """
    H = subgroup_elements(G, H) if H is not None else list(G.point_subgroup)
    table = coset_table(G, H)
    gens = tuple(table.image(s) for s in G.generators)
    stab0 = tuple(sorted({table.image(h) for h in H}))
    img = FiniteGroup(len(table.reps), gens, designated_subgroup=stab0,
                      name=f"{G.name} on cosets" if G.name else "", cap=G.cap)
    return replace(img, kernel_order=G.order // img.order)


# -- block systems --------------------------------------------------------------

@dataclass(frozen=True)
class BlockSystem:
    partition: tuple[tuple[int, ...], ...]

    @property
    def block_size(self) -> int:
        return len(self.partition[0])

    def block_of(self) -> dict[int, int]:
        return {v: i for i, blk in enumerate(self.partition) for v in blk}


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _partition_from_uf(uf: _UnionFind, n: int) -> tuple[tuple[int, ...], ...]:
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(uf.find(v), []).append(v)
    return tuple(tuple(g) for g in sorted(groups.values()))


def minimal_block_system(G: FiniteGroup, u: int, v: int) -> BlockSystem:
    """Finest G-invariant partition with u and v in the same block."""
    if u == v:
        raise ValueError("u and v must differ")
    if not G.is_transitive():
        raise ValueError("group is not transitive")
    uf = _UnionFind(G.degree)
    uf.union(u, v)
    queue = deque([(u, v)])
    while queue:
        a, b = queue.popleft()
        for s in G.generators:
            c, d = uf.find(s[a]), uf.find(s[b])
            if c != d:
                uf.union(c, d)
                queue.append((c, d))
    return BlockSystem(_partition_from_uf(uf, G.degree))


def is_invariant_partition(G: FiniteGroup, B: BlockSystem) -> bool:
    where = B.block_of()
    if len(where) != G.degree:
        return False
    for s in G.generators:
        for blk in B.partition:
            if len({where[s[x]] for x in blk}) != 1:
                return False
    return True


def quotient_action(G: FiniteGroup, B: BlockSystem) -> FiniteGroup:
    """Induced action on blocks; ``kernel_order`` is the size of the kernel."""
    if not is_invariant_partition(G, B):
        raise ValueError("partition is not G-invariant")
    where = B.block_of()
    gens = tuple(tuple(where[s[blk[0]]] for blk in B.partition) for s in G.generators)
    Q = FiniteGroup(len(B.partition), gens, name=f"{G.name}/blocks" if G.name else "", cap=G.cap)
    return replace(Q, kernel_order=G.order // Q.order)


# -- subgroup descriptors -------------------------------------------------------

def orbits_of(K: Sequence[Permutation], degree: int) -> list[list[int]]:
    uf = _UnionFind(degree)
    for k in K:
        for a, b in enumerate(k):
            uf.union(a, b)
    return [list(b) for b in _partition_from_uf(uf, degree)]


def is_semiregular(G: FiniteGroup, K) -> tuple[bool, int]:
    """(only the identity of K fixes points?, number of K-orbits)."""
    K = subgroup_elements(G, K)
    flag = all(is_identity(k) or not fixed_points(k) for k in K)
    return flag, len(orbits_of(K, G.degree))


@dataclass(frozen=True)
class SubgroupShape:
    order: int
    exponent: int
    abelian: bool


def subgroup_shape(K: Sequence[Permutation]) -> SubgroupShape:
    K = [tuple(k) for k in K]
    if not is_subgroup(K):
        raise ValueError("K is not closed")
    exponent = reduce(math.lcm, (element_order(k) for k in K), 1)
    abelian = all(compose(a, b) == compose(b, a) for i, a in enumerate(K) for b in K[i + 1:])
    return SubgroupShape(len(set(K)), exponent, abelian)


def generated_subgroup(gens: Sequence[Permutation], cap: int = DEFAULT_GROUP_CAP) -> list[Permutation]:
    gens = [tuple(g) for g in gens]
    return closure(gens, cap, len(gens[0]))
