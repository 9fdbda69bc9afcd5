"""Bitset graphs and the group-theoretic graphs built on them.

``BitGraph`` stores one Python int per vertex as its neighbourhood bitset;
Python ints are arbitrary precision, so intersection and popcount are single
C-level operations whatever the vertex count.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .permgroup import (
    BlockSystem,
    FiniteGroup,
    Permutation,
    compose,
    element_order,
    inverse,
    is_identity,
)

DEFAULT_GRAPH_CAP = 2**16


def bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True, eq=False)
class BitGraph:
    n: int
    rows: tuple[int, ...]
    labels: tuple | None = field(default=None, repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "BitGraph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), labels)

    @classmethod
    def from_matrix(cls, adj: np.ndarray, labels=None) -> "BitGraph":
        adj = np.asarray(adj, dtype=bool)
        if adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix is not symmetric")
        packed = np.packbits(adj, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(r.tobytes(), "little") for r in packed)
        return cls(adj.shape[0], rows, None if labels is None else tuple(labels))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, u: int) -> list[int]:
        return list(bits(self.rows[u]))

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    @property
    def m(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.rows[u] >> (u + 1) << (u + 1))]

    def regular_degree(self) -> int | None:
        d = set(self.degrees())
        return d.pop() if len(d) == 1 else (0 if not d else None)

    def complement(self) -> "BitGraph":
        full = (1 << self.n) - 1
        return BitGraph(self.n, tuple(full & ~r & ~(1 << i) for i, r in enumerate(self.rows)), self.labels)

    def induced(self, vertices: Sequence[int]) -> "BitGraph":
        vertices = list(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            r = 0
            for w in bits(self.rows[v]):
                if w in pos:
                    r |= 1 << pos[w]
            rows.append(r)
        labels = None if self.labels is None else tuple(self.labels[v] for v in vertices)
        return BitGraph(len(vertices), tuple(rows), labels)

    def is_clique(self, vertices: Sequence[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(a, b) for i, a in enumerate(vs) for b in vs[i + 1:])

    def is_symmetric(self) -> bool:
        return all(self.has_edge(v, u) for u in range(self.n) for v in bits(self.rows[u])) and not any(
            r >> i & 1 for i, r in enumerate(self.rows))

    def to_matrix(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        for u, r in enumerate(self.rows):
            adj[u, list(bits(r))] = True
        return adj

    # export
    def to_edge_list(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "BitGraph":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        n, m = int(lines[0][0]), int(lines[0][1])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
        if len(edges) != m:
            raise ValueError(f"edge-list header says {m} edges, found {len(edges)}")
        return cls.from_edges(n, edges)

    def summary(self) -> dict:
        out = {"n": self.n, "m": self.m, "regular_degree": self.regular_degree()}
        if self.labels is not None:
            out["labels"] = [str(x) for x in self.labels]
        return out

    def summary_json(self) -> str:
        return json.dumps(self.summary())


# -- Cayley-type graphs from a connection set ------------------------------------

class _ElementCodec:
    """Encode elements of a group as int64 keys from their base images."""

    def __init__(self, G: FiniteGroup):
        self.base = G.base or [0]
        self.degree = G.degree
        self.fits = self.degree ** len(self.base) < 2**62
        self.weights = np.array([self.degree**i for i in range(len(self.base))], dtype=np.int64)

    def keys(self, base_images: np.ndarray) -> np.ndarray:
        return base_images.astype(np.int64) @ self.weights


def _pack_rows(block: np.ndarray) -> list[int]:
    packed = np.packbits(block, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def cayley_rows(G: FiniteGroup, vertices: Sequence[Permutation],
                connection: Sequence[Permutation], chunk: int = 256) -> list[int]:
    """Bitset rows of the graph on ``vertices`` with v_i ~ v_j iff v_i^-1 v_j in ``connection``."""
    codec = _ElementCodec(G)
    V = np.array(vertices, dtype=np.int32).reshape(len(vertices), G.degree)
    m = len(V)
    inv = np.empty_like(V)
    inv[np.arange(m)[:, None], V] = np.arange(G.degree, dtype=np.int32)[None, :]
    rows: list[int] = []
    if m == 0 or not len(connection):
        return [0] * m
    if codec.fits:
        conn_keys = np.unique(codec.keys(np.array(connection, dtype=np.int64)[:, codec.base]))
        Vb = V[:, codec.base]
        for start in range(0, m, chunk):
            # prod[s, t, j] = (v_s^-1 v_t)(base_j)
            prod = inv[start:start + chunk][:, Vb]
            keys = codec.keys(prod.reshape(-1, Vb.shape[1])).reshape(prod.shape[0], m)
            pos = np.searchsorted(conn_keys, keys)
            pos[pos >= len(conn_keys)] = 0
            rows.extend(_pack_rows(conn_keys[pos] == keys))
    else:
        conn = {np.array(c, dtype=np.int32).tobytes() for c in connection}
        for i in range(m):
            prods = inv[i][V]
            rows.extend(_pack_rows(np.array([[p.tobytes() in conn for p in prods]])))
    # v^-1 v = 1 is never in a connection set without the identity
    return [r & ~(1 << i) for i, r in enumerate(rows)]


def _check_connection_set(S: Sequence[Permutation]) -> set[Permutation]:
    Sset = {tuple(s) for s in S}
    if any(is_identity(s) for s in Sset):
        raise ValueError("connection set must not contain the identity")
    if any(inverse(s) not in Sset for s in Sset):
        raise ValueError("connection set is not inverse-closed")
    return Sset


def fixer_neighborhood_graph(G: FiniteGroup, S: Sequence[Permutation]) -> BitGraph:
    """Graph on S with s ~ t iff s^-1 t in S: the identity's neighbourhood in Cay(G, S)."""
    S = [tuple(s) for s in S]
    _check_connection_set(S)
    return BitGraph(len(S), tuple(cayley_rows(G, S, S)), tuple(S))


def fixer_set(G: FiniteGroup) -> list[Permutation]:
    """Non-identity elements fixing a point of the studied action: the union of
    the conjugates of H minus the identity."""
    from .permgroup import conjugacy_class

    H = G.point_subgroup
    seen: dict[Permutation, None] = {}
    for h in sorted(H):
        if is_identity(h) or h in seen:
            continue
        for x in conjugacy_class(G, h):
            seen.setdefault(x, None)
    return list(seen)


def complement_derangement_graph(G: FiniteGroup, cap: int = DEFAULT_GRAPH_CAP,
                                 S: Sequence[Permutation] | None = None) -> BitGraph:
    """Graph on all of G, g ~ h iff g^-1 h fixes a point of the studied action."""
    if G.order > cap:
        raise ValueError(f"|G| = {G.order} exceeds the explicit-graph cap {cap}; "
                         "use the fixer-neighborhood route")
    S = fixer_set(G) if S is None else [tuple(s) for s in S]
    els = G.elements
    return BitGraph(len(els), tuple(cayley_rows(G, els, S)), tuple(range(len(els))))


# -- orbitals --------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitalDigraph:
    arcs: frozenset[tuple[int, int]]
    representative: tuple[int, int]

    @property
    def trivial(self) -> bool:
        u, v = self.representative
        return u == v

    def reverse(self) -> frozenset[tuple[int, int]]:
        return frozenset((b, a) for a, b in self.arcs)

    def to_dot(self, name: str = "orbital") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  {a} -> {b};" for a, b in sorted(self.arcs)]
        lines.append("}")
        return "\n".join(lines) + "\n"


def orbitals(G: FiniteGroup) -> list[OrbitalDigraph]:
    """Orbits of G on ordered pairs; the diagonal comes first."""
    if not G.is_transitive():
        raise ValueError("group is not transitive")
    n = G.degree
    seen = [False] * (n * n)
    out = []
    for start in [(0, 0)] + [(0, v) for v in range(1, n)]:
        if seen[start[0] * n + start[1]]:
            continue
        arcs = [start]
        seen[start[0] * n + start[1]] = True
        queue = deque([start])
        while queue:
            a, b = queue.popleft()
            for s in G.generators:
                c, d = s[a], s[b]
                if not seen[c * n + d]:
                    seen[c * n + d] = True
                    arcs.append((c, d))
                    queue.append((c, d))
        out.append(OrbitalDigraph(frozenset(arcs), start))
    # every orbital meets {0} x V because G is transitive
    assert sum(len(o.arcs) for o in out) == n * n
    return out


def _require_nontrivial(delta: OrbitalDigraph):
    if delta.trivial:
        raise ValueError("trivial (diagonal) orbital")


def is_self_paired(G: FiniteGroup, delta: OrbitalDigraph) -> bool:
    """Decided by arc reversal and by the 2-element criterion; both must agree."""
    _require_nontrivial(delta)
    by_reversal = delta.reverse() == delta.arcs
    u, v = delta.representative
    by_element = False
    for g in G.elements:
        if g[u] != v:
            continue
        o = element_order(g)
        if o & (o - 1):
            continue
        g2 = compose(g, g)
        if g2[u] == u:
            by_element = True
            break
    if by_reversal != by_element:
        raise AssertionError(f"self-pairing criteria disagree on orbital {delta.representative}")
    return by_reversal


def _weakly_connected(n: int, arcs: Iterable[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in arcs:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return len(seen) == n


def is_connected_orbital(G: FiniteGroup, delta: OrbitalDigraph) -> bool:
    """Weak connectivity vs. <G_u, g> = G for g(u) = v; both must agree."""
    _require_nontrivial(delta)
    by_graph = _weakly_connected(G.degree, delta.arcs)
    u, v = delta.representative
    g = next(x for x in G.elements if x[u] == v)
    stab = [x for x in G.elements if x[u] == u]
    # a subgroup containing G_u is all of G iff it is transitive
    sub = FiniteGroup(G.degree, tuple(stab) + (g,))
    by_group = len(sub.orbit(u)) == G.degree
    if by_graph != by_group:
        raise AssertionError(f"connectivity criteria disagree on orbital {delta.representative}")
    return by_graph


# -- double coset and quotient graphs --------------------------------------------

@dataclass(frozen=True)
class CosetDigraph:
    n: int
    arcs: frozenset[tuple[int, int]]
    valency: int

    @property
    def undirected(self) -> bool:
        return all((b, a) in self.arcs for a, b in self.arcs)

    def to_bitgraph(self) -> BitGraph:
        if not self.undirected:
            raise ValueError("digraph is not symmetric")
        return BitGraph.from_edges(self.n, [(a, b) for a, b in self.arcs if a < b])


def double_coset_graph(G: FiniteGroup, H: Sequence[Permutation], S: Sequence[Permutation]) -> CosetDigraph:
    """Cos(G, H, HSH): arcs (xH, yH) with x^-1 y in HSH, loops dropped."""
    from .permgroup import coset_table

    H = [tuple(h) for h in H]
    table = coset_table(G, H)
    HSH = {compose(compose(a, tuple(s)), b) for a in H for s in S for b in H}
    arcs = set()
    for i, x in enumerate(table.reps):
        xi = inverse(x)
        for j, y in enumerate(table.reps):
            if i != j and compose(xi, y) in HSH:
                arcs.add((i, j))
    # valency counts cosets inside HSH, excluding H itself when 1 in HSH
    valency = len({table.point_of[d] for d in HSH} - {0})
    return CosetDigraph(len(table.reps), frozenset(arcs), valency)


def quotient_graph(graph: BitGraph, B: BlockSystem) -> BitGraph:
    where = B.block_of()
    edges = {tuple(sorted((where[u], where[v]))) for u, v in graph.edges() if where[u] != where[v]}
    return BitGraph.from_edges(len(B.partition), sorted(edges))
