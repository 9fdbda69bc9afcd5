"""Exact maximum clique on ``BitGraph``.

Branch and bound with greedy sequential colouring as the upper bound, run
once per vertex over its later neighbourhood in a degeneracy ordering.  The
top-level subproblems are independent, which is what the optional process
pool splits on.
"""
from __future__ import annotations

import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .graphcore import BitGraph, bits

DEFAULT_ENUM_CAP = 10**5


@dataclass(frozen=True)
class CliqueResult:
    omega: int
    witness: tuple[int, ...]
    node_count: int
    elapsed: float
    # False when several workers raced: the witness is *a* maximum clique
    witness_deterministic: bool = True

    def to_dict(self) -> dict:
        return {
            "omega": self.omega,
            "witness": list(self.witness),
            "node_count": self.node_count,
            "elapsed": round(self.elapsed, 6),
            "witness_deterministic": self.witness_deterministic,
        }


def degeneracy_order(rows: tuple[int, ...]) -> list[int]:
    """Smallest-last order: repeatedly remove a minimum-degree vertex (lowest index on ties)."""
    n = len(rows)
    alive = (1 << n) - 1
    deg = [r.bit_count() for r in rows]
    buckets: dict[int, set[int]] = {}
    for v, d in enumerate(deg):
        buckets.setdefault(d, set()).add(v)
    order = []
    d = 0
    for _ in range(n):
        d = max(0, d - 1)
        while not buckets.get(d):
            d += 1
        v = min(buckets[d])
        buckets[d].remove(v)
        order.append(v)
        alive &= ~(1 << v)
        for w in bits(rows[v] & alive):
            buckets[deg[w]].discard(w)
            deg[w] -= 1
            buckets.setdefault(deg[w], set()).add(w)
    return order


def _later_neighborhoods(rows: tuple[int, ...], order: list[int]) -> list[int]:
    later = []
    remaining = (1 << len(rows)) - 1
    for v in order:
        remaining &= ~(1 << v)
        later.append(rows[v] & remaining)
    return later


def _color_sort(rows, P: int) -> list[tuple[int, int]]:
    """Greedy sequential colouring of P; returns (vertex, colour) by increasing colour."""
    out = []
    color = 0
    U = P
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            U &= ~low
            Q &= ~low & ~rows[v]
            out.append((v, color))
    return out


class _Search:
    def __init__(self, rows, best: int, shared=None):
        self.rows = rows
        self.best = best
        self.best_clique: list[int] | None = None
        self.nodes = 0
        self.shared = shared

    def _sync(self):
        if self.shared is not None and self.shared.value > self.best:
            self.best = self.shared.value

    def _improve(self, clique: list[int]):
        self.best = len(clique)
        self.best_clique = list(clique)
        if self.shared is not None:
            with self.shared.get_lock():
                if self.shared.value < self.best:
                    self.shared.value = self.best

    def expand(self, R: list[int], P: int):
        self.nodes += 1
        rows = self.rows
        for v, c in reversed(_color_sort(rows, P)):
            if len(R) + c <= self.best:
                return
            R.append(v)
            newP = P & rows[v]
            if newP:
                self.expand(R, newP)
            elif len(R) > self.best:
                self._improve(R)
            R.pop()
            P &= ~(1 << v)

    def root(self, v: int, P: int):
        self._sync()
        if P.bit_count() + 1 <= self.best:
            return
        if P:
            self.expand([v], P)
        elif 1 > self.best:
            self._improve([v])


# worker-process state, installed by _init_worker
_W: dict = {}


def _init_worker(rows, later, order, shared):
    _W.update(rows=rows, later=later, order=order, shared=shared)


def _run_chunk(args):
    positions, best = args
    s = _Search(_W["rows"], best, _W["shared"])
    for i in positions:
        s.root(_W["order"][i], _W["later"][i])
    return (len(s.best_clique) if s.best_clique else 0), s.best_clique, s.nodes


def max_clique(graph: BitGraph, lower_hint: int = 0, threads: int = 1) -> CliqueResult:
    """Exact maximum clique.

    ``lower_hint`` is the size of a clique known to exist; the search then
    only looks for cliques at least that large.
    """
    t0 = time.perf_counter()
    rows = graph.rows
    if graph.n == 0:
        return CliqueResult(0, (), 0, time.perf_counter() - t0)
    order = degeneracy_order(rows)
    later = _later_neighborhoods(rows, order)
    start_best = max(0, lower_hint - 1)
    # high-degeneracy vertices last in the order tend to sit in large cliques; search them first
    positions = list(range(len(order) - 1, -1, -1))

    if threads <= 1:
        s = _Search(rows, start_best)
        for i in positions:
            s.root(order[i], later[i])
        clique, nodes, deterministic = s.best_clique, s.nodes, True
    else:
        ctx = mp.get_context("fork" if "fork" in mp.get_all_start_methods() else "spawn")
        shared = ctx.Value("i", start_best)
        chunks = [positions[k::threads * 4] for k in range(threads * 4)]
        clique, nodes = None, 0
        with ProcessPoolExecutor(threads, mp_context=ctx, initializer=_init_worker,
                                 initargs=(rows, later, order, shared)) as pool:
            for size, cl, nn in pool.map(_run_chunk, [(c, start_best) for c in chunks]):
                nodes += nn
                if cl and (clique is None or size > len(clique)):
                    clique = cl
        deterministic = False

    if clique is None:
        if lower_hint > 0:
            # hint exceeded the true clique number; search without it
            return max_clique(graph, 0, threads)
        clique = []
    return CliqueResult(len(clique), tuple(sorted(clique)), nodes, time.perf_counter() - t0, deterministic)


@dataclass(frozen=True)
class CliqueEnumeration:
    cliques: list[tuple[int, ...]] = field(default_factory=list)
    exhaustive: bool = True

    @property
    def truncated(self) -> bool:
        return not self.exhaustive


class _CapReached(Exception):
    pass


def enumerate_maximum_cliques(graph: BitGraph, omega: int, cap: int = DEFAULT_ENUM_CAP) -> CliqueEnumeration:
    """All cliques of exactly ``omega`` vertices, up to ``cap`` of them."""
    rows = graph.rows
    found: list[tuple[int, ...]] = []
    if omega <= 0:
        return CliqueEnumeration([()], True)

    def expand(R: list[int], P: int):
        for v, c in reversed(_color_sort(rows, P)):
            if len(R) + c < omega:
                return
            R.append(v)
            if len(R) == omega:
                if len(found) >= cap:
                    raise _CapReached
                found.append(tuple(sorted(R)))
            else:
                newP = P & rows[v]
                if newP:
                    expand(R, newP)
            R.pop()
            P &= ~(1 << v)

    order = degeneracy_order(rows)
    later = _later_neighborhoods(rows, order)
    try:
        for v, P in zip(order, later):
            if omega == 1:
                if len(found) >= cap:
                    raise _CapReached
                found.append((v,))
            elif P.bit_count() + 1 >= omega:
                expand([v], P)
    except _CapReached:
        return CliqueEnumeration(sorted(found), False)
    return CliqueEnumeration(sorted(found), True)


def greedy_clique(graph: BitGraph) -> list[int]:
    """Grow a clique by repeatedly taking the candidate with most candidate neighbours."""
    rows = graph.rows
    P = (1 << graph.n) - 1
    clique = []
    while P:
        v = max(bits(P), key=lambda w: ((rows[w] & P).bit_count(), -w))
        clique.append(v)
        P &= rows[v]
    return clique


def greedy_clique_lower_bound(graph: BitGraph) -> int:
    return len(greedy_clique(graph))


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
