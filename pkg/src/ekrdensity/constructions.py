"""Named group families, each packaged with its designated subgroup and fixer set."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

from . import psl2
from .finitefield import GF, paley_graph
from .graphcore import BitGraph, fixer_neighborhood_graph, fixer_set
from .permgroup import (
    DEFAULT_GROUP_CAP,
    FiniteGroup,
    Permutation,
    check_perm,
    closure,
    element_order,
    from_cycles,
    identity,
    inverse,
    is_subgroup,
)

FAMILIES = ("sym3", "psl2z3", "psl2char3", "agl1", "erq", "paley", "file")


@dataclass
class Construction:
    id: str
    family: str
    params: dict
    group: FiniteGroup | None
    fixers: list[Permutation] = field(default_factory=list)
    graph: BitGraph | None = None
    meta: dict = field(default_factory=dict)

    def fixer_graph(self) -> BitGraph:
        if self.graph is None:
            self.graph = fixer_neighborhood_graph(self.group, self.fixers)
        return self.graph


# -- small standard groups ----------------------------------------------------------

def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup(1, (identity(1),), name="S1")
    if n == 2:
        return FiniteGroup(2, ((1, 0),), name="S2")
    return FiniteGroup(n, (from_cycles(n, (0, 1)), from_cycles(n, tuple(range(n)))), name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    gens = tuple(from_cycles(n, (0, 1, k)) for k in range(2, n))
    return FiniteGroup(n, gens, name=f"A{n}")


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup(n, (tuple((i + 1) % n for i in range(n)),), name=f"C{n}")


def dihedral(m: int) -> FiniteGroup:
    """Symmetries of the m-gon on its m vertices (order 2m)."""
    rot = tuple((i + 1) % m for i in range(m))
    ref = tuple((-i) % m for i in range(m))
    return FiniteGroup(m, (rot, ref), name=f"D{m}")


# -- studied families -----------------------------------------------------------------

def build_sym3(n: int) -> Construction:
    """S_n on cosets of <(0 1 2)>, kept in its degree-n representation."""
    if n < 4:
        raise ValueError("sym3 needs n >= 4")
    G = symmetric(n)
    x = from_cycles(n, (0, 1, 2))
    G = G.with_subgroup((identity(n), x, inverse(x)), name=f"S{n} on cosets of <(0 1 2)>")
    S = fixer_set(G)
    if len(S) != 2 * comb(n, 3):
        raise AssertionError("fixer set should be all 3-cycles")
    return Construction(f"sym3:n={n}", "sym3", {"n": n}, G, S)


def sym3_gamma1_structure(n: int) -> dict:
    """Components of the common neighbourhood of id and (0 1 2) among the fixers.

    Expected shape: one isolated vertex and three cliques of size n - 3.
    """
    c = build_sym3(n)
    S = c.fixers
    graph = c.fixer_graph()
    pos = {s: i for i, s in enumerate(S)}
    x = from_cycles(n, (0, 1, 2))
    common = [i for i in range(len(S)) if graph.has_edge(pos[x], i)]
    sub = graph.induced(common)
    comps = _components(sub)
    sizes = sorted(len(cp) for cp in comps)
    cliques = all(sub.is_clique(cp) for cp in comps)
    isolated = [S[common[cp[0]]] for cp in comps if len(cp) == 1]
    return {"sizes": sizes, "all_cliques": cliques, "isolated": isolated,
            "expected_sizes": sorted([1] + [n - 3] * 3)}


def _components(graph: BitGraph) -> list[list[int]]:
    seen, out = set(), []
    for v in range(graph.n):
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in graph.neighbors(a):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        out.append(sorted(comp))
    return out


def build_psl2_z3(q: int) -> Construction:
    if q % 3 != 1:
        raise ValueError(f"psl2z3 needs q = 1 (mod 3), got q = {q}")
    G = psl2.psl2_group(q)
    cls = psl2.order3_subgroup_classes(q, G)[0]
    G = G.with_subgroup(cls.subgroup, name=f"PSL(2,{q}) on cosets of Z3")
    S = psl2.fixer_set(G, cls.subgroup)
    if len(S) != q * (q + 1):
        raise AssertionError("every order-3 element should be a fixer")
    return Construction(f"psl2z3:q={q}", "psl2z3", {"q": q}, G, S,
                        meta={"modulus": G.meta["field"].modulus_str(), "class": 1, "fixers": len(S)})


def build_psl2_char3(n: int, class_selector: int = 1) -> Construction:
    if n < 3:
        raise ValueError("psl2char3 needs n >= 3 (PSL(2,9) is excluded)")
    q = 3**n
    G = psl2.psl2_group(q)
    classes = psl2.order3_subgroup_classes(q, G)
    if not 1 <= class_selector <= len(classes):
        raise ValueError(f"class selector must be in 1..{len(classes)}")
    cls = classes[class_selector - 1]
    G = G.with_subgroup(cls.subgroup, name=f"PSL(2,{q}) on cosets of Z3 (class {class_selector})")
    S = psl2.fixer_set(G, cls.subgroup)
    c = Construction(f"psl2char3:n={n}:class={class_selector}", "psl2char3",
                     {"n": n, "class": class_selector}, G, S,
                     meta={"modulus": G.meta["field"].modulus_str(), "class": class_selector, "fixers": len(S)})
    c.meta["sylow_structure"] = sylow_subgraph_check(c)
    if not c.meta["sylow_structure"]:
        raise AssertionError("fixer subgraph on the Sylow subgroup has the wrong structure")
    return c


def sylow_subgraph_check(c: Construction) -> bool:
    """On K = {M_x}, adjacency M_x ~ M_y iff M_{y-x} in S: complete (n odd) or
    exactly the Paley graph or its complement (n even), via x -> M_x."""
    P: psl2.PSL2 = c.group.meta["psl"]
    F = P.F
    q = P.q
    inS = [P.perm(P.unipotent(x)) in set(c.fixers) for x in range(q)]
    adj = [[x != y and inS[F.sub(y, x)] for y in range(q)] for x in range(q)]
    if F.spec.e % 2:
        return all(adj[x][y] for x in range(q) for y in range(q) if x != y)
    paley = paley_graph(q)
    pal = [[paley.has_edge(x, y) for y in range(q)] for x in range(q)]
    comp = [[x != y and not pal[x][y] for y in range(q)] for x in range(q)]
    return adj == pal or adj == comp


def build_agl1(q: int) -> Construction:
    G = psl2.agl1_group(q)
    S = fixer_set(G)
    F = GF.of_order(q)
    translations = [tuple(F.add(x, u) for x in range(q)) for u in range(q)]
    c = Construction(f"agl1:q={q}", "agl1", {"q": q}, G, S,
                     meta={"modulus": F.spec.modulus_str(), "p": F.p})
    c.meta["translations"] = translations
    return c


def _linear_map(n: int, image_of_basis) -> Permutation:
    out = []
    for v in range(2**n):
        w = 0
        for i in range(n):
            if v >> i & 1:
                w ^= image_of_basis(i)
        out.append(w)
    return tuple(out)


def build_e_rtimes_q(n: int) -> Construction:
    """E = Z_2^n extended by Q = <a, b>, on cosets of <e_1>.

    Realised on the 2^n vectors of E: e_i is translation by the i-th basis
    vector, a and b act linearly, with conjugation e^g = g^-1 e g.
    """
    if n < 3:
        raise ValueError("erq needs n >= 3")
    e = [tuple(v ^ (1 << i) for v in range(2**n)) for i in range(n)]
    # a^-1 e_i a = e_{i+1} needs a(e_{i+1}) = e_i
    a = _linear_map(n, lambda i: 1 << ((i - 1) % n))
    # b(e_i) = e_i e_n for i < n, b(e_n) = e_n; b is an involution
    b = _linear_map(n, lambda i: (1 << i) ^ (1 << (n - 1)) if i < n - 1 else 1 << (n - 1))
    G = FiniteGroup(2**n, tuple(e) + (a, b), name=f"E x| Q (n={n}) on cosets of <e1>")
    G = G.with_subgroup((identity(2**n), e[0]))
    S = fixer_set(G)
    Q = FiniteGroup(2**n, (a, b))
    c = Construction(f"erq:n={n}", "erq", {"n": n}, G, S,
                     meta={"Q_order": Q.order, "E_order": 2**n})
    c.meta["basis"] = e
    return c


def erq_translation(n: int, bits_set) -> Permutation:
    """The element prod_{i in bits_set} e_i (1-based indices)."""
    mask = 0
    for i in bits_set:
        mask ^= 1 << (i - 1)
    return tuple(v ^ mask for v in range(2**n))


def build_paley(q: int) -> Construction:
    F = GF.of_order(q)
    return Construction(f"paley:q={q}", "paley", {"q": q}, None, graph=paley_graph(q),
                        meta={"modulus": F.spec.modulus_str()})


# -- group-spec JSON -------------------------------------------------------------------

def group_from_spec(spec: dict, cap: int = DEFAULT_GROUP_CAP, name: str = "") -> FiniteGroup:
    try:
        degree = int(spec["degree"])
        gens = tuple(check_perm(g) for g in spec["generators"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad group spec: {exc}") from exc
    if not gens:
        raise ValueError("group spec has no generators")
    if any(len(g) != degree for g in gens):
        raise ValueError("generator length differs from degree")
    G = FiniteGroup(degree, gens, name=name or spec.get("name", ""), cap=cap)
    sub = spec.get("subgroup")
    if sub is None:
        return G
    if isinstance(sub, dict):
        H = _select_stabilizer_subgroup(G, int(sub["point"]), int(sub["order"]))
    else:
        H = closure([check_perm(h) for h in sub], cap, degree)
        if any(not G.contains(h) for h in H):
            raise ValueError("subgroup generators are not in the group")
    return G.with_subgroup(H)


def _select_stabilizer_subgroup(G: FiniteGroup, v: int, k: int) -> list[Permutation]:
    stab = [g for g in G.elements if g[v] == v]
    if len(stab) % k:
        raise ValueError(f"stabilizer of {v} has order {len(stab)}, not divisible by {k}")
    if k == len(stab):
        return stab
    for g in stab:
        if element_order(g) == k:
            return closure([g], degree=G.degree)
    for i, g in enumerate(stab):
        for h in stab[i + 1:]:
            H = closure([g, h], degree=G.degree)
            if len(H) == k:
                return H
    raise ValueError(f"no subgroup of order {k} found in the stabilizer of {v}")


def group_to_spec(G: FiniteGroup) -> dict:
    out = {"degree": G.degree, "generators": [list(g) for g in G.generators]}
    if G.designated_subgroup is not None:
        out["subgroup"] = [list(h) for h in G.designated_subgroup]
    if G.name:
        out["name"] = G.name
    return out


def load_group(path, cap: int = DEFAULT_GROUP_CAP) -> Construction:
    path = Path(path)
    try:
        spec = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc})") from exc
    G = group_from_spec(spec, cap, name=spec.get("name") or path.stem)
    if G.designated_subgroup is not None and not is_subgroup(G.designated_subgroup):
        raise ValueError("designated subgroup is not closed")
    return Construction(f"file:{path}", "file", {"path": str(path)}, G, fixer_set(G))


def build(family: str, *, n: int | None = None, q: int | None = None, class_selector: int = 1,
          path=None, cap: int = DEFAULT_GROUP_CAP) -> Construction:
    def need(val, flag):
        if val is None:
            raise ValueError(f"family {family!r} needs {flag}")
        return val

    if family == "sym3":
        return build_sym3(need(n, "--n"))
    if family == "psl2z3":
        return build_psl2_z3(need(q, "--q"))
    if family == "psl2char3":
        return build_psl2_char3(need(n, "--n"), class_selector)
    if family == "agl1":
        return build_agl1(need(q, "--q"))
    if family == "erq":
        return build_e_rtimes_q(need(n, "--n"))
    if family == "paley":
        return build_paley(need(q, "--q"))
    if family == "file":
        return load_group(need(path, "--path"), cap)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
