"""Intersection density, EKR verdicts, density bounds and stabilizer analyses."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .cliquesolver import DEFAULT_ENUM_CAP, enumerate_maximum_cliques, max_clique
from .graphcore import (
    DEFAULT_GRAPH_CAP,
    BitGraph,
    bits,
    complement_derangement_graph,
    fixer_neighborhood_graph,
    fixer_set,
)
from .permgroup import (
    BlockSystem,
    FiniteGroup,
    Permutation,
    coset_action,
    coset_table,
    compose,
    conjugacy_class,
    conjugates_of_subgroup,
    element_order,
    generated_subgroup,
    inverse,
    is_identity,
    is_invariant_partition,
    is_semiregular,
    orbits_of,
    quotient_action,
    subgroup_elements,
    subgroup_shape,
)

UNKNOWN_TRUNCATED = "unknown-truncated"
# direct coset-agreement check is only run below this group order
_DIRECT_CHECK_ORDER = 20000


@dataclass(frozen=True)
class DensityReport:
    group: str
    order: int
    degree: int
    stabilizer_order: int
    omega: int
    rho: Fraction
    witness: tuple[Permutation, ...]
    ekr: bool
    strict_ekr: bool | str
    route: str
    meta: dict = field(default_factory=dict)
    node_count: int = field(default=0, compare=False)
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.omega != self.rho * self.stabilizer_order:
            raise AssertionError("omega != rho * |G_v|")
        if self.rho < 1:
            raise AssertionError("rho < 1 contradicts canonical intersecting sets")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rho"] = str(self.rho)
        d["witness"] = [list(w) for w in self.witness]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "DensityReport":
        d = dict(d)
        d["rho"] = Fraction(d["rho"])
        d["witness"] = tuple(tuple(w) for w in d["witness"])
        return cls(**d)

    CSV_HEADER = "group,order,degree,stabilizer_order,omega,rho_num,rho_den,ekr,strict_ekr"

    def csv_row(self) -> str:
        return ",".join(str(x) for x in (
            self.group, self.order, self.degree, self.stabilizer_order, self.omega,
            self.rho.numerator, self.rho.denominator, self.ekr, self.strict_ekr))


# -- intersecting sets ---------------------------------------------------------------

def _agree_on_coset(G: FiniteGroup, F: Sequence[Permutation]) -> bool:
    """Direct definition: every pair maps some point (coset) to the same place."""
    if G.designated_subgroup is None:
        return all(any(g[v] == h[v] for v in range(G.degree)) for i, g in enumerate(F) for h in F[i + 1:])
    table = coset_table(G, G.point_subgroup)
    imgs = [table.image(g) for g in F]
    return all(any(a == b for a, b in zip(x, y)) for i, x in enumerate(imgs) for y in imgs[i + 1:])


def is_intersecting(G: FiniteGroup, F: Sequence[Permutation], S: set | None = None,
                    cross_check: bool | None = None) -> bool:
    """Every pair g, h of F has g^-1 h fixing a point of the studied action."""
    F = [tuple(f) for f in F]
    for f in F:
        if len(f) != G.degree or not G.contains(f):
            raise ValueError(f"element {f} is not in the group")
    S = set(fixer_set(G)) if S is None else S
    by_fixers = all(is_identity(x) or x in S
                    for i, g in enumerate(F) for h in F[i + 1:]
                    for x in [compose(inverse(g), h)])
    if cross_check is None:
        cross_check = G.order <= _DIRECT_CHECK_ORDER
    if cross_check:
        direct = _agree_on_coset(G, F)
        if direct != by_fixers:
            raise AssertionError("intersecting-set routes disagree")
    return by_fixers


def translate_to_basic(F: Sequence[Permutation]) -> list[Permutation]:
    f0i = inverse(tuple(F[0]))
    return [compose(f0i, tuple(f)) for f in F]


def generates_elementary_abelian_2group(F: Sequence[Permutation], cap: int = 10**5) -> bool:
    shape = subgroup_shape(generated_subgroup(list(F), cap))
    return shape.abelian and shape.exponent <= 2


# -- density ---------------------------------------------------------------------------

def _check_transitive(G: FiniteGroup):
    if G.designated_subgroup is None and not G.is_transitive():
        raise ValueError("group is not transitive")


def _strict_verdict(G: FiniteGroup, graph: BitGraph, S: list[Permutation], omega_graph: int,
                    cap: int) -> bool | str:
    enum = enumerate_maximum_cliques(graph, omega_graph, cap)
    stabilizers = set(conjugates_of_subgroup(G, G.point_subgroup))
    e = G.identity
    for clique in enum.cliques:
        basic = frozenset([e] + [S[i] for i in clique])
        if basic not in stabilizers:
            return False
    return True if enum.exhaustive else UNKNOWN_TRUNCATED


def intersection_density(G: FiniteGroup, route: str = "fixer-neighborhood", *,
                         graph_cap: int = DEFAULT_GRAPH_CAP, enum_cap: int = DEFAULT_ENUM_CAP,
                         threads: int = 1, strict: bool = True, S=None) -> DensityReport:
    """rho(G) = omega / |G_v| by maximum clique search.

    ``route`` is "fixer-neighborhood" (clique in the identity's neighbourhood,
    plus the identity itself) or "explicit-graph" (clique in the whole
    complement of the derangement graph).
    """
    _check_transitive(G)
    H = G.point_subgroup
    stab = len(H)
    order = G.order
    if order % stab:
        raise AssertionError("|H| does not divide |G|")
    degree = order // stab
    if G.designated_subgroup is None and degree != G.degree:
        raise AssertionError("orbit-stabilizer mismatch")
    S = fixer_set(G) if S is None else [tuple(s) for s in S]
    e = G.identity

    if route == "fixer-neighborhood":
        if len(S) > graph_cap:
            raise ValueError(f"fixer set of size {len(S)} exceeds the graph cap {graph_cap}")
        graph = fixer_neighborhood_graph(G, S)
        res = max_clique(graph, lower_hint=stab - 1, threads=threads)
        omega = res.omega + 1
        witness = [e] + [S[i] for i in res.witness]
    elif route == "explicit-graph":
        graph = complement_derangement_graph(G, graph_cap, S)
        res = max_clique(graph, lower_hint=stab, threads=threads)
        omega = res.omega
        witness = translate_to_basic([G.elements[i] for i in res.witness])
        witness = [e] + sorted(w for w in witness if not is_identity(w))
    else:
        raise ValueError(f"unknown route {route!r}")

    if not is_intersecting(G, witness, set(S)):
        raise AssertionError("witness is not intersecting")
    rho = Fraction(omega, stab)
    ekr = rho == 1
    if not strict:
        strict_ekr = UNKNOWN_TRUNCATED if ekr else False
    elif not ekr:
        strict_ekr = False
    elif route == "fixer-neighborhood":
        strict_ekr = _strict_verdict(G, graph, S, omega - 1, enum_cap)
    else:
        strict_ekr = _strict_verdict(G, fixer_neighborhood_graph(G, S), S, omega - 1, enum_cap)

    return DensityReport(
        group=G.name or "group", order=order, degree=degree, stabilizer_order=stab,
        omega=omega, rho=rho, witness=tuple(witness), ekr=ekr, strict_ekr=strict_ekr,
        route=route, meta=_json_meta(G.meta), node_count=res.node_count, elapsed=res.elapsed)


def _json_meta(meta: dict) -> dict:
    out = {}
    for k, v in meta.items():
        if isinstance(v, (int, str, bool, float)) or v is None:
            out[k] = v
        elif hasattr(v, "modulus_str"):
            out[k] = f"GF({v.name}) mod {v.modulus_str()}"
    return out


# -- upper bounds --------------------------------------------------------------------------

def natural_action(G: FiniteGroup) -> FiniteGroup:
    """The studied action as a permutation group on points."""
    if G.designated_subgroup is None:
        return G
    A = coset_action(G, G.designated_subgroup)
    return FiniteGroup(A.degree, A.generators, name=G.name, cap=G.cap, kernel_order=A.kernel_order)


def semiregular_upper_bound(G: FiniteGroup, K, rho: Fraction | None = None) -> Fraction:
    """rho(G) <= number of orbits of a semiregular subgroup K."""
    K = subgroup_elements(G, K)
    flag, k = is_semiregular(G, K)
    if not flag:
        raise ValueError("K is not semiregular")
    if rho is not None and rho > k:
        raise AssertionError(f"rho = {rho} exceeds the semiregular bound {k}")
    return Fraction(k)


def quotient_upper_bound(G: FiniteGroup, B: BlockSystem, K, rho: Fraction | None = None,
                         **kw) -> Fraction:
    """rho(G) <= rho(image of G on B) when B is the orbit partition of a semiregular K."""
    if not is_invariant_partition(G, B):
        raise ValueError("partition is not G-invariant")
    K = subgroup_elements(G, K)
    flag, _ = is_semiregular(G, K)
    if not flag:
        raise ValueError("K is not semiregular")
    if sorted(map(sorted, orbits_of(K, G.degree))) != sorted(map(sorted, B.partition)):
        raise ValueError("blocks are not the orbits of K")
    Gbar = quotient_action(G, B)
    bound = intersection_density(Gbar, strict=False, **kw).rho
    if rho is not None and rho > bound:
        raise AssertionError(f"rho = {rho} exceeds the quotient bound {bound}")
    return bound


# -- order-2 stabilizers -------------------------------------------------------------------

@dataclass(frozen=True)
class A111Result:
    a111: int
    class_size: int
    ekr: bool


def _require_fixer(G: FiniteGroup, g: Permutation, stab_order: int):
    H = G.point_subgroup
    if len(H) != stab_order:
        raise ValueError(f"point stabilizer has order {len(H)}, need {stab_order}")
    h = next(x for x in H if not is_identity(x))
    C = conjugacy_class(G, h)
    if tuple(g) not in set(C):
        raise ValueError("g is not a non-identity point fixer")
    return C


def class_constant_a111(G: FiniteGroup, g: Permutation) -> A111Result:
    """a_111 = #{(x, y) in C x C : xy = g} for C the class of the fixer g."""
    g = tuple(g)
    _require_fixer(G, g, 2)
    C = conjugacy_class(G, g)
    Cset = set(C)
    count = sum(1 for x in C if compose(inverse(x), g) in Cset)
    return A111Result(count, len(C), count == 0)


@dataclass(frozen=True)
class CharSumResult:
    value: complex
    ekr: bool
    a111_from_characters: float
    a111_counted: int | None = None


def parse_character_table(table: dict) -> tuple[list[dict], list[list[complex]]]:
    try:
        classes = [{"size": int(c["size"]), "rep_order": int(c["rep_order"])} for c in table["classes"]]
        chars = [[complex(float(v[0]), float(v[1])) for v in row] for row in table["chars"]]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed character table: {exc}") from exc
    if len(chars) != len(classes):
        raise ValueError(f"{len(chars)} characters for {len(classes)} classes")
    if any(len(row) != len(classes) for row in chars):
        raise ValueError("character rows must have one value per class")
    return classes, chars


def character_sum_check(G: FiniteGroup, g: Permutation, table: dict, tol: float = 1e-6) -> CharSumResult:
    """sum over irreducibles of chi(g)^3 / chi(1), compared with the counted a_111."""
    g = tuple(g)
    classes, chars = parse_character_table(table)
    C = _require_fixer(G, g, 2)
    if "fixer_class" in table:
        k = int(table["fixer_class"])
    else:
        matches = [i for i, c in enumerate(classes)
                   if c["size"] == len(C) and c["rep_order"] == element_order(g)]
        if len(matches) != 1:
            raise ValueError("cannot identify the class of g in the table; give 'fixer_class'")
        k = matches[0]
    one = [i for i, c in enumerate(classes) if c["rep_order"] == 1]
    if len(one) != 1:
        raise ValueError("table needs exactly one identity class")
    i1 = one[0]
    total = sum(row[k] ** 3 / row[i1] for row in chars)
    eq1 = sum(row[k] * row[k] * row[k].conjugate() / row[i1] for row in chars)
    a111_chars = (classes[k]["size"] ** 2 / G.order * eq1).real
    counted = class_constant_a111(G, g).a111
    if abs(a111_chars - counted) > 1e-6 * max(1, counted):
        raise AssertionError(f"character formula gives a_111 = {a111_chars}, counting gives {counted}")
    return CharSumResult(total, abs(total) < tol, a111_chars, counted)


# -- order-3 stabilizers -------------------------------------------------------------------

@dataclass
class ExtensionReport:
    stabilizer: tuple[Permutation, ...]
    extenders: int
    max_extension_size: int | None
    shapes: Counter
    hk_closures_ok: bool
    size4_sets_checked: int
    size4_distinct_stabilizers: bool
    omega: int


def stabilizer_extension_analysis(G: FiniteGroup, S=None, graph: BitGraph | None = None,
                                  enum_cap: int = DEFAULT_ENUM_CAP) -> ExtensionReport:
    H = list(G.point_subgroup)
    if len(H) != 3:
        raise ValueError(f"stabilizer order is {len(H)}, need 3")
    S = fixer_set(G) if S is None else [tuple(s) for s in S]
    graph = graph or fixer_neighborhood_graph(G, S)
    pos = {s: i for i, s in enumerate(S)}
    x = next(h for h in sorted(H) if not is_identity(h))
    x2 = compose(x, x)
    common = graph.rows[pos[x]] & graph.rows[pos[x2]]
    ext = list(bits(common))
    Sset = set(S)

    shapes: Counter = Counter()
    hk_ok = True
    for i in ext:
        y = S[i]
        K = [G.identity, y, compose(y, y)]
        HK = {compose(h, k) for h in H for k in K}
        if len(HK) < 9 or not is_intersecting(G, list(HK), Sset, cross_check=False):
            hk_ok = False
        sh = subgroup_shape(generated_subgroup([x, y], cap=10**4))
        shapes[(sh.order, sh.exponent, sh.abelian)] += 1
    max_ext = None
    if ext:
        sub = graph.induced(ext)
        max_ext = 3 + max_clique(sub).omega

    res = max_clique(graph, lower_hint=2)
    checked, distinct = 0, True
    if res.omega == 3:
        for clique in enumerate_maximum_cliques(graph, 3, enum_cap).cliques:
            checked += 1
            els = [S[i] for i in clique]
            for a in range(3):
                for b in range(a + 1, 3):
                    if els[b] == inverse(els[a]):
                        distinct = False
    return ExtensionReport(tuple(H), len(ext), max_ext, shapes, hk_ok, checked, distinct, res.omega + 1)


def lies_in_p_subgroup(F: Sequence[Permutation], p: int, cap: int = 10**5) -> bool:
    """True when <F> is a p-group, i.e. F sits inside some Sylow p-subgroup."""
    n = len(generated_subgroup(list(F), cap))
    while n % p == 0:
        n //= p
    return n == 1
