import itertools
import json
import random
from fractions import Fraction

import pytest

from ekrdensity.constructions import (
    alternating,
    build_agl1,
    build_e_rtimes_q,
    build_psl2_char3,
    build_sym3,
    cyclic,
    dihedral,
    symmetric,
)
from ekrdensity.density import (
    UNKNOWN_TRUNCATED,
    DensityReport,
    character_sum_check,
    class_constant_a111,
    generates_elementary_abelian_2group,
    intersection_density,
    is_intersecting,
    natural_action,
    quotient_upper_bound,
    semiregular_upper_bound,
    stabilizer_extension_analysis,
    translate_to_basic,
)
from ekrdensity.graphcore import fixer_set
from ekrdensity.permgroup import (
    BlockSystem,
    FiniteGroup,
    closure,
    compose,
    coset_table,
    element_order,
    from_cycles,
    inverse,
    is_identity,
    orbits_of,
)
from ekrdensity.psl2 import agl1_group, psl2_group


def dp_z2(p):
    """D_p acting on two copies of Z_p, with the copies swapped: degree 2p, two blocks."""
    rot = tuple([(i + 1) % p for i in range(p)] + [p + (i + 1) % p for i in range(p)])
    ref = tuple([(-i) % p for i in range(p)] + [p + (-i) % p for i in range(p)])
    sw = tuple([i + p for i in range(p)] + list(range(p)))
    return FiniteGroup(2 * p, (rot, ref, sw), name=f"D{p}xZ2")


def order2_corpus():
    S4, A4 = symmetric(4), alternating(4)
    G7 = psl2_group(7)
    inv = next(g for g in G7.elements if element_order(g) == 2)
    return ([dihedral(m) for m in (3, 4, 5, 6, 7, 8)] + [dp_z2(p) for p in (3, 5, 7)] + [
        S4.with_subgroup(closure([from_cycles(4, (0, 1))]), name="S4/<(01)>"),
        S4.with_subgroup(closure([from_cycles(4, (0, 1), (2, 3))]), name="S4/<(01)(23)>"),
        A4.with_subgroup(closure([from_cycles(4, (0, 1), (2, 3))]), name="A4/<(01)(23)>"),
        build_e_rtimes_q(3).group,
        build_e_rtimes_q(4).group,
        G7.with_subgroup(closure([inv]), name="PSL(2,7)/Z2"),
    ])


def brute_max_intersecting(G):
    """Largest intersecting set by exhaustive search over basic sets (tiny groups only)."""
    S = [g for g in G.elements if not is_identity(g) and any(a == b for a, b in zip(g, G.identity))]
    best = 1
    for k in range(1, len(S) + 1):
        if any(is_intersecting(G, [G.identity, *c], cross_check=False) for c in itertools.combinations(S, k)):
            best = k + 1
        else:
            break
    return best


# -- intersection density ------------------------------------------------------------

@pytest.mark.parametrize("G", [symmetric(3), symmetric(4), dihedral(5), dihedral(6), alternating(4), cyclic(5)],
                         ids=["S3", "S4", "D5", "D6", "A4", "C5"])
def test_density_against_brute_force(G):
    rep = intersection_density(G)
    assert rep.omega == brute_max_intersecting(G)


@pytest.mark.parametrize("G", [symmetric(4), dihedral(6), build_sym3(5).group, build_agl1(9).group],
                         ids=["S4", "D6", "sym3-5", "agl1-9"])
def test_routes_agree(G):
    a = intersection_density(G, route="fixer-neighborhood")
    b = intersection_density(G, route="explicit-graph")
    assert a.omega == b.omega and a.rho == b.rho
    assert a.strict_ekr == b.strict_ekr


def test_unknown_route():
    with pytest.raises(ValueError):
        intersection_density(symmetric(3), route="magic")


def test_intransitive_rejected():
    with pytest.raises(ValueError):
        intersection_density(FiniteGroup(4, (from_cycles(4, (0, 1)),)))


def test_strict_ekr_verdicts():
    assert intersection_density(dihedral(5)).strict_ekr is True
    assert intersection_density(dihedral(6)).strict_ekr is True
    # S4 on 4 points is EKR; maximum sets are stabilizer cosets
    assert intersection_density(symmetric(4)).strict_ekr is True
    assert intersection_density(build_sym3(4).group).strict_ekr is False


def test_strict_ekr_truncation():
    rep = intersection_density(symmetric(4), enum_cap=1)
    assert rep.strict_ekr == UNKNOWN_TRUNCATED


def test_witness_is_intersecting_and_translates():
    rep = intersection_density(build_sym3(6).group)
    G = build_sym3(6).group
    W = list(rep.witness)
    assert is_intersecting(G, W)
    for f in W:
        assert is_intersecting(G, [compose(inverse(f), w) for w in W])


def test_is_intersecting_rejects_nonmember():
    G = FiniteGroup(4, (from_cycles(4, (0, 1, 2, 3)),))
    with pytest.raises(ValueError):
        is_intersecting(G, [G.identity, from_cycles(4, (0, 1))])


def test_translate_to_basic():
    G = symmetric(4)
    F = [g for g in G.elements if g[0] == 1]
    B = translate_to_basic(F)
    assert G.identity in B and len(B) == len(F)


def test_report_json_roundtrip():
    rep = intersection_density(build_sym3(5).group)
    back = DensityReport.from_dict(json.loads(rep.to_json()))
    assert back == rep
    assert back.rho == Fraction(4, 3)
    cells = rep.csv_row().split(",")
    assert cells[-4:-2] == ["4", "3"]


def test_report_invariant():
    with pytest.raises(AssertionError):
        DensityReport("x", 6, 3, 2, 3, Fraction(1), (), True, True, "fixer-neighborhood", {})


# -- bounds ----------------------------------------------------------------------------------

def test_semiregular_bound_regular():
    G = dihedral(5)
    K = closure([G.generators[0]])
    assert semiregular_upper_bound(G, K, intersection_density(G).rho) == 1


def test_semiregular_bound_multiplications_agl19():
    # <x -> ax> has order 8 and meets no conjugate of <x+1>: 24 / 8 = 3 orbits, tight against rho
    c = build_agl1(9)
    A = natural_action(c.group)
    assert A.degree == 24
    table = coset_table(c.group, c.group.designated_subgroup)
    T = [table.image(t) for t in closure([c.group.meta["tau"]])]
    assert len(T) == 8
    rho = intersection_density(c.group).rho
    assert semiregular_upper_bound(A, T, rho) == len(orbits_of(T, 24)) == 3
    assert rho == 3


def test_semiregular_bound_identity_is_vacuous():
    G = dihedral(7)
    assert semiregular_upper_bound(G, [G.identity]) == 7


def test_semiregular_bound_rejects():
    G = symmetric(4)
    with pytest.raises(ValueError):
        semiregular_upper_bound(G, closure([from_cycles(4, (0, 1))]))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_two_block_quotient(p):
    G = dp_z2(p)
    K = closure([G.generators[0]])
    B = BlockSystem((tuple(range(p)), tuple(range(p, 2 * p))))
    rho = intersection_density(G).rho
    assert quotient_upper_bound(G, B, K, rho) == 1
    assert rho == 1


def test_singleton_blocks_give_rho():
    G = dihedral(5)
    B = BlockSystem(tuple((v,) for v in range(5)))
    assert quotient_upper_bound(G, B, [G.identity]) == intersection_density(G).rho


def test_quotient_rejects_non_orbit_blocks():
    G = dp_z2(5)
    K = closure([G.generators[0]])
    with pytest.raises(ValueError):
        quotient_upper_bound(G, BlockSystem(tuple((v, v + 5) for v in range(5))), K)


PRIME_POWER = [
    symmetric(4),
    dihedral(4),
    cyclic(8),
    alternating(4),
    dihedral(8),
    FiniteGroup(8, tuple(psl2_group(7).generators), name="PSL(2,7) on 8"),
    FiniteGroup(9, tuple(psl2_group(8).generators), name="PSL(2,8) on 9"),
    FiniteGroup(9, agl1_group(9).generators, name="AGL(1,9) on 9"),
    FiniteGroup(5, symmetric(5).generators, name="S5"),
]


@pytest.mark.parametrize("G", PRIME_POWER, ids=lambda G: G.name)
def test_prime_power_degree_is_ekr(G):
    assert intersection_density(G).rho == 1


# -- order-2 stabilizers ---------------------------------------------------------------------

@pytest.mark.parametrize("G", order2_corpus(), ids=lambda G: G.name)
def test_a111_criterion(G):
    assert len(G.point_subgroup) == 2
    rep = intersection_density(G)
    g = next(h for h in G.point_subgroup if not is_identity(h))
    res = class_constant_a111(G, g)
    assert res.ekr == rep.ekr
    assert generates_elementary_abelian_2group(rep.witness)


@pytest.mark.parametrize("G", order2_corpus()[:12], ids=lambda G: G.name)
def test_no_maximal_intersecting_triple(G):
    S = fixer_set(G)
    for x, y in itertools.combinations(S, 2):
        if is_intersecting(G, [G.identity, x, y], cross_check=False):
            assert is_intersecting(G, [G.identity, x, y, compose(x, y)], cross_check=False)


def test_a111_known_values():
    assert class_constant_a111(dihedral(7), from_cycles(7, (1, 6), (2, 5), (3, 4))).a111 == 0
    c = build_e_rtimes_q(3)
    assert class_constant_a111(c.group, c.meta["basis"][0]).a111 > 0


def test_a111_requires_order2():
    G = build_sym3(4).group
    with pytest.raises(ValueError):
        class_constant_a111(G, from_cycles(4, (0, 1, 2)))


S3_TABLE = {
    "classes": [{"size": 1, "rep_order": 1}, {"size": 3, "rep_order": 2}, {"size": 2, "rep_order": 3}],
    "chars": [[[1, 0], [1, 0], [1, 0]], [[1, 0], [-1, 0], [1, 0]], [[2, 0], [0, 0], [-1, 0]]],
}


def test_character_sum_s3():
    G = symmetric(3)
    res = character_sum_check(G, from_cycles(3, (1, 2)), S3_TABLE)
    assert abs(res.value) < 1e-12 and res.ekr
    assert res.a111_counted == 0


def test_character_table_errors():
    G = symmetric(3)
    bad = {"classes": S3_TABLE["classes"], "chars": S3_TABLE["chars"][:2]}
    with pytest.raises(ValueError):
        character_sum_check(G, from_cycles(3, (1, 2)), bad)
    with pytest.raises(ValueError):
        character_sum_check(G, from_cycles(3, (1, 2)), {"classes": [{"size": 1}]})


def test_character_sum_d4():
    # D4 on 4 points, reflection through a vertex; textbook character table of D4
    G = dihedral(4)
    g = from_cycles(4, (1, 3))
    table = {
        "classes": [{"size": 1, "rep_order": 1}, {"size": 1, "rep_order": 2}, {"size": 2, "rep_order": 4},
                    {"size": 2, "rep_order": 2}, {"size": 2, "rep_order": 2}],
        "chars": [[[1, 0]] * 5,
                  [[1, 0], [1, 0], [1, 0], [-1, 0], [-1, 0]],
                  [[1, 0], [1, 0], [-1, 0], [1, 0], [-1, 0]],
                  [[1, 0], [1, 0], [-1, 0], [-1, 0], [1, 0]],
                  [[2, 0], [-2, 0], [0, 0], [0, 0], [0, 0]]],
        "fixer_class": 3,
    }
    res = character_sum_check(G, g, table)
    assert res.ekr and res.a111_counted == 0


# -- order-3 stabilizers ---------------------------------------------------------------------

def test_extension_psl27(psl7):
    rep = stabilizer_extension_analysis(psl7.group, psl7.fixers)
    assert rep.extenders == 0 and rep.max_extension_size is None
    assert rep.omega == 4
    assert rep.size4_sets_checked > 0 and rep.size4_distinct_stabilizers


def test_extension_psl2_27():
    c = build_psl2_char3(3)
    rep = stabilizer_extension_analysis(c.group, c.fixers, c.fixer_graph())
    assert rep.extenders > 0
    assert rep.hk_closures_ok
    assert set(rep.shapes) == {(9, 3, True)}
    assert rep.max_extension_size >= 9


def test_hk_closure_random_pairs():
    """H u K intersecting implies HK intersecting, on random subgroup pairs."""
    rng = random.Random(7)
    cases = [build_psl2_char3(3), build_sym3(5), build_sym3(6), build_e_rtimes_q(3), build_agl1(9)]
    qualifying = 0
    for c in cases:
        G = c.group
        S = c.fixers
        Sset = set(S)
        H0 = list(G.point_subgroup)
        for _ in range(400):
            g = rng.choice(G.elements)
            H = closure([compose(compose(g, h), inverse(g)) for h in H0])
            y = rng.choice(S)
            # bias towards pairs that satisfy the hypothesis
            if rng.random() < 0.5:
                x = next(h for h in H if not is_identity(h))
                cand = [s for s in S if compose(inverse(x), s) in Sset]
                if cand:
                    y = rng.choice(cand)
            K = closure([y])
            if not is_intersecting(G, list(set(H) | set(K)), Sset, cross_check=False):
                continue
            HK = {compose(h, k) for h in H for k in K}
            assert is_intersecting(G, list(HK), Sset, cross_check=False)
            qualifying += 1
    assert qualifying >= 100
