"""Compare a_111 with the computed density on groups whose point stabilizers have order 2."""
from ekrdensity.constructions import alternating, build_e_rtimes_q, dihedral, symmetric
from ekrdensity.density import class_constant_a111, intersection_density
from ekrdensity.permgroup import FiniteGroup, closure, from_cycles, is_identity


def two_block_dihedral(p):
    rot = tuple([(i + 1) % p for i in range(p)] + [p + (i + 1) % p for i in range(p)])
    ref = tuple([(-i) % p for i in range(p)] + [p + (-i) % p for i in range(p)])
    sw = tuple([i + p for i in range(p)] + list(range(p)))
    return FiniteGroup(2 * p, (rot, ref, sw), name=f"D{p} x Z2 on {2 * p}")


def corpus():
    S4, A4 = symmetric(4), alternating(4)
    yield from (dihedral(m) for m in range(3, 13))
    yield from (two_block_dihedral(p) for p in (3, 5, 7, 11, 13))
    yield S4.with_subgroup(closure([from_cycles(4, (0, 1))]), name="S4 on cosets of <(0 1)>")
    yield S4.with_subgroup(closure([from_cycles(4, (0, 1), (2, 3))]), name="S4 on cosets of <(0 1)(2 3)>")
    yield A4.with_subgroup(closure([from_cycles(4, (0, 1), (2, 3))]), name="A4 on cosets of <(0 1)(2 3)>")
    for n in (3, 4, 5):
        yield build_e_rtimes_q(n).group


def main():
    disagree = 0
    print(f"{'group':<36} {'|G|':>6} {'a111':>5} {'rho':>5}")
    for G in corpus():
        g = next(h for h in G.point_subgroup if not is_identity(h))
        a = class_constant_a111(G, g)
        rep = intersection_density(G, strict=False)
        mark = "" if a.ekr == rep.ekr else "  <-- disagreement"
        disagree += a.ekr != rep.ekr
        print(f"{G.name:<36} {G.order:>6} {a.a111:>5} {str(rep.rho):>5}{mark}")
    return 1 if disagree else 0


if __name__ == "__main__":
    raise SystemExit(main())
