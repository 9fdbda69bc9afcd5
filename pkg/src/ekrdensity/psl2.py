"""PSL(2,q) and AGL(1,q) as concrete permutation groups, plus trace machinery.

Matrices are 4-tuples ``(a, b, c, d)`` of field codes for [[a, b], [c, d]].
Projective points are (1 : y), numbered y = 0..q-1, and (0 : 1), numbered q.
A matrix acts on column vectors, so the permutation of a product is the
composition of the permutations.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .finitefield import GF
from .permgroup import (
    FiniteGroup,
    Permutation,
    closure,
    conjugacy_class,
    element_order,
    inverse,
    is_identity,
)

Matrix = tuple[int, int, int, int]


class PSL2:
    """Matrix arithmetic modulo +-I over GF(q) and the projective-line action."""

    def __init__(self, q: int):
        self.F = GF.of_order(q)
        self.q = q

    # -- matrices ---------------------------------------------------------------
    def canon(self, M: Matrix) -> Matrix:
        """Canonical representative of {M, -M}: first nonzero entry is the smaller of t, -t."""
        F = self.F
        if F.p == 2:
            return tuple(M)
        for t in M:
            if t:
                return tuple(M) if t <= F.neg(t) else self.neg(M)
        raise ValueError("zero matrix")

    def neg(self, M: Matrix) -> Matrix:
        return tuple(self.F.neg(x) for x in M)

    def mul(self, A: Matrix, B: Matrix) -> Matrix:
        F = self.F
        a, b, c, d = A
        e, f, g, h = B
        return (F.add(F.mul(a, e), F.mul(b, g)), F.add(F.mul(a, f), F.mul(b, h)),
                F.add(F.mul(c, e), F.mul(d, g)), F.add(F.mul(c, f), F.mul(d, h)))

    def det(self, M: Matrix) -> int:
        a, b, c, d = M
        return self.F.sub(self.F.mul(a, d), self.F.mul(b, c))

    def inv(self, M: Matrix) -> Matrix:
        a, b, c, d = M
        if self.det(M) != 1:
            raise ValueError("determinant must be 1")
        F = self.F
        return (d, F.neg(b), F.neg(c), a)

    def trace(self, M: Matrix) -> int:
        return self.F.add(M[0], M[3])

    def transpose(self, M: Matrix) -> Matrix:
        a, b, c, d = M
        return (a, c, b, d)

    @property
    def I(self) -> Matrix:
        return (1, 0, 0, 1)

    def is_scalar_identity(self, M: Matrix) -> bool:
        return self.canon(M) == self.canon(self.I)

    def order(self, M: Matrix) -> int:
        k, X = 1, M
        while not self.is_scalar_identity(X):
            X = self.mul(X, M)
            k += 1
        return k

    def matrix(self, a, b, c, d) -> Matrix:
        M = (a, b, c, d)
        if self.det(M) != 1:
            raise ValueError(f"det {self.det(M)} != 1 for {M}")
        return M

    def all_matrices(self) -> list[Matrix]:
        """Canonical representatives of every element of PSL(2,q), in scan order."""
        F = self.F
        out = set()
        for a in range(self.q):
            for b in range(self.q):
                for c in range(self.q):
                    if a:
                        # d = (1 + bc) / a
                        d = F.div(F.add(1, F.mul(b, c)), a)
                        out.add(self.canon((a, b, c, d)))
                    elif b and F.mul(b, c) == F.neg(1):
                        for d in range(self.q):
                            out.add(self.canon((a, b, c, d)))
        return sorted(out)

    # -- projective line ----------------------------------------------------------
    def point(self, x: int, y: int) -> int:
        if x:
            return self.F.div(y, x)
        if not y:
            raise ValueError("(0:0) is not a projective point")
        return self.q

    def point_vector(self, i: int) -> tuple[int, int]:
        return (0, 1) if i == self.q else (1, i)

    def perm(self, M: Matrix) -> Permutation:
        F = self.F
        a, b, c, d = M
        out = []
        for i in range(self.q + 1):
            x, y = self.point_vector(i)
            out.append(self.point(F.add(F.mul(a, x), F.mul(b, y)), F.add(F.mul(c, x), F.mul(d, y))))
        return tuple(out)

    def matrix_of(self, g: Permutation) -> Matrix:
        """Recover the canonical matrix from the images of (1:0), (0:1), (1:1)."""
        F = self.F
        u, w, z = (self.point_vector(g[i]) for i in (0, self.q, 1))
        # alpha*u + beta*w = z
        det_uw = F.sub(F.mul(u[0], w[1]), F.mul(u[1], w[0]))
        alpha = F.div(F.sub(F.mul(z[0], w[1]), F.mul(z[1], w[0])), det_uw)
        beta = F.div(F.sub(F.mul(u[0], z[1]), F.mul(u[1], z[0])), det_uw)
        M = (F.mul(alpha, u[0]), F.mul(beta, w[0]), F.mul(alpha, u[1]), F.mul(beta, w[1]))
        d = self.det(M)
        lam2 = F.inv(d)
        if lam2 not in F.sqrt_table:
            raise ValueError("permutation is not in PSL(2,q)")
        lam = F.sqrt_table[lam2]
        M = tuple(F.mul(lam, x) for x in M)
        if self.perm(M) != tuple(g):
            raise ValueError("permutation is not induced by a matrix")
        return self.canon(M)

    @cached_property
    def generators(self) -> list[Matrix]:
        F = self.F
        w = F.primitive_element
        return [self.canon((w, 0, 0, F.inv(w))), (1, 1, 0, 1), self.canon((0, F.neg(1), 1, 0))]

    @property
    def group_order(self) -> int:
        q = self.q
        return q * (q * q - 1) // (2 if q % 2 else 1)

    # -- special elements ---------------------------------------------------------
    def unipotent(self, x: int) -> Matrix:
        """M_x = [[1, x], [0, 1]]."""
        return (1, x, 0, 1)

    @cached_property
    def cube_root(self) -> int:
        roots = self.F.cube_roots_of_unity()
        if not roots:
            raise ValueError(f"GF({self.q}) has no primitive cube root of unity (q != 1 mod 3)")
        return roots[0]

    def A0(self) -> Matrix:
        r = self.cube_root
        return self.matrix(r, 0, 0, self.F.mul(r, r))

    def A(self, x: int) -> Matrix:
        """A_x = [[-r^2, x], [0, -r]]."""
        F, r = self.F, self.cube_root
        return self.matrix(F.neg(F.mul(r, r)), x, 0, F.neg(r))

    def B(self, x: int) -> Matrix:
        """B_x = [[r/(r-1), -2x], [1/(3x), -1/(r-1)]]."""
        F, r = self.F, self.cube_root
        rm1 = F.sub(r, 1)
        three = F.from_int(3)
        return self.matrix(F.div(r, rm1), F.neg(F.mul(F.from_int(2), x)),
                           F.inv(F.mul(three, x)), F.neg(F.inv(rm1)))


def psl2_group(q: int) -> FiniteGroup:
    """PSL(2,q) acting faithfully on the q+1 points of the projective line."""
    P = PSL2(q)
    gens = tuple(P.perm(M) for M in P.generators)
    G = FiniteGroup(q + 1, gens, name=f"PSL(2,{q})", meta={"psl": P, "q": q, "field": P.F.spec})
    return G


def order3_test_by_trace(P: PSL2, M: Matrix) -> bool:
    """Order 3 in PSL(2,q) iff the trace is 1 or -1 (non-identity M)."""
    if P.is_scalar_identity(M):
        raise ValueError("identity has no order-3 test")
    return P.trace(M) in (1, P.F.neg(1))


@dataclass(frozen=True)
class Order3Class:
    selector: int
    generator: Matrix
    subgroup: tuple[Permutation, ...]
    class_size: int  # size of class(x) u class(x^-1)


def order3_reference(P: PSL2, selector: int = 1) -> Matrix:
    F = P.F
    if F.p == 3:
        if selector == 1:
            return P.unipotent(1)
        if F.spec.e % 2:
            raise ValueError(f"PSL(2,{P.q}) has a single class of order-3 subgroups")
        return P.unipotent(F.first_nonsquare())
    if selector != 1:
        raise ValueError(f"PSL(2,{P.q}) has a single class of order-3 subgroups")
    if P.q % 3 == 1:
        return P.A0()
    return P.canon((0, F.neg(1), 1, F.neg(1)))


def order3_subgroup_classes(q: int, G: FiniteGroup | None = None) -> list[Order3Class]:
    """One <x> per conjugacy class of order-3 subgroups, checked by conjugation orbits."""
    G = G or psl2_group(q)
    P: PSL2 = G.meta["psl"]
    if G.order % 3:
        raise ValueError("3 does not divide |G|")
    n_classes = 2 if (P.F.p == 3 and P.F.spec.e % 2 == 0) else 1
    out = []
    seen: set[Permutation] = set()
    for sel in range(1, n_classes + 1):
        M = order3_reference(P, sel)
        x = P.perm(M)
        if x in seen:
            raise AssertionError("order-3 class representatives are conjugate")
        cls = set(conjugacy_class(G, x)) | set(conjugacy_class(G, inverse(x)))
        seen |= cls
        out.append(Order3Class(sel, M, (G.identity, x, inverse(x)), len(cls)))
    return out


def fixer_set(G: FiniteGroup, H) -> list[Permutation]:
    """class(x) u class(x^-1) for H = <x> of order 3."""
    H = [tuple(h) for h in H]
    if len(set(H)) != 3:
        raise ValueError("H must have order 3")
    x = next(h for h in sorted(H) if not is_identity(h))
    out = dict.fromkeys(conjugacy_class(G, x))
    out.update(dict.fromkeys(conjugacy_class(G, inverse(x))))
    return list(out)


# -- Table of traces Tr(XY) -------------------------------------------------------

@dataclass
class TraceTableReport:
    q: int
    modulus: str
    checked: int = 0
    sampled: bool = False
    b_entries: bool = True
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def trace_table_entries(P: PSL2, x: int, y: int) -> dict[tuple[str, str], tuple[int, int]]:
    """(computed, tabulated) trace for each product X^-1 Y."""
    F = P.F
    two, three = F.from_int(2), F.from_int(3)
    xy = F.mul(x, y)
    Ax, Ay = P.A(x), P.A(y)
    rows = {"A": P.inv(Ax), "AT": P.inv(P.transpose(Ax))}
    cols = {"A": Ay, "AT": P.transpose(Ay)}
    expected = {
        ("A", "A"): two,
        ("A", "AT"): F.sub(two, xy),
        ("AT", "A"): F.sub(two, xy),
        ("AT", "AT"): two,
    }
    if F.p != 2:
        rows["B"] = P.inv(P.B(x))
        cols["B"] = P.B(y)
        x_y, y_x = F.div(x, y), F.div(y, x)
        expected.update({
            ("A", "B"): F.neg(F.div(x, F.mul(three, y))),
            ("AT", "B"): F.mul(two, xy),
            ("B", "A"): F.neg(F.div(y, F.mul(three, x))),
            ("B", "AT"): F.mul(two, xy),
            ("B", "B"): F.mul(F.div(two, three), F.add(F.add(1, x_y), y_x)),
        })
    return {k: (P.trace(P.mul(rows[k[0]], cols[k[1]])), v) for k, v in expected.items()}


def verify_trace_table(q: int, samples: int = 10**4, seed: int = 0) -> TraceTableReport:
    P = PSL2(q)
    if q % 3 != 1:
        raise ValueError(f"q = {q}: no cube root of unity r != 1 (need q = 1 mod 3)")
    F = P.F
    rep = TraceTableReport(q, F.spec.modulus_str(), b_entries=F.p != 2)
    # the closed forms for A_x^-1 and B_x^-1 are checked alongside
    r = P.cube_root
    units = range(1, q)
    if q <= 64:
        pairs = ((x, y) for x in units for y in units)
    else:
        rng = random.Random(seed)
        rep.sampled = True
        pairs = ((rng.randrange(1, q), rng.randrange(1, q)) for _ in range(samples))
    for x, y in pairs:
        for key, (got, want) in trace_table_entries(P, x, y).items():
            rep.checked += 1
            if got != want:
                rep.mismatches.append((x, y, key, got, want))
    for x in units:
        Ainv = (F.neg(r), F.neg(x), 0, F.neg(F.mul(r, r)))
        if P.inv(P.A(x)) != Ainv:
            rep.mismatches.append((x, None, ("A^-1", "closed form"), P.inv(P.A(x)), Ainv))
        if F.p != 2:
            three = F.from_int(3)
            Binv = (F.div(F.add(r, F.from_int(2)), three), F.mul(F.from_int(2), x),
                    F.neg(F.inv(F.mul(three, x))),
                    F.div(F.add(F.mul(F.from_int(2), r), 1), F.mul(three, r)))
            if P.inv(P.B(x)) != Binv:
                rep.mismatches.append((x, None, ("B^-1", "closed form"), P.inv(P.B(x)), Binv))
    return rep


def a0_neighborhood_check(q: int) -> dict:
    """Compare the neighbourhood of A0 among order-3 elements with {A0^-1} u O1 u O1' u O2."""
    P = PSL2(q)
    if q % 3 != 1:
        raise ValueError("need q = 1 (mod 3)")
    F = P.F
    order3 = {M for M in P.all_matrices() if not P.is_scalar_identity(M) and P.order(M) == 3}
    A0 = P.A0()
    A0inv = P.inv(A0)
    nbhd = {M for M in order3 if M != P.canon(A0) and P.canon(P.mul(A0inv, M)) in order3}
    O1 = {P.canon(P.A(x)) for x in range(1, q)}
    O1t = {P.canon(P.transpose(P.A(x))) for x in range(1, q)}
    O2 = {P.canon(P.B(x)) for x in range(1, q)} if F.p != 2 else set()
    predicted = {P.canon(A0inv)} | O1 | O1t | O2
    return {"q": q, "neighborhood": len(nbhd), "predicted": len(predicted),
            "match": nbhd == predicted, "O2_empty": not O2,
            "orbit_sizes": (1, len(O1), len(O1t), len(O2))}


# -- AGL(1,q) ----------------------------------------------------------------------

def agl1_group(q: int) -> FiniteGroup:
    """x -> ax + b on GF(q); designated H = <sigma>, sigma: x -> x + 1."""
    F = GF.of_order(q)
    if F.p == 2 or F.spec.e == 1:
        raise ValueError("AGL(1,q) construction needs q = p^e with p odd and e > 1")
    a = F.primitive_element
    sigma = tuple(F.add(x, 1) for x in range(q))
    tau = tuple(F.mul(a, x) for x in range(q))
    H = tuple(closure([sigma], degree=q))
    return FiniteGroup(q, (sigma, tau), designated_subgroup=H, name=f"AGL(1,{q})",
                       meta={"q": q, "field": F.spec, "sigma": sigma, "tau": tau, "primitive": a})


def two_three_generation(q: int, G: FiniteGroup | None = None):
    """First (involution, order-3 element) pair generating PSL(2,q), or None.

    One class of involutions suffices: every generating pair is conjugate to
    one whose involution is the fixed representative.
    """
    G = G or psl2_group(q)
    els = G.elements
    invol = [g for g in els if element_order(g) == 2]
    if not invol:
        return None
    i = invol[0]
    for t in els:
        if element_order(t) != 3:
            continue
        if FiniteGroup(G.degree, (i, t)).order == G.order:
            return i, t
    return None

