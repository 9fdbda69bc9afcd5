"""Arithmetic in GF(p^e) with a deterministic modulus, squares, Paley graphs.

Field elements are encoded as integers ``0 <= x < q``: the coefficient of
``t^i`` in the polynomial representation is the i-th base-p digit of ``x``.
This integer order is the enumeration order used everywhere ("first",
"smallest" element choices refer to it).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in itertools.count(2) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def parse_field_name(name: str) -> tuple[int, int]:
    """Parse "p^e" (or a bare prime power "q") into (p, e)."""
    if "^" in name:
        p_s, e_s = name.split("^", 1)
        p, e = int(p_s), int(e_s)
        if not is_prime(p) or e < 1:
            raise ValueError(f"bad field name {name!r}")
        return p, e
    return prime_power(int(name))


# -- polynomials over GF(p), coefficient lists low degree first ----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, m, p)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(a: list[int], n: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        n >>= 1
    return result


def is_irreducible(poly: list[int], p: int) -> bool:
    """Rabin-style test: no factor of degree k <= deg/2, via gcd with x^(p^k) - x."""
    poly = _trim(list(poly))
    e = len(poly) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(1, e // 2 + 1):
        xp = _poly_powmod(xp, p, poly, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd(poly, _trim(diff), p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e (low degree first)."""
    if e == 1:
        return (0, 1)
    for digits in itertools.product(range(p), repeat=e):
        # product() varies the last digit fastest; reverse so c0 is the slowest
        low = tuple(reversed(digits))
        poly = list(low) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def name(self) -> str:
        return f"{self.p}^{self.e}"

    def modulus_str(self) -> str:
        terms = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if c == 0:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}" if i == 0 else f"{c}*{mono}")
        return " + ".join(terms)


def field_spec(p: int, e: int = 1) -> FieldSpec:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    return FieldSpec(p, e, smallest_irreducible(p, e))


@dataclass(frozen=True, eq=False)
class GF:
    """The field GF(p^e) with precomputed addition/multiplication tables."""

    spec: FieldSpec
    add_table: np.ndarray = field(repr=False)
    mul_table: np.ndarray = field(repr=False)
    neg_table: np.ndarray = field(repr=False)
    inv_table: np.ndarray = field(repr=False)

    @classmethod
    def of_order(cls, q: int) -> "GF":
        p, e = prime_power(q)
        return cls.from_spec(field_spec(p, e))

    @classmethod
    def from_spec(cls, spec: FieldSpec) -> "GF":
        p, e, q = spec.p, spec.e, spec.q
        digits = np.array([[(x // p**i) % p for i in range(e)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(e, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        mod = list(spec.modulus)
        mul = np.zeros((q, q), dtype=np.int64)
        polys = [_trim(list(int(c) for c in row)) for row in digits]
        for x in range(q):
            for y in range(x, q):
                r = _poly_mulmod(polys[x], polys[y], mod, p)
                v = sum(c * p**i for i, c in enumerate(r))
                mul[x, y] = mul[y, x] = v
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.flatnonzero(mul[x] == 1)[0])
        for t in (add, mul, neg, inv):
            t.setflags(write=False)
        return cls(spec, add, mul, neg, inv)

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def p(self) -> int:
        return self.spec.p

    def elements(self) -> range:
        return range(self.q)

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple((x // self.p**i) % self.p for i in range(self.spec.e))

    def from_coeffs(self, coeffs) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(q)."""
        return n % self.p

    # scalar arithmetic
    def add(self, x: int, y: int) -> int:
        return int(self.add_table[x, y])

    def sub(self, x: int, y: int) -> int:
        return int(self.add_table[x, self.neg_table[y]])

    def neg(self, x: int) -> int:
        return int(self.neg_table[x])

    def mul(self, x: int, y: int) -> int:
        return int(self.mul_table[x, y])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return int(self.inv_table[x])

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, n: int) -> int:
        if n < 0:
            x, n = self.inv(x), -n
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            n >>= 1
        return result

    def mult_order(self, x: int) -> int:
        if x == 0:
            raise ValueError("zero has no multiplicative order")
        k, y = 1, x
        while y != 1:
            y = self.mul(y, x)
            k += 1
        return k

    @cached_property
    def primitive_element(self) -> int:
        for x in range(1, self.q):
            if self.mult_order(x) == self.q - 1:
                return x
        raise AssertionError("multiplicative group is cyclic")  # pragma: no cover

    @cached_property
    def square_set(self) -> frozenset[int]:
        return frozenset(int(self.mul_table[x, x]) for x in range(1, self.q))

    def is_square(self, x: int) -> bool:
        return x in self.square_set

    @cached_property
    def sqrt_table(self) -> dict[int, int]:
        """Some square root for each square (0 included)."""
        out: dict[int, int] = {}
        for x in range(self.q):
            out.setdefault(int(self.mul_table[x, x]), x)
        return out

    def first_nonsquare(self) -> int:
        for x in range(1, self.q):
            if x not in self.square_set:
                return x
        raise ValueError(f"GF({self.q}) has no non-squares")

    def cube_roots_of_unity(self) -> list[int]:
        return [x for x in range(2, self.q) if self.pow(x, 3) == 1]


def squares(F: GF) -> frozenset[int]:
    return F.square_set


def paley_graph(q: int):
    """Paley graph on GF(q) in element enumeration order."""
    from .graphcore import BitGraph

    if q % 4 != 1:
        raise ValueError(f"Paley graph needs q = 1 (mod 4), got q = {q}")
    F = GF.of_order(q)
    sq = np.zeros(q, dtype=bool)
    sq[list(F.square_set)] = True
    diff = F.add_table[:, F.neg_table]  # diff[x, y] = x - y
    adj = sq[diff]
    np.fill_diagonal(adj, False)
    return BitGraph.from_matrix(adj)
