"""GF(2^e), the Suzuki-Tits ovoid and the inversive plane it carries.

For odd e = 2m + 1 and q = 2^e let sigma: z -> z^(2^(m+1)), so sigma^2 is
the Frobenius z -> z^2.  The ovoid in PG(3, q) is

    {(1:0:0:0)} u {(xy + x^(sigma+2) + y^sigma : y : x : 1) : x, y in GF(q)}.

Points are numbered: infinity = 0, (x, y) -> 1 + x*q + y, with field elements
read as bit vectors (bit i = coefficient of t^i).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

from .designs import DesignInstance, IsDesign, block_orbit_design
from .permgrp import Perm, PermGroup, perm_check

__all__ = [
    "GF2e",
    "field_make",
    "OvoidPoint",
    "INFINITY",
    "build_ovoid",
    "point_index",
    "projective_coords",
    "SuzukiSelfCheckError",
    "unipotent_perm",
    "torus_perm",
    "involution_perm",
    "frobenius_perm",
    "suzuki_generators",
    "suzuki_group",
    "seed_circle",
    "plane_section",
    "build_inversive_plane",
]


def _pmod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _irreducible(f: int) -> bool:
    deg = f.bit_length() - 1
    if deg < 1:
        return False
    for g in range(2, 1 << (deg // 2 + 1)):
        if g.bit_length() - 1 <= deg // 2 and _pmod(f, g) == 0:
            return False
    return True


class GF2e:
    """GF(2^e) with the lexicographically least irreducible modulus of degree e."""

    def __init__(self, e: int):
        if e < 1:
            raise ValueError("e must be >= 1")
        self.e = e
        self.q = 1 << e
        self.modulus = next(f for f in range(1 << e, 1 << (e + 1)) if _irreducible(f))
        n = self.q - 1
        self.generator = None
        for g in range(1, self.q):
            exp = [0] * n
            x = 1
            for i in range(n):
                exp[i] = x
                x = self._slow_mul(x, g)
            if len(set(exp)) == n:
                self.generator = g
                break
        assert self.generator is not None, "multiplicative group is not cyclic"
        self._exp = exp + exp
        self._log = [0] * self.q
        for i in range(n):
            self._log[exp[i]] = i

    def _slow_mul(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.e & 1:
                a ^= self.modulus
        return r

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n > 0 else 1
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def frob(self, a: int, i: int = 1) -> int:
        """a^(2^i)."""
        return self.pow(a, 1 << i)

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def field_make(e: int) -> GF2e:
    return GF2e(e)


# ---------------------------------------------------------------------------
# the ovoid

INFINITY = None
OvoidPoint = Optional[tuple]  # None for infinity, else (x, y)


def _check_e(e: int) -> None:
    if e < 3 or e % 2 == 0:
        raise ValueError("the Suzuki-Tits ovoid needs odd e >= 3")


def _sigma_exp(e: int) -> int:
    return 1 << ((e + 1) // 2)


def build_ovoid(e: int) -> list[OvoidPoint]:
    _check_e(e)
    q = 1 << e
    return [INFINITY] + [(x, y) for x in range(q) for y in range(q)]


def point_index(pt: OvoidPoint, q: int) -> int:
    return 0 if pt is None else 1 + pt[0] * q + pt[1]


def projective_coords(F: GF2e, pt: OvoidPoint) -> tuple[int, int, int, int]:
    if pt is None:
        return (1, 0, 0, 0)
    x, y = pt
    s = _sigma_exp(F.e)
    z = F.mul(x, y) ^ F.pow(x, s + 2) ^ F.pow(y, s)
    return (z, y, x, 1)


def _normalize(F: GF2e, v):
    for c in v:
        if c:
            ic = F.inv(c)
            return tuple(F.mul(ic, t) for t in v)
    raise ValueError("zero vector")


class SuzukiSelfCheckError(RuntimeError):
    pass


def unipotent_perm(F: GF2e, a: int, b: int) -> Perm:
    """(x, y) -> (x + a, y + b + a^sigma x), fixing infinity."""
    q, s = F.q, _sigma_exp(F.e)
    a_s = F.pow(a, s)
    img = [0]
    for x in range(q):
        for y in range(q):
            img.append(1 + (x ^ a) * q + (y ^ b ^ F.mul(a_s, x)))
    return tuple(img)


def torus_perm(F: GF2e, kappa: int) -> Perm:
    """(x, y) -> (kappa x, kappa^(sigma+1) y), fixing infinity."""
    q, s = F.q, _sigma_exp(F.e)
    k2 = F.pow(kappa, s + 1)
    img = [0]
    for x in range(q):
        for y in range(q):
            img.append(1 + F.mul(kappa, x) * q + F.mul(k2, y))
    return tuple(img)


def involution_perm(F: GF2e) -> Perm:
    """Coordinate reversal (x0:x1:x2:x3) -> (x3:x2:x1:x0); swaps infinity and (0, 0)."""
    q = F.q
    pts = [None] + [(x, y) for x in range(q) for y in range(q)]
    index = {_normalize(F, projective_coords(F, p)): i for i, p in enumerate(pts)}
    img = []
    for p in pts:
        c = projective_coords(F, p)
        key = _normalize(F, c[::-1])
        if key not in index:
            raise SuzukiSelfCheckError("coordinate reversal does not preserve the ovoid")
        img.append(index[key])
    return tuple(img)


def frobenius_perm(F: GF2e) -> Perm:
    """(x, y) -> (x^2, y^2): the field automorphism, of order e."""
    q = F.q
    img = [0]
    for x in range(q):
        for y in range(q):
            img.append(1 + F.mul(x, x) * q + F.mul(y, y))
    return tuple(img)


def suzuki_generators(e: int, with_field_automorphism: bool = False,
                      check: bool = True) -> list[Perm]:
    """Generators of Sz(2^e) (optionally extended by the field automorphism)
    acting on the q^2 + 1 ovoid points.

    With ``check`` the generated group's order and 2-transitivity are verified.
    """
    _check_e(e)
    F = field_make(e)
    q = F.q
    gens = [unipotent_perm(F, 1, 0), torus_perm(F, F.generator), involution_perm(F)]
    gens = [perm_check(g, q * q + 1) for g in gens]
    if check:
        grp = PermGroup(q * q + 1, gens)
        want = q * q * (q * q + 1) * (q - 1)
        if grp.order != want:
            raise SuzukiSelfCheckError(f"generated order {grp.order}, expected {want}")
        alpha = grp.base[0]
        stab = PermGroup(q * q + 1, _stabilizer_gens(grp, alpha))
        if not grp.is_transitive() or len(stab.orbit((alpha + 1) % (q * q + 1))) != q * q:
            raise SuzukiSelfCheckError("action is not 2-transitive")
    if with_field_automorphism:
        gens.append(frobenius_perm(F))
    return gens


def _stabilizer_gens(grp: PermGroup, point: int) -> list[Perm]:
    """Strong generators fixing ``point`` when it is the first base point."""
    ch = grp._chain
    if not ch.base or ch.base[0] != point:
        raise ValueError("point is not the first base point")
    return ch.gens[1] if len(ch.gens) > 1 else []


def suzuki_group(e: int, with_field_automorphism: bool = False) -> PermGroup:
    q = 1 << e
    return PermGroup(q * q + 1, suzuki_generators(e, with_field_automorphism))


# ---------------------------------------------------------------------------
# circles


def _nullspace_vector(F: GF2e, rows: list[list[int]], n: int) -> tuple[int, ...]:
    """A nonzero vector in the (one-dimensional) nullspace of ``rows``."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        ic = F.inv(m[r][c])
        m[r] = [F.mul(ic, t) for t in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [t ^ F.mul(f, u) for t, u in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ValueError("points do not span a plane")
    fc = free[0]
    vec = [0] * n
    vec[fc] = 1
    for i, c in enumerate(pivots):
        vec[c] = m[i][fc]  # characteristic 2: -x = x
    return tuple(vec)


def plane_section(e: int, points: list[int]) -> tuple[int, ...]:
    """Ovoid points on the plane through three given ovoid points (a circle)."""
    F = field_make(e)
    q = F.q
    pts = build_ovoid(e)
    coords = [projective_coords(F, p) for p in pts]
    plane = _nullspace_vector(F, [list(coords[i]) for i in points], 4)
    on = []
    for i, c in enumerate(coords):
        s = 0
        for a, b in zip(plane, c):
            s ^= F.mul(a, b)
        if s == 0:
            on.append(i)
    if len(on) != q + 1:
        raise SuzukiSelfCheckError(f"plane section has {len(on)} points, expected {q + 1}")
    return tuple(on)


def seed_circle(e: int) -> tuple[int, ...]:
    """The circle through infinity, (0, 0) and (1, 1)."""
    q = 1 << e
    return plane_section(e, [0, point_index((0, 0), q), point_index((1, 1), q)])


def build_inversive_plane(e: int, gens: Optional[list[Perm]] = None) -> DesignInstance:
    """The 3-(q^2+1, q+1, 1) design whose blocks are the Sz(q)-images of one circle."""
    _check_e(e)
    q = 1 << e
    v, k = q * q + 1, q + 1
    b = v * (v - 1) * (v - 2) // (k * (k - 1) * (k - 2))
    if gens is None:
        gens = suzuki_generators(e)
    out = block_orbit_design(gens, seed_circle(e), b, degree=v)
    if not isinstance(out, IsDesign):
        raise SuzukiSelfCheckError(f"circle orbit is not a Steiner 3-design: {out}")
    return out.instance
