"""Small permutation groups: orbits, Schreier-Sims, enumeration, stabilizers.

A permutation of degree n is a tuple ``g`` of length n with ``g[i]`` the image
of point i.  Products read left to right: ``perm_mul(a, b)`` applies a first,
then b.
"""

from __future__ import annotations

import math
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

__all__ = [
    "Perm",
    "PermGroup",
    "DEGREE_CAP",
    "ENUMERATION_CAP",
    "EnumerationCapExceeded",
    "GroupFormatError",
    "perm_identity",
    "perm_check",
    "perm_mul",
    "perm_inv",
    "perm_pow",
    "perm_order",
    "perm_from_cycles",
    "perm_cycles",
    "perm_fixed_points",
    "orbit",
    "orbits",
    "group_order",
    "enumerate_elements",
    "setwise_stabilizer",
    "Classification",
    "classify_quasi_semiregular",
    "Claim",
    "lemma_order3_conclusions",
    "read_group",
    "write_group",
    "format_group",
    "parse_group",
]

Perm = tuple  # tuple[int, ...]

DEGREE_CAP = 10**4
ENUMERATION_CAP = 10**7


class EnumerationCapExceeded(RuntimeError):
    def __init__(self, order: int, cap: int):
        super().__init__(f"group of order {order} exceeds the enumeration cap {cap}")
        self.order = order
        self.cap = cap


class GroupFormatError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


# ---------------------------------------------------------------------------
# single permutations


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def perm_check(images: Sequence[int], n: Optional[int] = None) -> Perm:
    """Validate a bijection on {0..n-1} and return it as a tuple."""
    g = tuple(int(x) for x in images)
    if n is not None and len(g) != n:
        raise ValueError(f"permutation has length {len(g)}, expected {n}")
    if sorted(g) != list(range(len(g))):
        raise ValueError("images are not a bijection on 0..n-1")
    return g


def perm_mul(a: Perm, b: Perm) -> Perm:
    """a then b."""
    return tuple(map(b.__getitem__, a))


def perm_inv(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def perm_pow(a: Perm, k: int) -> Perm:
    if k < 0:
        a, k = perm_inv(a), -k
    result = perm_identity(len(a))
    while k:
        if k & 1:
            result = perm_mul(result, a)
        a = perm_mul(a, a)
        k >>= 1
    return result


def perm_cycles(a: Perm) -> list[tuple[int, ...]]:
    """Nontrivial cycles, each starting at its least point."""
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = a[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = a[j]
        if len(cyc) > 1:
            out.append(tuple(cyc))
    return out


def perm_order(a: Perm) -> int:
    return math.lcm(1, *(len(c) for c in perm_cycles(a)))


def perm_fixed_points(a: Perm) -> list[int]:
    return [i for i, x in enumerate(a) if i == x]


def perm_from_cycles(n: int, *cycles: Sequence[int]) -> Perm:
    g = list(range(n))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            g[x] = cyc[(i + 1) % len(cyc)]
    return perm_check(g, n)


# ---------------------------------------------------------------------------
# groups


class _Chain:
    """Base, strong generators per level, and transversals (point -> coset rep)."""

    def __init__(self, n: int):
        self.n = n
        self.base: list[int] = []
        self.gens: list[list[Perm]] = []
        self.trans: list[dict[int, Perm]] = []

    def _transversal(self, i: int) -> None:
        b = self.base[i]
        t = {b: perm_identity(self.n)}
        frontier = [b]
        while frontier:
            nxt = []
            for pt in frontier:
                u = t[pt]
                for s in self.gens[i]:
                    im = s[pt]
                    if im not in t:
                        t[im] = perm_mul(u, s)
                        nxt.append(im)
            frontier = nxt
        self.trans[i] = t

    def strip(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self.base)):
            pt = g[self.base[i]]
            u = self.trans[i].get(pt)
            if u is None:
                return g, i
            g = perm_mul(g, perm_inv(u))
        return g, len(self.base)

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)


def _schreier_sims(n: int, gens: Sequence[Perm]) -> _Chain:
    """Deterministic Schreier-Sims.

    Base points are the first moved points in natural order.  Every Schreier
    generator at every level is sifted, so the result is a verified base and
    strong generating set.
    """
    ident = perm_identity(n)
    ch = _Chain(n)
    gens = [g for g in gens if g != ident]
    for g in gens:
        if all(g[b] == b for b in ch.base):
            ch.base.append(next(i for i in range(n) if g[i] != i))
    k = len(ch.base)
    ch.gens = [[g for g in gens if all(g[b] == b for b in ch.base[:i])] for i in range(k)]
    ch.trans = [{} for _ in range(k)]
    for i in range(k):
        ch._transversal(i)
    i = k - 1
    while i >= 0:
        restart = False
        t = ch.trans[i]
        for pt, u in list(t.items()):
            for s in ch.gens[i]:
                h = perm_mul(perm_mul(u, s), perm_inv(t[s[pt]]))
                if h == ident:
                    continue
                res, j = ch.strip(h, i + 1)
                if res == ident:
                    continue
                if j == len(ch.base):
                    ch.base.append(next(x for x in range(n) if res[x] != x))
                    ch.gens.append([])
                    ch.trans.append({})
                for level in range(i + 1, j + 1):
                    ch.gens[level].append(res)
                    ch._transversal(level)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return ch


class PermGroup:
    """A permutation group given by generators; order and orbits cached on first use."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = ()):
        if degree < 1 or degree > DEGREE_CAP:
            raise ValueError(f"degree must be in 1..{DEGREE_CAP}")
        self.degree = degree
        self.generators: tuple[Perm, ...] = tuple(perm_check(g, degree) for g in generators)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @cached_property
    def _chain(self) -> _Chain:
        return _schreier_sims(self.degree, self.generators)

    @cached_property
    def order(self) -> int:
        return self._chain.order()

    @property
    def base(self) -> list[int]:
        return list(self._chain.base)

    def contains(self, g: Perm) -> bool:
        res, _ = self._chain.strip(perm_check(g, self.degree))
        return res == perm_identity(self.degree)

    __contains__ = contains

    def orbit(self, point: int) -> set[int]:
        return orbit(self.generators, point, self.degree)

    @cached_property
    def orbits(self) -> list[list[int]]:
        return orbits(self.generators, self.degree)

    def is_transitive(self) -> bool:
        return len(self.orbits) == 1

    def elements(self, cap: int = ENUMERATION_CAP) -> Iterator[Perm]:
        """Every element exactly once, generated from the stabilizer chain."""
        if self.order > cap:
            raise EnumerationCapExceeded(self.order, cap)
        ch = self._chain
        levels = [list(t.values()) for t in ch.trans]

        def rec(i: int, prefix: Perm) -> Iterator[Perm]:
            # g = h u_i with h in the stabilizer of base[:i+1]
            if i < 0:
                yield prefix
                return
            for u in levels[i]:
                yield from rec(i - 1, perm_mul(prefix, u))

        yield from rec(len(levels) - 1, perm_identity(self.degree))


GroupLike = Union[PermGroup, Sequence[Perm]]


def _as_group(g: GroupLike, degree: Optional[int] = None) -> PermGroup:
    if isinstance(g, PermGroup):
        return g
    gens = list(g)
    if degree is None:
        if not gens:
            raise ValueError("degree is required for an empty generator list")
        degree = len(gens[0])
    return PermGroup(degree, gens)


def orbit(gens: GroupLike, point: int, degree: Optional[int] = None) -> set[int]:
    if isinstance(gens, PermGroup):
        degree, gens = gens.degree, gens.generators
    gens = list(gens)
    n = degree if degree is not None else (len(gens[0]) if gens else point + 1)
    if not 0 <= point < n:
        raise ValueError(f"point {point} out of range 0..{n - 1}")
    seen = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def orbits(gens: GroupLike, degree: Optional[int] = None) -> list[list[int]]:
    """Orbit partition, each orbit sorted, orbits ordered by least point."""
    grp = _as_group(gens, degree)
    done = [False] * grp.degree
    out = []
    for i in range(grp.degree):
        if not done[i]:
            orb = sorted(orbit(grp.generators, i, grp.degree))
            for x in orb:
                done[x] = True
            out.append(orb)
    return out


def group_order(gens: GroupLike, degree: Optional[int] = None) -> int:
    return _as_group(gens, degree).order


def enumerate_elements(gens: GroupLike, cap: int = ENUMERATION_CAP,
                       degree: Optional[int] = None) -> list[Perm]:
    return list(_as_group(gens, degree).elements(cap))


def setwise_stabilizer(gens: GroupLike, block: Iterable[int], degree: Optional[int] = None,
                       cap: int = ENUMERATION_CAP) -> PermGroup:
    """{g : block^g = block}, by filtering the enumerated elements.

    The returned group is generated by every stabilizing element; its order is
    therefore the number of such elements.
    """
    grp = _as_group(gens, degree)
    blk = frozenset(block)
    if any(not 0 <= x < grp.degree for x in blk):
        raise ValueError("block point out of range")
    ident = perm_identity(grp.degree)
    keep = [g for g in grp.elements(cap) if g != ident and all(g[x] in blk for x in blk)]
    return PermGroup(grp.degree, _prune_generators(grp.degree, keep))


def _prune_generators(n: int, elements: list[Perm]) -> list[Perm]:
    """A generating subset of ``elements`` (greedy: keep g when it enlarges the group)."""
    gens: list[Perm] = []
    cur = PermGroup(n, gens)
    for g in elements:
        if cur.contains(g):
            continue
        gens.append(g)
        cur = PermGroup(n, gens)
        if cur.order == len(elements) + 1:
            break
    return gens


# ---------------------------------------------------------------------------
# semiregularity and the order-t conclusions


class Classification(NamedTuple):
    kind: str  # "semiregular" | "quasi_semiregular" | "neither"
    fixed_point: Optional[int] = None


def classify_quasi_semiregular(gens_h: GroupLike, degree: Optional[int] = None,
                               cap: int = ENUMERATION_CAP) -> Classification:
    grp = _as_group(gens_h, degree)
    ident = perm_identity(grp.degree)
    elems = [g for g in grp.elements(cap) if g != ident]
    if not elems:
        raise ValueError("classification needs a nontrivial group")
    fixed = {frozenset(perm_fixed_points(g)) for g in elems}
    if fixed == {frozenset()}:
        return Classification("semiregular")
    if len(fixed) == 1:
        (fx,) = fixed
        if len(fx) == 1:
            return Classification("quasi_semiregular", next(iter(fx)))
    return Classification("neither")


class Claim(NamedTuple):
    case: str  # "a", "b" or "c"
    statement: str
    holds: bool


def lemma_order3_conclusions(classification: Union[Classification, str], h_order: int,
                             t: int, v: int, k: int) -> Claim:
    """The divisibility that a (quasi-)semiregular subgroup of order t or t - 1,
    acting on a block-transitive 3-(v, k, 1) design, forces; checked on (v, k)."""
    kind = classification.kind if isinstance(classification, Classification) else classification
    if t != 3:
        raise ValueError("only t = 3 is supported")
    if kind == "semiregular" and h_order == t:
        return Claim("a", "k | v", v % k == 0)
    if kind == "quasi_semiregular" and h_order == t:
        return Claim("b", "k | v-1 or k-1 | v-1", (v - 1) % k == 0 or (v - 1) % (k - 1) == 0)
    if kind == "quasi_semiregular" and h_order == t - 1:
        return Claim("c", "k-1 | v-1", (v - 1) % (k - 1) == 0)
    raise ValueError(f"no conclusion for a {kind} subgroup of order {h_order}")


# ---------------------------------------------------------------------------
# group files


def format_group(grp: PermGroup) -> str:
    lines = [f"degree {grp.degree}"]
    lines += [" ".join(map(str, g)) for g in grp.generators]
    return "\n".join(lines) + "\n"


def parse_group(text: str) -> PermGroup:
    degree = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "degree" or not parts[1].isdigit():
                raise GroupFormatError("expected 'degree n'", lineno)
            degree = int(parts[1])
            if not 1 <= degree <= DEGREE_CAP:
                raise GroupFormatError(f"degree must be in 1..{DEGREE_CAP}", lineno)
            continue
        try:
            gens.append(perm_check([int(x) for x in line.split()], degree))
        except ValueError as exc:
            raise GroupFormatError(str(exc), lineno) from None
    if degree is None:
        raise GroupFormatError("missing 'degree n' header")
    return PermGroup(degree, gens)


def read_group(path) -> PermGroup:
    return parse_group(Path(path).read_text(encoding="utf-8"))


def write_group(grp: PermGroup, path) -> None:
    Path(path).write_text(format_group(grp), encoding="utf-8")
