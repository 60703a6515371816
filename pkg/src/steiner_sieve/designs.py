"""Explicit 3-(v, k, 1) designs: verification, counts, transitivity, block orbits.

File format: first line ``v k b``, then b lines of k space-separated 0-based
point indices.  ``#`` starts a comment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .permgrp import Perm, PermGroup

__all__ = [
    "DesignInstance",
    "DesignFormatError",
    "NotAnAutomorphism",
    "VerifyResult",
    "Counts",
    "IsDesign",
    "WrongOrbitSize",
    "FailsTripleCoverage",
    "triple_rank",
    "triple_unrank",
    "verify_3design",
    "check_counts",
    "block_image",
    "block_orbit",
    "is_block_transitive",
    "is_flag_transitive",
    "block_orbit_design",
    "format_design",
    "parse_design",
    "read_design",
    "write_design",
]

Block = tuple  # sorted tuple[int, ...]

ORBIT_LIMIT = 10**7


class DesignFormatError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


class NotAnAutomorphism(ValueError):
    """A group element maps a block outside the block set."""


@dataclass(frozen=True)
class DesignInstance:
    v: int
    k: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        if not 1 <= self.k <= self.v:
            raise ValueError(f"need 1 <= k <= v, got v={self.v}, k={self.k}")
        clean = set()
        for blk in self.blocks:
            s = tuple(sorted(blk))
            if len(s) != self.k or len(set(s)) != self.k:
                raise ValueError(f"block {blk} does not have {self.k} distinct points")
            if s[0] < 0 or s[-1] >= self.v:
                raise ValueError(f"block {blk} has a point outside 0..{self.v - 1}")
            clean.add(s)
        object.__setattr__(self, "blocks", tuple(sorted(clean)))

    @classmethod
    def from_blocks(cls, v: int, k: int, blocks: Iterable[Iterable[int]]) -> "DesignInstance":
        return cls(v, k, tuple(tuple(b) for b in blocks))

    @property
    def b(self) -> int:
        return len(self.blocks)

    def block_set(self) -> frozenset:
        return frozenset(self.blocks)

    def as_array(self) -> np.ndarray:
        return np.array(self.blocks, dtype=np.int64).reshape(self.b, self.k)


# ---------------------------------------------------------------------------
# triple ranking (colex): {a < b < c} -> C(c, 3) + C(b, 2) + a


def _guard(v: int) -> None:
    assert math.comb(v, 3) < 2**63, "triple ranks must fit in 63 bits"


def triple_rank(a: int, b: int, c: int) -> int:
    a, b, c = sorted((a, b, c))
    if not 0 <= a < b < c:
        raise ValueError("need three distinct nonnegative points")
    return math.comb(c, 3) + math.comb(b, 2) + a


def triple_unrank(r: int) -> tuple[int, int, int]:
    c = 2
    while math.comb(c + 1, 3) <= r:
        c += 1
    r -= math.comb(c, 3)
    b = 1
    while math.comb(b + 1, 2) <= r:
        b += 1
    return r - math.comb(b, 2), b, c


# ---------------------------------------------------------------------------
# verification


class VerifyResult(NamedTuple):
    passed: bool
    witness: Optional[tuple[int, int, int]] = None
    witness_count: Optional[int] = None  # 0 = uncovered, >= 2 = covered repeatedly

    def __bool__(self):
        return self.passed


def verify_3design(inst: DesignInstance) -> VerifyResult:
    """Every 3-subset in exactly one block.

    Each triple {a < b < c} is charged to its least point a: for every a the
    pairs {b, c} above a taken from the blocks through a must each occur once.
    On failure the witness is the lexicographically least offending triple.
    """
    v, k = inst.v, inst.k
    _guard(v)
    if k < 3:
        return VerifyResult(False, (0, 1, 2) if v >= 3 else None, 0)
    arr = inst.as_array()
    # pair (b, c), b < c, ranked colex as C(c, 2) + b
    npairs = math.comb(v, 2)
    cs = np.repeat(np.arange(v, dtype=np.int64), np.arange(v, dtype=np.int64))
    bs = np.arange(npairs, dtype=np.int64) - cs * (cs - 1) // 2
    iu, ju = np.triu_indices(k, 1)
    through: list[list[int]] = [[] for _ in range(v)]
    for idx, blk in enumerate(inst.blocks):
        for x in blk:
            through[x].append(idx)
    for a in range(v - 2):
        sub = arr[through[a]] if through[a] else np.empty((0, k), dtype=np.int64)
        p1, p2 = sub[:, iu], sub[:, ju]
        keep = p1 > a
        ranks = p2[keep] * (p2[keep] - 1) // 2 + p1[keep]
        counts = np.bincount(ranks, minlength=npairs)
        bad = (bs > a) & (counts != 1)
        if bad.any():
            idx = np.flatnonzero(bad)
            best = idx[np.lexsort((cs[idx], bs[idx]))[0]]
            return VerifyResult(False, (a, int(bs[best]), int(cs[best])), int(counts[best]))
    return VerifyResult(True)


class Counts(NamedTuple):
    point_counts: np.ndarray  # blocks through each point
    pair_counts: np.ndarray  # blocks through each pair, indexed by colex pair rank C(c,2)+b

    @staticmethod
    def _const(a: np.ndarray) -> Optional[int]:
        if a.size and (a == a[0]).all():
            return int(a[0])
        return None

    @property
    def lambda1(self) -> Optional[int]:
        return self._const(self.point_counts)

    @property
    def lambda2(self) -> Optional[int]:
        return self._const(self.pair_counts)


def check_counts(inst: DesignInstance) -> Counts:
    arr = inst.as_array()
    points = np.bincount(arr.ravel(), minlength=inst.v)
    if inst.k >= 2:
        iu, ju = np.triu_indices(inst.k, 1)
        lo, hi = arr[:, iu].ravel(), arr[:, ju].ravel()
        pairs = np.bincount(hi * (hi - 1) // 2 + lo, minlength=math.comb(inst.v, 2))
    else:
        pairs = np.zeros(math.comb(inst.v, 2), dtype=np.int64)
    return Counts(points, pairs)


# ---------------------------------------------------------------------------
# group actions on blocks and flags


def block_image(block: Sequence[int], g: Perm) -> Block:
    return tuple(sorted(g[x] for x in block))


def _gens(gens) -> list[Perm]:
    return list(gens.generators) if isinstance(gens, PermGroup) else list(gens)


def block_orbit(gens, seed: Iterable[int], limit: int = ORBIT_LIMIT) -> set[Block]:
    gens = _gens(gens)
    start = tuple(sorted(seed))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for blk in frontier:
            for g in gens:
                im = block_image(blk, g)
                if im not in seen:
                    seen.add(im)
                    nxt.append(im)
        if len(seen) > limit:
            raise RuntimeError(f"block orbit exceeds {limit}")
        frontier = nxt
    return seen


def _check_automorphisms(inst: DesignInstance, gens: list[Perm]) -> None:
    blocks = inst.block_set()
    for i, g in enumerate(gens):
        if len(g) != inst.v:
            raise ValueError(f"generator {i} has degree {len(g)}, expected {inst.v}")
        for blk in inst.blocks:
            if block_image(blk, g) not in blocks:
                raise NotAnAutomorphism(f"generator {i} maps block {blk} outside the design")


def is_block_transitive(inst: DesignInstance, gens) -> bool:
    gens = _gens(gens)
    _check_automorphisms(inst, gens)
    return len(block_orbit(gens, inst.blocks[0])) == inst.b


def is_flag_transitive(inst: DesignInstance, gens) -> bool:
    gens = _gens(gens)
    _check_automorphisms(inst, gens)
    blk = inst.blocks[0]
    start = (blk[0], blk)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for pt, b in frontier:
            for g in gens:
                im = (g[pt], block_image(b, g))
                if im not in seen:
                    seen.add(im)
                    nxt.append(im)
        frontier = nxt
    return len(seen) == inst.b * inst.k


# ---------------------------------------------------------------------------
# designs as block orbits


@dataclass(frozen=True)
class IsDesign:
    instance: DesignInstance


@dataclass(frozen=True)
class WrongOrbitSize:
    got: int
    expected: int


@dataclass(frozen=True)
class FailsTripleCoverage:
    witness: tuple[int, int, int]
    witness_count: int
    instance: DesignInstance


OrbitOutcome = Union[IsDesign, WrongOrbitSize, FailsTripleCoverage]


def block_orbit_design(gens, seed_block: Iterable[int], expected_b: int,
                       degree: Optional[int] = None) -> OrbitOutcome:
    """Orbit of ``seed_block`` as a candidate 3-(v, k, 1) design."""
    seed = tuple(sorted(seed_block))
    g = _gens(gens)
    if degree is None:
        degree = gens.degree if isinstance(gens, PermGroup) else len(g[0])
    orb = block_orbit(g, seed)
    if len(orb) != expected_b:
        return WrongOrbitSize(len(orb), expected_b)
    inst = DesignInstance(degree, len(seed), tuple(orb))
    res = verify_3design(inst)
    if res.passed:
        return IsDesign(inst)
    return FailsTripleCoverage(res.witness, res.witness_count, inst)


# ---------------------------------------------------------------------------
# files


def format_design(inst: DesignInstance) -> str:
    lines = [f"{inst.v} {inst.k} {inst.b}"]
    lines += [" ".join(map(str, blk)) for blk in inst.blocks]
    return "\n".join(lines) + "\n"


def parse_design(text: str) -> DesignInstance:
    header = None
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise DesignFormatError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if len(nums) != 3:
                raise DesignFormatError("header must be 'v k b'", lineno)
            header = nums
            continue
        v, k, _ = header
        if len(nums) != k:
            raise DesignFormatError(f"block has {len(nums)} points, expected {k}", lineno)
        if len(set(nums)) != k:
            raise DesignFormatError("repeated point in block", lineno)
        if min(nums) < 0 or max(nums) >= v:
            raise DesignFormatError(f"point outside 0..{v - 1}", lineno)
        blocks.append(tuple(nums))
    if header is None:
        raise DesignFormatError("empty design file")
    v, k, b = header
    if len(blocks) != b:
        raise DesignFormatError(f"header says {b} blocks, found {len(blocks)}")
    inst = DesignInstance(v, k, tuple(blocks))
    if inst.b != b:
        raise DesignFormatError("duplicate blocks")
    return inst


def read_design(path) -> DesignInstance:
    return parse_design(Path(path).read_text(encoding="utf-8"))


def write_design(inst: DesignInstance, path) -> None:
    Path(path).write_text(format_design(inst), encoding="utf-8")
