import itertools
import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from steiner_sieve.permgrp import (
    classify_quasi_semiregular,
    enumerate_elements,
    lemma_order3_conclusions,
    perm_order,
)
from steiner_sieve.designs import (
    DesignFormatError,
    DesignInstance,
    FailsTripleCoverage,
    IsDesign,
    NotAnAutomorphism,
    WrongOrbitSize,
    block_orbit,
    block_orbit_design,
    check_counts,
    format_design,
    is_block_transitive,
    is_flag_transitive,
    parse_design,
    read_design,
    triple_rank,
    triple_unrank,
    verify_3design,
    write_design,
)


def brute_verify(inst):
    """Independent oracle: count every triple, return least bad triple or None."""
    cnt = Counter()
    for blk in inst.blocks:
        cnt.update(itertools.combinations(blk, 3))
    for t in itertools.combinations(range(inst.v), 3):
        if cnt[t] != 1:
            return t, cnt[t]
    return None


# AG(3, 2): points are F_2^3, planes are 4-sets with zero xor
AG32 = DesignInstance.from_blocks(
    8, 4, [s for s in itertools.combinations(range(8), 4) if s[0] ^ s[1] ^ s[2] ^ s[3] == 0])


def _linear(cols):
    img = []
    for x in range(8):
        y = 0
        for i in range(3):
            if x >> i & 1:
                y ^= cols[i]
        img.append(y)
    return tuple(img)


AGL32 = [tuple(x ^ 1 for x in range(8)), _linear([2, 4, 1]), _linear([1, 3, 4])]


def test_ag32():
    assert AG32.b == 14
    assert verify_3design(AG32).passed and brute_verify(AG32) is None
    c = check_counts(AG32)
    assert c.lambda1 == 7 and c.lambda2 == 3
    assert is_block_transitive(AG32, AGL32)
    assert is_flag_transitive(AG32, AGL32)


def test_single_block_counts():
    inst = DesignInstance.from_blocks(4, 3, [(0, 1, 2)])
    c = check_counts(inst)
    assert list(c.point_counts) == [1, 1, 1, 0]
    assert c.lambda1 is None
    res = verify_3design(inst)
    assert not res.passed and res.witness == (0, 1, 3) and res.witness_count == 0
    assert verify_3design(DesignInstance.from_blocks(3, 3, [(0, 1, 2)])).passed


def test_instance_normalizes():
    inst = DesignInstance.from_blocks(5, 3, [(2, 1, 0), (0, 1, 2), (4, 3, 0)])
    assert inst.blocks == ((0, 1, 2), (0, 3, 4))
    with pytest.raises(ValueError):
        DesignInstance.from_blocks(5, 3, [(0, 1, 1)])
    with pytest.raises(ValueError):
        DesignInstance.from_blocks(5, 3, [(0, 1, 5)])


def test_plane_counts_and_transitivity(plane8, sz8, sz8_3):
    assert (plane8.v, plane8.k, plane8.b) == (65, 9, 520)
    c = check_counts(plane8)
    assert c.lambda1 == 72 and c.lambda2 == 9
    assert verify_3design(plane8).passed
    for grp in (sz8, sz8_3):
        assert is_block_transitive(plane8, grp)
        assert not is_flag_transitive(plane8, grp)


def test_mutation_kill_rate(plane8):
    rng = random.Random(2024)
    killed = 0
    for _ in range(50):
        blocks = [list(b) for b in plane8.blocks]
        i = rng.randrange(len(blocks))
        j = rng.randrange(plane8.k)
        new = rng.choice([x for x in range(plane8.v) if x not in blocks[i]])
        blocks[i][j] = new
        mut = DesignInstance.from_blocks(plane8.v, plane8.k, blocks)
        res = verify_3design(mut)
        if not res.passed:
            killed += 1
    assert killed == 50


def test_not_an_automorphism(plane8, sz8):
    bad = tuple(range(64, -1, -1))
    with pytest.raises(NotAnAutomorphism):
        is_block_transitive(plane8, [bad])


def test_block_orbit_design_outcomes(sz8, plane8):
    seed = plane8.blocks[0]
    assert isinstance(block_orbit_design(sz8, seed, 520), IsDesign)
    out = block_orbit_design(sz8, seed, 521)
    assert out == WrongOrbitSize(520, 521)
    # {0..8} is infinity plus the line x = 0, a circle; {1..9} is not
    assert isinstance(block_orbit_design(sz8, tuple(range(9)), 520), IsDesign)
    out = block_orbit_design(sz8, tuple(range(1, 10)), 520)
    assert not isinstance(out, IsDesign)
    assert len(block_orbit(AGL32, AG32.blocks[0])) == 14


def test_fails_triple_coverage_witness():
    # orbit of {0,1,2} under the 5-cycle on 5 points: 5 blocks, C(5,3) = 10 triples
    g = [(1, 2, 3, 4, 0)]
    out = block_orbit_design(g, (0, 1, 2), 5)
    assert isinstance(out, FailsTripleCoverage)
    assert (out.witness, out.witness_count) == brute_verify(out.instance)


@settings(max_examples=150, deadline=None)
@given(st.integers(4, 9), st.integers(3, 5), st.data())
def test_verify_matches_brute_force(v, k, data):
    k = min(k, v)
    allb = list(itertools.combinations(range(v), k))
    blocks = data.draw(st.lists(st.sampled_from(allb), min_size=1, max_size=20))
    inst = DesignInstance.from_blocks(v, k, blocks)
    res = verify_3design(inst)
    bad = brute_verify(inst)
    assert res.passed == (bad is None)
    if bad is not None:
        assert (res.witness, res.witness_count) == bad
    # pass <=> b * C(k,3) = C(v,3) and no triple in two blocks
    cnt = Counter(t for blk in inst.blocks for t in itertools.combinations(blk, 3))
    no_dup = all(c == 1 for c in cnt.values())
    assert res.passed == (inst.b * math.comb(k, 3) == math.comb(v, 3) and no_dup)


@settings(max_examples=100)
@given(st.lists(st.integers(0, 200), min_size=3, max_size=3, unique=True))
def test_triple_rank_roundtrip(t):
    a, b, c = sorted(t)
    r = triple_rank(*t)
    assert triple_unrank(r) == (a, b, c)
    assert r < math.comb(c + 1, 3)


def test_triple_rank_bijective():
    ranks = [triple_rank(*t) for t in itertools.combinations(range(12), 3)]
    assert sorted(ranks) == list(range(math.comb(12, 3)))


def test_flag_implies_block_transitive():
    rng = random.Random(3)
    for _ in range(40):
        gens = [tuple(rng.sample(range(8), 8)) for _ in range(rng.randint(1, 2))]
        blocks = block_orbit(gens, rng.sample(range(8), 3))
        inst = DesignInstance.from_blocks(8, 3, blocks)
        if is_flag_transitive(inst, gens):
            assert is_block_transitive(inst, gens)
        assert is_block_transitive(inst, gens)


def test_file_roundtrip(tmp_path):
    p = tmp_path / "ag.txt"
    write_design(AG32, p)
    assert read_design(p) == AG32
    assert format_design(parse_design(format_design(AG32))) == format_design(AG32)


@pytest.mark.parametrize("text, line", [
    ("8 4\n", 1),
    ("4 3 1\n0 1\n", 2),
    ("4 3 1\n0 1 1\n", 2),
    ("4 3 1\n0 1 4\n", 2),
    ("4 3 1\n# c\n0 x 2\n", 3),
    ("4 3 2\n0 1 2\n", None),
    ("4 3 2\n0 1 2\n2 1 0\n", None),
    ("", None),
])
def test_file_errors(text, line):
    with pytest.raises(DesignFormatError) as info:
        parse_design(text)
    assert info.value.line == line


def _check_small_subgroups(inst, grp):
    checked = 0
    for g in enumerate_elements(grp):
        h = perm_order(g)
        if h not in (2, 3):
            continue
        cls = classify_quasi_semiregular([g])
        if (cls.kind, h) in {("semiregular", 3), ("quasi_semiregular", 3), ("quasi_semiregular", 2)}:
            claim = lemma_order3_conclusions(cls.kind, h, 3, inst.v, inst.k)
            assert claim.holds, (g, claim)
            checked += 1
    return checked


def test_order_two_three_conclusions(plane8, sz8_3):
    from steiner_sieve.permgrp import PermGroup

    # no such subgroups on 8 points, the sweep just must not trip
    _check_small_subgroups(AG32, PermGroup(8, AGL32))
    assert _check_small_subgroups(plane8, sz8_3) > 0
