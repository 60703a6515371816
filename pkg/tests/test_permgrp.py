import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from steiner_sieve.permgrp import (
    EnumerationCapExceeded,
    GroupFormatError,
    PermGroup,
    classify_quasi_semiregular,
    enumerate_elements,
    format_group,
    group_order,
    lemma_order3_conclusions,
    orbit,
    orbits,
    parse_group,
    perm_from_cycles,
    perm_identity,
    perm_inv,
    perm_mul,
    perm_order,
    perm_pow,
    setwise_stabilizer,
)


def S(n):
    return PermGroup(n, [perm_from_cycles(n, (0, 1)), perm_from_cycles(n, tuple(range(n)))])


def test_perm_basics():
    a = perm_from_cycles(4, (0, 1, 2))
    assert perm_mul(a, perm_inv(a)) == perm_identity(4)
    assert perm_order(a) == 3 and perm_pow(a, 3) == perm_identity(4)
    # a then b
    b = perm_from_cycles(4, (0, 3))
    assert perm_mul(a, b)[0] == b[a[0]]
    with pytest.raises(ValueError):
        PermGroup(3, [(0, 0, 1)])


def test_orbit_examples(sz8_gens):
    assert orbit([], 0, degree=1) == {0}
    assert orbit([perm_from_cycles(4, (0, 1, 2))], 3) == {3}
    assert orbit(sz8_gens, 17) == set(range(65))
    with pytest.raises(ValueError):
        orbit([perm_identity(3)], 3)


def test_group_order_examples(sz8, sz8_3):
    assert sz8.order == 29120
    assert PermGroup(5).order == 1
    assert sz8_3.order == 87360


def test_enumerate_examples(sz8, sz8_3):
    els = enumerate_elements(S(3))
    assert len(els) == len(set(els)) == 6
    els = enumerate_elements(sz8_3)
    assert len(els) == len(set(els)) == 87360
    with pytest.raises(EnumerationCapExceeded):
        enumerate_elements(sz8, cap=100)


def test_setwise_stabilizer_examples(sz8, plane8):
    assert setwise_stabilizer(S(4), {0, 1}).order == 4
    assert setwise_stabilizer(sz8, plane8.blocks[0]).order == 56
    assert setwise_stabilizer(PermGroup(6), {1, 2}).order == 1


def test_membership(sz8, sz8_3):
    frob = sz8_3.generators[-1]
    assert frob in sz8_3
    assert frob not in sz8
    assert all(g in sz8 for g in sz8.generators)


def test_sz8_two_transitive(sz8):
    stab = setwise_stabilizer(sz8, {0})
    assert stab.order == 448
    assert orbit(stab, 1) == set(range(1, 65))


def test_classify_examples(sz8):
    assert classify_quasi_semiregular([perm_from_cycles(3, (0, 1, 2))]) == ("semiregular", None)
    assert classify_quasi_semiregular([perm_from_cycles(5, (1, 2), (3, 4))]) == ("quasi_semiregular", 0)
    assert classify_quasi_semiregular([perm_from_cycles(4, (0, 1))]).kind == "neither"
    # an involution of the stabilizer of infinity in Sz(8)
    inv = next(g for g in setwise_stabilizer(sz8, {0}).elements() if perm_order(g) == 2)
    assert classify_quasi_semiregular([inv]) == ("quasi_semiregular", 0)
    with pytest.raises(ValueError):
        classify_quasi_semiregular(PermGroup(3))


def test_lemma_order3_examples():
    c = lemma_order3_conclusions("quasi_semiregular", 2, 3, 65, 9)
    assert c.case == "c" and c.statement == "k-1 | v-1" and c.holds
    c = lemma_order3_conclusions("semiregular", 3, 3, 12, 4)
    assert c.case == "a" and c.holds
    c = lemma_order3_conclusions("quasi_semiregular", 3, 3, 10, 4)
    assert c.case == "b" and c.holds
    with pytest.raises(ValueError):
        lemma_order3_conclusions("neither", 3, 3, 10, 4)


# -- properties on random small groups


def _random_group(rng):
    n = rng.randint(1, 8)
    gens = []
    for _ in range(rng.randint(0, 3)):
        p = list(range(n))
        rng.shuffle(p)
        gens.append(tuple(p))
    return PermGroup(n, gens)


def _sympy_order(grp):
    if not grp.generators:
        return 1
    return PermutationGroup([Permutation(list(g)) for g in grp.generators]).order()


def test_order_matches_enumeration_and_sympy():
    rng = random.Random(5)
    for _ in range(150):
        grp = _random_group(rng)
        els = enumerate_elements(grp)
        assert len(els) == len(set(els)) == grp.order == _sympy_order(grp)
        # every enumerated element is a member and the set is closed
        es = set(els)
        for g in grp.generators:
            assert all(perm_mul(x, g) in es for x in els[:50])


def test_orbit_stabilizer_and_partition():
    rng = random.Random(9)
    for _ in range(100):
        grp = _random_group(rng)
        parts = orbits(grp)
        assert sorted(x for o in parts for x in o) == list(range(grp.degree))
        a = rng.randrange(grp.degree)
        assert grp.order == len(orbit(grp, a)) * setwise_stabilizer(grp, {a}).order


def test_semiregular_orbits_full_size():
    rng = random.Random(13)
    seen = 0
    while seen < 30:
        grp = _random_group(rng)
        if grp.order == 1:
            continue
        cls = classify_quasi_semiregular(grp)
        if cls.kind == "semiregular":
            assert all(len(o) == grp.order for o in orbits(grp))
            seen += 1
        elif cls.kind == "quasi_semiregular":
            sizes = sorted(len(o) for o in orbits(grp))
            assert sizes[0] == 1 and all(s == grp.order for s in sizes[1:])
        elif rng.random() < 0.2:
            # manufacture a semiregular group: a product of disjoint equal cycles
            m, r = rng.randint(1, 4), rng.randint(2, 4)
            n = m * r
            g = perm_from_cycles(n, *[tuple(range(i * r, (i + 1) * r)) for i in range(m)])
            assert classify_quasi_semiregular([g]).kind == "semiregular"


@settings(max_examples=60)
@given(st.permutations(list(range(6))), st.permutations(list(range(6))))
def test_order_divides_factorial(a, b):
    grp = PermGroup(6, [tuple(a), tuple(b)])
    assert 720 % grp.order == 0
    assert sum(len(o) for o in grp.orbits) == 6


# -- group files


def test_group_file_roundtrip(sz8, tmp_path):
    text = format_group(sz8)
    assert text.startswith("degree 65\n")
    back = parse_group(text)
    assert back.generators == sz8.generators and back.order == 29120


@pytest.mark.parametrize("text, line", [
    ("degre 3\n0 1 2\n", 1),
    ("degree 3\n0 1\n", 2),
    ("degree 3\n# c\n0 1 1\n", 3),
    ("degree 3\n0 1 x\n", 2),
])
def test_group_file_errors(text, line):
    with pytest.raises(GroupFormatError) as info:
        parse_group(text)
    assert info.value.line == line
