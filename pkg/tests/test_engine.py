import numpy as np
import pytest

from modpoly.diagram import parse_diagram
from modpoly.engine import (
    BoundExceeded,
    OrbitGuardExceeded,
    OrderGuardExceeded,
    PointSpace,
    PointSpaceOverflow,
    StabChain,
    as_permutations,
    element_period,
    enumerate_small,
    intersection_order,
    permutation_order,
)
from modpoly.matrep import ModularRep


def chain_for(text, modulus, indices=None):
    rep = ModularRep(parse_diagram(text), modulus)
    mats = rep.mats if indices is None else rep.select(indices)
    return StabChain(mats, modulus)


def brute_order(text, modulus, indices=None):
    rep = ModularRep(parse_diagram(text), modulus)
    mats = rep.mats if indices is None else rep.select(indices)
    return enumerate_small(mats, modulus).shape[0]


def test_pointspace_round_trip():
    space = PointSpace(5, 3)
    idx = np.arange(space.size)
    assert np.array_equal(space.encode(space.decode(idx)), idx)
    assert space.size == 125


def test_pointspace_overflow():
    with pytest.raises(PointSpaceOverflow):
        PointSpace(13, 9)


ORDER_CASES = [
    ("1 - 1", 2), ("1 - 1", 3), ("1 - 1", 5),
    ("1 - 2", 2), ("1 - 2", 3), ("1 - 2", 4), ("1 - 2", 5),
    ("1 - 3", 2), ("1 - 3", 5),
    ("1 = 1", 2), ("1 = 1", 3), ("1 = 1", 4), ("1 = 1", 7), ("1 = 1", 9),
    ("1 - 4", 3), ("1 - 4", 4), ("1 - 4", 6),
    ("1 , 1", 2), ("1 , 1", 3),
    ("1", 2), ("1", 3),
    ("1 - 1 - 1", 2), ("1 - 1 - 1", 3), ("1 - 1 - 1", 4), ("1 - 1 - 1", 5),
    ("2 - 1 - 2", 2), ("2 - 1 - 2", 3), ("2 - 1 - 2", 4), ("2 - 1 - 2", 6),
    ("1 - 2 - 1", 3), ("1 - 2 - 1", 4),
    ("1 - 1 - 3", 3), ("1 - 1 - 3", 4),
    ("1 - 1 - 2 - 2", 3),
]


def test_chain_order_matches_bfs():
    for text, modulus in ORDER_CASES:
        assert chain_for(text, modulus).order() == brute_order(text, modulus), (text, modulus)


def test_chain_structure_check():
    for text, modulus in [("2 - 1 - 2", 4), ("1 - 1 - 1", 5), ("1 = 1", 8)]:
        assert chain_for(text, modulus).check()


def test_known_dihedral_orders():
    # mod d the 1-2 diagram generates the dihedral group of the square
    assert chain_for("1 - 2", 3).order() == 8
    # the double bond rotation has period d for odd d; for even d both end
    # nodes of the standalone diagram are class ee, so the period halves
    assert chain_for("1 = 1", 3).order() == 6
    assert chain_for("1 = 1", 5).order() == 10
    assert chain_for("1 = 1", 4).order() == 4
    assert chain_for("1 = 1", 8).order() == 8


def test_membership_agreement():
    for text, modulus in [("2 - 1 - 2", 4), ("1 - 1 - 1", 3), ("1 - 3", 5)]:
        chain = chain_for(text, modulus)
        elems = enumerate_small(ModularRep(parse_diagram(text), modulus).mats, modulus)
        assert elems.shape[0] == chain.order()
        assert bool(chain.member_mask(elems).all())
        for m in elems[:16]:
            assert chain.member(m)
        # a matrix outside the group: identity scaled, when nontrivial
        fake = (2 * np.eye(chain.n, dtype=np.int64)) % modulus
        if not any(np.array_equal(fake, e) for e in elems):
            assert not chain.member(fake)


def test_elements_enumeration_matches_order():
    chain = chain_for("2 - 1 - 2", 4)
    elems = chain.elements()
    assert elems.shape[0] == chain.order()
    keys = {e.tobytes() for e in elems}
    assert len(keys) == chain.order()
    assert bool(chain.member_mask(elems).all())


def test_elements_bound():
    chain = chain_for("2 - 1 - 2", 6)
    with pytest.raises(BoundExceeded):
        chain.elements(bound=10)


def test_trivial_and_empty_chains():
    chain = StabChain([], 3, n=2)
    assert chain.order() == 1
    assert chain.member(np.eye(2, dtype=np.int64))
    ident_only = StabChain([np.eye(2, dtype=np.int64)], 3)
    assert ident_only.order() == 1


def test_order_guard():
    with pytest.raises(OrderGuardExceeded):
        StabChain(ModularRep(parse_diagram("2 - 1 - 2"), 6).mats, 6, order_guard=10)


def brute_intersection(text, modulus, left, right):
    rep = ModularRep(parse_diagram(text), modulus)
    a = enumerate_small(rep.select(left), modulus)
    b = enumerate_small(rep.select(right), modulus)
    bk = {m.tobytes() for m in b}
    return sum(1 for m in a if m.tobytes() in bk)


@pytest.mark.parametrize("text,modulus,left,right", [
    ("1 - 1 - 1", 3, [0, 1], [1, 2]),
    ("1 - 1 - 1", 4, [0, 1], [1, 2]),
    ("2 - 1 - 2", 4, [0, 1], [1, 2]),
    ("2 - 1 - 2", 6, [0, 1], [1, 2]),
    ("1 - 1 - 3", 4, [0, 1], [1, 2]),
    ("1 - 1 - 1", 3, [0], [0, 1, 2]),
])
def test_intersection_order_both_paths(text, modulus, left, right):
    expected = brute_intersection(text, modulus, left, right)
    a = chain_for(text, modulus, left)
    b = chain_for(text, modulus, right)
    assert intersection_order(a, b, enum_bound=20_000) == expected
    # force the canonical-coset path
    assert intersection_order(a, b, enum_bound=1) == expected
    assert intersection_order(b, a, enum_bound=1) == expected


def test_intersection_orbit_guard():
    a = chain_for("2 - 1 - 2", 6, [0, 1])
    b = chain_for("2 - 1 - 2", 6, [1, 2])
    with pytest.raises(OrbitGuardExceeded):
        intersection_order(a, b, enum_bound=1, orbit_guard=2)


def test_element_period_against_permutation_oracle():
    for text, modulus in [("1 - 2", 5), ("1 = 1", 6), ("2 - 1 - 2", 4), ("1 - 3", 7)]:
        rep = ModularRep(parse_diagram(text), modulus)
        perms = as_permutations(rep.mats, modulus)
        for mat, perm in zip(rep.mats, perms):
            assert element_period(mat, modulus) == permutation_order(perm)
        prod = rep.mats[0] @ rep.mats[1] % modulus
        perm_prod = perms[0][perms[1]]  # (M N)(x) = M(N(x))
        assert element_period(prod, modulus) == permutation_order(perm_prod)


def test_element_period_cap():
    mat = np.array([[1, 1], [0, 1]], dtype=np.int64)
    with pytest.raises(BoundExceeded):
        element_period(mat, 997, cap=10)


def test_enumerate_small_bound():
    rep = ModularRep(parse_diagram("2 - 1 - 2"), 6)
    with pytest.raises(BoundExceeded):
        enumerate_small(rep.mats, 6, bound=5)


def test_as_permutations_are_permutations():
    rep = ModularRep(parse_diagram("1 - 2"), 3)
    for perm in as_permutations(rep.mats, 3):
        assert sorted(perm.tolist()) == list(range(9))
