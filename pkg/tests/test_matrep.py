import numpy as np
import pytest
from sympy import Matrix

from modpoly.diagram import parse_diagram
from modpoly.matrep import (
    ModularRep,
    embed_window_vector,
    gram_matrix,
    gram_matrix_mod,
    is_transvection,
    radical_vector,
    reduce_mod,
    reflection_matrices,
)

SAMPLES = ["1", "1 - 1", "1 - 2", "1 - 3", "1 - 4", "1 = 1", "1 , 1",
           "2 - 1 - 2", "1 - 2 - 1", "1 - 1 - 3", "3 - 3 - 1 - 1",
           "2 - 1 - 3 - 6", "1 - 1 - 1 - 2 - 2"]


def test_generators_are_integer_involutions():
    for text in SAMPLES:
        d = parse_diagram(text)
        n = d.rank
        for r in reflection_matrices(d):
            assert r.dtype == np.int64
            assert np.array_equal(r @ r, np.eye(n, dtype=np.int64))


def test_braid_periods_over_z():
    cases = {"1 - 1": 3, "1 - 2": 4, "1 - 3": 6, "1 , 1": 2}
    for text, period in cases.items():
        d = parse_diagram(text)
        r0, r1 = reflection_matrices(d)
        prod = r0 @ r1
        power = np.eye(2, dtype=np.int64)
        for k in range(1, period + 1):
            power = power @ prod
        assert np.array_equal(power, np.eye(2, dtype=np.int64))
        # and no smaller power is trivial
        power = np.eye(2, dtype=np.int64)
        for k in range(1, period):
            power = power @ prod
            assert not np.array_equal(power, np.eye(2, dtype=np.int64))


def test_infinite_branches_have_unipotent_products():
    for text in ["1 - 4", "1 = 1"]:
        d = parse_diagram(text)
        r0, r1 = reflection_matrices(d)
        prod = r0 @ r1
        power = np.eye(2, dtype=np.int64)
        for _ in range(64):
            power = power @ prod
            assert not np.array_equal(power, np.eye(2, dtype=np.int64))


def test_reflection_matrix_shape():
    d = parse_diagram("1 - 4")
    r0, r1 = reflection_matrices(d)
    assert r0.tolist() == [[-1, 4], [0, 1]]
    assert r1.tolist() == [[1, 0], [1, -1]]


def test_reduce_mod_range_and_functoriality():
    d = parse_diagram("2 - 1 - 3 - 6")
    mats = reflection_matrices(d)
    for modulus in [2, 3, 4, 5, 6, 12]:
        reduced = reduce_mod(mats, modulus)
        for m in reduced:
            assert m.min() >= 0 and m.max() < modulus
        # reduction commutes with multiplication
        for a, b in zip(mats, mats[1:]):
            ra, rb = reduce_mod([a, b], modulus)
            assert np.array_equal((a @ b) % modulus, ra @ rb % modulus)


def test_modular_rep_select():
    d = parse_diagram("2 - 1 - 2")
    rep = ModularRep(d, 4)
    assert rep.rank == 3
    assert len(rep.select([1, 2])) == 2
    assert np.array_equal(rep.select([0])[0], rep.mats[0])


def test_gram_is_preserved_by_generators():
    for text in SAMPLES:
        d = parse_diagram(text)
        g = gram_matrix(d)
        assert g.T == g
        for i in range(d.rank):
            assert g[i, i] == d.labels[i]
        for r in reflection_matrices(d):
            rm = Matrix(r.tolist())
            assert rm.T * g * rm == g


def test_gram_mod_regime():
    d = parse_diagram("1 - 2")
    for modulus in [2, 3, 4, 6, 8, 9]:
        assert gram_matrix_mod(d, modulus) is None
    for modulus in [5, 7, 11]:
        gm = gram_matrix_mod(d, modulus)
        for r in reduce_mod(reflection_matrices(d), modulus):
            assert np.array_equal(r.T @ gm @ r % modulus, gm)


def test_radical_vectors():
    cases = {
        "2 - 1 - 2": (1, 2, 1),
        "1 - 2 - 1": (1, 1, 1),
        "4 - 2 - 1": (1, 2, 2),
        "1 - 1 - 3": (1, 2, 1),
        "3 - 3 - 1": (1, 2, 3),
        "1 = 1": (1, 1),
        "4 - 1": (1, 2),
        "1 - 4": (2, 1),
        "1 - 1 - 1 - 2 - 2": (1, 2, 3, 2, 1),
        "2 - 2 - 2 - 1 - 1": (1, 2, 3, 4, 2),
    }
    for text, expected in cases.items():
        d = parse_diagram(text)
        c = radical_vector(d)
        assert c == expected, text
        # the radical is fixed by every generator
        amb = embed_window_vector(c, range(d.rank), d.rank)
        for r in reflection_matrices(d):
            assert np.array_equal(r @ amb, amb)


def test_radical_vector_window():
    d = parse_diagram("1 - 2 - 1 - 3")
    assert radical_vector(d, range(0, 3)) == (1, 1, 1)


def test_radical_requires_corank_one():
    with pytest.raises(ValueError):
        radical_vector(parse_diagram("1 - 1"))


def test_is_transvection():
    d = parse_diagram("1 = 1")
    modulus = 5
    r0, r1 = reduce_mod(reflection_matrices(d), modulus)
    c = embed_window_vector(radical_vector(d), range(2), 2)
    assert is_transvection(r0 @ r1 % modulus, c, range(2), modulus)
    assert not is_transvection(r0, c, range(2), modulus)


def test_embed_window_vector():
    v = embed_window_vector((1, 2, 1), [1, 2, 3], 5)
    assert v.tolist() == [0, 1, 2, 1, 0]
