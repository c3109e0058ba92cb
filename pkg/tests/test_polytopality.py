import itertools

import numpy as np
import pytest

from modpoly.diagram import parse_diagram
from modpoly.engine import element_period, enumerate_small
from modpoly.matrep import ModularRep, predict_branch_periods, predict_collapse
from modpoly.polytopality import Verifier, verify_diagram, verify_words, word_matrices

PREDICTION_SAMPLES = [
    "1",
    "1 - 1",
    "1 - 2",
    "2 - 1",
    "1 = 1",
    "1 - 4",
    "4 - 1",
    "1 - 3",
    "3 - 1",
    "1 , 1",
    "1 - 2 - 1",
    "2 - 1 - 2",
    "1 - 2 - 4",
    "2 - 1 - 4",
    "3 - 1 - 4",
    "4 - 2 - 1",
    "1 - 1 = 1 - 1",
    "3 - 1 = 1 - 3",
    "2 - 1 = 1 - 2",
    "2 - 1 = 1 - 3",
    "1 - 2 - 2 - 1",
    "2 - 1 - 3 - 6",
    "1 , 3 - 1",
]


@pytest.mark.parametrize("modulus", [2, 3, 4, 5, 6, 8])
@pytest.mark.parametrize("text", PREDICTION_SAMPLES)
def test_local_predictions(text, modulus):
    diagram = parse_diagram(text)
    rep = ModularRep(diagram, modulus)
    ident = np.eye(diagram.rank, dtype=np.int64) % modulus
    for i, expect in enumerate(predict_collapse(diagram, modulus)):
        assert np.array_equal(rep.mats[i], ident) == expect
    for i, expect in enumerate(predict_branch_periods(diagram, modulus)):
        prod = rep.mats[i] @ rep.mats[i + 1] % modulus
        assert element_period(prod, modulus) == expect


def test_square_family_mod4():
    for text, order in [("1 - 2 - 1", 32), ("1 - 2 - 4", 128), ("2 - 1 - 2", 64)]:
        report = verify_diagram(parse_diagram(text), 4)
        assert report.verdict == "StringCGroup"
        assert report.order == order
        assert report.schlafli == (4, 4)
        assert report.diagram == text
        assert all(c.passed for c in report.checks)


def test_collapse_mod_two():
    report = verify_diagram(parse_diagram("1 - 2 - 1"), 2)
    assert report.verdict == "NotSGGI"
    assert report.order == 2
    failing = [c for c in report.checks if not c.passed]
    assert failing[0].witness == {"generator": 0, "reason": "identity"}


def test_rank4_tower():
    diagram = parse_diagram("2 - 1 - 3 - 6")
    r2 = verify_diagram(diagram, 2)
    assert (r2.verdict, r2.order, r2.schlafli) == ("StringCGroup", 96, (4, 3, 4))
    r3 = verify_diagram(diagram, 3)
    assert (r3.verdict, r3.order, r3.schlafli) == ("StringCGroup", 5184, (4, 6, 4))
    r6 = verify_diagram(diagram, 6)
    assert r6.verdict == "IntersectionFails"
    assert r6.order == 248832
    last = r6.checks[-1]
    assert not last.passed
    assert last.witness["rank"] == 4
    assert last.witness["k"] == 1
    assert last.witness["index"] == 3


def test_small_ranks():
    report = verify_diagram(parse_diagram("1"), 3)
    assert report.verdict == "StringCGroup"
    assert report.order == 2
    assert report.schlafli == ()
    assert verify_diagram(parse_diagram("1"), 2).verdict == "NotSGGI"
    empty = verify_diagram(parse_diagram("1 - 1"), 5, window=[])
    assert empty.verdict == "Degenerate"
    assert empty.order == 1


def test_window_verification():
    diagram = parse_diagram("2 - 1 - 3 - 6")
    report = verify_diagram(diagram, 5, window=[1, 2])
    assert report.diagram == "1 - 3"
    assert report.schlafli == (6,)
    assert report.order == 12


def test_word_subgroups():
    diagram = parse_diagram("1 - 2")
    report = verify_words(diagram, 5, [[0], [1, 0, 1]])
    assert report.verdict == "StringCGroup"
    assert report.order == 4
    assert report.schlafli == (2,)
    assert report.words == ((0,), (1, 0, 1))
    bad = verify_words(diagram, 5, [[0, 1]])
    assert bad.verdict == "NotSGGI"
    assert bad.order == 4
    assert bad.schlafli is None


def test_duplicate_generator_fails_intersection():
    report = verify_words(parse_diagram("1 - 2"), 5, [[0], [1], [0]])
    assert report.verdict == "IntersectionFails"
    last = report.checks[-1]
    assert last.witness == {"rank": 3, "k": 1, "expected": 2, "measured": 8, "index": 4}


def test_report_dict_shape():
    data = verify_diagram(parse_diagram("1 - 2 - 1"), 4).to_dict()
    assert data["order"] == "32"
    assert data["schlafli"] == [4, 4]
    assert data["verdict"] == "StringCGroup"
    assert all(set(c) <= {"name", "pass", "witness"} for c in data["checks"])
    assert all(c["pass"] for c in data["checks"])


def brute_verdict(mats, modulus, bound=400_000):
    """Definition-level oracle: intersection property over all subset pairs."""
    n = len(mats)
    dim = mats[0].shape[0]
    ident = np.eye(dim, dtype=np.int64) % modulus
    for m in mats:
        if np.array_equal(m, ident):
            return "NotSGGI"
        if not np.array_equal(m @ m % modulus, ident):
            return "NotSGGI"
    for i in range(n):
        for j in range(i + 2, n):
            if not np.array_equal(mats[i] @ mats[j] % modulus,
                                  mats[j] @ mats[i] % modulus):
                return "NotSGGI"
    cache = {}

    def elems(subset):
        if subset not in cache:
            if not subset:
                cache[subset] = {ident.tobytes()}
            else:
                gens = [mats[i] for i in subset]
                closure = enumerate_small(gens, modulus, bound=bound)
                cache[subset] = {m.tobytes() for m in closure}
        return cache[subset]

    subsets = [s for r in range(n + 1) for s in itertools.combinations(range(n), r)]
    for left in subsets:
        for right in subsets:
            meet = tuple(sorted(set(left) & set(right)))
            if len(elems(left) & elems(right)) != len(elems(meet)):
                return "IntersectionFails"
    return "StringCGroup"


BRUTE_CASES = [
    ("1 - 2 - 1", 2), ("1 - 2 - 1", 3), ("1 - 2 - 1", 4), ("1 - 2 - 1", 5),
    ("1 - 2 - 1", 6),
    ("1 - 2 - 4", 2), ("1 - 2 - 4", 3), ("1 - 2 - 4", 4), ("1 - 2 - 4", 5),
    ("2 - 1 - 2", 2), ("2 - 1 - 2", 3), ("2 - 1 - 2", 4), ("2 - 1 - 2", 5),
    ("1 - 1", 2), ("1 - 1", 3), ("1 - 1", 5),
    ("1 = 1", 2), ("1 = 1", 3), ("1 = 1", 4), ("1 = 1", 6),
    ("1 - 1 - 1", 2), ("1 - 1 - 1", 3),
    ("1 - 2 - 2 - 1", 2), ("1 - 2 - 2 - 1", 3),
    ("2 - 1 - 3 - 6", 2), ("2 - 1 - 3 - 6", 3),
    ("1 , 1", 3), ("3 - 1 - 4", 2), ("3 - 1 - 4", 4),
]


@pytest.mark.parametrize("text,modulus", BRUTE_CASES)
def test_verdicts_match_definition(text, modulus):
    diagram = parse_diagram(text)
    rep = ModularRep(diagram, modulus)
    report = verify_diagram(diagram, modulus)
    assert report.verdict == brute_verdict(rep.mats, modulus)


def test_word_verdict_matches_definition():
    rep = ModularRep(parse_diagram("1 - 2"), 5)
    mats = word_matrices(rep, [[0], [1], [0]])
    assert brute_verdict(mats, 5) == "IntersectionFails"
