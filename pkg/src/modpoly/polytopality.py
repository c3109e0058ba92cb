"""String C-group verification for finite matrix groups.

A string group generated by involutions (sggi) is a group with an ordered
generator list in which every generator squares to the identity, none is
trivial, and generators two or more apart along the string commute.  An
sggi is a string C-group when the intersection condition holds: every
prefix subgroup meets every suffix subgroup exactly in the segment they
share.  String C-groups are the automorphism groups of abstract regular
polytopes (McMullen and Schulte, Abstract Regular Polytopes, 2002), with
the period of r_{i-1} r_i giving entry i of the Schlafli symbol.

Checking all segment pairs is not necessary.  When <r_0 .. r_{n-2}> is
already known to be a string C-group it suffices to check the top layer

    <r_0 .. r_{n-2}>  meet  <r_k .. r_{n-1}>  =  <r_k .. r_{n-2}>

for 1 <= k <= n-1 (op. cit., Section 2E).  The verifier below unrolls
that recursion from rank 2 upward, so each layer's checks run only after
the layer below is established.  Subgroup orders and intersection orders
come from deterministic stabilizer chains; chains for contiguous
generator segments are cached and shared between checks.
"""

from dataclasses import dataclass

import numpy as np

from .engine import StabChain, element_period, enumerate_small, intersection_order
from .matrep import ModularRep

STRING_C_GROUP = "StringCGroup"
NOT_SGGI = "NotSGGI"
INTERSECTION_FAILS = "IntersectionFails"
DEGENERATE = "Degenerate"


@dataclass
class CheckRecord:
    """One verification step: a name, a pass flag, a witness when failed."""

    name: str
    passed: bool
    witness: dict = None

    def to_dict(self):
        out = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class VerificationReport:
    modulus: int
    verdict: str
    order: int
    schlafli: tuple
    checks: list
    diagram: str = None
    words: tuple = None

    @property
    def ok(self):
        return self.verdict == STRING_C_GROUP

    def to_dict(self):
        out = {
            "diagram": self.diagram,
            "modulus": self.modulus,
            "verdict": self.verdict,
            "schlafli": None if self.schlafli is None else list(self.schlafli),
            "order": str(self.order),
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.words is not None:
            out["words"] = [list(w) for w in self.words]
        return out


class Verifier:
    """Decides the string C-group property for a list of involution matrices.

    Generators are indexed 0 .. rank-1 in string order.  Stabilizer chains
    for contiguous segments [lo, hi) are cached across checks.
    """

    def __init__(self, mats, modulus, order_guard=None, orbit_guard=1_000_000,
                 enum_bound=20_000, word_order_bound=200_000):
        self.mats = [np.asarray(m, dtype=np.int64) % modulus for m in mats]
        self.modulus = modulus
        self.rank = len(self.mats)
        self.dim = self.mats[0].shape[0] if self.mats else 0
        self.order_guard = order_guard
        self.orbit_guard = orbit_guard
        self.enum_bound = enum_bound
        self.word_order_bound = word_order_bound
        self._chains = {}

    def chain(self, lo, hi):
        key = (lo, hi)
        if key not in self._chains:
            self._chains[key] = StabChain(
                self.mats[lo:hi], self.modulus, n=self.dim,
                order_guard=self.order_guard)
        return self._chains[key]

    def segment_order(self, lo, hi):
        if lo >= hi:
            return 1
        return self.chain(lo, hi).order()

    def schlafli(self):
        out = []
        for i in range(1, self.rank):
            prod = self.mats[i - 1] @ self.mats[i] % self.modulus
            # the period divides the order of the rank-2 segment
            cap = self.segment_order(i - 1, i + 1)
            out.append(element_period(prod, self.modulus, cap=cap))
        return tuple(out)

    def _generator_checks(self):
        ident = np.eye(self.dim, dtype=np.int64) % self.modulus
        checks = []
        sggi = True
        involutions = True
        for i, m in enumerate(self.mats):
            square_ok = bool(np.array_equal(m @ m % self.modulus, ident))
            trivial = bool(np.array_equal(m, ident))
            ok = square_ok and not trivial
            wit = None
            if not square_ok:
                involutions = False
            if not ok:
                sggi = False
                wit = {"generator": i,
                       "reason": "identity" if trivial else "square is not the identity"}
            checks.append(CheckRecord("involution r%d" % i, ok, wit))
        for i in range(self.rank):
            for j in range(i + 2, self.rank):
                a, b = self.mats[i], self.mats[j]
                ok = bool(np.array_equal(a @ b % self.modulus, b @ a % self.modulus))
                if not ok:
                    sggi = False
                checks.append(CheckRecord("commute r%d r%d" % (i, j), ok,
                                          None if ok else {"pair": [i, j]}))
        return sggi, involutions, checks

    def verify(self):
        if self.rank == 0:
            return VerificationReport(self.modulus, DEGENERATE, 1, (), [])
        sggi, involutions, checks = self._generator_checks()
        if not involutions:
            # no stabilizer chain without involutions; order by plain closure
            size = int(enumerate_small(self.mats, self.modulus,
                                       bound=self.word_order_bound).shape[0])
            return VerificationReport(self.modulus, NOT_SGGI, size, None, checks)
        order = self.segment_order(0, self.rank)
        schlafli = self.schlafli()
        if not sggi:
            return VerificationReport(self.modulus, NOT_SGGI, order, schlafli, checks)
        for r in range(2, self.rank + 1):
            for k in range(1, r):
                expected = self.segment_order(k, r - 1)
                measured = intersection_order(
                    self.chain(0, r - 1), self.chain(k, r),
                    orbit_guard=self.orbit_guard, enum_bound=self.enum_bound)
                ok = measured == expected
                wit = None
                if not ok:
                    wit = {"rank": r, "k": k, "expected": expected,
                           "measured": measured, "index": measured // expected}
                checks.append(CheckRecord("intersection r=%d k=%d" % (r, k), ok, wit))
                if not ok:
                    return VerificationReport(self.modulus, INTERSECTION_FAILS,
                                              order, schlafli, checks)
        return VerificationReport(self.modulus, STRING_C_GROUP, order, schlafli, checks)


def verify_diagram(diagram, modulus, window=None, **guards):
    """Verification report for a diagram's modular reflection group.

    window, when given, is a contiguous index range; the report then covers
    the subgroup those reflections generate.  An empty window is Degenerate.
    """
    rep = ModularRep(diagram, modulus)
    window = range(diagram.rank) if window is None else list(window)
    v = Verifier(rep.select(window), modulus, **guards)
    report = v.verify()
    report.diagram = diagram.subdiagram(window).render() if len(window) else ""
    return report


def word_matrices(rep, words):
    """Products of generator words (index sequences into rep's generators)."""
    ident = np.eye(rep.rank, dtype=np.int64) % rep.modulus
    out = []
    for w in words:
        m = ident
        for idx in w:
            if not 0 <= idx < rep.rank:
                raise ValueError("word index %d out of range" % idx)
            m = m @ rep.mats[idx] % rep.modulus
        out.append(m)
    return out


def verify_words(diagram, modulus, words, **guards):
    """Verification report for the subgroup generated by generator words."""
    rep = ModularRep(diagram, modulus)
    v = Verifier(word_matrices(rep, words), modulus, **guards)
    report = v.verify()
    report.diagram = diagram.render()
    report.words = tuple(tuple(w) for w in words)
    return report
