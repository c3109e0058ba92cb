"""Exact reflection representations of a diagram and their reductions mod d.

The representation acts on the based module Z^n by

    r_i(b_j) = b_j + m_ij b_i

where m is the Cartan matrix of the diagram (m_ii = -2, so r_i(b_i) = -b_i).
All matrices are integer numpy arrays acting on column vectors; reduction
mod d takes entries into [0, d).
"""

from fractions import Fraction
from math import gcd

import numpy as np
from sympy import Matrix, Rational

from .diagram import Branch, INFINITY


def reflection_matrices(diagram):
    """Integer reflection generators of the real (characteristic 0) group."""
    n = diagram.rank
    out = []
    for i in range(n):
        m = np.eye(n, dtype=np.int64)
        m[i, :] = diagram.cartan_row(i)
        m[i, i] = -1
        out.append(m)
    return out


def reduce_mod(mats, d):
    if d < 2:
        raise ValueError("modulus must be at least 2")
    return [np.asarray(m, dtype=np.int64) % d for m in mats]


class ModularRep:
    """Reflection generators of a diagram reduced mod d."""

    def __init__(self, diagram, modulus):
        self.diagram = diagram
        self.modulus = modulus
        self.mats = reduce_mod(reflection_matrices(diagram), modulus)

    @property
    def rank(self):
        return self.diagram.rank

    def select(self, indices):
        return [self.mats[i] for i in indices]


def gram_matrix(diagram):
    """Exact Gram form of the basis: b_i.b_i = a_i, b_i.b_j = -m_ij a_i / 2."""
    n = diagram.rank
    g = Matrix.zeros(n, n)
    cart = diagram.cartan_matrix()
    for i in range(n):
        g[i, i] = Rational(diagram.labels[i])
        for j in range(n):
            if i != j:
                g[i, j] = Rational(-cart[i][j] * diagram.labels[i], 2)
    return g


def gram_matrix_mod(diagram, d):
    """Gram form with entries in Z_d; available only when gcd(6, d) = 1."""
    if gcd(6, d) != 1:
        return None
    inv2 = pow(2, -1, d)
    n = diagram.rank
    cart = diagram.cartan_matrix()
    g = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        g[i, i] = diagram.labels[i] % d
        for j in range(n):
            if i != j:
                g[i, j] = (-cart[i][j] * diagram.labels[i] * inv2) % d
    return g


def inner_product(diagram, x, y):
    """Exact pairing of two integer vectors under the Gram form (a Fraction)."""
    g = gram_matrix(diagram)
    total = Fraction(0)
    n = diagram.rank
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j]:
                q = g[i, j]
                total += Fraction(int(x[i]) * int(y[j]) * q.p, q.q)
    return total


def radical_vector(diagram, window=None):
    """Primitive integer spanning vector of the window Gram form's radical.

    Raises ValueError unless the radical is one-dimensional.  The result is
    sign-fixed so its first nonzero entry is positive and is returned in
    window coordinates.
    """
    if window is None:
        window = range(diagram.rank)
    sub = diagram.subdiagram(window)
    g = gram_matrix(sub)
    null = g.nullspace()
    if len(null) != 1:
        raise ValueError("radical is %d-dimensional, expected 1" % len(null))
    v = null[0]
    denoms = [Rational(x).q for x in v]
    scale = 1
    for q in denoms:
        scale = scale * q // gcd(scale, q)
    ints = [int(Rational(x) * scale) for x in v]
    content = 0
    for x in ints:
        content = gcd(content, x)
    ints = [x // content for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def embed_window_vector(vec, window, rank):
    """Place window-coordinate integers into an ambient length-rank vector."""
    out = np.zeros(rank, dtype=np.int64)
    for val, idx in zip(vec, window):
        out[idx] = val
    return out


def is_transvection(mat, c_ambient, window, modulus):
    """True iff (mat - I) maps every window basis vector into Z_d . c.

    c_ambient must have some entry coprime to the modulus (all radical
    vectors used here do); that entry pins down the scalar per column.
    """
    n = mat.shape[0]
    diff = (np.asarray(mat, dtype=np.int64) - np.eye(n, dtype=np.int64)) % modulus
    c = np.asarray(c_ambient, dtype=np.int64) % modulus
    pivot = None
    for p in range(n):
        if gcd(int(c[p]) % modulus, modulus) == 1:
            pivot = p
            break
    if pivot is None:
        raise ValueError("radical vector has no entry invertible mod %d" % modulus)
    inv = pow(int(c[pivot]), -1, modulus)
    for j in window:
        col = diff[:, j]
        lam = (int(col[pivot]) * inv) % modulus
        if np.any((col - lam * c) % modulus != 0):
            return False
    return True


def predict_collapse(diagram, modulus):
    """Per node: does its reflection reduce to the identity mod d."""
    return tuple(
        modulus == 2 and diagram.node_parity(i) == "ee"
        for i in range(diagram.rank)
    )


def predict_branch_periods(diagram, modulus):
    """Expected period of r_i r_{i+1} mod d, per adjacent pair.

    Finite branch periods survive every d > 2; mod 2 they can drop when a
    flanking reflection collapses or the pair starts to commute.  Infinite
    branches acquire period d, halved or doubled for even d according to
    the parity classes of the two nodes.
    """
    s = modulus
    out = []
    for i, p in enumerate(diagram.branch_periods()):
        left = diagram.node_parity(i)
        right = diagram.node_parity(i + 1)
        if p == INFINITY:
            if s % 2:
                q = s
            elif diagram.branches[i] is Branch.DOUBLE:
                q = s // 2 if left == right == "ee" else s
            else:
                # ratio-4 single bond; the smaller label drives the doubling
                small = left if diagram.labels[i] < diagram.labels[i + 1] else right
                q = 2 * s if small == "oe" else s
        elif s > 2:
            q = p
        elif p == 2:
            q = 1 if left == right == "ee" else 2
        elif p == 4:
            q = 2 if "ee" in (left, right) else 4
        else:
            q = 3
        out.append(q)
    return tuple(out)
