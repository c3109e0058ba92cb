"""Deterministic stabilizer chains for groups of integer matrices mod d.

The group acts on the point space Z_d^n (encoded as integers in [0, d^n),
little-endian mixed radix).  Chain elements are the n-by-n matrices
themselves: with base points restricted to basis vectors, the image of a
base point under a matrix is just one of its columns, so sifting never
decodes points and never materializes permutations.  Transversal
representatives and their inverses are stored explicitly per orbit slot;
all inverses are propagated incrementally from the involutory input
generators, so no modular matrix inversion is ever performed.

The construction is the classical deterministic Schreier-Sims procedure
(see Seress, "Permutation Group Algorithms"): every Schreier generator of
every level is processed exactly once, tracked by per-(level, generator)
cursors over the append-only orbits; a nontrivial sift residue becomes a
strong generator at the level where it sticks, or opens a new level.  The
resulting chain is verified by construction; `check()` re-derives the
Schreier condition from scratch for use in tests.
"""

from math import lcm

import numpy as np

_CHUNK = 16384


class PointSpaceOverflow(ValueError):
    """d^n exceeds the supported point-index range."""


class OrbitGuardExceeded(RuntimeError):
    """A coset-orbit enumeration outgrew the configured guard."""


class OrderGuardExceeded(RuntimeError):
    """A group order outgrew the configured guard."""


class BoundExceeded(RuntimeError):
    """An element enumeration outgrew the requested bound."""


class PointSpace:
    """Bijection between Z_d^n and [0, d^n)."""

    def __init__(self, d, n, limit=2 ** 31):
        if d < 2:
            raise ValueError("modulus must be at least 2")
        size = d ** n
        if size > limit:
            raise PointSpaceOverflow("point space %d^%d exceeds %d" % (d, n, limit))
        self.d = d
        self.n = n
        self.size = size
        self.weights = d ** np.arange(n, dtype=np.int64)

    def encode(self, vecs):
        return np.asarray(vecs, dtype=np.int64) % self.d @ self.weights

    def decode(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.weights) % self.d


class _Store:
    """Append-only array with amortized growth; .view() is the live prefix."""

    def __init__(self, tail_shape, dtype=np.int64, capacity=64):
        self.buf = np.empty((capacity,) + tail_shape, dtype=dtype)
        self.length = 0

    def append(self, block):
        block = np.asarray(block)
        k = block.shape[0]
        need = self.length + k
        if need > self.buf.shape[0]:
            cap = max(need, 2 * self.buf.shape[0])
            grown = np.empty((cap,) + self.buf.shape[1:], dtype=self.buf.dtype)
            grown[: self.length] = self.buf[: self.length]
            self.buf = grown
        self.buf[self.length:need] = block
        self.length = need

    def view(self):
        return self.buf[: self.length]


class _Level:
    __slots__ = ("beta_col", "pos", "points", "vecs", "trans", "trans_inv", "cursors")

    def __init__(self, beta_col, n, space):
        self.beta_col = beta_col
        self.pos = {}
        self.points = _Store(())
        self.vecs = _Store((n,))
        self.trans = _Store((n, n))
        self.trans_inv = _Store((n, n))
        self.cursors = {}
        ident = np.eye(n, dtype=np.int64) % space.d
        beta_vec = np.zeros(n, dtype=np.int64)
        beta_vec[beta_col] = 1 % space.d
        pt = int(space.encode(beta_vec))
        self.pos[pt] = 0
        self.points.append(np.array([pt]))
        self.vecs.append(beta_vec[None])
        self.trans.append(ident[None])
        self.trans_inv.append(ident[None])

    @property
    def orbit_size(self):
        return self.points.length


class StabChain:
    """Verified stabilizer chain for matrices mod d acting on Z_d^n."""

    def __init__(self, gens, modulus, n=None, order_guard=None):
        gens = [np.asarray(g, dtype=np.int64) % modulus for g in gens]
        if gens:
            n = gens[0].shape[0]
        elif n is None:
            raise ValueError("empty generator list needs an explicit dimension")
        self.modulus = modulus
        self.n = n
        self.space = PointSpace(modulus, n) if n else None
        self.identity = np.eye(n, dtype=np.int64) % modulus
        self.gens = []  # (mat, inv, level)
        self.levels = []
        self.input_gens = gens
        seed = []
        for g in gens:
            if not np.array_equal(g, self.identity):
                # involutory input: the matrix is its own inverse mod d
                if np.any(g @ g % modulus != self.identity):
                    raise ValueError("chain input generators must be involutions")
                seed.append((g, g))
        self._build(seed)
        self._order = 1
        for lev in self.levels:
            self._order *= lev.orbit_size
        if order_guard is not None and self._order > order_guard:
            raise OrderGuardExceeded("order %d exceeds guard %d" % (self._order, order_guard))

    def order(self):
        return self._order

    # -- construction ----------------------------------------------------

    def _build(self, stash):
        while True:
            residues = self._sift_stash(stash)
            stash = []
            if residues:
                mat, inv, lvl = residues[0]
                self._install(mat, inv, lvl)
                stash = [(m, i) for (m, i, _) in residues[1:]]
            fresh = self._process_schreier()
            stash.extend(fresh)
            if not stash and not residues:
                return

    def _sift_stash(self, stash):
        if not stash:
            return []
        d = self.modulus
        arr = np.stack([m for m, _ in stash])
        inv = np.stack([i for _, i in stash])
        idx = np.arange(len(stash))
        out = {}
        for li, lev in enumerate(self.levels):
            if arr.shape[0] == 0:
                break
            pts = arr[:, :, lev.beta_col] @ self.space.weights
            slots = np.fromiter(
                (lev.pos.get(int(p), -1) for p in pts), dtype=np.int64, count=len(pts))
            stuck = slots < 0
            if stuck.any():
                for j in np.nonzero(stuck)[0]:
                    out[int(idx[j])] = (arr[j], inv[j], li)
                keep = ~stuck
                arr, inv, idx, slots = arr[keep], inv[keep], idx[keep], slots[keep]
            if arr.shape[0] == 0:
                break
            arr = lev.trans_inv.view()[slots] @ arr % d
            inv = inv @ lev.trans.view()[slots] % d
        if arr.shape[0]:
            nontrivial = (arr != self.identity).any(axis=(1, 2))
            for j in np.nonzero(nontrivial)[0]:
                out[int(idx[j])] = (arr[j], inv[j], len(self.levels))
        return [out[k] for k in sorted(out)]

    def _install(self, mat, inv, level):
        if level == len(self.levels):
            beta = -1
            for j in range(self.n):
                col = mat[:, j]
                unit = np.zeros(self.n, dtype=np.int64)
                unit[j] = 1 % self.modulus
                if not np.array_equal(col, unit):
                    beta = j
                    break
            if beta < 0:
                raise AssertionError("residue is identity; nothing to install")
            self.levels.append(_Level(beta, self.n, self.space))
        self.gens.append((mat, inv, level))

    def _process_schreier(self):
        out = []
        d = self.modulus
        for li, lev in enumerate(self.levels):
            moved = True
            while moved:
                moved = False
                for gi, (gmat, ginv, glvl) in enumerate(self.gens):
                    if glvl < li:
                        continue
                    start = lev.cursors.get(gi, 0)
                    if start >= lev.orbit_size:
                        continue
                    moved = True
                    while start < lev.orbit_size:
                        end = min(start + _CHUNK, lev.orbit_size)
                        self._expand_block(li, lev, gmat, ginv, start, end, out)
                        start = end
                    lev.cursors[gi] = lev.orbit_size
        return out

    def _expand_block(self, li, lev, gmat, ginv, start, end, out):
        d = self.modulus
        cand = gmat @ lev.trans.view()[start:end] % d
        cand_inv = lev.trans_inv.view()[start:end] @ ginv % d
        pts = cand[:, :, lev.beta_col] @ self.space.weights
        known_j, known_slot = [], []
        new_j, new_pts = [], []
        base = lev.orbit_size
        local = {}
        for j, p in enumerate(pts):
            p = int(p)
            slot = lev.pos.get(p)
            if slot is None:
                slot = local.get(p)
            if slot is None:
                local[p] = base + len(new_j)
                new_j.append(j)
                new_pts.append(p)
            else:
                known_j.append(j)
                known_slot.append(slot)
        if new_j:
            sel = np.array(new_j)
            lev.points.append(np.array(new_pts, dtype=np.int64))
            lev.vecs.append(cand[sel][:, :, lev.beta_col])
            lev.trans.append(cand[sel])
            lev.trans_inv.append(cand_inv[sel])
            for off, p in enumerate(new_pts):
                lev.pos[p] = base + off
        if known_j:
            sel = np.array(known_j)
            slots = np.array(known_slot, dtype=np.int64)
            sg = lev.trans_inv.view()[slots] @ cand[sel] % d
            nontrivial = (sg != self.identity).any(axis=(1, 2))
            if nontrivial.any():
                sg_inv = cand_inv[sel] @ lev.trans.view()[slots] % d
                for j in np.nonzero(nontrivial)[0]:
                    out.append((sg[j], sg_inv[j]))

    # -- queries ---------------------------------------------------------

    def sift(self, mat):
        """(stuck level, residue); residue == identity iff mat is a member."""
        d = self.modulus
        h = np.asarray(mat, dtype=np.int64) % d
        for li, lev in enumerate(self.levels):
            pt = int(h[:, lev.beta_col] @ self.space.weights)
            slot = lev.pos.get(pt)
            if slot is None:
                return li, h
            h = lev.trans_inv.view()[slot] @ h % d
        return len(self.levels), h

    def member(self, mat):
        _, h = self.sift(mat)
        return bool(np.array_equal(h, self.identity))

    def member_mask(self, mats):
        """Vectorized membership for a stack of matrices (k, n, n)."""
        d = self.modulus
        arr = np.asarray(mats, dtype=np.int64) % d
        idx = np.arange(arr.shape[0])
        mask = np.zeros(arr.shape[0], dtype=bool)
        for lev in self.levels:
            if arr.shape[0] == 0:
                break
            pts = arr[:, :, lev.beta_col] @ self.space.weights
            slots = np.fromiter(
                (lev.pos.get(int(p), -1) for p in pts), dtype=np.int64, count=len(pts))
            keep = slots >= 0
            arr, idx, slots = arr[keep], idx[keep], slots[keep]
            if arr.shape[0] == 0:
                break
            arr = lev.trans_inv.view()[slots] @ arr % d
        if arr.shape[0]:
            ok = (arr == self.identity).all(axis=(1, 2))
            mask[idx[ok]] = True
        return mask

    def elements(self, bound=None):
        """All group elements as one (order, n, n) array, deterministic order."""
        if bound is not None and self._order > bound:
            raise BoundExceeded("order %d exceeds enumeration bound %d" % (self._order, bound))
        d = self.modulus
        arr = self.identity[None]
        for lev in self.levels:
            t = lev.trans.view()
            # membership decomposition is g = u_0 u_1 ... u_k, so deeper
            # transversals multiply on the right
            arr = np.matmul(arr[:, None], t[None, :]) % d
            arr = arr.reshape(-1, self.n, self.n)
        return arr

    def check(self):
        """Re-derive the Schreier condition from scratch (test support)."""
        d = self.modulus
        for g in self.input_gens:
            if not self.member(g):
                raise AssertionError("input generator fails membership")
        for li, lev in enumerate(self.levels):
            beta_vec = lev.vecs.view()[0]
            for slot in range(lev.orbit_size):
                u = lev.trans.view()[slot]
                if int(self.space.encode(u @ beta_vec % d)) != int(lev.points.view()[slot]):
                    raise AssertionError("transversal does not reach its point")
                if not np.array_equal(u @ lev.trans_inv.view()[slot] % d, self.identity):
                    raise AssertionError("stored inverse is wrong")
            for gi, (gmat, _, glvl) in enumerate(self.gens):
                if glvl < li:
                    continue
                cand = gmat @ lev.trans.view() % d
                pts = cand[:, :, lev.beta_col] @ self.space.weights
                for j, p in enumerate(pts):
                    slot = lev.pos.get(int(p))
                    if slot is None:
                        raise AssertionError("orbit not closed under visible generator")
                    sg = lev.trans_inv.view()[slot] @ cand[j] % d
                    stuck, res = self.sift(sg)
                    if not np.array_equal(res, self.identity):
                        raise AssertionError("Schreier generator fails to sift")
        return True


def intersection_order(a, b, orbit_guard=1_000_000, enum_bound=20_000):
    """|A ∩ B| for two chains over the same point space.

    If the smaller group is small enough its elements are enumerated and
    sifted through the other chain in batch.  Otherwise the smaller group's
    generators act on canonical coset representatives of the larger group:
    the representative of gB is found by descending B's chain, at each level
    multiplying by the transversal element whose base-point image is
    minimal.  That canonical form is a complete coset invariant, so the
    orbit of the trivial coset has size [S : S ∩ L] and the intersection
    order follows by orbit-stabilizer.
    """
    small, large = (a, b) if a.order() <= b.order() else (b, a)
    if small.order() <= enum_bound:
        elems = small.elements()
        return int(np.count_nonzero(large.member_mask(elems)))
    d = large.modulus
    start = _canonical_coset_rep(large, small.identity.copy())
    visited = {start.tobytes(): None}
    frontier = [start]
    gens = [m for m, _, _ in small.gens] or [small.identity]
    while frontier:
        nxt = []
        for rep in frontier:
            for g in gens:
                cand = _canonical_coset_rep(large, g @ rep % d)
                key = cand.tobytes()
                if key not in visited:
                    visited[key] = None
                    if len(visited) > orbit_guard:
                        raise OrbitGuardExceeded(
                            "coset orbit exceeds guard %d" % orbit_guard)
                    nxt.append(cand)
        frontier = nxt
    orbit = len(visited)
    if small.order() % orbit:
        raise AssertionError("orbit size does not divide group order")
    return small.order() // orbit


def _canonical_coset_rep(chain, g):
    d = chain.modulus
    for lev in chain.levels:
        imgs = lev.vecs.view() @ g.T % d
        pts = imgs @ chain.space.weights
        best = int(np.argmin(pts))
        g = g @ lev.trans.view()[best] % d
    return g


def element_period(mat, modulus, cap=1_000_000):
    """Multiplicative order of a matrix mod d (sequential, exact)."""
    mat = np.asarray(mat, dtype=np.int64) % modulus
    n = mat.shape[0]
    ident = np.eye(n, dtype=np.int64) % modulus
    h = mat
    k = 1
    while not np.array_equal(h, ident):
        h = h @ mat % modulus
        k += 1
        if k > cap:
            raise BoundExceeded("period exceeds cap %d" % cap)
    return k


def enumerate_small(mats, modulus, bound=1_000_000):
    """BFS closure of a matrix set mod d; raises BoundExceeded past bound.

    Returns the elements as one (size, n, n) array in discovery order.
    """
    mats = [np.asarray(m, dtype=np.int64) % modulus for m in mats]
    if not mats:
        raise ValueError("need at least one generator")
    n = mats[0].shape[0]
    ident = np.eye(n, dtype=np.int64) % modulus
    seen = {ident.tobytes(): 0}
    rows = [ident]
    frontier = ident[None]
    while frontier.shape[0]:
        produced = []
        for g in mats:
            produced.append(g @ frontier % modulus)
        produced = np.concatenate(produced)
        fresh = []
        for m in produced:
            key = m.tobytes()
            if key not in seen:
                seen[key] = len(rows)
                rows.append(m.copy())
                fresh.append(m)
                if len(rows) > bound:
                    raise BoundExceeded("enumeration exceeds bound %d" % bound)
        frontier = np.stack(fresh) if fresh else np.empty((0, n, n), dtype=np.int64)
    return np.stack(rows)


def as_permutations(mats, modulus, limit=2 ** 22):
    """Materialize the permutation action on Z_d^n (small spaces only)."""
    mats = [np.asarray(m, dtype=np.int64) % modulus for m in mats]
    n = mats[0].shape[0]
    space = PointSpace(modulus, n, limit=limit)
    vecs = space.decode(np.arange(space.size))
    out = []
    for m in mats:
        out.append(np.asarray(space.encode(vecs @ m.T % modulus), dtype=np.int32))
    return out


def permutation_order(perm):
    """Order of a permutation via cycle lengths (oracle for element_period)."""
    perm = np.asarray(perm)
    seen = np.zeros(perm.shape[0], dtype=bool)
    total = 1
    for start in range(perm.shape[0]):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = int(perm[j])
            length += 1
        total = lcm(total, length)
    return total
