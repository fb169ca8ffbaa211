"""Bitmask engine for sieves on a Q-category.

The sieves on ``C`` at extent ``z`` are the down-closed sets of the preorder
on elements ``(x, f)`` with ``f in B(|x|, z)`` generated by
``(x, f o g) <= (y, f)`` for ``g in C(x, y)``.  A sieve is stored as a Python
int whose bit ``i`` marks the ``i``-th element.  Cosieves on ``C`` are sieves
on ``C^op`` and use that category's spaces.
"""

from __future__ import annotations

import numpy as np

from .reports import CapExceededError

# a hom block larger than this many cells is refused rather than allocated
MAX_BLOCK_CELLS = 200_000_000
# rows of a hom block are computed in slices of about this many cells
CHUNK_CELLS = 4_000_000


class SieveSpace:
    def __init__(self, C, z: str):
        B = C.base
        self.C, self.z = C, z
        self.elems: list[tuple[str, str]] = []
        self.index: dict[tuple[str, str], int] = {}
        self.slices: dict[str, tuple[int, int]] = {}
        for x in C.ids:
            start = len(self.elems)
            for f in B.hom(C.extent(x), z):
                self.index[x, f] = len(self.elems)
                self.elems.append((x, f))
            self.slices[x] = (start, len(self.elems))
        self.n = len(self.elems)
        self.full = (1 << self.n) - 1
        self.below, self.above = self._order()

    def _order(self):
        C, z, n = self.C, self.z, self.n
        B = C.base
        M = np.zeros((n, n), dtype=bool)
        extents = sorted({C.extent(x) for x in C.ids})
        for u in extents:
            for w in extents:
                xs, ys, mats = C.hom_matrices(u, w)
                if not xs or not ys:
                    continue
                for f in B.hom(w, z):
                    rows = [self.index[y, f] for y in ys]
                    for t, mat in mats.items():
                        ft = B.compose(f, t)
                        cols = [self.index[x, ft] for x in xs]
                        M[np.ix_(rows, cols)] |= mat.T
        np.fill_diagonal(M, True)
        return matrix_to_masks(M), matrix_to_masks(M.T)

    def mask_of(self, components) -> int:
        m = 0
        index = self.index
        for x, fs in components.items():
            for f in fs:
                m |= 1 << index[x, f]
        return m

    def components_of(self, mask: int) -> dict[str, frozenset[str]]:
        out = {}
        elems = self.elems
        for x, (a, b) in self.slices.items():
            chunk = (mask >> a) & ((1 << (b - a)) - 1)
            fs = []
            while chunk:
                low = chunk & -chunk
                fs.append(elems[a + low.bit_length() - 1][1])
                chunk ^= low
            out[x] = frozenset(fs)
        return out

    def closure(self, mask: int) -> int:
        out = 0
        below = self.below
        for i in bits(mask):
            out |= below[i]
        return out

    def is_sieve(self, mask: int) -> bool:
        return self.closure(mask) == mask

    def generators(self, mask: int) -> list[int]:
        """One element per maximal class of ``mask``; they generate it."""
        gens = []
        covered = 0
        above = self.above
        for i in bits(mask):
            if (above[i] & mask) & ~self.below[i]:
                continue  # strictly below something in the sieve
            if covered >> i & 1:
                continue  # equivalent to an earlier generator
            gens.append(i)
            covered |= self.below[i] & above[i]
        return gens

    def downsets(self, cap: int) -> list[int]:
        """All sieves, by exclude/include recursion on the lowest element."""
        below, above = self.below, self.above
        out = []
        stack = [(0, self.full)]
        while stack:
            cur, uni = stack.pop()
            if not uni:
                out.append(cur)
                if len(out) > cap:
                    raise CapExceededError(cap)
                continue
            m = (uni & -uni).bit_length() - 1
            stack.append((cur | below[m], uni & ~below[m]))
            stack.append((cur, uni & ~above[m]))
        return out


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def matrix_to_masks(M: np.ndarray) -> list[int]:
    if M.shape[1] == 0:
        return [0] * M.shape[0]
    packed = np.packbits(M, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def masks_to_matrix(masks, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    if not masks or n == 0:
        return np.zeros((len(masks), n), dtype=bool)
    buf = b"".join(m.to_bytes(nbytes, "little") for m in masks)
    raw = np.frombuffer(buf, dtype=np.uint8).reshape(len(masks), nbytes)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :n].astype(bool)


def space(C, z: str) -> SieveSpace:
    key = ("space", z)
    sp = C._cache.get(key)
    if sp is None:
        sp = C._cache[key] = SieveSpace(C, z)
    return sp


def shift(C, t: str, z: str, w: str) -> list[int]:
    """Index map of ``(x, f) -> (x, t o f)`` from the ``z`` to the ``w`` space."""
    key = ("shift", t, z, w)
    hit = C._cache.get(key)
    if hit is None:
        src, dst = space(C, z), space(C, w)
        B = C.base
        hit = C._cache[key] = [dst.index[x, B.compose(t, f)] for x, f in src.elems]
    return hit


def transport(C, t: str, z: str, w: str, mask: int) -> int:
    sh = shift(C, t, z, w)
    out = 0
    for i in bits(mask):
        out |= 1 << sh[i]
    return out


def hom_mask(C, z: str, phi: int, w: str, psi: int) -> frozenset[str]:
    """``{t in B(z, w) | t o f in psi(x) for every f in phi(x)}``."""
    out = []
    for t in C.base.hom(z, w):
        sh = shift(C, t, z, w)
        if all(psi >> sh[i] & 1 for i in bits(phi)):
            out.append(t)
    return frozenset(out)


def hom_block(C, z: str, A: np.ndarray, w: str, Bm: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorised ``hom_mask`` for every row of ``A`` against every row of ``Bm``."""
    if A.shape[0] * Bm.shape[0] > MAX_BLOCK_CELLS:
        raise CapExceededError(MAX_BLOCK_CELLS, "hom table cells")
    n_z, n_w = space(C, z).n, space(C, w).n
    out = {}
    notB = (~Bm).astype(np.float32).T
    step = max(1, CHUNK_CELLS // max(1, Bm.shape[0]))
    for t in C.base.hom(z, w):
        T = np.zeros((n_z, n_w), dtype=np.float32)
        if n_z:
            T[np.arange(n_z), shift(C, t, z, w)] = 1.0
        res = np.empty((A.shape[0], Bm.shape[0]), dtype=bool)
        for a in range(0, A.shape[0], step):
            img = (A[a : a + step].astype(np.float32) @ T) > 0
            res[a : a + step] = (img.astype(np.float32) @ notB) == 0
        out[t] = res
    return out


def representable_masks(C, w: str) -> list[int]:
    """Masks of ``C(-, y)`` for the objects ``y`` over ``w``, in the ``w`` space."""
    sp = space(C, w)
    ys = C.objects_over(w)
    if not ys:
        return []
    key = ("reps", w)
    hit = C._cache.get(key)
    if hit is None:
        # column j of each hom matrix into fibre w is C(-, ys[j])
        M = np.zeros((len(ys), sp.n), dtype=bool)
        for u in {C.extent(x) for x in C.ids}:
            xs, _, mats = C.hom_matrices(u, w)
            for t, mat in mats.items():
                cols = [sp.index[x, t] for x in xs]
                M[:, cols] |= mat.T
        hit = C._cache[key] = matrix_to_masks(M)
    return hit
