"""Weighted (co)limits, totality, adjoints and colimit preservation.

Colimit search compares rows: an object ``v`` over ``z`` is a colimit of
``F`` weighted by ``phi`` exactly when, for every ``c`` and every ``theta`` in
``B(z, |c|)``, membership of ``theta`` in ``C(v, c)`` agrees with membership in
``P I(phi, C(F, c))``.  Both sides are flattened into boolean rows and matched
by hashing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _sieves
from .presheaves import (
    DEFAULT_CAP,
    Copresheaf,
    Presheaf,
    copresheaf_from_mask,
    presheaf_category,
)
from .qcategory import (
    QCategory,
    QFunctor,
    identity_functor,
    opposite_functor,
    opposite_qcategory,
)
from .quantaloid import QHom
from .reports import CapExceededError, Decision


@dataclass
class ColimitWitness:
    """An object ``v`` with the verified table ``certificate[c] = C(v, c)``.

    For limits the table holds ``C(c, v)`` instead.
    """

    object: str
    certificate: dict[str, QHom] = field(default_factory=dict, repr=False)


@dataclass
class AdjointResult:
    functor: QFunctor | None
    sources: dict[str, str] = field(default_factory=dict)
    counterexample: str | None = None
    certified: bool = False
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.functor is not None


def _is_identity(F: QFunctor) -> bool:
    return F.dom is F.cod and all(x == y for x, y in F.object_map.items())


def singular(F: QFunctor, c: str) -> Presheaf:
    """``C(F-, c)`` as a presheaf on the domain of ``F``."""
    C = F.cod
    return Presheaf(F.dom, C.extent(c), {x: C.hom(F(x), c) for x in F.dom.ids})


def _singular_rows(F: QFunctor, w: str) -> np.ndarray:
    """Row ``j`` is the mask of ``C(F-, c_j)`` for the ``c_j`` over ``w``."""
    I, C = F.dom, F.cod
    sp = _sieves.space(I, w)
    cs = C.objects_over(w)
    if _is_identity(F):
        return _sieves.masks_to_matrix(_sieves.representable_masks(C, w), sp.n)
    M = np.zeros((len(cs), sp.n), dtype=bool)
    if not cs:
        return M
    for u in sorted({I.extent(x) for x in I.ids}):
        xs = I.objects_over(u)
        for t, mat in C.hom_rows([F(x) for x in xs], w).items():
            cols = [sp.index[x, t] for x in xs]
            M[:, cols] |= mat.T
    return M


def _pack(rows: np.ndarray) -> list[bytes]:
    if rows.shape[1] == 0:
        return [b""] * rows.shape[0]
    packed = np.packbits(rows, axis=1)
    return [r.tobytes() for r in packed]


def _object_rows(C: QCategory, z: str, extents) -> np.ndarray:
    """Rows of ``C(v, -)`` for ``v`` over ``z``, flattened over ``(w, theta)``."""
    parts = []
    for w in extents:
        _, ys, mats = C.hom_matrices(z, w)
        if not ys:
            continue
        for t in sorted(mats):
            parts.append(mats[t])
    n = len(C.objects_over(z))
    return np.hstack(parts) if parts else np.zeros((n, 0), dtype=bool)


def _colimit_table(F: QFunctor, weights) -> list[list[str]]:
    """Sorted colimit witnesses for each ``(extent, mask)`` weight on ``F.dom``."""
    I, C = F.dom, F.cod
    extents = sorted({C.extent(c) for c in C.ids})
    sing = {w: _singular_rows(F, w) for w in extents}
    by_z: dict[str, list[int]] = {}
    for i, (z, _) in enumerate(weights):
        by_z.setdefault(z, []).append(i)
    out: list[list[str]] = [[] for _ in weights]
    for z, idxs in by_z.items():
        vs = C.objects_over(z)
        if not vs:
            continue
        A = _sieves.masks_to_matrix([weights[i][1] for i in idxs], _sieves.space(I, z).n)
        parts = []
        for w in extents:
            if not C.objects_over(w):
                continue
            blocks = _sieves.hom_block(I, z, A, w, sing[w])
            for t in sorted(blocks):
                parts.append(blocks[t])
        H = np.hstack(parts) if parts else np.zeros((len(idxs), 0), dtype=bool)
        lookup: dict[bytes, list[str]] = {}
        for v, key in zip(vs, _pack(_object_rows(C, z, extents))):
            lookup.setdefault(key, []).append(v)
        for i, key in zip(idxs, _pack(H)):
            out[i] = sorted(lookup.get(key, []))
    return out


def _certificate(C: QCategory, v: str) -> dict[str, QHom]:
    return {c: C.hom(v, c) for c in C.ids}


def weighted_colimit(phi: Presheaf, F: QFunctor) -> list[ColimitWitness]:
    """Every ``v`` over ``|phi|`` with ``C(v, c) = P I(phi, C(F, c))`` for all ``c``."""
    if phi.over is not F.dom and phi.over.ids != F.dom.ids:
        raise ValueError("the weight must be a presheaf on the domain of F")
    if phi.over is not F.dom:
        phi = Presheaf(F.dom, phi.extent, phi.components)
    (found,) = _colimit_table(F, [(phi.extent, phi.mask)])
    C = F.cod
    out = []
    for v in found:
        cert = _certificate(C, v)
        for c in C.ids:
            target = _sieves.hom_mask(F.dom, phi.extent, phi.mask, C.extent(c), singular(F, c).mask)
            if cert[c].elems != target:
                raise AssertionError(f"colimit certificate failed at {c!r}")
        out.append(ColimitWitness(v, cert))
    return out


def weighted_limit(psi: Copresheaf, F: QFunctor) -> list[ColimitWitness]:
    """Every ``v`` over ``|psi|`` with ``C(c, v) = P+ I(C(c, F-), psi)`` for all ``c``.

    Computed as a colimit in the opposite categories.
    """
    Fop = opposite_functor(F)
    phi = psi.as_op_presheaf()
    phi = Presheaf(Fop.dom, phi.extent, phi.components)
    out = []
    for wit in weighted_colimit(phi, Fop):
        out.append(ColimitWitness(wit.object, {c: h.op() for c, h in wit.certificate.items()}))
    return out


def is_total(E: QCategory, cap: int = DEFAULT_CAP, method: str = "exhaustive") -> Decision:
    """Whether every presheaf on ``E`` has a colimit of the identity.

    ``method`` is ``"exhaustive"`` (enumerate P E), ``"local"`` (check the
    colimits of one-element sieves, the empty sieves and binary joins of
    objects, which together generate all sieves) or ``"auto"`` (exhaustive,
    falling back to local when P E exceeds the cap).
    """
    if method == "local":
        return _is_total_local(E)
    if method == "auto":
        try:
            return _is_total_exhaustive(E, cap)
        except CapExceededError:
            return _is_total_local(E)
    if method != "exhaustive":
        raise ValueError(f"unknown method {method!r}")
    return _is_total_exhaustive(E, cap)


def _is_total_exhaustive(E: QCategory, cap: int) -> Decision:
    P, _ = presheaf_category(E, cap)
    weights = [(p.extent, p.mask) for p in P.presheaves]
    table = _colimit_table(identity_functor(E), weights)
    witnesses, failures = {}, []
    for p, found in zip(P.presheaves, table):
        if found:
            witnesses[p.id] = found[0]
        else:
            failures.append(p)
    return Decision(not failures, witnesses, failures, {"method": "exhaustive", "checked": len(weights)})


def _is_total_local(E: QCategory) -> Decision:
    B = E.base
    extents = sorted({E.extent(c) for c in E.ids})
    failures = []
    for z in B.objects:
        vs = E.objects_over(z)
        if not vs:
            failures.append(("empty", z))
            continue
        R = _object_rows(E, z, extents)
        present = set(_pack(R))
        if _pack(np.ones((1, R.shape[1]), dtype=bool))[0] not in present:
            failures.append(("empty", z))
        for i, v in enumerate(vs):
            for j, key in enumerate(_pack(R[i] & R[i + 1 :]), start=i + 1):
                if key not in present:
                    failures.append(("join", z, v, vs[j]))
        for x in E.ids:
            u = E.extent(x)
            for g in B.hom(u, z):
                parts = []
                for w in extents:
                    xs, ys, mats = E.hom_matrices(u, w)
                    if not ys:
                        continue
                    i = xs.index(x)
                    for t in sorted(B.hom(z, w)):
                        parts.append(mats[B.compose(t, g)][i])
                row = np.hstack(parts)[None, :] if parts else np.zeros((1, 0), dtype=bool)
                if _pack(row)[0] not in present:
                    failures.append(("generated", z, x, g))
    return Decision(not failures, {}, failures, {"method": "local"})


def is_cototal(E: QCategory, cap: int = DEFAULT_CAP, method: str = "exhaustive") -> Decision:
    """Totality of ``E^op``; failures are reported as copresheaves on ``E``."""
    d = is_total(opposite_qcategory(E), cap, method)
    failures = [
        copresheaf_from_mask(E, p.extent, p.mask) if isinstance(p, Presheaf) else p for p in d.failures
    ]
    return Decision(d.value, d.witnesses, failures, d.detail)


def right_adjoint(F: QFunctor) -> AdjointResult:
    """A right adjoint ``G`` of ``F: C -> D``, one object ``Gd`` at a time.

    ``Gd`` is first taken as the canonical colimit ``D(F, d) * 1_C`` and kept
    if ``C(c, Gd) = D(Fc, d)`` for every ``c``; otherwise the objects over
    ``|d|`` are searched for one representing ``D(F-, d)``.
    """
    C, D = F.dom, F.cod
    rows, order = {}, []
    for w in sorted({D.extent(d) for d in D.ids}):
        M = _singular_rows(F, w)
        masks = _sieves.matrix_to_masks(M)
        for d, m in zip(D.objects_over(w), masks):
            rows[d] = (w, m)
    order = list(D.ids)
    table = _colimit_table(identity_functor(C), [rows[d] for d in order])
    reps: dict[str, dict[int, str]] = {}
    rep_of: dict[str, int] = {}
    for w in {C.extent(c) for c in C.ids}:
        idx = {}
        for c, m in zip(C.objects_over(w), _sieves.representable_masks(C, w)):
            rep_of[c] = m
            if m not in idx or c < idx[m]:
                idx[m] = c
        reps[w] = idx
    omap, sources, failures = {}, {}, []
    for d, found in zip(order, table):
        w, m = rows[d]
        if found and rep_of[found[0]] == m:
            omap[d], sources[d] = found[0], "formula"
            continue
        hit = reps.get(w, {}).get(m)
        if hit is not None:
            omap[d], sources[d] = hit, "search"
        else:
            failures.append(d)
    if failures:
        return AdjointResult(None, sources, failures[0], False, failures)
    G = QFunctor(D, C, omap)
    return AdjointResult(G, sources, None, certify_adjunction(F, G), [])


def left_adjoint(F: QFunctor) -> AdjointResult:
    """A left adjoint of ``F``, found as a right adjoint of ``F^op``."""
    res = right_adjoint(opposite_functor(F))
    if res.functor is None:
        return res
    L = QFunctor(F.cod, F.dom, dict(res.functor.object_map))
    return AdjointResult(L, res.sources, None, certify_adjunction(L, F), [])


def certify_adjunction(F: QFunctor, G: QFunctor) -> bool:
    """``F -| G``: hom equality, unit and counit."""
    C, D = F.dom, F.cod
    B = C.base
    for c in C.ids:
        if B.identity(C.extent(c)) not in C.hom(c, G(F(c))).elems:
            return False
    for d in D.ids:
        if B.identity(D.extent(d)) not in D.hom(F(G(d)), d).elems:
            return False
        for c in C.ids:
            if D.hom(F(c), d) != C.hom(c, G(d)):
                return False
    return True


def preserves_colimits(F: QFunctor, cap: int = DEFAULT_CAP) -> Decision:
    """Whether ``F v`` is a colimit of ``phi * F`` for every colimit ``v`` of ``phi * 1``.

    Failures are ``(phi, v)`` pairs.
    """
    C = F.dom
    P, _ = presheaf_category(C, cap)
    weights = [(p.extent, p.mask) for p in P.presheaves]
    own = _colimit_table(identity_functor(C), weights)
    image = _colimit_table(F, weights)
    witnesses, failures = {}, []
    for p, vs, ws in zip(P.presheaves, own, image):
        for v in vs:
            if F(v) in ws:
                witnesses.setdefault(p.id, F(v))
            else:
                failures.append((p, v))
    return Decision(not failures, witnesses, failures, {"checked": len(weights)})


def preserves_limits(F: QFunctor, cap: int = DEFAULT_CAP) -> Decision:
    d = preserves_colimits(opposite_functor(F), cap)
    failures = [(copresheaf_from_mask(F.dom, p.extent, p.mask), v) for p, v in d.failures]
    return Decision(d.value, d.witnesses, failures, d.detail)


def colimit_witness_table(F: QFunctor, presheaves) -> list[list[str]]:
    """Sorted colimit witnesses of ``F`` for each presheaf, in bulk."""
    return _colimit_table(F, [(p.extent, p.mask) for p in presheaves])

