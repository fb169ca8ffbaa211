"""MacNeille completion as the fixpoints of the Isbell adjunction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _sieves
from .limits import (
    _colimit_table,
    _singular_rows,
    certify_adjunction,
    is_total,
    left_adjoint,
    preserves_colimits,
    preserves_limits,
    right_adjoint,
)
from .presheaves import (
    DEFAULT_CAP,
    Presheaf,
    PresheafCategory,
    copresheaf_category,
    enumerate_copresheaves,
    presheaf_category,
    presheaf_from_mask,
    restrict,
)
from .qcategory import (
    QCategory,
    QFunctor,
    QObject,
    is_fully_faithful,
    is_iso,
    opposite_functor,
)
from .reports import Decision
from .topological import isbell_down, isbell_up


@dataclass
class MacNeilleResult:
    completion: PresheafCategory
    embedding: QFunctor
    cut_index: list[Presheaf]


def is_cut(E: QCategory, phi: Presheaf) -> bool:
    return isbell_down(E, isbell_up(E, phi)) == phi


def cuts(E: QCategory, cap: int = DEFAULT_CAP) -> list[Presheaf]:
    P, _ = presheaf_category(E, cap)
    return [p for p in P.presheaves if is_cut(E, p)]


def macneille(E: QCategory, cap: int = DEFAULT_CAP) -> MacNeilleResult:
    """``R E``: the full subcategory of ``P E`` on the cuts, with ``J = Y`` corestricted."""
    key = ("R", cap)
    hit = E._cache.get(key)
    if hit is None:
        found = cuts(E, cap)
        R = PresheafCategory(E, found)
        hit = E._cache[key] = MacNeilleResult(R, R.yoneda, found)
    return hit


def isbell_functors(E: QCategory, cap: int = DEFAULT_CAP) -> tuple[QFunctor, QFunctor]:
    """``up: P E -> P+ E`` and ``down: P+ E -> P E``, with ``up -| down``."""
    P, _ = presheaf_category(E, cap)
    Q, _ = copresheaf_category(E, cap)
    up = QFunctor(P, Q, {p.id: Q.id_of(isbell_up(E, p)) for p in P.presheaves})
    down = QFunctor(Q, P, {q.id: P.id_of(isbell_down(E, q)) for q in Q.copresheaves})
    return up, down


# ---------------------------------------------------------------- density


def _singular_masks(F: QFunctor) -> dict[str, tuple[str, int]]:
    out = {}
    for w in sorted({F.cod.extent(d) for d in F.cod.ids}):
        masks = _sieves.matrix_to_masks(_singular_rows(F, w))
        for d, m in zip(F.cod.objects_over(w), masks):
            out[d] = (w, m)
    return out


def is_dense(F: QFunctor, cap: int = DEFAULT_CAP) -> Decision:
    """Density of ``F: C -> D`` by three independent characterizations.

    (a) ``D(F, 1): D -> P C`` is fully faithful; (b) every ``d`` is the colimit
    of ``F`` weighted by ``D(F, d)``; (c) every ``d`` is some colimit of ``F``.
    """
    C, D = F.dom, F.cod
    sing = _singular_masks(F)
    # (a)
    bad_a = set()
    extents = sorted({D.extent(d) for d in D.ids})
    for u in extents:
        xs = D.objects_over(u)
        A = _sieves.masks_to_matrix([sing[d][1] for d in xs], _sieves.space(C, u).n)
        for w in extents:
            ys = D.objects_over(w)
            Bm = _sieves.masks_to_matrix([sing[d][1] for d in ys], _sieves.space(C, w).n)
            blocks = _sieves.hom_block(C, u, A, w, Bm)
            _, _, mats = D.hom_matrices(u, w)
            for t, blk in blocks.items():
                rows = np.nonzero((blk != mats[t]).any(axis=1))[0]
                bad_a.update(xs[i] for i in rows)
    # (b)
    order = list(D.ids)
    table = _colimit_table(F, [sing[d] for d in order])
    bad_b = {d for d, found in zip(order, table) if d not in found}
    # (c)
    P, _ = presheaf_category(C, cap)
    reached = set()
    for found in _colimit_table(F, [(p.extent, p.mask) for p in P.presheaves]):
        reached.update(found)
    bad_c = set(D.ids) - reached
    verdicts = {"fully_faithful": not bad_a, "canonical_colimit": not bad_b, "some_colimit": not bad_c}
    if len(set(verdicts.values())) != 1:
        raise AssertionError(f"density characterizations disagree: {verdicts}")
    failures = sorted(bad_b)
    return Decision(not failures, {}, failures, verdicts)


def is_codense(F: QFunctor, cap: int = DEFAULT_CAP) -> Decision:
    return is_dense(opposite_functor(F), cap)


# ---------------------------------------------------------------- cut-cocontinuity


def is_cut_cocontinuous(F: QFunctor, cap: int = DEFAULT_CAP) -> Decision:
    """Whether ``F*`` maps cuts of ``D`` to cuts of ``C``; cross-checked against
    the singular presheaves ``D(F, d)`` all being cuts."""
    C, D = F.dom, F.cod
    failures = [phi for phi in cuts(D, cap) if not is_cut(C, restrict(F, phi))]
    sing = _singular_masks(F)
    bad_sing = [d for d in D.ids if not is_cut(C, presheaf_from_mask(C, *sing[d]))]
    if bool(failures) != bool(bad_sing):
        raise AssertionError("cut-cocontinuity characterizations disagree")
    return Decision(not failures, {}, failures, {"singular_non_cuts": bad_sing})


def sharp(F: QFunctor, cap: int = DEFAULT_CAP) -> QFunctor:
    """``F#: R C -> D``, ``phi -> phi * F`` with the canonical witness.

    Raises ``ValueError`` when a colimit is missing or the result is not a
    left adjoint extending ``F``.
    """
    C, D = F.dom, F.cod
    M = macneille(C, cap)
    table = _colimit_table(F, [(p.extent, p.mask) for p in M.cut_index])
    omap = {}
    for p, found in zip(M.cut_index, table):
        if not found:
            raise ValueError(f"no colimit for the cut {p!r}; D is not total or F is not cut-cocontinuous")
        omap[p.id] = found[0]
    Fs = QFunctor(M.completion, D, omap)
    J = M.embedding
    if not all(is_iso(D, Fs(J(x)), F(x)) for x in C.ids):
        raise ValueError("F# J is not isomorphic to F")
    if not right_adjoint(Fs):
        raise ValueError("F# is not a left adjoint")
    return Fs


# ---------------------------------------------------------------- fixpoints


@dataclass
class FixResult:
    """Representation (b) with the checks against (a), (g) and reflectivity."""

    category: QCategory
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def fix_category(F: QFunctor, G: QFunctor) -> FixResult:
    """Fixpoints of an adjunction ``F -| G`` with ``F: C -> D``."""
    if not certify_adjunction(F, G):
        raise ValueError("the given functors do not form a certified adjunction")
    C, D = F.dom, F.cod
    # (b): objects isomorphic to their image under GF
    fixed = [x for x in C.ids if is_iso(C, x, G(F(x)))]
    Fix = C.full_subcategory(fixed)
    checks = {}
    # (a): full replete image of G
    image = {x for x in C.ids if any(is_iso(C, x, G(d)) for d in D.ids)}
    checks["replete_image"] = image == set(fixed)
    # (g): pairs (c, d) with c ~ Gd and d ~ Fc
    pairs = [(c, d) for c in C.ids for d in D.ids if is_iso(C, c, G(d)) and is_iso(D, d, F(c))]
    pids = {p: f"({p[0]},{p[1]})" for p in pairs}
    homs = {}
    agree = True
    for p in pairs:
        for q in pairs:
            h = C.hom(p[0], q[0])
            agree &= h.elems == D.hom(p[1], q[1]).elems
            homs[pids[p], pids[q]] = h
    Pairs = QCategory(C.base, [QObject(pids[p], C.extent(p[0])) for p in pairs], homs)
    proj = QFunctor(Pairs, Fix, {pids[p]: p[0] for p in pairs})
    checks["pair_homs_agree"] = agree
    checks["pairs_equivalent"] = is_fully_faithful(proj) and all(
        any(is_iso(C, x, proj(q)) for q in Pairs.ids) for x in fixed
    )
    # reflective: the inclusion has a left adjoint
    incl = QFunctor(Fix, C, {x: x for x in fixed})
    checks["reflective"] = bool(left_adjoint(incl))
    return FixResult(Fix, checks)


# ---------------------------------------------------------------- properties


@dataclass
class CompletionReport:
    checks: dict[str, bool]
    counterexamples: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __str__(self):
        return ", ".join(f"{k}={v}" for k, v in self.checks.items())


def completion_properties(E: QCategory, cap: int = DEFAULT_CAP) -> CompletionReport:
    M = macneille(E, cap)
    R, J = M.completion, M.embedding
    checks, cex = {}, {}
    tot = is_total(R, cap, method="auto")
    checks["total"] = tot.value
    if not tot:
        cex["total"] = tot.counterexample
    checks["fully_faithful"] = is_fully_faithful(J)
    dense, codense = is_dense(J, cap), is_codense(J, cap)
    checks["dense"], checks["codense"] = dense.value, codense.value
    pc, pl = preserves_colimits(J, cap), preserves_limits(J, cap)
    checks["preserves_colimits"], checks["preserves_limits"] = pc.value, pl.value
    for name, d in [("dense", dense), ("codense", codense), ("preserves_colimits", pc), ("preserves_limits", pl)]:
        if not d:
            cex[name] = d.counterexample
    if is_total(E, cap):
        surj = all(any(is_iso(R, p, J(x)) for x in E.ids) for p in R.ids)
        checks["equivalence_when_total"] = surj and checks["fully_faithful"]
    return CompletionReport(checks, cex)


def limit_closure(E: QCategory, cap: int = DEFAULT_CAP) -> list[str]:
    """Ids of the closure of the representables in ``P E`` under weighted limits."""
    P, Y = presheaf_category(E, cap)
    B = E.base
    comp = B.composition
    S = sorted(set(Y.object_map.values()))
    while True:
        sub = P.full_subcategory(S)
        new = set(S)
        for psi in enumerate_copresheaves(sub, cap=cap):
            z = psi.extent
            legs = [(P.by_id[s], g) for s in S for g in psi(s).elems]
            comps = {
                x: frozenset(
                    h for h in B.hom(E.extent(x), z) if all(comp[g, h] in s(x).elems for s, g in legs)
                )
                for x in E.ids
            }
            new.add(P.id_of(Presheaf(E, z, comps)))
        if new == set(S):
            return S
        S = sorted(new)

