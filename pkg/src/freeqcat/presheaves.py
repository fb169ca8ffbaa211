"""Presheaves and copresheaves on a Q-category, Yoneda, mu, F* and F_!."""

from __future__ import annotations

import hashlib
import json
from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _sieves
from .qcategory import (
    QCategory,
    QFunctor,
    QObject,
    _opposite_base,
    opposite_qcategory,
)
from .quantaloid import QHom, left_residual, q_compose, q_meet, right_residual
from .reports import CapExceededError, ValidationReport

DEFAULT_CAP = 20_000


@dataclass(frozen=True, eq=False)
class Presheaf:
    """A sieve: components ``phi(x) <= B(|x|, extent)`` closed under precomposition."""

    over: QCategory
    extent: str
    components: dict[str, QHom]

    def __post_init__(self):
        C = self.over
        comps = {}
        for x in C.ids:
            h = self.components.get(x)
            if h is None:
                h = QHom(C.extent(x), self.extent, frozenset())
            elif not isinstance(h, QHom):
                h = QHom(C.extent(x), self.extent, frozenset(h))
            comps[x] = h
        object.__setattr__(self, "components", comps)

    def __call__(self, x: str) -> QHom:
        return self.components[x]

    def __eq__(self, other):
        if not isinstance(other, Presheaf):
            return NotImplemented
        return (
            self.extent == other.extent
            and self.components == other.components
            and (self.over is other.over or self.over.ids == other.over.ids)
        )

    __hash__ = None

    @cached_property
    def mask(self) -> int:
        return _sieves.space(self.over, self.extent).mask_of(
            {x: h.elems for x, h in self.components.items()}
        )

    @cached_property
    def key(self) -> tuple:
        return (self.extent, tuple(tuple(sorted(self.components[x].elems)) for x in self.over.ids))

    @cached_property
    def id(self) -> str:
        return "p" + _digest(self.extent, self.components)

    def to_json(self) -> dict:
        return {
            "extent": self.extent,
            "components": {x: sorted(h.elems) for x, h in self.components.items() if h.elems},
        }

    @classmethod
    def from_json(cls, over: QCategory, data: dict) -> "Presheaf":
        return cls(over, data["extent"], {x: frozenset(v) for x, v in data["components"].items()})

    def __repr__(self):
        body = ", ".join(f"{x}:{{{','.join(sorted(h.elems))}}}" for x, h in self.components.items() if h.elems)
        return f"Presheaf(@{self.extent} {body})"


@dataclass(frozen=True, eq=False)
class Copresheaf:
    """A cosieve: components ``psi(x) <= B(extent, |x|)`` closed under postcomposition."""

    over: QCategory
    extent: str
    components: dict[str, QHom]

    def __post_init__(self):
        C = self.over
        comps = {}
        for x in C.ids:
            h = self.components.get(x)
            if h is None:
                h = QHom(self.extent, C.extent(x), frozenset())
            elif not isinstance(h, QHom):
                h = QHom(self.extent, C.extent(x), frozenset(h))
            comps[x] = h
        object.__setattr__(self, "components", comps)

    def __call__(self, x: str) -> QHom:
        return self.components[x]

    def __eq__(self, other):
        if not isinstance(other, Copresheaf):
            return NotImplemented
        return (
            self.extent == other.extent
            and self.components == other.components
            and (self.over is other.over or self.over.ids == other.over.ids)
        )

    __hash__ = None

    @cached_property
    def mask(self) -> int:
        # cosieves on C are sieves on C^op, which share object and morphism ids
        return _sieves.space(opposite_qcategory(self.over), self.extent).mask_of(
            {x: h.elems for x, h in self.components.items()}
        )

    @cached_property
    def key(self) -> tuple:
        return (self.extent, tuple(tuple(sorted(self.components[x].elems)) for x in self.over.ids))

    @cached_property
    def id(self) -> str:
        return "c" + _digest(self.extent, self.components)

    def as_op_presheaf(self) -> Presheaf:
        return Presheaf(
            opposite_qcategory(self.over), self.extent, {x: h.op() for x, h in self.components.items()}
        )

    @classmethod
    def from_op_presheaf(cls, phi: Presheaf) -> "Copresheaf":
        return cls(opposite_qcategory(phi.over), phi.extent, {x: h.op() for x, h in phi.components.items()})

    def to_json(self) -> dict:
        return {
            "extent": self.extent,
            "components": {x: sorted(h.elems) for x, h in self.components.items() if h.elems},
        }

    @classmethod
    def from_json(cls, over: QCategory, data: dict) -> "Copresheaf":
        return cls(over, data["extent"], {x: frozenset(v) for x, v in data["components"].items()})

    def __repr__(self):
        body = ", ".join(f"{x}:{{{','.join(sorted(h.elems))}}}" for x, h in self.components.items() if h.elems)
        return f"Copresheaf(@{self.extent} {body})"


def _digest(extent, components) -> str:
    canon = json.dumps(
        {"extent": extent, "components": {x: sorted(h.elems) for x, h in components.items() if h.elems}},
        sort_keys=True,
    )
    return hashlib.sha1(canon.encode()).hexdigest()[:12]


def presheaf_from_mask(C: QCategory, z: str, mask: int) -> Presheaf:
    comps = _sieves.space(C, z).components_of(mask)
    phi = Presheaf(C, z, comps)
    phi.__dict__["mask"] = mask
    return phi


def copresheaf_from_mask(C: QCategory, z: str, mask: int) -> Copresheaf:
    comps = _sieves.space(opposite_qcategory(C), z).components_of(mask)
    psi = Copresheaf(C, z, comps)
    psi.__dict__["mask"] = mask
    return psi


def validate_presheaf(phi: Presheaf) -> ValidationReport:
    report = ValidationReport()
    C = phi.over
    B = C.base
    for x, h in phi.components.items():
        if (h.src, h.dst) != (C.extent(x), phi.extent):
            report.add("component-mistyped", (x,))
        elif not h.elems <= set(B.hom(h.src, h.dst)):
            report.add("component-outside-base", (x,))
    if report:
        return report
    for x in C.ids:
        for y in C.ids:
            extra = q_compose(B, phi(y), C.hom(x, y)).elems - phi(x).elems
            for f in sorted(extra):
                report.add("sieve-closure", (x, y, f))
    return report


def validate_copresheaf(psi: Copresheaf) -> ValidationReport:
    report = ValidationReport()
    C = psi.over
    B = C.base
    for x, h in psi.components.items():
        if (h.src, h.dst) != (psi.extent, C.extent(x)):
            report.add("component-mistyped", (x,))
        elif not h.elems <= set(B.hom(h.src, h.dst)):
            report.add("component-outside-base", (x,))
    if report:
        return report
    for x in C.ids:
        for y in C.ids:
            extra = q_compose(B, C.hom(x, y), psi(x)).elems - psi(y).elems
            for f in sorted(extra):
                report.add("cosieve-closure", (x, y, f))
    return report


def representable(C: QCategory, x: str) -> Presheaf:
    """``C(-, x)``."""
    return Presheaf(C, C.extent(x), {y: C.hom(y, x) for y in C.ids})


def corepresentable(C: QCategory, x: str) -> Copresheaf:
    """``C(x, -)``."""
    return Copresheaf(C, C.extent(x), {y: C.hom(x, y) for y in C.ids})


def _extents(C: QCategory, z):
    if z is not None:
        if not C.base.has_object(z):
            raise KeyError(f"unknown base object {z!r}")
        return [z]
    return list(C.base.objects)


def enumerate_presheaf_masks(C: QCategory, z: str | None = None, cap: int = DEFAULT_CAP):
    """``[(extent, mask), ...]`` for every sieve, capped in total."""
    out = []
    for w in _extents(C, z):
        remaining = cap - len(out)
        try:
            masks = _sieves.space(C, w).downsets(remaining)
        except CapExceededError:
            raise CapExceededError(cap) from None
        out.extend((w, m) for m in masks)
    return out


def enumerate_presheaves(C: QCategory, z: str | None = None, cap: int = DEFAULT_CAP) -> list[Presheaf]:
    found = [presheaf_from_mask(C, w, m) for w, m in enumerate_presheaf_masks(C, z, cap)]
    found.sort(key=lambda p: p.key)
    return found


def enumerate_copresheaves(C: QCategory, z: str | None = None, cap: int = DEFAULT_CAP) -> list[Copresheaf]:
    op = opposite_qcategory(C)
    found = [copresheaf_from_mask(C, w, m) for w, m in enumerate_presheaf_masks(op, z, cap)]
    found.sort(key=lambda p: p.key)
    return found


def presheaf_hom(phi: Presheaf, psi: Presheaf) -> QHom:
    """``P C(phi, psi)``: the meet over ``x`` of ``[phi(x), psi(x)]``."""
    C = phi.over
    B = C.base
    return q_meet(
        B,
        [left_residual(B, phi(x), psi(x)) for x in C.ids],
        src=phi.extent,
        dst=psi.extent,
    )


def copresheaf_hom(phi: Copresheaf, psi: Copresheaf) -> QHom:
    """``P+ C(phi, psi)``: the meet over ``x`` of ``{psi(x), phi(x)}``."""
    C = phi.over
    B = C.base
    return q_meet(
        B,
        [right_residual(B, psi(x), phi(x)) for x in C.ids],
        src=phi.extent,
        dst=psi.extent,
    )


def fast_presheaf_hom(phi: Presheaf, psi: Presheaf) -> QHom:
    C = phi.over
    return QHom(phi.extent, psi.extent, _sieves.hom_mask(C, phi.extent, phi.mask, psi.extent, psi.mask))


def fast_copresheaf_hom(phi: Copresheaf, psi: Copresheaf) -> QHom:
    op = opposite_qcategory(phi.over)
    return QHom(phi.extent, psi.extent, _sieves.hom_mask(op, psi.extent, psi.mask, phi.extent, phi.mask))


class _PresheafHoms(Mapping):
    def __init__(self, P: "PresheafCategory"):
        self.P = P
        self.memo = {}

    def __getitem__(self, key):
        hit = self.memo.get(key)
        if hit is None:
            a, b = key
            pa, pb = self.P.by_id[a], self.P.by_id[b]
            hit = self.memo[key] = QHom(
                pa.extent, pb.extent, _sieves.hom_mask(self.P.over, pa.extent, pa.mask, pb.extent, pb.mask)
            )
        return hit

    def __iter__(self):
        ids = self.P.ids
        return ((a, b) for a in ids for b in ids)

    def __len__(self):
        return len(self.P.ids) ** 2


class PresheafCategory(QCategory):
    """``P C`` with its presheaves in canonical order and the Yoneda embedding."""

    def __init__(self, over: QCategory, presheaves: list[Presheaf]):
        self.over = over
        self.presheaves = presheaves
        self.by_id = {}
        for p in presheaves:
            if p.id in self.by_id:
                raise RuntimeError(f"presheaf id collision on {p.id}")
            self.by_id[p.id] = p
        self._by_mask = {(p.extent, p.mask): p.id for p in presheaves}
        super().__init__(over.base, [QObject(p.id, p.extent) for p in presheaves], _PresheafHoms(self))

    def id_of(self, phi) -> str:
        return self._by_mask[phi.extent, phi.mask]

    def presheaf(self, pid: str) -> Presheaf:
        return self.by_id[pid]

    def hom_matrices(self, u, w):
        key = ("hm", u, w)
        hit = self._cache.get(key)
        if hit is None:
            xs, ys = self.objects_over(u), self.objects_over(w)
            A = _sieves.masks_to_matrix([self.by_id[x].mask for x in xs], _sieves.space(self.over, u).n)
            Bm = _sieves.masks_to_matrix([self.by_id[y].mask for y in ys], _sieves.space(self.over, w).n)
            hit = self._cache[key] = (xs, ys, _sieves.hom_block(self.over, u, A, w, Bm))
        return hit

    def hom_rows(self, xs, w):
        if not xs:
            return {}
        u = self.extent(xs[0])
        ys = self.objects_over(w)
        A = _sieves.masks_to_matrix([self.by_id[x].mask for x in xs], _sieves.space(self.over, u).n)
        Bm = _sieves.masks_to_matrix([self.by_id[y].mask for y in ys], _sieves.space(self.over, w).n)
        return _sieves.hom_block(self.over, u, A, w, Bm)

    @cached_property
    def yoneda(self) -> QFunctor:
        C = self.over
        return QFunctor(C, self, {x: self.id_of(representable(C, x)) for x in C.ids})


def presheaf_category(C: QCategory, cap: int = DEFAULT_CAP) -> tuple[PresheafCategory, QFunctor]:
    """``(P C, Y)``; cached on ``C`` per cap."""
    key = ("P", cap)
    P = C._cache.get(key)
    if P is None:
        P = C._cache[key] = PresheafCategory(C, enumerate_presheaves(C, cap=cap))
    return P, P.yoneda


class _CopresheafHoms(Mapping):
    def __init__(self, Q: "CopresheafCategory"):
        self.Q = Q

    def __getitem__(self, key):
        a, b = key
        to_p = self.Q._to_p
        return self.Q.op_presheaves.hom(to_p[b], to_p[a]).op()

    def __iter__(self):
        ids = self.Q.ids
        return ((a, b) for a in ids for b in ids)

    def __len__(self):
        return len(self.Q.ids) ** 2


class CopresheafCategory(QCategory):
    """``P+ C``, built as ``(P(C^op))^op``."""

    def __init__(self, over: QCategory, op_presheaves: PresheafCategory):
        self.over = over
        self.op_presheaves = op_presheaves
        self.copresheaves = []
        self._to_p, self._from_p = {}, {}
        for p in op_presheaves.presheaves:
            c = Copresheaf.from_op_presheaf(p)
            c.__dict__["mask"] = p.mask
            self.copresheaves.append(c)
            self._to_p[c.id] = p.id
            self._from_p[p.id] = c.id
        self.by_id = {c.id: c for c in self.copresheaves}
        super().__init__(
            _opposite_base(op_presheaves.base),
            [QObject(c.id, c.extent) for c in self.copresheaves],
            _CopresheafHoms(self),
        )

    def id_of(self, psi: Copresheaf) -> str:
        return self._from_p[self.op_presheaves._by_mask[psi.extent, psi.mask]]

    def copresheaf(self, cid: str) -> Copresheaf:
        return self.by_id[cid]

    def hom_matrices(self, u, w):
        ys, xs, mats = self.op_presheaves.hom_matrices(w, u)
        fp = self._from_p
        return [fp[x] for x in xs], [fp[y] for y in ys], {t: m.T for t, m in mats.items()}

    @cached_property
    def yoneda(self) -> QFunctor:
        C = self.over
        return QFunctor(C, self, {x: self.id_of(corepresentable(C, x)) for x in C.ids})


def copresheaf_category(C: QCategory, cap: int = DEFAULT_CAP) -> tuple[CopresheafCategory, QFunctor]:
    """``(P+ C, Y+)``."""
    key = ("Pdag", cap)
    Q = C._cache.get(key)
    if Q is None:
        op = opposite_qcategory(C)
        Pop, _ = presheaf_category(op, cap)
        Q = C._cache[key] = CopresheafCategory(C, Pop)
    return Q, Q.yoneda


def mu(E: QCategory, Phi: Presheaf) -> Presheaf:
    """``mu(Phi)(x) = join over phi of Phi(phi) o phi(x)`` for ``Phi`` a presheaf on ``P E``."""
    P = Phi.over
    if not isinstance(P, PresheafCategory) or P.over is not E:
        raise ValueError("Phi must be a presheaf on a presheaf category of E")
    B = E.base
    comps = {x: set() for x in E.ids}
    for pid, u in Phi.components.items():
        if not u.elems:
            continue
        phi = P.by_id[pid]
        for x in E.ids:
            comps[x] |= q_compose(B, u, phi(x)).elems
    return Presheaf(E, Phi.extent, {x: frozenset(v) for x, v in comps.items()})


def restrict(F: QFunctor, phi: Presheaf) -> Presheaf:
    """``F* phi = phi(F -)``."""
    out = Presheaf(F.dom, phi.extent, {x: phi(F(x)) for x in F.dom.ids})
    assert _sieves.space(F.dom, out.extent).is_sieve(out.mask), "F* produced a non-sieve"
    return out


def restrict_copresheaf(F: QFunctor, psi: Copresheaf) -> Copresheaf:
    return Copresheaf(F.dom, psi.extent, {x: psi(F(x)) for x in F.dom.ids})


def left_extend(F: QFunctor, psi: Presheaf) -> Presheaf:
    """``F_! psi (c) = join over x of psi(x) o C(c, F x)``."""
    C = F.cod
    B = C.base
    comps = {}
    for c in C.ids:
        acc = set()
        for x in F.dom.ids:
            acc |= q_compose(B, psi(x), C.hom(c, F(x))).elems
        comps[c] = frozenset(acc)
    return Presheaf(C, psi.extent, comps)


def presheaf_matrix(C: QCategory, z: str, presheaves) -> np.ndarray:
    return _sieves.masks_to_matrix([p.mask for p in presheaves], _sieves.space(C, z).n)
