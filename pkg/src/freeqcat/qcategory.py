"""Categories enriched in a free quantaloid, i.e. faithful functors into B."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from itertools import product

import numpy as np

from .base import FinCategory, Morphism, opposite_category, validate_category
from .quantaloid import QHom, q_compose
from .reports import NotFaithfulError, ValidationReport


@dataclass(frozen=True)
class QObject:
    id: str
    extent: str


class QCategory:
    """Objects typed by base objects, with homs ``E(x, y) <= B(|x|, |y|)``.

    ``homs`` may be any mapping keyed by ``(x, y)``; missing keys are empty.
    """

    def __init__(self, base: FinCategory, objects, homs: Mapping | None = None):
        self.base = base
        self.objects = tuple(o if isinstance(o, QObject) else QObject(*o) for o in objects)
        self.homs = {} if homs is None else homs
        self._extent = {o.id: o.extent for o in self.objects}
        if len(self._extent) != len(self.objects):
            dup = [o.id for o in self.objects]
            dup = sorted({x for x in dup if dup.count(x) > 1})
            raise ValueError(f"duplicate object ids: {dup}")
        self._cache = {}

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(o.id for o in self.objects)

    def extent(self, x: str) -> str:
        return self._extent[x]

    def has_object(self, x: str) -> bool:
        return x in self._extent

    def objects_over(self, z: str) -> list[str]:
        fibres = self._cache.get("fibres")
        if fibres is None:
            fibres = {}
            for o in self.objects:
                fibres.setdefault(o.extent, []).append(o.id)
            self._cache["fibres"] = fibres
        return fibres.get(z, [])

    def hom_matrices(self, u: str, w: str):
        """Bulk view of the homs from fibre ``u`` to fibre ``w``.

        Returns ``(xs, ys, mats)`` where ``mats[theta][i, j]`` says whether
        ``theta`` lies in ``E(xs[i], ys[j])``.
        """
        key = ("hm", u, w)
        hit = self._cache.get(key)
        if hit is None:
            xs, ys = self.objects_over(u), self.objects_over(w)
            mats = {t: np.zeros((len(xs), len(ys)), dtype=bool) for t in self.base.hom(u, w)}
            for i, x in enumerate(xs):
                for j, y in enumerate(ys):
                    for t in self.hom(x, y).elems:
                        mats[t][i, j] = True
            hit = self._cache[key] = (xs, ys, mats)
        return hit

    def hom_rows(self, xs, w: str):
        """``{theta: M}`` with ``M[i, j]`` true iff ``theta`` lies in ``E(xs[i], ys[j])``.

        ``xs`` share one extent and ``ys`` is the fibre over ``w``.
        """
        ys = self.objects_over(w)
        if not xs:
            return {}
        u = self.extent(xs[0])
        mats = {t: np.zeros((len(xs), len(ys)), dtype=bool) for t in self.base.hom(u, w)}
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                for t in self.hom(x, y).elems:
                    mats[t][i, j] = True
        return mats

    def hom(self, x: str, y: str) -> QHom:
        h = self.homs.get((x, y))
        if h is None:
            return QHom(self._extent[x], self._extent[y], frozenset())
        return h

    def __len__(self):
        return len(self.objects)

    def __eq__(self, other):
        if not isinstance(other, QCategory):
            return NotImplemented
        if self.objects != other.objects or self.base != other.base:
            return False
        return all(self.hom(x, y) == other.hom(x, y) for x, y in product(self.ids, repeat=2))

    __hash__ = None

    def __repr__(self):
        return f"QCategory({len(self.objects)} objects over {self.base!r})"

    def full_subcategory(self, ids) -> "QCategory":
        keep = set(ids)
        objs = [o for o in self.objects if o.id in keep]
        homs = _SubHoms(self, keep)
        return QCategory(self.base, objs, homs)

    def materialize(self) -> "QCategory":
        """A copy with every nonempty hom stored in a plain dict."""
        homs = {}
        for x, y in product(self.ids, repeat=2):
            h = self.hom(x, y)
            if h.elems:
                homs[x, y] = h
        return QCategory(self.base, self.objects, homs)

    def to_json(self, base_ref=None) -> dict:
        homs = {}
        for x, y in product(self.ids, repeat=2):
            h = self.hom(x, y)
            if h.elems:
                if "|" in x or "|" in y:
                    raise ValueError("object ids containing '|' cannot be serialized")
                homs[f"{x}|{y}"] = sorted(h.elems)
        return {
            "base": self.base.to_json() if base_ref is None else base_ref,
            "objects": [{"id": o.id, "extent": o.extent} for o in self.objects],
            "homs": dict(sorted(homs.items())),
        }

    @classmethod
    def from_json(cls, data: dict, base: FinCategory | None = None) -> "QCategory":
        if base is None:
            base = FinCategory.from_json(data["base"])
        objects = [QObject(o["id"], o["extent"]) for o in data["objects"]]
        extent = {o.id: o.extent for o in objects}
        homs = {}
        for key, elems in data.get("homs", {}).items():
            x, y = key.split("|")
            homs[x, y] = QHom(extent[x], extent[y], frozenset(elems))
        return cls(base, objects, homs)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


class _SubHoms(Mapping):
    def __init__(self, parent: QCategory, keep: set):
        self.parent = parent
        self.keep = keep

    def __getitem__(self, key):
        x, y = key
        if x not in self.keep or y not in self.keep:
            raise KeyError(key)
        return self.parent.hom(x, y)

    def __iter__(self):
        ids = [x for x in self.parent.ids if x in self.keep]
        return iter(product(ids, repeat=2))

    def __len__(self):
        return len(self.keep) ** 2


@dataclass(frozen=True, eq=False)
class QFunctor:
    dom: QCategory
    cod: QCategory
    object_map: dict[str, str]

    def __call__(self, x: str) -> str:
        return self.object_map[x]

    def __eq__(self, other):
        if not isinstance(other, QFunctor):
            return NotImplemented
        return self.object_map == other.object_map and self.dom is other.dom and self.cod is other.cod

    __hash__ = None

    def __repr__(self):
        return f"QFunctor({len(self.object_map)} objects)"

    def to_json(self) -> dict:
        return {"object_map": dict(sorted(self.object_map.items()))}


def identity_functor(c: QCategory) -> QFunctor:
    return QFunctor(c, c, {x: x for x in c.ids})


def compose_functors(g: QFunctor, f: QFunctor) -> QFunctor:
    """``g o f``."""
    return QFunctor(f.dom, g.cod, {x: g.object_map[y] for x, y in f.object_map.items()})


@dataclass(frozen=True, eq=False)
class FunctorPresentation:
    """An ordinary category ``total`` with a functor into ``base``."""

    total: FinCategory
    base: FinCategory
    object_map: dict[str, str]
    morphism_map: dict[str, str]


def validate_qcategory(E: QCategory) -> ValidationReport:
    report = ValidationReport()
    B = E.base
    for x in E.ids:
        if not B.has_object(E.extent(x)):
            report.add("unknown-extent", (x, E.extent(x)))
    if report:
        return report
    for x, y in product(E.ids, repeat=2):
        h = E.hom(x, y)
        if (h.src, h.dst) != (E.extent(x), E.extent(y)):
            report.add("hom-mistyped", (x, y))
            continue
        allowed = set(B.hom(h.src, h.dst))
        for f in sorted(h.elems - allowed):
            report.add("hom-element-outside-base", (x, y, f))
    if report:
        return report
    for x in E.ids:
        one = B.identity(E.extent(x))
        if one not in E.hom(x, x).elems:
            report.add("identity-law", (x, x, one), f"{one} missing from E({x},{x})")
    for x, y, z in product(E.ids, repeat=3):
        comp = q_compose(B, E.hom(y, z), E.hom(x, y))
        for f in sorted(comp.elems - E.hom(x, z).elems):
            report.add("composition-law", (x, y, z, f), f"{f} missing from E({x},{z})")
    return report


def from_presentation(p: FunctorPresentation) -> QCategory:
    """The Q-category of a faithful functor; raises ``NotFaithfulError``."""
    T, B = p.total, p.base
    for m in T.morphisms:
        image = p.morphism_map[m.id]
        if B.src(image) != p.object_map[m.src] or B.dst(image) != p.object_map[m.dst]:
            raise ValueError(f"functor does not respect the endpoints of {m.id!r}")
    for x in T.objects:
        if p.morphism_map[T.identity(x)] != B.identity(p.object_map[x]):
            raise ValueError(f"functor does not preserve the identity of {x!r}")
    for (g, f), gf in T.composition.items():
        if p.morphism_map[gf] != B.compose(p.morphism_map[g], p.morphism_map[f]):
            raise ValueError(f"functor does not preserve {g!r} o {f!r}")
    homs = {}
    for x, y in product(T.objects, repeat=2):
        seen = {}
        for m in T.hom(x, y):
            image = p.morphism_map[m]
            if image in seen:
                raise NotFaithfulError((seen[image], m))
            seen[image] = m
        if seen:
            homs[x, y] = QHom(p.object_map[x], p.object_map[y], frozenset(seen))
    return QCategory(B, [QObject(x, p.object_map[x]) for x in T.objects], homs)


def presentation_morphism_id(x: str, y: str, f: str) -> str:
    return f"({x},{y},{f})"


def to_presentation(E: QCategory) -> FunctorPresentation:
    B = E.base
    morphisms, mmap = [], {}
    for x, y in product(E.ids, repeat=2):
        for f in sorted(E.hom(x, y).elems):
            mid = presentation_morphism_id(x, y, f)
            morphisms.append(Morphism(mid, x, y))
            mmap[mid] = f
    composition = {}
    for x, y, z in product(E.ids, repeat=3):
        for f in E.hom(x, y).elems:
            for g in E.hom(y, z).elems:
                composition[presentation_morphism_id(y, z, g), presentation_morphism_id(x, y, f)] = (
                    presentation_morphism_id(x, z, B.compose(g, f))
                )
    identities = {x: presentation_morphism_id(x, x, B.identity(E.extent(x))) for x in E.ids}
    total = FinCategory(E.ids, tuple(morphisms), identities, composition)
    return FunctorPresentation(total, B, {x: E.extent(x) for x in E.ids}, mmap)


def opposite_qcategory(E: QCategory) -> QCategory:
    """``E^op`` over ``B^op``: ``E^op(x, y) = E(y, x)`` as the same subset."""
    op = E._cache.get("op")
    if op is None:
        op = QCategory(_opposite_base(E.base), E.objects, _OpHoms(E))
        op._cache["op"] = E
        E._cache["op"] = op
    return op


_BASE_OPS: dict[int, tuple[FinCategory, FinCategory]] = {}


def _opposite_base(B: FinCategory) -> FinCategory:
    # share one opposite per base so that opposites of different
    # Q-categories over B compare by identity as well as by value
    hit = _BASE_OPS.get(id(B))
    if hit is not None and hit[0] is B:
        return hit[1]
    Bop = opposite_category(B)
    _BASE_OPS[id(B)] = (B, Bop)
    _BASE_OPS[id(Bop)] = (Bop, B)
    return Bop


class _OpHoms(Mapping):
    def __init__(self, E: QCategory):
        self.E = E

    def __getitem__(self, key):
        x, y = key
        if not (self.E.has_object(x) and self.E.has_object(y)):
            raise KeyError(key)
        return self.E.hom(y, x).op()

    def __iter__(self):
        return iter(product(self.E.ids, repeat=2))

    def __len__(self):
        return len(self.E.ids) ** 2


def opposite_functor(F: QFunctor, dom_op: QCategory | None = None, cod_op: QCategory | None = None) -> QFunctor:
    dom_op = opposite_qcategory(F.dom) if dom_op is None else dom_op
    cod_op = opposite_qcategory(F.cod) if cod_op is None else cod_op
    return QFunctor(dom_op, cod_op, dict(F.object_map))


def validate_qfunctor(F: QFunctor) -> ValidationReport:
    report = ValidationReport()
    C, D = F.dom, F.cod
    if C.base != D.base:
        report.add("base-mismatch", ())
        return report
    for x in C.ids:
        if x not in F.object_map:
            report.add("object-unmapped", (x,))
        elif not D.has_object(F.object_map[x]):
            report.add("object-map-outside-codomain", (x, F.object_map[x]))
        elif D.extent(F.object_map[x]) != C.extent(x):
            report.add("extent-not-preserved", (x, F.object_map[x]))
    if report:
        return report
    for x, y in product(C.ids, repeat=2):
        missing = C.hom(x, y).elems - D.hom(F(x), F(y)).elems
        for f in sorted(missing):
            report.add("hom-not-included", (x, y, f))
    return report


def qtransformation_leq(F: QFunctor, G: QFunctor) -> bool:
    """Whether the (unique possible) transformation ``F <= G`` exists."""
    if F.dom is not G.dom and F.dom != G.dom:
        raise ValueError("functors have different domains")
    if F.cod is not G.cod and F.cod != G.cod:
        raise ValueError("functors have different codomains")
    D = F.cod
    B = D.base
    return all(B.identity(F.dom.extent(x)) in D.hom(F(x), G(x)).elems for x in F.dom.ids)


def is_iso(C: QCategory, x: str, y: str) -> bool:
    """``x`` and ``y`` are isomorphic objects (identity both ways)."""
    if C.extent(x) != C.extent(y):
        return False
    one = C.base.identity(C.extent(x))
    return one in C.hom(x, y).elems and one in C.hom(y, x).elems


def is_fully_faithful(F: QFunctor) -> bool:
    return all(
        F.dom.hom(x, y) == F.cod.hom(F(x), F(y)) for x, y in product(F.dom.ids, repeat=2)
    )


def find_isomorphism(C: QCategory, D: QCategory) -> dict[str, str] | None:
    """An extent-preserving bijection with equal homs, if one exists."""
    if len(C) != len(D) or C.base != D.base:
        return None

    def signature(E, x):
        z = E.extent(x)
        out = sorted((E.extent(y), tuple(sorted(E.hom(x, y).elems))) for y in E.ids)
        inc = sorted((E.extent(y), tuple(sorted(E.hom(y, x).elems))) for y in E.ids)
        return (z, tuple(sorted(E.hom(x, x).elems)), tuple(out), tuple(inc))

    sig_c = {x: signature(C, x) for x in C.ids}
    sig_d = {y: signature(D, y) for y in D.ids}
    if sorted(sig_c.values()) != sorted(sig_d.values()):
        return None
    order = sorted(C.ids, key=lambda x: sum(1 for y in C.ids if sig_c[y] == sig_c[x]))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(i):
        if i == len(order):
            return True
        x = order[i]
        for y in D.ids:
            if y in used or sig_d[y] != sig_c[x]:
                continue
            ok = all(
                C.hom(x, x2) == D.hom(y, mapping[x2]) and C.hom(x2, x) == D.hom(mapping[x2], y)
                for x2 in mapping
            ) and C.hom(x, x) == D.hom(y, y)
            if ok:
                mapping[x] = y
                used.add(y)
                if extend(i + 1):
                    return True
                del mapping[x]
                used.discard(y)
        return False

    return dict(mapping) if extend(0) else None


def base_is_valid(E: QCategory) -> bool:
    return validate_category(E.base).ok


def enumerate_functors(C: QCategory, D: QCategory, limit: int | None = None) -> list[QFunctor]:
    """Every Q-functor ``C -> D``, by backtracking over extent-preserving object maps."""
    if C.base != D.base:
        return []
    xs = list(C.ids)
    out: list[QFunctor] = []
    omap: dict[str, str] = {}

    def fits(x, y):
        if not C.hom(x, x).elems <= D.hom(y, y).elems:
            return False
        return all(
            C.hom(x, x2).elems <= D.hom(y, y2).elems and C.hom(x2, x).elems <= D.hom(y2, y).elems
            for x2, y2 in omap.items()
        )

    def extend(i):
        if limit is not None and len(out) >= limit:
            return
        if i == len(xs):
            out.append(QFunctor(C, D, dict(omap)))
            return
        x = xs[i]
        for y in D.objects_over(C.extent(x)):
            if fits(x, y):
                omap[x] = y
                extend(i + 1)
                del omap[x]

    extend(0)
    return out
