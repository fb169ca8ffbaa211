"""Finite categories given by an explicit composition table."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .reports import ValidationReport


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    dst: str


@dataclass(frozen=True, eq=False)
class FinCategory:
    """A finite category.

    ``composition`` maps ``(g, f)`` to the id of ``g o f`` and is defined
    exactly on the pairs with ``dst(f) == src(g)``.
    """

    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    identities: dict[str, str]
    composition: dict[tuple[str, str], str]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(
            self,
            "morphisms",
            tuple(m if isinstance(m, Morphism) else Morphism(*m) for m in self.morphisms),
        )
        object.__setattr__(self, "identities", dict(self.identities))
        object.__setattr__(self, "composition", dict(self.composition))

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and set(self.morphisms) == set(other.morphisms)
            and self.identities == other.identities
            and self.composition == other.composition
        )

    __hash__ = None

    @cached_property
    def _by_id(self) -> dict[str, Morphism]:
        return {m.id: m for m in self.morphisms}

    @cached_property
    def _homs(self) -> dict[tuple[str, str], tuple[str, ...]]:
        homs = {(x, y): [] for x in self.objects for y in self.objects}
        for m in self.morphisms:
            homs.setdefault((m.src, m.dst), []).append(m.id)
        return {k: tuple(sorted(v)) for k, v in homs.items()}

    def src(self, f: str) -> str:
        return self._by_id[f].src

    def dst(self, f: str) -> str:
        return self._by_id[f].dst

    def identity(self, x: str) -> str:
        return self.identities[x]

    def compose(self, g: str, f: str) -> str:
        """Return ``g o f``."""
        try:
            return self.composition[g, f]
        except KeyError:
            raise ValueError(f"{g!r} o {f!r} is not defined") from None

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        try:
            return self._homs[x, y]
        except KeyError:
            raise KeyError(f"unknown object in hom({x!r}, {y!r})") from None

    def has_object(self, x: str) -> bool:
        return x in self._object_set

    @cached_property
    def _object_set(self) -> frozenset[str]:
        return frozenset(self.objects)

    def to_json(self) -> dict:
        return {
            "objects": sorted(self.objects),
            "morphisms": [
                {"id": m.id, "src": m.src, "dst": m.dst}
                for m in sorted(self.morphisms, key=lambda m: m.id)
            ],
            "identities": dict(sorted(self.identities.items())),
            "composition": sorted([g, f, gf] for (g, f), gf in self.composition.items()),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinCategory":
        return cls(
            objects=tuple(data["objects"]),
            morphisms=tuple(Morphism(m["id"], m["src"], m["dst"]) for m in data["morphisms"]),
            identities=dict(data["identities"]),
            composition={(g, f): gf for g, f, gf in data["composition"]},
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self):
        return f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def validate_category(c: FinCategory) -> ValidationReport:
    """Check every category axiom; violations are reported, never raised."""
    report = ValidationReport()
    seen = set()
    for x in c.objects:
        if x in seen:
            report.add("duplicate-object", (x,))
        seen.add(x)
    mor = {}
    for m in c.morphisms:
        if m.id in mor:
            report.add("duplicate-morphism", (m.id,))
            continue
        mor[m.id] = m
        for end in (m.src, m.dst):
            if end not in seen:
                report.add("unknown-object", (m.id, end), "morphism endpoint is not an object")

    for x in c.objects:
        i = c.identities.get(x)
        if i is None:
            report.add("missing-identity", (x,))
        elif i not in mor or mor[i].src != x or mor[i].dst != x:
            report.add("bad-identity", (x, i), "identity must be an endomorphism of its object")
    for x in c.identities:
        if x not in seen:
            report.add("unknown-object", (x,), "identity given for a non-object")

    for (g, f), gf in c.composition.items():
        if g not in mor or f not in mor:
            report.add("unknown-morphism", (g, f))
            continue
        if mor[f].dst != mor[g].src:
            report.add("composition-not-composable", (g, f))
            continue
        if gf not in mor:
            report.add("unknown-morphism", (g, f, gf))
        elif mor[gf].src != mor[f].src or mor[gf].dst != mor[g].dst:
            report.add("composition-mistyped", (g, f, gf))
    for g, f in product(mor.values(), repeat=2):
        if f.dst == g.src and (g.id, f.id) not in c.composition:
            report.add("composition-missing", (g.id, f.id))
    if report.kinds() - {"composition-mistyped"}:
        # the laws below cannot be evaluated on an incomplete table
        return report

    for f in mor.values():
        one_src, one_dst = c.identities[f.src], c.identities[f.dst]
        if c.composition[one_dst, f.id] != f.id:
            report.add("unit-law", (one_dst, f.id), f"{one_dst} o {f.id} != {f.id}")
        if c.composition[f.id, one_src] != f.id:
            report.add("unit-law", (f.id, one_src), f"{f.id} o {one_src} != {f.id}")
    out_of = {x: [m.id for m in c.morphisms if m.src == x] for x in c.objects}
    for f in mor.values():
        for gid in out_of[f.dst]:
            g = mor[gid]
            gf = c.composition[g.id, f.id]
            for hid in out_of[g.dst]:
                left = c.composition.get((hid, gf))
                right = c.composition.get((c.composition[hid, g.id], f.id))
                if left != right:
                    report.add("associativity", (hid, g.id, f.id), f"{left} != {right}")
    return report


def opposite_category(c: FinCategory) -> FinCategory:
    return FinCategory(
        objects=c.objects,
        morphisms=tuple(Morphism(m.id, m.dst, m.src) for m in c.morphisms),
        identities=c.identities,
        composition={(f, g): gf for (g, f), gf in c.composition.items()},
    )


def hom_set(c: FinCategory, x: str, y: str) -> frozenset[str]:
    if not (c.has_object(x) and c.has_object(y)):
        raise KeyError(f"unknown object in hom_set({x!r}, {y!r})")
    return frozenset(c.hom(x, y))


def terminal_category(obj: str = "*", ident: str = "id") -> FinCategory:
    return FinCategory((obj,), (Morphism(ident, obj, obj),), {obj: ident}, {(ident, ident): ident})


def arrow_category() -> FinCategory:
    """The walking arrow ``f: X -> Y``."""
    return FinCategory(
        ("X", "Y"),
        (Morphism("1X", "X", "X"), Morphism("1Y", "Y", "Y"), Morphism("f", "X", "Y")),
        {"X": "1X", "Y": "1Y"},
        {("1X", "1X"): "1X", ("1Y", "1Y"): "1Y", ("1Y", "f"): "f", ("f", "1X"): "f"},
    )


def discrete_category(objects) -> FinCategory:
    objects = tuple(objects)
    ids = {x: f"1{x}" for x in objects}
    return FinCategory(
        objects,
        tuple(Morphism(i, x, x) for x, i in ids.items()),
        ids,
        {(i, i): i for i in ids.values()},
    )
