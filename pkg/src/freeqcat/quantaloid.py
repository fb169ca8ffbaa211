"""Homs of the free quantaloid on a finite category.

A hom ``X -|-> Y`` is a subset of ``B(X, Y)``; composition is elementwise,
joins are unions and meets intersections.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import FinCategory
from .reports import TypeMismatchError


@dataclass(frozen=True)
class QHom:
    src: str
    dst: str
    elems: frozenset[str] = frozenset()

    def __post_init__(self):
        if not isinstance(self.elems, frozenset):
            object.__setattr__(self, "elems", frozenset(self.elems))

    def __le__(self, other: "QHom") -> bool:
        _same_type(self, other)
        return self.elems <= other.elems

    def __ge__(self, other: "QHom") -> bool:
        return other <= self

    def __contains__(self, f: str) -> bool:
        return f in self.elems

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(sorted(self.elems))

    def __repr__(self):
        return f"QHom({self.src}->{self.dst}, {{{', '.join(sorted(self.elems))}}})"

    def to_json(self) -> dict:
        return {"src": self.src, "dst": self.dst, "elems": sorted(self.elems)}

    @classmethod
    def from_json(cls, data: dict) -> "QHom":
        return cls(data["src"], data["dst"], frozenset(data["elems"]))

    def op(self) -> "QHom":
        """The same subset seen as a hom of the opposite quantaloid."""
        return QHom(self.dst, self.src, self.elems)


def _same_type(a: QHom, b: QHom):
    if (a.src, a.dst) != (b.src, b.dst):
        raise TypeMismatchError(f"{a.src}->{a.dst} vs {b.src}->{b.dst}")


def validate_qhom(B: FinCategory, u: QHom) -> list[str]:
    """Elements of ``u`` that do not lie in ``B(src, dst)``."""
    allowed = set(B.hom(u.src, u.dst))
    return sorted(f for f in u.elems if f not in allowed)


def q_id(B: FinCategory, x: str) -> QHom:
    return QHom(x, x, frozenset((B.identity(x),)))


def q_top(B: FinCategory, x: str, y: str) -> QHom:
    return QHom(x, y, frozenset(B.hom(x, y)))


def q_bottom(x: str, y: str) -> QHom:
    return QHom(x, y, frozenset())


def q_compose(B: FinCategory, v: QHom, u: QHom) -> QHom:
    """``v o u`` for ``u: X -|-> Y`` and ``v: Y -|-> Z``."""
    if u.dst != v.src:
        raise TypeMismatchError(f"cannot compose {v.src}->{v.dst} after {u.src}->{u.dst}")
    comp = B.composition
    return QHom(u.src, v.dst, frozenset(comp[g, f] for g in v.elems for f in u.elems))


def q_join(hs, src: str | None = None, dst: str | None = None) -> QHom:
    hs = list(hs)
    src, dst = _resolve_type(hs, src, dst)
    out = frozenset().union(*(h.elems for h in hs))
    return QHom(src, dst, out)


def q_meet(B: FinCategory, hs, src: str | None = None, dst: str | None = None) -> QHom:
    hs = list(hs)
    src, dst = _resolve_type(hs, src, dst)
    out = frozenset(B.hom(src, dst))
    for h in hs:
        out &= h.elems
    return QHom(src, dst, out)


def _resolve_type(hs, src, dst):
    types = {(h.src, h.dst) for h in hs}
    if src is not None or dst is not None:
        types.add((src, dst))
    if not types:
        raise TypeMismatchError("empty join/meet needs an explicit src and dst")
    if len(types) > 1:
        raise TypeMismatchError(f"mixed hom types: {sorted(types)}")
    return types.pop()


def left_residual(B: FinCategory, u: QHom, w: QHom) -> QHom:
    """``[U, W] = {v in B(Y, Z) | v u in W for all u in U}``.

    ``u: X -|-> Y`` and ``w: X -|-> Z``; the result is ``Y -|-> Z``.
    """
    if u.src != w.src:
        raise TypeMismatchError(f"[U, W] needs src(U) == src(W), got {u.src} and {w.src}")
    comp = B.composition
    out = frozenset(
        v for v in B.hom(u.dst, w.dst) if all(comp[v, f] in w.elems for f in u.elems)
    )
    return QHom(u.dst, w.dst, out)


def right_residual(B: FinCategory, v: QHom, w: QHom) -> QHom:
    """``{V, W} = {u in B(X, Y) | v u in W for all v in V}``.

    ``v: Y -|-> Z`` and ``w: X -|-> Z``; the result is ``X -|-> Y``.
    """
    if v.dst != w.dst:
        raise TypeMismatchError(f"{{V, W}} needs dst(V) == dst(W), got {v.dst} and {w.dst}")
    comp = B.composition
    out = frozenset(
        u for u in B.hom(w.src, v.src) if all(comp[g, u] in w.elems for g in v.elems)
    )
    return QHom(w.src, v.src, out)
