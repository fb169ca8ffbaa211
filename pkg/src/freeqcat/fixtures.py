"""Small pinned Q-categories used throughout the tests and demos."""

from __future__ import annotations

from .base import arrow_category, terminal_category
from .qcategory import QCategory, QObject
from .quantaloid import QHom


def _over_one(objects, order_pairs) -> QCategory:
    B = terminal_category()
    homs = {(x, y): QHom("*", "*", frozenset({"id"})) for x, y in order_pairs}
    homs.update({(x, x): QHom("*", "*", frozenset({"id"})) for x in objects})
    return QCategory(B, [QObject(x, "*") for x in objects], homs)


def preorder(objects, leq) -> QCategory:
    """A preorder as a Q-category over the terminal category."""
    return _over_one(list(objects), [(x, y) for x, y in leq])


def antichain2() -> QCategory:
    """Two incomparable objects ``a`` and ``b`` over 1."""
    return _over_one(["a", "b"], [])


def chain2() -> QCategory:
    """The chain ``0 <= 1`` over 1."""
    return _over_one(["0", "1"], [("0", "1")])


def chain3() -> QCategory:
    return _over_one(["0", "1", "2"], [("0", "1"), ("1", "2"), ("0", "2")])


def point() -> QCategory:
    """One object over 1."""
    return _over_one(["*"], [])


def arrow_point() -> QCategory:
    """A single object ``e`` over ``X`` of the walking arrow."""
    B = arrow_category()
    return QCategory(B, [QObject("e", "X")], {("e", "e"): QHom("X", "X", frozenset({"1X"}))})


E_AC = antichain2
E_CH = chain2
E_X = arrow_point
