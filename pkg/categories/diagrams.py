"""
Diagram shapes shared by graphs and specifications, and the small contract
("presentation category") every kind of object registers so that pushouts
and their checks can be written once.
"""

from dataclasses import dataclass
from typing import Any, Dict, Protocol, Type

from errors import MalformedSpan


class Category(Protocol):
    name: str

    def identity(self, obj: Any) -> Any: ...

    def compose(self, f: Any, g: Any) -> Any: ...

    def pushout(self, span: "Span") -> "PushoutResult": ...

    def mediate(self, result: "PushoutResult", cocone: "Cospan") -> Any: ...

    def is_iso(self, f: Any) -> bool: ...

    def isomorphic(self, first: Any, second: Any) -> bool: ...


_REGISTRY: Dict[type, Category] = {}


def register_category(morphism_type: Type, category: Category) -> None:
    _REGISTRY[morphism_type] = category


def category_of(morphism: Any) -> Category:
    try:
        return _REGISTRY[type(morphism)]
    except KeyError:
        raise MalformedSpan(f"No presentation category handles {type(morphism).__name__}")


@dataclass(frozen=True)
class Span:
    """Two morphisms out of the same object."""
    left: Any
    right: Any

    def __post_init__(self):
        if self.left.domain != self.right.domain:
            raise MalformedSpan("Span legs do not share their domain")

    @property
    def apex(self):
        return self.left.domain


@dataclass(frozen=True)
class Cospan:
    """Two morphisms into the same object."""
    left: Any
    right: Any

    def __post_init__(self):
        if self.left.codomain != self.right.codomain:
            raise MalformedSpan("Cospan legs do not share their codomain")

    @property
    def vertex(self):
        return self.left.codomain


@dataclass(frozen=True)
class Square:
    """
    A --top--> B
    |          |
    left     right
    v          v
    C --bottom-> D

    The span (top, left) is the one a pushout check glues along.
    """
    top: Any
    left: Any
    right: Any
    bottom: Any

    @property
    def span(self) -> Span:
        return Span(self.top, self.left)

    @property
    def cocone(self) -> Cospan:
        return Cospan(self.right, self.bottom)

    def commutes(self) -> bool:
        category = category_of(self.top)
        if self.top.codomain != self.right.domain or self.left.codomain != self.bottom.domain:
            return False
        if self.right.codomain != self.bottom.codomain:
            return False
        return category.compose(self.top, self.right) == category.compose(self.left, self.bottom)


@dataclass(frozen=True)
class PushoutResult:
    span: Span
    cocone: Cospan

    @property
    def object(self):
        return self.cocone.vertex

    def as_square(self) -> Square:
        return Square(self.span.left, self.span.right, self.cocone.left, self.cocone.right)


@dataclass(frozen=True)
class ComplementResult:
    """Completion K -> D -> G of a given K -> L -> G."""
    rule_leg: Any
    match: Any
    inner: Any
    outer: Any

    @property
    def object(self):
        return self.inner.codomain

    def as_square(self) -> Square:
        # K --rule_leg--> L, K --inner--> D, L --match--> G, D --outer--> G
        return Square(self.rule_leg, self.inner, self.match, self.outer)
