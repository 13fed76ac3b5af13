"""
Terms and equations of many-sorted equational logic, their text syntax and
syntactic matching.

Operation names made of symbols (``+``, ``*``, ...) with two arguments are
written infix, everything else prefix: ``s(x) + y``. Infix operators starting
with ``*``, ``/`` or ``%`` bind tighter than the others; both levels group to
the left.
"""

import re
from dataclasses import dataclass, field
from typing import Collection, Dict, Iterator, Mapping, Optional, Set, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError

from errors import ParseError

WORD = re.compile(r"[A-Za-z0-9_'][A-Za-z0-9_'.]*")


def is_infix(op: str, arity: int) -> bool:
    return arity == 2 and not WORD.fullmatch(op)


@dataclass(frozen=True)
class Term:
    head: str
    args: Tuple["Term", ...] = ()
    is_var: bool = False
    _hash: int = field(default=0, compare=False, repr=False)
    _text: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.head, self.args, self.is_var)))
        object.__setattr__(self, "_text", self._render())

    def __hash__(self):
        return self._hash

    def _render(self) -> str:
        if self.is_var or not self.args:
            return self.head
        if is_infix(self.head, len(self.args)):
            left, right = (f"({a})" if a.is_infix() else str(a) for a in self.args)
            return f"{left} {self.head} {right}"
        return f"{self.head}({', '.join(str(a) for a in self.args)})"

    def __str__(self):
        return self._text

    def __lt__(self, other: "Term"):
        return self._text < other._text

    def is_infix(self) -> bool:
        return not self.is_var and is_infix(self.head, len(self.args))

    def is_ground(self) -> bool:
        return not self.variables()

    def variables(self) -> Set[str]:
        if self.is_var:
            return {self.head}
        found: Set[str] = set()
        for a in self.args:
            found |= a.variables()
        return found

    def subterms(self) -> Iterator["Term"]:
        yield self
        for a in self.args:
            yield from a.subterms()

    def depth(self) -> int:
        return 1 + max((a.depth() for a in self.args), default=0)


def var(name: str) -> Term:
    return Term(name, (), True)


def app(op: str, *args: Term) -> Term:
    return Term(op, tuple(args))


@dataclass(frozen=True)
class Equation:
    """Unordered pair of terms, stored with the smaller rendering on the left."""
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if str(self.rhs) < str(self.lhs):
            lhs, rhs = self.rhs, self.lhs
            object.__setattr__(self, "lhs", lhs)
            object.__setattr__(self, "rhs", rhs)

    def __str__(self):
        return f"{self.lhs} == {self.rhs}"

    def __lt__(self, other: "Equation"):
        return str(self) < str(other)

    def sides(self) -> Tuple[Term, Term]:
        return self.lhs, self.rhs

    def variables(self) -> Set[str]:
        return self.lhs.variables() | self.rhs.variables()

    def is_trivial(self) -> bool:
        return self.lhs == self.rhs


def substitute(term: Term, mapping: Mapping[str, Term]) -> Term:
    if term.is_var:
        return mapping.get(term.head, term)
    if not term.args:
        return term
    return Term(term.head, tuple(substitute(a, mapping) for a in term.args))


def match(pattern: Term, term: Term, binding: Optional[Dict[str, Term]] = None) -> Optional[Dict[str, Term]]:
    """Syntactic matching: a binding with substitute(pattern, binding) == term, or None."""
    binding = dict(binding or {})
    stack = [(pattern, term)]
    while stack:
        p, t = stack.pop()
        if p.is_var:
            bound = binding.get(p.head)
            if bound is None:
                binding[p.head] = t
            elif bound != t:
                return None
        elif t.is_var or p.head != t.head or len(p.args) != len(t.args):
            return None
        else:
            stack.extend(zip(p.args, t.args))
    return binding


GRAMMAR = r"""
    ?start: equation | term
    equation: term "==" term
    ?term: term SUM_OP product -> infix
         | product
    ?product: product PRODUCT_OP atom -> infix
         | atom
    ?atom: NAME "(" [term ("," term)*] ")" -> call
         | NAME -> name
         | "(" term ")"
    PRODUCT_OP: /[*\/%][+*\-\/^&|<>~@%]*/
    SUM_OP: /[+\-^&|<>~@][+*\-\/^&|<>~@%]*/
    NAME: /[A-Za-z0-9_'][A-Za-z0-9_'.]*/
    %import common.WS
    %ignore WS
"""

_parser = Lark(GRAMMAR, parser="lalr")


@v_args(inline=True)
class _ToTerm(Transformer):
    def __init__(self, variables: Collection[str]):
        super().__init__()
        self.variables = set(variables)

    def name(self, token):
        text = str(token)
        return var(text) if text in self.variables else app(text)

    def call(self, token, *args):
        return app(str(token), *[a for a in args if a is not None])

    def infix(self, left, op, right):
        return app(str(op), left, right)

    def equation(self, left, right):
        return Equation(left, right)


def _parse(text: str, variables: Collection[str]):
    try:
        return _ToTerm(variables).transform(_parser.parse(text))
    except LarkError as e:
        raise ParseError(f"Cannot parse '{text.strip()}': {str(e).splitlines()[0]}")


def parse_term(text: str, variables: Collection[str] = ()) -> Term:
    result = _parse(text, variables)
    if not isinstance(result, Term):
        raise ParseError(f"Expected a term, got an equation: '{text.strip()}'")
    return result


def parse_equation(text: str, variables: Collection[str] = ()) -> Equation:
    result = _parse(text, variables)
    if not isinstance(result, Equation):
        raise ParseError(f"Expected an equation 'lhs == rhs': '{text.strip()}'")
    return result
