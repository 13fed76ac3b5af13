"""
Equational logic as a diagrammatic logic.

Specifications and their morphisms form the presentation category; the
theory a specification presents is never built. It is approached from both
sides instead: ``derivable`` (bounded congruence closure with axiom
instantiation) proves equations, ``refute`` disproves them in a finite model.
``is_pleomorphism`` combines the two into a three-valued verdict.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from networkx.utils import UnionFind

from categories.colimit_engine import LEFT, RIGHT, canonical_names, classes_of
from categories.diagrams import Cospan, PushoutResult, Span, register_category
from errors import (BindingClash, EndpointMismatch, IllSorted, InputError, LabelClash,
                    MalformedMorphism, ModelDoesNotSatisfySpec, NonCommuting)
from logic.terms import Equation, Term, app, substitute, match, var

logger = logging.getLogger(__name__)

# closure universes beyond this size give up with Unknown
MAX_UNIVERSE = 20000


@dataclass(frozen=True)
class OpDecl:
    args: Tuple[str, ...]
    result: str

    def __str__(self):
        return f"{' '.join(self.args)} -> {self.result}".strip()


@dataclass(frozen=True)
class EqSpec:
    """A finite presentation: signature, variables, declared terms, equations.

    ``terms`` always holds the declared variables and the subterm closure of
    the declared terms and of both sides of every equation.
    """
    sorts: FrozenSet[str] = frozenset()
    ops: Mapping[str, OpDecl] = field(default_factory=dict)
    vars: Mapping[str, str] = field(default_factory=dict)
    terms: FrozenSet[Term] = frozenset()
    equations: FrozenSet[Equation] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "sorts", frozenset(self.sorts))
        object.__setattr__(self, "ops", {o: self.ops[o] for o in sorted(self.ops)})
        object.__setattr__(self, "vars", {v: self.vars[v] for v in sorted(self.vars)})
        object.__setattr__(self, "equations", frozenset(self.equations))
        closure = {var(v) for v in self.vars}
        for t in itertools.chain(self.terms, *(e.sides() for e in self.equations)):
            closure.update(t.subterms())
        object.__setattr__(self, "terms", frozenset(closure))
        self._validate()

    def _validate(self):
        for name, decl in self.ops.items():
            for s in (*decl.args, decl.result):
                if s not in self.sorts:
                    raise IllSorted(f"Operation '{name}' uses undeclared sort '{s}'")
        for name, s in self.vars.items():
            if s not in self.sorts:
                raise IllSorted(f"Variable '{name}' has undeclared sort '{s}'")
            if name in self.ops:
                raise IllSorted(f"'{name}' is declared both as a variable and as an operation")
        for t in self.terms:
            self.sort_of(t)
        for e in self.equations:
            if self.sort_of(e.lhs) != self.sort_of(e.rhs):
                raise IllSorted(f"Equation '{e}' relates terms of different sorts")

    def sort_of(self, term: Term) -> str:
        if term.is_var:
            if term.head not in self.vars:
                raise IllSorted(f"Undeclared variable '{term.head}'")
            return self.vars[term.head]
        decl = self.ops.get(term.head)
        if decl is None:
            raise IllSorted(f"Undeclared operation '{term.head}' in '{term}'")
        if len(decl.args) != len(term.args):
            raise IllSorted(f"'{term.head}' expects {len(decl.args)} argument(s) in '{term}'")
        for expected, a in zip(decl.args, term.args):
            if self.sort_of(a) != expected:
                raise IllSorted(f"Argument '{a}' of '{term}' should have sort '{expected}'")
        return decl.result

    def maximal_terms(self) -> List[Term]:
        """Declared terms not already an equation side nor a proper subterm of another term."""
        sides = {t for e in self.equations for t in e.sides()}
        covered = set()
        for t in self.terms:
            covered.update(list(t.subterms())[1:])
        return sorted(t for t in self.terms if t not in covered and t not in sides)

    def ground_terms(self) -> List[Term]:
        return sorted(t for t in self.terms if t.is_ground())

    def axioms(self) -> List[Equation]:
        return sorted(e for e in self.equations if e.variables())

    def size(self) -> Tuple[int, int]:
        """Presentation size used to compare witnesses: equations first, then terms."""
        return len(self.equations), len(self.terms)

    def extend(self, terms: Iterable[Term] = (), equations: Iterable[Equation] = ()) -> "EqSpec":
        return EqSpec(self.sorts, self.ops, self.vars, self.terms | set(terms), self.equations | set(equations))


@dataclass(frozen=True)
class SpecMorphism:
    """Sorts to sorts, operations to operations, variables to terms.

    The action on terms and equations is induced; every declared term must
    land in the codomain's terms and every equation on a codomain equation.
    """
    domain: EqSpec
    codomain: EqSpec
    sort_map: Mapping[str, str]
    op_map: Mapping[str, str]
    var_map: Mapping[str, Term]

    def __post_init__(self):
        object.__setattr__(self, "sort_map", {s: self.sort_map[s] for s in sorted(self.sort_map)})
        object.__setattr__(self, "op_map", {o: self.op_map[o] for o in sorted(self.op_map)})
        object.__setattr__(self, "var_map", {v: self.var_map[v] for v in sorted(self.var_map)})
        self._validate()

    def _validate(self):
        dom, cod = self.domain, self.codomain
        if set(self.sort_map) != set(dom.sorts) or not set(self.sort_map.values()) <= cod.sorts:
            raise MalformedMorphism("Sort map must send every domain sort to a codomain sort")
        for o, decl in dom.ops.items():
            image = self.op_map.get(o)
            if image not in cod.ops:
                raise MalformedMorphism(f"Operation '{o}' has no image in the codomain")
            expected = OpDecl(tuple(self.sort_map[s] for s in decl.args), self.sort_map[decl.result])
            if cod.ops[image] != expected:
                raise MalformedMorphism(f"Operation '{o}' is sent to '{image}' with a different arity")
        if set(self.op_map) != set(dom.ops):
            raise MalformedMorphism("Operation map must be total on the domain")
        if set(self.var_map) != set(dom.vars):
            raise MalformedMorphism("Variable map must be total on the domain")
        for v, image in self.var_map.items():
            try:
                image_sort = cod.sort_of(image)
            except IllSorted as e:
                raise MalformedMorphism(f"Variable '{v}' is sent to an ill-sorted term: {e.detail}")
            if image_sort != self.sort_map[dom.vars[v]]:
                raise MalformedMorphism(f"Variable '{v}' is sent to '{image}' of the wrong sort")
            if image not in cod.terms:
                raise MalformedMorphism(f"Variable '{v}' is sent to '{image}', not a term of the codomain")
        for t in dom.terms:
            if self.apply(t) not in cod.terms:
                raise MalformedMorphism(f"Term '{t}' is sent to '{self.apply(t)}', not a term of the codomain")
        for e in dom.equations:
            if self.apply_equation(e) not in cod.equations:
                raise MalformedMorphism(f"Equation '{e}' is sent to '{self.apply_equation(e)}', not an equation of the codomain")

    def apply(self, term: Term) -> Term:
        if term.is_var:
            return self.var_map[term.head]
        return Term(self.op_map[term.head], tuple(self.apply(a) for a in term.args))

    def apply_equation(self, equation: Equation) -> Equation:
        return Equation(self.apply(equation.lhs), self.apply(equation.rhs))

    def image_equations(self) -> FrozenSet[Equation]:
        return frozenset(self.apply_equation(e) for e in self.domain.equations)

    def image_terms(self) -> FrozenSet[Term]:
        return frozenset(self.apply(t) for t in self.domain.terms)


def identity(spec: EqSpec) -> SpecMorphism:
    return SpecMorphism(spec, spec, {s: s for s in spec.sorts}, {o: o for o in spec.ops},
                        {v: var(v) for v in spec.vars})


def by_name(domain: EqSpec, codomain: EqSpec,
            sort_map: Optional[Mapping[str, str]] = None,
            op_map: Optional[Mapping[str, str]] = None,
            var_map: Optional[Mapping[str, Term]] = None) -> SpecMorphism:
    """A morphism that sends every item not listed to the item of the same name."""
    sorts = {s: s for s in domain.sorts}
    sorts.update(sort_map or {})
    ops = {o: o for o in domain.ops}
    ops.update(op_map or {})
    variables = {v: var(v) for v in domain.vars}
    variables.update(var_map or {})
    return SpecMorphism(domain, codomain, sorts, ops, variables)


def inclusion(sub: EqSpec, spec: EqSpec) -> SpecMorphism:
    return by_name(sub, spec)


def compose(f: SpecMorphism, g: SpecMorphism) -> SpecMorphism:
    """g after f."""
    if f.codomain != g.domain:
        raise EndpointMismatch("Cannot compose: the codomain of the first morphism is not the domain of the second")
    return SpecMorphism(
        f.domain,
        g.codomain,
        {s: g.sort_map[t] for s, t in f.sort_map.items()},
        {o: g.op_map[p] for o, p in f.op_map.items()},
        {v: g.apply(t) for v, t in f.var_map.items()},
    )


def _bijective(mapping: Mapping, target) -> bool:
    return len(set(mapping.values())) == len(mapping) and set(mapping.values()) == set(target)


def is_iso(f: SpecMorphism) -> bool:
    cod = f.codomain
    if not _bijective(f.sort_map, cod.sorts) or not _bijective(f.op_map, cod.ops):
        return False
    if not all(t.is_var for t in f.var_map.values()):
        return False
    if not _bijective({v: t.head for v, t in f.var_map.items()}, cod.vars):
        return False
    return f.image_terms() == cod.terms and f.image_equations() == cod.equations


def find_isomorphism(first: EqSpec, second: EqSpec) -> Optional[SpecMorphism]:
    """Exhaustive search, names first; adequate for desk-scale specifications."""
    if (len(first.sorts), len(first.ops), len(first.vars), len(first.terms), len(first.equations)) != \
            (len(second.sorts), len(second.ops), len(second.vars), len(second.terms), len(second.equations)):
        return None
    try:
        candidate = by_name(first, second)
        if is_iso(candidate):
            return candidate
    except MalformedMorphism:
        pass
    first_sorts, first_ops, first_vars = sorted(first.sorts), list(first.ops), list(first.vars)
    for sorts in itertools.permutations(sorted(second.sorts)):
        sort_map = dict(zip(first_sorts, sorts))
        for ops in itertools.permutations(list(second.ops)):
            op_map = dict(zip(first_ops, ops))
            if any(second.ops[op_map[o]] != OpDecl(tuple(sort_map[s] for s in d.args), sort_map[d.result])
                   for o, d in first.ops.items()):
                continue
            for names in itertools.permutations(list(second.vars)):
                var_map = dict(zip(first_vars, names))
                if any(second.vars[var_map[v]] != sort_map[s] for v, s in first.vars.items()):
                    continue
                try:
                    candidate = SpecMorphism(first, second, sort_map, op_map,
                                             {v: var(n) for v, n in var_map.items()})
                except MalformedMorphism:
                    continue
                if is_iso(candidate):
                    return candidate
    return None


def find_morphisms(domain: EqSpec, codomain: EqSpec,
                   fixed_sorts: Optional[Mapping[str, str]] = None,
                   fixed_ops: Optional[Mapping[str, str]] = None,
                   fixed_vars: Optional[Mapping[str, Term]] = None) -> Iterator[SpecMorphism]:
    """Every morphism domain -> codomain, in canonical order; the fixed maps pin part of it."""
    fixed_sorts, fixed_ops, fixed_vars = fixed_sorts or {}, fixed_ops or {}, fixed_vars or {}
    by_sort: Dict[str, List[Term]] = {}
    for t in sorted(codomain.terms):
        by_sort.setdefault(codomain.sort_of(t), []).append(t)
    sort_names = sorted(domain.sorts)
    sort_pools = [[fixed_sorts[s]] if s in fixed_sorts else sorted(codomain.sorts) for s in sort_names]
    for sorts in itertools.product(*sort_pools):
        sort_map = dict(zip(sort_names, sorts))
        op_pools = []
        for o, decl in domain.ops.items():
            wanted = OpDecl(tuple(sort_map[s] for s in decl.args), sort_map[decl.result])
            pool = [fixed_ops[o]] if o in fixed_ops else list(codomain.ops)
            op_pools.append([p for p in pool if codomain.ops.get(p) == wanted])
        var_pools = [[fixed_vars[v]] if v in fixed_vars else by_sort.get(sort_map[s], [])
                     for v, s in domain.vars.items()]
        for ops in itertools.product(*op_pools):
            for terms in itertools.product(*var_pools):
                try:
                    yield SpecMorphism(domain, codomain, sort_map, dict(zip(domain.ops, ops)),
                                       dict(zip(domain.vars, terms)))
                except MalformedMorphism:
                    continue


# pushouts of specifications

def _tag(term: Term, foot: str, op_names: Mapping[Tuple[str, str], str]) -> Term:
    if term.is_var:
        return var(f"{foot}:{term.head}")
    return Term(op_names[(foot, term.head)], tuple(_tag(a, foot, op_names) for a in term.args))


class _Unifier:
    """Union-find over tagged variables with at most one term bound per class."""

    def __init__(self, variables: Iterable[str]):
        self.classes = UnionFind(variables)
        self.binding: Dict[str, Term] = {}

    def resolve(self, term: Term) -> Term:
        while term.is_var and self.classes[term.head] in self.binding:
            term = self.binding[self.classes[term.head]]
        return term

    def unify(self, first: Term, second: Term) -> None:
        stack = [(first, second)]
        while stack:
            s, t = (self.resolve(x) for x in stack.pop())
            if s.is_var and t.is_var:
                self.classes.union(s.head, t.head)
            elif s.is_var:
                self.binding[self.classes[s.head]] = t
            elif t.is_var:
                self.binding[self.classes[t.head]] = s
            elif s.head != t.head or len(s.args) != len(t.args):
                raise BindingClash(f"Glued variables would force '{s}' and '{t}' to coincide")
            else:
                stack.extend(zip(s.args, t.args))


class SpecCategory:
    name = "specifications"

    def identity(self, spec: EqSpec) -> SpecMorphism:
        return identity(spec)

    def compose(self, f: SpecMorphism, g: SpecMorphism) -> SpecMorphism:
        return compose(f, g)

    def is_iso(self, f: SpecMorphism) -> bool:
        return is_iso(f)

    def isomorphic(self, first: EqSpec, second: EqSpec) -> bool:
        return find_isomorphism(first, second) is not None

    def pushout(self, span: Span) -> PushoutResult:
        f, g = span.left, span.right
        A, B, C = span.apex, f.codomain, g.codomain
        feet = {LEFT: (B, f), RIGHT: (C, g)}

        sorts = UnionFind([(LEFT, s) for s in B.sorts] + [(RIGHT, s) for s in C.sorts])
        for s in A.sorts:
            sorts.union((LEFT, f.sort_map[s]), (RIGHT, g.sort_map[s]))
        sort_name: Dict[Tuple[str, str], str] = {}
        sort_classes = classes_of(sorts)
        for members, name in zip(sort_classes, canonical_names(sort_classes)):
            for foot in (LEFT, RIGHT):
                same_foot = [s for x, s in members if x == foot]
                if len(same_foot) > 1:
                    raise LabelClash(f"Pushout would merge distinct sorts {same_foot} of the same specification")
            for member in members:
                sort_name[member] = name

        ops = UnionFind([(LEFT, o) for o in B.ops] + [(RIGHT, o) for o in C.ops])
        for o in A.ops:
            ops.union((LEFT, f.op_map[o]), (RIGHT, g.op_map[o]))
        op_name: Dict[Tuple[str, str], str] = {}
        new_ops: Dict[str, OpDecl] = {}
        op_classes = classes_of(ops)
        for members, name in zip(op_classes, canonical_names(op_classes)):
            decls = set()
            for foot, o in members:
                decl = feet[foot][0].ops[o]
                decls.add(OpDecl(tuple(sort_name[(foot, s)] for s in decl.args), sort_name[(foot, decl.result)]))
                op_name[(foot, o)] = name
            if len(decls) > 1:
                raise LabelClash(f"Pushout would merge operations with arities {sorted(map(str, decls))}")
            new_ops[name] = decls.pop()

        unifier = _Unifier([f"{LEFT}:{v}" for v in B.vars] + [f"{RIGHT}:{v}" for v in C.vars])
        for v in A.vars:
            unifier.unify(_tag(f.var_map[v], LEFT, op_name), _tag(g.var_map[v], RIGHT, op_name))

        free_classes = [members for members in classes_of(unifier.classes)
                        if unifier.classes[members[0]] not in unifier.binding]
        free_names = canonical_names([[tuple(m.split(":", 1)) for m in members] for members in free_classes])
        var_name = {unifier.classes[members[0]]: name for members, name in zip(free_classes, free_names)}
        new_vars = {}
        for members, name in zip(free_classes, free_names):
            foot, v = members[0].split(":", 1)
            new_vars[name] = sort_name[(foot, feet[foot][0].vars[v])]

        resolved: Dict[str, Term] = {}

        def finish(term: Term, visiting=()) -> Term:
            if not term.is_var:
                return Term(term.head, tuple(finish(a, visiting) for a in term.args))
            root = unifier.classes[term.head]
            if root in resolved:
                return resolved[root]
            if root in var_name:
                result = var(var_name[root])
            else:
                if root in visiting:
                    raise BindingClash("Glued variables are bound cyclically; no pushout exists")
                result = finish(unifier.binding[root], visiting + (root,))
            resolved[root] = result
            return result

        def image(foot: str, term: Term) -> Term:
            return finish(_tag(term, foot, op_name))

        P = EqSpec(
            sorts=set(sort_name.values()),
            ops=new_ops,
            vars=new_vars,
            terms={image(foot, t) for foot in (LEFT, RIGHT) for t in feet[foot][0].terms},
            equations={Equation(image(foot, e.lhs), image(foot, e.rhs))
                       for foot in (LEFT, RIGHT) for e in feet[foot][0].equations},
        )
        legs = []
        for foot in (LEFT, RIGHT):
            source = feet[foot][0]
            legs.append(SpecMorphism(
                source, P,
                {s: sort_name[(foot, s)] for s in source.sorts},
                {o: op_name[(foot, o)] for o in source.ops},
                {v: image(foot, var(v)) for v in source.vars},
            ))
        return PushoutResult(span, Cospan(legs[0], legs[1]))

    def _forced(self, result: PushoutResult, cocone: Cospan):
        """What any mediator must do on the images of the legs."""
        sort_map: Dict[str, str] = {}
        op_map: Dict[str, str] = {}
        var_map: Dict[str, Term] = {}
        for leg, target in ((result.cocone.left, cocone.left), (result.cocone.right, cocone.right)):
            if leg.domain != target.domain:
                raise NonCommuting("The cocone does not sit over the same feet")
            for s, p in leg.sort_map.items():
                if sort_map.setdefault(p, target.sort_map[s]) != target.sort_map[s]:
                    raise NonCommuting(f"The cocone disagrees on the glued sort '{p}'")
            for o, p in leg.op_map.items():
                if op_map.setdefault(p, target.op_map[o]) != target.op_map[o]:
                    raise NonCommuting(f"The cocone disagrees on the glued operation '{p}'")
            for v, t in leg.var_map.items():
                if t.is_var and var_map.setdefault(t.head, target.var_map[v]) != target.var_map[v]:
                    raise NonCommuting(f"The cocone disagrees on the glued variable '{t.head}'")
        return sort_map, op_map, var_map

    def mediate(self, result: PushoutResult, cocone: Cospan) -> SpecMorphism:
        sort_map, op_map, var_map = self._forced(result, cocone)
        try:
            mediator = SpecMorphism(result.object, cocone.vertex, sort_map, op_map, var_map)
        except MalformedMorphism as e:
            raise NonCommuting(f"The cocone induces no morphism out of the pushout: {e.detail}")
        for leg, target in ((result.cocone.left, cocone.left), (result.cocone.right, cocone.right)):
            if compose(leg, mediator) != target:
                raise NonCommuting("The induced morphism does not commute with the cocone")
        return mediator

    def mediators(self, result: PushoutResult, cocone: Cospan) -> List[SpecMorphism]:
        """Every morphism out of the pushout commuting with ``cocone``.

        The search pins only what commutation already forces, so it ranges
        over all candidates; a pushout leaves exactly one.
        """
        try:
            sort_map, op_map, var_map = self._forced(result, cocone)
        except NonCommuting:
            return []
        return [u for u in find_morphisms(result.object, cocone.vertex, sort_map, op_map, var_map)
                if compose(result.cocone.left, u) == cocone.left and compose(result.cocone.right, u) == cocone.right]


SPECS = SpecCategory()
register_category(SpecMorphism, SPECS)


def spec_pushout(span: Span) -> PushoutResult:
    return SPECS.pushout(span)


# derivability

@dataclass(frozen=True)
class Derivation:
    """Outcome of a bounded derivability check.

    ``steps`` lists the ground equations fed to the congruence closure (ground
    axioms first, then axiom instances in the order they were generated);
    closing them under congruence re-derives the goal.
    """
    goal: Equation
    verified: bool
    depth: int
    steps: Tuple[Equation, ...] = ()

    @property
    def status(self) -> str:
        return VERIFIED if self.verified else UNKNOWN


class CongruenceClosure:
    def __init__(self):
        self.ids: Dict[Term, int] = {}
        self.terms: List[Term] = []
        self.classes = UnionFind()

    def add(self, term: Term) -> int:
        known = self.ids.get(term)
        if known is not None:
            return known
        for a in term.args:
            self.add(a)
        index = len(self.terms)
        self.ids[term] = index
        self.terms.append(term)
        self.classes[index]  # registers a singleton class
        return index

    def merge(self, first: Term, second: Term) -> None:
        self.classes.union(self.add(first), self.add(second))

    def close(self) -> None:
        changed = True
        while changed:
            changed = False
            table: Dict[Tuple, int] = {}
            for index, term in enumerate(self.terms):
                if term.is_var or not term.args:
                    continue
                key = (term.head, tuple(self.classes[self.ids[a]] for a in term.args))
                other = table.setdefault(key, index)
                if self.classes[other] != self.classes[index]:
                    self.classes.union(other, index)
                    changed = True

    def equal(self, first: Term, second: Term) -> bool:
        return self.classes[self.add(first)] == self.classes[self.add(second)]


def _check_goal(spec: EqSpec, goal: Equation) -> None:
    if spec.sort_of(goal.lhs) != spec.sort_of(goal.rhs):
        raise IllSorted(f"Goal '{goal}' relates terms of different sorts")


def derivable(spec: EqSpec, goal: Equation, depth: int) -> Derivation:
    """Bounded equational derivation of ``goal`` from the equations of ``spec``.

    Variables of the goal act as constants. Each round instantiates every
    axiom one of whose sides matches a term already in the universe (other
    variables range over universe terms of their sort), then closes under
    congruence.
    """
    _check_goal(spec, goal)
    closure = CongruenceClosure()
    steps: List[Equation] = []
    sort_cache: Dict[Term, str] = {}

    def sort(term: Term) -> str:
        if term not in sort_cache:
            sort_cache[term] = spec.sort_of(term)
        return sort_cache[term]

    for t in spec.ground_terms():
        closure.add(t)
    closure.add(goal.lhs)
    closure.add(goal.rhs)
    for e in sorted(spec.equations):
        if not e.variables():
            closure.merge(e.lhs, e.rhs)
            steps.append(e)
    closure.close()
    if closure.equal(goal.lhs, goal.rhs):
        return Derivation(goal, True, 0, tuple(steps))

    axioms = spec.axioms()
    seen = set(steps)
    for round_ in range(1, depth + 1):
        universe = sorted(closure.terms)
        by_sort: Dict[str, List[Term]] = {}
        for t in universe:
            by_sort.setdefault(sort(t), []).append(t)
        fresh: List[Equation] = []
        for axiom in axioms:
            for side, other in ((axiom.lhs, axiom.rhs), (axiom.rhs, axiom.lhs)):
                for t in universe:
                    binding = match(side, t)
                    if binding is None or any(sort(b) != spec.vars[v] for v, b in binding.items()):
                        continue
                    free = sorted(other.variables() - set(binding))
                    for values in itertools.product(*(by_sort.get(spec.vars[v], []) for v in free)):
                        full = dict(binding, **dict(zip(free, values)))
                        instance = Equation(substitute(axiom.lhs, full), substitute(axiom.rhs, full))
                        if instance not in seen:
                            seen.add(instance)
                            fresh.append(instance)
        for instance in fresh:
            closure.merge(instance.lhs, instance.rhs)
            steps.append(instance)
        closure.close()
        logger.debug("closure round %d: %d instances, %d terms", round_, len(fresh), len(closure.terms))
        if closure.equal(goal.lhs, goal.rhs):
            return Derivation(goal, True, round_, tuple(steps))
        if not fresh:
            break
        if len(closure.terms) > MAX_UNIVERSE:
            logger.warning("closure universe exceeded %d terms; giving up on '%s'", MAX_UNIVERSE, goal)
            break
    return Derivation(goal, False, depth, tuple(steps))


def replay(derivation: Derivation) -> bool:
    """Re-derive the goal from the recorded ground steps alone."""
    closure = CongruenceClosure()
    closure.add(derivation.goal.lhs)
    closure.add(derivation.goal.rhs)
    for e in derivation.steps:
        closure.merge(e.lhs, e.rhs)
    closure.close()
    return closure.equal(derivation.goal.lhs, derivation.goal.rhs)


# finite models

@dataclass(frozen=True)
class Model:
    """Finite interpretation: a carrier per sort and a total table per operation."""
    carriers: Mapping[str, Tuple[str, ...]]
    tables: Mapping[str, Mapping[Tuple[str, ...], str]]

    def evaluate(self, term: Term, assignment: Mapping[str, str]) -> str:
        if term.is_var:
            return assignment[term.head]
        args = tuple(self.evaluate(a, assignment) for a in term.args)
        try:
            return self.tables[term.head][args]
        except KeyError:
            raise InputError(f"Model has no value for {term.head}({', '.join(args)})")

    def check_signature(self, spec: EqSpec) -> None:
        for s in spec.sorts:
            if not self.carriers.get(s):
                raise ModelDoesNotSatisfySpec(f"Model has no carrier for sort '{s}'")
        for o, decl in spec.ops.items():
            table = self.tables.get(o, {})
            for args in itertools.product(*(self.carriers[s] for s in decl.args)):
                value = table.get(args)
                if value is None or value not in self.carriers[decl.result]:
                    raise ModelDoesNotSatisfySpec(f"Operation '{o}' is not total on the model")

    def assignments(self, spec: EqSpec, variables: Iterable[str]):
        names = sorted(variables)
        for values in itertools.product(*(self.carriers[spec.vars[v]] for v in names)):
            yield dict(zip(names, values))

    def counterexample(self, spec: EqSpec, equation: Equation) -> Optional[Dict[str, str]]:
        for assignment in self.assignments(spec, equation.variables()):
            if self.evaluate(equation.lhs, assignment) != self.evaluate(equation.rhs, assignment):
                return assignment
        return None


@dataclass(frozen=True)
class Refutation:
    goal: Equation
    refuted: bool
    assignment: Optional[Mapping[str, str]] = None

    @property
    def status(self) -> str:
        return REFUTED if self.refuted else INCONCLUSIVE


def refute(spec: EqSpec, goal: Equation, model: Model) -> Refutation:
    _check_goal(spec, goal)
    model.check_signature(spec)
    for e in sorted(spec.equations):
        assignment = model.counterexample(spec, e)
        if assignment is not None:
            raise ModelDoesNotSatisfySpec(f"Model falsifies the axiom '{e}' at {assignment}")
    assignment = model.counterexample(spec, goal)
    return Refutation(goal, assignment is not None, assignment)


# pleomorphisms

VERIFIED = "Verified"
REFUTED = "Refuted"
UNKNOWN = "Unknown"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class PleoVerdict:
    status: str
    derivations: Tuple[Derivation, ...] = ()
    counterexample: Optional[Refutation] = None
    reason: str = ""

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    def __str__(self):
        return f"{self.status}: {self.reason}" if self.reason else self.status


def image_spec(tau: SpecMorphism) -> EqSpec:
    """The codomain's signature and terms with only the domain's equations, transported."""
    cod = tau.codomain
    return EqSpec(cod.sorts, cod.ops, cod.vars, cod.terms, tau.image_equations())


def is_pleomorphism(tau: SpecMorphism, depth: int, model: Optional[Model] = None) -> PleoVerdict:
    """Three-valued check that ``tau`` presents an isomorphism of theories.

    Verified when nothing new is added beyond equations derivable from the
    image, Refuted on a structural mismatch or a model counterexample,
    Unknown when the depth bound runs out.
    """
    dom, cod = tau.domain, tau.codomain
    extra_sorts = sorted(cod.sorts - set(tau.sort_map.values()))
    if extra_sorts:
        return PleoVerdict(REFUTED, reason=f"codomain adds sorts {', '.join(extra_sorts)}")
    extra_ops = sorted(set(cod.ops) - set(tau.op_map.values()))
    if extra_ops:
        return PleoVerdict(REFUTED, reason=f"codomain adds operations {', '.join(extra_ops)}")
    if len(set(tau.sort_map.values())) < len(tau.sort_map) or len(set(tau.op_map.values())) < len(tau.op_map):
        return PleoVerdict(UNKNOWN, reason="sorts or operations are identified")

    derivations: List[Derivation] = []
    preimages: Dict[Term, List[Term]] = {}
    for t in sorted(dom.terms):
        preimages.setdefault(tau.apply(t), []).append(t)
    for image, group in sorted(preimages.items()):
        for other in group[1:]:
            glued = derivable(dom, Equation(group[0], other), depth)
            if not glued.verified:
                return PleoVerdict(UNKNOWN, reason=f"'{group[0]}' and '{other}' are identified by the morphism")
            derivations.append(glued)

    source = image_spec(tau)
    for e in sorted(cod.equations - source.equations):
        found = derivable(source, e, depth)
        if found.verified:
            derivations.append(found)
            continue
        if model is not None:
            try:
                refutation = refute(source, e, model)
            except ModelDoesNotSatisfySpec as err:
                logger.info("model unusable for '%s': %s", e, err.detail)
            else:
                if refutation.refuted:
                    return PleoVerdict(REFUTED, tuple(derivations), refutation,
                                       reason=f"model falsifies added equation '{e}'")
        return PleoVerdict(UNKNOWN, tuple(derivations), reason=f"'{e}' not derivable at depth {depth}")
    return PleoVerdict(VERIFIED, tuple(derivations))
