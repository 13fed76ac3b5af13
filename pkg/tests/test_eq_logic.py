import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from categories.colimit_engine import pushout, verify_pushout
from categories.diagrams import Span
from data_processing.spec_text import parse_spec, read_spec, read_spec_morphism
from errors import BindingClash, IllSorted, MalformedMorphism, ModelDoesNotSatisfySpec
from logic.eq_logic import (INCONCLUSIVE, REFUTED, UNKNOWN, VERIFIED, EqSpec, Model, OpDecl, by_name,
                            compose, derivable, find_isomorphism, identity, inclusion, is_iso,
                            is_pleomorphism, refute, replay)
from logic.terms import Equation, app, parse_equation, var
from tests.conftest import FIXTURES

zero = app("0")


def s(t, times=1):
    for _ in range(times):
        t = app("s", t)
    return t


def plus(a, b):
    return app("+", a, b)


ground = st.recursive(
    st.just(zero),
    lambda inner: st.one_of(inner.map(s), st.tuples(inner, inner).map(lambda p: plus(*p))),
    max_leaves=4,
)

AXIOM_POOL = (
    "0 + y == y",
    "s(x) + y == s(x + y)",
    "x + y == y + x",
    "x + 0 == x",
    "s(s(0)) == 0",
    "s(0) == 0",
    "s(x) + y == x + s(y)",
    "0 + 0 == s(0)",
)


@st.composite
def models(draw):
    """Any interpretation of 0, s and + on one to three elements."""
    carrier = tuple(f"c{i}" for i in range(draw(st.integers(1, 3))))
    element = st.sampled_from(carrier)
    return Model({"N": carrier}, {
        "0": {(): draw(element)},
        "s": {(a,): draw(element) for a in carrier},
        "+": {(a, b): draw(element) for a in carrier for b in carrier},
    })


@pytest.fixture
def signature(nat):
    """nat without its equations."""
    return EqSpec(nat.sorts, nat.ops, nat.vars)


class TestSpec:

    def test_terms_are_closed_under_subterms(self, nat):
        assert {zero, var("x"), var("y"), plus(var("x"), var("y"))} <= nat.terms
        assert len(nat.axioms()) == 2
        assert nat.ground_terms() == [zero]

    def test_unused_variables_are_terms(self):
        spec = EqSpec({"S"}, {}, {"v": "S"})
        assert spec.terms == {var("v")}

    def test_ill_sorted_equation(self):
        with pytest.raises(IllSorted):
            EqSpec({"A", "B"}, {"a": OpDecl((), "A"), "b": OpDecl((), "B")}, {},
                   equations={Equation(app("a"), app("b"))})

    def test_undeclared_operation(self, nat):
        with pytest.raises(IllSorted):
            nat.sort_of(app("t"))

    def test_extend(self, nat):
        bigger = nat.extend([s(zero, 2)])
        assert s(zero) in bigger.terms
        assert bigger.equations == nat.equations


class TestMorphisms:

    def test_inclusion_of_signature(self, signature, nat):
        f = inclusion(signature, nat)
        assert f.apply(plus(var("x"), zero)) == plus(var("x"), zero)

    def test_equations_must_be_preserved(self, signature, nat):
        with pytest.raises(MalformedMorphism):
            inclusion(nat, signature)

    def test_variables_can_be_instantiated(self, nat):
        lemma = EqSpec(nat.sorts, nat.ops, {"y": "N"}, equations={Equation(plus(zero, var("y")), var("y"))})
        instance = EqSpec(nat.sorts, nat.ops, equations={Equation(plus(zero, s(zero)), s(zero))})
        f = by_name(lemma, instance, var_map={"y": s(zero)})
        assert f.apply(plus(zero, var("y"))) == plus(zero, s(zero))
        assert f.image_equations() == instance.equations

    def test_compose_and_identity(self, signature, nat):
        f = inclusion(signature, nat)
        assert compose(identity(signature), f) == f
        assert compose(f, identity(nat)) == f
        assert is_iso(identity(nat))
        assert not is_iso(f)

    def test_renamed_copy_is_isomorphic(self, nat):
        renamed = parse_spec(
            "SORTS\nM\nOPS\n0 : -> M\ns : M -> M\n+ : M M -> M\nVARS\na b : M\n"
            "EQNS\n0 + b == b\ns(a) + b == s(a + b)\n")
        found = find_isomorphism(nat, renamed)
        assert found is not None
        assert found.sort_map == {"N": "M"}
        assert found.var_map == {"x": var("a"), "y": var("b")}

    def test_not_isomorphic_to_signature(self, signature, nat):
        assert find_isomorphism(signature, nat) is None


class TestSpecPushout:

    def test_gluing_over_the_signature(self, signature, nat):
        f = inclusion(signature, nat)
        result = pushout(Span(f, f))
        assert result.object == nat
        assert verify_pushout(result.as_square())

    def test_variable_bound_to_a_constant(self):
        K = EqSpec({"S"}, {}, {"v": "S"})
        B = EqSpec({"S"}, {"a": OpDecl((), "S")}, {}, {app("a")})
        C = EqSpec({"S"}, {"f": OpDecl(("S",), "S")}, {"v": "S"},
                   equations={Equation(app("f", var("v")), var("v"))})
        result = pushout(Span(by_name(K, B, var_map={"v": app("a")}), inclusion(K, C)))
        P = result.object
        assert P.vars == {}
        assert P.equations == {Equation(app("f", app("a")), app("a"))}
        assert verify_pushout(result.as_square())

    def test_distinct_constants_cannot_be_glued(self):
        K = EqSpec({"S"}, {}, {"v": "S"})
        B = EqSpec({"S"}, {"a": OpDecl((), "S")}, {}, {app("a")})
        C = EqSpec({"S"}, {"b": OpDecl((), "S")}, {}, {app("b")})
        span = Span(by_name(K, B, var_map={"v": app("a")}), by_name(K, C, var_map={"v": app("b")}))
        with pytest.raises(BindingClash):
            pushout(span)


class TestDerivable:

    def test_reflexivity_needs_no_rounds(self, nat):
        found = derivable(nat, Equation(s(zero), s(zero)), 0)
        assert found.verified
        assert found.depth == 0

    def test_one_plus_one(self, nat):
        goal = parse_equation("s(0) + s(0) == s(s(0))")
        assert not derivable(nat, goal, 0).verified
        found = derivable(nat, goal, 1)
        assert found.status == VERIFIED
        assert found.depth == 1
        assert replay(found)

    @pytest.mark.parametrize("n,m", [(0, 1), (1, 1), (2, 0), (1, 2), (2, 2)])
    def test_addition_and_monotonicity(self, nat, n, m):
        goal = Equation(plus(s(zero, n), s(zero, m)), s(zero, n + m))
        assert derivable(nat, goal, n + 1).verified
        assert derivable(nat, goal, n + 2).verified

    def test_induction_is_out_of_reach(self, nat, mod2):
        goal = parse_equation("x + 0 == x", nat.vars)
        found = derivable(nat, goal, 2)
        assert found.status == UNKNOWN
        assert refute(nat, goal, mod2).status == INCONCLUSIVE

    def test_ill_sorted_goal(self):
        spec = EqSpec({"A", "B"}, {"a": OpDecl((), "A"), "b": OpDecl((), "B")})
        with pytest.raises(IllSorted):
            derivable(spec, Equation(app("a"), app("b")), 1)


class TestRefute:

    def test_zero_is_not_one(self, nat, mod2):
        found = refute(nat, Equation(zero, s(zero)), mod2)
        assert found.status == REFUTED
        assert found.assignment == {}

    def test_true_equation_survives(self, nat, mod2):
        assert not refute(nat, Equation(zero, s(zero, 2)), mod2).refuted

    def test_model_must_satisfy_axioms(self, mod2):
        with pytest.raises(ModelDoesNotSatisfySpec):
            refute(read_spec(FIXTURES / "nat_bad.eqs"), Equation(zero, zero), mod2)

    def test_model_must_cover_signature(self, nat):
        with pytest.raises(ModelDoesNotSatisfySpec):
            refute(nat, Equation(zero, zero), Model({"N": ("e",)}, {}))

    @settings(max_examples=50, deadline=None)
    @given(models(), st.sets(st.sampled_from(AXIOM_POOL)), ground, ground)
    def test_derived_equations_are_never_refuted(self, model, axioms, first, second):
        nat = read_spec(FIXTURES / "nat.eqs")
        signature = EqSpec(nat.sorts, nat.ops, nat.vars)
        equations = [parse_equation(text, nat.vars) for text in sorted(axioms)]
        spec = EqSpec(nat.sorts, nat.ops, nat.vars,
                      equations=[e for e in equations if not refute(signature, e, model).refuted])
        goal = Equation(first, second)
        assert not (derivable(spec, goal, 1).verified and refute(spec, goal, model).refuted)


class TestPleomorphism:

    def test_identity(self, nat):
        assert is_pleomorphism(identity(nat), 1).verified

    def test_added_lemmas_are_derivable(self):
        verdict = is_pleomorphism(read_spec_morphism(FIXTURES / "l1_inclusion.morph"), 2)
        assert verdict.status == VERIFIED
        assert len(verdict.derivations) == 2

    def test_false_equation_is_refuted_by_model(self, mod2):
        verdict = is_pleomorphism(read_spec_morphism(FIXTURES / "bad_inclusion.morph"), 2, mod2)
        assert verdict.status == REFUTED
        assert verdict.counterexample.refuted

    def test_false_equation_without_model(self):
        verdict = is_pleomorphism(read_spec_morphism(FIXTURES / "bad_inclusion.morph"), 2)
        assert verdict.status == UNKNOWN

    def test_added_sort(self, nat):
        bigger = EqSpec(nat.sorts | {"B"}, nat.ops, nat.vars, nat.terms, nat.equations)
        assert is_pleomorphism(inclusion(nat, bigger), 1).status == REFUTED

    def test_identified_sorts(self):
        two = EqSpec({"A", "B"})
        one = EqSpec({"S"})
        tau = by_name(two, one, sort_map={"A": "S", "B": "S"})
        assert is_pleomorphism(tau, 1).status == UNKNOWN


class TestPleoProperties:
    """Bounded forms of the closure properties of pleomorphisms, over the fixture corpus."""

    DEPTH = 2

    @pytest.fixture
    def corpus(self, signature, nat, nat_h):
        nat_k = read_spec(FIXTURES / "nat_k.eqs")
        goal = parse_equation("s(s(0)) == s(0) + s(0)")
        wrong = Equation(s(zero), zero)
        return [signature, nat, nat_k, nat_h, nat_k.extend(equations=[goal]), nat_h.extend(equations=[goal]),
                nat.extend(equations=[wrong]), nat_h.extend(equations=[goal, wrong])]

    def test_constructed_isomorphisms_verify(self, nat):
        renamed = parse_spec(
            "SORTS\nM\nOPS\n0 : -> M\ns : M -> M\n+ : M M -> M\nVARS\na b : M\n"
            "EQNS\n0 + b == b\ns(a) + b == s(a + b)\n")
        iso = find_isomorphism(nat, renamed)
        assert is_pleomorphism(iso, 0).verified
        assert is_pleomorphism(identity(renamed), 0).verified

    def test_two_out_of_three(self, corpus, mod2):
        d = self.DEPTH
        checked = 0
        for A, B, C in itertools.product(corpus, repeat=3):
            try:
                f, g = inclusion(A, B), inclusion(B, C)
            except MalformedMorphism:
                continue
            triple = (f, g, compose(f, g))
            verdicts = [is_pleomorphism(m, d, mod2) for m in triple]
            if sum(v.verified for v in verdicts) < 2:
                continue
            checked += 1
            for m, v in zip(triple, verdicts):
                assert v.status != REFUTED
                assert v.verified or is_pleomorphism(m, 2 * d, mod2).verified
        assert checked >= 20

    def test_refuted_composite_blames_a_factor(self, corpus, nat, mod2):
        wrong = corpus[6]
        f, g = inclusion(nat, wrong), inclusion(wrong, wrong)
        assert is_pleomorphism(compose(f, g), self.DEPTH, mod2).status == REFUTED
        assert is_pleomorphism(f, self.DEPTH, mod2).status == REFUTED

    def test_stable_under_pushout(self, corpus, nat, nat_h):
        d = self.DEPTH
        tau = inclusion(nat, nat_h)
        assert is_pleomorphism(tau, d).verified
        renamed = parse_spec(
            "SORTS\nM\nOPS\n0 : -> M\ns : M -> M\n+ : M M -> M\nVARS\na b : M\n"
            "EQNS\n0 + b == b\ns(a) + b == s(a + b)\n")
        wider = EqSpec(nat.sorts | {"B"}, {**nat.ops, "t": OpDecl(("N",), "B")}, nat.vars,
                       {app("t", zero)}, nat.equations)
        along = [identity(nat), find_isomorphism(nat, renamed), inclusion(nat, wider)]
        along += [inclusion(nat, X) for X in corpus[1:] if nat.equations <= X.equations]
        assert len(along) >= 7
        for sigma in along:
            result = pushout(Span(tau, sigma))
            assert verify_pushout(result.as_square())
            pushed = result.cocone.right
            assert pushed.domain == sigma.codomain
            attached = sigma.codomain.size()[0]
            assert is_pleomorphism(pushed, d + attached).verified, str(sigma.codomain)
