import itertools

import pytest

from categories.colimit_engine import verify_pushout
from categories.diagrams import Cospan, PushoutResult, Span
from data_processing.spec_text import parse_deduction_rules, read_deduction_rules, read_spec
from errors import DenominatorNotPleo, EndpointMismatch, LeftSquareNotCommuting, RuleHasNoSpan, SortMismatch
from logic.deduction import (COMPOSITE, DeductionCube, DeductionRule, Instance, Link, Witness, classic_step,
                             identity_witness, kernel_from_names, minimal_witness, pleopushout_step)
from logic.derivations import instantiate
from logic.eq_logic import (SPECS, VERIFIED, EqSpec, Model, compose, derivable, find_morphisms, identity,
                            inclusion, is_pleomorphism)
from logic.terms import Equation, parse_equation, parse_term, substitute
from tests.conftest import DEPTH, FIXTURES

GOAL = parse_equation("s(s(0)) == s(0) + s(0)")

BINDINGS = {
    "x": parse_term("s(0) + s(0)"),
    "y": parse_term("s(0 + s(0))"),
    "z": parse_term("s(s(0))"),
}

LOOSE_RULE = """
RULE collapse
K:
SORTS
S
VARS
x y : S
H:
SORTS
S
VARS
x y : S
C:
SORTS
S
VARS
x y : S
EQNS
x == y
l:
r:
"""


@pytest.fixture
def transitivity(nat_rules):
    return nat_rules["transitivity"]


@pytest.fixture
def lemmas_instance(transitivity, nat, nat_h):
    """Transitivity instantiated in nat plus both lemmas, reached from plain nat."""
    into = inclusion(nat, nat_h)
    link = Link(into, True, is_pleomorphism(into, DEPTH))
    return instantiate(transitivity, nat_h, BINDINGS, nat, (link,), DEPTH)


class TestRules:

    def test_span_rule_has_pleomorphic_denominator(self, transitivity):
        assert transitivity.has_span
        assert transitivity.fraction.evidence.status == VERIFIED
        assert transitivity.P.equations == transitivity.H.equations | transitivity.C.equations

    def test_fraction_form_recovers_its_span(self):
        [rule] = read_deduction_rules(FIXTURES / "trans_fraction.rules", DEPTH).values()
        assert rule.has_span
        assert set(rule.K.vars) == {"x", "z"}
        assert rule.K.equations == frozenset()

    def test_kernel_needs_matching_sorts(self):
        H = EqSpec({"S"}, {}, {"x": "S"})
        C = EqSpec({"S", "T"}, {}, {"x": "T"})
        with pytest.raises(SortMismatch):
            kernel_from_names(H, C)

    def test_unprovable_denominator_is_refused(self):
        with pytest.raises(DenominatorNotPleo):
            parse_deduction_rules(LOOSE_RULE, DEPTH)

    def test_unprovable_denominator_can_be_assumed(self):
        rule = parse_deduction_rules(LOOSE_RULE, DEPTH, assume_pleo=True)["collapse"]
        assert rule.assumed

    def test_refuted_denominator_cannot_be_assumed(self):
        model = Model({"S": ("a", "b")}, {})
        with pytest.raises(DenominatorNotPleo):
            parse_deduction_rules(LOOSE_RULE, DEPTH, model=model, assume_pleo=True)


class TestInstances:

    def test_instance_of_lemmas(self, lemmas_instance, nat_h):
        assert lemmas_instance.target == nat_h
        assert lemmas_instance.morphism.sort_map == {"S": "N"}

    def test_zig_zag_must_connect(self, lemmas_instance, nat_h):
        with pytest.raises(EndpointMismatch):
            Instance(lemmas_instance.morphism, nat_h, lemmas_instance.links)


class TestClassic:

    def test_adds_the_conclusion(self, transitivity, lemmas_instance, nat_h):
        result, trace = classic_step(transitivity, lemmas_instance, DEPTH)
        assert result.target.equations == nat_h.equations | {GOAL}
        assert trace.verdict.verified
        assert verify_pushout(trace.pushout.as_square())
        assert len(result.links) == len(lemmas_instance.links) + 1

    def test_rejects_foreign_instance(self, nat_rules, lemmas_instance):
        with pytest.raises(EndpointMismatch):
            classic_step(nat_rules["symmetry"], lemmas_instance, DEPTH)


class TestPleopushout:

    def test_identity_witness_matches_classic(self, transitivity, lemmas_instance):
        classic, _ = classic_step(transitivity, lemmas_instance, DEPTH)
        result, cube = pleopushout_step(transitivity, lemmas_instance,
                                        identity_witness(transitivity, lemmas_instance), DEPTH)
        assert SPECS.isomorphic(result.target, classic.target)
        assert isinstance(cube, DeductionCube)

    def test_minimal_witness_drops_the_lemmas(self, transitivity, lemmas_instance):
        witness = minimal_witness(transitivity, lemmas_instance, DEPTH)
        assert witness is not None
        assert witness.spec == read_spec(FIXTURES / "nat_k.eqs")
        result, cube = pleopushout_step(transitivity, lemmas_instance, witness, DEPTH)
        nat = lemmas_instance.base
        assert result.target.equations == nat.equations | {GOAL}
        assert cube.objects["Ss_P"].equations == lemmas_instance.target.equations | {GOAL}

    def test_cube_is_fully_checked(self, transitivity, lemmas_instance):
        witness = minimal_witness(transitivity, lemmas_instance, DEPTH)
        _, cube = pleopushout_step(transitivity, lemmas_instance, witness, DEPTH)
        assert len(cube.faces) == 6
        for name in DeductionCube.PUSHOUT_FACES:
            assert cube.face_status[name] == "pushout"
        assert cube.face_status["back_left"] == "commutes"
        assert all(cube.verdicts[name].verified for name in DeductionCube.PLEO_MORPHISMS)
        assert cube.verdicts[COMPOSITE].verified

    def test_witness_must_commute(self, transitivity, lemmas_instance):
        good = minimal_witness(transitivity, lemmas_instance, DEPTH)
        S_H = lemmas_instance.target
        bad = Witness(good.sigma_K, identity(S_H))
        with pytest.raises(LeftSquareNotCommuting):
            pleopushout_step(transitivity, lemmas_instance, bad, DEPTH)

    def test_fraction_without_span(self, transitivity, lemmas_instance):
        bare = DeductionRule(transitivity.name, transitivity.fraction)
        with pytest.raises(RuleHasNoSpan):
            identity_witness(bare, lemmas_instance)
        with pytest.raises(RuleHasNoSpan):
            minimal_witness(bare, lemmas_instance, DEPTH)


GROUND = ("0", "s(0)", "0 + 0", "s(s(0))")

RUNS = [("plus_succ", {"x": x, "y": y}) for x, y in itertools.product(GROUND, repeat=2)] + \
       [("cong_zero_plus", {"y": y}) for y in GROUND]


def top_pushout(cube):
    m = cube.morphisms
    return PushoutResult(Span(m["l"], m["r"]), Cospan(m["h"], m["c"]))


def mediating_cocone(cube):
    m = cube.morphisms
    return Cospan(compose(m["sigma_H"], m["h_1"]), compose(m["sigma_C"], m["c_1"]))


class TestCubeTheorem:

    @pytest.mark.parametrize("kind", ["identity", "minimal"])
    @pytest.mark.parametrize("name, binding", RUNS)
    def test_generated_run(self, nat_rules, nat, name, binding, kind):
        rule = nat_rules[name]
        bindings = {v: parse_term(t) for v, t in binding.items()}
        inst = instantiate(rule, nat, bindings, nat, (), DEPTH)
        witness = identity_witness(rule, inst) if kind == "identity" else minimal_witness(rule, inst, DEPTH)
        result, cube = pleopushout_step(rule, inst, witness, DEPTH)

        assert set(cube.faces) == {"top", "back_right", "bottom", "front_left", "back_left", "front_right"}
        for face, square in cube.faces.items():
            assert square.commutes(), face
        for face in DeductionCube.PUSHOUT_FACES:
            assert cube.face_status[face] == "pushout"
            assert verify_pushout(cube.faces[face]), face
        for morphism in DeductionCube.PLEO_MORPHISMS:
            assert cube.verdicts[morphism].verified, morphism
        assert cube.verdicts[COMPOSITE].verified
        assert SPECS.mediators(top_pushout(cube), mediating_cocone(cube)) == [cube.morphisms["sigma_P"]]

        conclusion = {Equation(substitute(e.lhs, bindings), substitute(e.rhs, bindings)) for e in rule.C.equations}
        assert result.target == cube.objects["Ss_C"]
        assert nat.equations | conclusion <= result.target.equations
        for e in sorted(result.target.equations - nat.equations):
            assert derivable(nat, e, DEPTH).verified, str(e)

    def test_no_second_mediator(self, transitivity, lemmas_instance):
        witness = minimal_witness(transitivity, lemmas_instance, DEPTH)
        _, cube = pleopushout_step(transitivity, lemmas_instance, witness, DEPTH)
        m, cocone = cube.morphisms, mediating_cocone(cube)
        candidates = list(find_morphisms(cube.objects["P"], cube.objects["Ss_P"]))
        found = [u for u in candidates if compose(m["h"], u) == cocone.left and compose(m["c"], u) == cocone.right]
        assert len(candidates) > 100
        assert found == [m["sigma_P"]]

    def test_minimal_witness_against_subset_search(self, transitivity, nat, nat_h):
        extra = parse_equation("x + 0 == x", nat.vars)
        S = nat_h.extend(equations=[extra])
        into = inclusion(nat, S)
        verdict = is_pleomorphism(into, DEPTH)
        assert not verdict.verified
        inst = instantiate(transitivity, S, BINDINGS, nat, (Link(into, True, verdict, assumed=True),), DEPTH)

        witness = minimal_witness(transitivity, inst, DEPTH)
        kept = witness.spec.equations - nat.equations
        assert kept == {extra}

        spec = witness.spec
        core = EqSpec(spec.sorts, spec.ops, spec.vars, spec.terms, nat.equations)
        pool = sorted(inst.target.equations - nat.equations)
        assert len(pool) <= 8
        sufficient = [set(chosen) for k in range(len(pool) + 1) for chosen in itertools.combinations(pool, k)
                      if is_pleomorphism(inclusion(core.extend(equations=chosen), inst.target), DEPTH).verified]
        assert len(kept) == min(len(s) for s in sufficient)
        assert kept in sufficient
        assert all(extra in s for s in sufficient)

        result, _ = pleopushout_step(transitivity, inst, witness, DEPTH)
        assert {extra, GOAL} <= result.target.equations
