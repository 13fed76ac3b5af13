import pytest

from data_processing.script_text import parse_script, read_script
from data_processing.spec_text import read_spec, write_spec
from errors import InstanceNotPleo, ScriptStepFailed, UnboundVariable
from logic.deduction import CLASSIC, PLEO, PLEO_MINIMAL, DeductionCube, DeductionTrace
from logic.derivations import ScriptStep, instantiate, parse_bindings, run_derivation
from tests.conftest import DEPTH, FIXTURES, GOLDEN


@pytest.fixture
def one_plus_one():
    return read_script(FIXTURES / "one_plus_one.script")


def test_empty_script_leaves_the_spec_alone(nat, nat_rules):
    run = run_derivation(nat, nat_rules, read_script(FIXTURES / "empty.script"), DEPTH)
    assert run.steps == []
    assert run.final == nat
    assert run.instance is None


class TestOnePlusOne:

    def test_minimal_run_keeps_only_the_result(self, nat, nat_rules, one_plus_one):
        run = run_derivation(nat, nat_rules, one_plus_one, DEPTH)
        assert [r.mode for r in run.steps] == [PLEO_MINIMAL] * 3
        assert all(isinstance(r.trace, DeductionCube) for r in run.steps)
        assert write_spec(run.final) == (GOLDEN / "nat_plus_one.eqs").read_text()

    def test_classic_run_keeps_every_lemma(self, nat, nat_rules, one_plus_one):
        run = run_derivation(nat, nat_rules, one_plus_one, DEPTH, mode=CLASSIC)
        assert all(isinstance(r.trace, DeductionTrace) for r in run.steps)
        assert write_spec(run.final) == (GOLDEN / "nat_classic.eqs").read_text()

    def test_modes_agree_up_to_lemmas(self, nat, nat_rules, one_plus_one):
        minimal = run_derivation(nat, nat_rules, one_plus_one, DEPTH).final
        classic = run_derivation(nat, nat_rules, one_plus_one, DEPTH, mode=CLASSIC).final
        plain = run_derivation(nat, nat_rules, one_plus_one, DEPTH, mode=PLEO).final
        assert minimal.equations < classic.equations
        assert plain.equations == classic.equations

    def test_final_equation_follows_from_nat(self, nat, nat_rules, one_plus_one):
        from logic.eq_logic import derivable
        run = run_derivation(nat, nat_rules, one_plus_one, DEPTH)
        for e in run.final.equations - nat.equations:
            assert derivable(nat, e, DEPTH).verified

    def test_links_chain_back_to_the_initial_spec(self, nat, nat_rules, one_plus_one):
        run = run_derivation(nat, nat_rules, one_plus_one, DEPTH)
        assert run.instance.base == nat
        assert all(link.verdict.verified for link in run.instance.links)


class TestFailures:

    def test_unknown_rule(self, nat, nat_rules):
        with pytest.raises(ScriptStepFailed) as caught:
            run_derivation(nat, nat_rules, [ScriptStep("induction")], DEPTH)
        assert caught.value.step == 1
        assert caught.value.exit_code == 1

    def test_missing_binding(self, nat, nat_rules):
        with pytest.raises(ScriptStepFailed) as caught:
            run_derivation(nat, nat_rules, [ScriptStep("cong_zero_plus")], DEPTH)
        assert isinstance(caught.value.__cause__, UnboundVariable)

    def test_failure_keeps_earlier_steps(self, nat, nat_rules, one_plus_one):
        script = one_plus_one[:1] + [ScriptStep("transitivity", bindings=(("x", "0"),))]
        with pytest.raises(ScriptStepFailed) as caught:
            run_derivation(nat, nat_rules, script, DEPTH)
        assert caught.value.step == 2
        assert len(caught.value.trace) == 1

    def test_instance_must_follow_from_the_spec(self, nat, nat_rules):
        bindings = parse_bindings(nat, [("x", "0"), ("y", "s(0)"), ("z", "0")])
        with pytest.raises(InstanceNotPleo):
            instantiate(nat_rules["transitivity"], nat, bindings, nat, (), DEPTH)

    def test_binding_must_be_a_term_of_the_spec(self, nat):
        with pytest.raises(UnboundVariable):
            parse_bindings(nat, [("x", "t(0)")])


class TestScripts:

    def test_bindings_may_contain_spaces(self):
        [step] = parse_script("step transitivity mode=pleo bind x=s(0) + s(0) bind y=0\n")
        assert step.mode == PLEO
        assert step.bindings == (("x", "s(0) + s(0)"), ("y", "0"))

    def test_default_mode(self):
        [step] = parse_script("step symmetry bind x=0 bind y=0")
        assert step.mode == CLASSIC
        assert step.line == 1

    def test_fixture_script(self, one_plus_one):
        assert [s.rule for s in one_plus_one] == ["plus_succ", "cong_zero_plus", "transitivity"]
        assert one_plus_one[2].bindings[0] == ("x", "s(0) + s(0)")
