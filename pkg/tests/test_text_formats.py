import json

import pytest

from data_processing.graph_text import (parse_graph, parse_morphism, parse_rules, parse_square, write_graph,
                                        write_morphism, write_rule)
from data_processing.script_text import parse_script, read_script
from data_processing.sections import read_text
from data_processing.spec_text import (parse_model, parse_spec, parse_spec_morphism, read_spec_morphism, write_spec,
                                       write_spec_morphism)
from data_processing.traces import deduction_report, verdict_model
from errors import InputError, ParseError
from graphs.graph_core import Edge, identity
from logic.derivations import run_derivation
from logic.eq_logic import is_pleomorphism
from tests.conftest import DEPTH, FIXTURES
from visualization.dot import cube_dot, graph_dot


class TestGraphText:

    def test_round_trip(self, cycle3, fixtures):
        assert parse_graph(write_graph(cycle3)) == cycle3
        [rule] = parse_rules((fixtures / "relabel.rules").read_text())
        assert parse_rules(write_rule(rule)) == [rule]

    def test_morphism_text(self, cycle3):
        morphism = identity(cycle3)
        assert write_morphism(morphism).startswith("NODEMAP\na |-> a\n")
        assert parse_morphism(write_morphism(morphism), cycle3, cycle3) == morphism

    def test_labels(self, fixtures):
        graph = parse_graph((fixtures / "labeled.graph").read_text())
        assert graph.nodes["c"] == "City"
        assert graph.edges["k"].label == "knows"

    def test_error_carries_location(self):
        with pytest.raises(ParseError) as caught:
            parse_graph("NODES\na\nEDGES\ne a -> a\n", "g.graph")
        assert caught.value.detail.startswith("g.graph:4: ")

    def test_compact_edge_line(self):
        graph = parse_graph("NODES\na\nb\nEDGES\nf:a->b:rel\n")
        assert graph.edges["f"] == Edge("a", "b", "rel")

    def test_rule_needs_a_name(self):
        with pytest.raises(ParseError) as caught:
            parse_rules("RULE\nL:\nNODES\n", "r.rules")
        assert caught.value.line == 1

    def test_square_needs_every_block(self):
        with pytest.raises(ParseError):
            parse_square("A:\nNODES\nm\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            read_text(tmp_path / "nothing.graph")


class TestSpecText:

    def test_canonical_form_parses_back(self, nat, nat_h):
        assert parse_spec(write_spec(nat)) == nat
        assert parse_spec(write_spec(nat_h)) == nat_h

    def test_declared_terms_are_written(self, fixtures):
        text = write_spec(parse_spec((fixtures / "nat_k.eqs").read_text()))
        terms = text.split("TERMS\n")[1].split("EQNS\n")[0].splitlines()
        assert terms == ["s(0) + s(0)", "s(s(0))"]

    def test_undeclared_sort(self):
        with pytest.raises(ParseError):
            parse_spec("SORTS\nN\nOPS\nz : -> M\n")

    def test_bad_operation_line(self):
        with pytest.raises(ParseError) as caught:
            parse_spec("SORTS\nN\nOPS\nz N\n", "bad.eqs")
        assert caught.value.line == 4

    def test_morphism_paths_are_relative(self):
        tau = read_spec_morphism(FIXTURES / "l1_inclusion.morph")
        assert tau.domain.terms < tau.codomain.terms
        assert "SORTMAP\nN |-> N\n" in write_spec_morphism(tau)

    def test_morphism_needs_both_ends(self):
        with pytest.raises(ParseError):
            parse_spec_morphism("DOMAIN nat.eqs\n", str(FIXTURES / "x.morph"))

    def test_model_tables(self, mod2):
        assert mod2.carriers == {"N": ("e", "o")}
        assert mod2.tables["+"][("o", "o")] == "e"

    def test_conflicting_model_entries(self):
        with pytest.raises(ParseError):
            parse_model("CARRIERS\nN : e\nTABLES\n0 : -> e\n0 : -> o\n")


class TestScriptText:

    def test_unreadable_step(self):
        with pytest.raises(ParseError):
            parse_script("apply transitivity\n")

    def test_double_binding(self):
        with pytest.raises(ParseError):
            parse_script("step symmetry bind x=0 bind x=s(0)\n")

    def test_default_mode_can_be_changed(self):
        [step] = parse_script("step symmetry bind x=0 bind y=0", default_mode="pleo")
        assert step.mode == "pleo"

    def test_bound_terms_may_contain_spaces(self):
        [step] = parse_script("step t bind x = s(0) + 0 mode=pleo\n")
        assert step.bindings == (("x", "s(0) + 0"),)
        assert step.mode == "pleo"


class TestReports:

    def test_deduction_report_is_json(self, nat, nat_rules):
        run = run_derivation(nat, nat_rules, read_script(FIXTURES / "one_plus_one.script"), DEPTH)
        report = json.loads(deduction_report(run).model_dump_json())
        assert [s["rule"] for s in report["steps"]] == ["plus_succ", "cong_zero_plus", "transitivity"]
        assert report["steps"][2]["faces"]["bottom"] == "pushout"
        assert report["steps"][2]["verdicts"]["c_1"]["status"] == "Verified"
        assert report["final"] == write_spec(run.final)

    def test_counterexample_in_verdict(self, mod2):
        verdict = is_pleomorphism(read_spec_morphism(FIXTURES / "bad_inclusion.morph"), DEPTH, mod2)
        assert verdict_model(verdict).counterexample == {}

    def test_dot(self, cycle3, nat, nat_rules):
        text = graph_dot(cycle3, "cycle")
        assert text.startswith('digraph "cycle" {')
        assert '"a" -> "b" [label="e1"];' in text
        run = run_derivation(nat, nat_rules, read_script(FIXTURES / "one_plus_one.script"), DEPTH)
        cube = cube_dot(run.steps[-1].trace, "step3")
        assert '"Ss_K" -> "Ss_H" [label="l_1"];' in cube
        assert "\\l" in cube
