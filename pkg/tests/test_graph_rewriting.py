import pytest

from data_processing.graph_text import read_graph, read_rules
from errors import DanglingViolation, MalformedSpan, UnsupportedMatch
from graphs.graph_core import Edge, Graph, GraphMorphism, find_matches, identity, is_isomorphic
from graphs.graph_rewriting import DPO, SQPO, RewriteRule, apply_all, dpo_step, first_success, sqpo_step
from tests.small_graphs import all_graphs


def test_rule_legs_share_interface(edge_graph, loop):
    with pytest.raises(MalformedSpan):
        RewriteRule("broken", identity(edge_graph), identity(loop))


class TestDPO:

    def test_edge_deletion_at_every_match(self, del_edge, cycle3):
        results = apply_all(del_edge, cycle3, DPO)
        assert len(results) == 3
        for match, step in results:
            assert step.check()
            assert "L." + match.edge_map["f"] not in step.H.edges
            assert len(step.H.nodes) == 3

    def test_dangling_node_is_refused(self, del_node, loop):
        [(_, outcome)] = apply_all(del_node, loop, DPO)
        assert isinstance(outcome, DanglingViolation)
        assert first_success([(None, outcome)]) is None

    def test_relabel_keeps_context(self, fixtures):
        graph = read_graph(fixtures / "labeled.graph")
        [rule] = read_rules(fixtures / "relabel.rules")
        step = first_success(apply_all(rule, graph, DPO))
        assert step is not None
        assert step.H.edges["R.f1"] == Edge("L.p", "L.q", "friend")
        assert step.H.edges["R.f2"] == Edge("L.q", "L.p", "friend")
        assert {"L.v1", "L.v2"} <= set(step.H.edges)
        assert "L.k" not in step.H.edges

    def test_squares(self, del_edge, cycle3):
        step = dpo_step(del_edge, find_matches(del_edge.L, cycle3)[0])
        assert step.left_square.commutes()
        assert step.right_square.commutes()
        assert is_isomorphic(step.D, step.H)
        assert set(step.H.nodes) == {"L.a", "L.b", "L.c"}


class TestSqPO:

    def test_deleting_a_node_drops_its_edges(self, del_node, loop):
        [(_, step)] = apply_all(del_node, loop, SQPO)
        assert step.check()
        assert step.H == Graph()

    def test_agrees_with_dpo_when_dpo_applies(self, del_edge, cycle3):
        for match in find_matches(del_edge.L, cycle3):
            assert sqpo_step(del_edge, match).H == dpo_step(del_edge, match).H

    def test_non_injective_match_is_refused(self, edge_graph, loop):
        rule = RewriteRule("keep", identity(edge_graph), identity(edge_graph))
        match = GraphMorphism(edge_graph, loop, {"x": "a", "y": "a"}, {"f": "l"})
        with pytest.raises(UnsupportedMatch):
            sqpo_step(rule, match)

    def test_mono_flag_limits_matches(self, edge_graph, loop):
        rule = RewriteRule("keep", identity(edge_graph), identity(edge_graph))
        assert apply_all(rule, loop, SQPO, mono=True) == []


def merge_rule() -> RewriteRule:
    """Glue two nodes into one."""
    K = Graph.build({"x": "", "y": ""})
    return RewriteRule("merge", identity(K), GraphMorphism(K, Graph.build({"z": ""}), {"x": "z", "y": "z"}, {}))


def add_edge_rule() -> RewriteRule:
    K = Graph.build({"x": "", "y": ""})
    R = Graph.build({"x": "", "y": ""}, {"f": ("x", "y")})
    return RewriteRule("add_edge", identity(K), GraphMorphism(K, R, {"x": "x", "y": "y"}, {}))


PENTAGON = Graph.build({n: "" for n in "abcde"},
                       {"e1": ("a", "b"), "e2": ("b", "c"), "e3": ("c", "d"), "e4": ("d", "e"), "e5": ("e", "a"),
                        "chord": ("a", "c")})


class TestDPOAgainstSqPO:

    @pytest.fixture
    def rules(self, del_edge, del_node):
        return [del_edge, del_node, merge_rule(), add_edge_rule()]

    def check_host(self, rule, graph):
        agreed = 0
        for match in find_matches(rule.L, graph, mono=True):
            sqpo = sqpo_step(rule, match)
            assert sqpo.check()
            try:
                dpo = dpo_step(rule, match)
            except DanglingViolation:
                continue
            assert dpo.check()
            assert is_isomorphic(dpo.H, sqpo.H)
            agreed += 1
        return agreed

    def test_every_small_host(self, rules):
        agreed = sum(self.check_host(rule, graph) for rule in rules for graph in all_graphs(3, 3))
        assert agreed > 500

    def test_five_node_host(self, rules):
        for rule in rules:
            self.check_host(rule, PENTAGON)
        [(_, outcome)] = apply_all(rules[1], Graph.build({"a": ""}), DPO)
        assert outcome.H == Graph()
