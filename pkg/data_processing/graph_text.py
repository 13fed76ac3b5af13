"""Text formats for graphs, graph morphisms, rewrite rules and squares of graphs."""

from typing import Dict, List, Optional, Sequence, Tuple

from lark import Transformer, v_args

from categories.diagrams import Square
from data_processing.sections import (TERMINALS, Line, LineParser, clean_lines, read_mapping, read_text,
                                      require, split_blocks, split_records, split_sections)
from errors import InputError, ParseError
from graphs.graph_core import Edge, Graph, GraphMorphism
from graphs.graph_rewriting import RewriteRule

GRAPH_LINES = r"""
    node: SYMBOL [":" SYMBOL]
    edge: SYMBOL ":" SYMBOL "->" SYMBOL [":" SYMBOL]
""" + TERMINALS


@v_args(inline=True)
class _GraphLines(Transformer):
    def node(self, name, label):
        return str(name), str(label or "")

    def edge(self, name, source, target, label):
        return str(name), Edge(str(source), str(target), str(label or ""))


_lines = LineParser(GRAPH_LINES, _GraphLines(), ("node", "edge"))


def _graph_from_lines(lines: Sequence[Line], path: Optional[str]) -> Graph:
    sections = split_sections(lines, ("NODES", "EDGES"), path)
    nodes: Dict[str, str] = {}
    for line in sections.get("NODES", []):
        name, label = _lines.parse(line, "node", path, "'id : label'")
        if name in nodes:
            raise ParseError(f"Duplicate node '{name}'", path, line.number)
        nodes[name] = label
    edges: Dict[str, Edge] = {}
    for line in sections.get("EDGES", []):
        name, edge = _lines.parse(line, "edge", path, "'id : src -> tgt : label'")
        if name in edges:
            raise ParseError(f"Duplicate edge '{name}'", path, line.number)
        for end in (edge.source, edge.target):
            if end not in nodes:
                raise ParseError(f"Edge '{name}' refers to unknown node '{end}'", path, line.number)
        edges[name] = edge
    return Graph(nodes, edges)

def parse_graph(text: str, path: Optional[str] = None) -> Graph:
    return _graph_from_lines(clean_lines(text), path)


def read_graph(path) -> Graph:
    return parse_graph(read_text(path), str(path))


def write_graph(graph: Graph) -> str:
    lines = ["NODES"]
    lines += [f"{n} : {label}" if label else n for n, label in graph.nodes.items()]
    lines.append("EDGES")
    for e, edge in graph.edges.items():
        suffix = f" : {edge.label}" if edge.label else ""
        lines.append(f"{e} : {edge.source} -> {edge.target}{suffix}")
    return "\n".join(lines) + "\n"


def _morphism_from_lines(lines: Sequence[Line], domain: Graph, codomain: Graph, path: Optional[str],
                         where: Optional[Line] = None) -> GraphMorphism:
    sections = split_sections(lines, ("NODEMAP", "EDGEMAP"), path)
    maps = []
    for keyword in ("NODEMAP", "EDGEMAP"):
        maps.append({x: y for x, (y, _) in read_mapping(sections.get(keyword, []), path).items()})
    try:
        return GraphMorphism(domain, codomain, maps[0], maps[1])
    except InputError as e:
        raise ParseError(e.detail, path, where.number if where else None)


def parse_morphism(text: str, domain: Graph, codomain: Graph, path: Optional[str] = None) -> GraphMorphism:
    return _morphism_from_lines(clean_lines(text), domain, codomain, path)


def write_morphism(morphism: GraphMorphism) -> str:
    lines = ["NODEMAP"] + [f"{x} |-> {y}" for x, y in morphism.node_map.items()]
    lines += ["EDGEMAP"] + [f"{x} |-> {y}" for x, y in morphism.edge_map.items()]
    return "\n".join(lines) + "\n"


def parse_rules(text: str, path: Optional[str] = None) -> List[RewriteRule]:
    """One or more ``RULE name`` records, each with blocks L:, K:, R:, l:, r:."""
    rules = []
    for name, head, body in split_records(clean_lines(text), path):
        header, blocks = split_blocks(body, path)
        if header:
            raise ParseError(f"Unexpected line '{header[0].text}' before the first block", path, header[0].number)
        require(blocks, ("L", "K", "R", "l", "r"), head, path)
        L, K, R = (_graph_from_lines(blocks[block], path) for block in ("L", "K", "R"))
        l = _morphism_from_lines(blocks["l"], K, L, path, head)
        r = _morphism_from_lines(blocks["r"], K, R, path, head)
        rules.append(RewriteRule(name, l, r))
    if not rules:
        raise ParseError("No RULE found", path)
    return rules


def read_rules(path) -> List[RewriteRule]:
    return parse_rules(read_text(path), str(path))


def write_rule(rule: RewriteRule) -> str:
    parts = [f"RULE {rule.name}"]
    for name, body in (("L", write_graph(rule.L)), ("K", write_graph(rule.K)), ("R", write_graph(rule.R)),
                       ("l", write_morphism(rule.l)), ("r", write_morphism(rule.r))):
        parts.append(f"{name}:\n{body}".rstrip())
    return "\n".join(parts) + "\n"


def parse_square(text: str, path: Optional[str] = None) -> Square:
    """Objects A:, B:, C:, D: and morphisms top: (A->B), left: (A->C), right: (B->D), bottom: (C->D)."""
    lines = clean_lines(text)
    header, blocks = split_blocks(lines, path)
    where = lines[0] if lines else Line(1, "")
    require(blocks, ("A", "B", "C", "D", "top", "left", "right", "bottom"), where, path)
    A, B, C, D = (_graph_from_lines(blocks[name], path) for name in "ABCD")
    ends: Dict[str, Tuple[Graph, Graph]] = {"top": (A, B), "left": (A, C), "right": (B, D), "bottom": (C, D)}
    maps = {name: _morphism_from_lines(blocks[name], *ends[name], path, where) for name in ends}
    return Square(maps["top"], maps["left"], maps["right"], maps["bottom"])


def read_square(path) -> Square:
    return parse_square(read_text(path), str(path))
