"""DOT export of graphs, rewrite diagrams and deduction cubes."""

from typing import Dict, List, Tuple

from jinja2 import DictLoader, Environment

from data_processing.spec_text import write_spec
from graphs.graph_core import Graph
from graphs.graph_rewriting import GeneralizedPushout
from logic.deduction import DeductionCube

TEMPLATES = {
    "graph.dot": """\
digraph {{ name|quote }} {
  node [shape=circle];
{% for node, label in graph.nodes.items() %}
  {{ node|quote }} [label={{ (node ~ (":" ~ label if label else ""))|quote }}];
{% endfor %}
{% for edge_id, edge in graph.edges.items() %}
  {{ edge.source|quote }} -> {{ edge.target|quote }} [label={{ (edge_id ~ (":" ~ edge.label if edge.label else ""))|quote }}];
{% endfor %}
}
""",
    "rewrite.dot": """\
digraph {{ name|quote }} {
  compound=true;
  node [shape=circle];
{% for obj, graph in objects %}
  subgraph {{ ("cluster_" ~ obj)|quote }} {
    label={{ obj|quote }};
    {{ (obj ~ "/")|quote }} [shape=point, style=invis];
{% for node, label in graph.nodes.items() %}
    {{ (obj ~ "/" ~ node)|quote }} [label={{ (node ~ (":" ~ label if label else ""))|quote }}];
{% endfor %}
{% for edge_id, edge in graph.edges.items() %}
    {{ (obj ~ "/" ~ edge.source)|quote }} -> {{ (obj ~ "/" ~ edge.target)|quote }} [label={{ edge_id|quote }}];
{% endfor %}
  }
{% endfor %}
{% for label, source, target in arrows %}
  {{ (source ~ "/")|quote }} -> {{ (target ~ "/")|quote }} [label={{ label|quote }}, ltail={{ ("cluster_" ~ source)|quote }}, lhead={{ ("cluster_" ~ target)|quote }}, style=bold];
{% endfor %}
}
""",
    "cube.dot": """\
digraph {{ name|quote }} {
  node [shape=box, fontname=monospace];
  label={{ caption|quote }};
{% for obj, text in objects %}
  {{ obj|quote }} [label={{ text|quote_block }}];
{% endfor %}
{% for label, source, target in arrows %}
  {{ source|quote }} -> {{ target|quote }} [label={{ label|quote }}];
{% endfor %}
}
""",
}


def _quote(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _quote_block(text: str) -> str:
    body = str(text).replace("\\", "\\\\").replace('"', '\\"')
    return '"' + body.replace("\n", "\\l") + '"'


environment = Environment(loader=DictLoader(TEMPLATES), trim_blocks=True, lstrip_blocks=True,
                          keep_trailing_newline=True)
environment.filters["quote"] = _quote
environment.filters["quote_block"] = _quote_block


def graph_dot(graph: Graph, name: str = "G") -> str:
    return environment.get_template("graph.dot").render(graph=graph, name=name)


def rewrite_dot(step: GeneralizedPushout, name: str = "rewrite") -> str:
    objects: List[Tuple[str, Graph]] = [("L", step.l.codomain), ("K", step.l.domain), ("R", step.r.codomain),
                                        ("G", step.G), ("D", step.D), ("H", step.H)]
    arrows = [("l", "K", "L"), ("r", "K", "R"), ("m_L", "L", "G"), ("m_K", "K", "D"),
              ("m_R", "R", "H"), ("l_1", "D", "G"), ("r_1", "D", "H")]
    return environment.get_template("rewrite.dot").render(name=name, objects=objects, arrows=arrows)


CUBE_ARROWS = [
    ("l", "K", "H"), ("r", "K", "C"), ("h", "H", "P"), ("c", "C", "P"),
    ("sigma_K", "K", "Ss_K"), ("sigma_H", "H", "Ss_H"), ("sigma_C", "C", "Ss_C"), ("sigma_P", "P", "Ss_P"),
    ("l_1", "Ss_K", "Ss_H"), ("r_1", "Ss_K", "Ss_C"), ("h_1", "Ss_H", "Ss_P"), ("c_1", "Ss_C", "Ss_P"),
]


def cube_dot(cube: DeductionCube, name: str = "cube") -> str:
    objects = [(obj, f"{obj}\n{write_spec(spec)}") for obj, spec in cube.objects.items()]
    statuses: Dict[str, str] = dict(cube.face_status)
    caption = f"{cube.rule}: " + ", ".join(f"{face} {status}" for face, status in statuses.items())
    return environment.get_template("cube.dot").render(name=name, caption=caption, objects=objects,
                                                       arrows=CUBE_ARROWS)
