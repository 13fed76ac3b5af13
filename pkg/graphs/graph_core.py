"""
Finite labeled directed multigraphs, their morphisms and match enumeration.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

from errors import EndpointMismatch, MalformedGraph, MalformedMorphism

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    label: str = ""


@dataclass(frozen=True)
class Graph:
    nodes: Mapping[str, str] = field(default_factory=dict)
    edges: Mapping[str, Edge] = field(default_factory=dict)

    def __post_init__(self):
        # canonical key order keeps every serialization bit-exact
        object.__setattr__(self, "nodes", {n: self.nodes[n] for n in sorted(self.nodes)})
        object.__setattr__(self, "edges", {e: self.edges[e] for e in sorted(self.edges)})
        for edge_id, edge in self.edges.items():
            if edge.source not in self.nodes or edge.target not in self.nodes:
                raise MalformedGraph(f"Edge '{edge_id}' has an endpoint outside the node set")

    @classmethod
    def build(cls, nodes: Mapping[str, str], edges: Optional[Mapping[str, Tuple]] = None) -> "Graph":
        """Shorthand used by fixtures: edges given as (source, target[, label])."""
        return cls(dict(nodes), {e: Edge(*spec) for e, spec in (edges or {}).items()})

    def incident_edges(self, node: str) -> List[str]:
        return [e for e, edge in self.edges.items() if node in (edge.source, edge.target)]

    def size(self) -> int:
        return len(self.nodes) + len(self.edges)

    def __str__(self):
        parts = [f"{n}:{label}" if label else n for n, label in self.nodes.items()]
        parts += [f"{e}:{edge.source}->{edge.target}" for e, edge in self.edges.items()]
        return "{" + ", ".join(parts) + "}"


EMPTY_GRAPH = Graph()


@dataclass(frozen=True)
class GraphMorphism:
    domain: Graph
    codomain: Graph
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "node_map", {n: self.node_map[n] for n in sorted(self.node_map)})
        object.__setattr__(self, "edge_map", {e: self.edge_map[e] for e in sorted(self.edge_map)})
        self._validate()

    def _validate(self):
        dom, cod = self.domain, self.codomain
        if set(self.node_map) != set(dom.nodes):
            raise MalformedMorphism("Node map is not total on the domain")
        if set(self.edge_map) != set(dom.edges):
            raise MalformedMorphism("Edge map is not total on the domain")
        for n, image in self.node_map.items():
            if image not in cod.nodes:
                raise MalformedMorphism(f"Node '{n}' is sent outside the codomain ('{image}')")
            if dom.nodes[n] != cod.nodes[image]:
                raise MalformedMorphism(f"Node '{n}' is sent to '{image}' with a different label")
        for e, image in self.edge_map.items():
            if image not in cod.edges:
                raise MalformedMorphism(f"Edge '{e}' is sent outside the codomain ('{image}')")
            edge, target_edge = dom.edges[e], cod.edges[image]
            if edge.label != target_edge.label:
                raise MalformedMorphism(f"Edge '{e}' is sent to '{image}' with a different label")
            if (self.node_map[edge.source], self.node_map[edge.target]) != (target_edge.source, target_edge.target):
                raise MalformedMorphism(f"Edge '{e}' is sent to '{image}' without preserving incidence")

    def __call__(self, item: str) -> str:
        return self.node_map[item] if item in self.node_map else self.edge_map[item]


def identity(graph: Graph) -> GraphMorphism:
    return GraphMorphism(graph, graph, {n: n for n in graph.nodes}, {e: e for e in graph.edges})


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """g after f."""
    if f.codomain != g.domain:
        raise EndpointMismatch("Cannot compose: the codomain of the first morphism is not the domain of the second")
    return GraphMorphism(
        f.domain,
        g.codomain,
        {n: g.node_map[m] for n, m in f.node_map.items()},
        {e: g.edge_map[d] for e, d in f.edge_map.items()},
    )


def is_mono(f: GraphMorphism) -> bool:
    return (len(set(f.node_map.values())) == len(f.node_map)
            and len(set(f.edge_map.values())) == len(f.edge_map))


def is_epi(f: GraphMorphism) -> bool:
    return (set(f.node_map.values()) == set(f.codomain.nodes)
            and set(f.edge_map.values()) == set(f.codomain.edges))


def is_iso(f: GraphMorphism) -> bool:
    return is_mono(f) and is_epi(f)


def inverse(f: GraphMorphism) -> GraphMorphism:
    if not is_iso(f):
        raise MalformedMorphism("Only isomorphisms have an inverse")
    return GraphMorphism(
        f.codomain,
        f.domain,
        {m: n for n, m in f.node_map.items()},
        {d: e for e, d in f.edge_map.items()},
    )


def inclusion(sub: Graph, graph: Graph) -> GraphMorphism:
    return GraphMorphism(sub, graph, {n: n for n in sub.nodes}, {e: e for e in sub.edges})


def find_morphisms(
    source: Graph,
    target: Graph,
    mono: bool = False,
    fixed_nodes: Optional[Mapping[str, str]] = None,
    fixed_edges: Optional[Mapping[str, str]] = None,
) -> Iterator[GraphMorphism]:
    """Backtracking enumeration of homomorphisms source -> target.

    Results come in lexicographic order of the node assignment (source nodes
    taken in sorted order), then of the edge assignment. ``fixed_nodes`` and
    ``fixed_edges`` pin part of the assignment.
    """
    fixed_nodes = dict(fixed_nodes or {})
    fixed_edges = dict(fixed_edges or {})
    order = list(source.nodes)
    candidates = {
        n: [fixed_nodes[n]] if n in fixed_nodes else
        [m for m in target.nodes if target.nodes[m] == source.nodes[n]]
        for n in order
    }
    # edges checked as soon as both endpoints are placed
    position = {n: i for i, n in enumerate(order)}
    checks: Dict[int, List[str]] = {}
    for e, edge in source.edges.items():
        checks.setdefault(max(position[edge.source], position[edge.target]), []).append(e)

    def edge_candidates(e: str, assignment: Mapping[str, str]) -> List[str]:
        edge = source.edges[e]
        src, tgt = assignment[edge.source], assignment[edge.target]
        pool = [fixed_edges[e]] if e in fixed_edges else list(target.edges)
        return [d for d in pool
                if d in target.edges
                and (target.edges[d].source, target.edges[d].target, target.edges[d].label)
                == (src, tgt, edge.label)]

    def extend(i: int, assignment: Dict[str, str]) -> Iterator[Dict[str, str]]:
        if i == len(order):
            yield dict(assignment)
            return
        node = order[i]
        for image in candidates[node]:
            if mono and image in assignment.values():
                continue
            assignment[node] = image
            if all(edge_candidates(e, assignment) for e in checks.get(i, [])):
                yield from extend(i + 1, assignment)
            del assignment[node]

    edge_order = list(source.edges)
    for node_map in extend(0, {}):
        pools = [edge_candidates(e, node_map) for e in edge_order]
        for choice in itertools.product(*pools):
            if mono and len(set(choice)) != len(choice):
                continue
            yield GraphMorphism(source, target, node_map, dict(zip(edge_order, choice)))


def find_matches(L: Graph, G: Graph, mono: bool = False) -> List[GraphMorphism]:
    """All occurrences of L in G, homomorphisms unless mono is requested."""
    matches = list(find_morphisms(L, G, mono=mono))
    logger.debug("found %d matches of %s in %s", len(matches), L, G)
    return matches


def to_networkx(graph: Graph) -> nx.MultiDiGraph:
    result = nx.MultiDiGraph()
    for n, label in graph.nodes.items():
        result.add_node(n, label=label)
    for e, edge in graph.edges.items():
        result.add_edge(edge.source, edge.target, key=e, label=edge.label)
    return result


def is_isomorphic(first: Graph, second: Graph) -> bool:
    if len(first.nodes) != len(second.nodes) or len(first.edges) != len(second.edges):
        return False
    return nx.is_isomorphic(
        to_networkx(first),
        to_networkx(second),
        node_match=isomorphism.categorical_node_match("label", None),
        edge_match=isomorphism.categorical_multiedge_match("label", None),
    )


def subgraph(graph: Graph, nodes, edges) -> Graph:
    return Graph({n: graph.nodes[n] for n in nodes}, {e: graph.edges[e] for e in edges})
