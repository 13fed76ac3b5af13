"""
Pushouts and their checks, written once against the presentation-category
contract, plus the graph-only constructions: pullbacks, pushout complements
(DPO) and final pullback complements (SqPO).
"""

import itertools
import logging
from typing import Dict, Hashable, List, Sequence, Tuple

from networkx.utils import UnionFind

from categories.diagrams import (ComplementResult, Cospan, PushoutResult, Span, Square,
                                 category_of, register_category)
from errors import (DanglingViolation, IdentificationViolation, LabelClash, NonCommuting,
                    NonComposable, PastingMismatch, RewriteError, UnsupportedMatch)
from graphs import graph_core
from graphs.graph_core import Edge, Graph, GraphMorphism

logger = logging.getLogger(__name__)

LEFT, RIGHT = "L", "R"


def classes_of(sets: UnionFind) -> List[List[Hashable]]:
    """The disjoint sets in canonical order: members sorted, classes by least member."""
    return sorted((sorted(group, key=repr) for group in sets.to_sets()), key=lambda g: repr(g[0]))


def qualified(foot: str, name: str) -> str:
    return f"{foot}.{name}"


def name_classes(classes: Sequence[Sequence[Tuple[str, str]]]) -> List[str]:
    """Least qualified ``foot.name`` of each class of (foot, name) members."""
    return [min(qualified(foot, name) for foot, name in members) for members in classes]


def canonical_names(classes: Sequence[Sequence[Tuple[str, str]]]) -> List[str]:
    """Unqualified naming for signature symbols.

    A class touching the left foot keeps its least left-foot name. A class
    made only of right-foot items keeps its least name, prefixed with ``r.``
    until it no longer collides.
    """
    names: List[str] = [""] * len(classes)
    taken = set()
    right_only = []
    for i, members in enumerate(classes):
        lefts = sorted(name for foot, name in members if foot == LEFT)
        if lefts:
            names[i] = lefts[0]
            taken.add(lefts[0])
        else:
            right_only.append(i)
    right_only.sort(key=lambda i: min(name for _, name in classes[i]))
    for i in right_only:
        name = min(name for _, name in classes[i])
        while name in taken:
            name = "r." + name
        names[i] = name
        taken.add(name)
    return names


def fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


# generic operations

def pushout(span: Span) -> PushoutResult:
    """Glue the two feet of a span."""
    return category_of(span.left).pushout(span)


def verify_pushout(square: Square) -> bool:
    """True iff the square's vertex is a pushout of its (top, left) span.

    Exact: the comparison map out of the computed pushout must be an
    isomorphism.
    """
    if not square.commutes():
        raise NonCommuting("The square does not commute")
    category = category_of(square.top)
    computed = category.pushout(square.span)
    comparison = category.mediate(computed, square.cocone)
    return category.is_iso(comparison)


def paste(first: Square, second: Square) -> Square:
    if first.right != second.left:
        raise NonComposable("The squares do not share their middle edge")
    category = category_of(first.top)
    return Square(
        category.compose(first.top, second.top),
        first.left,
        second.right,
        category.compose(first.bottom, second.bottom),
    )


def paste_check(first: Square, second: Square) -> bool:
    """Pasting law: with `first` a pushout, `second` is one iff the composite is."""
    composite = paste(first, second)
    if not verify_pushout(first):
        raise NonComposable("The first square of a pasting check must be a pushout")
    second_is_pushout = verify_pushout(second)
    composite_is_pushout = verify_pushout(composite)
    if second_is_pushout != composite_is_pushout:
        raise PastingMismatch(
            f"Pasting law violated: second square {second_is_pushout}, composite {composite_is_pushout}"
        )
    return second_is_pushout


# graphs

class GraphCategory:
    name = "graphs"

    def identity(self, graph: Graph) -> GraphMorphism:
        return graph_core.identity(graph)

    def compose(self, f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
        return graph_core.compose(f, g)

    def is_iso(self, f: GraphMorphism) -> bool:
        return graph_core.is_iso(f)

    def isomorphic(self, first: Graph, second: Graph) -> bool:
        return graph_core.is_isomorphic(first, second)

    def pushout(self, span: Span) -> PushoutResult:
        f, g = span.left, span.right
        A, B = f.codomain, g.codomain
        nodes = UnionFind([(LEFT, n) for n in A.nodes] + [(RIGHT, n) for n in B.nodes])
        edges = UnionFind([(LEFT, e) for e in A.edges] + [(RIGHT, e) for e in B.edges])
        for k in span.apex.nodes:
            nodes.union((LEFT, f.node_map[k]), (RIGHT, g.node_map[k]))
        for k in span.apex.edges:
            edges.union((LEFT, f.edge_map[k]), (RIGHT, g.edge_map[k]))

        def graph_of(foot, _name):
            return A if foot == LEFT else B

        node_classes = classes_of(nodes)
        node_names = name_classes(node_classes)
        node_of: Dict[Hashable, str] = {}
        new_nodes: Dict[str, str] = {}
        for members, name in zip(node_classes, node_names):
            labels = {graph_of(*m).nodes[m[1]] for m in members}
            if len(labels) > 1:
                raise LabelClash(f"Pushout would merge nodes with labels {sorted(labels)}")
            new_nodes[name] = labels.pop()
            for member in members:
                node_of[member] = name

        edge_classes = classes_of(edges)
        edge_names = name_classes(edge_classes)
        edge_of: Dict[Hashable, str] = {}
        new_edges: Dict[str, Edge] = {}
        for members, name in zip(edge_classes, edge_names):
            labels = {graph_of(*m).edges[m[1]].label for m in members}
            if len(labels) > 1:
                raise LabelClash(f"Pushout would merge edges with labels {sorted(labels)}")
            foot, e = members[0]
            edge = graph_of(foot, e).edges[e]
            new_edges[name] = Edge(node_of[(foot, edge.source)], node_of[(foot, edge.target)], labels.pop())
            for member in members:
                edge_of[member] = name

        P = Graph(new_nodes, new_edges)
        into_left = GraphMorphism(A, P, {n: node_of[(LEFT, n)] for n in A.nodes},
                                  {e: edge_of[(LEFT, e)] for e in A.edges})
        into_right = GraphMorphism(B, P, {n: node_of[(RIGHT, n)] for n in B.nodes},
                                   {e: edge_of[(RIGHT, e)] for e in B.edges})
        return PushoutResult(span, Cospan(into_left, into_right))

    def mediate(self, result: PushoutResult, cocone: Cospan) -> GraphMorphism:
        legs = (result.cocone.left, result.cocone.right)
        targets = (cocone.left, cocone.right)
        node_map: Dict[str, str] = {}
        edge_map: Dict[str, str] = {}
        for leg, target in zip(legs, targets):
            if leg.domain != target.domain:
                raise NonCommuting("The cocone does not sit over the same feet")
            for n, p in leg.node_map.items():
                if node_map.setdefault(p, target.node_map[n]) != target.node_map[n]:
                    raise NonCommuting(f"The cocone disagrees on the glued node '{p}'")
            for e, p in leg.edge_map.items():
                if edge_map.setdefault(p, target.edge_map[e]) != target.edge_map[e]:
                    raise NonCommuting(f"The cocone disagrees on the glued edge '{p}'")
        return GraphMorphism(result.object, cocone.vertex, node_map, edge_map)


GRAPHS = GraphCategory()
register_category(GraphMorphism, GRAPHS)


def pullback(cospan: Cospan) -> Span:
    """Fiber product of two graph morphisms into a common graph."""
    f, g = cospan.left, cospan.right
    A, B = f.domain, g.domain
    nodes, node_pairs = {}, {}
    for a, b in itertools.product(A.nodes, B.nodes):
        if f.node_map[a] == g.node_map[b]:
            nodes[pair_name(a, b)] = A.nodes[a]
            node_pairs[pair_name(a, b)] = (a, b)
    edges, edge_pairs = {}, {}
    for a, b in itertools.product(A.edges, B.edges):
        if f.edge_map[a] == g.edge_map[b]:
            ea, eb = A.edges[a], B.edges[b]
            edges[pair_name(a, b)] = Edge(pair_name(ea.source, eb.source), pair_name(ea.target, eb.target), ea.label)
            edge_pairs[pair_name(a, b)] = (a, b)
    vertex = Graph(nodes, edges)
    first = GraphMorphism(vertex, A, {p: ab[0] for p, ab in node_pairs.items()},
                          {p: ab[0] for p, ab in edge_pairs.items()})
    second = GraphMorphism(vertex, B, {p: ab[1] for p, ab in node_pairs.items()},
                           {p: ab[1] for p, ab in edge_pairs.items()})
    return Span(first, second)


def pair_name(first: str, second: str) -> str:
    return f"{first}|{second}"


def verify_pullback(square: Square) -> bool:
    """True iff the square's apex is a pullback of its (right, bottom) cospan."""
    if not square.commutes():
        raise NonCommuting("The square does not commute")
    apex = pullback(Cospan(square.right, square.bottom)).apex
    K = square.top.domain
    comparison = GraphMorphism(
        K, apex,
        {k: pair_name(square.top.node_map[k], square.left.node_map[k]) for k in K.nodes},
        {k: pair_name(square.top.edge_map[k], square.left.edge_map[k]) for k in K.edges},
    )
    return graph_core.is_iso(comparison)


def pushout_complement(l: GraphMorphism, m: GraphMorphism) -> ComplementResult:
    """DPO left square: delete m(L \\ l(K)) from G."""
    L, G = l.codomain, m.codomain
    kept_nodes = set(l.node_map.values())
    kept_edges = set(l.edge_map.values())
    deleted_nodes = [n for n in L.nodes if n not in kept_nodes]
    deleted_edges = [e for e in L.edges if e not in kept_edges]

    for x, y in itertools.combinations(L.nodes, 2):
        if m.node_map[x] == m.node_map[y] and (x in deleted_nodes or y in deleted_nodes):
            raise IdentificationViolation(
                f"Match identifies nodes '{x}' and '{y}' while deleting one of them")
    for x, y in itertools.combinations(L.edges, 2):
        if m.edge_map[x] == m.edge_map[y] and (x in deleted_edges or y in deleted_edges):
            raise IdentificationViolation(
                f"Match identifies edges '{x}' and '{y}' while deleting one of them")

    removed_nodes = {m.node_map[n] for n in deleted_nodes}
    removed_edges = {m.edge_map[e] for e in deleted_edges}
    for node in sorted(removed_nodes):
        dangling = [e for e in G.incident_edges(node) if e not in removed_edges]
        if dangling:
            raise DanglingViolation(
                f"Deleting node '{node}' would leave edge(s) {', '.join(dangling)} dangling")

    D = graph_core.subgraph(G, [n for n in G.nodes if n not in removed_nodes],
                            [e for e in G.edges if e not in removed_edges])
    inner = graph_core.compose(l, m)
    inner = GraphMorphism(l.domain, D, inner.node_map, inner.edge_map)
    result = ComplementResult(l, m, inner, graph_core.inclusion(D, G))
    if not verify_pushout(result.as_square()):
        raise RewriteError("The deletion-based complement does not push out to the host graph")
    return result


def final_pullback_complement(l: GraphMorphism, m: GraphMorphism) -> ComplementResult:
    """SqPO left square for a mono match.

    Items of K replace their images; host edges outside the match that touch a
    matched node are copied once per preimage of their endpoints, or dropped
    when an endpoint has none.
    """
    if not graph_core.is_mono(m):
        raise UnsupportedMatch("Final pullback complements are only built for mono matches")
    K, L, G = l.domain, l.codomain, m.codomain
    matched_nodes = set(m.node_map.values())
    matched_edges = set(m.edge_map.values())
    host_of_node = {k: m.node_map[l.node_map[k]] for k in K.nodes}
    host_of_edge = {k: m.edge_map[l.edge_map[k]] for k in K.edges}

    taken = set(n for n in G.nodes if n not in matched_nodes)
    node_name: Dict[str, str] = {}
    for k in K.nodes:
        host = host_of_node[k]
        siblings = [j for j in K.nodes if host_of_node[j] == host]
        name = fresh(host if len(siblings) == 1 else f"{host}.{k}", taken)
        taken.add(name)
        node_name[k] = name

    nodes = {node_name[k]: K.nodes[k] for k in K.nodes}
    nodes.update({n: G.nodes[n] for n in G.nodes if n not in matched_nodes})
    outer_nodes = {node_name[k]: host_of_node[k] for k in K.nodes}
    outer_nodes.update({n: n for n in G.nodes if n not in matched_nodes})

    taken = set(e for e in G.edges if e not in matched_edges)
    edge_name: Dict[str, str] = {}
    edges: Dict[str, Edge] = {}
    outer_edges: Dict[str, str] = {}
    for k, edge in K.edges.items():
        host = host_of_edge[k]
        siblings = [j for j in K.edges if host_of_edge[j] == host]
        name = fresh(host if len(siblings) == 1 else f"{host}.{k}", taken)
        taken.add(name)
        edge_name[k] = name
        edges[name] = Edge(node_name[edge.source], node_name[edge.target], edge.label)
        outer_edges[name] = host

    def copies(node: str) -> List[str]:
        if node not in matched_nodes:
            return [node]
        return [node_name[k] for k in K.nodes if host_of_node[k] == node]

    for e, edge in G.edges.items():
        if e in matched_edges:
            continue
        ends = list(itertools.product(copies(edge.source), copies(edge.target)))
        for source, target in ends:
            name = e if len(ends) == 1 else fresh(f"{e}.{source}.{target}", taken)
            taken.add(name)
            edges[name] = Edge(source, target, edge.label)
            outer_edges[name] = e

    D = Graph(nodes, edges)
    inner = GraphMorphism(K, D, node_name, edge_name)
    outer = GraphMorphism(D, G, outer_nodes, outer_edges)
    logger.debug("final pullback complement has %d nodes, %d edges", len(nodes), len(edges))
    return ComplementResult(l, m, inner, outer)


def factorizations(other: ComplementResult, final: ComplementResult) -> List[GraphMorphism]:
    """All u: D' -> D with outer . u = outer' and u . inner' = inner."""
    fixed_nodes = {other.inner.node_map[k]: final.inner.node_map[k] for k in other.inner.node_map}
    fixed_edges = {other.inner.edge_map[k]: final.inner.edge_map[k] for k in other.inner.edge_map}
    found = []
    for u in graph_core.find_morphisms(other.object, final.object,
                                       fixed_nodes=fixed_nodes, fixed_edges=fixed_edges):
        if (graph_core.compose(u, final.outer) == other.outer
                and graph_core.compose(other.inner, u) == final.inner):
            found.append(u)
    return found
