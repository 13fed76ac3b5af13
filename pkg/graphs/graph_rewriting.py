"""
Rewrite rules as spans and the DPO / SqPO rewrite steps.

Both steps build a generalized pushout under the rule's span: a commutative
left square (complement of the match) and a pushout on the right.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from categories import colimit_engine
from categories.diagrams import Span, Square
from errors import MalformedSpan, RewriteError, UnsupportedMatch
from graphs.graph_core import Graph, GraphMorphism, find_matches, is_mono

logger = logging.getLogger(__name__)

DPO = "dpo"
SQPO = "sqpo"


@dataclass(frozen=True)
class RewriteRule:
    name: str
    l: GraphMorphism
    r: GraphMorphism

    def __post_init__(self):
        if self.l.domain != self.r.domain:
            raise MalformedSpan(f"Rule '{self.name}': l and r do not share the interface K")

    @property
    def span(self) -> Span:
        return Span(self.l, self.r)

    @property
    def K(self) -> Graph:
        return self.l.domain

    @property
    def L(self) -> Graph:
        return self.l.codomain

    @property
    def R(self) -> Graph:
        return self.r.codomain


@dataclass(frozen=True)
class GeneralizedPushout:
    """
        L <--l-- K --r--> R
        |        |        |
       m_L      m_K      m_R
        v        v        v
        G <-l_1- D -r_1-> H
    """
    mode: str
    l: GraphMorphism
    r: GraphMorphism
    m_L: GraphMorphism
    m_K: GraphMorphism
    m_R: GraphMorphism
    l_1: GraphMorphism
    r_1: GraphMorphism

    @property
    def G(self) -> Graph:
        return self.m_L.codomain

    @property
    def D(self) -> Graph:
        return self.m_K.codomain

    @property
    def H(self) -> Graph:
        return self.m_R.codomain

    @property
    def left_square(self) -> Square:
        return Square(self.l, self.m_K, self.m_L, self.l_1)

    @property
    def right_square(self) -> Square:
        return Square(self.m_K, self.r, self.r_1, self.m_R)

    def check(self) -> bool:
        """Mode invariants: right square a pushout; left a pushout (DPO) or pullback (SqPO)."""
        if not colimit_engine.verify_pushout(self.right_square):
            return False
        if self.mode == DPO:
            return colimit_engine.verify_pushout(self.left_square)
        return colimit_engine.verify_pullback(self.left_square)


def _complete(rule: RewriteRule, complement, mode: str) -> GeneralizedPushout:
    right = colimit_engine.pushout(Span(complement.inner, rule.r))
    return GeneralizedPushout(
        mode=mode,
        l=rule.l,
        r=rule.r,
        m_L=complement.match,
        m_K=complement.inner,
        m_R=right.cocone.right,
        l_1=complement.outer,
        r_1=right.cocone.left,
    )


def dpo_step(rule: RewriteRule, match: GraphMorphism) -> GeneralizedPushout:
    complement = colimit_engine.pushout_complement(rule.l, match)
    return _complete(rule, complement, DPO)


def sqpo_step(rule: RewriteRule, match: GraphMorphism) -> GeneralizedPushout:
    if not is_mono(match):
        raise UnsupportedMatch(f"Rule '{rule.name}': SqPO steps need a mono match")
    complement = colimit_engine.final_pullback_complement(rule.l, match)
    return _complete(rule, complement, SQPO)


STEPS = {DPO: dpo_step, SQPO: sqpo_step}

Outcome = Union[GeneralizedPushout, RewriteError]


def apply_all(rule: RewriteRule, graph: Graph, mode: str, mono: bool = False) -> List[Tuple[GraphMorphism, Outcome]]:
    """One entry per match of the rule, in canonical match order; failures are recorded, not raised."""
    step = STEPS[mode]
    results: List[Tuple[GraphMorphism, Outcome]] = []
    for match in find_matches(rule.L, graph, mono=mono):
        try:
            results.append((match, step(rule, match)))
        except RewriteError as e:
            logger.info("rule '%s' not applicable at %s: %s", rule.name, dict(match.node_map), e.detail)
            results.append((match, e))
    return results


def first_success(results: List[Tuple[GraphMorphism, Outcome]]) -> Optional[GeneralizedPushout]:
    for _, outcome in results:
        if isinstance(outcome, GeneralizedPushout):
            return outcome
    return None
