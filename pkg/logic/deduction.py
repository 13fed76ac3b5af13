"""
Deduction rules as fractions and the two ways of applying them.

A rule c/h is a cospan H --h--> P <--c-- C whose denominator h is a
pleomorphism. ``classic_step`` pushes h along an instance of H and keeps the
whole pushout; ``pleopushout_step`` goes through a witness Ss_K of the rule's
interface K and only keeps what the conclusion needs, returning the full
commutative cube so every conclusion about it can be checked.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from categories import colimit_engine
from categories.diagrams import Cospan, PushoutResult, Span, Square
from errors import (CubeCheckFailed, DenominatorNotPleo, EndpointMismatch, LeftSquareNotCommuting,
                    MalformedSpan, NonCommuting, PleoVerificationFailed, RuleHasNoSpan,
                    SortMismatch, WitnessNotPleo, ReductioError)
from logic.eq_logic import (REFUTED, EqSpec, Model, PleoVerdict, SpecMorphism, compose, derivable,
                            identity, inclusion, is_iso, is_pleomorphism, spec_pushout, SPECS)

logger = logging.getLogger(__name__)

CLASSIC = "classic"
PLEO = "pleo"
PLEO_MINIMAL = "pleo-minimal"

# verdict key for r_1 checked through c_1
COMPOSITE = "c_1.r_1"


@dataclass(frozen=True)
class Fraction:
    """Numerator over a pleomorphic denominator, both into the vertex."""
    numerator: SpecMorphism
    denominator: SpecMorphism
    evidence: PleoVerdict
    assumed: bool = False

    def __post_init__(self):
        if self.numerator.codomain != self.denominator.codomain:
            raise MalformedSpan("Numerator and denominator of a fraction must share their codomain")
        if not self.evidence.verified and not self.assumed:
            raise DenominatorNotPleo(f"Denominator is not a verified pleomorphism ({self.evidence})")

    @property
    def vertex(self) -> EqSpec:
        return self.denominator.codomain


@dataclass(frozen=True)
class DeductionRule:
    name: str
    fraction: Fraction
    l: Optional[SpecMorphism] = None
    r: Optional[SpecMorphism] = None
    pushout: Optional[PushoutResult] = None

    @property
    def h(self) -> SpecMorphism:
        return self.fraction.denominator

    @property
    def c(self) -> SpecMorphism:
        return self.fraction.numerator

    @property
    def H(self) -> EqSpec:
        return self.h.domain

    @property
    def C(self) -> EqSpec:
        return self.c.domain

    @property
    def P(self) -> EqSpec:
        return self.fraction.vertex

    @property
    def K(self) -> Optional[EqSpec]:
        return self.l.domain if self.l is not None else None

    @property
    def has_span(self) -> bool:
        return self.pushout is not None

    @property
    def assumed(self) -> bool:
        return self.fraction.assumed


def _check_denominator(name: str, h: SpecMorphism, depth: int, model: Optional[Model],
                       assume_pleo: bool) -> Tuple[PleoVerdict, bool]:
    verdict = is_pleomorphism(h, depth, model)
    if verdict.status == REFUTED:
        raise DenominatorNotPleo(f"Rule '{name}': h is not a pleomorphism ({verdict})")
    if not verdict.verified:
        if not assume_pleo:
            raise DenominatorNotPleo(f"Rule '{name}': h could not be verified ({verdict}); pass --assume-pleo to accept it")
        logger.warning("rule '%s': accepting unverified denominator (%s)", name, verdict)
        return verdict, True
    return verdict, False


def rule_from_span(name: str, l: SpecMorphism, r: SpecMorphism, depth: int,
                   model: Optional[Model] = None, assume_pleo: bool = False) -> DeductionRule:
    """The fraction c/h read off the pushout of H <--l-- K --r--> C."""
    result = spec_pushout(Span(l, r))
    h, c = result.cocone.left, result.cocone.right
    verdict, assumed = _check_denominator(name, h, depth, model, assume_pleo)
    return DeductionRule(name, Fraction(c, h, verdict, assumed), l, r, result)


def kernel_from_names(H: EqSpec, C: EqSpec) -> Span:
    """Everything H and C declare under the same name, with both inclusions."""
    sorts = H.sorts & C.sorts
    ops = {}
    for o in set(H.ops) & set(C.ops):
        if H.ops[o] != C.ops[o]:
            raise SortMismatch(f"Operation '{o}' is declared {H.ops[o]} in H but {C.ops[o]} in C")
        ops[o] = H.ops[o]
    variables = {}
    for v in set(H.vars) & set(C.vars):
        if H.vars[v] != C.vars[v]:
            raise SortMismatch(f"Variable '{v}' has sort {H.vars[v]} in H but {C.vars[v]} in C")
        variables[v] = H.vars[v]
    K = EqSpec(sorts, ops, variables, H.terms & C.terms)
    return Span(inclusion(K, H), inclusion(K, C))


def rule_from_fraction(name: str, h: SpecMorphism, c: SpecMorphism, depth: int,
                       model: Optional[Model] = None, assume_pleo: bool = False) -> DeductionRule:
    """A rule given as H --h--> P <--c-- C. It gets the name-shared kernel as
    its span when that span's pushout is (h, c) up to isomorphism."""
    verdict, assumed = _check_denominator(name, h, depth, model, assume_pleo)
    fraction = Fraction(c, h, verdict, assumed)
    try:
        span = kernel_from_names(h.domain, c.domain)
        result = spec_pushout(span)
        comparison = SPECS.mediate(result, Cospan(h, c))
    except ReductioError as e:
        logger.info("rule '%s' has no generating span: %s", name, e.detail)
        return DeductionRule(name, fraction)
    if not is_iso(comparison):
        logger.info("rule '%s' has no generating span: P is not the pushout of the shared kernel", name)
        return DeductionRule(name, fraction)
    return DeductionRule(name, fraction, span.left, span.right, result)


# instances

@dataclass(frozen=True)
class Link:
    """One pleomorphism of a zig-zag; ``forward`` when it points away from the base."""
    morphism: SpecMorphism
    forward: bool
    verdict: PleoVerdict
    assumed: bool = False


@dataclass(frozen=True)
class Instance:
    """A morphism into some Ss' together with a zig-zag of pleomorphisms from the base Ss to Ss'."""
    morphism: SpecMorphism
    base: EqSpec
    links: Tuple[Link, ...] = ()

    def __post_init__(self):
        current = self.base
        for link in self.links:
            if not link.verdict.verified and not link.assumed:
                raise PleoVerificationFailed(f"Zig-zag link is not a verified pleomorphism ({link.verdict})")
            start, end = link.morphism.domain, link.morphism.codomain
            if not link.forward:
                start, end = end, start
            if start != current:
                raise EndpointMismatch("Zig-zag links do not connect")
            current = end
        if current != self.target:
            raise EndpointMismatch("Zig-zag does not end at the instance's target")

    @property
    def target(self) -> EqSpec:
        return self.morphism.codomain

    @property
    def source(self) -> EqSpec:
        return self.morphism.domain


@dataclass(frozen=True)
class DeductionTrace:
    """
        H ---h---> P <--c-- C
        |  (PO)    |  (=)  /
      sig_H      sig_P   sig_C
        v          v  <-'
       Ss_H -h_1-> Ss_P
    """
    rule: str
    pushout: PushoutResult
    sigma_C: SpecMorphism
    verdict: PleoVerdict

    @property
    def h_1(self) -> SpecMorphism:
        return self.pushout.cocone.left

    @property
    def sigma_P(self) -> SpecMorphism:
        return self.pushout.cocone.right

    @property
    def spec(self) -> EqSpec:
        return self.pushout.object


def _verdict_or_fail(name: str, morphism: SpecMorphism, depth: int, model: Optional[Model]) -> PleoVerdict:
    verdict = is_pleomorphism(morphism, depth, model)
    if verdict.status == REFUTED:
        raise PleoVerificationFailed(f"{name} is not a pleomorphism ({verdict})")
    return verdict


def _link(name: str, morphism: SpecMorphism, forward: bool, verdict: PleoVerdict, assumed: bool) -> Link:
    if not verdict.verified:
        if not assumed:
            raise PleoVerificationFailed(f"{name} could not be verified ({verdict})")
        logger.warning("%s left unverified under an assumed denominator (%s)", name, verdict)
    return Link(morphism, forward, verdict, not verdict.verified)


def _expect_instance_of(rule: DeductionRule, inst: Instance) -> None:
    if inst.source != rule.H:
        raise EndpointMismatch(f"Instance is not an instance of the hypothesis of rule '{rule.name}'")


def classic_step(rule: DeductionRule, inst: Instance, depth: int,
                 model: Optional[Model] = None) -> Tuple[Instance, DeductionTrace]:
    _expect_instance_of(rule, inst)
    result = spec_pushout(Span(inst.morphism, rule.h))
    h_1, sigma_P = result.cocone.left, result.cocone.right
    sigma_C = compose(rule.c, sigma_P)
    verdict = _verdict_or_fail("h_1", h_1, depth, model)
    link = _link("h_1", h_1, True, verdict, rule.assumed)
    logger.info("classic step '%s': %d equations", rule.name, len(result.object.equations))
    return Instance(sigma_C, inst.base, inst.links + (link,)), DeductionTrace(rule.name, result, sigma_C, verdict)


# pleopushouts

@dataclass(frozen=True)
class Witness:
    """Ss_K with K --sigma_K--> Ss_K --l_1--> Ss_H."""
    sigma_K: SpecMorphism
    l_1: SpecMorphism
    verdict: Optional[PleoVerdict] = None

    @property
    def spec(self) -> EqSpec:
        return self.sigma_K.codomain


@dataclass
class DeductionCube:
    """
    The cube of a pleopushout step; top face over (l, r), bottom face over
    (l_1, r_1), the rule on the back and the specifications on the front.
    """
    rule: str
    morphisms: Dict[str, SpecMorphism]
    faces: Dict[str, Square]
    face_status: Dict[str, str] = field(default_factory=dict)
    verdicts: Dict[str, PleoVerdict] = field(default_factory=dict)

    PUSHOUT_FACES = ("top", "back_right", "bottom", "front_left")
    PLEO_MORPHISMS = ("h", "l_1", "r_1", "h_1", "c_1")

    @property
    def objects(self) -> Dict[str, EqSpec]:
        m = self.morphisms
        return {
            "K": m["l"].domain, "H": m["l"].codomain, "C": m["r"].codomain, "P": m["h"].codomain,
            "Ss_K": m["l_1"].domain, "Ss_H": m["l_1"].codomain,
            "Ss_C": m["r_1"].codomain, "Ss_P": m["h_1"].codomain,
        }


def identity_witness(rule: DeductionRule, inst: Instance) -> Witness:
    if not rule.has_span:
        raise RuleHasNoSpan(f"Rule '{rule.name}' has no generating span")
    return Witness(compose(rule.l, inst.morphism), identity(inst.target))


def _cube_faces(m: Dict[str, SpecMorphism]) -> Dict[str, Square]:
    return {
        "top": Square(m["l"], m["r"], m["h"], m["c"]),
        "back_right": Square(m["sigma_K"], m["r"], m["r_1"], m["sigma_C"]),
        "bottom": Square(m["l_1"], m["r_1"], m["h_1"], m["c_1"]),
        "front_left": Square(m["sigma_H"], m["h"], m["h_1"], m["sigma_P"]),
        "back_left": Square(m["l"], m["sigma_K"], m["sigma_H"], m["l_1"]),
        "front_right": Square(m["c"], m["sigma_C"], m["sigma_P"], m["c_1"]),
    }


def check_cube(cube: DeductionCube, depth: int, model: Optional[Model] = None, assumed: bool = False) -> None:
    """Every face commutes and the four designated faces are pushouts, with
    sigma_P the only mediator out of P. The five designated morphisms must be
    verified pleomorphisms. Raises CubeCheckFailed."""
    for name, square in cube.faces.items():
        if not square.commutes():
            raise CubeCheckFailed(f"Face {name} does not commute", name)
        cube.face_status[name] = "commutes"
    for name in cube.PUSHOUT_FACES:
        if not colimit_engine.verify_pushout(cube.faces[name]):
            raise CubeCheckFailed(f"Face {name} is not a pushout", name)
        cube.face_status[name] = "pushout"
    # pasting law along the cube's two seams
    try:
        colimit_engine.paste_check(cube.faces["back_right"], cube.faces["bottom"])
        colimit_engine.paste_check(cube.faces["top"], cube.faces["front_left"])
    except ReductioError as e:
        raise CubeCheckFailed(f"Pasting check failed: {e.detail}", "pasting")
    m = cube.morphisms
    top = PushoutResult(Span(m["l"], m["r"]), Cospan(m["h"], m["c"]))
    found = SPECS.mediators(top, Cospan(compose(m["sigma_H"], m["h_1"]), compose(m["sigma_C"], m["c_1"])))
    if found != [m["sigma_P"]]:
        raise CubeCheckFailed(f"sigma_P is not the only mediator out of P ({len(found)} found)", "sigma_P")
    for name in cube.PLEO_MORPHISMS:
        verdict = cube.verdicts.get(name) or is_pleomorphism(cube.morphisms[name], depth, model)
        cube.verdicts[name] = verdict
        if not verdict.verified and not (assumed and verdict.status != REFUTED):
            raise CubeCheckFailed(f"{name} is not a verified pleomorphism ({verdict})", name)
    # r_1 again through the bottom face: c_1 . r_1 may need both derivation depths
    through = is_pleomorphism(compose(cube.morphisms["r_1"], cube.morphisms["c_1"]), 2 * depth, model)
    cube.verdicts[COMPOSITE] = through
    if through.status == REFUTED and cube.verdicts["r_1"].verified and cube.verdicts["c_1"].verified:
        raise CubeCheckFailed(f"r_1 and c_1 verify but their composite is refuted ({through})", COMPOSITE)


def pleopushout_step(rule: DeductionRule, inst: Instance, witness: Witness, depth: int,
                     model: Optional[Model] = None) -> Tuple[Instance, DeductionCube]:
    if not rule.has_span:
        raise RuleHasNoSpan(f"Rule '{rule.name}' has no generating span; only classic steps apply")
    _expect_instance_of(rule, inst)
    sigma_H, sigma_K, l_1 = inst.morphism, witness.sigma_K, witness.l_1
    if sigma_K.domain != rule.K or l_1.codomain != inst.target or l_1.domain != sigma_K.codomain:
        raise LeftSquareNotCommuting("Witness does not sit between K and the instance's target")
    if compose(sigma_K, l_1) != compose(rule.l, sigma_H):
        raise LeftSquareNotCommuting("l_1 . sigma_K differs from sigma_H . l")
    l_1_verdict = witness.verdict or is_pleomorphism(l_1, depth, model)
    if not l_1_verdict.verified:
        raise WitnessNotPleo(f"l_1 is not a verified pleomorphism ({l_1_verdict})")

    back_right = spec_pushout(Span(sigma_K, rule.r))
    r_1, sigma_C = back_right.cocone.left, back_right.cocone.right
    bottom = spec_pushout(Span(l_1, r_1))
    h_1, c_1 = bottom.cocone.left, bottom.cocone.right
    try:
        sigma_P = SPECS.mediate(rule.pushout, Cospan(compose(sigma_H, h_1), compose(sigma_C, c_1)))
    except NonCommuting as e:
        raise CubeCheckFailed(f"No mediating morphism out of P: {e.detail}", "sigma_P")

    morphisms = {
        "l": rule.l, "r": rule.r, "h": rule.h, "c": rule.c,
        "sigma_K": sigma_K, "sigma_H": sigma_H, "sigma_C": sigma_C, "sigma_P": sigma_P,
        "l_1": l_1, "r_1": r_1, "h_1": h_1, "c_1": c_1,
    }
    cube = DeductionCube(rule.name, morphisms, _cube_faces(morphisms),
                         verdicts={"h": rule.fraction.evidence, "l_1": l_1_verdict})
    check_cube(cube, depth, model, rule.assumed)
    links = inst.links + (
        Link(h_1, True, cube.verdicts["h_1"], not cube.verdicts["h_1"].verified),
        Link(c_1, False, cube.verdicts["c_1"], not cube.verdicts["c_1"].verified),
    )
    logger.info("pleopushout step '%s': Ss_C has %d equations, Ss_P %d", rule.name,
                len(sigma_C.codomain.equations), len(h_1.codomain.equations))
    return Instance(sigma_C, inst.base, links), cube


def minimal_witness(rule: DeductionRule, inst: Instance, depth: int,
                    model: Optional[Model] = None) -> Optional[Witness]:
    """Smallest Ss_K found greedily: the base's part of Ss_H plus the image of
    K, re-adding Ss_H equations in canonical order until l_1 verifies.
    Returns None when no candidate verifies."""
    if not rule.has_span:
        raise RuleHasNoSpan(f"Rule '{rule.name}' has no generating span")
    _expect_instance_of(rule, inst)
    S_H, base = inst.target, inst.base
    through = compose(rule.l, inst.morphism)
    candidate = EqSpec(
        S_H.sorts,
        S_H.ops,
        {v: s for v, s in S_H.vars.items() if v in base.vars},
        (S_H.terms & base.terms) | through.image_terms(),
        (S_H.equations & base.equations) | through.image_equations(),
    )
    while True:
        sigma_K = SpecMorphism(rule.K, candidate, through.sort_map, through.op_map, through.var_map)
        l_1 = inclusion(candidate, S_H)
        verdict = is_pleomorphism(l_1, depth, model)
        if verdict.verified:
            logger.info("minimal witness for '%s': %d of %d equations kept", rule.name,
                        len(candidate.equations), len(S_H.equations))
            return Witness(sigma_K, l_1, verdict)
        missing = [e for e in sorted(S_H.equations - candidate.equations)
                   if not derivable(candidate, e, depth).verified]
        if not missing:
            logger.info("no witness for '%s': %s", rule.name, verdict)
            return None
        logger.debug("witness for '%s' re-adds '%s'", rule.name, missing[0])
        candidate = candidate.extend(equations=[missing[0]])
