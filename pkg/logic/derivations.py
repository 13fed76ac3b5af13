"""Sequential runner for deduction scripts."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from errors import (IllSorted, InputError, InstanceNotPleo, ReductioError, ScriptStepFailed,
                    SortMismatch, UnboundVariable)
from logic.deduction import (CLASSIC, PLEO, PLEO_MINIMAL, DeductionCube, DeductionRule, DeductionTrace,
                             Instance, Link, classic_step, identity_witness, minimal_witness,
                             pleopushout_step)
from logic.eq_logic import EqSpec, Model, SpecMorphism, inclusion, is_pleomorphism
from logic.terms import Equation, Term, parse_term, substitute

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScriptStep:
    rule: str
    mode: str = CLASSIC
    bindings: Tuple[Tuple[str, str], ...] = ()
    line: Optional[int] = None


@dataclass
class StepRecord:
    index: int
    rule: str
    mode: str
    instance: Instance
    result: Instance
    trace: Union[DeductionTrace, DeductionCube]
    witness: str = ""

    @property
    def spec(self) -> EqSpec:
        return self.result.target


@dataclass
class DerivationRun:
    initial: EqSpec
    steps: List[StepRecord] = field(default_factory=list)

    @property
    def final(self) -> EqSpec:
        return self.steps[-1].spec if self.steps else self.initial

    @property
    def instance(self) -> Optional[Instance]:
        return self.steps[-1].result if self.steps else None


def parse_bindings(spec: EqSpec, bindings: Sequence[Tuple[str, str]]) -> Dict[str, Term]:
    terms = {}
    for name, text in bindings:
        term = parse_term(text)
        try:
            spec.sort_of(term)
        except IllSorted as e:
            raise UnboundVariable(f"Binding {name}={text}: {e.detail}")
        terms[name] = term
    return terms


def instantiate(rule: DeductionRule, spec: EqSpec, bindings: Mapping[str, Term], base: EqSpec,
                links: Tuple[Link, ...], depth: int, model: Optional[Model] = None) -> Instance:
    """Ss_H := Ss + image of H under the bindings, with the instance of H in it.

    The inclusion Ss -> Ss_H must verify as a pleomorphism: whatever the
    instance asserts has to follow from Ss.
    """
    H = rule.H
    unbound = sorted(set(H.vars) - set(bindings))
    if unbound:
        raise UnboundVariable(f"Rule '{rule.name}': no binding for {', '.join(unbound)}")
    unknown = sorted(set(bindings) - set(H.vars))
    if unknown:
        raise UnboundVariable(f"Rule '{rule.name}' has no variable {', '.join(unknown)}")

    sort_map: Dict[str, str] = {}
    for v, term in sorted(bindings.items()):
        if not term.is_ground():
            raise InputError(f"Binding for '{v}' must be a ground term, got '{term}'")
        found = spec.sort_of(term)
        if sort_map.setdefault(H.vars[v], found) != found:
            raise SortMismatch(f"Rule '{rule.name}': sort {H.vars[v]} bound to both {sort_map[H.vars[v]]} and {found}")
    for s in H.sorts - set(sort_map):
        if s not in spec.sorts:
            raise UnboundVariable(f"Rule '{rule.name}': sort '{s}' has no counterpart in the specification")
        sort_map[s] = s
    missing_ops = sorted(set(H.ops) - set(spec.ops))
    if missing_ops:
        raise IllSorted(f"Rule '{rule.name}' uses operations {', '.join(missing_ops)} the specification lacks")

    S_H = spec.extend(
        terms=[substitute(t, bindings) for t in H.terms],
        equations=[Equation(substitute(e.lhs, bindings), substitute(e.rhs, bindings)) for e in H.equations],
    )
    sigma_H = SpecMorphism(H, S_H, sort_map, {o: o for o in H.ops}, dict(bindings))
    into = inclusion(spec, S_H)
    verdict = is_pleomorphism(into, depth, model)
    if not verdict.verified:
        raise InstanceNotPleo(f"Rule '{rule.name}': the instance adds more than the specification proves ({verdict})")
    return Instance(sigma_H, base, links + (Link(into, True, verdict),))


def apply_step(rule: DeductionRule, inst: Instance, mode: str, depth: int,
               model: Optional[Model] = None) -> Tuple[Instance, Union[DeductionTrace, DeductionCube], str]:
    if mode == CLASSIC:
        result, trace = classic_step(rule, inst, depth, model)
        return result, trace, ""
    witness, kind = None, "identity"
    if mode == PLEO_MINIMAL:
        witness, kind = minimal_witness(rule, inst, depth, model), "minimal"
        if witness is None:
            logger.info("rule '%s': no smaller witness, using the identity witness", rule.name)
            kind = "identity"
    if witness is None:
        witness = identity_witness(rule, inst)
    result, cube = pleopushout_step(rule, inst, witness, depth, model)
    return result, cube, kind


def run_derivation(spec: EqSpec, rules: Mapping[str, DeductionRule], script: Sequence[ScriptStep],
                   depth: int, model: Optional[Model] = None, mode: Optional[str] = None) -> DerivationRun:
    """Run the script's steps in order; each consumes the previous step's specification.

    ``mode`` overrides every step's own mode. A failing step raises
    ScriptStepFailed carrying the records of the steps before it.
    """
    run = DerivationRun(spec)
    current, links = spec, ()
    for index, step in enumerate(script, start=1):
        step_mode = mode or step.mode
        try:
            if step.rule not in rules:
                raise InputError(f"Unknown rule '{step.rule}'")
            if step_mode not in (CLASSIC, PLEO, PLEO_MINIMAL):
                raise InputError(f"Unknown deduction mode '{step_mode}'")
            rule = rules[step.rule]
            bindings = parse_bindings(current, step.bindings)
            inst = instantiate(rule, current, bindings, spec, links, depth, model)
            result, trace, witness = apply_step(rule, inst, step_mode, depth, model)
        except ReductioError as e:
            failure = ScriptStepFailed(f"step {index} ({step.rule}): {e.detail}", index, list(run.steps))
            failure.exit_code = e.exit_code
            raise failure from e
        run.steps.append(StepRecord(index, step.rule, step_mode, inst, result, trace, witness))
        current, links = result.target, result.links
        logger.info("step %d (%s, %s): %d equations", index, step.rule, step_mode, len(current.equations))
    return run
