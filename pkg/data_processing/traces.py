"""
JSON reports of rewriting runs, deduction runs and verification checks.

Field order is declaration order, and every mapping is built from already
sorted data, so the same run always serializes to the same bytes.
"""

from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from data_processing.spec_text import write_spec
from graphs.graph_core import Graph, GraphMorphism
from graphs.graph_rewriting import GeneralizedPushout, Outcome, RewriteRule
from logic.deduction import DeductionCube, DeductionTrace
from logic.derivations import DerivationRun, StepRecord
from logic.eq_logic import Derivation, PleoVerdict, Refutation, SpecMorphism


# Graph models
class EdgeModel(BaseModel):
    source: str
    target: str
    label: str = ""


class GraphModel(BaseModel):
    nodes: Dict[str, str]
    edges: Dict[str, EdgeModel]


class MatchModel(BaseModel):
    node_map: Dict[str, str]
    edge_map: Dict[str, str]


class RewriteStepModel(BaseModel):
    match: MatchModel
    ok: bool
    error: Optional[str] = None
    error_kind: Optional[str] = None
    context: Optional[GraphModel] = None
    result: Optional[GraphModel] = None


class RewriteReport(BaseModel):
    rule: str
    mode: str
    graph: GraphModel
    successes: int
    steps: List[RewriteStepModel]


class RewriteRun(BaseModel):
    reports: List[RewriteReport]


# Deduction models
class DerivationModel(BaseModel):
    goal: str
    verified: bool
    depth: int
    steps: List[str]


class VerdictModel(BaseModel):
    status: str
    reason: str = ""
    derivations: List[DerivationModel] = []
    counterexample: Optional[Dict[str, str]] = None


class MorphismModel(BaseModel):
    sort_map: Dict[str, str]
    op_map: Dict[str, str]
    var_map: Dict[str, str]


class DeductionStepModel(BaseModel):
    index: int
    rule: str
    mode: str
    witness: str = ""
    objects: Dict[str, str]
    faces: Dict[str, str] = {}
    verdicts: Dict[str, VerdictModel]
    instance: MorphismModel


class DeductionReport(BaseModel):
    initial: str
    final: str
    steps: List[DeductionStepModel]


class CheckModel(BaseModel):
    check: str
    passed: bool
    status: str
    details: Dict[str, str] = {}
    verdicts: Dict[str, VerdictModel] = {}


class VerifyReport(BaseModel):
    checks: List[CheckModel]


def graph_model(graph: Graph) -> GraphModel:
    return GraphModel(
        nodes=dict(graph.nodes),
        edges={e: EdgeModel(source=x.source, target=x.target, label=x.label) for e, x in graph.edges.items()},
    )


def match_model(morphism: GraphMorphism) -> MatchModel:
    return MatchModel(node_map=dict(morphism.node_map), edge_map=dict(morphism.edge_map))


def rewrite_report(rule: RewriteRule, graph: Graph, mode: str,
                   results: Sequence[Tuple[GraphMorphism, Outcome]]) -> RewriteReport:
    steps = []
    for match, outcome in results:
        if isinstance(outcome, GeneralizedPushout):
            steps.append(RewriteStepModel(match=match_model(match), ok=True,
                                          context=graph_model(outcome.D), result=graph_model(outcome.H)))
        else:
            steps.append(RewriteStepModel(match=match_model(match), ok=False, error=outcome.detail,
                                          error_kind=type(outcome).__name__))
    return RewriteReport(rule=rule.name, mode=mode, graph=graph_model(graph),
                         successes=sum(s.ok for s in steps), steps=steps)


def derivation_model(derivation: Derivation) -> DerivationModel:
    return DerivationModel(goal=str(derivation.goal), verified=derivation.verified, depth=derivation.depth,
                           steps=[str(e) for e in derivation.steps])


def verdict_model(verdict: PleoVerdict) -> VerdictModel:
    counterexample = None
    if isinstance(verdict.counterexample, Refutation) and verdict.counterexample.assignment is not None:
        counterexample = dict(verdict.counterexample.assignment)
    return VerdictModel(status=verdict.status, reason=verdict.reason,
                        derivations=[derivation_model(d) for d in verdict.derivations],
                        counterexample=counterexample)


def morphism_model(morphism: SpecMorphism) -> MorphismModel:
    return MorphismModel(sort_map=dict(morphism.sort_map), op_map=dict(morphism.op_map),
                         var_map={v: str(t) for v, t in morphism.var_map.items()})


def _step_model(record: StepRecord) -> DeductionStepModel:
    trace = record.trace
    if isinstance(trace, DeductionCube):
        objects = {name: write_spec(spec) for name, spec in trace.objects.items()}
        faces = dict(trace.face_status)
        verdicts = {name: verdict_model(v) for name, v in trace.verdicts.items()}
    else:
        assert isinstance(trace, DeductionTrace)
        objects = {"Ss_H": write_spec(record.instance.target), "Ss_P": write_spec(trace.spec)}
        faces = {"top": "pushout"}
        verdicts = {"h_1": verdict_model(trace.verdict)}
    return DeductionStepModel(index=record.index, rule=record.rule, mode=record.mode, witness=record.witness,
                              objects=objects, faces=faces, verdicts=verdicts,
                              instance=morphism_model(record.result.morphism))


def deduction_report(run: DerivationRun) -> DeductionReport:
    return DeductionReport(initial=write_spec(run.initial), final=write_spec(run.final),
                           steps=[_step_model(r) for r in run.steps])


def check_model(check: str, passed: bool, status: str, details: Optional[Dict[str, str]] = None,
                verdicts: Optional[Dict[str, PleoVerdict]] = None) -> CheckModel:
    return CheckModel(check=check, passed=passed, status=status, details=details or {},
                      verdicts={k: verdict_model(v) for k, v in (verdicts or {}).items()})
