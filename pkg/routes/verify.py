import logging
from pathlib import Path
from typing import List

from categories import colimit_engine
from data_processing.graph_text import read_square
from data_processing.spec_text import read_model, read_spec, read_spec_morphism
from data_processing.traces import CheckModel, VerifyReport, check_model, derivation_model
from errors import InputError
from logic.deduction import DeductionCube
from logic.eq_logic import derivable, is_pleomorphism, refute
from logic.terms import parse_equation
from routes.common import RunConfig, add_common_options, add_deduction_options, make_config, write_output
from routes.deduce import cubes, derive

logger = logging.getLogger(__name__)

CHECKS = ("pushout", "pullback", "pleo", "derivable", "refute", "cube")


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="check a square, a pleomorphism, an equation or a run's cubes")
    parser.add_argument("action", choices=CHECKS)
    parser.add_argument("--square", type=Path, help="square of graphs (pushout, pullback)")
    parser.add_argument("--morph", type=Path, help="specification morphism (pleo)")
    parser.add_argument("--goal", help="equation 'lhs == rhs' (derivable, refute)")
    parser.add_argument("--mode", help="deduction mode for the cube check")
    add_deduction_options(parser)
    add_common_options(parser)
    parser.set_defaults(handler=cmd_verify)


def _square(cfg: RunConfig, pullback: bool) -> CheckModel:
    square = read_square(cfg.path("square"))
    passed = colimit_engine.verify_pullback(square) if pullback else colimit_engine.verify_pushout(square)
    name = "pullback" if pullback else "pushout"
    return check_model(name, passed, "true" if passed else "false")


def _pleo(cfg: RunConfig) -> CheckModel:
    morphism = read_spec_morphism(cfg.path("morph"))
    model = read_model(cfg.paths["model"]) if "model" in cfg.paths else None
    verdict = is_pleomorphism(morphism, cfg.depth, model)
    return check_model("pleo", verdict.verified, verdict.status, {"reason": verdict.reason}, {"morphism": verdict})


def _goal(cfg: RunConfig):
    spec = read_spec(cfg.path("spec"))
    if cfg.goal is None:
        raise InputError(f"verify {cfg.action} needs --goal")
    return spec, parse_equation(cfg.goal, spec.vars)


def _derivable(cfg: RunConfig) -> CheckModel:
    spec, goal = _goal(cfg)
    derivation = derivable(spec, goal, cfg.depth)
    details = {"depth": str(derivation.depth), "steps": "; ".join(str(e) for e in derivation.steps)}
    logger.debug("derivation: %s", derivation_model(derivation))
    return check_model("derivable", derivation.verified, derivation.status, details)


def _refute(cfg: RunConfig) -> CheckModel:
    spec, goal = _goal(cfg)
    refutation = refute(spec, goal, read_model(cfg.path("model")))
    details = {k: v for k, v in (refutation.assignment or {}).items()}
    return check_model("refute", refutation.refuted, refutation.status, details)


def cubes_pass(found: List[DeductionCube]) -> bool:
    """The designated pleomorphisms of every cube verify; other verdicts are only reported."""
    return bool(found) and all(cube.verdicts[name].verified for cube in found for name in cube.PLEO_MORPHISMS)


def _cube(cfg: RunConfig) -> CheckModel:
    """Re-run the script; every pleopushout step checks its cube before returning."""
    run = derive(cfg)
    found = cubes(run)
    details, verdicts = {}, {}
    for i, cube in enumerate(found, start=1):
        for face, status in cube.face_status.items():
            details[f"step{i}.{face}"] = status
        for name, verdict in cube.verdicts.items():
            verdicts[f"step{i}.{name}"] = verdict
    passed = cubes_pass(found)
    return check_model("cube", passed, f"{len(found)} cube(s) checked", details, verdicts)


HANDLERS = {
    "pushout": lambda cfg: _square(cfg, pullback=False),
    "pullback": lambda cfg: _square(cfg, pullback=True),
    "pleo": _pleo,
    "derivable": _derivable,
    "refute": _refute,
    "cube": _cube,
}


def cmd_verify(args) -> int:
    """Exit 0 when the check passes, 2 when it does not."""
    cfg = make_config(args)
    check = HANDLERS[cfg.action](cfg)
    report = VerifyReport(checks=[check])
    if cfg.emit == "json":
        write_output(report.model_dump_json(indent=2) + "\n", cfg)
    else:
        lines = [f"{check.check}: {check.status}"]
        lines += [f"  {k}: {v}" for k, v in check.details.items() if v]
        lines += [f"  {k}: {v.status}" for k, v in check.verdicts.items()]
        write_output("\n".join(lines) + "\n", cfg)
    if cfg.trace is not None:
        cfg.trace.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return 0 if check.passed else 2
