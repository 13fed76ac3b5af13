import logging

from data_processing.script_text import read_script
from data_processing.spec_text import read_deduction_rules, read_model, read_spec, write_spec
from data_processing.traces import deduction_report
from logic.deduction import DeductionCube
from logic.derivations import DerivationRun, run_derivation
from routes.common import RunConfig, add_common_options, add_deduction_options, make_config, write_output
from visualization.dot import cube_dot

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("deduce", help="run a derivation script over a specification")
    add_deduction_options(parser)
    parser.add_argument("--mode", help="classic, pleo or pleo-minimal; overrides every step's mode")
    add_common_options(parser)
    parser.set_defaults(handler=cmd_deduce)


def derive(cfg: RunConfig) -> DerivationRun:
    """Load spec, optional model, rules and script named by the config and run them."""
    spec = read_spec(cfg.path("spec"))
    model = read_model(cfg.paths["model"]) if "model" in cfg.paths else None
    rules = read_deduction_rules(cfg.path("rules"), cfg.depth, model, cfg.assume_pleo)
    script = read_script(cfg.path("script"))
    return run_derivation(spec, rules, script, cfg.depth, model, cfg.mode)


def cubes(run: DerivationRun):
    return [record.trace for record in run.steps if isinstance(record.trace, DeductionCube)]


def cmd_deduce(args) -> int:
    """Write the final specification (text), the trace (json) or the cubes (dot)."""
    cfg = make_config(args)
    run = derive(cfg)
    report = deduction_report(run)
    if cfg.emit == "json":
        write_output(report.model_dump_json(indent=2) + "\n", cfg)
    elif cfg.emit == "dot":
        write_output("".join(cube_dot(cube, f"step{i}") for i, cube in enumerate(cubes(run), start=1)), cfg)
    else:
        write_output(write_spec(run.final), cfg)
    if cfg.trace is not None:
        cfg.trace.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("derivation finished after %d steps", len(run.steps))
    return 0
