import logging
from pathlib import Path

from data_processing.graph_text import read_graph, read_rules, write_graph
from data_processing.traces import RewriteRun, rewrite_report
from errors import InputError
from graphs.graph_rewriting import DPO, GeneralizedPushout, apply_all, first_success
from routes.common import add_common_options, make_config, write_output
from visualization.dot import graph_dot, rewrite_dot

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("rewrite", help="apply graph rewrite rules at every match")
    parser.add_argument("--graph", type=Path, required=True)
    parser.add_argument("--rules", type=Path, required=True)
    parser.add_argument("--mode", default=DPO, help="dpo or sqpo")
    parser.add_argument("--rule", help="only apply the rule with this name")
    parser.add_argument("--mono", action="store_true", help="only enumerate injective matches")
    add_common_options(parser)
    parser.set_defaults(handler=cmd_rewrite)


def cmd_rewrite(args) -> int:
    """Exit 2 when there are matches and every one fails, 0 otherwise (no match at all included)."""
    cfg = make_config(args)
    graph = read_graph(cfg.path("graph"))
    rules = read_rules(cfg.path("rules"))
    if cfg.rule is not None:
        rules = [r for r in rules if r.name == cfg.rule]
        if not rules:
            raise InputError(f"No rule named '{cfg.rule}' in {cfg.path('rules')}")

    reports, first = [], None
    for rule in rules:
        results = apply_all(rule, graph, cfg.mode, mono=cfg.mono)
        logger.info("rule '%s': %d matches", rule.name, len(results))
        reports.append(rewrite_report(rule, graph, cfg.mode, results))
        first = first or first_success(results)
    run = RewriteRun(reports=reports)

    if cfg.emit == "json":
        write_output(run.model_dump_json(indent=2) + "\n", cfg)
    elif cfg.emit == "dot":
        write_output(rewrite_dot(first) if first else graph_dot(graph), cfg)
    else:
        write_output(_text(run, first), cfg)
    if cfg.trace is not None:
        cfg.trace.write_text(run.model_dump_json(indent=2) + "\n", encoding="utf-8")
    attempted = sum(len(r.steps) for r in reports)
    return 2 if attempted and not any(r.successes for r in reports) else 0


def _text(run: RewriteRun, first: GeneralizedPushout) -> str:
    lines = []
    for report in run.reports:
        lines.append(f"rule {report.rule} ({report.mode}): {report.successes}/{len(report.steps)} matches rewritten")
        for step in report.steps:
            match = ", ".join(f"{x}->{y}" for x, y in step.match.node_map.items())
            status = "ok" if step.ok else f"{step.error_kind}: {step.error}"
            lines.append(f"  [{match}] {status}")
    text = "\n".join(lines) + "\n"
    if first is not None:
        text += "first result:\n" + write_graph(first.H)
    return text
