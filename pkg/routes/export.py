from pathlib import Path

from data_processing.graph_text import read_graph, read_rules
from errors import InputError, RewriteError
from graphs.graph_rewriting import DPO, apply_all, first_success
from routes.common import add_common_options, add_deduction_options, make_config, write_output
from routes.deduce import cubes, derive
from visualization.dot import cube_dot, graph_dot, rewrite_dot


def register(subparsers) -> None:
    parser = subparsers.add_parser("export", help="render a graph, a rewrite step or deduction cubes as DOT")
    parser.add_argument("action", choices=("graph", "rewrite", "cube"))
    parser.add_argument("--graph", type=Path)
    parser.add_argument("--rule", help="rule to render (default: the first in the file)")
    parser.add_argument("--mode", help="dpo or sqpo for rewrite; deduction mode for cube")
    add_deduction_options(parser)
    add_common_options(parser)
    parser.set_defaults(handler=cmd_export, emit="dot")


def cmd_export(args) -> int:
    if args.action == "rewrite" and args.mode is None:
        args.mode = DPO
    cfg = make_config(args)
    if cfg.action == "graph":
        write_output(graph_dot(read_graph(cfg.path("graph"))), cfg)
    elif cfg.action == "rewrite":
        rules = read_rules(cfg.path("rules"))
        rule = rules[0]
        if cfg.rule is not None:
            named = [r for r in rules if r.name == cfg.rule]
            if not named:
                raise InputError(f"No rule named '{cfg.rule}' in {cfg.path('rules')}")
            rule = named[0]
        step = first_success(apply_all(rule, read_graph(cfg.path("graph")), cfg.mode))
        if step is None:
            raise RewriteError(f"Rule '{rule.name}' rewrites at no match")
        write_output(rewrite_dot(step, rule.name), cfg)
    else:
        write_output("".join(cube_dot(c, f"step{i}") for i, c in enumerate(cubes(derive(cfg)), start=1)), cfg)
    return 0
