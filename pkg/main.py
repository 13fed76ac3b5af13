import argparse
import logging
import sys

import config
from errors import ReductioError

# Import subcommands
from routes import deduce, export, rewrite, verify

logger = logging.getLogger("reductio")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reductio",
        description="Graph rewriting (DPO / SqPO) and diagrammatic equational deduction",
    )
    parser.add_argument("--verbose", "-v", action="count", default=0, help="-v for info, -vv for debug logs")
    subparsers = parser.add_subparsers(dest="command", required=True)
    # Register subcommands
    for command in (rewrite, deduce, verify, export):
        command.register(subparsers)
    return parser


def configure_logging(verbose: int) -> None:
    level = {0: config.LOG_LEVEL, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except ReductioError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
