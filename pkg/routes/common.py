"""Run configuration and the plumbing every subcommand shares."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

import config
from errors import InputError

logger = logging.getLogger(__name__)

PATH_OPTIONS = ("graph", "rules", "spec", "script", "model", "square", "morph")


class RunConfig(BaseModel):
    command: str
    action: Optional[str] = None
    paths: Dict[str, Path] = {}
    mode: Optional[str] = None
    depth: int = Field(ge=0)
    emit: str = config.DEFAULT_EMIT
    output: Optional[Path] = None
    trace: Optional[Path] = None
    goal: Optional[str] = None
    rule: Optional[str] = None
    assume_pleo: bool = False
    mono: bool = False

    @field_validator("emit")
    @classmethod
    def known_format(cls, value: str) -> str:
        if value not in config.EMIT_FORMATS:
            raise ValueError(f"emit must be one of {', '.join(config.EMIT_FORMATS)}")
        return value

    @field_validator("paths")
    @classmethod
    def inputs_exist(cls, value: Dict[str, Path]) -> Dict[str, Path]:
        for name, path in value.items():
            if not path.is_file():
                raise ValueError(f"--{name} {path}: file not found")
        return value

    @model_validator(mode="after")
    def known_mode(self) -> "RunConfig":
        rewriting = self.command == "rewrite" or (self.command == "export" and self.action == "rewrite")
        modes = config.REWRITE_MODES if rewriting else config.DEDUCTION_MODES
        if self.mode is not None and self.mode not in modes:
            raise ValueError(f"mode must be one of {', '.join(modes)} for {self.command}")
        return self

    def path(self, name: str) -> Path:
        if name not in self.paths:
            raise InputError(f"{self.command}{' ' + self.action if self.action else ''} needs --{name}")
        return self.paths[name]


def add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--depth", type=int,
                        help="derivability depth bound (default from REDUCTIO_DEPTH)")
    parser.add_argument("--emit", default=config.DEFAULT_EMIT, help="text, json or dot")
    parser.add_argument("--output", "-o", type=Path, help="write the result here instead of stdout")
    parser.add_argument("--trace", type=Path, help="also write the JSON trace here")


def add_deduction_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--spec", type=Path, help="specification file")
    parser.add_argument("--rules", type=Path, help="deduction rule file")
    parser.add_argument("--script", type=Path, help="derivation script")
    parser.add_argument("--model", type=Path, help="finite model used to refute")
    parser.add_argument("--assume-pleo", action="store_true",
                        help="accept rule denominators whose pleomorphism check is Unknown")


def _problem(err) -> str:
    message = err["msg"].removeprefix("Value error, ")
    return f"{err['loc'][0]}: {message}" if err["loc"] else message


def make_config(args: argparse.Namespace) -> RunConfig:
    paths = {name: getattr(args, name) for name in PATH_OPTIONS if getattr(args, name, None) is not None}
    try:
        return RunConfig(
            command=args.command,
            action=getattr(args, "action", None),
            paths=paths,
            mode=getattr(args, "mode", None),
            depth=config.DEFAULT_DEPTH if args.depth is None else args.depth,
            emit=args.emit,
            output=args.output,
            trace=getattr(args, "trace", None),
            goal=getattr(args, "goal", None),
            rule=getattr(args, "rule", None),
            assume_pleo=getattr(args, "assume_pleo", False),
            mono=getattr(args, "mono", False),
        )
    except ValidationError as e:
        problems = "; ".join(_problem(err) for err in e.errors())
        raise InputError(f"Invalid arguments: {problems}")


def write_output(text: str, cfg: RunConfig) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
        return
    cfg.output.write_text(text, encoding="utf-8")
    logger.info("wrote %s", cfg.output)
