from typing import List, Optional

from lark import Transformer, v_args

from data_processing.sections import TERMINALS, LineParser, clean_lines, read_text
from errors import ParseError
from logic.derivations import ScriptStep

# a bound term runs up to the next option, so it may contain spaces
SCRIPT_LINES = r"""
    step: _STEP SYMBOL option*
    option: _MODE "=" SYMBOL -> mode
          | _BIND BOUND "=" TERM_TEXT -> bind
    _STEP: /step(?!\S)/
    _MODE: /mode(?=\s*=)/
    _BIND: /bind(?!\S)/
    BOUND: /[^\s=]+/
    TERM_TEXT: /\S(?:(?!\s+(?:bind\s|mode\s*=))[^\n])*/
""" + TERMINALS


@v_args(inline=True)
class _ScriptLines(Transformer):
    def step(self, rule, *options):
        return str(rule), list(options)

    def mode(self, value):
        return "mode", str(value)

    def bind(self, name, term):
        return "bind", (str(name), str(term).strip())


_lines = LineParser(SCRIPT_LINES, _ScriptLines(), ("step",))


def parse_script(text: str, path: Optional[str] = None, default_mode: str = "classic") -> List[ScriptStep]:
    """Lines ``step <rule> mode=<mode> bind x=<term> ...``; the mode defaults to classic."""
    steps = []
    for line in clean_lines(text):
        rule, options = _lines.parse(line, "step", path, "'step <rule> [mode=<mode>] [bind <var>=<term>] ...'")
        mode, bindings = default_mode, []
        for kind, value in options:
            if kind == "mode":
                mode = value
                continue
            if value[0] in dict(bindings):
                raise ParseError(f"'{value[0]}' is bound twice", path, line.number)
            bindings.append(value)
        steps.append(ScriptStep(rule, mode, tuple(bindings), line.number))
    return steps


def read_script(path, default_mode: str = "classic") -> List[ScriptStep]:
    return parse_script(read_text(path), str(path), default_mode)
