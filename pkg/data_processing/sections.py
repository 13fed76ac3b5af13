"""Line-level helpers shared by every text format: comments, keyword sections and named blocks.

Every format is line oriented. A format parses its lines with one lark
grammar that has a start rule per line shape; ``TERMINALS`` holds the tokens
all of them share.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError

from errors import InputError, ParseError

TERMINALS = r"""
    SYMBOL: /(?:(?!->|\|->)[^\s:])+/
    REST: /\S[^\n]*/
    %import common.WS_INLINE
    %ignore WS_INLINE
"""

SHARED_LINES = r"""
    marker: WORD ":"
    record_head: _RULE SYMBOL*
    mapping: SYMBOL "|->" REST
    WORD: /\w+/
    _RULE: /RULE(?!\S)/
""" + TERMINALS


@dataclass(frozen=True)
class Line:
    number: int
    text: str


class LineParser:
    """A lark LALR parser over single lines, one start rule per line shape."""

    def __init__(self, grammar: str, transformer: Transformer, starts: Sequence[str]):
        self.lark = Lark(grammar, parser="lalr", start=list(starts), transformer=transformer)

    def parse(self, line: Line, start: str, path: Optional[str], expected: str) -> Any:
        try:
            return self.lark.parse(line.text, start=start)
        except LarkError:
            raise ParseError(f"Expected {expected}, got '{line.text}'", path, line.number)

    def match(self, line: Line, start: str) -> Optional[Any]:
        """The parsed line, or None when it does not have this shape."""
        try:
            return self.lark.parse(line.text, start=start)
        except LarkError:
            return None


@v_args(inline=True)
class _SharedLines(Transformer):
    def marker(self, word):
        return str(word)

    def record_head(self, *names):
        return [str(n) for n in names]

    def mapping(self, source, target):
        return str(source), str(target).strip()


_shared = LineParser(SHARED_LINES, _SharedLines(), ("marker", "record_head", "mapping"))


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"{path}: file not found")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")


def clean_lines(text: str) -> List[Line]:
    """Numbered non-blank lines with ``#`` comments removed."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.partition("#")[0].strip()
        if stripped:
            lines.append(Line(number, stripped))
    return lines


def split_sections(lines: Sequence[Line], keywords: Iterable[str], path: Optional[str] = None) -> Dict[str, List[Line]]:
    """Group lines under the keyword line that precedes them."""
    keywords = set(keywords)
    sections: Dict[str, List[Line]] = {}
    current = None
    for line in lines:
        if line.text in keywords:
            if line.text in sections:
                raise ParseError(f"Duplicate section {line.text}", path, line.number)
            current = sections[line.text] = []
        elif current is None:
            raise ParseError(f"Expected one of {', '.join(sorted(keywords))}, got '{line.text}'", path, line.number)
        else:
            current.append(line)
    return sections


def split_blocks(lines: Sequence[Line], path: Optional[str] = None) -> Tuple[List[Line], Dict[str, List[Line]]]:
    """Split on ``name:`` marker lines; returns the lines before the first marker and the blocks."""
    header: List[Line] = []
    blocks: Dict[str, List[Line]] = {}
    current = header
    for line in lines:
        name = _shared.match(line, "marker")
        if name is None:
            current.append(line)
            continue
        if name in blocks:
            raise ParseError(f"Duplicate block {name}:", path, line.number)
        current = blocks[name] = []
    return header, blocks


def split_records(lines: Sequence[Line], path: Optional[str] = None) -> List[Tuple[str, Line, List[Line]]]:
    """Split a multi-record file on ``RULE name`` lines."""
    records: List[Tuple[str, Line, List[Line]]] = []
    for line in lines:
        names = _shared.match(line, "record_head")
        if names is not None:
            if len(names) != 1:
                raise ParseError("Expected 'RULE <name>'", path, line.number)
            records.append((names[0], line, []))
        elif not records:
            raise ParseError(f"Expected 'RULE <name>' before '{line.text}'", path, line.number)
        else:
            records[-1][2].append(line)
    return records


def read_mapping(lines: Sequence[Line], path: Optional[str] = None) -> Dict[str, Tuple[str, Line]]:
    mapping: Dict[str, Tuple[str, Line]] = {}
    for line in lines:
        source, target = _shared.parse(line, "mapping", path, "'x |-> y'")
        if source in mapping:
            raise ParseError(f"'{source}' is mapped twice", path, line.number)
        mapping[source] = (target, line)
    return mapping


def require(blocks: Dict[str, List[Line]], names: Iterable[str], where: Line, path: Optional[str]) -> None:
    missing = [n for n in names if n not in blocks]
    if missing:
        raise ParseError(f"Missing block(s) {', '.join(n + ':' for n in missing)}", path, where.number)
