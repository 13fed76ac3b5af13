"""Text formats for specifications, specification morphisms, deduction rules and finite models."""

from pathlib import Path
from typing import Dict, Optional, Sequence

from lark import Transformer, v_args

from data_processing.sections import (TERMINALS, Line, LineParser, clean_lines, read_mapping, read_text,
                                      require, split_blocks, split_records, split_sections)
from errors import InputError, ParseError
from logic.deduction import DeductionRule, rule_from_fraction, rule_from_span
from logic.eq_logic import EqSpec, Model, OpDecl, SpecMorphism, by_name
from logic.terms import parse_equation, parse_term

SPEC_SECTIONS = ("SORTS", "OPS", "VARS", "TERMS", "EQNS")

# op declarations and model table rows share one shape
SPEC_LINES = r"""
    sorts: SYMBOL+
    signature: SYMBOL ":" SYMBOL* "->" SYMBOL
    typing: SYMBOL+ ":" SYMBOL
    carrier: SYMBOL ":" SYMBOL+
    endpoint: ENDPOINT REST
    ENDPOINT: /(?:CO)?DOMAIN(?!\S)/
""" + TERMINALS


@v_args(inline=True)
class _SpecLines(Transformer):
    def sorts(self, *names):
        return [str(n) for n in names]

    def signature(self, name, *rest):
        *args, result = rest
        return str(name), tuple(str(a) for a in args), str(result)

    def typing(self, *rest):
        *names, sort = rest
        return [str(n) for n in names], str(sort)

    def carrier(self, sort, *values):
        return str(sort), tuple(str(v) for v in values)

    def endpoint(self, keyword, target):
        return str(keyword), str(target).strip()


_lines = LineParser(SPEC_LINES, _SpecLines(), ("sorts", "signature", "typing", "carrier", "endpoint"))


def _spec_from_lines(lines: Sequence[Line], path: Optional[str]) -> EqSpec:
    sections = split_sections(lines, SPEC_SECTIONS, path)
    sorts = set()
    for line in sections.get("SORTS", []):
        sorts.update(_lines.parse(line, "sorts", path, "sort names"))
    ops: Dict[str, OpDecl] = {}
    for line in sections.get("OPS", []):
        name, args, result = _lines.parse(line, "signature", path, "'op : A B -> C'")
        if name in ops:
            raise ParseError(f"Duplicate operation '{name}'", path, line.number)
        ops[name] = OpDecl(args, result)
    variables: Dict[str, str] = {}
    for line in sections.get("VARS", []):
        names, sort = _lines.parse(line, "typing", path, "'x y : S'")
        variables.update((name, sort) for name in names)
    terms = []
    for line in sections.get("TERMS", []):
        try:
            terms.append(parse_term(line.text, variables))
        except ParseError as e:
            raise ParseError(e.detail, path, line.number)
    equations = []
    for line in sections.get("EQNS", []):
        try:
            equations.append(parse_equation(line.text, variables))
        except ParseError as e:
            raise ParseError(e.detail, path, line.number)
    try:
        return EqSpec(sorts, ops, variables, terms, equations)
    except InputError as e:
        first = lines[0] if lines else Line(1, "")
        raise ParseError(e.detail, path, first.number)


def parse_spec(text: str, path: Optional[str] = None) -> EqSpec:
    return _spec_from_lines(clean_lines(text), path)


def read_spec(path) -> EqSpec:
    return parse_spec(read_text(path), str(path))


def write_spec(spec: EqSpec) -> str:
    """Canonical form: every section sorted, terms reduced to the maximal ones."""
    lines = ["SORTS"] + sorted(spec.sorts)
    lines += ["OPS"] + [f"{name} : {decl}" for name, decl in spec.ops.items()]
    lines += ["VARS"] + [f"{name} : {sort}" for name, sort in spec.vars.items()]
    lines += ["TERMS"] + [str(t) for t in spec.maximal_terms()]
    lines += ["EQNS"] + [str(e) for e in sorted(spec.equations)]
    return "\n".join(lines) + "\n"


def _spec_morphism_from_lines(lines: Sequence[Line], domain: EqSpec, codomain: EqSpec,
                              path: Optional[str], where: Optional[Line] = None) -> SpecMorphism:
    sections = split_sections(lines, ("SORTMAP", "OPMAP", "VARMAP"), path)
    sort_map = {x: y for x, (y, _) in read_mapping(sections.get("SORTMAP", []), path).items()}
    op_map = {x: y for x, (y, _) in read_mapping(sections.get("OPMAP", []), path).items()}
    var_map = {}
    for x, (text, line) in read_mapping(sections.get("VARMAP", []), path).items():
        try:
            var_map[x] = parse_term(text, codomain.vars)
        except ParseError as e:
            raise ParseError(e.detail, path, line.number)
    try:
        return by_name(domain, codomain, sort_map, op_map, var_map)
    except InputError as e:
        raise ParseError(e.detail, path, where.number if where else None)


def parse_spec_morphism(text: str, path: Optional[str] = None) -> SpecMorphism:
    """``DOMAIN file`` and ``CODOMAIN file`` (relative to this file), then optional
    SORTMAP / OPMAP / VARMAP sections; unlisted items map to the item of the same name."""
    lines = clean_lines(text)
    ends: Dict[str, EqSpec] = {}
    base = Path(path).parent if path else Path(".")
    body = []
    for line in lines:
        end = _lines.match(line, "endpoint")
        if end is None:
            body.append(line)
        else:
            keyword, target = end
            ends[keyword] = read_spec(base / target)
    for keyword in ("DOMAIN", "CODOMAIN"):
        if keyword not in ends:
            raise ParseError(f"Missing {keyword} line", path)
    return _spec_morphism_from_lines(body, ends["DOMAIN"], ends["CODOMAIN"], path, lines[0])


def read_spec_morphism(path) -> SpecMorphism:
    return parse_spec_morphism(read_text(path), str(path))


def write_spec_morphism(morphism: SpecMorphism) -> str:
    lines = ["SORTMAP"] + [f"{x} |-> {y}" for x, y in morphism.sort_map.items()]
    lines += ["OPMAP"] + [f"{x} |-> {y}" for x, y in morphism.op_map.items()]
    lines += ["VARMAP"] + [f"{x} |-> {t}" for x, t in morphism.var_map.items()]
    return "\n".join(lines) + "\n"


def parse_deduction_rules(text: str, depth: int, path: Optional[str] = None, model: Optional[Model] = None,
                          assume_pleo: bool = False) -> Dict[str, DeductionRule]:
    """``RULE name`` records in span form (K:, H:, C:, l:, r:) or fraction form (H:, P:, C:, h:, c:).

    Empty morphism blocks stand for the by-name morphism.
    """
    rules: Dict[str, DeductionRule] = {}
    for name, head, body in split_records(clean_lines(text), path):
        if name in rules:
            raise ParseError(f"Duplicate rule '{name}'", path, head.number)
        header, blocks = split_blocks(body, path)
        if header:
            raise ParseError(f"Unexpected line '{header[0].text}' before the first block", path, header[0].number)
        if "K" in blocks:
            require(blocks, ("K", "H", "C", "l", "r"), head, path)
            K, H, C = (_spec_from_lines(blocks[n], path) for n in ("K", "H", "C"))
            l = _spec_morphism_from_lines(blocks["l"], K, H, path, head)
            r = _spec_morphism_from_lines(blocks["r"], K, C, path, head)
            rules[name] = rule_from_span(name, l, r, depth, model, assume_pleo)
        else:
            require(blocks, ("H", "P", "C", "h", "c"), head, path)
            H, P, C = (_spec_from_lines(blocks[n], path) for n in ("H", "P", "C"))
            h = _spec_morphism_from_lines(blocks["h"], H, P, path, head)
            c = _spec_morphism_from_lines(blocks["c"], C, P, path, head)
            rules[name] = rule_from_fraction(name, h, c, depth, model, assume_pleo)
    if not rules:
        raise ParseError("No RULE found", path)
    return rules


def read_deduction_rules(path, depth: int, model: Optional[Model] = None,
                         assume_pleo: bool = False) -> Dict[str, DeductionRule]:
    return parse_deduction_rules(read_text(path), depth, str(path), model, assume_pleo)


def parse_model(text: str, path: Optional[str] = None) -> Model:
    """CARRIERS lines ``S : a b c``; TABLES lines ``op : a b -> v``."""
    sections = split_sections(clean_lines(text), ("CARRIERS", "TABLES"), path)
    carriers: Dict[str, tuple] = {}
    for line in sections.get("CARRIERS", []):
        sort, values = _lines.parse(line, "carrier", path, "'S : a b ...'")
        carriers[sort] = values
    tables: Dict[str, Dict[tuple, str]] = {}
    for line in sections.get("TABLES", []):
        name, key, value = _lines.parse(line, "signature", path, "'op : a b -> v'")
        row = tables.setdefault(name, {})
        if key in row and row[key] != value:
            raise ParseError(f"Conflicting entries for {name}({', '.join(key)})", path, line.number)
        row[key] = value
    return Model(carriers, tables)


def read_model(path) -> Model:
    return parse_model(read_text(path), str(path))