"""Plain-text files for coalgebras, towers and level relations.

Coalgebra file::

    # comments run to end of line
    functor: P
    a -> {a,b}
    b -> {}

Tower file: one ``functor:`` header, then ``level n`` blocks of state lines,
then ``proj n: x -> y`` lines for the maps from level ``n+1`` to level ``n``.

Level-relation file: one ``level k: <relation literal>`` line per level,
starting at 0.

States and right-hand sides use the literal grammar of :mod:`.syntax`.
"""
from __future__ import annotations

import re
from pathlib import Path

from .coalgebra import FinCoalgebra
from .errors import InvalidInput, ParseError
from .profinite import LevelRelation, Tower
from .relation import Relation
from .syntax import parse_functor, parse_relation, parse_value, render_relation, render_value

_LEVEL = re.compile(r"level\s+(\d+)\s*$")
_PROJ = re.compile(r"proj\s+(\d+)\s*:\s*(.+?)\s*->\s*(.+)$")
_LEVEL_REL = re.compile(r"level\s+(\d+)\s*:\s*(.+)$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _header(lines: list):
    if not lines or not lines[0][1].startswith("functor:"):
        raise ParseError("file must start with a 'functor: <expr>' line")
    return parse_functor(lines[0][1][len("functor:"):])


def _state_line(no: int, line: str):
    if "->" not in line:
        raise ParseError(f"line {no}: expected 'state -> value', got {line!r}")
    lhs, rhs = line.split("->", 1)
    return parse_value(lhs), parse_value(rhs)


def _build(functor, structure: dict, where: str) -> FinCoalgebra:
    if not structure:
        raise InvalidInput(f"{where}: no states")
    return FinCoalgebra(functor, structure)


def parse_coalgebra(text: str) -> FinCoalgebra:
    lines = list(_lines(text))
    functor = _header(lines)
    structure = {}
    for no, line in lines[1:]:
        x, v = _state_line(no, line)
        if x in structure:
            raise ParseError(f"line {no}: state {render_value(x)} defined twice")
        structure[x] = v
    return _build(functor, structure, "coalgebra")


def render_coalgebra(c: FinCoalgebra) -> str:
    body = [f"functor: {c.functor}"]
    body += [f"{render_value(x)} -> {render_value(c(x))}" for x in c.carrier]
    return "\n".join(body) + "\n"


def parse_tower(text: str) -> Tower:
    lines = list(_lines(text))
    functor = _header(lines)
    blocks: dict[int, dict] = {}
    projs: dict[int, dict] = {}
    current = None
    for no, line in lines[1:]:
        if m := _LEVEL.match(line):
            current = int(m.group(1))
            if current in blocks:
                raise ParseError(f"line {no}: level {current} given twice")
            blocks[current] = {}
        elif m := _PROJ.match(line):
            n = int(m.group(1))
            projs.setdefault(n, {})[parse_value(m.group(2))] = parse_value(m.group(3))
        elif current is None:
            raise ParseError(f"line {no}: state line before any 'level n'")
        else:
            x, v = _state_line(no, line)
            blocks[current][x] = v
    if sorted(blocks) != list(range(len(blocks))):
        raise ParseError("levels must be numbered 0, 1, 2, ... without gaps")
    levels = [_build(functor, blocks[n], f"level {n}") for n in range(len(blocks))]
    if set(projs) - set(range(len(levels) - 1)):
        raise ParseError("projection given for a level with no successor")
    return Tower(levels, [projs.get(n, {}) for n in range(len(levels) - 1)], "file")


def render_tower(t: Tower) -> str:
    out = [f"functor: {t.functor}"]
    for n, c in enumerate(t.levels):
        out.append(f"level {n}")
        out += [f"  {render_value(x)} -> {render_value(c(x))}" for x in c.carrier]
    for n, p in enumerate(t.projections):
        out += [f"proj {n}: {render_value(x)} -> {render_value(p[x])}" for x in t.levels[n + 1].carrier]
    return "\n".join(out) + "\n"


def parse_level_relation(text: str, t1: Tower, t2: Tower) -> LevelRelation:
    rels: dict[int, Relation] = {}
    for no, line in _lines(text):
        m = _LEVEL_REL.match(line)
        if not m:
            raise ParseError(f"line {no}: expected 'level k: {{...}}', got {line!r}")
        k = int(m.group(1))
        rels[k] = parse_relation(m.group(2), t1.carrier(k), t2.carrier(k))
    if sorted(rels) != list(range(len(rels))) or not rels:
        raise ParseError("level relations must cover levels 0..k without gaps")
    return LevelRelation([rels[k] for k in range(len(rels))])


def render_level_relation(r: LevelRelation) -> str:
    return "".join(f"level {k}: {render_relation(rel)}\n" for k, rel in enumerate(r.relations))


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
