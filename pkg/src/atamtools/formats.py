"""Plain-text document formats for tile systems and shapes.

System documents are line oriented; '#' starts a comment.

    tile <name> <N> <E> <S> <W>     glue labels, '-' for the null glue
    seed <tile-name>
    temperature <positive int>      standard systems
    strength <label> <nonneg int>   one line per non-null label
    coop <tile-name> <dirset>...    strength-free systems; each dirset is
                                    letters from NESW, e.g. W or NE; the
                                    family is their upward closure

A document is standard when it has temperature/strength lines and
strength-free when it has coop lines; mixing the two is an error.  Shape
documents are either "x y" coordinate lines or an ASCII grid of '#' and
'.' rows (top row = highest y, leftmost column = x 0).  Rendering is
canonical and byte-stable; parse(render(doc)) reproduces render(doc).
"""

from __future__ import annotations

import re

from .core import (
    Assembly,
    Axis,
    GlueTable,
    SfTas,
    Shape,
    StrengthAssignment,
    Tas,
    TileType,
    dirset_name,
    minimal_elements,
    parse_dirset,
    upward_closure,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\S+")


def _tokenize(text: str):
    """Per line: list of (token, line_no, col) with comments stripped."""
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(), ln, m.start() + 1) for m in _TOKEN.finditer(line)]
        if toks:
            out.append(toks)
    return out


def _parse_int(tok, line, col, minimum, what):
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", line, col)
    if v < minimum:
        raise ParseError(f"{what} must be >= {minimum}, got {v}", line, col)
    return v


_SIDE_AXES = (Axis.NS, Axis.EW, Axis.NS, Axis.EW)


def parse_system(text: str) -> Tas | SfTas:
    """Parse a system document into a Tas or an SfTas.

    The seed is placed at the origin.  Standard documents must declare a
    strength for every non-null label; strength-free documents may omit
    coop lines for tiles with empty families.
    """
    glues = GlueTable()
    tiles: list[TileType] = []
    tile_index: dict[str, int] = {}
    seed: str | None = None
    strengths: dict[int, int] = {}
    temperature: int | None = None
    coop_seeds: dict[int, list[int]] = {}
    for toks in _tokenize(text):
        (word, ln, col), rest = toks[0], toks[1:]
        if word == "tile":
            if len(rest) != 5:
                raise ParseError("expected: tile <name> <N> <E> <S> <W>", ln, col)
            name = rest[0][0]
            if name in tile_index:
                raise ParseError(f"duplicate tile {name!r}", ln, rest[0][2])
            quad = []
            for (tok, l2, c2), axis in zip(rest[1:], _SIDE_AXES):
                try:
                    quad.append(glues.intern(tok, axis).id)
                except ValueError as e:
                    raise ParseError(str(e), l2, c2)
            tile_index[name] = len(tiles)
            tiles.append(TileType(name, tuple(quad)))
        elif word == "seed":
            if len(rest) != 1:
                raise ParseError("expected: seed <tile-name>", ln, col)
            if seed is not None:
                raise ParseError("duplicate seed line", ln, col)
            seed = rest[0][0]
        elif word == "temperature":
            if len(rest) != 1:
                raise ParseError("expected: temperature <int>", ln, col)
            if temperature is not None:
                raise ParseError("duplicate temperature line", ln, col)
            temperature = _parse_int(rest[0][0], ln, rest[0][2], 1, "temperature")
        elif word == "strength":
            if len(rest) != 2:
                raise ParseError("expected: strength <label> <int>", ln, col)
            (label, l2, c2), (val, l3, c3) = rest
            glue = glues.get(label)
            if glue is None:
                raise ParseError(f"strength for unknown glue {label!r}", l2, c2)
            if glue.is_null:
                raise ParseError("the null glue cannot carry a strength", l2, c2)
            if glue.id in strengths:
                raise ParseError(f"duplicate strength for {label!r}", l2, c2)
            strengths[glue.id] = _parse_int(val, l3, c3, 0, "strength")
        elif word == "coop":
            if len(rest) < 1:
                raise ParseError("expected: coop <tile-name> <dirset>...", ln, col)
            (name, l2, c2) = rest[0]
            if name not in tile_index:
                raise ParseError(f"coop for unknown tile {name!r}", l2, c2)
            idx = tile_index[name]
            if idx in coop_seeds:
                raise ParseError(f"duplicate coop line for {name!r}", l2, c2)
            sets = []
            for tok, l3, c3 in rest[1:]:
                try:
                    ds = parse_dirset(tok)
                except ValueError as e:
                    raise ParseError(str(e), l3, c3)
                if ds == 0:
                    raise ParseError("empty direction set not allowed", l3, c3)
                sets.append(ds)
            coop_seeds[idx] = sets
        else:
            raise ParseError(f"unknown directive {word!r}", ln, col)
    if not tiles:
        raise ParseError("no tile lines", 1)
    if seed is None:
        raise ParseError("missing seed line", 1)
    if seed not in tile_index:
        raise ParseError(f"seed names unknown tile {seed!r}", 1)
    standard = temperature is not None or bool(strengths)
    strength_free = bool(coop_seeds)
    if standard and strength_free:
        raise ParseError("document mixes strengths and coop lines", 1)
    if standard:
        if temperature is None:
            raise ParseError("missing temperature line", 1)
        table = [0] * len(glues)
        for label in glues.labels[1:]:
            if label.id not in strengths:
                raise ParseError(f"no strength declared for glue {label.name!r}", 1)
            table[label.id] = strengths[label.id]
        assignment = StrengthAssignment(tuple(table), temperature)
        return Tas(glues, tuple(tiles), tile_index[seed], assignment)
    fams = tuple(
        upward_closure(coop_seeds.get(i, ())) for i in range(len(tiles))
    )
    return SfTas(glues, tuple(tiles), tile_index[seed], fams)


def render_system(sys: Tas | SfTas) -> str:
    """Canonical text form of a system (stable under parse + render).

    Glues that appear on no tile are dropped, and strength lines follow the
    order of first appearance in the tile lines, so the output is identical
    however the system's glue table happened to be built.
    """
    lines = []
    names = {g.id: g.name for g in sys.glues.labels}
    used: list[int] = []
    for tile in sys.tiles:
        quad = " ".join(names[g] for g in tile.glues)
        lines.append(f"tile {tile.name} {quad}")
        for g in tile.glues:
            if g and g not in used:
                used.append(g)
    lines.append(f"seed {sys.tiles[sys.seed_tile].name}")
    if isinstance(sys, Tas):
        lines.append(f"temperature {sys.assignment.temperature}")
        for g in used:
            lines.append(f"strength {names[g]} {sys.assignment.strengths[g]}")
    else:
        for i, tile in enumerate(sys.tiles):
            fam = sys.coop[i]
            if fam:
                sets = " ".join(dirset_name(d) for d in minimal_elements(fam))
                lines.append(f"coop {tile.name} {sets}")
    return "\n".join(lines) + "\n"


def parse_shape(text: str) -> Shape:
    """Parse a shape document (coordinate list or '#'/'.' grid)."""
    lines = [l.rstrip("\n") for l in text.splitlines()]
    content = [(i + 1, l) for i, l in enumerate(lines) if l.strip()]
    if not content:
        raise ParseError("empty shape document", 1)
    if any("#" in l or "." in l for _, l in content):
        cells = set()
        height = len(content)
        for row, (ln, l) in enumerate(content):
            for x, ch in enumerate(l):
                if ch == "#":
                    cells.add((x, height - 1 - row))
                elif ch not in ". ":
                    raise ParseError(f"bad grid character {ch!r}", ln, x + 1)
        if not cells:
            raise ParseError("grid contains no filled cells", content[0][0])
        try:
            return Shape.of(cells)
        except ValueError as e:
            raise ParseError(str(e), content[0][0])
    cells = set()
    for ln, l in content:
        parts = l.split()
        if len(parts) != 2:
            raise ParseError("expected: <x> <y>", ln)
        x = _parse_int(parts[0], ln, 1, -(10**9), "x")
        y = _parse_int(parts[1], ln, 1, -(10**9), "y")
        cells.add((x, y))
    try:
        return Shape.of(cells)
    except ValueError as e:
        raise ParseError(str(e), content[0][0])


def render_shape(shape: Shape) -> str:
    """Canonical coordinate-list form, sorted, one cell per line."""
    return "\n".join(f"{x} {y}" for x, y in sorted(shape.cells)) + "\n"


def render_shape_grid(shape: Shape) -> str:
    """ASCII grid picture of a shape (display helper, not canonical)."""
    xs = [x for x, _ in shape.cells]
    ys = [y for _, y in shape.cells]
    rows = []
    for y in range(max(ys), min(ys) - 1, -1):
        rows.append(
            "".join(
                "#" if (x, y) in shape.cells else "."
                for x in range(min(xs), max(xs) + 1)
            )
        )
    return "\n".join(rows) + "\n"


def render_assembly(asm: Assembly, sys: Tas | SfTas) -> str:
    """Grid picture of an assembly with a tile-name legend."""
    glyphs = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789"
    cells = asm.to_dict()
    xs = [x for x, _ in cells]
    ys = [y for _, y in cells]
    rows = []
    for y in range(max(ys), min(ys) - 1, -1):
        row = []
        for x in range(min(xs), max(xs) + 1):
            ti = cells.get((x, y))
            row.append("." if ti is None else glyphs[ti % len(glyphs)])
        rows.append("".join(row))
    legend = " ".join(
        f"{glyphs[i % len(glyphs)]}={t.name}" for i, t in enumerate(sys.tiles)
    )
    return "\n".join(rows) + "\n# legend: " + legend + "\n"
