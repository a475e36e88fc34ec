"""Seeded assembly dynamics and the unique-shape decision procedure.

Both standard and strength-free systems are simulated through the same
per-tile cooperation family view: a tile may attach at an empty position
when the set of sides whose glues match an existing neighbor is a member of
its family.  Matching requires equal non-null labels; the null glue never
matches anything.  For a standard system this reproduces the raw
strength-sum dynamics exactly, because a side set and its positive-strength
restriction have equal sums.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .core import (
    _OPPOSITE,
    _VECTORS,
    Assembly,
    Coord,
    SfTas,
    Tas,
    TileType,
)


class HaltReason(enum.Enum):
    TERMINAL = "terminal"
    OVERFLOW = "overflow"


@dataclass(frozen=True)
class AttachEvent:
    pos: Coord
    tile: int
    matched: int  # DirSet of sides whose glue matched a neighbor


def behavior(sys: Tas | SfTas) -> SfTas:
    """The per-tile cooperation family view of a system."""
    if isinstance(sys, SfTas):
        return sys
    return sys.sf_view()


def matched_mask(
    tiles: tuple[TileType, ...], grid: dict, pos: Coord, tile: TileType
) -> int:
    """Sides of `tile` at `pos` whose non-null glue equals the abutting glue."""
    m = 0
    x, y = pos
    for d in range(4):
        dx, dy = _VECTORS[d]
        ti = grid.get((x + dx, y + dy))
        if ti is None:
            continue
        g = tile.glues[d]
        if g and tiles[ti].glues[_OPPOSITE[d]] == g:
            m |= 1 << d
    return m


def _boundary(grid: dict) -> list[Coord]:
    seen = set()
    for x, y in grid:
        for dx, dy in _VECTORS:
            q = (x + dx, y + dy)
            if q not in grid:
                seen.add(q)
    return sorted(seen)


def _events(tiles: tuple[TileType, ...], grid: dict, query) -> list[AttachEvent]:
    """Frontier events in deterministic order (position, then tile index).

    `query(tile_index, matched_mask)` decides family membership; concrete
    dynamics pass a mask lookup, the search passes a symbolic oracle.
    """
    out = []
    for pos in _boundary(grid):
        for ti, tile in enumerate(tiles):
            m = matched_mask(tiles, grid, pos, tile)
            if m and query(ti, m):
                out.append(AttachEvent(pos, ti, m))
    return out


def _family_query(b: SfTas):
    coop = b.coop
    return lambda ti, m: bool(coop[ti] >> m & 1)


def frontier(asm: Assembly | dict, sys: Tas | SfTas) -> list[AttachEvent]:
    """All stable attachment events on the given assembly."""
    b = behavior(sys)
    grid = asm.to_dict() if isinstance(asm, Assembly) else dict(asm)
    return _events(b.tiles, grid, _family_query(b))


def grow_greedy(sys: Tas | SfTas, max_cells: int) -> tuple[Assembly, HaltReason]:
    """Repeatedly apply the first frontier event.

    Halts with TERMINAL when the frontier is empty, or with OVERFLOW when
    the next attachment would exceed max_cells (the returned assembly then
    has exactly max_cells tiles at most).
    """
    if max_cells < 1:
        raise ValueError("max_cells must be positive")
    b = behavior(sys)
    grid = {b.seed_pos: b.seed_tile}
    query = _family_query(b)
    while True:
        events = _events(b.tiles, grid, query)
        if not events:
            return Assembly.from_dict(grid), HaltReason.TERMINAL
        if len(grid) + 1 > max_cells:
            return Assembly.from_dict(grid), HaltReason.OVERFLOW
        ev = events[0]
        grid[ev.pos] = ev.tile


def explore_all(
    sys: Tas | SfTas, cell_budget: int
) -> tuple[tuple[Assembly, ...], bool]:
    """Exhaustive closure of the one-step attachment relation.

    Returns every reachable terminal assembly, plus a flag that is set when
    some branch would have grown past cell_budget (terminal assemblies past
    the budget are then unaccounted for).  Exponential in general; this is
    the brute-force oracle for unique_shape on small systems.
    """
    if cell_budget < 1:
        raise ValueError("cell_budget must be positive")
    b = behavior(sys)
    query = _family_query(b)
    start = frozenset({(b.seed_pos, b.seed_tile)})
    seen = {start}
    queue = deque([start])
    terminals = []
    truncated = False
    while queue:
        state = queue.popleft()
        grid = dict(state)
        events = _events(b.tiles, grid, query)
        if not events:
            terminals.append(Assembly.from_dict(grid))
            continue
        if len(state) + 1 > cell_budget:
            truncated = True
            continue
        for ev in events:
            child = state | {(ev.pos, ev.tile)}
            if child not in seen:
                seen.add(child)
                queue.append(child)
    terminals.sort(key=lambda a: a.cells)
    return tuple(terminals), truncated


def _unique_shape_core(
    tiles: tuple[TileType, ...],
    seed_tile: int,
    seed_pos: Coord,
    target: frozenset[Coord],
    query,
) -> bool:
    """Decision core for unique self-assembly of `target`.

    Polynomial and exact:

    1. Grow greedily from the seed.  A frontier event outside the target is
       a reachable escape and two events at one position are a reachable
       divergence; both refute uniqueness.  The growth must halt terminal
       with domain exactly the target, giving the candidate assembly alpha.
    2. For every non-seed position p, regrow greedily while skipping
       attachments at p.  Every event seen must agree with alpha (an event
       disagreeing with alpha is a producible divergence) and stay inside
       the target.  Once no applicable event remains, a tile other than
       alpha(p) whose matched sides at p form a family member would be a
       producible divergence at p, refuting uniqueness.

    Every attachment made here is producible, and any producible assembly
    that avoids p embeds in the regrowth result (matched side sets only
    grow as an assembly grows, and families are upward closed), so step 2
    accepts exactly the directed systems whose terminal covers the target.

    `query(tile_index, matched_mask)` supplies family membership, letting
    the same core run concretely (mask lookup) or symbolically (search).
    """
    if seed_pos not in target:
        return False
    grid = {seed_pos: seed_tile}
    while True:
        events = _events(tiles, grid, query)
        last_pos = None
        for ev in events:
            if ev.pos not in target:
                return False
            if ev.pos == last_pos:
                return False  # two tile types attachable at one empty cell
            last_pos = ev.pos
        if not events:
            break
        grid[events[0].pos] = events[0].tile
    if len(grid) != len(target):
        return False
    alpha = grid
    for p, ti in alpha.items():
        if p == seed_pos:
            continue
        m = matched_mask(tiles, alpha, p, tiles[ti])
        if not (m and query(ti, m)):
            return False
    for p in sorted(target):
        if p == seed_pos:
            continue
        grid = {seed_pos: seed_tile}
        while True:
            events = _events(tiles, grid, query)
            step = None
            for ev in events:
                if ev.pos not in target:
                    return False
                if alpha[ev.pos] != ev.tile:
                    return False
                if ev.pos != p and step is None:
                    step = ev
            if step is None:
                break
            grid[step.pos] = step.tile
        for ti in range(len(tiles)):
            if ti == alpha[p]:
                continue
            m = matched_mask(tiles, grid, p, tiles[ti])
            if m and query(ti, m):
                return False
    return True


def unique_shape(sys: Tas | SfTas, shape) -> bool:
    """True iff the system is directed and its unique terminal assembly
    covers exactly the given shape (a Shape or an iterable of cells)."""
    b = behavior(sys)
    cells = frozenset(shape.cells if hasattr(shape, "cells") else shape)
    return _unique_shape_core(
        b.tiles, b.seed_tile, b.seed_pos, cells, _family_query(b)
    )
