"""Shared generators and independent brute-force oracles for the tests.

The oracles here deliberately do not reuse the production algorithms:
family enumeration is a raw 2^15 filter, stability is full cut
enumeration, rational feasibility is Fourier-Motzkin elimination, and
integer feasibility is a bounded grid scan.
"""

from __future__ import annotations

import random
from math import gcd

import numpy as np

from atamtools.core import (
    Assembly,
    Axis,
    GlueTable,
    SfTas,
    Shape,
    StrengthAssignment,
    Tas,
    TileType,
    upward_closure,
)
from atamtools.synth import IneqSystem, Sense


# ---------------------------------------------------------------- families

SUP = tuple(sum(1 << e for e in range(16) if e & d == d) for d in range(16))


def brute_force_families():
    """All upward-closed families over nonempty direction subsets, by
    filtering every one of the 2^15 candidate masks."""
    out = []
    for fam in range(0, 1 << 16, 2):  # bit 0 (empty set) always clear
        ok = True
        for d in range(1, 16):
            if fam >> d & 1 and fam & SUP[d] != SUP[d]:
                ok = False
                break
        if ok:
            out.append(fam)
    return out


# ------------------------------------------------------------- random systems

def random_tas(
    rng: random.Random,
    max_tiles: int = 8,
    max_strength: int = 20,
    max_tau: int = 20,
    glues_per_axis: int = 4,
    null_bias: float = 0.25,
) -> Tas:
    k = rng.randint(1, max_tiles)
    g_ns = rng.randint(1, glues_per_axis)
    g_ew = rng.randint(1, glues_per_axis)
    table = GlueTable()
    ns = [table.intern(f"n{i}", Axis.NS).id for i in range(g_ns)]
    ew = [table.intern(f"e{i}", Axis.EW).id for i in range(g_ew)]

    def pick(pool):
        if rng.random() < null_bias:
            return 0
        return rng.choice(pool)

    tiles = tuple(
        TileType(f"t{i}", (pick(ns), pick(ew), pick(ns), pick(ew)))
        for i in range(k)
    )
    strengths = tuple([0] + [rng.randint(0, max_strength) for _ in range(len(table) - 1)])
    tau = rng.randint(1, max_tau)
    return Tas(table, tiles, rng.randrange(k), StrengthAssignment(strengths, tau))


def random_assembly(rng: random.Random, tas: Tas, max_cells: int) -> Assembly:
    """A random connected placement of the system's tiles (not necessarily
    stable or producible); exercises the stability checkers."""
    n = rng.randint(1, max_cells)
    cells = {(0, 0): rng.randrange(len(tas.tiles))}
    while len(cells) < n:
        x, y = rng.choice(list(cells))
        dx, dy = rng.choice(((0, 1), (1, 0), (0, -1), (-1, 0)))
        cells.setdefault((x + dx, y + dy), rng.randrange(len(tas.tiles)))
    return Assembly.from_dict(cells)


# ------------------------------------------------------------ stability oracle

def min_cut_oracle(asm: Assembly, tiles, a) -> int | None:
    """Minimum binding-graph cut weight by direct bipartition enumeration,
    written independently of the production code."""
    cells = list(asm.to_dict().items())
    n = len(cells)
    if n == 1:
        return None
    index = {p: i for i, (p, _) in enumerate(cells)}
    grid = dict(cells)
    edges = []
    for (x, y), ti in cells:
        for d, (dx, dy) in ((0, (0, 1)), (1, (1, 0))):
            q = (x + dx, y + dy)
            if q not in grid:
                continue
            tj = grid[q]
            opposite = {0: 2, 1: 3}[d]
            g1 = tiles[ti].glues[d]
            g2 = tiles[tj].glues[opposite]
            if g1 and g1 == g2 and a.strengths[g1] > 0:
                edges.append((index[(x, y)], index[q], a.strengths[g1]))
    best = None
    for mask in range(1, 1 << (n - 1)):
        w = 0
        side = mask << 1  # cell 0 stays on side zero, the mask side is nonempty
        for u, v, c in edges:
            if (side >> u & 1) != (side >> v & 1):
                w += c
        if best is None or w < best:
            best = w
    return best


# --------------------------------------------------- rational feasibility (FM)

def _normalize(row):
    coeffs, b = row
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    g = gcd(g, abs(b))
    if g > 1:
        coeffs = tuple(c // g for c in coeffs)
        b = b // g if b >= 0 else -((-b) // g)
    return coeffs, b


def fm_feasible(std_rows, n) -> bool:
    """Fourier-Motzkin elimination over a.x >= b rows with x >= 0.

    Integer arithmetic throughout; rows are normalized and deduplicated at
    every elimination step.  Exact for any dimension, practical for small n.
    """
    rows = set()
    for a, b in std_rows:
        rows.add(_normalize((tuple(a), b)))
    for j in range(n):
        unit = tuple(1 if i == j else 0 for i in range(n))
        rows.add((unit, 0))
    for j in reversed(range(n)):
        pos, neg, rest = [], [], set()
        for a, b in rows:
            if a[j] > 0:
                pos.append((a, b))
            elif a[j] < 0:
                neg.append((a, b))
            else:
                rest.add((a, b))
        for ap, bp in pos:
            for an, bn in neg:
                mp, mn = -an[j], ap[j]
                combo = tuple(mp * x + mn * y for x, y in zip(ap, an))
                rest.add(_normalize((combo, mp * bp + mn * bn)))
        rows = rest
    # only constant rows remain: 0 >= b
    return all(b <= 0 for _, b in rows)


def system_std_rows(system: IneqSystem):
    """IneqSystem rows in a.x >= b form over (s_1..s_u, tau)."""
    out = []
    for row in system.rows:
        if row.sense is Sense.GE0:
            out.append((row.coeffs + (-1,), 0))
        else:
            out.append((tuple(-c for c in row.coeffs) + (1,), 1))
    return out


def fm_system_feasible(system: IneqSystem) -> bool:
    return fm_feasible(system_std_rows(system), system.num_vars)


# ----------------------------------------------- bounded integer search oracle

def bounded_integer_solution(system: IneqSystem, tau_max: int):
    """Smallest-temperature integer solution with strengths in [0, tau],
    or None.  Complete for any strength cap >= tau_max because values above
    tau act exactly like tau in every row.  Vectorized scan."""
    u = system.num_glues
    rows = system.reduced_rows()
    for tau in range(1, tau_max + 1):
        grids = np.indices((tau + 1,) * u, dtype=np.int16).reshape(u, -1) if u else None
        count = (tau + 1) ** u
        ok = np.ones(count, dtype=bool)
        for row in rows:
            total = np.zeros(count, dtype=np.int32)
            for i, c in enumerate(row.coeffs):
                if c:
                    total += c * grids[i].astype(np.int32)
            if row.sense is Sense.GE0:
                ok &= total >= tau
            else:
                ok &= total <= tau - 1
            if not ok.any():
                break
        if ok.any():
            idx = int(np.nonzero(ok)[0][0])
            values = [int(grids[i][idx]) for i in range(u)] if u else []
            return tuple(values) + (tau,)
    return None


# ------------------------------------------- bounded-strength square oracle

def standard_patterns(k: int, labels_per_axis: int):
    """Restricted-growth glue placements for the bounded-strength oracle.

    Independent reimplementation (not the search generator): tile-major,
    N E S W order; a fresh axis label may appear only after all smaller
    ones.  NS ids are 1..g, EW ids g+1..2g; the seed is tile 0, which is
    complete because any system can put its seed first before relabeling.
    """
    g = labels_per_axis
    slots = [(t, d) for t in range(k) for d in range(4)]

    def rec(i, quads, used_ns, used_ew):
        if i == len(slots):
            yield tuple(tuple(q) for q in quads)
            return
        t, d = slots[i]
        if d in (0, 2):
            options = [0] + list(range(1, min(used_ns + 1, g) + 1))
        else:
            options = [0] + [g + j for j in range(1, min(used_ew + 1, g) + 1)]
        for c in options:
            quads[t][d] = c
            nns, new = used_ns, used_ew
            if c:
                if d in (0, 2):
                    nns = max(used_ns, c)
                else:
                    new = max(used_ew, c - g)
            yield from rec(i + 1, quads, nns, new)
            quads[t][d] = 0

    yield from rec(0, [[0, 0, 0, 0] for _ in range(k)], 0, 0)


def _oracle_glue_table(g: int) -> GlueTable:
    table = GlueTable()
    for i in range(g):
        table.intern(f"p{i + 1}", Axis.NS)
    for i in range(g):
        table.intern(f"q{i + 1}", Axis.EW)
    return table


def _unique_by_exploration(sf: SfTas, targets) -> bool:
    from atamtools.sim import explore_all

    budget = len(next(iter(targets))) + 1
    terminals, truncated = explore_all(sf, budget)
    if truncated or len(terminals) != 1:
        return False
    return terminals[0].domain in targets


def bounded_tas_achieves(k: int, targets, strength_cap: int = 4, tau_max: int = 4):
    """Does some standard system with k tile types, strengths <= cap and
    temperature <= tau_max uniquely self-assemble one of the targets?

    Exhaustive over glue placements modulo renaming and over all strength
    assignments (values above tau behave exactly like tau, so scanning
    [0, tau] per glue covers every cap >= tau_max).  Verdicts come from
    full exploration of the attachment relation, not from unique_shape.
    """
    assert strength_cap >= tau_max
    g = 2 * k
    table = _oracle_glue_table(g)
    targets = {frozenset(t) for t in targets}
    dirsets = [
        [d for d in range(4) if ds >> d & 1] for ds in range(16)
    ]
    for quads in standard_patterns(k, g):
        used = sorted({gid for q in quads for gid in q if gid})
        u = len(used)
        column = {gid: i for i, gid in enumerate(used)}
        seen = set()
        for tau in range(1, tau_max + 1):
            if u:
                grids = np.indices((tau + 1,) * u, dtype=np.int8).reshape(u, -1)
                count = grids.shape[1]
            else:
                grids, count = None, 1
            famcode = np.zeros(count, dtype=np.int64)
            for t, quad in enumerate(quads):
                fam = np.zeros(count, dtype=np.int32)
                side = [
                    grids[column[gid]].astype(np.int16) if gid else None
                    for gid in quad
                ]
                for ds in range(1, 16):
                    total = np.zeros(count, dtype=np.int16)
                    for d in dirsets[ds]:
                        if side[d] is not None:
                            total = total + side[d]
                    fam |= (total >= tau).astype(np.int32) << ds
                famcode = famcode << 16 | fam
            for code in np.unique(famcode):
                code = int(code)
                if code in seen:
                    continue
                seen.add(code)
                fams = []
                for t in range(k - 1, -1, -1):
                    fams.append((code >> (16 * t)) & 0xFFFF)
                sf = SfTas(
                    table,
                    tuple(TileType(f"t{i}", q) for i, q in enumerate(quads)),
                    0,
                    tuple(fams),
                )
                if _unique_by_exploration(sf, targets):
                    return True
    return False


def square_targets(n: int):
    base = {(x, y) for x in range(n) for y in range(n)}
    return [
        frozenset((x - px, y - py) for x, y in base) for px, py in sorted(base)
    ]


# --------------------------------------------------------------- wired shapes

def wired_shape_system(shape: Shape, spanning_tree_only: bool = False) -> Tas:
    """A position-unique system that uniquely self-assembles `shape`.

    One tile type per cell; every adjacency inside the shape (or only a
    spanning tree of them) gets its own glue of full strength.  The seed is
    the lexicographically smallest cell, placed at its own coordinate.
    """
    cells = sorted(shape.cells)
    index = {p: i for i, p in enumerate(cells)}
    table = GlueTable()
    adj = []
    for (x, y) in cells:
        for d, (dx, dy), axis in ((0, (0, 1), Axis.NS), (1, (1, 0), Axis.EW)):
            q = (x + dx, y + dy)
            if q in index:
                adj.append(((x, y), q, d, axis))
    if spanning_tree_only:
        joined = {cells[0]}
        keep = []
        remaining = list(adj)
        while len(joined) < len(cells):
            for e in remaining:
                p, q, d, axis = e
                if (p in joined) != (q in joined):
                    keep.append(e)
                    joined.add(p)
                    joined.add(q)
                    remaining.remove(e)
                    break
        adj = keep
    quads = {p: [0, 0, 0, 0] for p in cells}
    for i, (p, q, d, axis) in enumerate(adj):
        g = table.intern(f"g{i}", axis).id
        quads[p][d] = g
        quads[q][{0: 2, 1: 3}[d]] = g
    tiles = tuple(
        TileType(f"c{i}", tuple(quads[p])) for i, p in enumerate(cells)
    )
    strengths = tuple([0] + [1] * (len(table) - 1))
    return Tas(table, tiles, 0, StrengthAssignment(strengths, 1), cells[0])


# ------------------------------------------------------------- simple builders

def row_system(length: int, reuse_glue: bool = False) -> Tas:
    """Seed plus east-growing tiles; reuse_glue makes the line infinite."""
    table = GlueTable()
    if reuse_glue:
        x = table.intern("x", Axis.EW).id
        tiles = (
            TileType("S", (0, x, 0, 0)),
            TileType("A", (0, x, 0, x)),
        )
    else:
        ids = [table.intern(f"x{i}", Axis.EW).id for i in range(length - 1)]
        tiles = [TileType("S", (0, ids[0] if ids else 0, 0, 0))]
        for i in range(1, length):
            east = ids[i] if i < length - 1 else 0
            tiles.append(TileType(f"T{i}", (0, east, 0, ids[i - 1])))
        tiles = tuple(tiles)
    strengths = tuple([0] + [1] * (len(table) - 1))
    return Tas(table, tiles, 0, StrengthAssignment(strengths, 1))


def competing_system() -> Tas:
    """Two tile types fight for the cell east of the seed."""
    table = GlueTable()
    x = table.intern("x", Axis.EW).id
    y = table.intern("y", Axis.EW).id
    tiles = (
        TileType("S", (0, x, 0, 0)),
        TileType("A", (0, 0, 0, x)),
        TileType("B", (0, y, 0, x)),
    )
    return Tas(table, tiles, 0, StrengthAssignment((0, 1, 0), 1))


def downstream_rogue_system() -> Tas:
    """Length-3 row plus a rogue tile whose only support lies downstream.

    The rogue R matches the middle cell only through its east side, but the
    east neighbor can never be present while the middle cell is empty, so
    the system still uniquely assembles the row.
    """
    table = GlueTable()
    x = table.intern("x", Axis.EW).id
    y = table.intern("y", Axis.EW).id
    z = table.intern("z", Axis.EW).id
    tiles = (
        TileType("S", (0, x, 0, 0)),
        TileType("A", (0, y, 0, x)),
        TileType("B", (0, 0, 0, y)),
        TileType("R", (0, y, 0, z)),
    )
    return Tas(table, tiles, 0, StrengthAssignment((0, 1, 1, 1), 1))


def coop_square_system() -> Tas:
    """Temperature-2 corner fill: the last cell of the 2x2 square needs two
    cooperating strength-1 glues."""
    table = GlueTable()
    a = table.intern("a", Axis.NS).id
    b = table.intern("b", Axis.EW).id
    c = table.intern("c", Axis.EW).id
    d = table.intern("d", Axis.NS).id
    tiles = (
        TileType("S", (a, b, 0, 0)),
        TileType("E", (d, 0, 0, b)),
        TileType("N", (0, c, a, 0)),
        TileType("C", (0, 0, d, c)),
    )
    strengths = (0, 2, 2, 1, 1)
    return Tas(table, tiles, 0, StrengthAssignment(strengths, 2))


def sf_from_masks(tas_like: Tas, masks) -> SfTas:
    return SfTas(
        tas_like.glues,
        tas_like.tiles,
        tas_like.seed_tile,
        tuple(masks),
        tas_like.seed_pos,
    )


# ------------------------------------------------------------------ the corpus

def unique_shape_corpus():
    """A 40-entry list of (name, system, shape) cases for oracle testing,
    mixing directed systems, escapes, competitions, deadlocks and exotic
    strength-free families."""
    entries = []

    def add(name, sys, cells):
        entries.append((name, sys, frozenset(cells)))

    single = row_system(1)
    add("single-true", single, {(0, 0)})
    add("single-wrong-shape", single, {(0, 0), (1, 0)})

    for length in (2, 3, 4, 5):
        sys = row_system(length)
        row = {(i, 0) for i in range(length)}
        add(f"row{length}-true", sys, row)
        add(f"row{length}-short", sys, {(i, 0) for i in range(length + 1)})

    infinite = row_system(0, reuse_glue=True)
    add("line-escape-3", infinite, {(0, 0), (1, 0), (2, 0)})
    add("line-escape-1", infinite, {(0, 0)})

    add("competing", competing_system(), {(0, 0), (1, 0)})
    add("rogue-downstream", downstream_rogue_system(), {(0, 0), (1, 0), (2, 0)})
    add("coop-square", coop_square_system(), {(0, 0), (1, 0), (0, 1), (1, 1)})
    add("coop-square-wrong", coop_square_system(), {(0, 0), (1, 0), (0, 1)})

    shapes = [
        Shape.square(2),
        Shape.square(3),
        Shape.square(4),
        Shape.of({(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)}),  # L
        Shape.of({(0, 0), (1, 0), (2, 0), (1, 1), (1, 2)}),  # T
        Shape.of({(x, y) for x in range(5) for y in range(4)}),  # 5x4 = 20
        Shape.of({(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)}),  # staircase
    ]
    for i, shape in enumerate(shapes):
        sys = wired_shape_system(shape)
        add(f"wired{i}-true", sys, shape.cells)
        tree = wired_shape_system(shape, spanning_tree_only=True)
        add(f"tree{i}-true", tree, shape.cells)

    # corrupted wiring: drop the last tile's only bond
    broken = wired_shape_system(shapes[0])
    tiles = list(broken.tiles)
    tiles[-1] = TileType(tiles[-1].name, (0, 0, 0, 0))
    broken = Tas(broken.glues, tuple(tiles), 0, broken.assignment, broken.seed_pos)
    add("wired-broken", broken, shapes[0].cells)

    # duplicated competitor for one cell of the wired square
    dup = wired_shape_system(shapes[0])
    tiles = dup.tiles + (TileType("dup", dup.tiles[-1].glues),)
    dup = Tas(dup.glues, tiles, 0, dup.assignment, dup.seed_pos)
    add("wired-competition", dup, shapes[0].cells)

    # strength-free exotics
    base = row_system(2)
    add("sf-empty-family", sf_from_masks(base, [0, 0]), {(0, 0)})
    need_all = upward_closure([0b1111])
    add("sf-need-all-sides", sf_from_masks(base, [0, need_all]), {(0, 0)})
    west_only = upward_closure([0b1000])
    add("sf-west-only", sf_from_masks(base, [0, west_only]), {(0, 0), (1, 0)})

    # deadlocked cooperation: corner tile demands three sides in a 2x2
    coop = coop_square_system()
    masks = [coop.coop(i) for i in range(4)]
    masks[3] = upward_closure([0b1110])  # E, S, W all required
    add("sf-deadlock", sf_from_masks(coop, masks), coop_square_cells())

    # relaxed corner: single matching side suffices, still no escape
    masks = [coop.coop(i) for i in range(4)]
    masks[3] = upward_closure([0b0100, 0b1000])  # S or W alone
    add("sf-relaxed-corner", sf_from_masks(coop, masks), coop_square_cells())

    # seed placed outside the asked-for translate
    shifted = wired_shape_system(shapes[0])
    add(
        "wired-shifted",
        shifted,
        {(x + 5, y + 5) for x, y in shapes[0].cells},
    )

    # larger wired rectangle, 18 cells
    rect = Shape.of({(x, y) for x in range(6) for y in range(3)})
    add("wired-rect18", wired_shape_system(rect), rect.cells)

    nn = gen_witness_entry()
    add("witness-seed-only", nn, {(0, 0)})

    assert len(entries) == 40, len(entries)
    return entries


def coop_square_cells():
    return {(0, 0), (1, 0), (0, 1), (1, 1)}


def gen_witness_entry():
    from atamtools.witness import gen_witness

    return gen_witness(2).sf
