"""Core domain types for the abstract Tile Assembly Model (aTAM).

Tile types carry one glue label per side.  A strength assignment maps glue
labels to nonnegative integers and fixes a temperature; the cooperation set
of a tile is the family of side subsets whose glue strengths sum to at
least the temperature.  Cooperation families are upward closed, so they are
represented as 16-bit masks over the sixteen direction subsets, and every
family is generated by a unique antichain of minimal members.

Assemblies are finite connected placements of tiles on the integer grid.
An assembly is tau-stable when every cut of its binding graph (edges where
abutting glue labels are equal with positive strength) weighs at least tau.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

Coord = tuple[int, int]

# Direction subsets ("DirSets") are 4-bit masks, cooperation families are
# 16-bit masks over DirSets.  Plain ints keep membership tests O(1) and make
# equality canonical.
DirSet = int
CoopFamily = int


class Axis(enum.Enum):
    NS = "NS"
    EW = "EW"


class Direction(enum.IntEnum):
    """The four tile sides, in the canonical order N, E, S, W."""

    N = 0
    E = 1
    S = 2
    W = 3

    @property
    def vector(self) -> Coord:
        return _VECTORS[self]

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]

    @property
    def axis(self) -> Axis:
        return Axis.NS if self.value in (0, 2) else Axis.EW


_VECTORS: tuple[Coord, ...] = ((0, 1), (1, 0), (0, -1), (-1, 0))
_OPPOSITE = (Direction.S, Direction.W, Direction.N, Direction.E)

DIRECTIONS = tuple(Direction)

EMPTY_DIRSET: DirSet = 0
FULL_DIRSET: DirSet = 0b1111

# SUPERSETS[d] / SUBSETS[d]: 16-bit masks of the DirSets that contain /
# are contained in DirSet d.
SUPERSETS = tuple(
    sum(1 << e for e in range(16) if e & d == d) for d in range(16)
)
SUBSETS = tuple(
    sum(1 << e for e in range(16) if e & d == e) for d in range(16)
)

# All 15 nonempty DirSets as a family mask.
FULL_FAMILY: CoopFamily = 0xFFFE

#: Number of distinct valid cooperation families (upward-closed families of
#: nonempty DirSets, the empty family included).  This is one less than the
#: fourth Dedekind number 168: of the 168 antichains over subsets of a
#: 4-element set, only the antichain consisting of the empty set fails to
#: generate a valid family, because the empty side subset can never bind at
#: a positive temperature.
VALID_FAMILY_COUNT = 167


class ClosureViolationError(ValueError):
    """A family that was required to be upward closed is not."""


class GlueLookupError(KeyError):
    """A tile refers to a glue id with no entry in the strength map."""


def dirset(*dirs: Direction) -> DirSet:
    m = 0
    for d in dirs:
        m |= 1 << d
    return m


def dirset_dirs(ds: DirSet) -> tuple[Direction, ...]:
    return tuple(d for d in DIRECTIONS if ds >> d & 1)


def dirset_name(ds: DirSet) -> str:
    """Render a DirSet like 'NE' in N, E, S, W order ('0' when empty)."""
    if ds == 0:
        return "0"
    return "".join(d.name for d in dirset_dirs(ds))


def parse_dirset(text: str) -> DirSet:
    m = 0
    for ch in text:
        try:
            m |= 1 << Direction[ch.upper()]
        except KeyError:
            raise ValueError(f"bad direction {ch!r} in {text!r}") from None
    return m


def popcount(x: int) -> int:
    return bin(x).count("1")


def is_upward_closed(fam: CoopFamily) -> bool:
    """True iff fam (over nonempty DirSets) is closed under supersets."""
    if fam & 1:
        return False
    for d in range(1, 16):
        if fam >> d & 1 and fam & SUPERSETS[d] != SUPERSETS[d]:
            return False
    return True


def upward_closure(seed_sets) -> CoopFamily:
    """Smallest upward-closed family containing the seeds, empty set dropped."""
    fam = 0
    for d in seed_sets:
        fam |= SUPERSETS[d]
    return fam & ~1


def minimal_elements(fam: CoopFamily) -> list[DirSet]:
    """The antichain of subset-minimal members of an upward-closed family."""
    if not is_upward_closed(fam):
        raise ClosureViolationError(f"family {fam:#06x} is not upward closed")
    out = []
    for d in range(1, 16):
        if fam >> d & 1 and not fam & (SUBSETS[d] & ~(1 << d)):
            out.append(d)
    return out


def enumerate_coop_families() -> list[CoopFamily]:
    """All valid cooperation families, once each, in ascending mask order.

    Families are generated from their antichains of minimal members (a
    depth-first walk over antichains of nonempty DirSets), which yields each
    upward-closed family exactly once.  The count is VALID_FAMILY_COUNT.
    """
    fams = []

    def walk(start: int, fam: CoopFamily, blocked: int) -> None:
        fams.append(fam)
        for d in range(start, 16):
            if blocked >> d & 1:
                continue
            # adding d keeps the chosen sets an antichain: d must not be
            # comparable to any previous choice
            walk(d + 1, fam | SUPERSETS[d], blocked | SUBSETS[d] | SUPERSETS[d])

    walk(1, 0, 1)
    fams.sort()
    return fams


@dataclass(frozen=True)
class GlueLabel:
    id: int
    axis: Axis | None  # None only for the null glue
    name: str

    @property
    def is_null(self) -> bool:
        return self.id == 0


NULL_GLUE = GlueLabel(0, None, "-")


class GlueTable:
    """Interning table for glue labels.

    Id 0 is the reserved null glue with forced strength 0.  North/south
    glues and east/west glues are kept disjoint: interning the same name on
    both axes is an error.  Tables are built once and then treated as
    immutable.
    """

    def __init__(self) -> None:
        self._labels: list[GlueLabel] = [NULL_GLUE]
        self._by_name: dict[str, GlueLabel] = {}

    def intern(self, name: str, axis: Axis) -> GlueLabel:
        if name == NULL_GLUE.name:
            return NULL_GLUE
        hit = self._by_name.get(name)
        if hit is not None:
            if hit.axis != axis:
                raise ValueError(
                    f"glue {name!r} used on both {hit.axis.value} and {axis.value} sides"
                )
            return hit
        label = GlueLabel(len(self._labels), axis, name)
        self._labels.append(label)
        self._by_name[name] = label
        return label

    def get(self, name: str) -> GlueLabel | None:
        if name == NULL_GLUE.name:
            return NULL_GLUE
        return self._by_name.get(name)

    def label(self, glue_id: int) -> GlueLabel:
        return self._labels[glue_id]

    @property
    def labels(self) -> tuple[GlueLabel, ...]:
        return tuple(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GlueTable) and self._labels == other._labels

    def __repr__(self) -> str:
        names = ",".join(l.name for l in self._labels[1:])
        return f"GlueTable({names})"


@dataclass(frozen=True)
class TileType:
    """A unit square with a glue id per side, in N, E, S, W order."""

    name: str
    glues: tuple[int, int, int, int]

    def glue(self, d: Direction) -> int:
        return self.glues[d]


@dataclass(frozen=True)
class StrengthAssignment:
    """Glue strengths indexed by glue id, plus a temperature.

    strengths[0] is the null glue and must be 0; temperature must be >= 1.
    """

    strengths: tuple[int, ...]
    temperature: int

    def __post_init__(self) -> None:
        if not self.strengths or self.strengths[0] != 0:
            raise ValueError("null glue (id 0) must have strength 0")
        if any(s < 0 for s in self.strengths):
            raise ValueError("strengths must be nonnegative")
        if self.temperature < 1:
            raise ValueError("temperature must be a positive integer")

    def strength(self, glue_id: int) -> int:
        if glue_id >= len(self.strengths) or glue_id < 0:
            raise GlueLookupError(glue_id)
        return self.strengths[glue_id]


def cooperation_set(tile: TileType, a: StrengthAssignment) -> CoopFamily:
    """The family of side subsets of `tile` whose strengths reach tau."""
    side = tuple(a.strength(g) for g in tile.glues)
    tau = a.temperature
    fam = 0
    for ds in range(1, 16):
        total = 0
        for d in range(4):
            if ds >> d & 1:
                total += side[d]
        if total >= tau:
            fam |= 1 << ds
    return fam


def _connected(cells) -> bool:
    cells = set(cells)
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx, dy in _VECTORS:
            q = (x + dx, y + dy)
            if q in cells and q not in seen:
                seen.add(q)
                queue.append(q)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class Shape:
    """A finite nonempty set of grid cells, connected under 4-adjacency."""

    cells: frozenset[Coord]

    def __post_init__(self) -> None:
        if not _connected(self.cells):
            raise ValueError("shape must be nonempty and connected")

    @staticmethod
    def of(cells) -> "Shape":
        return Shape(frozenset(cells))

    @staticmethod
    def square(n: int) -> "Shape":
        return Shape(frozenset((x, y) for x in range(n) for y in range(n)))

    def translate(self, dx: int, dy: int) -> "Shape":
        return Shape(frozenset((x + dx, y + dy) for x, y in self.cells))

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, p: Coord) -> bool:
        return p in self.cells


@dataclass(frozen=True)
class Assembly:
    """A finite connected placement of tile type indices on the grid."""

    cells: tuple[tuple[Coord, int], ...]  # sorted by position

    def __post_init__(self) -> None:
        if not _connected(p for p, _ in self.cells):
            raise ValueError("assembly domain must be nonempty and connected")

    @staticmethod
    def from_dict(tiles: dict[Coord, int]) -> "Assembly":
        return Assembly(tuple(sorted(tiles.items())))

    def to_dict(self) -> dict[Coord, int]:
        return dict(self.cells)

    @property
    def domain(self) -> frozenset[Coord]:
        return frozenset(p for p, _ in self.cells)

    def tile_at(self, p: Coord) -> int | None:
        return self.to_dict().get(p)

    def __len__(self) -> int:
        return len(self.cells)


def _validate_tiles(glues: GlueTable, tiles: tuple[TileType, ...]) -> None:
    for tile in tiles:
        for d in DIRECTIONS:
            g = tile.glues[d]
            if g == 0:
                continue
            if g >= len(glues):
                raise ValueError(f"tile {tile.name}: glue id {g} not interned")
            axis = glues.label(g).axis
            if axis != d.axis:
                raise ValueError(
                    f"tile {tile.name}: {axis.value} glue "
                    f"{glues.label(g).name!r} on its {d.name} side"
                )


@dataclass(frozen=True)
class Tas:
    """A seeded tile assembly system with integer strengths."""

    glues: GlueTable
    tiles: tuple[TileType, ...]
    seed_tile: int
    assignment: StrengthAssignment
    seed_pos: Coord = (0, 0)

    def __post_init__(self) -> None:
        if not 0 <= self.seed_tile < len(self.tiles):
            raise ValueError("seed tile index out of range")
        _validate_tiles(self.glues, self.tiles)

    @property
    def temperature(self) -> int:
        return self.assignment.temperature

    def coop(self, tile_index: int) -> CoopFamily:
        return cooperation_set(self.tiles[tile_index], self.assignment)

    def sf_view(self) -> "SfTas":
        """Strength-free view: same tiles and seed, derived families."""
        fams = tuple(cooperation_set(t, self.assignment) for t in self.tiles)
        return SfTas(self.glues, self.tiles, self.seed_tile, fams, self.seed_pos)


@dataclass(frozen=True)
class SfTas:
    """A strength-free system: per-tile cooperation families, no strengths."""

    glues: GlueTable
    tiles: tuple[TileType, ...]
    seed_tile: int
    coop: tuple[CoopFamily, ...]
    seed_pos: Coord = (0, 0)

    def __post_init__(self) -> None:
        if not 0 <= self.seed_tile < len(self.tiles):
            raise ValueError("seed tile index out of range")
        _validate_tiles(self.glues, self.tiles)
        if len(self.coop) != len(self.tiles):
            raise ValueError("one cooperation family per tile type required")
        for i, fam in enumerate(self.coop):
            if not is_upward_closed(fam):
                raise ClosureViolationError(
                    f"cooperation family of tile {i} is not upward closed"
                )


def binding_edges(
    asm: Assembly, tiles: tuple[TileType, ...], a: StrengthAssignment
) -> list[tuple[Coord, Coord, int]]:
    """Weighted edges of the binding graph.

    Two adjacent tiles interact iff the glue labels on their abutting sides
    are equal, non-null, and have positive strength.
    """
    grid = asm.to_dict()
    edges = []
    for p, ti in asm.cells:
        t = tiles[ti]
        for d in (Direction.N, Direction.E):  # visit each adjacency once
            q = (p[0] + d.vector[0], p[1] + d.vector[1])
            tj = grid.get(q)
            if tj is None:
                continue
            g = t.glues[d]
            if g and tiles[tj].glues[d.opposite] == g:
                w = a.strength(g)
                if w > 0:
                    edges.append((p, q, w))
    return edges


def _min_cut_exhaustive(n: int, edges: list[tuple[int, int, int]]) -> int:
    """Minimum cut weight by enumerating all 2^(n-1) - 1 bipartitions."""
    best = None
    for mask in range(1, 1 << (n - 1)):
        side = mask << 1  # vertex 0 stays on side zero
        w = 0
        for u, v, c in edges:
            if (side >> u & 1) != (side >> v & 1):
                w += c
        if best is None or w < best:
            best = w
            if best == 0:
                break
    return best if best is not None else 0


def _max_flow(n: int, cap: dict[tuple[int, int], int], s: int, t: int) -> int:
    """Edmonds-Karp max flow on a small directed capacity map."""
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for (u, v) in cap:
        adj[u].append(v)
    flow = 0
    while True:
        parent = {s: s}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return flow
        # find bottleneck along the path and augment
        bottleneck = None
        v = t
        while v != s:
            u = parent[v]
            c = cap[(u, v)]
            bottleneck = c if bottleneck is None else min(bottleneck, c)
            v = u
        v = t
        while v != s:
            u = parent[v]
            cap[(u, v)] -= bottleneck
            cap[(v, u)] += bottleneck
            v = u
        flow += bottleneck


def _min_cut_maxflow(n: int, edges: list[tuple[int, int, int]]) -> int:
    """Global min cut as the minimum of n-1 s-t max flows from vertex 0."""
    best = None
    for t in range(1, n):
        cap: dict[tuple[int, int], int] = {}
        for u, v, w in edges:
            cap[(u, v)] = cap.get((u, v), 0) + w
            cap[(v, u)] = cap.get((v, u), 0) + w
        f = _max_flow(n, cap, 0, t)
        if best is None or f < best:
            best = f
            if best == 0:
                break
    return best if best is not None else 0


#: Assemblies at or below this size use exhaustive cut enumeration by default.
EXHAUSTIVE_CUT_LIMIT = 12


def min_cut_weight(
    asm: Assembly,
    tiles: tuple[TileType, ...],
    a: StrengthAssignment,
    method: str = "auto",
) -> int | None:
    """Weight of the minimum cut of the binding graph; None for one tile.

    method: 'auto' picks exhaustive enumeration up to EXHAUSTIVE_CUT_LIMIT
    tiles and max-flow above; 'exhaustive' and 'maxflow' force one path.
    """
    n = len(asm)
    if n == 1:
        return None
    index = {p: i for i, (p, _) in enumerate(asm.cells)}
    edges = [(index[p], index[q], w) for p, q, w in binding_edges(asm, tiles, a)]
    if method == "auto":
        method = "exhaustive" if n <= EXHAUSTIVE_CUT_LIMIT else "maxflow"
    if method == "exhaustive":
        return _min_cut_exhaustive(n, edges)
    if method == "maxflow":
        return _min_cut_maxflow(n, edges)
    raise ValueError(f"unknown min-cut method {method!r}")


def is_tau_stable(
    asm: Assembly,
    tiles: tuple[TileType, ...],
    a: StrengthAssignment,
    method: str = "auto",
) -> bool:
    """True iff every cut of the binding graph weighs at least tau."""
    cut = min_cut_weight(asm, tiles, a, method)
    return True if cut is None else cut >= a.temperature
