"""Minimal tile set search: smallest system uniquely assembling a shape.

Candidates are strength-free systems: glue placements drawn from a bounded
alphabet per axis plus per-tile cooperation families.  Glue placements are
enumerated in a canonical first-use labeling (which quotients out glue
renaming within each axis, with the seed fixed as tile 0), and for each
placement the family space is explored symbolically: the unique-shape
procedure runs against a partial family oracle that branches on each
membership it actually consults.  Each accepting branch yields interval
constraints (forced members, forced non-members) that cover a whole block
of family vectors at once, and each covered vector is guaranteed to pass
unique-shape without rerunning it.  Candidates that pass are then fed to
the strength synthesizer; the first implementable one, in deterministic
order, is minimal up to isomorphism.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .core import (
    SUBSETS,
    SUPERSETS,
    Axis,
    GlueTable,
    SfTas,
    Shape,
    Tas,
    TileType,
    enumerate_coop_families,
)
from .sim import _events, _unique_shape_core, unique_shape
from .synth import SynthResult, synthesize


@lru_cache(maxsize=1)
def _families() -> tuple[int, ...]:
    return tuple(enumerate_coop_families())


@lru_cache(maxsize=None)
def _null_consistent_families(null_mask: int) -> tuple[int, ...]:
    """Families that some strength assignment can realize for a tile whose
    sides in null_mask carry the null glue.

    Null sides contribute nothing to any sum, so an implementable family
    contains a side set iff it contains the set minus the null sides.
    """
    keep = []
    for fam in _families():
        ok = True
        for ds in range(1, 16):
            if (fam >> ds & 1) != (fam >> (ds & ~null_mask) & 1) and ds & ~null_mask:
                ok = False
                break
            if ds & null_mask and not ds & ~null_mask and fam >> ds & 1:
                ok = False  # member consisting of null sides only
                break
        if ok:
            keep.append(fam)
    return tuple(keep)


def _glue_table(g_ns: int, g_ew: int) -> GlueTable:
    table = GlueTable()
    for i in range(g_ns):
        table.intern(f"a{i + 1}", Axis.NS)
    for i in range(g_ew):
        table.intern(f"b{i + 1}", Axis.EW)
    return table


def glue_patterns(k: int, glues_per_axis: int):
    """Canonical glue placements for k tiles: first-use labeling per axis.

    Yields tuples of k glue quadruples (ids in N, E, S, W order; NS ids are
    1..g, EW ids g+1..2g, 0 is null).  Within the flattened side sequence a
    fresh label may appear only after all smaller labels of its axis, which
    picks one representative per renaming orbit.  Non-seed tile order is
    not canonicalized here, so a pattern may repeat another up to reordering
    of tiles 1..k-1; the search tolerates the redundancy.
    """
    g = glues_per_axis
    slots = []  # (tile, direction) in tile-major, N E S W order
    for t in range(k):
        slots.extend((t, d) for d in range(4))

    def rec(i, quads, used_ns, used_ew):
        if i == len(slots):
            yield tuple(tuple(q) for q in quads)
            return
        t, d = slots[i]
        if d in (0, 2):  # NS side
            choices = [0] + [j + 1 for j in range(min(used_ns + 1, g))]
        else:
            choices = [0] + [g + j + 1 for j in range(min(used_ew + 1, g))]
        for c in choices:
            quads[t][d] = c
            n_ns = used_ns
            n_ew = used_ew
            if c:
                if d in (0, 2):
                    n_ns = max(used_ns, c)
                else:
                    n_ew = max(used_ew, c - g)
            yield from rec(i + 1, quads, n_ns, n_ew)
            quads[t][d] = 0

    yield from rec(0, [[0, 0, 0, 0] for _ in range(k)], 0, 0)


def _relabel_quad(quad, ns_perm, ew_perm, g):
    out = []
    for gid in quad:
        if gid == 0:
            out.append(0)
        elif gid <= g:
            out.append(ns_perm[gid - 1] + 1)
        else:
            out.append(g + ew_perm[gid - g - 1] + 1)
    return tuple(out)


def enumerate_sf(k: int, glues_per_axis: int):
    """Every strength-free system with exactly k tile types, canonically.

    Glue labels come from the axis alphabet plus null, each tile gets one
    of the valid cooperation families, and the seed is tile 0 (any seed
    choice is a reordering away).  Exactly one representative per orbit of
    glue renaming within each axis crossed with reordering of the non-seed
    tiles is yielded, in deterministic ascending order.  Exhaustive, so
    only practical for small k and tiny alphabets.
    """
    g = glues_per_axis
    table = _glue_table(g, g)
    fams = _families()
    ns_perms = list(itertools.permutations(range(g)))
    ew_perms = list(itertools.permutations(range(g)))
    tail_perms = list(itertools.permutations(range(1, k)))
    side_ns = [0] + list(range(1, g + 1))
    side_ew = [0] + list(range(g + 1, 2 * g + 1))
    quad_choices = list(itertools.product(side_ns, side_ew, side_ns, side_ew))

    def canonical(quads, famvec):
        best = None
        for tail in tail_perms:
            order = (0, *tail)
            q2 = tuple(quads[i] for i in order)
            f2 = tuple(famvec[i] for i in order)
            for np_ in ns_perms:
                for ep in ew_perms:
                    key = (
                        tuple(_relabel_quad(q, np_, ep, g) for q in q2),
                        f2,
                    )
                    if best is None or key < best:
                        best = key
        return best

    for quads in itertools.product(quad_choices, repeat=k):
        for famvec in itertools.product(fams, repeat=k):
            if canonical(quads, famvec) == (quads, famvec):
                tiles = tuple(
                    TileType(f"t{i}", q) for i, q in enumerate(quads)
                )
                yield SfTas(table, tiles, 0, famvec)


class _Branch(Exception):
    def __init__(self, tile: int, mask: int):
        self.tile = tile
        self.mask = mask


def _partial_query(ins, outs):
    def query(ti, m):
        if ins[ti] >> m & 1:
            return True
        if outs[ti] >> m & 1:
            return False
        raise _Branch(ti, m)

    return query


def symbolic_scan(tiles, seed_tile, target, collect_rejects=False):
    """All maximal family-constraint blocks with a unique-shape verdict.

    Returns (accepts, rejects): lists of (must_in, must_out) tuples of
    per-tile masks.  Every family vector consistent with an accept block
    passes unique-shape for `target`; blocks from distinct branches are
    disjoint, so together with the rejects they partition the whole family
    vector space.
    """
    k = len(tiles)
    stack = [((0,) * k, (1,) * k)]
    accepts = []
    rejects = []
    while stack:
        ins, outs = stack.pop()
        try:
            ok = _unique_shape_core(
                tiles, seed_tile, (0, 0), target, _partial_query(ins, outs)
            )
        except _Branch as br:
            ti, m = br.tile, br.mask
            with_in = ins[ti] | SUPERSETS[m]
            if not with_in & outs[ti]:
                stack.append((ins[:ti] + (with_in,) + ins[ti + 1 :], outs))
            with_out = outs[ti] | (SUBSETS[m] & 0xFFFF)
            if not ins[ti] & with_out:
                stack.append((ins, outs[:ti] + (with_out,) + outs[ti + 1 :]))
            continue
        (accepts if ok else rejects).append((ins, outs))
    if collect_rejects:
        return accepts, rejects
    return accepts, None


def _block_options(block, null_masks):
    """Per-tile family option lists for one constraint block (ascending)."""
    ins, outs = block
    options = []
    for ti in range(len(ins)):
        opts = [
            f
            for f in _null_consistent_families(null_masks[ti])
            if f & ins[ti] == ins[ti] and not f & outs[ti]
        ]
        if not opts:
            return None
        options.append(opts)
    return options


def _merged_vectors(option_lists):
    """Lexicographically merged iterator over several product spaces."""
    iters = [itertools.product(*opts) for opts in option_lists]
    heap = []
    for i, it in enumerate(iters):
        first = next(it, None)
        if first is not None:
            heapq.heappush(heap, (first, i))
    seen = set()
    while heap:
        vec, i = heapq.heappop(heap)
        nxt = next(iters[i], None)
        if nxt is not None:
            heapq.heappush(heap, (nxt, i))
        if vec not in seen:
            seen.add(vec)
            yield vec


@dataclass
class SearchStats:
    patterns: int = 0
    branches: int = 0
    accept_blocks: int = 0
    candidates_tested: int = 0
    synth_calls: int = 0
    space_bound: int = 0  # 168^k * k^(4k+2), the coarse candidate-count cap

    def merge(self, other: "SearchStats") -> None:
        self.patterns += other.patterns
        self.branches += other.branches
        self.accept_blocks += other.accept_blocks
        self.candidates_tested += other.candidates_tested
        self.synth_calls += other.synth_calls


@dataclass
class SearchResult:
    sf: SfTas
    tas: Tas
    k: int
    target: frozenset
    stats: SearchStats


def _targets_for(s: Shape):
    """Translates of the shape that place each of its cells at the origin."""
    out = []
    seen = set()
    for px, py in sorted(s.cells):
        cells = frozenset((x - px, y - py) for x, y in s.cells)
        if cells not in seen:
            seen.add(cells)
            out.append(cells)
    return out


def _scan_pattern(args):
    """Search one glue placement for the smallest implementable passer."""
    quads, g, targets = args
    table = _glue_table(g, g)
    tiles = tuple(TileType(f"t{i}", q) for i, q in enumerate(quads))
    null_masks = tuple(
        sum(1 << d for d in range(4) if not q[d]) for q in quads
    )
    stats = SearchStats()
    blocks = []
    for target in targets:
        accepts, rejects = symbolic_scan(tiles, 0, target, collect_rejects=True)
        stats.branches += len(accepts) + len(rejects)
        for block in accepts:
            opts = _block_options(block, null_masks)
            if opts is not None:
                blocks.append(opts)
    stats.accept_blocks = len(blocks)
    if not blocks:
        return None, stats
    for vec in _merged_vectors(blocks):
        stats.candidates_tested += 1
        sf = SfTas(table, tiles, 0, vec)
        stats.synth_calls += 1
        result = synthesize(sf)
        if result.feasible:
            hit_target = next(t for t in targets if unique_shape(sf, t))
            return (sf, result.tas, hit_target), stats
    return None, stats


def min_tileset(
    s: Shape, k_max: int, workers: int = 1
) -> SearchResult | None:
    """Smallest-k strength-free system that uniquely self-assembles `s`
    (up to translation), together with synthesized strengths.

    Scans k = 1..k_max with a glue alphabet of k+1 labels per axis.  The
    result is the first hit in deterministic order (glue placement, then
    family vector), which is minimal in k up to isomorphism.
    """
    targets = _targets_for(s)
    total = SearchStats()
    for k in range(1, k_max + 1):
        total.space_bound = 168**k * k ** (4 * k + 2)
        jobs = ((quads, k + 1, targets) for quads in glue_patterns(k, k + 1))
        if workers > 1:
            import multiprocessing

            with multiprocessing.Pool(workers) as pool:
                results = pool.imap(_scan_pattern, jobs, chunksize=16)
                hit = _drain(results, total)
        else:
            hit = _drain(map(_scan_pattern, jobs), total)
        if hit is not None:
            sf, tas, target = hit
            return SearchResult(sf, tas, k, target, total)
    return None


def _drain(results, total: SearchStats):
    for found, stats in results:
        total.patterns += 1
        total.merge(stats)
        if found is not None:
            return found
    return None


def square_cap(n: int, c: int = 1) -> int:
    """Tile-count cap for the n-by-n square search: ceil(c*log n/log log n).

    Logs are base 2 and the denominator is clamped to 1, which covers the
    n <= 4 range where log log n would be zero or negative.  The constant c
    is a caller-supplied parameter; it is not pinned by theory here.
    """
    if n < 2:
        return 1
    num = c * math.log2(n)
    den = max(1.0, math.log2(math.log2(n)))
    return max(1, math.ceil(num / den))
