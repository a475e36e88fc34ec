"""Rewriting strengths so 1- and 2-side cooperation survives at temperature 2n+2.

Strengths strictly between 0 and tau split into the "low" set L (below
tau/2, sorted ascending as l_1 < ... < l_n) and the "high" set H (from
tau/2 up).  H partitions into classes H_j = [tau - l_j, tau - l_{j-1})
with the conventions l_0 = 0 and l_{n+1} = tau/2.  The rewritten strengths
are 0 for zero, i for l_i, 2n+2-j for class H_j, and 2n+2 for anything
at or above tau, with the new temperature 2n+2.  Single sides and pairs
of sides then bind exactly as before; triples are not preserved in
general.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import StrengthAssignment, Tas, cooperation_set, popcount


# Cardinality <= 2 direction subsets as a family mask.
_COOP2_MASK = sum(1 << d for d in range(16) if popcount(d) <= 2)


@dataclass(frozen=True)
class GluePartition:
    """The low strengths, high strengths, and high classes for one system.

    low is ascending; classes maps each high strength to its class index j
    (1 <= j <= n+1, where n = len(low)); class j collects the high
    strengths h with tau - l_j <= h < tau - l_{j-1}.
    """

    temperature: int
    low: tuple[int, ...]
    high: tuple[int, ...]
    classes: dict[int, int]


def used_strengths(t: Tas) -> set[int]:
    """Strength values of glues that appear on at least one tile."""
    used_ids = {g for tile in t.tiles for g in tile.glues if g}
    return {t.assignment.strengths[g] for g in used_ids}


def partition_glues(a: StrengthAssignment, used: set[int] | None = None) -> GluePartition:
    """Split the used strengths strictly between 0 and tau into L and H."""
    tau = a.temperature
    values = set(a.strengths) if used is None else set(used)
    between = sorted(v for v in values if 0 < v < tau)
    low = tuple(v for v in between if 2 * v < tau)
    high = tuple(v for v in between if 2 * v >= tau)
    # thresholds tau - l_j for j = 1..n+1, with l_{n+1} = tau/2; compare
    # via doubled values so tau/2 needs no rationals
    classes = {}
    for h in high:
        j = next(
            (i + 1 for i, l in enumerate(low) if tau - l <= h),
            len(low) + 1,
        )
        classes[h] = j
    return GluePartition(tau, low, high, classes)


def compressed_strength(g: int, part: GluePartition) -> int:
    """The rewritten strength of one original value."""
    n = len(part.low)
    if g == 0:
        return 0
    if g >= part.temperature:
        return 2 * n + 2
    if g in part.classes:
        return 2 * n + 2 - part.classes[g]
    return part.low.index(g) + 1


@dataclass(frozen=True)
class CompressReport:
    n_low: int
    new_temperature: int
    tile_count: int
    claimed_bound: int  # 2 * tile_count + 2
    within_claimed_bound: bool
    coop2_preserved: bool


def compress(t: Tas) -> tuple[Tas, CompressReport]:
    """Rewrite strengths of a system; new temperature is 2n+2.

    Unused glue labels are mapped through the same table (value 0 stays 0;
    other unused values follow the partition of used values only, so they
    do not inflate n).
    """
    part = partition_glues(t.assignment, used_strengths(t))
    n = len(part.low)
    tau2 = 2 * n + 2

    def remap(g: int) -> int:
        if g == 0:
            return 0
        if g >= t.assignment.temperature:
            return tau2
        if g in part.classes:
            return tau2 - part.classes[g]
        if g in part.low:
            return part.low.index(g) + 1
        # unused in-between value: place it consistently by rank
        below = sum(1 for l in part.low if l < g)
        if 2 * g < t.assignment.temperature:
            return below
        j = next(
            (i + 1 for i, l in enumerate(part.low) if t.assignment.temperature - l <= g),
            n + 1,
        )
        return tau2 - j

    strengths = tuple(remap(s) for s in t.assignment.strengths)
    out = Tas(
        t.glues,
        t.tiles,
        t.seed_tile,
        StrengthAssignment(strengths, tau2),
        t.seed_pos,
    )
    report = CompressReport(
        n_low=n,
        new_temperature=tau2,
        tile_count=len(t.tiles),
        claimed_bound=2 * len(t.tiles) + 2,
        within_claimed_bound=tau2 <= 2 * len(t.tiles) + 2,
        coop2_preserved=verify_coop2_equiv(t, out),
    )
    return out, report


def coop2_view(t: Tas) -> tuple[int, ...]:
    """Per tile, the family restricted to side subsets of size 1 or 2."""
    return tuple(
        cooperation_set(tile, t.assignment) & _COOP2_MASK for tile in t.tiles
    )


def verify_coop2_equiv(t1: Tas, t2: Tas) -> bool:
    """True iff the two systems agree on every 1- and 2-side family slice."""
    if t1.tiles != t2.tiles or t1.seed_tile != t2.seed_tile:
        raise ValueError("systems must share tile list and seed")
    return coop2_view(t1) == coop2_view(t2)
