"""Deciding implementability of strength-free systems.

A strength-free system is implementable when some integer strength
assignment and temperature reproduce every tile's cooperation family
exactly.  That is a linear feasibility problem over the glue strength
variables and the temperature: one inequality per (tile, side subset),
"sum >= tau" for family members and "sum <= tau - 1" for non-members.

Everything here runs over exact integers and rationals (fractions.Fraction);
no floating point.  Feasibility is decided by a phase-1 simplex with
Bland's rule on an integer tableau (fraction-free pivoting: entries stay
integral, scaled by the previous pivot).  A feasible point is then pushed
to a vertex of the relaxed polytope, whose coordinates have numerators and
denominators bounded through Hadamard's inequality, so scaling by the
common denominator yields integer strengths of bounded magnitude.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

from .core import (
    FULL_FAMILY,
    SUBSETS,
    SUPERSETS,
    CoopFamily,
    DirSet,
    SfTas,
    StrengthAssignment,
    Tas,
    cooperation_set,
    dirset_name,
    minimal_elements,
)


class Sense(enum.Enum):
    GE0 = ">=0"
    LE_MINUS1 = "<=-1"


@dataclass(frozen=True)
class Row:
    """One inequality: sum(coeffs[i] * s_{i+1}) - tau  (GE0 or LE_MINUS1).

    coeffs[i] counts how many sides of the tile in the given direction
    subset carry glue id i+1, so each coefficient is 0, 1 or 2 (a glue can
    repeat only across the two sides of its axis).
    """

    coeffs: tuple[int, ...]
    sense: Sense
    tile: int
    dirset: DirSet

    def value(self, strengths, tau):
        return sum(c * s for c, s in zip(self.coeffs, strengths)) - tau

    def satisfied(self, strengths, tau) -> bool:
        v = self.value(strengths, tau)
        return v >= 0 if self.sense is Sense.GE0 else v <= -1

    def describe(self, glues) -> str:
        terms = [
            ("" if c == 1 else f"{c}*") + glues.label(i + 1).name
            for i, c in enumerate(self.coeffs)
            if c
        ]
        lhs = " + ".join(terms) if terms else "0"
        op = ">= tau" if self.sense is Sense.GE0 else "<= tau - 1"
        return f"tile {self.tile} {dirset_name(self.dirset)}: {lhs} {op}"


@dataclass(frozen=True)
class IneqSystem:
    """The full 16k-row system for a strength-free system.

    num_glues is u, the number of glue-strength variables (glue ids 1..u);
    the temperature is one more variable, so num_vars = u + 1.  Solution
    vectors are ordered (s_1, ..., s_u, tau).
    """

    num_glues: int
    rows: tuple[Row, ...]

    @property
    def num_vars(self) -> int:
        return self.num_glues + 1

    def reduced_rows(self) -> list[Row]:
        """Deduplicated rows with dominated rows dropped.

        With nonnegative strengths, a GE0 row for a family member is
        implied by the row of any minimal member below it, and a LE_MINUS1
        row is implied by the row of any maximal non-member above it; the
        reduced system defines the same polytope.
        """
        keep: dict[tuple, Row] = {}
        by_tile: dict[int, list[Row]] = {}
        for row in self.rows:
            by_tile.setdefault(row.tile, []).append(row)
        for tile_rows in by_tile.values():
            fam = 0
            for row in tile_rows:
                if row.sense is Sense.GE0:
                    fam |= 1 << row.dirset
            comp = ~fam & 0xFFFF
            minimal = set(minimal_elements(fam))
            maximal = {
                d
                for d in range(16)
                if comp >> d & 1 and not comp & (SUPERSETS[d] & ~(1 << d))
            }
            for row in tile_rows:
                wanted = (
                    row.dirset in minimal
                    if row.sense is Sense.GE0
                    else row.dirset in maximal
                )
                if wanted:
                    keep.setdefault((row.coeffs, row.sense), row)
        return list(keep.values())

    def satisfied(self, values) -> bool:
        """Check a full solution vector (s_1..s_u, tau) against every row."""
        values = tuple(values)
        strengths, tau = values[:-1], values[-1]
        if any(v < 0 for v in values) or tau < 1:
            return False
        return all(r.satisfied(strengths, tau) for r in self.rows)


@dataclass(frozen=True)
class SynthResult:
    feasible: bool
    tas: Tas | None = None
    system: IneqSystem | None = None
    reason: str = ""
    closure_violations: tuple = ()
    conflict: tuple[Row, Row] | None = None

    @property
    def assignment(self) -> StrengthAssignment | None:
        return self.tas.assignment if self.tas else None


def validate_closure(sf: SfTas):
    """Every (tile, D, D') with D in the family, D subset of D', D' missing.

    SfTas construction already enforces closure, so this reports [] for any
    value that passed construction; it exists to vet raw family masks.
    """
    out = []
    for i, fam in enumerate(sf.coop):
        for d in range(1, 16):
            if not fam >> d & 1:
                continue
            missing = SUPERSETS[d] & ~fam
            for e in range(16):
                if missing >> e & 1:
                    out.append((i, d, e))
    return out


def closure_violations_of(fams) -> list[tuple[int, DirSet, DirSet]]:
    """Closure check for raw family masks (no SfTas required)."""
    out = []
    for i, fam in enumerate(fams):
        for d in range(1, 16):
            if fam >> d & 1:
                missing = SUPERSETS[d] & ~fam & 0xFFFF
                for e in range(16):
                    if missing >> e & 1:
                        out.append((i, d, e))
    return out


def build_system(sf: SfTas) -> IneqSystem:
    """All 16 rows per tile: members GE0, non-members LE_MINUS1.

    The empty direction subset is never a member, so its row is
    "-tau <= -1", which pins tau >= 1.
    """
    u = len(sf.glues) - 1
    rows = []
    for ti, tile in enumerate(sf.tiles):
        fam = sf.coop[ti]
        for ds in range(16):
            coeffs = [0] * u
            for d in range(4):
                if ds >> d & 1:
                    g = tile.glues[d]
                    if g:
                        coeffs[g - 1] += 1
            sense = Sense.GE0 if fam >> ds & 1 else Sense.LE_MINUS1
            rows.append(Row(tuple(coeffs), sense, ti, ds))
    return IneqSystem(u, tuple(rows))


def _standard_rows(rows: list[Row], n: int) -> list[tuple[tuple[int, ...], int]]:
    """Rows as (a, b) with a . x >= b over x = (s_1..s_u, tau), b in {0, 1}."""
    out = []
    for row in rows:
        if row.sense is Sense.GE0:
            out.append((row.coeffs + (-1,), 0))
        else:
            out.append((tuple(-c for c in row.coeffs) + (1,), 1))
    return out


class _Tableau:
    """Integer simplex tableau scaled by its running denominator.

    After pivoting on (r, c) every other row becomes
    (pivot * row - row[c] * pivot_row) / previous_pivot, which divides
    exactly, and the pivot row is left unchanged; the matrix is the exact
    rational tableau times `den`, which stays positive, so sign tests and
    ratio comparisons work on plain integers.
    """

    def __init__(self, std_rows, n):
        m = len(std_rows)
        art_rows = [i for i, (_, b) in enumerate(std_rows) if b > 0]
        self.n = n
        self.m = m
        self.ncols = n + m + len(art_rows)
        self.rhs = self.ncols
        self.den = 1
        self.rows = []
        self.basis = []
        self.art_cols = set()
        next_art = n + m
        for i, (a, b) in enumerate(std_rows):
            row = [0] * (self.ncols + 1)
            if b <= 0:
                # -a.x + slack = -b, slack basic at -b >= 0
                for j, c in enumerate(a):
                    row[j] = -c
                row[n + i] = 1
                row[self.rhs] = -b
                self.basis.append(n + i)
            else:
                # a.x - slack + artificial = b, artificial basic
                for j, c in enumerate(a):
                    row[j] = c
                row[n + i] = -1
                row[next_art] = 1
                row[self.rhs] = b
                self.basis.append(next_art)
                self.art_cols.add(next_art)
                next_art += 1
            self.rows.append(row)

    def run(self, obj) -> None:
        """Pivot with Bland's rule until no objective entry is positive."""
        rows, basis, rhs = self.rows, self.basis, self.rhs
        size = self.ncols + 1
        while True:
            col = None
            for j in range(self.ncols):
                if j not in self.art_cols and obj[j] > 0:
                    col = j
                    break
            if col is None:
                return
            best = None
            for i in range(self.m):
                piv = rows[i][col]
                if piv <= 0:
                    continue
                key = (rows[i][rhs], piv)
                if best is None:
                    better = True
                else:
                    lhs = key[0] * best[1][1]
                    rhsv = best[1][0] * key[1]
                    better = lhs < rhsv or (
                        lhs == rhsv and basis[i] < basis[best[0]]
                    )
                if better:
                    best = (i, key)
            if best is None:
                raise RuntimeError("simplex objective unbounded")
            r = best[0]
            piv = rows[r][col]
            prow = rows[r]
            den = self.den
            for i in range(self.m):
                if i == r:
                    continue
                trow = rows[i]
                f = trow[col]
                rows[i] = [
                    (piv * trow[j] - f * prow[j]) // den for j in range(size)
                ]
            f = obj[col]
            obj[:] = [(piv * obj[j] - f * prow[j]) // den for j in range(size)]
            basis[r] = col
            self.den = piv

    def phase1(self) -> bool:
        """Drive the artificials to zero; True iff the rows are feasible."""
        if not self.art_cols:
            return True
        obj = [0] * (self.ncols + 1)
        for i in range(self.m):
            if self.basis[i] in self.art_cols:
                trow = self.rows[i]
                for j in range(self.n + self.m):
                    obj[j] += trow[j]
        self.run(obj)
        return all(
            self.rows[i][self.rhs] == 0
            for i in range(self.m)
            if self.basis[i] in self.art_cols
        )

    def reduced_costs(self, cost) -> list[int]:
        """den * (cost_j - basic-cost combination), for an integer cost
        vector over the structural + slack columns (maximization)."""
        obj = [0] * (self.ncols + 1)
        for j in range(self.ncols):
            obj[j] = self.den * cost[j] if j < len(cost) else 0
        for i in range(self.m):
            cb = cost[self.basis[i]] if self.basis[i] < len(cost) else 0
            if cb:
                trow = self.rows[i]
                for j in range(self.ncols + 1):
                    obj[j] -= cb * trow[j]
        return obj

    def solution(self):
        x = [Fraction(0)] * self.n
        for i in range(self.m):
            if self.basis[i] < self.n:
                x[self.basis[i]] = Fraction(self.rows[i][self.rhs], self.den)
        return x

    def objective_value(self, cost) -> Fraction:
        total = Fraction(0)
        for i in range(self.m):
            cb = cost[self.basis[i]] if self.basis[i] < len(cost) else 0
            if cb:
                total += cb * Fraction(self.rows[i][self.rhs], self.den)
        return total


def _phase1(std_rows, n):
    """Feasible x >= 0 with a . x >= b for every row, or None."""
    t = _Tableau(std_rows, n)
    if not t.phase1():
        return None
    return t.solution()


def _gauss_nullspace(rows, n):
    """A nonzero rational kernel vector of the row set, or None if rank n."""
    mat = [[Fraction(v) for v in row] for row in rows]
    pivots = {}  # column -> row index in echelon form
    r = 0
    for c in range(n):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots[c] = r
        r += 1
        if r == len(mat):
            break
    free = next((c for c in range(n) if c not in pivots), None)
    if free is None and r >= n:
        return None
    if free is None:
        return None
    d = [Fraction(0)] * n
    d[free] = Fraction(1)
    for c, i in pivots.items():
        d[c] = -mat[i][free]
    return d


def _to_vertex(std_rows, n, x):
    """Slide a feasible point along the polytope onto a vertex.

    While the tight constraints (rows met with equality plus zero
    coordinates) do not pin the point down, move along a kernel direction
    until one more constraint becomes tight; x >= 0 guarantees some finite
    step in one of the two directions.
    """
    x = list(x)
    while True:
        tight = []
        for a, b in std_rows:
            if sum(c * v for c, v in zip(a, x)) == b:
                tight.append(a)
        for j in range(n):
            if x[j] == 0:
                row = [0] * n
                row[j] = 1
                tight.append(tuple(row))
        d = _gauss_nullspace(tight, n)
        if d is None:
            return x
        step = None
        for sign in (1, -1):
            dd = [sign * v for v in d]
            bound = None
            for a, b in std_rows:
                ad = sum(c * v for c, v in zip(a, dd))
                if ad < 0:
                    slack = sum(c * v for c, v in zip(a, x)) - b
                    t = Fraction(slack) / -ad
                    if bound is None or t < bound:
                        bound = t
            for j in range(n):
                if dd[j] < 0:
                    t = x[j] / -dd[j]
                    if bound is None or t < bound:
                        bound = t
            if bound is not None:
                step = (bound, dd)
                break
        if step is None:
            raise RuntimeError("unbounded direction in a pointed polytope")
        t, dd = step
        x = [v + t * w for v, w in zip(x, dd)]


def solve_standard_rows(std_rows, n):
    """Feasibility core: a vertex x >= 0 with a . x >= b for every row,
    or None.  Exposed for callers with extra side constraints."""
    x = _phase1(std_rows, n)
    if x is None:
        return None
    return tuple(_to_vertex(std_rows, n, x))


def solve_feasible(sys: IneqSystem):
    """A basic feasible solution (s_1..s_u, tau) as Fractions, or None.

    The point returned is a vertex of the relaxed polytope (all variables
    nonnegative), found by phase-1 simplex on the reduced rows and then a
    crossover walk; it is verified against every raw row before returning.
    """
    n = sys.num_vars
    std = _standard_rows(sys.reduced_rows(), n)
    x = solve_standard_rows(std, n)
    if x is None:
        return None
    if not sys.satisfied(x):
        raise RuntimeError("solver produced a point violating the system")
    return x


def integerize(
    vec, sys: IneqSystem, gcd_reduce: bool = True
) -> StrengthAssignment:
    """Scale a rational solution by the lcm of denominators to integers.

    Scaling preserves the GE0 rows and leaves every LE_MINUS1 row with a
    margin of at least the scale factor.  A final gcd reduction is applied
    only when the reduced vector still satisfies every row.
    """
    vec = [Fraction(v) for v in vec]
    scale = lcm(*(v.denominator for v in vec)) if vec else 1
    ints = [int(v * scale) for v in vec]
    strengths, tau = ints[:-1], ints[-1]
    for row in sys.rows:
        v = row.value(strengths, tau)
        if row.sense is Sense.GE0:
            if v < 0:
                raise RuntimeError("integer scaling broke a GE0 row")
        elif v > -scale:
            raise RuntimeError("integer scaling broke a LE_MINUS1 margin")
    if gcd_reduce:
        g = gcd(*ints) if any(ints) else 1
        if g > 1:
            cand = [v // g for v in ints]
            if cand[-1] >= 1 and sys.satisfied(cand):
                ints = cand
    return StrengthAssignment((0, *ints[:-1]), ints[-1])


def minimize_tau(sys: IneqSystem):
    """Minimum temperature of the rational relaxation, or None if empty.

    Informational only: the true integer-minimal temperature is a separate,
    unresolved optimization problem; this is the plain linear-programming
    lower bound for it.
    """
    n = sys.num_vars
    std = _standard_rows(sys.reduced_rows(), n)
    t = _Tableau(std, n)
    if not t.phase1():
        return None
    cost = [0] * (n + t.m)
    cost[n - 1] = -1  # maximize -tau
    t.run(t.reduced_costs(cost))
    return -t.objective_value(cost)


def hadamard_bound(sys: IneqSystem) -> int:
    """Hadamard bound for vertex numerators/denominators, rounded up.

    With n = num_vars variables, coefficients bounded by 2 and at most 5
    nonzero entries per row, every vertex coordinate p/q in lowest terms
    has p, q <= 2^n * 6^(n/2), as does the lcm of the denominators.
    """
    n = sys.num_vars
    if n % 2 == 0:
        return 2**n * 6 ** (n // 2)
    k = 2**n * 6 ** ((n - 1) // 2)
    s = isqrt(6 * k * k)
    return s if s * s == 6 * k * k else s + 1


def _conflict_pair(rows: list[Row]):
    """A (GE0, LE_MINUS1) pair where the GE0 side is coefficient-dominated.

    Such a pair is immediately contradictory for nonnegative strengths.
    Not every infeasible system contains one.
    """
    ge = [r for r in rows if r.sense is Sense.GE0]
    le = [r for r in rows if r.sense is Sense.LE_MINUS1]
    for g in ge:
        for l in le:
            if all(a <= b for a, b in zip(g.coeffs, l.coeffs)):
                return (g, l)
    return None


def synthesize(sf: SfTas) -> SynthResult:
    """Find integer strengths and a temperature matching every family.

    Pipeline: closure validation, system construction, exact feasibility,
    integer scaling.  On success the result's system is locally equivalent
    to the input (verified by recomputing every cooperation family) and
    every value is at most hadamard_bound(system) squared.
    """
    violations = tuple(validate_closure(sf))
    if violations:
        return SynthResult(
            False,
            reason="cooperation families not upward closed",
            closure_violations=violations,
        )
    system = build_system(sf)
    vec = solve_feasible(system)
    if vec is None:
        pair = _conflict_pair(system.reduced_rows())
        reason = (
            "contradictory rows"
            if pair
            else "empty polytope (no single witness row pair)"
        )
        return SynthResult(False, system=system, reason=reason, conflict=pair)
    assignment = integerize(vec, system)
    tas = Tas(sf.glues, sf.tiles, sf.seed_tile, assignment, sf.seed_pos)
    for i, tile in enumerate(sf.tiles):
        if cooperation_set(tile, assignment) != sf.coop[i]:
            raise RuntimeError("synthesized assignment is not locally equivalent")
    bound = hadamard_bound(system)
    top = max(assignment.strengths + (assignment.temperature,))
    if top > bound * bound:
        raise RuntimeError("synthesized value exceeds the vertex magnitude bound")
    return SynthResult(True, tas=tas, system=system)
