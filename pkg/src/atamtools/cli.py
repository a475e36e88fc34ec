"""Command line interface.

Exit codes: 0 success, 1 parse error, 2 overflow, 3 infeasible,
4 not found within the tile-count cap.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import formats, search, sim, synth, witness
from .compress import compress
from .core import SfTas, Tas, dirset_name


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_system(path: str):
    try:
        return formats.parse_system(_read(path))
    except formats.ParseError as e:
        print(f"error: {path}: {e}", file=sys.stderr)
        raise SystemExit(1)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(1)


def _load_shape(path: str):
    try:
        return formats.parse_shape(_read(path))
    except formats.ParseError as e:
        print(f"error: {path}: {e}", file=sys.stderr)
        raise SystemExit(1)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(1)


def cmd_simulate(args) -> int:
    system = _load_system(args.system)
    if args.trace:
        b = sim.behavior(system)
        grid = {b.seed_pos: b.seed_tile}
        step = 0
        while True:
            events = sim.frontier(grid, b)
            if not events or len(grid) + 1 > args.max_cells:
                break
            ev = events[0]
            step += 1
            name = b.tiles[ev.tile].name
            print(
                f"attach {step} ({ev.pos[0]},{ev.pos[1]}) {name} "
                f"via {dirset_name(ev.matched)}"
            )
            grid[ev.pos] = ev.tile
    asm, reason = sim.grow_greedy(system, args.max_cells)
    print(formats.render_assembly(asm, system), end="")
    print(f"halt: {reason.value} cells: {len(asm)}")
    return 0 if reason is sim.HaltReason.TERMINAL else 2


def cmd_synth(args) -> int:
    system = _load_system(args.system)
    if isinstance(system, Tas):
        system = system.sf_view()
    result = synth.synthesize(system)
    if not result.feasible:
        print(f"infeasible: {result.reason}")
        for tile, d, d2 in result.closure_violations[:10]:
            print(
                f"  closure violation: tile {system.tiles[tile].name} has "
                f"{dirset_name(d)} but not {dirset_name(d2)}"
            )
        if result.conflict:
            g, l = result.conflict
            print(f"  row: {g.describe(system.glues)}")
            print(f"  row: {l.describe(system.glues)}")
        return 3
    doc = formats.render_system(result.tas)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(doc)
    print(f"feasible: temperature {result.tas.temperature}")
    if args.min_tau:
        relaxed = synth.minimize_tau(result.system)
        print(
            f"relaxation minimum temperature: {relaxed} "
            "(informational; integer-minimal temperature is not computed)"
        )
    print(doc, end="")
    return 0


def cmd_compress(args) -> int:
    system = _load_system(args.system)
    if not isinstance(system, Tas):
        print("error: compression needs a standard system document", file=sys.stderr)
        return 1
    out, report = compress(system)
    print(formats.render_system(out), end="")
    print(f"low-strength count: {report.n_low}")
    print(f"new temperature: {report.new_temperature}")
    print(f"claimed bound 2k+2: {report.claimed_bound}")
    print(f"within claimed bound: {'yes' if report.within_claimed_bound else 'no'}")
    print(f"pair behavior preserved: {'yes' if report.coop2_preserved else 'no'}")
    return 0


def cmd_check_unique(args) -> int:
    system = _load_system(args.system)
    shape = _load_shape(args.shape)
    ok = sim.unique_shape(system, shape)
    if ok:
        print("yes")
        asm, reason = sim.grow_greedy(system, len(shape))
        print(formats.render_assembly(asm, system), end="")
    else:
        print("no")
        asm, reason = sim.grow_greedy(system, len(shape) + 1)
        dom = {p for p, _ in asm.cells}
        if reason is sim.HaltReason.OVERFLOW or not dom <= shape.cells:
            print("divergence: growth escapes the shape")
        elif dom != shape.cells:
            print(f"divergence: terminal assembly has {len(dom)} cells")
        else:
            print("divergence: a competing tile fits some position")
        print(formats.render_assembly(asm, system), end="")
    return 0


def cmd_min_square(args) -> int:
    from .core import Shape

    n = args.n
    if args.k_max_override:
        cap = args.k_max_override
    else:
        cap = search.square_cap(n, args.c)
        print(
            f"# cap: {cap} tile types (c={args.c}; the true constant for "
            "square tile complexity is not pinned here)"
        )
    workers = int(os.environ.get("ATAM_WORKERS", "1"))
    result = search.min_tileset(Shape.square(n), cap, workers=workers)
    if result is None:
        print(f"not found within cap {cap}")
        return 4
    print(f"minimal tile count: {result.k}")
    print("# strength-free system")
    print(formats.render_system(result.sf), end="")
    print("# synthesized system")
    print(formats.render_system(result.tas), end="")
    s = result.stats
    print(
        f"stats: patterns {s.patterns} blocks {s.accept_blocks} "
        f"candidates {s.candidates_tested} synth-calls {s.synth_calls} "
        f"space-bound {s.space_bound}"
    )
    return 0


def cmd_witness(args) -> int:
    w = witness.gen_witness(args.n, north=args.north)
    print(formats.render_system(w.sf), end="")
    if args.verify:
        report = witness.verify_lower_bound(args.n)
        print(f"synthesized temperature: {report.temperature}")
        print(f"required lower bound 2^{args.n}: {report.lower_bound}")
        if report.refuted_below is not None:
            verdict = "confirmed" if report.refuted_below else "REFUTATION FAILED"
            print(f"exhaustive check below bound: {verdict}")
        ok = report.meets_lower_bound and report.gap_invariant_ok
        print(f"temperature >= {report.lower_bound} {'confirmed' if ok else 'FAILED'}")
        if not ok:
            return 3
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="atam",
        description="Tile self-assembly engineering tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="grow a system and render the result")
    p.add_argument("system")
    p.add_argument("--max-cells", type=int, default=10000)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("synth", help="find strengths for a strength-free system")
    p.add_argument("system")
    p.add_argument("--emit", metavar="FILE", help="also write the document here")
    p.add_argument(
        "--min-tau",
        action="store_true",
        help="also report the relaxation's minimum temperature",
    )
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compress", help="rewrite strengths at temperature 2n+2")
    p.add_argument("system")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("check-unique", help="does the system uniquely assemble the shape")
    p.add_argument("system")
    p.add_argument("shape")
    p.set_defaults(func=cmd_check_unique)

    p = sub.add_parser("min-square", help="search a minimal system for the n by n square")
    p.add_argument("n", type=int)
    p.add_argument("--c", type=int, default=1, help="cap constant")
    p.add_argument("--k-max-override", type=int, default=0)
    p.set_defaults(func=cmd_min_square)

    p = sub.add_parser("witness", help="emit an exponential-temperature witness system")
    p.add_argument("n", type=int)
    p.add_argument("--north", choices=["null", "strong"], default="null")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_witness)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
