"""Engineering toolkit for the abstract Tile Assembly Model."""

from .core import (
    Assembly,
    Axis,
    ClosureViolationError,
    CoopFamily,
    Direction,
    DirSet,
    GlueLabel,
    GlueLookupError,
    GlueTable,
    SfTas,
    Shape,
    StrengthAssignment,
    Tas,
    TileType,
    VALID_FAMILY_COUNT,
    cooperation_set,
    dirset,
    dirset_name,
    enumerate_coop_families,
    is_tau_stable,
    is_upward_closed,
    min_cut_weight,
    minimal_elements,
    parse_dirset,
    upward_closure,
)
from .sim import (
    AttachEvent,
    HaltReason,
    behavior,
    explore_all,
    frontier,
    grow_greedy,
    unique_shape,
)
from .synth import (
    IneqSystem,
    Row,
    Sense,
    SynthResult,
    build_system,
    closure_violations_of,
    hadamard_bound,
    integerize,
    minimize_tau,
    solve_feasible,
    synthesize,
    validate_closure,
)
from .compress import (
    CompressReport,
    GluePartition,
    compress,
    coop2_view,
    partition_glues,
    verify_coop2_equiv,
)
from .witness import (
    WitnessReport,
    WitnessSystem,
    gen_witness,
    reference_assignment,
    verify_lower_bound,
)
from .search import (
    SearchResult,
    SearchStats,
    enumerate_sf,
    min_tileset,
    square_cap,
)
from .formats import (
    ParseError,
    parse_shape,
    parse_system,
    render_assembly,
    render_shape,
    render_system,
)
