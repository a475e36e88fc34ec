import pytest

from atamtools.core import Shape
from atamtools.formats import (
    ParseError,
    parse_shape,
    parse_system,
    render_shape,
    render_shape_grid,
    render_system,
)
from atamtools.core import SfTas, Tas
from atamtools.witness import gen_witness
from helpers import coop_square_system, row_system


STANDARD_DOC = """\
# east-growing pair
tile S - x - -
tile A - - - x
seed S
temperature 2
strength x 2
"""

SF_DOC = """\
tile S - x - -
tile A - y - x
seed S
coop A W
"""


def test_parse_standard_document():
    sys = parse_system(STANDARD_DOC)
    assert isinstance(sys, Tas)
    assert [t.name for t in sys.tiles] == ["S", "A"]
    assert sys.assignment.temperature == 2
    assert sys.assignment.strengths == (0, 2)
    assert sys.seed_pos == (0, 0)


def test_parse_sf_document():
    sys = parse_system(SF_DOC)
    assert isinstance(sys, SfTas)
    assert sys.coop[0] == 0
    assert sys.coop[1] == sum(1 << d for d in range(16) if d & 0b1000)


def test_roundtrip_canonical_form():
    for sys in (
        parse_system(STANDARD_DOC),
        parse_system(SF_DOC),
        row_system(4),
        coop_square_system(),
        gen_witness(2).sf,
        gen_witness(1, north="strong").sf,
    ):
        doc = render_system(sys)
        assert render_system(parse_system(doc)) == doc


def _expect_error(text, fragment, line=None):
    with pytest.raises(ParseError) as err:
        parse_system(text)
    assert fragment in str(err.value)
    if line is not None:
        assert err.value.line == line


def test_parse_errors():
    _expect_error("bogus directive\n", "unknown directive", line=1)
    _expect_error("tile S - x -\n", "expected: tile", line=1)
    _expect_error("tile S - x - -\ntile S - - - -\nseed S\n", "duplicate tile", line=2)
    _expect_error(
        "tile S a - a -\ntile T - a - -\nseed S\n",
        "used on both",
        line=2,
    )
    _expect_error("tile S - x - -\nseed S\ntemperature 2\n", "no strength", line=1)
    _expect_error(
        "tile S - x - -\nseed S\ntemperature 2\nstrength y 1\n",
        "unknown glue",
        line=4,
    )
    _expect_error(
        "tile S - x - -\nseed S\ntemperature 0\nstrength x 1\n",
        "temperature must be >= 1",
        line=3,
    )
    _expect_error(
        "tile S - x - -\nseed S\ncoop S W\ntemperature 1\nstrength x 1\n",
        "mixes",
    )
    _expect_error("tile S - x - -\n", "missing seed")
    _expect_error("seed S\n", "no tile lines")
    _expect_error(
        "tile S - x - -\nseed S\ncoop S Q\n", "bad direction", line=3
    )


def test_parse_error_column():
    with pytest.raises(ParseError) as err:
        parse_system("tile S - x - -\nseed S\ntemperature nine\n")
    assert err.value.line == 3
    assert err.value.col == 13


def test_wait_glue_on_north_is_ns_axis():
    # a glue first used on a north side gets the NS axis silently
    sys = parse_system("tile S x - - -\ntile T - - x -\nseed S\ncoop T N\n")
    assert isinstance(sys, SfTas)


def test_shape_coordinate_roundtrip():
    shape = Shape.of({(0, 0), (1, 0), (1, 1)})
    doc = render_shape(shape)
    assert parse_shape(doc).cells == shape.cells
    assert render_shape(parse_shape(doc)) == doc


def test_shape_grid_parsing():
    shape = parse_shape("##\n.#\n")
    assert shape.cells == frozenset({(0, 1), (1, 1), (1, 0)})
    grid = render_shape_grid(shape)
    assert grid == "##\n.#\n"
    assert parse_shape(grid).cells == shape.cells


def test_shape_errors():
    with pytest.raises(ParseError):
        parse_shape("")
    with pytest.raises(ParseError):
        parse_shape("#.\n.#\n")  # disconnected
    with pytest.raises(ParseError):
        parse_shape("0 0\n2 2\n")  # disconnected
    with pytest.raises(ParseError):
        parse_shape("0\n")
