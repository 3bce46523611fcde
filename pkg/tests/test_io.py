import json
import random
from fractions import Fraction

import pytest

from conftest import random_kernel

from tropiso.core import NEG_INF, TropVector
from tropiso.io import (
    FormatError,
    dump_kernel,
    dump_vector,
    parse_kernel,
    parse_vector,
    read_kernel,
    write_kernel,
)
from tropiso.kernel import Kernel


def test_exact_numbers():
    B = parse_kernel('{"x_points": ["a", "b"], "y_points": ["p", "q", "r"], '
                     '"entries": [[0.1, "1/3", "-inf"], [1e-1, -2, 2.50]]}')
    assert B.entries == ((Fraction(1, 10), Fraction(1, 3), NEG_INF), (Fraction(1, 10), -2, Fraction(5, 2)))


def test_syntax_error_has_position():
    with pytest.raises(FormatError) as err:
        parse_kernel('{"x_points": ["a"],\n  "y_points": [}')
    assert err.value.line == 2 and err.value.column is not None


def test_rejects_pos_inf_cell():
    with pytest.raises(FormatError, match=r"entries\[0\]\[1\]"):
        parse_kernel('{"x_points": ["a"], "y_points": ["p", "q"], "entries": [[0, "+inf"]]}')


def test_rejects_bad_cells_and_shapes():
    with pytest.raises(FormatError, match="entries"):
        parse_kernel('{"x_points": ["a"], "y_points": ["p"], "entries": [[0, 1]]}')
    with pytest.raises(FormatError, match="values"):
        parse_vector('{"points": ["a"], "values": [true]}')
    with pytest.raises(FormatError, match="not an extended real"):
        parse_vector('{"points": ["a"], "values": ["x"]}')
    with pytest.raises(FormatError):
        parse_vector('{"points": ["a"], "values": [NaN]}')
    with pytest.raises(FormatError, match="no finite entry"):
        parse_kernel('{"x_points": ["a"], "y_points": ["p"], "entries": [["-inf"]]}')


def test_ingestion_is_exact_in_approximate_mode_files(monkeypatch):
    monkeypatch.setenv("TROPISO_APPROX", "1")
    B = parse_kernel('{"x_points": ["a"], "y_points": ["p"], "entries": [["1/3"]]}')
    assert isinstance(B.entries[0][0], float)


def test_writer_keeps_input_order_and_ints():
    B = Kernel.from_rows([[0, Fraction(-1, 2)], [NEG_INF, 3]], x_points=("z", "a"), y_points=("q", "p"))
    doc = json.loads(dump_kernel(B))
    assert doc["x_points"] == ["z", "a"] and doc["y_points"] == ["q", "p"]
    assert doc["entries"] == [[0, "-1/2"], ["-inf", 3]]


def test_round_trip(tmp_path):
    rng = random.Random(4)
    for k in range(30):
        B = random_kernel(rng)
        B = Kernel(B.x_points, B.y_points, tuple(tuple(a / rng.randint(1, 7) if a != NEG_INF else a
                                                       for a in row) for row in B.entries))
        path = tmp_path / f"k{k}.json"
        write_kernel(B, path)
        again = read_kernel(path)
        assert again == B and dump_kernel(again) == path.read_text()
    f = TropVector(("a", "b", "c"), (Fraction(1, 3), NEG_INF, float("inf")))
    assert parse_vector(dump_vector(f)) == f
