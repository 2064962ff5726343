import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diknn.errors import UsageError
from diknn.series import SeriesPair, parse_csv, read_csv, to_csv, write_csv

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=50))
def test_csv_round_trip_is_exact(rows):
    pair = SeriesPair([a for a, _ in rows], [b for _, b in rows])
    back = parse_csv(to_csv(pair))
    np.testing.assert_array_equal(back.x, pair.x)
    np.testing.assert_array_equal(back.y, pair.y)


def test_header_crlf_and_bom():
    pair = parse_csv("﻿x,y\r\n1,2\r\n3.5,-4e-3\r\n")
    np.testing.assert_array_equal(pair.x, [1, 3.5])
    np.testing.assert_array_equal(pair.y, [2, -4e-3])
    assert len(parse_csv("1,2\n3,4\n")) == 2


@pytest.mark.parametrize(
    "text, line",
    [("x,y\n1,2\n3\n", "line 3"), ("1,2,3\n", "line 1"), ("x,y\n1,a\n", "line 2"), ("x,y\n1,nan\n", "line 2")],
)
def test_bad_rows_name_the_line(text, line):
    with pytest.raises(UsageError, match=line):
        parse_csv(text)


def test_file_round_trip(tmp_path):
    pair = SeriesPair(np.linspace(0, 1, 7), np.exp(np.linspace(0, 1, 7)))
    write_csv(pair, tmp_path / "s.csv")
    assert (tmp_path / "s.csv").read_bytes().startswith(b"x,y\n")
    np.testing.assert_array_equal(read_csv(tmp_path / "s.csv").y, pair.y)


def test_pair_validation_and_immutability():
    with pytest.raises(UsageError):
        SeriesPair([1, 2], [1])
    with pytest.raises(UsageError):
        SeriesPair([1, np.inf], [1, 2])
    p = SeriesPair([1, 2], [3, 4])
    with pytest.raises(ValueError):
        p.x[0] = 5
    r = p.reversed()
    np.testing.assert_array_equal(r.x, p.y)
    np.testing.assert_array_equal(r.y, p.x)
