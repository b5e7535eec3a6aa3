import pytest

from src.errors import InsufficientBoundError, OracleError
from src.families import get_family
from src.oracle import (ClassFilter, LatticePolygon, classify, enumerate_polygons, is_row_column_convex,
                        polygons, table_for)

U_SHAPE = [(0, 0), (0, 1), (0, 2), (1, 0), (2, 0), (2, 1), (2, 2)]
PLUS = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]


def test_totals_by_perimeter():
    assert enumerate_polygons(8).totals_by_perimeter() == {4: 1, 6: 2, 8: 7}


def test_small_polygons_are_convex():
    table = enumerate_polygons(8)
    assert all(m == 0 for (_, _, m, _) in table.entries)


def test_convex_half_perimeter_five():
    assert enumerate_polygons(10).half_perimeter_totals(0)[5] == 28


def test_unit_square():
    c = classify(LatticePolygon("ENWS"))
    assert (c.width, c.height, c.perimeter, c.m) == (1, 1, 4, 0)
    assert c.flags == "1111"


def test_u_shape():
    c = classify(LatticePolygon.from_cells(U_SHAPE))
    assert (c.width, c.height, c.perimeter, c.m) == (3, 3, 16, 2)
    assert all(c.corners)


def test_plus_pentomino():
    c = classify(LatticePolygon.from_cells(PLUS))
    assert (c.width, c.height, c.perimeter, c.m) == (3, 3, 12, 0)
    assert c.flags == "0000"


def test_invalid_words():
    with pytest.raises(OracleError):
        LatticePolygon("ENW")
    with pytest.raises(OracleError):
        LatticePolygon("ESWN")


def test_two_characterizations_of_convexity():
    for poly in polygons(10):
        assert (classify(poly).m == 0) == is_row_column_convex(poly)


def test_explicit_list_matches_counts():
    assert len(polygons(10)) == sum(enumerate_polygons(10).entries.values())


def test_transposition_invariance():
    table = enumerate_polygons(12)
    assert table.transposed().entries == table.entries


def test_threads_do_not_change_the_table():
    assert enumerate_polygons(12, threads=2).entries == enumerate_polygons(12).entries


def test_bounds():
    with pytest.raises(OracleError):
        enumerate_polygons(9)
    with pytest.raises(OracleError):
        enumerate_polygons(28)
    with pytest.raises(OracleError):
        ClassFilter(0, frozenset({"XX"}))


def test_family_tables(oracle_12):
    convex = table_for(get_family("convex"), 4, table=oracle_12)
    assert sum(c for (w, h), c in convex.items() if w + h == 4) == 7
    assert table_for(get_family("UP"), 4, table=oracle_12)[(2, 2)] == 4
    assert table_for(get_family("SP"), 4, table=oracle_12)[(2, 2)] == 3
    assert table_for(get_family("two_convex"), 4, table=oracle_12) == {}


def test_insufficient_bound(oracle_12):
    with pytest.raises(InsufficientBoundError):
        table_for(get_family("two_convex"), 6, table=oracle_12)


def test_inexpressible_family():
    with pytest.raises(OracleError):
        table_for(get_family("P"), 4)
