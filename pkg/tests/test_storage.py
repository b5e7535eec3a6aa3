import json

import pytest

from src import series as S
from src.errors import ToolkitError
from src.oracle import enumerate_polygons
from src.storage import (SeedCache, collapse_half_perimeter, load_count_table, load_table, render_count_table,
                         render_table, write_table)

TABLE = {(1, 1): 1, (2, 1): 1, (1, 2): 1, (2, 2): 3}


def test_csv_rows_sorted_by_size():
    text = render_table("SP", 4, TABLE, "csv")
    assert text.splitlines() == ["w,h,count", "1,1,1", "1,2,1", "2,1,1", "2,2,3"]


def test_text_has_no_header():
    assert render_table("SP", 4, TABLE, "text").splitlines()[0] == "1 1 1"


def test_collapse():
    assert collapse_half_perimeter(TABLE) == {2: 1, 3: 2, 4: 3}
    text = render_table("SP", 4, TABLE, "csv", collapse="half-perimeter")
    assert text == "n,count\n2,1\n3,2\n4,3\n"
    data = json.loads(render_table("SP", 4, TABLE, "json", collapse="half-perimeter"))
    assert data["entries"][0] == {"n": 2, "count": 1}


def test_json_file(tmp_path):
    path = tmp_path / "sp.json"
    write_table(str(path), "SP", 4, TABLE, "json")
    assert load_table(str(path)) == ("SP", 4, TABLE)


def test_unknown_format_or_collapse():
    with pytest.raises(ToolkitError):
        render_table("SP", 4, TABLE, "xml")
    with pytest.raises(ToolkitError):
        render_table("SP", 4, TABLE, "csv", collapse="width")


def test_count_table_formats(tmp_path):
    table = enumerate_polygons(8)
    lines = render_count_table(table, "csv").splitlines()
    assert lines[0] == "w,h,m,flags,count"
    assert lines[1] == "1,1,0,1111,1"
    path = tmp_path / "oracle.json"
    path.write_text(render_count_table(table, "json"), encoding="utf-8")
    loaded = load_count_table(str(path))
    assert loaded.max_perimeter == 8
    assert loaded.entries == table.entries


def test_seed_cache(tmp_path, vs):
    cache = SeedCache(str(tmp_path / "cache"))
    calls = []

    def build(order):
        calls.append(order)
        return S.geometric(vs, {"x": 1, "y": 1}, 6)

    first = cache.get_or_build("diag", 6, build)
    second = cache.get_or_build("diag", 6, build)
    assert calls == [6]
    assert first == second
    assert cache.load("diag", 5) is None
