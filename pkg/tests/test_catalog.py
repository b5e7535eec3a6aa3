from math import comb

import pytest

from src import series as S
from src.catalog import CATALOG, ReducedBlocks, basic, build, convex_family, indent, pyramid_family, side_refined
from src.errors import CatalogError
from src.series import VarSet


def _half_perimeter_totals(f, n):
    table = f.table()
    return [sum(c for (w, h), c in table.items() if w + h == k) for k in range(2, n + 1)]


def test_staircase_coefficients():
    sp = basic("SP", 6).table()
    for (a, b), c in sp.items():
        # Números de Narayana
        assert c * (a + b - 1) == comb(a + b - 1, a) * comb(a + b - 1, b)
    assert sp[(2, 2)] == 3
    assert sp[(3, 3)] == 20


def test_unimodal_coefficients():
    up = basic("UP", 6).table()
    assert up[(2, 2)] == 4
    assert all(c == comb(a + b - 2, a - 1) ** 2 for (a, b), c in up.items())


def test_convex_totals():
    assert _half_perimeter_totals(convex_family("C", 6), 6) == [1, 2, 7, 28, 120]


def test_pyramid_single_row():
    p = pyramid_family("P", 5)
    assert [p.coefficient(x=a, y=1) for a in range(1, 5)] == [1, 1, 1, 1]


def test_uv_identities(basis):
    assert basis.SP == basis.u * basis.v
    assert basis.u * (1 - basis.v) == basis.X
    assert basis.UP == basis.H


def test_transposed_indent():
    assert indent(1, 6, transposed=True) == S.transpose(indent(1, 6))


def test_based_blocks_add_up():
    # Σ_n P_n = P, truncando en el orden
    vs = VarSet.standard(6)
    blocks = ReducedBlocks(vs, 6)
    total = sum((S.shift(blocks.block("P", n), {"x": n}) for n in range(1, 7)), S.constant(vs, 0, 6))
    assert total.at_order(5) == pyramid_family("P", 5)


def test_exact_heights_partition_the_block():
    vs = VarSet.standard(6)
    blocks = ReducedBlocks(vs, 6)
    whole = blocks.block("H", 2)
    parts = blocks.exact("H", 2, 1) + blocks.at_least("H", 2, 2)
    assert parts == whole


def test_staircase_refined_at_one_is_the_staircase():
    T = side_refined("T", 6)
    one = S.constant(T.vars, 1, 6)
    at_s = S.substitute(T, "s", one)
    at_st = S.substitute(at_s, "t", S.constant(at_s.vars, 1, 6))
    assert at_st == basic("SP", 6)


def test_unknown_keys():
    with pytest.raises(CatalogError):
        build("nope", 4)
    with pytest.raises(CatalogError):
        basic("C", 4)
    with pytest.raises(CatalogError):
        indent(0, 4)


def test_registry_arity():
    assert CATALOG["Cst"].arity == ("s", "t")
    assert CATALOG["F"].aux_dominated == ("b", "s")
    assert build("SP", 4) is build("SP", 4)
