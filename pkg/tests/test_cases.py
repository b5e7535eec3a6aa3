import pytest

from src.cases import CASES, case_generator
from src.errors import FamilyError

# Casos que se arman directamente sobre (x, y), sin uniones
SIMPLE = [
    "stair_level_left", "stair_level_right", "stair_symmetric", "u_bimodal_left", "u_bimodal_corner",
    "u_bimodal_bottom_top", "u_case1_top", "u_case1_corner", "u_opp_bottom_adj", "adj_corner_concave",
    "adj_corner_concave_symmetric", "indent_2d", "locally_convex_corner", "above_corner",
    "vertical_left_horizontal_corner", "xy_symmetric_exclusion",
]

SIMPLE_SYMMETRIC = [
    "stair_symmetric", "adj_corner_concave_symmetric", "indent_2d", "locally_convex_corner",
    "xy_symmetric_exclusion",
]

# Casos con E, uniones de Hadamard o Φ sobre auxiliares
JOINED = [
    "stair_opposite_above", "stair_opposite_below", "u_opp_below", "u_left_concave",
    "u_left_concave_intersecting", "u1_corner_base", "interweaved", "phi_correction",
    "simultaneous_join",
]


def test_registry_structure():
    assert len(CASES) == 26
    for name, case in CASES.items():
        assert case.name == name
        assert case.section and case.description
        assert case.min_order >= 3
    # todos los casos quedan cubiertos por alguna prueba de no negatividad
    assert set(SIMPLE) | set(JOINED) | {"q_third_quadrant"} == set(CASES)


def test_unknown_case():
    with pytest.raises(FamilyError):
        case_generator("no_such_case", 6)


def test_order_below_minimum():
    with pytest.raises(FamilyError):
        case_generator("q_third_quadrant", 6)


def test_corner_concave_forms_agree():
    assert case_generator("adj_corner_concave", 6) == case_generator("adj_corner_concave_symmetric", 6)


@pytest.mark.parametrize("name", SIMPLE_SYMMETRIC)
def test_symmetric_cases(name):
    assert CASES[name].symmetric
    assert case_generator(name, 6).is_symmetric()


@pytest.mark.parametrize("name", SIMPLE)
def test_simple_cases_nonnegative(name):
    f = case_generator(name, 6)
    assert f.vars.names == ("x", "y")
    assert f.is_nonnegative_integral()


@pytest.mark.slow
@pytest.mark.parametrize("name", JOINED)
def test_joined_cases_nonnegative(name):
    f = case_generator(name, 6)
    assert f.vars.names == ("x", "y")
    assert f.is_nonnegative_integral()


@pytest.mark.slow
def test_phi_correction_exact_to_requested_order():
    f = case_generator("phi_correction", 6)
    assert f.prec >= 6
    assert case_generator("phi_correction", 7).at_order(6) == f


@pytest.mark.slow
def test_third_quadrant_case():
    f = case_generator("q_third_quadrant", 8)
    assert f.is_symmetric()
    assert f.is_nonnegative_integral()
