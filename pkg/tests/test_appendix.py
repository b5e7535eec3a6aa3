import pytest

from src.appendix import KINDS, bracketing_comparison, m_left_indents, remark_form, two_unimodal_same
from src.errors import FamilyError


def test_two_indents_expanded_form():
    assert m_left_indents(2, "unimodal", 6) == two_unimodal_same(6)
    assert m_left_indents(2, "staircase", 6) == two_unimodal_same(6, "staircase")


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_left_indents_nonnegative(m, kind):
    assert m_left_indents(m, kind, 6).is_nonnegative_integral()


def test_invalid_arguments():
    with pytest.raises(FamilyError):
        m_left_indents(0, "unimodal", 6)
    with pytest.raises(FamilyError):
        m_left_indents(1, "convex", 6)


def test_single_indent_bracketing_differs():
    report = bracketing_comparison(8)
    assert not report.agree
    w, h, a, b = report.first_difference
    assert a != b and w + h <= 8


@pytest.mark.slow
def test_remark_form_single_indent():
    assert not remark_form(1).polynomial
    assert not remark_form(1).within_bounds


# Grados (A_x, A_y, B_x, B_y): el grado en y supera la cota en uno
@pytest.mark.slow
@pytest.mark.parametrize("m, degrees", [(2, (7, 8, 6, 7)), (3, (11, 12, 10, 11))])
def test_remark_form_unimodal_degrees(m, degrees):
    report = remark_form(m, "unimodal")
    assert report.polynomial
    assert report.degrees == degrees
    assert report.bounds == (4 * m - 1, 4 * m - 2)
    assert not report.within_bounds


@pytest.mark.slow
@pytest.mark.parametrize("m", [2, 3])
def test_remark_form_staircase_not_polynomial(m):
    report = remark_form(m, "staircase")
    assert not report.polynomial
    assert report.degrees is None
