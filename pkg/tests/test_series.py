import random

import pytest

from src import series as S
from src.errors import SeriesError
from src.series import MultiSeries, VarSet


def _x(vs, n=6):
    return S.variable(vs, "x", n)


def _y(vs, n=6):
    return S.variable(vs, "y", n)


def _random_unit(rng, vs, n):
    """Polinomio aleatorio con término constante 1 y coeficientes pequeños"""
    terms = {(0, 0): 1}
    for _ in range(6):
        a, b = rng.randint(0, 3), rng.randint(0, 3)
        if 0 < a + b <= n:
            terms[(a, b)] = rng.randint(-3, 3)
    terms[(0, 0)] = 1
    return MultiSeries(vs, n, terms)


def test_geometric_inverse(vs):
    f = S.inverse(1 - _x(vs))
    assert all(f.coefficient(x=k) == 1 for k in range(7))
    assert f.coefficient(x=2, y=1) == 0


def test_sqrt_matches_known_expansion(vs):
    f = S.sqrt(1 - 4 * _x(vs))
    expected = [1, -2, -2, -4, -10, -28]
    assert [f.coefficient(x=k) for k in range(6)] == expected


def test_sqrt_requires_unit_constant(vs):
    with pytest.raises(SeriesError):
        S.sqrt(2 - _x(vs))


def test_derivative_lowers_precision(vs):
    f = S.derivative(_x(vs) ** 3, "x")
    assert f.prec == 5
    assert f.coefficient(x=2) == 3
    with pytest.raises(SeriesError):
        f.at_order(6)
    assert f.at_order(5).order == 5


def test_shift_by_negative_monomial(vs):
    x = _x(vs)
    assert S.shift(x * x, {"x": -1}) == x


def test_division_must_stay_a_power_series(vs):
    x, y = _x(vs), _y(vs)
    assert S.div(x * y, x) == y
    with pytest.raises(SeriesError):
        S.div(y, x)


def test_transpose_and_symmetry(vs):
    x, y = _x(vs), _y(vs)
    f = x + 2 * y
    assert S.transpose(f) == y + 2 * x
    assert not f.is_symmetric()
    assert (x * y + x + y).is_symmetric()


def test_geometric_with_capped_aux():
    vs = VarSet.standard(5, aux=("s",), cap=3)
    f = S.geometric(vs, {"s": 1}, 5)
    assert len(f.terms) == 3
    with pytest.raises(SeriesError):
        S.geometric(VarSet.standard(5), {"x": 1, "y": -1}, 5)


def test_declare_aux_dominated_checks_terms():
    vs = VarSet.standard(5, aux=("s",), cap=5)
    s = S.variable(vs, "s", 5)
    x = S.variable(vs, "x", 5)
    assert "s" in (s * x).declare_aux_dominated("s").dominated
    with pytest.raises(SeriesError):
        s.declare_aux_dominated("s")


def test_evaluation_at_one_requires_dominance():
    vs = VarSet.standard(5, aux=("s",), cap=5)
    s = S.variable(vs, "s", 5)
    x = S.variable(vs, "x", 5)
    one = S.constant(vs, 1, 5)
    with pytest.raises(SeriesError):
        S.substitute(s * x, "s", one)
    f = (s * x + x).declare_aux_dominated("s")
    g = S.substitute(f, "s", one)
    assert g.vars.names == ("x", "y")
    assert g.coefficient(x=1) == 2


def test_composition(vs):
    x, y = _x(vs), _y(vs)
    f = S.inverse(1 - x)
    g = S.substitute(f, "x", x * y)
    assert g.coefficient(x=2, y=2) == 1
    assert g.coefficient(x=2, y=1) == 0


def test_solve_uv_agrees_with_closed_form(basis):
    u, v = S.solve_uv(6)
    assert u == basis.u
    assert v == basis.v


def test_canonical_text_roundtrip(basis):
    f = basis.SP.at_order(6)
    text = S.to_canonical_text(f)
    assert S.from_canonical_text(text, f.vars, 6) == f


@pytest.mark.parametrize("seed", range(5))
def test_ring_identities(seed, vs):
    rng = random.Random(seed)
    f, g, h = (_random_unit(rng, vs, 6) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * S.inverse(f) == 1
    assert S.sqrt(f * f) == f


def test_mismatched_contexts_are_rejected(vs):
    other = VarSet.standard(6, aux=("s",))
    with pytest.raises(SeriesError):
        _x(vs) + S.variable(other, "x", 6)


def test_product_drops_capped_auxiliary_terms():
    vs = VarSet.standard(4, aux=("s",), cap=1)
    f = S.from_terms(vs, 4, {(0, 0, 0): 1, (1, 0, 1): 1})
    # x²s² supera el tope de s y no aparece
    assert (f * f).terms == {(0, 0, 0): 1, (1, 0, 1): 2}


def test_product_beyond_order_vanishes():
    vs = VarSet.standard(4)
    g = S.variable(vs, "x", 4) + S.variable(vs, "y", 4)
    assert (g ** 5).is_zero()
    assert (g ** 4).coefficient(x=2, y=2) == 6
