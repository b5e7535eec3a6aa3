import random
from fractions import Fraction

import pytest

from src import series as S
from src.catalog import Basis, EScope
from src.errors import OperatorError
from src.operators import StarMask, doubled, e_half_sum, e_operator, hadamard_join, pfs_sides, phi
from src.series import MultiSeries, VarSet


def test_e_keeps_even_exponents(vs, basis):
    scope = EScope(vs, 6)
    D = scope.basis()
    assert scope.apply(1 / (1 - D.X)) == 1 / (1 - basis.X)


def test_e_merges_frozen_stars(vs, basis):
    scope = EScope(vs, 6, stars=("x",))
    D = scope.basis()
    xs = scope.star("x")
    assert scope.apply(xs * D.Y ** 2) == basis.X * basis.Y
    assert scope.apply(xs * D.Y).is_zero()


def test_doubled_weights(vs):
    big = doubled(vs, targets=("y",), stars=("u",))
    assert big.weight("x") == 2
    assert big.weight("y") == 1
    assert big.weight("u*") == 2


def test_e_rejects_missing_target(vs):
    with pytest.raises(OperatorError):
        e_operator(S.variable(vs, "x", 6), ("z",))


@pytest.mark.parametrize("seed", range(3))
def test_half_sum_form_agrees(seed):
    rng = random.Random(seed)
    vs = VarSet.standard(8)
    terms = {(rng.randint(0, 4), rng.randint(0, 4)): rng.randint(-5, 5) for _ in range(10)}
    f = MultiSeries(vs, 8, terms)
    assert e_half_sum(f, ("x", "y")) == e_operator(f, ("x", "y"))


def _join_context():
    vs = VarSet.standard(6, aux=("s",), cap=6)
    f = S.geometric(vs, {"x": 1, "s": 1}, 6).declare_aux_dominated("s")
    g = S.geometric(vs, {"y": 1, "s": 1}, 6, start=0)
    return vs, f, g


def test_hadamard_join_diagonal():
    vs, f, g = _join_context()
    joined = hadamard_join(f, g, "s")
    target = vs.without("s")
    expected = MultiSeries(target, 6, {(1, 1): 1, (2, 2): 1, (3, 3): 1})
    assert joined.vars == target
    assert joined == expected


def test_hadamard_join_is_symmetric_in_its_operands():
    _, f, g = _join_context()
    assert hadamard_join(f, g, "s") == hadamard_join(g, f, "s")


def test_hadamard_join_needs_a_dominated_operand():
    _, _, g = _join_context()
    with pytest.raises(OperatorError):
        hadamard_join(g, g, "s")


def test_hadamard_join_rejects_steep_slope():
    _, f, g = _join_context()
    with pytest.raises(OperatorError):
        hadamard_join(f, g, "s", slope=Fraction(1))


def test_phi_shifts_coefficients(vs):
    x = S.variable(vs, "x", 6)
    assert phi(x ** 3, "x", 2) == 3 * x
    with pytest.raises(OperatorError):
        phi(x, "x", -1)


def test_partial_fraction_sides_agree():
    vs = VarSet.standard(6, aux=("s",), cap=6)
    lhs, rhs = pfs_sides(S.variable(vs, "x", 6), "s")
    assert lhs == rhs


def test_star_mask_original():
    mask = StarMask.of("x", "u")
    assert mask.frozen == frozenset({"x*", "u*"})
    assert mask.original("u*") == "u"
