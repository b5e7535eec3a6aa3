"""
Módulo: appendix.py - Indentaciones múltiples a la izquierda
=============================================================
Escaleras y unimodales con m indentaciones verticales en el lado izquierdo, a
alturas distintas:

    (y^(m+1)/m!)·d/dy[ I^m · d/dy(Q/y) ],   Q = SP (escaleras) o UP (unimodales)

con I = (SP/y)² = u²/(1-u)². La derivada exterior actúa sobre el producto.

También:
- two_unimodal_same: el caso m = 2 por la regla del producto, como segundo
  camino de cálculo.
- remark_form: con sympy, la forma x(A + √Δ·B)/(y^(m+1)Δ^(m+1/2)) y los
  grados de A y B.
- bracketing_comparison: la fórmula con m = 1 frente a I·y²·d/dy(SP/y).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import factorial
from typing import Optional, Tuple

import sympy as sp

from . import series as S
from .catalog import DEFAULT_GUARD, Basis, context
from .errors import FamilyError
from .series import MultiSeries

logger = logging.getLogger(__name__)

INDENT_DEPTHS = (1, 2, 3)
KINDS = ("staircase", "unimodal")


def _check(m: int, kind: str) -> None:
    if m < 1:
        raise FamilyError(f"m debe ser >= 1 (m={m})")
    if kind not in KINDS:
        raise FamilyError(f"tipo desconocido: {kind} (hay {KINDS})")


def _base_q(B: Basis, kind: str) -> MultiSeries:
    """q = Q/y"""
    return S.shift(B.SP if kind == "staircase" else B.UP, {"y": -1})


def m_left_indents(m: int, kind: str, order: int) -> MultiSeries:
    """
    m-escaleras (o m-unimodales) con todas sus indentaciones verticales a la
    izquierda, a alturas distintas.
    Parámetros: m (número de indentaciones), kind ("staircase" o
    "unimodal"), order (N)
    """
    _check(m, kind)
    vs, M = context(order, guard=DEFAULT_GUARD + 4)
    B = Basis.of(vs, M)
    # I^m·q' y después la derivada exterior sobre todo el producto
    inner = B.I() ** m * S.derivative(_base_q(B, kind), "y")
    out = S.shift(S.derivative(inner, "y"), {"y": m + 1}) / factorial(m)
    return out.at_order(order)


def two_unimodal_same(order: int, kind: str = "unimodal") -> MultiSeries:
    """(y³/2)·(2·I·I'·q' + I²·q''): el caso m = 2 desarrollado"""
    _check(2, kind)
    vs, M = context(order, guard=DEFAULT_GUARD + 4)
    B = Basis.of(vs, M)
    I = B.I()
    dq = S.derivative(_base_q(B, kind), "y")
    # d/dy(I²·q') = 2·I·I'·q' + I²·q''
    expanded = 2 * I * S.derivative(I, "y") * dq + I * I * S.derivative(dq, "y")
    return (S.shift(expanded, {"y": 3}) / 2).at_order(order)


# =============================================================================
# FORMA CERRADA (SIMBÓLICA)
# =============================================================================

@dataclass
class RemarkReport:
    """Grados de A y B en x(A + √Δ·B)/(y^(m+1)Δ^(m+1/2))"""
    m: int
    kind: str
    # polynomial: A y B resultaron polinomios
    polynomial: bool
    # degrees: (deg_x A, deg_y A, deg_x B, deg_y B); None si no son polinomios
    degrees: Optional[Tuple[int, int, int, int]] = None

    @property
    def bounds(self) -> Tuple[int, int]:
        # (grado máximo de A, grado máximo de B) en cada variable
        return 4 * self.m - 1, 4 * self.m - 2

    @property
    def within_bounds(self) -> bool:
        if not self.polynomial or self.degrees is None:
            return False
        a, b = self.bounds
        ax, ay, bx, by = self.degrees
        return max(ax, ay) <= a and max(bx, by) <= b


def remark_form(m: int, kind: str = "unimodal") -> RemarkReport:
    """
    Evalúa la fórmula en x, y y r = √Δ, multiplica por y^(m+1)r^(2m+1)/x y
    separa la parte par y la impar en r usando r² = Δ.
    """
    _check(m, kind)
    x, y, r = sp.symbols("x y r")
    delta = 1 - 2 * x - 2 * y - 2 * x * y + x ** 2 + y ** 2
    d_delta = sp.diff(delta, y)

    def dy(f):
        # d/dy con r = √Δ(x, y)
        return sp.diff(f, y) + sp.diff(f, r) * d_delta / (2 * r)

    SP = (1 - x - y - r) / 2
    q = (SP if kind == "staircase" else x * y / r) / y
    I = (SP / y) ** 2
    G = y ** (m + 1) / sp.factorial(m) * dy(I ** m * dy(q))
    # G·y^(m+1)·r^(2m+1)/x = A + r·B si la forma es la esperada
    scaled = sp.together(G * y ** (m + 1) * r ** (2 * m + 1) / x)
    num, den = sp.fraction(scaled)
    modulus = r ** 2 - delta

    # Racionalizar: den = a + b·r  ->  multiplicar por a - b·r
    den_r = sp.Poly(sp.rem(sp.expand(den), modulus, r), r)
    a, b = den_r.coeff_monomial(1), den_r.coeff_monomial(r)
    num = sp.rem(sp.expand(num * (a - b * r)), modulus, r)
    plain = sp.expand(a * a - b * b * delta)
    num_r = sp.Poly(num, r)
    # parte par en r -> A, parte impar -> B
    A = sp.cancel(num_r.coeff_monomial(1) / plain)
    B = sp.cancel(num_r.coeff_monomial(r) / plain)
    logger.debug("forma cerrada m=%d %s calculada", m, kind)

    # un denominador con x o y: A y B no son polinomios
    if not all(sp.fraction(e)[1].free_symbols == set() for e in (A, B)):
        return RemarkReport(m, kind, False)
    pa, pb = sp.Poly(A, x, y), sp.Poly(B, x, y)
    return RemarkReport(m, kind, True, (pa.degree(x), pa.degree(y), pb.degree(x), pb.degree(y)))


# =============================================================================
# CORCHETES CON m = 1
# =============================================================================

@dataclass
class BracketingReport:
    """y²·d/dy[I·q'] frente a I·y²·q' con q = SP/y"""
    order: int
    agree: bool
    # first_difference: (W, H, fórmula de indentaciones, escalera bimodal)
    first_difference: Optional[Tuple[int, int, int, int]] = None


def bracketing_comparison(order: int = 8) -> BracketingReport:
    """Compara la fórmula con m = 1 con la de escaleras bimodales"""
    from .families import staircase_bimodal

    appendix = m_left_indents(1, "staircase", order).table()
    bimodal = staircase_bimodal(1, order).table()
    for key in sorted(set(appendix) | set(bimodal), key=lambda k: (k[0] + k[1], k)):
        a, b = appendix.get(key, 0), bimodal.get(key, 0)
        if a != b:
            return BracketingReport(order, False, (key[0], key[1], a, b))
    return BracketingReport(order, True)
