"""
Módulo: cases.py - Generadores de subcasos
===========================================
Las expresiones impresas para subclases de 2-escaleras, 2-unimodales y
2-convexos, expandidas como series truncadas. Cada entrada del registro CASES
indica qué construcción instancia (`section`). La no negatividad de cada
subcaso la comprueban las pruebas, no una bandera del registro.

Convenciones:
- Los factores s/(x-s) se expanden como Σ (s/x)^k dentro de un E con s como
  marcador de Laurent; la unión posterior sobre s usa pendiente 1/2.
- Tras una unión la auxiliar desaparece del VarSet: la segunda etapa se arma
  sobre una Basis nueva en el contexto reducido.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

from . import series as S
from .catalog import DEFAULT_GUARD, Basis, EScope, context, cst, fbs, tst, ust
from .errors import FamilyError
from .operators import StarMask, e_operator, hadamard_join, join_many, phi, settle
from .series import MultiSeries

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

# Orden de Φ_y sobre la pirámide en la corrección de doble conteo
_PHI_DEPTH = 4


@dataclass(frozen=True)
class Case:
    """Subcaso con nombre"""
    name: str
    # section: construcción que instancia (clase, caso, figura)
    section: str
    description: str
    builder: Callable[[int], MultiSeries] = field(compare=False)
    # min_order: orden mínimo aceptado
    min_order: int = 3
    # symmetric: la serie es invariante por x <-> y
    symmetric: bool = False


# =============================================================================
# AUXILIARES
# =============================================================================

def _simple(build: Callable[[Basis], MultiSeries], guard: int = DEFAULT_GUARD + 4
            ) -> Callable[[int], MultiSeries]:
    """Envuelve una fórmula sobre (x, y) como constructor por orden"""
    def builder(order: int) -> MultiSeries:
        vs, M = context(order, guard=guard)
        return build(Basis.of(vs, M)).at_order(order)
    return builder


def _marked(f: MultiSeries, k: int, p: int) -> MultiSeries:
    """y^p·d/dy(f/y^k): distingue una altura para colocar una indentación"""
    return S.shift(S.derivative(S.shift(f, {"y": -k}), "y"), {"y": p})


def _laurent(scope: EScope, aux: str, main: str, start: int = 1) -> MultiSeries:
    """Σ_{k>=start} (aux/main)^k, es decir aux/(main-aux) con start = 1"""
    return S.geometric(scope.vars, {aux: 1, main: -1}, scope.order, start)


def _at_one(f: MultiSeries, name: str) -> MultiSeries:
    return S.substitute(f.declare_aux_dominated(name), name, S.constant(f.vars, 1, f.order))


def _phi_at_one(f: MultiSeries, name: str, n: int) -> MultiSeries:
    """Φ_name^n seguido de name = 1"""
    return _at_one(phi(f, name, n), name)


def _join_cap(order: int) -> int:
    # Las uniones con pendiente 1/2 sólo son exactas hasta (tope+1)/2
    return 2 * order + 4


# =============================================================================
# 2-ESCALERAS
# =============================================================================

def _stair_level_left(B: Basis) -> MultiSeries:
    return B.I() ** 2 * B.v * B.SP * B.Z


def _stair_level_right(B: Basis) -> MultiSeries:
    ratio = B.X / (1 - B.X)
    side = B.SP / (1 - B.u)
    return ratio ** 3 * side * side


def _stair_symmetric(B: Basis) -> MultiSeries:
    return B.I() * B.bar().I() * (B.SP * B.Z) ** 2


def _stair_opposite(below: bool) -> Callable[[int], MultiSeries]:
    """
    wvs/((1-w)(1-s)(1-v-s)) ⊙_s T̄(s,t) ⊙_t wvt/((1-w)(1-t)(1-v-t)), con
    w = u si la indentación superior queda arriba y w = s (o t) si queda abajo.
    """
    def builder(order: int) -> MultiSeries:
        vs, M = context(order, aux=("s", "t"), guard=DEFAULT_GUARD + 2, cap=order + DEFAULT_GUARD + 2)
        B = Basis.of(vs, M)
        sv = B.var("s")
        w = sv if below else B.u
        left = w * B.v * sv / ((1 - w) * (1 - sv) * (1 - B.v - sv))
        # primera unión sobre el perímetro izquierdo s; t sigue libre
        joined = hadamard_join(left, tst(B.bar()), "s")
        # s ya no está en el VarSet: nueva Basis para la segunda etapa
        B2 = Basis.of(joined.vars, M)
        tv = B2.var("t")
        w = tv if below else B2.u
        right = w * B2.v * tv / ((1 - w) * (1 - tv) * (1 - B2.v - tv))
        return hadamard_join(joined, right, "t", rate=Fraction(1)).at_order(order)
    return builder


# =============================================================================
# 2-UNIMODALES
# =============================================================================

def _u_bimodal_left(B: Basis) -> MultiSeries:
    X, Y = B.X, B.Y
    # unimodales de altura >= 3: se restan las de altura 1 y 2
    tail = B.UP - X * Y / (1 - X) - X * (1 + X) * Y * Y / (1 - X) ** 3
    return B.I(2) * _marked(tail, 3, 4)


def _u_bimodal_corner(B: Basis) -> MultiSeries:
    inv = 1 / (1 - B.u)
    return B.I() * B.SP ** 2 * B.Z * (B.Z - inv) * inv


def _u_bimodal_bottom_top(B: Basis) -> MultiSeries:
    scope = EScope(B.vars, B.order, targets=("y",), stars=("u", "v"))
    D = scope.basis()
    x, y, us, vs_ = D.X, D.Y, scope.star("u"), scope.star("v")
    one_y = 1 - y
    inner = (vs_ * x * x * y * y * one_y ** 4 / ((one_y ** 2 - x) * (1 - x - y) ** 4)
             * (us / (1 - us - y) - x * (1 - us) / ((1 - x) * (1 - x - y))))
    # u* y v* se sustituyen por u y v después de E_y
    main = scope.apply(inner, u=B.u, v=B.v)
    X, Y = B.X, B.Y
    return main - B.v * B.SP * B.I(2) * (B.Z - 1 / (1 - X)) * 2 * X * Y / B.delta


def _u_case1_top(B: Basis) -> MultiSeries:
    inner = B.I() * B.SP * B.Z * (B.u * B.Z + 1 / (1 - B.X))
    return B.I() * _marked(inner, 0, 2)


def _u_case1_corner(B: Basis) -> MultiSeries:
    u, v, SP, Z = B.u, B.v, B.SP, B.Z
    return u ** 4 * v * SP * Z * Z / (1 - u) ** 3 * (SP * Z + v / (1 - B.X))


def _u_opp_bottom_adj(B: Basis) -> MultiSeries:
    """
    Fila inferior de altura uno que se pliega, con r = t = 1:
    xrt(1-xt)/(1-xrt)·(xty/(1-xt))²·d/dy(P(xt,y)/y) = x·(xy/(1-x))²·d/dy(P/y)
    """
    X, Y = B.X, B.Y
    ratio = X * Y / (1 - X)
    return X * ratio * ratio * _marked(B.P, 1, 0)


def _u_opp_below(order: int) -> MultiSeries:
    """
    ((E[xy²/(1-x-y)·s/(x-s)] - sv/(1-s-v)·2xy/Δ)·s²/(1-s)³ ⊙_s T̄(s,t)
     - x⁴t⁴y²/((1-xt)²-y)²·(t/(1-xt²) - 1/(1-xt))) ⊙_t t³v/((1-t)³(1-t-v))
    """
    cap = _join_cap(order)
    vs, M = context(order, aux=("s", "t"), guard=2 * order + 8, cap=cap)
    B = Basis.of(vs, M)
    scope = EScope(vs, M, laurent=("s",))
    D = scope.basis()
    x, y = D.X, D.Y
    # s/(x-s) como Σ (s/x)^k, con s marcador de Laurent dentro de E
    folded = scope.apply(x * y * y / (1 - x - y) * _laurent(scope, "s", "x"))
    X, Y, sv = B.X, B.Y, B.var("s")
    left = ((folded - sv * B.v / (1 - sv - B.v) * 2 * X * Y / B.delta)
            * sv * sv / (1 - sv) ** 3)
    # tras E las rebanadas en s bajan de grado a razón 1/2
    joined = hadamard_join(left, tst(B.bar()), "s", slope=HALF)

    B2 = Basis.of(joined.vars, M)
    X, Y, tv = B2.X, B2.Y, B2.var("t")
    xt = X * tv
    base = (1 - xt) ** 2 - Y
    correction = (X ** 4 * tv ** 4 * Y * Y / (base * base)
                  * (tv / (1 - X * tv * tv) - 1 / (1 - xt)))
    right = tv ** 3 * B2.v / ((1 - tv) ** 3 * (1 - tv - B2.v))
    # el operando izquierdo ya no está dominado en t; crece a razón 1/2
    return hadamard_join(joined - correction, right, "t", rate=HALF).at_order(order)


def _u_left_concave(order: int) -> MultiSeries:
    """y·SP²·Z·(E[x²u*/((1-y)(1-x-y)(x-u*)²)] - 2x·SP/Δ²)"""
    # u* en el denominador: la sustitución por Horner pierde casi N órdenes
    vs, M = context(order, guard=order + DEFAULT_GUARD + 2)
    B = Basis.of(vs, M)
    scope = EScope(vs, M, stars=("u",))
    D = scope.basis()
    x, y, us = D.X, D.Y, scope.star("u")
    # x²/(x-u*)² = (Σ_{k>=0} (u*/x)^k)²
    geo = _laurent(scope, "u*", "x", start=0)
    E = scope.apply(us * geo * geo / ((1 - y) * (1 - x - y)), u=B.u)
    out = B.Y * B.SP ** 2 * B.Z * (E - 2 * B.X * B.SP / B.delta ** 2)
    return out.at_order(order)


def _u_left_concave_intersecting(order: int) -> MultiSeries:
    """yu·SP·E[x/((1-y)(1-x-y))·(u*/(x-u*) - x/(1-x))] - 2SP⁴Z³"""
    vs, M = context(order, guard=order + DEFAULT_GUARD + 2)
    B = Basis.of(vs, M)
    scope = EScope(vs, M, stars=("u",))
    D = scope.basis()
    x, y = D.X, D.Y
    # u*/(x-u*) = Σ_{k>=1} (u*/x)^k
    inner = x / ((1 - y) * (1 - x - y)) * (_laurent(scope, "u*", "x") - x / (1 - x))
    E = scope.apply(inner, u=B.u)
    out = B.Y * B.u * B.SP * E - 2 * B.SP ** 4 * B.Z ** 3
    return out.at_order(order)


def _adj_corner_concave(B: Basis) -> MultiSeries:
    # P'(u, y): la pirámide indentada con u en lugar de x
    indented = Basis(B.u, B.Y).P_prime
    return B.I() * indented * (B.SP * B.Z + B.v / (1 - B.X))


def _adj_corner_concave_symmetric(B: Basis) -> MultiSeries:
    X, Y, u, v = B.X, B.Y, B.u, B.v
    return (1 + u) * (1 + v) * B.SP ** 4 * B.Z ** 3 / ((1 - X) * (1 - Y))


def _indent_2d(B: Basis) -> MultiSeries:
    u, v, SP, Z = B.u, B.v, B.SP, B.Z
    return (B.I() * B.bar().I() * (1 - (1 - u) * (1 - v))
            * (SP * Z + u / (1 - B.Y)) * (SP * Z + v / (1 - B.X)))


def _locally_convex_corner(B: Basis) -> MultiSeries:
    return S.shift((B.u + B.v) * B.SP ** 5 * B.Z ** 3, {"x": -1, "y": -1})


def _above_corner(B: Basis) -> MultiSeries:
    u, SP, Z = B.u, B.SP, B.Z
    return (B.I() * B.bar().I() * B.Y * SP * Z
            * (1 / (1 - B.X) + u * Z) * (SP / (1 - B.Y) + u * Z))


def _vertical_left_horizontal_corner(B: Basis) -> MultiSeries:
    X, Y, u, v, SP, Z = B.X, B.Y, B.u, B.v, B.SP, B.Z
    drop = u / (1 - v)
    inner = S.shift(SP ** 3 * Z, {"x": -1, "y": -1}) * drop * (1 / (1 - Y) + v * Z)
    ratio = Y / (1 - Y)
    return B.I() * _marked(inner, 0, 2) + drop * ratio * ratio * v * B.I() * SP * Z


def _xy_symmetric_exclusion(B: Basis) -> MultiSeries:
    return B.X * B.Y * (1 - B.X - B.Y) * B.Z ** 3


def _u1_corner_base(order: int) -> MultiSeries:
    """
    U₁ᶜ(1): (y/(1-t-y))²(t/(1-t))²(y/((1-t)²-y) + 1/(1-y)) ⊙_t Ū(s,t), s = 1.
    1-unimodales con la indentación en la esquina, por su base.
    """
    vs, M = context(order, aux=("s", "t"), guard=DEFAULT_GUARD + 2, cap=order + DEFAULT_GUARD + 2)
    B = Basis.of(vs, M)
    Y, tv = B.Y, B.var("t")
    ratio = Y / (1 - tv - Y)
    side = tv / (1 - tv)
    left = ratio * ratio * side * side * (Y / ((1 - tv) ** 2 - Y) + 1 / (1 - Y))
    # unión sobre t; s queda y se evalúa en 1
    joined = hadamard_join(left, ust(B.bar()), "t")
    return _at_one(joined, "s").at_order(order)


# =============================================================================
# 2-CONVEXOS
# =============================================================================

def _interweaved(order: int) -> MultiSeries:
    """
    x²(1+x)/(1-x)³·((E[xy/(1-x-y)·y/(1-x)·s/(x-s)] - 2xy/Δ·sv/(1-s-v))(s/(1-s))²
    ⊙_s (P(xs,y) - xsy/(1-xs)) - 2xy/Δ·v·I·(P(u,y) - SP))
    """
    cap = _join_cap(order)
    vs, M = context(order, aux=("s",), guard=2 * order + 8, cap=cap)
    B = Basis.of(vs, M)
    scope = EScope(vs, M, laurent=("s",))
    D = scope.basis()
    x, y = D.X, D.Y
    folded = scope.apply(x * y / (1 - x - y) * y / (1 - x) * _laurent(scope, "s", "x"))
    X, Y, sv = B.X, B.Y, B.var("s")
    side = sv / (1 - sv)
    left = (folded - 2 * X * Y / B.delta * sv * B.v / (1 - sv - B.v)) * side * side
    xs = X * sv
    # P(xs, y) sin las pirámides de altura uno
    pyramid = (Basis(xs, Y).P - xs * Y / (1 - xs)).declare_aux_dominated("s")
    joined = hadamard_join(left, pyramid, "s", slope=HALF)

    B2 = Basis.of(joined.vars, M)
    X, Y = B2.X, B2.Y
    # corrección fuera de la unión: P(u, y) - SP
    wrapped = 2 * X * Y / B2.delta * B2.v * B2.I() * (Basis(B2.u, Y).P - B2.SP)
    return (X * X * (1 + X) / (1 - X) ** 3 * (joined - wrapped)).at_order(order)


def _phi_correction(order: int) -> MultiSeries:
    """
    Doble conteo de los 2-convexos con ambas indentaciones sobre el rectángulo:
    Φ_s⁴Φ_t⁴(st·C(s,t)) + 4x/(1-x)·Φ_s³Φ_t⁴(t·Ū(s,t))
    + 2(x/(1-x))²(Φ_s³Φ_t³ T̄(s,t) + Φ_s²Φ_t⁴(t·P(xs,t)/s)), en s = t = 1.
    En el último término t marca la altura de la pirámide y se lee como y.
    """
    # La pirámide P(xs, y) y su Φ_y⁴ consumen unos dos órdenes por derivada
    vs, M = context(order, aux=("s", "t"), guard=DEFAULT_GUARD + 2 * _PHI_DEPTH + 1)
    B = Basis.of(vs, M)
    X, Y, sv, tv = B.X, B.Y, B.var("s"), B.var("t")

    def both(f: MultiSeries, ns: int, nt: int) -> MultiSeries:
        return _phi_at_one(_phi_at_one(f, "s", ns), "t", nt)

    convex = both((sv * tv * cst(B)).declare_aux_dominated("s", "t"), 4, 4)
    unimodal = both((tv * ust(B.bar())).declare_aux_dominated("s", "t"), 3, 4)
    staircase = both(tst(B.bar()), 3, 3)
    xs = X * sv
    # t·P(xs, t)/s con t leído como y
    pyramid = S.shift(Y * Basis(xs, Y).P, {"s": -1})
    pyramid = S.drop_variable(_phi_at_one(pyramid, "s", 2), "t")
    pyramid = phi(pyramid, "y", _PHI_DEPTH)

    B2 = Basis.of(convex.vars, M)
    ratio = B2.X / (1 - B2.X)
    return (convex + 4 * ratio * unimodal + 2 * ratio * ratio * (staircase + pyramid)).at_order(order)


def _simultaneous_join(order: int) -> MultiSeries:
    """
    E[sy³/(1-s-y)·s²/(1-s)⁴·(s/(x-s) - 1/(1-x*))] ⊙_s F(s,t)
    ⊙_t E[x³t/(1-x-t)·t²/(1-t)⁴·(t/(y-t) - 1/(1-y*))] - (SP·Z)³·I·Ī·2xy/Δ
    """
    cap = _join_cap(order)
    vs, M = context(order, aux=("s", "t"), guard=2 * order + 8, cap=cap)
    B = Basis.of(vs, M)

    scope = EScope(vs, M, stars=("x",), laurent=("s",))
    D = scope.basis()
    x, y, sv = D.X, D.Y, scope.var("s")
    left = scope.apply(sv * y ** 3 / (1 - sv - y) * sv * sv / (1 - sv) ** 4
                       * (_laurent(scope, "s", "x") - 1 / (1 - scope.star("x"))))

    scope = EScope(vs, M, stars=("y",), laurent=("t",))
    D = scope.basis()
    x, y, tv = D.X, D.Y, scope.var("t")
    right = scope.apply(x ** 3 * tv / (1 - x - tv) * tv * tv / (1 - tv) ** 4
                        * (_laurent(scope, "t", "y") - 1 / (1 - scope.star("y"))))

    # F(s, t): la base del Ferrers se une con el lado izquierdo, su lado con el derecho
    joined = hadamard_join(left, fbs(B, b="s", s="t"), "s", slope=HALF)
    joined = hadamard_join(joined, S.drop_variable(right, "s"), "t", slope=HALF, rate=Fraction(1))
    B2 = Basis.of(joined.vars, M)
    # polígonos que entran al tercer cuadrante, contados aparte
    excluded = (B2.SP * B2.Z) ** 3 * B2.I() * B2.bar().I() * 2 * B2.X * B2.Y / B2.delta
    return (joined - excluded).at_order(order)


def _q_third_quadrant(order: int) -> MultiSeries:
    """
    E[Q₂(x,y*;p,t)·Q₂(y,x*;q,s) ⊙_{p,q,s,t} Q₁(s,t)·pq/(1-p-q)] con
    Q₁(s,t) = s²t²(s+t)/((1-s)(1-t)(1-s-t)) y
    Q₂(x,y;s,t) = (y/((1-x)²-y) + 1/(1-y))·ty/(1-x-ty)·x²s/(1-xs).
    """
    aux = ("p", "q", "s", "t")
    vs, M = context(order, aux=aux, guard=DEFAULT_GUARD + 2)
    scope = EScope(vs, M, stars=("x", "y"))
    D = scope.basis()
    x, y, xs, ys = D.X, D.Y, scope.star("x"), scope.star("y")
    p, q, sv, tv = (scope.var(a) for a in aux)

    def q2(X: MultiSeries, Y: MultiSeries, a: MultiSeries, b: MultiSeries) -> MultiSeries:
        return ((Y / ((1 - X) ** 2 - Y) + 1 / (1 - Y)) * b * Y / (1 - X - b * Y)
                * X * X * a / (1 - X * a))

    left = (q2(x, ys, p, tv) * q2(y, xs, q, sv)).declare_aux_dominated(*aux)
    right = (sv * sv * tv * tv * (sv + tv) / ((1 - sv) * (1 - tv) * (1 - sv - tv))
             * p * q / (1 - p - q))
    # unión simultánea dentro del contexto doblado, antes de E
    joined = join_many(left, right, aux)
    base = vs
    for a in aux:
        base = base.without(a)
    # E al final: x* e y* se funden con x e y
    folded = e_operator(joined, scope.targets, StarMask.of("x", "y"))
    return settle(folded, base, M).at_order(order)


# =============================================================================
# REGISTRO
# =============================================================================

def _registry() -> Dict[str, Case]:
    cases: List[Case] = [
        Case("stair_level_left", "2-escaleras, lados opuestos, a la misma altura",
             "indentación superior a la izquierda", _simple(_stair_level_left)),
        Case("stair_level_right", "2-escaleras, lados opuestos, a la misma altura",
             "indentación superior a la derecha", _simple(_stair_level_right)),
        Case("stair_opposite_above", "2-escaleras, lados opuestos",
             "indentación superior por encima de la inferior", _stair_opposite(below=False)),
        Case("stair_opposite_below", "2-escaleras, lados opuestos",
             "indentación superior por debajo de la inferior", _stair_opposite(below=True)),
        Case("stair_symmetric", "2-escaleras, direcciones distintas en lados opuestos",
             "caso simétrico con la indentación izquierda arriba", _simple(_stair_symmetric),
             symmetric=True),
        Case("u_bimodal_left", "2-unimodales bimodales", "indentación a la izquierda",
             _simple(_u_bimodal_left, DEFAULT_GUARD + 6)),
        Case("u_bimodal_corner", "2-unimodales bimodales",
             "indentación en la esquina, factor inferior más a la derecha",
             _simple(_u_bimodal_corner)),
        Case("u_bimodal_bottom_top", "2-unimodales bimodales",
             "indentación abajo, factor superior más a la derecha",
             _simple(_u_bimodal_bottom_top)),
        Case("u_case1_top", "2-unimodales, misma dirección y mismo lado",
             "una indentación a la izquierda y otra en la esquina", _simple(_u_case1_top)),
        Case("u_case1_corner", "2-unimodales, misma dirección y mismo lado",
             "ambas indentaciones en la esquina", _simple(_u_case1_corner)),
        Case("u_opp_bottom_adj", "2-unimodales, misma dirección en lados opuestos",
             "fila inferior plegada junto a la indentación", _simple(_u_opp_bottom_adj)),
        Case("u_opp_below", "2-unimodales, misma dirección en lados opuestos",
             "indentación inferior por debajo de la superior", _u_opp_below),
        Case("u_left_concave", "2-unimodales, direcciones distintas a la izquierda",
             "localmente cóncavo, indentaciones disjuntas", _u_left_concave),
        Case("u_left_concave_intersecting", "2-unimodales, direcciones distintas a la izquierda",
             "localmente cóncavo, indentaciones que se cortan", _u_left_concave_intersecting),
        Case("adj_corner_concave", "2-unimodales, direcciones distintas en la esquina",
             "localmente cóncavo: I·P'(u,y)·(SP·Z + v/(1-x))", _simple(_adj_corner_concave)),
        Case("adj_corner_concave_symmetric", "2-unimodales, direcciones distintas en la esquina",
             "localmente cóncavo, forma simétrica", _simple(_adj_corner_concave_symmetric),
             symmetric=True),
        Case("indent_2d", "2-unimodales, direcciones distintas en la esquina",
             "indentación bidimensional", _simple(_indent_2d), symmetric=True),
        Case("locally_convex_corner", "2-unimodales, direcciones distintas en la esquina",
             "localmente convexo: (u+v)SP⁵Z³/xy", _simple(_locally_convex_corner), symmetric=True),
        Case("above_corner", "2-unimodales, horizontal a la izquierda y vertical en la esquina",
             "indentación izquierda por encima", _simple(_above_corner)),
        Case("vertical_left_horizontal_corner", "2-unimodales, vertical a la izquierda y "
             "horizontal en la esquina", "con el caso de la joroba que se corta",
             _simple(_vertical_left_horizontal_corner)),
        Case("xy_symmetric_exclusion", "2-unimodales, vertical a la izquierda y horizontal abajo",
             "exclusión de los lazos unidimensionales: xy(1-x-y)/Δ^(3/2)",
             _simple(_xy_symmetric_exclusion), symmetric=True),
        Case("u1_corner_base", "2-convexos, direcciones distintas en lados adyacentes",
             "U₁ᶜ(s) en s = 1", _u1_corner_base),
        Case("interweaved", "2-convexos, misma dirección en lados opuestos",
             "indentaciones entrelazadas", _interweaved),
        Case("phi_correction", "2-convexos, misma dirección en lados opuestos",
             "doble conteo con ambas indentaciones sobre el rectángulo", _phi_correction),
        Case("simultaneous_join", "2-convexos, direcciones distintas en lados opuestos",
             "sin entrar al tercer cuadrante (uniones simultáneas)", _simultaneous_join),
        Case("q_third_quadrant", "2-convexos, direcciones distintas en el mismo lado",
             "localmente cóncavo por el tercer cuadrante (caso de inclusión)", _q_third_quadrant,
             min_order=8, symmetric=True),
    ]
    return {c.name: c for c in cases}


CASES: Dict[str, Case] = _registry()


def case_generator(name: str, order: int) -> MultiSeries:
    """Expande el subcaso `name` a orden N"""
    case = CASES.get(name)
    if case is None:
        raise FamilyError(f"caso desconocido: {name}")
    if order < case.min_order:
        raise FamilyError(f"el caso {name} necesita orden >= {case.min_order} (orden={order})")
    logger.debug("caso %s (%s) a orden %d", name, case.section, order)
    return case.builder(order)
