"""
Módulo: families.py - Familias de polígonos m-convexos
=======================================================
Los resultados principales expresados como series truncadas:

- Polígonos bimodales m-convexos: la suma de los nueve casos G1..G9 de la
  factorización de Lin (m = 1, 2, 3) y la forma cerrada impresa para m = 2.
- Escaleras bimodales m-convexas: I_m·y²·d/dy(SP/y).
- 1-unimodales (indentación a la izquierda, en la esquina o abajo) y
  1-convexos.
- Formas cerradas de 2-escaleras, 2-unimodales y 2-convexos a partir de los
  polinomios A, B de data/polinomios.
- El registro FAMILIES que usan la CLI y las comparaciones con el oráculo.

Convención de orientación: las sumas G_i y la expresión de 1-convexos cuentan
polígonos cuya indentación se abre hacia ARRIBA (lado superior). La clase
completa suma el reflejo vertical (mismo W, H) y las transpuestas:
2·(F + Fᵀ).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from tqdm import tqdm

from . import series as S
from .catalog import DEFAULT_GUARD, Basis, EScope, ReducedBlocks, context
from .errors import FamilyError, RegularityError
from .oracle import ClassFilter
from .polydata import load_named
from .series import MultiSeries, VarSet

logger = logging.getLogger(__name__)

# Profundidades de indentación con suma bimodal implementada
BIMODAL_DEPTHS = (1, 2, 3)

ONE_UNIMODAL_POSITIONS = ("left", "corner", "bottom")


# =============================================================================
# SUMA BIMODAL G1..G9
# =============================================================================

# (nombre, multiplicidad, factor izquierdo, factor central, factor derecho).
# Prefijos: "T:" cola Σ_j x^j X̃_{k+j}; "W1:" y "W2:" colas con pesos j y
# j(j+1)/2 (índices libres que empiezan en 0). Los factores izquierdos "L_"
# tienen altura exactamente m y comparten filas con el derecho, así que entran
# sin su y^m.
G_TERMS: Tuple[Tuple[str, int, str, str, str], ...] = (
    ("G1", 1, "T:L_H", "T:P", "T:H2m"),
    ("G2", 2, "L_P", "W1:H", "T:Hm+"),
    ("G3", 2, "T:L_H", "T:P", "HPm+"),
    ("G4", 2, "L_P", "W1:H", "HPm+"),
    ("G5", 2, "T:L_H", "W1:H", "Pm1+"),
    ("G6", 1, "L_P", "W2:R", "P2m"),
    ("G7", 2, "L_HP", "T:P", "T:Hm1+"),
    ("G8", 1, "L_HP", "T:P", "HP8"),
    ("G9", 2, "L_HP", "W1:P", "Pm1+"),
)


class BimodalSum:
    """
    Σ_{b,d>=1} x^(b+d)·F1(b)·F2(b+d)·F3(d) para cada G_i.

    Las sumas sobre a, c, e se absorben en colas de los bloques reducidos
    X̃_n = X_n/x^n; el bucle restante agrupa por k = b + d. Los bloques se
    necesitan hasta el índice N y las colas valen 0 desde N.
    """

    def __init__(self, m: int, order: int, block: str = "C", progress: bool = False):
        if m not in BIMODAL_DEPTHS:
            raise FamilyError(f"suma bimodal sólo para m en {BIMODAL_DEPTHS} (m={m})")
        if order < 2 * m + 1:
            raise FamilyError(f"la suma bimodal con m={m} necesita orden >= {2 * m + 1}")
        if block not in ("H", "C"):
            raise FamilyError(f"bloque R desconocido: {block}")
        self.m = m
        self.order = order
        self.block = block
        self.progress = progress
        # los factores de altura exacta m consumen m órdenes de y
        self.vars, self.M = context(order, guard=m + DEFAULT_GUARD)
        self.blocks = ReducedBlocks(self.vars, self.M)
        self.x = self.blocks.B.X
        self._values: Dict[str, Dict[int, MultiSeries]] = {}

    def _zero(self) -> MultiSeries:
        return S.constant(self.vars, 0, self.M)

    def _base(self, key: str, n: int) -> MultiSeries:
        blocks, m = self.blocks, self.m
        # Factores izquierdos: rebanada de altura m, sin el y^m
        if key == "L_H":
            return S.coeff_slice(blocks.block("H", n), "y", m)
        if key == "L_P":
            return S.coeff_slice(blocks.block("P", n), "y", m)
        if key == "L_HP":
            return S.coeff_slice(blocks.block("H", n) - blocks.block("P", n), "y", m)
        if key in ("H", "P"):
            return blocks.block(key, n)
        # R: bloque elegido en el constructor (C por defecto)
        if key == "R":
            return blocks.block(self.block, n)
        # Factores derechos: altura al menos m, con la altura m contada una vez
        if key == "H2m":
            return 2 * blocks.at_least("H", n, m) - blocks.exact("H", n, m)
        if key == "Hm+":
            return blocks.at_least("H", n, m)
        if key == "Hm1+":
            return blocks.at_least("H", n, m + 1)
        if key == "HPm+":
            return blocks.at_least("H", n, m) - blocks.at_least("P", n, m)
        if key == "Pm1+":
            return blocks.at_least("P", n, m + 1)
        if key == "P2m":
            return 2 * blocks.at_least("P", n, m) - blocks.exact("P", n, m)
        if key == "HP8":
            return (2 * (blocks.at_least("H", n, m) - blocks.at_least("P", n, m))
                    - (blocks.exact("H", n, m) - blocks.exact("P", n, m)))
        raise FamilyError(f"factor bimodal desconocido: {key}")

    def values(self, key: str) -> Dict[int, MultiSeries]:
        """Factor `key` para los índices 1..N (con sus colas si lleva prefijo)"""
        if key in self._values:
            return self._values[key]
        N = self.order
        if key.startswith(("T:", "W1:", "W2:")):
            prefix, inner = key.split(":", 1)
            source = self.values(inner if prefix == "T" else
                                 ("T:" if prefix == "W1" else "W1:") + inner)
            # Las colas se acumulan desde N hacia abajo: tail(k) = x·(src(k+1) + tail(k+1))
            out = {N: self._zero()}
            for k in range(N - 1, 0, -1):
                if prefix == "T":
                    out[k] = self.x * (source[k + 1] + out[k + 1])
                else:
                    # W1 acumula las colas de T (peso j); W2 las de W1 (peso j(j+1)/2)
                    out[k] = source[k] + self.x * out[k + 1]
        else:
            out = {n: self._base(key, n) for n in range(1, N + 1)}
        self._values[key] = out
        return out

    def term(self, name: str, coefficient: int, first: str, middle: str, last: str) -> MultiSeries:
        F1, F2, F3 = self.values(first), self.values(middle), self.values(last)
        part = self._zero()
        # k = b + d; x^k se aplica una vez por k
        for k in range(2, self.order):
            # convolución en b de los factores izquierdo y derecho
            inner = S.sum_series((F1[b] * F3[k - b] for b in range(1, k)), self.vars, self.M)
            part = part + S.shift(F2[k] * inner, {"x": k})
        logger.debug("bimodal m=%d: %s listo", self.m, name)
        return coefficient * part

    def build(self) -> MultiSeries:
        total = self._zero()
        for spec in tqdm(G_TERMS, desc=f"bimodal m={self.m}", unit="caso", disable=not self.progress):
            total = total + self.term(*spec)
        return total.at_order(self.order)


def bimodal_sum(m: int, order: int, block: str = "C", progress: bool = False) -> MultiSeries:
    """
    Polígonos bimodales m-convexos con la indentación en el lado superior.
    Parámetros: m (1..3), order (N >= 2m+1), block ("C" o "H" para el
    factor R del caso 6)
    """
    return BimodalSum(m, order, block, progress).build()


def bimodal_total(m: int, order: int, block: str = "C") -> MultiSeries:
    """Bimodales m-convexos en las cuatro orientaciones: 2·(G + Gᵀ)"""
    G = bimodal_sum(m, order, block)
    return 2 * (G + S.transpose(G))


# Signos de los dos sumandos de la forma cerrada bimodal que se prueban
SIGN_VARIANTS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def bimodal_closed_2(order: int, signs: Tuple[int, int] = (1, 1)) -> MultiSeries:
    """
    Forma cerrada impresa para bimodales 2-convexos:
    2x²A/((1-x)³((1-x)²-y)Δ^(5/2)) + x²B/((1-x)^5((1-x)²-y)³Δ³)
    Parámetros: order (N >= 5), signs (signo de cada sumando; (1, 1) es la
    forma impresa)
    """
    if order < 5:
        raise FamilyError("la forma cerrada bimodal necesita orden >= 5")
    if tuple(signs) not in SIGN_VARIANTS:
        raise FamilyError(f"signos inválidos: {signs} (hay {SIGN_VARIANTS})")
    vs, M = context(order)
    B = Basis.of(vs, M)
    A = load_named("bimodal2_A").to_series(vs, M)
    Bc = load_named("bimodal2_B").to_series(vs, M)
    X, Z = B.X, B.Z
    a = 1 - X
    stack = a * a - B.Y
    first = 2 * X * X * A * Z ** 5 / (a ** 3 * stack)
    second = X * X * Bc * Z ** 6 / (a ** 5 * stack ** 3)
    return (signs[0] * first + signs[1] * second).at_order(order)


def bimodal_closed_variants(order: int) -> Dict[Tuple[int, int], List[Tuple[int, int, int, int]]]:
    """
    Compara la suma bimodal m = 2 con la forma cerrada bajo cada variante de
    signos.
    Retorna: {signos: [(W, H, suma, forma cerrada), ...]} con las diferencias
    """
    G = bimodal_sum(2, order).table()
    out = {}
    for signs in SIGN_VARIANTS:
        closed = bimodal_closed_2(order, signs).table()
        keys = sorted(set(G) | set(closed), key=lambda k: (k[0] + k[1], k))
        out[signs] = [(w, h, G.get((w, h), 0), closed.get((w, h), 0))
                      for w, h in keys if G.get((w, h), 0) != closed.get((w, h), 0)]
    return out


def bimodal_closed_3_denominator(order: int) -> Tuple[MultiSeries, int]:
    """
    Denominador común de la forma impresa para m = 3,
    (1-x)^9((1-x)²-y)^11·y^4·Δ³, y la potencia de x que queda arriba (1).
    Por él, la suma bimodal se vuelve A'·√Δ + B con A', B polinomios.
    """
    vs, M = context(order)
    B = Basis.of(vs, M)
    a = 1 - B.X
    # Δ³ entero: el √Δ de la forma queda en el numerador
    D = a ** 9 * (a * a - B.Y) ** 11 * B.Y ** 4 * B.delta ** 3
    return D.at_order(order), 1


# =============================================================================
# ESTRUCTURA DE DENOMINADORES
# =============================================================================

@dataclass
class DenominatorCheck:
    """Resultado de llevar f·D/x^k a las coordenadas (u, v)"""
    # order: grado hasta el que la imagen es exacta
    order: int
    # bound: grado máximo permitido para un polinomio
    bound: int
    # top_degree: mayor grado con coeficiente no nulo (-1 si la imagen es nula)
    top_degree: int
    # offending: monomios (a, b) de u^a v^b con grado en (bound, order]
    offending: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def conclusive(self) -> bool:
        return self.order > self.bound

    @property
    def polynomial(self) -> bool:
        return not self.offending


def uv_image(f: MultiSeries) -> MultiSeries:
    """
    f(u(1-v), v(1-u)) como serie en (u, v), escrita otra vez con los nombres
    x, y. En estas coordenadas √Δ = 1 - u - v, así que A + √Δ·B con A, B
    polinomios se vuelve un polinomio.
    """
    if f.vars.names != ("x", "y"):
        raise FamilyError("uv_image espera una serie sólo en x, y")
    order = min(f.prec, f.order)
    # p, q hacen de u, v mientras x, y siguen presentes
    big = VarSet.standard(order, main=("x", "y", "p", "q"))
    g = S.embed(f.at_order(order), big)
    p, q = S.variable(big, "p", order), S.variable(big, "q", order)
    # x = u(1-v), y = v(1-u)
    g = S.substitute(g, "x", p * (1 - q))
    g = S.substitute(g, "y", q * (1 - p))
    return S.rename(g, {"p": "x", "q": "y", "x": "x", "y": "y"}, VarSet.standard(order), order)


def denominator_check(f: MultiSeries, denominator: MultiSeries, x_power: int, bound: int) -> DenominatorCheck:
    """
    Multiplica f por el denominador impreso, divide por x^x_power y busca en
    la imagen (u, v) coeficientes por encima de `bound`.
    """
    # f·D/x^k debe ser serie de potencias
    H = S.shift(f * denominator, {"x": -x_power})
    if H.has_negative_exponents():
        bad = [e for e in H.terms if min(e) < 0]
        raise RegularityError(f"f·D no es divisible por x^{x_power}", bad)
    image = uv_image(H)
    degrees = [sum(e) for e in image.terms]
    # sólo cuentan los grados donde la imagen es exacta
    offending = sorted((e[0], e[1]) for e in image.terms if bound < sum(e) <= image.prec)
    return DenominatorCheck(image.prec, bound, max(degrees, default=-1), offending)


# =============================================================================
# ESCALERAS BIMODALES Y 1-CONVEXOS
# =============================================================================

def staircase_bimodal(m: int, order: int) -> MultiSeries:
    """Escaleras bimodales m-convexas: I_m·y²·d/dy(SP/y)"""
    if m < 1:
        raise FamilyError(f"m debe ser >= 1 (m={m})")
    vs, M = context(order, guard=DEFAULT_GUARD + 2)
    B = Basis.of(vs, M)
    # y²·d/dy(SP/y): SP no tiene términos sin y
    inner = S.derivative(S.shift(B.SP, {"y": -1}), "y")
    return (B.I(m) * S.shift(inner, {"y": 2})).at_order(order)


def _one_unimodal_left(B: Basis) -> MultiSeries:
    inner = S.derivative(S.shift(B.UP, {"y": -1}), "y")
    return B.I() * S.shift(inner, {"y": 2})


def _one_unimodal_corner(B: Basis) -> MultiSeries:
    return B.I() * B.Y * B.SP * B.Z * (1 / (1 - B.X) + B.u * B.Z)


def _one_unimodal_bottom(B: Basis) -> MultiSeries:
    # E sólo sobre y; u* queda fijo y se sustituye por u al final
    scope = EScope(B.vars, B.order, targets=("y",), stars=("u",))
    D = scope.basis()
    x, y, us = D.X, D.Y, scope.star("u")
    one_y2 = (1 - y) ** 2
    inner = us / ((1 - us - y) * (1 - x - y) ** 2) * (one_y2 / (one_y2 - x) + x / (1 - x))
    X, Y, v = B.X, B.Y, B.v
    main = X * X * Y * v * scope.apply(inner, u=B.u)
    # SP³/y: SP tiene factor y
    sp3_y = S.shift(B.SP ** 3, {"y": -1})
    return main - 2 * X * v * sp3_y * B.Z / B.delta


_ONE_UNIMODAL: Dict[str, Callable[[Basis], MultiSeries]] = {
    "left": _one_unimodal_left,
    "corner": _one_unimodal_corner,
    "bottom": _one_unimodal_bottom,
}


def one_unimodal(position: str, order: int) -> MultiSeries:
    """
    1-unimodales con la indentación vertical a la izquierda, en la esquina
    superior derecha o en la base.
    """
    if position not in _ONE_UNIMODAL:
        raise FamilyError(f"posición desconocida: {position} (hay {ONE_UNIMODAL_POSITIONS})")
    if order < 3:
        raise FamilyError("1-unimodales necesita orden >= 3")
    vs, M = context(order, guard=DEFAULT_GUARD + 4)
    return _ONE_UNIMODAL[position](Basis.of(vs, M)).at_order(order)


def one_unimodal_vertical(order: int) -> MultiSeries:
    """Suma de las tres posiciones de la indentación vertical"""
    vs, M = context(order, guard=DEFAULT_GUARD + 4)
    B = Basis.of(vs, M)
    return S.sum_series((build(B) for build in _ONE_UNIMODAL.values()), vs, M).at_order(order)


def one_unimodal_left_sum(order: int) -> MultiSeries:
    """
    Forma por inclusión-exclusión del caso izquierdo, sin el factor I:
    vxy·E[1/((1-x-v*)(1-x-y))] - uv²Z·2xy/Δ. Coincide con y²·d/dy(UP/y).
    """
    vs, M = context(order, guard=DEFAULT_GUARD + 2)
    B = Basis.of(vs, M)
    scope = EScope(vs, M, stars=("v",))
    D = scope.basis()
    x, y, vs_ = D.X, D.Y, scope.star("v")
    E = scope.apply(1 / ((1 - x - vs_) * (1 - x - y)), v=B.v)
    X, Y = B.X, B.Y
    out = B.v * X * Y * E - B.u * B.v ** 2 * B.Z * 2 * X * Y / B.delta
    return out.at_order(order)


def one_convex_top(order: int) -> MultiSeries:
    """
    Expresión impresa para 1-convexos (indentación en el lado superior), con
    el término de intersección a lo largo de la diagonal NO.
    """
    if order < 3:
        raise FamilyError("1-convexos necesita orden >= 3")
    vs, M = context(order, guard=DEFAULT_GUARD + 4)
    B = Basis.of(vs, M)
    X, Y, u, v, SP, Z, delta = B.X, B.Y, B.u, B.v, B.SP, B.Z, B.delta

    # E[x(1-x)y*/((1-x)²-y*)·(1 + y*/(1-x)²)·(x*/(1-x*-y))²·(...)·x/(1-x-y)]
    s1 = EScope(vs, M, stars=("x", "y"))
    D = s1.basis()
    x, y, xs, ys = D.X, D.Y, s1.star("x"), s1.star("y")
    one_x2, one_y2 = (1 - x) ** 2, (1 - y) ** 2
    top = x * (1 - x) * ys / (one_x2 - ys) * (1 + ys / one_x2)
    side = xs / (1 - xs - y)
    t1 = s1.apply(top * side * side
                  * (y * y * one_y2 / (one_y2 - xs) + xs * y * y / (1 - xs))
                  * x / (1 - x - y))

    # -4xyv/Δ·E[(x*y/(1-x*-y))²·(...)·u*/(1-u*-y)]
    s2 = EScope(vs, M, stars=("x", "u"))
    D = s2.basis()
    x, y, xs, us = D.X, D.Y, s2.star("x"), s2.star("u")
    one_y2 = (1 - y) ** 2
    ratio = xs * y / (1 - xs - y)
    e2 = s2.apply(ratio * ratio * (one_y2 / (one_y2 - xs) + xs / (1 - xs)) * us / (1 - us - y), u=u)
    t2 = -4 * X * Y * v / delta * e2

    # -2xyu²v/((1-u)²Δ)·E[...·x/(1-x-v*)]
    s3 = EScope(vs, M, stars=("y", "v"))
    D = s3.basis()
    x, y, ys, vs_ = D.X, D.Y, s3.star("y"), s3.star("v")
    one_x2 = (1 - x) ** 2
    e3 = s3.apply(x * (1 - x) * ys / (one_x2 - ys) * (1 + ys / one_x2) * x / (1 - x - vs_), v=v)
    t3 = -2 * X * Y * u * u * v / ((1 - u) ** 2 * delta) * e3

    # Términos sin E
    ratio = 2 * X * SP / delta
    t4 = 2 * v * SP * Z * ratio * ratio
    sp3_y = S.shift(SP ** 3, {"y": -1})
    t5 = -2 * sp3_y * Z * (1 / (1 - X) + u * Z) * (1 + v / (1 - u)) * Z * B.UP
    return (t1 + t2 + t3 + t4 + t5).at_order(order)


def one_convex(order: int) -> MultiSeries:
    """Todos los 1-convexos: la forma superior, su reflejo y las transpuestas"""
    F = one_convex_top(order)
    return 2 * (F + S.transpose(F))


# =============================================================================
# FORMAS CERRADAS m = 2
# =============================================================================

CLOSED_FORMS = ("two_staircase", "two_unimodal", "two_convex")

# Potencias de x e y del prefactor 1/(x^a y^b) que deben cancelarse
_PREFACTOR = {"two_staircase": (4, 4), "two_unimodal": (3, 3), "two_convex": (2, 2)}


def _closed_numerator(family: str, B: Basis) -> MultiSeries:
    X, Y, Z = B.X, B.Y, B.Z
    a, b = 1 - X, 1 - Y
    tag = {"two_staircase": "staircase2", "two_unimodal": "unimodal2", "two_convex": "convex2"}[family]
    A = load_named(f"{tag}_A").to_series(B.vars, B.order)
    Bp = load_named(f"{tag}_B").to_series(B.vars, B.order)
    # Con el signo impreso entre los dos sumandos el prefactor no se cancela;
    # el término con B entra sumando en las tres formas
    if family == "two_staircase":
        return -A / (2 * a ** 3 * b ** 3 * (1 - X - Y)) + Bp * Z ** 3 / (2 * a * b)
    # factores de pila ((1-x)²-y)³((1-y)²-x)³ y la diagonal 1-x-y
    stacks = (a * a - Y) ** 3 * (b * b - X) ** 3 * (1 - X - Y)
    if family == "two_unimodal":
        return A * Z ** 5 / (2 * a ** 3 * b ** 3) + Bp / (2 * a ** 5 * b ** 5 * stacks)
    return -4 * A * Z ** 7 / (a ** 3 * b ** 3) + Bp * Z ** 8 / (a ** 7 * b ** 7 * stacks)


def closed_form(family: str, order: int) -> MultiSeries:
    """
    2-escaleras, 2-unimodales o 2-convexos desde los polinomios A, B.
    Lanza RegularityError si el prefactor 1/(x^a y^b) no se cancela (señal de
    un error de transcripción), con los monomios culpables.
    """
    if family not in _PREFACTOR:
        raise FamilyError(f"forma cerrada desconocida: {family} (hay {CLOSED_FORMS})")
    if order < 5:
        raise FamilyError("las formas cerradas necesitan orden >= 5")
    ax, by = _PREFACTOR[family]
    vs, M = context(order, guard=ax + by + DEFAULT_GUARD)
    num = _closed_numerator(family, Basis.of(vs, M))
    # Todo monomio del numerador debe tener al menos x^a y^b
    ix, iy = vs.index("x"), vs.index("y")
    offending = sorted(e for e in num.terms if e[ix] < ax or e[iy] < by)
    if offending:
        raise RegularityError(
            f"{family}: el numerador no es divisible por x^{ax} y^{by} "
            f"({len(offending)} monomios)", offending)
    return S.shift(num, {"x": -ax, "y": -by}).at_order(order)


# =============================================================================
# REGISTRO
# =============================================================================

@dataclass(frozen=True)
class FamilySpec:
    """Familia con nombre: cómo construirla y con qué clase del oráculo compararla"""
    key: str
    description: str
    builder: Callable[[int], MultiSeries] = field(compare=False)
    # oracle_filter: clase equivalente en el oráculo (None si no es expresable)
    oracle_filter: Optional[ClassFilter] = None
    # min_order: orden mínimo aceptado por el constructor
    min_order: int = 1
    # symmetric: la clase es cerrada por transposición
    symmetric: bool = False
    # params: parámetros fijados en la clave (m, posición...)
    params: Tuple[Tuple[str, object], ...] = ()


def _basic(name: str) -> Callable[[int], MultiSeries]:
    def builder(order: int) -> MultiSeries:
        vs, M = context(order)
        return getattr(Basis.of(vs, M), name).at_order(order)
    return builder


def _registry() -> Dict[str, FamilySpec]:
    from . import appendix, cases

    m0 = lambda *corners: ClassFilter(0, frozenset(corners))
    m1 = ClassFilter(1)
    m2 = lambda *corners: ClassFilter(2, frozenset(corners))
    specs: List[FamilySpec] = [
        FamilySpec("SP", "escaleras", _basic("SP"), m0("BL", "TR"), symmetric=True),
        FamilySpec("UP", "unimodales (por la esquina inferior izquierda)", _basic("UP"), m0("BL"), symmetric=True),
        FamilySpec("H", "unimodales de Lin, igual a UP", _basic("H"), m0("BL"), symmetric=True),
        FamilySpec("P", "pirámides", _basic("P")),
        FamilySpec("convex", "convexos", _basic("C"), m0(), symmetric=True),
        FamilySpec("one_convex", "1-convexos", one_convex, m1, min_order=3, symmetric=True),
        FamilySpec("one_convex_top", "1-convexos con la indentación arriba", one_convex_top, min_order=3),
        FamilySpec("one_unimodal", "1-unimodales con la indentación vertical", one_unimodal_vertical,
                   min_order=3),
    ]
    for position in ONE_UNIMODAL_POSITIONS:
        specs.append(FamilySpec(f"one_unimodal_{position}", f"1-unimodales, indentación: {position}",
                                lambda order, _p=position: one_unimodal(_p, order), min_order=3,
                                params=(("position", position),)))
    for m in BIMODAL_DEPTHS:
        specs.append(FamilySpec(f"bimodal_sum_{m}", f"bimodales {m}-convexos con la indentación arriba",
                                lambda order, _m=m: bimodal_sum(_m, order), min_order=2 * m + 1,
                                params=(("m", m),)))
    specs.append(FamilySpec("bimodal_total_1", "1-convexos como bimodales en las cuatro orientaciones",
                            lambda order: bimodal_total(1, order), m1, min_order=3, symmetric=True,
                            params=(("m", 1),)))
    specs.append(FamilySpec("bimodal_total_2", "bimodales 2-convexos en las cuatro orientaciones",
                            lambda order: bimodal_total(2, order), min_order=5, symmetric=True,
                            params=(("m", 2),)))
    specs.append(FamilySpec("bimodal_closed_2", "forma cerrada de los bimodales 2-convexos",
                            bimodal_closed_2, min_order=5))
    for m in (1, 2):
        specs.append(FamilySpec(f"staircase_bimodal_{m}", f"escaleras bimodales {m}-convexas",
                                lambda order, _m=m: staircase_bimodal(_m, order), params=(("m", m),)))
    for m in appendix.INDENT_DEPTHS:
        for kind in appendix.KINDS:
            specs.append(FamilySpec(f"m_left_indents_{m}_{kind}",
                                    f"{m} indentaciones a la izquierda, base {kind}",
                                    lambda order, _m=m, _k=kind: appendix.m_left_indents(_m, _k, order),
                                    params=(("m", m), ("kind", kind))))
    specs.append(FamilySpec("two_staircase", "2-escaleras",
                            lambda order: closed_form("two_staircase", order), m2("BL", "TR"),
                            min_order=5, symmetric=True))
    specs.append(FamilySpec("two_unimodal", "2-unimodales",
                            lambda order: closed_form("two_unimodal", order), m2("BL"),
                            min_order=5, symmetric=True))
    specs.append(FamilySpec("two_convex", "2-convexos",
                            lambda order: closed_form("two_convex", order), m2(),
                            min_order=5, symmetric=True))
    for case in cases.CASES.values():
        specs.append(FamilySpec(f"case:{case.name}", case.description, case.builder,
                                min_order=case.min_order, symmetric=case.symmetric,
                                params=(("section", case.section),)))
    return {spec.key: spec for spec in specs}


_families: Optional[Dict[str, FamilySpec]] = None


def families() -> Dict[str, FamilySpec]:
    """Registro completo (se arma la primera vez que se consulta)"""
    global _families
    if _families is None:
        _families = _registry()
    return _families


def get_family(key: str) -> FamilySpec:
    spec = families().get(key)
    if spec is None:
        raise FamilyError(f"familia desconocida: {key}")
    return spec


def build_family(key: str, order: int) -> MultiSeries:
    """
    Construye la familia `key` a orden N, registrando el tiempo empleado.
    Bajo el orden mínimo del constructor se construye a ese mínimo y se
    trunca: una clase sin polígonos tan pequeños da la tabla vacía.
    """
    spec = get_family(key)
    if order < 1:
        raise FamilyError(f"el orden debe ser >= 1 (orden={order})")
    start = time.perf_counter()
    result = spec.builder(max(order, spec.min_order))
    if order < spec.min_order:
        result = result.at_order(order)
    logger.info("familia %s orden %d en %.2fs", key, order, time.perf_counter() - start)
    return result
