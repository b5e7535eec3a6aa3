"""
Módulo: series.py - Series formales multivariadas truncadas
============================================================
Aritmética exacta (coeficientes racionales de sympy, QQ) sobre series de
potencias en varias variables, truncadas por un orden ponderado:

- Variables PRINCIPALES (x, y y sus copias con estrella x*, y*): cada una tiene
  un peso entero w >= 1. Un término x^a y^b cabe en la serie si
  w_x·a + w_y·b <= orden.
- Variables AUXILIARES (s, t, b, r, w, p, q, z): peso 0, acotadas por un tope
  (cap) propio. Marcan perímetros laterales en las uniones de Hadamard.

Cada serie guarda además `prec`: el grado ponderado hasta el cual sus términos
son exactos. Los productos, cocientes, derivadas y desplazamientos por
monomios de grado negativo bajan `prec`; `at_order(N)` comprueba que la serie
sigue siendo exacta hasta N antes de entregarla.

Los términos viven en un PolyElement de sympy (un dict exponentes -> QQ).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Rational as SympyRational
from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import SeriesError

logger = logging.getLogger(__name__)

# Tipo de los coeficientes: racional reducido con denominador positivo
Rational = QQ.dtype

# Vector de exponentes (uno por variable, en el orden de VarSet.names)
Monomial = Tuple[int, ...]

Scalar = Union[int, "Rational", SympyRational]

# Iteraciones máximas de Newton antes de declarar que no converge
MAX_NEWTON_STEPS = 64


def to_rational(c) -> Rational:
    """Convierte int, QQ, fractions.Fraction o Rational de sympy a QQ"""
    if isinstance(c, Rational):
        return c
    if isinstance(c, int):
        return QQ(c)
    if isinstance(c, SympyRational):
        return QQ.from_sympy(c)
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return QQ(int(c.numerator), int(c.denominator))
    raise SeriesError(f"coeficiente no racional: {c!r}")


@lru_cache(maxsize=None)
def _ring_for(names: Tuple[str, ...]) -> PolyRing:
    # Símbolos construidos a mano: los nombres con estrella ("x*") no pasan
    # por el parser de sympy
    return PolyRing([Symbol(n) for n in names], QQ, grlex)


# =============================================================================
# CONJUNTO DE VARIABLES
# =============================================================================

@dataclass(frozen=True)
class VarSet:
    """Registro ordenado de variables formales con pesos y topes"""
    # names: identificadores, en el orden de los vectores de exponentes
    names: Tuple[str, ...]

    # weights: peso de cada variable en el grado de truncamiento (0 = auxiliar)
    weights: Tuple[int, ...]

    # caps: exponente máximo de cada auxiliar (None para las principales, salvo
    # los marcadores de Laurent de un contexto doblado)
    caps: Tuple[Optional[int], ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise SeriesError(f"nombres repetidos en {self.names}")
        if "x" not in self.names or "y" not in self.names:
            raise SeriesError("x e y deben estar siempre presentes")
        if not (len(self.names) == len(self.weights) == len(self.caps)):
            raise SeriesError("names, weights y caps deben tener la misma longitud")
        for name, w, cap in zip(self.names, self.weights, self.caps):
            if w < 0:
                raise SeriesError(f"peso negativo para {name}")
            # una auxiliar sin tope daría series infinitas en grado 0
            if w == 0 and (cap is None or cap < 0):
                raise SeriesError(f"la auxiliar {name} necesita un tope >= 0")
            if w > 0 and cap is not None and cap < 0:
                raise SeriesError(f"tope negativo para {name}")

    # -------------------------------------------------------------------------
    # Constructores
    # -------------------------------------------------------------------------
    @classmethod
    def standard(cls, order: int, aux: Sequence[str] = (), cap: Optional[int] = None,
                 main: Sequence[str] = ("x", "y")) -> "VarSet":
        """
        Contexto habitual: principales de peso 1 y auxiliares con tope `cap`
        (por defecto igual al orden).
        Parámetros: order (orden de truncamiento), aux (auxiliares), cap
        Retorna: VarSet
        """
        cap = order if cap is None else cap
        names = tuple(main) + tuple(aux)
        weights = tuple(1 for _ in main) + tuple(0 for _ in aux)
        caps = tuple(None for _ in main) + tuple(cap for _ in aux)
        return cls(names, weights, caps)

    def with_aux(self, *aux: str, cap: int) -> "VarSet":
        """Agrega auxiliares nuevas (las ya presentes se ignoran)"""
        extra = [a for a in aux if a not in self.names]
        return VarSet(self.names + tuple(extra),
                      self.weights + tuple(0 for _ in extra),
                      self.caps + tuple(cap for _ in extra))

    def with_main(self, *main: Tuple[str, int]) -> "VarSet":
        """Agrega principales nuevas como pares (nombre, peso)"""
        extra = [(n, w) for n, w in main if n not in self.names]
        return VarSet(self.names + tuple(n for n, _ in extra),
                      self.weights + tuple(w for _, w in extra),
                      self.caps + tuple(None for _ in extra))

    def without(self, name: str) -> "VarSet":
        """El mismo registro sin la variable `name`"""
        i = self.index(name)
        return VarSet(self.names[:i] + self.names[i + 1:],
                      self.weights[:i] + self.weights[i + 1:],
                      self.caps[:i] + self.caps[i + 1:])

    # -------------------------------------------------------------------------
    # Consultas
    # -------------------------------------------------------------------------
    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SeriesError(f"variable desconocida: {name!r} (hay {self.names})") from None

    def weight(self, name: str) -> int:
        return self.weights[self.index(name)]

    def cap(self, name: str) -> Optional[int]:
        return self.caps[self.index(name)]

    def is_aux(self, name: str) -> bool:
        return self.weight(name) == 0

    @property
    def main_vars(self) -> Tuple[str, ...]:
        return tuple(n for n, w in zip(self.names, self.weights) if w > 0)

    @property
    def aux_vars(self) -> Tuple[str, ...]:
        return tuple(n for n, w in zip(self.names, self.weights) if w == 0)

    @property
    def ring(self) -> PolyRing:
        return _ring_for(self.names)

    @property
    def zero_monomial(self) -> Monomial:
        return (0,) * len(self.names)

    def degree(self, e: Monomial) -> int:
        """Grado ponderado de un monomio (sólo cuentan las principales)"""
        return sum(w * a for w, a in zip(self.weights, e) if w)

    def admissible(self, e: Monomial, prec: int) -> bool:
        """True si el monomio cabe: grado <= prec, variables con tope en [0, cap]"""
        # los exponentes negativos sólo se admiten en principales sin tope
        for a, cap in zip(e, self.caps):
            if cap is not None and (a < 0 or a > cap):
                return False
        return self.degree(e) <= prec

    def monomial(self, exps: Mapping[str, int]) -> Monomial:
        e = [0] * len(self.names)
        for name, a in exps.items():
            e[self.index(name)] = a
        return tuple(e)


# =============================================================================
# SERIE TRUNCADA
# =============================================================================

class MultiSeries:
    """
    Serie formal truncada con coeficientes en QQ.
    Inmutable por convención: ninguna operación modifica sus operandos.
    """

    __slots__ = ("vars", "order", "prec", "poly", "dominated")

    def __init__(self, vars: VarSet, order: int, terms: Optional[Mapping[Monomial, Scalar]] = None,
                 prec: Optional[int] = None, dominated: Iterable[str] = ()):
        self.vars = vars
        self.order = order
        # prec nunca supera al orden nominal
        self.prec = order if prec is None else min(prec, order)
        clean: Dict[Monomial, Rational] = {}
        for e, c in (terms or {}).items():
            if len(e) != len(vars.names):
                raise SeriesError(f"monomio {e} no corresponde a {vars.names}")
            c = to_rational(c)
            # ceros y monomios fuera del truncamiento no se guardan
            if c and vars.admissible(e, self.prec):
                clean[e] = c
        self.poly: PolyElement = vars.ring.from_dict(clean)
        self.dominated: FrozenSet[str] = frozenset(dominated)

    # -------------------------------------------------------------------------
    # Constructores auxiliares
    # -------------------------------------------------------------------------
    @classmethod
    def _raw(cls, vars: VarSet, order: int, prec: int, poly: Mapping[Monomial, Rational],
             dominated: Iterable[str] = ()) -> "MultiSeries":
        # Camino rápido: los términos ya vienen filtrados
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.order = order
        obj.prec = min(prec, order)
        obj.poly = poly if isinstance(poly, PolyElement) else vars.ring.from_dict(dict(poly))
        obj.dominated = frozenset(dominated)
        return obj

    def _like(self, poly, prec: Optional[int] = None, dominated: Iterable[str] = ()) -> "MultiSeries":
        prec = self.prec if prec is None else prec
        kept = {e: c for e, c in poly.items() if c and self.vars.degree(e) <= prec}
        return MultiSeries._raw(self.vars, self.order, prec, self.vars.ring.from_dict(kept), dominated)

    # -------------------------------------------------------------------------
    # Consultas
    # -------------------------------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Rational]:
        return dict(self.poly)

    def is_zero(self) -> bool:
        return not self.poly

    def coefficient(self, exps: Mapping[str, int] = None, **kw: int) -> Rational:
        """Coeficiente del monomio dado por nombre: f.coefficient(x=2, y=2)"""
        merged = dict(exps or {}, **kw)
        return self.poly.get(self.vars.monomial(merged), QQ(0))

    def low(self) -> int:
        """Grado ponderado mínimo presente (prec+1 para la serie nula)"""
        if not self.poly:
            return self.prec + 1
        return min(self.vars.degree(e) for e in self.poly)

    def constant_term(self) -> Rational:
        return self.poly.get(self.vars.zero_monomial, QQ(0))

    def has_negative_exponents(self) -> bool:
        return any(a < 0 for e in self.poly for a in e)

    def involves(self, name: str) -> bool:
        i = self.vars.index(name)
        return any(e[i] for e in self.poly)

    def table(self) -> Dict[Tuple[int, int], int]:
        """
        Coeficientes [x^W y^H] como enteros. Exige que no queden auxiliares
        con exponente no nulo y que todos los coeficientes sean enteros.
        """
        ix, iy = self.vars.index("x"), self.vars.index("y")
        out: Dict[Tuple[int, int], int] = {}
        for e, c in self.poly.items():
            if any(a for k, a in enumerate(e) if k not in (ix, iy)):
                raise SeriesError("table() con variables auxiliares o estrelladas vivas")
            if QQ.denom(c) != 1:
                raise SeriesError(f"coeficiente no entero {c} en {e}")
            out[(e[ix], e[iy])] = int(QQ.numer(c))
        return out

    def is_nonnegative_integral(self) -> bool:
        return all(QQ.denom(c) == 1 and c >= 0 for c in self.poly.values())

    def is_symmetric(self, a: str = "x", b: str = "y") -> bool:
        return transpose(self, a, b) == self

    # -------------------------------------------------------------------------
    # Truncamiento y banderas
    # -------------------------------------------------------------------------
    def at_order(self, n: int) -> "MultiSeries":
        """
        La misma serie con orden nominal n.
        Lanza SeriesError si la precisión exacta no llega a n.
        """
        if self.prec < n:
            raise SeriesError(f"precisión insuficiente: exacta hasta {self.prec}, se pide {n}")
        kept = {e: c for e, c in self.poly.items() if self.vars.degree(e) <= n}
        return MultiSeries._raw(self.vars, n, n, self.vars.ring.from_dict(kept), self.dominated)

    def declare_aux_dominated(self, *names: str) -> "MultiSeries":
        """
        Marca la serie como dominada en las auxiliares dadas: en cada término el
        exponente auxiliar no supera el grado ponderado. Se verifica término a
        término.
        """
        for name in names:
            i = self.vars.index(name)
            if not self.vars.is_aux(name):
                raise SeriesError(f"{name} no es auxiliar")
            for e in self.poly:
                if e[i] > self.vars.degree(e):
                    raise SeriesError(f"la serie no está dominada en {name}: término {e}")
        return MultiSeries._raw(self.vars, self.order, self.prec, self.poly, self.dominated | set(names))

    # -------------------------------------------------------------------------
    # Operadores de Python
    # -------------------------------------------------------------------------
    def _coerce(self, other) -> "MultiSeries":
        if isinstance(other, MultiSeries):
            return other
        return constant(self.vars, other, self.order)

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, -self._coerce(other))

    def __rsub__(self, other):
        return add(self._coerce(other), -self)

    def __neg__(self):
        return MultiSeries._raw(self.vars, self.order, self.prec, -self.poly, self.dominated)

    def __mul__(self, other):
        if isinstance(other, MultiSeries):
            return mul(self, other)
        c = to_rational(other)
        return MultiSeries._raw(self.vars, self.order, self.prec, self.poly * c, self.dominated)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiSeries):
            return div(self, other)
        c = to_rational(other)
        if not c:
            raise SeriesError("división por cero")
        return MultiSeries._raw(self.vars, self.order, self.prec, self.poly * (1 / c), self.dominated)

    def __rtruediv__(self, other):
        return div(self._coerce(other), self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise SeriesError("sólo potencias enteras")
        if k < 0:
            return div(constant(self.vars, 1, self.order), self) ** (-k)
        result = constant(self.vars, 1, self.order)
        base = self
        # Exponenciación binaria
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def __eq__(self, other):
        """Igualdad término a término hasta la menor de las dos precisiones"""
        if not isinstance(other, MultiSeries):
            if isinstance(other, (int, Rational)):
                other = self._coerce(other)
            else:
                return NotImplemented
        if self.vars != other.vars:
            return False
        n = min(self.prec, other.prec)
        deg = self.vars.degree
        mine = {e: c for e, c in self.poly.items() if deg(e) <= n}
        theirs = {e: c for e, c in other.poly.items() if deg(e) <= n}
        return mine == theirs

    __hash__ = None

    def __repr__(self):
        return f"MultiSeries({self.poly.as_expr()} + O({self.prec + 1}), vars={self.vars.names})"

    def __str__(self):
        return str(self.poly.as_expr())


# =============================================================================
# CONSTRUCTORES
# =============================================================================

def constant(vars: VarSet, c: Scalar, order: int) -> MultiSeries:
    return MultiSeries(vars, order, {vars.zero_monomial: c})


def variable(vars: VarSet, name: str, order: int) -> MultiSeries:
    return MultiSeries(vars, order, {vars.monomial({name: 1}): 1})


def monomial(vars: VarSet, exps: Mapping[str, int], order: int, coeff: Scalar = 1) -> MultiSeries:
    """Monomio c·∏ v^e. Admite exponentes negativos en las principales"""
    e = vars.monomial(exps)
    for name, a in exps.items():
        if a < 0 and vars.is_aux(name):
            raise SeriesError(f"exponente negativo en la auxiliar {name}")
    return MultiSeries(vars, order, {e: coeff})


def geometric(vars: VarSet, exps: Mapping[str, int], order: int, start: int = 1) -> MultiSeries:
    """
    Σ_{k>=start} m^k para el monomio de Laurent m = ∏ v^e, p. ej. s/(x-s) con
    m = s·x^(-1). La suma se corta al pasar el orden o el tope de alguna
    auxiliar; un monomio de grado 0 sin auxiliar acotada no converge.
    """
    step = vars.monomial(exps)
    d = vars.degree(step)
    capped = [i for i, (a, cap) in enumerate(zip(step, vars.caps)) if a and cap is not None]
    if d < 0 or (d == 0 and not capped):
        raise SeriesError(f"la serie geométrica de {dict(exps)} no converge")
    terms: Dict[Monomial, Rational] = {}
    k = start
    while True:
        e = tuple(k * a for a in step)
        if any(e[i] > vars.caps[i] for i in capped) or vars.degree(e) > order:
            break
        terms[e] = QQ(1)
        k += 1
    return MultiSeries(vars, order, terms)


def from_terms(vars: VarSet, order: int, terms: Mapping[Monomial, Scalar], prec: Optional[int] = None) -> MultiSeries:
    return MultiSeries(vars, order, terms, prec)


# =============================================================================
# NÚCLEO ARITMÉTICO (PolyElement de sympy, sin control de precisión)
# =============================================================================

def _check_compatible(f: MultiSeries, g: MultiSeries) -> None:
    if f.vars != g.vars:
        raise SeriesError(f"conjuntos de variables distintos: {f.vars.names} vs {g.vars.names}")
    if f.order != g.order:
        raise SeriesError(f"órdenes distintos: {f.order} vs {g.order}")


def _truncate(vars: VarSet, p: PolyElement, limit: int) -> PolyElement:
    """
    Deja sólo los monomios de grado <= limit con cada variable acotada dentro
    de su tope. Es el único paso que recorre los términos a mano.
    """
    deg = vars.degree
    capped = [(i, cap) for i, cap in enumerate(vars.caps) if cap is not None]
    kept = {}
    for e, c in p.items():
        # Grado ponderado por encima del límite: fuera
        if deg(e) > limit:
            continue
        # Auxiliares (y marcadores de Laurent) por encima de su tope: fuera
        if capped and any(e[i] > cap for i, cap in capped):
            continue
        kept[e] = c
    return vars.ring.from_dict(kept)


def _low(vars: VarSet, p: PolyElement) -> int:
    return min((vars.degree(e) for e in p), default=0)


def _raw_mul(vars: VarSet, a: PolyElement, b: PolyElement, limit: int) -> PolyElement:
    """
    Producto truncado: el producto del anillo de sympy seguido de _truncate.
    Antes se recortan los operandos: un término de a de grado mayor que
    limit - val(b) no puede aportar nada (y lo mismo al revés).
    """
    if not a or not b:
        return vars.ring.zero
    # Recorte previo por la valuación del otro factor
    a = _truncate(vars, a, limit - _low(vars, b))
    b = _truncate(vars, b, limit - _low(vars, a))
    # Producto exacto en QQ[x, y, ...] y corte final
    return _truncate(vars, a * b, limit)


def _raw_inverse(vars: VarSet, g: PolyElement, limit: int) -> PolyElement:
    """
    Inversa de una serie con término constante no nulo por iteración de Newton
    h <- h + h(1 - g h). El error se eleva al cuadrado en cada paso.
    """
    ring = vars.ring
    c0 = g.get(vars.zero_monomial)
    if not c0:
        raise SeriesError("la serie no es invertible: término constante nulo")
    # Semilla: el inverso del término constante
    h = ring.ground_new(1 / c0)
    for step in range(MAX_NEWTON_STEPS):
        # t = 1 - g h (el residuo; nulo cuando h ya es exacta hasta limit)
        t = ring.one - _raw_mul(vars, g, h, limit)
        if not t:
            logger.debug("inversa: convergencia en %d pasos", step)
            return h
        h = h + _raw_mul(vars, h, t, limit)
    raise SeriesError("la iteración de Newton para la inversa no convergió")


def _raw_inv_sqrt(vars: VarSet, f: PolyElement, limit: int) -> PolyElement:
    """
    r = f^(-1/2) con f(0) = 1 por Newton acoplado r <- r + r(1 - f r²)/2.
    """
    ring = vars.ring
    half = QQ(1, 2)
    r = ring.one
    for step in range(MAX_NEWTON_STEPS):
        # t = 1 - f r²
        t = ring.one - _raw_mul(vars, f, _raw_mul(vars, r, r, limit), limit)
        if not t:
            logger.debug("raíz cuadrada: convergencia en %d pasos", step)
            return r
        r = r + _raw_mul(vars, r, t, limit) * half
    raise SeriesError("la iteración de Newton para la raíz cuadrada no convergió")


# =============================================================================
# OPERACIONES PÚBLICAS
# =============================================================================

def add(f: MultiSeries, g: MultiSeries) -> MultiSeries:
    """Suma término a término; exacta hasta la menor precisión"""
    _check_compatible(f, g)
    prec = min(f.prec, g.prec)
    return f._like(f.poly + g.poly, prec, _sum_flags(f, g))


def _trivially_dominated(f: MultiSeries, v: str) -> bool:
    return v in f.dominated or (not f.involves(v) and f.low() >= 0)


def _sum_flags(f: MultiSeries, g: MultiSeries) -> FrozenSet[str]:
    candidates = f.dominated | g.dominated
    return frozenset(v for v in candidates if _trivially_dominated(f, v) and _trivially_dominated(g, v))


def _product_flags(f: MultiSeries, g: MultiSeries) -> FrozenSet[str]:
    # Dominada en v si ambos lo están, o si uno lo está y el otro no contiene v
    # ni términos de grado negativo
    flags = set(f.dominated & g.dominated)
    for a, b in ((f, g), (g, f)):
        for v in a.dominated - b.dominated:
            if not b.involves(v) and b.low() >= 0:
                flags.add(v)
    return frozenset(flags)


def mul(f: MultiSeries, g: MultiSeries) -> MultiSeries:
    """
    Producto de Cauchy truncado al orden y a los topes auxiliares.
    La precisión resultante es min(prec_f + val(g), prec_g + val(f)).
    """
    _check_compatible(f, g)
    # un término no exacto de f sólo se corre en val(g) al multiplicar
    prec = min(f.prec + g.low(), g.prec + f.low(), f.order)
    if not f.poly or not g.poly:
        return MultiSeries._raw(f.vars, f.order, prec, f.vars.ring.zero)
    terms = _raw_mul(f.vars, f.poly, g.poly, prec)
    return MultiSeries._raw(f.vars, f.order, prec, terms, _product_flags(f, g))


def shift(f: MultiSeries, exps: Mapping[str, int]) -> MultiSeries:
    """
    Multiplica por el monomio de Laurent ∏ v^e. Los exponentes de las
    principales pueden quedar negativos; los de las auxiliares no.
    """
    vs = f.vars
    m = vs.monomial(exps)
    d = vs.degree(m)
    out = {}
    for e, c in f.poly.items():
        ne = tuple(a + b for a, b in zip(e, m))
        # las auxiliares de peso 0 no admiten exponentes negativos
        if any(a < 0 for a, w in zip(ne, vs.weights) if w == 0):
            raise SeriesError(f"exponente auxiliar negativo tras desplazar por {exps}")
        out[ne] = c
    prec = f.prec + d
    kept = {e: c for e, c in out.items() if vs.admissible(e, min(prec, f.order))}
    # un desplazamiento negativo puede romper la dominancia
    flags = f.dominated if d >= 0 else ()
    return MultiSeries._raw(vs, f.order, prec, vs.ring.from_dict(kept), flags)


def _monomial_gcd(f: MultiSeries) -> Monomial:
    exps = list(f.poly)
    return tuple(min(e[i] for e in exps) for i in range(len(f.vars.names)))


def div(f: MultiSeries, g: MultiSeries, allow_laurent: bool = False) -> MultiSeries:
    """
    Cociente f/g. Si g no tiene término constante se cancela primero el mayor
    monomio común de g (división exacta por monomios); después g debe ser una
    unidad. El resultado debe ser serie de potencias salvo allow_laurent.
    """
    _check_compatible(f, g)
    if g.is_zero():
        raise SeriesError("división por la serie nula")
    # x^a y^b ... común a todos los términos del divisor
    m = _monomial_gcd(g)
    if any(m):
        neg = {name: -a for name, a in zip(g.vars.names, m) if a}
        g = shift(g, neg)
        f = shift(f, neg)
        if f.has_negative_exponents() and not allow_laurent:
            raise SeriesError("el cociente no es una serie de potencias tras cancelar monomios")
    if not g.constant_term():
        raise SeriesError("el divisor no es invertible: sin término constante tras cancelar monomios")
    if g.has_negative_exponents():
        raise SeriesError("divisor de Laurent no soportado")
    inv_prec = g.prec
    inv = MultiSeries._raw(g.vars, g.order, inv_prec,
                           _raw_inverse(g.vars, g.poly, min(inv_prec, g.order)),
                           g.dominated)
    return mul(f, inv)


def inverse(g: MultiSeries) -> MultiSeries:
    return div(constant(g.vars, 1, g.order), g)


def sqrt(f: MultiSeries) -> MultiSeries:
    """
    Raíz cuadrada de una serie con término constante 1, por Newton sobre la
    raíz inversa. Resultado exacto hasta prec(f).
    """
    if f.constant_term() != 1:
        raise SeriesError(f"sqrt exige término constante 1, hay {f.constant_term()}")
    if f.has_negative_exponents():
        raise SeriesError("sqrt de una serie de Laurent")
    limit = min(f.prec, f.order)
    r = _raw_inv_sqrt(f.vars, f.poly, limit)
    # √f = f · f^(-1/2)
    root = _raw_mul(f.vars, f.poly, r, limit)
    return MultiSeries._raw(f.vars, f.order, f.prec, root)


def inv_sqrt(f: MultiSeries) -> MultiSeries:
    """f^(-1/2) para f con término constante 1"""
    if f.constant_term() != 1:
        raise SeriesError(f"inv_sqrt exige término constante 1, hay {f.constant_term()}")
    limit = min(f.prec, f.order)
    r = _raw_inv_sqrt(f.vars, f.poly, limit)
    return MultiSeries._raw(f.vars, f.order, f.prec, r)


def derivative(f: MultiSeries, v: str) -> MultiSeries:
    """
    Derivada parcial formal. Respecto de una principal de peso w la precisión
    baja en w (por eso los constructores calculan con órdenes de guarda).
    """
    vs = f.vars
    i = vs.index(v)
    w = vs.weights[i]
    poly = f.poly.diff(vs.ring.gens[i])
    flags = f.dominated if w == 0 else ()
    return MultiSeries._raw(vs, f.order, f.prec - w, poly, flags)


def coeff_slice(f: MultiSeries, v: str, k: int) -> MultiSeries:
    """
    Parte de f con exponente de v exactamente k, con ese exponente puesto a
    cero. Una rebanada vacía da la serie nula.
    """
    vs = f.vars
    i = vs.index(v)
    w = vs.weights[i]
    out = {}
    for e, c in f.poly.items():
        if e[i] == k:
            out[e[:i] + (0,) + e[i + 1:]] = c
    flags = f.dominated if w == 0 else ()
    return MultiSeries._raw(vs, f.order, f.prec - w * k, vs.ring.from_dict(out), flags)


def slices(f: MultiSeries, v: str) -> Dict[int, MultiSeries]:
    """Todas las rebanadas de f en v, indexadas por exponente"""
    i = f.vars.index(v)
    ks = sorted({e[i] for e in f.poly})
    return {k: coeff_slice(f, v, k) for k in ks}


def drop_variable(f: MultiSeries, v: str) -> MultiSeries:
    """Elimina v del VarSet; f no debe contener v"""
    if f.involves(v):
        raise SeriesError(f"la serie todavía contiene {v}")
    i = f.vars.index(v)
    target = f.vars.without(v)
    out = {e[:i] + e[i + 1:]: c for e, c in f.poly.items()}
    return MultiSeries._raw(target, f.order, f.prec, target.ring.from_dict(out), f.dominated - {v})


def embed(f: MultiSeries, target: VarSet) -> MultiSeries:
    """
    Lleva f a un VarSet mayor (mismas principales con los mismos pesos).
    Los términos que no caben en los nuevos topes se descartan.
    """
    for name in f.vars.names:
        if target.weight(name) != f.vars.weight(name):
            raise SeriesError(f"peso distinto para {name} al embeber")
    idx = [f.vars.index(n) if n in f.vars.names else None for n in target.names]
    out = {}
    for e, c in f.poly.items():
        ne = tuple(e[i] if i is not None else 0 for i in idx)
        if target.admissible(ne, f.prec):
            out[ne] = c
    return MultiSeries._raw(target, f.order, f.prec, target.ring.from_dict(out), f.dominated)


def rename(f: MultiSeries, mapping: Mapping[str, str], target: VarSet, order: int,
           prec: Optional[int] = None, scale: int = 1) -> MultiSeries:
    """
    Reescribe las variables de f en `target`: cada nombre se envía a
    mapping.get(nombre, nombre); si dos nombres caen en la misma variable sus
    exponentes se suman. `scale` divide los grados (el contexto destino puede
    tener otros pesos) y sólo afecta al cálculo de la precisión por defecto.
    """
    dest = [target.index(mapping.get(n, n)) for n in f.vars.names]
    prec = (f.prec // scale) if prec is None else prec
    out: Dict[Monomial, Rational] = {}
    for e, c in f.poly.items():
        ne = [0] * len(target.names)
        for a, j in zip(e, dest):
            ne[j] += a
        ne = tuple(ne)
        if target.admissible(ne, min(prec, order)):
            # dos términos pueden caer en el mismo monomio destino
            out[ne] = out.get(ne, 0) + c
    out = {e: c for e, c in out.items() if c}
    return MultiSeries._raw(target, order, prec, target.ring.from_dict(out))


def transpose(f: MultiSeries, a: str = "x", b: str = "y") -> MultiSeries:
    """Intercambia las variables a y b (la versión "barra" de una serie)"""
    vs = f.vars
    i, j = vs.index(a), vs.index(b)
    if vs.weights[i] != vs.weights[j] or vs.caps[i] != vs.caps[j]:
        raise SeriesError(f"no se puede transponer {a} y {b}: pesos o topes distintos")
    out = {}
    for e, c in f.poly.items():
        ne = list(e)
        ne[i], ne[j] = e[j], e[i]
        out[tuple(ne)] = c
    flags = {b if v == a else a if v == b else v for v in f.dominated}
    return MultiSeries._raw(vs, f.order, f.prec, vs.ring.from_dict(out), flags)


def substitute(f: MultiSeries, v: str, g: MultiSeries) -> MultiSeries:
    """
    Sustituye v por g.
    - g = 1: evaluación en 1; exige que f esté dominada en v y quita v del VarSet.
    - g sin término constante: composición por Horner sobre las rebanadas en v.
    """
    _check_compatible(f, g)
    vs = f.vars
    c0 = g.constant_term()
    if c0 and (c0 != 1 or len(g.poly) != 1):
        raise SeriesError("sustitución con término constante distinto de 0 o de la constante 1")
    i = vs.index(v)
    if c0 == 1:
        if vs.weights[i] > 0:
            raise SeriesError(f"no se evalúa en 1 la variable principal {v}")
        if v not in f.dominated:
            raise SeriesError(f"evaluar {v}=1 exige una serie dominada en {v}")
        out: Dict[Monomial, Rational] = {}
        for e, c in f.poly.items():
            ne = e[:i] + (0,) + e[i + 1:]
            # dos términos pueden caer en el mismo monomio destino
            out[ne] = out.get(ne, 0) + c
        # Los términos con exponente de v sobre el tope tenían grado > tope
        prec = min(f.prec, vs.caps[i])
        kept = {e: c for e, c in out.items() if c and vs.degree(e) <= prec}
        evaluated = MultiSeries._raw(vs, f.order, prec, vs.ring.from_dict(kept), f.dominated - {v})
        return drop_variable(evaluated, v)

    # Composición: f = Σ f_k v^k  ->  Σ f_k g^k
    parts = slices(f, v)
    if not parts:
        return MultiSeries._raw(vs, f.order, f.prec, vs.ring.zero)
    if min(parts) < 0:
        raise SeriesError(f"composición con exponentes negativos en {v}")
    lg = g.low()
    w = vs.weights[i]
    self_contained = all(e[i] > 0 for e in g.poly)
    if lg < max(w, 1) and not self_contained and w > 0:
        raise SeriesError(f"composición no controlada: val(g) = {lg} < peso de {v}")
    if w == 0 and lg < 1 and not self_contained:
        raise SeriesError(f"composición no controlada en la auxiliar {v}")
    # Horner: result = (...((f_K) g + f_{K-1}) g + ...) + f_0
    result: Optional[MultiSeries] = None
    for k in range(max(parts), -1, -1):
        if result is not None:
            result = mul(result, g)
        fk = parts.get(k)
        if fk is not None:
            fk = MultiSeries._raw(vs, f.order, fk.prec, fk.poly)
            result = fk if result is None else add(result, fk)
    prec = result.prec
    if w == 0 and lg >= 1:
        # Términos con exponente de v por encima del tope quedaron fuera de f
        rest = min((p.low() for p in parts.values()), default=0)
        prec = min(prec, (vs.caps[i] + 1) * lg + rest - 1)
    flags = f.dominated if (w > 0 and lg >= w and not any(g.involves(a) for a in vs.aux_vars)) else ()
    return MultiSeries._raw(vs, f.order, prec, result._like(result.poly, prec).poly, flags)


# =============================================================================
# PARÁMETROS u, v
# =============================================================================

def solve_uv(order: int, vars: Optional[VarSet] = None, x: str = "x", y: str = "y"
             ) -> Tuple[MultiSeries, MultiSeries]:
    """
    Resuelve u = x/(1-v), v = y/(1-u) por punto fijo en la forma equivalente
    u = x + uv, v = y + uv; cada vuelta gana al menos un grado.
    Retorna: (u, v)
    """
    if order < 1:
        raise SeriesError("solve_uv exige order >= 1")
    vs = vars or VarSet.standard(order)
    xs = variable(vs, x, order)
    ys = variable(vs, y, order)
    u = MultiSeries._raw(vs, order, order, vs.ring.zero)
    v = MultiSeries._raw(vs, order, order, vs.ring.zero)
    for rounds in range(order + 2):
        uv = _raw_mul(vs, u.poly, v.poly, order)
        nu = MultiSeries._raw(vs, order, order, xs.poly + uv)
        nv = MultiSeries._raw(vs, order, order, ys.poly + uv)
        if nu.poly == u.poly and nv.poly == v.poly:
            logger.debug("solve_uv: punto fijo tras %d vueltas", rounds)
            break
        u, v = nu, nv
    return u, v


# =============================================================================
# SERIALIZACIÓN CANÓNICA
# =============================================================================

def _graded_key(vars: VarSet):
    return lambda e: (vars.degree(e), e)


def to_canonical_text(f: MultiSeries) -> str:
    """
    Una línea por término: exponentes separados por espacios, TAB, num/den.
    Orden lexicográfico graduado (grado ponderado, luego exponentes).
    """
    lines = []
    for e in sorted(f.poly, key=_graded_key(f.vars)):
        c = f.poly[e]
        lines.append(" ".join(str(a) for a in e) + f"\t{QQ.numer(c)}/{QQ.denom(c)}")
    return "\n".join(lines) + ("\n" if lines else "")


def from_canonical_text(text: str, vars: VarSet, order: int) -> MultiSeries:
    """Inversa de to_canonical_text"""
    terms: Dict[Monomial, Rational] = {}
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            exps, coeff = line.split("\t")
            num, den = coeff.split("/")
            e = tuple(int(a) for a in exps.split())
            terms[e] = QQ(int(num), int(den))
        except ValueError as exc:
            raise SeriesError(f"línea {n} mal formada: {line!r}") from exc
    return MultiSeries(vars, order, terms)


def sum_series(items: Iterable[MultiSeries], vars: VarSet, order: int) -> MultiSeries:
    """Suma de una colección (la vacía da cero)"""
    total = MultiSeries._raw(vars, order, order, vars.ring.zero)
    for item in items:
        total = add(total, item)
    return total
