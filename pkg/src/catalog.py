"""
Módulo: catalog.py - Catálogo de funciones generatrices básicas
================================================================
Constructores de los bloques con nombre: Δ, √Δ, Z, SP, UP, u, v, pirámides P,
unimodales H, convexos C (con sus versiones por base P_n, H_n, C_n y por
altura exacta o mínima), indentaciones I_m, las series refinadas por un
perímetro lateral J0, J1, T, U, F, C̄, C(s,t) y la pirámide indentada P'.

Cada bloque se arma sobre una `Basis`: el par de series que hacen de x e y.
La versión "barra" (x <-> y) es la misma Basis con el par intercambiado y las
copias con estrella son una Basis sobre x*, y* dentro de un contexto doblado.

Convención de coeficientes: [x^W y^H] cuenta polígonos por ancho y alto del
rectángulo mínimo.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from . import series as S
from .errors import CatalogError
from .operators import StarMask, doubled, e_operator, settle, star
from .polydata import load_named
from .series import MultiSeries, VarSet

logger = logging.getLogger(__name__)

# Órdenes extra que se calculan internamente antes de truncar al pedido
DEFAULT_GUARD = 2


# =============================================================================
# BASE (x, y) Y CONTEXTO DE E
# =============================================================================

class Basis:
    """
    Bloques que sólo dependen del par (X, Y). Las propiedades se calculan una
    vez y se guardan.
    """

    def __init__(self, X: MultiSeries, Y: MultiSeries):
        if X.vars != Y.vars or X.order != Y.order:
            raise CatalogError("X e Y deben compartir contexto y orden")
        self.X = X
        self.Y = Y

    @classmethod
    def of(cls, vars: VarSet, order: int, x: str = "x", y: str = "y") -> "Basis":
        return cls(S.variable(vars, x, order), S.variable(vars, y, order))

    @property
    def vars(self) -> VarSet:
        return self.X.vars

    @property
    def order(self) -> int:
        return self.X.order

    def bar(self) -> "Basis":
        """Versión transpuesta: x e y intercambian sus papeles"""
        return Basis(self.Y, self.X)

    def const(self, c) -> MultiSeries:
        return S.constant(self.vars, c, self.order)

    def var(self, name: str) -> MultiSeries:
        return S.variable(self.vars, name, self.order)

    # -------------------------------------------------------------------------
    # Escalera y unimodales
    # -------------------------------------------------------------------------
    @cached_property
    def delta(self) -> MultiSeries:
        X, Y = self.X, self.Y
        # Δ = (1 - x - y)² - 4xy
        return 1 - 2 * X - 2 * Y - 2 * X * Y + X * X + Y * Y

    @cached_property
    def sqrt_delta(self) -> MultiSeries:
        return S.sqrt(self.delta)

    @cached_property
    def Z(self) -> MultiSeries:
        return S.inv_sqrt(self.delta)

    @cached_property
    def SP(self) -> MultiSeries:
        # raíz de SP² - (1 - x - y)SP + xy = 0 que se anula en el origen
        return (1 - self.X - self.Y - self.sqrt_delta) / 2

    @cached_property
    def UP(self) -> MultiSeries:
        return self.X * self.Y * self.Z

    @property
    def H(self) -> MultiSeries:
        """Unimodales de Lin: xy/√Δ, la misma serie que UP"""
        return self.UP

    @cached_property
    def u(self) -> MultiSeries:
        # u = x/(1-v) y SP = uv, luego u = x + SP
        return self.X + self.SP

    @cached_property
    def v(self) -> MultiSeries:
        return self.Y + self.SP

    def I(self, m: int = 1) -> MultiSeries:
        """Indentación de profundidad m: u²/(1-u)^(2m)"""
        if m < 1:
            raise CatalogError(f"la profundidad de la indentación debe ser >= 1 (m={m})")
        # u tiene término constante 0, así que 1 - u es invertible
        return self.u ** 2 * S.inverse((1 - self.u) ** (2 * m))

    # -------------------------------------------------------------------------
    # Pirámides y convexos
    # -------------------------------------------------------------------------
    @cached_property
    def P(self) -> MultiSeries:
        X, Y = self.X, self.Y
        return X * Y * (1 - X) / ((1 - X) ** 2 - Y)

    @cached_property
    def C(self) -> MultiSeries:
        X, Y = self.X, self.Y
        a_c = (1 - 3 * X - 3 * Y + 3 * X * X + 3 * Y * Y + 5 * X * Y - X ** 3 - Y ** 3
               - X * Y * (X + Y + (X - Y) ** 2))
        # Z² y Z⁴ en lugar de Δ^(-2): una sola raíz inversa
        Z2 = self.Z * self.Z
        return X * Y * a_c * Z2 * Z2 - 4 * (X * Y) ** 2 * Z2 * self.Z

    @cached_property
    def P_prime(self) -> MultiSeries:
        """Pirámides con una indentación horizontal"""
        X, Y = self.X, self.Y
        stack = (1 - X) ** 2 - Y
        ratio = Y / (1 - X - Y)
        return (X * Y / stack * ratio * ratio
                * (X * (1 - X) ** 2 / stack + X * Y / (1 - Y)))


class EScope:
    """
    Contexto doblado para evaluar una expresión E[...] sobre un contexto base.
    `stars` son los nombres cuyas copias con estrella quedan fijas: las de
    variables (x, y) se funden al terminar, las de series (u, v) se sustituyen
    en apply().
    """

    def __init__(self, base: VarSet, order: int, targets: Iterable[str] = ("x", "y"),
                 stars: Iterable[str] = (), laurent: Iterable[str] = ()):
        self.base = base
        self.base_order = order
        self.targets = tuple(targets)
        self.stars = tuple(stars)
        self.vars = doubled(base, self.targets, self.stars, laurent)
        # los pesos doblados exigen el doble de orden para la misma información
        self.order = 2 * order

    def var(self, name: str) -> MultiSeries:
        return S.variable(self.vars, name, self.order)

    def const(self, c) -> MultiSeries:
        return S.constant(self.vars, c, self.order)

    def basis(self, x: str = "x", y: str = "y") -> Basis:
        return Basis.of(self.vars, self.order, x, y)

    def star(self, name: str) -> MultiSeries:
        return self.var(star(name))

    def apply(self, f: MultiSeries, **substitutions: MultiSeries) -> MultiSeries:
        """E[f] llevado al contexto base; las copias de series se sustituyen"""
        # E en el contexto doblado, después vuelta al contexto base
        e = e_operator(f, self.targets, StarMask.of(*self.stars))
        return settle(e, self.base, self.base_order, {star(k): g for k, g in substitutions.items()})


# =============================================================================
# SERIES REFINADAS POR UN PERÍMETRO LATERAL
# =============================================================================

def j0(B: Basis, s: str = "s") -> MultiSeries:
    S_ = B.var(s)
    # J0 = d/(d + xs) con d = (1 - s)(1 - sy)
    d = (1 - S_) * (1 - S_ * B.Y)
    return d / (d + B.X * S_)


def j1(B: Basis, s: str = "s", t: str = "t") -> MultiSeries:
    S_, T_ = B.var(s), B.var(t)
    return B.X * S_ * j0(B, s) / (1 - S_ * T_ * B.Y)


def tst(B: Basis, s: str = "s", t: str = "t") -> MultiSeries:
    """Escaleras por perímetros laterales izquierdo (s) y superior (t)"""
    S_, T_ = B.var(s), B.var(t)
    J = j0(B, s)
    sty = S_ * T_ * B.Y
    vt = B.v * T_
    out = B.X * (J * sty / (1 - sty) + (1 - J) * vt / (1 - vt))
    return out.declare_aux_dominated(s, t)


def ust(B: Basis, s: str = "s", t: str = "t") -> MultiSeries:
    """Unimodales con el mismo refinamiento que T(s,t)"""
    S_, T_ = B.var(s), B.var(t)
    X, Y = B.X, B.Y
    J = j0(B, s)
    sty = S_ * T_ * Y
    sy = 1 - S_ * Y
    vt = B.v * T_
    pyramid_side = sy * (sy - X) / (sy * sy - X)
    out = X * (J * sty / (1 - sty) * pyramid_side + (1 - J) * vt / (1 - vt) * (1 + B.SP * B.Z))
    return out.declare_aux_dominated(s, t)


def u_one(B: Basis, t: str = "t") -> MultiSeries:
    """U(1,t) = xvt(1 + SP·Z)/(1 - vt)"""
    vt = B.v * B.var(t)
    return (B.X * vt * (1 + B.SP * B.Z) / (1 - vt)).declare_aux_dominated(t)


def fbs(B: Basis, b: str = "b", s: str = "s") -> MultiSeries:
    """Ferrers unido a una escalera, por ancho de la base (b) y lado (s)"""
    B_, S_ = B.var(b), B.var(s)
    X, Y, u = B.X, B.Y, B.u
    J = j0(B, s)
    # diagrama de Ferrers marcado por el ancho de su base
    ferrers = (1 - S_) * (1 - X - S_ * Y) / (1 - B_ * X - S_ * Y)
    out = B_ * Y * (1 - J) * (ferrers + u / (1 - B_ * u))
    return out.declare_aux_dominated(b, s)


def cbar(vars: VarSet, order: int, s: str = "s") -> MultiSeries:
    """
    C̄(s): convexos por perímetro izquierdo.
    E[xy(1-x)²(1-y)²/(2(1-x-y)²)·((1-y)/x² - 1)·x*s/(1-x*s-y)] - Z·U²(1/u - 1)·us/(1-us)
    """
    scope = EScope(vars, order, stars=("x",))
    D = scope.basis()
    x, y, sv, xs = D.X, D.Y, scope.var(s), scope.star("x")
    one_x, one_y = 1 - x, 1 - y
    # (1-y)/x² - 1 = ((1-y) - x²)/x²
    bracket = S.shift(one_y - x * x, {"x": -2})
    inner = (x * y * one_x ** 2 * one_y ** 2 / (2 * (1 - x - y) ** 2) * bracket
             * xs * sv / (1 - xs * sv - y))
    B = Basis.of(vars, order)
    su = B.u * B.var(s)
    # Primer sumando: E_{x,y} con x* fijo
    first = scope.apply(inner)
    U = B.UP
    # U²(1/u - 1) = U·(U/u)·(1 - u): U/u es serie de potencias
    second = B.Z * U * (U / B.u) * (1 - B.u) * su / (1 - su)
    return (first - second).declare_aux_dominated(s)


def cst(B: Basis, s: str = "s", t: str = "t") -> MultiSeries:
    """Convexos por perímetros superior (s) e inferior (t); A(s,t) del archivo de datos"""
    S_, T_ = B.var(s), B.var(t)
    X, Y = B.X, B.Y
    # A(s, t) es el polinomio grande del archivo de datos
    A = load_named("convex_st_A").to_series(B.vars, B.order)
    if (s, t) != ("s", "t"):
        A = S.rename(A, {"s": s, "t": t}, B.vars, B.order)
    d1 = 1 - S_ * (1 + (1 - S_) * X - Y)
    d2 = 1 - T_ * (1 + (1 - T_) * X - Y)
    a = 1 - X + Y
    b = 1 - X - Y
    first = -S_ * T_ * X * X * Y * Y * (a - S_ * b) * (a - T_ * b)
    second = (S_ * T_ * X * Y * A * B.Z
              / ((1 - S_ * T_ * X) * ((1 - S_ * X) ** 2 - Y) * ((1 - T_ * X) ** 2 - Y)))
    # factor común Z³/(d1·d2)
    Z3 = B.Z ** 3
    return ((first + second) * Z3 / (d1 * d2)).declare_aux_dominated(s, t)


# =============================================================================
# BLOQUES POR BASE (REDUCIDOS POR x^n)
# =============================================================================

class ReducedBlocks:
    """
    X̃_n = X_n / x^n para X en {P, H, C}, calculados sin pasar por potencias
    negativas: el factor (x/(1-y))^n dentro de E_y se separa como
    x^n·(1-y)^(-n) y el término u^n/x^n se escribe (1-v)^(-n).
    """

    def __init__(self, vars: VarSet, order: int):
        self.vars = vars
        self.order = order
        self.B = Basis.of(vars, order)
        self._cache: Dict[Tuple[str, int], MultiSeries] = {}
        self._scope: Optional[EScope] = None
        self._inv_y: Optional[MultiSeries] = None

    @property
    def scope(self) -> EScope:
        if self._scope is None:
            self._scope = EScope(self.vars, self.order, targets=("y",))
        return self._scope

    def block(self, kind: str, n: int) -> MultiSeries:
        if n < 1:
            raise CatalogError(f"la base debe ser >= 1 (n={n})")
        key = (kind, n)
        if key not in self._cache:
            builder = {"P": self._pyramid, "H": self._unimodal, "C": self._convex}.get(kind)
            if builder is None:
                raise CatalogError(f"bloque desconocido: {kind}")
            self._cache[key] = builder(n)
        return self._cache[key]

    def exact(self, kind: str, n: int, m: int) -> MultiSeries:
        """X̃_{n,m}: altura exactamente m"""
        if m < 1:
            raise CatalogError(f"la altura debe ser >= 1 (m={m})")
        return S.shift(S.coeff_slice(self.block(kind, n), "y", m), {"y": m})

    def at_least(self, kind: str, n: int, m: int) -> MultiSeries:
        """X̃⁺_{n,m} = X̃_n - Σ_{i<m} X̃_{n,i}"""
        out = self.block(kind, n)
        for i in range(1, m):
            out = out - self.exact(kind, n, i)
        return out

    def _pyramid(self, n: int) -> MultiSeries:
        # E_y[y²(1-y)^(-n)] = Σ_{j>=1} C(2j+n-3, n-1) y^j
        terms = {}
        iy = self.vars.index("y")
        for j in range(1, self.order + 1):
            e = [0] * len(self.vars.names)
            e[iy] = j
            # coeficiente binomial cerrado: no hace falta aplicar E
            terms[tuple(e)] = comb(2 * j + n - 3, n - 1)
        return MultiSeries(self.vars, self.order, terms)

    def _geometric_y(self, kind: str, n: int) -> MultiSeries:
        """K·(1-y)^(-n) en el contexto doblado, por productos sucesivos"""
        key = ("K" + kind, n)
        if key in self._cache:
            return self._cache[key]
        if n == 0:
            D = self.scope.basis()
            x, y = D.X, D.Y
            if kind == "H":
                out = y * y * (1 - y) * (1 - x - y) / ((1 - y) ** 2 - x)
            else:
                out = (y * (1 - y) * (1 - x - y) * ((1 + y) ** 2 - x)) ** 2
        else:
            if self._inv_y is None:
                self._inv_y = S.inverse(1 - self.scope.var("y"))
            # K·(1-y)^(-n) = K·(1-y)^(-(n-1))·(1-y)^(-1), memorizado por n
            out = self._geometric_y(kind, n - 1) * self._inv_y
        self._cache[key] = out
        return out

    def _unimodal(self, n: int) -> MultiSeries:
        B = self.B
        main = self.scope.apply(self._geometric_y("H", n))
        # corrección fuera de E, con u^n/x^n = (1-v)^(-n)
        corr = 2 * B.X * B.Y * B.Y / B.delta / (1 - B.v) ** n
        return main - corr

    def _convex(self, n: int) -> MultiSeries:
        B = self.B
        Z2 = B.Z * B.Z
        main = Z2 * Z2 * self.scope.apply(self._geometric_y("C", n))
        corr = 4 * B.X ** 2 * B.Y ** 3 / B.SP * Z2 * B.Z / (1 - B.v) ** n
        return main - corr


# =============================================================================
# OPERACIONES DEL CATÁLOGO (por orden pedido)
# =============================================================================

def context(order: int, aux: Iterable[str] = (), guard: int = DEFAULT_GUARD,
            cap: Optional[int] = None) -> Tuple[VarSet, int]:
    """
    Contexto estándar para calcular a `order` con `guard` órdenes extra.
    Retorna: (VarSet, orden interno). Las auxiliares llevan tope `cap`
    (por defecto el orden pedido).
    """
    if order < 1:
        raise CatalogError(f"el orden debe ser >= 1 (orden={order})")
    return VarSet.standard(order + guard, aux=tuple(aux), cap=order if cap is None else cap), order + guard


BASIC_KEYS = ("delta", "sqrt_delta", "Z", "SP", "UP", "u", "v")


def basic(key: str, order: int) -> MultiSeries:
    """Δ, √Δ, Z, SP, UP, u o v truncadas a `order`"""
    if key not in BASIC_KEYS:
        raise CatalogError(f"clave básica desconocida: {key}")
    vs, M = context(order)
    B = Basis.of(vs, M)
    return getattr(B, key).at_order(order)


def pyramid_family(key: str, order: int, n: Optional[int] = None, m: Optional[int] = None) -> MultiSeries:
    """P, P_n, P_exact(n, m) o P_atleast(n, m)"""
    return _based_family("P", key, order, n, m)


def convex_family(key: str, order: int, n: Optional[int] = None, m: Optional[int] = None) -> MultiSeries:
    """H, C, H_n, C_n y sus variantes de altura exacta o mínima"""
    if key[0] not in "HC":
        raise CatalogError(f"clave convexa desconocida: {key}")
    return _based_family(key[0], key, order, n, m)


def _based_family(kind: str, key: str, order: int, n: Optional[int], m: Optional[int]) -> MultiSeries:
    vs, M = context(order)
    if key == kind:
        return getattr(Basis.of(vs, M), kind).at_order(order)
    # P_n, P_exact, P_atleast (y lo mismo para H y C)
    suffix = key[len(kind):]
    if suffix not in ("_n", "_exact", "_atleast"):
        raise CatalogError(f"clave desconocida: {key}")
    if n is None or n < 1:
        raise CatalogError(f"{key} necesita una base n >= 1")
    blocks = ReducedBlocks(vs, M)
    if suffix == "_n":
        reduced = blocks.block(kind, n)
    else:
        if m is None or m < 1:
            raise CatalogError(f"{key} necesita una altura m >= 1")
        reduced = blocks.exact(kind, n, m) if suffix == "_exact" else blocks.at_least(kind, n, m)
    # X_n = x^n·X̃_n
    return S.shift(reduced, {"x": n}).at_order(order)


def indent(m: int, order: int, transposed: bool = False) -> MultiSeries:
    """I_m = u²/(1-u)^(2m); transpuesta intercambia x e y"""
    vs, M = context(order)
    B = Basis.of(vs, M)
    if transposed:
        B = B.bar()
    return B.I(m).at_order(order)


SIDE_KEYS = ("J0", "J1", "T", "T_bar", "U", "U_bar", "U1", "F", "Cbar", "Cst")

# Variables auxiliares de cada serie refinada
SIDE_ARITY: Dict[str, Tuple[str, ...]] = {
    "J0": ("s",), "J1": ("s", "t"), "T": ("s", "t"), "T_bar": ("s", "t"),
    "U": ("s", "t"), "U_bar": ("s", "t"), "U1": ("t",), "F": ("b", "s"),
    "Cbar": ("s",), "Cst": ("s", "t"),
}


def side_refined(key: str, order: int) -> MultiSeries:
    """Las series con perímetros laterales marcados por variables auxiliares"""
    if key not in SIDE_ARITY:
        raise CatalogError(f"serie refinada desconocida: {key}")
    aux = SIDE_ARITY[key]
    vs, M = context(order, aux, guard=DEFAULT_GUARD + 2)
    B = Basis.of(vs, M)
    builders: Dict[str, Callable[[], MultiSeries]] = {
        "J0": lambda: j0(B),
        "J1": lambda: j1(B),
        "T": lambda: tst(B),
        "T_bar": lambda: tst(B.bar()),
        "U": lambda: ust(B),
        "U_bar": lambda: ust(B.bar()),
        "U1": lambda: u_one(B),
        "F": lambda: fbs(B),
        "Cbar": lambda: cbar(vs, M),
        "Cst": lambda: cst(B),
    }
    return builders[key]().at_order(order)


def pyramid_indented(order: int) -> MultiSeries:
    """P'(x, y)"""
    if order < 3:
        raise CatalogError("P' necesita orden >= 3")
    vs, M = context(order, guard=DEFAULT_GUARD + 2)
    return Basis.of(vs, M).P_prime.at_order(order)


# =============================================================================
# REGISTRO
# =============================================================================

@dataclass(frozen=True)
class CatalogEntry:
    """Entrada del catálogo: cómo construir una serie con nombre"""
    key: str
    # arity: auxiliares que lleva la serie
    arity: Tuple[str, ...]
    builder: Callable[..., MultiSeries] = field(compare=False)
    # aux_dominated: auxiliares en las que la serie está dominada
    aux_dominated: Tuple[str, ...] = ()


def _registry() -> Dict[str, CatalogEntry]:
    entries: List[CatalogEntry] = []
    for key in BASIC_KEYS:
        entries.append(CatalogEntry(key, (), lambda order, _k=key: basic(_k, order)))
    for key in ("P", "P_n", "P_exact", "P_atleast"):
        entries.append(CatalogEntry(key, (), lambda order, _k=key, **kw: pyramid_family(_k, order, **kw)))
    for key in ("H", "C", "H_n", "C_n", "H_exact", "H_atleast", "C_exact", "C_atleast"):
        entries.append(CatalogEntry(key, (), lambda order, _k=key, **kw: convex_family(_k, order, **kw)))
    entries.append(CatalogEntry("I", (), lambda order, m=1: indent(m, order)))
    entries.append(CatalogEntry("I_bar", (), lambda order, m=1: indent(m, order, transposed=True)))
    for key, aux in SIDE_ARITY.items():
        # J0 y J1 no están dominadas en s
        dominated = () if key in ("J0", "J1") else aux
        entries.append(CatalogEntry(key, aux, lambda order, _k=key: side_refined(_k, order), dominated))
    entries.append(CatalogEntry("P_prime", (), pyramid_indented))
    return {e.key: e for e in entries}


CATALOG: Dict[str, CatalogEntry] = _registry()

_cache: Dict[Tuple, MultiSeries] = {}
_cache_lock = threading.Lock()


def build(key: str, order: int, **params: int) -> MultiSeries:
    """
    Construye (o recupera de la caché) la entrada `key` al orden dado.
    Las series son inmutables: se pueden compartir entre hilos.
    """
    entry = CATALOG.get(key)
    if entry is None:
        raise CatalogError(f"entrada de catálogo desconocida: {key}")
    # parámetros ordenados: build("P_n", 6, n=2) y con kwargs en otro orden coinciden
    cache_key = (key, order, tuple(sorted(params.items())))
    with _cache_lock:
        hit = _cache.get(cache_key)
    if hit is not None:
        logger.debug("catálogo: %s orden %d desde la caché", key, order)
        return hit
    start = time.perf_counter()
    value = entry.builder(order, **params)
    logger.debug("catálogo: %s orden %d en %.2fs", key, order, time.perf_counter() - start)
    with _cache_lock:
        # otro hilo pudo guardar la misma serie mientras tanto
        _cache.setdefault(cache_key, value)
    return value
