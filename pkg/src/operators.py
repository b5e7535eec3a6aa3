"""
Módulo: operators.py - Operadores estructurales sobre series
=============================================================
- E_I: conserva los coeficientes con exponente par en las variables de I y
  divide ese exponente entre dos (inclusión-exclusión por plegado).
- Notación estrella: las copias x*, y* quedan fuera de E y al terminar se
  funden con x, y.
- Producto de Hadamard completo y restringido (la "unión" sobre una variable
  auxiliar), regla de polos y operador Φ.

E se aplica en un contexto DOBLADO: las principales que no son objetivo (y las
copias estrella) pesan el doble y el orden se duplica, de modo que al dividir
los exponentes entre dos se recupera toda la información hasta el orden N.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import factorial, floor, gcd
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from . import series as S
from .errors import OperatorError, SeriesError
from .series import MultiSeries, VarSet

logger = logging.getLogger(__name__)

STAR = "*"


def star(name: str) -> str:
    """Nombre de la copia con estrella de una variable"""
    return name + STAR


@dataclass(frozen=True)
class StarMask:
    """Variables con estrella que E debe dejar intactas"""
    # frozen: nombres de las copias ("x*", "y*") presentes en el VarSet
    frozen: FrozenSet[str] = field(default_factory=frozenset)

    @classmethod
    def of(cls, *originals: str) -> "StarMask":
        return cls(frozenset(star(n) for n in originals))

    def original(self, name: str) -> str:
        return name[:-len(STAR)]


# =============================================================================
# CONTEXTO DOBLADO
# =============================================================================

def doubled(vars: VarSet, targets: Iterable[str], stars: Iterable[str] = (),
            laurent: Iterable[str] = ()) -> VarSet:
    """
    Contexto para aplicar E_targets: las principales que no son objetivo pesan
    el doble, se agregan las copias estrella de `stars` (con peso doble) y los
    topes auxiliares se duplican. El orden a usar es 2N.

    Las auxiliares de `laurent` marcan factores como s/(x-s) = Σ (s/x)^k: pasan
    a pesar lo mismo que un objetivo (conservando su tope) para que cada
    término s^k x^(-k) tenga grado >= 0 y el producto no pierda precisión.
    """
    targets = set(targets)
    laurent = set(laurent)
    for t in targets:
        if t not in vars.names or vars.is_aux(t):
            raise OperatorError(f"objetivo de E inválido: {t}")
    for name in laurent:
        if name not in vars.names or not vars.is_aux(name):
            raise OperatorError(f"marcador de Laurent inválido: {name}")
    # Pesos y topes del contexto doblado, variable por variable
    weights, caps = [], []
    for name, w, cap in zip(vars.names, vars.weights, vars.caps):
        if name in laurent:
            weights.append(1)
            caps.append(cap)
        elif w == 0:
            weights.append(0)
            # auxiliar común: sigue sin peso, pero su tope se dobla con el orden
            caps.append(2 * cap)
        else:
            weights.append(w if name in targets else 2 * w)
            caps.append(None)
    out = VarSet(vars.names, tuple(weights), tuple(caps))
    extra = [(star(n), 2 * (vars.weight(n) if n in vars.names else 1)) for n in stars]
    return out.with_main(*extra)


def settle(f: MultiSeries, base: VarSet, order: int,
           substitutions: Optional[Dict[str, MultiSeries]] = None) -> MultiSeries:
    """
    Devuelve al contexto base el resultado de un E: reescala los pesos,
    convierte los marcadores de Laurent en auxiliares y sustituye las copias
    estrella que no son variables (u*, v*...) por su serie.

    Un término ausente tenía grado ponderado > prec; en el contexto base su
    grado supera (prec - Σ w·tope de los marcadores)/escala.
    """
    substitutions = substitutions or {}
    # Factor entre el contexto doblado (ya normalizado por E) y el base
    scale = f.vars.weight("x") // base.weight("x")
    # Cada marcador de Laurent con tope c y peso w puede bajar el grado en w·c
    loss = sum(f.vars.weight(n) * f.vars.cap(n) for n in base.names
               if base.is_aux(n) and n in f.vars.names and not f.vars.is_aux(n))
    prec = (f.prec - loss) // scale
    extras = [n for n in f.vars.names if n not in base.names]
    missing = [n for n in extras if n not in substitutions]
    if missing:
        raise OperatorError(f"copias estrella sin sustituir: {missing}")
    target = base.with_main(*[(n, f.vars.weight(n) // scale) for n in extras])
    idx = [f.vars.index(n) for n in target.names]
    terms = {}
    for e, c in f.poly.items():
        ne = tuple(e[i] for i in idx)
        if target.admissible(ne, min(prec, order)):
            terms[ne] = c
    result = MultiSeries._raw(target, order, prec, target.ring.from_dict(terms))
    # Las copias estrella de series (u*, v*) se reemplazan por la serie
    for name in extras:
        g = S.embed(substitutions[name], target)
        result = S.drop_variable(S.substitute(result, name, g), name)
        target = result.vars
    return result


def _normalized(names: Sequence[str], weights: Sequence[int], caps: Sequence, factor: int) -> VarSet:
    return VarSet(tuple(names), tuple(w // factor for w in weights),
                  tuple(None if c is None else c // factor for c in caps))


# =============================================================================
# OPERADOR E
# =============================================================================

def e_operator(f: MultiSeries, targets: Iterable[str], mask: StarMask = StarMask()) -> MultiSeries:
    """
    E_targets[f] con las variables de `mask` fijas.
    Parámetros: f (serie en un contexto doblado), targets (variables sobre
    las que actúa E), mask (copias estrella a fundir con sus originales)
    Retorna: serie en el contexto normalizado (pesos divididos por su mcd)
    """
    vs = f.vars
    targets = list(targets)
    idx = []
    for t in targets:
        if t not in vs.names:
            raise OperatorError(f"la variable objetivo {t} no está en {vs.names}")
        if t in mask.frozen:
            raise OperatorError(f"{t} está marcada con estrella y a la vez es objetivo")
        idx.append(vs.index(t))

    # Paso 1: conservar exponentes pares en los objetivos y dividirlos entre 2
    kept: Dict[Tuple[int, ...], object] = {}
    for e, c in f.poly.items():
        if all(e[i] % 2 == 0 for i in idx):
            ne = list(e)
            for i in idx:
                ne[i] //= 2
            kept[tuple(ne)] = c
    weights = list(vs.weights)
    for i in idx:
        weights[i] *= 2

    # Paso 2: fundir cada copia estrella con su original. Las copias de series
    # (u*, v*) no tienen variable original y quedan para settle()
    merged_stars = [n for n in vs.names if n in mask.frozen and mask.original(n) in vs.names]
    for s in merged_stars:
        orig = mask.original(s)
        if weights[vs.index(s)] != weights[vs.index(orig)]:
            raise OperatorError(f"pesos incompatibles al fundir {s} con {orig}")
    keep_names = [n for n in vs.names if n not in merged_stars]
    dest = {n: keep_names.index(mask.original(n) if n in merged_stars else n) for n in vs.names}
    merged: Dict[Tuple[int, ...], object] = {}
    for e, c in kept.items():
        ne = [0] * len(keep_names)
        for name, a in zip(vs.names, e):
            ne[dest[name]] += a
        ne = tuple(ne)
        merged[ne] = merged.get(ne, 0) + c

    # Paso 3: normalizar pesos, orden y precisión
    keep_weights = [weights[vs.index(n)] for n in keep_names]
    keep_caps = [vs.caps[vs.index(n)] for n in keep_names]
    # mcd de los pesos no nulos: tras E suele ser 2
    factor = reduce(gcd, [w for w in keep_weights if w])
    target = _normalized(keep_names, keep_weights, keep_caps, factor)
    order = f.order // factor
    prec = f.prec // factor
    terms = {e: c for e, c in merged.items() if c and target.admissible(e, min(prec, order))}
    return MultiSeries._raw(target, order, prec, target.ring.from_dict(terms))


def e_half_sum(f: MultiSeries, targets: Iterable[str], mask: StarMask = StarMask()) -> MultiSeries:
    """
    Forma equivalente de E: ½[f(√t) + f(-√t)] en cada objetivo. Se calcula
    promediando f con su reflejo t -> -t y reindexando t² -> t. Sirve de
    comprobación independiente de e_operator.
    """
    g = f
    for t in targets:
        i = g.vars.index(t)
        # f(-t): cambia de signo los exponentes impares de t
        reflected = {e: (-c if e[i] % 2 else c) for e, c in g.poly.items()}
        avg = (g.poly + g.vars.ring.from_dict(reflected)) * QQ(1, 2)
        g = MultiSeries._raw(g.vars, g.order, g.prec, avg)
    # Tras el promedio sólo quedan exponentes pares: e_operator no descarta nada
    return e_operator(g, targets, mask)


# =============================================================================
# PRODUCTOS DE HADAMARD
# =============================================================================

def hadamard_full(f: MultiSeries, g: MultiSeries, v: str) -> MultiSeries:
    """Σ_n f_n g_n v^n, con f_n, g_n las rebanadas en v"""
    if f.vars != g.vars:
        raise OperatorError("hadamard_full con VarSet distintos")
    if v not in f.vars.names:
        raise OperatorError(f"variable ausente: {v}")
    fs, gs = S.slices(f, v), S.slices(g, v)
    total = MultiSeries._raw(f.vars, f.order, min(f.prec, g.prec), f.vars.ring.zero)
    for n in sorted(set(fs) & set(gs)):
        # coeficiente n-ésimo en v: f_n·g_n, devuelto a la potencia v^n
        total = total + S.shift(S.mul(fs[n], gs[n]), {v: n})
    return total


def hadamard_join(f: MultiSeries, g: MultiSeries, v: str, slope: Fraction = Fraction(0),
                  rate: Optional[Fraction] = None) -> MultiSeries:
    """
    Unión (producto de Hadamard restringido) Σ_n f_n g_n sobre la auxiliar v,
    que desaparece del VarSet.

    Al menos un operando debe estar dominado en v: sus rebanadas f_n tienen
    grado >= n y la suma truncada es finita. `slope` acota cuánto puede bajar
    el grado de las rebanadas del otro operando por cada unidad de n (0 para
    series de potencias, 1/2 tras un E sobre factores s/(x-s)).

    Con `rate` el primer operando no necesita bandera: basta que sus rebanadas
    crezcan como low(f_n) >= rate·n + β, que se mide sobre las rebanadas
    presentes. La cola converge si rate > slope.
    """
    if f.vars != g.vars or f.order != g.order:
        raise OperatorError("hadamard_join con VarSet u órdenes distintos")
    vs = f.vars
    if v not in vs.names or not vs.is_aux(v):
        raise OperatorError(f"la unión exige una variable auxiliar presente: {v}")
    if rate is None:
        if v not in f.dominated:
            if v not in g.dominated:
                raise OperatorError(f"unión divergente: ningún operando está dominado en {v}")
            f, g = g, f
        # la dominación da low(f_n) >= n
        rate = Fraction(1)
    fs, gs = S.slices(f, v), S.slices(g, v)
    prec = min(f.prec, g.prec)
    total = MultiSeries._raw(vs, f.order, prec, vs.ring.zero)
    for n in sorted(set(fs) & set(gs)):
        # parte finita: n hasta el tope de v
        total = S.add(total, S.mul(fs[n], gs[n]))

    # Cola n > tope: el término n aporta grado >= n·(rate - slope) + beta
    cap = vs.cap(v)
    slope, rate = Fraction(slope), Fraction(rate)
    if slope >= rate:
        raise OperatorError(f"pendiente {slope} >= crecimiento {rate}: la unión no converge")
    lows_g = [gs[n].low() + slope * n for n in gs] or [Fraction(0)]
    lows_f = [fs[n].low() - rate * n for n in fs] or [Fraction(0)]
    # beta: el peor desplazamiento observado en las rebanadas presentes
    beta = min(min(lows_g), 0) + min(min(lows_f), 0)
    # el primer término ausente es n = tope + 1
    tail = floor((cap + 1) * (rate - slope) + beta) - 1
    prec = min(total.prec, tail)

    target = vs.without(v)
    i = vs.index(v)
    # v ya no aparece en ningún término: se quita su columna
    terms = {e[:i] + e[i + 1:]: c for e, c in total.poly.items()}
    result = MultiSeries._raw(target, f.order, prec, target.ring.from_dict(
        {e: c for e, c in terms.items() if target.degree(e) <= prec}))

    # Banderas heredadas que el resultado cumple término a término
    flags = []
    for w in (f.dominated | g.dominated) - {v}:
        try:
            result.declare_aux_dominated(w)
            flags.append(w)
        except SeriesError:
            logger.debug("la unión sobre %s no conserva la dominación en %s", v, w)
    return result.declare_aux_dominated(*flags) if flags else result


def join_many(f: MultiSeries, g: MultiSeries, vars: Sequence[str], slope: Fraction = Fraction(0)) -> MultiSeries:
    """
    Uniones simultáneas sobre varias auxiliares (⊙_{p,q,s,t}): Σ f_n g_n con
    n recorriendo los multiíndices. Se reduce a uniones sucesivas separando
    por rebanadas la primera variable.
    """
    if not vars:
        return S.mul(f, g)
    first, rest = vars[0], list(vars[1:])
    if not rest:
        return hadamard_join(f, g, first, slope)
    if first not in f.dominated and first not in g.dominated:
        raise OperatorError(f"unión divergente: ningún operando está dominado en {first}")
    fs, gs = S.slices(f, first), S.slices(g, first)
    target = f.vars
    for name in vars:
        target = target.without(name)
    total = MultiSeries._raw(target, f.order, min(f.prec, g.prec), target.ring.zero)
    for n in sorted(set(fs) & set(gs)):
        # rebanada n en la primera variable: se une sobre el resto
        piece = join_many(S.drop_variable(fs[n], first), S.drop_variable(gs[n], first), rest, slope)
        total = S.add(total, piece)
    # Cota de la cola como en hadamard_join, con crecimiento 1 en la primera variable
    lows = [min(fs[n].low(), gs[n].low()) for n in set(fs) & set(gs)] or [0]
    tail = floor((f.vars.cap(first) + 1) * (1 - Fraction(slope)) + min(min(lows), 0)) - 1
    return total._like(total.poly, min(total.prec, tail))


def pf_pole_rule(f: MultiSeries, alpha: MultiSeries, k: int, v: str) -> MultiSeries:
    """
    f ⊙_v v^k k!/(1-αv)^(k+1) = f^(k)(α): derivada k-ésima en v evaluada en α.
    f debe ser polinomio en v; α es una serie en las demás variables.
    """
    if k < 0:
        raise OperatorError("k debe ser >= 0")
    if f.vars != alpha.vars:
        raise OperatorError("pf_pole_rule con VarSet distintos")
    if alpha.involves(v):
        raise OperatorError(f"α no debe contener {v}")
    d = f
    for _ in range(k):
        d = S.derivative(d, v)
    # f^(k) como polinomio en v, evaluado después en α
    parts = S.slices(d, v)
    vs = f.vars
    result = MultiSeries._raw(vs, f.order, f.prec, vs.ring.zero)
    if parts:
        # Horner en α sobre las rebanadas
        acc: Optional[MultiSeries] = None
        for n in range(max(parts), -1, -1):
            if acc is not None:
                acc = S.mul(acc, alpha)
            part = parts.get(n)
            if part is not None:
                acc = part if acc is None else S.add(acc, part)
        result = acc
    return S.drop_variable(result, v)


def phi(f: MultiSeries, v: str, n: int) -> MultiSeries:
    """Φ_v^n = (∂/∂v)^n / n!: desplaza coeficientes n lugares"""
    if n < 0:
        raise OperatorError("n debe ser >= 0")
    d = f
    for _ in range(n):
        d = S.derivative(d, v)
    # la división por n! es exacta sobre QQ
    return d / factorial(n)


# =============================================================================
# FRACCIONES PARCIALES
# =============================================================================

def pfs_sides(alpha: MultiSeries, s: str) -> Tuple[MultiSeries, MultiSeries]:
    """
    Ambos lados de la descomposición
        α s³/((1-s)³(1-αs)) = α/(2(1-α))·2s²/(1-s)³ - α/(1-α)²·s/(1-s)²
                              + α/(1-α)³·(1/(1-s) - 1/(1-αs)).
    Los cocientes α/(1-α)^j pueden tener potencias negativas (Laurent) que se
    cancelan en la suma.
    Retorna: (lado_izquierdo, lado_derecho)
    """
    vs, order = alpha.vars, alpha.order
    one = S.constant(vs, 1, order)
    sv = S.variable(vs, s, order)
    one_minus_s = one - sv
    geometric_alpha = S.inverse(one - alpha * sv)
    # Lado izquierdo: una sola serie de potencias en s
    lhs = alpha * sv ** 3 * S.inverse(one_minus_s ** 3) * geometric_alpha

    ratio = S.div(alpha, one - alpha, allow_laurent=True)          # α/(1-α)
    ratio2 = S.div(ratio, one - alpha, allow_laurent=True)         # α/(1-α)²
    ratio3 = S.div(ratio2, one - alpha, allow_laurent=True)        # α/(1-α)³
    rhs = (ratio * (sv ** 2) * S.inverse(one_minus_s ** 3)
           - ratio2 * sv * S.inverse(one_minus_s ** 2)
           + ratio3 * (S.inverse(one_minus_s) - geometric_alpha))
    return lhs, rhs
