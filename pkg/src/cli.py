"""
Módulo: cli.py - Interfaz de línea de comandos
===============================================
Subcomandos:

    expand   --family F --order N     tabla [x^W y^H] de una familia
    oracle   --max-perimeter P        tabla clasificada del oráculo
    compare  --family F [--against G] diferencias contra el oráculo o contra G
    list                              familias registradas
    errata   --order N                informe con todas las comparaciones conocidas

Códigos de salida: 0 éxito, 1 la comparación encontró diferencias, 2 familia
u orden inválidos, 3 cota del oráculo insuficiente, 4 archivo de datos.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import series as S
from .errors import RegularityError, ToolkitError
from .families import (CLOSED_FORMS, bimodal_closed_3_denominator, bimodal_closed_variants, bimodal_sum,
                       bimodal_total, build_family, denominator_check, families, get_family,
                       one_unimodal_vertical)
from .oracle import ClassFilter, cached_table, enumerate_polygons, table_for
from .polydata import list_files, load_named
from .storage import FORMATS, SeedCache, render_count_table, write_table

logger = logging.getLogger(__name__)

COMMANDS = ("expand", "oracle", "compare", "list", "errata")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

Table = Dict[Tuple[int, int], int]


# =============================================================================
# CONFIGURACIÓN
# =============================================================================

@dataclass
class RunConfig:
    """Opciones de una ejecución, ya validadas"""
    command: str
    family: Optional[str] = None
    # against: segunda familia para compare (None = el oráculo)
    against: Optional[str] = None
    order: int = 6
    max_perimeter: Optional[int] = None
    format: str = "text"
    output: Optional[str] = None
    threads: int = 1
    # collapse: None o "half-perimeter"
    collapse: Optional[str] = None
    seed_cache: Optional[str] = None
    allow_large: bool = False
    log_level: int = logging.INFO

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ToolkitError(f"comando desconocido: {self.command}")
        if self.order < 1:
            raise ToolkitError(f"el orden debe ser >= 1 (orden={self.order})")
        if self.format not in FORMATS:
            raise ToolkitError(f"formato desconocido: {self.format}")
        if self.threads < 1:
            raise ToolkitError("--threads debe ser >= 1")
        # Argumentos que dependen del subcomando
        if self.command in ("expand", "compare") and not self.family:
            raise ToolkitError(f"{self.command} necesita --family")
        if self.command == "oracle" and self.max_perimeter is None:
            raise ToolkitError("oracle necesita --max-perimeter")

    @property
    def progress(self) -> bool:
        # barras tqdm sólo en una terminal y sin -q
        return self.log_level <= logging.INFO and sys.stderr.isatty()


def build_parser() -> argparse.ArgumentParser:
    # Opciones compartidas por todos los subcomandos
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=6, help="orden de truncamiento N (W + H <= N)")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--output", help="archivo de salida (por defecto, la salida estándar)")
    common.add_argument("--threads", type=int, default=1, help="procesos del oráculo")
    common.add_argument("--collapse", choices=("half-perimeter",), help="sumar por W + H")
    common.add_argument("--seed-cache", metavar="DIR", help="directorio de series ya construidas")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="registro DEBUG")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="sólo advertencias")

    parser = argparse.ArgumentParser(prog="mconvex", description="Series de polígonos m-convexos")
    # Un subparser por comando
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="tabla de coeficientes de una familia")
    p.add_argument("--family", required=True)

    p = sub.add_parser("oracle", parents=[common], help="enumeración exhaustiva")
    p.add_argument("--max-perimeter", type=int, required=True)
    p.add_argument("--allow-large", action="store_true", help="permitir perímetros sobre el tope")

    p = sub.add_parser("compare", parents=[common], help="comparar una familia")
    p.add_argument("--family", required=True)
    p.add_argument("--against", help="otra familia (por defecto, el oráculo)")
    p.add_argument("--allow-large", action="store_true")

    sub.add_parser("list", parents=[common], help="familias registradas")

    p = sub.add_parser("errata", parents=[common], help="informe de erratas")
    p.add_argument("--allow-large", action="store_true")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Lee los argumentos y arma la configuración.
    Parámetros: argv (None = sys.argv[1:])
    Retorna: RunConfig validada
    """
    args = build_parser().parse_args(argv)
    # -v y -q son excluyentes; sin ninguno, INFO
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    return RunConfig(
        command=args.command,
        # no todos los subcomandos definen estas opciones
        family=getattr(args, "family", None),
        against=getattr(args, "against", None),
        order=args.order,
        max_perimeter=getattr(args, "max_perimeter", None),
        format=args.format,
        output=args.output,
        threads=args.threads,
        collapse=args.collapse,
        seed_cache=args.seed_cache,
        allow_large=getattr(args, "allow_large", False),
        log_level=level,
    )


# =============================================================================
# COMANDOS
# =============================================================================

def _build(config: RunConfig, key: str) -> S.MultiSeries:
    # Con --seed-cache la serie se reutiliza si ya se construyó
    if config.seed_cache:
        return SeedCache(config.seed_cache).get_or_build(key, config.order,
                                                        lambda n: build_family(key, n))
    return build_family(key, config.order)


def _emit(config: RunConfig, text: str) -> None:
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("salida escrita en %s", config.output)
    else:
        sys.stdout.write(text)


def cmd_expand(config: RunConfig) -> int:
    table = _build(config, config.family).table()
    text = write_table(config.output, config.family, config.order, table, config.format, config.collapse)
    if not config.output:
        sys.stdout.write(text)
    return 0


def cmd_oracle(config: RunConfig) -> int:
    table = enumerate_polygons(config.max_perimeter, threads=config.threads,
                               allow_large=config.allow_large, progress=config.progress)
    _emit(config, render_count_table(table, config.format))
    return 0


def diff_tables(left: Table, right: Table) -> List[Tuple[int, int, int, int]]:
    """Entradas (W, H, izquierda, derecha) con valores distintos, en orden de W + H"""
    # un monomio ausente de un lado cuenta como 0
    keys = sorted(set(left) | set(right), key=lambda k: (k[0] + k[1], k))
    return [(w, h, left.get((w, h), 0), right.get((w, h), 0))
            for w, h in keys if left.get((w, h), 0) != right.get((w, h), 0)]


def render_diff(family: str, against: str, order: int, diffs, fmt: str) -> str:
    if fmt == "json":
        data = {"family": family, "against": against, "order": order,
                "differences": [{"w": w, "h": h, "family": a, "against": b} for w, h, a, b in diffs]}
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return "w,h,family,against\n" + "".join(f"{w},{h},{a},{b}\n" for w, h, a, b in diffs)
    # Texto: una línea de resumen y una por monomio distinto
    if not diffs:
        return f"{family} = {against} hasta el orden {order}\n"
    lines = [f"{family} frente a {against} (orden {order}): {len(diffs)} diferencias"]
    lines += [f"  [x^{w} y^{h}]  {a}  {b}  ({a - b:+d})" for w, h, a, b in diffs]
    return "\n".join(lines) + "\n"


def cmd_compare(config: RunConfig) -> int:
    spec = get_family(config.family)
    left = _build(config, spec.key).table()
    if config.against:
        against = get_family(config.against).key
        right = _build(config, against).table()
    else:
        against = f"oráculo ({spec.oracle_filter.describe()})" if spec.oracle_filter else "oráculo"
        # la tabla del oráculo se limita al perímetro que exige el orden
        right = table_for(spec, config.order, threads=config.threads, allow_large=config.allow_large)
    diffs = diff_tables(left, right)
    _emit(config, render_diff(spec.key, against, config.order, diffs, config.format))
    # código 1: la comparación encontró diferencias
    return 1 if diffs else 0


def cmd_list(config: RunConfig) -> int:
    lines = []
    for key, spec in families().items():
        oracle = spec.oracle_filter.describe() if spec.oracle_filter else "-"
        lines.append(f"{key:40s} orden>={spec.min_order:<3d} oráculo: {oracle:22s} {spec.description}")
    _emit(config, "\n".join(lines) + "\n")
    return 0


# -----------------------------------------------------------------------------
# Informe de erratas
# -----------------------------------------------------------------------------

# Cada sección devuelve sus líneas y cuántas discrepancias encontró
Section = Tuple[List[str], int]


def _section(title: str, body: List[str]) -> List[str]:
    return ["", title, "-" * len(title)] + (body or ["(sin hallazgos)"])


def _diff_lines(diffs: List[Tuple[int, int, int, int]], left: str, right: str) -> List[str]:
    return [f"  [x^{w} y^{h}] {left} {a}, {right} {b}" for w, h, a, b in diffs]


def _errata_corrections() -> Section:
    out = []
    for name in list_files():
        for old, new in load_named(name).corrections:
            out.append(f"{name}: '{old}' -> '{new}'")
    # las correcciones ya aplicadas no cuentan como discrepancias
    return out, 0


def _errata_bimodal(order: int) -> Section:
    n = max(order, 5)
    variants = bimodal_closed_variants(n)
    out = []
    for signs, diffs in variants.items():
        label = "impresa" if signs == (1, 1) else f"signos {signs}"
        out.append(f"forma cerrada {label}: {len(diffs)} diferencias con la suma G hasta el orden {n}")
    # sólo la forma impresa cuenta como errata; las variantes son diagnóstico
    printed = variants[(1, 1)]
    if printed:
        matching = [signs for signs, diffs in variants.items() if not diffs]
        out.append(f"variantes que coinciden: {matching or 'ninguna'}")
        out += _diff_lines(printed, "suma G", "forma cerrada")
    return out, len(printed)


def _errata_oracle(config: RunConfig) -> Section:
    out, found = [], 0
    n = max(config.order, 5)
    # una tabla común para todas las familias con m <= 2
    table = cached_table(2 * (n + 2), threads=config.threads, allow_large=config.allow_large,
                         progress=config.progress)
    for key in ("convex", "one_convex") + CLOSED_FORMS:
        spec = get_family(key)
        try:
            series = build_family(key, n)
        except RegularityError as exc:
            # el prefactor no se cancela: se listan los monomios que sobran
            found += 1
            out.append(f"{key}: no se pudo construir ({exc})")
            out += [f"  monomio {e}" for e in exc.monomials]
            continue
        except ToolkitError as exc:
            found += 1
            out.append(f"{key}: no se pudo construir ({exc})")
            continue
        diffs = diff_tables(series.table(), table_for(spec, n, table=table))
        found += len(diffs)
        out.append(f"{key}: {len(diffs)} diferencias con el oráculo hasta W + H = {n}")
        out += _diff_lines(diffs, "serie", "oráculo")

    # m = 1: el factor R del caso 6 como C (el que se usa) y como H
    oracle = table_for(get_family("one_convex"), n, table=table)
    for block in ("C", "H"):
        diffs = diff_tables(bimodal_total(1, n, block).table(), oracle)
        if block == "C":
            found += len(diffs)
        out.append(f"bimodales m = 1 con R = {block}: {len(diffs)} diferencias con el oráculo")
        out += _diff_lines(diffs, "serie", "oráculo")

    # 1-unimodales: indentaciones verticales y sus transpuestas (horizontales)
    F = one_unimodal_vertical(n)
    total = (F + S.transpose(F)).table()
    diffs = diff_tables(total, table.by_size(ClassFilter(1, frozenset({"BL"})), max_half=n))
    found += len(diffs)
    out.append(f"one_unimodal: {len(diffs)} diferencias con 1-convexos por la esquina BL")
    out += _diff_lines(diffs, "serie", "oráculo")
    return out, found


def _errata_cases(order: int) -> Section:
    from .cases import CASES

    out = []
    for case in CASES.values():
        n = max(order, case.min_order)
        try:
            f = case.builder(n)
        except ToolkitError as exc:
            out.append(f"{case.name}: no se pudo construir ({exc})")
            continue
        if not f.is_nonnegative_integral():
            out.append(f"{case.name}: coeficientes negativos o no enteros")
    return out, len(out)


def _errata_appendix(order: int) -> Section:
    from .appendix import KINDS, bracketing_comparison, remark_form

    out, found = [], 0
    report = bracketing_comparison(order)
    if report.agree:
        out.append(f"m = 1: la fórmula de indentaciones coincide con I·y²·d/dy(SP/y) hasta el orden {order}")
    else:
        # la discrepancia con la escalera bimodal es conocida y no cuenta
        w, h, a, b = report.first_difference
        out.append(f"m = 1: primera diferencia en [x^{w} y^{h}]: indentaciones {a}, escalera bimodal {b}")
    for kind in KINDS:
        for m in (1, 2, 3):
            r = remark_form(m, kind)
            if not r.polynomial:
                out.append(f"{kind}, m = {m}: A y B no son polinomios")
                continue
            ax, ay, bx, by = r.degrees
            out.append(f"{kind}, m = {m}: grados A ({ax}, {ay}), B ({bx}, {by}); "
                       f"cotas {r.bounds}, {'se cumplen' if r.within_bounds else 'no se cumplen'}")
            if not r.within_bounds:
                found += 1
    return out, found


def _errata_denominator(order: int) -> Section:
    n = max(order, 7)
    D, x_power = bimodal_closed_3_denominator(n)
    # la imagen (u, v) de un polinomio de grado d tiene grado <= 2d
    bound = 2 * max(sum(e) for e in D.terms)
    check = denominator_check(bimodal_sum(3, n), D, x_power, bound)
    if not check.conclusive:
        return [f"m = 3: no concluyente (exacta hasta grado {check.order}, cota {bound})"], 0
    if check.polynomial:
        return [f"m = 3: polinomio, grado {check.top_degree} <= {bound}"], 0
    return [f"m = 3: {len(check.offending)} monomios por encima de la cota {bound}"], len(check.offending)


def cmd_errata(config: RunConfig) -> int:
    """
    Informe con todas las comparaciones conocidas.
    Retorna: 1 si alguna sección encontró discrepancias o falló, 0 si no
    """
    steps: List[Tuple[str, Callable[[], Section]]] = [
        ("Correcciones de los archivos de datos", _errata_corrections),
        ("Suma bimodal m = 2 frente a la forma cerrada", lambda: _errata_bimodal(config.order)),
        ("Familias frente al oráculo", lambda: _errata_oracle(config)),
        ("Casos con coeficientes negativos", lambda: _errata_cases(config.order)),
        ("Indentaciones múltiples a la izquierda", lambda: _errata_appendix(config.order)),
        ("Denominador impreso para m = 3", lambda: _errata_denominator(config.order)),
    ]
    lines = [f"Informe de erratas (orden {config.order})"]
    total = 0
    for title, step in steps:
        logger.info("erratas: %s", title.lower())
        try:
            body, found = step()
        except ToolkitError as exc:
            logger.warning("erratas: %s falló: %s", title.lower(), exc)
            body, found = [f"error: {exc}"], 1
        total += found
        lines += _section(title, body)
    lines.append("")
    lines.append(f"Total: {total} discrepancias")
    _emit(config, "\n".join(lines) + "\n")
    return 1 if total else 0


HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "expand": cmd_expand,
    "oracle": cmd_oracle,
    "compare": cmd_compare,
    "list": cmd_list,
    "errata": cmd_errata,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Punto de entrada: configura el registro, ejecuta el subcomando y traduce
    las excepciones del paquete a códigos de salida.
    """
    try:
        config = parse_config(argv)
    except ToolkitError as exc:
        logging.basicConfig(format=LOG_FORMAT)
        logger.error("%s", exc)
        return exc.exit_code
    # el nivel sale de -v / -q
    logging.basicConfig(level=config.log_level, format=LOG_FORMAT)
    try:
        # cada comando devuelve su propio código de salida
        return HANDLERS[config.command](config)
    except ToolkitError as exc:
        logger.error("%s", exc)
        return exc.exit_code
