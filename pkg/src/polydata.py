"""
Módulo: polydata.py - Archivos de polinomios transcritos
=========================================================
Los polinomios grandes (A(s,t) de los perímetros superior/inferior y los
pares A, B de las formas cerradas) viven en data/polinomios/*.txt en la misma
notación humana en que se publicaron. Cada archivo tiene:

    # etiqueta: 2-convex/A
    # variables: x y
    # correccion: (20+21+15x^2) => (20+21x+15x^2)     (opcional, repetible)
    # sha256: <hash del cuerpo>
    <cuerpo>

El hash cubre las líneas del cuerpo (todas las que no empiezan con '#') con
sus saltos de línea. Las correcciones se aplican DESPUÉS de verificarlo, de
modo que cada errata queda registrada en el propio archivo.
"""

from __future__ import annotations

import hashlib
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Tuple

import sympy

from .errors import DataFileError
from .series import MultiSeries, VarSet

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "polinomios"

# Columnas del formato canónico: un monomio por línea
CANONICAL_VARS = ("s", "t", "x", "y")

# Multiplicación implícita: "2 x", "x (", ")(", ") x", "x y"
_IMPLICIT = re.compile(r"(?<=[0-9a-z)])\s*(?=[a-z(])")


@dataclass
class PolynomialFile:
    """Contenido verificado de un archivo de polinomio"""
    # label: etiqueta de la ecuación de origen ("2-convex/A")
    label: str

    # variables: nombres en el orden del encabezado
    variables: Tuple[str, ...]

    # checksum: sha256 declarado (y verificado) del cuerpo
    checksum: str

    # corrections: pares (texto publicado, texto corregido)
    corrections: List[Tuple[str, str]] = field(default_factory=list)

    # body: cuerpo ya corregido, en notación humana
    body: str = ""

    path: Path = None

    def expression(self) -> sympy.Expr:
        """Expresión sympy del cuerpo normalizado"""
        symbols = {name: sympy.Symbol(name) for name in self.variables}
        try:
            return sympy.sympify(normalize(self.body), locals=symbols)
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise DataFileError(f"{self.path}: cuerpo no analizable ({exc})") from exc

    def terms(self) -> Dict[Tuple[int, ...], int]:
        """Monomios expandidos: exponentes (en el orden de variables) -> coeficiente"""
        return _expanded_terms(self.path, self.body, self.variables)

    def to_series(self, vars: VarSet, order: int) -> MultiSeries:
        """El polinomio como serie del contexto dado (las variables por nombre)"""
        # posición de cada variable del archivo dentro del VarSet
        idx = [vars.index(name) for name in self.variables]
        out = {}
        for exps, c in self.terms().items():
            e = [0] * len(vars.names)
            for i, a in zip(idx, exps):
                e[i] = a
            out[tuple(e)] = c
        return MultiSeries(vars, order, out)

    def canonical_text(self) -> str:
        """
        Forma canónica `e_s e_t e_x e_y coeficiente`, orden lexicográfico
        graduado. Sirve para revisar la transcripción monomio a monomio.
        """
        lines = []
        terms = self.terms()
        for exps in sorted(terms, key=lambda e: (sum(e), e)):
            full = [0] * len(CANONICAL_VARS)
            for name, a in zip(self.variables, exps):
                full[CANONICAL_VARS.index(name)] = a
            lines.append(" ".join(str(a) for a in full) + f" {terms[exps]}")
        return "\n".join(lines) + "\n"


def normalize(text: str) -> str:
    """
    Pasa la notación publicada a sintaxis de Python:
    une líneas, llaves -> paréntesis, ^ -> ** y multiplicación explícita.
    """
    # saltos de línea e indentación del archivo fuera
    text = " ".join(text.split())
    text = text.replace("{", "(").replace("}", ")").replace("^", "**")
    return _IMPLICIT.sub("*", text)


def body_checksum(body: str) -> str:
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


@lru_cache(maxsize=None)
def _expanded_terms(path, body: str, variables: Tuple[str, ...]) -> Dict[Tuple[int, ...], int]:
    symbols = [sympy.Symbol(name) for name in variables]
    try:
        expr = sympy.sympify(normalize(body), locals={s.name: s for s in symbols})
        # Poly falla si aparece un símbolo que no está en el encabezado
        poly = sympy.Poly(sympy.expand(expr), *symbols)
    except (sympy.SympifyError, sympy.PolynomialError, SyntaxError, TypeError) as exc:
        raise DataFileError(f"{path}: cuerpo no analizable ({exc})") from exc
    out = {}
    for exps, c in poly.terms():
        if not c.is_Integer:
            raise DataFileError(f"{path}: coeficiente no entero {c} en {exps}")
        out[tuple(exps)] = int(c)
    return out


def load_polynomial(path: Path) -> PolynomialFile:
    """
    Lee, verifica y corrige un archivo de polinomio.
    Parámetros: path (ruta al .txt)
    Retorna: PolynomialFile
    Lanza DataFileError si falta un encabezado, el hash no coincide o una
    corrección no aparece en el cuerpo.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFileError(f"no se pudo leer {path}: {exc}") from exc

    # Separar encabezado (líneas con #) y cuerpo
    header: Dict[str, List[str]] = {}
    body_lines = []
    for line in raw.splitlines(keepends=True):
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if not sep:
                raise DataFileError(f"{path}: encabezado mal formado {line.strip()!r}")
            # una clave puede repetirse (varias correcciones)
            header.setdefault(key.strip(), []).append(value.strip())
        else:
            body_lines.append(line)
    body = "".join(body_lines)

    for key in ("etiqueta", "variables", "sha256"):
        if key not in header:
            raise DataFileError(f"{path}: falta el encabezado '# {key}:'")
    # El hash cubre el cuerpo tal como se transcribió, antes de corregir
    declared = header["sha256"][0]
    actual = body_checksum(body)
    if actual != declared:
        raise DataFileError(f"{path}: checksum distinto (declarado {declared[:12]}…, real {actual[:12]}…)")

    # Correcciones en el orden del encabezado, sobre el texto literal
    corrections = []
    for spec in header.get("correccion", []):
        old, sep, new = spec.partition("=>")
        old, new = old.strip(), new.strip()
        if not sep or not old:
            raise DataFileError(f"{path}: corrección mal formada {spec!r}")
        if old not in body:
            raise DataFileError(f"{path}: la corrección {old!r} no aparece en el cuerpo")
        body = body.replace(old, new)
        corrections.append((old, new))
        logger.info("%s: corrección aplicada %s => %s", path.name, old, new)

    variables = tuple(header["variables"][0].split())
    unknown = [v for v in variables if v not in CANONICAL_VARS]
    if unknown:
        raise DataFileError(f"{path}: variables desconocidas {unknown}")
    logger.info("cargado %s (%s, sha256 %s…)", header["etiqueta"][0], path.name, declared[:12])
    return PolynomialFile(header["etiqueta"][0], variables, declared, corrections, body, path)


@lru_cache(maxsize=None)
def load_named(name: str, data_dir: Path = DATA_DIR) -> PolynomialFile:
    """Carga data_dir/<name>.txt (cacheado por nombre)"""
    path = Path(data_dir) / f"{name}.txt"
    if not path.exists():
        raise DataFileError(f"no existe el archivo de polinomio {path}")
    return load_polynomial(path)


def list_files(data_dir: Path = DATA_DIR) -> List[str]:
    return sorted(p.stem for p in Path(data_dir).glob("*.txt"))


def checksums(names, data_dir: Path = DATA_DIR) -> Dict[str, str]:
    """Hash declarado de cada archivo (clave de la caché de semillas)"""
    return {name: load_named(name, data_dir).checksum for name in names}
