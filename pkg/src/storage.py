"""
Módulo: storage.py - Persistencia de tablas y series
=====================================================
Escribe las tablas de coeficientes [x^W y^H] y las tablas del oráculo en
JSON, CSV o texto, y mantiene la caché de semillas: series ya construidas,
guardadas en su forma canónica y reutilizadas mientras no cambien la
familia, el orden ni los archivos de polinomios.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
from collections import Counter
from pathlib import Path
from typing import Dict, Optional, Tuple

from . import series as S
from .errors import ToolkitError
from .oracle import CORNERS, CountTable
from .polydata import DATA_DIR, checksums, list_files
from .series import MultiSeries, VarSet

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "text")

Table = Dict[Tuple[int, int], int]


# =============================================================================
# TABLAS DE COEFICIENTES
# =============================================================================

def collapse_half_perimeter(table: Table) -> Dict[int, int]:
    """Suma los conteos por n = W + H"""
    out: Counter = Counter()
    for (w, h), count in table.items():
        out[w + h] += count
    return dict(sorted(out.items()))


def table_to_dict(family: str, order: int, table: Table) -> dict:
    """Esquema JSON {"family", "order", "entries": [{"w", "h", "count"}]}"""
    # por tamaño n = W + H y luego por W
    entries = [{"w": w, "h": h, "count": c} for (w, h), c in sorted(table.items(), key=_size_key)]
    return {"family": family, "order": order, "entries": entries}


def render_table(family: str, order: int, table: Table, fmt: str = "json",
                 collapse: Optional[str] = None) -> str:
    """
    Texto de salida de una tabla de coeficientes.
    Parámetros: family (clave), order (N), table ((W, H) -> conteo),
    fmt ("json", "csv" o "text"), collapse (None o "half-perimeter")
    Retorna: el texto, terminado en salto de línea
    """
    _check_format(fmt)
    if collapse == "half-perimeter":
        totals = collapse_half_perimeter(table)
        if fmt == "json":
            data = {"family": family, "order": order,
                    "entries": [{"n": n, "count": c} for n, c in totals.items()]}
            return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
        rows = [(n, c) for n, c in totals.items()]
        return _rows(fmt, ("n", "count"), rows)
    if collapse is not None:
        raise ToolkitError(f"modo de colapso desconocido: {collapse}")

    if fmt == "json":
        return json.dumps(table_to_dict(family, order, table), indent=2, ensure_ascii=False) + "\n"
    rows = [(w, h, c) for (w, h), c in sorted(table.items(), key=_size_key)]
    return _rows(fmt, ("w", "h", "count"), rows)


def write_table(path: Optional[str], family: str, order: int, table: Table, fmt: str = "json",
                collapse: Optional[str] = None) -> str:
    """Igual que render_table, escribiendo además en `path` si se indica"""
    text = render_table(family, order, table, fmt, collapse)
    if path:
        # newline="": el módulo csv ya escribe sus propios fines de línea
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("tabla %s escrita en %s", family, path)
    return text


def load_table(path: str) -> Tuple[str, int, Table]:
    """Lee una tabla escrita en JSON por write_table"""
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    try:
        # JSON no admite tuplas como clave: se rearman aquí
        table = {(e["w"], e["h"]): e["count"] for e in data["entries"]}
        return data["family"], data["order"], table
    except (KeyError, TypeError) as exc:
        raise ToolkitError(f"{path}: no es una tabla de coeficientes ({exc})") from exc


# =============================================================================
# TABLAS DEL ORÁCULO
# =============================================================================

def render_count_table(table: CountTable, fmt: str = "json") -> str:
    """
    JSON anidado por W y luego por H (cada hoja lista m, banderas y conteo);
    CSV con columnas w,h,m,flags,count; texto con las mismas columnas.
    Las banderas son cuatro caracteres 0/1 en el orden BL, BR, TL, TR.
    """
    _check_format(fmt)
    if fmt == "json":
        # Claves de texto: JSON sólo admite cadenas como claves de objeto
        nested: Dict[str, Dict[str, list]] = {}
        for (w, h, m, flags), count in sorted(table.entries.items()):
            nested.setdefault(str(w), {}).setdefault(str(h), []).append(
                {"m": m, "flags": flags, "count": count})
        data = {"max_perimeter": table.max_perimeter, "flags": list(CORNERS), "table": nested}
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    rows = [(w, h, m, flags, c) for (w, h, m, flags), c in sorted(table.entries.items())]
    return _rows(fmt, ("w", "h", "m", "flags", "count"), rows)


def load_count_table(path: str) -> CountTable:
    """Inversa de render_count_table en JSON"""
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    entries = {}
    for w, by_h in data["table"].items():
        for h, leaves in by_h.items():
            for leaf in leaves:
                entries[(int(w), int(h), leaf["m"], leaf["flags"])] = leaf["count"]
    return CountTable(data["max_perimeter"], dict(sorted(entries.items())))


# =============================================================================
# CACHÉ DE SEMILLAS
# =============================================================================

class SeedCache:
    """
    Directorio de series ya construidas. La clave es el SHA-256 de la
    familia, el orden y los hashes de todos los archivos de polinomios, de
    modo que una corrección en un archivo invalida todas las entradas.
    """

    def __init__(self, directory: str, data_dir: Path = DATA_DIR):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.data_dir = data_dir

    def key(self, family: str, order: int) -> str:
        # Todos los archivos, no sólo los que usa la familia
        sums = checksums(list_files(self.data_dir), self.data_dir)
        # sort_keys: el mismo contenido da siempre el mismo hash
        payload = json.dumps({"family": family, "order": order, "data": sums}, sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _path(self, family: str, order: int) -> Path:
        return self.directory / f"{self.key(family, order)}.json"

    def load(self, family: str, order: int) -> Optional[MultiSeries]:
        path = self._path(family, order)
        if not path.exists():
            return None
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        # el VarSet se guarda junto a la serie para reconstruirla tal cual
        vars = VarSet(tuple(data["names"]), tuple(data["weights"]), tuple(data["caps"]))
        logger.debug("caché: %s orden %d desde %s", family, order, path.name)
        return S.from_canonical_text(data["series"], vars, data["order"])

    def store(self, family: str, order: int, f: MultiSeries) -> Path:
        path = self._path(family, order)
        data = {
            "family": family,
            "order": f.order,
            "names": list(f.vars.names),
            "weights": list(f.vars.weights),
            "caps": list(f.vars.caps),
            "series": S.to_canonical_text(f),
        }
        with open(path, "w", encoding="utf-8") as out:
            json.dump(data, out, indent=2, ensure_ascii=False)
        logger.debug("caché: %s orden %d guardada en %s", family, order, path.name)
        return path

    def get_or_build(self, family: str, order: int, build) -> MultiSeries:
        """La serie de la caché o, si no está, build(order) y se guarda"""
        cached = self.load(family, order)
        if cached is not None:
            return cached
        result = build(order)
        self.store(family, order, result)
        return result


# =============================================================================
# AUXILIARES
# =============================================================================

def _size_key(item):
    (w, h), _ = item
    return (w + h, w, h)


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ToolkitError(f"formato desconocido: {fmt} (hay {', '.join(FORMATS)})")


def _rows(fmt: str, header: Tuple[str, ...], rows) -> str:
    # texto: columnas separadas por espacios, sin encabezado
    if fmt == "text":
        return "".join(" ".join(str(v) for v in row) + "\n" for row in rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()
