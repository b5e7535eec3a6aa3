"""
Módulo: oracle.py - Enumeración exhaustiva de polígonos autoevitantes
======================================================================
Cuenta todos los polígonos autoevitantes de la red cuadrada (salvo
traslación) hasta un perímetro dado y los clasifica por ancho W y alto H del
rectángulo mínimo, índice de concavidad m = (p - 2(W+H))/2 y las esquinas
del rectángulo por las que pasa la frontera.

Forma canónica: cada polígono se recorre una sola vez, en sentido
antihorario, desde su vértice más bajo (y dentro de esa fila, el de más a la
izquierda), que se fija en el origen. Desde ahí el primer paso es E y el
último es S, entrando al origen desde (0, 1).

Es la verdad de referencia contra la que se comparan todas las series.
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from tqdm import tqdm

from .errors import InsufficientBoundError, OracleError

logger = logging.getLogger(__name__)

# Perímetro máximo sin --allow-large (el tiempo crece ~2.6x por cada 2 pasos)
SAFETY_CAP = 26

# Profundidad de los prefijos que se reparten entre procesos
PREFIX_DEPTH = 8

STEPS: Dict[str, Tuple[int, int]] = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}

# Orden de las esquinas en las banderas: abajo-izquierda, abajo-derecha,
# arriba-izquierda, arriba-derecha
CORNERS = ("BL", "BR", "TL", "TR")

Key = Tuple[int, int, int, str]


# =============================================================================
# POLÍGONO Y CLASIFICACIÓN
# =============================================================================

@dataclass(frozen=True)
class LatticePolygon:
    """Polígono como palabra de pasos antihoraria desde su ancla canónica"""
    # steps: palabra en {N, S, E, W}; empieza en el origen y vuelve a él
    steps: str

    def __post_init__(self):
        # Un ciclo cerrado en la red cuadrada tiene longitud par y al menos 4
        if len(self.steps) < 4 or len(self.steps) % 2:
            raise OracleError(f"longitud de frontera inválida: {len(self.steps)}")
        if any(c not in STEPS for c in self.steps):
            raise OracleError(f"paso desconocido en {self.steps!r}")
        # Autoevitante: ningún vértice se visita dos veces
        seen = set()
        for p in self.vertices():
            if p in seen:
                raise OracleError(f"la frontera repite el vértice {p}")
            seen.add(p)
        x, y = self._walk_end()
        if (x, y) != (0, 0):
            raise OracleError("la frontera no se cierra")
        # Área con signo positiva = recorrido antihorario
        if self._signed_area2() <= 0:
            raise OracleError("la frontera no es antihoraria")
        # Orden (y, x): primero la fila más baja, luego la columna más a la izquierda
        if min(seen, key=lambda p: (p[1], p[0])) != (0, 0):
            raise OracleError("el ancla no es el vértice más bajo a la izquierda")

    def _walk_end(self) -> Tuple[int, int]:
        x = y = 0
        for c in self.steps:
            dx, dy = STEPS[c]
            x, y = x + dx, y + dy
        return x, y

    def vertices(self) -> List[Tuple[int, int]]:
        """Vértices en orden de recorrido, empezando en el origen (sin repetirlo)"""
        out = [(0, 0)]
        x = y = 0
        for c in self.steps[:-1]:
            dx, dy = STEPS[c]
            x, y = x + dx, y + dy
            out.append((x, y))
        return out

    def _signed_area2(self) -> int:
        # Fórmula del cordón de zapato, sin dividir por 2
        pts = self.vertices()
        return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]))

    @property
    def perimeter(self) -> int:
        return len(self.steps)

    @property
    def area(self) -> int:
        return self._signed_area2() // 2

    @classmethod
    def from_cells(cls, cells: Iterable[Tuple[int, int]]) -> "LatticePolygon":
        """
        Frontera de un poliominó simplemente conexo dado por sus celdas
        (esquina inferior izquierda de cada una). Lanza OracleError si la
        frontera no es un único ciclo autoevitante.
        """
        cells = set(cells)
        if not cells:
            raise OracleError("conjunto de celdas vacío")
        # Aristas dirigidas antihorarias de cada celda; las internas se cancelan
        edges: Set[Tuple[Tuple[int, int], Tuple[int, int]]] = set()
        for (i, j) in cells:
            for a, b in (((i, j), (i + 1, j)), ((i + 1, j), (i + 1, j + 1)),
                         ((i + 1, j + 1), (i, j + 1)), ((i, j + 1), (i, j))):
                if (b, a) in edges:
                    edges.remove((b, a))
                else:
                    edges.add((a, b))
        # Sucesor de cada vértice sobre la frontera
        nxt: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for a, b in edges:
            if a in nxt:
                raise OracleError(f"la frontera toca el vértice {a} dos veces")
            nxt[a] = b
        # Se recorre desde el ancla canónica hasta volver a ella
        start = min(nxt, key=lambda p: (p[1], p[0]))
        names = {v: k for k, v in STEPS.items()}
        word = []
        p = start
        while True:
            q = nxt[p]
            word.append(names[(q[0] - p[0], q[1] - p[1])])
            p = q
            if p == start:
                break
        # Si sobran aristas la frontera tenía más de un ciclo (celdas con huecos
        # o desconectadas)
        if len(word) != len(edges):
            raise OracleError("las celdas no forman un único polígono")
        return cls("".join(word))


@dataclass(frozen=True)
class Classification:
    """Medidas de un polígono respecto de su rectángulo mínimo"""
    width: int
    height: int
    perimeter: int
    # m: índice de concavidad
    m: int
    # corners: frontera por (BL, BR, TL, TR)
    corners: Tuple[bool, bool, bool, bool]

    @property
    def flags(self) -> str:
        return "".join("1" if c else "0" for c in self.corners)


def _classify_raw(visited, minx: int, maxx: int, maxy: int, perimeter: int) -> Key:
    # La fila más baja es y = 0 por construcción, así que el alto es maxy
    width, height = maxx - minx, maxy
    # Una esquina del rectángulo está en la frontera si es uno de sus vértices
    flags = "".join("1" if c else "0" for c in (
        minx == 0,  # el ancla es (0, 0) y la fila 0 no tiene vértices con x < 0
        (maxx, 0) in visited,
        (minx, maxy) in visited,
        (maxx, maxy) in visited,
    ))
    # m = (p - 2(W + H)) / 2: la mitad del exceso de perímetro sobre el rectángulo
    return width, height, (perimeter - 2 * (width + height)) // 2, flags


def classify(poly: LatticePolygon) -> Classification:
    """
    Parámetros: poly (polígono válido)
    Retorna: Classification con W, H, p, m y las esquinas
    """
    pts = poly.vertices()
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    minx, maxx, maxy = min(xs), max(xs), max(ys)
    w, h, m, flags = _classify_raw(set(pts), minx, maxx, maxy, poly.perimeter)
    return Classification(w, h, poly.perimeter, m, tuple(c == "1" for c in flags))


def is_row_column_convex(poly: LatticePolygon) -> bool:
    """
    Cada fila y cada columna de celdas es un intervalo: exactamente dos
    aristas verticales por fila y dos horizontales por columna.
    """
    rows: Counter = Counter()
    cols: Counter = Counter()
    pts = poly.vertices()
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        if x0 == x1:
            # arista vertical entre y e y + 1: borde de la fila de celdas y
            rows[min(y0, y1)] += 1
        else:
            # arista horizontal entre x y x + 1: borde de la columna x
            cols[min(x0, x1)] += 1
    return all(c == 2 for c in rows.values()) and all(c == 2 for c in cols.values())


# =============================================================================
# ENUMERACIÓN
# =============================================================================

def _dfs(x: int, y: int, length: int, visited: Set[Tuple[int, int]], minx: int, maxx: int, maxy: int,
         limit: int, on_close: Callable[[Set, int, int, int, int], None]) -> None:
    """Extiende el camino abierto; al llegar a (0, 1) cierra con un paso S"""
    for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        nx, ny = x + dx, y + dy
        # el ancla (0, 0) es el vértice más a la izquierda de la fila más baja
        if ny < 0 or (ny == 0 and nx < 0):
            continue
        p = (nx, ny)
        # camino autoevitante
        if p in visited:
            continue
        used = length + 1
        if p == (0, 1):
            # (0, 1) sólo aparece como penúltimo vértice: el paso S a (0, 0) cierra
            if used + 1 <= limit:
                visited.add(p)
                on_close(visited, min(minx, 0), maxx, max(maxy, 1), used + 1)
                visited.remove(p)
            continue
        # Poda: hay que volver a (0, 1) y dar el paso final
        if abs(nx) + abs(ny - 1) + 1 > limit - used:
            continue
        visited.add(p)
        # minx, maxx y maxy: caja envolvente del camino hasta aquí
        _dfs(nx, ny, used, visited, min(minx, nx), max(maxx, nx), max(maxy, ny), limit, on_close)
        visited.remove(p)


@dataclass
class _Prefix:
    path: List[Tuple[int, int]]
    minx: int
    maxx: int
    maxy: int


def _prefixes(limit: int, depth: int, on_close) -> List[_Prefix]:
    """Caminos abiertos de `depth` pasos; los polígonos más cortos se cuentan aquí"""
    out: List[_Prefix] = []

    def walk(path, minx, maxx, maxy):
        # Prefijo completo: se guarda para repartirlo entre procesos
        if len(path) - 1 == depth:
            out.append(_Prefix(list(path), minx, maxx, maxy))
            return
        x, y = path[-1]
        visited = set(path)
        for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            nx, ny = x + dx, y + dy
            # mismas reglas que _dfs: sin bajar del ancla y sin repetir vértices
            if ny < 0 or (ny == 0 and nx < 0) or (nx, ny) in visited:
                continue
            used = len(path)
            if (nx, ny) == (0, 1):
                if used + 1 <= limit:
                    # polígono más corto que el prefijo: se cuenta ya
                    on_close(visited | {(0, 1)}, min(minx, 0), maxx, max(maxy, 1), used + 1)
                continue
            if abs(nx) + abs(ny - 1) + 1 > limit - used:
                continue
            path.append((nx, ny))
            walk(path, min(minx, nx), max(maxx, nx), max(maxy, ny))
            path.pop()

    # Primer paso fijo: E
    walk([(0, 0), (1, 0)], 0, 1, 0)
    return out


def _count_prefix(args: Tuple[_Prefix, int]) -> Counter:
    prefix, limit = args
    counts: Counter = Counter()

    def record(visited, minx, maxx, maxy, perimeter):
        counts[_classify_raw(visited, minx, maxx, maxy, perimeter)] += 1

    x, y = prefix.path[-1]
    _dfs(x, y, len(prefix.path) - 1, set(prefix.path), prefix.minx, prefix.maxx, prefix.maxy, limit, record)
    return counts


@dataclass(frozen=True)
class ClassFilter:
    """Clase de polígonos expresable con los campos de Classification"""
    # m: índice de concavidad exigido
    m: int
    # corners: esquinas por las que debe pasar la frontera
    corners: FrozenSet[str] = frozenset()

    def __post_init__(self):
        unknown = set(self.corners) - set(CORNERS)
        if unknown:
            raise OracleError(f"esquinas desconocidas: {sorted(unknown)}")
        if self.m < 0:
            raise OracleError("m debe ser >= 0")

    def matches(self, key: Key) -> bool:
        w, h, m, flags = key
        return m == self.m and all(flags[CORNERS.index(c)] == "1" for c in self.corners)

    def describe(self) -> str:
        corners = "+".join(c for c in CORNERS if c in self.corners) or "-"
        return f"m={self.m}, esquinas={corners}"


@dataclass
class CountTable:
    """Conteos por (W, H, m, banderas de esquinas)"""
    max_perimeter: int
    entries: Dict[Key, int] = field(default_factory=dict)

    def by_size(self, filt: Optional[ClassFilter] = None, max_half: Optional[int] = None) -> Dict[Tuple[int, int], int]:
        """Conteos por (W, H) de la clase `filt`, con W + H <= max_half"""
        out: Dict[Tuple[int, int], int] = {}
        for key, count in self.entries.items():
            if filt is not None and not filt.matches(key):
                continue
            w, h = key[0], key[1]
            if max_half is not None and w + h > max_half:
                continue
            out[(w, h)] = out.get((w, h), 0) + count
        return dict(sorted(out.items()))

    def totals_by_perimeter(self) -> Dict[int, int]:
        out: Counter = Counter()
        for (w, h, m, _), count in self.entries.items():
            out[2 * (w + h + m)] += count
        return dict(sorted(out.items()))

    def half_perimeter_totals(self, m: int = 0) -> Dict[int, int]:
        out: Counter = Counter()
        for (w, h, mm, _), count in self.entries.items():
            if mm == m:
                out[w + h] += count
        return dict(sorted(out.items()))

    def transposed(self) -> "CountTable":
        """Intercambia W y H; BL y TR quedan, BR y TL se intercambian"""
        out: Dict[Key, int] = {}
        for (w, h, m, f), count in self.entries.items():
            # banderas (BL, BR, TL, TR) -> (BL, TL, BR, TR)
            out[(h, w, m, f[0] + f[2] + f[1] + f[3])] = count
        return CountTable(self.max_perimeter, dict(sorted(out.items())))

    def complete_for(self, max_half: int, m: int) -> bool:
        """True si el perímetro alcanza para W + H <= max_half con índice m"""
        return self.max_perimeter >= 2 * (max_half + m)


def _check_bound(max_perimeter: int, allow_large: bool) -> None:
    if max_perimeter < 4 or max_perimeter % 2:
        raise OracleError(f"el perímetro máximo debe ser par y >= 4 (hay {max_perimeter})")
    if max_perimeter > SAFETY_CAP and not allow_large:
        raise OracleError(f"perímetro {max_perimeter} sobre el tope de seguridad {SAFETY_CAP}; use --allow-large")


def enumerate_polygons(max_perimeter: int, filt: Optional[ClassFilter] = None, threads: int = 1,
                       allow_large: bool = False, progress: bool = False) -> CountTable:
    """
    Cuenta todos los polígonos con perímetro <= max_perimeter.
    Parámetros: max_perimeter (par, 4..SAFETY_CAP), filt (clase opcional),
    threads (procesos; 1 = secuencial), allow_large, progress (barra tqdm)
    Retorna: CountTable determinista (independiente de threads)
    """
    _check_bound(max_perimeter, allow_large)
    start = time.perf_counter()
    counts: Counter = Counter()

    def record(visited, minx, maxx, maxy, perimeter):
        counts[_classify_raw(visited, minx, maxx, maxy, perimeter)] += 1

    # Los prefijos deben ser más cortos que el polígono más largo
    depth = min(PREFIX_DEPTH, max_perimeter - 3)
    prefixes = _prefixes(max_perimeter, depth, record)
    jobs = [(p, max_perimeter) for p in prefixes]
    bar = tqdm(total=len(jobs), desc=f"oráculo p<={max_perimeter}", unit="prefijo", disable=not progress)
    # Counter.update es conmutativo: el resultado no depende del reparto
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for partial in pool.map(_count_prefix, jobs, chunksize=max(1, len(jobs) // (8 * threads))):
                counts.update(partial)
                bar.update()
    else:
        for job in jobs:
            counts.update(_count_prefix(job))
            bar.update()
    bar.close()

    # El filtro se aplica al final; la enumeración no se poda por clase
    entries = {k: v for k, v in sorted(counts.items()) if filt is None or filt.matches(k)}
    total = sum(entries.values())
    logger.info("oráculo: %d polígonos con perímetro <= %d en %.1fs",
                total, max_perimeter, time.perf_counter() - start)
    return CountTable(max_perimeter, entries)


def polygons(max_perimeter: int) -> List[LatticePolygon]:
    """Lista explícita de polígonos (sólo para perímetros pequeños)"""
    _check_bound(max_perimeter, allow_large=False)
    found: List[LatticePolygon] = []

    def extend(path):
        x, y = path[-1]
        visited = set(path)
        for name, (dx, dy) in STEPS.items():
            nx, ny = x + dx, y + dy
            # mismas reglas que _dfs: sin bajar del ancla y sin repetir vértices
            if ny < 0 or (ny == 0 and nx < 0) or (nx, ny) in visited:
                continue
            used = len(path)
            if (nx, ny) == (0, 1):
                if used + 1 <= max_perimeter:
                    # paso hasta (0, 1) y S final hasta el ancla
                    found.append(_word(path + [(0, 1), (0, 0)]))
                continue
            if abs(nx) + abs(ny - 1) + 1 > max_perimeter - used:
                continue
            extend(path + [(nx, ny)])

    extend([(0, 0), (1, 0)])
    return sorted(found, key=lambda p: (p.perimeter, p.steps))


def _word(path: List[Tuple[int, int]]) -> LatticePolygon:
    names = {v: k for k, v in STEPS.items()}
    return LatticePolygon("".join(names[(b[0] - a[0], b[1] - a[1])] for a, b in zip(path, path[1:])))


# =============================================================================
# TABLAS POR FAMILIA
# =============================================================================

_tables: Dict[int, CountTable] = {}


def cached_table(max_perimeter: int, threads: int = 1, allow_large: bool = False,
                 progress: bool = False) -> CountTable:
    """Tabla completa memorizada por perímetro (una tabla mayor sirve para cotas menores)"""
    for bound in sorted(_tables):
        if bound >= max_perimeter:
            table = _tables[bound]
            # perímetro = 2(W + H + m)
            entries = {k: v for k, v in table.entries.items() if 2 * (k[0] + k[1] + k[2]) <= max_perimeter}
            return CountTable(max_perimeter, entries)
    table = enumerate_polygons(max_perimeter, threads=threads, allow_large=allow_large, progress=progress)
    _tables[max_perimeter] = table
    return table


def table_for(family, max_order: int, threads: int = 1, allow_large: bool = False,
              table: Optional[CountTable] = None) -> Dict[Tuple[int, int], int]:
    """
    Conteos del oráculo para la clase de una familia, por (W, H) con
    W + H <= max_order. Nunca enumera más allá del perímetro 2N + 2m.
    Parámetros: family (FamilySpec con oracle_filter), max_order,
    table (tabla ya calculada, opcional)
    """
    filt: Optional[ClassFilter] = getattr(family, "oracle_filter", None)
    if filt is None:
        raise OracleError(f"la familia {getattr(family, 'key', family)} no tiene una clase expresable en el oráculo")
    # W + H <= N con índice m exige perímetro 2(N + m)
    bound = 2 * (max_order + filt.m)
    if table is not None:
        if not table.complete_for(max_order, filt.m):
            raise InsufficientBoundError(
                f"la tabla llega al perímetro {table.max_perimeter}; se necesita {bound}")
    else:
        table = cached_table(bound, threads=threads, allow_large=allow_large)
    return table.by_size(filt, max_half=max_order)
