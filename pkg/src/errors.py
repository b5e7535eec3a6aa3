"""
Módulo: errors.py - Jerarquía de excepciones del paquete
=========================================================
Todas las excepciones propias derivan de ToolkitError. El código de biblioteca
sólo lanza; la CLI captura, registra y traduce a códigos de salida.
"""

from __future__ import annotations

from typing import Iterable, Tuple


class ToolkitError(Exception):
    """Raíz de todas las excepciones del paquete"""

    # Código de salida que la CLI usa si la excepción llega hasta ella
    exit_code: int = 2


class SeriesError(ToolkitError, ValueError):
    """Error de aritmética de series (variables, precisión, cocientes)"""


class OperatorError(ToolkitError, ValueError):
    """Error en E, en los productos de Hadamard o en Φ"""


class CatalogError(ToolkitError, KeyError):
    """Clave desconocida o parámetros inválidos en el catálogo"""

    def __str__(self) -> str:
        # KeyError pone comillas alrededor del mensaje; aquí no las queremos
        return str(self.args[0]) if self.args else ""


class DataFileError(ToolkitError):
    """Archivo de polinomio corrupto, mal formado o con checksum distinto"""

    exit_code = 4


class FamilyError(ToolkitError, ValueError):
    """Familia o caso desconocido, parámetro fuera de rango"""


class RegularityError(FamilyError):
    """
    Una forma cerrada no cancela su prefactor 1/(x^a y^b ...).
    Guarda los monomios culpables para el informe de erratas.
    """

    def __init__(self, message: str, monomials: Iterable[Tuple[int, ...]] = ()):
        super().__init__(message)
        self.monomials = list(monomials)


class OracleError(ToolkitError, ValueError):
    """Cota de perímetro inválida o filtro de clase inexpresable"""


class InsufficientBoundError(OracleError):
    """La cota del oráculo no alcanza para el orden pedido"""

    exit_code = 3
