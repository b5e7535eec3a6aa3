"""
Módulo: run.py
==============
Lanzador de la línea de comandos de series de polígonos m-convexos.

Configura las rutas de Python para poder ejecutarse desde cualquier
directorio y delega en src.cli.main, cuyo valor de retorno es el código de
salida.

Ejecución:
----------
    python run.py list
    python run.py expand --family convex --order 6 --format csv
    python run.py compare --family two_convex --order 8
    python run.py oracle --max-perimeter 16 --threads 4 --format json
    python run.py errata --order 8
"""

import os
import sys

# ============================================================================
# CONFIGURACIÓN DE RUTAS
# ============================================================================
# Directorio base del proyecto (donde está este script), para "from src.X import Y"
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
if BASE_DIR not in sys.path:
    sys.path.insert(0, BASE_DIR)

from src.cli import main  # noqa: E402

# ============================================================================
# PUNTO DE ENTRADA
# ============================================================================
if __name__ == "__main__":
    sys.exit(main())
