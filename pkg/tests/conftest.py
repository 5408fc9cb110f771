"""
Configuración de pytest y fixtures compartidas para todos los tests.

Este módulo contiene fixtures reutilizables que están disponibles
automáticamente para todos los tests del proyecto.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import pytest

from dyadic_atlas.core.grid import DigitStream, GridRep


@pytest.fixture
def reticula_estandar() -> GridRep:
    """
    Retícula diádica estándar en R: origen 0 y todos los dígitos 0.

    Returns:
        GridRep de base 2
    """
    return GridRep.estandar(2, 1, "D")


@pytest.fixture
def reticula_tercio() -> GridRep:
    """
    Retícula diádica trasladada por 1/3 con dígitos alternados 0, 1.

    Returns:
        GridRep de base 2 con origen 1/3
    """
    return GridRep(2, (Fraction(1, 3),), DigitStream(2, (), ((0,), (1,))), "D+1/3")


@pytest.fixture
def familia_tercio(reticula_estandar: GridRep, reticula_tercio: GridRep) -> list[GridRep]:
    """
    Familia adyacente clásica en R: D y D+1/3.

    Returns:
        Lista con las dos retículas
    """
    return [reticula_estandar, reticula_tercio]


@pytest.fixture
def documento_familia() -> dict[str, Any]:
    """
    Documento JSON válido de una familia en R.

    Returns:
        Diccionario con el esquema de familia
    """
    return {
        "name": "prueba",
        "description": "Familia de prueba",
        "dimension": 1,
        "grids": [
            {"base": 2, "delta": ["0"], "digits": {"preperiod": [], "period": [[0]]}, "label": "D"},
            {
                "base": 2,
                "delta": ["1/3"],
                "digits": {"preperiod": [], "period": [[0], [1]]},
                "label": "D+1/3",
            },
        ],
    }


@pytest.fixture
def archivo_familia(tmp_path: Path, documento_familia: dict[str, Any]) -> Path:
    """
    Escribe el documento de familia de prueba en un archivo temporal.

    Args:
        tmp_path: Directorio temporal proporcionado por pytest
        documento_familia: Documento a escribir

    Returns:
        Path al archivo JSON
    """
    ruta = tmp_path / "familia.json"
    ruta.write_text(json.dumps(documento_familia), encoding="utf-8")
    return ruta


@pytest.fixture
def directorio_limpio(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """
    Cambia el directorio de trabajo a uno sin .dyadic-atlas.yaml.

    Args:
        tmp_path: Directorio temporal proporcionado por pytest
        monkeypatch: Fixture de pytest para cambiar el cwd

    Returns:
        Path al nuevo directorio de trabajo
    """
    trabajo = tmp_path / "trabajo"
    trabajo.mkdir()
    monkeypatch.chdir(trabajo)
    return trabajo
