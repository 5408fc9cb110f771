"""Estimación empírica de la constante de comparabilidad.

Cada escala se muestrea con su propio generador ``random.Random`` sembrado
con "semilla:escala", así que el reporte no depende del orden en que los
hilos terminan.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from dyadic_atlas.core.config import hilos_disponibles
from dyadic_atlas.core.exact import format_rational, potencia
from dyadic_atlas.core.grid import Cube, GridRep, Openness
from dyadic_atlas.covering.engine import smallest_comparable

logger = logging.getLogger(__name__)

BITS_MUESTREO = 40

# Ventana de posiciones, en lados de la escala
VENTANA = 4


@dataclass(frozen=True)
class ScaleRow:
    """Resultado de una escala.

    Attributes:
        scale: Escala m (lados en [n₁^(−m−1), n₁^(−m)))
        samples: Cubos muestreados
        max_ratio: Mayor cociente observado entre los cubos recubiertos
        worst_cube: Cubo con ese cociente
        covered_by_grid: Índice de la retícula que lo recubre
        failures: Cubos sin recubrimiento dentro de la cota
    """

    scale: int
    samples: int
    max_ratio: Fraction | None
    worst_cube: Cube | None
    covered_by_grid: int | None
    failures: tuple[Cube, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "scale": str(self.scale),
            "samples": str(self.samples),
            "max_ratio": None if self.max_ratio is None else format_rational(self.max_ratio),
            "worst_cube": None if self.worst_cube is None else self.worst_cube.describir(),
            "covered_by_grid": None if self.covered_by_grid is None else str(self.covered_by_grid),
            "failures": [c.describir() for c in self.failures],
        }


@dataclass(frozen=True)
class EstimateReport:
    """Reporte de estimate_constant, una fila por escala."""

    rows: tuple[ScaleRow, ...]
    ratio_cap: Fraction
    seed: int
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def max_ratio(self) -> Fraction | None:
        ratios = [r.max_ratio for r in self.rows if r.max_ratio is not None]
        return max(ratios) if ratios else None

    @property
    def total_failures(self) -> int:
        return sum(len(r.failures) for r in self.rows)

    def to_dict(self) -> dict[str, Any]:
        maximo = self.max_ratio
        return {
            "seed": str(self.seed),
            "ratio_cap": format_rational(self.ratio_cap),
            "max_ratio": None if maximo is None else format_rational(maximo),
            "failures": str(self.total_failures),
            "rows": [r.to_dict() for r in self.rows],
        }


def _cubo_aleatorio(rng: random.Random, base: int, m: int, dimension: int) -> Cube:
    """Cubo abierto con lado en [n^(−m−1), n^(−m)) y coordenadas de denominador acotado."""
    escala = Fraction(1, 2**BITS_MUESTREO)
    fino = potencia(base, -m - 1)
    lado = fino * (1 + (base - 1) * rng.randrange(2**BITS_MUESTREO) * escala)
    ventana = VENTANA * potencia(base, -m)
    esquina = tuple(
        ventana * rng.randrange(2**BITS_MUESTREO) * escala for _ in range(dimension)
    )
    return Cube(esquina, lado, Openness.OPEN)


def _muestrear_escala(
    family: Sequence[GridRep], m: int, samples: int, seed: int, ratio_cap: Fraction
) -> ScaleRow:
    rng = random.Random(f"{seed}:{m}")
    base = family[0].base
    dimension = family[0].dimension

    max_ratio: Fraction | None = None
    peor: Cube | None = None
    indice: int | None = None
    fallos: list[Cube] = []
    for _ in range(samples):
        q = _cubo_aleatorio(rng, base, m, dimension)
        resultado = smallest_comparable(family, q, ratio_cap)
        if resultado is None:
            fallos.append(q)
            continue
        if max_ratio is None or resultado.ratio > max_ratio:
            max_ratio, peor, indice = resultado.ratio, q, resultado.grid_index

    if fallos:
        logger.warning(f"Escala {m}: {len(fallos)} cubos sin recubrimiento")
    return ScaleRow(m, samples, max_ratio, peor, indice, tuple(fallos))


def estimate_constant(
    family: Sequence[GridRep],
    scales: tuple[int, int],
    samples: int,
    seed: int,
    ratio_cap: Fraction | int = Fraction(1000),
) -> EstimateReport:
    """Muestrea cubos abiertos por escala y mide el menor cociente de recubrimiento.

    Args:
        family: Retículas de la familia
        scales: Rango (inclusive) de escalas m
        samples: Cubos por escala (≥ 1)
        seed: Semilla del muestreo
        ratio_cap: Cociente por encima del cual un cubo cuenta como fallo

    Returns:
        EstimateReport determinista para una semilla dada

    Raises:
        ValueError: Si la familia está vacía, samples < 1 o el rango está vacío
    """
    if not family:
        raise ValueError("La familia de retículas está vacía")
    if samples < 1:
        raise ValueError(f"samples debe ser ≥ 1, recibido: {samples}")
    bajo, alto = scales
    if bajo > alto:
        raise ValueError(f"Rango de escalas vacío: {bajo}..{alto}")
    cota = Fraction(ratio_cap)

    escalas = list(range(bajo, alto + 1))
    hilos = min(hilos_disponibles(), len(escalas))
    logger.debug(f"Estimando {len(escalas)} escalas con {hilos} hilos")
    with ThreadPoolExecutor(max_workers=hilos) as executor:
        filas = list(
            executor.map(lambda m: _muestrear_escala(family, m, samples, seed, cota), escalas)
        )
    return EstimateReport(tuple(filas), cota, seed)
