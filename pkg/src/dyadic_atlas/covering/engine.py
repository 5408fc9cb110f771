"""Consultas de recubrimiento: el oráculo directo de la definición de adyacencia.

Un cubo abierto Q es comparable a un cubo D de la retícula si Q ⊆ D y
ℓ(D) ≤ C·ℓ(Q). Todas las comparaciones son exactas.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from dyadic_atlas.core.exact import floor_log, format_rational, potencia
from dyadic_atlas.core.grid import Cube, GridRep, cube_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverResult:
    """Cubo de la familia que contiene a la consulta.

    Attributes:
        grid_index: Índice (base 0) de la retícula en la familia
        cube: Cubo de la retícula que contiene a la consulta
        ratio: ℓ(D)/ℓ(Q)
    """

    grid_index: int
    cube: Cube
    ratio: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {
            "grid_index": str(self.grid_index),
            "cube": self.cube.describir(),
            "corner": [format_rational(c) for c in self.cube.corner],
            "side": format_rational(self.cube.side),
            "ratio": format_rational(self.ratio),
        }


def containing_cube(rep: GridRep, m: int, q: Cube) -> Cube | None:
    """Cubo de la generación m de ``rep`` que contiene a q, si existe.

    Examples:
        >>> rep = GridRep.estandar(2)
        >>> q = Cube((Fraction(1, 10),), Fraction(3, 10)).interior()
        >>> containing_cube(rep, 1, q).describir()
        '[0, 1/2)'
    """
    if q.side > potencia(rep.base, -m):
        return None
    candidato = cube_at(rep, m, q.centro())
    return candidato if candidato.contiene_cubo(q) else None


def smallest_comparable(
    family: Sequence[GridRep], q: Cube, ratio_cap: Fraction | int
) -> CoverResult | None:
    """Cubo de menor lado que contiene a q, entre todas las retículas.

    Para cada retícula se parte de la generación más fina con lado ≥ ℓ(q) y
    se engrosa una generación cada vez; por anidamiento, el primer cubo que
    contiene a q es el mínimo de esa retícula. Los empates se resuelven por
    el menor índice de retícula.

    Args:
        family: Retículas de la familia
        q: Cubo de consulta (abierto)
        ratio_cap: Cociente máximo ℓ(D)/ℓ(q) admitido (≥ 1)

    Returns:
        CoverResult, o None si ninguna retícula recubre q dentro de la cota

    Raises:
        ValueError: Si la familia está vacía o ratio_cap < 1
    """
    if not family:
        raise ValueError("La familia de retículas está vacía")
    cota = Fraction(ratio_cap)
    if cota < 1:
        raise ValueError(f"ratio_cap debe ser ≥ 1, recibido: {format_rational(cota)}")

    lado_maximo = cota * q.side
    mejor: CoverResult | None = None
    for indice, rep in enumerate(family):
        m = floor_log(1 / q.side, rep.base)
        while potencia(rep.base, -m) <= lado_maximo:
            if mejor is not None and potencia(rep.base, -m) >= mejor.cube.side:
                break
            cubo = containing_cube(rep, m, q)
            if cubo is not None:
                mejor = CoverResult(indice, cubo, cubo.side / q.side)
                break
            m -= 1

    if mejor is None:
        logger.debug(f"Sin recubrimiento de {q.describir()} con cociente ≤ {format_rational(cota)}")
    return mejor
