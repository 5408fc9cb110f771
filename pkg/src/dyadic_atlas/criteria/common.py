"""Tipos comunes de los criterios: veredictos y testigos.

Un veredicto FAR lleva una cota inferior certificada; uno NOT_FAR lleva un
testigo que puede re-verificarse sustituyéndolo en la desigualdad; uno
UNDECIDED lleva el mejor ínfimo observado.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

from dyadic_atlas.core.exact import format_rational, validar_base

UMBRAL_POR_DEFECTO = Fraction(1, 65536)


class VerdictKind(Enum):
    FAR = "FAR"
    NOT_FAR = "NOT_FAR"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class Witness:
    """Índices que violan la desigualdad de lejanía.

    Attributes:
        base_index: Índice de n_ℓ en la tupla ordenada de bases
        base: Valor de n_ℓ
        scale: Generación m (número lejano) o j (par lejano)
        k1: k₁ (o k₃ en pares)
        k2: k₂ (o k₄ en pares)
        margin: Valor escalado de la expresión en el testigo
    """

    base_index: int
    base: int
    scale: int
    k1: int
    k2: int
    margin: Fraction

    def to_dict(self) -> dict[str, str]:
        return {
            "base_index": str(self.base_index),
            "base": str(self.base),
            "scale": str(self.scale),
            "k1": str(self.k1),
            "k2": str(self.k2),
            "margin": format_rational(self.margin),
        }


@dataclass(frozen=True)
class Verdict:
    """Resultado de un criterio de lejanía.

    Attributes:
        kind: FAR, NOT_FAR o UNDECIDED
        bound: Cota certificada (FAR) o mejor ínfimo observado
        witness: Testigo cuando NOT_FAR
        depth_used: Última generación evaluada
        exact: True si ``bound`` es el ínfimo global exacto
        range_infimum: Mínimo exacto sobre el rango verificado
        effective_J: J a partir del cual vale la cota (solo pares lejanos)
    """

    kind: VerdictKind
    bound: Fraction
    witness: Witness | None
    depth_used: int
    exact: bool = False
    range_infimum: Fraction | None = None
    effective_J: int | None = None

    def __post_init__(self) -> None:
        if self.kind is VerdictKind.FAR and self.bound <= 0:
            raise ValueError("Un veredicto FAR requiere cota > 0")
        if self.kind is VerdictKind.NOT_FAR and self.witness is None:
            raise ValueError("Un veredicto NOT_FAR requiere testigo")

    @property
    def es_lejano(self) -> bool:
        return self.kind is VerdictKind.FAR

    def to_dict(self) -> dict[str, Any]:
        datos: dict[str, Any] = {
            "kind": self.kind.value,
            "bound": format_rational(self.bound),
            "exact": self.exact,
            "depth_used": str(self.depth_used),
        }
        if self.range_infimum is not None:
            datos["range_infimum"] = format_rational(self.range_infimum)
        if self.effective_J is not None:
            datos["effective_J"] = str(self.effective_J)
        datos["witness"] = self.witness.to_dict() if self.witness else None
        return datos


def normalizar_bases(bases: Iterable[int]) -> tuple[int, ...]:
    """Valida 𝒩 y lo devuelve como tupla ordenada sin repeticiones.

    Raises:
        ValueError: Si 𝒩 está vacío o alguna base es < 2
    """
    resultado = tuple(sorted({validar_base(n, "base de 𝒩") for n in bases}))
    if not resultado:
        raise ValueError("El conjunto de bases 𝒩 no puede estar vacío")
    return resultado
