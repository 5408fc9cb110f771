"""Compatibilidad de bases y testigos para bases incompatibles.

Una familia con bases n₁, …, n_{d+1} sólo puede ser adyacente si todas son
potencias de una misma raíz primitiva. Cuando dos bases no comparten raíz,
``incompatibility_witness`` encuentra explícitamente la generación en la que
la condición de número lejano falla.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from dyadic_atlas.core.exact import (
    dist_to_lattice,
    factorizar,
    format_rational,
    lattice_combination,
    phi,
    primitive_root,
    validar_base,
)

logger = logging.getLogger(__name__)


def base_compatible(bases: Sequence[int]) -> tuple[int, list[int]] | None:
    """Retorna la raíz común y los exponentes, o None si no existe.

    Args:
        bases: Bases ≥ 2 (en el orden de la familia)

    Returns:
        (𝔫, [s₁, …]) con nᵢ = 𝔫^sᵢ, o None si las raíces primitivas difieren

    Raises:
        ValueError: Si la lista está vacía o alguna base es < 2

    Examples:
        >>> base_compatible([4, 8])
        (2, [2, 3])
        >>> base_compatible([12, 18]) is None
        True
    """
    if not bases:
        raise ValueError("Se necesita al menos una base")
    raices = [primitive_root(validar_base(n)) for n in bases]
    raiz = raices[0][0]
    if any(r != raiz for r, _ in raices):
        logger.debug(f"Bases {list(bases)} sin raíz común: {[r for r, _ in raices]}")
        return None
    return raiz, [s for _, s in raices]


def psi_1(n1: int, n2: int, p: int, m: int) -> int:
    """Ψ₁(m) = a_p·φ(n₂; n₁)(m) − a'_p·m, con a_p, a'_p los exponentes de p.

    Example:
        >>> [psi_1(2, 3, 2, m) for m in (1, 2, 3)]
        [1, 3, 4]
    """
    a_p = factorizar(validar_base(n1, "n1")).exponente_de(p)
    a_p_prima = factorizar(validar_base(n2, "n2")).exponente_de(p)
    return a_p * phi(n2, n1, m) - a_p_prima * m


def psi_2(n1: int, n2: int, p: int, m: int) -> int:
    """Ψ₂(m) = a'_p·m − a_p·φ(n₂; n₁)(m)."""
    return -psi_1(n1, n2, p, m)


@dataclass(frozen=True)
class IncompatibilityWitness:
    """Generación en la que δ queda a menos de C/n₂^m del retículo de dos escalas.

    Attributes:
        m: Generación de n₂
        a: φ(n₂; n₁)(m)
        k1: K₁ (coeficiente de 1/n₁^a)
        k2: K₂ (coeficiente de 1/n₂^m)
        margin: n₂^m·|δ − K₁/n₁^a − K₂/n₂^m|
        case: "I" (crece Ψ₁) o "II" (crece Ψ₂, con C̃ = C/n₁)
        prime: Primo cuyo exponente crece, o None con bases compatibles
        psi: Valor de Ψ₁ o Ψ₂ en m para ese primo
    """

    m: int
    a: int
    k1: int
    k2: int
    margin: Fraction
    case: str | None
    prime: int | None
    psi: int | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "found": True,
            "m": str(self.m),
            "a": str(self.a),
            "k1": str(self.k1),
            "k2": str(self.k2),
            "margin": format_rational(self.margin),
            "case": self.case,
            "prime": None if self.prime is None else str(self.prime),
            "psi": None if self.psi is None else str(self.psi),
        }


@dataclass(frozen=True)
class BusquedaAgotada:
    """La búsqueda no encontró testigo hasta m_max; el llamador puede subirlo.

    Attributes:
        m_max: Última generación explorada
        mejor: Menor n₂^m·dist observado
    """

    m_max: int
    mejor: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {"found": False, "m_max": str(self.m_max), "best": format_rational(self.mejor)}


def _caso_y_primo(n1: int, n2: int) -> tuple[str | None, int | None]:
    """Elige el caso y el primo cuyo Ψ crece más rápido.

    La pendiente de Ψ₁ para p es proporcional a log(n₂^a_p / n₁^a'_p) y la
    de Ψ₂ a su opuesto, así que basta comparar esos cocientes exactos. Los
    empates prefieren el caso I y el primo menor.
    """
    f1, f2 = factorizar(n1), factorizar(n2)
    mejor: tuple[Fraction, str, int] | None = None
    for p in sorted(set(f1.primes) | set(f2.primes)):
        cociente = Fraction(n2 ** f1.exponente_de(p), n1 ** f2.exponente_de(p))
        for candidato in ((cociente, "I", p), (1 / cociente, "II", p)):
            if candidato[0] > 1 and (mejor is None or candidato[0] > mejor[0]):
                mejor = candidato
    if mejor is None:
        return None, None
    return mejor[1], mejor[2]


def incompatibility_witness(
    n1: int, n2: int, delta: Fraction | int, C: Fraction | int, m_max: int  # noqa: N803
) -> IncompatibilityWitness | BusquedaAgotada:
    """Busca m ≤ m_max y K₁, K₂ con |δ − K₁/n₁^φ(m) − K₂/n₂^m| < C/n₂^m.

    En el caso II se exige la variante n₁^φ(m)·dist < C/n₁, que implica la
    desigualdad anterior.

    Args:
        n1: Primera base
        n2: Segunda base
        delta: Número racional δ
        C: Constante candidata (> 0)
        m_max: Última generación a explorar

    Returns:
        IncompatibilityWitness, o BusquedaAgotada si no hay testigo hasta m_max

    Raises:
        ValueError: Si alguna base es < 2, C ≤ 0 o m_max < 0
    """
    validar_base(n1, "n1")
    validar_base(n2, "n2")
    constante = Fraction(C)
    if constante <= 0:
        raise ValueError(f"C debe ser > 0, recibido: {format_rational(constante)}")
    if m_max < 0:
        raise ValueError(f"m_max debe ser ≥ 0, recibido: {m_max}")
    delta = Fraction(delta)

    caso, primo = _caso_y_primo(n1, n2)
    if primo is None:
        logger.warning(f"Las bases {n1} y {n2} son compatibles: la búsqueda puede agotarse")

    mejor: Fraction | None = None
    for m in range(m_max + 1):
        a = phi(n2, n1, m)
        distancia = dist_to_lattice(delta, Fraction(1, math.lcm(n1**a, n2**m)))
        valor = n2**m * distancia
        mejor = valor if mejor is None else min(mejor, valor)
        if caso == "II":
            encontrado = n1**a * distancia < constante / n1
        else:
            encontrado = valor < constante
        if not encontrado:
            continue

        k1, k2, residuo = lattice_combination(delta, Fraction(1, n1**a), Fraction(1, n2**m))
        psi = None
        if primo is not None:
            psi = psi_1(n1, n2, primo, m) if caso == "I" else psi_2(n1, n2, primo, m)
        logger.info(f"Testigo de incompatibilidad ({n1}, {n2}) en m={m}")
        return IncompatibilityWitness(
            m, a, k1, k2, n2**m * abs(residuo), caso, primo, psi
        )

    assert mejor is not None
    logger.warning(f"Búsqueda agotada hasta m={m_max} para ({n1}, {n2})")
    return BusquedaAgotada(m_max, mejor)
