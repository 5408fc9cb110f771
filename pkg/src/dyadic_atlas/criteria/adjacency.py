"""Certificado de adyacencia de una familia de d+1 retículas.

La familia es adyacente si y sólo si, para cada par de retículas y cada
coordenada, la diferencia de orígenes es un número lejano (condición 1) y
las funciones de localización forman un par lejano (condición 2).
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from dyadic_atlas.core.exact import format_rational
from dyadic_atlas.core.grid import GridRep, canonical, proyectar_reticula
from dyadic_atlas.covering.adversarial import PISO_ESCALA_GRANDE, AdversarialSpec
from dyadic_atlas.criteria.common import (
    UMBRAL_POR_DEFECTO,
    Verdict,
    VerdictKind,
    normalizar_bases,
)
from dyadic_atlas.criteria.far import far_number, far_pair

logger = logging.getLogger(__name__)

# Cociente objetivo por defecto para construcciones adversarias
RATIO_ADVERSARIO = Fraction(1000)


class Overall(Enum):
    ADJACENT = "ADJACENT"
    NOT_ADJACENT = "NOT_ADJACENT"
    UNDECIDED = "UNDECIDED"


def clave_par(l1: int, l2: int, s: int) -> str:
    """Clave "L1-L2/s" (índices de retícula y coordenada en base 1)."""
    return f"{l1 + 1}-{l2 + 1}/{s}"


def parsear_clave(clave: str) -> tuple[int, int, int]:
    """Inverso de :func:`clave_par`: retorna (ℓ₁, ℓ₂, s) con ℓ en base 0."""
    par, s = clave.split("/")
    l1, l2 = par.split("-")
    return int(l1) - 1, int(l2) - 1, int(s)


def _combinar(veredictos: Sequence[Verdict]) -> Overall:
    if any(v.kind is VerdictKind.NOT_FAR for v in veredictos):
        return Overall.NOT_ADJACENT
    if all(v.kind is VerdictKind.FAR for v in veredictos):
        return Overall.ADJACENT
    return Overall.UNDECIDED


@dataclass(frozen=True)
class AdjacencyCertificate:
    """Resultado de check_adjacency.

    Attributes:
        labels: Etiquetas de las retículas
        grid_bases: Base de cada retícula, en orden de la familia
        base_set: Conjunto 𝒩 ordenado
        dimension: Dimensión ambiente d
        condition1: Veredictos de número lejano por "L1-L2/s"
        condition2: Veredictos de par lejano por "L1-L2/s"
        overall: ADJACENT, NOT_ADJACENT o UNDECIDED
        J: Primera generación grande pedida
    """

    labels: tuple[str, ...]
    grid_bases: tuple[int, ...]
    base_set: tuple[int, ...]
    dimension: int
    condition1: dict[str, Verdict]
    condition2: dict[str, Verdict]
    overall: Overall
    J: int
    depth_small: int = 0
    depth_large: int = 0
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def C1(self) -> Fraction | None:  # noqa: N802
        """Menor cota de la condición 1 (None salvo ADJACENT)."""
        if self.overall is not Overall.ADJACENT:
            return None
        return min(v.bound for v in self.condition1.values())

    @property
    def C2(self) -> Fraction | None:  # noqa: N802
        """Menor cota de la condición 2 (None salvo ADJACENT)."""
        if self.overall is not Overall.ADJACENT:
            return None
        return min(v.bound for v in self.condition2.values())

    @property
    def J_efectivo(self) -> int:  # noqa: N802
        """Mayor J efectivo reportado por la condición 2."""
        return max([self.J] + [v.effective_J or self.J for v in self.condition2.values()])

    def cota_comparabilidad(self) -> Fraction:
        """Cota explícita de cociente ℓ(D)/ℓ(Q) implicada por el certificado.

        Con C = min(C₁, C₂/2), los tres casos del argumento de suficiencia dan
        n_max·n₁/C (escalas finas), n₁/C (escalas grandes) y n₁^(J+2)/C
        (escalas intermedias, agrandando Q hasta lado n₁^J). Ver
        docs/comparability-cap.md.

        Raises:
            ValueError: Si el certificado no es ADJACENT
        """
        if self.overall is not Overall.ADJACENT:
            raise ValueError(
                f"Sólo un certificado ADJACENT define cota de comparabilidad ({self.overall.value})"
            )
        assert self.C1 is not None and self.C2 is not None
        constante = min(self.C1, self.C2 / 2)
        n1 = self.grid_bases[0]
        n_max = max(self.grid_bases)
        casos = (
            Fraction(n_max * n1) / constante,
            Fraction(n1) / constante,
            Fraction(n1 ** (self.J_efectivo + 2)) / constante,
        )
        return max(casos)

    def especificacion_adversaria(
        self, target_ratio: Fraction = RATIO_ADVERSARIO, piso: int = PISO_ESCALA_GRANDE
    ) -> AdversarialSpec | None:
        """Especificación adversaria a partir de la primera entrada NOT_FAR.

        Las escalas grandes usan j ≥ max(J del certificado, piso).

        Returns:
            AdversarialSpec a la escala del testigo (m ≥ 0 para la condición 1,
            −j para la condición 2), o None si no hay entradas NOT_FAR
        """
        j_minimo = max(self.J, piso)
        for condicion, signo in ((self.condition1, 1), (self.condition2, -1)):
            for clave, veredicto in condicion.items():
                if veredicto.kind is not VerdictKind.NOT_FAR or veredicto.witness is None:
                    continue
                l1, l2, s = parsear_clave(clave)
                escala = veredicto.witness.scale
                if signo < 0:
                    escala = -max(escala, j_minimo)
                return AdversarialSpec(
                    pair=(l1, l2),
                    coordinate=s,
                    scale_exponent=escala,
                    target_ratio=target_ratio,
                    reference=veredicto.witness.base,
                    large_floor=j_minimo,
                )
        return None

    def to_dict(self) -> dict[str, Any]:
        datos: dict[str, Any] = {
            "family": list(self.labels),
            "base_set": [str(n) for n in self.base_set],
            "dimension": self.dimension,
            "J": str(self.J),
            "depth_small": str(self.depth_small),
            "depth_large": str(self.depth_large),
            "overall": self.overall.value,
            "condition1": {k: v.to_dict() for k, v in self.condition1.items()},
            "condition2": {k: v.to_dict() for k, v in self.condition2.items()},
        }
        if self.overall is Overall.ADJACENT:
            assert self.C1 is not None and self.C2 is not None
            datos["C1"] = format_rational(self.C1)
            datos["C2"] = format_rational(self.C2)
            datos["effective_J"] = str(self.J_efectivo)
            datos["comparability_cap"] = format_rational(self.cota_comparabilidad())
        datos.update(self.metadata)
        return datos


def _validar_familia(family: Sequence[GridRep]) -> int:
    if not family:
        raise ValueError("La familia de retículas está vacía")
    dimension = family[0].dimension
    for i, g in enumerate(family):
        if g.dimension != dimension:
            raise ValueError(
                f"La retícula {i + 1} tiene dimensión {g.dimension}, se esperaba {dimension}"
            )
    if len(family) != dimension + 1:
        raise ValueError(
            f"Una familia en R^{dimension} debe tener exactamente {dimension + 1} retículas, "
            f"tiene {len(family)}"
        )
    return dimension


def check_adjacency(
    family: Sequence[GridRep],
    depth_small: int,
    J: int,  # noqa: N803
    depth_large: int,
    umbral: Fraction = UMBRAL_POR_DEFECTO,
) -> AdjacencyCertificate:
    """Certifica o refuta la adyacencia de d+1 retículas en R^d.

    Las retículas se llevan primero a forma canónica (origen en [0, 1)^d).
    Como ambas condiciones son simétricas, se evalúan pares ℓ₁ < ℓ₂.

    Args:
        family: Retículas de la familia
        depth_small: Profundidad de la condición 1
        J: Primera generación grande de la condición 2
        depth_large: Profundidad de la condición 2
        umbral: Umbral de testigos aproximados

    Returns:
        AdjacencyCertificate con ambas matrices de veredictos

    Raises:
        ValueError: Si la familia no tiene d+1 retículas o los parámetros son inválidos
    """
    dimension = _validar_familia(family)
    canonicas = [canonical(g) for g in family]
    bases = normalizar_bases(g.base for g in canonicas)

    condicion1: dict[str, Verdict] = {}
    condicion2: dict[str, Verdict] = {}
    for l1 in range(len(canonicas)):
        for l2 in range(l1 + 1, len(canonicas)):
            g1, g2 = canonicas[l1], canonicas[l2]
            for s in range(1, dimension + 1):
                clave = clave_par(l1, l2, s)
                condicion1[clave] = far_number(
                    g1.origin[s - 1] - g2.origin[s - 1],
                    g1.base,
                    g2.base,
                    bases,
                    depth_small,
                    umbral,
                )
                condicion2[clave] = far_pair(g1, g2, s, bases, J, depth_large, umbral)
                logger.debug(
                    f"{clave}: condición 1 {condicion1[clave].kind.value}, "
                    f"condición 2 {condicion2[clave].kind.value}"
                )

    overall = _combinar(list(condicion1.values()) + list(condicion2.values()))
    logger.info(f"Familia de {len(family)} retículas en R^{dimension}: {overall.value}")
    return AdjacencyCertificate(
        labels=tuple(g.label or str(i + 1) for i, g in enumerate(family)),
        grid_bases=tuple(g.base for g in family),
        base_set=bases,
        dimension=dimension,
        condition1=condicion1,
        condition2=condicion2,
        overall=overall,
        J=J,
        depth_small=depth_small,
        depth_large=depth_large,
    )


def project(family: Sequence[GridRep], s: int) -> list[GridRep]:
    """Proyecta cada retícula de la familia sobre la coordenada s (base 1).

    Raises:
        ValueError: Si s está fuera de [1, d]
    """
    if not family:
        raise ValueError("La familia de retículas está vacía")
    return [proyectar_reticula(g, s) for g in family]


@dataclass(frozen=True)
class ProjectionCertificate:
    """Conjunción de los certificados de todos los pares proyectados.

    Attributes:
        overall: Combinación de los veredictos individuales
        certificates: Certificado de cada par 1-D, por "L1-L2/s"
    """

    overall: Overall
    certificates: dict[str, AdjacencyCertificate]

    def to_dict(self) -> dict[str, Any]:
        return {
            "overall": self.overall.value,
            "certificates": {k: c.to_dict() for k, c in self.certificates.items()},
        }


def certify_projections(
    family: Sequence[GridRep],
    depth_small: int,
    J: int,  # noqa: N803
    depth_large: int,
    umbral: Fraction = UMBRAL_POR_DEFECTO,
) -> ProjectionCertificate:
    """Certifica cada par de retículas proyectado sobre cada coordenada."""
    dimension = _validar_familia(family)
    certificados: dict[str, AdjacencyCertificate] = {}
    for s in range(1, dimension + 1):
        proyectadas = project(family, s)
        for l1 in range(len(proyectadas)):
            for l2 in range(l1 + 1, len(proyectadas)):
                certificados[clave_par(l1, l2, s)] = check_adjacency(
                    [proyectadas[l1], proyectadas[l2]], depth_small, J, depth_large, umbral
                )

    estados = [c.overall for c in certificados.values()]
    if Overall.NOT_ADJACENT in estados:
        overall = Overall.NOT_ADJACENT
    elif all(e is Overall.ADJACENT for e in estados):
        overall = Overall.ADJACENT
    else:
        overall = Overall.UNDECIDED
    return ProjectionCertificate(overall, certificados)
