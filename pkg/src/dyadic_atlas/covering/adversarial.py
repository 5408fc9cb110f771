"""Construcción de cubos adversarios a partir de fronteras casi coincidentes.

Si en la coordenada s hay un punto frontera p₁ de la retícula ℓ₁ y otro p₂
de la retícula ℓ₂ a distancia menor que λ/N (λ el lado de referencia de la
escala), un cubo abierto pequeño que contenga a ambos sólo puede quedar
dentro de cubos de lado > N veces el suyo. Las coordenadas restantes se
fijan en hiperplanos frontera de las otras d−1 retículas.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any

from dyadic_atlas.core.exact import format_rational, lattice_combination, phi, potencia
from dyadic_atlas.core.grid import Cube, GridRep, Openness, location

logger = logging.getLogger(__name__)

# j mínimo por defecto de las construcciones a gran escala
PISO_ESCALA_GRANDE = 8


class SinCoincidenciaError(ValueError):
    """No hay fronteras casi coincidentes a la escala pedida.

    Attributes:
        brecha_escalada: Menor separación encontrada dividida por λ
        escala: Escala de la construcción
    """

    def __init__(self, brecha_escalada: Fraction, escala: int) -> None:
        super().__init__(
            f"Sin coincidencia en la escala {escala}: brecha escalada "
            f"{format_rational(brecha_escalada)}"
        )
        self.brecha_escalada = brecha_escalada
        self.escala = escala


@dataclass(frozen=True)
class AdversarialSpec:
    """Parámetros de la construcción adversaria.

    Attributes:
        pair: Índices (base 0) de las dos retículas
        coordinate: Coordenada s (base 1)
        scale_exponent: m ≥ 0 (escala fina) o −j < 0 (escala grande)
        target_ratio: Cociente N que ningún recubrimiento debe alcanzar
        reference: Base n_ℓ de referencia (None = probar todas)
        large_floor: j mínimo de las escalas grandes (−j con j ≥ large_floor)
    """

    pair: tuple[int, int]
    coordinate: int
    scale_exponent: int
    target_ratio: Fraction
    reference: int | None = None
    large_floor: int = PISO_ESCALA_GRANDE

    def __post_init__(self) -> None:
        if self.pair[0] == self.pair[1]:
            raise ValueError(f"El par adversario debe tener índices distintos: {self.pair}")
        if self.coordinate < 1:
            raise ValueError(f"La coordenada debe ser ≥ 1, recibido: {self.coordinate}")
        object.__setattr__(self, "target_ratio", Fraction(self.target_ratio))
        if self.target_ratio < 1:
            raise ValueError(
                f"target_ratio debe ser ≥ 1, recibido: {format_rational(self.target_ratio)}"
            )
        if self.large_floor < 1:
            raise ValueError(f"large_floor debe ser ≥ 1, recibido: {self.large_floor}")
        if self.scale_exponent < 0 and -self.scale_exponent < self.large_floor:
            raise ValueError(
                f"La escala grande {self.scale_exponent} exige j ≥ {self.large_floor}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "pair": [str(i) for i in self.pair],
            "coordinate": str(self.coordinate),
            "scale_exponent": str(self.scale_exponent),
            "target_ratio": format_rational(self.target_ratio),
            "reference": None if self.reference is None else str(self.reference),
            "large_floor": str(self.large_floor),
        }


def _frontera(rep: GridRep, s: int, base_l: int, m: int) -> tuple[Fraction, Fraction]:
    """Retorna (punto frontera de referencia, paso entre fronteras) en la coordenada s."""
    if m >= 0:
        a = phi(base_l, rep.base, m)
        return rep.origin[s - 1], potencia(rep.base, -a)
    a = phi(base_l, rep.base, -m)
    return rep.origin[s - 1] + location(rep, a)[s - 1], Fraction(rep.base**a)


def _cubo_para_base(
    family: Sequence[GridRep], spec: AdversarialSpec, base_l: int
) -> tuple[Cube | None, Fraction]:
    m = spec.scale_exponent
    l1, l2 = spec.pair
    s = spec.coordinate
    lam = potencia(base_l, -m)

    origen_1, paso_1 = _frontera(family[l1], s, base_l, m)
    origen_2, paso_2 = _frontera(family[l2], s, base_l, m)
    k1, k2, residuo = lattice_combination(origen_1 - origen_2, paso_1, paso_2)
    p1 = origen_1 - k1 * paso_1
    p2 = origen_2 + k2 * paso_2
    brecha = abs(residuo)
    if brecha * spec.target_ratio >= lam:
        return None, brecha / lam

    lado = (brecha + lam / spec.target_ratio) / 2
    centro = (p1 + p2) / 2

    # el resto de coordenadas se fija en fronteras de las otras retículas
    otras = [i for i in range(len(family)) if i not in spec.pair]
    coordenadas = [c for c in range(1, family[0].dimension + 1) if c != s]
    puntos = {s: centro}
    for c, indice in zip(coordenadas, otras, strict=False):
        puntos[c] = _frontera(family[indice], c, base_l, m)[0]
    for c in coordenadas:
        puntos.setdefault(c, Fraction(0))

    esquina = tuple(puntos[c] - lado / 2 for c in range(1, family[0].dimension + 1))
    return Cube(esquina, lado, Openness.OPEN), brecha / lam


def adversarial_cubes(family: Sequence[GridRep], spec: AdversarialSpec) -> list[Cube]:
    """Cubos abiertos que ningún cubo de la familia recubre con cociente ≤ N.

    Args:
        family: d+1 retículas en R^d
        spec: Par, coordenada, escala y cociente objetivo

    Returns:
        Un cubo por cada base de referencia con coincidencia suficiente

    Raises:
        ValueError: Si la familia o la especificación son inconsistentes
        SinCoincidenciaError: Si ninguna base da una brecha menor que λ/N
    """
    if not family:
        raise ValueError("La familia de retículas está vacía")
    dimension = family[0].dimension
    if len(family) != dimension + 1:
        raise ValueError(
            f"Una familia en R^{dimension} debe tener exactamente {dimension + 1} retículas, "
            f"tiene {len(family)}"
        )
    if any(not 0 <= i < len(family) for i in spec.pair):
        raise ValueError(f"Par {spec.pair} fuera de rango para {len(family)} retículas")
    if spec.coordinate > dimension:
        raise ValueError(f"Coordenada {spec.coordinate} fuera de rango [1, {dimension}]")

    referencias = (
        [spec.reference] if spec.reference is not None else sorted({g.base for g in family})
    )
    cubos: list[Cube] = []
    mejor_brecha: Fraction | None = None
    for base_l in referencias:
        cubo, brecha = _cubo_para_base(family, spec, base_l)
        mejor_brecha = brecha if mejor_brecha is None else min(mejor_brecha, brecha)
        if cubo is not None:
            cubos.append(cubo)

    if not cubos:
        assert mejor_brecha is not None
        raise SinCoincidenciaError(mejor_brecha, spec.scale_exponent)
    logger.debug(f"{len(cubos)} cubos adversarios en la escala {spec.scale_exponent}")
    return cubos


def primer_cubo_adversario(
    family: Sequence[GridRep], spec: AdversarialSpec, max_pasos: int = 64
) -> tuple[AdversarialSpec, Cube]:
    """Recorre escalas desde la del testigo hacia afuera hasta emitir un cubo.

    Las escalas finas (m ≥ 0) avanzan hacia m+1, m+2, …; las grandes hacia
    m−1, m−2, …

    Raises:
        SinCoincidenciaError: Si ninguna escala dentro de max_pasos da coincidencia
    """
    direccion = 1 if spec.scale_exponent >= 0 else -1
    ultimo_error: SinCoincidenciaError | None = None
    for paso in range(max_pasos + 1):
        actual = replace(spec, scale_exponent=spec.scale_exponent + direccion * paso)
        try:
            return actual, adversarial_cubes(family, actual)[0]
        except SinCoincidenciaError as e:
            ultimo_error = e
    assert ultimo_error is not None
    logger.warning(f"Sin cubo adversario tras {max_pasos} escalas: {ultimo_error}")
    raise ultimo_error
