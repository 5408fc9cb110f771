"""Modelo de retículas diádicas generales de base n.

Una retícula se representa por (base n, origen δ ∈ Q^d, flujo de dígitos
a⃗). La generación m ≥ 0 está formada por los cubos semiabiertos
δ + (k + [0,1)^d)/n^m; la generación m < 0 por los cubos de lado n^(−m)
desplazados a δ + L(−m), donde L es la función de localización.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from dyadic_atlas.core.exact import format_rational, potencia, validar_base

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]
Punto = tuple[Fraction, ...]


class ReRepresentacionError(ValueError):
    """El desplazamiento no puede absorberse con la profundidad pedida."""


@dataclass(frozen=True)
class DigitStream:
    """Flujo de vectores de dígitos eventualmente periódico.

    Attributes:
        base: Base n (≥ 2)
        preperiod: Vectores iniciales (puede ser vacío)
        period: Vectores que se repiten indefinidamente (no vacío)
    """

    base: int
    preperiod: tuple[Vector, ...]
    period: tuple[Vector, ...]

    def __post_init__(self) -> None:
        validar_base(self.base)
        object.__setattr__(self, "preperiod", tuple(tuple(v) for v in self.preperiod))
        object.__setattr__(self, "period", tuple(tuple(v) for v in self.period))
        if not self.period:
            raise ValueError("El periodo del flujo de dígitos no puede estar vacío")
        dimensiones = {len(v) for v in (*self.preperiod, *self.period)}
        if len(dimensiones) != 1 or 0 in dimensiones:
            raise ValueError(
                f"Todos los vectores de dígitos deben tener la misma dimensión ≥ 1: {dimensiones}"
            )
        for vector in (*self.preperiod, *self.period):
            for a in vector:
                if not 0 <= a < self.base:
                    raise ValueError(f"Dígito {a} fuera de rango [0, {self.base - 1}]")

    @property
    def dimension(self) -> int:
        return len(self.period[0])

    def digit(self, i: int) -> Vector:
        """Vector de dígitos en el índice i ≥ 0."""
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def componente(self, s: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Retorna (preperiodo, periodo) escalares de la coordenada s (base 0)."""
        return (
            tuple(v[s] for v in self.preperiod),
            tuple(v[s] for v in self.period),
        )

    @classmethod
    def constante(cls, base: int, vector: Vector) -> DigitStream:
        """Flujo con el mismo vector en todas las posiciones."""
        return cls(base, (), (tuple(vector),))

    @classmethod
    def desde_componentes(
        cls, base: int, componentes: list[tuple[tuple[int, ...], tuple[int, ...]]]
    ) -> DigitStream:
        """Combina flujos escalares (preperiodo, periodo) en un flujo vectorial.

        El preperiodo resultante es el más largo de los componentes y el
        periodo el mínimo común múltiplo de los periodos.
        """
        largo_pre = max(len(pre) for pre, _ in componentes)
        largo_per = math.lcm(*(len(per) for _, per in componentes))

        def escalar(pre: tuple[int, ...], per: tuple[int, ...], i: int) -> int:
            return pre[i] if i < len(pre) else per[(i - len(pre)) % len(per)]

        vectores = [
            tuple(escalar(pre, per, i) for pre, per in componentes)
            for i in range(largo_pre + largo_per)
        ]
        return cls(base, tuple(vectores[:largo_pre]), tuple(vectores[largo_pre:]))


@dataclass(frozen=True)
class GridRep:
    """Retícula diádica general G(n, δ, L_a⃗).

    Attributes:
        base: Base n
        origin: Origen δ ∈ Q^d
        digits: Flujo de dígitos que determina las generaciones negativas
        label: Identificador libre
    """

    base: int
    origin: Punto
    digits: DigitStream
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        validar_base(self.base)
        if self.digits.base != self.base:
            raise ValueError(
                f"La base de los dígitos ({self.digits.base}) no coincide con la retícula "
                f"({self.base})"
            )
        if len(self.origin) != self.digits.dimension:
            raise ValueError(
                f"Dimensión del origen ({len(self.origin)}) distinta de la de los dígitos "
                f"({self.digits.dimension})"
            )
        object.__setattr__(self, "origin", tuple(Fraction(c) for c in self.origin))

    @property
    def dimension(self) -> int:
        return len(self.origin)

    @classmethod
    def estandar(cls, base: int = 2, dimension: int = 1, label: str = "") -> GridRep:
        """Retícula n-ádica estándar: origen 0 y todos los dígitos 0."""
        return cls(
            base,
            tuple(Fraction(0) for _ in range(dimension)),
            DigitStream.constante(base, (0,) * dimension),
            label,
        )


class Openness(Enum):
    """Tipo de cubo: de retícula (semiabierto) o de consulta (abierto)."""

    HALF_OPEN = "half-open"
    OPEN = "open"


@dataclass(frozen=True)
class Cube:
    """Cubo de lados paralelos a los ejes.

    Attributes:
        corner: Esquina inferior
        side: Longitud del lado (> 0)
        openness: Semiabierto ∏[c, c+ℓ) o abierto ∏(c, c+ℓ)
    """

    corner: Punto
    side: Fraction
    openness: Openness = Openness.HALF_OPEN

    def __post_init__(self) -> None:
        object.__setattr__(self, "corner", tuple(Fraction(c) for c in self.corner))
        object.__setattr__(self, "side", Fraction(self.side))
        if self.side <= 0:
            raise ValueError(f"El lado del cubo debe ser > 0, recibido: {self.side}")

    @property
    def dimension(self) -> int:
        return len(self.corner)

    def centro(self) -> Punto:
        return tuple(c + self.side / 2 for c in self.corner)

    def interior(self) -> Cube:
        """Mismo cubo como cubo abierto."""
        return Cube(self.corner, self.side, Openness.OPEN)

    def contiene_punto(self, x: Punto) -> bool:
        for c, xs in zip(self.corner, x, strict=True):
            if self.openness is Openness.OPEN:
                if not c < xs < c + self.side:
                    return False
            elif not c <= xs < c + self.side:
                return False
        return True

    def contiene_cubo(self, otro: Cube) -> bool:
        """True si ``otro`` ⊆ self, por comparación exacta de esquinas y lados."""
        for a, c in zip(self.corner, otro.corner, strict=True):
            if self.openness is Openness.OPEN and otro.openness is Openness.HALF_OPEN:
                if not a < c:
                    return False
            elif not a <= c:
                return False
            if c + otro.side > a + self.side:
                return False
        return True

    def describir(self) -> str:
        """Forma textual exacta, p.ej. "[0, 1/2)" o "(1/3, 2/3)x(0, 1/3)"."""
        abre, cierra = ("[", ")") if self.openness is Openness.HALF_OPEN else ("(", ")")
        return "x".join(
            f"{abre}{format_rational(c)}, {format_rational(c + self.side)}{cierra}"
            for c in self.corner
        )


@lru_cache(maxsize=131072)
def location(rep: GridRep, j: int) -> Vector:
    """Función de localización L(j) = Σ_{i<j} n^i·a⃗ᵢ.

    Args:
        rep: Retícula
        j: Número de generaciones hacia arriba (≥ 0)

    Returns:
        Vector entero con 0 ≤ L(j)_s < n^j

    Example:
        >>> rep = GridRep(2, (Fraction(0),), DigitStream.constante(2, (1,)))
        >>> location(rep, 4)
        (15,)
    """
    if j < 0:
        raise ValueError(f"location requiere j ≥ 0, recibido: {j}")
    if j == 0:
        return (0,) * rep.dimension
    previo = location(rep, j - 1) if j <= 512 else _location_directa(rep, j - 1)
    peso = rep.base ** (j - 1)
    return tuple(p + peso * a for p, a in zip(previo, rep.digits.digit(j - 1), strict=True))


def _location_directa(rep: GridRep, j: int) -> Vector:
    total = [0] * rep.dimension
    peso = 1
    for i in range(j):
        for s, a in enumerate(rep.digits.digit(i)):
            total[s] += peso * a
        peso *= rep.base
    return tuple(total)


def generation_offset(rep: GridRep, m: int) -> Punto:
    """Desplazamiento de la generación m: δ si m ≥ 0, δ + L(−m) si m < 0."""
    if m >= 0:
        return rep.origin
    return tuple(d + l for d, l in zip(rep.origin, location(rep, -m), strict=True))


def cube_at(rep: GridRep, m: int, x: Punto) -> Cube:
    """Cubo semiabierto de la generación m de ``rep`` que contiene a x.

    Args:
        rep: Retícula
        m: Generación (lado n^(−m))
        x: Punto racional

    Returns:
        El único cubo de la generación m que contiene x

    Example:
        >>> rep = GridRep.estandar(2)
        >>> cube_at(rep, 1, (Fraction(3, 10),)).describir()
        '[0, 1/2)'
    """
    if len(x) != rep.dimension:
        raise ValueError(f"El punto tiene dimensión {len(x)}, la retícula {rep.dimension}")
    lado = potencia(rep.base, -m)
    desplazamiento = generation_offset(rep, m)
    esquina = tuple(
        d + math.floor((Fraction(xs) - d) / lado) * lado
        for d, xs in zip(desplazamiento, x, strict=True)
    )
    return Cube(esquina, lado)


def es_cubo_de(rep: GridRep, m: int, cubo: Cube) -> bool:
    """True si ``cubo`` es exactamente un cubo de la generación m de ``rep``."""
    return cube_at(rep, m, cubo.corner) == Cube(cubo.corner, cubo.side)


def valor_adico(rep: GridRep, s: int) -> Fraction:
    """Valor n-ádico Σ aᵢ nⁱ del flujo de la coordenada s (base 0), como racional.

    El periodo E = Σ_{i<p} eᵢ nⁱ contribuye n^r·E/(1 − n^p), de modo que
    location(rep, j)_s ≡ valor (mod n^j) para todo j.
    """
    pre, per = rep.digits.componente(s)
    n = rep.base
    inicial = sum(a * n**i for i, a in enumerate(pre))
    bloque = sum(a * n**i for i, a in enumerate(per))
    return Fraction(inicial) + Fraction(n ** len(pre) * bloque, 1 - n ** len(per))


def _sumar_entero_adico(
    base: int, pre: tuple[int, ...], per: tuple[int, ...], sumando: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Dígitos n-ádicos de (flujo + sumando), con detección de ciclo en (fase, acarreo)."""
    digitos: list[int] = []
    vistos: dict[tuple[int, int], int] = {}
    acarreo = sumando
    i = 0
    while True:
        if i >= len(pre) and -1 <= acarreo <= 1:
            estado = ((i - len(pre)) % len(per), acarreo)
            if estado in vistos:
                inicio = vistos[estado]
                return tuple(digitos[:inicio]), tuple(digitos[inicio:])
            vistos[estado] = i
        a = pre[i] if i < len(pre) else per[(i - len(pre)) % len(per)]
        t = a + acarreo
        digitos.append(t % base)
        acarreo = t // base
        i += 1


def desplazar(rep: GridRep, shift: Vector) -> GridRep:
    """Re-representa ``rep`` con origen δ + shift para un desplazamiento entero arbitrario.

    La nueva función de localización es L'(j) = (L(j) − shift) mod n^j, que
    define exactamente la misma retícula en todas las generaciones.
    """
    if len(shift) != rep.dimension:
        raise ValueError(
            f"El desplazamiento tiene dimensión {len(shift)}, se esperaba {rep.dimension}"
        )
    if not any(shift):
        return rep
    componentes = []
    for s, n_s in enumerate(shift):
        pre, per = rep.digits.componente(s)
        componentes.append(_sumar_entero_adico(rep.base, pre, per, -n_s))
    digitos = DigitStream.desde_componentes(rep.base, componentes)
    origen = tuple(d + n_s for d, n_s in zip(rep.origin, shift, strict=True))
    logger.debug(f"Retícula '{rep.label}' desplazada por {shift}")
    return GridRep(rep.base, origen, digitos, rep.label)


def rerepresent(rep: GridRep, shift: Vector, depth: int) -> GridRep:
    """Representación equivalente con origen δ + shift (shift ≥ 0).

    Args:
        rep: Retícula original
        shift: Desplazamiento entero no negativo por coordenada
        depth: Profundidad en la que debe absorberse el desplazamiento

    Returns:
        Representación que define la misma retícula

    Raises:
        ReRepresentacionError: Si alguna componente es negativa o ≥ n^depth
    """
    if depth < 0:
        raise ReRepresentacionError(f"La profundidad debe ser ≥ 0, recibido: {depth}")
    limite = rep.base**depth
    for n_s in shift:
        if n_s < 0:
            raise ReRepresentacionError(f"El desplazamiento debe ser ≥ 0, recibido: {shift}")
        if n_s >= limite:
            raise ReRepresentacionError(
                f"El desplazamiento {n_s} no se absorbe en {depth} dígitos "
                f"(requiere < {rep.base}^{depth})"
            )
    return desplazar(rep, tuple(shift))


def canonical(rep: GridRep) -> GridRep:
    """Representación equivalente con origen en [0, 1)^d."""
    return desplazar(rep, tuple(-math.floor(d) for d in rep.origin))


def drop_generations(rep: GridRep, k: int) -> GridRep:
    """Conserva una de cada k generaciones: retícula de base n^k.

    La generación i del resultado es la generación k·i de ``rep``; los
    dígitos se reagrupan en bloques de k.

    Args:
        rep: Retícula original
        k: Factor de agrupación (≥ 1)

    Returns:
        Retícula de base n^k

    Example:
        >>> rep = GridRep(3, (Fraction(0),), DigitStream.constante(3, (1,)))
        >>> drop_generations(rep, 2).digits.period
        ((4,),)
    """
    if k < 1:
        raise ValueError(f"k debe ser ≥ 1, recibido: {k}")
    if k == 1:
        return rep
    n = rep.base
    flujo = rep.digits
    largo_pre = -(-len(flujo.preperiod) // k)
    largo_per = len(flujo.period) // math.gcd(len(flujo.period), k)

    def bloque(i: int) -> Vector:
        return tuple(
            sum(n**t * flujo.digit(k * i + t)[s] for t in range(k)) for s in range(rep.dimension)
        )

    bloques = [bloque(i) for i in range(largo_pre + largo_per)]
    digitos = DigitStream(n**k, tuple(bloques[:largo_pre]), tuple(bloques[largo_pre:]))
    etiqueta = f"{rep.label}/{k}" if rep.label else ""
    return GridRep(n**k, rep.origin, digitos, etiqueta)


def proyectar_reticula(rep: GridRep, s: int) -> GridRep:
    """Retícula unidimensional de la coordenada s (base 1)."""
    if not 1 <= s <= rep.dimension:
        raise ValueError(f"Coordenada {s} fuera de rango [1, {rep.dimension}]")
    pre, per = rep.digits.componente(s - 1)
    digitos = DigitStream(
        rep.base, tuple((a,) for a in pre), tuple((a,) for a in per)
    )
    etiqueta = f"{rep.label}[{s}]" if rep.label else f"[{s}]"
    return GridRep(rep.base, (rep.origin[s - 1],), digitos, etiqueta)
