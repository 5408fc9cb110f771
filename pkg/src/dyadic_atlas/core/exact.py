"""Aritmética exacta y primitivas de teoría de números.

Todas las cantidades geométricas del proyecto (orígenes, lados de cubos,
distancias) son racionales exactos. Este módulo reúne las primitivas sobre
las que se construye el resto: la función de emparejamiento de escalas
``phi``, las mallas de dos escalas, la distancia a un retículo y la raíz
primitiva de una base.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, integer_log
from sympy.core.intfunc import igcdex

logger = logging.getLogger(__name__)

Rational = Fraction

# "p/q" o entero, con signo opcional
_PATRON_RACIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


@dataclass(frozen=True)
class PrimeFactorization:
    """Factorización en primos de un entero ≥ 2.

    Attributes:
        primes: Primos en orden estrictamente creciente
        exponents: Exponentes (≥ 1) alineados con ``primes``
    """

    primes: tuple[int, ...]
    exponents: tuple[int, ...]

    def valor(self) -> int:
        """Reconstruye el entero factorizado."""
        return math.prod(p**e for p, e in zip(self.primes, self.exponents, strict=True))

    def exponente_de(self, primo: int) -> int:
        """Retorna el exponente de ``primo`` (0 si no divide)."""
        for p, e in zip(self.primes, self.exponents, strict=True):
            if p == primo:
                return e
        return 0


def validar_base(n: int, nombre: str = "base") -> int:
    """Valida que una base sea un entero ≥ 2.

    Args:
        n: Valor a validar
        nombre: Nombre para el mensaje de error

    Returns:
        La base validada

    Raises:
        ValueError: Si n no es entero o es menor que 2
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise ValueError(f"{nombre} debe ser un entero, recibido: {n!r}")
    if n < 2:
        raise ValueError(f"{nombre} debe ser ≥ 2, recibido: {n}")
    return n


def parse_rational(texto: str | int | Fraction) -> Fraction:
    """Convierte la forma textual "p/q" (o un entero) en un racional exacto.

    Args:
        texto: Cadena "p/q", "p", un int o un Fraction

    Returns:
        Racional reducido

    Raises:
        ValueError: Si la cadena no tiene la forma "p/q" o q = 0

    Example:
        >>> parse_rational("2/6")
        Fraction(1, 3)
    """
    if isinstance(texto, Fraction):
        return texto
    if isinstance(texto, bool):
        raise ValueError(f"Racional mal formado: {texto!r}")
    if isinstance(texto, int):
        return Fraction(texto)
    if not isinstance(texto, str):
        raise ValueError(f"Racional mal formado: {texto!r} (se espera la forma 'p/q')")

    coincidencia = _PATRON_RACIONAL.match(texto)
    if coincidencia is None:
        raise ValueError(f"Racional mal formado: {texto!r} (se espera la forma 'p/q')")
    numerador = int(coincidencia.group(1))
    denominador = int(coincidencia.group(2)) if coincidencia.group(2) else 1
    if denominador == 0:
        raise ValueError(f"Racional mal formado: {texto!r} (denominador cero)")
    return Fraction(numerador, denominador)


def format_rational(x: Fraction | int) -> str:
    """Serializa un racional como "p/q" (sin "/q" cuando q = 1)."""
    valor = Fraction(x)
    if valor.denominator == 1:
        return str(valor.numerator)
    return f"{valor.numerator}/{valor.denominator}"


@lru_cache(maxsize=65536)
def phi(n: int, n_prime: int, j: int) -> int:
    """Genera la generación de base n' comparable a la generación j de base n.

    Retorna el único k ≥ 0 con (n')^k ≤ n^j < (n')^(k+1), calculado por
    comparación entera exacta.

    Args:
        n: Base de referencia (≥ 2)
        n_prime: Base destino (≥ 2)
        j: Generación (≥ 0)

    Returns:
        k = ⌊j·log n / log n'⌋

    Raises:
        ValueError: Si alguna base es < 2 o j < 0

    Examples:
        >>> phi(2, 3, 3)
        1
        >>> phi(3, 2, 2)
        3
    """
    validar_base(n, "n")
    validar_base(n_prime, "n'")
    if j < 0:
        raise ValueError(f"La generación j debe ser ≥ 0, recibido: {j}")
    if j == 0:
        return 0
    k, _ = integer_log(n**j, n_prime)
    return int(k)


def floor_log(x: Fraction | int, n: int) -> int:
    """Retorna el mayor entero m (posiblemente negativo) con n^m ≤ x.

    Args:
        x: Racional positivo
        n: Base (≥ 2)

    Returns:
        ⌊log_n x⌋ exacto

    Raises:
        ValueError: Si x ≤ 0
    """
    validar_base(n)
    valor = Fraction(x)
    if valor <= 0:
        raise ValueError(f"floor_log requiere x > 0, recibido: {format_rational(valor)}")
    if valor >= 1:
        k, _ = integer_log(math.floor(valor), n)
        return int(k)
    # n^m ≤ x con m < 0  ⇔  n^(-m) ≥ 1/x
    inverso = math.ceil(1 / valor)
    k, exacto = integer_log(inverso, n)
    t = int(k) if exacto else int(k) + 1
    return -t


def potencia(n: int, m: int) -> Fraction:
    """Retorna n^m como racional exacto (m puede ser negativo)."""
    if m >= 0:
        return Fraction(n**m)
    return Fraction(1, n ** (-m))


def lattice_mesh(n: int, a: int, n_prime: int, b: int) -> Fraction:
    """Paso del retículo {k₁/n^a + k₂/n'^b}, igual a 1/mcm(n^a, n'^b).

    Args:
        n: Primera base
        a: Exponente de la primera base (≥ 0)
        n_prime: Segunda base
        b: Exponente de la segunda base (≥ 0)

    Returns:
        1/lcm(n^a, n'^b) reducido

    Examples:
        >>> lattice_mesh(2, 2, 3, 1)
        Fraction(1, 12)
    """
    validar_base(n, "n")
    validar_base(n_prime, "n'")
    if a < 0 or b < 0:
        raise ValueError(f"Los exponentes deben ser ≥ 0, recibido: a={a}, b={b}")
    return Fraction(1, math.lcm(n**a, n_prime**b))


def dist_to_lattice(x: Fraction | int, mesh: Fraction | int) -> Fraction:
    """Distancia exacta de x al retículo mesh·Z.

    Args:
        x: Punto racional
        mesh: Paso del retículo (> 0)

    Returns:
        min_k |x − k·mesh|, en [0, mesh/2]

    Raises:
        ValueError: Si mesh ≤ 0

    Examples:
        >>> dist_to_lattice(Fraction(1, 3), Fraction(1, 4))
        Fraction(1, 12)
    """
    paso = Fraction(mesh)
    if paso <= 0:
        raise ValueError(f"El paso del retículo debe ser > 0, recibido: {format_rational(paso)}")
    resto = Fraction(x) - math.floor(Fraction(x) / paso) * paso
    return min(resto, paso - resto)


def gcd_racional(u: Fraction, v: Fraction) -> Fraction:
    """Generador positivo del retículo uZ + vZ para racionales u, v > 0."""
    comun = math.lcm(u.denominator, v.denominator)
    return Fraction(math.gcd(int(u * comun), int(v * comun)), comun)


def lattice_combination(
    x: Fraction | int, u: Fraction | int, v: Fraction | int
) -> tuple[int, int, Fraction]:
    """Encuentra enteros (k₁, k₂) que minimizan |x − k₁·u − k₂·v|.

    El retículo uZ + vZ es gZ con g = gcd(u, v); el punto más cercano a x
    se escribe con coeficientes de Bézout. Cuando uno de los generadores
    ya genera todo el retículo, el otro coeficiente es 0.

    Args:
        x: Punto a aproximar
        u: Primer generador (> 0)
        v: Segundo generador (> 0)

    Returns:
        Tupla (k₁, k₂, residuo) con x − k₁·u − k₂·v = residuo y
        |residuo| = distancia de x al retículo; si ningún generador
        genera el retículo, 0 ≤ k₁ < v/gcd(u, v)

    Example:
        >>> lattice_combination(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
        (1, 0, Fraction(0, 1))
    """
    x_, u_, v_ = Fraction(x), Fraction(u), Fraction(v)
    if u_ <= 0 or v_ <= 0:
        raise ValueError("Los generadores del retículo deben ser > 0")
    g = gcd_racional(u_, v_)

    # múltiplo de g más cercano (empate hacia abajo)
    cociente = x_ / g
    base_k = math.floor(cociente)
    k = base_k if cociente - base_k <= Fraction(1, 2) else base_k + 1
    residuo = x_ - k * g

    if g == u_:
        return k, 0, residuo
    if g == v_:
        return 0, k, residuo

    # k₁ reducido a [0, v/g); k₂ queda determinado por k₁·(u/g) + k₂·(v/g) = k
    u_entero, v_entero = int(u_ / g), int(v_ / g)
    alfa, _, _ = igcdex(u_entero, v_entero)
    k1 = k * int(alfa) % v_entero
    return k1, (k - k1 * u_entero) // v_entero, residuo


@lru_cache(maxsize=4096)
def factorizar(n: int) -> PrimeFactorization:
    """Factoriza n ≥ 2 en primos.

    Args:
        n: Entero ≥ 2

    Returns:
        PrimeFactorization con primos crecientes
    """
    validar_base(n, "n")
    factores = factorint(n)
    primos = tuple(sorted(int(p) for p in factores))
    return PrimeFactorization(primos, tuple(int(factores[p]) for p in primos))


def primitive_root(n: int) -> tuple[int, int]:
    """Raíz primitiva de n: el único entero no potencia perfecta r con n = r^s.

    Args:
        n: Entero ≥ 2

    Returns:
        Tupla (raíz, exponente)

    Raises:
        ValueError: Si n < 2

    Examples:
        >>> primitive_root(36)
        (6, 2)
        >>> primitive_root(12)
        (12, 1)
    """
    factorizacion = factorizar(n)
    g = 0
    for e in factorizacion.exponents:
        g = math.gcd(g, e)
    raiz = math.prod(
        p ** (e // g) for p, e in zip(factorizacion.primes, factorizacion.exponents, strict=True)
    )
    return raiz, g


def exponente_en(n: int, raiz: int) -> int | None:
    """Retorna s con n = raiz^s, o None si n no es potencia de raiz."""
    r, s = primitive_root(n)
    if r != raiz:
        return None
    return s
