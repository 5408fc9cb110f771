"""Criterios de número lejano y de par lejano.

Ambos criterios evalúan una distancia escalada exactamente sobre el rango
de generaciones pedido y después intentan certificar el ínfimo global:

- Número lejano: si n y n' son potencias de una raíz común r, el valor en
  la generación m sólo depende de (m mod P, r^t(m)·p mod q), que es
  eventualmente periódico. La detección de ciclo da el ínfimo exacto.
- Par lejano: la diferencia de los dos flujos de dígitos es un entero
  r-ádico eventualmente periódico, es decir un racional num/den con den
  coprimo con r. En cada clase de residuos la distancia escalada converge
  monótonamente a un límite explícito.

Con bases incompatibles el ínfimo es 0 y se busca un testigo bajo el umbral.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from fractions import Fraction

from dyadic_atlas.core.exact import (
    dist_to_lattice,
    exponente_en,
    format_rational,
    lattice_combination,
    lattice_mesh,
    phi,
    primitive_root,
    validar_base,
)
from dyadic_atlas.core.grid import GridRep, location, valor_adico
from dyadic_atlas.criteria.bases import IncompatibilityWitness, incompatibility_witness
from dyadic_atlas.criteria.common import (
    UMBRAL_POR_DEFECTO,
    Verdict,
    VerdictKind,
    Witness,
    normalizar_bases,
)

logger = logging.getLogger(__name__)

# Máximo de clases de residuos para el análisis exacto de pares
MAX_CLASES = 4096

# Máximo de residuos r^t·p mod q recorridos por base
MAX_RESIDUOS = 1 << 20

MEDIO = Fraction(1, 2)

# Generaciones extra, más allá de depth, para buscar testigos con bases incompatibles
GENERACIONES_TESTIGO = 512


def raiz_comun(n: int, n_prime: int) -> tuple[int, int, int] | None:
    """Retorna (r, u, u') con n = r^u y n' = r^u', o None si no comparten raíz."""
    r1, u1 = primitive_root(n)
    r2, u2 = primitive_root(n_prime)
    if r1 != r2:
        return None
    return r1, u1, u2


def _validar_umbral(umbral: Fraction) -> None:
    if umbral <= 0:
        raise ValueError(f"El umbral debe ser > 0, recibido: {format_rational(umbral)}")


# ---------------------------------------------------------------------------
# Número lejano
# ---------------------------------------------------------------------------


def valor_numero(delta: Fraction, n: int, n_prime: int, base_l: int, m: int) -> Fraction:
    """f(ℓ, m) = n_ℓ^m · dist(δ, retículo de paso 1/mcm(n^a, n'^b)).

    Example:
        >>> valor_numero(Fraction(1, 3), 2, 2, 2, 5)
        Fraction(1, 3)
    """
    a = phi(base_l, n, m)
    b = phi(base_l, n_prime, m)
    return base_l**m * dist_to_lattice(delta, lattice_mesh(n, a, n_prime, b))


def _testigo_numero(
    delta: Fraction, n: int, n_prime: int, bases: tuple[int, ...], indice: int, m: int
) -> Witness:
    base_l = bases[indice]
    a = phi(base_l, n, m)
    b = phi(base_l, n_prime, m)
    k1, k2, residuo = lattice_combination(delta, Fraction(1, n**a), Fraction(1, n_prime**b))
    return Witness(indice, base_l, m, k1, k2, base_l**m * abs(residuo))


def verificar_testigo_numero(
    delta: Fraction, n: int, n_prime: int, bases: Iterable[int], witness: Witness
) -> Fraction:
    """Re-evalúa un testigo de número no lejano sustituyéndolo en la desigualdad.

    Args:
        delta: Número evaluado
        n: Primera base del retículo
        n_prime: Segunda base del retículo
        bases: Conjunto 𝒩 del veredicto
        witness: Testigo a verificar

    Returns:
        n_ℓ^m · |δ − k₁/n^a − k₂/n'^b|

    Raises:
        ValueError: Si el testigo no corresponde al conjunto de bases
    """
    tupla = normalizar_bases(bases)
    if not 0 <= witness.base_index < len(tupla) or tupla[witness.base_index] != witness.base:
        raise ValueError(f"El testigo usa la base {witness.base}, que no está en 𝒩 = {tupla}")
    base_l, m = witness.base, witness.scale
    a = phi(base_l, n, m)
    b = phi(base_l, n_prime, m)
    resto = Fraction(delta) - Fraction(witness.k1, n**a) - Fraction(witness.k2, n_prime**b)
    return base_l**m * abs(resto)


def _certificar_numero(
    delta: Fraction,
    n: int,
    n_prime: int,
    raiz: tuple[int, int, int],
    base_l: int,
    depth: int,
) -> tuple[Fraction, bool] | int | None:
    """Certifica el ínfimo de f(ℓ, ·) para una base n_ℓ con n, n' compatibles.

    Returns:
        (cota, exacta) si el ínfimo es > 0; la generación de un cero exacto
        más allá de ``depth``; o None si los residuos exceden MAX_RESIDUOS
    """
    r, u, u_prime = raiz
    p, q = delta.numerator, delta.denominator

    def t(m: int) -> int:
        return max(u * phi(base_l, n, m), u_prime * phi(base_l, n_prime, m))

    s_l = exponente_en(base_l, r)
    if s_l is not None:
        periodo = math.lcm(u, u_prime)
        vistos: set[tuple[int, int]] = set()
        minimo: Fraction | None = None
        for m in range(depth + 1):
            t_m = t(m)
            estado = (m % periodo, pow(r, t_m, q) * p % q)
            if estado in vistos:
                logger.debug(f"Ciclo cerrado en m={m} para n_ℓ={base_l}")
                assert minimo is not None
                return minimo, True
            vistos.add(estado)
            f = Fraction(base_l**m, r**t_m) * dist_to_lattice(Fraction(estado[1], q), 1)
            minimo = f if minimo is None else min(minimo, f)
        logger.debug(f"El ciclo no cierra en depth={depth} para n_ℓ={base_l}")

    # Cota por residuos: para m > depth, n_ℓ^m ≥ r^t(m), así que f(m) ≥ dist(r^t·p/q, Z)
    t_inicial = t(depth + 1)
    x = pow(r, t_inicial, q) * p % q
    recorridos: set[int] = set()
    cola: Fraction | None = None
    desplazamiento = 0
    while x not in recorridos:
        if len(recorridos) >= MAX_RESIDUOS:
            logger.warning(f"Residuos de δ={format_rational(delta)} exceden {MAX_RESIDUOS}")
            return None
        if x == 0:
            objetivo = t_inicial + desplazamiento
            m = depth + 1
            while t(m) < objetivo:
                m += 1
            return m
        recorridos.add(x)
        d = dist_to_lattice(Fraction(x, q), 1)
        cola = d if cola is None else min(cola, d)
        x = x * r % q
        desplazamiento += 1
    assert cola is not None
    return cola, False


def _numero_incompatible(
    delta: Fraction,
    n: int,
    n_prime: int,
    tupla: tuple[int, ...],
    minimo: Fraction,
    argumento: tuple[int, int],
    umbral: Fraction,
    depth: int,
) -> Verdict:
    """Bases sin raíz común: el ínfimo es 0 y el testigo sale de incompatibility_witness.

    Con n_ℓ = n' la cantidad n_ℓ^m·dist coincide con la de la búsqueda de
    incompatibilidad para (n, n'); con n_ℓ = n, con la de (n', n).
    """
    if minimo < umbral:
        testigo = _testigo_numero(delta, n, n_prime, tupla, *argumento)
        return Verdict(VerdictKind.NOT_FAR, minimo, testigo, depth, range_infimum=minimo)

    m_max = depth + GENERACIONES_TESTIGO
    for base_l, primera in ((n_prime, n), (n, n_prime)):
        if base_l not in tupla:
            continue
        resultado = incompatibility_witness(primera, base_l, delta, umbral, m_max)
        if isinstance(resultado, IncompatibilityWitness):
            testigo = _testigo_numero(delta, n, n_prime, tupla, tupla.index(base_l), resultado.m)
            return Verdict(
                VerdictKind.NOT_FAR, testigo.margin, testigo, resultado.m, range_infimum=minimo
            )

    logger.warning(
        f"Sin testigo para δ={format_rational(delta)} con bases ({n}, {n_prime}) "
        f"hasta m={m_max}: ínfimo observado {format_rational(minimo)}"
    )
    return Verdict(VerdictKind.UNDECIDED, minimo, None, m_max, range_infimum=minimo)


def far_number(
    delta: Fraction | int,
    n: int,
    n_prime: int,
    bases: Iterable[int],
    depth: int,
    umbral: Fraction = UMBRAL_POR_DEFECTO,
) -> Verdict:
    """Decide si δ es un número lejano respecto de (n, n') para todas las bases de 𝒩.

    Args:
        delta: Número racional δ
        n: Primera base del retículo
        n_prime: Segunda base del retículo
        bases: Conjunto 𝒩 de bases n_ℓ
        depth: Última generación evaluada exactamente (≥ 1)
        umbral: Valor bajo el cual un f observado cuenta como testigo

    Returns:
        Verdict FAR con el ínfimo certificado, NOT_FAR con testigo, o UNDECIDED

    Raises:
        ValueError: Si alguna base es < 2, depth < 1 o umbral ≤ 0

    Examples:
        >>> far_number(Fraction(1, 3), 2, 2, {2}, 20).bound
        Fraction(1, 3)
        >>> far_number(Fraction(1, 2), 2, 2, {2}, 20).witness.scale
        1
    """
    validar_base(n, "n")
    validar_base(n_prime, "n'")
    if depth < 1:
        raise ValueError(f"depth debe ser ≥ 1, recibido: {depth}")
    _validar_umbral(umbral)
    tupla = normalizar_bases(bases)
    delta = Fraction(delta)

    minimo: Fraction | None = None
    argumento = (0, 0)
    minimos_base: dict[int, Fraction] = {}
    for m in range(depth + 1):
        for indice, base_l in enumerate(tupla):
            f = valor_numero(delta, n, n_prime, base_l, m)
            if f == 0:
                testigo = _testigo_numero(delta, n, n_prime, tupla, indice, m)
                logger.debug(f"δ={format_rational(delta)} cae en el retículo en m={m}")
                return Verdict(
                    VerdictKind.NOT_FAR, Fraction(0), testigo, m, exact=True,
                    range_infimum=Fraction(0),
                )
            if minimo is None or f < minimo:
                minimo, argumento = f, (indice, m)
            if indice not in minimos_base or f < minimos_base[indice]:
                minimos_base[indice] = f
    assert minimo is not None

    raiz = raiz_comun(n, n_prime)
    if raiz is None:
        return _numero_incompatible(delta, n, n_prime, tupla, minimo, argumento, umbral, depth)

    cotas: list[Fraction] = []
    exacto = True
    for indice, base_l in enumerate(tupla):
        certificado = _certificar_numero(delta, n, n_prime, raiz, base_l, depth)
        if certificado is None:
            return Verdict(VerdictKind.UNDECIDED, minimo, None, depth, range_infimum=minimo)
        if isinstance(certificado, int):
            testigo = _testigo_numero(delta, n, n_prime, tupla, indice, certificado)
            return Verdict(
                VerdictKind.NOT_FAR, Fraction(0), testigo, certificado, exact=True,
                range_infimum=minimo,
            )
        cota, es_exacta = certificado
        cotas.append(min(cota, minimos_base[indice]))
        exacto = exacto and es_exacta

    cota_final = min(cotas)
    logger.info(
        f"δ={format_rational(delta)} es lejano para ({n}, {n_prime}): "
        f"cota {format_rational(cota_final)}"
    )
    return Verdict(
        VerdictKind.FAR, cota_final, None, depth, exact=exacto, range_infimum=minimo
    )


# ---------------------------------------------------------------------------
# Par lejano
# ---------------------------------------------------------------------------


def _diferencia(rep_a: GridRep, rep_b: GridRep, s: int, a: int, b: int) -> int:
    return location(rep_a, a)[s - 1] - location(rep_b, b)[s - 1]


def valor_par(rep_a: GridRep, rep_b: GridRep, s: int, base_l: int, j: int) -> Fraction:
    """g(ℓ, j) = dist(Δ, mcd(n^a, n'^b)·Z) / n_ℓ^j con Δ = L_A(a)_s − L_B(b)_s."""
    n, n_prime = rep_a.base, rep_b.base
    a = phi(base_l, n, j)
    b = phi(base_l, n_prime, j)
    delta = _diferencia(rep_a, rep_b, s, a, b)
    return dist_to_lattice(delta, math.gcd(n**a, n_prime**b)) / base_l**j


def _testigo_par(
    rep_a: GridRep, rep_b: GridRep, s: int, bases: tuple[int, ...], indice: int, j: int
) -> Witness:
    base_l = bases[indice]
    n, n_prime = rep_a.base, rep_b.base
    a = phi(base_l, n, j)
    b = phi(base_l, n_prime, j)
    delta = _diferencia(rep_a, rep_b, s, a, b)
    c1, c2, residuo = lattice_combination(delta, n**a, n_prime**b)
    # L_A + k₃n^a − L_B − k₄n'^b = Δ − c₁n^a − c₂n'^b
    return Witness(indice, base_l, j, -c1, c2, abs(residuo) / base_l**j)


def verificar_testigo_par(
    rep_a: GridRep, rep_b: GridRep, coordinate: int, bases: Iterable[int], witness: Witness
) -> Fraction:
    """Re-evalúa un testigo de par no lejano.

    Returns:
        |L_A(a)_s + k₃n^a − L_B(b)_s − k₄n'^b| / n_ℓ^j
    """
    tupla = normalizar_bases(bases)
    if not 0 <= witness.base_index < len(tupla) or tupla[witness.base_index] != witness.base:
        raise ValueError(f"El testigo usa la base {witness.base}, que no está en 𝒩 = {tupla}")
    base_l, j = witness.base, witness.scale
    n, n_prime = rep_a.base, rep_b.base
    a = phi(base_l, n, j)
    b = phi(base_l, n_prime, j)
    valor = (
        location(rep_a, a)[coordinate - 1]
        + witness.k1 * n**a
        - location(rep_b, b)[coordinate - 1]
        - witness.k2 * n_prime**b
    )
    return Fraction(abs(valor), base_l**j)


def _fraccion_adica(rho: Fraction, r: int, tau: int) -> Fraction:
    """x_τ = (ρ mod r^τ)/r^τ ∈ [0, 1)."""
    if tau == 0:
        return Fraction(0)
    modulo = r**tau
    resto = rho.numerator * pow(rho.denominator, -1, modulo) % modulo
    return Fraction(resto, modulo)


def _limite(rho: Fraction, r: int, tau: int) -> Fraction:
    """Punto límite de x_τ en la clase de τ, en [0, 1)."""
    den = rho.denominator
    if den == 1:
        return Fraction(0)
    return Fraction(-rho.numerator * pow(r, -tau, den) % den, den)


def _margen(limite: Fraction) -> Fraction:
    margen = dist_to_lattice(limite, MEDIO)
    return margen if margen > 0 else MEDIO


def _validar_par(rep_a: GridRep, rep_b: GridRep, coordinate: int, J: int, depth: int) -> None:  # noqa: N803
    if rep_a.dimension != rep_b.dimension:
        raise ValueError(
            f"Dimensiones distintas: {rep_a.dimension} y {rep_b.dimension}"
        )
    if not 1 <= coordinate <= rep_a.dimension:
        raise ValueError(f"Coordenada {coordinate} fuera de rango [1, {rep_a.dimension}]")
    if J < 1:
        raise ValueError(f"J debe ser ≥ 1, recibido: {J}")
    if depth < J:
        raise ValueError(f"depth ({depth}) debe ser ≥ J ({J})")


def far_pair(
    rep_a: GridRep,
    rep_b: GridRep,
    coordinate: int,
    bases: Iterable[int],
    J: int,  # noqa: N803
    depth: int,
    umbral: Fraction = UMBRAL_POR_DEFECTO,
) -> Verdict:
    """Decide si las funciones de localización de la coordenada s forman un par lejano.

    Los ceros exactos que aparecen antes de la zona monótona desplazan el J
    efectivo (reportado en el veredicto) en lugar de refutar la condición.

    Args:
        rep_a: Primera retícula
        rep_b: Segunda retícula
        coordinate: Coordenada s (base 1)
        bases: Conjunto 𝒩
        J: Primera generación grande
        depth: Última generación evaluada en el barrido
        umbral: Valor bajo el cual un g observado cuenta como testigo

    Returns:
        Verdict FAR (con effective_J), NOT_FAR con testigo (k₃, k₄) o UNDECIDED

    Raises:
        ValueError: Si J < 1, depth < J o la coordenada está fuera de rango
    """
    _validar_par(rep_a, rep_b, coordinate, J, depth)
    _validar_umbral(umbral)
    tupla = normalizar_bases(bases)
    s = coordinate
    n, n_prime = rep_a.base, rep_b.base

    valores: dict[tuple[int, int], Fraction] = {}

    def g(indice: int, j: int) -> Fraction:
        clave = (indice, j)
        if clave not in valores:
            valores[clave] = valor_par(rep_a, rep_b, s, tupla[indice], j)
        return valores[clave]

    minimo: Fraction | None = None
    argumento = (0, J)
    ceros: list[tuple[int, int]] = []
    for j in range(J, depth + 1):
        for indice in range(len(tupla)):
            valor = g(indice, j)
            if valor == 0:
                ceros.append((indice, j))
            if minimo is None or valor < minimo:
                minimo, argumento = valor, (indice, j)
    assert minimo is not None

    raiz = raiz_comun(n, n_prime)
    if raiz is None:
        if minimo < umbral:
            testigo = _testigo_par(rep_a, rep_b, s, tupla, *argumento)
            return Verdict(VerdictKind.NOT_FAR, minimo, testigo, depth, range_infimum=minimo)
        return _buscar_testigo_par(
            rep_a, rep_b, s, tupla, range(len(tupla)), depth + 1, 2 * depth, umbral, minimo, g
        )
    r, u, u_prime = raiz

    rho = valor_adico(rep_a, s - 1) - valor_adico(rep_b, s - 1)
    if rho == 0:
        # flujos idénticos módulo r^τ: g se anula en toda generación
        testigo = _testigo_par(rep_a, rep_b, s, tupla, *ceros[0])
        return Verdict(
            VerdictKind.NOT_FAR, Fraction(0), testigo, J, exact=True, range_infimum=Fraction(0)
        )

    periodo_a = len(rep_a.digits.componente(s - 1)[1])
    periodo_b = len(rep_b.digits.componente(s - 1)[1])
    periodo_r = math.lcm(u * periodo_a, u_prime * periodo_b)
    margen = min(_margen(_limite(rho, r, t)) for t in range(periodo_r))

    tau_min = 0
    while abs(rho.numerator) >= margen * rho.denominator * r**tau_min:
        tau_min += 1

    def tau(base_l: int, j: int) -> int:
        return min(u * phi(base_l, n, j), u_prime * phi(base_l, n_prime, j))

    j_estrella = J
    for base_l in tupla:
        while tau(base_l, j_estrella) < tau_min:
            j_estrella += 1

    if j_estrella > depth:
        logger.warning(
            f"La zona monótona empieza en j={j_estrella} > depth={depth}: sin decisión"
        )
        return Verdict(VerdictKind.UNDECIDED, minimo, None, depth, range_infimum=minimo)

    # los ceros sólo pueden aparecer antes de la zona monótona
    j_efectivo = max([J] + [j + 1 for _, j in ceros])

    # pasos por periodo para la búsqueda de testigos en clases de límite 0
    pasos = umbral.denominator.bit_length() + abs(rho.numerator).bit_length() + 4

    cotas: list[Fraction] = []
    exacto = True
    ultimo_j = depth
    for indice, base_l in enumerate(tupla):
        s_l = exponente_en(base_l, r)
        periodo_j = math.lcm(u, u_prime) * periodo_r
        if s_l is not None and periodo_j <= MAX_CLASES:
            fin = j_estrella + periodo_j
            ultimo_j = max(ultimo_j, fin - 1)
            terminos = [g(indice, j) for j in range(j_efectivo, fin)]
            cola: Fraction | None = None
            for j in range(j_estrella, fin):
                t_j = tau(base_l, j)
                limite = dist_to_lattice(_limite(rho, r, t_j), 1)
                if limite == 0:
                    for k in range(pasos):
                        candidato = j + k * periodo_j
                        if g(indice, candidato) < umbral:
                            testigo = _testigo_par(rep_a, rep_b, s, tupla, indice, candidato)
                            return Verdict(
                                VerdictKind.NOT_FAR, g(indice, candidato), testigo,
                                candidato, exact=True, range_infimum=minimo,
                            )
                    logger.warning(f"Clase de límite 0 sin testigo bajo el umbral (j={j})")
                    return Verdict(
                        VerdictKind.UNDECIDED, minimo, None, depth, range_infimum=minimo
                    )
                valor_limite = Fraction(r**t_j, base_l**j) * limite
                cola = valor_limite if cola is None else min(cola, valor_limite)
            assert cola is not None
            cotas.append(min(terminos + [cola]))
        else:
            exacto = False
            terminos = [g(indice, j) for j in range(j_efectivo, j_estrella)]
            t_0 = tau(base_l, j_estrella)
            cola_tau: Fraction | None = None
            for t in range(t_0, t_0 + periodo_r):
                limite = dist_to_lattice(_limite(rho, r, t), 1)
                if limite == 0:
                    return _buscar_testigo_par(
                        rep_a, rep_b, s, tupla, (indice,), J, depth + periodo_r * pasos,
                        umbral, minimo, g,
                    )
                primero = dist_to_lattice(_fraccion_adica(rho, r, t), 1)
                candidato_cola = min(primero, limite)
                cola_tau = candidato_cola if cola_tau is None else min(cola_tau, candidato_cola)
            assert cola_tau is not None
            cotas.append(min(terminos + [cola_tau / r ** max(u, u_prime)]))

    cota_final = min(cotas)
    rango = [v for (_, j), v in valores.items() if j_efectivo <= j <= depth]
    logger.info(
        f"Par lejano en la coordenada {s}: cota {format_rational(cota_final)} "
        f"desde J={j_efectivo}"
    )
    return Verdict(
        VerdictKind.FAR,
        cota_final,
        None,
        ultimo_j,
        exact=exacto,
        range_infimum=min(rango) if rango else None,
        effective_J=j_efectivo,
    )


def _buscar_testigo_par(
    rep_a: GridRep,
    rep_b: GridRep,
    s: int,
    tupla: tuple[int, ...],
    indices: Iterable[int],
    J: int,  # noqa: N803
    limite_j: int,
    umbral: Fraction,
    minimo: Fraction,
    g: Callable[[int, int], Fraction],
) -> Verdict:
    """Barre j ∈ [J, limite_j] buscando g(ℓ, j) < umbral para las bases dadas."""
    indices = tuple(indices)
    for j in range(J, limite_j + 1):
        for indice in indices:
            valor = g(indice, j)
            if valor < umbral:
                testigo = _testigo_par(rep_a, rep_b, s, tupla, indice, j)
                return Verdict(VerdictKind.NOT_FAR, valor, testigo, j, range_infimum=minimo)
    logger.warning(f"Sin testigo bajo el umbral hasta j={limite_j}")
    return Verdict(VerdictKind.UNDECIDED, minimo, None, limite_j, range_infimum=minimo)
