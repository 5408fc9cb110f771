"""
Tests de integración end-to-end para Dyadic Atlas.

Recorren el catálogo completo: certificación, cubos adversarios de las
familias no adyacentes, estimación con la cota certificada, invariancia
por cambio de base y por re-representación, y los flujos de la CLI.

IMPORTANTE: Estos son tests de INTEGRACIÓN, NO usan mocks.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from dyadic_atlas.core.family import listar_catalogo, load_family
from dyadic_atlas.criteria.adjacency import Overall, check_adjacency

CODIGOS = {"ADJACENT": 0, "NOT_ADJACENT": 1}

NO_ADYACENTES = [
    nombre
    for nombre in listar_catalogo()
    if load_family(f"catalog:{nombre}").expected == "NOT_ADJACENT"
]

ADYACENTES = [
    nombre
    for nombre in listar_catalogo()
    if load_family(f"catalog:{nombre}").expected == "ADJACENT"
]


@pytest.mark.integration
@pytest.mark.parametrize("nombre", listar_catalogo())
def test_debe_reproducir_el_veredicto_del_catalogo(nombre: str) -> None:
    """Cada familia del catálogo se certifica con su veredicto esperado."""
    # Arrange
    familia = load_family(f"catalog:{nombre}")

    # Act
    certificado = check_adjacency(familia.grids, 64, 8, 64)

    # Assert
    assert certificado.overall.value == familia.expected


@pytest.mark.integration
@pytest.mark.parametrize("nombre", listar_catalogo())
def test_la_cli_debe_salir_con_el_codigo_del_veredicto(
    nombre: str, directorio_limpio: Path
) -> None:
    from dyadic_atlas.cli import main

    esperado = load_family(f"catalog:{nombre}").expected
    assert esperado is not None

    result = CliRunner().invoke(main, ["certify", "--family", f"catalog:{nombre}"])

    assert result.exit_code == CODIGOS[esperado]


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.parametrize("nombre", NO_ADYACENTES)
def test_familias_no_adyacentes_tienen_cubo_sin_recubrimiento(nombre: str) -> None:
    """El testigo del certificado se convierte en un cubo con cociente > N."""
    from dyadic_atlas.covering.adversarial import primer_cubo_adversario
    from dyadic_atlas.covering.engine import smallest_comparable

    grids = load_family(f"catalog:{nombre}").grids
    spec = check_adjacency(grids, 64, 8, 64).especificacion_adversaria()
    assert spec is not None

    usada, cubo = primer_cubo_adversario(grids, spec)

    assert smallest_comparable(grids, cubo, usada.target_ratio) is None


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.timeout(900)
@pytest.mark.parametrize("nombre", ADYACENTES)
def test_estimacion_no_supera_la_cota_certificada(nombre: str) -> None:
    """10⁴ cubos abiertos en 40 escalas (−20..19) se recubren bajo la cota certificada."""
    # Arrange
    from dyadic_atlas.covering.estimate import estimate_constant

    grids = load_family(f"catalog:{nombre}").grids
    cota = check_adjacency(grids, 64, 8, 64).cota_comparabilidad()

    # Act
    reporte = estimate_constant(grids, (-20, 19), 250, 2024, ratio_cap=cota)

    # Assert
    assert sum(fila.samples for fila in reporte.rows) == 10_000
    assert reporte.total_failures == 0
    assert reporte.max_ratio is not None
    assert reporte.max_ratio <= cota


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.timeout(300)
def test_estimacion_del_tercio_queda_bajo_12() -> None:
    """Escalas −20..20 con 200 cubos cada una: el peor cociente observado es < 12."""
    from dyadic_atlas.covering.estimate import estimate_constant

    grids = load_family("catalog:tercio").grids

    reporte = estimate_constant(grids, (-20, 20), 200, 7, ratio_cap=1000)

    assert len(reporte.rows) == 41
    assert reporte.total_failures == 0
    assert reporte.max_ratio is not None
    assert reporte.max_ratio < 12


@pytest.mark.integration
def test_rerepresentar_no_cambia_el_veredicto() -> None:
    """Un desplazamiento entero absorbido en los dígitos define la misma retícula."""
    from dyadic_atlas.core.grid import rerepresent

    grids = list(load_family("catalog:tercio").grids)
    grids[1] = rerepresent(grids[1], (3,), 4)

    assert check_adjacency(grids, 64, 8, 64).overall is Overall.ADJACENT


@pytest.mark.integration
def test_flujo_construct_certify(directorio_limpio: Path) -> None:
    """Derivar base 16 desde el tercio y certificar el archivo resultante."""
    from dyadic_atlas.cli import main

    runner = CliRunner()
    destino = directorio_limpio / "base16.json"

    construir = runner.invoke(
        main,
        ["construct", "--family", "catalog:tercio", "--grid", "2", "--drop", "4", "--out", str(destino)],
    )
    certificar = runner.invoke(
        main, ["certify", "--family", str(destino), "--output", "json"]
    )

    assert construir.exit_code == 0
    assert certificar.exit_code == 0
    datos = json.loads(certificar.output)
    assert datos["overall"] == "ADJACENT"
    assert datos["base_set"] == ["2", "16"]


@pytest.mark.integration
def test_flujo_witness_por_cli(directorio_limpio: Path) -> None:
    from dyadic_atlas.cli import main

    result = CliRunner().invoke(
        main,
        ["witness", "--n1", "6", "--n2", "10", "--delta", "3/7", "--C", "1/1000", "--output", "json"],
    )

    assert result.exit_code == 0
    datos = json.loads(result.output)
    assert datos["found"] is True
    assert datos["case"] == "I"
    assert datos["prime"] == "3"


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.parametrize("delta", ["0", "1/7", "1/5", "3/11", "9/13"])
@pytest.mark.parametrize("bases", [(2, 3), (2, 5), (6, 10), (12, 18)])
def test_bases_incompatibles_nunca_son_adyacentes(bases: tuple[int, int], delta: str) -> None:
    """Para bases sin raíz común todo δ deja de ser lejano en alguna generación ≤ 40."""
    from dyadic_atlas.core.exact import parse_rational
    from dyadic_atlas.core.grid import DigitStream, GridRep
    from dyadic_atlas.criteria.common import VerdictKind
    from dyadic_atlas.criteria.far import far_number

    n1, n2 = bases
    valor = parse_rational(delta)

    veredicto = far_number(valor, n1, n2, bases, 40)
    familia = [
        GridRep.estandar(n1),
        GridRep(n2, (valor,), DigitStream(n2, (), ((0,),))),
    ]

    assert veredicto.kind is VerdictKind.NOT_FAR
    assert veredicto.witness is not None
    assert check_adjacency(familia, 64, 8, 64).overall is Overall.NOT_ADJACENT


ADYACENTES_1D = [
    nombre
    for nombre in listar_catalogo()
    if load_family(f"catalog:{nombre}").expected == "ADJACENT"
    and load_family(f"catalog:{nombre}").dimension == 1
]


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.timeout(120)
@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("nombre", ADYACENTES_1D)
def test_cambio_de_base_conserva_la_adyacencia(nombre: str, k: int) -> None:
    """Quedarse con una de cada k generaciones de una retícula no rompe la adyacencia."""
    from dyadic_atlas.core.grid import drop_generations

    originales = load_family(f"catalog:{nombre}").grids

    for indice in range(len(originales)):
        grids = list(originales)
        grids[indice] = drop_generations(grids[indice], k)

        assert check_adjacency(grids, 64, 8, 64).overall is Overall.ADJACENT


@pytest.mark.integration
@pytest.mark.parametrize("nombre", ["plano_tercios", "plano_no_adyacente"])
def test_el_veredicto_del_plano_es_la_conjuncion_de_proyecciones(nombre: str) -> None:
    from dyadic_atlas.criteria.adjacency import certify_projections

    grids = load_family(f"catalog:{nombre}").grids

    directo = check_adjacency(grids, 64, 8, 64)
    proyectado = certify_projections(grids, 64, 8, 64)

    assert directo.overall is proyectado.overall


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.timeout(120)
@pytest.mark.parametrize("desplazamiento", [1, 2, 3])
@pytest.mark.parametrize("nombre", listar_catalogo())
def test_el_veredicto_no_depende_de_la_representacion(nombre: str, desplazamiento: int) -> None:
    from dyadic_atlas.core.grid import rerepresent

    familia = load_family(f"catalog:{nombre}")
    vector = (desplazamiento,) * familia.dimension

    grids = [rerepresent(g, vector, 16) for g in familia.grids]

    assert check_adjacency(grids, 64, 8, 64).overall.value == familia.expected
