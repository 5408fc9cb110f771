"""
CLI (Command Line Interface) para Dyadic Atlas.

Este módulo proporciona la interfaz de línea de comandos principal
usando Click framework.

Códigos de salida:
    0: ADJACENT / éxito
    1: NOT_ADJACENT / sin testigo / cubos sin recubrimiento
    2: UNDECIDED
    3: Error de entrada
    4: Error inesperado
"""

from __future__ import annotations

import dataclasses
import logging
import platform
import sys
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path
from typing import Any

import click
import colorama

from dyadic_atlas import __version__
from dyadic_atlas.core.config import (
    Command,
    OutputFormat,
    RunConfig,
    cargar_configuracion,
    parse_scales,
)
from dyadic_atlas.core.exact import format_rational, parse_rational
from dyadic_atlas.core.family import (
    Familia,
    family_to_dict,
    listar_catalogo,
    load_family,
    write_family,
)
from dyadic_atlas.core.grid import Cube, GridRep, Openness, drop_generations, rerepresent
from dyadic_atlas.covering.adversarial import SinCoincidenciaError, primer_cubo_adversario
from dyadic_atlas.covering.engine import smallest_comparable
from dyadic_atlas.covering.estimate import estimate_constant
from dyadic_atlas.criteria.adjacency import (
    Overall,
    certify_projections,
    check_adjacency,
    project,
)
from dyadic_atlas.criteria.bases import BusquedaAgotada, incompatibility_witness
from dyadic_atlas.reports import a_json, render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVO = 1
EXIT_INDECISO = 2
EXIT_ENTRADA = 3
EXIT_INESPERADO = 4

CODIGOS_VEREDICTO = {
    Overall.ADJACENT: EXIT_OK,
    Overall.NOT_ADJACENT: EXIT_NEGATIVO,
    Overall.UNDECIDED: EXIT_INDECISO,
}

# Campos de AtlasConfig que pueden venir de la línea de comandos
CAMPOS_ATLAS = (
    "depth_small",
    "J",
    "depth_large",
    "ratio_cap",
    "scales",
    "samples",
    "seed",
    "adversarial_floor",
)


def _parsear_vector(texto: str, nombre: str) -> tuple[Fraction, ...]:
    """Parsea "p/q,p/q,..." en un punto racional."""
    try:
        return tuple(parse_rational(parte) for parte in texto.split(","))
    except ValueError as e:
        raise ValueError(f"{nombre} mal formado: {e}") from e


def _parsear_enteros(texto: str, nombre: str) -> tuple[int, ...]:
    try:
        return tuple(int(parte) for parte in texto.split(","))
    except ValueError as e:
        raise ValueError(f"{nombre} mal formado: {texto!r} (se esperan enteros separados por comas)") from e


def _construir_config(comando: Command, parametros: dict[str, Any]) -> RunConfig:
    """Combina .dyadic-atlas.yaml con las opciones de la línea de comandos.

    Raises:
        ValueError: Si algún valor es inválido
    """
    atlas = cargar_configuracion(Path.cwd())
    cambios: dict[str, Any] = {}
    for campo in CAMPOS_ATLAS:
        valor = parametros.pop(campo, None)
        if valor is None:
            continue
        if campo == "ratio_cap":
            valor = parse_rational(valor)
        elif campo == "scales":
            valor = parse_scales(valor)
        cambios[campo] = valor
    if cambios:
        atlas = dataclasses.replace(atlas, **cambios)

    salida = parametros.pop("output", None)
    destino = parametros.pop("out", None)
    return RunConfig(
        command=comando,
        family_path=parametros.pop("family", None),
        atlas=atlas,
        output=OutputFormat(salida) if salida else OutputFormat.TABLE,
        out_path=Path(destino) if destino else None,
        options={k: v for k, v in parametros.items() if v is not None},
    )


def _cargar_familia(config: RunConfig) -> Familia:
    if not config.family_path:
        raise ValueError("Falta --family (archivo JSON o catalog:NOMBRE)")
    return load_family(config.family_path)


def _seleccionar_grids(familia: Familia, config: RunConfig) -> list[GridRep]:
    """Retículas a certificar; las familias proyectadas requieren --pair."""
    par = config.options.get("pair")
    if not familia.projection:
        if par:
            raise ValueError("--pair sólo se admite con familias proyectadas")
        return list(familia.grids)
    if not par:
        raise ValueError("Una familia proyectada sólo se certifica eligiendo un par (--pair I,J)")
    indices = _parsear_enteros(par, "--pair")
    if len(indices) != 2 or indices[0] == indices[1]:
        raise ValueError(f"--pair requiere dos índices distintos, recibido: {par!r}")
    for i in indices:
        if not 1 <= i <= len(familia.grids):
            raise ValueError(f"Índice {i} fuera de rango [1, {len(familia.grids)}]")
    return [familia.grids[i - 1] for i in indices]


def _certify(config: RunConfig) -> tuple[Any, int]:
    familia = _cargar_familia(config)
    grids = _seleccionar_grids(familia, config)
    atlas = config.atlas

    if config.options.get("projections"):
        proyecciones = certify_projections(
            grids, atlas.depth_small, atlas.J, atlas.depth_large, atlas.umbral
        )
        return proyecciones, CODIGOS_VEREDICTO[proyecciones.overall]

    certificado = check_adjacency(
        grids, atlas.depth_small, atlas.J, atlas.depth_large, atlas.umbral
    )
    if certificado.overall is Overall.NOT_ADJACENT:
        spec = certificado.especificacion_adversaria(piso=atlas.adversarial_floor)
        if spec is not None:
            try:
                usada, cubo = primer_cubo_adversario(grids, spec)
                certificado.metadata["adversarial"] = {
                    "spec": usada.to_dict(),
                    "cube": cubo.describir(),
                }
            except SinCoincidenciaError as e:
                logger.warning(f"Sin cubo adversario: {e}")
                certificado.metadata["adversarial"] = None
    return certificado, CODIGOS_VEREDICTO[certificado.overall]


def _cover(config: RunConfig) -> tuple[Any, int]:
    familia = _cargar_familia(config)
    if "corner" not in config.options or "side" not in config.options:
        raise ValueError("cover requiere --corner y --side")
    esquina = _parsear_vector(config.options["corner"], "--corner")
    if len(esquina) != familia.dimension:
        raise ValueError(
            f"--corner tiene {len(esquina)} componentes, la familia está en R^{familia.dimension}"
        )
    q = Cube(esquina, parse_rational(config.options["side"]), Openness.OPEN)
    resultado = smallest_comparable(familia.grids, q, config.ratio_cap)
    if resultado is None:
        return {
            "covered": False,
            "query": q.describir(),
            "ratio_cap": format_rational(config.ratio_cap),
        }, EXIT_NEGATIVO
    return {"covered": True, "query": q.describir(), **resultado.to_dict()}, EXIT_OK


def _estimate(config: RunConfig) -> tuple[Any, int]:
    familia = _cargar_familia(config)
    reporte = estimate_constant(
        familia.grids, config.scales, config.samples, config.seed, config.ratio_cap
    )
    return reporte, EXIT_OK if reporte.total_failures == 0 else EXIT_NEGATIVO


def _witness(config: RunConfig) -> tuple[Any, int]:
    opciones = config.options
    for requerida in ("n1", "n2", "delta", "C"):
        if requerida not in opciones:
            raise ValueError(f"witness requiere --{requerida}")
    resultado = incompatibility_witness(
        opciones["n1"],
        opciones["n2"],
        parse_rational(opciones["delta"]),
        parse_rational(opciones["C"]),
        opciones.get("m_max", config.depth_small),
    )
    if isinstance(resultado, BusquedaAgotada):
        return resultado, EXIT_NEGATIVO
    return resultado, EXIT_OK


def _construct(config: RunConfig) -> tuple[Any, int]:
    familia = _cargar_familia(config)
    opciones = config.options
    indice = opciones.get("grid", 1)
    if not 1 <= indice <= len(familia.grids):
        raise ValueError(f"--grid {indice} fuera de rango [1, {len(familia.grids)}]")
    grid = familia.grids[indice - 1]

    if "drop" in opciones:
        grid = drop_generations(grid, opciones["drop"])
    if "shift" in opciones:
        desplazamiento = _parsear_enteros(opciones["shift"], "--shift")
        grid = rerepresent(grid, desplazamiento, opciones.get("depth", config.depth_small))
    if "drop" not in opciones and "shift" not in opciones:
        raise ValueError("construct requiere --drop y/o --shift")

    grids = list(familia.grids)
    grids[indice - 1] = grid
    derivada = dataclasses.replace(familia, grids=tuple(grids), expected=None)
    return derivada, EXIT_OK


def _project(config: RunConfig) -> tuple[Any, int]:
    familia = _cargar_familia(config)
    s = config.options.get("coordinate", 1)
    proyectada = Familia(
        dimension=1,
        grids=tuple(project(familia.grids, s)),
        name=f"{familia.name}[{s}]" if familia.name else "",
        description=familia.description,
        projection=True,
    )
    return proyectada, EXIT_OK


MANEJADORES: dict[Command, Callable[[RunConfig], tuple[Any, int]]] = {
    Command.CERTIFY: _certify,
    Command.COVER: _cover,
    Command.ESTIMATE: _estimate,
    Command.WITNESS: _witness,
    Command.CONSTRUCT: _construct,
    Command.PROJECT: _project,
}


def _emitir(resultado: Any, config: RunConfig) -> None:
    if isinstance(resultado, Familia):
        if config.out_path is not None:
            write_family(resultado, config.out_path)
            click.echo(f"✓ Familia escrita en {config.out_path}")
            return
        click.echo(a_json(family_to_dict(resultado)), nl=False)
        return

    texto = render(resultado, config.output)
    if config.out_path is not None:
        config.out_path.write_text(click.unstyle(texto), encoding="utf-8")
        click.echo(f"✓ Reporte escrito en {config.out_path}")
        return
    click.echo(texto, nl=False)


def run(config: RunConfig) -> int:
    """Ejecuta un comando y emite su reporte.

    Args:
        config: Configuración completa de la ejecución

    Returns:
        Código de salida (ver docstring del módulo)
    """
    try:
        resultado, codigo = MANEJADORES[config.command](config)
        _emitir(resultado, config)
        return codigo
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_ENTRADA
    except Exception as e:
        logger.debug("Traza del error inesperado", exc_info=True)
        click.echo(f"Error inesperado: {e}", err=True)
        return EXIT_INESPERADO


def _ejecutar(comando: Command, parametros: dict[str, Any]) -> None:
    try:
        config = _construir_config(comando, parametros)
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_ENTRADA)
    sys.exit(run(config))


def _opciones_comunes(funcion: Callable[..., None]) -> Callable[..., None]:
    """Opciones compartidas por los comandos que trabajan sobre una familia."""
    opciones = [
        click.option("--family", help="Archivo JSON de la familia o catalog:NOMBRE"),
        click.option("--depth-small", type=int, help="Generaciones de la condición 1"),
        click.option("--J", "J", type=int, help="Primera generación grande de la condición 2"),
        click.option("--depth-large", type=int, help="Última generación grande verificada"),
        click.option("--ratio-cap", help="Cociente máximo de recubrimiento (p/q)"),
        click.option("--scales", help="Rango de escalas LO..HI"),
        click.option("--samples", type=int, help="Cubos aleatorios por escala"),
        click.option("--seed", type=int, help="Semilla de muestreo"),
        click.option(
            "--output",
            type=click.Choice([f.value for f in OutputFormat]),
            help="Formato de salida (default: table)",
        ),
        click.option("--out", type=click.Path(dir_okay=False), help="Archivo de salida"),
    ]
    for opcion in reversed(opciones):
        funcion = opcion(funcion)
    return funcion


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Mostrar logs de depuración")
def main(verbose: bool) -> None:
    """Dyadic Atlas - adyacencia de retículas diádicas con bases distintas."""
    # Inicializar colorama en Windows para soporte de colores
    if platform.system() == "Windows":
        colorama.init()
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@_opciones_comunes
@click.option("--pair", help="Par I,J a certificar en familias proyectadas")
@click.option("--projections", is_flag=True, default=None, help="Certificar cada par proyectado")
@click.option(
    "--adversarial-floor", type=int, help="j mínimo de los cubos adversarios a gran escala"
)
def certify(**parametros: Any) -> None:
    """
    Certifica o refuta la adyacencia de la familia.

    Sale con 0 (ADJACENT), 1 (NOT_ADJACENT) o 2 (UNDECIDED).
    """
    _ejecutar(Command.CERTIFY, parametros)


@main.command()
@_opciones_comunes
@click.option("--corner", help="Esquina del cubo abierto (p/q,p/q,...)")
@click.option("--side", help="Lado del cubo abierto (p/q)")
def cover(**parametros: Any) -> None:
    """Busca el menor cubo de la familia que contiene un cubo abierto."""
    _ejecutar(Command.COVER, parametros)


@main.command()
@_opciones_comunes
def estimate(**parametros: Any) -> None:
    """Estima empíricamente la constante de comparabilidad."""
    _ejecutar(Command.ESTIMATE, parametros)


@main.command()
@_opciones_comunes
@click.option("--n1", type=int, help="Primera base")
@click.option("--n2", type=int, help="Segunda base")
@click.option("--delta", help="Número δ (p/q)")
@click.option("--C", "C", help="Constante candidata (p/q)")
@click.option("--m-max", type=int, help="Última generación a explorar (default: depth-small)")
def witness(**parametros: Any) -> None:
    """Busca un testigo de incompatibilidad de dos bases."""
    _ejecutar(Command.WITNESS, parametros)


@main.command()
@_opciones_comunes
@click.option("--grid", type=int, help="Retícula a transformar (base 1, default: 1)")
@click.option("--drop", type=int, help="Conservar una de cada k generaciones")
@click.option("--shift", help="Desplazamiento entero del origen (n,n,...)")
@click.option("--depth", type=int, help="Profundidad de absorción del desplazamiento")
def construct(**parametros: Any) -> None:
    """Deriva una familia aplicando drop_generations y/o rerepresent."""
    _ejecutar(Command.CONSTRUCT, parametros)


@main.command(name="project")
@_opciones_comunes
@click.option("--coordinate", type=int, help="Coordenada a proyectar (base 1, default: 1)")
def project_command(**parametros: Any) -> None:
    """Proyecta la familia sobre una coordenada."""
    _ejecutar(Command.PROJECT, parametros)


@main.command()
def catalog() -> None:
    """Lista las familias incluidas y su veredicto esperado."""
    try:
        nombres = listar_catalogo()
        if not nombres:
            click.echo("No hay familias en el catálogo.")
            sys.exit(EXIT_OK)
        for nombre in nombres:
            familia = load_family(f"catalog:{nombre}")
            esperado = familia.expected or "-"
            click.echo(
                f"  {nombre:<22} R^{familia.dimension}  bases {list(familia.bases)!s:<12} {esperado}"
            )
        sys.exit(EXIT_OK)
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_ENTRADA)
    except Exception as e:
        click.echo(f"Error inesperado: {e}", err=True)
        sys.exit(EXIT_INESPERADO)


