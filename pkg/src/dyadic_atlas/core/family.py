"""Lectura y escritura de familias de retículas en JSON.

Esquema de una familia::

    {
      "name": "tercio",
      "dimension": 1,
      "grids": [
        {"base": 2, "delta": ["0"], "digits": {"preperiod": [], "period": [[0]]}, "label": "D"},
        ...
      ]
    }

Los errores de validación indican la ruta JSON del valor culpable.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from dyadic_atlas.core.exact import format_rational, parse_rational
from dyadic_atlas.core.grid import DigitStream, GridRep

logger = logging.getLogger(__name__)

PREFIJO_CATALOGO = "catalog:"


class FamiliaInvalidaError(ValueError):
    """Documento de familia que no cumple el esquema.

    Attributes:
        ruta: Ruta JSON del valor culpable (p.ej. "$.grids[1].delta[0]")
    """

    def __init__(self, ruta: str, mensaje: str) -> None:
        super().__init__(f"{ruta}: {mensaje}")
        self.ruta = ruta


@dataclass(frozen=True)
class Familia:
    """Familia de retículas en R^d.

    Attributes:
        dimension: Dimensión ambiente d
        grids: Retículas de la familia
        name: Nombre corto
        description: Descripción libre
        expected: Veredicto esperado (solo catálogo)
        projection: True si es una proyección con d+1 retículas 1-D
    """

    dimension: int
    grids: tuple[GridRep, ...]
    name: str = ""
    description: str = ""
    expected: str | None = None
    projection: bool = False
    extra: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def bases(self) -> tuple[int, ...]:
        return tuple(g.base for g in self.grids)


def _entero(valor: Any, ruta: str, minimo: int | None = None) -> int:
    if isinstance(valor, bool) or not isinstance(valor, int):
        raise FamiliaInvalidaError(ruta, f"se esperaba un entero, recibido {valor!r}")
    if minimo is not None and valor < minimo:
        raise FamiliaInvalidaError(ruta, f"debe ser ≥ {minimo}, recibido {valor}")
    return valor


def _lista(valor: Any, ruta: str) -> list[Any]:
    if not isinstance(valor, list):
        raise FamiliaInvalidaError(ruta, f"se esperaba una lista, recibido {type(valor).__name__}")
    return valor


def _parsear_vectores(
    datos: Any, ruta: str, base: int, dimension: int
) -> tuple[tuple[int, ...], ...]:
    vectores = []
    for i, vector in enumerate(_lista(datos, ruta)):
        ruta_v = f"{ruta}[{i}]"
        componentes = _lista(vector, ruta_v)
        if len(componentes) != dimension:
            raise FamiliaInvalidaError(
                ruta_v, f"el vector de dígitos tiene {len(componentes)} componentes, se esperaban {dimension}"
            )
        fila = []
        for s, a in enumerate(componentes):
            digito = _entero(a, f"{ruta_v}[{s}]")
            if not 0 <= digito < base:
                raise FamiliaInvalidaError(
                    f"{ruta_v}[{s}]", f"dígito {digito} fuera de rango [0, {base - 1}]"
                )
            fila.append(digito)
        vectores.append(tuple(fila))
    return tuple(vectores)


def parse_grid(datos: Any, ruta: str, dimension: int) -> GridRep:
    """Valida y construye una retícula desde su forma JSON.

    Args:
        datos: Objeto JSON de la retícula
        ruta: Ruta JSON del objeto (para mensajes de error)
        dimension: Dimensión ambiente esperada

    Returns:
        GridRep validada

    Raises:
        FamiliaInvalidaError: Si algún campo no cumple el esquema
    """
    if not isinstance(datos, dict):
        raise FamiliaInvalidaError(ruta, "se esperaba un objeto")
    if "base" not in datos:
        raise FamiliaInvalidaError(f"{ruta}.base", "campo obligatorio ausente")
    base = _entero(datos["base"], f"{ruta}.base", minimo=2)

    delta = _lista(datos.get("delta"), f"{ruta}.delta")
    if len(delta) != dimension:
        raise FamiliaInvalidaError(
            f"{ruta}.delta", f"tiene {len(delta)} componentes, se esperaban {dimension}"
        )
    origen = []
    for s, valor in enumerate(delta):
        try:
            origen.append(parse_rational(valor))
        except ValueError as e:
            raise FamiliaInvalidaError(f"{ruta}.delta[{s}]", str(e)) from e

    digitos = datos.get("digits")
    if not isinstance(digitos, dict):
        raise FamiliaInvalidaError(f"{ruta}.digits", "se esperaba un objeto con preperiod y period")
    pre = _parsear_vectores(
        digitos.get("preperiod", []), f"{ruta}.digits.preperiod", base, dimension
    )
    per = _parsear_vectores(digitos.get("period"), f"{ruta}.digits.period", base, dimension)
    if not per:
        raise FamiliaInvalidaError(f"{ruta}.digits.period", "el periodo no puede estar vacío")

    etiqueta = datos.get("label", "")
    if not isinstance(etiqueta, str):
        raise FamiliaInvalidaError(f"{ruta}.label", "se esperaba una cadena")
    return GridRep(base, tuple(origen), DigitStream(base, pre, per), etiqueta)


def parse_family(datos: Any) -> Familia:
    """Valida un documento de familia completo.

    Raises:
        FamiliaInvalidaError: Si el documento no cumple el esquema o la
            familia no tiene exactamente d+1 retículas
    """
    if not isinstance(datos, dict):
        raise FamiliaInvalidaError("$", "el documento debe ser un objeto JSON")
    if "dimension" not in datos:
        raise FamiliaInvalidaError("$.dimension", "campo obligatorio ausente")
    dimension = _entero(datos["dimension"], "$.dimension", minimo=1)
    proyeccion = bool(datos.get("projection", False))

    grids_json = _lista(datos.get("grids"), "$.grids")
    grids = tuple(
        parse_grid(g, f"$.grids[{i}]", dimension) for i, g in enumerate(grids_json)
    )
    if not proyeccion and len(grids) != dimension + 1:
        raise FamiliaInvalidaError(
            "$.grids",
            f"una familia en R^{dimension} debe tener exactamente {dimension + 1} retículas, "
            f"tiene {len(grids)}",
        )

    conocidas = {"name", "dimension", "grids", "description", "expected", "projection"}
    return Familia(
        dimension=dimension,
        grids=grids,
        name=str(datos.get("name", "")),
        description=str(datos.get("description", "")),
        expected=datos.get("expected"),
        projection=proyeccion,
        extra={k: v for k, v in datos.items() if k not in conocidas},
    )


def grid_to_dict(rep: GridRep) -> dict[str, Any]:
    """Forma JSON de una retícula."""
    return {
        "base": rep.base,
        "delta": [format_rational(c) for c in rep.origin],
        "digits": {
            "preperiod": [list(v) for v in rep.digits.preperiod],
            "period": [list(v) for v in rep.digits.period],
        },
        "label": rep.label,
    }


def family_to_dict(familia: Familia) -> dict[str, Any]:
    """Forma JSON de una familia, con orden de claves estable."""
    datos: dict[str, Any] = {}
    if familia.name:
        datos["name"] = familia.name
    if familia.description:
        datos["description"] = familia.description
    if familia.expected is not None:
        datos["expected"] = familia.expected
    datos["dimension"] = familia.dimension
    if familia.projection:
        datos["projection"] = True
    datos.update(familia.extra)
    datos["grids"] = [grid_to_dict(g) for g in familia.grids]
    return datos


def listar_catalogo() -> list[str]:
    """Nombres de las familias incluidas en el catálogo."""
    carpeta = resources.files("dyadic_atlas") / "catalog"
    return sorted(
        entrada.name.removesuffix(".json")
        for entrada in carpeta.iterdir()
        if entrada.name.endswith(".json")
    )


def load_family(origen: str | Path) -> Familia:
    """Carga una familia desde un archivo o desde el catálogo ("catalog:NOMBRE").

    Args:
        origen: Ruta al archivo JSON o referencia al catálogo

    Returns:
        Familia validada

    Raises:
        FamiliaInvalidaError: Si el JSON es inválido o no cumple el esquema
        ValueError: Si el archivo o la entrada de catálogo no existe
    """
    texto_origen = str(origen)
    if texto_origen.startswith(PREFIJO_CATALOGO):
        nombre = texto_origen.removeprefix(PREFIJO_CATALOGO)
        if nombre not in listar_catalogo():
            raise ValueError(f"La familia '{nombre}' no existe en el catálogo")
        recurso = resources.files("dyadic_atlas") / "catalog" / f"{nombre}.json"
        contenido = recurso.read_text(encoding="utf-8")
    else:
        ruta = Path(origen)
        if not ruta.is_file():
            raise ValueError(f"El archivo de familia {ruta} no existe")
        contenido = ruta.read_text(encoding="utf-8")

    try:
        datos = json.loads(contenido)
    except json.JSONDecodeError as e:
        raise FamiliaInvalidaError("$", f"JSON inválido: {e}") from e

    familia = parse_family(datos)
    logger.debug(f"Familia '{familia.name}' cargada: {len(familia.grids)} retículas en R^{familia.dimension}")
    return familia


def write_family(familia: Familia, ruta: Path) -> None:
    """Escribe una familia como JSON determinista."""
    ruta.write_text(
        json.dumps(family_to_dict(familia), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
