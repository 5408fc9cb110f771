"""Gestión centralizada de configuración de Dyadic Atlas.

Este módulo proporciona dataclasses para configuración tipada y funciones
para carga/guardado desde archivos YAML (.dyadic-atlas.yaml).
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from dyadic_atlas.core.exact import format_rational, parse_rational

logger = logging.getLogger(__name__)

NOMBRE_ARCHIVO_CONFIG = ".dyadic-atlas.yaml"
VARIABLE_HILOS = "DYADIC_ATLAS_THREADS"

# Campos enteros que deben ser ≥ 1
CAMPOS_POSITIVOS = ("depth_small", "J", "depth_large", "samples", "adversarial_floor")


def hilos_disponibles() -> int:
    """Número de hilos para barridos paralelos, acotado por DYADIC_ATLAS_THREADS.

    Returns:
        Entero ≥ 1

    Raises:
        ValueError: Si la variable de entorno no es un entero positivo
    """
    por_defecto = os.cpu_count() or 1
    valor = os.environ.get(VARIABLE_HILOS)
    if valor is None or not valor.strip():
        return por_defecto
    try:
        limite = int(valor)
    except ValueError as e:
        raise ValueError(f"{VARIABLE_HILOS} debe ser un entero, recibido: {valor!r}") from e
    if limite < 1:
        raise ValueError(f"{VARIABLE_HILOS} debe ser ≥ 1, recibido: {limite}")
    return min(por_defecto, limite)


@dataclass
class AtlasConfig:
    """Parámetros por defecto de certificación y estimación.

    Attributes:
        depth_small: Generaciones verificadas en la condición de número lejano
        J: Primera generación grande de la condición de par lejano
        depth_large: Última generación grande verificada
        umbral: Umbral bajo el cual un valor aproximado cuenta como testigo
        ratio_cap: Cota de cociente para búsquedas de recubrimiento
        scales: Rango de escalas (inclusive) para estimate
        samples: Cubos aleatorios por escala
        seed: Semilla de muestreo
        adversarial_floor: J mínimo para construcciones adversarias a gran escala
    """

    depth_small: int = 64
    J: int = 8
    depth_large: int = 64
    umbral: Fraction = field(default_factory=lambda: Fraction(1, 65536))
    ratio_cap: Fraction = field(default_factory=lambda: Fraction(1000))
    scales: tuple[int, int] = (-20, 20)
    samples: int = 200
    seed: int = 0
    adversarial_floor: int = 8

    def __post_init__(self) -> None:
        for nombre in CAMPOS_POSITIVOS:
            valor = getattr(self, nombre)
            if isinstance(valor, bool) or not isinstance(valor, int) or valor < 1:
                raise ValueError(f"{nombre} debe ser un entero ≥ 1, recibido: {valor!r}")
        if self.depth_large < self.J:
            raise ValueError(
                f"depth_large ({self.depth_large}) debe ser ≥ J ({self.J})"
            )
        if self.umbral <= 0:
            raise ValueError(f"umbral debe ser > 0, recibido: {format_rational(self.umbral)}")
        if self.ratio_cap < 1:
            raise ValueError(
                f"ratio_cap debe ser ≥ 1, recibido: {format_rational(self.ratio_cap)}"
            )
        if self.scales[0] > self.scales[1]:
            raise ValueError(f"Rango de escalas vacío: {self.scales[0]}..{self.scales[1]}")

    @classmethod
    def from_yaml(cls, path: Path) -> AtlasConfig:
        """Carga configuración desde archivo YAML con validación.

        Args:
            path: Ruta al archivo .dyadic-atlas.yaml

        Returns:
            Configuración cargada y validada

        Raises:
            ValueError: Si el archivo YAML está corrupto o es inválido
        """
        if not path.exists():
            logger.debug(f"Archivo de configuración no existe: {path}, usando defaults")
            return cls.default()

        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ValueError(f"Error parseando YAML: archivo corrupto o inválido - {e}") from e

        if not data:
            logger.debug("Archivo de configuración vacío, usando defaults")
            return cls.default()
        if not isinstance(data, dict):
            raise ValueError("Error cargando configuración: se esperaba un mapa YAML")

        desconocidas = set(data) - set(cls.__dataclass_fields__)
        for clave in sorted(desconocidas):
            logger.warning(f"Clave de configuración desconocida '{clave}', ignorando")

        try:
            valores: dict[str, Any] = {
                k: v for k, v in data.items() if k in cls.__dataclass_fields__
            }
            for clave in ("umbral", "ratio_cap"):
                if clave in valores:
                    valores[clave] = parse_rational(str(valores[clave]))
            if "scales" in valores:
                valores["scales"] = parse_scales(str(valores["scales"]))
            return cls(**valores)
        except (TypeError, ValueError) as e:
            raise ValueError(f"Error cargando configuración: {e}") from e

    @classmethod
    def default(cls) -> AtlasConfig:
        """Genera configuración por defecto."""
        return cls()

    def to_yaml(self, path: Path) -> None:
        """Guarda configuración a archivo YAML.

        Args:
            path: Ruta donde guardar el archivo
        """
        data: dict[str, Any] = {
            "depth_small": self.depth_small,
            "J": self.J,
            "depth_large": self.depth_large,
            "umbral": format_rational(self.umbral),
            "ratio_cap": format_rational(self.ratio_cap),
            "scales": f"{self.scales[0]}..{self.scales[1]}",
            "samples": self.samples,
            "seed": self.seed,
            "adversarial_floor": self.adversarial_floor,
        }
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(
                data,
                f,
                default_flow_style=False,
                sort_keys=False,
                allow_unicode=True,
            )


def parse_scales(texto: str) -> tuple[int, int]:
    """Parsea un rango "LO..HI" de escalas (inclusive).

    Example:
        >>> parse_scales("-20..20")
        (-20, 20)
    """
    partes = texto.strip().split("..")
    if len(partes) != 2:
        raise ValueError(f"Rango de escalas mal formado: {texto!r} (se espera LO..HI)")
    try:
        bajo, alto = int(partes[0]), int(partes[1])
    except ValueError as e:
        raise ValueError(f"Rango de escalas mal formado: {texto!r} (se espera LO..HI)") from e
    if bajo > alto:
        raise ValueError(f"Rango de escalas vacío: {texto!r}")
    return bajo, alto


def cargar_configuracion(directorio: Path) -> AtlasConfig:
    """Carga configuración desde .dyadic-atlas.yaml o retorna defaults.

    Args:
        directorio: Directorio donde buscar el archivo

    Returns:
        Configuración cargada y validada

    Raises:
        ValueError: Si el archivo de configuración tiene formato inválido
    """
    return AtlasConfig.from_yaml(directorio / NOMBRE_ARCHIVO_CONFIG)


class Command(Enum):
    """Comandos de la CLI."""

    CERTIFY = "certify"
    COVER = "cover"
    ESTIMATE = "estimate"
    WITNESS = "witness"
    CONSTRUCT = "construct"
    PROJECT = "project"


class OutputFormat(Enum):
    """Formatos de salida de los reportes."""

    CSV = "csv"
    JSON = "json"
    TABLE = "table"


@dataclass
class RunConfig:
    """Configuración completa de una ejecución de la CLI.

    Attributes:
        command: Comando a ejecutar
        family_path: Archivo de familia o "catalog:NOMBRE"
        atlas: Parámetros numéricos (profundidades, cotas, muestreo)
        output: Formato de salida
        out_path: Archivo de salida (None = stdout)
        options: Parámetros específicos del comando (cubo, desplazamiento, ...)
    """

    command: Command
    family_path: str | None = None
    atlas: AtlasConfig = field(default_factory=AtlasConfig)
    output: OutputFormat = OutputFormat.TABLE
    out_path: Path | None = None
    options: dict[str, Any] = field(default_factory=dict)

    @property
    def depth_small(self) -> int:
        return self.atlas.depth_small

    @property
    def J(self) -> int:  # noqa: N802
        return self.atlas.J

    @property
    def depth_large(self) -> int:
        return self.atlas.depth_large

    @property
    def ratio_cap(self) -> Fraction:
        return self.atlas.ratio_cap

    @property
    def scales(self) -> tuple[int, int]:
        return self.atlas.scales

    @property
    def samples(self) -> int:
        return self.atlas.samples

    @property
    def seed(self) -> int:
        return self.atlas.seed
