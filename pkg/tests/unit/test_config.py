"""Tests para el módulo core/config.py de Dyadic Atlas.

Cubre la configuración por defecto, la carga desde .dyadic-atlas.yaml y el
límite de hilos por variable de entorno.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
import yaml


class TestAtlasConfigDefault:
    """Tests para la configuración por defecto."""

    def test_debe_generar_configuracion_por_defecto(self) -> None:
        """Los valores por defecto coinciden con la documentación."""
        # Arrange & Act
        from dyadic_atlas.core.config import AtlasConfig

        config = AtlasConfig.default()

        # Assert
        assert config.depth_small == 64
        assert config.J == 8
        assert config.depth_large == 64
        assert config.umbral == Fraction(1, 65536)
        assert config.ratio_cap == Fraction(1000)
        assert config.scales == (-20, 20)
        assert config.samples == 200
        assert config.seed == 0

    @pytest.mark.parametrize(
        ("campo", "valor", "mensaje"),
        [
            ("J", 0, "J debe ser un entero ≥ 1"),
            ("samples", -3, "samples debe ser un entero ≥ 1"),
            ("ratio_cap", Fraction(1, 2), "ratio_cap debe ser ≥ 1"),
            ("umbral", Fraction(0), "umbral debe ser > 0"),
            ("scales", (3, 1), "Rango de escalas vacío"),
        ],
    )
    def test_debe_validar_los_campos(self, campo: str, valor: object, mensaje: str) -> None:
        from dyadic_atlas.core.config import AtlasConfig

        with pytest.raises(ValueError, match=mensaje):
            AtlasConfig(**{campo: valor})  # type: ignore[arg-type]

    def test_depth_large_no_puede_ser_menor_que_J(self) -> None:
        from dyadic_atlas.core.config import AtlasConfig

        with pytest.raises(ValueError, match="debe ser ≥ J"):
            AtlasConfig(J=10, depth_large=5)


class TestAtlasConfigYaml:
    """Tests para carga y guardado en YAML."""

    def test_debe_usar_defaults_si_no_existe_el_archivo(self, tmp_path: Path) -> None:
        from dyadic_atlas.core.config import AtlasConfig, cargar_configuracion

        assert cargar_configuracion(tmp_path) == AtlasConfig.default()

    def test_debe_leer_valores_racionales_y_rangos(self, tmp_path: Path) -> None:
        # Arrange
        from dyadic_atlas.core.config import NOMBRE_ARCHIVO_CONFIG, cargar_configuracion

        (tmp_path / NOMBRE_ARCHIVO_CONFIG).write_text(
            "J: 4\ndepth_large: 32\nratio_cap: 50/3\nscales: -3..5\numbral: 1/1024\n",
            encoding="utf-8",
        )

        # Act
        config = cargar_configuracion(tmp_path)

        # Assert
        assert config.J == 4
        assert config.depth_large == 32
        assert config.ratio_cap == Fraction(50, 3)
        assert config.scales == (-3, 5)
        assert config.umbral == Fraction(1, 1024)

    def test_debe_ignorar_claves_desconocidas(
        self, tmp_path: Path, caplog: pytest.LogCaptureFixture
    ) -> None:
        from dyadic_atlas.core.config import NOMBRE_ARCHIVO_CONFIG, cargar_configuracion

        (tmp_path / NOMBRE_ARCHIVO_CONFIG).write_text("seed: 7\nhooks: []\n", encoding="utf-8")

        config = cargar_configuracion(tmp_path)

        assert config.seed == 7
        assert "hooks" in caplog.text

    def test_debe_fallar_con_yaml_corrupto(self, tmp_path: Path) -> None:
        from dyadic_atlas.core.config import NOMBRE_ARCHIVO_CONFIG, cargar_configuracion

        (tmp_path / NOMBRE_ARCHIVO_CONFIG).write_text("J: [1, 2\n", encoding="utf-8")

        with pytest.raises(ValueError, match="Error parseando YAML"):
            cargar_configuracion(tmp_path)

    def test_debe_fallar_con_valores_invalidos(self, tmp_path: Path) -> None:
        from dyadic_atlas.core.config import NOMBRE_ARCHIVO_CONFIG, cargar_configuracion

        (tmp_path / NOMBRE_ARCHIVO_CONFIG).write_text("samples: 0\n", encoding="utf-8")

        with pytest.raises(ValueError, match="Error cargando configuración"):
            cargar_configuracion(tmp_path)

    def test_to_yaml_debe_poder_releerse(self, tmp_path: Path) -> None:
        from dyadic_atlas.core.config import AtlasConfig

        original = AtlasConfig(J=3, depth_large=40, ratio_cap=Fraction(7, 2), scales=(-1, 1))
        ruta = tmp_path / "config.yaml"

        original.to_yaml(ruta)

        assert AtlasConfig.from_yaml(ruta) == original
        datos = yaml.safe_load(ruta.read_text(encoding="utf-8"))
        assert datos["ratio_cap"] == "7/2"


class TestParseScales:
    @pytest.mark.parametrize("texto", ["1-2", "a..b", "3..1", ""])
    def test_debe_rechazar_rangos_invalidos(self, texto: str) -> None:
        from dyadic_atlas.core.config import parse_scales

        with pytest.raises(ValueError, match="escalas"):
            parse_scales(texto)

    def test_debe_aceptar_negativos(self) -> None:
        from dyadic_atlas.core.config import parse_scales

        assert parse_scales("-20..-2") == (-20, -2)


class TestHilos:
    """Tests para hilos_disponibles."""

    def test_debe_respetar_el_limite_de_la_variable(self, monkeypatch: pytest.MonkeyPatch) -> None:
        from dyadic_atlas.core.config import VARIABLE_HILOS, hilos_disponibles

        monkeypatch.setenv(VARIABLE_HILOS, "1")

        assert hilos_disponibles() == 1

    @pytest.mark.parametrize("valor", ["cero", "0", "-2"])
    def test_debe_rechazar_valores_invalidos(
        self, monkeypatch: pytest.MonkeyPatch, valor: str
    ) -> None:
        from dyadic_atlas.core.config import VARIABLE_HILOS, hilos_disponibles

        monkeypatch.setenv(VARIABLE_HILOS, valor)

        with pytest.raises(ValueError, match=VARIABLE_HILOS):
            hilos_disponibles()

    def test_sin_variable_debe_usar_los_nucleos(self, monkeypatch: pytest.MonkeyPatch) -> None:
        from dyadic_atlas.core.config import VARIABLE_HILOS, hilos_disponibles

        monkeypatch.delenv(VARIABLE_HILOS, raising=False)

        assert hilos_disponibles() >= 1
