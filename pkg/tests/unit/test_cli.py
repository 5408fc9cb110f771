"""
Tests para la CLI de Dyadic Atlas.

Usa CliRunner de Click; todos los tests corren en un directorio limpio
para que no se lea ningún .dyadic-atlas.yaml ajeno.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

pytestmark = pytest.mark.usefixtures("directorio_limpio")


@pytest.fixture
def runner() -> CliRunner:
    """CliRunner de Click (stderr se mezcla en output)."""
    return CliRunner()


class TestCLIBasico:
    """Tests básicos de la CLI."""

    def test_cli_debe_mostrar_version(self, runner: CliRunner) -> None:
        from dyadic_atlas import __version__
        from dyadic_atlas.cli import main

        result = runner.invoke(main, ["--version"])

        assert result.exit_code == 0
        assert __version__ in result.output

    def test_cli_debe_mostrar_ayuda(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(main, ["--help"])

        assert result.exit_code == 0
        for comando in ("certify", "cover", "estimate", "witness", "construct", "project"):
            assert comando in result.output

    def test_catalog_debe_listar_familias(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(main, ["catalog"])

        assert result.exit_code == 0
        assert "tercio" in result.output
        assert "NOT_ADJACENT" in result.output


class TestCertify:
    """Tests del comando certify."""

    def test_tercio_debe_salir_con_0(self, runner: CliRunner) -> None:
        # Arrange
        from dyadic_atlas.cli import main

        # Act
        result = runner.invoke(main, ["certify", "--family", "catalog:tercio"])

        # Assert
        assert result.exit_code == 0
        assert "ADJACENT" in result.output

    def test_salida_json(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main, ["certify", "--family", "catalog:tercio", "--output", "json"]
        )

        assert result.exit_code == 0
        datos = json.loads(result.output)
        assert datos["C2"] == "85/256"
        assert datos["effective_J"] == "8"

    def test_duplicado_debe_salir_con_1(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(main, ["certify", "--family", "catalog:duplicado"])

        assert result.exit_code == 1
        assert "NOT_ADJACENT" in result.output

    def test_no_adyacente_incluye_cubo_adversario(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main, ["certify", "--family", "catalog:gran_escala", "--output", "json"]
        )

        assert result.exit_code == 1
        datos = json.loads(result.output)
        assert datos["adversarial"]["spec"]["scale_exponent"] == "-9"
        assert datos["adversarial"]["cube"].startswith("(")

    def test_piso_adversario_debe_pasar_al_cubo(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main,
            [
                "certify",
                "--family",
                "catalog:gran_escala",
                "--adversarial-floor",
                "10",
                "--output",
                "json",
            ],
        )

        assert result.exit_code == 1
        spec = json.loads(result.output)["adversarial"]["spec"]
        assert spec["scale_exponent"] == "-10"
        assert spec["large_floor"] == "10"

    def test_piso_adversario_invalido_debe_salir_con_3(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main, ["certify", "--family", "catalog:gran_escala", "--adversarial-floor", "0"]
        )

        assert result.exit_code == 3
        assert "adversarial_floor" in result.output

    def test_archivo_inexistente_debe_salir_con_3(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(main, ["certify", "--family", "no_existe.json"])

        assert result.exit_code == 3
        assert "Error" in result.output

    def test_sin_familia_debe_salir_con_3(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(main, ["certify"])

        assert result.exit_code == 3
        assert "--family" in result.output

    def test_debe_leer_el_archivo_de_configuracion(
        self, runner: CliRunner, directorio_limpio: Path
    ) -> None:
        """Con J = 1 la cota de pares lejanos vale desde J efectivo 2."""
        from dyadic_atlas.cli import main

        (directorio_limpio / ".dyadic-atlas.yaml").write_text(
            "J: 1\ndepth_large: 20\n", encoding="utf-8"
        )

        result = runner.invoke(
            main, ["certify", "--family", "catalog:tercio", "--output", "json"]
        )

        assert result.exit_code == 0
        assert json.loads(result.output)["effective_J"] == "2"

    def test_opciones_pisan_el_archivo_de_configuracion(
        self, runner: CliRunner, directorio_limpio: Path
    ) -> None:
        from dyadic_atlas.cli import main

        (directorio_limpio / ".dyadic-atlas.yaml").write_text(
            "J: 1\ndepth_large: 20\n", encoding="utf-8"
        )

        result = runner.invoke(
            main, ["certify", "--family", "catalog:tercio", "--J", "8", "--output", "json"]
        )

        assert result.exit_code == 0
        assert json.loads(result.output)["effective_J"] == "8"

    def test_configuracion_invalida_debe_salir_con_3(
        self, runner: CliRunner, directorio_limpio: Path
    ) -> None:
        from dyadic_atlas.cli import main

        (directorio_limpio / ".dyadic-atlas.yaml").write_text("J: 0\n", encoding="utf-8")

        result = runner.invoke(main, ["certify", "--family", "catalog:tercio"])

        assert result.exit_code == 3

    def test_proyecciones_del_plano_no_adyacente(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main, ["certify", "--family", "catalog:plano_no_adyacente", "--projections"]
        )

        assert result.exit_code == 1
        assert "1-3/1" in result.output

    def test_debe_escribir_el_reporte_en_archivo(
        self, runner: CliRunner, directorio_limpio: Path
    ) -> None:
        from dyadic_atlas.cli import main

        destino = directorio_limpio / "reporte.json"

        result = runner.invoke(
            main,
            ["certify", "--family", "catalog:tercio", "--output", "json", "--out", str(destino)],
        )

        assert result.exit_code == 0
        assert "Reporte escrito" in result.output
        assert json.loads(destino.read_text(encoding="utf-8"))["overall"] == "ADJACENT"


class TestCover:
    """Tests del comando cover."""

    def test_debe_encontrar_el_cubo(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main,
            [
                "cover",
                "--family",
                "catalog:tercio",
                "--corner",
                "2/5",
                "--side",
                "1/5",
                "--output",
                "json",
            ],
        )

        assert result.exit_code == 0
        datos = json.loads(result.output)
        assert datos["covered"] is True
        assert datos["ratio"] == "5/2"

    def test_sin_recubrimiento_debe_salir_con_1(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main,
            [
                "cover",
                "--family",
                "catalog:duplicado",
                "--corner",
                "2/5",
                "--side",
                "1/5",
                "--ratio-cap",
                "4",
                "--output",
                "json",
            ],
        )

        assert result.exit_code == 1
        assert json.loads(result.output)["covered"] is False

    def test_esquina_de_dimension_incorrecta(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main, ["cover", "--family", "catalog:tercio", "--corner", "0,0", "--side", "1"]
        )

        assert result.exit_code == 3


class TestEstimate:
    """Tests del comando estimate."""

    def test_tabla_de_escalas(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main,
            ["estimate", "--family", "catalog:tercio", "--scales=-2..2", "--samples", "10"],
        )

        assert result.exit_code == 0
        assert "Cociente máximo" in result.output

    def test_salida_csv(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main,
            [
                "estimate",
                "--family",
                "catalog:tercio",
                "--scales=0..1",
                "--samples",
                "5",
                "--output",
                "csv",
            ],
        )

        assert result.exit_code == 0
        assert result.output.splitlines()[0].startswith("scale,samples,max_ratio_num")
        assert len(result.output.splitlines()) == 3

    def test_rango_invalido_debe_salir_con_3(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main, ["estimate", "--family", "catalog:tercio", "--scales", "3..1"]
        )

        assert result.exit_code == 3


class TestWitness:
    """Tests del comando witness."""

    def test_debe_encontrar_el_testigo(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main,
            ["witness", "--n1", "2", "--n2", "3", "--delta", "1/5", "--C", "1/10", "--output", "json"],
        )

        assert result.exit_code == 0
        datos = json.loads(result.output)
        assert datos["found"] is True
        assert datos["m"] == "2"

    def test_bases_compatibles_deben_salir_con_1(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main,
            ["witness", "--n1", "2", "--n2", "4", "--delta", "1/3", "--C", "1/10", "--m-max", "10"],
        )

        assert result.exit_code == 1

    def test_faltan_parametros(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(main, ["witness", "--n1", "2"])

        assert result.exit_code == 3
        assert "--n2" in result.output


class TestConstructYProject:
    """Tests de los comandos que derivan familias."""

    def test_construct_drop_debe_cambiar_la_base(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(
            main, ["construct", "--family", "catalog:tercio", "--grid", "2", "--drop", "4"]
        )

        assert result.exit_code == 0
        datos = json.loads(result.output)
        assert datos["grids"][1]["base"] == 16
        assert datos["grids"][1]["digits"]["period"] == [[10]]
        assert "expected" not in datos

    def test_construct_debe_escribir_archivo(
        self, runner: CliRunner, directorio_limpio: Path
    ) -> None:
        from dyadic_atlas.cli import main

        destino = directorio_limpio / "derivada.json"

        result = runner.invoke(
            main,
            ["construct", "--family", "catalog:tercio", "--grid", "2", "--drop", "4", "--out", str(destino)],
        )

        assert result.exit_code == 0
        assert destino.exists()
        certificado = runner.invoke(main, ["certify", "--family", str(destino)])
        assert certificado.exit_code == 0

    def test_construct_sin_operacion_debe_salir_con_3(self, runner: CliRunner) -> None:
        from dyadic_atlas.cli import main

        result = runner.invoke(main, ["construct", "--family", "catalog:tercio"])

        assert result.exit_code == 3

    def test_familia_proyectada_requiere_par(
        self, runner: CliRunner, directorio_limpio: Path
    ) -> None:
        from dyadic_atlas.cli import main

        destino = directorio_limpio / "proyectada.json"
        proyectar = runner.invoke(
            main,
            [
                "project",
                "--family",
                "catalog:plano_tercios",
                "--coordinate",
                "1",
                "--out",
                str(destino),
            ],
        )
        assert proyectar.exit_code == 0

        sin_par = runner.invoke(main, ["certify", "--family", str(destino)])
        con_par = runner.invoke(main, ["certify", "--family", str(destino), "--pair", "1,2"])

        assert sin_par.exit_code == 3
        assert con_par.exit_code == 0
