"""Tests para criteria/bases.py: compatibilidad de bases y testigos de incompatibilidad."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st


class TestBaseCompatible:
    """Tests para base_compatible."""

    @pytest.mark.parametrize(
        ("bases", "esperado"),
        [
            ([2, 4, 8], (2, [1, 2, 3])),
            ([4, 8], (2, [2, 3])),
            ([9, 27], (3, [2, 3])),
            ([6, 36], (6, [1, 2])),
            ([5], (5, [1])),
        ],
    )
    def test_debe_encontrar_la_raiz_comun(
        self, bases: list[int], esperado: tuple[int, list[int]]
    ) -> None:
        from dyadic_atlas.criteria.bases import base_compatible

        assert base_compatible(bases) == esperado

    @pytest.mark.parametrize("bases", [[2, 3], [6, 10], [12, 18], [4, 6], [2, 4, 12]])
    def test_debe_rechazar_bases_sin_raiz_comun(self, bases: list[int]) -> None:
        from dyadic_atlas.criteria.bases import base_compatible

        assert base_compatible(bases) is None

    def test_debe_validar_la_entrada(self) -> None:
        from dyadic_atlas.criteria.bases import base_compatible

        with pytest.raises(ValueError, match="al menos una base"):
            base_compatible([])
        with pytest.raises(ValueError, match="≥ 2"):
            base_compatible([2, 1])


class TestPsi:
    """Tests para las funciones de crecimiento de exponentes."""

    def test_psi_1_debe_coincidir_con_phi(self) -> None:
        """Con n₁ = 2, n₂ = 3 y p = 2: Ψ₁(m) = φ(3;2)(m)."""
        from dyadic_atlas.criteria.bases import psi_1

        assert [psi_1(2, 3, 2, m) for m in (1, 2, 3)] == [1, 3, 4]

    def test_psi_2_debe_ser_el_opuesto(self) -> None:
        from dyadic_atlas.criteria.bases import psi_1, psi_2

        assert all(psi_2(6, 10, 5, m) == -psi_1(6, 10, 5, m) for m in range(10))

    def test_psi_debe_crecer_sin_cota_para_el_primo_del_caso(self) -> None:
        """Para (6, 10) el primo 3 hace crecer Ψ₁."""
        from dyadic_atlas.criteria.bases import psi_1

        valores = [psi_1(6, 10, 3, m) for m in (10, 20, 40)]

        assert valores[0] < valores[1] < valores[2]


class TestIncompatibilityWitness:
    """Tests para incompatibility_witness."""

    def test_debe_encontrar_el_testigo_de_2_y_3(self) -> None:
        """δ = 1/5, C = 1/10: en m = 2, 9·dist(1/5, Z/72) = 1/20."""
        # Arrange
        from dyadic_atlas.criteria.bases import IncompatibilityWitness, incompatibility_witness

        # Act
        resultado = incompatibility_witness(2, 3, Fraction(1, 5), Fraction(1, 10), 20)

        # Assert
        assert isinstance(resultado, IncompatibilityWitness)
        assert resultado.m == 2
        assert resultado.a == 3
        assert resultado.margin == Fraction(1, 20)
        assert resultado.case == "I"
        assert resultado.prime == 2
        assert resultado.psi == 3

    def test_el_testigo_debe_satisfacer_la_desigualdad(self) -> None:
        from dyadic_atlas.criteria.bases import IncompatibilityWitness, incompatibility_witness

        delta, constante = Fraction(3, 7), Fraction(1, 1000)

        resultado = incompatibility_witness(6, 10, delta, constante, 64)

        assert isinstance(resultado, IncompatibilityWitness)
        resto = delta - Fraction(resultado.k1, 6**resultado.a) - Fraction(resultado.k2, 10**resultado.m)
        assert 10**resultado.m * abs(resto) == resultado.margin
        assert resultado.margin < constante

    def test_caso_II_cuando_psi_2_crece_mas_rapido(self) -> None:
        """(3, 2): Ψ₂ del primo 2 crece más que Ψ₁ del primo 3, se usa C/n₁.

        En m = 3, φ = 1 y 3·dist(1/5, Z/24) = 1/40 < 1/30.
        """
        from dyadic_atlas.criteria.bases import IncompatibilityWitness, incompatibility_witness

        resultado = incompatibility_witness(3, 2, Fraction(1, 5), Fraction(1, 10), 64)

        assert isinstance(resultado, IncompatibilityWitness)
        assert resultado.case == "II"
        assert resultado.prime == 2
        assert (resultado.m, resultado.a) == (3, 1)
        assert resultado.psi == 3

    def test_bases_compatibles_deben_agotar_la_busqueda(self) -> None:
        """1/3 es lejano para (2, 4): n₂^m·dist = 1/3 en toda generación."""
        from dyadic_atlas.criteria.bases import BusquedaAgotada, incompatibility_witness

        resultado = incompatibility_witness(2, 4, Fraction(1, 3), Fraction(1, 10), 15)

        assert isinstance(resultado, BusquedaAgotada)
        assert resultado.m_max == 15
        assert resultado.mejor == Fraction(1, 3)
        assert resultado.to_dict()["found"] is False

    @settings(max_examples=40, deadline=None)
    @given(
        st.sampled_from([(2, 3), (3, 2), (6, 10), (10, 6), (12, 18), (5, 7)]),
        st.fractions(min_value=0, max_value=1, max_denominator=50),
    )
    def test_bases_incompatibles_siempre_dan_testigo(
        self, par: tuple[int, int], delta: Fraction
    ) -> None:
        from dyadic_atlas.criteria.bases import IncompatibilityWitness, incompatibility_witness

        resultado = incompatibility_witness(*par, delta, Fraction(1, 100), 200)

        assert isinstance(resultado, IncompatibilityWitness)

    def test_debe_validar_los_parametros(self) -> None:
        from dyadic_atlas.criteria.bases import incompatibility_witness

        with pytest.raises(ValueError, match="C debe ser > 0"):
            incompatibility_witness(2, 3, Fraction(1, 5), Fraction(0), 10)
        with pytest.raises(ValueError, match="m_max"):
            incompatibility_witness(2, 3, Fraction(1, 5), Fraction(1), -1)
