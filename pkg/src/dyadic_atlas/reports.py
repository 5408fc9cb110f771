"""Renderizado de reportes en JSON, CSV y tablas para terminal.

Los racionales siempre se muestran en forma exacta "p/q"; las tablas
añaden una aproximación decimal entre paréntesis.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Protocol

import click

from dyadic_atlas.core.config import OutputFormat
from dyadic_atlas.core.exact import format_rational
from dyadic_atlas.covering.estimate import EstimateReport
from dyadic_atlas.criteria.adjacency import AdjacencyCertificate, Overall, ProjectionCertificate
from dyadic_atlas.criteria.common import Verdict, VerdictKind

COLUMNAS_CSV = (
    "scale",
    "samples",
    "max_ratio_num",
    "max_ratio_den",
    "worst_cube_corner",
    "worst_cube_side",
    "covered_by_grid",
)

COLORES = {
    Overall.ADJACENT: "green",
    Overall.NOT_ADJACENT: "red",
    Overall.UNDECIDED: "yellow",
}


class Serializable(Protocol):
    def to_dict(self) -> dict[str, Any]: ...


def racional_tabla(x: Fraction) -> str:
    """"p/q (≈decimal)" para tablas."""
    exacto = format_rational(x)
    if x.denominator == 1:
        return exacto
    return f"{exacto} (≈{float(x):.6g})"


def a_json(objeto: Serializable | dict[str, Any]) -> str:
    """JSON determinista (orden de claves de inserción, indentado)."""
    datos = objeto if isinstance(objeto, dict) else objeto.to_dict()
    return json.dumps(datos, indent=2, ensure_ascii=False) + "\n"


def estimate_csv(reporte: EstimateReport) -> str:
    """CSV con una fila por escala."""
    salida = io.StringIO()
    escritor = csv.writer(salida, lineterminator="\n")
    escritor.writerow(COLUMNAS_CSV)
    for fila in reporte.rows:
        if fila.max_ratio is None or fila.worst_cube is None:
            escritor.writerow([fila.scale, fila.samples, "", "", "", "", ""])
            continue
        escritor.writerow(
            [
                fila.scale,
                fila.samples,
                fila.max_ratio.numerator,
                fila.max_ratio.denominator,
                " ".join(format_rational(c) for c in fila.worst_cube.corner),
                format_rational(fila.worst_cube.side),
                fila.covered_by_grid,
            ]
        )
    return salida.getvalue()


def _marca(veredicto: Verdict) -> str:
    if veredicto.kind is VerdictKind.FAR:
        return click.style("✓", fg="green")
    if veredicto.kind is VerdictKind.NOT_FAR:
        return click.style("✗", fg="red")
    return click.style("?", fg="yellow")


def _linea_veredicto(clave: str, veredicto: Verdict) -> str:
    linea = f"  {_marca(veredicto)} {clave:<10} {veredicto.kind.value:<10}"
    if veredicto.kind is VerdictKind.NOT_FAR and veredicto.witness is not None:
        w = veredicto.witness
        return (
            f"{linea} testigo: n_ℓ={w.base} escala={w.scale} k=({w.k1}, {w.k2}) "
            f"margen={racional_tabla(w.margin)}"
        )
    linea = f"{linea} cota={racional_tabla(veredicto.bound)}"
    if veredicto.exact:
        linea += " (exacta)"
    if veredicto.effective_J is not None:
        linea += f" J={veredicto.effective_J}"
    return linea


def certificado_tabla(certificado: AdjacencyCertificate) -> str:
    lineas = [
        f"Familia: {', '.join(certificado.labels)}  (R^{certificado.dimension}, "
        f"𝒩 = {{{', '.join(str(n) for n in certificado.base_set)}}})",
        "",
        "Condición 1 (números lejanos):",
    ]
    lineas += [_linea_veredicto(k, v) for k, v in certificado.condition1.items()]
    lineas += ["", f"Condición 2 (pares lejanos, J={certificado.J}):"]
    lineas += [_linea_veredicto(k, v) for k, v in certificado.condition2.items()]
    lineas.append("")
    estado = click.style(certificado.overall.value, fg=COLORES[certificado.overall], bold=True)
    lineas.append(f"Resultado: {estado}")
    if certificado.overall is Overall.ADJACENT:
        lineas.append(f"Cota de comparabilidad: {racional_tabla(certificado.cota_comparabilidad())}")
    return "\n".join(lineas) + "\n"


def proyecciones_tabla(certificado: ProjectionCertificate) -> str:
    lineas = ["Pares proyectados:"]
    for clave, c in certificado.certificates.items():
        marca = click.style("✓", fg="green") if c.overall is Overall.ADJACENT else click.style(
            "✗", fg="red"
        )
        lineas.append(f"  {marca} {clave:<10} {c.overall.value}")
    estado = click.style(certificado.overall.value, fg=COLORES[certificado.overall], bold=True)
    lineas.append(f"Resultado: {estado}")
    return "\n".join(lineas) + "\n"


def estimate_tabla(reporte: EstimateReport) -> str:
    lineas = [f"{'escala':>7}  {'muestras':>8}  {'cociente máx.':<28} {'fallos':>6}"]
    for fila in reporte.rows:
        ratio = "-" if fila.max_ratio is None else racional_tabla(fila.max_ratio)
        lineas.append(f"{fila.scale:>7}  {fila.samples:>8}  {ratio:<28} {len(fila.failures):>6}")
    maximo = reporte.max_ratio
    lineas.append("")
    lineas.append(f"Cociente máximo: {'-' if maximo is None else racional_tabla(maximo)}")
    if reporte.total_failures:
        lineas.append(
            click.style(
                f"✗ {reporte.total_failures} cubos sin recubrimiento con cociente ≤ "
                f"{format_rational(reporte.ratio_cap)}",
                fg="red",
            )
        )
    else:
        lineas.append(click.style("✓ Todos los cubos recubiertos", fg="green"))
    return "\n".join(lineas) + "\n"


def tabla_generica(datos: dict[str, Any]) -> str:
    """Tabla clave: valor para resultados sin formato propio."""
    ancho = max((len(k) for k in datos), default=0)
    lineas = []
    for clave, valor in datos.items():
        texto = json.dumps(valor, ensure_ascii=False) if isinstance(valor, dict | list) else valor
        lineas.append(f"{clave:<{ancho}}  {texto}")
    return "\n".join(lineas) + "\n"


def render(objeto: Any, formato: OutputFormat) -> str:
    """Renderiza cualquier resultado de la CLI en el formato pedido.

    Raises:
        ValueError: Si se pide CSV para algo que no es un reporte de estimate
    """
    if formato is OutputFormat.JSON:
        return a_json(objeto)
    if formato is OutputFormat.CSV:
        if not isinstance(objeto, EstimateReport):
            raise ValueError("El formato csv sólo está disponible para estimate")
        return estimate_csv(objeto)
    if isinstance(objeto, AdjacencyCertificate):
        return certificado_tabla(objeto)
    if isinstance(objeto, ProjectionCertificate):
        return proyecciones_tabla(objeto)
    if isinstance(objeto, EstimateReport):
        return estimate_tabla(objeto)
    return tabla_generica(objeto if isinstance(objeto, dict) else objeto.to_dict())
