"""Criterios de adyacencia: números lejanos, pares lejanos y compatibilidad de bases."""

from dyadic_atlas.criteria.adjacency import (
    AdjacencyCertificate,
    Overall,
    certify_projections,
    check_adjacency,
    project,
)
from dyadic_atlas.criteria.bases import base_compatible, incompatibility_witness
from dyadic_atlas.criteria.common import Verdict, VerdictKind, Witness
from dyadic_atlas.criteria.far import far_number, far_pair

__all__ = [
    "AdjacencyCertificate",
    "Overall",
    "Verdict",
    "VerdictKind",
    "Witness",
    "base_compatible",
    "certify_projections",
    "check_adjacency",
    "far_number",
    "far_pair",
    "incompatibility_witness",
    "project",
]
