"""Educational knowledge graph construction from lecture slides."""

from ._edukg import (
    EdukgError,
    average_precision_at_k,
    build,
    cosine,
    export_cypher,
    precision_at_k,
    reciprocal_rank,
    slide_texts,
    srs_estimate,
)

__all__ = [
    "EdukgError",
    "average_precision_at_k",
    "build",
    "cosine",
    "export_cypher",
    "precision_at_k",
    "reciprocal_rank",
    "slide_texts",
    "srs_estimate",
]
