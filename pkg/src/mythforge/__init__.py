"""mythforge: tabular cultural-heritage collections to four-level
nanopublication knowledge graphs, with competency-question validation
and JSON exports for a faceted catalog and storytelling dashboard."""

from .rdf import Dataset, Iri, Literal, PrefixMap, Quad, mint_iri

__version__ = "0.1.0"

__all__ = ["Dataset", "Iri", "Literal", "PrefixMap", "Quad", "mint_iri", "__version__"]
