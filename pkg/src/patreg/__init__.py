"""Patent register analytics: ingest, index, and compute register indicators."""

from .ingest import DatasetManifest, IngestError, ValidationReport, load_dataset, validate_links, write_dataset
from .model import CohortSpec, Dataset, IndicatorKind, Params
from .store import IndexedStore, build_store, register_for_core

__version__ = "0.1.0"

__all__ = [
    "CohortSpec", "Dataset", "DatasetManifest", "IndexedStore", "IndicatorKind", "IngestError",
    "Params", "ValidationReport", "build_store", "load_dataset", "register_for_core",
    "validate_links", "write_dataset",
]
